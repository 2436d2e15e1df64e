//! Seeded random vectors for the property batteries.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::group::{GroupFunction, GroupTable};
use crate::linalg::CVec;

/// Complex number with real and imaginary parts uniform in [-1, 1).
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVec {
    CVec::from_fn(dim, |_, _| random_complex(rng))
}

pub fn random_function<R: Rng + ?Sized>(group: &Arc<GroupTable>, rng: &mut R) -> GroupFunction {
    let v = random_vector(group.order(), rng);
    GroupFunction::from_vector(group, &v).expect("matching order")
}

/// Random vector rescaled to the given squared norm.
pub fn random_vector_with_norm_sq<R: Rng + ?Sized>(dim: usize, norm_sq: f64, rng: &mut R) -> CVec {
    let v = random_vector(dim, rng);
    let n = v.norm();
    v * Complex64::new(norm_sq.sqrt() / n, 0.0)
}

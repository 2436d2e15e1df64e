//! Admissible vectors and idempotents built from a symbol `g` through the
//! polar decomposition `π_r(g) = VH = KV` and spectral calculus on `H`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_tol, Error, Result};
use crate::group::{GroupFunction, GroupTable};
use crate::hilbert_algebra::{conv_matrix, convolve, flat, is_selfadjoint_idempotent, regular_reps, Side};
use crate::linalg::{self, c, CMat, CVec, HermitianEigen, RANK_CUTOFF};
use crate::representations::{
    analysis_operator, check_admissible, check_idempotent_characterization, orbit_rank,
    AdmissibilityReport, IdempotentCharacterizationReport, UnitaryRep,
};
use crate::sampling::random_vector;

/// Default gap threshold relative to `‖H‖`.
pub const GAP_THRESHOLD: f64 = 1e-6;

/// Seed for the fallback seeds of [`irreducible_unique_idempotent`].
const FALLBACK_SEED: u64 = 0x5eed;

pub struct SpectralData {
    pub symbol: GroupFunction,
    pub a: CMat,
    pub h: CMat,
    pub k: CMat,
    pub v: CMat,
    pub eigen_h: HermitianEigen,
    pub eigen_k: HermitianEigen,
    /// Eigenvalues at or below this are exact zeros.
    pub zero_cutoff: f64,
    pub gap_threshold: f64,
    pub zero_isolated: bool,
    /// Smallest eigenvalue of `H` above `zero_cutoff`.
    pub spectral_gap: f64,
    /// `‖A − VH‖ / ‖A‖`.
    pub polar_residual_right: f64,
    /// `‖A − KV‖ / ‖A‖`.
    pub polar_residual_left: f64,
}

impl SpectralData {
    pub fn group(&self) -> &Arc<GroupTable> {
        self.symbol.group()
    }

    pub fn norm(&self) -> f64 {
        self.eigen_h.values.last().copied().unwrap_or(0.0)
    }

    /// Nonzero eigenvalues of `H`, ascending.
    pub fn nonzero_spectrum(&self) -> Vec<f64> {
        self.eigen_h
            .values
            .iter()
            .copied()
            .filter(|&x| x > self.zero_cutoff)
            .collect()
    }

    /// Dimension of `H_0 = span{λ(s)g}`.
    pub fn rank(&self) -> usize {
        self.nonzero_spectrum().len()
    }

    /// Orthonormal basis of `H_0`, the range of `A`.
    pub fn range_basis(&self) -> CMat {
        linalg::orthonormal_range(&self.a, RANK_CUTOFF)
    }

    /// `ψ(H)` by eigendecomposition, with `ψ` applied only to eigenvalues at
    /// or above the gap threshold.
    fn calculus_h(&self, psi: impl Fn(f64) -> f64) -> CMat {
        spectral_sum(&self.eigen_h, |x| if x >= self.gap_threshold { psi(x) } else { 0.0 })
    }

    /// `H^{⊖2}`: inverse square on eigenvalues above the gap threshold.
    pub fn pseudo_inverse_square(&self) -> CMat {
        self.calculus_h(|x| 1.0 / (x * x))
    }
}

fn spectral_sum(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> CMat {
    let n = eig.vectors.nrows();
    let mut out = CMat::zeros(n, n);
    for (j, &x) in eig.values.iter().enumerate() {
        let w = f(x);
        if w != 0.0 {
            let v = eig.vectors.column(j);
            out += v * v.adjoint() * c(w, 0.0);
        }
    }
    out
}

pub fn spectral_data(g: &GroupFunction) -> Result<SpectralData> {
    spectral_data_with_threshold(g, GAP_THRESHOLD)
}

/// As [`spectral_data`] with the gap threshold `rel_gap · ‖H‖`.
pub fn spectral_data_with_threshold(g: &GroupFunction, rel_gap: f64) -> Result<SpectralData> {
    check_tol(rel_gap)?;
    if g.values().iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroSymbol);
    }
    let a = conv_matrix(Side::Right, g);
    let svd = linalg::svd(&a);
    let smax = svd.singular_values[0];
    let zero_cutoff = RANK_CUTOFF * smax;
    let gap_threshold = rel_gap * smax;
    let sigma = CMat::from_diagonal(&CVec::from_iterator(
        svd.singular_values.len(),
        svd.singular_values.iter().map(|&x| c(x, 0.0)),
    ));
    let h = &svd.v * &sigma * svd.v.adjoint();
    let k = &svd.u * &sigma * svd.u.adjoint();
    let r = svd.singular_values.iter().filter(|&&x| x > zero_cutoff).count();
    let v = svd.u.columns(0, r) * svd.v.columns(0, r).adjoint();

    let a_norm = smax;
    let polar_residual_right = linalg::op_norm(&(&a - &v * &h)) / a_norm;
    let polar_residual_left = linalg::op_norm(&(&a - &k * &v)) / a_norm;

    let eigen_h = linalg::hermitian_eigen(&h);
    let eigen_k = linalg::hermitian_eigen(&k);
    let spectral_gap = eigen_h
        .values
        .iter()
        .copied()
        .filter(|&x| x > zero_cutoff)
        .fold(f64::INFINITY, f64::min);
    Ok(SpectralData {
        symbol: g.clone(),
        a,
        h,
        k,
        v,
        eigen_h,
        eigen_k,
        zero_cutoff,
        gap_threshold,
        zero_isolated: spectral_gap >= gap_threshold,
        spectral_gap,
        polar_residual_right,
        polar_residual_left,
    })
}

/// A finite union of closed intervals in `(0, ∞)`.
pub type SpectralWindow = [(f64, f64)];

/// Relative slack at window endpoints, so numerically split copies of a
/// repeated eigenvalue land on the same side.
pub const ENDPOINT_SLACK: f64 = 1e-9;

fn in_window(alpha: &SpectralWindow, x: f64, slack: f64) -> bool {
    alpha.iter().any(|&(lo, hi)| lo - slack <= x && x <= hi + slack)
}

pub struct WindowIdempotent {
    pub idempotent: GroupFunction,
    /// Eigenvalues of `H` that fall in the window.
    pub selected: Vec<f64>,
    pub flat_residual: f64,
    pub idempotency_residual: f64,
    /// `‖π_r(g_φ) − E_K(α)‖`.
    pub projection_residual: f64,
    pub certified: bool,
}

/// `g_φ = A φ(H) g♭` with `φ = χ_α / t²`, certified against the
/// eigenprojection `E_K(α)`.
pub fn spectral_window_idempotent(
    sd: &SpectralData,
    alpha: &SpectralWindow,
    tol: f64,
) -> Result<WindowIdempotent> {
    check_tol(tol)?;
    for &(lo, hi) in alpha {
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::WindowTouchesZero { lo, hi });
        }
    }
    let slack = ENDPOINT_SLACK * sd.norm();
    let selected: Vec<f64> = sd
        .nonzero_spectrum()
        .into_iter()
        .filter(|&x| in_window(alpha, x, slack))
        .collect();
    if selected.is_empty() {
        let lo = alpha.iter().map(|w| w.0).fold(f64::INFINITY, f64::min);
        let hi = alpha.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max);
        return Err(Error::EmptySpectralWindow { lo, hi });
    }
    let phi = spectral_sum(&sd.eigen_h, |x| {
        if x > sd.zero_cutoff && in_window(alpha, x, slack) {
            1.0 / (x * x)
        } else {
            0.0
        }
    });
    let values = &sd.a * phi * flat(&sd.symbol).to_vector();
    let e = GroupFunction::from_vector(sd.group(), &values)?;

    let flat_residual = e.distance(&flat(&e))?;
    let idempotency_residual = e.distance(&convolve(&e, &e)?)?;
    let target = spectral_sum(&sd.eigen_k, |x| {
        if x > sd.zero_cutoff && in_window(alpha, x, slack) {
            1.0
        } else {
            0.0
        }
    });
    let projection_residual = linalg::op_norm(&(conv_matrix(Side::Right, &e) - target));
    Ok(WindowIdempotent {
        idempotent: e,
        selected,
        flat_residual,
        idempotency_residual,
        projection_residual,
        certified: flat_residual.max(idempotency_residual).max(projection_residual) <= tol,
    })
}

pub struct ConstructionReport {
    pub g_adm: GroupFunction,
    /// Orthonormal basis of `H_0 = span{λ(s)g}`.
    pub h0_basis: CMat,
    pub h0_dim: usize,
    pub spectral_gap: f64,
    pub gap_threshold: f64,
    /// `‖g_adm − P_{H_0} g_adm‖`.
    pub membership_residual: f64,
    /// `‖π_r(g_adm) − P_{H_0}‖`.
    pub projection_residual: f64,
    pub admissibility: AdmissibilityReport,
    pub characterization: IdempotentCharacterizationReport,
    pub certified: bool,
}

/// `g_adm = A H^{⊖2} g♭`, certified as an admissible vector for `λ`
/// restricted to `H_0`.
pub fn construct_admissible(g: &GroupFunction, tol: f64) -> Result<ConstructionReport> {
    check_tol(tol)?;
    let sd = spectral_data(g)?;
    construct_from_spectral_data(&sd, tol)
}

pub fn construct_from_spectral_data(sd: &SpectralData, tol: f64) -> Result<ConstructionReport> {
    check_tol(tol)?;
    if !sd.zero_isolated {
        return Err(Error::ZeroNotIsolated {
            eigenvalue: sd.spectral_gap,
            threshold: sd.gap_threshold,
        });
    }
    let group = sd.group();
    let values = &sd.a * sd.pseudo_inverse_square() * flat(&sd.symbol).to_vector();
    let g_adm = GroupFunction::from_vector(group, &values)?;

    let q = sd.range_basis();
    let proj = linalg::projector(&q);
    let membership_residual = (&values - &proj * &values).norm();
    let projection_residual = linalg::op_norm(&(conv_matrix(Side::Right, &g_adm) - &proj));

    let restricted = UnitaryRep::restricted_regular(group, &q)?;
    let eta = q.adjoint() * &values;
    let op = analysis_operator(&restricted, &eta)?;
    let admissibility = check_admissible(&op, tol)?;
    let characterization = check_idempotent_characterization(&op, tol)?;
    // the restricted g_η is the same function as g_adm
    let certified = admissibility.admissible
        && characterization.holds
        && membership_residual <= tol
        && projection_residual <= tol
        && op.g_eta().distance(&g_adm)? <= tol;
    Ok(ConstructionReport {
        g_adm,
        h0_dim: q.ncols(),
        h0_basis: q,
        spectral_gap: sd.spectral_gap,
        gap_threshold: sd.gap_threshold,
        membership_residual,
        projection_residual,
        admissibility,
        characterization,
        certified,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SubspaceIdempotentReport {
    pub invariance_residual: f64,
    pub projection_axiom_residual: f64,
    /// `‖π_r(Pδ_e) − P‖`.
    pub projection_residual: f64,
    pub in_e_prime: bool,
    pub certified: bool,
}

/// `e = Pδ_e` for a λ-invariant orthogonal projection `P`.
pub fn idempotent_from_invariant_subspace(
    group: &Arc<GroupTable>,
    p: &CMat,
    tol: f64,
) -> Result<(GroupFunction, SubspaceIdempotentReport)> {
    check_tol(tol)?;
    let n = group.order();
    if p.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.nrows(),
        });
    }
    let projection_axiom_residual =
        linalg::op_norm(&(p * p - p)).max(linalg::op_norm(&(p - p.adjoint())));
    if projection_axiom_residual > tol {
        return Err(Error::NotProjection {
            residual: projection_axiom_residual,
        });
    }
    let invariance_residual = regular_reps(group, Side::Left)
        .iter()
        .map(|l| linalg::op_norm(&(p * l - l * p)))
        .fold(0.0, f64::max);
    if invariance_residual > tol {
        return Err(Error::NotInvariant {
            residual: invariance_residual,
        });
    }
    let e = GroupFunction::from_vector(group, &p.column(group.identity()).into_owned())?;
    let projection_residual = linalg::op_norm(&(conv_matrix(Side::Right, &e) - p));
    let in_e_prime = {
        let r = is_selfadjoint_idempotent(Side::Right, &e, tol)?;
        r.is_idempotent && r.is_projection
    };
    Ok((
        e,
        SubspaceIdempotentReport {
            invariance_residual,
            projection_axiom_residual,
            projection_residual,
            in_e_prime,
            certified: in_e_prime && projection_residual <= tol,
        },
    ))
}

pub struct UniqueIdempotent {
    pub idempotent: GroupFunction,
    pub commutant_dim: usize,
    /// `‖e₁ − e₂‖` for the two seeds.
    pub uniqueness_residual: f64,
    /// Seeds that had to be replaced by random vectors of `H_0`.
    pub random_seeds: usize,
    pub certified: bool,
}

/// The unique element of `H_0 ∩ E′` for an irreducible λ-invariant `H_0`
/// given by orthonormal columns.
pub fn irreducible_unique_idempotent(
    group: &Arc<GroupTable>,
    basis: &CMat,
    tol: f64,
) -> Result<UniqueIdempotent> {
    check_tol(tol)?;
    let r = basis.ncols();
    let ortho = linalg::max_abs(&(basis.adjoint() * basis - linalg::identity(r)));
    if basis.nrows() != group.order() || r == 0 || ortho > tol {
        return Err(Error::InvalidRepresentation(
            "H_0 must be given by nonempty orthonormal columns".into(),
        ));
    }
    let restricted = UnitaryRep::restricted_regular(group, basis)?;
    let commutant_dim = linalg::commutant_null_space(restricted.matrices(), RANK_CUTOFF).ncols();
    if commutant_dim != 1 {
        return Err(Error::Reducible { commutant_dim });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(FALLBACK_SEED);
    let mut random_seeds = 0;
    let mut results = Vec::with_capacity(2);
    for j in 0..2 {
        let mut coords = if j < r {
            CVec::from_fn(r, |i, _| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
        } else {
            random_seeds += 1;
            random_vector(r, &mut rng)
        };
        while orbit_rank(&restricted, &coords) < r {
            random_seeds += 1;
            coords = random_vector(r, &mut rng);
        }
        let seed = GroupFunction::from_vector(group, &(basis * coords))?;
        let report = construct_admissible(&seed, tol)?;
        let same_space = linalg::principal_angle_sin(&report.h0_basis, basis);
        results.push((report, same_space));
    }
    let uniqueness_residual = results[0].0.g_adm.distance(&results[1].0.g_adm)?;
    let certified = uniqueness_residual <= tol
        && results
            .iter()
            .all(|(rep, angle)| rep.certified && *angle <= tol);
    let (first, _) = results.swap_remove(0);
    Ok(UniqueIdempotent {
        idempotent: first.g_adm,
        commutant_dim,
        uniqueness_residual,
        random_seeds,
        certified,
    })
}

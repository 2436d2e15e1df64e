//! Checks against values computed by independent means: FFTs, character
//! formulas, Schur orthogonality and closed-form Gaussian integrals.

use std::f64::consts::PI;
use std::sync::Arc;

use gframe::affine::{affine_analysis, mexican_hat_amplitude, AffineGrid, SampledSignal};
use gframe::hilbert_algebra::conv_matrix;
use gframe::linalg::{c, max_abs, op_norm, orthonormal_range, projector, CMat, CVec, RANK_CUTOFF};
use gframe::representations::UnitaryRep;
use gframe::sampling::random_function;
use gframe::standard_form::center;
use gframe::synthesis::{
    construct_admissible, idempotent_from_invariant_subspace, irreducible_unique_idempotent,
    spectral_data, spectral_window_idempotent,
};
use gframe::{GroupFunction, GroupTable, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

fn dft(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

fn idft(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len() as f64;
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    buf.iter().map(|z| z / n).collect()
}

/// `χ_k(s) = e^{2πiks/n}/√n`.
fn character_vector(n: usize, k: usize) -> CVec {
    CVec::from_fn(n, |s, _| {
        Complex64::from_polar(1.0 / (n as f64).sqrt(), 2.0 * PI * (k * s) as f64 / n as f64)
    })
}

fn dft_projection(n: usize, ks: &[usize]) -> CMat {
    let mut p = CMat::zeros(n, n);
    for &k in ks {
        let v = character_vector(n, k);
        p += &v * v.adjoint();
    }
    p
}

/// Windows around chosen eigenvalues, each narrower than half the gap to
/// its neighbours.
fn windows_around(values: &[f64], chosen: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let min_gap = sorted.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let eps = (0.25 * min_gap).min(0.25 * sorted[0]);
    chosen.iter().map(|&x| (x - eps, x + eps)).collect()
}

#[test]
fn z12_windows_match_dft_eigenprojections() {
    let n = 12;
    let g = Arc::new(GroupTable::cyclic(n));
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for real in [false, true] {
        let mut symbol = random_function(&g, &mut rng);
        if real {
            symbol = symbol.map(|_, z| c(z.re, 0.0));
        }
        let hat = dft(symbol.values());
        let moduli: Vec<f64> = hat.iter().map(|z| z.norm()).collect();
        let sd = spectral_data(&symbol).unwrap();
        for _ in 0..200 {
            let chosen: Vec<f64> = moduli.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if chosen.is_empty() {
                continue;
            }
            let alpha = windows_around(&moduli, &chosen);
            let ks: Vec<usize> = (0..n)
                .filter(|&k| alpha.iter().any(|&(lo, hi)| lo <= moduli[k] && moduli[k] <= hi))
                .collect();
            let w = spectral_window_idempotent(&sd, &alpha, 1e-9).unwrap();
            let residual = op_norm(&(conv_matrix(Side::Right, &w.idempotent) - dft_projection(n, &ks)));
            assert!(residual <= 1e-9, "residual {residual} for k ∈ {ks:?}");
        }
    }
}

#[test]
fn polar_part_is_the_dft_phase_vector() {
    let g = Arc::new(GroupTable::cyclic(8));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let symbol = random_function(&g, &mut rng);
        let phases: Vec<Complex64> = dft(symbol.values()).iter().map(|z| z / z.norm()).collect();
        let oracle = CVec::from_vec(idft(&phases));
        let sd = spectral_data(&symbol).unwrap();
        let v_delta = sd.v.column(0).into_owned();
        assert!((v_delta - &oracle).norm() < 1e-10);

        // with full DFT support the range is everything and g_adm = δ_e
        let built = construct_admissible(&symbol, 1e-8).unwrap();
        assert!(built.certified);
        let delta = GroupFunction::delta(&g, 0).unwrap();
        assert!(built.g_adm.distance(&delta).unwrap() < 1e-10);
    }
}

#[test]
fn construction_on_partial_support_is_the_dft_indicator() {
    let n = 8;
    let g = Arc::new(GroupTable::cyclic(n));
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let support = [0usize, 3, 4, 6];
    let mut hat = vec![c(0.0, 0.0); n];
    for &k in &support {
        hat[k] = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
    }
    let symbol = GroupFunction::new(g.clone(), idft(&hat)).unwrap();
    let built = construct_admissible(&symbol, 1e-8).unwrap();
    assert!(built.certified);
    assert_eq!(built.h0_dim, support.len());
    let mut indicator = vec![c(0.0, 0.0); n];
    for &k in &support {
        indicator[k] = c(1.0, 0.0);
    }
    let oracle = GroupFunction::new(g, idft(&indicator)).unwrap();
    assert!(built.g_adm.distance(&oracle).unwrap() < 1e-10);
}

fn character(rep: &UnitaryRep) -> Vec<Complex64> {
    rep.matrices().iter().map(|m| m.trace()).collect()
}

/// Columns `s ↦ U(s)_{ij}` for all `i, j`, unnormalized.
fn coefficient_matrix(rep: &UnitaryRep, column: Option<usize>) -> CMat {
    let n = rep.group().order();
    let d = rep.dim();
    let js: Vec<usize> = column.map_or((0..d).collect(), |j| vec![j]);
    let mut cols = Vec::new();
    for i in 0..d {
        for &j in &js {
            cols.push(CVec::from_fn(n, |s, _| rep.matrix(s)[(i, j)]));
        }
    }
    gframe::linalg::from_columns(n, &cols)
}

#[test]
fn schur_orthogonality_for_s3_and_d4() {
    let s3 = Arc::new(GroupTable::symmetric(3));
    let d4 = Arc::new(GroupTable::dihedral(4));
    for irreps in [UnitaryRep::s3_irreps(&s3), UnitaryRep::d4_irreps(&d4)] {
        let order = irreps[0].group().order() as f64;
        let dims: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
        assert_eq!(dims as f64, order);
        for (a, ra) in irreps.iter().enumerate() {
            for (b, rb) in irreps.iter().enumerate() {
                let gram = coefficient_matrix(ra, None).adjoint() * coefficient_matrix(rb, None);
                let expected = if a == b {
                    CMat::identity(ra.dim() * ra.dim(), ra.dim() * ra.dim()) * c(order / ra.dim() as f64, 0.0)
                } else {
                    CMat::zeros(ra.dim() * ra.dim(), rb.dim() * rb.dim())
                };
                assert!(max_abs(&(gram - expected)) < 1e-12, "irreps {a} and {b}");
            }
        }
    }
}

#[test]
fn isotypic_idempotents_follow_the_character_formula() {
    let g = Arc::new(GroupTable::symmetric(3));
    let order = g.order() as f64;
    for rep in UnitaryRep::s3_irreps(&g) {
        let d = rep.dim() as f64;
        let q = orthonormal_range(&coefficient_matrix(&rep, None), RANK_CUTOFF);
        let (e, report) = idempotent_from_invariant_subspace(&g, &projector(&q), 1e-9).unwrap();
        assert!(report.certified);
        let chi = character(&rep);
        let oracle = GroupFunction::new(g.clone(), chi.iter().map(|z| z.conj() * (d / order)).collect()).unwrap();
        assert!(e.distance(&oracle).unwrap() < 1e-12);
    }
}

#[test]
fn irreducible_subspace_idempotent_is_a_diagonal_coefficient() {
    let g = Arc::new(GroupTable::symmetric(3));
    let rep = &UnitaryRep::s3_irreps(&g)[2];
    assert_eq!(rep.dim(), 2);
    let order = g.order() as f64;
    for j in 0..2 {
        let basis = orthonormal_range(&coefficient_matrix(rep, Some(j)), RANK_CUTOFF);
        assert_eq!(basis.ncols(), 2);
        let unique = irreducible_unique_idempotent(&g, &basis, 1e-9).unwrap();
        assert!(unique.certified);
        assert_eq!(unique.commutant_dim, 1);
        let oracle = GroupFunction::new(
            g.clone(),
            (0..g.order()).map(|s| rep.matrix(s)[(j, j)] * (2.0 / order)).collect(),
        )
        .unwrap();
        assert!(unique.idempotent.distance(&oracle).unwrap() < 1e-12);
    }
}

#[test]
fn center_dimension_is_the_class_count() {
    let groups = [
        GroupTable::cyclic(2),
        GroupTable::cyclic(6),
        GroupTable::symmetric(3),
        GroupTable::dihedral(4),
        GroupTable::dihedral(5),
    ];
    for (table, classes) in groups.iter().zip([2, 6, 3, 5, 4]) {
        assert_eq!(table.conjugacy_class_count(), classes);
        assert_eq!(center(table).dim(), classes);
    }
}

/// `(ψ|π(a,b)η)` for the unit Gaussian of width σ against the Mexican hat
/// of width s, by completing the square.
fn gaussian_hat_coefficient(sigma: f64, s: f64, a: f64, b: f64) -> f64 {
    let n = (PI * sigma * sigma).powf(-0.25);
    let amp = mexican_hat_amplitude(s);
    let t = a * s;
    let p = 1.0 / (sigma * sigma) + 1.0 / (t * t);
    let mu = -(b / (sigma * sigma)) / p;
    let integral = (2.0 * PI / p).sqrt()
        * (-b * b / (2.0 * (sigma * sigma + t * t))).exp()
        * (1.0 - (mu * mu + 1.0 / p) / (t * t));
    n * amp * integral / a.sqrt()
}

const STEP: f64 = 1.0 / 64.0;
const START: f64 = -12.0;
const LEN: usize = 1537;

#[test]
fn gaussian_coefficients_match_closed_form() {
    let (sigma, s) = (1.0, 0.5);
    let psi = SampledSignal::gaussian(sigma, START, STEP, LEN).unwrap();
    let eta = SampledSignal::mexican_hat(s, START, STEP, LEN).unwrap();
    let grid = AffineGrid::log_uniform(0.125, 8.0, 13, -4.0, 4.0, 17).unwrap();
    let coeffs = affine_analysis(&psi, &eta, &grid).unwrap();
    let mut worst: f64 = 0.0;
    for (_, _, a, b, re, im) in coeffs.rows() {
        let oracle = gaussian_hat_coefficient(sigma, s, a, b);
        worst = worst.max((re - oracle).abs()).max(im.abs());
    }
    assert!(worst < 1e-3, "worst coefficient error {worst}");
}

#[test]
fn shifting_the_signal_shifts_the_coefficients() {
    let psi = SampledSignal::gaussian(1.0, START, STEP, LEN).unwrap();
    let m = 32;
    let shifted = SampledSignal::new(psi.samples().to_vec(), START + m as f64 * STEP, STEP).unwrap();
    let eta = SampledSignal::mexican_hat(0.5, START, STEP, LEN).unwrap();
    // shift spacing 8 steps, so a shift of 32 steps moves 4 grid columns
    let grid = AffineGrid::log_uniform(0.0625, 4.0, 7, -4.0, 4.0, 65).unwrap();
    let base = affine_analysis(&psi, &eta, &grid).unwrap();
    let moved = affine_analysis(&shifted, &eta, &grid).unwrap();
    for j in 0..grid.scales().len() {
        for k in 0..grid.shifts().len() - 4 {
            let diff = (moved.get(j, k + 4) - base.get(j, k)).norm();
            assert!(diff < 1e-10, "scale {j} shift {k}: {diff}");
        }
    }
}

//! Dense complex linear-algebra helpers shared by every module.
//!
//! Everything here works on `nalgebra` dynamic matrices with `Complex64`
//! entries; SVDs and Hermitian eigendecompositions are delegated to `faer`.
//! Rank decisions always use a relative singular-value cutoff so the
//! callers can state their thresholds in one place.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Default relative singular-value cutoff for ranges, null spaces and ranks.
pub const RANK_CUTOFF: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Singular values in descending order together with the matching left and
/// right singular vectors (`u` is m×r, `v` is n×r, r = min(m, n)).
pub struct SortedSvd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

fn to_faer(m: &CMat) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn svd(m: &CMat) -> SortedSvd {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return SortedSvd {
            u: CMat::zeros(rows, 0),
            singular_values: Vec::new(),
            v: CMat::zeros(cols, 0),
        };
    }
    let decomposition = to_faer(m).svd().expect("svd converges");
    let (u, v) = (decomposition.U(), decomposition.V());
    let sv: Vec<f64> = decomposition.S().column_vector().iter().map(|z| z.re).collect();
    let r = rows.min(cols);
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));
    let su = CMat::from_fn(rows, r, |i, j| u[(i, order[j])]);
    let svv = CMat::from_fn(cols, r, |i, j| v[(i, order[j])]);
    let values = order.iter().map(|&k| sv[k]).collect();
    SortedSvd {
        u: su,
        singular_values: values,
        v: svv,
    }
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    svd(m).singular_values.first().copied().unwrap_or(0.0)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Number of singular values above `rel_cutoff · σ_max`.
pub fn numerical_rank(m: &CMat, rel_cutoff: f64) -> usize {
    let s = svd(m);
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.singular_values
        .iter()
        .filter(|&&x| x > rel_cutoff * smax)
        .count()
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn orthonormal_range(m: &CMat, rel_cutoff: f64) -> CMat {
    let s = svd(m);
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let r = s
        .singular_values
        .iter()
        .filter(|&&x| x > rel_cutoff * smax)
        .count();
    s.u.columns(0, r).into_owned()
}

/// Orthonormal basis of the null space of `m`, with singular values at or
/// below `rel_cutoff · σ_max` treated as zero.
pub fn null_space(m: &CMat, rel_cutoff: f64) -> CMat {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    // Pad wide systems so the right singular vectors span all of C^cols.
    let padded;
    let m = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    let s = svd(m);
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return identity(cols);
    }
    let keep: Vec<usize> = s
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &x)| x <= rel_cutoff * smax)
        .map(|(i, _)| i)
        .collect();
    let mut out = CMat::zeros(cols, keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &s.v.column(src));
    }
    out
}

/// Orthogonal projection onto the span of the orthonormal columns of `q`.
pub fn projector(q: &CMat) -> CMat {
    q * q.adjoint()
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal bases. Subspaces of different dimension are at angle π/2.
pub fn principal_angle_sin(q1: &CMat, q2: &CMat) -> f64 {
    if q1.ncols() != q2.ncols() {
        return 1.0;
    }
    if q1.ncols() == 0 {
        return 0.0;
    }
    let residual = q2 - q1 * (q1.adjoint() * q2);
    op_norm(&residual).min(1.0)
}

/// Largest cosine between the two subspaces, i.e. zero iff they are orthogonal.
pub fn overlap(q1: &CMat, q2: &CMat) -> f64 {
    if q1.ncols() == 0 || q2.ncols() == 0 {
        return 0.0;
    }
    op_norm(&(q1.adjoint() * q2))
}

/// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues and a
/// fixed phase convention: the first non-negligible coordinate of every
/// eigenvector is real and positive.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

pub fn hermitian_eigen(m: &CMat) -> HermitianEigen {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: CMat::zeros(0, 0),
        };
    }
    let sym = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = to_faer(&sym)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("eigendecomposition converges");
    let values: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let mut vectors = CMat::zeros(n, n);
    for j in 0..n {
        let mut col = CVec::from_fn(n, |i, _| eig.U()[(i, j)]);
        fix_phase(&mut col);
        vectors.set_column(j, &col);
    }
    HermitianEigen { values, vectors }
}

/// Rotate `v` so its first non-negligible coordinate is real and positive.
pub fn fix_phase(v: &mut CVec) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-8 * scale).copied() {
        let rot = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= rot);
    }
}

/// Build a matrix from column vectors of equal length.
pub fn from_columns(n: usize, cols: &[CVec]) -> CMat {
    let mut m = CMat::zeros(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

/// Hermitian and minimum eigenvalue of the Hermitian part.
pub fn psd_margin(m: &CMat) -> (f64, f64) {
    let herm_res = max_abs(&(m - m.adjoint()));
    let eig = hermitian_eigen(m);
    (herm_res, eig.values.first().copied().unwrap_or(0.0))
}

/// Basis of the commutant `{X : XM = MX for all M}` as column-stacked
/// vectors of length d² (null space of the stacked Kronecker system).
pub fn commutant_null_space(mats: &[CMat], rel_cutoff: f64) -> CMat {
    let Some(first) = mats.first() else {
        return CMat::zeros(0, 0);
    };
    let d = first.nrows();
    let eye = identity(d);
    let mut system = CMat::zeros(mats.len() * d * d, d * d);
    for (k, m) in mats.iter().enumerate() {
        // vec(MX − XM) = (I ⊗ M − Mᵀ ⊗ I) vec(X)
        let block = eye.kronecker(m) - m.transpose().kronecker(&eye);
        system.view_mut((k * d * d, 0), (d * d, d * d)).copy_from(&block);
    }
    null_space(&system, rel_cutoff)
}

/// Reshape a column-stacked vector of length d² into a d×d matrix.
pub fn unvec(v: &CVec, d: usize) -> CMat {
    CMat::from_column_slice(d, d, v.as_slice())
}

//! Unitary representations of finite groups and their analysis operators.
//!
//! For a window `η` the analysis operator is `[L_η ψ](s) = (ψ|U(s)η)`; it is
//! stored as an `n × d` matrix whose row `s` is the functional
//! `ψ ↦ (U(s)η)^* ψ`. The checks in this module verify the equivalent forms
//! of admissibility and the idempotent characterizations of `g_η = L_η η`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_tol, Error, Result};
use crate::group::{permutations, same_group, GroupFunction, GroupTable};
use crate::hilbert_algebra::{
    conv_matrix, convolve, flat, regular_reps, sharp, ModularPair, Side,
};
use crate::linalg::{self, c, CMat, CVec, RANK_CUTOFF};

/// Tolerance used when validating representation matrices.
pub const REP_TOL: f64 = 1e-10;

/// Default admissibility tolerance.
pub const ADMISSIBLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: Arc<GroupTable>,
    dim: usize,
    matrices: Vec<CMat>,
}

impl UnitaryRep {
    /// Validate unitarity, the homomorphism property and `U(e) = I`.
    pub fn new(group: Arc<GroupTable>, matrices: Vec<CMat>) -> Result<Self> {
        let n = group.order();
        if matrices.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrices.len(),
            });
        }
        let dim = matrices[0].nrows();
        if dim == 0 {
            return Err(Error::InvalidRepresentation("zero-dimensional".into()));
        }
        for (s, m) in matrices.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(Error::InvalidRepresentation(format!(
                    "matrix {s} has shape {:?}, expected ({dim}, {dim})",
                    m.shape()
                )));
            }
            let res = linalg::max_abs(&(m.adjoint() * m - linalg::identity(dim)));
            if res > REP_TOL {
                return Err(Error::InvalidRepresentation(format!(
                    "matrix {s} is not unitary (residual {res:.3e})"
                )));
            }
        }
        let res = linalg::max_abs(&(&matrices[group.identity()] - linalg::identity(dim)));
        if res > REP_TOL {
            return Err(Error::InvalidRepresentation(format!(
                "U(e) is not the identity (residual {res:.3e})"
            )));
        }
        for s in 0..n {
            for t in 0..n {
                let res = linalg::max_abs(&(&matrices[s] * &matrices[t] - &matrices[group.mul(s, t)]));
                if res > REP_TOL {
                    return Err(Error::InvalidRepresentation(format!(
                        "U({s})U({t}) != U({s}{t}) (residual {res:.3e})"
                    )));
                }
            }
        }
        Ok(Self {
            group,
            dim,
            matrices,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, s: usize) -> &CMat {
        &self.matrices[s]
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    /// Same group and the same matrices.
    pub fn same_as(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group)
            && self.dim == other.dim
            && self
                .matrices
                .iter()
                .zip(&other.matrices)
                .all(|(a, b)| linalg::max_abs(&(a - b)) <= REP_TOL)
    }

    /// Left regular representation on L²(G).
    pub fn regular(group: &Arc<GroupTable>) -> Self {
        Self::new(Arc::clone(group), regular_reps(group, Side::Left)).expect("λ is unitary")
    }

    /// One-dimensional representation with the given character values.
    pub fn character(group: &Arc<GroupTable>, values: &[Complex64]) -> Result<Self> {
        let matrices = values
            .iter()
            .map(|&z| CMat::from_element(1, 1, z))
            .collect();
        Self::new(Arc::clone(group), matrices)
    }

    pub fn trivial(group: &Arc<GroupTable>) -> Self {
        Self::character(group, &vec![c(1.0, 0.0); group.order()]).expect("trivial character")
    }

    /// Character `χ_k(s) = exp(2πiks/n)` of `Z_n` (elements indexed as in
    /// [`GroupTable::cyclic`]).
    pub fn cyclic_character(group: &Arc<GroupTable>, k: usize) -> Result<Self> {
        let n = group.order();
        let values: Vec<Complex64> = (0..n)
            .map(|s| Complex64::from_polar(1.0, 2.0 * PI * (k * s % n) as f64 / n as f64))
            .collect();
        Self::character(group, &values)
    }

    /// Sign representation of `S_k` (group built by [`GroupTable::symmetric`]).
    pub fn symmetric_sign(group: &Arc<GroupTable>, k: usize) -> Result<Self> {
        let values: Vec<Complex64> = permutations(k)
            .iter()
            .map(|p| c(parity(p), 0.0))
            .collect();
        Self::character(group, &values)
    }

    /// Standard (k−1)-dimensional representation of `S_k`: the permutation
    /// representation restricted to the sum-zero hyperplane.
    pub fn symmetric_standard(group: &Arc<GroupTable>, k: usize) -> Result<Self> {
        // orthonormal basis of the sum-zero hyperplane: Helmert vectors
        let mut basis = CMat::zeros(k, k - 1);
        for j in 1..k {
            let norm = ((j * (j + 1)) as f64).sqrt();
            for i in 0..j {
                basis[(i, j - 1)] = c(1.0 / norm, 0.0);
            }
            basis[(j, j - 1)] = c(-(j as f64) / norm, 0.0);
        }
        let matrices = permutations(k)
            .iter()
            .map(|p| {
                let mut perm = CMat::zeros(k, k);
                for (i, &pi) in p.iter().enumerate() {
                    perm[(pi, i)] = c(1.0, 0.0);
                }
                basis.adjoint() * perm * &basis
            })
            .collect();
        Self::new(Arc::clone(group), matrices)
    }

    /// Two-dimensional rotation/reflection representation of the dihedral
    /// group of order 2m ([`GroupTable::dihedral`] indexing).
    pub fn dihedral_standard(group: &Arc<GroupTable>, m: usize) -> Result<Self> {
        let matrices = (0..2 * m)
            .map(|x| {
                let (k, j) = (x % m, x / m);
                let th = 2.0 * PI * k as f64 / m as f64;
                let rot = CMat::from_row_slice(
                    2,
                    2,
                    &[c(th.cos(), 0.0), c(-th.sin(), 0.0), c(th.sin(), 0.0), c(th.cos(), 0.0)],
                );
                let refl = CMat::from_row_slice(
                    2,
                    2,
                    &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
                );
                if j == 0 {
                    rot
                } else {
                    rot * refl
                }
            })
            .collect();
        Self::new(Arc::clone(group), matrices)
    }

    /// One-dimensional character of the dihedral group with `r ↦ r_sign`,
    /// `s ↦ s_sign` (`r_sign = -1` requires even m).
    pub fn dihedral_character(group: &Arc<GroupTable>, m: usize, r_sign: f64, s_sign: f64) -> Result<Self> {
        let values: Vec<Complex64> = (0..2 * m)
            .map(|x| {
                let (k, j) = (x % m, x / m);
                c(r_sign.powi(k as i32) * s_sign.powi(j as i32), 0.0)
            })
            .collect();
        Self::character(group, &values)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let d = self.dim + other.dim;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                let mut m = CMat::zeros(d, d);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(b);
                m
            })
            .collect();
        Self::new(Arc::clone(&self.group), matrices)
    }

    /// `λ` restricted to the span of the orthonormal columns of `basis`,
    /// written in that basis. Fails if the span is not λ-invariant.
    pub fn restricted_regular(group: &Arc<GroupTable>, basis: &CMat) -> Result<Self> {
        let proj = linalg::projector(basis);
        let lam = regular_reps(group, Side::Left);
        let res = lam
            .iter()
            .map(|l| linalg::max_abs(&(&proj * l - l * &proj)))
            .fold(0.0, f64::max);
        if res > REP_TOL {
            return Err(Error::NotInvariant { residual: res });
        }
        let matrices = lam.iter().map(|l| basis.adjoint() * l * basis).collect();
        Self::new(Arc::clone(group), matrices)
    }

    /// The three irreducible representations of `S_3` (trivial, sign,
    /// standard) on the table from [`GroupTable::symmetric`].
    pub fn s3_irreps(group: &Arc<GroupTable>) -> Vec<Self> {
        vec![
            Self::trivial(group),
            Self::symmetric_sign(group, 3).expect("sign"),
            Self::symmetric_standard(group, 3).expect("standard"),
        ]
    }

    /// The five irreducible representations of `D_4`.
    pub fn d4_irreps(group: &Arc<GroupTable>) -> Vec<Self> {
        let mut out: Vec<Self> = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
            .iter()
            .map(|&(r, s)| Self::dihedral_character(group, 4, r, s).expect("character"))
            .collect();
        out.push(Self::dihedral_standard(group, 4).expect("standard"));
        out
    }

    /// The n characters of `Z_n`.
    pub fn cyclic_irreps(group: &Arc<GroupTable>) -> Vec<Self> {
        (0..group.order())
            .map(|k| Self::cyclic_character(group, k).expect("character"))
            .collect()
    }
}

fn parity(p: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Rank of the orbit `{U(s)η}`; equal to `dim` iff `η` is cyclic.
pub fn orbit_rank(rep: &UnitaryRep, eta: &CVec) -> usize {
    let cols: Vec<CVec> = rep.matrices.iter().map(|u| u * eta).collect();
    linalg::numerical_rank(&linalg::from_columns(rep.dim, &cols), RANK_CUTOFF)
}

/// The analysis operator `L_η` of a window.
#[derive(Debug, Clone)]
pub struct AnalysisOperator {
    rep: UnitaryRep,
    window: CVec,
    matrix: CMat,
}

pub fn analysis_operator(rep: &UnitaryRep, eta: &CVec) -> Result<AnalysisOperator> {
    if eta.len() != rep.dim {
        return Err(Error::DimensionMismatch {
            expected: rep.dim,
            found: eta.len(),
        });
    }
    if eta.norm() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let n = rep.group.order();
    let mut matrix = CMat::zeros(n, rep.dim);
    for s in 0..n {
        let orbit = rep.matrix(s) * eta;
        matrix.set_row(s, &orbit.adjoint());
    }
    Ok(AnalysisOperator {
        rep: rep.clone(),
        window: eta.clone(),
        matrix,
    })
}

impl AnalysisOperator {
    pub fn rep(&self) -> &UnitaryRep {
        &self.rep
    }

    pub fn window(&self) -> &CVec {
        &self.window
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.rep.group
    }

    pub fn apply(&self, psi: &CVec) -> GroupFunction {
        GroupFunction::from_vector(&self.rep.group, &(&self.matrix * psi)).expect("order")
    }

    /// `g_η = L_η η`, i.e. `g_η(s) = (η|U(s)η)`.
    pub fn g_eta(&self) -> GroupFunction {
        self.apply(&self.window)
    }

    fn weights(&self) -> CMat {
        let n = self.rep.group.order();
        CMat::from_diagonal(&CVec::from_fn(n, |s, _| c(self.rep.group.haar_weight(s), 0.0)))
    }

    /// `L_η*` with respect to the weighted inner product on L²(G).
    pub fn adjoint_matrix(&self) -> CMat {
        self.matrix.adjoint() * self.weights()
    }

    /// Orthonormal basis of the range `H_η = L_η H_π` (SVD, relative cutoff
    /// `1e-10 σ_max`).
    pub fn range_basis(&self) -> CMat {
        linalg::orthonormal_range(&self.matrix, RANK_CUTOFF)
    }

    /// `max_s ‖λ(s) L_η − L_η U(s)‖`.
    pub fn intertwining_residual(&self) -> f64 {
        regular_reps(&self.rep.group, Side::Left)
            .iter()
            .enumerate()
            .map(|(s, l)| linalg::max_abs(&(l * &self.matrix - &self.matrix * self.rep.matrix(s))))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    /// (a) `‖L_η*L_η − I‖`.
    pub operator_residual: f64,
    /// (b) `max |‖L_η ψ‖² − ‖ψ‖²|` over basis and polarization vectors.
    pub isometry_residual: f64,
    /// (c) resolution of the identity on all basis pairs, by direct summation.
    pub resolution_residual: f64,
    /// (d) range invariance, injectivity and admissibility of `g_η` for
    /// `λ` restricted to the range.
    pub range_residual: f64,
    pub verdicts: [bool; 4],
    pub agree: bool,
    pub admissible: bool,
    pub max_residual: f64,
    /// `(1/‖η‖²) Σ_s |(η|U(s)η)|²`.
    pub c_eta: f64,
    pub rank_of_range: usize,
    pub cyclic: bool,
}

pub fn check_admissible(op: &AnalysisOperator, tol: f64) -> Result<AdmissibilityReport> {
    check_tol(tol)?;
    let rep = &op.rep;
    let group = &rep.group;
    let n = group.order();
    let d = rep.dim;
    let eye = linalg::identity(d);

    // (a)
    let gram = op.adjoint_matrix() * &op.matrix;
    let operator_residual = linalg::op_norm(&(&gram - &eye));

    // (b) ‖Lψ‖ = ‖ψ‖ on basis vectors and the polarization vectors that pin
    // down the off-diagonal entries of L*L.
    let sq_norm = |psi: &CVec| op.apply(psi).norm_sq();
    let basis = |i: usize| CVec::from_fn(d, |k, _| if k == i { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let mut isometry_residual: f64 = 0.0;
    for i in 0..d {
        let ei = basis(i);
        isometry_residual = isometry_residual.max((sq_norm(&ei) - 1.0).abs());
        for j in i + 1..d {
            let ej = basis(j);
            for phase in [c(1.0, 0.0), c(0.0, 1.0)] {
                let v = (&ei + &ej * phase) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                isometry_residual = isometry_residual.max((sq_norm(&v) - 1.0).abs());
            }
        }
    }

    // (c) Σ_s (e_i|U(s)η)(U(s)η|e_j) = δ_ij, summed straight from the
    // representation matrices.
    let orbit: Vec<CVec> = (0..n).map(|s| rep.matrix(s) * &op.window).collect();
    let mut resolution_residual: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut acc = c(0.0, 0.0);
            for (s, v) in orbit.iter().enumerate() {
                acc += group.haar_weight(s) * v[i].conj() * v[j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            resolution_residual = resolution_residual.max((acc - target).norm());
        }
    }

    // (d)
    let q = op.range_basis();
    let rank_of_range = q.ncols();
    let proj = linalg::projector(&q);
    let invariance = regular_reps(group, Side::Left)
        .iter()
        .map(|l| linalg::op_norm(&(&proj * l - l * &proj)))
        .fold(0.0, f64::max);
    let g = op.g_eta();
    // L_{g_η} f = (f|λ(·)g_η) = f ∗ g_η♭ must be isometric on the range
    let b = conv_matrix(Side::Right, &flat(&g)) * &q;
    let restricted = linalg::op_norm(&(b.adjoint() * &b - linalg::identity(rank_of_range)));
    let injectivity = if rank_of_range == d { 0.0 } else { 1.0 };
    let range_residual = invariance.max(restricted).max(injectivity);

    let eta_sq = op.window.norm_squared();
    let c_eta = (0..n)
        .map(|s| group.haar_weight(s) * g.get(s).norm_sqr())
        .sum::<f64>()
        / eta_sq;

    let residuals = [operator_residual, isometry_residual, resolution_residual, range_residual];
    let verdicts = residuals.map(|r| r <= tol);
    let admissible = verdicts.iter().all(|&v| v);
    let agree = verdicts.iter().all(|&v| v == verdicts[0]);
    Ok(AdmissibilityReport {
        operator_residual,
        isometry_residual,
        resolution_residual,
        range_residual,
        verdicts,
        agree,
        admissible,
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        c_eta,
        rank_of_range,
        cyclic: orbit_rank(rep, &op.window) == d,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IdempotentCharacterizationReport {
    /// `‖g_η − g_η♭‖`.
    pub flat_residual: f64,
    /// `‖g_η − g_η ∗ g_η‖`.
    pub idempotency_residual: f64,
    /// `‖g_η − g_η ∗ g_η♭‖`.
    pub factorization_residual: f64,
    /// `‖π_r(g_η) − P_{H_η}‖`.
    pub projection_residual: f64,
    /// `max ‖f − f ∗ g_η♭‖` over an orthonormal basis of `H_η`.
    pub reproducing_residual: f64,
    /// `max ‖f ∗ g_η♭‖` over an orthonormal basis of `H_η^⊥`.
    pub annihilation_residual: f64,
    pub rank_of_range: usize,
    pub holds: bool,
    pub failures: Vec<String>,
}

fn collect_failures(pairs: &[(&str, f64)], tol: f64) -> Vec<String> {
    pairs
        .iter()
        .filter(|(_, r)| !(*r <= tol))
        .map(|(name, _)| (*name).to_string())
        .collect()
}

fn columns(m: &CMat) -> Vec<CVec> {
    (0..m.ncols()).map(|j| m.column(j).into_owned()).collect()
}

pub fn check_idempotent_characterization(
    op: &AnalysisOperator,
    tol: f64,
) -> Result<IdempotentCharacterizationReport> {
    check_tol(tol)?;
    let group = op.group();
    let g = op.g_eta();
    let g_flat = flat(&g);
    let flat_residual = g.distance(&g_flat)?;
    let idempotency_residual = g.distance(&convolve(&g, &g)?)?;
    let factorization_residual = g.distance(&convolve(&g, &g_flat)?)?;

    let q = op.range_basis();
    let proj = linalg::projector(&q);
    let projection_residual = linalg::op_norm(&(conv_matrix(Side::Right, &g) - &proj));

    let complement = linalg::null_space(&q.adjoint(), RANK_CUTOFF);
    let mut reproducing_residual: f64 = 0.0;
    for col in columns(&q) {
        let f = GroupFunction::from_vector(group, &col)?;
        reproducing_residual = reproducing_residual.max(f.distance(&convolve(&f, &g_flat)?)?);
    }
    let mut annihilation_residual: f64 = 0.0;
    for col in columns(&complement) {
        let f = GroupFunction::from_vector(group, &col)?;
        annihilation_residual = annihilation_residual.max(convolve(&f, &g_flat)?.norm());
    }
    let failures = collect_failures(
        &[
            ("flat", flat_residual),
            ("idempotency", idempotency_residual),
            ("factorization", factorization_residual),
            ("projection", projection_residual),
            ("reproducing", reproducing_residual),
            ("annihilation", annihilation_residual),
        ],
        tol,
    );
    Ok(IdempotentCharacterizationReport {
        flat_residual,
        idempotency_residual,
        factorization_residual,
        projection_residual,
        reproducing_residual,
        annihilation_residual,
        rank_of_range: q.ncols(),
        holds: failures.is_empty(),
        failures,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DualCharacterizationReport {
    /// `‖Jg_η − (Jg_η)♯‖`.
    pub sharp_residual: f64,
    /// `‖Jg_η − Jg_η ∗ Jg_η‖`.
    pub idempotency_residual: f64,
    /// `‖Jg_η − (Jg_η)♯ ∗ Jg_η‖`.
    pub factorization_residual: f64,
    /// `‖π_l(Jg_η) − P_{JH_η}‖`.
    pub projection_residual: f64,
    /// `max ‖Jf − Jg_η ∗ Jf‖` over an orthonormal basis of `H_η`.
    pub reproducing_residual: f64,
    /// `max ‖Jg_η ∗ Jf‖` over an orthonormal basis of `H_η^⊥`.
    pub annihilation_residual: f64,
    pub rank_of_range: usize,
    pub holds: bool,
    pub failures: Vec<String>,
}

pub fn check_dual_characterization(
    op: &AnalysisOperator,
    tol: f64,
) -> Result<DualCharacterizationReport> {
    check_tol(tol)?;
    let group = op.group();
    let modular = ModularPair::new(group);
    let jg = modular.apply_j(&op.g_eta());
    let jg_sharp = sharp(&jg);
    let sharp_residual = jg.distance(&jg_sharp)?;
    let idempotency_residual = jg.distance(&convolve(&jg, &jg)?)?;
    let factorization_residual = jg.distance(&convolve(&jg_sharp, &jg)?)?;

    let q = op.range_basis();
    let jq: Vec<CVec> = columns(&q)
        .iter()
        .map(|col| modular.conjugation.apply_vec(col))
        .collect();
    let jq = linalg::from_columns(group.order(), &jq);
    let projection_residual =
        linalg::op_norm(&(conv_matrix(Side::Left, &jg) - linalg::projector(&jq)));

    let mut reproducing_residual: f64 = 0.0;
    for col in columns(&jq) {
        let jf = GroupFunction::from_vector(group, &col)?;
        reproducing_residual = reproducing_residual.max(jf.distance(&convolve(&jg, &jf)?)?);
    }
    let complement = linalg::null_space(&q.adjoint(), RANK_CUTOFF);
    let mut annihilation_residual: f64 = 0.0;
    for col in columns(&complement) {
        let jf = GroupFunction::from_vector(group, &modular.conjugation.apply_vec(&col))?;
        annihilation_residual = annihilation_residual.max(convolve(&jg, &jf)?.norm());
    }
    let failures = collect_failures(
        &[
            ("sharp", sharp_residual),
            ("idempotency", idempotency_residual),
            ("factorization", factorization_residual),
            ("projection", projection_residual),
            ("reproducing", reproducing_residual),
            ("annihilation", annihilation_residual),
        ],
        tol,
    );
    Ok(DualCharacterizationReport {
        sharp_residual,
        idempotency_residual,
        factorization_residual,
        projection_residual,
        reproducing_residual,
        annihilation_residual,
        rank_of_range: q.ncols(),
        holds: failures.is_empty(),
        failures,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoWindowReport {
    /// `‖g_η − ξ_η♭ ∗ ξ_η‖` with `ξ_η = L_η ξ`.
    pub factorization_residual: f64,
    pub factorization_holds: bool,
    pub xi_admissible: bool,
    /// Both directions of the equivalence agree on this instance.
    pub consistent: bool,
    /// `‖ξ_η − ξ_η♭‖`.
    pub xi_eta_flat_residual: f64,
    /// When `ξ` is admissible and `ξ_η = ξ_η♭`: `‖g_η − g_ξ‖`.
    pub coefficient_residual: Option<f64>,
    /// When `ξ` is admissible and `ξ_η = ξ_η♭`: `‖P_{H_η} − P_{H_ξ}‖`.
    pub range_residual: Option<f64>,
}

/// Analyze the window of `op2` through `op1` and test the factorization
/// criterion for admissibility of the second window.
pub fn compare_two_windows(
    op1: &AnalysisOperator,
    op2: &AnalysisOperator,
    tol: f64,
) -> Result<TwoWindowReport> {
    check_tol(tol)?;
    if !op1.rep.same_as(&op2.rep) {
        return Err(Error::InvalidRepresentation(
            "the two windows must belong to the same representation".into(),
        ));
    }
    let first = check_admissible(op1, tol)?;
    if !first.admissible {
        return Err(Error::NotAdmissible {
            residual: first.max_residual,
        });
    }
    let g_eta = op1.g_eta();
    let xi_eta = op1.apply(&op2.window);
    let xi_eta_flat = flat(&xi_eta);
    let factorization_residual = g_eta.distance(&convolve(&xi_eta_flat, &xi_eta)?)?;
    let factorization_holds = factorization_residual <= tol;
    let xi_admissible = check_admissible(op2, tol)?.admissible;
    let xi_eta_flat_residual = xi_eta.distance(&xi_eta_flat)?;
    let (coefficient_residual, range_residual) =
        if xi_admissible && xi_eta_flat_residual <= tol {
            let coeff = g_eta.distance(&op2.g_eta())?;
            let p1 = linalg::projector(&op1.range_basis());
            let p2 = linalg::projector(&op2.range_basis());
            (Some(coeff), Some(linalg::op_norm(&(p1 - p2))))
        } else {
            (None, None)
        };
    Ok(TwoWindowReport {
        factorization_residual,
        factorization_holds,
        xi_admissible,
        consistent: xi_admissible == factorization_holds,
        xi_eta_flat_residual,
        coefficient_residual,
        range_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::random_vector_with_norm_sq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s3() -> Arc<GroupTable> {
        Arc::new(GroupTable::symmetric(3))
    }

    fn delta_e(n: usize) -> CVec {
        CVec::from_fn(n, |i, _| if i == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn catalog_reps_validate() {
        let g = s3();
        assert_eq!(UnitaryRep::s3_irreps(&g).len(), 3);
        let d4 = Arc::new(GroupTable::dihedral(4));
        let dims: Vec<usize> = UnitaryRep::d4_irreps(&d4).iter().map(|r| r.dim()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1, 2]);
        assert_eq!(UnitaryRep::cyclic_irreps(&Arc::new(GroupTable::cyclic(6))).len(), 6);
    }

    #[test]
    fn bad_matrices_are_rejected() {
        let g = Arc::new(GroupTable::cyclic(2));
        let err = UnitaryRep::character(&g, &[c(1.0, 0.0), c(2.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidRepresentation(_)));
        // unitary but not a homomorphism
        let err = UnitaryRep::character(&g, &[c(1.0, 0.0), c(0.0, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidRepresentation(_)));
    }

    #[test]
    fn regular_rep_delta_window_is_identity() {
        for n in [2, 4, 5] {
            let g = Arc::new(GroupTable::cyclic(n));
            let op = analysis_operator(&UnitaryRep::regular(&g), &delta_e(n)).unwrap();
            assert_eq!(op.matrix(), &linalg::identity(n));
            let r = check_admissible(&op, ADMISSIBLE_TOL).unwrap();
            assert!(r.admissible && r.agree);
            assert!((r.c_eta - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn trivial_group() {
        let g = Arc::new(GroupTable::cyclic(1));
        let op = analysis_operator(&UnitaryRep::trivial(&g), &delta_e(1)).unwrap();
        assert_eq!(op.matrix(), &linalg::identity(1));
    }

    #[test]
    fn zero_window_is_an_error() {
        let g = Arc::new(GroupTable::cyclic(2));
        let err = analysis_operator(&UnitaryRep::regular(&g), &CVec::zeros(2)).unwrap_err();
        assert_eq!(err, Error::ZeroWindow);
    }

    #[test]
    fn s3_standard_window() {
        let g = s3();
        let rep = UnitaryRep::symmetric_standard(&g, 3).unwrap();
        let eta = CVec::from_vec(vec![c((1.0f64 / 3.0).sqrt(), 0.0), c(0.0, 0.0)]);
        let op = analysis_operator(&rep, &eta).unwrap();
        assert_eq!(op.matrix().shape(), (6, 2));
        let gram = op.adjoint_matrix() * op.matrix();
        assert!(linalg::max_abs(&(gram - linalg::identity(2))) < 1e-10);
        assert!(op.intertwining_residual() < 1e-12);
    }

    #[test]
    fn z4_character_windows() {
        let g = Arc::new(GroupTable::cyclic(4));
        let rep = UnitaryRep::cyclic_character(&g, 1).unwrap();
        let half = analysis_operator(&rep, &CVec::from_element(1, c(0.5, 0.0))).unwrap();
        let r = check_admissible(&half, ADMISSIBLE_TOL).unwrap();
        assert!(r.admissible && r.agree);
        let one = analysis_operator(&rep, &CVec::from_element(1, c(1.0, 0.0))).unwrap();
        let r = check_admissible(&one, ADMISSIBLE_TOL).unwrap();
        assert!(!r.admissible && r.agree);
        assert!((r.c_eta - 4.0).abs() < 1e-13);
    }

    #[test]
    fn rows_are_orbit_functionals() {
        let g = s3();
        let rep = UnitaryRep::symmetric_standard(&g, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let eta = random_vector_with_norm_sq(2, 0.7, &mut rng);
        let op = analysis_operator(&rep, &eta).unwrap();
        for i in 0..2 {
            let psi = CVec::from_fn(2, |k, _| if k == i { c(1.0, 0.0) } else { c(0.0, 0.0) });
            let lpsi = op.apply(&psi);
            for s in 0..6 {
                let expected = (rep.matrix(s) * &eta).dotc(&psi);
                assert!((lpsi.get(s) - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn idempotent_characterization_s3() {
        let g = s3();
        let rep = UnitaryRep::symmetric_standard(&g, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let eta = random_vector_with_norm_sq(2, 1.0 / 3.0, &mut rng);
        let op = analysis_operator(&rep, &eta).unwrap();
        let r = check_idempotent_characterization(&op, ADMISSIBLE_TOL).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.rank_of_range, 2);
        let d = check_dual_characterization(&op, ADMISSIBLE_TOL).unwrap();
        assert!(d.holds, "{d:?}");

        let bad = random_vector_with_norm_sq(2, 0.9, &mut rng);
        let op = analysis_operator(&rep, &bad).unwrap();
        let r = check_idempotent_characterization(&op, ADMISSIBLE_TOL).unwrap();
        assert!(!r.holds && r.idempotency_residual > ADMISSIBLE_TOL);
        assert!(r.failures.contains(&"idempotency".to_string()));
    }

    #[test]
    fn two_windows() {
        let g = s3();
        let rep = UnitaryRep::symmetric_standard(&g, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let eta = random_vector_with_norm_sq(2, 1.0 / 3.0, &mut rng);
        let xi = random_vector_with_norm_sq(2, 1.0 / 3.0, &mut rng);
        let op1 = analysis_operator(&rep, &eta).unwrap();

        let same = compare_two_windows(&op1, &op1, ADMISSIBLE_TOL).unwrap();
        assert!(same.factorization_holds && same.consistent);
        assert!(same.coefficient_residual.unwrap() < 1e-12);

        let op2 = analysis_operator(&rep, &xi).unwrap();
        let r = compare_two_windows(&op1, &op2, ADMISSIBLE_TOL).unwrap();
        assert!(r.xi_admissible && r.factorization_residual < 1e-10 && r.consistent);

        let doubled = analysis_operator(&rep, &(&eta * c(2.0, 0.0))).unwrap();
        let r = compare_two_windows(&op1, &doubled, ADMISSIBLE_TOL).unwrap();
        assert!(!r.xi_admissible && !r.factorization_holds && r.consistent);
        let g_norm = op1.g_eta().norm();
        assert!((r.factorization_residual - 3.0 * g_norm).abs() < 1e-12);

        assert!(matches!(
            compare_two_windows(&doubled, &op1, ADMISSIBLE_TOL),
            Err(Error::NotAdmissible { .. })
        ));
    }
}

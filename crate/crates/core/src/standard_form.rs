//! Finite-dimensional von Neumann algebras around an admissible vector: group
//! algebras, commutants and centers, the central subspace `Ĥ_η`, and the
//! standard-form axioms on the reduced space.
//!
//! Cone statements are checked on seeded samples `h ∗ h♭` with `h` projected
//! into the relevant subspace. A sampled check is evidence, not a proof.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_tol, Error, Result};
use crate::group::{inner_product, same_group, GroupFunction, GroupTable};
use crate::hilbert_algebra::{
    cone_membership, conv_matrix, convolve, flat, regular_reps, AntilinearMap, ModularPair, Side,
};
use crate::linalg::{self, c, CMat, CVec, RANK_CUTOFF};
use crate::representations::{check_admissible, AnalysisOperator};
use crate::sampling::{random_complex, random_function};

/// Number of cone samples per check.
pub const CONE_SAMPLES: usize = 50;

/// Default seed for cone and algebra sampling.
pub const DEFAULT_SEED: u64 = 7;

/// Largest principal-angle sine accepted as span equality.
pub const SPAN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    LeftGroup,
    RightGroup,
    Commutant,
    Center,
    Reduced,
    Generated,
}

/// A matrix *-algebra given by a Hilbert–Schmidt orthonormal basis.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    pub ambient_dim: usize,
    pub basis: Vec<CMat>,
    pub kind: AlgebraKind,
    /// Condition number of the spanning set restricted to its numerical span.
    pub gram_condition: f64,
}

fn vectorize(mats: &[CMat], n: usize) -> CMat {
    let mut out = CMat::zeros(n * n, mats.len());
    for (j, m) in mats.iter().enumerate() {
        out.set_column(j, &CVec::from_column_slice(m.as_slice()));
    }
    out
}

impl AlgebraBasis {
    /// HS-orthonormal basis of the span of `mats`.
    pub fn from_spanning(ambient_dim: usize, mats: &[CMat], kind: AlgebraKind) -> Self {
        let stacked = vectorize(mats, ambient_dim);
        let sv = linalg::svd(&stacked).singular_values;
        let smax = sv.first().copied().unwrap_or(0.0);
        let kept: Vec<f64> = sv.into_iter().filter(|&x| x > RANK_CUTOFF * smax).collect();
        let gram_condition = match (kept.first(), kept.last()) {
            (Some(hi), Some(lo)) => (hi / lo).powi(2),
            _ => 1.0,
        };
        let q = linalg::orthonormal_range(&stacked, RANK_CUTOFF);
        Self::from_orthonormal(ambient_dim, &q, kind, gram_condition)
    }

    fn from_orthonormal(ambient_dim: usize, q: &CMat, kind: AlgebraKind, gram_condition: f64) -> Self {
        let basis = (0..q.ncols())
            .map(|j| linalg::unvec(&q.column(j).into_owned(), ambient_dim))
            .collect();
        Self {
            ambient_dim,
            basis,
            kind,
            gram_condition,
        }
    }

    /// `span{λ(s)}`.
    pub fn left_group(group: &GroupTable) -> Self {
        Self::from_spanning(group.order(), &regular_reps(group, Side::Left), AlgebraKind::LeftGroup)
    }

    /// `span{ρ(s)}`.
    pub fn right_group(group: &GroupTable) -> Self {
        Self::from_spanning(group.order(), &regular_reps(group, Side::Right), AlgebraKind::RightGroup)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis as orthonormal columns of length n².
    pub fn vectorized(&self) -> CMat {
        vectorize(&self.basis, self.ambient_dim)
    }

    /// Distance from `m` to the span, relative to `‖m‖_HS`.
    pub fn membership_residual(&self, m: &CMat) -> f64 {
        let v = CVec::from_column_slice(m.as_slice());
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let q = self.vectorized();
        (&v - &q * (q.adjoint() * &v)).norm() / norm
    }

    /// Largest relative distance of a product or adjoint of basis elements
    /// from the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            worst = worst.max(self.membership_residual(&a.adjoint()));
            for b in &self.basis {
                worst = worst.max(self.membership_residual(&(a * b)));
            }
        }
        worst
    }

    /// Sine of the largest principal angle between the two spans.
    pub fn span_distance(&self, other: &Self) -> f64 {
        linalg::principal_angle_sin(&self.vectorized(), &other.vectorized())
    }

    /// Basis of `span(self) ∩ span(other)` by a joint solve.
    pub fn intersection(&self, other: &Self, kind: AlgebraKind) -> Self {
        let (qa, qb) = (self.vectorized(), other.vectorized());
        let mut joint = CMat::zeros(qa.nrows(), qa.ncols() + qb.ncols());
        joint.view_mut((0, 0), qa.shape()).copy_from(&qa);
        joint.view_mut((0, qa.ncols()), qb.shape()).copy_from(&(-&qb));
        let ns = linalg::null_space(&joint, RANK_CUTOFF);
        let coeffs = ns.rows(0, qa.ncols()).into_owned();
        let q = linalg::orthonormal_range(&(qa * coeffs), RANK_CUTOFF);
        Self::from_orthonormal(self.ambient_dim, &q, kind, 1.0)
    }
}

/// `{X : XB = BX for every basis element B}`.
pub fn commutant(algebra: &AlgebraBasis) -> AlgebraBasis {
    let q = linalg::commutant_null_space(&algebra.basis, RANK_CUTOFF);
    AlgebraBasis::from_orthonormal(algebra.ambient_dim, &q, AlgebraKind::Commutant, 1.0)
}

/// `L_G ∩ R_G`.
pub fn center(group: &GroupTable) -> AlgebraBasis {
    AlgebraBasis::left_group(group).intersection(&AlgebraBasis::right_group(group), AlgebraKind::Center)
}

/// Unital *-algebra generated by `mats`, by repeated products until the span
/// stops growing.
pub fn generated_algebra(ambient_dim: usize, mats: &[CMat]) -> AlgebraBasis {
    let mut spanning: Vec<CMat> = vec![linalg::identity(ambient_dim)];
    spanning.extend(mats.iter().cloned());
    spanning.extend(mats.iter().map(|m| m.adjoint()));
    let mut current = AlgebraBasis::from_spanning(ambient_dim, &spanning, AlgebraKind::Generated);
    loop {
        let mut next = current.basis.clone();
        for a in &current.basis {
            for b in &current.basis {
                next.push(a * b);
            }
        }
        let grown = AlgebraBasis::from_spanning(ambient_dim, &next, AlgebraKind::Generated);
        if grown.dim() == current.dim() {
            return current;
        }
        current = grown;
    }
}

/// `Ĥ_η` together with the vector `Δ^{-1/4}g_η`.
#[derive(Debug, Clone)]
pub struct CentralSubspace {
    pub window_symbol: GroupFunction,
    pub vector: GroupFunction,
    /// Orthonormal basis of the span of `λ(s)ρ(t)` applied to the vector.
    pub basis: CMat,
    pub projection: CMat,
    pub diagnostics: CentralDiagnostics,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralDiagnostics {
    /// `max(‖Δ^{-1/4}g − Δ^{1/4}Jg‖, ‖Δ^{-1/4}g − JΔ^{-1/4}g‖)`.
    pub vector_identity_residual: f64,
    /// Principal-angle sine between the left-translate span and `Ĥ_η`.
    pub left_span_distance: f64,
    /// Principal-angle sine between the right-translate span and `Ĥ_η`.
    pub right_span_distance: f64,
    pub left_span_dim: usize,
    pub right_span_dim: usize,
    /// `max_s` of `‖[P, λ(s)]‖` and `‖[P, ρ(s)]‖`.
    pub centrality_residual: f64,
    pub g_in_p_flat: bool,
    pub jg_in_p_sharp: bool,
    pub vector_in_p: bool,
}

fn orbit_span(mats: &[CMat], v: &CVec) -> CMat {
    let cols: Vec<CVec> = mats.iter().map(|m| m * v).collect();
    linalg::orthonormal_range(&linalg::from_columns(v.len(), &cols), RANK_CUTOFF)
}

pub fn central_vector(op: &AnalysisOperator, tol: f64) -> Result<CentralSubspace> {
    check_tol(tol)?;
    let adm = check_admissible(op, tol)?;
    if !adm.admissible {
        return Err(Error::NotAdmissible {
            residual: adm.max_residual,
        });
    }
    central_subspace_of(&op.g_eta(), tol)
}

/// Build `Ĥ` for an arbitrary symbol; [`central_vector`] is the checked entry.
pub fn central_subspace_of(g: &GroupFunction, tol: f64) -> Result<CentralSubspace> {
    check_tol(tol)?;
    let group = g.group();
    let modular = ModularPair::new(group);
    let vector = modular.apply_power(g, -0.25);
    let jg = modular.apply_j(g);
    let alt1 = modular.apply_power(&jg, 0.25);
    let alt2 = modular.apply_j(&vector);
    let vector_identity_residual = vector.distance(&alt1)?.max(vector.distance(&alt2)?);

    let v = vector.to_vector();
    let lam = regular_reps(group, Side::Left);
    let rho = regular_reps(group, Side::Right);
    let two_sided: Vec<CMat> = lam
        .iter()
        .flat_map(|l| rho.iter().map(move |r| l * r))
        .collect();
    let basis = orbit_span(&two_sided, &v);
    let projection = linalg::projector(&basis);
    let left = orbit_span(&lam, &v);
    let right = orbit_span(&rho, &v);

    let centrality_residual = lam
        .iter()
        .chain(rho.iter())
        .map(|m| linalg::op_norm(&(&projection * m - m * &projection)))
        .fold(0.0, f64::max);
    let diagnostics = CentralDiagnostics {
        vector_identity_residual,
        left_span_distance: linalg::principal_angle_sin(&left, &basis),
        right_span_distance: linalg::principal_angle_sin(&right, &basis),
        left_span_dim: left.ncols(),
        right_span_dim: right.ncols(),
        centrality_residual,
        g_in_p_flat: cone_membership(g, tol)?.in_p_flat,
        jg_in_p_sharp: cone_membership(&jg, tol)?.in_p_sharp,
        vector_in_p: cone_membership(&vector, tol)?.in_p,
    };
    Ok(CentralSubspace {
        window_symbol: g.clone(),
        vector,
        basis,
        projection,
        diagnostics,
    })
}

impl CentralSubspace {
    pub fn group(&self) -> &Arc<GroupTable> {
        self.vector.group()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `Q* X Q` for an operator on L²(G).
    pub fn reduce(&self, x: &CMat) -> CMat {
        self.basis.adjoint() * x * &self.basis
    }

    /// `L̂_η`, spanned by the restrictions of `λ(s)`.
    pub fn reduced_left(&self) -> AlgebraBasis {
        let mats: Vec<CMat> = regular_reps(self.group(), Side::Left)
            .iter()
            .map(|m| self.reduce(m))
            .collect();
        AlgebraBasis::from_spanning(self.dim(), &mats, AlgebraKind::Reduced)
    }

    /// `R̂_η`, spanned by the restrictions of `ρ(s)`.
    pub fn reduced_right(&self) -> AlgebraBasis {
        let mats: Vec<CMat> = regular_reps(self.group(), Side::Right)
            .iter()
            .map(|m| self.reduce(m))
            .collect();
        AlgebraBasis::from_spanning(self.dim(), &mats, AlgebraKind::Reduced)
    }

    /// Seeded samples of `P̂_η`: `Δ^{-1/4}(h ∗ h♭)` with `h ∈ Ĥ_η`.
    pub fn cone_samples(&self, count: usize, seed: u64) -> Vec<GroupFunction> {
        let group = self.group();
        let modular = ModularPair::new(group);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let r = random_function(group, &mut rng).to_vector();
                let h = GroupFunction::from_vector(group, &(&self.projection * r)).expect("order");
                let f = convolve(&h, &flat(&h)).expect("same group");
                modular.apply_power(&f, -0.25)
            })
            .collect()
    }

    fn subspace_residual(&self, f: &GroupFunction) -> f64 {
        let v = f.to_vector();
        (&v - &self.projection * &v).norm()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CyclicSeparatingReport {
    pub dim: usize,
    pub left_rank: usize,
    pub right_rank: usize,
    /// `σ_dim / σ_max` of the left orbit matrix in `Ĥ` coordinates.
    pub left_margin: f64,
    pub right_margin: f64,
    pub cyclic_left: bool,
    pub cyclic_right: bool,
    /// Separating for `L̂` is cyclic for `R̂`.
    pub separating_left: bool,
    pub separating_right: bool,
    pub holds: bool,
}

fn orbit_rank_and_margin(cs: &CentralSubspace, mats: &[CMat]) -> (usize, f64) {
    let v = cs.vector.to_vector();
    let cols: Vec<CVec> = mats.iter().map(|m| cs.basis.adjoint() * (m * &v)).collect();
    let orbit = linalg::from_columns(cs.dim(), &cols);
    let sv = linalg::svd(&orbit).singular_values;
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return (0, 0.0);
    }
    let rank = sv.iter().filter(|&&x| x > RANK_CUTOFF * smax).count();
    let margin = sv.get(cs.dim().saturating_sub(1)).map_or(0.0, |x| x / smax);
    (rank, margin)
}

pub fn certify_cyclic_separating(cs: &CentralSubspace) -> CyclicSeparatingReport {
    let all: Vec<usize> = (0..cs.group().order()).collect();
    certify_with_translates(cs, &all)
}

/// As [`certify_cyclic_separating`] using only the translates by `elements`.
pub fn certify_with_translates(cs: &CentralSubspace, elements: &[usize]) -> CyclicSeparatingReport {
    let group = cs.group();
    let lam = regular_reps(group, Side::Left);
    let rho = regular_reps(group, Side::Right);
    let pick = |mats: &[CMat]| -> Vec<CMat> {
        elements.iter().filter_map(|&s| mats.get(s).cloned()).collect()
    };
    let (left_rank, left_margin) = orbit_rank_and_margin(cs, &pick(&lam));
    let (right_rank, right_margin) = orbit_rank_and_margin(cs, &pick(&rho));
    let dim = cs.dim();
    let cyclic_left = left_rank == dim;
    let cyclic_right = right_rank == dim;
    CyclicSeparatingReport {
        dim,
        left_rank,
        right_rank,
        left_margin,
        right_margin,
        cyclic_left,
        cyclic_right,
        separating_left: cyclic_right,
        separating_right: cyclic_left,
        holds: cyclic_left && cyclic_right,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReducedIdentityReport {
    /// `‖π_r(v) Q − Q‖`.
    pub restriction_residual: f64,
    /// `‖v♭ − P v♭‖`.
    pub flat_outside_residual: f64,
    pub flat_in_subspace: bool,
    /// `‖π_r(v) − P_Ĥ‖`, evaluated when `v♭ ∈ Ĥ`.
    pub global_residual: Option<f64>,
    pub holds: bool,
}

pub fn reduced_identity_check(cs: &CentralSubspace, tol: f64) -> Result<ReducedIdentityReport> {
    check_tol(tol)?;
    let pr = conv_matrix(Side::Right, &cs.vector);
    let restriction_residual = linalg::op_norm(&(&pr * &cs.basis - &cs.basis));
    let flat_outside_residual = cs.subspace_residual(&flat(&cs.vector));
    let flat_in_subspace = flat_outside_residual <= tol;
    let global_residual = flat_in_subspace.then(|| linalg::op_norm(&(&pr - &cs.projection)));
    let holds = restriction_residual <= tol && global_residual.map_or(true, |r| r <= tol);
    Ok(ReducedIdentityReport {
        restriction_residual,
        flat_outside_residual,
        flat_in_subspace,
        global_residual,
        holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StandardFormReport {
    pub dim: usize,
    pub samples: usize,
    /// Ĵ L̂ Ĵ vs R̂ (principal-angle sine).
    pub axiom_i_residual: f64,
    /// `max ‖ĴAĴ − A*‖` over a basis of the reduced center.
    pub axiom_ii_residual: f64,
    /// `max ‖Ĵf − f‖` over sampled cone elements.
    pub axiom_iii_residual: f64,
    /// Worst negative eigenvalue (relative) of `π_r` after the `AĴAĴ` twist.
    pub axiom_iv_residual: f64,
    /// Centrality of `P_Ĥ`.
    pub thcon3_i_residual: f64,
    /// `[L̂]'` vs `R̂` (principal-angle sine).
    pub thcon3_ii_residual: f64,
    pub thcon3_iii: CyclicSeparatingReport,
    pub thcon3_iv: ReducedIdentityReport,
    /// `max(‖JP − PJ‖, ‖Ĵ² − I‖)`.
    pub thcon3_v_residual: f64,
    /// Sampled `f ∈ P` with `t g − f ∈ P`: worst cone or subspace residual.
    pub thcon3_vi_residual: f64,
    pub axioms_hold: bool,
    pub thcon3_hold: [bool; 7],
}

pub fn standard_form_axioms(cs: &CentralSubspace, tol: f64, seed: u64) -> Result<StandardFormReport> {
    let modular = ModularPair::new(cs.group());
    standard_form_axioms_with(cs, &modular.conjugation, tol, seed)
}

fn psd_violation(m: &CMat) -> f64 {
    let scale = linalg::op_norm(m).max(1.0);
    let (herm, min_eig) = linalg::psd_margin(m);
    (herm.max(-min_eig)).max(0.0) / scale
}

/// Standard-form axioms with a caller-supplied conjugation in place of `J`.
pub fn standard_form_axioms_with(
    cs: &CentralSubspace,
    j: &AntilinearMap,
    tol: f64,
    seed: u64,
) -> Result<StandardFormReport> {
    check_tol(tol)?;
    let group = cs.group();
    let n = group.order();
    let dim = cs.dim();
    let lam = regular_reps(group, Side::Left);
    let reduced_left = cs.reduced_left();
    let reduced_right = cs.reduced_right();

    // (i)
    let twisted: Vec<CMat> = lam.iter().map(|l| cs.reduce(&j.sandwich(l))).collect();
    let twisted = AlgebraBasis::from_spanning(dim, &twisted, AlgebraKind::Reduced);
    let axiom_i_residual = twisted.span_distance(&reduced_right);

    // (ii)
    let center_basis = center(group);
    let axiom_ii_residual = center_basis
        .basis
        .iter()
        .map(|a| {
            let a = &cs.projection * a * &cs.projection;
            linalg::op_norm(&cs.reduce(&(j.sandwich(&a) - a.adjoint())))
        })
        .fold(0.0, f64::max);

    // (iii)
    let samples = cs.cone_samples(CONE_SAMPLES, seed);
    let mut axiom_iii_residual: f64 = 0.0;
    for f in &samples {
        axiom_iii_residual = axiom_iii_residual.max(f.distance(&j.apply_fn(f))?);
    }

    // (iv) A = random element of L_G, reduced by P
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut axiom_iv_residual: f64 = 0.0;
    for f in &samples {
        let mut a = CMat::zeros(n, n);
        for l in &lam {
            a += l * random_complex(&mut rng);
        }
        let a = &cs.projection * a;
        let jaj = j.sandwich(&a);
        let image = GroupFunction::from_vector(group, &(&a * jaj * f.to_vector()))?;
        let violation = psd_violation(&conv_matrix(Side::Right, &image));
        axiom_iv_residual = axiom_iv_residual.max(violation).max(cs.subspace_residual(&image));
    }

    // thcon3
    let thcon3_i_residual = cs.diagnostics.centrality_residual;
    let thcon3_ii_residual = commutant(&reduced_left).span_distance(&reduced_right);
    let thcon3_iii = certify_cyclic_separating(cs);
    let thcon3_iv = reduced_identity_check(cs, tol)?;
    let mut jp = CMat::zeros(n, n);
    let mut j_sq: f64 = 0.0;
    for col in 0..n {
        let e = CVec::from_fn(n, |i, _| if i == col { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let pe = &cs.projection * &e;
        let lhs = j.apply_vec(&pe);
        let rhs = &cs.projection * j.apply_vec(&e);
        jp.set_column(col, &(lhs - rhs));
        j_sq = j_sq.max((j.apply_vec(&j.apply_vec(&pe)) - &pe).norm());
    }
    let thcon3_v_residual = linalg::op_norm(&jp).max(j_sq);
    let thcon3_vi_residual = cone_interval_residual(cs, seed, tol)?;

    let axioms = [axiom_i_residual, axiom_ii_residual, axiom_iii_residual, axiom_iv_residual];
    let axioms_hold = axioms.iter().all(|&r| r <= tol);
    let thcon3_hold = [
        thcon3_i_residual <= tol,
        thcon3_ii_residual <= tol.max(SPAN_TOL),
        thcon3_iii.holds,
        thcon3_iv.holds,
        thcon3_v_residual <= tol,
        thcon3_vi_residual <= tol,
        axioms_hold,
    ];
    Ok(StandardFormReport {
        dim,
        samples: samples.len(),
        axiom_i_residual,
        axiom_ii_residual,
        axiom_iii_residual,
        axiom_iv_residual,
        thcon3_i_residual,
        thcon3_ii_residual,
        thcon3_iii,
        thcon3_iv,
        thcon3_v_residual,
        thcon3_vi_residual,
        axioms_hold,
        thcon3_hold,
    })
}

/// Sampled elements `f = (P_{H_η} C P_{H_η})δ_e` with `0 ⪯ C ∈ R_G`: these
/// satisfy `f ∈ P` and `‖C‖ g − f ∈ P`; report how far they are from `P̂_η`.
fn cone_interval_residual(cs: &CentralSubspace, seed: u64, tol: f64) -> Result<f64> {
    let group = cs.group();
    let g = &cs.window_symbol;
    let p_eta = conv_matrix(Side::Right, g);
    let e = group.identity();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    for _ in 0..CONE_SAMPLES {
        let h = random_function(group, &mut rng);
        let cmat = conv_matrix(Side::Right, &convolve(&h, &flat(&h))?);
        let t = linalg::op_norm(&cmat);
        let inner = &p_eta * &cmat * &p_eta;
        let f = GroupFunction::from_vector(group, &inner.column(e).into_owned())?;
        let gap = (&(g * t) - &f)?;
        let in_cone = cone_membership(&f, tol)?.in_p && cone_membership(&gap, tol)?.in_p;
        let residual = cs.subspace_residual(&f) / f.norm().max(f64::MIN_POSITIVE);
        worst = worst.max(residual);
        if !in_cone {
            worst = worst.max(1.0);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityReport {
    /// `(v₁|v₂)` for the two central vectors.
    pub vector_inner_product: [f64; 2],
    pub vectors_orthogonal: bool,
    /// `max |(f₁|f₂)|` over sampled cone pairs, relative to `‖f₁‖‖f₂‖`.
    pub max_cone_pairing: f64,
    pub cones_orthogonal: bool,
    /// Largest cosine between `Ĥ₁` and `Ĥ₂`.
    pub subspace_overlap: f64,
    pub subspaces_orthogonal: bool,
    pub agree: bool,
    pub samples: usize,
}

pub fn orthogonality_relations(
    cs1: &CentralSubspace,
    cs2: &CentralSubspace,
    tol: f64,
    seed: u64,
) -> Result<OrthogonalityReport> {
    check_tol(tol)?;
    if !same_group(cs1.group(), cs2.group()) {
        return Err(Error::GroupMismatch);
    }
    let ip = inner_product(&cs1.vector, &cs2.vector)?;
    let vectors_orthogonal = ip.norm() <= tol;

    let s1 = cs1.cone_samples(CONE_SAMPLES, seed);
    let s2 = cs2.cone_samples(CONE_SAMPLES, seed.wrapping_add(1));
    let mut max_cone_pairing: f64 = 0.0;
    for f1 in &s1 {
        for f2 in &s2 {
            let scale = (f1.norm() * f2.norm()).max(f64::MIN_POSITIVE);
            max_cone_pairing = max_cone_pairing.max(inner_product(f1, f2)?.norm() / scale);
        }
    }
    let cones_orthogonal = max_cone_pairing <= tol;
    let subspace_overlap = linalg::overlap(&cs1.basis, &cs2.basis);
    let subspaces_orthogonal = subspace_overlap <= tol;
    Ok(OrthogonalityReport {
        vector_inner_product: [ip.re, ip.im],
        vectors_orthogonal,
        max_cone_pairing,
        cones_orthogonal,
        subspace_overlap,
        subspaces_orthogonal,
        agree: vectors_orthogonal == cones_orthogonal && cones_orthogonal == subspaces_orthogonal,
        samples: CONE_SAMPLES,
    })
}

/// Complex conjugation with no inversion: `f ↦ conj f`.
pub fn plain_conjugation(group: &GroupTable) -> AntilinearMap {
    AntilinearMap::plain_conjugation(group.order())
}

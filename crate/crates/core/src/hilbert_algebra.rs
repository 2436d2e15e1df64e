//! The convolution Hilbert algebra of a finite group.
//!
//! Convolution, the two involutions `♭` and `♯`, the modular operator `Δ`
//! and conjugation `J`, the regular representations and the left/right
//! convolution operators `π_l(g)`, `π_r(g)`.
//!
//! Matrices act on the indexed basis `{δ_s}`; column `u` of every operator is
//! its image of `δ_u`. At finite scale every vector is both left and right
//! bounded, so `π_l` and `π_r` are defined on all of L²(G) and the domains of
//! `♯`, `♭` are the whole space.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_tol, Result};
use crate::group::{GroupFunction, GroupTable};
use crate::linalg::{self, CMat};

/// Default tolerance for eigenvalue tests, relative to the operator norm.
pub const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// `[f ∗ g](s) = Σ_t w(t) f(t) g(t⁻¹s)`.
pub fn convolve(f: &GroupFunction, g: &GroupFunction) -> Result<GroupFunction> {
    f.ensure_same_group(g)?;
    let group = f.group();
    let n = group.order();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for t in 0..n {
        let ft = f.get(t) * group.haar_weight(t);
        if ft == Complex64::new(0.0, 0.0) {
            continue;
        }
        for u in 0..n {
            // t⁻¹s = u  ⇔  s = tu
            out[group.mul(t, u)] += ft * g.get(u);
        }
    }
    GroupFunction::new(Arc::clone(group), out)
}

/// `f♭(s) = conj f(s⁻¹)`.
pub fn flat(f: &GroupFunction) -> GroupFunction {
    let group = f.group();
    f.map(|s, _| f.get(group.inv(s)).conj())
}

/// `f♯(s) = δ(s⁻¹) conj f(s⁻¹)`.
pub fn sharp(f: &GroupFunction) -> GroupFunction {
    let group = f.group();
    f.map(|s, _| {
        let si = group.inv(s);
        f.get(si).conj() * group.modular(si)
    })
}

/// Matrix of `λ(s)` (`[λ(s)f](t) = f(s⁻¹t)`) or `ρ(s)`
/// (`[ρ(s)f](t) = δ(s)^{1/2} f(ts)`).
pub fn regular_rep(group: &GroupTable, side: Side, s: usize) -> Result<CMat> {
    group.check_index(s)?;
    let n = group.order();
    let mut m = CMat::zeros(n, n);
    match side {
        Side::Left => {
            for u in 0..n {
                m[(group.mul(s, u), u)] = Complex64::new(1.0, 0.0);
            }
        }
        Side::Right => {
            let scale = group.modular(s).sqrt();
            let s_inv = group.inv(s);
            for u in 0..n {
                m[(group.mul(u, s_inv), u)] = Complex64::new(scale, 0.0);
            }
        }
    }
    Ok(m)
}

/// All `λ(s)` (or `ρ(s)`) in element order.
pub fn regular_reps(group: &GroupTable, side: Side) -> Vec<CMat> {
    (0..group.order())
        .map(|s| regular_rep(group, side, s).expect("index in range"))
        .collect()
}

/// Matrix of `π_r(g): f ↦ f ∗ g` or `π_l(g): f ↦ g ∗ f`.
pub fn conv_matrix(side: Side, g: &GroupFunction) -> CMat {
    let group = g.group();
    let n = group.order();
    let mut m = CMat::zeros(n, n);
    for u in 0..n {
        for s in 0..n {
            m[(s, u)] = match side {
                // (δ_u ∗ g)(s) = w(u) g(u⁻¹s)
                Side::Right => g.get(group.mul(group.inv(u), s)) * group.haar_weight(u),
                // (g ∗ δ_u)(s) = w(su⁻¹) g(su⁻¹)
                Side::Left => {
                    let t = group.mul(s, group.inv(u));
                    g.get(t) * group.haar_weight(t)
                }
            };
        }
    }
    m
}

/// `π_r(g)` or `π_l(g)` together with its symbol.
///
/// Both left and right boundedness are automatic at finite scale; the
/// operator norm is still computed and recorded.
#[derive(Debug, Clone)]
pub struct ConvolutionOperator {
    pub side: Side,
    pub symbol: GroupFunction,
    pub matrix: CMat,
    pub op_norm: f64,
}

impl ConvolutionOperator {
    pub fn is_bounded(&self) -> bool {
        true
    }

    /// The symbol is recovered as the image of `δ_e`.
    pub fn recover_symbol(&self) -> GroupFunction {
        let group = self.symbol.group();
        let col = self.matrix.column(group.identity()).into_owned();
        GroupFunction::from_vector(group, &col).expect("matching order")
    }
}

pub fn conv_operator(side: Side, g: &GroupFunction) -> ConvolutionOperator {
    let matrix = conv_matrix(side, g);
    let op_norm = linalg::op_norm(&matrix);
    ConvolutionOperator {
        side,
        symbol: g.clone(),
        matrix,
        op_norm,
    }
}

/// An antilinear (or linear, when `conjugate` is false) map of the form
/// `(Af)(s) = scale(s) · conj(f(perm(s)))`.
///
/// Antilinear maps cannot be stored as complex matrices, so `J`, `S` and `F`
/// are kept in this factored form and only ever applied to vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearMap {
    pub perm: Vec<usize>,
    pub scale: Vec<f64>,
    pub conjugate: bool,
}

impl AntilinearMap {
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.perm
            .iter()
            .zip(&self.scale)
            .map(|(&p, &w)| {
                let z = v[p];
                w * if self.conjugate { z.conj() } else { z }
            })
            .collect()
    }

    pub fn apply_vec(&self, v: &linalg::CVec) -> linalg::CVec {
        linalg::CVec::from_vec(self.apply(v.as_slice()))
    }

    pub fn apply_fn(&self, f: &GroupFunction) -> GroupFunction {
        GroupFunction::new(Arc::clone(f.group()), self.apply(f.values())).expect("same order")
    }

    /// The linear operator `A X A` (linear whenever `A` is antilinear),
    /// assembled column by column from basis vectors.
    pub fn sandwich(&self, x: &CMat) -> CMat {
        let n = self.perm.len();
        let mut out = CMat::zeros(n, n);
        for u in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[u] = Complex64::new(1.0, 0.0);
            let ae = linalg::CVec::from_vec(self.apply(&e));
            let xae = x * ae;
            out.set_column(u, &self.apply_vec(&xae));
        }
        out
    }

    /// Complex conjugation of coordinates with no permutation; used as a
    /// deliberately wrong conjugation in negative checks.
    pub fn plain_conjugation(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            scale: vec![1.0; n],
            conjugate: true,
        }
    }
}

/// `Δ`, `J` and the cached powers `Δ^t`, `t ∈ {±1/4, ±1/2}`.
#[derive(Debug, Clone)]
pub struct ModularPair {
    group: Arc<GroupTable>,
    /// Diagonal of `Δ`: `δ(s)`.
    pub delta: Vec<f64>,
    pub conjugation: AntilinearMap,
    powers: Vec<(f64, Vec<f64>)>,
}

impl ModularPair {
    pub fn new(group: &Arc<GroupTable>) -> Self {
        let n = group.order();
        let delta: Vec<f64> = (0..n).map(|s| group.modular(s)).collect();
        let conjugation = AntilinearMap {
            perm: (0..n).map(|s| group.inv(s)).collect(),
            scale: delta.iter().map(|d| d.powf(-0.5)).collect(),
            conjugate: true,
        };
        let powers = [-0.5, -0.25, 0.25, 0.5]
            .into_iter()
            .map(|t| (t, delta.iter().map(|d: &f64| d.powf(t)).collect()))
            .collect();
        Self {
            group: Arc::clone(group),
            delta,
            conjugation,
            powers,
        }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    /// Diagonal of `Δ^t`.
    pub fn power(&self, t: f64) -> Vec<f64> {
        self.powers
            .iter()
            .find(|(p, _)| *p == t)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| self.delta.iter().map(|d| d.powf(t)).collect())
    }

    pub fn power_matrix(&self, t: f64) -> CMat {
        let diag = self.power(t);
        CMat::from_diagonal(&linalg::CVec::from_iterator(
            diag.len(),
            diag.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn apply_power(&self, f: &GroupFunction, t: f64) -> GroupFunction {
        let diag = self.power(t);
        f.map(|s, z| z * diag[s])
    }

    pub fn apply_j(&self, f: &GroupFunction) -> GroupFunction {
        self.conjugation.apply_fn(f)
    }

    /// `S = Δ^{-1/2} J`, which reproduces `♯`.
    pub fn s_map(&self) -> AntilinearMap {
        self.twisted_conjugation(-0.5)
    }

    /// `F = Δ^{1/2} J`, which reproduces `♭`.
    pub fn f_map(&self) -> AntilinearMap {
        self.twisted_conjugation(0.5)
    }

    fn twisted_conjugation(&self, t: f64) -> AntilinearMap {
        let p = self.power(t);
        AntilinearMap {
            perm: self.conjugation.perm.clone(),
            scale: self
                .conjugation
                .scale
                .iter()
                .zip(&p)
                .map(|(j, d)| j * d)
                .collect(),
            conjugate: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdempotentReport {
    pub side: Side,
    /// `‖e − e♭‖` (right) or `‖e − e♯‖` (left).
    pub involution_residual: f64,
    /// `‖e − e ∗ e‖`.
    pub idempotency_residual: f64,
    pub is_idempotent: bool,
    /// `‖π(e) − π(e)*‖_max`.
    pub hermitian_residual: f64,
    /// Largest distance of an eigenvalue of `π(e)` to `{0, 1}`.
    pub spectrum_residual: f64,
    pub is_projection: bool,
    /// The algebraic and operator characterizations must coincide.
    pub agree: bool,
}

/// Is `e` a right (`e = e♭ = e ∗ e`) or left (`e = e♯ = e ∗ e`) self-adjoint
/// idempotent? Also tests whether `π_r(e)` (resp. `π_l(e)`) is an orthogonal
/// projection; the two verdicts have to agree.
pub fn is_selfadjoint_idempotent(side: Side, e: &GroupFunction, tol: f64) -> Result<IdempotentReport> {
    check_tol(tol)?;
    let inv = match side {
        Side::Right => flat(e),
        Side::Left => sharp(e),
    };
    let involution_residual = e.distance(&inv)?;
    let idempotency_residual = e.distance(&convolve(e, e)?)?;
    let is_idempotent = involution_residual <= tol && idempotency_residual <= tol;

    let m = conv_matrix(side, e);
    let hermitian_residual = linalg::max_abs(&(&m - m.adjoint()));
    let eig = linalg::hermitian_eigen(&m);
    let spectrum_residual = eig
        .values
        .iter()
        .map(|&x| x.abs().min((x - 1.0).abs()))
        .fold(0.0, f64::max);
    let is_projection = hermitian_residual <= tol && spectrum_residual <= tol;
    Ok(IdempotentReport {
        side,
        involution_residual,
        idempotency_residual,
        is_idempotent,
        hermitian_residual,
        spectrum_residual,
        is_projection,
        agree: is_idempotent == is_projection,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeReport {
    pub in_p_flat: bool,
    pub in_p_sharp: bool,
    pub in_p: bool,
    /// Minimum eigenvalue of the Hermitian part of `π_r(f)`.
    pub min_eig_right: f64,
    /// Minimum eigenvalue of the Hermitian part of `π_l(f)`.
    pub min_eig_left: f64,
    /// Minimum eigenvalue of the Hermitian part of `π_r(Δ^{1/4} f)`.
    pub min_eig_twisted: f64,
}

/// PSD test of a convolution operator with a threshold relative to its norm.
fn psd_verdict(m: &CMat, tol: f64) -> (bool, f64) {
    let norm = linalg::op_norm(m);
    let thr = if norm > 0.0 { tol * norm } else { tol };
    let (herm, min_eig) = linalg::psd_margin(m);
    (herm <= thr && min_eig >= -thr, min_eig)
}

/// Membership of `f` in `P♭` (`π_r(f) ⪰ 0`), `P♯` (`π_l(f) ⪰ 0`) and the
/// self-dual cone `P = Δ^{-1/4} P♭`, tested as `Δ^{1/4} f ∈ P♭`.
pub fn cone_membership(f: &GroupFunction, tol: f64) -> Result<ConeReport> {
    check_tol(tol)?;
    let modular = ModularPair::new(f.group());
    let (in_p_flat, min_eig_right) = psd_verdict(&conv_matrix(Side::Right, f), tol);
    let (in_p_sharp, min_eig_left) = psd_verdict(&conv_matrix(Side::Left, f), tol);
    let twisted = modular.apply_power(f, 0.25);
    let (in_p, min_eig_twisted) = psd_verdict(&conv_matrix(Side::Right, &twisted), tol);
    Ok(ConeReport {
        in_p_flat,
        in_p_sharp,
        in_p,
        min_eig_right,
        min_eig_left,
        min_eig_twisted,
    })
}

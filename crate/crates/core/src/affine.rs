//! The affine group `x ↦ ax + b` (a > 0) acting on sampled signals by
//! `π(a,b)η(x) = a^{-1/2} η((x − b)/a)`, with left Haar measure `da db / a²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative mean above which a window is rejected as not zero-mean.
pub const MEAN_TOL: f64 = 1e-6;

/// A resolution of the identity that misses more than this fraction of
/// `‖ψ‖²` is treated as a grid that does not cover the signal.
pub const COVERAGE_BOUND: f64 = 0.5;

/// Tolerance on `C_η = 1` accepted by [`resolution_of_identity`].
pub const CALDERON_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<Complex64>,
    grid_start: f64,
    grid_step: f64,
}

impl SampledSignal {
    pub fn new(samples: Vec<Complex64>, grid_start: f64, grid_step: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidSignal("need at least two samples".into()));
        }
        if !(grid_step > 0.0 && grid_step.is_finite() && grid_start.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "grid start {grid_start} / step {grid_step} not usable"
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidSignal("non-finite sample".into()));
        }
        Ok(Self {
            samples,
            grid_start,
            grid_step,
        })
    }

    pub fn from_fn(grid_start: f64, grid_step: f64, len: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..len)
            .map(|i| Complex64::new(f(grid_start + i as f64 * grid_step), 0.0))
            .collect();
        Self::new(samples, grid_start, grid_step)
    }

    /// Unit-norm Gaussian `(πσ²)^{-1/4} exp(−x²/2σ²)`.
    pub fn gaussian(sigma: f64, grid_start: f64, grid_step: f64, len: usize) -> Result<Self> {
        let n = (PI * sigma * sigma).powf(-0.25);
        Self::from_fn(grid_start, grid_step, len, |x| n * (-x * x / (2.0 * sigma * sigma)).exp())
    }

    /// Unit-norm Mexican hat `A(1 − x²/s²) exp(−x²/2s²)`.
    pub fn mexican_hat(s: f64, grid_start: f64, grid_step: f64, len: usize) -> Result<Self> {
        let a = mexican_hat_amplitude(s);
        Self::from_fn(grid_start, grid_step, len, |x| {
            let y = x / s;
            a * (1.0 - y * y) * (-y * y / 2.0).exp()
        })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid_start(&self) -> f64 {
        self.grid_start
    }

    pub fn grid_step(&self) -> f64 {
        self.grid_step
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.grid_start + i as f64 * self.grid_step
    }

    pub fn norm_sq(&self) -> f64 {
        self.grid_step * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|z| z * factor).collect(),
            ..self.clone()
        }
    }

    /// Linear interpolation, zero outside the grid.
    pub fn eval(&self, x: f64) -> Complex64 {
        let t = (x - self.grid_start) / self.grid_step;
        if !(t >= 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        let i = t.floor() as usize;
        let last = self.samples.len() - 1;
        if i > last {
            return Complex64::new(0.0, 0.0);
        }
        if i == last {
            return if t == last as f64 { self.samples[last] } else { Complex64::new(0.0, 0.0) };
        }
        let frac = t - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }

    /// `|∫η| / ∫|η|`.
    pub fn relative_mean(&self) -> f64 {
        let total: Complex64 = self.samples.iter().sum();
        let abs: f64 = self.samples.iter().map(|z| z.norm()).sum();
        if abs == 0.0 {
            0.0
        } else {
            total.norm() / abs
        }
    }

    fn same_grid(&self, other: &Self) -> bool {
        let step_ok = (self.grid_step - other.grid_step).abs() <= 1e-12 * self.grid_step;
        let offset = (other.grid_start - self.grid_start) / self.grid_step;
        step_ok && (offset - offset.round()).abs() <= 1e-9
    }

    /// `(ψ|φ) = Σ ψ conj φ · step` on a shared grid.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if !self.same_grid(other) {
            return Err(Error::IncompatibleGrid(
                "inner product needs a common sample lattice".into(),
            ));
        }
        let offset = ((other.grid_start - self.grid_start) / self.grid_step).round() as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, z) in self.samples.iter().enumerate() {
            let j = i as i64 - offset;
            if j >= 0 && (j as usize) < other.samples.len() {
                acc += z * other.samples[j as usize].conj();
            }
        }
        Ok(acc * self.grid_step)
    }
}

/// Amplitude that gives the Mexican hat of width `s` unit L² norm.
pub fn mexican_hat_amplitude(s: f64) -> f64 {
    (4.0 / (3.0 * PI.sqrt() * s)).sqrt()
}

/// `π A² s²` for the Mexican hat `A(1 − x²/s²)exp(−x²/2s²)`: the
/// frequency integral reduces to `2∫₀^∞ u³ e^{−u²} du = 1`.
pub fn mexican_hat_calderon(amplitude: f64, s: f64) -> f64 {
    PI * amplitude * amplitude * s * s
}

/// Log-uniform scales and uniform shifts with weights for `da db / a²`.
#[derive(Debug, Clone, Serialize)]
pub struct AffineGrid {
    scales: Vec<f64>,
    shifts: Vec<f64>,
    log_step: f64,
    shift_step: f64,
}

impl AffineGrid {
    /// `count_a` scales from `a_min` to `a_max` and `count_b` shifts from
    /// `b_min` to `b_max`, endpoints included.
    pub fn log_uniform(
        a_min: f64,
        a_max: f64,
        count_a: usize,
        b_min: f64,
        b_max: f64,
        count_b: usize,
    ) -> Result<Self> {
        if count_a == 0 || count_b == 0 {
            return Err(Error::EmptyGrid);
        }
        if count_a < 2 || count_b < 2 {
            return Err(Error::IncompatibleGrid("need at least two scales and two shifts".into()));
        }
        if !(a_min > 0.0 && a_max > a_min && b_max > b_min && a_max.is_finite() && b_min.is_finite() && b_max.is_finite()) {
            return Err(Error::IncompatibleGrid(format!(
                "bad ranges a ∈ [{a_min}, {a_max}], b ∈ [{b_min}, {b_max}]"
            )));
        }
        let log_step = (a_max.ln() - a_min.ln()) / (count_a - 1) as f64;
        let shift_step = (b_max - b_min) / (count_b - 1) as f64;
        Ok(Self {
            scales: (0..count_a).map(|j| (a_min.ln() + j as f64 * log_step).exp()).collect(),
            shifts: (0..count_b).map(|k| b_min + k as f64 * shift_step).collect(),
            log_step,
            shift_step,
        })
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    pub fn len(&self) -> usize {
        self.scales.len() * self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `w_jk = Δlog a · Δb / a_j`: with `a = e^u`, `da/a² = du/a`.
    pub fn weight(&self, j: usize) -> f64 {
        self.log_step * self.shift_step / self.scales[j]
    }

    /// Same ranges with both densities doubled (`2n − 1` points).
    pub fn refined(&self) -> Self {
        let (ja, jb) = (self.scales.len(), self.shifts.len());
        Self::log_uniform(
            self.scales[0],
            self.scales[ja - 1],
            2 * ja - 1,
            self.shifts[0],
            self.shifts[jb - 1],
            2 * jb - 1,
        )
        .expect("refining a valid grid")
    }
}

/// Coefficients `c_jk = (ψ|π(a_j, b_k)η)`, stored scale-major.
#[derive(Debug, Clone)]
pub struct Coefficients {
    pub grid: AffineGrid,
    pub values: Vec<Complex64>,
}

impl Coefficients {
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.grid.shifts.len() + k]
    }

    /// `Σ w_jk c_jk conj(d_jk)`.
    pub fn pair(&self, other: &Self) -> Complex64 {
        let nb = self.grid.shifts.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.grid.scales.len() {
            let mut row = Complex64::new(0.0, 0.0);
            for k in 0..nb {
                row += self.values[j * nb + k] * other.values[j * nb + k].conj();
            }
            acc += row * self.grid.weight(j);
        }
        acc
    }

    /// Rows `(j, k, a, b, re, im)` for export.
    pub fn rows(&self) -> impl Iterator<Item = (usize, usize, f64, f64, f64, f64)> + '_ {
        let nb = self.grid.shifts.len();
        self.values.iter().enumerate().map(move |(idx, z)| {
            let (j, k) = (idx / nb, idx % nb);
            (j, k, self.grid.scales[j], self.grid.shifts[k], z.re, z.im)
        })
    }
}

fn check_zero_mean(eta: &SampledSignal) -> Result<()> {
    let relative_mean = eta.relative_mean();
    if relative_mean > MEAN_TOL {
        return Err(Error::NonZeroMean { relative_mean });
    }
    Ok(())
}

/// One coefficient. When the dilated window is finer than the signal grid,
/// the substitution `x = b + a y` moves the sum onto the window's grid.
fn coefficient(psi: &SampledSignal, eta: &SampledSignal, a: f64, b: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    if a * eta.grid_step < psi.grid_step {
        // a^{1/2} Σ_y ψ(b + a y) conj η(y) Δy
        for (i, e) in eta.samples.iter().enumerate() {
            acc += psi.eval(b + a * eta.x(i)) * e.conj();
        }
        acc * (a.sqrt() * eta.grid_step)
    } else {
        // a^{-1/2} Σ_x ψ(x) conj η((x − b)/a) Δx
        for (i, p) in psi.samples.iter().enumerate() {
            acc += p * eta.eval((psi.x(i) - b) / a).conj();
        }
        acc * (psi.grid_step / a.sqrt())
    }
}

pub fn affine_analysis(psi: &SampledSignal, eta: &SampledSignal, grid: &AffineGrid) -> Result<Coefficients> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if (psi.grid_step - eta.grid_step).abs() > 1e-12 * psi.grid_step {
        return Err(Error::IncompatibleGrid(format!(
            "signal step {} differs from window step {}",
            psi.grid_step, eta.grid_step
        )));
    }
    check_zero_mean(eta)?;
    let mut values = Vec::with_capacity(grid.len());
    for &a in &grid.scales {
        for &b in &grid.shifts {
            values.push(coefficient(psi, eta, a, b));
        }
    }
    Ok(Coefficients {
        grid: grid.clone(),
        values,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CalderonReport {
    /// `C_η = ∫_G |(ψ|π(s)η)|² ds / ‖ψ‖²`, computed as `½ ∫ |η̂(ω)|²/|ω| dω`
    /// with `η̂(ω) = ∫ η(x) e^{−iωx} dx`.
    pub constant: f64,
    /// Multiply the window by this to reach `C_η = 1`.
    pub rescale: f64,
    pub relative_mean: f64,
    /// Radius of the excluded neighborhood of `ω = 0` (one frequency bin).
    pub excluded_radius: f64,
    pub fft_len: usize,
}

/// Calderón constant by FFT of the zero-padded window.
pub fn calderon_constant(eta: &SampledSignal) -> Result<CalderonReport> {
    check_zero_mean(eta)?;
    let m = eta.len();
    let fft_len = (4 * m).next_power_of_two().max(1 << 14);
    let mut buf: Vec<Complex64> = eta.samples.clone();
    buf.resize(fft_len, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(fft_len).process(&mut buf);
    let d_omega = 2.0 * PI / (fft_len as f64 * eta.grid_step);
    let mut total = 0.0;
    for (k, z) in buf.iter().enumerate().skip(1) {
        let kk = if k <= fft_len / 2 { k as f64 } else { k as f64 - fft_len as f64 };
        let omega = kk * d_omega;
        let spectrum = (z * eta.grid_step).norm_sqr();
        total += spectrum / omega.abs();
    }
    let constant = 0.5 * total * d_omega;
    Ok(CalderonReport {
        constant,
        rescale: if constant > 0.0 { constant.sqrt().recip() } else { 0.0 },
        relative_mean: eta.relative_mean(),
        excluded_radius: d_omega,
        fft_len,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolutionReport {
    /// `Σ w c^ψ conj c^φ`.
    pub lhs: [f64; 2],
    /// `(ψ|φ)`.
    pub rhs: [f64; 2],
    /// `|lhs − rhs| / (‖ψ‖‖φ‖)`.
    pub relative_error: f64,
    /// `(1/‖η‖²) Σ w |(η|π(a,b)η)|²`.
    pub c_eta: f64,
    pub calderon: f64,
    /// `1 − Σ w |c^ψ|² / ‖ψ‖²`.
    pub coverage_deficit: f64,
    pub scales: usize,
    pub shifts: usize,
}

pub fn resolution_of_identity(
    psi: &SampledSignal,
    phi: &SampledSignal,
    eta: &SampledSignal,
    grid: &AffineGrid,
) -> Result<ResolutionReport> {
    let calderon = calderon_constant(eta)?.constant;
    if (calderon - 1.0).abs() > CALDERON_TOL {
        return Err(Error::NotAdmissible {
            residual: (calderon - 1.0).abs(),
        });
    }
    let cpsi = affine_analysis(psi, eta, grid)?;
    let cphi = if psi == phi { cpsi.clone() } else { affine_analysis(phi, eta, grid)? };
    let lhs = cpsi.pair(&cphi);
    let rhs = psi.inner(phi)?;
    let scale = (psi.norm_sq() * phi.norm_sq()).sqrt();
    let relative_error = if scale > 0.0 { (lhs - rhs).norm() / scale } else { (lhs - rhs).norm() };

    let psi_sq = psi.norm_sq();
    let coverage_deficit = if psi_sq > 0.0 { 1.0 - cpsi.pair(&cpsi).re / psi_sq } else { 0.0 };
    if coverage_deficit > COVERAGE_BOUND {
        return Err(Error::CoverageInsufficient {
            diagnostic: coverage_deficit,
            bound: COVERAGE_BOUND,
        });
    }
    let ceta = affine_analysis(eta, eta, grid)?;
    let c_eta = ceta.pair(&ceta).re / eta.norm_sq();
    Ok(ResolutionReport {
        lhs: [lhs.re, lhs.im],
        rhs: [rhs.re, rhs.im],
        relative_error,
        c_eta,
        calderon,
        coverage_deficit,
        scales: grid.scales.len(),
        shifts: grid.shifts.len(),
    })
}

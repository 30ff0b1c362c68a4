//! Coefficient vectors of the generalized (GeCS) and Gaussian Klauder (GCS)
//! coherent states in the well eigenbasis.

use std::f64::consts::PI;

use num::complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numerics::{pairwise_sum, pairwise_sum_complex};
use crate::specfun::ln_bessel_i2;

/// Default relative probability left outside the truncation window.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Refuse to build vectors longer than this.
pub const MAX_WINDOW: usize = 10_000_000;

/// Parameters of a generalized coherent state, `z = z₀√(ħω) e^{−iφ₀}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GecsParams {
    z0: f64,
    phi0: f64,
}

impl GecsParams {
    pub fn new(z0: f64, phi0: f64) -> Result<Self> {
        if !(z0 > 0.0 && z0.is_finite()) {
            return domain(format!("GeCS needs z0 > 0, got {z0}"));
        }
        if !phi0.is_finite() {
            return domain("phi0 must be finite");
        }
        Ok(Self { z0, phi0 })
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }
}

/// Parameters of a Gaussian Klauder coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsParams {
    n0: f64,
    sigma0: f64,
    phi0: f64,
}

impl GcsParams {
    pub fn new(n0: f64, sigma0: f64, phi0: f64) -> Result<Self> {
        if !(n0 >= 0.0 && n0.is_finite()) {
            return domain(format!("GCS needs n0 >= 0, got {n0}"));
        }
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return domain(format!("GCS needs sigma0 > 0, got {sigma0}"));
        }
        if !phi0.is_finite() {
            return domain("phi0 must be finite");
        }
        Ok(Self { n0, sigma0, phi0 })
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    /// Copy with a different phase.
    pub fn with_phi0(&self, phi0: f64) -> Self {
        Self { phi0, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Gecs(GecsParams),
    Gcs(GcsParams),
}

impl StateSpec {
    pub fn phi0(&self) -> f64 {
        match self {
            StateSpec::Gecs(p) => p.phi0(),
            StateSpec::Gcs(p) => p.phi0(),
        }
    }
}

/// Truncated, normalised amplitudes `c_n` for `n = n_min ..= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    n_min: usize,
    amplitudes: Vec<Complex64>,
    spec: StateSpec,
}

impl CoefficientVector {
    /// Wraps raw amplitudes, renormalising them to unit norm.
    pub fn new(n_min: usize, amplitudes: Vec<Complex64>, spec: StateSpec) -> Result<Self> {
        let norm =
            pairwise_sum(&amplitudes.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>()).sqrt();
        if amplitudes.is_empty() || !(norm > 0.0 && norm.is_finite()) {
            return domain("coefficient vector must be non-empty with finite, non-zero norm");
        }
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(Self {
            n_min,
            amplitudes,
            spec,
        })
    }

    /// Replaces the amplitudes while keeping window and provenance. Used by
    /// time evolution, which preserves the norm.
    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.amplitudes.len());
        Self {
            n_min: self.n_min,
            amplitudes,
            spec: self.spec,
        }
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_min + self.amplitudes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn spec(&self) -> &StateSpec {
        &self.spec
    }

    /// `c_n`, zero outside the window.
    pub fn get(&self, n: usize) -> Complex64 {
        if n < self.n_min {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes
            .get(n - self.n_min)
            .copied()
            .unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.n_min + i, *c))
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        pairwise_sum(&self.probabilities())
    }

    /// Quantum number with the largest `|c_n|²`.
    pub fn argmax(&self) -> usize {
        let probs = self.probabilities();
        let (i, _) =
            probs.iter().enumerate().fold(
                (0, f64::MIN),
                |best, (i, &p)| if p > best.1 { (i, p) } else { best },
            );
        self.n_min + i
    }
}

fn check_tail_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return domain(format!("tail tolerance must lie in (0, 1e-6], got {tol}"));
    }
    Ok(())
}

fn phase_factor(n: usize, phi0: f64) -> Complex64 {
    // reduce n·φ₀ before the trig call
    let angle = -(n as f64 * phi0).rem_euclid(2.0 * PI);
    Complex64::new(angle.cos(), angle.sin())
}

/// `ln |C_n^Ge|² = 2(n+1) ln z₀ − ln I₂(2z₀) − ln n! − ln (n+2)!`
fn gecs_log_weight(ln_z0: f64, ln_i2: f64, n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (nf + 1.0) * ln_z0 - ln_i2 - libm::lgamma(nf + 1.0) - libm::lgamma(nf + 3.0)
}

/// Builds the generalized coherent state
/// `C_n = z₀^{n+1} e^{−inφ₀} / √(I₂(2z₀) n! (n+2)!)` in the log domain.
pub fn build_gecs(params: GecsParams, rel_tail_tol: f64) -> Result<CoefficientVector> {
    check_tail_tol(rel_tail_tol)?;
    let z0 = params.z0();
    let estimate = 40.0 * z0.sqrt() + 200.0;
    if !(estimate < MAX_WINDOW as f64) {
        return Err(Error::Overflow(format!(
            "GeCS window for z0 = {z0:e} exceeds {MAX_WINDOW} levels"
        )));
    }
    let ln_z0 = z0.ln();
    let ln_i2 = ln_bessel_i2(2.0 * z0);
    if !ln_i2.is_finite() {
        return Err(Error::Overflow(format!(
            "ln I2(2 z0) not finite for z0 = {z0:e}"
        )));
    }
    let weight = |n: usize| gecs_log_weight(ln_z0, ln_i2, n);
    // p_{n+1}/p_n = z0² / ((n+1)(n+3))
    let step_up = |n: usize| z0 * z0 / ((n as f64 + 1.0) * (n as f64 + 3.0));

    let mut peak = ((z0 * z0 + 1.0).sqrt() - 2.0).max(0.0).floor() as usize;
    while step_up(peak) > 1.0 {
        peak += 1;
    }
    while peak > 0 && step_up(peak - 1) < 1.0 {
        peak -= 1;
    }
    let w_peak = weight(peak);
    let half_tol = 0.5 * rel_tail_tol;

    let mut hi = peak;
    loop {
        let rel = (weight(hi) - w_peak).exp();
        let r = step_up(hi);
        if hi > peak && r < 1.0 && rel < rel_tail_tol && rel * r / (1.0 - r) < half_tol {
            break;
        }
        hi += 1;
    }
    let mut lo = peak;
    while lo > 0 {
        let rel = (weight(lo) - w_peak).exp();
        let r = (lo as f64) * (lo as f64 + 2.0) / (z0 * z0);
        if lo < peak && r < 1.0 && rel < rel_tail_tol && rel * r / (1.0 - r) < half_tol {
            break;
        }
        lo -= 1;
    }

    let amplitudes: Vec<Complex64> = (lo..=hi)
        .map(|n| phase_factor(n, params.phi0()) * (0.5 * (weight(n) - w_peak)).exp())
        .collect();
    CoefficientVector::new(lo, amplitudes, StateSpec::Gecs(params))
}

/// Width of the GCS window in units of σ₀ for a given tail tolerance.
pub fn gcs_window_sigmas(rel_tail_tol: f64) -> f64 {
    (2.0 * (1.0 / rel_tail_tol).ln()).sqrt().ceil() + 2.0
}

/// Builds the Gaussian Klauder coherent state
/// `C_n = e^{−(n−n₀)²/(4σ₀²) − inφ₀} / √N_G`.
pub fn build_gcs(params: GcsParams, rel_tail_tol: f64) -> Result<CoefficientVector> {
    check_tail_tol(rel_tail_tol)?;
    let k = gcs_window_sigmas(rel_tail_tol);
    let n0 = params.n0();
    let s0 = params.sigma0();
    let lo = (n0 - k * s0).floor().max(0.0);
    let hi = (n0 + k * s0).ceil();
    if !(hi - lo < MAX_WINDOW as f64) {
        return Err(Error::Overflow(format!(
            "GCS window [{lo}, {hi}] exceeds {MAX_WINDOW} levels"
        )));
    }
    let (lo, hi) = (lo as usize, hi as usize);
    // relative to the nearest level, so very narrow states do not underflow;
    // the common factor 1/√N_G is restored by normalisation
    let d0 = (n0.round().max(lo as f64).min(hi as f64)) - n0;
    let amplitudes: Vec<Complex64> = (lo..=hi)
        .map(|n| {
            let d = n as f64 - n0;
            phase_factor(n, params.phi0()) * (-(d - d0) * (d + d0) / (4.0 * s0 * s0)).exp()
        })
        .collect();
    CoefficientVector::new(lo, amplitudes, StateSpec::Gcs(params))
}

/// Builds either family.
pub fn build(spec: StateSpec, rel_tail_tol: f64) -> Result<CoefficientVector> {
    match spec {
        StateSpec::Gecs(p) => build_gecs(p, rel_tail_tol),
        StateSpec::Gcs(p) => build_gcs(p, rel_tail_tol),
    }
}

/// `⟨a|b⟩ = Σ conj(a_n) b_n`; indices outside either window contribute zero.
pub fn overlap(a: &CoefficientVector, b: &CoefficientVector) -> Complex64 {
    let lo = a.n_min().max(b.n_min());
    let hi = a.n_max().min(b.n_max());
    if lo > hi {
        return Complex64::new(0.0, 0.0);
    }
    let terms: Vec<Complex64> = (lo..=hi).map(|n| a.get(n).conj() * b.get(n)).collect();
    pairwise_sum_complex(&terms)
}

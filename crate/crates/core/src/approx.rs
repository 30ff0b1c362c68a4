//! Closed-form Gaussian approximations of the GCS density and wavefunction,
//! the Fourier series they come from, and error metrics against the exact
//! series.

use std::f64::consts::PI;

use num::complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::grid::SpaceGrid;
use crate::numerics::{
    derivative_uniform, pairwise_sum, simpson, simpson_complex, simpson_fn, simpson_fn_complex,
};
use crate::specfun::erf;
use crate::states::GcsParams;
use crate::well::WellParams;

/// Fourier series are cut where the Gaussian weight falls below this
/// fraction of the leading term.
pub const FOURIER_TAIL: f64 = 1e-14;

/// Gaussian packet parameters of the GCS at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    /// Centre `X = φ₀L/π + Pt/M`, not folded back into the well.
    pub x: f64,
    /// Momentum `P = (n₀+1)πħ/L`.
    pub p: f64,
    /// Spreading time `τ = 1/(4ωσ₀²)`.
    pub tau: f64,
    /// `σ = √(τ / (4ω(τ² + t²)))`.
    pub sigma: f64,
    /// Width `s = L/(2πσ)`.
    pub s: f64,
    pub t: f64,
}

pub fn packet(params: &WellParams, gcs: &GcsParams, t: f64) -> GaussianPacket {
    let l = params.length();
    let w = params.omega();
    let p = params.momentum(gcs.n0());
    let tau = 1.0 / (4.0 * w * gcs.sigma0() * gcs.sigma0());
    let sigma = (tau / (4.0 * w * (tau * tau + t * t))).sqrt();
    GaussianPacket {
        x: gcs.phi0() * l / PI + p * t / params.mass(),
        p,
        tau,
        sigma,
        s: l / (2.0 * PI * sigma),
        t,
    }
}

/// Normal density with mean `centre` and standard deviation `s`.
pub fn gaussian_density(x: f64, centre: f64, s: f64) -> f64 {
    let d = (x - centre) / s;
    (-0.5 * d * d).exp() / ((2.0 * PI).sqrt() * s)
}

fn on_grid<F: Fn(f64) -> f64 + Sync>(grid: &SpaceGrid, f: F) -> Vec<f64> {
    grid.points().par_iter().map(|&x| f(x)).collect()
}

pub fn approx_density(packet: &GaussianPacket, grid: &SpaceGrid) -> Vec<f64> {
    on_grid(grid, |x| gaussian_density(x, packet.x, packet.s))
}

/// `(√(2π)s)^{−1/2} e^{−(x−X)²/(4s²) + iPx/ħ}`.
pub fn approx_wavefunction(packet: &GaussianPacket, grid: &SpaceGrid) -> Vec<Complex64> {
    let hbar = grid.params().hbar();
    let amp = ((2.0 * PI).sqrt() * packet.s).powf(-0.5);
    grid.points()
        .par_iter()
        .map(|&x| {
            let d = x - packet.x;
            Complex64::from_polar(
                amp * (-d * d / (4.0 * packet.s * packet.s)).exp(),
                packet.p * x / hbar,
            )
        })
        .collect()
}

/// Smallest `j` with `e^{−j²/(8σ²)} < FOURIER_TAIL`.
pub fn fourier_j_max(sigma: f64) -> usize {
    ((8.0 * sigma * sigma * (1.0 / FOURIER_TAIL).ln())
        .sqrt()
        .floor() as usize)
        + 1
}

fn check_tail(j_max: usize, sigma: f64) -> Result<()> {
    let j = j_max as f64;
    let tail = (-j * j / (8.0 * sigma * sigma)).exp();
    if tail >= FOURIER_TAIL {
        return Err(Error::Truncation(format!(
            "j_max = {j_max} leaves a Gaussian tail weight {tail:e} >= {FOURIER_TAIL:e}; need j_max >= {}",
            fourier_j_max(sigma)
        )));
    }
    Ok(())
}

/// `θ = φ₀ + 2ωt(n₀+1)`, equal to `πX/L`.
fn packet_angle(gcs: &GcsParams, params: &WellParams, t: f64) -> f64 {
    gcs.phi0() + 2.0 * params.omega() * t * (gcs.n0() + 1.0)
}

/// The cosine series `1/L + (2/L) Σ_{j=1}^{j_max} e^{−j²/(8σ²)} cos(jπx/L) cos(jθ)`.
pub fn fourier_p0(
    gcs: &GcsParams,
    params: &WellParams,
    t: f64,
    j_max: usize,
    grid: &SpaceGrid,
) -> Result<Vec<f64>> {
    let pk = packet(params, gcs, t);
    check_tail(j_max, pk.sigma)?;
    let l = params.length();
    let theta = packet_angle(gcs, params, t);
    let weights: Vec<f64> = (1..=j_max)
        .map(|j| {
            let j = j as f64;
            (-j * j / (8.0 * pk.sigma * pk.sigma)).exp() * (j * theta).cos()
        })
        .collect();
    Ok(on_grid(grid, |x| {
        let terms: Vec<f64> = weights
            .iter()
            .enumerate()
            .map(|(i, w)| w * ((i + 1) as f64 * PI * x / l).cos())
            .collect();
        1.0 / l + 2.0 / l * pairwise_sum(&terms)
    }))
}

/// The border series
/// `−e^{−2σ²θ²}/L · Σ_{j≥0} e^{−(j−2n₀)²/(8σ²)} cos(jπx/L)`,
/// summed over `|j − 2n₀| ≤ fourier_j_max(σ)`.
pub fn fourier_pl(
    gcs: &GcsParams,
    params: &WellParams,
    t: f64,
    grid: &SpaceGrid,
) -> Result<Vec<f64>> {
    let pk = packet(params, gcs, t);
    let half = fourier_j_max(pk.sigma);
    check_tail(half, pk.sigma)?;
    let l = params.length();
    let theta = packet_angle(gcs, params, t);
    let prefactor = -(-2.0 * pk.sigma * pk.sigma * theta * theta).exp() / l;
    let centre = 2.0 * gcs.n0();
    let lo = (centre - half as f64).ceil().max(0.0) as usize;
    let hi = (centre + half as f64).floor() as usize;
    let weights: Vec<(f64, f64)> = (lo..=hi)
        .map(|j| {
            let d = j as f64 - centre;
            (j as f64, (-d * d / (8.0 * pk.sigma * pk.sigma)).exp())
        })
        .collect();
    Ok(on_grid(grid, |x| {
        let terms: Vec<f64> = weights
            .iter()
            .map(|(j, w)| w * (j * PI * x / l).cos())
            .collect();
        prefactor * pairwise_sum(&terms)
    }))
}

/// `Π(X, s, γ; x) = e^{−(x−X)²/(2s²)} cos(γx) / (√(2π)s)`.
pub fn pi_function(x_centre: f64, s: f64, gamma: f64, x: f64) -> f64 {
    gaussian_density(x, x_centre, s) * (gamma * x).cos()
}

/// Right-wall border term `−e^{−(L−X)²/(2s²)} Π(X, s, 2πn₀/L; x)`.
pub fn border_pr(gcs: &GcsParams, params: &WellParams, t: f64, grid: &SpaceGrid) -> Vec<f64> {
    let pk = packet(params, gcs, t);
    let l = params.length();
    let gap = (l - pk.x) / pk.s;
    let prefactor = -(-0.5 * gap * gap).exp();
    let gamma = 2.0 * PI * gcs.n0() / l;
    on_grid(grid, |x| prefactor * pi_function(pk.x, pk.s, gamma, x))
}

/// Cosine coefficients `a_j` of the even `2L`-periodic extension of `Π`,
/// from the closed Gaussian approximation and from quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct PiCoefficients {
    pub closed: Vec<f64>,
    pub quadrature: Vec<f64>,
}

impl PiCoefficients {
    pub fn max_discrepancy(&self) -> f64 {
        self.closed
            .iter()
            .zip(&self.quadrature)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `a_0 ..= a_{j_max}`. The closed form drops the Gaussian mass outside
/// `[0, L]`, which is accurate when `X ≫ s` and `L − X ≫ s`; at `γ = 0` it
/// reads `(2/L) e^{−j²/(8σ²)} cos(jπX/L)` with `σ = L/(2πs)`.
pub fn pi_expansion_coeffs(
    x_centre: f64,
    s: f64,
    gamma: f64,
    j_max: usize,
    params: &WellParams,
) -> Result<PiCoefficients> {
    let l = params.length();
    if !(x_centre > 0.0 && x_centre < l) {
        return domain(format!("packet centre {x_centre} must lie inside (0, {l})"));
    }
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("width must be positive, got {s}"));
    }
    let closed = (0..=j_max)
        .map(|j| {
            let k = j as f64 * PI / l;
            let term = |q: f64| (-0.5 * q * q * s * s).exp() * (q * x_centre).cos();
            (term(gamma + k) + term(gamma - k)) / l
        })
        .collect();
    let cycles = (j_max as f64 + gamma.abs() * l / PI + l / s).ceil() as usize;
    let panels = (64 * cycles).max(4096);
    let quadrature = (0..=j_max)
        .into_par_iter()
        .map(|j| {
            let k = j as f64 * PI / l;
            2.0 / l
                * simpson_fn(
                    |x| pi_function(x_centre, s, gamma, x) * (k * x).cos(),
                    0.0,
                    l,
                    panels,
                )
        })
        .collect();
    Ok(PiCoefficients { closed, quadrature })
}

/// Closed form of `∫₀ᴸ e^{−(x−X)²/(αs²) + iβx} dx`, dropping the imaginary
/// shifts inside the error functions.
pub fn f_integral(x_centre: f64, s: f64, alpha: f64, beta: f64, length: f64) -> Complex64 {
    let w = alpha.sqrt() * s;
    let mag = (PI * alpha).sqrt() * s / 2.0 * (-alpha * beta * beta * s * s / 4.0).exp();
    Complex64::from_polar(mag, beta * x_centre) * (erf((length - x_centre) / w) + erf(x_centre / w))
}

/// Quadrature of the same integral.
pub fn f_integral_quadrature(
    x_centre: f64,
    s: f64,
    alpha: f64,
    beta: f64,
    length: f64,
) -> Complex64 {
    let cycles = (beta.abs() * length / PI + length / s).ceil() as usize;
    let panels = (64 * cycles).max(8192);
    simpson_fn_complex(
        |x| {
            let d = x - x_centre;
            Complex64::from_polar((-d * d / (alpha * s * s)).exp(), beta * x)
        },
        0.0,
        length,
        panels,
    )
}

/// Sine coefficient `b_k` of the odd extension of the approximate
/// wavefunction, where mode `k ≥ 1` multiplies `sin(kπx/L)` and therefore
/// eigenstate `n = k − 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineCoefficient {
    pub mode: usize,
    /// `i(√(8π)s)^{1/2}/L · e^{i(P/ħ−kπ/L)X − s²(P/ħ−kπ/L)²}`.
    pub approx: Complex64,
    /// `∫₀ᴸ f(X, s, 4, P/ħ + kπ/L; x) dx`.
    pub first_integral: Complex64,
    /// `∫₀ᴸ f(X, s, 4, P/ħ − kπ/L; x) dx`.
    pub second_integral: Complex64,
    /// `(2/L) ∫₀ᴸ Ψ_approx(x) sin(kπx/L) dx`.
    pub quadrature: Complex64,
}

impl SineCoefficient {
    pub fn first_to_second_ratio(&self) -> f64 {
        self.first_integral.norm() / self.second_integral.norm()
    }
}

pub fn appendix2_bn(
    gcs: &GcsParams,
    params: &WellParams,
    t: f64,
    mode: usize,
) -> Result<SineCoefficient> {
    if mode == 0 {
        return domain("sine modes start at 1");
    }
    let pk = packet(params, gcs, t);
    let l = params.length();
    let k = pk.p / params.hbar();
    let q = mode as f64 * PI / l;
    let beta = k - q;
    let approx = Complex64::new(0.0, ((8.0 * PI).sqrt() * pk.s).sqrt() / l)
        * Complex64::from_polar((-pk.s * pk.s * beta * beta).exp(), beta * pk.x);
    let first_integral = f_integral_quadrature(pk.x, pk.s, 4.0, k + q, l);
    let second_integral = f_integral_quadrature(pk.x, pk.s, 4.0, k - q, l);
    let amp = ((2.0 * PI).sqrt() * pk.s).powf(-0.5);
    let cycles = ((k + q) * l / PI + l / pk.s).ceil() as usize;
    let quadrature = simpson_fn_complex(
        |x| {
            let d = x - pk.x;
            Complex64::from_polar(amp * (-d * d / (4.0 * pk.s * pk.s)).exp(), k * x) * (q * x).sin()
        },
        0.0,
        l,
        (64 * cycles).max(8192),
    ) * (2.0 / l);
    Ok(SineCoefficient {
        mode,
        approx,
        first_integral,
        second_integral,
        quadrature,
    })
}

/// Thresholds that quantify the `≫` conditions of the Gaussian
/// approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityThresholds {
    pub n0_over_sigma0: f64,
    pub sigma0: f64,
    pub x_over_s: f64,
    pub wall_over_s: f64,
    pub tau_over_t: f64,
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        Self {
            n0_over_sigma0: 10.0,
            sigma0: 3.0,
            x_over_s: 5.0,
            wall_over_s: 5.0,
            tau_over_t: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub ratio: f64,
    pub threshold: f64,
}

impl Condition {
    pub fn passes(&self) -> bool {
        self.ratio > self.threshold
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityCheck {
    pub n0_over_sigma0: Condition,
    pub sigma0: Condition,
    pub x_over_s: Condition,
    pub wall_over_s: Condition,
    pub tau_over_t: Condition,
}

impl ValidityCheck {
    pub fn conditions(&self) -> [(&'static str, Condition); 5] {
        [
            ("n0/sigma0", self.n0_over_sigma0),
            ("sigma0", self.sigma0),
            ("X/s", self.x_over_s),
            ("(L-X)/s", self.wall_over_s),
            ("tau/t", self.tau_over_t),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.passes())
    }

    /// Names of the failing conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        self.conditions()
            .iter()
            .filter(|(_, c)| !c.passes())
            .map(|(n, _)| *n)
            .collect()
    }
}

pub fn check_validity(
    gcs: &GcsParams,
    params: &WellParams,
    t: f64,
    thresholds: &ValidityThresholds,
) -> ValidityCheck {
    let pk = packet(params, gcs, t);
    let l = params.length();
    let cond = |ratio, threshold| Condition { ratio, threshold };
    ValidityCheck {
        n0_over_sigma0: cond(gcs.n0() / gcs.sigma0(), thresholds.n0_over_sigma0),
        sigma0: cond(gcs.sigma0(), thresholds.sigma0),
        x_over_s: cond(pk.x / pk.s, thresholds.x_over_s),
        wall_over_s: cond((l - pk.x) / pk.s, thresholds.wall_over_s),
        tau_over_t: cond(
            if t == 0.0 {
                f64::INFINITY
            } else {
                pk.tau / t.abs()
            },
            thresholds.tau_over_t,
        ),
    }
}

/// `∫₀ᴸ |a − b| dx`.
pub fn l1_distance(a: &[f64], b: &[f64], grid: &SpaceGrid) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect();
    grid.integrate(&diff)
}

/// `max |a − b|` over the grid.
pub fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// L² distance after rotating `approx` by the global phase that best
/// matches `exact`. Returns `(distance, phase)`.
pub fn phase_aligned_l2(exact: &[Complex64], approx: &[Complex64], grid: &SpaceGrid) -> (f64, f64) {
    let h = grid.spacing();
    let inner: Vec<Complex64> = approx
        .iter()
        .zip(exact)
        .map(|(a, e)| a.conj() * e)
        .collect();
    let phase = simpson_complex(&inner, h).arg();
    let rot = Complex64::from_polar(1.0, phase);
    let diff: Vec<f64> = exact
        .iter()
        .zip(approx)
        .map(|(e, a)| (e - rot * a).norm_sqr())
        .collect();
    (simpson(&diff, h).max(0.0).sqrt(), phase)
}

/// `⟨x⟩` and `⟨p⟩` of sampled wavefunction values by quadrature.
pub fn wavefunction_moments(
    psi: &[Complex64],
    grid: &SpaceGrid,
    fd_order: usize,
) -> (f64, Complex64) {
    let h = grid.spacing();
    let weighted: Vec<f64> = psi
        .iter()
        .zip(grid.points())
        .map(|(c, x)| c.norm_sqr() * x)
        .collect();
    let dpsi = derivative_uniform(psi, h, fd_order);
    let hbar = grid.params().hbar();
    let p: Vec<Complex64> = psi
        .iter()
        .zip(&dpsi)
        .map(|(a, d)| a.conj() * d * Complex64::new(0.0, -hbar))
        .collect();
    (simpson(&weighted, h), simpson_complex(&p, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{density, wavefunction};
    use crate::states::{build_gcs, DEFAULT_TAIL_TOL};

    fn fig1() -> GcsParams {
        GcsParams::new(500.0, 5.0, PI / 2.0).unwrap()
    }

    fn grid_for(gcs: &GcsParams) -> SpaceGrid {
        let v = build_gcs(*gcs, DEFAULT_TAIL_TOL).unwrap();
        SpaceGrid::resolving(WellParams::default(), v.n_max()).unwrap()
    }

    #[test]
    fn packet_identities() {
        let p = WellParams::default();
        let pk = packet(&p, &fig1(), 0.0);
        assert!((pk.p - 501.0).abs() < 1e-12);
        assert!((pk.tau - 0.02).abs() < 1e-15);
        assert!((pk.sigma - 5.0).abs() < 1e-14);
        assert!((pk.s - 0.1).abs() < 1e-15);
        assert!((pk.s * pk.sigma - 0.5).abs() < 1e-15);
        let at_tau = packet(&p, &fig1(), pk.tau);
        assert!((at_tau.sigma - 5.0 / 2f64.sqrt()).abs() < 1e-13);
        let mut prev = pk.s;
        for i in 1..50 {
            let s = packet(&p, &fig1(), 0.001 * i as f64).s;
            assert!(s > prev);
            prev = s;
        }
    }

    #[test]
    fn density_peak_and_wavefunction_modulus() {
        let gcs = fig1();
        let g = grid_for(&gcs);
        let pk = packet(g.params(), &gcs, 0.0);
        let rho = approx_density(&pk, &g);
        let psi = approx_wavefunction(&pk, &g);
        let peak = rho.iter().copied().fold(0.0, f64::max);
        let expected = 1.0 / ((2.0 * PI).sqrt() * pk.s);
        assert!((peak - expected).abs() < 1e-12 * expected);
        assert!((expected - (2.0 * PI).sqrt() * pk.sigma / PI).abs() < 1e-12);
        for (r, c) in rho.iter().zip(&psi) {
            assert!((c.norm_sqr() - r).abs() < 1e-14 * r.max(1.0));
        }
    }

    #[test]
    fn fig1_density_matches_exact_early() {
        let gcs = fig1();
        let g = grid_for(&gcs);
        let v = build_gcs(gcs, DEFAULT_TAIL_TOL).unwrap();
        let t = 0.002;
        let exact = density(&v, &g, t).unwrap();
        let pk = packet(g.params(), &gcs, t);
        assert!(l1_distance(&exact, &approx_density(&pk, &g), &g) < 0.05);
        let psi = wavefunction(&v, &g, t).unwrap();
        let (d, _) = phase_aligned_l2(&psi, &approx_wavefunction(&pk, &g), &g);
        assert!(d < 0.1, "{d}");
    }

    #[test]
    fn p0_series_properties() {
        let gcs = fig1();
        let p = WellParams::default();
        let g = grid_for(&gcs);
        let pk = packet(&p, &gcs, 0.0);
        let j = fourier_j_max(pk.sigma);
        assert!(fourier_p0(&gcs, &p, 0.0, j - 1, &g).is_err());
        let p0 = fourier_p0(&gcs, &p, 0.0, j, &g).unwrap();
        assert!((g.integrate(&p0) - 1.0).abs() < 1e-12);
        assert!(linf_distance(&p0, &approx_density(&pk, &g)) < 1e-3);
    }

    #[test]
    fn pl_is_negligible_mid_well() {
        let gcs = fig1();
        let p = WellParams::default();
        let g = grid_for(&gcs);
        let pl = fourier_pl(&gcs, &p, 0.0, &g).unwrap();
        assert!(pl.iter().all(|v| v.abs() < 1e-30));
    }

    #[test]
    fn pl_explains_near_wall_residual() {
        let gcs = GcsParams::new(500.0, 5.0, 0.25).unwrap();
        let p = WellParams::default();
        let g = grid_for(&gcs);
        let v = build_gcs(gcs, DEFAULT_TAIL_TOL).unwrap();
        let exact = density(&v, &g, 0.0).unwrap();
        let pk = packet(&p, &gcs, 0.0);
        let p0 = fourier_p0(&gcs, &p, 0.0, fourier_j_max(pk.sigma), &g).unwrap();
        let pl = fourier_pl(&gcs, &p, 0.0, &g).unwrap();
        let near: Vec<usize> = (0..g.count())
            .filter(|&i| g.points()[i] < pk.x + 3.0 * pk.s)
            .collect();
        let dot = |a: &dyn Fn(usize) -> f64, b: &dyn Fn(usize) -> f64| {
            near.iter().map(|&i| a(i) * b(i)).sum::<f64>()
        };
        let resid = |i: usize| exact[i] - p0[i];
        let border = |i: usize| pl[i];
        let cos = dot(&resid, &border) / (dot(&resid, &resid) * dot(&border, &border)).sqrt();
        assert!(cos > 0.5, "cosine similarity {cos}");

        // fine oscillations: sign changes of P_l close to the wall every L/(2n₀)
        let lim = g.points().partition_point(|&x| x < 0.1);
        let crossings = pl[..lim]
            .windows(2)
            .filter(|w| w[0].signum() != w[1].signum())
            .count();
        let expected = 0.1 / (PI / (2.0 * 500.0));
        assert!(
            (crossings as f64 - expected).abs() <= 2.0,
            "{crossings} vs {expected}"
        );
    }

    #[test]
    fn pr_border_keeps_symmetry_at_half_period() {
        let p = WellParams::default();
        let gcs = fig1();
        let g = grid_for(&gcs);
        let half_period = p.mass() * p.length() / packet(&p, &gcs, 0.0).p;
        let pk = packet(&p, &gcs, half_period);
        let p0 = fourier_p0(&gcs, &p, half_period, fourier_j_max(pk.sigma), &g).unwrap();
        let pl = fourier_pl(&gcs, &p, half_period, &g).unwrap();
        let pr = border_pr(&gcs, &p, half_period, &g);
        let total: Vec<f64> = (0..g.count()).map(|i| p0[i] + pl[i] + pr[i]).collect();
        let n = total.len();
        let asym = (0..n)
            .map(|i| (total[i] - total[n - 1 - i]).abs())
            .fold(0.0, f64::max);
        assert!(asym < 1e-3, "{asym}");
    }

    #[test]
    fn pi_coefficients() {
        let p = WellParams::default();
        let l = PI;
        let far = pi_expansion_coeffs(l / 2.0, 0.1 * l, 0.0, 50, &p).unwrap();
        let near = pi_expansion_coeffs(2.0 * 0.1 * l, 0.1 * l, 0.0, 50, &p).unwrap();
        assert!(near.max_discrepancy() > 100.0 * far.max_discrepancy());
        let narrow = pi_expansion_coeffs(l / 2.0, 1e-3 * l, 0.0, 0, &p).unwrap();
        assert!((narrow.quadrature[0] - 2.0 / l).abs() < 1e-10);
        assert!(pi_expansion_coeffs(0.0, 0.1, 0.0, 3, &p).is_err());
    }

    #[test]
    fn f_integral_checks() {
        let l = PI;
        let x = l / 2.0;
        let s = 0.05 * l;
        for alpha in [2.0, 4.0] {
            let full = f_integral(x, s, alpha, 0.0, l);
            assert!((full.re - (PI * alpha).sqrt() * s).abs() < 1e-12 && full.im == 0.0);
            for beta in [0.0, 2.0, -2.0, 5.0, -5.0] {
                let a = f_integral(x, s, alpha, beta, l);
                let b = f_integral_quadrature(x, s, alpha, beta, l);
                assert!((a - b).norm() < 1e-10, "alpha={alpha} beta={beta}");
                let mirrored = f_integral(x, s, alpha, -beta, l);
                assert!((a.norm() - mirrored.norm()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sine_coefficients() {
        let p = WellParams::default();
        let gcs = fig1();
        let modes: Vec<SineCoefficient> = (470..=532)
            .map(|k| appendix2_bn(&gcs, &p, 0.0, k).unwrap())
            .collect();
        let peak = modes
            .iter()
            .max_by(|a, b| a.approx.norm().total_cmp(&b.approx.norm()))
            .unwrap();
        assert_eq!(peak.mode, 501);
        let at_peak = appendix2_bn(&gcs, &p, 0.0, 501).unwrap();
        assert!(at_peak.first_to_second_ratio() < 1e-6);
        for m in &modes {
            assert!((m.approx - m.quadrature).norm() < 1e-6, "mode {}", m.mode);
        }
        // Parseval in the sine basis: (L/2) Σ |b_k|² = ∫ |Ψ|²
        let total: f64 = modes.iter().map(|m| m.approx.norm_sqr()).sum::<f64>() * p.length() / 2.0;
        assert!((total - 1.0).abs() < 1e-3, "{total}");
    }

    #[test]
    fn validity_flags() {
        let p = WellParams::default();
        let th = ValidityThresholds::default();
        assert!(check_validity(&fig1(), &p, 0.002, &th).all_pass());
        let at_tau = check_validity(&fig1(), &p, 0.02, &th);
        assert!(!at_tau.tau_over_t.passes() && at_tau.failures().contains(&"tau/t"));
        assert!((at_tau.tau_over_t.ratio - 1.0).abs() < 1e-15);
        let near_wall = check_validity(&GcsParams::new(500.0, 5.0, 0.05).unwrap(), &p, 0.0, &th);
        assert!(!near_wall.x_over_s.passes());
    }

    #[test]
    fn approx_wavefunction_moments() {
        let p = WellParams::default();
        let gcs = fig1();
        let g = SpaceGrid::new(p, 65537).unwrap();
        let pk = packet(&p, &gcs, 0.002);
        let (mx, mp) = wavefunction_moments(&approx_wavefunction(&pk, &g), &g, 6);
        assert!((mx - pk.x).abs() < 1e-6 * PI, "{mx} vs {}", pk.x);
        assert!((mp.re - pk.p).abs() < 1e-6 * pk.p, "{mp} vs {}", pk.p);
    }
}

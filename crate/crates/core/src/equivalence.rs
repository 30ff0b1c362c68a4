//! Comparison of the generalized and Gaussian coherent states under
//! `n₀ = z₀ − 1`, `σ₀² = z₀/2`.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::numerics::{compensated_sum, pairwise_sum};
use crate::specfun::{gaussian_lattice_sum, ln_bessel_i2};
use crate::states::{build_gcs, build_gecs, overlap, GcsParams, GecsParams, DEFAULT_TAIL_TOL};

/// Below this `σ₀` the mapped Gaussian state is too narrow for the
/// asymptotic argument; such `z₀` are flagged.
pub const EDGE_SIGMA0: f64 = 3.0;

/// Gaussian state matched to the GeCS with parameter `z₀`.
pub fn map_parameters(z0: f64, phi0: f64) -> Result<GcsParams> {
    if !(z0 > 1.0 && z0.is_finite()) {
        return domain(format!("equivalence needs z0 > 1, got {z0}"));
    }
    GcsParams::new(z0 - 1.0, (z0 / 2.0).sqrt(), phi0)
}

/// True when the mapped `σ₀` falls below [`EDGE_SIGMA0`].
pub fn near_validity_edge(z0: f64) -> bool {
    (z0 / 2.0).sqrt() < EDGE_SIGMA0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub z0: f64,
    pub phi0: f64,
    /// `|⟨Ψ_Ge|Ψ_G⟩|²`.
    pub fidelity: f64,
    /// `Σ | |C_n^Ge|² − prefactor·|C_n^G|²·(n+1)/(n+2) |`.
    pub coeff_l1: f64,
    /// `max | |C_n^Ge|²/|C_n^G|² − 1 |` over `|n − n₀| ≤ 3σ₀`.
    pub max_ratio_dev: f64,
    /// `e^{2z₀} N_G(z₀−1, √(z₀/2)) / (2πz₀ I₂(2z₀))`, which tends to 1.
    pub prefactor: f64,
    pub near_edge: bool,
}

/// Prefactor linking `|C_n^Ge|²` to `|C_n^G|²(n+1)/(n+2)`, evaluated in the
/// log domain.
pub fn equivalence_prefactor(z0: f64) -> Result<f64> {
    let gcs = map_parameters(z0, 0.0)?;
    let ln = 2.0 * z0 + gaussian_lattice_sum(gcs.n0(), gcs.sigma0(), 0).ln()
        - (2.0 * PI * z0).ln()
        - ln_bessel_i2(2.0 * z0);
    Ok(ln.exp())
}

pub fn equivalence_report(z0: f64, phi0: f64) -> Result<EquivalenceReport> {
    let gcs_params = map_parameters(z0, phi0)?;
    let gecs = build_gecs(GecsParams::new(z0, phi0)?, DEFAULT_TAIL_TOL)?;
    let gcs = build_gcs(gcs_params, DEFAULT_TAIL_TOL)?;
    let fidelity = overlap(&gecs, &gcs).norm_sqr();
    let prefactor = equivalence_prefactor(z0)?;

    let lo = gecs.n_min().min(gcs.n_min());
    let hi = gecs.n_max().max(gcs.n_max());
    let diffs: Vec<f64> = (lo..=hi)
        .map(|n| {
            let weight = (n + 1) as f64 / (n + 2) as f64;
            (gecs.get(n).norm_sqr() - prefactor * gcs.get(n).norm_sqr() * weight).abs()
        })
        .collect();

    let half = 3.0 * gcs_params.sigma0();
    let c_lo = (gcs_params.n0() - half).ceil().max(0.0) as usize;
    let c_hi = (gcs_params.n0() + half).floor() as usize;
    let max_ratio_dev = (c_lo..=c_hi)
        .map(|n| (gecs.get(n).norm_sqr() / gcs.get(n).norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);

    Ok(EquivalenceReport {
        z0,
        phi0,
        fidelity,
        coeff_l1: pairwise_sum(&diffs),
        max_ratio_dev,
        prefactor,
        near_edge: near_validity_edge(z0),
    })
}

/// Total-variation distance between the Poisson(`z₀`) law of `n + 1` and
/// the normal law with mean `z₀` and variance `z₀` sampled at `n + 1`, both
/// restricted to `n ≥ 0` and renormalised.
pub fn poisson_gaussian_gap(z0: f64) -> Result<f64> {
    if !(z0 > 1.0 && z0.is_finite()) {
        return domain(format!("poisson_gaussian_gap needs z0 > 1, got {z0}"));
    }
    let n_max = (z0 + 40.0 * z0.sqrt() + 50.0).ceil() as usize;
    let ln_z0 = z0.ln();
    let poisson: Vec<f64> = (0..=n_max)
        .map(|n| {
            let k = (n + 1) as f64;
            (k * ln_z0 - z0 - libm::lgamma(k + 1.0)).exp()
        })
        .collect();
    let normal: Vec<f64> = (0..=n_max)
        .map(|n| {
            let d = (n + 1) as f64 - z0;
            (-d * d / (2.0 * z0)).exp()
        })
        .collect();
    let zp = compensated_sum(poisson.iter().copied());
    let zn = compensated_sum(normal.iter().copied());
    let diffs: Vec<f64> = poisson
        .iter()
        .zip(&normal)
        .map(|(p, q)| (p / zp - q / zn).abs())
        .collect();
    Ok(0.5 * pairwise_sum(&diffs))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_map() {
        let g = map_parameters(101.0, 0.2).unwrap();
        assert_eq!(g.n0(), 100.0);
        assert!((g.sigma0() - 50.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(g.phi0(), 0.2);
        let edge = map_parameters(2.0, 0.0).unwrap();
        assert_eq!((edge.n0(), edge.sigma0()), (1.0, 1.0));
        assert!(near_validity_edge(2.0) && near_validity_edge(1.5) && !near_validity_edge(25.0));
        let g = map_parameters(50.0, 0.0).unwrap();
        assert!((g.sigma0() * g.sigma0() / g.n0() - 25.0 / 49.0).abs() < 1e-15);
        assert!(map_parameters(1.0, 0.0).is_err());
        assert!(map_parameters(0.5, 0.0).is_err());
    }

    #[test]
    fn fidelity_improves_with_z0() {
        let f: Vec<f64> = [25.0, 100.0, 400.0]
            .iter()
            .map(|&z| equivalence_report(z, 0.0).unwrap().fidelity)
            .collect();
        assert!(f[1] >= 0.99);
        assert!(f[0] < f[1] && f[1] < f[2]);
        assert!(f.iter().all(|&x| x <= 1.0 + 1e-10));
        let infid: Vec<f64> = f.iter().map(|x| 1.0 - x).collect();
        assert!(loglog_slope(&[25.0, 100.0, 400.0], &infid) <= -0.8);
    }

    #[test]
    fn fidelity_is_phase_invariant() {
        let base = equivalence_report(100.0, 0.0).unwrap().fidelity;
        for phi in [PI / 4.0, PI] {
            assert!((equivalence_report(100.0, phi).unwrap().fidelity - base).abs() < 1e-12);
        }
    }

    #[test]
    fn prefactor_tends_to_one() {
        let d100 = (equivalence_prefactor(100.0).unwrap() - 1.0).abs();
        let d400 = (equivalence_prefactor(400.0).unwrap() - 1.0).abs();
        assert!(d100 < 0.01);
        let ratio = d400 / d100;
        assert!((0.2..0.3).contains(&ratio), "{ratio}");
    }

    #[test]
    fn ratio_deviation_shrinks_like_inverse_root() {
        let a = equivalence_report(100.0, 0.0).unwrap();
        let b = equivalence_report(400.0, 0.0).unwrap();
        let r = b.max_ratio_dev / a.max_ratio_dev;
        assert!((0.4..0.6).contains(&r), "{r}");
        assert!(b.coeff_l1 < a.coeff_l1);
    }

    #[test]
    fn poisson_gap() {
        let g25 = poisson_gaussian_gap(25.0).unwrap();
        let g100 = poisson_gaussian_gap(100.0).unwrap();
        let g400 = poisson_gaussian_gap(400.0).unwrap();
        assert!(g100 < g25 && g400 < g100);
        assert!(g400 < 0.05);
        assert!(poisson_gaussian_gap(1.0).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 10.0, 100.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        assert!((loglog_slope(&xs, &ys) + 1.5).abs() < 1e-12);
    }
}

//! The infinite square well: physical parameters, eigenbasis, spectra and
//! truncated ladder operators.

use std::f64::consts::PI;

use ndarray::Array2;
use num::complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::grid::SpaceGrid;
use crate::numerics::{derivative_uniform, simpson};

/// Mass, width and Planck constant of the well, plus the derived angular
/// frequency `ω = π²ħ / (2ML²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellParams {
    mass: f64,
    length: f64,
    hbar: f64,
    omega: f64,
}

impl WellParams {
    pub fn new(mass: f64, length: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("length", length), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return domain(format!("{name} must be finite and positive, got {v}"));
            }
        }
        let omega = PI * PI * hbar / (2.0 * mass * length * length);
        Ok(Self {
            mass,
            length,
            hbar,
            omega,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Wavenumber `α = π / L` of the ground state.
    pub fn alpha(&self) -> f64 {
        PI / self.length
    }

    /// `E(n) = ħω(n+1)²`.
    pub fn energy(&self, n: usize) -> f64 {
        let m = (n + 1) as f64;
        self.hbar * self.omega * m * m
    }

    pub fn ground_energy(&self) -> f64 {
        self.energy(0)
    }

    /// Momentum magnitude `(n+1)πħ/L` carried by eigenstate `n`.
    pub fn momentum(&self, n: f64) -> f64 {
        (n + 1.0) * PI * self.hbar / self.length
    }
}

impl Default for WellParams {
    /// `M = 1`, `L = π`, `ħ = 1`, hence `ω = 1/2`.
    fn default() -> Self {
        Self::new(1.0, PI, 1.0).expect("default parameters are valid")
    }
}

/// Dimensionless shifted spectrum `ℰ(n) = n(n+2)`.
pub fn shifted_energy(n: usize) -> f64 {
    let n = n as f64;
    n * (n + 2.0)
}

/// `ψₙ(x) = √(2/L) sin((n+1)πx/L)` for `x ∈ [0, L]`.
pub fn eigenfunction(params: &WellParams, n: usize, x: f64) -> Result<f64> {
    let l = params.length();
    if !(0.0..=l).contains(&x) {
        return domain(format!("position {x} outside [0, {l}]"));
    }
    Ok(eigenfunction_unchecked(params, n, x))
}

/// Same as [`eigenfunction`] without the range check. Exactly zero at the
/// walls.
pub(crate) fn eigenfunction_unchecked(params: &WellParams, n: usize, x: f64) -> f64 {
    let l = params.length();
    if x == 0.0 || x == l {
        return 0.0;
    }
    (2.0 / l).sqrt() * ((n + 1) as f64 * PI * x / l).sin()
}

/// Ladder operators `a`, `a†` and number operator `N` truncated to `D`
/// levels.
#[derive(Debug, Clone)]
pub struct LadderMatrices {
    pub a: Array2<Complex64>,
    pub a_dagger: Array2<Complex64>,
    pub number: Array2<Complex64>,
}

impl LadderMatrices {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

pub fn ladder_matrices(dim: usize) -> Result<LadderMatrices> {
    if dim < 2 {
        return domain(format!("ladder matrices need dim >= 2, got {dim}"));
    }
    let mut a = Array2::<Complex64>::zeros((dim, dim));
    let mut number = Array2::<Complex64>::zeros((dim, dim));
    for n in 0..dim {
        number[[n, n]] = Complex64::new(n as f64, 0.0);
        if n >= 1 {
            a[[n - 1, n]] = Complex64::new(shifted_energy(n).sqrt(), 0.0);
        }
    }
    let a_dagger = a.t().mapv(|c| c.conj());
    Ok(LadderMatrices {
        a,
        a_dagger,
        number,
    })
}

/// Largest entrywise deviation of the three su(1,1) relations on the
/// interior block, plus the a†a factorisation defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11Report {
    /// max |[a,N] − a|
    pub lowering: f64,
    /// max |[a†,N] + a†|
    pub raising: f64,
    /// max |[a,a†] − 2(N + 3/2)|
    pub closure: f64,
    /// max |a†a − diag(ℰ)| / max(ℰ(n), 1) over the full matrix, in units
    /// of relative rounding; `√ℰ(n)²` may differ from `ℰ(n)` by one ulp
    pub factorization: f64,
    pub tolerance: f64,
}

impl Su11Report {
    pub fn within_tolerance(&self) -> bool {
        self.lowering <= self.tolerance
            && self.raising <= self.tolerance
            && self.closure <= self.tolerance
    }
}

fn commutator(x: &Array2<Complex64>, y: &Array2<Complex64>) -> Array2<Complex64> {
    x.dot(y) - y.dot(x)
}

fn max_abs_interior(m: &Array2<Complex64>, k: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            worst = worst.max(m[[i, j]].norm());
        }
    }
    worst
}

/// Checks the su(1,1) commutation relations away from the truncation edge.
///
/// The last row and column are excluded: hard truncation drops the
/// `ℰ(D)` contribution to `a a†` there.
pub fn check_su11(dim: usize, tolerance: f64) -> Result<Su11Report> {
    if dim < 4 {
        return domain(format!("su(1,1) check needs dim >= 4, got {dim}"));
    }
    let m = ladder_matrices(dim)?;
    let interior = dim - 1;
    let identity = Array2::<Complex64>::eye(dim);

    let lowering = commutator(&m.a, &m.number) - &m.a;
    let raising = commutator(&m.a_dagger, &m.number) + &m.a_dagger;
    let closure = commutator(&m.a, &m.a_dagger)
        - (&m.number + &(identity * Complex64::new(1.5, 0.0))) * Complex64::new(2.0, 0.0);

    let mut factor = m.a_dagger.dot(&m.a);
    for n in 0..dim {
        factor[[n, n]] -= shifted_energy(n);
        let scale = shifted_energy(n).max(1.0);
        factor.row_mut(n).mapv_inplace(|c| c / scale);
    }

    Ok(Su11Report {
        lowering: max_abs_interior(&lowering, interior),
        raising: max_abs_interior(&raising, interior),
        closure: max_abs_interior(&closure, interior),
        factorization: max_abs_interior(&factor, dim),
        tolerance,
    })
}

/// Per-level residuals of the position-space ladder realisation.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationReport {
    /// `‖a ψₙ − √ℰ(n) ψₙ₋₁‖₂` for n = 0..dim (the n = 0 entry is `‖a ψ₀‖₂`).
    pub residuals: Vec<f64>,
}

impl RealizationReport {
    /// Max residual over `1 ≤ n ≤ dim−1`.
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().skip(1).copied().fold(0.0, f64::max)
    }
}

/// Minimum sampling density for the realisation check.
pub const REALIZATION_POINTS_PER_HALF_WAVE: usize = 20;

/// Applies
/// `a = [cos(αx) − (i sin(αx)/(ħα)) p (N+1)⁻¹] √ℰ(N)`
/// to sampled eigenfunctions, with `p = −iħ d/dx` taken by finite
/// differences of the given accuracy order.
pub fn position_realization_check(
    params: &WellParams,
    dim: usize,
    grid: &SpaceGrid,
    fd_order: usize,
) -> Result<RealizationReport> {
    if dim < 3 {
        return domain(format!("realisation check needs dim >= 3, got {dim}"));
    }
    let required = SpaceGrid::required_count(dim - 1, REALIZATION_POINTS_PER_HALF_WAVE);
    if grid.count() < required {
        return Err(Error::Resolution {
            required,
            actual: grid.count(),
        });
    }
    let xs = grid.points();
    let h = grid.spacing();
    let alpha = params.alpha();
    let hbar = params.hbar();
    let sample = |n: usize| -> Vec<f64> {
        xs.iter()
            .map(|&x| eigenfunction_unchecked(params, n, x))
            .collect()
    };

    let mut residuals = Vec::with_capacity(dim);
    let mut previous: Option<Vec<f64>> = None;
    for n in 0..dim {
        let psi = sample(n);
        let root = shifted_energy(n).sqrt();
        // (N+1)^-1 sqrt(E(N)) psi_n
        let inner: Vec<Complex64> = psi
            .iter()
            .map(|&v| Complex64::new(v * root / (n + 1) as f64, 0.0))
            .collect();
        let dpsi = derivative_uniform(&inner, h, fd_order);
        let residual_sq: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let p_inner = Complex64::new(0.0, -hbar) * dpsi[i];
                let applied = Complex64::new((alpha * x).cos() * psi[i] * root, 0.0)
                    - Complex64::new(0.0, (alpha * x).sin() / (hbar * alpha)) * p_inner;
                let target = previous.as_ref().map_or(0.0, |prev| root * prev[i]);
                (applied - target).norm_sqr()
            })
            .collect();
        residuals.push(simpson(&residual_sq, h).max(0.0).sqrt());
        previous = Some(psi);
    }
    Ok(RealizationReport { residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::simpson_fn;

    #[test]
    fn omega_matches_definition() {
        let p = WellParams::default();
        assert_eq!(p.omega(), 0.5);
        let q = WellParams::new(2.0, 3.0, 0.7).unwrap();
        assert_eq!(q.omega(), PI * PI * 0.7 / (2.0 * 2.0 * 9.0));
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(WellParams::new(0.0, 1.0, 1.0).is_err());
        assert!(WellParams::new(1.0, -1.0, 1.0).is_err());
        assert!(WellParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn eigenfunction_values() {
        let p = WellParams::default();
        let peak = eigenfunction(&p, 0, PI / 2.0).unwrap();
        assert!((peak - (2.0 / PI).sqrt()).abs() < 1e-15);
        assert!(eigenfunction(&p, 1, PI / 2.0).unwrap().abs() < 1e-15);
        // sqrt(2/pi) sin(1.2) at 50 digits (mpmath)
        let oracle = 0.743_659_596_758_064_462_876_007_907_951_15;
        let v = eigenfunction(&p, 3, 0.3).unwrap();
        assert!((v - oracle).abs() < 2e-16, "{v}");
        assert_eq!(eigenfunction(&p, 7, 0.0).unwrap(), 0.0);
        assert_eq!(eigenfunction(&p, 7, PI).unwrap(), 0.0);
        assert!(eigenfunction(&p, 0, -0.1).is_err());
        assert!(eigenfunction(&p, 0, 3.2).is_err());
    }

    #[test]
    fn spectrum_relations() {
        let p = WellParams::new(1.3, 2.1, 0.9).unwrap();
        assert_eq!(shifted_energy(0), 0.0);
        for n in 0..200 {
            let lhs = p.energy(n) - p.ground_energy();
            let rhs = p.hbar() * p.omega() * shifted_energy(n);
            assert!(
                (lhs - rhs).abs() <= 4.0 * f64::EPSILON * p.energy(n),
                "n={n}"
            );
            assert!(p.energy(n + 1) > p.energy(n));
            if n > 0 {
                assert!(shifted_energy(n) > 0.0);
            }
        }
    }

    #[test]
    fn ladder_small_dims() {
        let m = ladder_matrices(2).unwrap();
        assert!((m.a[[0, 1]].re - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.a.iter().filter(|c| c.norm() != 0.0).count(), 1);
        let m3 = ladder_matrices(3).unwrap();
        assert!((m3.a[[1, 2]].re - 8f64.sqrt()).abs() < 1e-15);
        assert!(ladder_matrices(1).is_err());
    }

    #[test]
    fn annihilates_ground_state() {
        for dim in [2, 5, 17] {
            let m = ladder_matrices(dim).unwrap();
            let e0 = m.a.column(0);
            assert!(e0.iter().all(|c| c.norm() == 0.0));
        }
    }

    #[test]
    fn a_dagger_is_adjoint() {
        let m = ladder_matrices(8).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(m.a_dagger[[i, j]], m.a[[j, i]].conj());
            }
        }
    }

    #[test]
    fn su11_relations_hold_on_interior() {
        let r = check_su11(10, 1e-12).unwrap();
        assert!(r.within_tolerance(), "{r:?}");
        assert!(r.factorization <= f64::EPSILON);
        assert!(check_su11(50, 1e-12).unwrap().factorization <= f64::EPSILON);
        assert!(check_su11(3, 1e-12).is_err());
    }

    #[test]
    fn lowering_relation_exact_including_edge() {
        let m = ladder_matrices(4).unwrap();
        let diff = commutator(&m.a, &m.number) - &m.a;
        // a[n-1,n] (n - (n-1)) - a[n-1,n], so at most one rounding step
        for ((i, j), d) in diff.indexed_iter() {
            assert!(
                d.norm() <= 2.0 * f64::EPSILON * m.a[[i, j]].norm(),
                "({i},{j})"
            );
        }
    }

    #[test]
    fn closure_fails_only_on_truncation_edge() {
        let m = ladder_matrices(6).unwrap();
        let c = commutator(&m.a, &m.a_dagger);
        // last diagonal entry misses E(6)
        assert!((c[[5, 5]].re - (-shifted_energy(5))).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_eigenbasis() {
        let p = WellParams::default();
        for n in 0..=30usize {
            for m in n..=30usize {
                let v = simpson_fn(
                    |x| eigenfunction_unchecked(&p, n, x) * eigenfunction_unchecked(&p, m, x),
                    0.0,
                    PI,
                    4000,
                );
                let expected = if n == m { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-10, "n={n} m={m} v={v}");
            }
        }
    }

    #[test]
    fn realization_converges_under_refinement() {
        let p = WellParams::default();
        let coarse = SpaceGrid::new(p, 1001).unwrap();
        let fine = SpaceGrid::new(p, 2001).unwrap();
        let rc = position_realization_check(&p, 6, &coarse, 4).unwrap();
        let rf = position_realization_check(&p, 6, &fine, 4).unwrap();
        assert!(rf.residuals[1] < 1e-6, "{:?}", rf.residuals);
        assert!(rf.residuals[0] < 1e-6);
        for n in 1..6 {
            assert!(rf.residuals[n] < rc.residuals[n], "n={n}");
        }
        assert!(rf.max_residual() < rc.max_residual());
    }

    #[test]
    fn realization_rejects_coarse_grid() {
        let p = WellParams::default();
        let g = SpaceGrid::new(p, 100).unwrap();
        assert!(matches!(
            position_realization_check(&p, 10, &g, 4),
            Err(Error::Resolution { .. })
        ));
    }
}

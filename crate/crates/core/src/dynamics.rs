//! Exact time evolution in the energy basis, wavefunctions and densities on
//! spatial grids, and expectation values from analytic matrix elements.

use std::f64::consts::PI;

use ndarray::Array2;
use num::complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{SpaceGrid, TimeGrid, MIN_POINTS_PER_HALF_WAVE};
use crate::numerics::{
    derivative_uniform, pairwise_sum, pairwise_sum_complex, simpson, simpson_complex,
};
use crate::states::CoefficientVector;
use crate::well::{eigenfunction_unchecked, shifted_energy, WellParams};

/// Largest imaginary part tolerated in the expectation value of a
/// Hermitian operator.
pub const HERMITICITY_THRESHOLD: f64 = 1e-8;

/// Multiplies each `c_n` by `e^{−iωn(n+2)t}`. Negative times run the
/// evolution backwards.
pub fn evolve(v: &CoefficientVector, params: &WellParams, t: f64) -> CoefficientVector {
    let wt = params.omega() * t;
    let amplitudes = v
        .iter()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -wt * shifted_energy(n)))
        .collect();
    v.with_amplitudes(amplitudes)
}

fn check_resolution(n_max: usize, grid: &SpaceGrid) -> Result<()> {
    let required = SpaceGrid::required_count(n_max, MIN_POINTS_PER_HALF_WAVE);
    if grid.count() < required {
        return Err(Error::Resolution {
            required,
            actual: grid.count(),
        });
    }
    Ok(())
}

/// `Ψ(x, t) = Σ c_n e^{−iωℰ(n)t} ψ_n(x)` at every grid point.
pub fn wavefunction(v: &CoefficientVector, grid: &SpaceGrid, t: f64) -> Result<Vec<Complex64>> {
    check_resolution(v.n_max(), grid)?;
    let params = grid.params();
    let evolved = evolve(v, params, t);
    Ok(grid
        .points()
        .par_iter()
        .map(|&x| {
            let terms: Vec<Complex64> = evolved
                .iter()
                .map(|(n, c)| c * eigenfunction_unchecked(params, n, x))
                .collect();
            pairwise_sum_complex(&terms)
        })
        .collect())
}

/// `|Ψ(x, t)|²` at every grid point.
pub fn density(v: &CoefficientVector, grid: &SpaceGrid, t: f64) -> Result<Vec<f64>> {
    Ok(wavefunction(v, grid, t)?
        .iter()
        .map(|c| c.norm_sqr())
        .collect())
}

/// The density from the double sum over `(n, n′)`.
///
/// With `ψ_nψ_{n′} = [cos((n−n′)πx/L) − cos((n+n′+2)πx/L)] / L` the kernel
/// is grouped by difference and by sum of the quantum numbers, leaving two
/// cosine series with real coefficients.
pub fn density_double_sum(v: &CoefficientVector, grid: &SpaceGrid, t: f64) -> Result<Vec<f64>> {
    check_resolution(v.n_max(), grid)?;
    let params = grid.params();
    let evolved = evolve(v, params, t);
    let c = evolved.amplitudes();
    let d = c.len();

    let diff: Vec<f64> = (0..d)
        .map(|j| {
            let terms: Vec<f64> = (j..d).map(|i| (c[i].conj() * c[i - j]).re).collect();
            let weight = if j == 0 { 1.0 } else { 2.0 };
            weight * pairwise_sum(&terms)
        })
        .collect();
    let sum: Vec<f64> = (0..2 * d - 1)
        .map(|s| {
            let lo = s.saturating_sub(d - 1);
            let hi = s.min(d - 1);
            let terms: Vec<f64> = (lo..=hi).map(|i| (c[i].conj() * c[s - i]).re).collect();
            pairwise_sum(&terms)
        })
        .collect();
    let shift = 2 * v.n_min() + 2;
    let k = PI / params.length();
    let inv_l = 1.0 / params.length();
    Ok(grid
        .points()
        .par_iter()
        .map(|&x| {
            let mut terms: Vec<f64> = diff
                .iter()
                .enumerate()
                .map(|(j, w)| w * (j as f64 * k * x).cos())
                .collect();
            terms.extend(
                sum.iter()
                    .enumerate()
                    .map(|(s, w)| -w * ((s + shift) as f64 * k * x).cos()),
            );
            inv_l * pairwise_sum(&terms)
        })
        .collect())
}

fn primed(n: usize) -> f64 {
    (n + 1) as f64
}

/// `⟨ψ_n| x |ψ_m⟩`.
pub fn x_matrix_element(params: &WellParams, n: usize, m: usize) -> f64 {
    let l = params.length();
    if n == m {
        return 0.5 * l;
    }
    if (n + m).is_multiple_of(2) {
        return 0.0;
    }
    let (a, b) = (primed(n), primed(m));
    let q = (a - b) * (a + b);
    -8.0 * l * (a * b) / (PI * PI * q * q)
}

/// `⟨ψ_n| x² |ψ_m⟩`. Off-diagonal elements are non-zero for both parities.
pub fn x2_matrix_element(params: &WellParams, n: usize, m: usize) -> f64 {
    let l = params.length();
    let (a, b) = (primed(n), primed(m));
    if n == m {
        return l * l * (1.0 / 3.0 - 1.0 / (2.0 * PI * PI * a * a));
    }
    let q = (a - b) * (a + b);
    let sign = if (n + m).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * 8.0 * l * l * (a * b) / (PI * PI * q * q)
}

/// `⟨ψ_n| p |ψ_m⟩`, purely imaginary.
pub fn p_matrix_element(params: &WellParams, n: usize, m: usize) -> Complex64 {
    if n == m || (n + m).is_multiple_of(2) {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b) = (primed(n), primed(m));
    let q = (a - b) * (a + b);
    Complex64::new(0.0, -4.0 * params.hbar() * (a * b) / (params.length() * q))
}

/// `⟨ψ_n| p² |ψ_m⟩`, diagonal.
pub fn p2_matrix_element(params: &WellParams, n: usize, m: usize) -> f64 {
    if n != m {
        return 0.0;
    }
    let k = primed(n) * PI * params.hbar() / params.length();
    k * k
}

/// Dense matrix-element blocks over the levels `n_min .. n_min + dim`.
#[derive(Debug, Clone)]
pub struct MatrixElements {
    n_min: usize,
    x: Array2<f64>,
    x2: Array2<f64>,
    p: Array2<Complex64>,
    p2: Vec<f64>,
}

impl MatrixElements {
    pub fn new(params: &WellParams, n_min: usize, dim: usize) -> Self {
        let block = |f: &dyn Fn(usize, usize) -> f64| {
            Array2::from_shape_fn((dim, dim), |(i, j)| f(n_min + i, n_min + j))
        };
        Self {
            n_min,
            x: block(&|n, m| x_matrix_element(params, n, m)),
            x2: block(&|n, m| x2_matrix_element(params, n, m)),
            p: Array2::from_shape_fn((dim, dim), |(i, j)| {
                p_matrix_element(params, n_min + i, n_min + j)
            }),
            p2: (0..dim)
                .map(|i| p2_matrix_element(params, n_min + i, n_min + i))
                .collect(),
        }
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn dim(&self) -> usize {
        self.p2.len()
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    pub fn x2(&self) -> &Array2<f64> {
        &self.x2
    }

    pub fn p(&self) -> &Array2<Complex64> {
        &self.p
    }

    pub fn p2_diagonal(&self) -> &[f64] {
        &self.p2
    }
}

fn quadratic_form_real(m: &Array2<f64>, c: &[Complex64]) -> Complex64 {
    let rows: Vec<Complex64> = c
        .iter()
        .enumerate()
        .map(|(i, ci)| {
            let row: Vec<Complex64> = m.row(i).iter().zip(c).map(|(a, cj)| cj * *a).collect();
            ci.conj() * pairwise_sum_complex(&row)
        })
        .collect();
    pairwise_sum_complex(&rows)
}

fn quadratic_form_complex(m: &Array2<Complex64>, c: &[Complex64]) -> Complex64 {
    let rows: Vec<Complex64> = c
        .iter()
        .enumerate()
        .map(|(i, ci)| {
            let row: Vec<Complex64> = m.row(i).iter().zip(c).map(|(a, cj)| a * cj).collect();
            ci.conj() * pairwise_sum_complex(&row)
        })
        .collect();
    pairwise_sum_complex(&rows)
}

fn real_part(value: Complex64, observable: &'static str) -> Result<f64> {
    if value.im.abs() > HERMITICITY_THRESHOLD {
        return Err(Error::Hermiticity {
            observable,
            imag: value.im,
            threshold: HERMITICITY_THRESHOLD,
        });
    }
    Ok(value.re)
}

/// Expectation values at a single time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSample {
    pub t: f64,
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    /// `Δx·Δp / ħ`.
    pub heisenberg: f64,
}

/// Expectation values over a time grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub mean_x: Vec<f64>,
    pub mean_p: Vec<f64>,
    pub delta_x: Vec<f64>,
    pub delta_p: Vec<f64>,
    /// `Δx·Δp` in units of `ħ`.
    pub heisenberg: Vec<f64>,
}

impl ObservableSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

impl FromIterator<ObservableSample> for ObservableSeries {
    fn from_iter<I: IntoIterator<Item = ObservableSample>>(iter: I) -> Self {
        let mut s = ObservableSeries::default();
        for o in iter {
            s.times.push(o.t);
            s.mean_x.push(o.mean_x);
            s.mean_p.push(o.mean_p);
            s.delta_x.push(o.delta_x);
            s.delta_p.push(o.delta_p);
            s.heisenberg.push(o.heisenberg);
        }
        s
    }
}

/// Evaluates expectation values of one state at arbitrary times.
#[derive(Debug, Clone)]
pub struct ObservableEvaluator {
    state: CoefficientVector,
    params: WellParams,
    elements: MatrixElements,
}

impl ObservableEvaluator {
    pub fn new(state: &CoefficientVector, params: &WellParams) -> Self {
        Self {
            state: state.clone(),
            params: *params,
            elements: MatrixElements::new(params, state.n_min(), state.len()),
        }
    }

    pub fn elements(&self) -> &MatrixElements {
        &self.elements
    }

    pub fn at(&self, t: f64) -> Result<ObservableSample> {
        let evolved = evolve(&self.state, &self.params, t);
        let c = evolved.amplitudes();
        let mean_x = real_part(quadratic_form_real(&self.elements.x, c), "x")?;
        let mean_x2 = real_part(quadratic_form_real(&self.elements.x2, c), "x^2")?;
        let mean_p = real_part(quadratic_form_complex(&self.elements.p, c), "p")?;
        let p2_terms: Vec<f64> = c
            .iter()
            .zip(&self.elements.p2)
            .map(|(ci, d)| ci.norm_sqr() * d)
            .collect();
        let mean_p2 = pairwise_sum(&p2_terms);
        let delta_x = (mean_x2 - mean_x * mean_x).max(0.0).sqrt();
        let delta_p = (mean_p2 - mean_p * mean_p).max(0.0).sqrt();
        Ok(ObservableSample {
            t,
            mean_x,
            mean_x2,
            mean_p,
            mean_p2,
            delta_x,
            delta_p,
            heisenberg: delta_x * delta_p / self.params.hbar(),
        })
    }

    /// Samples over the grid; time points are evaluated in parallel and
    /// collected in order.
    pub fn series(&self, tg: &TimeGrid) -> Result<ObservableSeries> {
        let samples: Vec<ObservableSample> = tg
            .times()
            .par_iter()
            .map(|&t| self.at(t))
            .collect::<Result<_>>()?;
        Ok(samples.into_iter().collect())
    }
}

/// `⟨x⟩, ⟨p⟩, Δx, Δp` and `Δx·Δp` over a time grid.
pub fn observables(
    v: &CoefficientVector,
    params: &WellParams,
    tg: &TimeGrid,
) -> Result<ObservableSeries> {
    ObservableEvaluator::new(v, params).series(tg)
}

/// `⟨x⟩` from Simpson quadrature of `x|Ψ|²`.
pub fn mean_x_quadrature(v: &CoefficientVector, grid: &SpaceGrid, t: f64) -> Result<f64> {
    let rho = density(v, grid, t)?;
    let weighted: Vec<f64> = rho.iter().zip(grid.points()).map(|(r, x)| r * x).collect();
    Ok(simpson(&weighted, grid.spacing()))
}

/// `⟨p⟩ = −iħ ∫ Ψ* ∂ₓΨ dx` with a finite-difference derivative of the given
/// even order.
pub fn mean_p_quadrature(
    v: &CoefficientVector,
    grid: &SpaceGrid,
    t: f64,
    fd_order: usize,
) -> Result<Complex64> {
    let psi = wavefunction(v, grid, t)?;
    let dpsi = derivative_uniform(&psi, grid.spacing(), fd_order);
    let hbar = grid.params().hbar();
    let integrand: Vec<Complex64> = psi
        .iter()
        .zip(&dpsi)
        .map(|(a, d)| a.conj() * d * Complex64::new(0.0, -hbar))
        .collect();
    Ok(simpson_complex(&integrand, grid.spacing()))
}

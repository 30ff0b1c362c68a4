//! Special functions and asymptotic-series tooling.
//!
//! * exponentially scaled modified Bessel function `e^{-x} I₂(x)`
//! * error function and its one-term large-argument form
//! * Bernoulli numbers and the `coth` generating identity
//! * Gaussian lattice sums and their Euler–Maclaurin expansion

use std::f64::consts::PI;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::numerics::CompensatedSum;

/// Crossover between the power series and the asymptotic expansion of I₂.
pub const BESSEL_CROSSOVER: f64 = 30.0;

/// `e^{-x} I₂(x)` for `x ≥ 0`. Returns NaN for negative or NaN input.
pub fn bessel_i2_scaled(x: f64) -> f64 {
    if !(x >= 0.0) {
        return f64::NAN;
    }
    if x <= BESSEL_CROSSOVER {
        bessel_i2_scaled_series(x)
    } else {
        bessel_i2_scaled_asymptotic(x)
    }
}

/// `ln I₂(x)`, finite for every positive `x` (including where `I₂` itself
/// overflows).
pub fn ln_bessel_i2(x: f64) -> f64 {
    x + bessel_i2_scaled(x).ln()
}

/// Power series `Σ (x/2)^{2k+2} / (k!(k+2)!)`, scaled by `e^{-x}`.
pub(crate) fn bessel_i2_scaled_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let q = 0.25 * x * x;
    let mut term = 0.5 * q;
    let mut acc = CompensatedSum::new();
    let mut k = 0.0;
    loop {
        acc.add(term);
        k += 1.0;
        term *= q / (k * (k + 2.0));
        if term < 1e-17 * acc.value() {
            acc.add(term);
            break;
        }
    }
    acc.value() * (-x).exp()
}

/// Hankel expansion `e^{-x} I₂(x) ~ (2πx)^{-1/2} Σ (−1)^k a_k(2) / x^k`,
/// truncated at its smallest term.
pub(crate) fn bessel_i2_scaled_asymptotic(x: f64) -> f64 {
    let mu = 16.0; // 4ν²
    let mut term = 1.0f64;
    let mut acc = CompensatedSum::new();
    acc.add(term);
    let mut k = 1.0f64;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * k * x);
        if next == 0.0 || next.abs() >= term.abs() || next.abs() < 1e-17 {
            if next.abs() < term.abs() {
                acc.add(next);
            }
            break;
        }
        acc.add(next);
        term = next;
        k += 1.0;
    }
    acc.value() / (2.0 * PI * x).sqrt()
}

/// Error function (fdlibm, accurate to about one ulp).
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// `erf(x) ≈ 1 − e^{-x²} / (√π x)`, the leading large-`x` form.
pub fn erf_asymptotic(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("erf asymptotic form needs x > 0, got {x}"));
    }
    Ok(1.0 - (-x * x).exp() / (PI.sqrt() * x))
}

/// Largest `k` for which `B_{2k}/(2k)!` is cached.
pub const BERNOULLI_K_MAX: usize = 180;

struct BernoulliTable {
    /// `B_{2k}` for k = 0..=K (k = 0 is B₀ = 1); may be ±inf once out of range.
    even: Vec<f64>,
    /// `B_{2k} / (2k)!` for k = 0..=K.
    scaled: Vec<f64>,
}

fn bernoulli_table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| build_bernoulli_table(BERNOULLI_K_MAX))
}

/// Exact `B_{2k}` from the integer tangent numbers `T_k`:
/// `B_{2k} = (−1)^{k−1} 2k T_k / (4^k (4^k − 1))`.
fn build_bernoulli_table(kmax: usize) -> BernoulliTable {
    let mut tangent: Vec<BigInt> = vec![BigInt::zero(); kmax + 1];
    if kmax >= 1 {
        tangent[1] = BigInt::one();
    }
    for k in 2..=kmax {
        tangent[k] = &tangent[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=kmax {
        for j in k..=kmax {
            tangent[j] =
                &tangent[j - 1] * BigInt::from(j - k) + &tangent[j] * BigInt::from(j - k + 2);
        }
    }

    let mut even = vec![1.0];
    let mut scaled = vec![1.0];
    let mut factorial = BigInt::one();
    for (k, t) in tangent.iter().enumerate().skip(1) {
        let two_k = 2 * k;
        factorial *= BigInt::from(two_k - 1) * BigInt::from(two_k);
        let four_k = BigInt::one() << two_k;
        let denom = &four_k * (&four_k - BigInt::one());
        let mut b = BigRational::new(t * BigInt::from(two_k), denom);
        if k % 2 == 0 {
            b = -b;
        }
        even.push(b.to_f64().unwrap_or(f64::NAN));
        let s = b / BigRational::from_integer(factorial.clone());
        scaled.push(s.to_f64().unwrap_or(0.0));
    }
    BernoulliTable { even, scaled }
}

/// Bernoulli number `Bₙ` (convention `B₁ = −1/2`). `None` past the cached
/// range; `±inf` where the value exceeds `f64`.
pub fn bernoulli(n: usize) -> Option<f64> {
    match n {
        0 => Some(1.0),
        1 => Some(-0.5),
        n if n % 2 == 1 => Some(0.0),
        n => bernoulli_table().even.get(n / 2).copied(),
    }
}

/// `B_{2k} / (2k)!` for `1 ≤ k ≤ BERNOULLI_K_MAX`.
pub fn bernoulli_over_factorial(k: usize) -> Option<f64> {
    if k == 0 {
        return Some(1.0);
    }
    bernoulli_table().scaled.get(k).copied()
}

/// Residual of `½coth(x/2) − 1/x = Σ_{k≥1} B_{2k}/(2k)! x^{2k−1}` truncated
/// at `k_max` terms, valid for `0 < |x| < 2π`.
pub fn bernoulli_coth_check(x: f64, k_max: usize) -> Result<f64> {
    if !(x != 0.0 && x.abs() < 2.0 * PI) {
        return domain(format!("coth identity needs 0 < |x| < 2π, got {x}"));
    }
    if k_max == 0 || k_max > BERNOULLI_K_MAX {
        return domain(format!(
            "k_max must be in 1..={BERNOULLI_K_MAX}, got {k_max}"
        ));
    }
    let lhs = 0.5 / (0.5 * x).tanh() - 1.0 / x;
    let mut acc = CompensatedSum::new();
    let x2 = x * x;
    let mut power = x;
    for k in 1..=k_max {
        acc.add(bernoulli_over_factorial(k).expect("k within cache") * power);
        power *= x2;
    }
    Ok((lhs - acc.value()).abs())
}

/// `Σ_{n≥0} exp(−(n + shift − mean)² / (2σ²))`, summed outward from the
/// peak with compensation until terms fall below `1e−18` of the running
/// total. `shift = 0` gives the Gaussian-state normalisation `N_G(n₀, σ₀)`.
pub fn gaussian_lattice_sum(mean: f64, sigma: f64, shift: i64) -> f64 {
    assert!(sigma > 0.0 && sigma.is_finite(), "sigma must be positive");
    let centre = mean - shift as f64;
    let start = centre.round().max(0.0);
    // terms are scaled by the largest one so the stopping rule survives underflow
    let d0 = start - centre;
    let term = |n: f64| {
        let d = n - centre;
        (-(d - d0) * (d + d0) / (2.0 * sigma * sigma)).exp()
    };
    let mut acc = CompensatedSum::new();
    acc.add(term(start));

    let mut n = start + 1.0;
    loop {
        let t = term(n);
        acc.add(t);
        if n > centre && t < 1e-18 * acc.value() {
            break;
        }
        n += 1.0;
    }
    let mut n = start - 1.0;
    while n >= 0.0 {
        let t = term(n);
        acc.add(t);
        if n < centre && t < 1e-18 * acc.value() {
            break;
        }
        n -= 1.0;
    }
    acc.value() * (-d0 * d0 / (2.0 * sigma * sigma)).exp()
}

/// Constant of the leading boundary correction to `N_G`.
pub fn boundary_constant() -> f64 {
    1.0 / (1.0 - (2.0f64).exp())
}

/// Exact-versus-asymptotic bookkeeping for `N_G(z₀−1, √(z₀/2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticReport {
    pub argument: f64,
    /// Directly summed lattice sum.
    pub exact: f64,
    /// `√(πz₀) + e^{−(1−z₀)²/z₀} / (1 − e²)`.
    pub asymptotic: f64,
    /// `|exact − asymptotic| / exact`, evaluated without cancellation.
    pub relative_error: f64,
    /// `(exact − √(πz₀)) e^{(1−z₀)²/z₀}`; tends to `1/(1 − e²)`.
    pub boundary_coefficient: f64,
    /// `|boundary_coefficient − 1/(1 − e²)|`, the `O(1/z₀)` term.
    pub correction: f64,
}

/// `(Σ_{n≥0} g(n) − √(πz₀)) e^{y²}` with `g(n) = e^{−(n+1−z₀)²/z₀}` and
/// `y² = (z₀−1)²/z₀`, via Poisson summation minus the left tail. Every
/// term is scaled by `e^{y²}` analytically, so nothing cancels.
fn scaled_boundary_coefficient(z0: f64) -> f64 {
    let y2 = (z0 - 1.0) * (z0 - 1.0) / z0;
    let root = (PI * z0).sqrt();

    let mut alias = CompensatedSum::new();
    for k in 1.. {
        let k = k as f64;
        let log_mag = y2 - PI * PI * k * k * z0;
        if log_mag < -745.0 {
            break;
        }
        alias.add(2.0 * root * log_mag.exp() * (2.0 * PI * k * (1.0 - z0)).cos());
    }

    let mut tail = CompensatedSum::new();
    for m in 1.. {
        let m = m as f64;
        let t = (-(2.0 * m * (z0 - 1.0) + m * m) / z0).exp();
        tail.add(t);
        if t < 1e-18 * tail.value() {
            break;
        }
    }
    alias.value() - tail.value()
}

/// Compares `N_G(z₀−1, √(z₀/2))` against its leading Euler–Maclaurin form.
pub fn euler_maclaurin_n(z0: f64) -> Result<AsymptoticReport> {
    if !(z0 > 1.0 && z0.is_finite()) {
        return domain(format!("N_G expansion needs z0 > 1, got {z0}"));
    }
    let exact = gaussian_lattice_sum(z0, (0.5 * z0).sqrt(), 1);
    let y2 = (z0 - 1.0) * (z0 - 1.0) / z0;
    let boundary = (-y2).exp();
    let asymptotic = (PI * z0).sqrt() + boundary * boundary_constant();
    let coefficient = scaled_boundary_coefficient(z0);
    let correction = (coefficient - boundary_constant()).abs();
    // exp(-y2) may underflow; combine in log space
    let relative_error = if correction == 0.0 {
        0.0
    } else {
        (correction.ln() - y2 - exact.ln()).exp()
    };
    Ok(AsymptoticReport {
        argument: z0,
        exact,
        asymptotic,
        relative_error,
        boundary_coefficient: coefficient,
        correction,
    })
}

/// Euler–Maclaurin summation of `Σ_{n≥0} f(n)`:
/// `∫₀^∞ f + f(0)/2 − Σ_{k=1}^{k_max} B_{2k}/(2k)! f^{(2k−1)}(0)`.
///
/// `odd_derivative(m)` must return `f^{(m)}(0)` for odd `m`.
pub fn euler_maclaurin<F: Fn(usize) -> f64>(
    integral: f64,
    f0: f64,
    odd_derivative: F,
    k_max: usize,
) -> Result<f64> {
    if k_max > BERNOULLI_K_MAX {
        return domain(format!("k_max must be <= {BERNOULLI_K_MAX}"));
    }
    let mut acc = CompensatedSum::new();
    acc.add(integral);
    acc.add(0.5 * f0);
    for k in 1..=k_max {
        let b = bernoulli_over_factorial(k).expect("k within cache");
        acc.add(-b * odd_derivative(2 * k - 1));
    }
    Ok(acc.value())
}

/// Euler–Maclaurin estimate of `Σ_{n≥0} e^{−(n+1−z₀)²/z₀}` with `k_max`
/// correction terms. Derivatives come from Hermite polynomials:
/// `dᵐ/dnᵐ e^{−u²} = (−1)ᵐ z₀^{−m/2} Hₘ(u) e^{−u²}`, `u = (n+1−z₀)/√z₀`.
pub fn euler_maclaurin_gaussian(z0: f64, k_max: usize) -> Result<f64> {
    if !(z0 > 0.0 && z0.is_finite()) {
        return domain(format!("z0 must be positive, got {z0}"));
    }
    let root = z0.sqrt();
    let u0 = (1.0 - z0) / root;
    let g0 = (-u0 * u0).exp();
    let integral = 0.5 * (PI * z0).sqrt() * erfc(u0);

    let order = 2 * k_max;
    let mut hermite = vec![1.0, 2.0 * u0];
    for m in 1..order {
        let next = 2.0 * u0 * hermite[m] - 2.0 * m as f64 * hermite[m - 1];
        hermite.push(next);
    }
    let derivative = |m: usize| {
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * hermite[m] * root.powi(-(m as i32)) * g0
    };
    euler_maclaurin(integral, g0, derivative, k_max)
}

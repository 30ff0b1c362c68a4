//! Summation, quadrature and finite-difference helpers shared by the
//! physics modules.
//!
//! All reductions here have a fixed evaluation order, so results do not
//! depend on how callers distribute work across threads.

use num::complex::Complex64;

/// Neumaier (improved Kahan) compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(values);
    acc.value()
}

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (tree) summation with a fixed split rule.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise summation for complex values.
pub fn pairwise_sum_complex(values: &[Complex64]) -> Complex64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_complex(&values[..mid]) + pairwise_sum_complex(&values[mid..])
}

/// Integrates uniformly spaced samples with composite Simpson's rule.
///
/// An odd number of intervals is handled with a 3/8 rule on the last three
/// intervals. Two samples fall back to the trapezoid rule.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        4 => 3.0 * h / 8.0 * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3]),
        n => {
            let intervals = n - 1;
            if intervals % 2 == 0 {
                simpson_even(values, h)
            } else {
                let split = n - 3;
                let tail = &values[split - 1..];
                simpson_even(&values[..split], h)
                    + 3.0 * h / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3])
            }
        }
    }
}

fn simpson_even(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    debug_assert!(n % 2 == 1);
    let weighted: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * v
        })
        .collect();
    h / 3.0 * pairwise_sum(&weighted)
}

/// Simpson integration of complex samples.
pub fn simpson_complex(values: &[Complex64], h: f64) -> Complex64 {
    let re: Vec<f64> = values.iter().map(|c| c.re).collect();
    let im: Vec<f64> = values.iter().map(|c| c.im).collect();
    Complex64::new(simpson(&re, h), simpson(&im, h))
}

/// Integrates `f` over `[a, b]` with composite Simpson on `panels` panels
/// (rounded up to an even count).
pub fn simpson_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = (panels.max(2) + 1) & !1;
    let h = (b - a) / panels as f64;
    let samples: Vec<f64> = (0..=panels).map(|i| f(a + h * i as f64)).collect();
    simpson(&samples, h)
}

/// Complex version of [`simpson_fn`].
pub fn simpson_fn_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
) -> Complex64 {
    let panels = (panels.max(2) + 1) & !1;
    let h = (b - a) / panels as f64;
    let samples: Vec<Complex64> = (0..=panels).map(|i| f(a + h * i as f64)).collect();
    simpson_complex(&samples, h)
}

/// Simpson on `panels` and `2 * panels`, Richardson-extrapolated.
///
/// Returns the extrapolated value together with the difference between the
/// two raw estimates, which bounds the discretisation error.
pub fn simpson_richardson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> (f64, f64) {
    let coarse = simpson_fn(&f, a, b, panels);
    let fine = simpson_fn(&f, a, b, 2 * panels);
    (fine + (fine - coarse) / 15.0, (fine - coarse).abs())
}

/// Finite-difference weights for the `derivative`-th derivative at `x0`
/// using the nodes `xs` (Fornberg's algorithm).
pub fn fornberg_weights(x0: f64, xs: &[f64], derivative: usize) -> Vec<f64> {
    let n = xs.len();
    assert!(n > derivative, "need more nodes than the derivative order");
    let m = derivative;
    // c[j][k]: weight of node j for the k-th derivative
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// First derivative of uniformly sampled complex data with a stencil of
/// the given even accuracy order. Centred in the interior, shifted
/// one-sided stencils of the same width near the ends.
pub fn derivative_uniform(values: &[Complex64], h: f64, order: usize) -> Vec<Complex64> {
    assert!(
        order >= 2 && order.is_multiple_of(2),
        "order must be even and >= 2"
    );
    let n = values.len();
    let width = order + 1;
    assert!(n >= width, "not enough samples for the requested stencil");
    let half = order / 2;
    // weights depend only on the node offset relative to the stencil start
    let offsets: Vec<f64> = (0..width).map(|k| k as f64).collect();
    let weight_table: Vec<Vec<f64>> = (0..width)
        .map(|pos| fornberg_weights(pos as f64, &offsets, 1))
        .collect();
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(half).min(n - width);
            let weights = &weight_table[i - start];
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, w) in weights.iter().enumerate() {
                acc += values[start + k] * *w;
            }
            acc / h
        })
        .collect()
}

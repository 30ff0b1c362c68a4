//! The CLI verbs. Each one renders its full output into a string so that
//! results do not depend on buffering or thread scheduling.

use std::f64::consts::PI;
use std::fmt::Write as _;

use isw_coherent::approx::{
    approx_density, approx_wavefunction, border_pr, check_validity, fourier_j_max, fourier_p0,
    fourier_pl, l1_distance, linf_distance, packet, phase_aligned_l2,
};
use isw_coherent::dynamics::{
    density, density_double_sum, evolve, observables, p2_matrix_element, p_matrix_element,
    wavefunction, x2_matrix_element, x_matrix_element,
};
use isw_coherent::equivalence::{equivalence_report, near_validity_edge, poisson_gaussian_gap};
use isw_coherent::numerics::simpson_richardson;
use isw_coherent::specfun::euler_maclaurin_n;
use isw_coherent::states::build;
use isw_coherent::well::check_su11;
use isw_coherent::{CoefficientVector, Error, GcsParams, SpaceGrid, StateSpec, WellParams};
use rayon::prelude::*;

use crate::config::Resolved;
use crate::CliError;

pub fn version_line() -> String {
    format!("# version=iswcs {}\n", env!("CARGO_PKG_VERSION"))
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(values: &[f64]) -> String {
    let mut s = values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

/// Errors caused by the inputs are configuration errors; the rest break a
/// numerical contract.
pub(crate) fn classify(e: Error) -> CliError {
    match e {
        Error::Domain(_) | Error::Resolution { .. } => CliError::Config(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn state_vector(r: &Resolved) -> Result<CoefficientVector, CliError> {
    build(r.state, r.tail).map_err(classify)
}

fn space_grid(r: &Resolved, v: &CoefficientVector) -> Result<SpaceGrid, CliError> {
    match r.space_count {
        Some(n) => SpaceGrid::new(r.params, n),
        None => SpaceGrid::resolving(r.params, v.n_max()),
    }
    .map_err(classify)
}

fn require_gcs(r: &Resolved, verb: &str) -> Result<GcsParams, CliError> {
    match r.state {
        StateSpec::Gcs(g) => Ok(g),
        StateSpec::Gecs(_) => Err(CliError::Config(format!(
            "`{verb}` compares against the Gaussian packet and needs state.family = \"gcs\""
        ))),
    }
}

pub fn observables_csv(r: &Resolved) -> Result<String, CliError> {
    let v = state_vector(r)?;
    let s = observables(&v, &r.params, &r.times).map_err(classify)?;
    let mut out = version_line();
    out.push_str("t,mean_x,mean_p,delta_x,delta_p,heisenberg\n");
    for i in 0..s.len() {
        out.push_str(&row(&[
            s.times[i],
            s.mean_x[i],
            s.mean_p[i],
            s.delta_x[i],
            s.delta_p[i],
            s.heisenberg[i],
        ]));
    }
    Ok(out)
}

pub fn density_csv(r: &Resolved, t: f64) -> Result<String, CliError> {
    let gcs = require_gcs(r, "density")?;
    let v = state_vector(r)?;
    let grid = space_grid(r, &v)?;
    let exact = density(&v, &grid, t).map_err(classify)?;
    let pk = packet(&r.params, &gcs, t);
    let approx = approx_density(&pk, &grid);
    let p0 = fourier_p0(&gcs, &r.params, t, fourier_j_max(pk.sigma), &grid).map_err(classify)?;
    let pl = fourier_pl(&gcs, &r.params, t, &grid).map_err(classify)?;
    let pr = border_pr(&gcs, &r.params, t, &grid);
    let validity = check_validity(&gcs, &r.params, t, &r.thresholds);

    let mut out = version_line();
    out.push_str("x,exact,approx_prop1,fourier_P0,Pl,Pr,abs_err\n");
    for (i, x) in grid.points().iter().enumerate() {
        out.push_str(&row(&[
            *x,
            exact[i],
            approx[i],
            p0[i],
            pl[i],
            pr[i],
            (exact[i] - approx[i]).abs(),
        ]));
    }
    let verdict = if validity.all_pass() {
        "pass".to_string()
    } else {
        format!("fail:{}", validity.failures().join(";"))
    };
    writeln!(
        out,
        "# L1={},Linf={},validity={}",
        num(l1_distance(&exact, &approx, &grid)),
        num(linf_distance(&exact, &approx)),
        verdict
    )
    .expect("writing to a string");
    Ok(out)
}

pub fn wavefunction_csv(r: &Resolved, t: f64) -> Result<String, CliError> {
    let v = state_vector(r)?;
    let grid = space_grid(r, &v)?;
    let psi = wavefunction(&v, &grid, t).map_err(classify)?;
    let mut out = version_line();
    match r.state {
        StateSpec::Gcs(gcs) => {
            let approx = approx_wavefunction(&packet(&r.params, &gcs, t), &grid);
            let (l2, phase) = phase_aligned_l2(&psi, &approx, &grid);
            let rot = num::complex::Complex64::from_polar(1.0, phase);
            out.push_str("x,re,im,approx_re,approx_im\n");
            for (i, x) in grid.points().iter().enumerate() {
                let a = rot * approx[i];
                out.push_str(&row(&[*x, psi[i].re, psi[i].im, a.re, a.im]));
            }
            writeln!(out, "# L2={},phase={}", num(l2), num(phase)).expect("writing to a string");
        }
        StateSpec::Gecs(_) => {
            out.push_str("x,re,im\n");
            for (i, x) in grid.points().iter().enumerate() {
                out.push_str(&row(&[*x, psi[i].re, psi[i].im]));
            }
        }
    }
    Ok(out)
}

pub const DEFAULT_Z0: [f64; 3] = [25.0, 100.0, 400.0];

pub fn equivalence_csv(z0s: &[f64]) -> Result<String, CliError> {
    if z0s.is_empty() {
        return Err(CliError::Config("z0 list is empty".into()));
    }
    let rows: Vec<String> = z0s
        .par_iter()
        .map(|&z0| {
            let rep = equivalence_report(z0, 0.0).map_err(classify)?;
            let gap = poisson_gaussian_gap(z0).map_err(classify)?;
            let ng = euler_maclaurin_n(z0).map_err(classify)?;
            let mut line = row(&[
                z0,
                rep.fidelity,
                rep.coeff_l1,
                gap,
                ng.exact,
                ng.asymptotic,
                ng.relative_error,
            ]);
            line.pop();
            line.push_str(if near_validity_edge(z0) {
                ",1\n"
            } else {
                ",0\n"
            });
            Ok(line)
        })
        .collect::<Result<_, CliError>>()?;
    let mut out = version_line();
    out.push_str("z0,fidelity,coeff_L1,poisson_gap,NG_exact,NG_asymptotic,NG_relerr,warn\n");
    rows.iter().for_each(|l| out.push_str(l));
    Ok(out)
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, value: f64, limit: f64) -> Check {
    Check {
        name,
        pass: value <= limit,
        detail: format!("{} <= {}", num(value), num(limit)),
    }
}

/// Largest deviation of the closed-form `x`, `x²`, `p`, `p²` elements from
/// quadrature over `n, m ≤ n_max`, each scaled by its natural unit.
pub fn matrix_element_defect(params: &WellParams, n_max: usize) -> f64 {
    let l = params.length();
    let k = |n: usize| (n + 1) as f64 * PI / l;
    let psi = |n: usize, x: f64| (2.0 / l).sqrt() * (k(n) * x).sin();
    let dpsi = |n: usize, x: f64| (2.0 / l).sqrt() * k(n) * (k(n) * x).cos();
    let q = |f: &dyn Fn(f64) -> f64| simpson_richardson(f, 0.0, l, 4000).0;
    let hbar = params.hbar();
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            (0..=n_max)
                .map(|m| {
                    let dx = (x_matrix_element(params, n, m) - q(&|x| x * psi(n, x) * psi(m, x)))
                        .abs()
                        / l;
                    let dx2 = (x2_matrix_element(params, n, m)
                        - q(&|x| x * x * psi(n, x) * psi(m, x)))
                    .abs()
                        / (l * l);
                    let dp = (p_matrix_element(params, n, m).im
                        + hbar * q(&|x| psi(n, x) * dpsi(m, x)))
                    .abs()
                        / (hbar / l);
                    let dp2 = (p2_matrix_element(params, n, m)
                        - hbar * hbar * q(&|x| dpsi(n, x) * dpsi(m, x)))
                    .abs()
                        / (hbar * hbar / (l * l));
                    dx.max(dx2).max(dp).max(dp2)
                })
                .fold(0.0, f64::max)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// Runs the invariant suites. Returns the report and whether every check
/// passed.
pub fn verify(r: &Resolved) -> Result<(String, bool), CliError> {
    let mut checks = Vec::new();

    let su = check_su11(50, 1e-12).map_err(classify)?;
    checks.push(check(
        "su11_commutators_dim50",
        su.lowering.max(su.raising).max(su.closure),
        1e-12,
    ));
    checks.push(check(
        "ladder_factorization_exact",
        su.factorization,
        f64::EPSILON,
    ));
    checks.push(check(
        "matrix_elements_vs_quadrature",
        matrix_element_defect(&r.params, 25),
        1e-9,
    ));

    let v = state_vector(r)?;
    let norm_drift = r
        .times
        .times()
        .iter()
        .map(|&t| (evolve(&v, &r.params, t).norm_sqr() - v.norm_sqr()).abs())
        .fold(0.0, f64::max);
    checks.push(check("evolve_norm_conservation", norm_drift, 1e-14));

    let series = observables(&v, &r.params, &r.times).map_err(classify)?;
    let floor = series
        .heisenberg
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    checks.push(Check {
        name: "heisenberg_floor",
        pass: floor >= 0.5 - 1e-9,
        detail: format!("min {} >= {}", num(floor), num(0.5 - 1e-9)),
    });
    let l = r.params.length();
    let outside = series
        .mean_x
        .iter()
        .filter(|x| !(0.0..=l).contains(*x))
        .count();
    checks.push(Check {
        name: "mean_x_inside_well",
        pass: outside == 0,
        detail: format!("{outside} samples outside [0, L]"),
    });

    let grid = space_grid(r, &v)?;
    let rho = density(&v, &grid, r.t).map_err(classify)?;
    checks.push(check(
        "density_normalisation",
        (grid.integrate(&rho) - 1.0).abs(),
        1e-6,
    ));
    let alt = density_double_sum(&v, &grid, r.t).map_err(classify)?;
    checks.push(check("density_dual_path", linf_distance(&rho, &alt), 1e-10));
    let negative = rho.iter().copied().fold(0.0, f64::min);
    checks.push(check("density_nonnegative", -negative, 1e-12));

    let base = equivalence_report(100.0, 0.0).map_err(classify)?.fidelity;
    let spread = [PI / 4.0, PI]
        .iter()
        .map(|&phi| equivalence_report(100.0, phi).map(|e| (e.fidelity - base).abs()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(classify)?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(check("fidelity_phase_invariance", spread, 1e-12));

    let mut out = version_line();
    for c in &checks {
        writeln!(
            out,
            "{} {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )
        .expect("writing to a string");
    }
    Ok((out, checks.iter().all(|c| c.pass)))
}

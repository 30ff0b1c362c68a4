use std::f64::consts::PI;

use isw_coherent::approx::{check_validity, packet, ValidityThresholds};
use isw_coherent::dynamics::{
    density, evolve, p_matrix_element, x2_matrix_element, x_matrix_element, ObservableEvaluator,
};
use isw_coherent::equivalence::equivalence_report;
use isw_coherent::specfun::{bessel_i2_scaled, BESSEL_CROSSOVER};
use isw_coherent::states::{build_gcs, build_gecs, overlap, DEFAULT_TAIL_TOL};
use isw_coherent::{GcsParams, GecsParams, SpaceGrid, WellParams};
use proptest::prelude::*;

fn well() -> impl Strategy<Value = WellParams> {
    (0.2f64..5.0, 0.5f64..6.0, 0.3f64..3.0).prop_map(|(m, l, h)| WellParams::new(m, l, h).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_preserves_norm(n0 in 0.0f64..800.0, s0 in 0.3f64..20.0, phi in -7.0f64..7.0, t in -50.0f64..50.0, p in well()) {
        let v = build_gcs(GcsParams::new(n0, s0, phi).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        let w = evolve(&v, &p, t);
        prop_assert!((w.norm_sqr() - v.norm_sqr()).abs() < 1e-14);
        prop_assert!((v.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gcs_window_and_peak(n0 in 0.0f64..2000.0, s0 in 0.5f64..30.0, phi in 0.0f64..6.3) {
        let v = build_gcs(GcsParams::new(n0, s0, phi).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        let nearest = n0.round() as i64;
        prop_assert!((v.argmax() as i64 - nearest).abs() <= 1);
        let pmax = v.get(v.argmax()).norm_sqr();
        prop_assert!(v.get(v.n_max()).norm_sqr() < DEFAULT_TAIL_TOL * pmax);
        if v.n_min() > 0 {
            prop_assert!(v.get(v.n_min()).norm_sqr() < DEFAULT_TAIL_TOL * pmax);
        }
    }

    #[test]
    fn gecs_normalised_with_peak_near_z0(z0 in 5.0f64..3000.0, phi in 0.0f64..6.3) {
        let v = build_gecs(GecsParams::new(z0, phi).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        prop_assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((v.argmax() as f64 - (z0 - 1.0)).abs() <= 2.0);
    }

    #[test]
    fn phase_steps_by_minus_phi0(n0 in 20.0f64..600.0, phi in -3.0f64..3.0) {
        let v = build_gcs(GcsParams::new(n0, 4.0, phi).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        let n = n0.round() as usize;
        let step = (v.get(n + 1) / v.get(n)).arg();
        let diff = (step + phi).rem_euclid(2.0 * PI);
        prop_assert!(diff.min(2.0 * PI - diff) < 1e-12);
    }

    #[test]
    fn overlap_bounded(a in 10.0f64..200.0, b in 10.0f64..200.0, s in 1.0f64..8.0, phi in 0.0f64..6.3) {
        let u = build_gcs(GcsParams::new(a, s, phi).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        let v = build_gcs(GcsParams::new(b, s, 0.0).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        prop_assert!(overlap(&u, &v).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn matrix_elements_are_hermitian(n in 0usize..200, m in 0usize..200, p in well()) {
        prop_assert_eq!(x_matrix_element(&p, n, m), x_matrix_element(&p, m, n));
        prop_assert_eq!(x2_matrix_element(&p, n, m), x2_matrix_element(&p, m, n));
        prop_assert_eq!(p_matrix_element(&p, n, m), p_matrix_element(&p, m, n).conj());
    }

    #[test]
    fn uncertainty_floor(n0 in 5.0f64..120.0, s0 in 0.8f64..8.0, phi in 0.0f64..6.3, t in 0.0f64..2.0, p in well()) {
        let v = build_gcs(GcsParams::new(n0, s0, phi).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        let o = ObservableEvaluator::new(&v, &p).at(t).unwrap();
        prop_assert!(o.heisenberg >= 0.5 - 1e-9, "{}", o.heisenberg);
        prop_assert!(o.mean_x >= 0.0 && o.mean_x <= p.length());
    }

    #[test]
    fn density_normalised_and_nonnegative(n0 in 5.0f64..150.0, s0 in 0.8f64..6.0, t in 0.0f64..1.0) {
        let p = WellParams::default();
        let v = build_gcs(GcsParams::new(n0, s0, 1.0).unwrap(), DEFAULT_TAIL_TOL).unwrap();
        let g = SpaceGrid::resolving(p, v.n_max()).unwrap();
        let rho = density(&v, &g, t).unwrap();
        prop_assert!((g.integrate(&rho) - 1.0).abs() < 1e-6);
        prop_assert!(rho.iter().all(|&r| r >= -1e-12));
    }

    #[test]
    fn packet_identities(n0 in 10.0f64..2000.0, s0 in 0.5f64..30.0, t1 in 0.0f64..1.0, dt in 1e-6f64..1.0, p in well()) {
        let g = GcsParams::new(n0, s0, 1.0).unwrap();
        let a = packet(&p, &g, t1);
        let b = packet(&p, &g, t1 + dt);
        prop_assert!((a.s * a.sigma - p.length() / (2.0 * PI)).abs() < 1e-13 * p.length());
        prop_assert!(b.s > a.s);
        prop_assert!((packet(&p, &g, 0.0).sigma - s0).abs() < 1e-13 * s0);
    }

    #[test]
    fn validity_flags_follow_ratios(n0 in 1.0f64..1000.0, s0 in 0.5f64..20.0, phi in 0.0f64..3.1, t in 0.0f64..0.05) {
        let p = WellParams::default();
        let th = ValidityThresholds::default();
        let c = check_validity(&GcsParams::new(n0, s0, phi).unwrap(), &p, t, &th);
        for (_, cond) in c.conditions() {
            prop_assert_eq!(cond.passes(), cond.ratio > cond.threshold);
        }
        prop_assert_eq!(c.all_pass(), c.failures().is_empty());
    }

    #[test]
    fn fidelity_in_unit_interval(z0 in 1.5f64..300.0, phi in 0.0f64..6.3) {
        let f = equivalence_report(z0, phi).unwrap().fidelity;
        prop_assert!((0.0..=1.0 + 1e-10).contains(&f));
    }

    #[test]
    fn scaled_bessel_positive_and_bounded(x in 1e-3f64..1e4) {
        let v = bessel_i2_scaled(x);
        prop_assert!(v > 0.0 && v < 1.0 / (2.0 * PI * x).sqrt() * 1.01 + 1e-300 || x < 5.0);
    }
}

#[test]
fn scaled_bessel_is_continuous_at_crossover() {
    let below = bessel_i2_scaled(BESSEL_CROSSOVER);
    let above = bessel_i2_scaled(BESSEL_CROSSOVER.next_up());
    assert!((below - above).abs() < 1e-14 * above, "{below} vs {above}");
}

mod common;

use common::*;
use fsosec_core::channel::*;
use fsosec_core::montecarlo::sample_irradiance;
use fsosec_core::{Scenario, ScenarioConfig, SimConfig};
use proptest::prelude::*;

fn geometry() -> GeometryConfig {
    GeometryConfig::default()
}

#[test]
fn turbulence_matches_direct_evaluation() {
    let g = geometry();
    for d in [300.0, 1000.0, 2500.0] {
        let t = turbulence_params(&g, d).unwrap();
        let (s2, alpha, beta) = turbulence_oracle(g.cn2, g.wavelength_m, d);
        assert!((t.rytov_var - s2).abs() <= 1e-12 * s2);
        assert!((t.alpha - alpha).abs() <= 1e-10 * alpha);
        assert!((t.beta_single - beta).abs() <= 1e-10 * beta);
    }
    let t = turbulence_params(&g, 1000.0).unwrap();
    // quoted as ≈ 0.3386; direct evaluation gives 0.338462
    assert!((t.rytov_var - 0.3386).abs() < 2e-4);
}

#[test]
fn turbulence_rejects_bad_distance() {
    assert!(turbulence_params(&geometry(), 0.0).is_err());
    assert!(turbulence_params(&geometry(), -5.0).is_err());
}

#[test]
fn vanishing_turbulence_is_capped() {
    let mut g = geometry();
    g.cn2 = 1e-30;
    let t = turbulence_params(&g, 1000.0).unwrap();
    assert!(t.alpha > 1e6 && t.beta_single > 1e6);
}

#[test]
fn pointing_values() {
    let p = pointing_params(&geometry(), 2.0).unwrap();
    assert!((p.nu - 0.050133).abs() < 1e-6);
    assert!((p.a0 - 0.0031947).abs() < 1e-7);
    assert!((p.a0 - erf_maclaurin(p.nu).powi(2)).abs() < 1e-16);
    assert!((p.omega_e - 2.50211).abs() < 5e-5);
    assert!((p.xi - 0.62553).abs() < 1e-5);
    assert!((p.xi - p.omega_e / 4.0).abs() < 1e-15);
    assert!(p.a0 > 0.0 && p.a0 < 1.0);
    let free = pointing_params(&geometry(), 0.0).unwrap();
    assert!(free.is_pointing_free());
    assert!(pointing_params(&geometry(), -1.0).is_err());
}

#[test]
fn gamma_approx_examples() {
    let ga = gamma_approx_shapes(6.12, 5.55, 0.0, 0.97).unwrap();
    let k = 1.0 / ((5.55 + 1.0) * (6.12 + 1.0) / (5.55 * 6.12) - 1.0);
    assert!((ga.k_ap - k).abs() <= 1e-12 * k);
    assert!((ga.mean() - 0.97).abs() < 1e-14);
    let big = gamma_approx_shapes(1e12, 1e12, 0.0, 1.0).unwrap();
    assert!(big.k_ap > 1e11 && big.theta_ap < 1e-11);
    assert!((big.mean() - 1.0).abs() < 1e-12);
    // ε large enough to make the bracket non-positive
    assert!(gamma_approx_shapes(6.12, 5.55, 1.0, 0.97).is_err());
    assert!(gamma_approx_shapes(6.12, 5.55, 0.0, 0.0).is_err());
}

#[test]
fn gamma_approx_uses_aggregated_beta() {
    let t = turbulence_params(&geometry(), 1000.0).unwrap();
    let one = gamma_approx(&t, 2, 0.0, 0.97).unwrap();
    let two = gamma_approx_shapes(t.alpha, 2.0 * t.beta_single, 0.0, 0.97).unwrap();
    assert_eq!(one, two);
    assert!(gamma_approx(&t, 0, 0.0, 0.97).is_err());
}

#[test]
fn gg_cdf_examples() {
    assert_eq!(gg_cdf(6.12, 5.55, 0.0).unwrap(), 0.0);
    assert!(gg_cdf(6.12, 5.55, 50.0).unwrap() >= 1.0 - 1e-6);
    let want = gg_cdf_oracle(6.12, 5.55, 1.0);
    let got = gg_cdf(6.12, 5.55, 1.0).unwrap();
    assert!((got - want).abs() <= 1e-7, "{got} vs {want}");
    assert!(gg_cdf(6.12, 5.55, -1.0).is_err());
    assert!(gg_cdf(0.0, 5.55, 1.0).is_err());
}

#[test]
fn gg_cdf_matches_oracle_across_shapes() {
    for (a, b) in [(2.5, 1.3), (7.717515, 12.40042), (4.0, 6.0), (15.0, 30.0)] {
        for x in [0.05, 0.3, 1.0, 2.5] {
            let want = gg_cdf_oracle(a, b, x);
            let got = gg_cdf(a, b, x).unwrap();
            assert!((got - want).abs() <= 1e-7, "({a}, {b}, {x}): {got} vs {want}");
        }
    }
}

#[test]
fn ggp_cdf_examples() {
    assert_eq!(ggp_cdf(6.12, 11.10, 0.62553, 0.0).unwrap(), 0.0);
    let xi = 0.39129f64.sqrt();
    let want = ggp_cdf_oracle(6.12, 11.10, 0.39129, 0.5);
    let got = ggp_cdf(6.12, 11.10, xi, 0.5).unwrap();
    assert!((got - want).abs() <= 1e-6, "{got} vs {want}");
    for x in [0.2, 1.0, 3.0] {
        assert_eq!(
            ggp_cdf(6.12, 11.10, f64::INFINITY, x).unwrap(),
            gg_cdf(6.12, 11.10, x).unwrap()
        );
        let near = ggp_cdf(6.12, 11.10, 1e3, x).unwrap();
        assert!((near - gg_cdf(6.12, 11.10, x).unwrap()).abs() < 1e-4);
    }
    assert!(ggp_cdf(6.12, 11.10, 0.0, 0.5).is_err());
}

#[test]
fn ggp_cdf_matches_oracle_across_pointing() {
    for sigma_s in [1.0, 3.0] {
        let p = pointing_params(&geometry(), sigma_s).unwrap();
        for x in [0.05, 0.4, 1.5] {
            let want = ggp_cdf_oracle(7.717515, 12.40042, p.xi_sq(), x);
            let got = ggp_cdf(7.717515, 12.40042, p.xi, x).unwrap();
            assert!((got - want).abs() <= 1e-6, "σ_s {sigma_s}, x {x}: {got} vs {want}");
        }
    }
}

#[test]
fn ggp_cdf_large_xi_matches_oracle() {
    for xi in [10.0, 30.0, 1e3] {
        for x in [0.05, 0.2, 1.0] {
            let want = ggp_cdf_oracle(6.12, 11.10, xi * xi, x);
            let got = ggp_cdf(6.12, 11.10, xi, x).unwrap();
            assert!((got - want).abs() <= 1e-6, "ξ {xi}, x {x}: {got} vs {want}");
        }
    }
}

#[test]
fn ggp_cdf_approx_examples() {
    let sc = Scenario::baseline();
    let ga = sc.approx_eve;
    let xi = sc.xi();
    assert_eq!(ggp_cdf_approx(&ga, xi, 0.0).unwrap(), 0.0);
    assert_eq!(ggp_cdf_approx(&ga, xi, f64::INFINITY).unwrap(), 1.0);
    assert!(ggp_cdf_approx(&ga, xi, 1e4).unwrap() > 1.0 - 1e-9);
    let (a, b) = (sc.turb_eve.alpha, sc.beta_agg_eve());
    for i in 1..=40 {
        let x = 0.05 * i as f64;
        let exact = ggp_cdf(a, b, xi, x).unwrap();
        let approx = ggp_cdf_approx(&ga, xi, x).unwrap();
        assert!((exact - approx).abs() <= 0.02, "x = {x}: {approx} vs {exact}");
    }
}

#[test]
fn ggp_pdf_approx_is_cdf_derivative() {
    let sc = Scenario::baseline();
    let (ga, xi) = (sc.approx_eve, sc.xi());
    for x in [0.1, 0.5, 1.2] {
        let h = 1e-5;
        let fd = (ggp_cdf_approx(&ga, xi, x + h).unwrap() - ggp_cdf_approx(&ga, xi, x - h).unwrap()) / (2.0 * h);
        let pdf = ggp_pdf_approx(&ga, xi, x).unwrap();
        assert!((fd - pdf).abs() <= 1e-5 * pdf.max(1.0), "{fd} vs {pdf}");
    }
}

#[test]
fn snr_threshold_examples() {
    let node = NodeConfig {
        n_a: 2,
        n_b: 1,
        n_e: 2,
        gamma0: 1e4,
    };
    let mut p = pointing_params(&geometry(), 2.0).unwrap();
    assert_eq!(snr_threshold(&node, &p, 0.0, Receiver::Eve).unwrap().value, 0.0);
    p.a0 = 0.0031947;
    let v = snr_threshold(&node, &p, 1.0, Receiver::Eve).unwrap().value;
    assert!((v - 0.015651).abs() < 1e-6, "{v}");
    let doubled = NodeConfig { gamma0: 2e4, ..node };
    let half = snr_threshold(&doubled, &p, 1.0, Receiver::Eve).unwrap().value;
    assert!((half - v / 2.0).abs() <= 1e-15);
    assert!(snr_threshold(&node, &p, -0.1, Receiver::Bob).is_err());
}

#[test]
fn gg_pdf_normalization_mean_and_derivative() {
    let (a, b) = (6.12, 5.55);
    let mass = tanh_sinh_inf(|i| if i > 0.0 { gg_pdf(a, b, i).unwrap() } else { 0.0 }, 0.0, 1e-12);
    assert!((mass - 1.0).abs() <= 1e-6, "{mass}");
    let mean = tanh_sinh_inf(|i| if i > 0.0 { i * gg_pdf(a, b, i).unwrap() } else { 0.0 }, 0.0, 1e-12);
    assert!((mean - 1.0).abs() <= 1e-6, "{mean}");
    let h = 1e-5;
    for i in [0.3, 1.0, 2.0] {
        let fd = (gg_cdf(a, b, i + h).unwrap() - gg_cdf(a, b, i - h).unwrap()) / (2.0 * h);
        assert!((fd - gg_pdf(a, b, i).unwrap()).abs() <= 1e-5);
    }
    assert!(gg_pdf(a, b, 0.0).is_err());
}

#[test]
fn cdf_kernels_monotone_on_grids() {
    let sc = Scenario::baseline();
    let (a, b, xi) = (sc.turb_eve.alpha, sc.beta_agg_eve(), sc.xi());
    let ga = sc.approx_eve;
    let mut prev = [0.0f64; 3];
    for i in 0..200 {
        let x = 5.0 * i as f64 / 199.0;
        let vals = [
            gg_cdf(a, b, x).unwrap(),
            ggp_cdf(a, b, xi, x).unwrap(),
            ggp_cdf_approx(&ga, xi, x).unwrap(),
        ];
        for (v, p) in vals.iter().zip(prev.iter()) {
            assert!(*v >= *p && *v >= 0.0 && *v <= 1.0 + 1e-9, "x = {x}");
        }
        prev = vals;
    }
}

#[test]
fn pointing_loss_raises_cdf() {
    let sc = Scenario::baseline();
    let (a, b, xi) = (sc.turb_eve.alpha, sc.beta_agg_eve(), sc.xi());
    for i in 1..=50 {
        let x = 0.06 * i as f64;
        assert!(ggp_cdf(a, b, xi, x).unwrap() >= gg_cdf(a, b, x).unwrap(), "x = {x}");
    }
}

fn quantile_agreement(samples: &[f64], cdf: impl Fn(f64) -> f64) {
    let n = samples.len() as f64;
    for q in quantile_points(&cdf, 50.0) {
        let f = cdf(q);
        let emp = empirical_cdf(samples, q);
        let tol = 3.0 * (f * (1.0 - f) / n).sqrt() + 1e-4;
        assert!((emp - f).abs() <= tol, "q = {q}: {emp} vs {f}");
    }
}

#[test]
fn sampled_eve_matches_ggp_cdf() {
    let sc = Scenario::baseline();
    let sim = SimConfig::new(1_000_000, 7);
    let n_e = sc.nodes().n_e as f64;
    let s: Vec<f64> = sample_irradiance(&sc, Receiver::Eve, &sim).unwrap().iter().map(|v| v / n_e).collect();
    let (a, b, xi) = (sc.turb_eve.alpha, sc.beta_agg_eve(), sc.xi());
    quantile_agreement(&s, |x| ggp_cdf(a, b, xi, x).unwrap());
}

#[test]
fn sampled_bob_matches_gg_cdf() {
    let cfg = ScenarioConfig::default().with_apertures(1, 2, 2);
    let sc = Scenario::new(cfg).unwrap();
    let sim = SimConfig::new(1_000_000, 8);
    let s: Vec<f64> = sample_irradiance(&sc, Receiver::Bob, &sim).unwrap().iter().map(|v| v / 2.0).collect();
    let (a, b) = (sc.turb_bob.alpha, sc.beta_agg_bob());
    quantile_agreement(&s, |x| gg_cdf(a, b, x).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_approx_mean_is_omega(a in 0.5f64..50.0, b in 0.5f64..50.0, omega in 0.1f64..2.0) {
        let ga = gamma_approx_shapes(a, b, 0.0, omega).unwrap();
        prop_assert!(ga.k_ap > 0.0 && ga.theta_ap > 0.0);
        prop_assert!((ga.mean() - omega).abs() <= 1e-12 * omega);
    }

    #[test]
    fn gg_cdf_in_unit_interval(a in 1.0f64..20.0, b in 1.0f64..40.0, x in 0.0f64..10.0) {
        let v = gg_cdf(a, b, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn snr_threshold_scales_with_gamma0(rate in 0.0f64..10.0, g in 1.0f64..1e6) {
        let p = pointing_params(&geometry(), 2.0).unwrap();
        let n1 = NodeConfig { gamma0: g, ..NodeConfig::default() };
        let n2 = NodeConfig { gamma0: 2.0 * g, ..NodeConfig::default() };
        let v1 = snr_threshold(&n1, &p, rate, Receiver::Bob).unwrap().value;
        let v2 = snr_threshold(&n2, &p, rate, Receiver::Bob).unwrap().value;
        prop_assert!((v1 - 2.0 * v2).abs() <= 1e-12 * v1.max(1e-300));
    }
}

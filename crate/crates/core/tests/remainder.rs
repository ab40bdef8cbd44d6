use sgtool_core::remainder::*;
use sgtool_core::Error;

fn grid(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt).round() as usize;
    (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
}

#[test]
fn classical_gronwall_is_exponential() {
    let t = grid(1.0, 1e-3);
    let a0 = 0.7;
    let ones = vec![1.0; t.len()];
    let out = gronwall_bound(&t, &vec![a0; t.len()], None, &ones, &ones).unwrap();
    for (ti, v) in t.iter().zip(&out) {
        assert!((v - a0 * ti.exp()).abs() < 1e-6, "t={ti}: {v}");
    }
}

#[test]
fn kernel_term_is_integrated() {
    // a = 0, b(t,s) = 1, a₁ = a₂ = 1: x(t) = t + ∫₀ᵗ s e^{t−s} ds = e^t − 1
    let t = grid(1.0, 1e-3);
    let ones = vec![1.0; t.len()];
    let b = |_t: f64, _s: f64| 1.0;
    let out = gronwall_bound(&t, &vec![0.0; t.len()], Some(&b), &ones, &ones).unwrap();
    for (ti, v) in t.iter().zip(&out) {
        assert!((v - ti.exp_m1()).abs() < 1e-5, "t={ti}: {v}");
    }
}

#[test]
fn gronwall_input_errors() {
    let t = [0.0, 1.0, 0.5];
    assert!(matches!(gronwall_bound(&t, &[0.0; 3], None, &[1.0; 3], &[1.0; 3]), Err(Error::Parameter(_))));
    assert!(matches!(gronwall_bound(&[0.0, 1.0], &[0.0; 3], None, &[1.0; 2], &[1.0; 2]), Err(Error::Parameter(_))));
    let t = [0.0, 0.5, 1.0];
    assert!(matches!(gronwall_bound(&t, &[1.0; 3], None, &[1.0; 3], &[1.0, 1.0, -1.0]), Err(Error::Hypothesis(_))));
}

#[test]
fn closed_form_bound_matches_high_precision_values() {
    let cases = [
        ((1.3, 0.01, 1.2, 0.7, 2.0, 0.25, 0.9), 0.102_563_495_051_088_8),
        ((0.5, 0.001, 840.0, 0.21, 1.28, 0.25, 0.9), 1.764_689_385_546_427),
        ((2.0, 0.05, 3.0, 2.0, 1.0, 0.5, 0.5), 23.685_432_935_311_226),
        ((1.3, 0.01, 1.2, 0.7, 2.0, 0.7, 0.5), 0.476_699_6),
        ((1.3, 0.01, 1.2, 0.7, 2.0, 0.7 + 1e-6, 0.5), 0.476_699_526_038_865_3),
    ];
    for ((t, e, m, n, k, b, r), want) in cases {
        let got = bound_611(t, e, m, n, k, b, r);
        assert!(!got.clamped);
        assert!((got.value - want).abs() <= 1e-9 * want, "{got:?} vs {want}");
    }
}

#[test]
fn gronwall_chain_reproduces_the_closed_form() {
    let (eps, m, n, k, beta, r) = (0.01, 94.0, 0.42, 1.28, 0.25, 0.9);
    let t = grid(1.0, 1e-3);
    let c = chain_inputs(&t, eps, m, n, k, beta, r);
    let g = gronwall_bound(&t, &c.a, None, &c.a1, &c.a2).unwrap();
    for (ti, gv) in t.iter().zip(&g).step_by(100) {
        let b = bound_611(*ti, eps, m, n, k, beta, r).value;
        assert!((gv - b).abs() <= 1e-5 * b.max(1e-12), "t={ti}: {gv} vs {b}");
    }
}

#[test]
fn printed_form_differs_from_the_chain() {
    let (t, eps, m, n, k, beta, r) = (1.0, 0.01, 1.0, 2.0, 1.0, 3.0, 0.5);
    let fixed = bound_611(t, eps, m, n, k, beta, r).value;
    let printed = bound_611_printed(t, eps, m, n, k, beta, r).value;
    assert!((fixed - printed).abs() > 1e-6);
}

#[test]
fn horizon_shrinks_with_larger_n() {
    let a = t_epsilon(1e-3, 0.8, 0.5).unwrap().value;
    let b = t_epsilon(1e-3, 0.8, 2.0).unwrap().value;
    assert!((a - 0.2 * 1e3f64.ln()).abs() < 1e-12);
    assert!((b - a / 2.0).abs() < 1e-12);
    assert!(t_epsilon(0.0, 0.8, 1.0).is_err());
    assert!(t_epsilon(1e-3, 1.0, 1.0).is_err());
    assert!(t_epsilon(1e-3, 0.5, 0.0).is_err());
}

#[test]
fn scaling_fit_needs_a_decade() {
    assert!(matches!(scaling_fit(&[1e-2, 9e-3, 8e-3], &[1.0, 0.9, 0.8]), Err(Error::DegenerateFit(_))));
    assert!(matches!(scaling_fit(&[1e-2, 1e-3], &[1.0, 0.1]), Err(Error::DegenerateFit(_))));
}

#[test]
fn scaling_check_finds_the_offending_curve() {
    let curves = vec![(1e-2, vec![0.0, 0.01, 0.02]), (1e-3, vec![0.0, 0.05])];
    assert!(check_scaling(&curves, 1.0, 0.8, 1.0).is_some());
    assert!(check_scaling(&curves, 20.0, 0.8, 1.0).is_none());
}

#[test]
fn single_epsilon_run_is_dominated_by_both_bounds() {
    let cfg = RemainderConfig { eps_list: vec![1e-2], ..RemainderConfig::default() };
    let run = run_epsilon(&cfg, 1e-2).unwrap();
    assert!(run.t_eps > 0.0);
    assert!(run.s.iter().zip(&run.gronwall).all(|(s, g)| s <= g));
    assert!(run.s.iter().zip(&run.bound).all(|(s, b)| s <= b));
    assert!(run.s[0] == 0.0 && run.s_max > 0.0);
}

#[test]
fn exponent_above_r_violates_the_hypothesis() {
    let cfg = RemainderConfig { h_exp: 0.95, eps_list: vec![1e-2], ..RemainderConfig::default() };
    assert!(matches!(run_epsilon(&cfg, 1e-2), Err(Error::Hypothesis(_))));
}

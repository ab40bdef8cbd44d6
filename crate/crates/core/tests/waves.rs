use std::f64::consts::PI;

use sgtool_core::waves::*;
use sgtool_core::{Error, JunctionParams};

/// Every family with a constant and bias that keep `[0, 1]²` free of poles.
fn families() -> Vec<TravelingWave> {
    let cases = [
        (WaveFamily::GammaZeroY, 0.0, 1.0, None),
        (WaveFamily::GammaOneY, 1.0, -5.0, None),
        (WaveFamily::SubCriticalY, 0.6, -0.5, Some(ASign::Plus)),
        (WaveFamily::SubCriticalY, 0.6, -0.5, Some(ASign::Minus)),
        (WaveFamily::SubCriticalZ, 0.6, -0.5, None),
        (WaveFamily::SuperCritical, 1.5, 0.0, None),
    ];
    cases
        .iter()
        .map(|&(f, g, c, s)| {
            let p = JunctionParams::new(0.5, 0.01, g, PI, 1.0).unwrap();
            TravelingWave::new(f, c, &p, s).unwrap()
        })
        .collect()
}

fn box_xis() -> Vec<f64> {
    (0..=40).map(|k| -2.0 + 4.0 * k as f64 / 40.0).collect()
}

#[test]
fn profiles_satisfy_the_first_order_equation() {
    for w in families() {
        let r = w.ode_constraint_residual(&box_xis()).unwrap();
        assert!(r < 1e-9, "{}: {r}", w.family.name());
    }
}

#[test]
fn pde_residual_is_second_order_in_the_step() {
    for w in families() {
        let r: Vec<f64> = [0.04, 0.02, 0.01].iter().map(|&h| w.pde_residual((0.1, 0.9), (0.1, 0.9), 9, h).unwrap()).collect();
        for pair in r.windows(2) {
            let order = (pair[0] / pair[1]).log2();
            assert!((order - 2.0).abs() < 0.5, "{}: residuals {r:?}", w.family.name());
        }
    }
}

#[test]
fn uxxt_matches_a_mixed_difference() {
    let h = 1e-4;
    for w in families() {
        for &(x, t) in &[(0.2, 0.3), (0.5, 0.5), (0.9, 0.1)] {
            let exact = w.uxxt(x, t).unwrap();
            let fd = (w.jet(x, t + h).unwrap().u_xx - w.jet(x, t - h).unwrap().u_xx) / (2.0 * h);
            assert!((exact - fd).abs() <= 1e-5 * exact.abs().max(1e-3), "{} at ({x}, {t}): {exact} vs {fd}", w.family.name());
        }
    }
}

#[test]
fn z_form_matches_the_profile_form() {
    let w = families().into_iter().find(|w| w.family == WaveFamily::SubCriticalZ).unwrap();
    for &(x, t) in &[(0.0, 0.0), (0.3, 0.7), (1.0, 0.2)] {
        let a = w.uxxt(x, t).unwrap();
        let b = w.uxxt_from_z(x, t).unwrap();
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }
    let y = families().into_iter().find(|w| w.family == WaveFamily::GammaZeroY).unwrap();
    assert!(matches!(y.z_derivatives(0.0, 0.0), Err(Error::Parameter(_))));
}

#[test]
fn sup_uxxt_is_grid_stable() {
    for w in families() {
        let coarse = w.sup_uxxt((0.0, 1.0), (0.0, 1.0), 101, 101).unwrap();
        let fine = w.sup_uxxt((0.0, 1.0), (0.0, 1.0), 201, 201).unwrap();
        assert!(fine.is_finite() && coarse <= fine * (1.0 + 1e-12));
        assert!((fine - coarse) <= 1e-2 * fine, "{}: {coarse} vs {fine}", w.family.name());
    }
}

#[test]
fn families_need_their_bias() {
    let p = JunctionParams::new(0.5, 0.01, 0.6, PI, 1.0).unwrap();
    assert!(TravelingWave::new(WaveFamily::GammaZeroY, 1.0, &p, None).is_err());
    assert!(TravelingWave::new(WaveFamily::SuperCritical, 0.0, &p, None).is_err());
    assert!(TravelingWave::new(WaveFamily::SubCriticalY, -0.5, &p, None).is_err());
    assert!(TravelingWave::new(WaveFamily::SubCriticalZ, f64::NAN, &p, None).is_err());
}

#[test]
fn poles_inside_the_box_are_reported() {
    let p = JunctionParams::new(0.5, 0.01, 1.0, PI, 1.0).unwrap();
    // pole of y at ξ = c − 1 = 0, i.e. x = t
    let w = TravelingWave::new(WaveFamily::GammaOneY, 1.0, &p, None).unwrap();
    assert!(matches!(w.check_box((0.0, 1.0), (0.0, 1.0)), Err(Error::Singular { .. })));
    assert!(matches!(w.value(0.5, 0.5), Err(Error::Singular { .. })));
    assert!(w.value(0.5, 0.0).is_ok());

    let p = JunctionParams::new(0.5, 0.01, 1.5, PI, 1.0).unwrap();
    let w = TravelingWave::new(WaveFamily::SuperCritical, 0.0, &p, None).unwrap();
    assert!(!w.singular_xi(-10.0, 10.0).is_empty());
    assert!(w.check_box((0.0, PI), (0.0, 1.0)).is_err());
}

#[test]
fn kink_connects_neighbouring_equilibria() {
    // sin F + γ = 0 at both ends of the sub-critical z profile
    let w = families().into_iter().find(|w| w.family == WaveFamily::SubCriticalZ).unwrap();
    for x in [-40.0, 40.0] {
        let u = w.value(x, 0.0).unwrap();
        assert!((u.sin() + 0.6).abs() < 1e-9, "U({x}) = {u}");
    }
    let left = w.value(-40.0, 0.0).unwrap();
    let right = w.value(40.0, 0.0).unwrap();
    assert!((left - right).abs() > 1.0);
}

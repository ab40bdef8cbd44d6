//! Closed-form traveling waves `U(x, t) = F(ξ)`, `ξ = (x − t)/α`, of the
//! reduced equation `U_xx − U_tt − αU_t = sin U + γ`.
//!
//! Along `ξ` the equation reduces to `F' = sin F + γ`. Every family is written
//! as `F = offset + 2 atan w(ξ)`: the `y` families use offset `π` (so that
//! `F = 4 atan(y + √(y²+1))`) and solve `y' = −y + (γ/2)(1 + y²)`; the `z`
//! families use offset `0` and solve `z' = z + (γ/2)(1 + z²)`.
//!
//! Poles of `w` are jumps of `2π` in the closed form and are reported as
//! [`Error::Singular`].

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::model::JunctionParams;

/// `Π(f) = 2 atan(e^f)`.
pub fn pi_transform(f: f64) -> f64 {
    2.0 * f.exp().atan()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveFamily {
    GammaZeroY,
    GammaOneY,
    SubCriticalY,
    SubCriticalZ,
    SuperCritical,
}

impl WaveFamily {
    pub const ALL: [WaveFamily; 5] =
        [Self::GammaZeroY, Self::GammaOneY, Self::SubCriticalY, Self::SubCriticalZ, Self::SuperCritical];

    pub fn name(self) -> &'static str {
        match self {
            Self::GammaZeroY => "gamma_zero_y",
            Self::GammaOneY => "gamma_one_y",
            Self::SubCriticalY => "subcritical_y",
            Self::SubCriticalZ => "subcritical_z",
            Self::SuperCritical => "supercritical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Sign of `A = ±√(1−γ²)` for the sub-critical `y` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ASign {
    Plus,
    Minus,
}

impl ASign {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "plus" | "+" => Some(Self::Plus),
            "minus" | "-" => Some(Self::Minus),
            _ => None,
        }
    }

    fn value(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// `U` and its derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveJet {
    pub u: f64,
    pub u_x: f64,
    pub u_t: f64,
    pub u_xx: f64,
    pub u_xxt: f64,
}

/// `z` and its derivatives for the sub-critical `z` family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZDerivatives {
    pub z: f64,
    pub z_x: f64,
    pub z_xx: f64,
    pub z_xxt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWave {
    pub family: WaveFamily,
    pub c_wave: f64,
    alpha: f64,
    gamma: f64,
    a_sign: Option<ASign>,
}

const GAMMA_EXACT: f64 = 1e-12;

impl TravelingWave {
    pub fn new(family: WaveFamily, c_wave: f64, params: &JunctionParams, a_sign: Option<ASign>) -> Result<Self> {
        let g = params.gamma_bias();
        if !c_wave.is_finite() {
            return Err(Error::Parameter("c_wave must be finite".into()));
        }
        let ok = match family {
            WaveFamily::GammaZeroY => g.abs() <= GAMMA_EXACT,
            WaveFamily::GammaOneY => (g - 1.0).abs() <= GAMMA_EXACT,
            WaveFamily::SubCriticalY | WaveFamily::SubCriticalZ => g > 0.0 && g < 1.0,
            WaveFamily::SuperCritical => g > 1.0,
        };
        if !ok {
            return Err(Error::Parameter(format!("family {} is not admissible for gamma = {g}", family.name())));
        }
        if family == WaveFamily::SubCriticalY {
            let s = a_sign.ok_or_else(|| Error::Parameter("subcritical_y needs an explicit a_sign".into()))?;
            let a = s.value() * (1.0 - g * g).sqrt();
            let delta = a - 1.0;
            if (g * g - delta * delta).abs() <= GAMMA_EXACT {
                return Err(Error::Parameter(format!("gamma^2 = delta^2 is excluded (gamma = {g})")));
            }
        }
        Ok(Self { family, c_wave, alpha: params.alpha(), gamma: g, a_sign })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn xi(&self, x: f64, t: f64) -> f64 {
        (x - t) / self.alpha
    }

    fn eta(&self) -> f64 {
        (1.0 - self.gamma * self.gamma).sqrt()
    }

    fn a_value(&self) -> f64 {
        self.a_sign.map_or(0.0, ASign::value) * self.eta()
    }

    fn kappa(&self) -> f64 {
        (self.gamma * self.gamma - 1.0).sqrt()
    }

    /// Rate `λ` and the affine map `w = p0 + p1·φ` with `φ = 1/(1 − c e^{λξ})`.
    fn moebius(&self) -> Option<(f64, f64, f64)> {
        let g = self.gamma;
        match self.family {
            WaveFamily::SubCriticalY => {
                let a = self.a_value();
                let p = (1.0 - a) / g;
                let q = g / (1.0 - a);
                Some((-a, q, p - q))
            }
            WaveFamily::SubCriticalZ => {
                let eta = self.eta();
                Some((eta, -(1.0 + eta) / g, 2.0 * eta / g))
            }
            _ => None,
        }
    }

    /// Singular points `ξ` of the closed form inside `[lo, hi]`.
    pub fn singular_xi(&self, lo: f64, hi: f64) -> Vec<f64> {
        let c = self.c_wave;
        let inside = |s: f64| s >= lo && s <= hi;
        match self.family {
            WaveFamily::GammaZeroY => Vec::new(),
            WaveFamily::GammaOneY => [c - 1.0].into_iter().filter(|&s| inside(s)).collect(),
            WaveFamily::SubCriticalY | WaveFamily::SubCriticalZ => {
                if c <= 0.0 {
                    return Vec::new();
                }
                let (lambda, _, _) = self.moebius().expect("sub-critical family");
                [-c.ln() / lambda].into_iter().filter(|&s| inside(s)).collect()
            }
            WaveFamily::SuperCritical => {
                // κξ/2 + c = π/2 + kπ
                let k = self.kappa();
                let k_lo = ((k * lo / 2.0 + c - FRAC_PI_2) / PI).ceil() as i64;
                let k_hi = ((k * hi / 2.0 + c - FRAC_PI_2) / PI).floor() as i64;
                (k_lo..=k_hi).map(|j| 2.0 * (FRAC_PI_2 + j as f64 * PI - c) / k).collect()
            }
        }
    }

    /// Fails if the closed form has a pole on `x_range × t_range`.
    pub fn check_box(&self, x_range: (f64, f64), t_range: (f64, f64)) -> Result<()> {
        let lo = self.xi(x_range.0, t_range.1);
        let hi = self.xi(x_range.1, t_range.0);
        if let Some(&s) = self.singular_xi(lo, hi).first() {
            let mut t = t_range.0;
            let mut x = self.alpha * s + t;
            if x > x_range.1 {
                x = x_range.1;
                t = x - self.alpha * s;
            } else if x < x_range.0 {
                x = x_range.0;
                t = x - self.alpha * s;
            }
            return Err(Error::Singular { x, t, what: self.pole_name() });
        }
        Ok(())
    }

    fn pole_name(&self) -> &'static str {
        match self.family {
            WaveFamily::GammaZeroY => "none",
            WaveFamily::GammaOneY => "pole of y",
            WaveFamily::SubCriticalY => "pole of y",
            WaveFamily::SubCriticalZ => "pole of z",
            WaveFamily::SuperCritical => "tan branch point",
        }
    }

    /// `[w, w', w'', w''']` in `ξ`.
    fn w_jet(&self, xi: f64) -> [f64; 4] {
        let c = self.c_wave;
        match self.family {
            WaveFamily::GammaZeroY => {
                let w = c * (-xi).exp();
                [w, -w, w, -w]
            }
            WaveFamily::GammaOneY => {
                let s = xi - c + 1.0;
                [1.0 - 2.0 / s, 2.0 / (s * s), -4.0 / (s * s * s), 12.0 / (s * s * s * s)]
            }
            WaveFamily::SubCriticalY | WaveFamily::SubCriticalZ => {
                let (l, p0, p1) = self.moebius().expect("sub-critical family");
                let u = c * (l * xi).exp();
                let phi = 1.0 / (1.0 - u);
                let d1 = l * u * phi * phi;
                let d2 = l * l * u * (1.0 + u) * phi * phi * phi;
                let d3 = l * l * l * u * (1.0 + 4.0 * u + u * u) * phi.powi(4);
                [p0 + p1 * phi, p1 * d1, p1 * d2, p1 * d3]
            }
            WaveFamily::SuperCritical => {
                let k = self.kappa();
                let s = k / 2.0;
                let tn = (s * xi + c).tan();
                let t1 = (1.0 + tn * tn) * s;
                let t2 = 2.0 * tn * t1 * s;
                let t3 = 2.0 * (t1 * t1 + tn * t2) * s;
                let f = k / self.gamma;
                [(k * tn - 1.0) / self.gamma, f * t1, f * t2, f * t3]
            }
        }
    }

    fn is_y_family(&self) -> bool {
        matches!(self.family, WaveFamily::GammaZeroY | WaveFamily::GammaOneY | WaveFamily::SubCriticalY)
    }

    fn profile(&self, w: f64) -> f64 {
        if self.is_y_family() {
            4.0 * w.asinh().exp().atan()
        } else {
            2.0 * w.atan()
        }
    }

    fn check_point(&self, x: f64, t: f64) -> Result<f64> {
        let xi = self.xi(x, t);
        let tol = 1e-12 * (1.0 + xi.abs());
        if !self.singular_xi(xi - tol, xi + tol).is_empty() {
            return Err(Error::Singular { x, t, what: self.pole_name() });
        }
        Ok(xi)
    }

    pub fn value(&self, x: f64, t: f64) -> Result<f64> {
        let xi = self.check_point(x, t)?;
        let u = self.profile(self.w_jet(xi)[0]);
        if !u.is_finite() {
            return Err(Error::Singular { x, t, what: self.pole_name() });
        }
        Ok(u)
    }

    /// `[F, F', F'', F''']` in `ξ` from the closed form.
    fn profile_jet(&self, xi: f64) -> [f64; 4] {
        let [w, w1, w2, w3] = self.w_jet(xi);
        let d = 1.0 + w * w;
        let f1 = 2.0 * w1 / d;
        let f2 = 2.0 * w2 / d - 4.0 * w * w1 * w1 / (d * d);
        let f3 = 2.0 * w3 / d - (12.0 * w * w1 * w2 + 4.0 * w1 * w1 * w1) / (d * d)
            + 16.0 * w * w * w1 * w1 * w1 / (d * d * d);
        [self.profile(w), f1, f2, f3]
    }

    pub fn jet(&self, x: f64, t: f64) -> Result<WaveJet> {
        let xi = self.check_point(x, t)?;
        let [f, f1, f2, f3] = self.profile_jet(xi);
        let a = self.alpha;
        let j = WaveJet { u: f, u_x: f1 / a, u_t: -f1 / a, u_xx: f2 / (a * a), u_xxt: -f3 / (a * a * a) };
        if [j.u, j.u_x, j.u_t, j.u_xx, j.u_xxt].iter().all(|v| v.is_finite()) {
            Ok(j)
        } else {
            Err(Error::Singular { x, t, what: self.pole_name() })
        }
    }

    pub fn uxxt(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.jet(x, t)?.u_xxt)
    }

    /// `z` and its `x`, `xx`, `xxt` derivatives; sub-critical `z` family only.
    pub fn z_derivatives(&self, x: f64, t: f64) -> Result<ZDerivatives> {
        if self.family != WaveFamily::SubCriticalZ {
            return Err(Error::Parameter("z derivatives exist for the subcritical_z family only".into()));
        }
        let xi = self.check_point(x, t)?;
        let [z, z1, z2, z3] = self.w_jet(xi);
        let a = self.alpha;
        Ok(ZDerivatives { z, z_x: z1 / a, z_xx: z2 / (a * a), z_xxt: -z3 / (a * a * a) })
    }

    /// `U_xxt` assembled from the `z` derivatives.
    pub fn uxxt_from_z(&self, x: f64, t: f64) -> Result<f64> {
        let d = self.z_derivatives(x, t)?;
        let z_t = -d.z_x;
        let z_xt = -d.z_xx;
        let s = 1.0 + d.z * d.z;
        Ok(2.0 * d.z_xxt / s - 4.0 * d.z * z_t * d.z_xx / (s * s) - 8.0 * d.z * d.z_x * z_xt / (s * s)
            - 4.0 * d.z_x * d.z_x * z_t / (s * s)
            + 16.0 * d.z * d.z * d.z_x * d.z_x * z_t / (s * s * s))
    }

    /// `max |−αU_t − sin U − γ|` over the given points `ξ`.
    pub fn ode_constraint_residual(&self, xis: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &xi in xis {
            let x = self.alpha * xi;
            let j = self.jet(x, 0.0)?;
            worst = worst.max((-self.alpha * j.u_t - j.u.sin() - self.gamma).abs());
        }
        Ok(worst)
    }

    /// `max |U_xx − U_tt − αU_t − sin U − γ|` with centered differences of
    /// step `fd_step` on an `n × n` grid of the box.
    pub fn pde_residual(&self, x_range: (f64, f64), t_range: (f64, f64), n: usize, fd_step: f64) -> Result<f64> {
        let h = fd_step;
        self.check_box((x_range.0 - h, x_range.1 + h), (t_range.0 - h, t_range.1 + h))?;
        let mut worst: f64 = 0.0;
        for x in axis(x_range, n) {
            for t in axis(t_range, n) {
                let u = self.value(x, t)?;
                let uxx = (self.value(x + h, t)? - 2.0 * u + self.value(x - h, t)?) / (h * h);
                let up = self.value(x, t + h)?;
                let um = self.value(x, t - h)?;
                let utt = (up - 2.0 * u + um) / (h * h);
                let ut = (up - um) / (2.0 * h);
                worst = worst.max((uxx - utt - self.alpha * ut - u.sin() - self.gamma).abs());
            }
        }
        Ok(worst)
    }

    /// Grid maximum of `|U_xxt|` on an `n_x × n_t` grid of the box.
    pub fn sup_uxxt(&self, x_range: (f64, f64), t_range: (f64, f64), n_x: usize, n_t: usize) -> Result<f64> {
        self.check_box(x_range, t_range)?;
        let mut worst: f64 = 0.0;
        for x in axis(x_range, n_x) {
            for t in axis(t_range, n_t) {
                worst = worst.max(self.jet(x, t)?.u_xxt.abs());
            }
        }
        Ok(worst)
    }
}

pub fn wave_value(wave: &TravelingWave, x: f64, t: f64) -> Result<f64> {
    wave.value(x, t)
}

pub fn wave_uxxt(wave: &TravelingWave, x: f64, t: f64) -> Result<f64> {
    wave.uxxt(x, t)
}

fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![range.0];
    }
    (0..n).map(|k| range.0 + (range.1 - range.0) * k as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma: f64) -> JunctionParams {
        JunctionParams::new(0.5, 0.01, gamma, PI, 1.0).unwrap()
    }

    #[test]
    fn pi_transform_points() {
        assert!((pi_transform(0.0) - FRAC_PI_2).abs() < 1e-15);
        assert!((pi_transform(1.0).sin() - 0.648_054_273_663_885_4).abs() < 1e-15);
        assert!((pi_transform(40.0) - PI).abs() < 1e-15);
        assert!(pi_transform(-40.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_zero_value_at_origin() {
        let w = TravelingWave::new(WaveFamily::GammaZeroY, 1.0, &params(0.0), None).unwrap();
        assert!((w.value(0.0, 0.0).unwrap() - 1.5 * PI).abs() < 1e-14);
    }

    #[test]
    fn family_admissibility() {
        assert!(TravelingWave::new(WaveFamily::GammaOneY, 0.0, &params(0.6), None).is_err());
        assert!(TravelingWave::new(WaveFamily::SuperCritical, 0.0, &params(0.6), None).is_err());
        assert!(TravelingWave::new(WaveFamily::SubCriticalY, 0.0, &params(0.6), None).is_err());
        assert!(TravelingWave::new(WaveFamily::SubCriticalY, 0.0, &params(0.6), Some(ASign::Minus)).is_ok());
    }

    #[test]
    fn equilibrium_limit_of_z_family() {
        let w = TravelingWave::new(WaveFamily::SubCriticalZ, 0.0, &params(0.6), None).unwrap();
        let d = w.z_derivatives(1.0, 0.5).unwrap();
        assert!((d.z + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!((d.z_x, d.z_xx, d.z_xxt), (0.0, 0.0, 0.0));
        let u = w.value(1.0, 0.5).unwrap();
        assert!((u.sin() + 0.6).abs() < 1e-14);
        assert_eq!(w.uxxt(1.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn poles_are_reported() {
        let w = TravelingWave::new(WaveFamily::SubCriticalZ, 0.5, &params(0.6), None).unwrap();
        let xi = -(0.5f64).ln() / 0.8;
        assert!(matches!(w.value(0.5 * xi, 0.0), Err(Error::Singular { .. })));
        assert!(w.check_box((0.0, PI), (0.0, 1.0)).is_err());
        let w = TravelingWave::new(WaveFamily::SubCriticalZ, -0.5, &params(0.6), None).unwrap();
        assert!(w.check_box((0.0, PI), (0.0, 1.0)).is_ok());
    }

    #[test]
    fn supercritical_branch_points() {
        let w = TravelingWave::new(WaveFamily::SuperCritical, 0.0, &params(1.5), None).unwrap();
        let k = 1.25f64.sqrt();
        let s = w.singular_xi(-10.0, 10.0);
        assert!(!s.is_empty());
        for xi in s {
            let th = k * xi / 2.0;
            assert!(((th - FRAC_PI_2) / PI - ((th - FRAC_PI_2) / PI).round()).abs() < 1e-12);
        }
    }

    #[test]
    fn z_form_of_uxxt_matches_profile_form() {
        let w = TravelingWave::new(WaveFamily::SubCriticalZ, -0.5, &params(0.6), None).unwrap();
        for &(x, t) in &[(0.3, 0.2), (1.7, 0.9), (3.0, 0.1)] {
            let a = w.uxxt(x, t).unwrap();
            let b = w.uxxt_from_z(x, t).unwrap();
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
        }
    }
}

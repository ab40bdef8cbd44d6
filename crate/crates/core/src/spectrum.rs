//! Spectral quantities of the linear operator
//! `∂_xx(ε ∂_t + 1) − ∂_t(∂_t + α)` with Neumann conditions on `[0, ℓ]`.
//!
//! Mode `n` has wavenumber `γ_n = nπ/ℓ`, damping `h_n = (α + εγ_n²)/2` and
//! `ω_n² = h_n² − γ_n²`. The time kernel is
//! `H_n(t) = e^{−h_n t} sinh(ω_n t)/ω_n`, the solution of
//! `H'' + 2h_n H' + γ_n² H = 0` with `H(0) = 0`, `H'(0) = 1`.
//!
//! `ω_n` is never formed as a complex number: `omega_sq` is kept signed and
//! the overdamped branch is evaluated through the slow and fast decay rates
//! `h ∓ ω`, so large modes neither overflow nor cancel.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::JunctionParams;

/// `|ω²|t²` below which [`sinhc_kernel`] switches to its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub n: usize,
    pub gamma_n: f64,
    pub h_n: f64,
    /// Signed `h_n² − γ_n²`; negative means an oscillatory mode.
    pub omega_sq: f64,
}

pub fn mode(n: usize, params: &JunctionParams) -> Mode {
    let gamma_n = n as f64 * PI / params.ell();
    let h_n = 0.5 * (params.alpha() + params.epsilon() * gamma_n * gamma_n);
    // (h − γ)(h + γ) keeps the sign exact near the band edges
    let omega_sq = (h_n - gamma_n) * (h_n + gamma_n);
    Mode { n, gamma_n, h_n, omega_sq }
}

impl Mode {
    pub fn is_oscillatory(&self) -> bool {
        self.omega_sq < 0.0
    }

    /// Slow decay rate `h − ω` of an overdamped mode, computed without
    /// cancellation as `γ²/(h + ω)`.
    pub fn slow_rate(&self) -> Option<f64> {
        if self.omega_sq < 0.0 {
            return None;
        }
        let omega = self.omega_sq.sqrt();
        let s = self.h_n + omega;
        Some(if s > 0.0 { self.gamma_n * self.gamma_n / s } else { 0.0 })
    }

    pub fn kernel(&self, t: f64) -> f64 {
        h_kernel(self, t)
    }
}

/// `sinh(√ω² t)/√ω²`, continued through `ω² = 0` to `sin(√−ω² t)/√−ω²`.
pub fn sinhc_kernel(omega_sq: f64, t: f64) -> f64 {
    let x = omega_sq * t * t;
    if x.abs() < SERIES_THRESHOLD {
        return t * (1.0 + x / 6.0 + x * x / 120.0);
    }
    if omega_sq > 0.0 {
        let w = omega_sq.sqrt();
        (w * t).sinh() / w
    } else {
        let w = (-omega_sq).sqrt();
        (w * t).sin() / w
    }
}

/// `H_n(t) = e^{−h_n t}·sinhc(ω_n², t)`.
pub fn h_kernel(m: &Mode, t: f64) -> f64 {
    kernel_jet(m, t)[0]
}

/// `[H_n, H_n', H_n'']` at `t ≥ 0`, all differentiated analytically.
pub fn kernel_jet(m: &Mode, t: f64) -> [f64; 3] {
    let h = m.h_n;
    if m.omega_sq >= 0.0 {
        let omega = m.omega_sq.sqrt();
        let slow = m.slow_rate().unwrap_or(0.0);
        let fast = h + omega;
        // q = (1 − e^{−2ωt})/(2ω), the overdamped analogue of sin(νt)/ν
        let q = if omega * t == 0.0 { t } else { -(-2.0 * omega * t).exp_m1() / (2.0 * omega) };
        let e = (-slow * t).exp();
        [e * q, e * (1.0 - fast * q), e * (fast * fast * q - 2.0 * h)]
    } else {
        let nu = (-m.omega_sq).sqrt();
        let (sn, cs) = (nu * t).sin_cos();
        let s = if nu * t == 0.0 { t } else { sn / nu };
        let e = (-h * t).exp();
        [e * s, e * (cs - h * s), e * ((h * h - nu * nu) * s - 2.0 * h * cs)]
    }
}

/// Derivative of order `j ∈ {0, 1, 2}` of `H_n` at `t`.
pub fn kernel_derivative(m: &Mode, t: f64, j: usize) -> f64 {
    kernel_jet(m, t)[j]
}

/// Indices of the oscillatory band and the start of the overdamped tail.
///
/// `n1 > n2` encodes an empty band. `usize::MAX` stands for "unbounded" when
/// `ε = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSplit {
    pub n1: usize,
    pub n2: usize,
    pub n_c: usize,
    pub c: f64,
}

impl BandSplit {
    pub fn is_empty(&self) -> bool {
        self.n1 > self.n2
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= self.n1 && n <= self.n2
    }
}

/// Integer band edges from the roots of `εγ² − 2γ + α = 0`, corrected by the
/// sign of `ω_n²` at the boundary indices so rounding cannot misplace them.
pub fn classify_bands(params: &JunctionParams, c: f64) -> Result<BandSplit> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Parameter(format!("band safety parameter c must lie in (0,1), got {c}")));
    }
    let a = params.alpha();
    let e = params.epsilon();
    let scale = params.ell() / PI;
    let osc = |n: usize| mode(n, params).omega_sq < 0.0;
    // tail predicate: γ_n/√c < h_n
    let tail = |n: usize| {
        let m = mode(n, params);
        m.gamma_n / c.sqrt() < m.h_n
    };

    if e == 0.0 {
        // oscillatory for every γ_n > α/2, no overdamped tail
        let mut n1 = (scale * a / 2.0).floor().max(0.0) as usize + 1;
        while n1 > 1 && osc(n1 - 1) {
            n1 -= 1;
        }
        while !osc(n1) {
            n1 += 1;
        }
        return Ok(BandSplit { n1, n2: usize::MAX, n_c: usize::MAX, c });
    }

    let (n1, n2) = if a * e < 1.0 {
        let root = (1.0 - a * e).sqrt();
        let lo = scale / e * (1.0 - root);
        let hi = scale / e * (1.0 + root);
        let mut n1 = lo.floor() as usize + 1;
        while n1 > 1 && osc(n1 - 1) {
            n1 -= 1;
        }
        while n1 as f64 <= hi + 1.0 && !osc(n1) {
            n1 += 1;
        }
        let mut n2 = (hi.ceil() as usize).saturating_sub(1).max(n1.saturating_sub(1));
        while osc(n2 + 1) {
            n2 += 1;
        }
        while n2 >= n1 && !osc(n2) {
            n2 -= 1;
        }
        (n1, n2)
    } else {
        (1, 0)
    };

    let n_c = if a * e * c < 1.0 {
        let edge = scale / (e * c.sqrt()) * (1.0 + (1.0 - a * e * c).sqrt());
        let mut n = edge.floor() as usize + 1;
        while n > 1 && tail(n - 1) && (n - 1) as f64 > edge - 2.0 {
            n -= 1;
        }
        while !tail(n) {
            n += 1;
        }
        n
    } else {
        1
    };
    Ok(BandSplit { n1, n2, n_c, c })
}

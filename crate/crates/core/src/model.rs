//! Problem parameters, derived constants, uniform grids and sampled fields.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::waves::TravelingWave;

/// Physical and model constants of one junction run.
///
/// Construct through [`JunctionParams::new`]; the fields are private so an
/// instance always satisfies `alpha > 0`, `ell > 0`, `horizon > 0` and
/// `epsilon >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionParams {
    alpha: f64,
    epsilon: f64,
    gamma_bias: f64,
    ell: f64,
    horizon: f64,
}

impl JunctionParams {
    pub fn new(alpha: f64, epsilon: f64, gamma_bias: f64, ell: f64, horizon: f64) -> Result<Self> {
        let p = Self { alpha, epsilon, gamma_bias, ell, horizon };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let all = [self.alpha, self.epsilon, self.gamma_bias, self.ell, self.horizon];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("junction parameters must be finite".into()));
        }
        if self.alpha <= 0.0 {
            return Err(Error::Parameter(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if self.epsilon < 0.0 {
            return Err(Error::Parameter(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if self.ell <= 0.0 {
            return Err(Error::Parameter(format!("ell must be > 0, got {}", self.ell)));
        }
        if self.horizon <= 0.0 {
            return Err(Error::Parameter(format!("horizon must be > 0, got {}", self.horizon)));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn gamma_bias(&self) -> f64 {
        self.gamma_bias
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::new(self.alpha, epsilon, self.gamma_bias, self.ell, self.horizon)
    }

    pub fn with_horizon(self, horizon: f64) -> Result<Self> {
        Self::new(self.alpha, self.epsilon, self.gamma_bias, self.ell, horizon)
    }

    pub fn with_gamma(self, gamma_bias: f64) -> Result<Self> {
        Self::new(self.alpha, self.epsilon, gamma_bias, self.ell, self.horizon)
    }

    /// Same parameters with the viscous term switched off.
    pub fn reduced(self) -> Self {
        Self { epsilon: 0.0, ..self }
    }

    /// `α·ε < 1`: the band split of the spectrum is non-trivial.
    pub fn has_oscillatory_band(&self) -> bool {
        self.alpha * self.epsilon < 1.0
    }
}

/// Decay rate `β`, the `ε` exponent `r` and the Hölder parameter `q` it
/// came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub beta: f64,
    pub r: f64,
    pub q: f64,
}

pub fn derived_constants(params: &JunctionParams, q: f64) -> Result<DerivedConstants> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::Parameter(format!("Hölder parameter q must be > 1, got {q}")));
    }
    let a = params.alpha;
    let e = params.epsilon;
    let l_over_pi = params.ell / PI;
    let candidates = [
        1.0 / (e + a * l_over_pi * l_over_pi),
        (a + e / (l_over_pi * l_over_pi)) / 2.0,
        a / 2.0,
    ];
    let beta = candidates.into_iter().fold(f64::INFINITY, f64::min);
    Ok(DerivedConstants { beta, r: (q - 1.0) / q, q })
}

/// Uniform spatial grid on `[0, ell]` with `nx` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub nx: usize,
    pub ell: f64,
}

impl Grid1D {
    pub fn new(nx: usize, ell: f64) -> Result<Self> {
        if nx < 2 {
            return Err(Error::Parameter(format!("grid needs at least 2 points, got {nx}")));
        }
        if !(ell > 0.0) {
            return Err(Error::Parameter(format!("grid length must be > 0, got {ell}")));
        }
        Ok(Self { nx, ell })
    }

    pub fn dx(&self) -> f64 {
        self.ell / (self.nx - 1) as f64
    }

    /// Node `i`; the last node is exactly `ell`.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            self.ell
        } else {
            i as f64 * self.dx()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    /// Trapezoid weights on the grid.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let dx = self.dx();
        let mut w = vec![dx; self.nx];
        w[0] = dx / 2.0;
        w[self.nx - 1] = dx / 2.0;
        w
    }
}

/// Uniform time lattice `t_k = k·dt`, `k = 0..=nt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAxis {
    pub nt: usize,
    pub dt: f64,
}

impl TimeAxis {
    pub fn new(nt: usize, dt: f64) -> Result<Self> {
        if nt == 0 || !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Parameter(format!("invalid time axis nt={nt}, dt={dt}")));
        }
        Ok(Self { nt, dt })
    }

    /// Smallest lattice with step at most `max_dt` that lands on `horizon`.
    pub fn covering(horizon: f64, max_dt: f64) -> Result<Self> {
        if !(horizon > 0.0) || !(max_dt > 0.0) {
            return Err(Error::Parameter(format!("invalid horizon {horizon} or step {max_dt}")));
        }
        let nt = (horizon / max_dt - 1e-9).ceil().max(1.0) as usize;
        Self::new(nt, horizon / nt as f64)
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn horizon(&self) -> f64 {
        self.t(self.nt)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..=self.nt).map(|k| self.t(k)).collect()
    }
}

/// A real field sampled on `grid × time`, stored time-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub grid: Grid1D,
    pub time: TimeAxis,
    values: Vec<f64>,
}

impl SpaceTimeField {
    pub fn zeros(grid: Grid1D, time: TimeAxis) -> Self {
        Self { grid, time, values: vec![0.0; grid.nx * (time.nt + 1)] }
    }

    pub fn from_values(grid: Grid1D, time: TimeAxis, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nx * (time.nt + 1) {
            return Err(Error::Parameter(format!(
                "field needs {} samples, got {}",
                grid.nx * (time.nt + 1),
                values.len()
            )));
        }
        Ok(Self { grid, time, values })
    }

    pub fn from_fn(grid: Grid1D, time: TimeAxis, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(grid, time);
        for k in 0..=time.nt {
            let t = time.t(k);
            for i in 0..grid.nx {
                out.values[k * grid.nx + i] = f(grid.x(i), t);
            }
        }
        out
    }

    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.values[k * self.grid.nx + i]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.grid.nx..(k + 1) * self.grid.nx]
    }

    pub fn row_mut(&mut self, k: usize) -> &mut [f64] {
        let nx = self.grid.nx;
        &mut self.values[k * nx..(k + 1) * nx]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Pointwise `self − other` on identical lattices.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.time != other.time {
            return Err(Error::Parameter("fields live on different lattices".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid, time: self.time, values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Initial profiles and Neumann edge fluxes shared by the perturbed and the
/// reduced problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    pub grid: Grid1D,
    pub time: TimeAxis,
    pub h0: Vec<f64>,
    pub h1: Vec<f64>,
    pub phi0: Vec<f64>,
    pub phi1: Vec<f64>,
}

impl ProblemData {
    pub fn new(grid: Grid1D, time: TimeAxis, h0: Vec<f64>, h1: Vec<f64>, phi0: Vec<f64>, phi1: Vec<f64>) -> Result<Self> {
        if h0.len() != grid.nx || h1.len() != grid.nx {
            return Err(Error::Parameter("initial profiles must have one sample per grid point".into()));
        }
        if phi0.len() != time.nt + 1 || phi1.len() != time.nt + 1 {
            return Err(Error::Parameter("edge fluxes must have one sample per time level".into()));
        }
        let finite = h0.iter().chain(&h1).chain(&phi0).chain(&phi1).all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite("problem data".into()));
        }
        Ok(Self { grid, time, h0, h1, phi0, phi1 })
    }

    /// Homogeneous data: constant initial phase `u0`, zero velocity, zero flux.
    pub fn constant(grid: Grid1D, time: TimeAxis, u0: f64) -> Self {
        Self {
            grid,
            time,
            h0: vec![u0; grid.nx],
            h1: vec![0.0; grid.nx],
            phi0: vec![0.0; time.nt + 1],
            phi1: vec![0.0; time.nt + 1],
        }
    }

    pub fn from_functions(
        grid: Grid1D,
        time: TimeAxis,
        h0: impl Fn(f64) -> f64,
        h1: impl Fn(f64) -> f64,
        phi0: impl Fn(f64) -> f64,
        phi1: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let xs = grid.points();
        let ts = time.points();
        Self::new(
            grid,
            time,
            xs.iter().map(|&x| h0(x)).collect(),
            xs.iter().map(|&x| h1(x)).collect(),
            ts.iter().map(|&t| phi0(t)).collect(),
            ts.iter().map(|&t| phi1(t)).collect(),
        )
    }
}

/// Samples `U`, `U_t` at `t = 0` and `U_x` on both edges of a traveling wave.
pub fn neumann_data_from_wave(wave: &TravelingWave, grid: Grid1D, time: TimeAxis) -> Result<ProblemData> {
    wave.check_box((0.0, grid.ell), (0.0, time.horizon()))?;
    let mut h0 = Vec::with_capacity(grid.nx);
    let mut h1 = Vec::with_capacity(grid.nx);
    for x in grid.points() {
        let j = wave.jet(x, 0.0)?;
        h0.push(j.u);
        h1.push(j.u_t);
    }
    let mut phi0 = Vec::with_capacity(time.nt + 1);
    let mut phi1 = Vec::with_capacity(time.nt + 1);
    for t in time.points() {
        phi0.push(wave.jet(0.0, t)?.u_x);
        phi1.push(wave.jet(grid.ell, t)?.u_x);
    }
    ProblemData::new(grid, time, h0, h1, phi0, phi1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_picks_smallest_candidate() {
        let p = JunctionParams::new(0.5, 0.1, 0.0, PI, 1.0).unwrap();
        let d = derived_constants(&p, 2.0).unwrap();
        assert!((d.beta - 0.25).abs() < 1e-15);
        assert_eq!(d.r, 0.5);

        let p = JunctionParams::new(2.0, 0.01, 0.0, PI, 1.0).unwrap();
        let d = derived_constants(&p, 2.0).unwrap();
        assert!((d.beta - 1.0 / 2.01).abs() < 1e-15);
        assert!((d.beta - 0.497512).abs() < 1e-6);

        assert_eq!(derived_constants(&p, 4.0).unwrap().r, 0.75);
    }

    #[test]
    fn q_must_exceed_one() {
        let p = JunctionParams::new(0.5, 0.1, 0.0, PI, 1.0).unwrap();
        assert!(matches!(derived_constants(&p, 1.0), Err(Error::Parameter(_))));
        assert!(matches!(derived_constants(&p, 0.3), Err(Error::Parameter(_))));
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(JunctionParams::new(0.0, 0.1, 0.0, 1.0, 1.0).is_err());
        assert!(JunctionParams::new(0.5, -0.1, 0.0, 1.0, 1.0).is_err());
        assert!(JunctionParams::new(0.5, 0.1, 0.0, 0.0, 1.0).is_err());
        assert!(JunctionParams::new(0.5, 0.1, 0.0, 1.0, -1.0).is_err());
        assert!(JunctionParams::new(0.5, f64::NAN, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn grid_ends_on_ell() {
        let g = Grid1D::new(201, PI).unwrap();
        assert!((g.dx() * 200.0 - PI).abs() <= f64::EPSILON * PI);
        assert_eq!(g.x(200), PI);
        let w: f64 = g.trapezoid_weights().iter().sum();
        assert!((w - PI).abs() < 1e-13);
    }

    #[test]
    fn covering_axis_lands_on_horizon() {
        let ax = TimeAxis::covering(1.0, 0.3).unwrap();
        assert_eq!(ax.nt, 4);
        assert!((ax.horizon() - 1.0).abs() < 1e-15);
        let ax = TimeAxis::covering(1.0, 0.25).unwrap();
        assert_eq!(ax.nt, 4);
    }
}

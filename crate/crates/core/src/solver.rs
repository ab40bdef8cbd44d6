//! Method-of-lines solvers for
//!
//! `εu_xxt + u_xx − u_tt − αu_t = sin u + γ`, `u_x(0,t) = φ₀(t)`, `u_x(ℓ,t) = φ₁(t)`,
//!
//! and the Picard iteration for the remainder `d = u_ε − U`.
//!
//! The solver works on the first-order system `(u, v = u_t)`. Second
//! differences use mirror ghost points carrying the edge flux, so the
//! Neumann data enters as a boundary vector `b(φ)`. Both `D₂u` and `εD₂v` are
//! implicit (θ-weighted), which leaves one tridiagonal solve for `v` per step;
//! `sin u` is evaluated once per step at the θ-predicted phase.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Grid1D, JunctionParams, ProblemData, SpaceTimeField, TimeAxis};
use crate::spectrum::{classify_bands, kernel_jet, mode};
use crate::waves::TravelingWave;

/// Divergence threshold on `sup |u|`.
pub const BLOWUP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub nx: usize,
    pub cfl: f64,
    pub theta: f64,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    /// Budget for the certified bound on the spectral modes the Picard
    /// iteration drops.
    pub green_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { nx: 201, cfl: 0.5, theta: 0.5, picard_tol: 1e-10, picard_max_iter: 100, green_tol: 1e-2 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 8 {
            return Err(Error::Parameter(format!("nx must be >= 8, got {}", self.nx)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Parameter(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(0.5..=1.0).contains(&self.theta) {
            return Err(Error::Parameter(format!("theta must lie in [0.5, 1], got {}", self.theta)));
        }
        if !(self.picard_tol > 0.0) || self.picard_max_iter == 0 {
            return Err(Error::Parameter("picard_tol must be > 0 and picard_max_iter >= 1".into()));
        }
        if !(self.green_tol > 0.0) {
            return Err(Error::Parameter(format!("green_tol must be > 0, got {}", self.green_tol)));
        }
        Ok(())
    }

    pub fn grid(&self, ell: f64) -> Result<Grid1D> {
        Grid1D::new(self.nx, ell)
    }

    /// `dt ≤ cfl·dx`, landing exactly on `horizon`.
    pub fn time_axis(&self, ell: f64, horizon: f64) -> Result<TimeAxis> {
        TimeAxis::covering(horizon, self.cfl * self.grid(ell)?.dx())
    }
}

/// Right-hand side switches: `sine = false` drops `sin u` (linear runs),
/// `source` adds `f(x, t)` to `u_tt`.
#[derive(Clone, Copy)]
pub struct Forcing<'a> {
    pub sine: bool,
    pub source: Option<&'a (dyn Fn(f64, f64) -> f64 + Sync)>,
}

impl Default for Forcing<'_> {
    fn default() -> Self {
        Self { sine: true, source: None }
    }
}

impl std::fmt::Debug for Forcing<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Forcing").field("sine", &self.sine).field("source", &self.source.is_some()).finish()
    }
}

pub fn solve_perturbed(params: &JunctionParams, data: &ProblemData, cfg: &SolverConfig) -> Result<SpaceTimeField> {
    solve_with(params, data, cfg, &Forcing::default())
}

pub fn solve_reduced(params: &JunctionParams, data: &ProblemData, cfg: &SolverConfig) -> Result<SpaceTimeField> {
    solve_with(&params.reduced(), data, cfg, &Forcing::default())
}

/// Second-order time derivative of a sampled series.
fn derivative_series(f: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len();
    if n < 3 {
        let d = if n == 2 { (f[1] - f[0]) / dt } else { 0.0 };
        return vec![d; n];
    }
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    for k in 1..n - 1 {
        out[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt);
    }
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    out
}

/// Neumann Laplacian with ghost points: `out = A·w` (flux part excluded).
fn apply_laplacian(w: &[f64], dx2: f64, out: &mut [f64]) {
    let n = w.len();
    out[0] = 2.0 * (w[1] - w[0]) / dx2;
    for i in 1..n - 1 {
        out[i] = (w[i - 1] - 2.0 * w[i] + w[i + 1]) / dx2;
    }
    out[n - 1] = 2.0 * (w[n - 2] - w[n - 1]) / dx2;
}

/// Solves `[d·I − s·A] x = rhs` in place (Thomas algorithm).
struct Tridiagonal {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl Tridiagonal {
    fn neumann(n: usize, d: f64, s: f64, dx2: f64) -> Self {
        let k = s / dx2;
        let mut lower = vec![-k; n];
        let mut upper = vec![-k; n];
        let diag = vec![d + 2.0 * k; n];
        upper[0] = -2.0 * k;
        lower[n - 1] = -2.0 * k;
        lower[0] = 0.0;
        upper[n - 1] = 0.0;
        Self { lower, diag, upper }
    }

    fn solve(&self, rhs: &mut [f64], scratch: &mut [f64]) {
        let n = rhs.len();
        let mut denom = self.diag[0];
        scratch[0] = self.upper[0] / denom;
        rhs[0] /= denom;
        for i in 1..n {
            denom = self.diag[i] - self.lower[i] * scratch[i - 1];
            scratch[i] = self.upper[i] / denom;
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= scratch[i] * rhs[i + 1];
        }
    }
}

/// θ-scheme run with explicit control of the right-hand side.
pub fn solve_with(params: &JunctionParams, data: &ProblemData, cfg: &SolverConfig, forcing: &Forcing) -> Result<SpaceTimeField> {
    cfg.validate()?;
    let grid = data.grid;
    if grid.nx != cfg.nx {
        return Err(Error::Parameter(format!("data has {} grid points, config expects {}", grid.nx, cfg.nx)));
    }
    let time = data.time;
    let (nx, dt, th) = (grid.nx, time.dt, cfg.theta);
    let dx = grid.dx();
    let dx2 = dx * dx;
    let (eps, alpha, gamma) = (params.epsilon(), params.alpha(), params.gamma_bias());

    let dphi0 = derivative_series(&data.phi0, dt);
    let dphi1 = derivative_series(&data.phi1, dt);
    let xs = grid.points();

    let mat = Tridiagonal::neumann(nx, 1.0 + th * alpha * dt, th * dt * (th * dt + eps), dx2);
    let mut field = SpaceTimeField::zeros(grid, time);
    field.row_mut(0).copy_from_slice(&data.h0);
    let mut u = data.h0.clone();
    let mut v = data.h1.clone();
    let mut au = vec![0.0; nx];
    let mut av = vec![0.0; nx];
    let mut rhs = vec![0.0; nx];
    let mut scratch = vec![0.0; nx];
    let mut f_old: Vec<f64> = match forcing.source {
        Some(f) => xs.iter().map(|&x| f(x, 0.0)).collect(),
        None => vec![0.0; nx],
    };
    let mut f_new = vec![0.0; nx];

    for step in 0..time.nt {
        let t1 = time.t(step + 1);
        apply_laplacian(&u, dx2, &mut au);
        apply_laplacian(&v, dx2, &mut av);
        if let Some(f) = forcing.source {
            for (fi, &x) in f_new.iter_mut().zip(&xs) {
                *fi = f(x, t1);
            }
        }
        // flux vectors b(φ) + ε b(φ') at both levels, θ-weighted
        let flux = |k: usize| {
            let lo = -2.0 * (data.phi0[k] + eps * dphi0[k]) / dx;
            let hi = 2.0 * (data.phi1[k] + eps * dphi1[k]) / dx;
            (lo, hi)
        };
        let (lo0, hi0) = flux(step);
        let (lo1, hi1) = flux(step + 1);
        for i in 0..nx {
            let star = u[i] + th * dt * v[i];
            let nonlinear = if forcing.sine { star.sin() } else { 0.0 } + gamma;
            // A u^{n+1} = A u^n + θdt A v^{n+1} + (1−θ)dt A v^n; the v^{n+1} part sits in `mat`
            let r = th * (au[i] + dt * (1.0 - th) * av[i])
                + (1.0 - th) * (au[i] + eps * av[i])
                - alpha * (1.0 - th) * v[i]
                + th * f_new[i]
                + (1.0 - th) * f_old[i]
                - nonlinear;
            rhs[i] = v[i] + dt * r;
        }
        rhs[0] += dt * (th * lo1 + (1.0 - th) * lo0);
        rhs[nx - 1] += dt * (th * hi1 + (1.0 - th) * hi0);
        mat.solve(&mut rhs, &mut scratch);
        let mut sup: f64 = 0.0;
        for i in 0..nx {
            u[i] += dt * (th * rhs[i] + (1.0 - th) * v[i]);
            v[i] = rhs[i];
            sup = sup.max(u[i].abs());
        }
        if !sup.is_finite() || sup > BLOWUP {
            return Err(Error::Instability { step: step + 1, sup });
        }
        field.row_mut(step + 1).copy_from_slice(&u);
        std::mem::swap(&mut f_old, &mut f_new);
    }
    Ok(field)
}

/// Phase `U` and `U_xxt` of a reduced solution known in closed form.
pub trait ReducedSolution: Sync {
    fn u_and_uxxt(&self, x: f64, t: f64) -> Result<(f64, f64)>;

    fn check_box(&self, _x_range: (f64, f64), _t_range: (f64, f64)) -> Result<()> {
        Ok(())
    }
}

impl ReducedSolution for TravelingWave {
    fn u_and_uxxt(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        let j = self.jet(x, t)?;
        Ok((j.u, j.u_xxt))
    }

    fn check_box(&self, x_range: (f64, f64), t_range: (f64, f64)) -> Result<()> {
        TravelingWave::check_box(self, x_range, t_range)
    }
}

impl<F> ReducedSolution for F
where
    F: Fn(f64, f64) -> Result<(f64, f64)> + Sync,
{
    fn u_and_uxxt(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        self(x, t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PicardResult {
    pub field: SpaceTimeField,
    pub iterations: usize,
    /// `sup |d^{k+1} − d^k|` per iteration.
    pub changes: Vec<f64>,
    /// Certified bound on the contribution of the dropped modes.
    pub truncation_bound: f64,
}

impl PicardResult {
    /// Successive-change ratios.
    pub fn ratios(&self) -> Vec<f64> {
        self.changes.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 }).collect()
    }
}

/// `H_n(t_k)` on the time lattice for the modes the grid resolves.
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub n_modes: usize,
    pub nt: usize,
    values: Vec<f64>,
}

impl KernelTable {
    pub fn new(params: &JunctionParams, n_modes: usize, time: TimeAxis) -> Self {
        let stride = time.nt + 1;
        let mut values = vec![0.0; n_modes * stride];
        values.par_chunks_mut(stride).enumerate().for_each(|(n, row)| {
            let m = mode(n, params);
            for (k, v) in row.iter_mut().enumerate() {
                *v = kernel_jet(&m, time.t(k))[0];
            }
        });
        Self { n_modes, nt: time.nt, values }
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let s = self.nt + 1;
        &self.values[n * s..(n + 1) * s]
    }
}

/// Spectral weights `1/ℓ` at `n = 0` and at the last resolved mode, `2/ℓ`
/// otherwise; with trapezoid projection this inverts the discrete cosine
/// transform on the grid exactly.
fn mode_weights(nx: usize, ell: f64) -> Vec<f64> {
    let mut w = vec![2.0 / ell; nx];
    w[0] = 1.0 / ell;
    w[nx - 1] = 1.0 / ell;
    w
}

fn cosine_table(grid: &Grid1D) -> Vec<f64> {
    let nx = grid.nx;
    let xs = grid.points();
    let mut c = vec![0.0; nx * nx];
    for n in 0..nx {
        // exact lattice angle nπi/(nx−1), reduced mod 2(nx−1)
        for (i, _) in xs.iter().enumerate() {
            let k = (n * i) % (2 * (nx - 1));
            c[n * nx + i] = (std::f64::consts::PI * k as f64 / (nx - 1) as f64).cos();
        }
    }
    c
}

/// Dropped-mode bound `2 sup|F| Σ_{n ≥ nx} ∫₀ᵀ |H_n|`.
fn dropped_mode_bound(params: &JunctionParams, nx: usize, horizon: f64, sup_f: f64) -> Result<f64> {
    if sup_f == 0.0 {
        return Ok(0.0);
    }
    let split = classify_bands(params, 0.5)?;
    let n2 = if split.is_empty() { 0 } else { split.n2 };
    if n2 == usize::MAX {
        return Ok(f64::INFINITY);
    }
    let m_start = (n2 + 1).max(nx).max(2);
    let mut sum = 0.0;
    for n in nx..m_start {
        let m = mode(n, params);
        sum += if m.is_oscillatory() {
            let nu = (-m.omega_sq).sqrt();
            (-(-m.h_n * horizon).exp_m1() / (m.h_n * nu)).min(1.0 / (m.h_n * m.h_n))
        } else {
            1.0 / (m.gamma_n * m.gamma_n)
        };
    }
    let ell = params.ell();
    sum += ell * ell / (std::f64::consts::PI.powi(2) * (m_start - 1) as f64);
    Ok(2.0 * sup_f * sum)
}

/// Picard iteration for `d = −∫₀ᵗ∫₀^ℓ G(x, ξ, t−τ) F(ξ, τ, d) dξ dτ` with
/// `F = sin(d + U) − sin U − εU_xxt`, in cosine-mode space on the solver
/// lattice.
pub fn picard_remainder(
    params: &JunctionParams,
    reduced: &dyn ReducedSolution,
    cfg: &SolverConfig,
) -> Result<PicardResult> {
    cfg.validate()?;
    let grid = cfg.grid(params.ell())?;
    let time = cfg.time_axis(params.ell(), params.horizon())?;
    reduced.check_box((0.0, grid.ell), (0.0, time.horizon()))?;
    let (nx, nt, dt) = (grid.nx, time.nt, time.dt);
    let eps = params.epsilon();

    let xs = grid.points();
    let mut u_base = vec![0.0; nx * (nt + 1)];
    let mut forcing = vec![0.0; nx * (nt + 1)];
    u_base
        .par_chunks_mut(nx)
        .zip(forcing.par_chunks_mut(nx))
        .enumerate()
        .try_for_each(|(k, (ub, fo))| -> Result<()> {
            let t = time.t(k);
            for i in 0..nx {
                let (u, uxxt) = reduced.u_and_uxxt(xs[i], t)?;
                ub[i] = u;
                fo[i] = -eps * uxxt;
            }
            Ok(())
        })?;
    let sup_forcing = forcing.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup_forcing == 0.0 {
        // zero source: d ≡ 0 is the fixed point
        return Ok(PicardResult { field: SpaceTimeField::zeros(grid, time), iterations: 1, changes: vec![0.0], truncation_bound: 0.0 });
    }

    let kernel = KernelTable::new(params, nx, time);
    let cos = cosine_table(&grid);
    let qw = grid.trapezoid_weights();
    let mw = mode_weights(nx, grid.ell);

    let mut d = vec![0.0; nx * (nt + 1)];
    let mut changes = Vec::new();
    let mut rising = 0;
    for iteration in 1..=cfg.picard_max_iter {
        let f: Vec<f64> = d.iter().zip(&u_base).zip(&forcing).map(|((&dv, &u), &fo)| (dv + u).sin() - u.sin() + fo).collect();
        let sup_f = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let truncation_bound = dropped_mode_bound(params, nx, time.horizon(), sup_f)?;
        if truncation_bound > cfg.green_tol {
            return Err(Error::Truncation { n_terms: nx - 1, best_bound: truncation_bound });
        }
        let next = picard_step(&f, &kernel, &cos, &qw, &mw, nx, nt, dt);
        let change = next.iter().zip(&d).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if !change.is_finite() {
            return Err(Error::NonFinite("Picard iterate".into()));
        }
        if let Some(&prev) = changes.last() {
            let ratio = if prev > 0.0 { change / prev } else { 0.0 };
            rising = if ratio >= 1.0 { rising + 1 } else { 0 };
            if rising >= 3 {
                return Err(Error::Contraction { iteration, ratio });
            }
        }
        changes.push(change);
        d = next;
        if change < cfg.picard_tol {
            return Ok(PicardResult {
                field: SpaceTimeField::from_values(grid, time, d)?,
                iterations: iteration,
                changes,
                truncation_bound,
            });
        }
    }
    Err(Error::NotConverged { iterations: cfg.picard_max_iter, last_change: changes.last().copied().unwrap_or(f64::NAN) })
}

/// One application of the integral map to a sampled source `f` (time-major).
#[allow(clippy::too_many_arguments)]
fn picard_step(f: &[f64], kernel: &KernelTable, cos: &[f64], qw: &[f64], mw: &[f64], nx: usize, nt: usize, dt: f64) -> Vec<f64> {
    // modal projections F̂_n(τ_m), stored mode-major
    let mut fhat = vec![0.0; nx * (nt + 1)];
    fhat.par_chunks_mut(nt + 1).enumerate().for_each(|(n, row)| {
        let c = &cos[n * nx..(n + 1) * nx];
        for (m, out) in row.iter_mut().enumerate() {
            let fr = &f[m * nx..(m + 1) * nx];
            *out = fr.iter().zip(c).zip(qw).map(|((a, b), w)| a * b * w).sum();
        }
    });
    // time convolution with trapezoid weights; H_n(0) = 0 drops the m = k term
    let mut dhat = vec![0.0; nx * (nt + 1)];
    dhat.par_chunks_mut(nt + 1).enumerate().for_each(|(n, row)| {
        let h = kernel.row(n);
        let g = &fhat[n * (nt + 1)..(n + 1) * (nt + 1)];
        for k in 1..=nt {
            let mut s = 0.5 * h[k] * g[0];
            for m in 1..k {
                s += h[k - m] * g[m];
            }
            row[k] = -mw[n] * dt * s;
        }
    });
    let mut d = vec![0.0; nx * (nt + 1)];
    d.par_chunks_mut(nx).enumerate().for_each(|(k, row)| {
        for n in 0..nx {
            let a = dhat[n * (nt + 1) + k];
            if a == 0.0 {
                continue;
            }
            let c = &cos[n * nx..(n + 1) * nx];
            for (r, cv) in row.iter_mut().zip(c) {
                *r += a * cv;
            }
        }
    });
    d
}

/// Same map as [`picard_step`] but recomputing `H_n` for every pair of
/// time levels instead of reading a table. Used to measure the table's value.
pub fn picard_step_uncached(params: &JunctionParams, f: &SpaceTimeField) -> Vec<f64> {
    let grid = f.grid;
    let time = f.time;
    let (nx, nt, dt) = (grid.nx, time.nt, time.dt);
    let cos = cosine_table(&grid);
    let qw = grid.trapezoid_weights();
    let mw = mode_weights(nx, grid.ell);
    let vals = f.values();
    let mut fhat = vec![0.0; nx * (nt + 1)];
    for n in 0..nx {
        for m in 0..=nt {
            fhat[n * (nt + 1) + m] = (0..nx).map(|i| vals[m * nx + i] * cos[n * nx + i] * qw[i]).sum();
        }
    }
    let mut d = vec![0.0; nx * (nt + 1)];
    for n in 0..nx {
        let md = mode(n, params);
        for k in 1..=nt {
            let mut s = 0.5 * kernel_jet(&md, time.t(k))[0] * fhat[n * (nt + 1)];
            for m in 1..k {
                s += kernel_jet(&md, time.t(k - m))[0] * fhat[n * (nt + 1) + m];
            }
            let a = -mw[n] * dt * s;
            for i in 0..nx {
                d[k * nx + i] += a * cos[n * nx + i];
            }
        }
    }
    d
}

/// Table-driven counterpart of [`picard_step_uncached`].
pub fn picard_step_cached(params: &JunctionParams, f: &SpaceTimeField, table: &KernelTable) -> Vec<f64> {
    let grid = f.grid;
    let nx = grid.nx;
    let cos = cosine_table(&grid);
    let qw = grid.trapezoid_weights();
    let mw = mode_weights(nx, grid.ell);
    let _ = params;
    picard_step(f.values(), table, &cos, &qw, &mw, nx, f.time.nt, f.time.dt)
}

/// Discrete energy `½∫(u_t² + u_x²)dx` per time level, with `u_t` and `u_x`
/// from centered differences (one-sided at the ends).
pub fn discrete_energy(field: &SpaceTimeField) -> Vec<f64> {
    let grid = field.grid;
    let time = field.time;
    let (nx, dx, dt) = (grid.nx, grid.dx(), time.dt);
    let w = grid.trapezoid_weights();
    let mut out = Vec::with_capacity(time.nt + 1);
    for k in 0..=time.nt {
        let row = field.row(k);
        let mut e = 0.0;
        for i in 0..nx {
            let ut = if k == 0 {
                (field.at(i, 1) - row[i]) / dt
            } else if k == time.nt {
                (row[i] - field.at(i, k - 1)) / dt
            } else {
                (field.at(i, k + 1) - field.at(i, k - 1)) / (2.0 * dt)
            };
            let ux = if i == 0 {
                (row[1] - row[0]) / dx
            } else if i == nx - 1 {
                (row[nx - 1] - row[nx - 2]) / dx
            } else {
                (row[i + 1] - row[i - 1]) / (2.0 * dx)
            };
            e += 0.5 * w[i] * (ut * ut + ux * ux);
        }
        out.push(e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn config_bounds() {
        assert!(SolverConfig { nx: 7, ..Default::default() }.validate().is_err());
        assert!(SolverConfig { cfl: 1.5, ..Default::default() }.validate().is_err());
        assert!(SolverConfig { theta: 0.4, ..Default::default() }.validate().is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }

    #[test]
    fn thomas_matches_dense_product() {
        let n = 9;
        let m = Tridiagonal::neumann(n, 1.3, 0.2, 0.01);
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut ax = vec![0.0; n];
        apply_laplacian(&x, 0.01, &mut ax);
        let mut rhs: Vec<f64> = x.iter().zip(&ax).map(|(a, b)| 1.3 * a - 0.2 * b).collect();
        let mut scratch = vec![0.0; n];
        m.solve(&mut rhs, &mut scratch);
        for (a, b) in rhs.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_data_without_bias_stays_zero() {
        let p = JunctionParams::new(0.5, 0.1, 0.0, PI, 1.0).unwrap();
        let cfg = SolverConfig { nx: 33, ..Default::default() };
        let grid = cfg.grid(PI).unwrap();
        let time = cfg.time_axis(PI, 1.0).unwrap();
        let u = solve_perturbed(&p, &ProblemData::constant(grid, time, 0.0), &cfg).unwrap();
        assert_eq!(u.max_abs(), 0.0);
    }

    #[test]
    fn discrete_cosine_round_trip() {
        let grid = Grid1D::new(17, PI).unwrap();
        let cos = cosine_table(&grid);
        let qw = grid.trapezoid_weights();
        let mw = mode_weights(17, PI);
        let f: Vec<f64> = grid.points().iter().map(|x| (x * x).exp() * 0.01).collect();
        let fhat: Vec<f64> = (0..17).map(|n| (0..17).map(|i| f[i] * cos[n * 17 + i] * qw[i]).sum()).collect();
        for i in 0..17 {
            let back: f64 = (0..17).map(|n| mw[n] * fhat[n] * cos[n * 17 + i]).sum();
            assert!((back - f[i]).abs() < 1e-12 * (1.0 + f[i].abs()));
        }
    }
}

//! Size of the remainder `d = u_ε − U`: sup-norm curves, the horizon `T_ε`,
//! a sampled Gronwall-type evaluator, the closed-form bound and the `ε^h`
//! scaling study.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::green::{fit_envelope_constants, EnvelopeConstants, EnvelopeSample, SeriesControl};
use crate::model::{derived_constants, neumann_data_from_wave, JunctionParams, SpaceTimeField};
use crate::solver::{solve_perturbed, solve_reduced, SolverConfig};
use crate::waves::{ASign, TravelingWave, WaveFamily};

/// `S(t_k) = max_x |d(x, t_k)|`.
pub fn sup_norm_curve(d: &SpaceTimeField) -> Vec<f64> {
    (0..=d.time.nt).map(|k| d.row(k).iter().fold(0.0, |m: f64, v| m.max(v.abs()))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TEpsilon {
    pub value: f64,
    /// Set when `ε ≥ 1` made the logarithm non-positive.
    pub warning: bool,
}

/// `T_ε = (1 − h)·ln(1/ε)·min{1/N, 1}`.
pub fn t_epsilon(eps: f64, h_exp: f64, n_const: f64) -> Result<TEpsilon> {
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("epsilon must be > 0, got {eps}")));
    }
    if !(h_exp > 0.0 && h_exp < 1.0) {
        return Err(Error::Parameter(format!("h_exp must lie in (0, 1), got {h_exp}")));
    }
    if !(n_const > 0.0) {
        return Err(Error::Parameter(format!("N must be > 0, got {n_const}")));
    }
    if eps >= 1.0 {
        return Ok(TEpsilon { value: 0.0, warning: true });
    }
    let lg = (1.0 - h_exp) * (1.0 / eps).ln();
    Ok(TEpsilon { value: lg * (1.0 / n_const).min(1.0), warning: false })
}

fn cumulative_trapezoid(times: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; times.len()];
    for k in 1..times.len() {
        out[k] = out[k - 1] + 0.5 * (times[k] - times[k - 1]) * (f[k] + f[k - 1]);
    }
    out
}

/// Right-hand side of the two-kernel Gronwall inequality
///
/// `x(t) ≤ a(t) + ∫₀ᵗ b(t,s)ds + a₁(t)∫₀ᵗ a₂(s)x(s)ds`
///
/// evaluated on the sampled `times` with trapezoid quadrature:
///
/// `a + ∫b + a₁∫₀ᵗ a a₂ e^{∫ₛᵗa₁a₂} ds + a₁∫₀ᵗ a₂(s)(∫₀ˢ b(t,z)dz) e^{∫ₛᵗa₁a₂} ds`.
pub fn gronwall_bound(
    times: &[f64],
    a: &[f64],
    b: Option<&(dyn Fn(f64, f64) -> f64 + Sync)>,
    a1: &[f64],
    a2: &[f64],
) -> Result<Vec<f64>> {
    let n = times.len();
    if n == 0 || a.len() != n || a1.len() != n || a2.len() != n {
        return Err(Error::Parameter("Gronwall inputs must share the time grid".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("Gronwall time grid must be increasing".into()));
    }
    if let Some(k) = a1.iter().position(|&v| v < 0.0) {
        return Err(Error::Hypothesis(format!("a1 is negative at t = {}", times[k])));
    }
    if let Some(k) = a2.iter().position(|&v| v < 0.0) {
        return Err(Error::Hypothesis(format!("a2 is negative at t = {}", times[k])));
    }
    let prod: Vec<f64> = a1.iter().zip(a2).map(|(x, y)| x * y).collect();
    let p = cumulative_trapezoid(times, &prod);
    let out = (0..n)
        .into_par_iter()
        .map(|k| {
            let tk = times[k];
            let weight = |m: usize| (p[k] - p[m]).exp();
            let first: Vec<f64> = (0..=k).map(|m| a[m] * a2[m] * weight(m)).collect();
            let mut value = a[k] + a1[k] * cumulative_trapezoid(&times[..=k], &first)[k];
            if let Some(b) = b {
                let bk: Vec<f64> = (0..=k).map(|m| b(tk, times[m])).collect();
                let inner = cumulative_trapezoid(&times[..=k], &bk);
                let second: Vec<f64> = (0..=k).map(|m| a2[m] * inner[m] * weight(m)).collect();
                value += inner[k] + a1[k] * cumulative_trapezoid(&times[..=k], &second)[k];
            }
            value
        })
        .collect();
    Ok(out)
}

/// Inputs of the Gronwall evaluator read off the sup-norm inequality for `S`:
/// `a = (2+εk)Mε^r t + kεN(1−e^{−βt})/β`, `b = 0`, `a₁ = N e^{−βt}`, `a₂ = e^{βt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainInputs {
    pub a: Vec<f64>,
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
}

pub fn chain_inputs(times: &[f64], eps: f64, m_const: f64, n_const: f64, k_const: f64, beta: f64, r: f64) -> ChainInputs {
    let c = (2.0 + eps * k_const) * m_const * eps.powf(r);
    ChainInputs {
        a: times.iter().map(|&t| c * t - k_const * eps * n_const * (-beta * t).exp_m1() / beta).collect(),
        a1: times.iter().map(|&t| n_const * (-beta * t).exp()).collect(),
        a2: times.iter().map(|&t| (beta * t).exp()).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound611 {
    pub value: f64,
    /// Set when the raw expression was negative and got clamped to 0.
    pub clamped: bool,
}

/// Below this `|β − N|` the closed form switches to its Taylor expansion.
pub const BETA_N_SERIES: f64 = 1e-8;

/// Closed-form evaluation of the Gronwall chain with `X = β − N`:
///
/// `[M(2+εk)t + NM(2+εk)(t/X + (e^{−Xt}−1)/X²)]ε^r
///  + [Nk(1−e^{−βt})/β + (N²k/β)(1/X − βe^{−Xt}/(XN) + e^{−βt}/N)]ε`.
pub fn bound_611(t: f64, eps: f64, m_const: f64, n_const: f64, k_const: f64, beta: f64, r: f64) -> Bound611 {
    let (n, x) = (n_const, beta - n_const);
    let c = m_const * (2.0 + eps * k_const);
    let (first, second) = if x.abs() < BETA_N_SERIES {
        let e = (-n * t).exp();
        let f = t * t / 2.0 - x * t.powi(3) / 6.0 + x * x * t.powi(4) / 24.0;
        let s = (n * t - 1.0 + e) / n + x * (-n * t * t / 2.0 + t - t * e) / n
            + x * x * (n * t.powi(3) / 6.0 - t * t / 2.0 + t * t * e / 2.0) / n;
        (f, s)
    } else {
        // regrouped around expm1 so nothing cancels for small X
        let em = (-x * t).exp_m1();
        let f = (em + x * t) / (x * x);
        let s = -em / x - (-x * t).exp() / n + (-beta * t).exp() / n;
        (f, s)
    };
    let raw = (c * t + n * c * first) * eps.powf(r)
        + (-n * k_const * (-beta * t).exp_m1() / beta + n * n * k_const / beta * second) * eps;
    Bound611 { value: raw.max(0.0), clamped: raw < 0.0 }
}

/// The same expression with the second bracket exactly as typeset
/// (`βe^{−Xt}/(N−β)` without the `1/N`), kept for comparison.
pub fn bound_611_printed(t: f64, eps: f64, m_const: f64, n_const: f64, k_const: f64, beta: f64, r: f64) -> Bound611 {
    let (n, x) = (n_const, beta - n_const);
    let c = m_const * (2.0 + eps * k_const);
    let ex = (-x * t).exp();
    let first = t / x + (ex - 1.0) / (x * x);
    let second = 1.0 / x + beta * ex / (n - beta) + (-beta * t).exp() / n;
    let raw = (c * t + n * c * first) * eps.powf(r)
        + (-n * k_const * (-beta * t).exp_m1() / beta + n * n * k_const / beta * second) * eps;
    Bound611 { value: raw.max(0.0), clamped: raw < 0.0 }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub gamma_hat: f64,
    pub h_hat: f64,
}

/// Least-squares line through `(ln ε, ln S_max)`.
pub fn scaling_fit(eps: &[f64], s_max: &[f64]) -> Result<ScalingFit> {
    if eps.len() != s_max.len() || eps.len() < 3 {
        return Err(Error::DegenerateFit("need at least 3 (epsilon, S_max) pairs".into()));
    }
    if let Some(i) = s_max.iter().position(|&s| !(s > 0.0)) {
        return Err(Error::DegenerateFit(format!("S_max = {} at epsilon = {}", s_max[i], eps[i])));
    }
    if eps.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::DegenerateFit("epsilon values must be > 0".into()));
    }
    let lo = eps.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eps.iter().copied().fold(0.0, f64::max);
    if hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::DegenerateFit(format!("epsilon sweep spans less than a decade ({lo}..{hi})")));
    }
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = s_max.iter().map(|s| s.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let h_hat = sxy / sxx;
    Ok(ScalingFit { gamma_hat: (my - h_hat * mx).exp(), h_hat })
}

/// Pointwise `S(t) ≤ slack·Γ·ε^h` over every curve.
pub fn check_scaling(curves: &[(f64, Vec<f64>)], gamma: f64, h: f64, slack: f64) -> Option<(f64, f64)> {
    for (eps, s) in curves {
        let cap = slack * gamma * eps.powf(h);
        if let Some(&v) = s.iter().find(|&&v| v > cap) {
            return Some((*eps, v));
        }
    }
    None
}

/// Inputs of one sweep of the remainder study.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub ell: f64,
    /// Envelope fitting window end.
    pub horizon: f64,
    pub eps_list: Vec<f64>,
    pub family: WaveFamily,
    pub c_wave: f64,
    pub a_sign: Option<ASign>,
    pub solver: SolverConfig,
    pub q: f64,
    pub h_exp: f64,
    pub series: SeriesControl,
    pub envelope_space: usize,
    pub envelope_time: usize,
    pub envelope_t_min: f64,
    /// Grid size per axis for `sup |U_xxt|`.
    pub k_grid: usize,
}

impl Default for RemainderConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            gamma: 0.6,
            ell: std::f64::consts::PI,
            horizon: 10.0,
            eps_list: vec![1e-2, 5e-3, 2e-3, 1e-3],
            family: WaveFamily::SubCriticalZ,
            c_wave: -0.5,
            a_sign: None,
            solver: SolverConfig { nx: 101, ..SolverConfig::default() },
            q: 10.0,
            h_exp: 0.8,
            series: SeriesControl::with_tol(1e-8),
            envelope_space: 9,
            envelope_time: 20,
            envelope_t_min: 0.25,
            k_grid: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonRun {
    pub epsilon: f64,
    pub k_const: f64,
    pub envelope: EnvelopeConstants,
    pub t_eps: f64,
    pub times: Vec<f64>,
    pub s: Vec<f64>,
    pub s_max: f64,
    /// Closed-form bound on the same times.
    pub bound: Vec<f64>,
    pub bound_max: f64,
    pub bound_clamped: bool,
    /// Gronwall evaluator on the same times with the chain inputs.
    pub gronwall: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderReport {
    pub runs: Vec<EpsilonRun>,
    pub h_exp: f64,
    pub r: f64,
    pub beta: f64,
    pub fit: ScalingFit,
}

impl RemainderReport {
    /// Smallest `Γ` covering every curve with exponent `h_exp`.
    pub fn uniform_gamma(&self) -> f64 {
        self.runs
            .iter()
            .map(|r| r.s_max / r.epsilon.powf(self.h_exp))
            .fold(0.0, f64::max)
    }
}

fn base_params(cfg: &RemainderConfig, eps: f64, horizon: f64) -> Result<JunctionParams> {
    JunctionParams::new(cfg.alpha, eps, cfg.gamma, cfg.ell, horizon)
}

/// Full pipeline for one viscosity.
pub fn run_epsilon(cfg: &RemainderConfig, eps: f64) -> Result<EpsilonRun> {
    let params = base_params(cfg, eps, cfg.horizon)?;
    let derived = derived_constants(&params, cfg.q)?;
    if !(cfg.h_exp < derived.r) {
        return Err(Error::Hypothesis(format!("h_exp = {} must be below r = {}", cfg.h_exp, derived.r)));
    }
    let sample = EnvelopeSample::uniform(cfg.ell, cfg.envelope_space, cfg.envelope_t_min, cfg.horizon, cfg.envelope_time)?;
    let envelope = fit_envelope_constants(&params, &derived, &sample, &cfg.series)?;
    let t_eps = t_epsilon(eps, cfg.h_exp, envelope.n_const)?;
    if !(t_eps.value > 0.0) {
        return Err(Error::DegenerateFit(format!("T_eps = {} at epsilon = {eps}", t_eps.value)));
    }
    let params = params.with_horizon(t_eps.value)?;
    let wave = TravelingWave::new(cfg.family, cfg.c_wave, &params, cfg.a_sign)?;
    let k_const = wave.sup_uxxt((0.0, cfg.ell), (0.0, t_eps.value), cfg.k_grid, cfg.k_grid)?;

    let grid = cfg.solver.grid(cfg.ell)?;
    let time = cfg.solver.time_axis(cfg.ell, t_eps.value)?;
    let data = neumann_data_from_wave(&wave, grid, time)?;
    let (u, big_u) = rayon::join(|| solve_perturbed(&params, &data, &cfg.solver), || solve_reduced(&params, &data, &cfg.solver));
    let d = u?.difference(&big_u?)?;
    let s = sup_norm_curve(&d);
    let times = time.points();

    let (m, n, beta, r) = (envelope.m_const, envelope.n_const, derived.beta, derived.r);
    let bounds: Vec<Bound611> = times.iter().map(|&t| bound_611(t, eps, m, n, k_const, beta, r)).collect();
    let chain = chain_inputs(&times, eps, m, n, k_const, beta, r);
    let gronwall = gronwall_bound(&times, &chain.a, None, &chain.a1, &chain.a2)?;
    let finite = s.iter().chain(&gronwall).all(|v| v.is_finite()) && bounds.iter().all(|b| b.value.is_finite());
    if !finite {
        return Err(Error::NonFinite(format!("remainder run at epsilon = {eps}")));
    }
    Ok(EpsilonRun {
        epsilon: eps,
        k_const,
        t_eps: t_eps.value,
        s_max: s.iter().copied().fold(0.0, f64::max),
        bound_max: bounds.iter().map(|b| b.value).fold(0.0, f64::max),
        bound_clamped: bounds.iter().any(|b| b.clamped),
        bound: bounds.into_iter().map(|b| b.value).collect(),
        times,
        s,
        gronwall,
        envelope,
    })
}

/// Runs every `ε` (concurrently) and fits `Γ ε^ĥ`. Runs are ordered by
/// decreasing `ε`.
pub fn run_remainder(cfg: &RemainderConfig) -> Result<RemainderReport> {
    if cfg.eps_list.is_empty() {
        return Err(Error::Parameter("epsilon list is empty".into()));
    }
    let mut eps = cfg.eps_list.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let runs = eps.par_iter().map(|&e| run_epsilon(cfg, e)).collect::<Result<Vec<_>>>()?;
    let fit = scaling_fit(&eps, &runs.iter().map(|r| r.s_max).collect::<Vec<_>>())?;
    let derived = derived_constants(&base_params(cfg, eps[0], cfg.horizon)?, cfg.q)?;
    Ok(RemainderReport { runs, h_exp: cfg.h_exp, r: derived.r, beta: derived.beta, fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_epsilon_examples() {
        let t = t_epsilon(1e-3, 0.5, 2.0).unwrap();
        assert!((t.value - 1.726_938_819_745_534).abs() < 1e-12);
        let t = t_epsilon(1e-3, 0.5, 1.0).unwrap();
        assert!((t.value - 3.453_877_639_491_069).abs() < 1e-12);
        let t = t_epsilon(1.0, 0.5, 3.0).unwrap();
        assert_eq!(t.value, 0.0);
        assert!(t.warning);
    }

    #[test]
    fn bound_vanishes_at_zero() {
        let b = bound_611(0.0, 0.01, 1.0, 1.0, 1.0, 2.0, 0.5);
        assert!(b.value.abs() < 1e-15);
        let b = bound_611(0.0, 0.01, 1.0, 2.0, 1.0, 3.0, 0.5);
        assert!(b.value.abs() < 1e-15 && !b.clamped);
        // typeset form is negative there
        assert!(bound_611_printed(0.0, 0.01, 1.0, 2.0, 1.0, 3.0, 0.5).clamped);
    }

    #[test]
    fn series_branch_is_continuous() {
        let at = bound_611(1.3, 0.01, 1.2, 0.7, 2.0, 0.7, 0.5).value;
        let near = bound_611(1.3, 0.01, 1.2, 0.7, 2.0, 0.7 + 1e-6, 0.5).value;
        assert!((at - near).abs() <= 1e-6 * at);
    }

    #[test]
    fn exact_power_laws_are_recovered() {
        let eps = [1e-2, 5e-3, 2e-3, 1e-3];
        let s: Vec<f64> = eps.iter().map(|e| 3.0 * e).collect();
        let f = scaling_fit(&eps, &s).unwrap();
        assert!((f.gamma_hat - 3.0).abs() < 1e-12 && (f.h_hat - 1.0).abs() < 1e-12);
        let s: Vec<f64> = eps.iter().map(|e: &f64| 2.0 * e.powf(0.7)).collect();
        assert!((scaling_fit(&eps, &s).unwrap().h_hat - 0.7).abs() < 1e-10);
        assert!(matches!(scaling_fit(&eps, &[1.0, 0.0, 1.0, 1.0]), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn gronwall_rejects_negative_kernels() {
        let t = [0.0, 0.5, 1.0];
        let e = gronwall_bound(&t, &[1.0; 3], None, &[1.0, -1.0, 1.0], &[1.0; 3]);
        assert!(matches!(e, Err(Error::Hypothesis(_))));
    }
}

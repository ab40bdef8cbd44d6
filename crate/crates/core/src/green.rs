//! Cosine-series Green function of the linear operator with Neumann data,
//!
//! `G(x, ξ, t) = (1/ℓ)(1 − e^{−αt})/α + (2/ℓ) Σ_{n≥1} H_n(t) cos(γ_n ξ) cos(γ_n x)`,
//!
//! evaluated with a certified bound on the dropped tail.
//!
//! For `n` past the band index `n_c` every mode is overdamped with
//! `ω_n ≥ h_n √(1−c)` and `h_n ≥ εγ_n²/2`, so `1/ω_n ≤ 2ℓ²/(επ²n²√(1−c))`.
//! The slow rate `h_n − ω_n` never drops below `min(h_N − ω_N, 1/ε)` for
//! `n ≥ N`, and `Σ_{n≥N} 1/n² ≤ 1/(N−1)`. Together these give the tail bound
//! used to pick the truncation index. Time derivatives add the fast branch
//! `e^{−(h_n+ω_n)t}`, which is summed with a Gaussian integral bound.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{DerivedConstants, JunctionParams};
use crate::spectrum::{classify_bands, kernel_jet, mode};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 1_000_000;

/// Default band safety parameter `c` for the tail argument.
pub const DEFAULT_C_BAND: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub tol: f64,
    pub c_band: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { tol: 1e-10, c_band: DEFAULT_C_BAND, max_terms: MAX_TERMS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEvaluation {
    pub value: f64,
    /// Last series index included.
    pub n_terms: usize,
    /// Certified bound on `|G − value|` from the dropped tail.
    pub tail_bound: f64,
}

fn require_viscous(params: &JunctionParams) -> Result<()> {
    if params.epsilon() > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter("certified truncation needs epsilon > 0".into()))
    }
}

/// Smallest index from which the tail estimates apply.
fn tail_start(params: &JunctionParams, c: f64) -> Result<usize> {
    Ok(classify_bands(params, c)?.n_c.max(2))
}

/// Bound on `Σ_{n ≥ n_start} |H_n(t)|`.
pub fn tail_bound(params: &JunctionParams, n_start: usize, t: f64, c: f64) -> Result<f64> {
    require_viscous(params)?;
    let start = tail_start(params, c)?;
    if n_start < start {
        return Err(Error::Precondition(format!("tail bound needs n_start >= {start}, got {n_start}")));
    }
    if t < 0.0 {
        return Err(Error::Precondition(format!("t must be >= 0, got {t}")));
    }
    Ok(tail_bound_unchecked(params, n_start, t, c))
}

fn tail_prefactor(params: &JunctionParams, c: f64) -> f64 {
    let ell = params.ell();
    2.0 * ell * ell / (params.epsilon() * PI * PI * (1.0 - c).sqrt())
}

fn slow_rate_floor(params: &JunctionParams, n_start: usize) -> f64 {
    let m = mode(n_start, params);
    m.slow_rate().unwrap_or(0.0).min(1.0 / params.epsilon())
}

fn tail_bound_unchecked(params: &JunctionParams, n_start: usize, t: f64, c: f64) -> f64 {
    tail_prefactor(params, c) / (n_start - 1) as f64 * (-t * slow_rate_floor(params, n_start)).exp()
}

/// Bound on `Σ_{n ≥ n_start} |H_n^{(j)}(t)|` for `j ∈ {0, 1, 2}`.
///
/// For `j ≥ 1` it requires `t > 0` and `κ t n_start² ≥ j` with
/// `κ = επ²/(2ℓ²)`, which puts every fast-branch term on the decreasing
/// side of `b^{j−1} e^{−bt}`.
pub fn derivative_tail_bound(params: &JunctionParams, n_start: usize, t: f64, c: f64, j: usize) -> Result<f64> {
    if j == 0 {
        return tail_bound(params, n_start, t, c);
    }
    require_viscous(params)?;
    if j > 2 {
        return Err(Error::Parameter(format!("derivative order must be 0, 1 or 2, got {j}")));
    }
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("time derivatives need t > 0, got {t}")));
    }
    let start = tail_start(params, c)?.max(gauss_start(params, t, j));
    if n_start < start {
        return Err(Error::Precondition(format!("derivative tail needs n_start >= {start}, got {n_start}")));
    }
    Ok(derivative_tail_unchecked(params, n_start, t, c, j))
}

fn kappa(params: &JunctionParams) -> f64 {
    params.epsilon() * PI * PI / (2.0 * params.ell() * params.ell())
}

fn gauss_start(params: &JunctionParams, t: f64, j: usize) -> usize {
    if j == 0 {
        return 0;
    }
    (j as f64 / (kappa(params) * t)).sqrt().ceil() as usize
}

fn derivative_tail_unchecked(params: &JunctionParams, n_start: usize, t: f64, c: f64, j: usize) -> f64 {
    let eps = params.epsilon();
    let root = (1.0 - c).sqrt();
    // slow branch: a_n^j e^{−a_n t}/(2ω_n), with a_n < 2/ε
    let slow = (2.0 / eps).powi(j as i32) * 0.5 * tail_bound_unchecked(params, n_start, t, c);
    // fast branch: b_n^{j−1} e^{−b_n t}/√(1−c), with b_n ≥ κn²
    let lam = kappa(params) * t;
    let nn = n_start as f64;
    let g = (-lam * nn * nn).exp();
    let fast = match j {
        1 => g * (1.0 + 1.0 / (2.0 * lam * nn)),
        _ => {
            let k = kappa(params);
            k * (nn * nn * g + nn * g / (2.0 * lam) + g / (4.0 * lam * lam * nn))
        }
    };
    slow + fast / root
}

/// Last included index so that the `(2/ℓ)`-weighted tail of order `j` is
/// within `ctl.tol`.
fn truncation_index(params: &JunctionParams, t: f64, ctl: &SeriesControl, j: usize) -> Result<(usize, f64)> {
    require_viscous(params)?;
    if !(ctl.tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be > 0, got {}", ctl.tol)));
    }
    let w = 2.0 / params.ell();
    let bound = |n: usize| w * derivative_tail_unchecked_or_plain(params, n, t, ctl.c_band, j);
    let lo = tail_start(params, ctl.c_band)?.max(gauss_start(params, t, j));
    let cap = ctl.max_terms + 1;
    if lo > cap {
        return Err(Error::Truncation { n_terms: ctl.max_terms, best_bound: f64::INFINITY });
    }
    if bound(cap) > ctl.tol {
        return Err(Error::Truncation { n_terms: ctl.max_terms, best_bound: bound(cap) });
    }
    // bound is non-increasing in n: bisect for the first admissible start
    let (mut a, mut b) = (lo, cap);
    if bound(a) <= ctl.tol {
        b = a;
    }
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        if bound(mid) <= ctl.tol {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok((b - 1, bound(b)))
}

fn derivative_tail_unchecked_or_plain(params: &JunctionParams, n: usize, t: f64, c: f64, j: usize) -> f64 {
    if j == 0 {
        tail_bound_unchecked(params, n, t, c)
    } else {
        derivative_tail_unchecked(params, n, t, c, j)
    }
}

/// Kernel values `H_n^{(j)}(t)` for `n = 0..=n_terms` at one time level,
/// reusable across many `(x, ξ)` pairs.
#[derive(Debug, Clone)]
pub struct GreenSlice {
    pub t: f64,
    pub order: usize,
    pub n_terms: usize,
    pub tail_bound: f64,
    gammas: Vec<f64>,
    kernel: Vec<f64>,
    ell: f64,
}

impl GreenSlice {
    /// Truncation chosen adaptively from `ctl`.
    pub fn new(params: &JunctionParams, t: f64, order: usize, ctl: &SeriesControl) -> Result<Self> {
        if order > 2 {
            return Err(Error::Parameter(format!("derivative order must be 0, 1 or 2, got {order}")));
        }
        if t < 0.0 || (order > 0 && t <= 0.0) {
            return Err(Error::Precondition(format!("invalid time {t} for derivative order {order}")));
        }
        if t == 0.0 {
            return Ok(Self::fixed(params, 0.0, 0, 0));
        }
        let (n_terms, tail) = truncation_index(params, t, ctl, order)?;
        let mut s = Self::fixed(params, t, order, n_terms);
        s.tail_bound = tail;
        Ok(s)
    }

    /// Fixed number of terms, no tail certificate (`tail_bound` is NaN unless `t = 0`).
    pub fn fixed(params: &JunctionParams, t: f64, order: usize, n_terms: usize) -> Self {
        let mut gammas = Vec::with_capacity(n_terms + 1);
        let mut kernel = Vec::with_capacity(n_terms + 1);
        for n in 0..=n_terms {
            let m = mode(n, params);
            gammas.push(m.gamma_n);
            kernel.push(kernel_jet(&m, t)[order]);
        }
        let tail_bound = if t == 0.0 && order == 0 { 0.0 } else { f64::NAN };
        Self { t, order, n_terms, tail_bound, gammas, kernel, ell: params.ell() }
    }

    pub fn eval(&self, x: f64, xi: f64) -> f64 {
        if self.t == 0.0 && self.order == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        for n in (1..=self.n_terms).rev() {
            let g = self.gammas[n];
            sum += self.kernel[n] * ((g * x).cos() * (g * xi).cos());
        }
        (self.kernel[0] + 2.0 * sum) / self.ell
    }

    pub fn evaluation(&self, x: f64, xi: f64) -> GreenEvaluation {
        GreenEvaluation { value: self.eval(x, xi), n_terms: self.n_terms, tail_bound: self.tail_bound }
    }

    /// Series with each `H_n` replaced by `ε H_n' + H_n` needs both orders;
    /// this gives raw access for operator checks.
    pub fn kernel_values(&self) -> &[f64] {
        &self.kernel
    }
}

fn check_positions(params: &JunctionParams, x: f64, xi: f64) -> Result<()> {
    let ell = params.ell();
    if !(0.0..=ell).contains(&x) || !(0.0..=ell).contains(&xi) {
        return Err(Error::Precondition(format!("positions ({x}, {xi}) outside [0, {ell}]")));
    }
    Ok(())
}

pub fn green_eval(x: f64, xi: f64, t: f64, params: &JunctionParams, tol: f64) -> Result<GreenEvaluation> {
    green_eval_with(x, xi, t, params, &SeriesControl::with_tol(tol))
}

pub fn green_eval_with(x: f64, xi: f64, t: f64, params: &JunctionParams, ctl: &SeriesControl) -> Result<GreenEvaluation> {
    check_positions(params, x, xi)?;
    if t < 0.0 {
        return Err(Error::Precondition(format!("t must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(GreenEvaluation { value: 0.0, n_terms: 0, tail_bound: 0.0 });
    }
    Ok(GreenSlice::new(params, t, 0, ctl)?.evaluation(x, xi))
}

/// `∂^j G/∂t^j` for `j ∈ {1, 2}` and `t > 0`, termwise.
pub fn green_time_derivative(x: f64, xi: f64, t: f64, params: &JunctionParams, j: usize, tol: f64) -> Result<GreenEvaluation> {
    check_positions(params, x, xi)?;
    if !(1..=2).contains(&j) {
        return Err(Error::Parameter(format!("derivative order must be 1 or 2, got {j}")));
    }
    if !(t > 0.0) {
        return Err(Error::Parameter(format!("time derivatives need t > 0, got {t}")));
    }
    Ok(GreenSlice::new(params, t, j, &SeriesControl::with_tol(tol))?.evaluation(x, xi))
}

/// Partial sum through index `n_terms` of the order-`j` series.
pub fn green_partial_sum(x: f64, xi: f64, t: f64, params: &JunctionParams, n_terms: usize, j: usize) -> f64 {
    GreenSlice::fixed(params, t, j, n_terms).eval(x, xi)
}

/// Spatial nodes (shared by `x` and `ξ`) and times of an envelope sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSample {
    pub nodes: Vec<f64>,
    pub times: Vec<f64>,
}

impl EnvelopeSample {
    /// `n_space` nodes on `[0, ell]` and `n_time` times on `[t_min, horizon]`.
    pub fn uniform(ell: f64, n_space: usize, t_min: f64, horizon: f64, n_time: usize) -> Result<Self> {
        if n_space < 1 || n_time < 1 || !(t_min > 0.0) || horizon < t_min {
            return Err(Error::Parameter("envelope sample needs positive sizes and 0 < t_min <= horizon".into()));
        }
        let nodes = if n_space == 1 {
            vec![0.0]
        } else {
            (0..n_space).map(|i| ell * i as f64 / (n_space - 1) as f64).collect()
        };
        let times = if n_time == 1 {
            vec![horizon]
        } else {
            (0..n_time).map(|k| t_min + (horizon - t_min) * k as f64 / (n_time - 1) as f64).collect()
        };
        Ok(Self { nodes, times })
    }

    pub fn single(x: f64, t: f64) -> Self {
        Self { nodes: vec![x], times: vec![t] }
    }

    /// Held-out grid: spatial midpoints added and `factor`× the time count
    /// over the same interval.
    pub fn held_out(&self, factor: usize) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len());
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.extend(self.nodes.last().copied());
        let (t0, t1) = (self.times[0], *self.times.last().unwrap_or(&self.times[0]));
        let n = (self.times.len() * factor).max(1);
        let times = if n == 1 || t0 == t1 {
            vec![t1]
        } else {
            (0..n).map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64).collect()
        };
        Self { nodes, times }
    }

    pub fn len(&self) -> usize {
        self.nodes.len() * self.nodes.len() * self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per-time certified supremum of `|∂^j G|` over the spatial square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupSample {
    pub t: f64,
    pub sup: f64,
    pub x: f64,
    pub xi: f64,
}

fn sup_at(params: &JunctionParams, nodes: &[f64], t: f64, order: usize, ctl: &SeriesControl) -> Result<SupSample> {
    let slice = GreenSlice::new(params, t, order, ctl)?;
    let tail = if slice.tail_bound.is_nan() { 0.0 } else { slice.tail_bound };
    let mut best = SupSample { t, sup: -1.0, x: 0.0, xi: 0.0 };
    for (a, &x) in nodes.iter().enumerate() {
        for &xi in &nodes[a..] {
            let v = slice.eval(x, xi).abs() + tail;
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("Green function at t={t}")));
            }
            if v > best.sup {
                best = SupSample { t, sup: v, x, xi };
            }
        }
    }
    Ok(best)
}

pub fn sample_sup(params: &JunctionParams, sample: &EnvelopeSample, order: usize, ctl: &SeriesControl) -> Result<Vec<SupSample>> {
    use rayon::prelude::*;
    sample.times.par_iter().map(|&t| sup_at(params, &sample.nodes, t, order, ctl)).collect()
}

/// Scan points per time cell before the golden-section refinement.
const CELL_SCAN: usize = 6;
const CELL_GOLDEN_STEPS: usize = 14;

/// Largest spatial supremum over each time cell `[t_k, t_{k+1}]` of the
/// sample (the last time is its own cell), reported at the cell's right
/// end where a decreasing envelope is lowest. Reflected fronts make
/// `t ↦ sup |G|` spike between sample times, so point values alone
/// underestimate it.
pub fn sample_cell_sup(params: &JunctionParams, sample: &EnvelopeSample, order: usize, ctl: &SeriesControl) -> Result<Vec<SupSample>> {
    use rayon::prelude::*;
    let times = &sample.times;
    (0..times.len())
        .into_par_iter()
        .map(|k| {
            let at = |t: f64| sup_at(params, &sample.nodes, t, order, ctl);
            let Some(&t1) = times.get(k + 1) else { return at(times[k]) };
            let t0 = times[k];
            let h = (t1 - t0) / CELL_SCAN as f64;
            let scan = (0..=CELL_SCAN).map(|i| at(t0 + h * i as f64)).collect::<Result<Vec<_>>>()?;
            let i = (0..scan.len()).max_by(|&a, &b| scan[a].sup.total_cmp(&scan[b].sup)).unwrap_or(0);
            let mut best = scan[i];
            let (mut lo, mut hi) = (t0 + h * i.saturating_sub(1) as f64, (t0 + h * (i + 1) as f64).min(t1));
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            let mut m1 = at(hi - phi * (hi - lo))?;
            let mut m2 = at(lo + phi * (hi - lo))?;
            for _ in 0..CELL_GOLDEN_STEPS {
                for m in [m1, m2] {
                    if m.sup > best.sup {
                        best = m;
                    }
                }
                if m1.sup > m2.sup {
                    hi = m2.t;
                    m2 = m1;
                    m1 = at(hi - phi * (hi - lo))?;
                } else {
                    lo = m1.t;
                    m1 = m2;
                    m2 = at(lo + phi * (hi - lo))?;
                }
            }
            for m in [m1, m2] {
                if m.sup > best.sup {
                    best = m;
                }
            }
            Ok(SupSample { t: t1, ..best })
        })
        .collect()
}

/// Constants of the decay envelope `|G| ≤ ½(M ε^r + N e^{−βt})`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeConstants {
    pub m_const: f64,
    pub n_const: f64,
    pub beta: f64,
    pub r: f64,
    pub epsilon: f64,
    /// Largest gap between the envelope and the sampled supremum.
    pub max_slack: f64,
    pub fitted_on: String,
}

impl EnvelopeConstants {
    pub fn envelope(&self, t: f64) -> f64 {
        0.5 * (self.m_const * self.epsilon.powf(self.r) + self.n_const * (-self.beta * t).exp())
    }
}

/// Minimax fit of `(M, N)`: the positive pair whose envelope covers every
/// sampled supremum with the smallest maximum slack.
pub fn fit_envelope_constants(
    params: &JunctionParams,
    derived: &DerivedConstants,
    sample: &EnvelopeSample,
    ctl: &SeriesControl,
) -> Result<EnvelopeConstants> {
    let sups = sample_cell_sup(params, sample, 0, ctl)?;
    let eps_r = params.epsilon().powf(derived.r);
    let pts: Vec<(f64, f64)> = sups.iter().map(|s| ((-derived.beta * s.t).exp(), s.sup)).collect();
    let (a, b) = minimax_envelope(&pts);
    let m_const = 2.0 * a / eps_r;
    let n_const = 2.0 * b;
    let max_slack = pts.iter().map(|&(e, g)| a + b * e - g).fold(0.0, f64::max);
    Ok(EnvelopeConstants {
        m_const,
        n_const,
        beta: derived.beta,
        r: derived.r,
        epsilon: params.epsilon(),
        max_slack,
        fitted_on: format!(
            "alpha={} epsilon={} ell={} nodes={} times={} t=[{}, {}]",
            params.alpha(),
            params.epsilon(),
            params.ell(),
            sample.nodes.len(),
            sample.times.len(),
            sample.times.first().copied().unwrap_or(0.0),
            sample.times.last().copied().unwrap_or(0.0),
        ),
    })
}

/// Minimises `max_k (a + b e_k − g_k)` subject to `a + b e_k ≥ g_k`,
/// `a, b > 0`, for points `(e_k, g_k)` with `e_k ∈ (0, 1]`.
fn minimax_envelope(pts: &[(f64, f64)]) -> (f64, f64) {
    let gmax = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let floor = (gmax * 1e-12).max(f64::MIN_POSITIVE);
    let a_of = |b: f64| pts.iter().map(|&(e, g)| g - b * e).fold(floor, f64::max);
    let slack = |b: f64| {
        let a = a_of(b);
        pts.iter().map(|&(e, g)| a + b * e - g).fold(f64::NEG_INFINITY, f64::max)
    };
    let b_hi = pts.iter().map(|&(e, g)| g / e).fold(floor, f64::max);
    // slack(b) is convex piecewise linear: golden section, then prefer the
    // largest b among equally good candidates so N carries the decaying part
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, b_hi);
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if slack(m1) < slack(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let b = (0.5 * (lo + hi)).max(floor);
    (a_of(b), b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeCheck {
    pub checked: usize,
    pub violations: usize,
    /// Smallest `envelope − sup` seen; negative on violation.
    pub worst_margin: f64,
    pub witness: Option<SupSample>,
}

impl EnvelopeCheck {
    pub fn into_result(self, envelope_at: impl Fn(f64) -> f64) -> Result<Self> {
        match (self.violations, self.witness) {
            (0, _) => Ok(self),
            (_, Some(w)) => Err(Error::Envelope { x: w.x, xi: w.xi, t: w.t, value: w.sup, envelope: envelope_at(w.t) }),
            _ => Ok(self),
        }
    }
}

fn check_against(sups: &[SupSample], nodes: usize, envelope: impl Fn(f64) -> f64) -> EnvelopeCheck {
    let mut check = EnvelopeCheck { checked: sups.len() * nodes * nodes, violations: 0, worst_margin: f64::INFINITY, witness: None };
    for s in sups {
        let margin = envelope(s.t) - s.sup;
        if margin < 0.0 {
            check.violations += 1;
        }
        if margin < check.worst_margin {
            check.worst_margin = margin;
            check.witness = Some(*s);
        }
    }
    check
}

/// Counts sample times where the certified `sup |G|` exceeds the envelope.
pub fn validate_envelope(consts: &EnvelopeConstants, params: &JunctionParams, sample: &EnvelopeSample, ctl: &SeriesControl) -> Result<EnvelopeCheck> {
    let sups = sample_sup(params, sample, 0, ctl)?;
    Ok(check_against(&sups, sample.nodes.len(), |t| consts.envelope(t)))
}

/// Smallest `A_j` with `|∂^j G/∂t^j| ≤ A_j e^{−βt}` on the sample.
pub fn fit_derivative_constant(params: &JunctionParams, beta: f64, sample: &EnvelopeSample, j: usize, ctl: &SeriesControl) -> Result<f64> {
    let sups = sample_cell_sup(params, sample, j, ctl)?;
    Ok(sups.iter().map(|s| s.sup * (beta * s.t).exp()).fold(0.0, f64::max))
}

pub fn validate_derivative_envelope(
    a_j: f64,
    beta: f64,
    params: &JunctionParams,
    sample: &EnvelopeSample,
    j: usize,
    ctl: &SeriesControl,
) -> Result<EnvelopeCheck> {
    let sups = sample_sup(params, sample, j, ctl)?;
    Ok(check_against(&sups, sample.nodes.len(), |t| a_j * (-beta * t).exp()))
}

/// Rectangle of `(x, t)` points with a set of source positions `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualBox {
    pub x_range: (f64, f64),
    pub t_range: (f64, f64),
    pub xi: Vec<f64>,
    pub n_x: usize,
    pub n_t: usize,
}

impl ResidualBox {
    fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
        if n <= 1 {
            return vec![range.0];
        }
        (0..n).map(|k| range.0 + (range.1 - range.0) * k as f64 / (n - 1) as f64).collect()
    }
}

/// Max of `|∂_xx(εG_t + G) − G_tt − αG_t|` over the box, with centered
/// differences in `x` on the summed series and analytic time derivatives.
/// One truncation index per time level is shared by every stencil point.
pub fn operator_residual(params: &JunctionParams, bx: &ResidualBox, fd_step: f64, ctl: &SeriesControl) -> Result<f64> {
    let ell = params.ell();
    if !(bx.x_range.0 - fd_step > 0.0 && bx.x_range.1 + fd_step < ell) {
        return Err(Error::Precondition("residual box must lie strictly inside (0, ell) including the stencil".into()));
    }
    if !(bx.t_range.0 > 0.0) {
        return Err(Error::Precondition("residual box needs t > 0".into()));
    }
    let (eps, alpha) = (params.epsilon(), params.alpha());
    let mut worst: f64 = 0.0;
    for t in ResidualBox::axis(bx.t_range, bx.n_t) {
        let n = (0..=2)
            .map(|j| truncation_index(params, t, ctl, j).map(|r| r.0))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let s0 = GreenSlice::fixed(params, t, 0, n);
        let s1 = GreenSlice::fixed(params, t, 1, n);
        let s2 = GreenSlice::fixed(params, t, 2, n);
        for &xi in &bx.xi {
            for x in ResidualBox::axis(bx.x_range, bx.n_x) {
                let w = |y: f64| eps * s1.eval(y, xi) + s0.eval(y, xi);
                let wxx = (w(x + fd_step) - 2.0 * w(x) + w(x - fd_step)) / (fd_step * fd_step);
                let res = wxx - s2.eval(x, xi) - alpha * s1.eval(x, xi);
                worst = worst.max(res.abs());
            }
        }
    }
    Ok(worst)
}

/// Termwise `x`-derivative of the truncated series at `x`.
pub fn green_x_derivative_partial(x: f64, xi: f64, t: f64, params: &JunctionParams, n_terms: usize) -> f64 {
    let mut sum = 0.0;
    for n in 1..=n_terms {
        let m = mode(n, params);
        let h = kernel_jet(&m, t)[0];
        sum += h * (-m.gamma_n * (m.gamma_n * x).sin()) * (m.gamma_n * xi).cos();
    }
    2.0 * sum / params.ell()
}

//! Line-based experiment configs: `key = value` under `[section]` headers,
//! `#` comments, a top-level `mode`. Unknown sections and keys are errors.

use std::collections::BTreeMap;

use crate::green::{SeriesControl, DEFAULT_C_BAND, MAX_TERMS};
use crate::remainder::RemainderConfig;
use crate::solver::SolverConfig;
use crate::waves::{ASign, WaveFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Green,
    Wave,
    Solve,
    Remainder,
    Gronwall,
    Bench,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "green" => Self::Green,
            "wave" => Self::Wave,
            "solve" => Self::Solve,
            "remainder" => Self::Remainder,
            "gronwall" => Self::Gronwall,
            "bench" => Self::Bench,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Green => "green",
            Self::Wave => "wave",
            Self::Solve => "solve",
            Self::Remainder => "remainder",
            Self::Gronwall => "gronwall",
            Self::Bench => "bench",
        }
    }

    fn required_sections(self) -> &'static [&'static str] {
        match self {
            Self::Green => &["params", "green", "output"],
            Self::Wave | Self::Solve | Self::Remainder | Self::Gronwall => &["params", "wave", "output"],
            Self::Bench => &["params", "bench", "output"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamsBlock {
    pub alpha: f64,
    pub epsilon: Option<f64>,
    pub epsilon_list: Option<Vec<f64>>,
    pub gamma: f64,
    pub ell: f64,
    pub horizon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveBlock {
    pub family: WaveFamily,
    pub c_wave: f64,
    pub a_sign: Option<ASign>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisBlock {
    pub q: f64,
    pub h_exp: f64,
    pub c_band: f64,
    pub tol: f64,
    pub fd_step: f64,
    pub envelope_space: usize,
    pub envelope_time: usize,
    pub envelope_t_min: f64,
    pub k_grid: usize,
}

impl Default for AnalysisBlock {
    fn default() -> Self {
        let r = RemainderConfig::default();
        Self {
            q: r.q,
            h_exp: r.h_exp,
            c_band: DEFAULT_C_BAND,
            tol: r.series.tol,
            fd_step: 1e-3,
            envelope_space: r.envelope_space,
            envelope_time: r.envelope_time,
            envelope_t_min: r.envelope_t_min,
            k_grid: r.k_grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenBlock {
    pub xi: Vec<f64>,
    pub times: Vec<f64>,
    pub nx: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchBlock {
    pub n_terms: Vec<usize>,
    pub nx: usize,
    pub nt: usize,
    pub repeats: usize,
    pub x: f64,
    pub xi: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputBlock {
    pub out_dir: String,
    pub prefix: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub params: ParamsBlock,
    pub wave: Option<WaveBlock>,
    pub solver: SolverConfig,
    pub analysis: AnalysisBlock,
    pub green: Option<GreenBlock>,
    pub bench: Option<BenchBlock>,
    pub output: OutputBlock,
}

impl ExperimentConfig {
    pub fn series(&self) -> SeriesControl {
        SeriesControl { tol: self.analysis.tol, c_band: self.analysis.c_band, max_terms: MAX_TERMS }
    }

    /// Viscosities to sweep: the list if given, else the single value.
    pub fn eps_list(&self) -> Vec<f64> {
        match (&self.params.epsilon_list, self.params.epsilon) {
            (Some(l), _) => l.clone(),
            (None, Some(e)) => vec![e],
            (None, None) => Vec::new(),
        }
    }

    pub fn remainder_config(&self) -> RemainderConfig {
        let wave = self.wave.clone().expect("validated");
        RemainderConfig {
            alpha: self.params.alpha,
            gamma: self.params.gamma,
            ell: self.params.ell,
            horizon: self.params.horizon,
            eps_list: self.eps_list(),
            family: wave.family,
            c_wave: wave.c_wave,
            a_sign: wave.a_sign,
            solver: self.solver,
            q: self.analysis.q,
            h_exp: self.analysis.h_exp,
            series: self.series(),
            envelope_space: self.analysis.envelope_space,
            envelope_time: self.analysis.envelope_time,
            envelope_t_min: self.analysis.envelope_t_min,
            k_grid: self.analysis.k_grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("params", &["alpha", "epsilon", "epsilon_list", "gamma", "ell", "horizon"]),
    ("wave", &["family", "c_wave", "a_sign"]),
    ("solver", &["nx", "cfl", "theta", "picard_tol", "picard_max_iter", "green_tol"]),
    (
        "analysis",
        &["q", "h_exp", "c_band", "tol", "fd_step", "envelope_space", "envelope_time", "envelope_t_min", "k_grid"],
    ),
    ("green", &["xi", "times", "nx"]),
    ("bench", &["n_terms", "nx", "nt", "repeats", "x", "xi", "t"]),
    ("output", &["out_dir", "prefix"]),
];

struct Entry {
    value: String,
    line: usize,
}

type Sections = BTreeMap<String, BTreeMap<String, Entry>>;

fn tokenize(text: &str) -> Result<(Option<Entry>, Sections), ConfigError> {
    let mut mode = None;
    let mut sections: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| err(line, format!("malformed section header '{body}'")))?.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(err(line, format!("unknown section '{name}'")));
            }
            if sections.contains_key(name) {
                return Err(err(line, format!("duplicate section '{name}'")));
            }
            sections.insert(name.to_string(), BTreeMap::new());
            current = Some(name.to_string());
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| err(line, format!("expected key = value, got '{body}'")))?;
        let (key, value) = (key.trim(), value.trim().to_string());
        match &current {
            None => {
                if key != "mode" {
                    return Err(err(line, format!("unknown key '{key}' outside any section")));
                }
                if mode.is_some() {
                    return Err(err(line, "duplicate key 'mode'"));
                }
                mode = Some(Entry { value, line });
            }
            Some(sec) => {
                let allowed = SECTIONS.iter().find(|(s, _)| s == sec).map(|(_, k)| *k).unwrap_or(&[]);
                if !allowed.contains(&key) {
                    return Err(err(line, format!("unknown key '{key}' in section [{sec}]")));
                }
                let map = sections.get_mut(sec).expect("section registered");
                if map.contains_key(key) {
                    return Err(err(line, format!("duplicate key '{key}' in section [{sec}]")));
                }
                map.insert(key.to_string(), Entry { value, line });
            }
        }
    }
    Ok((mode, sections))
}

struct Section<'a> {
    name: &'a str,
    entries: Option<&'a BTreeMap<String, Entry>>,
}

impl Section<'_> {
    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.and_then(|m| m.get(key))
    }

    fn f64_opt(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.raw(key)
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(e.line, format!("key '{key}' in [{}] needs a finite number, got '{}'", self.name, e.value)))
            })
            .transpose()
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    fn f64_req(&self, key: &str) -> Result<f64, ConfigError> {
        self.f64_opt(key)?.ok_or_else(|| err(0, format!("missing key '{key}' in [{}]", self.name)))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.raw(key) {
            None => Ok(default),
            Some(e) => e
                .value
                .parse()
                .map_err(|_| err(e.line, format!("key '{key}' in [{}] needs a non-negative integer, got '{}'", self.name, e.value))),
        }
    }

    fn list_opt<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, ConfigError> {
        self.raw(key)
            .map(|e| {
                e.value
                    .split(',')
                    .map(|s| s.trim().parse::<T>())
                    .collect::<Result<Vec<T>, _>>()
                    .map_err(|_| err(e.line, format!("key '{key}' in [{}] needs a comma-separated list, got '{}'", self.name, e.value)))
            })
            .transpose()
    }

    fn string_opt(&self, key: &str) -> Option<String> {
        self.raw(key).map(|e| e.value.clone())
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let (mode, sections) = tokenize(text)?;
    let mode_entry = mode.ok_or_else(|| err(0, "missing top-level key 'mode'"))?;
    let mode = Mode::parse(&mode_entry.value)
        .ok_or_else(|| err(mode_entry.line, format!("unknown mode '{}'", mode_entry.value)))?;
    for s in mode.required_sections() {
        if !sections.contains_key(*s) {
            return Err(err(0, format!("mode {} needs a [{s}] section", mode.name())));
        }
    }
    let sec = |name: &'static str| Section { name, entries: sections.get(name) };

    let p = sec("params");
    let epsilon_list = p.list_opt::<f64>("epsilon_list")?;
    if let Some(l) = &epsilon_list {
        if l.is_empty() || l.iter().any(|v| !v.is_finite()) {
            return Err(err(p.raw("epsilon_list").map_or(0, |e| e.line), "epsilon_list must hold finite numbers"));
        }
    }
    let params = ParamsBlock {
        alpha: p.f64_req("alpha")?,
        epsilon: p.f64_opt("epsilon")?,
        epsilon_list,
        gamma: p.f64_or("gamma", 0.0)?,
        ell: p.f64_or("ell", std::f64::consts::PI)?,
        horizon: p.f64_or("horizon", 1.0)?,
    };
    let needs_list = mode == Mode::Remainder;
    if needs_list && params.epsilon_list.is_none() && params.epsilon.is_none() {
        return Err(err(0, "mode remainder needs 'epsilon_list' or 'epsilon' in [params]"));
    }
    if !needs_list && mode != Mode::Wave && params.epsilon.is_none() {
        return Err(err(0, format!("mode {} needs 'epsilon' in [params]", mode.name())));
    }

    let wave = if sections.contains_key("wave") {
        let w = sec("wave");
        let fam = w.raw("family").ok_or_else(|| err(0, "missing key 'family' in [wave]"))?;
        let family = WaveFamily::parse(&fam.value).ok_or_else(|| err(fam.line, format!("unknown wave family '{}'", fam.value)))?;
        let a_sign = match w.raw("a_sign") {
            None => None,
            Some(e) => Some(ASign::parse(&e.value).ok_or_else(|| err(e.line, format!("a_sign must be plus or minus, got '{}'", e.value)))?),
        };
        Some(WaveBlock { family, c_wave: w.f64_or("c_wave", 0.0)?, a_sign })
    } else {
        None
    };

    let s = sec("solver");
    let d = SolverConfig::default();
    let solver = SolverConfig {
        nx: s.usize_or("nx", d.nx)?,
        cfl: s.f64_or("cfl", d.cfl)?,
        theta: s.f64_or("theta", d.theta)?,
        picard_tol: s.f64_or("picard_tol", d.picard_tol)?,
        picard_max_iter: s.usize_or("picard_max_iter", d.picard_max_iter)?,
        green_tol: s.f64_or("green_tol", d.green_tol)?,
    };
    solver.validate().map_err(|e| err(0, format!("[solver]: {e}")))?;

    let a = sec("analysis");
    let d = AnalysisBlock::default();
    let analysis = AnalysisBlock {
        q: a.f64_or("q", d.q)?,
        h_exp: a.f64_or("h_exp", d.h_exp)?,
        c_band: a.f64_or("c_band", d.c_band)?,
        tol: a.f64_or("tol", d.tol)?,
        fd_step: a.f64_or("fd_step", d.fd_step)?,
        envelope_space: a.usize_or("envelope_space", d.envelope_space)?,
        envelope_time: a.usize_or("envelope_time", d.envelope_time)?,
        envelope_t_min: a.f64_or("envelope_t_min", d.envelope_t_min)?,
        k_grid: a.usize_or("k_grid", d.k_grid)?,
    };

    let green = if sections.contains_key("green") {
        let g = sec("green");
        let xi = g.list_opt::<f64>("xi")?.ok_or_else(|| err(0, "missing key 'xi' in [green]"))?;
        let times = g.list_opt::<f64>("times")?.ok_or_else(|| err(0, "missing key 'times' in [green]"))?;
        Some(GreenBlock { xi, times, nx: g.usize_or("nx", 33)? })
    } else {
        None
    };

    let bench = if sections.contains_key("bench") {
        let b = sec("bench");
        Some(BenchBlock {
            n_terms: b.list_opt::<usize>("n_terms")?.unwrap_or_else(|| vec![1000, 2000, 4000, 8000]),
            nx: b.usize_or("nx", 201)?,
            nt: b.usize_or("nt", 400)?,
            repeats: b.usize_or("repeats", 3)?,
            x: b.f64_or("x", 1.0)?,
            xi: b.f64_or("xi", 2.0)?,
            t: b.f64_or("t", 1.0)?,
        })
    } else {
        None
    };

    let o = sec("output");
    let output = OutputBlock { out_dir: o.string_opt("out_dir").unwrap_or_else(|| ".".into()), prefix: o.string_opt("prefix") };
    if let Some(p) = &output.prefix {
        if p.is_empty() || p.contains(['/', '\\']) {
            return Err(err(o.raw("prefix").map_or(0, |e| e.line), format!("invalid prefix '{p}'")));
        }
    }

    Ok(ExperimentConfig { mode, params, wave, solver, analysis, green, bench, output })
}

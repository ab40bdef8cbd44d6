//! Batch front end behind the `sgtool` binary.
//!
//! `run` parses a config, executes one mode, checks that every number is
//! finite and only then writes the CSV tables, a `run_meta.txt` and a
//! gnuplot script into the output directory.

pub mod config;

use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::bench::{adaptive_terms, bench_green_sum, bench_kernel_table, bench_solver};
use crate::error::Error;
use crate::green::GreenSlice;
use crate::model::{neumann_data_from_wave, JunctionParams};
use crate::remainder::{run_epsilon, run_remainder};
use crate::solver::solve_perturbed;
use crate::waves::TravelingWave;

pub use config::{parse_config, ConfigError, ExperimentConfig, Mode};

/// Environment variable overriding `[output] out_dir`.
pub const OUT_ENV: &str = "SGTOOL_OUT";

pub const GREEN_HEADER: &str = "x,xi,t,value,n_terms,tail_bound";
pub const WAVE_HEADER: &str = "x,t,U,Ux,Ut,Uxxt,residual_ode,residual_pde";
pub const SOLVE_HEADER: &str = "x,t,u";
pub const S_CURVE_HEADER: &str = "epsilon,t,S";
pub const SUMMARY_HEADER: &str = "epsilon,k_const,M,N,beta,r,h_exp,T_eps,S_max,bound_max,gamma_hat,h_hat";
pub const GRONWALL_HEADER: &str = "t,x_input,bound";
pub const BASELINE_HEADER: &str = "name,scale,seconds";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Run(#[from] Error),
    #[error("io error: {0}")]
    Io(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self::Config(e.to_string())
    }
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Run(e) if e.is_numerical() => 3,
            Self::Run(_) => 2,
            Self::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Run(e) => match e {
                Error::Parameter(_) => "parameter",
                Error::Precondition(_) => "precondition",
                Error::Singular { .. } => "singular",
                Error::Truncation { .. } => "truncation",
                Error::Instability { .. } => "instability",
                Error::Contraction { .. } => "contraction",
                Error::NotConverged { .. } => "not_converged",
                Error::Envelope { .. } => "envelope",
                Error::DegenerateFit(_) => "degenerate_fit",
                Error::Hypothesis(_) => "hypothesis",
                Error::NonFinite(_) => "non_finite",
            },
            Self::Io(_) => "io",
        }
    }

    /// One line for the diagnostic stream.
    pub fn diagnostic(&self) -> String {
        let msg = self.to_string().replace(['\n', '"'], " ");
        format!("sgtool: status=error exit={} kind={} message=\"{}\"", self.exit_code(), self.kind(), msg)
    }
}

/// One output file, held in memory until the whole run has succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub header: &'static str,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Table {
    fn new(name: &'static str, header: &'static str) -> Self {
        Self { name, header, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    fn first_non_finite(&self) -> Option<usize> {
        self.rows.iter().position(|r| r.iter().any(|c| matches!(c, Cell::Num(v) if !v.is_finite())))
    }

    pub fn render(&self) -> String {
        let mut s = String::with_capacity(self.rows.len() * 64);
        s.push_str(self.header);
        s.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = match c {
                    Cell::Num(v) => write!(s, "{v:.16e}"),
                    Cell::Int(v) => write!(s, "{v}"),
                    Cell::Text(v) => write!(s, "{v}"),
                };
            }
            s.push('\n');
        }
        s
    }
}

fn num(v: f64) -> Cell {
    Cell::Num(v)
}

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

fn single_params(cfg: &ExperimentConfig) -> Result<JunctionParams, CliError> {
    let p = &cfg.params;
    Ok(JunctionParams::new(p.alpha, p.epsilon.unwrap_or(0.0), p.gamma, p.ell, p.horizon)?)
}

fn wave_of(cfg: &ExperimentConfig, params: &JunctionParams) -> Result<TravelingWave, CliError> {
    let w = cfg.wave.as_ref().ok_or_else(|| CliError::Config("missing [wave] section".into()))?;
    Ok(TravelingWave::new(w.family, w.c_wave, params, w.a_sign)?)
}

/// Executes the configured mode and returns its tables (nothing written).
pub fn compute(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    match cfg.mode {
        Mode::Green => green_tables(cfg),
        Mode::Wave => wave_tables(cfg),
        Mode::Solve => solve_tables(cfg),
        Mode::Remainder => remainder_tables(cfg),
        Mode::Gronwall => gronwall_tables(cfg),
        Mode::Bench => bench_tables(cfg),
    }
}

fn green_tables(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let params = single_params(cfg)?;
    let g = cfg.green.as_ref().ok_or_else(|| CliError::Config("missing [green] section".into()))?;
    let grid = crate::model::Grid1D::new(g.nx, params.ell())?;
    let mut table = Table::new("green_profile.csv", GREEN_HEADER);
    for &t in &g.times {
        let slice = GreenSlice::new(&params, t, 0, &cfg.series())?;
        for &xi in &g.xi {
            if !(0.0..=params.ell()).contains(&xi) {
                return Err(Error::Precondition(format!("xi = {xi} outside [0, {}]", params.ell())).into());
            }
            for x in grid.points() {
                table.push(vec![num(x), num(xi), num(t), num(slice.eval(x, xi)), Cell::Int(slice.n_terms), num(slice.tail_bound)]);
            }
        }
    }
    Ok(vec![table])
}

fn wave_tables(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let params = single_params(cfg)?;
    let wave = wave_of(cfg, &params)?;
    let grid = cfg.solver.grid(params.ell())?;
    let time = cfg.solver.time_axis(params.ell(), params.horizon())?;
    let h = cfg.analysis.fd_step;
    wave.check_box((-h, params.ell() + h), (-h, params.horizon() + h))?;
    let mut table = Table::new("wave_profile.csv", WAVE_HEADER);
    for t in time.points() {
        for x in grid.points() {
            let j = wave.jet(x, t)?;
            let ode = (-wave.alpha() * j.u_t - j.u.sin() - wave.gamma()).abs();
            let pde = wave.pde_residual((x, x), (t, t), 1, h)?;
            table.push(vec![num(x), num(t), num(j.u), num(j.u_x), num(j.u_t), num(j.u_xxt), num(ode), num(pde)]);
        }
    }
    Ok(vec![table])
}

fn solve_tables(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let params = single_params(cfg)?;
    let wave = wave_of(cfg, &params)?;
    let grid = cfg.solver.grid(params.ell())?;
    let time = cfg.solver.time_axis(params.ell(), params.horizon())?;
    let data = neumann_data_from_wave(&wave, grid, time)?;
    let u = solve_perturbed(&params, &data, &cfg.solver)?;
    let mut table = Table::new("solve_field.csv", SOLVE_HEADER);
    for k in 0..=time.nt {
        let t = time.t(k);
        for (i, &v) in u.row(k).iter().enumerate() {
            table.push(vec![num(grid.x(i)), num(t), num(v)]);
        }
    }
    Ok(vec![table])
}

fn remainder_tables(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let report = run_remainder(&cfg.remainder_config())?;
    let mut curves = Table::new("s_curve.csv", S_CURVE_HEADER);
    let mut summary = Table::new("remainder_summary.csv", SUMMARY_HEADER);
    for run in &report.runs {
        for (t, s) in run.times.iter().zip(&run.s) {
            curves.push(vec![num(run.epsilon), num(*t), num(*s)]);
        }
        summary.push(vec![
            num(run.epsilon),
            num(run.k_const),
            num(run.envelope.m_const),
            num(run.envelope.n_const),
            num(report.beta),
            num(report.r),
            num(report.h_exp),
            num(run.t_eps),
            num(run.s_max),
            num(run.bound_max),
            num(report.fit.gamma_hat),
            num(report.fit.h_hat),
        ]);
    }
    Ok(vec![curves, summary])
}

fn gronwall_tables(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let eps = cfg.params.epsilon.ok_or_else(|| CliError::Config("mode gronwall needs 'epsilon' in [params]".into()))?;
    let run = run_epsilon(&cfg.remainder_config(), eps)?;
    let mut table = Table::new("gronwall.csv", GRONWALL_HEADER);
    for ((t, s), b) in run.times.iter().zip(&run.s).zip(&run.gronwall) {
        table.push(vec![num(*t), num(*s), num(*b)]);
    }
    Ok(vec![table])
}

fn bench_tables(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let params = single_params(cfg)?;
    let b = cfg.bench.as_ref().ok_or_else(|| CliError::Config("missing [bench] section".into()))?;
    let mut records = bench_green_sum(&params, &b.n_terms, b.x, b.xi, b.t, b.repeats);
    let kt = bench_kernel_table(&params, b.nx, b.nt, b.repeats)?;
    records.push(kt.cached);
    records.push(kt.uncached);
    records.push(bench_solver(&params, cfg.solver.nx, b.repeats)?);
    // fails early if the configured point cannot be certified
    adaptive_terms(&params, b.t, cfg.analysis.tol)?;
    let mut table = Table::new("bench_baseline.csv", BASELINE_HEADER);
    for r in &records {
        table.push(vec![Cell::Text(r.name.clone()), Cell::Int(r.scale), num(r.seconds)]);
    }
    Ok(vec![table])
}

/// Removes the lock file when dropped.
struct Lock {
    path: PathBuf,
}

impl Lock {
    fn acquire(path: PathBuf) -> Result<Self, CliError> {
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Self { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(CliError::Io(format!("output prefix is locked by {}", path.display())))
            }
            Err(e) => Err(CliError::Io(format!("cannot create {}: {e}", path.display()))),
        }
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn file_name(prefix: &Option<String>, name: &str) -> String {
    match prefix {
        Some(p) => format!("{p}_{name}"),
        None => name.to_string(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut f = File::create(path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(contents.as_bytes()).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn plot_script(cfg: &ExperimentConfig, tables: &[Table]) -> String {
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\n");
    for t in tables {
        let f = file_name(&cfg.output.prefix, t.name);
        let _ = match t.name {
            "green_profile.csv" => writeln!(s, "plot '{f}' using 1:4 with points title 'G'"),
            "wave_profile.csv" => writeln!(s, "plot '{f}' using 1:3 with points title 'U'"),
            "solve_field.csv" => writeln!(s, "plot '{f}' using 1:3 with points title 'u'"),
            "s_curve.csv" => writeln!(s, "set logscale y\nplot '{f}' using 2:3 with points title 'S(t)'\nunset logscale y"),
            "remainder_summary.csv" => writeln!(s, "set logscale xy\nplot '{f}' using 1:9 with linespoints title 'S_max'\nunset logscale xy"),
            "gronwall.csv" => writeln!(s, "plot '{f}' using 1:2 with lines title 'S', '' using 1:3 with lines title 'bound'"),
            _ => writeln!(s, "# {f}"),
        };
    }
    s
}

/// Parses, computes and writes every artifact of one config.
pub fn run(path: &Path) -> Result<RunSummary, CliError> {
    let cfg = load_config(path)?;
    run_config(&cfg, path)
}

pub fn run_config(cfg: &ExperimentConfig, source: &Path) -> Result<RunSummary, CliError> {
    let out_dir = PathBuf::from(std::env::var(OUT_ENV).unwrap_or_else(|_| cfg.output.out_dir.clone()));
    fs::create_dir_all(&out_dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let _lock = Lock::acquire(out_dir.join(file_name(&cfg.output.prefix, "sgtool.lock")))?;

    let started = std::time::Instant::now();
    let tables = compute(cfg)?;
    for t in &tables {
        if let Some(row) = t.first_non_finite() {
            return Err(Error::NonFinite(format!("{} row {}", t.name, row + 1)).into());
        }
    }
    let mut files = Vec::new();
    for t in &tables {
        let p = out_dir.join(file_name(&cfg.output.prefix, t.name));
        write_file(&p, &t.render())?;
        files.push(p);
    }
    let gp = out_dir.join(file_name(&cfg.output.prefix, "plot.gp"));
    write_file(&gp, &plot_script(cfg, &tables))?;
    files.push(gp);

    let mut meta = String::new();
    let _ = writeln!(meta, "sgtool {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(meta, "mode = {}", cfg.mode.name());
    let _ = writeln!(meta, "config = {}", source.display());
    let _ = writeln!(meta, "threads = {}", rayon::current_num_threads());
    let _ = writeln!(meta, "elapsed_seconds = {:.3}", started.elapsed().as_secs_f64());
    if let Ok(d) = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH) {
        let _ = writeln!(meta, "finished_unix = {}", d.as_secs());
    }
    for t in &tables {
        let _ = writeln!(meta, "table {} rows = {}", t.name, t.rows.len());
    }
    let mp = out_dir.join(file_name(&cfg.output.prefix, "run_meta.txt"));
    write_file(&mp, &meta)?;
    files.push(mp);
    Ok(RunSummary { out_dir, files })
}

/// Parse-only check.
pub fn validate(path: &Path) -> Result<ExperimentConfig, CliError> {
    let cfg = load_config(path)?;
    if let Some(w) = &cfg.wave {
        let p = &cfg.params;
        let params = JunctionParams::new(p.alpha, p.epsilon.unwrap_or(0.0), p.gamma, p.ell, p.horizon)?;
        TravelingWave::new(w.family, w.c_wave, &params, w.a_sign)?;
    }
    Ok(cfg)
}

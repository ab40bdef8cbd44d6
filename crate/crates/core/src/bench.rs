//! Wall-clock micro-benchmarks of the series summation, the Picard kernel
//! table and solver stepping, with a flat CSV baseline.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::green::{green_partial_sum, GreenSlice, SeriesControl};
use crate::model::{Grid1D, JunctionParams, ProblemData, SpaceTimeField, TimeAxis};
use crate::solver::{picard_step_cached, picard_step_uncached, solve_perturbed, KernelTable, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub name: String,
    pub scale: usize,
    /// Fastest of the repeated runs.
    pub seconds: f64,
    /// Work units per second (terms or cell-steps).
    pub throughput: f64,
    /// Order-sensitive hash of the result, for bit-for-bit comparison.
    pub checksum: u64,
}

/// FNV-1a over the bit patterns.
pub fn checksum(values: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Runs `f` `repeats` times; returns the fastest time and the last output.
pub fn time_min<T>(repeats: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut best = f64::INFINITY;
    let mut out = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let v = f();
        best = best.min(start.elapsed().as_secs_f64());
        out = Some(v);
    }
    // a zero reading only means the timer was too coarse
    (best.max(1e-9), out.expect("at least one run"))
}

/// Fixed-size partial sums of `G` at one point, one record per size.
pub fn bench_green_sum(params: &JunctionParams, n_terms_list: &[usize], x: f64, xi: f64, t: f64, repeats: usize) -> Vec<BenchRecord> {
    n_terms_list
        .iter()
        .map(|&n| {
            let (seconds, v) = time_min(repeats, || green_partial_sum(x, xi, t, params, n, 0));
            BenchRecord {
                name: "green_sum".into(),
                scale: n,
                seconds,
                throughput: n as f64 / seconds,
                checksum: checksum(&[v]),
            }
        })
        .collect()
}

/// Number of terms the adaptive truncation picks at `t`.
pub fn adaptive_terms(params: &JunctionParams, t: f64, tol: f64) -> Result<usize> {
    Ok(GreenSlice::new(params, t, 0, &SeriesControl::with_tol(tol))?.n_terms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelTableBench {
    pub cached: BenchRecord,
    pub uncached: BenchRecord,
    pub speedup: f64,
}

/// One Picard map application at `nx × nt` with a precomputed kernel table
/// against recomputing every `H_n(t_k − τ_m)`. Both run on one thread.
pub fn bench_kernel_table(params: &JunctionParams, nx: usize, nt: usize, repeats: usize) -> Result<KernelTableBench> {
    let grid = Grid1D::new(nx, params.ell())?;
    let time = TimeAxis::new(nt, params.horizon() / nt as f64)?;
    let f = SpaceTimeField::from_fn(grid, time, |x, t| 1e-2 * (x.cos() + 0.5 * (2.0 * x).cos()) * (1.0 + t));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let (cached_s, cached) = pool.install(|| {
        time_min(repeats, || {
            let table = KernelTable::new(params, nx, time);
            picard_step_cached(params, &f, &table)
        })
    });
    let (uncached_s, uncached) = time_min(repeats, || picard_step_uncached(params, &f));
    let work = (nx * nt) as f64;
    let cached = BenchRecord { name: "picard_cached".into(), scale: nx, seconds: cached_s, throughput: work / cached_s, checksum: checksum(&cached) };
    let uncached = BenchRecord { name: "picard_uncached".into(), scale: nx, seconds: uncached_s, throughput: work / uncached_s, checksum: checksum(&uncached) };
    Ok(KernelTableBench { speedup: uncached_s / cached_s, cached, uncached })
}

/// Full perturbed solve of `nt` steps on `nx` points.
pub fn bench_solver(params: &JunctionParams, nx: usize, repeats: usize) -> Result<BenchRecord> {
    let cfg = SolverConfig { nx, ..SolverConfig::default() };
    let grid = cfg.grid(params.ell())?;
    let time = cfg.time_axis(params.ell(), params.horizon())?;
    let data = ProblemData::from_functions(grid, time, |x| 0.1 * x.cos(), |_| 0.0, |_| 0.0, |_| 0.0)?;
    let (seconds, field) = time_min(repeats, || solve_perturbed(params, &data, &cfg));
    Ok(BenchRecord {
        name: "solver".into(),
        scale: nx,
        seconds,
        throughput: (nx * time.nt) as f64 / seconds,
        checksum: checksum(field?.values()),
    })
}

pub fn baseline_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from("name,scale,seconds\n");
    for r in records {
        let _ = writeln!(s, "{},{},{:.16e}", r.name, r.scale, r.seconds);
    }
    s
}

pub fn write_baseline(path: &Path, records: &[BenchRecord]) -> Result<()> {
    std::fs::write(path, baseline_csv(records)).map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}

/// Parses `name,scale,seconds` rows.
pub fn parse_baseline(text: &str) -> Result<Vec<(String, usize, f64)>> {
    let mut lines = text.lines();
    if lines.next() != Some("name,scale,seconds") {
        return Err(Error::Parameter("baseline header must be name,scale,seconds".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            match cols.as_slice() {
                [name, scale, secs] => Ok((
                    name.to_string(),
                    scale.parse().map_err(|_| Error::Parameter(format!("bad scale in '{l}'")))?,
                    secs.parse().map_err(|_| Error::Parameter(format!("bad seconds in '{l}'")))?,
                )),
                _ => Err(Error::Parameter(format!("bad baseline row '{l}'"))),
            }
        })
        .collect()
}

/// Records slower than `factor ×` their baseline entry.
pub fn regressions<'a>(records: &'a [BenchRecord], baseline: &[(String, usize, f64)], factor: f64) -> Vec<&'a BenchRecord> {
    records
        .iter()
        .filter(|r| {
            baseline
                .iter()
                .find(|(n, s, _)| *n == r.name && *s == r.scale)
                .is_some_and(|(_, _, secs)| r.seconds > factor * secs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_round_trip() {
        let r = vec![BenchRecord { name: "x".into(), scale: 3, seconds: 0.25, throughput: 1.0, checksum: 0 }];
        let parsed = parse_baseline(&baseline_csv(&r)).unwrap();
        assert_eq!(parsed, vec![("x".to_string(), 3, 0.25)]);
        assert!(regressions(&r, &[("x".into(), 3, 0.1)], 2.0).len() == 1);
        assert!(regressions(&r, &[("x".into(), 3, 0.2)], 2.0).is_empty());
    }

    #[test]
    fn checksum_sees_bits() {
        assert_ne!(checksum(&[0.0]), checksum(&[-0.0]));
        assert_eq!(checksum(&[1.5, 2.0]), checksum(&[1.5, 2.0]));
    }
}

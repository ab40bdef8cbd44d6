use std::f64::consts::PI;

use sgtool_core::bench::*;
use sgtool_core::JunctionParams;
use tempfile::TempDir;

fn params(horizon: f64) -> JunctionParams {
    JunctionParams::new(0.5, 1e-2, 0.6, PI, horizon).unwrap()
}

#[test]
fn doubling_terms_roughly_doubles_time() {
    // interleaved rounds so both sizes see the same machine load
    let (mut small, mut large) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..9 {
        let r = bench_green_sum(&params(1.0), &[200_000, 400_000], 0.7, 1.9, 1.0, 1);
        small = small.min(r[0].seconds);
        large = large.min(r[1].seconds);
    }
    let ratio = large / small;
    assert!(ratio < 2.2 && ratio > 1.2, "ratio {ratio}");
}

#[test]
fn later_times_need_fewer_terms() {
    let p = params(1.0);
    assert!(adaptive_terms(&p, 10.0, 1e-8).unwrap() < adaptive_terms(&p, 0.1, 1e-8).unwrap());
}

#[test]
fn kernel_table_pays_off() {
    let kt = bench_kernel_table(&params(1.0), 201, 400, 2).unwrap();
    assert!(kt.speedup >= 5.0, "speedup {}", kt.speedup);
    assert_eq!(kt.cached.checksum, kt.uncached.checksum);
}

#[test]
fn solver_bench_is_reproducible() {
    let a = bench_solver(&params(0.5), 41, 1).unwrap();
    let b = bench_solver(&params(0.5), 41, 1).unwrap();
    assert_eq!(a.checksum, b.checksum);
    assert!(a.throughput > 0.0);
}

#[test]
fn baseline_file_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("baseline.csv");
    let records = bench_green_sum(&params(1.0), &[100, 1000], 0.7, 1.9, 1.0, 1);
    write_baseline(&path, &records).unwrap();
    let parsed = parse_baseline(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed.len(), 2);
    assert!(regressions(&records, &parsed, 1.0).is_empty());
    let slow: Vec<_> = parsed.iter().map(|(n, s, t)| (n.clone(), *s, t / 100.0)).collect();
    assert_eq!(regressions(&records, &slow, 2.0).len(), 2);
    assert!(parse_baseline("wrong,header\n").is_err());
}

#[test]
fn checksum_sees_every_bit() {
    assert_ne!(checksum(&[1.0, 2.0]), checksum(&[2.0, 1.0]));
    assert_ne!(checksum(&[0.0]), checksum(&[-0.0]));
}

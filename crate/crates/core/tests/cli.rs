use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sgtool_core::cli::*;
use tempfile::TempDir;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn sgtool(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgtool")).args(args).env(OUT_ENV, out).output().unwrap()
}

fn run_ok(name: &str, out: &Path) {
    let o = sgtool(&["run", config(name).to_str().unwrap()], out);
    assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("case.ini");
    fs::write(&p, text).unwrap();
    p
}

const GREEN_MIN: &str = "mode = green
[params]
alpha = 0.5
epsilon = 0.01
gamma = 0.6
ell = 3.141592653589793
horizon = 1.0
[green]
xi = 1.0
times = 0.5
nx = 5
[output]
out_dir = unused
";

#[test]
fn headers_match_the_schema() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("green.ini", "green_green_profile.csv", "x,xi,t,value,n_terms,tail_bound"),
        ("wave.ini", "wave_wave_profile.csv", "x,t,U,Ux,Ut,Uxxt,residual_ode,residual_pde"),
        ("solve.ini", "solve_solve_field.csv", "x,t,u"),
        ("gronwall.ini", "gronwall_gronwall.csv", "t,x_input,bound"),
    ];
    for (cfg, file, header) in cases {
        run_ok(cfg, dir.path());
        assert_eq!(first_line(&dir.path().join(file)), header);
        let prefix = file.split('_').next().unwrap();
        assert!(dir.path().join(format!("{prefix}_plot.gp")).exists());
        assert!(dir.path().join(format!("{prefix}_run_meta.txt")).exists());
        assert!(!dir.path().join(format!("{prefix}_sgtool.lock")).exists());
    }
}

#[test]
fn remainder_run_is_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    run_ok("remainder.ini", a.path());
    run_ok("remainder.ini", b.path());
    for f in ["remainder_s_curve.csv", "remainder_remainder_summary.csv", "remainder_plot.gp"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let summary = fs::read_to_string(a.path().join("remainder_remainder_summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next().unwrap(), SUMMARY_HEADER);
    assert_eq!(lines.count(), 4);
    assert_eq!(first_line(&a.path().join("remainder_s_curve.csv")), "epsilon,t,S");
}

#[test]
fn cells_round_trip() {
    let dir = TempDir::new().unwrap();
    run_ok("green.ini", dir.path());
    let text = fs::read_to_string(dir.path().join("green_green_profile.csv")).unwrap();
    for line in text.lines().skip(1) {
        for cell in line.split(',') {
            let v: f64 = cell.parse().unwrap();
            assert!(v.is_finite());
            if cell.contains('e') {
                let digits = cell.split('e').next().unwrap().replace(['.', '-'], "");
                assert_eq!(digits.len(), 17, "{cell}");
            }
        }
    }
}

#[test]
fn misspelled_key_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let p = write_config(dir.path(), &GREEN_MIN.replace("epsilon = 0.01", "epsilonn = 0.1"));
    let o = sgtool(&["run", p.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("sgtool: status=error exit=2 kind=config"), "{err}");
    assert!(err.contains("epsilonn"));
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn missing_section_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let text = GREEN_MIN.replace("[green]\nxi = 1.0\ntimes = 0.5\nnx = 5\n", "");
    let p = write_config(dir.path(), &text);
    assert_eq!(sgtool(&["validate", p.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let text = GREEN_MIN.replace("epsilon = 0.01", "epsilon = 0.1").replace("times = 0.5", "times = 0.001") + "[analysis]\ntol = 1e-12\n";
    let p = write_config(dir.path(), &text);
    let o = sgtool(&["run", p.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kind=truncation"));
    assert!(!dir.path().join("green_profile.csv").exists());
}

#[test]
fn bad_parameter_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let p = write_config(dir.path(), &GREEN_MIN.replace("alpha = 0.5", "alpha = -1"));
    let o = sgtool(&["run", p.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kind=parameter"));
}

#[test]
fn held_lock_blocks_a_second_writer() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sgtool.lock"), "1").unwrap();
    let p = write_config(dir.path(), GREEN_MIN);
    let o = sgtool(&["run", p.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kind=io"));
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("nested/out");
    let p = write_config(dir.path(), GREEN_MIN);
    let o = sgtool(&["run", p.to_str().unwrap()], &target);
    assert!(o.status.success());
    assert_eq!(first_line(&target.join("green_profile.csv")), GREEN_HEADER);
    assert!(!dir.path().join("unused").exists());
}

#[test]
fn version_and_validate() {
    let dir = TempDir::new().unwrap();
    let o = sgtool(&["version"], dir.path());
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("sgtool "));
    for name in ["green.ini", "wave.ini", "solve.ini", "remainder.ini", "gronwall.ini", "bench.ini"] {
        let o = sgtool(&["validate", config(name).to_str().unwrap()], dir.path());
        assert!(o.status.success(), "{name}");
    }
}

#[test]
fn library_entry_point_matches_the_binary() {
    let cfg = parse_config(GREEN_MIN).unwrap();
    let tables = compute(&cfg).unwrap();
    assert_eq!(tables.len(), 1);
    let dir = TempDir::new().unwrap();
    let p = write_config(dir.path(), GREEN_MIN);
    assert!(sgtool(&["run", p.to_str().unwrap()], dir.path()).status.success());
    assert_eq!(fs::read_to_string(dir.path().join("green_profile.csv")).unwrap(), tables[0].render());
}

//! End-to-end runs of the `ffuniv` binary: exit codes, pinned output schemas
//! and byte-identical reruns.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ffuniv_cli::output::parse_complex;
use serde_json::Value;
use tempfile::TempDir;

const CUBIC: &str = "[field]\np = 3\n[modulus]\nq = 0 0 0 1\n";

fn configs() -> Vec<(&'static str, String)> {
    let mv = format!(
        "{CUBIC}[params]\nk = 4\ndelta = 0.25\nrho = 1\nz = 3\n\
         [phases]\nsource = random\nseed = 1\nmax_degree = 1\n"
    );
    vec![
        ("primes", "[field]\np = 3\n[params]\nmax_degree = 3\n".into()),
        ("phi", "[field]\np = 3\n[modulus]\nq = 0 1 1\n[params]\nn = 3\n".into()),
        ("lpoly", format!("{CUBIC}[params]\ncharacter = 5\n")),
        ("rhsweep", "[field]\np = 3\n[modulus]\nmax_degree = 3\n".into()),
        (
            "hybrid",
            format!("{CUBIC}[params]\nk_list = 1 2\nsigma_list = 0.75\nt_points = 4\n"),
        ),
        ("peak", "[params]\nk = 32\ndelta = 0.1\n".into()),
        ("mvg", mv.clone()),
        ("mvh", mv.clone()),
        ("mvtail", mv),
        ("counting", "[field]\np = 3\n".into()),
        (
            "fit",
            "[field]\np = 3\n[modulus]\nq = 0 0 0 0 1\n[target]\nkind = constant\nc = 1+0.5j\n\
             [params]\nrho = 2\n"
                .into(),
        ),
        (
            "sieve",
            "[field]\np = 3\n[modulus]\nq = 0 0 0 0 1\n[params]\nk = 8\ndelta = 0.15\n\
             [phases]\nsource = random\nseed = 3\nmax_degree = 1\n"
                .into(),
        ),
        ("search", format!("{CUBIC}[target]\nkind = constant\nc = 1\n")),
        (
            "guided",
            "[field]\np = 3\n[modulus]\nq = 0 0 0 0 0 1\n[target]\nkind = lpoly\ncharacter = 7\n"
                .into(),
        ),
        (
            "splitgb",
            "[field]\np = 3\n[modulus]\nq = 0 0 0 0 0 1\n[params]\nk = 4\ndelta = 0.25\n".into(),
        ),
    ]
}

fn config_for(command: &str) -> String {
    configs()
        .into_iter()
        .find(|(c, _)| *c == command)
        .map(|(_, t)| t)
        .unwrap()
}

struct Run {
    out: PathBuf,
    status: i32,
    stderr: String,
    stdout: String,
}

fn run_in(dir: &Path, command: &str, config: &str, extra: &[&str]) -> Run {
    let cfg = dir.join(format!("{command}.cfg"));
    fs::write(&cfg, config).unwrap();
    let out = dir.join(format!("out_{command}"));
    let o: Output = Command::new(env!("CARGO_BIN_EXE_ffuniv"))
        .arg(command)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    Run {
        out,
        status: o.status.code().unwrap_or(-1),
        stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
        stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
    }
}

fn run(command: &str, config: &str, extra: &[&str]) -> (TempDir, Run) {
    let tmp = TempDir::new().unwrap();
    let r = run_in(tmp.path(), command, config, extra);
    (tmp, r)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every result file other than `meta.json`, by name.
fn primary_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "meta.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn every_command_matches_pinned_schema() {
    let tmp = TempDir::new().unwrap();
    for (command, config) in configs() {
        let r = run_in(tmp.path(), command, &config, &[]);
        assert_eq!(r.status, 0, "{command}: {}", r.stderr);
        let meta = read_json(&r.out.join("meta.json"));
        assert_eq!(meta["command"], command);
        assert!(meta["elapsed_seconds"].as_f64().is_some());
        for file in meta["files"].as_array().unwrap() {
            let file = file.as_str().unwrap();
            let path = r.out.join(file);
            if let Some(stem) = file.strip_suffix(".csv") {
                let text = fs::read_to_string(&path).unwrap();
                let head: String = text.lines().take(2).map(|l| format!("{l}\n")).collect();
                assert_eq!(head, golden(&format!("{stem}.header")), "{command}: {file}");
                assert!(!text.contains('\r'), "{file} must use LF line endings");
            } else if let Some(stem) = file.strip_suffix(".json") {
                let keys: Vec<String> = read_json(&path).as_object().unwrap().keys().cloned().collect();
                let pinned: Vec<String> = golden(&format!("{stem}.keys")).lines().map(String::from).collect();
                assert_eq!(keys, pinned, "{command}: {file}");
            }
        }
    }
}

#[test]
fn rhsweep_small_family_is_clean() {
    let (_t, r) = run("rhsweep", &config_for("rhsweep"), &[]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    let summary = read_json(&r.out.join("rhsweep.json"));
    assert_eq!(summary["violations"], 0);
    assert_eq!(summary["unconverged"], 0);
    // 3 + 9 + 27 monic moduli of degree 1..3
    assert_eq!(summary["moduli"], 39);
    let text = fs::read_to_string(r.out.join("rhsweep.csv")).unwrap();
    let rows = text.lines().count() - 2;
    assert_eq!(summary["characters"].as_u64().unwrap() as usize, rows);
    assert!(!text.contains("violation"));
}

#[test]
fn peak_writes_coefficients_and_certificate() {
    let (_t, r) = run("peak", &config_for("peak"), &[]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    let text = fs::read_to_string(r.out.join("peak_coeffs.csv")).unwrap();
    let coeffs: Vec<_> = text
        .lines()
        .skip(2)
        .map(|l| parse_complex(l.split(',').nth(1).unwrap()).unwrap())
        .collect();
    assert_eq!(coeffs.len(), 33);
    let f0: num_complex::Complex64 = coeffs.iter().sum();
    assert!((f0 - 1.0).norm() < 1e-12);
    let report = read_json(&r.out.join("peak.json"));
    let cert = &report["certificate"];
    let bound = 2.0 * (-std::f64::consts::PI * 3.2).exp();
    assert!(cert["off_peak_max"].as_f64().unwrap() <= bound);
    assert_eq!(cert["grid_argmax"].as_f64().unwrap(), 0.0);
    assert_eq!(report["kappa_in_range"], true);
}

#[test]
fn malformed_config_exits_2_with_line() {
    let (_t, r) = run("peak", "[params]\nk = 32\ndelta 0.1\n", &[]);
    assert_eq!(r.status, 2);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);

    let (_t, r) = run("peak", "[params]\nk = 32\ndelta = 0.1\nkk = 3\n", &[]);
    assert_eq!(r.status, 2);
    assert!(r.stderr.contains("line 4") && r.stderr.contains("kk"), "{}", r.stderr);

    let (_t, r) = run("peak", "[params]\nk = thirty\ndelta = 0.1\n", &[]);
    assert_eq!(r.status, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);
}

#[test]
fn lenient_mode_ignores_unknown_keys() {
    let cfg = "[params]\nk = 8\ndelta = 0.25\nkk = 3\n[notes]\nx = 1\n";
    let (_t, r) = run("peak", cfg, &["--strict", "false"]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    assert!(r.stderr.contains("warning"));
}

#[test]
fn usage_and_missing_config_exit_2() {
    let o = Command::new(env!("CARGO_BIN_EXE_ffuniv"))
        .args(["nosuch", "--config", "x.cfg"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_ffuniv")).arg("peak").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_ffuniv"))
        .args(["peak", "--config", "/nonexistent/peak.cfg"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invariant_violation_exits_1() {
    // a tolerance below rounding makes every hybrid residual a violation
    let cfg = format!("{CUBIC}[params]\nk_list = 2\ntolerance = 1e-300\n");
    let (_t, r) = run("hybrid", &cfg, &[]);
    assert_eq!(r.status, 1, "{}", r.stderr);
    assert!(r.out.join("hybrid.csv").exists());
}

#[test]
fn capacity_error_exits_3_and_names_limit() {
    let (_t, r) = run("primes", "[field]\np = 3\n[params]\nmax_degree = 20\n", &[]);
    assert_eq!(r.status, 3);
    assert!(r.stderr.contains("capacity") && r.stderr.contains("limit"), "{}", r.stderr);
}

#[test]
fn reruns_are_byte_identical() {
    for command in ["mvh", "search", "fit", "sieve"] {
        let cfg = config_for(command);
        let (_a, r1) = run(command, &cfg, &[]);
        let (_b, r2) = run(command, &cfg, &[]);
        assert_eq!(r1.status, 0);
        assert_eq!(primary_files(&r1.out), primary_files(&r2.out), "{command}");
        assert_eq!(r1.stdout, r2.stdout);
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let base = config_for("lpoly");
    let (_a, r1) = run("lpoly", &format!("{base}[run]\nworkers = 1\n"), &[]);
    let (_b, r4) = run("lpoly", &format!("{base}[run]\nworkers = 4\n"), &[]);
    assert_eq!(r1.status, 0);
    assert_eq!(primary_files(&r1.out), primary_files(&r4.out));
    assert_eq!(read_json(&r4.out.join("meta.json"))["workers"], 4);
}

#[test]
fn phase_file_round_trip() {
    let tmp = TempDir::new().unwrap();
    let r = run_in(tmp.path(), "fit", &config_for("fit"), &[]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    fs::copy(r.out.join("phases.txt"), tmp.path().join("phases.txt")).unwrap();
    let cfg = "[field]\np = 3\n[modulus]\nq = 0 0 0 0 1\n[params]\nk = 8\ndelta = 0.15\n\
               [phases]\nsource = file\nfile = phases.txt\n";
    let s = run_in(tmp.path(), "sieve", cfg, &[]);
    assert_eq!(s.status, 0, "{}", s.stderr);
    let fit = read_json(&r.out.join("fit.json"));
    let sieve = read_json(&s.out.join("sieve.json"));
    assert_eq!(sieve["phases"], fit["primes"]);
}

//! End-to-end runs of the `tra-spectrum` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_tra-spectrum");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, cmd: &str, config: &str) -> Output {
    run(&[cmd, "--config", config, "--out", dir.to_str().unwrap()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Metadata line, header row and data rows of a CSV file.
fn read_csv(path: &Path) -> (String, Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines();
    let meta = lines.next().expect("metadata line").to_string();
    let header = lines
        .next()
        .expect("header")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (meta, header, rows)
}

const BOUND_ONLY: &str = r#"{"u": [1, -50, 2], "N": 30}"#;
const RESONANT: &str =
    r#"{"u": [2, -80, 120], "ell": 2, "N": 50, "cs": {"rho": 50, "theta": 0.8}}"#;

#[test]
fn classify_reports_shape_and_writes_potential() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), "classify", BOUND_ONLY);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("BoundOnly"));
    let (meta, header, rows) = read_csv(&dir.path().join("potential.csv"));
    assert!(meta.starts_with("# lambda="));
    assert_eq!(header, ["r", "v", "v_regularized"]);
    assert!(!rows.is_empty());

    let o = run_in(dir.path(), "classify", RESONANT);
    assert!(stdout(&o).starts_with("BoundAndResonances"));
}

#[test]
fn pps_and_hd_write_four_levels() {
    let dir = TempDir::new().unwrap();
    for cmd in ["pps", "hd"] {
        let o = run_in(dir.path(), cmd, BOUND_ONLY);
        assert!(o.status.success(), "{cmd}: {}", stderr(&o));
        let (_, header, rows) = read_csv(&dir.path().join("spectrum.csv"));
        assert_eq!(
            header,
            ["method", "level", "re_E", "im_E", "class", "rho", "theta", "N"]
        );
        assert_eq!(rows.len(), 4, "{cmd}");
        assert!(rows
            .iter()
            .all(|r| r[0] == cmd && r[4] == "bound" && r[7] == "30"));
        let ground: f64 = rows[0][2].parse().unwrap();
        assert!((ground + 27.878950096074).abs() < 1e-6, "{cmd}: {ground}");
    }
}

#[test]
fn energies_are_reported_in_lambda_units() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        "pps",
        r#"{"lambda": 2, "u": [1, -50, 2], "N": 30}"#,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let (meta, _, rows) = read_csv(&dir.path().join("spectrum.csv"));
    assert_eq!(meta, "# lambda=2.00000000000000e0");
    // energies stay in units of λ²
    let ground: f64 = rows[0][2].parse().unwrap();
    assert!((ground + 27.878950096074).abs() < 1e-6);
}

#[test]
fn cs_classifies_and_plots() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), "cs", RESONANT);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, _, rows) = read_csv(&dir.path().join("spectrum.csv"));
    let bound: Vec<_> = rows.iter().filter(|r| r[4] == "bound").collect();
    assert_eq!(bound.len(), 1);
    assert!(rows.iter().any(|r| r[4] == "resonance"));
    assert!(rows.iter().all(|r| r[0] == "cs" && !r[5].is_empty()));
    let svg = fs::read_to_string(dir.path().join("spectrum.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn curves_and_wavefunction_files() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"u": [1, -50, 2], "N": 10, "pps": {"curves": 3, "grid": 16},
                  "wavefunction": {"points": 101}}"#;
    let o = run_in(dir.path(), "curves", cfg);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, header, rows) = read_csv(&dir.path().join("curves.csv"));
    assert_eq!(header, ["curve_index", "eps", "u1"]);
    assert_eq!(rows.len(), 3 * 16);

    let o = run_in(dir.path(), "wavefunction", cfg);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("level"))
            .count(),
        3
    );
    let (_, header, rows) = read_csv(&dir.path().join("wavefunction.csv"));
    assert_eq!(header, ["r", "psi", "level", "N_terms"]);
    assert_eq!(rows.len(), 3 * 101);
}

#[test]
fn sweep_writes_frames_and_summary() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"u": [2, -80, 120], "N": 30, "cs": {"rho": 40, "theta": 0.875},
                  "sweep": {"v1_from": -90, "v1_to": -50, "frames": 3}}"#;
    let o = run_in(dir.path(), "sweep", cfg);
    assert!(o.status.success(), "{}", stderr(&o));
    for k in 0..3 {
        let (_, header, _) = read_csv(&dir.path().join(format!("frame_{k:03}.csv")));
        assert_eq!(header, ["v1", "class", "re_E", "im_E"]);
    }
    assert!(!dir.path().join("frame_003.csv").exists());
    let (_, _, rows) = read_csv(&dir.path().join("sweep_summary.csv"));
    assert_eq!(rows.len(), 3);
}

#[test]
fn sweep_without_settings_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), "sweep", BOUND_ONLY);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for (cmd, cfg, file) in [
        ("pps", BOUND_ONLY, "spectrum.csv"),
        ("cs", RESONANT, "spectrum.csv"),
        ("cs", RESONANT, "spectrum.svg"),
    ] {
        assert!(run_in(a.path(), cmd, cfg).status.success());
        assert!(run_in(b.path(), cmd, cfg).status.success());
        let x = fs::read(a.path().join(file)).unwrap();
        let y = fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{cmd} {file}");
    }
}

#[test]
fn config_file_and_inline_agree() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("run.json");
    fs::write(&file, BOUND_ONLY).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let o = run(&[
        "pps",
        "-c",
        file.to_str().unwrap(),
        "-o",
        a.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(run_in(&b, "pps", BOUND_ONLY).status.success());
    assert_eq!(
        fs::read(a.join("spectrum.csv")).unwrap(),
        fs::read(b.join("spectrum.csv")).unwrap()
    );
}

#[test]
fn config_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), "pps", r#"{"u": [-1, -50, 2]}"#);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("u[0]"), "{}", stderr(&o));

    let o = run_in(
        dir.path(),
        "pps",
        r#"{"u": [1, -50, 2], "cs": {"rhoo": 3}}"#,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cs"), "{}", stderr(&o));

    let o = run(&[
        "pps",
        "--config",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["pps"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_1() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = run_in(&blocker, "pps", BOUND_ONLY);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn convergence_table_reproduces() {
    let o = run(&["reproduce-table1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all 16 values reproduced"));
}

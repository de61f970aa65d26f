//! End-to-end tests of the `liedyn` binary: exit-code contract, CSV
//! schemas, determinism across reruns and worker counts, and the
//! documented example scenarios.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liedyn"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parse a CSV produced by the tool into (header, rows of f64 fields).
fn read_csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

const SPIN_CONSTANT: &str = r#"
model = "spin-precession"

[grid]
t_start = 0.0
t_end = 4.0
steps = 64

[spin]
two_j = 1
field = { kind = "constant", value = 1.0 }
theta = { kind = "constant", value = 0.8 }
phi = { kind = "constant", value = 0.3 }
"#;

#[test]
fn catalog_lists_the_model_vocabulary() {
    let out = bin().arg("catalog").output().unwrap();
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in [
        "spin-precession",
        "coupled-modes-beam-splitter",
        "coupled-modes-parametric",
        "general-quadratic-oscillator",
        "driven-two-level-atom",
        "k-photon-ladder",
    ] {
        assert!(text.contains(name), "catalog is missing {name}");
    }
    assert!(text.contains("outside this construction"));
}

#[test]
fn constant_axis_run_reports_zero_geometric_phase() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "spin.toml", SPIN_CONSTANT);
    let out = run_in(dir.path(), &["run", "--config", "spin.toml", "--out", "o"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("verdict: PASS"));

    let (header, rows) = read_csv(&dir.path().join("o/phases.csv"));
    assert_eq!(
        header,
        "t,a,b,phi_d,phi_g,phi_c,invariant_residual,oracle_fidelity,oracle_phase_error"
    );
    assert_eq!(rows.len(), 65, "one row per output node");
    for row in &rows {
        assert_eq!(row.len(), 9);
        // A fixed precession axis pins the auxiliary vector to the field, so
        // the solid angle never opens and the geometric column is exactly 0.
        assert_eq!(row[4].to_bits(), 0.0f64.to_bits(), "phi_g must be exactly zero");
    }

    let report = std::fs::read_to_string(dir.path().join("o/report.txt")).unwrap();
    assert!(report.trim_end().ends_with("verdict: PASS"));

    let (sheader, srows) = read_csv(&dir.path().join("o/states.csv"));
    assert_eq!(sheader, "t,lambda,component,re,im");
    // 65 nodes x 1 branch x 2 components.
    assert_eq!(srows.len(), 130);
}

#[test]
fn outputs_are_deterministic_across_reruns_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    write_config(
        dir.path(),
        "bs.toml",
        r#"
model = "coupled-modes-beam-splitter"

[grid]
t_start = 0.0
t_end = 3.0
steps = 32

[lambda]
select = "all"
"#,
    );
    for args in [
        vec!["run", "--config", "bs.toml", "--out", "a"],
        vec!["run", "--config", "bs.toml", "--out", "b"],
        vec!["run", "--config", "bs.toml", "--out", "c", "--jobs", "3"],
    ] {
        assert_eq!(code(&run_in(dir.path(), &args)), 0);
    }
    for file in ["phases.csv", "states.csv", "report.txt"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        let c = std::fs::read(dir.path().join("c").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical reruns");
        assert_eq!(a, c, "{file} differs when split over 3 workers");
    }
}

#[test]
fn invalid_configurations_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&str, &str)] = &[
        ("malformed.toml", "model = [[["),
        (
            "unknown.toml",
            "model = \"no-such-model\"\n\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 16\n",
        ),
        (
            "coarse.toml",
            "model = \"spin-precession\"\n\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 4\n",
        ),
        (
            "badlambda.toml",
            "model = \"spin-precession\"\n\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 16\n\n\
             [lambda]\nselect = \"list\"\nindices = [5]\n",
        ),
        (
            "badsection.toml",
            "model = \"spin-precession\"\n\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 16\n\n\
             [ladder]\nk = 2\n",
        ),
    ];
    for (name, text) in cases {
        write_config(dir.path(), name, text);
        let out = run_in(dir.path(), &["run", "--config", name]);
        assert_eq!(code(&out), 2, "{name} should be a configuration error");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("configuration error"),
            "{name} should report a configuration error on stderr"
        );
    }
    // A config file that does not exist is also a configuration error.
    let out = run_in(dir.path(), &["run", "--config", "missing.toml"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_help_and_version_exit_codes() {
    let out = bin().output().unwrap();
    assert_eq!(code(&out), 2, "bare invocation is a usage error");
    let out = bin().arg("run").output().unwrap();
    assert_eq!(code(&out), 2, "run without --config is a usage error");
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(code(&out), 0);
    let out = bin().arg("--version").output().unwrap();
    assert_eq!(code(&out), 0);
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "spin.toml", SPIN_CONSTANT);
    let out = run_in(
        dir.path(),
        &["run", "--config", "spin.toml", "--jobs", "0"],
    );
    assert_eq!(code(&out), 2, "--jobs 0 is a configuration error");
}

#[test]
fn two_photon_ladder_tracks_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    write_config(
        dir.path(),
        "ladder.toml",
        r#"
model = "k-photon-ladder"

[grid]
t_start = 0.0
t_end = 3.0
steps = 48

[ladder]
k = 2
m = 1
"#,
    );
    let out = run_in(dir.path(), &["run", "--config", "ladder.toml", "--out", "o"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("o/phases.csv"));
    assert_eq!(rows.len(), 49);
    for row in &rows {
        assert!(row[7] >= 1.0 - 1e-6, "fidelity {} dipped below floor", row[7]);
        assert!(row[8] <= 1e-4, "phase error {} above tolerance", row[8]);
    }
}

#[test]
fn verify_passes_and_the_corrupted_algebra_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "spin.toml", SPIN_CONSTANT);

    let out = run_in(dir.path(), &["verify", "--config", "spin.toml", "--out", "v0"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("verdict: PASS"));

    let out = run_in(
        dir.path(),
        &[
            "verify",
            "--config",
            "spin.toml",
            "--out",
            "vi",
            "--inject-structure-error",
        ],
    );
    assert_eq!(code(&out), 1, "the corrupted algebra must fail verification");
    let text = stdout(&out);
    assert!(text.contains("closure residual (structure constants corrupted by 10%)"));
    assert!(text.contains("FAIL"));
    assert!(text.contains("verdict: FAIL"));

    // A different seed draws different random schedules, but the margins are
    // wide enough that every verdict line is unchanged.
    let out = run_in(
        dir.path(),
        &["verify", "--config", "spin.toml", "--out", "v99", "--seed", "99"],
    );
    assert_eq!(code(&out), 0);
    let verdicts = |dir_name: &str| -> Vec<String> {
        std::fs::read_to_string(dir.path().join(dir_name).join("verify_report.txt"))
            .unwrap()
            .lines()
            .filter_map(|l| {
                l.rsplit_once(": ")
                    .map(|(_, v)| v.to_string())
                    .filter(|v| v == "PASS" || v == "FAIL")
            })
            .collect()
    };
    assert_eq!(verdicts("v0"), verdicts("v99"));
}

#[test]
fn berry_sweep_converges_to_the_loop_phase() {
    let dir = tempfile::tempdir().unwrap();
    write_config(
        dir.path(),
        "berry.toml",
        r#"
model = "spin-precession"

[grid]
t_start = 0.0
t_end = 4.0
steps = 16

[berry]
cone_angle = 0.5235987755982988
periods = [80.0, 800.0, 8000.0]
tolerance = 1e-3
"#,
    );
    let out = run_in(
        dir.path(),
        &["berry", "--config", "berry.toml", "--out", "o", "--jobs", "3"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("o/berry.csv"));
    assert_eq!(header, "sweep_period,phi_g,target,error");
    assert_eq!(rows.len(), 3);
    assert!(rows[1][3] < rows[0][3], "error must fall from period 80 to 800");
    assert!(rows[2][3] < rows[1][3], "error must fall from period 800 to 8000");
    assert!(rows[2][3] <= 1e-3, "final error {} above tolerance", rows[2][3]);
}

#[test]
fn doubling_the_spin_doubles_the_geometric_phase_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let config = |two_j: u32| {
        format!(
            r#"
model = "spin-precession"

[grid]
t_start = 0.0
t_end = 4.0
steps = 16

[spin]
two_j = {two_j}

[berry]
cone_angle = 0.5235987755982988
periods = [80.0, 800.0]
tolerance = 5e-2
"#
        )
    };
    write_config(dir.path(), "j1.toml", &config(1));
    write_config(dir.path(), "j2.toml", &config(2));
    assert_eq!(code(&run_in(dir.path(), &["berry", "--config", "j1.toml", "--out", "o1"])), 0);
    assert_eq!(code(&run_in(dir.path(), &["berry", "--config", "j2.toml", "--out", "o2"])), 0);
    let (_, r1) = read_csv(&dir.path().join("o1/berry.csv"));
    let (_, r2) = read_csv(&dir.path().join("o2/berry.csv"));
    for (a, b) in r1.iter().zip(&r2) {
        // Both spins ride the identical auxiliary trajectory; the phase is
        // linear in the invariant eigenvalue, so the doubling is bitwise.
        assert_eq!((2.0 * a[1]).to_bits(), b[1].to_bits(), "phi_g");
        assert_eq!((2.0 * a[2]).to_bits(), b[2].to_bits(), "target");
    }
}

#[test]
fn zero_cone_angle_gives_an_identically_zero_loop_phase() {
    let dir = tempfile::tempdir().unwrap();
    write_config(
        dir.path(),
        "cone0.toml",
        r#"
model = "spin-precession"

[grid]
t_start = 0.0
t_end = 4.0
steps = 16

[berry]
cone_angle = 0.0
periods = [50.0, 100.0]
"#,
    );
    let out = run_in(dir.path(), &["berry", "--config", "cone0.toml", "--out", "o"]);
    assert_eq!(code(&out), 0);
    let (_, rows) = read_csv(&dir.path().join("o/berry.csv"));
    for row in &rows {
        assert_eq!(row[1].to_bits(), 0.0f64.to_bits(), "phi_g");
        assert_eq!(row[2].to_bits(), 0.0f64.to_bits(), "target");
        assert_eq!(row[3].to_bits(), 0.0f64.to_bits(), "error");
    }
}

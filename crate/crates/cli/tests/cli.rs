use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn machine(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(format!("{name}.tm"))
}

fn tcflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcflow")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn csv_rows(path: PathBuf) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().skip(1).map(str::to_owned).collect()
}

#[test]
fn compile_bb2_dumps_eight_letters() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcflow(&["compile", machine("bb2").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("alphabet: 8 letters"));
    let shift = fs::read_to_string(dir.path().join("shift.txt")).unwrap();
    assert!(shift.contains("|A| = 8"));
    assert!(dir.path().join("blocks.txt").exists());
}

#[test]
fn compile_halt_start_notes_identity_pieces() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcflow(&["compile", machine("halt_start").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all pieces are the identity"));
}

#[test]
fn malformed_machine_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tm");
    fs::write(&bad, "alphabet 0 1\nstates: A\n").unwrap();
    let o = tcflow(&["compile", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(tcflow(&["compile", "/no/such/file.tm"]).status.code(), Some(1));
}

#[test]
fn simulate_bb2_enters_at_step_six() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = tcflow(&["simulate", machine("bb2").to_str().unwrap(), "--steps", "10", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("bb2,EntersAt,6,true"));
    let rows = csv_rows(dir.path().join("orbit.csv"));
    assert_eq!(rows.len(), 11);
    let first = rows.iter().position(|r| r.ends_with(",1")).unwrap();
    assert_eq!(first + 1, 7);
}

#[test]
fn simulate_zero_steps_is_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        tcflow(&["simulate", machine("bb2").to_str().unwrap(), "--steps", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(dir.path().join("orbit.csv")).len(), 1);
}

#[test]
fn simulate_loop_never_enters() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcflow(&[
        "simulate",
        machine("loop_right").to_str().unwrap(),
        "--steps",
        "50",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(dir.path().join("orbit.csv"));
    assert_eq!(rows.len(), 51);
    assert!(rows.iter().all(|r| r.ends_with(",0")));
}

#[test]
fn forced_non_cantor_start_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcflow(&[
        "simulate",
        machine("bb2").to_str().unwrap(),
        "--start",
        "1/3,1/3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn step_budget_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcflow(&[
        "simulate",
        machine("bb2").to_str().unwrap(),
        "--steps",
        "5000000",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn outputs_are_deterministic() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let o = tcflow(&[
            "simulate",
            machine("bouncer").to_str().unwrap(),
            "--steps",
            "40",
            "--flow",
            "sigma",
            "--svg",
            "--out",
            out,
        ]);
        assert_eq!(o.status.code(), Some(0));
        ["orbit.csv", "trajectory.csv", "blocks.svg"].map(|f| fs::read(dir.path().join(f)).unwrap())
    };
    assert_eq!(run(), run());
}

#[test]
fn trajectory_keeps_the_fiber() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcflow(&[
        "simulate",
        machine("bb2").to_str().unwrap(),
        "--steps",
        "200",
        "--flow",
        "rho",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(dir.path().join("trajectory.csv"));
    assert_eq!(rows.len(), 201);
    assert!(rows.iter().all(|r| r.split(',').nth(4) == Some("0") && r.split(',').nth(5) == Some("0")));
}

#[test]
fn verify_without_selector_lists_suites() {
    let o = tcflow(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["conjugacy", "halting", "jacobi", "leaf", "involution"] {
        assert!(stdout(&o).contains(name));
    }
}

#[test]
fn verify_all_passes_and_is_reproducible() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let o = tcflow(&["verify", "all", "--sequential", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        fs::read(dir.path().join("report.csv")).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn sign_flip_fails_leaf_but_not_jacobi() {
    let o = tcflow(&["verify", "jacobi", "leaf", "--fault", "sign-flip"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.contains("jacobi.")).all(|l| l.starts_with("PASS")));
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("leaf.")));
}

#[test]
fn poisson_check_passes() {
    assert_eq!(tcflow(&["poisson-check"]).status.code(), Some(0));
}

#[test]
fn tolerance_overrides_are_validated() {
    assert_eq!(tcflow(&["verify", "leaf", "--tol", "leaf=1e-3"]).status.code(), Some(0));
    assert_eq!(tcflow(&["verify", "leaf", "--tol", "nonsense=1"]).status.code(), Some(1));
    // an impossibly tight bound turns into a verification failure
    assert_eq!(tcflow(&["verify", "unimodular", "--tol", "modular_shift=1e-30"]).status.code(), Some(2));
    assert_eq!(tcflow(&["verify", "bogus"]).status.code(), Some(1));
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = tcflow(&["plot", machine("bb2").to_str().unwrap(), "--steps", "8", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("blocks.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

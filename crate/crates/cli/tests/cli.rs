use std::path::PathBuf;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balance-bench"))
        .args(args)
        .output()
        .expect("spawn balance-bench")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn simulate_writes_csv_and_echoes_config() {
    let dir = scratch("simulate");
    let out = dir.join("pid.csv");
    let o = bench(&[
        "simulate",
        "--controller",
        "pid",
        "--t-final",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,pitch,pitch_rate,u\n"));
    assert_eq!(text.lines().count(), 1 + 1001);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("pendulum mass m: 0.2 kg"), "{err}");
}

#[test]
fn simulate_reports_divergence() {
    let dir = scratch("diverge");
    let out = dir.join("weak.csv");
    let o = bench(&[
        "simulate",
        "--controller",
        "pid",
        "--kp",
        "1",
        "--ki",
        "0",
        "--kd",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(out.exists());
}

#[test]
fn configuration_errors_exit_one() {
    assert_eq!(
        bench(&["simulate", "--controller", "pid"]).status.code(),
        Some(1)
    );
    assert_eq!(
        bench(&["simulate", "--controller", "bogus", "--out", "x.csv"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bench(&["lqr-gain", "--r", "0"]).status.code(), Some(1));
    assert_eq!(
        bench(&["lqr-gain", "--mass-m", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(bench(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(bench(&["--help"]).status.code(), Some(0));
}

#[test]
fn lqr_gain_double_integrator() {
    let o = bench(&[
        "lqr-gain", "--a21", "0", "--b2", "1", "--q11", "1", "--q22", "1", "--r", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let value = |key: &str| -> f64 {
        s.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((value("k1") - 1.0).abs() < 1e-9);
    assert!((value("k2") - 3f64.sqrt()).abs() < 1e-9);
    assert!(value("care_residual") < 1e-9);
    assert!(s.contains("closed_loop = Hurwitz"), "{s}");
}

#[test]
fn lqr_gain_uncontrollable_is_solver_failure() {
    let o = bench(&["lqr-gain", "--a21", "1", "--b2", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fuzzy_eval_outputs() {
    let o = bench(&["fuzzy-eval", "--error", "0", "--error-rate", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "u = 0"), "{}", stdout(&o));

    let o = bench(&["fuzzy-eval", "--error", "0.5", "--error-rate", "2"]);
    let s = stdout(&o);
    let u: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("u = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(u > 0.0 && u <= 20.0, "{u}");
    assert!(s.contains("-> HP"), "{s}");
}

#[test]
fn malformed_rule_base_is_rejected() {
    let dir = scratch("rules");
    let path = dir.join("short.txt");
    std::fs::write(
        &path,
        "HN N Z P P\nHN N Z HP HP\nHN HN Z HP HP\nHN N Z P HP\n",
    )
    .unwrap();
    let o = bench(&[
        "fuzzy-eval",
        "--error",
        "0",
        "--error-rate",
        "0",
        "--rulebase",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn paper_suite_is_deterministic() {
    let (a, b) = (scratch("suite-a"), scratch("suite-b"));
    let ra = bench(&["paper-suite", "--outdir", a.to_str().unwrap()]);
    let rb = bench(&["paper-suite", "--outdir", b.to_str().unwrap()]);
    assert_eq!(ra.status.code(), rb.status.code());
    assert!(matches!(ra.status.code(), Some(0) | Some(2)));
    assert_eq!(stdout(&ra), stdout(&rb));

    let mut names: Vec<_> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.iter().filter(|n| n.ends_with(".csv")).count(), 9);
    for n in &names {
        assert_eq!(
            std::fs::read(a.join(n)).unwrap(),
            std::fs::read(b.join(n)).unwrap(),
            "{n}"
        );
    }

    let compare = bench(&[
        "compare",
        a.join("lqr_q1_r1.csv").to_str().unwrap(),
        a.join("pid_kp25_ki0.8_kd0.1.csv").to_str().unwrap(),
    ]);
    assert_eq!(compare.status.code(), Some(0));
    assert!(stdout(&compare).contains("lqr_q1_r1"));
}

#[test]
fn unwritable_outdir_is_a_configuration_error() {
    let dir = scratch("blocked");
    let file = dir.join("plain-file");
    std::fs::write(&file, "x").unwrap();
    let o = bench(&[
        "paper-suite",
        "--t-final",
        "0.1",
        "--outdir",
        file.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

//! `balance-bench`: simulate, compare and inspect balancing controllers.
//!
//! Exit codes: 0 success, 1 configuration error, 2 diverged (or, for
//! `paper-suite`, an analytically stabilizing configuration failed to
//! settle), 3 Riccati solver failure.

// `!(x <= y)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use balance_core::csv::{read_csv, write_csv};
use balance_core::fuzzy::{infer_detailed, FuzzyConfig};
use balance_core::metrics::{compare, compute_metrics};
use balance_core::numerics::{care_residual, char_poly, routh_hurwitz, solve_care_detailed};
use balance_core::plant::StateSpace;
use balance_core::sim::{self, SimConfig, Termination, Trajectory};
use balance_core::suite::{run_suite, write_suite};
use balance_core::Error;
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, CompareArgs, FuzzyEvalArgs, LqrGainArgs, PaperSuiteArgs, SimulateArgs};

const EXIT_CONFIG: u8 = 1;
const EXIT_DIVERGED: u8 = 2;
const EXIT_SOLVER: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Compare(a) => compare_files(a),
        Command::LqrGain(a) => lqr_gain(a),
        Command::FuzzyEval(a) => fuzzy_eval(a),
        Command::PaperSuite(a) => paper_suite(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::SolverFailure { .. } => EXIT_SOLVER,
                _ => EXIT_CONFIG,
            })
        }
    }
}

fn echo(lines: &[String]) {
    let mut err = std::io::stderr().lock();
    for line in lines {
        let _ = writeln!(err, "# {line}");
    }
}

fn simulate(a: SimulateArgs) -> balance_core::Result<u8> {
    let params = a.plant.params()?;
    let mode = a.plant.formula_mode;
    let controller = a.controller_config()?;
    let sc = a.sim.config()?;
    let mut lines = vec![format!("controller: {controller}")];
    lines.extend(a.plant.describe(&params));
    lines.extend(a.sim.describe(&sc));
    lines.push(format!("out: {}", a.out.display()));
    echo(&lines);

    let tr = sim::run(&params, mode, &controller, &sc)?;
    write_csv(&a.out, &tr.samples)?;
    let m = compute_metrics(&tr, &sc)?;
    eprintln!(
        "# result: {} samples, {}, verdict {}",
        tr.samples.len(),
        match tr.termination {
            Termination::Completed => "completed",
            Termination::Diverged => "diverged",
        },
        m.verdict
    );
    Ok(if tr.diverged() { EXIT_DIVERGED } else { 0 })
}

fn compare_files(a: CompareArgs) -> balance_core::Result<u8> {
    let sc = SimConfig {
        setpoint: a.setpoint,
        divergence_threshold: a.divergence_threshold,
        ..SimConfig::default()
    };
    echo(&[
        format!("setpoint: {} rad", sc.setpoint),
        format!("divergence threshold: {} rad", sc.divergence_threshold),
        format!("format: {}", if a.csv { "csv" } else { "text" }),
    ]);
    let mut rows = Vec::with_capacity(a.files.len());
    for path in &a.files {
        let samples = read_csv(path)?;
        let dt = match samples.get(1) {
            Some(s) => s.t,
            None => 0.0,
        };
        let diverged = samples
            .last()
            .is_some_and(|s| !(s.phi.abs() <= sc.divergence_threshold));
        let tr = Trajectory {
            dt,
            samples,
            termination: if diverged {
                Termination::Diverged
            } else {
                Termination::Completed
            },
        };
        rows.push((label_of(path), compute_metrics(&tr, &sc)?));
    }
    let report = compare(&rows)?;
    print!(
        "{}",
        if a.csv {
            report.to_csv()
        } else {
            report.to_text()
        }
    );
    Ok(0)
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn lqr_gain(a: LqrGainArgs) -> balance_core::Result<u8> {
    let params = a.plant.params()?;
    let weights = a.weights.weights()?;
    let mut lines = a.plant.describe(&params);
    let ss = match (a.a21, a.b2) {
        (None, None) => balance_core::plant::build_reduced(&params, a.plant.formula_mode)?,
        (a21, b2) => {
            let base = balance_core::plant::build_reduced(&params, a.plant.formula_mode)?;
            let ss = StateSpace::reduced_from_entries(
                a21.unwrap_or(base.a21()),
                b2.unwrap_or(base.b2()),
                a.plant.formula_mode,
            )?;
            lines.push(format!("model override: A21={} B2={}", ss.a21(), ss.b2()));
            ss
        }
    };
    lines.push(format!(
        "weights: Q=diag({}, {}) R={}",
        a.weights.q11, a.weights.q22, a.weights.r
    ));
    echo(&lines);

    let sol = solve_care_detailed(&ss.a, &ss.b, &weights.q, &weights.r)?;
    let ctl = balance_core::lqr::synthesize(&ss, &weights)?;
    let poly = char_poly(&ctl.closed_loop(&ss)?)?;
    let verdict = routh_hurwitz(&poly)?;
    let residual = care_residual(&ss.a, &ss.b, &weights.q, &weights.r, &sol.p)?;
    println!("k1 = {}", ctl.k1());
    println!("k2 = {}", ctl.k2());
    println!("care_residual = {residual:e}");
    println!("newton_iterations = {}", sol.iterations);
    println!("closed_loop_poly = {poly}");
    println!("closed_loop = {verdict}");
    Ok(0)
}

fn fuzzy_eval(a: FuzzyEvalArgs) -> balance_core::Result<u8> {
    let cfg: FuzzyConfig = a.fuzzy.config(Default::default())?;
    let mut lines = a.fuzzy.describe();
    lines.push(format!(
        "error: {} rad, error rate: {} rad/s",
        a.error, a.error_rate
    ));
    echo(&lines);
    let inf = infer_detailed(&cfg, a.error, a.error_rate);
    for r in &inf.fired {
        println!(
            "rule e={} de={} -> {} strength={}",
            r.error, r.rate, r.consequent, r.strength
        );
    }
    println!("u = {}", inf.output);
    Ok(0)
}

fn paper_suite(a: PaperSuiteArgs) -> balance_core::Result<u8> {
    let params = a.plant.params()?;
    let mode = a.plant.formula_mode;
    let fuzzy = a.fuzzy.config(Default::default())?;
    let sc = a.sim.config()?;
    let mut lines = a.plant.describe(&params);
    lines.extend(a.sim.describe(&sc));
    lines.extend(a.fuzzy.describe());
    lines.push(format!("outdir: {}", a.outdir.display()));
    echo(&lines);

    let result = run_suite(&params, mode, &fuzzy, &sc)?;
    write_suite(&result, &a.outdir)?;
    print!("{}", result.report.to_text());
    for run in &result.runs {
        let oracle = run
            .analytic
            .map_or_else(|| "n/a".to_string(), |s| s.to_string());
        match &run.trajectory {
            Ok(tr) => eprintln!(
                "# {}: analytic {}, simulated {}{}",
                run.label,
                oracle,
                run.metrics.map(|m| m.verdict.as_str()).unwrap_or("-"),
                if tr.diverged() { " (diverged)" } else { "" }
            ),
            Err(e) => eprintln!("# {}: failed: {e}", run.label),
        }
    }
    if result.consistent() {
        Ok(0)
    } else {
        let bad: Vec<&str> = result
            .runs
            .iter()
            .filter(|r| r.contradicts_oracle())
            .map(|r| r.label.as_str())
            .collect();
        eprintln!(
            "# analytically stabilizing but not settled: {}",
            bad.join(", ")
        );
        Ok(EXIT_DIVERGED)
    }
}

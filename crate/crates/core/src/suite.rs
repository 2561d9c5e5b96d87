//! The eight-configuration comparison: four PID gain sets, fuzzy PD and
//! PD+I, and LQR with both weight pairs, all under one plant and one
//! simulation setup.

use std::path::{Path, PathBuf};

use crate::csv::write_csv;
use crate::error::Result;
use crate::fuzzy::{FuzzyConfig, FuzzyVariant};
use crate::lqr::{synthesize, LqrWeights};
use crate::metrics::{compare, compute_metrics, Report, ResponseMetrics, Verdict};
use crate::numerics::{matrix_stability, routh_hurwitz, Stability};
use crate::pid::{pid_stability_poly, Pid, PidGains};
use crate::plant::{build_reduced, FormulaMode, PlantParams};
use crate::sim::{batch_run, ControllerConfig, SimConfig, Trajectory};

/// Labelled controllers of the comparison grid, in a fixed order.
pub fn suite_controllers(fuzzy: &FuzzyConfig) -> Vec<(String, ControllerConfig)> {
    let mut out: Vec<(String, ControllerConfig)> = PidGains::published_grid()
        .into_iter()
        .map(|g| {
            (
                format!("pid_kp{}_ki{}_kd{}", g.kp, g.ki, g.kd),
                ControllerConfig::Pid(Pid::new(g)),
            )
        })
        .collect();
    out.push((
        "fuzzy_pd".into(),
        ControllerConfig::Fuzzy(fuzzy.clone().with_variant(FuzzyVariant::Pd)),
    ));
    out.push((
        "fuzzy_pdi".into(),
        ControllerConfig::Fuzzy(fuzzy.clone().with_variant(FuzzyVariant::PdI)),
    ));
    out.push((
        "lqr_q1_r1".into(),
        ControllerConfig::Lqr(LqrWeights::first()),
    ));
    out.push((
        "lqr_q2_r2".into(),
        ControllerConfig::Lqr(LqrWeights::second()),
    ));
    out
}

/// Continuous-time verdict for a controller on the reduced linear model, when
/// an analytic oracle exists (PID and LQR).
pub fn analytic_verdict(
    params: &PlantParams,
    mode: FormulaMode,
    controller: &ControllerConfig,
) -> Result<Option<Stability>> {
    let ss = build_reduced(params, mode)?;
    Ok(match controller {
        ControllerConfig::Pid(pid) => Some(routh_hurwitz(&pid_stability_poly(&pid.gains, &ss)?)?),
        ControllerConfig::Lqr(w) => match synthesize(&ss, w) {
            Ok(ctl) => Some(matrix_stability(&ctl.closed_loop(&ss)?)?),
            Err(_) => Some(Stability::NotHurwitz),
        },
        ControllerConfig::Fuzzy(_) => None,
        ControllerConfig::Open => Some(matrix_stability(&ss.a)?),
    })
}

#[derive(Debug)]
pub struct SuiteRun {
    pub label: String,
    pub controller: ControllerConfig,
    pub analytic: Option<Stability>,
    pub trajectory: Result<Trajectory>,
    pub metrics: Option<ResponseMetrics>,
}

impl SuiteRun {
    /// A run the analytic oracle calls stabilizing that did not settle.
    pub fn contradicts_oracle(&self) -> bool {
        self.analytic == Some(Stability::Hurwitz)
            && self.metrics.map(|m| m.verdict) != Some(Verdict::Stable)
    }
}

#[derive(Debug)]
pub struct SuiteResult {
    pub runs: Vec<SuiteRun>,
    pub report: Report,
}

impl SuiteResult {
    /// True when every analytically stabilizing configuration settled.
    pub fn consistent(&self) -> bool {
        !self.runs.iter().any(SuiteRun::contradicts_oracle)
    }
}

pub fn run_suite(
    params: &PlantParams,
    mode: FormulaMode,
    fuzzy: &FuzzyConfig,
    sc: &SimConfig,
) -> Result<SuiteResult> {
    let controllers = suite_controllers(fuzzy);
    let results = batch_run(params, mode, &controllers, sc)?;
    let mut runs = Vec::with_capacity(results.len());
    let mut rows = Vec::new();
    for ((label, trajectory), (_, controller)) in results.into_iter().zip(controllers) {
        let analytic = analytic_verdict(params, mode, &controller)?;
        let metrics = match &trajectory {
            Ok(tr) => Some(compute_metrics(tr, sc)?),
            Err(_) => None,
        };
        if let Some(m) = metrics {
            rows.push((label.clone(), m));
        }
        runs.push(SuiteRun {
            label,
            controller,
            analytic,
            trajectory,
            metrics,
        });
    }
    let report = compare(&rows)?;
    Ok(SuiteResult { runs, report })
}

/// Writes one `<label>.csv` per successful run plus `report.txt` and
/// `report.csv`. Returns the written paths.
pub fn write_suite(result: &SuiteResult, outdir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(outdir)?;
    let mut written = Vec::new();
    for run in &result.runs {
        if let Ok(tr) = &run.trajectory {
            let path = outdir.join(format!("{}.csv", run.label));
            write_csv(&path, &tr.samples)?;
            written.push(path);
        }
    }
    let text = outdir.join("report.txt");
    std::fs::write(&text, result.report.to_text())?;
    written.push(text);
    let csv = outdir.join("report.csv");
    std::fs::write(&csv, result.report.to_csv())?;
    written.push(csv);
    Ok(written)
}

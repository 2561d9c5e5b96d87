//! Regulation metrics over a trajectory and a ranked comparison table.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use crate::error::{invalid, Result};
use crate::sim::{SimConfig, Trajectory};

/// Settling band as a fraction of the initial error magnitude.
pub const SETTLING_BAND: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Stable,
    Marginal,
    Unstable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Marginal => "marginal",
            Verdict::Unstable => "unstable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseMetrics {
    /// First time after which the error stays inside the 2% band, s.
    pub settling_time: Option<f64>,
    /// First opposite-sign excursion relative to the initial error, %.
    pub overshoot_pct: f64,
    /// rad
    pub rms_error: f64,
    pub peak_abs_u: f64,
    pub verdict: Verdict,
}

pub fn compute_metrics(tr: &Trajectory, sc: &SimConfig) -> Result<ResponseMetrics> {
    let first = tr
        .samples
        .first()
        .ok_or_else(|| invalid("cannot compute metrics of an empty trajectory"))?;
    let err = |phi: f64| phi - sc.setpoint;
    let e0 = err(first.phi);
    let band = SETTLING_BAND * e0.abs();

    let settling_time = match tr.samples.iter().rposition(|s| !(err(s.phi).abs() <= band)) {
        None => Some(first.t),
        Some(i) => tr.samples.get(i + 1).map(|s| s.t),
    };

    let mut overshoot_pct = 0.0;
    if e0 != 0.0 {
        let sign = e0.signum();
        let mut peak = 0.0f64;
        for s in tr
            .samples
            .iter()
            .skip_while(|s| err(s.phi) * sign >= 0.0)
            .take_while(|s| err(s.phi) * sign < 0.0)
        {
            peak = peak.max(err(s.phi).abs());
        }
        overshoot_pct = 100.0 * peak / e0.abs();
    }

    let n = tr.samples.len() as f64;
    let rms_error = (tr.samples.iter().map(|s| err(s.phi).powi(2)).sum::<f64>() / n).sqrt();
    let peak_abs_u = tr.samples.iter().fold(0.0f64, |m, s| m.max(s.u.abs()));

    let last = tr.samples.last().expect("non-empty");
    let grew = !(err(last.phi).abs() <= e0.abs());
    let verdict = if tr.diverged() || grew {
        Verdict::Unstable
    } else if settling_time.is_some() {
        Verdict::Stable
    } else {
        Verdict::Marginal
    };

    Ok(ResponseMetrics {
        settling_time,
        overshoot_pct,
        rms_error,
        peak_abs_u,
        verdict,
    })
}

/// Ranked comparison of labelled runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<(String, ResponseMetrics)>,
}

fn rank_order(a: &(String, ResponseMetrics), b: &(String, ResponseMetrics)) -> Ordering {
    let (la, ma) = a;
    let (lb, mb) = b;
    ma.verdict
        .cmp(&mb.verdict)
        .then_with(|| match ma.verdict {
            Verdict::Stable => ma
                .settling_time
                .unwrap_or(f64::INFINITY)
                .total_cmp(&mb.settling_time.unwrap_or(f64::INFINITY)),
            Verdict::Marginal => ma.rms_error.total_cmp(&mb.rms_error),
            Verdict::Unstable => Ordering::Equal,
        })
        .then_with(|| la.cmp(lb))
}

/// Orders stable runs by settling time, then marginal runs by RMS error,
/// then unstable runs; ties fall back to the label.
pub fn compare(results: &[(String, ResponseMetrics)]) -> Result<Report> {
    if results.is_empty() {
        return Err(invalid("nothing to compare"));
    }
    let mut rows = results.to_vec();
    rows.sort_by(rank_order);
    Ok(Report { rows })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |t| format!("{t:.3}"))
}

impl Report {
    /// Fixed-width text table.
    pub fn to_text(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|(l, _)| l.len())
            .max()
            .unwrap_or(0)
            .max(10);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>4}  {:<width$}  {:>9}  {:>11}  {:>12}  {:>12}  verdict",
            "rank", "controller", "settle_s", "overshoot_%", "rms_err_rad", "peak_abs_u"
        );
        for (i, (label, m)) in self.rows.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>4}  {:<width$}  {:>9}  {:>11.2}  {:>12.6}  {:>12.4}  {}",
                i + 1,
                label,
                opt(m.settling_time),
                m.overshoot_pct,
                m.rms_error,
                m.peak_abs_u,
                m.verdict
            );
        }
        out
    }

    /// Machine-readable form with full-precision numbers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "rank,controller,settling_time,overshoot_pct,rms_error,peak_abs_u,verdict\n",
        );
        for (i, (label, m)) in self.rows.iter().enumerate() {
            let settle = m.settling_time.map_or_else(String::new, |t| t.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                i + 1,
                label,
                settle,
                m.overshoot_pct,
                m.rms_error,
                m.peak_abs_u,
                m.verdict
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Sample, Termination};

    fn trajectory(dt: f64, t_final: f64, f: impl Fn(f64) -> f64) -> Trajectory {
        let n = (t_final / dt).round() as usize + 1;
        Trajectory {
            dt,
            samples: (0..n)
                .map(|k| {
                    let t = k as f64 * dt;
                    Sample {
                        t,
                        phi: f(t),
                        phi_dot: 0.0,
                        u: 0.0,
                    }
                })
                .collect(),
            termination: Termination::Completed,
        }
    }

    fn row(label: &str, settle: Option<f64>, verdict: Verdict) -> (String, ResponseMetrics) {
        (
            label.to_string(),
            ResponseMetrics {
                settling_time: settle,
                overshoot_pct: 0.0,
                rms_error: 0.0,
                peak_abs_u: 0.0,
                verdict,
            },
        )
    }

    #[test]
    fn constant_at_setpoint() {
        let m = compute_metrics(&trajectory(0.01, 1.0, |_| 0.0), &SimConfig::default()).unwrap();
        assert_eq!(m.settling_time, Some(0.0));
        assert_eq!(m.overshoot_pct, 0.0);
        assert_eq!(m.verdict, Verdict::Stable);
    }

    #[test]
    fn exponential_decay_settles_at_ln50() {
        let dt = 0.001;
        let tr = trajectory(dt, 10.0, |t| 0.1 * (-t).exp());
        let m = compute_metrics(&tr, &SimConfig::default()).unwrap();
        let ts = m.settling_time.unwrap();
        assert!((ts - 50f64.ln()).abs() <= dt, "{ts}");
        assert_eq!(m.verdict, Verdict::Stable);
    }

    #[test]
    fn exponential_growth_is_unstable() {
        let m = compute_metrics(
            &trajectory(0.01, 5.0, |t| 0.1 * t.exp()),
            &SimConfig::default(),
        )
        .unwrap();
        assert_eq!(m.verdict, Verdict::Unstable);
        assert_eq!(m.settling_time, None);
    }

    #[test]
    fn slow_decay_is_marginal() {
        let m = compute_metrics(
            &trajectory(0.01, 10.0, |t| 0.1 * (-0.1 * t).exp()),
            &SimConfig::default(),
        )
        .unwrap();
        assert_eq!(m.verdict, Verdict::Marginal);
    }

    #[test]
    fn damped_cosine_overshoot() {
        // first negative lobe peaks near t = π with value −0.1·e^{−0.5π}
        let tr = trajectory(0.0005, 10.0, |t| 0.1 * (-0.5 * t).exp() * t.cos());
        let m = compute_metrics(&tr, &SimConfig::default()).unwrap();
        let lobe = (0..20_000)
            .map(|k| 0.1 * (-0.5 * (k as f64 * 0.0005)).exp() * (k as f64 * 0.0005).cos())
            .fold(0.0f64, f64::min)
            .abs();
        assert!((m.overshoot_pct - 100.0 * lobe / 0.1).abs() < 1e-9);
        assert!(m.overshoot_pct > 15.0 && m.overshoot_pct < 25.0);
    }

    #[test]
    fn diverged_flag_forces_unstable() {
        let mut tr = trajectory(0.01, 1.0, |_| 0.0);
        tr.termination = Termination::Diverged;
        assert_eq!(
            compute_metrics(&tr, &SimConfig::default()).unwrap().verdict,
            Verdict::Unstable
        );
    }

    #[test]
    fn empty_trajectory_rejected() {
        let tr = Trajectory {
            dt: 0.1,
            samples: vec![],
            termination: Termination::Completed,
        };
        assert!(compute_metrics(&tr, &SimConfig::default()).is_err());
    }

    #[test]
    fn appending_settled_samples_keeps_metrics() {
        let dt = 0.01;
        let short = trajectory(dt, 8.0, |t| 0.1 * (-t).exp() * (3.0 * t).cos());
        let long = trajectory(dt, 12.0, |t| 0.1 * (-t).exp() * (3.0 * t).cos());
        let sc = SimConfig::default();
        let a = compute_metrics(&short, &sc).unwrap();
        let b = compute_metrics(&long, &sc).unwrap();
        assert_eq!(a.settling_time, b.settling_time);
        assert_eq!(a.overshoot_pct, b.overshoot_pct);
        assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn ranking() {
        let report = compare(&[
            row("slow", Some(3.9), Verdict::Stable),
            row("boom", None, Verdict::Unstable),
            row("fast", Some(2.0), Verdict::Stable),
            row("meh", None, Verdict::Marginal),
        ])
        .unwrap();
        let order: Vec<_> = report.rows.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(order, ["fast", "slow", "meh", "boom"]);
    }

    #[test]
    fn ties_break_on_label() {
        let report = compare(&[
            row("b", Some(1.0), Verdict::Stable),
            row("a", Some(1.0), Verdict::Stable),
        ])
        .unwrap();
        assert_eq!(report.rows[0].0, "a");
    }

    #[test]
    fn single_row_table() {
        let report = compare(&[row("only", Some(1.0), Verdict::Stable)]).unwrap();
        assert_eq!(report.to_text().lines().count(), 2);
        assert_eq!(report.to_csv().lines().count(), 2);
        assert!(compare(&[]).is_err());
    }
}

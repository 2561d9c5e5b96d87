//! Discrete PID on the pitch error.
//!
//! The bookkeeping follows the balancing loop: the previous error and the
//! error sum both start at zero, the error is `pitch − setpoint`, and the
//! derivative is a backward difference against the previous error.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Result};
use crate::numerics::Poly;
use crate::plant::StateSpace;

/// Proportional, integral and derivative gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl PidGains {
    pub fn new(kp: f64, ki: f64, kd: f64) -> Result<Self> {
        for (name, v) in [("kp", kp), ("ki", ki), ("kd", kd)] {
            if !v.is_finite() || v < 0.0 {
                return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { kp, ki, kd })
    }

    /// The four gain sets of the response-curve grid, in published order.
    pub fn published_grid() -> [PidGains; 4] {
        [
            PidGains {
                kp: 25.0,
                ki: 0.8,
                kd: 0.1,
            },
            PidGains {
                kp: 50.0,
                ki: 0.8,
                kd: 0.05,
            },
            PidGains {
                kp: 100.0,
                ki: 0.8,
                kd: 0.1,
            },
            PidGains {
                kp: 1000.0,
                ki: 0.8,
                kd: 0.05,
            },
        ]
    }
}

impl fmt::Display for PidGains {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kp={} ki={} kd={}", self.kp, self.ki, self.kd)
    }
}

/// How the error sum and difference relate to the step length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccumulationMode {
    /// `sum += e·dt`, `de = (e − prev)/dt`.
    #[default]
    DtScaled,
    /// `sum += e`, `de = e − prev`, with no step length at all.
    PaperLiteral,
}

impl AccumulationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AccumulationMode::DtScaled => "dt-scaled",
            AccumulationMode::PaperLiteral => "paper-literal",
        }
    }
}

impl fmt::Display for AccumulationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AccumulationMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dt-scaled" => Ok(AccumulationMode::DtScaled),
            "paper-literal" => Ok(AccumulationMode::PaperLiteral),
            other => Err(invalid(format!(
                "unknown accumulation mode `{other}` (expected dt-scaled or paper-literal)"
            ))),
        }
    }
}

/// Error memory carried between steps.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PidState {
    pub prev_error: f64,
    pub error_sum: f64,
    pub initialized: bool,
}

impl PidState {
    /// Zeroed memory, as at the start of a run.
    pub fn reset() -> Self {
        Self::default()
    }
}

/// A PID law plus its bookkeeping options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pid {
    pub gains: PidGains,
    pub mode: AccumulationMode,
    /// Symmetric clamp `|u| ≤ limit`; `None` leaves the output unbounded.
    pub output_limit: Option<f64>,
}

impl Pid {
    pub fn new(gains: PidGains) -> Self {
        Self {
            gains,
            mode: AccumulationMode::default(),
            output_limit: None,
        }
    }

    pub fn with_mode(self, mode: AccumulationMode) -> Self {
        Self { mode, ..self }
    }

    pub fn with_output_limit(self, limit: Option<f64>) -> Self {
        Self {
            output_limit: limit,
            ..self
        }
    }

    pub fn step(&self, st: PidState, error: f64, dt: f64) -> (f64, PidState) {
        let (u, next) = pid_step(&self.gains, st, error, dt, self.mode);
        let u = match self.output_limit {
            Some(limit) => u.clamp(-limit, limit),
            None => u,
        };
        (u, next)
    }
}

/// One PID update. Returns the control and the advanced state.
pub fn pid_step(
    gains: &PidGains,
    st: PidState,
    error: f64,
    dt: f64,
    mode: AccumulationMode,
) -> (f64, PidState) {
    debug_assert!(dt > 0.0);
    let (sum, deriv) = match mode {
        AccumulationMode::DtScaled => (st.error_sum + error * dt, (error - st.prev_error) / dt),
        AccumulationMode::PaperLiteral => (st.error_sum + error, error - st.prev_error),
    };
    let u = gains.kp * error + gains.ki * sum + gains.kd * deriv;
    let next = PidState {
        prev_error: error,
        error_sum: sum,
        initialized: true,
    };
    (u, next)
}

/// Closed-loop characteristic polynomial of `φ̈ = A₂₁φ + B₂u` under
/// continuous PID feedback `u = −(kp·φ + ki∫φ + kd·φ̇)`:
/// `s³ + B₂kd·s² + (B₂kp − A₂₁)·s + B₂ki`.
pub fn pid_stability_poly(gains: &PidGains, ss: &StateSpace) -> Result<Poly> {
    ss.require_reduced()?;
    let (a21, b2) = (ss.a21(), ss.b2());
    Poly::new(vec![1.0, b2 * gains.kd, b2 * gains.kp - a21, b2 * gains.ki])
}

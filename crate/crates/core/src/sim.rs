//! Fixed-step closed-loop simulation.
//!
//! Each step measures the pitch, forms `e = φ − setpoint`, asks the
//! controller for a force, records the sample, and advances the plant one
//! RK4 step with the force held constant. The controller runs at the
//! integration rate.
//!
//! Error-driven controllers (PID, fuzzy) output a correction `c` for a
//! positive pitch error; the force applied to the plant is `u = −c`, so that
//! positive gains oppose the tilt. LQR already produces the force `−Kx`.

use std::fmt;
use std::thread;

use crate::error::{invalid, Result};
use crate::fuzzy::{fuzzy_control, FuzzyConfig, IntegralState};
use crate::lqr::{lqr_control, synthesize, LqrController, LqrWeights};
use crate::numerics::rk4_step;
use crate::pid::{Pid, PidState};
use crate::plant::{
    build_reduced, FormulaMode, PitchDynamics, PitchState, PlantParams, StateSpace,
};

/// Controller selection with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ControllerConfig {
    Pid(Pid),
    Lqr(LqrWeights),
    Fuzzy(FuzzyConfig),
    /// `u ≡ 0`.
    Open,
}

impl fmt::Display for ControllerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControllerConfig::Pid(pid) => {
                write!(f, "PID {} ({} accumulation", pid.gains, pid.mode)?;
                if let Some(limit) = pid.output_limit {
                    write!(f, ", |u| <= {limit}")?;
                }
                write!(f, ")")
            }
            ControllerConfig::Lqr(w) => write!(
                f,
                "LQR Q=[[{}, {}], [{}, {}]] R={}",
                w.q[(0, 0)],
                w.q[(0, 1)],
                w.q[(1, 0)],
                w.q[(1, 1)],
                w.r[(0, 0)]
            ),
            ControllerConfig::Fuzzy(cfg) => write!(
                f,
                "fuzzy {} (W_e={} rad, W_r={} rad/s, W_out={}, ki={})",
                cfg.variant,
                cfg.error_var.halfwidth(),
                cfg.rate_var.halfwidth(),
                cfg.output_var.halfwidth(),
                cfg.ki
            ),
            ControllerConfig::Open => write!(f, "open loop (u = 0)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlantModel {
    /// Reduced linearization `φ̈ = A₂₁φ + B₂u`.
    Linear,
    /// `φ̈ = A₂₁ sin φ + B₂u`.
    #[default]
    Nonlinear,
}

impl PlantModel {
    pub fn as_str(self) -> &'static str {
        match self {
            PlantModel::Linear => "linear",
            PlantModel::Nonlinear => "nonlinear",
        }
    }
}

impl fmt::Display for PlantModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PlantModel {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(PlantModel::Linear),
            "nonlinear" => Ok(PlantModel::Nonlinear),
            other => Err(invalid(format!(
                "unknown plant model `{other}` (expected linear or nonlinear)"
            ))),
        }
    }
}

/// Instantaneous kick added to the pitch rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disturbance {
    /// s
    pub time: f64,
    /// rad/s added to φ̇
    pub impulse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub t_final: f64,
    pub dt: f64,
    pub initial: PitchState,
    pub setpoint: f64,
    pub plant_model: PlantModel,
    pub disturbance: Option<Disturbance>,
    pub divergence_threshold: f64,
    /// Viscous pitch damping `c_d`.
    pub damping: f64,
}

impl SimConfig {
    pub const DEFAULT_DT: f64 = 0.001;
    pub const DEFAULT_T_FINAL: f64 = 10.0;
    pub const DEFAULT_INITIAL_PITCH: f64 = 0.1;

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt) || !self.t_final.is_finite() {
            return Err(invalid(format!(
                "t_final must be finite and >= dt, got {}",
                self.t_final
            )));
        }
        if !(self.divergence_threshold > 0.0) {
            return Err(invalid("divergence threshold must be > 0"));
        }
        if !self.initial.is_finite() || !self.setpoint.is_finite() {
            return Err(invalid("initial state and setpoint must be finite"));
        }
        if !(self.damping >= 0.0) || !self.damping.is_finite() {
            return Err(invalid("damping must be finite and >= 0"));
        }
        if let Some(d) = self.disturbance {
            if !d.time.is_finite() || d.time < 0.0 || !d.impulse.is_finite() {
                return Err(invalid("disturbance time must be >= 0 and impulse finite"));
            }
        }
        Ok(())
    }

    /// `floor(t_final/dt) + 1`.
    pub fn sample_count(&self) -> usize {
        // the tiny bias keeps exact ratios like 0.3/0.1 from flooring low
        (self.t_final / self.dt * (1.0 + 1e-12)).floor() as usize + 1
    }

    /// Step index at which the disturbance is applied.
    fn disturbance_step(&self) -> Option<(usize, f64)> {
        self.disturbance.map(|d| {
            (
                (d.time / self.dt * (1.0 - 1e-12)).ceil() as usize,
                d.impulse,
            )
        })
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            t_final: Self::DEFAULT_T_FINAL,
            dt: Self::DEFAULT_DT,
            initial: PitchState::new(Self::DEFAULT_INITIAL_PITCH, 0.0),
            setpoint: 0.0,
            plant_model: PlantModel::default(),
            disturbance: None,
            divergence_threshold: std::f64::consts::FRAC_PI_2,
            damping: 0.0,
        }
    }
}

/// One recorded step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    Diverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub samples: Vec<Sample>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn diverged(&self) -> bool {
        self.termination == Termination::Diverged
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}

/// Controller with its run-time memory.
enum Law {
    Pid {
        pid: Pid,
        state: PidState,
    },
    Lqr(LqrController),
    Fuzzy {
        cfg: FuzzyConfig,
        integral: IntegralState,
        prev_error: f64,
    },
    Open,
}

impl Law {
    fn new(controller: &ControllerConfig, ss: &StateSpace) -> Result<Self> {
        Ok(match controller {
            ControllerConfig::Pid(pid) => Law::Pid {
                pid: *pid,
                state: PidState::reset(),
            },
            ControllerConfig::Lqr(w) => Law::Lqr(synthesize(ss, w)?),
            ControllerConfig::Fuzzy(cfg) => Law::Fuzzy {
                cfg: cfg.clone(),
                integral: IntegralState::default(),
                prev_error: 0.0,
            },
            ControllerConfig::Open => Law::Open,
        })
    }

    fn force(&mut self, s: PitchState, setpoint: f64, dt: f64) -> f64 {
        let e = s.phi - setpoint;
        match self {
            Law::Pid { pid, state } => {
                let (c, next) = pid.step(*state, e, dt);
                *state = next;
                -c
            }
            Law::Lqr(ctl) => lqr_control(ctl, PitchState::new(e, s.phi_dot)),
            Law::Fuzzy {
                cfg,
                integral,
                prev_error,
            } => {
                let rate = (e - *prev_error) / dt;
                *prev_error = e;
                let (c, next) = fuzzy_control(cfg, *integral, e, rate, dt);
                *integral = next;
                -c
            }
            Law::Open => 0.0,
        }
    }
}

/// Simulates one controller against the plant.
pub fn run(
    params: &PlantParams,
    mode: FormulaMode,
    controller: &ControllerConfig,
    sc: &SimConfig,
) -> Result<Trajectory> {
    let ss = build_reduced(params, mode)?;
    run_with_model(&ss, controller, sc)
}

/// Like [`run`] but against an explicit reduced model.
pub fn run_with_model(
    ss: &StateSpace,
    controller: &ControllerConfig,
    sc: &SimConfig,
) -> Result<Trajectory> {
    ss.require_reduced()?;
    sc.validate()?;
    let mut law = Law::new(controller, ss)?;
    let dynamics = PitchDynamics::from_state_space(ss, sc.damping);
    let n = sc.sample_count();
    let kick = sc.disturbance_step();

    let mut samples = Vec::with_capacity(n);
    let mut x = sc.initial.to_array();
    let mut termination = Termination::Completed;
    for k in 0..n {
        if let Some((step, impulse)) = kick {
            if step == k {
                x[1] += impulse;
            }
        }
        let state = PitchState::from_array(x);
        let u = law.force(state, sc.setpoint, sc.dt);
        samples.push(Sample {
            t: k as f64 * sc.dt,
            phi: x[0],
            phi_dot: x[1],
            u,
        });
        if !state.is_finite() || x[0].abs() > sc.divergence_threshold {
            termination = Termination::Diverged;
            break;
        }
        if k + 1 == n {
            break;
        }
        x = match sc.plant_model {
            PlantModel::Linear => rk4_step(|s, u| dynamics.linear(s, u), &x, u, sc.dt),
            PlantModel::Nonlinear => rk4_step(|s, u| dynamics.nonlinear(s, u), &x, u, sc.dt),
        };
    }
    Ok(Trajectory {
        dt: sc.dt,
        samples,
        termination,
    })
}

/// Runs every labelled controller under the same plant and settings.
///
/// Runs execute on scoped threads; results come back in input order and a
/// failing entry does not affect the others.
pub fn batch_run(
    params: &PlantParams,
    mode: FormulaMode,
    controllers: &[(String, ControllerConfig)],
    sc: &SimConfig,
) -> Result<Vec<(String, Result<Trajectory>)>> {
    if controllers.is_empty() {
        return Err(invalid("batch needs at least one controller"));
    }
    Ok(thread::scope(|scope| {
        let handles: Vec<_> = controllers
            .iter()
            .map(|(label, ctl)| {
                let handle = scope.spawn(move || run(params, mode, ctl, sc));
                (label.clone(), handle)
            })
            .collect();
        handles
            .into_iter()
            .map(|(label, h)| (label, h.join().expect("simulation thread panicked")))
            .collect()
    }))
}

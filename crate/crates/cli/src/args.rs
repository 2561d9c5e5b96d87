use std::path::PathBuf;

use balance_core::fuzzy::{FuzzyConfig, FuzzyVariant, RuleBase};
use balance_core::lqr::LqrWeights;
use balance_core::pid::{AccumulationMode, Pid, PidGains};
use balance_core::plant::{FormulaMode, PitchState, PlantParams};
use balance_core::sim::{ControllerConfig, Disturbance, PlantModel, SimConfig};
use balance_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "balance-bench",
    version,
    about = "Self-balancing robot controller bench"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one closed-loop simulation and write its trajectory as CSV.
    Simulate(SimulateArgs),
    /// Rank trajectories previously written as CSV.
    Compare(CompareArgs),
    /// Print the LQR gain, Riccati residual and closed-loop polynomial.
    LqrGain(LqrGainArgs),
    /// Evaluate the fuzzy controller once and show the fired rules.
    FuzzyEval(FuzzyEvalArgs),
    /// Run all eight reference configurations and write CSVs plus a report.
    PaperSuite(PaperSuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ControllerKind {
    Pid,
    Lqr,
    FuzzyPd,
    FuzzyPdi,
}

#[derive(Debug, Args)]
pub struct PlantArgs {
    /// Pendulum (body) mass m in kg; not published, 0.2 assumed.
    #[arg(long = "mass-m", default_value_t = PlantParams::DEFAULT_PENDULUM_MASS)]
    pub mass_m: f64,
    /// Linearization denominator: paper-literal or standard.
    #[arg(long, default_value = "paper-literal")]
    pub formula_mode: FormulaMode,
}

impl PlantArgs {
    pub fn params(&self) -> balance_core::Result<PlantParams> {
        let p = PlantParams::robot().with_pendulum_mass(self.mass_m);
        p.validate()?;
        Ok(p)
    }

    pub fn describe(&self, p: &PlantParams) -> Vec<String> {
        let assumed = if self.mass_m == PlantParams::DEFAULT_PENDULUM_MASS {
            " (default; assumed value)"
        } else {
            ""
        };
        vec![
            format!("plant: {p}"),
            format!("pendulum mass m: {} kg{assumed}", p.pendulum_mass),
            format!("formula mode: {}", self.formula_mode),
        ]
    }
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Integration and control step, s.
    #[arg(long, default_value_t = SimConfig::DEFAULT_DT)]
    pub dt: f64,
    /// Simulated duration, s.
    #[arg(long, default_value_t = SimConfig::DEFAULT_T_FINAL)]
    pub t_final: f64,
    /// Initial pitch, rad.
    #[arg(long, default_value_t = SimConfig::DEFAULT_INITIAL_PITCH, allow_negative_numbers = true)]
    pub initial_pitch: f64,
    /// Initial pitch rate, rad/s.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub initial_rate: f64,
    /// Pitch setpoint, rad.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub setpoint: f64,
    /// Plant dynamics: linear or nonlinear.
    #[arg(long, default_value = "nonlinear")]
    pub plant: PlantModel,
    /// Viscous pitch damping c_d, 1/s.
    #[arg(long, default_value_t = 0.0)]
    pub damping: f64,
    /// Time of a pitch-rate impulse, s.
    #[arg(long, requires = "disturb_impulse")]
    pub disturb_time: Option<f64>,
    /// Size of the pitch-rate impulse, rad/s.
    #[arg(long, requires = "disturb_time", allow_negative_numbers = true)]
    pub disturb_impulse: Option<f64>,
    /// |pitch| beyond which a run counts as diverged, rad.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub divergence_threshold: f64,
}

impl SimArgs {
    pub fn config(&self) -> balance_core::Result<SimConfig> {
        let sc = SimConfig {
            t_final: self.t_final,
            dt: self.dt,
            initial: PitchState::new(self.initial_pitch, self.initial_rate),
            setpoint: self.setpoint,
            plant_model: self.plant,
            disturbance: match (self.disturb_time, self.disturb_impulse) {
                (Some(time), Some(impulse)) => Some(Disturbance { time, impulse }),
                _ => None,
            },
            divergence_threshold: self.divergence_threshold,
            damping: self.damping,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn describe(&self, sc: &SimConfig) -> Vec<String> {
        vec![
            format!(
                "dt: {} s, t_final: {} s ({} samples)",
                sc.dt,
                sc.t_final,
                sc.sample_count()
            ),
            format!(
                "initial: pitch {} rad, rate {} rad/s; setpoint {} rad",
                sc.initial.phi, sc.initial.phi_dot, sc.setpoint
            ),
            format!(
                "plant model: {}, damping c_d: {}",
                sc.plant_model, sc.damping
            ),
            match sc.disturbance {
                Some(d) => format!("disturbance: {} rad/s at t={} s", d.impulse, d.time),
                None => "disturbance: none".to_string(),
            },
            format!("divergence threshold: {} rad", sc.divergence_threshold),
        ]
    }
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Q weight on pitch.
    #[arg(long, default_value_t = 10.0)]
    pub q11: f64,
    /// Q weight on pitch rate.
    #[arg(long, default_value_t = 100.0)]
    pub q22: f64,
    /// R weight on the control force.
    #[arg(long = "r", default_value_t = 0.001, allow_negative_numbers = true)]
    pub r: f64,
}

impl WeightArgs {
    pub fn weights(&self) -> balance_core::Result<LqrWeights> {
        LqrWeights::diagonal(self.q11, self.q22, self.r)
    }
}

#[derive(Debug, Args)]
pub struct FuzzyArgs {
    /// Rule-base file (5 lines of 5 tokens from HN N Z P HP).
    #[arg(long)]
    pub rulebase: Option<PathBuf>,
    /// Error universe half-width, rad.
    #[arg(long, default_value_t = FuzzyConfig::DEFAULT_ERROR_HALFWIDTH)]
    pub error_universe: f64,
    /// Error-rate universe half-width, rad/s.
    #[arg(long, default_value_t = FuzzyConfig::DEFAULT_RATE_HALFWIDTH)]
    pub rate_universe: f64,
    /// Output universe half-width, force units.
    #[arg(long, default_value_t = FuzzyConfig::DEFAULT_OUTPUT_HALFWIDTH)]
    pub output_universe: f64,
    /// Integral gain of the PD+I variant.
    #[arg(long, default_value_t = FuzzyConfig::DEFAULT_KI)]
    pub fuzzy_ki: f64,
}

impl FuzzyArgs {
    pub fn config(&self, variant: FuzzyVariant) -> balance_core::Result<FuzzyConfig> {
        let rules = match &self.rulebase {
            Some(path) => RuleBase::load(path).map_err(|e| match e {
                Error::Io(io) => {
                    Error::InvalidInput(format!("cannot read rule base {}: {io}", path.display()))
                }
                other => other,
            })?,
            None => RuleBase::published(),
        };
        FuzzyConfig::new(
            self.error_universe,
            self.rate_universe,
            self.output_universe,
            rules,
            variant,
            self.fuzzy_ki,
        )
    }

    pub fn describe(&self) -> Vec<String> {
        vec![
            format!(
                "fuzzy universes: error {} rad, rate {} rad/s, output {}",
                self.error_universe, self.rate_universe, self.output_universe
            ),
            format!("fuzzy PD+I ki: {}", self.fuzzy_ki),
            match &self.rulebase {
                Some(p) => format!("rule base: {}", p.display()),
                None => "rule base: built-in".to_string(),
            },
        ]
    }
}

#[derive(Debug, Args)]
pub struct PidArgs {
    #[arg(long, default_value_t = 50.0)]
    pub kp: f64,
    #[arg(long, default_value_t = 0.8)]
    pub ki: f64,
    #[arg(long, default_value_t = 0.05)]
    pub kd: f64,
    /// Error bookkeeping: dt-scaled or paper-literal.
    #[arg(long, default_value = "dt-scaled")]
    pub pid_mode: AccumulationMode,
    /// Optional symmetric output clamp.
    #[arg(long)]
    pub u_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub controller: ControllerKind,
    #[command(flatten)]
    pub pid: PidArgs,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    pub fuzzy: FuzzyArgs,
    #[command(flatten)]
    pub plant: PlantArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Trajectory CSV to write.
    #[arg(long, required = true)]
    pub out: PathBuf,
}

impl SimulateArgs {
    pub fn controller_config(&self) -> balance_core::Result<ControllerConfig> {
        Ok(match self.controller {
            ControllerKind::Pid => {
                if let Some(limit) = self.pid.u_max {
                    if !(limit > 0.0) {
                        return Err(Error::InvalidInput("--u-max must be > 0".into()));
                    }
                }
                let gains = PidGains::new(self.pid.kp, self.pid.ki, self.pid.kd)?;
                ControllerConfig::Pid(
                    Pid::new(gains)
                        .with_mode(self.pid.pid_mode)
                        .with_output_limit(self.pid.u_max),
                )
            }
            ControllerKind::Lqr => ControllerConfig::Lqr(self.weights.weights()?),
            ControllerKind::FuzzyPd => {
                ControllerConfig::Fuzzy(self.fuzzy.config(FuzzyVariant::Pd)?)
            }
            ControllerKind::FuzzyPdi => {
                ControllerConfig::Fuzzy(self.fuzzy.config(FuzzyVariant::PdI)?)
            }
        })
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Trajectory CSV files; each file stem becomes a label.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub setpoint: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub divergence_threshold: f64,
    /// Emit CSV instead of a text table.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct LqrGainArgs {
    #[command(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    pub plant: PlantArgs,
    /// Override the reduced model's A21 entry.
    #[arg(long, allow_negative_numbers = true)]
    pub a21: Option<f64>,
    /// Override the reduced model's B2 entry.
    #[arg(long, allow_negative_numbers = true)]
    pub b2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FuzzyEvalArgs {
    /// Pitch error, rad.
    #[arg(long, allow_negative_numbers = true)]
    pub error: f64,
    /// Pitch error rate, rad/s.
    #[arg(long, allow_negative_numbers = true)]
    pub error_rate: f64,
    #[command(flatten)]
    pub fuzzy: FuzzyArgs,
}

#[derive(Debug, Args)]
pub struct PaperSuiteArgs {
    #[command(flatten)]
    pub plant: PlantArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[command(flatten)]
    pub fuzzy: FuzzyArgs,
    /// Directory for the CSVs and report.
    #[arg(long, default_value = "paper-suite-out")]
    pub outdir: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_flag_rejected() {
        let err = Cli::try_parse_from(["balance-bench", "lqr-gain", "--bogus", "1"]).unwrap_err();
        assert_eq!(err.kind(), clap::error::ErrorKind::UnknownArgument);
    }

    #[test]
    fn simulate_requires_out() {
        let err =
            Cli::try_parse_from(["balance-bench", "simulate", "--controller", "pid"]).unwrap_err();
        assert_eq!(err.kind(), clap::error::ErrorKind::MissingRequiredArgument);
    }

    #[test]
    fn defaults_match_reference_setup() {
        let cli = Cli::try_parse_from(["balance-bench", "paper-suite"]).unwrap();
        let Command::PaperSuite(a) = cli.command else {
            panic!("wrong subcommand")
        };
        let sc = a.sim.config().unwrap();
        assert_eq!(sc.dt, 0.001);
        assert_eq!(sc.t_final, 10.0);
        assert_eq!(a.plant.params().unwrap(), PlantParams::robot());
        assert_eq!(a.plant.formula_mode, FormulaMode::PaperLiteral);
    }
}

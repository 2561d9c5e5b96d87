//! Inverted-pendulum model of the two-wheeled robot.
//!
//! Two linearizations are provided: the reduced pitch-only model with state
//! `(φ, φ̇)` and the full cart-pendulum model with state `(x, ẋ, φ, φ̇)`. Both
//! share a denominator whose form depends on [`FormulaMode`].

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Result};
use crate::numerics::Mat;

/// Physical constants of the robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantParams {
    /// Cart (wheel base) mass M, kg.
    pub cart_mass: f64,
    /// Pendulum (body) mass m, kg.
    pub pendulum_mass: f64,
    /// Pendulum length l, m.
    pub length: f64,
    /// Pendulum moment of inertia I, kg·m².
    pub inertia: f64,
    /// Dynamic friction coefficient b.
    pub friction: f64,
    /// Gravitational acceleration g, m/s².
    pub gravity: f64,
}

impl PlantParams {
    /// Body mass assumed when none is given; the robot's published constants
    /// omit it.
    pub const DEFAULT_PENDULUM_MASS: f64 = 0.2;

    /// Published robot constants with the default body mass.
    pub fn robot() -> Self {
        Self {
            cart_mass: 0.0754,
            pendulum_mass: Self::DEFAULT_PENDULUM_MASS,
            length: 0.157,
            inertia: 0.01094,
            friction: 0.65,
            gravity: 9.8,
        }
    }

    pub fn with_pendulum_mass(self, m: f64) -> Self {
        Self {
            pendulum_mass: m,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.cart_mass,
            self.pendulum_mass,
            self.length,
            self.inertia,
            self.friction,
            self.gravity,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("plant parameters must be finite"));
        }
        if !(self.cart_mass > 0.0) {
            return Err(invalid("cart mass M must be > 0"));
        }
        if !(self.pendulum_mass >= 0.0) {
            return Err(invalid("pendulum mass m must be >= 0"));
        }
        if !(self.length > 0.0) {
            return Err(invalid("length l must be > 0"));
        }
        if !(self.inertia > 0.0) {
            return Err(invalid("inertia I must be > 0"));
        }
        if !(self.gravity > 0.0) {
            return Err(invalid("gravity g must be > 0"));
        }
        if !(self.friction >= 0.0) {
            return Err(invalid("friction b must be >= 0"));
        }
        Ok(())
    }

    /// Shared denominator of every A and B entry.
    pub fn denominator(&self, mode: FormulaMode) -> f64 {
        let (big_m, m, l, i) = (
            self.cart_mass,
            self.pendulum_mass,
            self.length,
            self.inertia,
        );
        match mode {
            FormulaMode::PaperLiteral => i * (big_m + m) + big_m * m * m,
            FormulaMode::Standard => i * (big_m + m) + big_m * m * l * l,
        }
    }
}

impl Default for PlantParams {
    fn default() -> Self {
        Self::robot()
    }
}

impl fmt::Display for PlantParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M={} kg, m={} kg, l={} m, I={} kg·m², b={}, g={} m/s²",
            self.cart_mass,
            self.pendulum_mass,
            self.length,
            self.inertia,
            self.friction,
            self.gravity
        )
    }
}

/// Which denominator the linearization uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormulaMode {
    /// `I(M+m) + M·m²`, transcribed as published.
    #[default]
    PaperLiteral,
    /// Textbook cart-pole `I(M+m) + M·m·l²`.
    Standard,
}

impl FormulaMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaMode::PaperLiteral => "paper-literal",
            FormulaMode::Standard => "standard",
        }
    }
}

impl fmt::Display for FormulaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-literal" => Ok(FormulaMode::PaperLiteral),
            "standard" => Ok(FormulaMode::Standard),
            other => Err(invalid(format!(
                "unknown formula mode `{other}` (expected paper-literal or standard)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// State `(φ, φ̇)`.
    Reduced2,
    /// State `(x, ẋ, φ, φ̇)`.
    Full4,
}

/// Linear model `ẋ = A x + B u`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    pub a: Mat,
    pub b: Mat,
    pub kind: ModelKind,
    pub mode: FormulaMode,
}

impl StateSpace {
    /// Builds a reduced model from explicit entries `A = [[0,1],[a21,0]]`,
    /// `B = [0; b2]`. Handy for overriding the plant with a textbook system.
    pub fn reduced_from_entries(a21: f64, b2: f64, mode: FormulaMode) -> Result<Self> {
        Ok(Self {
            a: Mat::from_rows(&[[0.0, 1.0], [a21, 0.0]])?,
            b: Mat::column(&[0.0, b2])?,
            kind: ModelKind::Reduced2,
            mode,
        })
    }

    /// `A₂₁` of a reduced model (gravity stiffness).
    pub fn a21(&self) -> f64 {
        match self.kind {
            ModelKind::Reduced2 => self.a[(1, 0)],
            ModelKind::Full4 => self.a[(3, 2)],
        }
    }

    /// Input gain on the pitch acceleration row.
    pub fn b2(&self) -> f64 {
        match self.kind {
            ModelKind::Reduced2 => self.b[(1, 0)],
            ModelKind::Full4 => self.b[(3, 0)],
        }
    }

    pub fn require_reduced(&self) -> Result<()> {
        if self.kind != ModelKind::Reduced2 {
            return Err(invalid("operation needs the reduced 2-state model"));
        }
        Ok(())
    }
}

fn checked_denominator(params: &PlantParams, mode: FormulaMode) -> Result<f64> {
    params.validate()?;
    let d = params.denominator(mode);
    if !(d > 0.0) {
        return Err(invalid(format!("model denominator must be > 0, got {d}")));
    }
    Ok(d)
}

/// Pitch-only linearization about upright: `A = [[0,1],[mgl(M+m)/D, 0]]`,
/// `B = [0; ml/D]`.
pub fn build_reduced(params: &PlantParams, mode: FormulaMode) -> Result<StateSpace> {
    let d = checked_denominator(params, mode)?;
    let PlantParams {
        cart_mass: big_m,
        pendulum_mass: m,
        length: l,
        gravity: g,
        ..
    } = *params;
    StateSpace::reduced_from_entries(m * g * l * (big_m + m) / d, m * l / d, mode)
}

/// Four-state cart-pendulum linearization, including the friction terms.
pub fn build_full(params: &PlantParams, mode: FormulaMode) -> Result<StateSpace> {
    let d = checked_denominator(params, mode)?;
    let PlantParams {
        cart_mass: big_m,
        pendulum_mass: m,
        length: l,
        inertia: i,
        friction: b,
        gravity: g,
    } = *params;
    let a = Mat::from_rows(&[
        [0.0, 1.0, 0.0, 0.0],
        [0.0, -(i + m * l * l) * b / d, m * m * g * l * l / d, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, -m * l * b / d, m * g * l * (big_m + m) / d, 0.0],
    ])?;
    let bm = Mat::column(&[0.0, (i + m * l * l) / d, 0.0, m * l / d])?;
    Ok(StateSpace {
        a,
        b: bm,
        kind: ModelKind::Full4,
        mode,
    })
}

/// Pitch angle and rate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PitchState {
    /// rad
    pub phi: f64,
    /// rad/s
    pub phi_dot: f64,
}

impl PitchState {
    pub fn new(phi: f64, phi_dot: f64) -> Self {
        Self { phi, phi_dot }
    }

    pub fn is_finite(&self) -> bool {
        self.phi.is_finite() && self.phi_dot.is_finite()
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.phi, self.phi_dot]
    }

    pub fn from_array(x: [f64; 2]) -> Self {
        Self::new(x[0], x[1])
    }
}

/// Pitch dynamics `φ̈ = A₂₁·sin φ − c_d·φ̇ + B₂·u`, linearizing to the
/// reduced model when `c_d = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchDynamics {
    pub a21: f64,
    pub b2: f64,
    pub damping: f64,
}

impl PitchDynamics {
    pub fn new(params: &PlantParams, mode: FormulaMode, damping: f64) -> Result<Self> {
        if !(damping >= 0.0) || !damping.is_finite() {
            return Err(invalid("damping must be finite and >= 0"));
        }
        let ss = build_reduced(params, mode)?;
        Ok(Self::from_state_space(&ss, damping))
    }

    pub fn from_state_space(ss: &StateSpace, damping: f64) -> Self {
        Self {
            a21: ss.a21(),
            b2: ss.b2(),
            damping,
        }
    }

    pub fn nonlinear(&self, s: &[f64; 2], u: f64) -> [f64; 2] {
        [
            s[1],
            self.a21 * s[0].sin() - self.damping * s[1] + self.b2 * u,
        ]
    }

    pub fn linear(&self, s: &[f64; 2], u: f64) -> [f64; 2] {
        [s[1], self.a21 * s[0] - self.damping * s[1] + self.b2 * u]
    }
}

/// `(φ̇, φ̈)` of the sine-extended reduced model.
pub fn nonlinear_deriv(
    params: &PlantParams,
    mode: FormulaMode,
    s: PitchState,
    u: f64,
    damping: f64,
) -> Result<PitchState> {
    let dyn_ = PitchDynamics::new(params, mode, damping)?;
    Ok(PitchState::from_array(dyn_.nonlinear(&s.to_array(), u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Hand evaluation with M=0.0754, m=0.2, l=0.157, I=0.01094, g=9.8:
    //   D_lit = 0.01094·0.2754 + 0.0754·0.04       = 0.006028876
    //   D_std = 0.01094·0.2754 + 0.0754·0.2·0.157² = 0.00338458292
    //   mgl(M+m) = 0.2·9.8·0.157·0.2754            = 0.0847458…
    const D_LIT: f64 = 0.006028876;
    const D_STD: f64 = 0.00338458292;

    #[test]
    fn massless_pendulum_zeroes_numerators() {
        let p = PlantParams::robot().with_pendulum_mass(0.0);
        let ss = build_reduced(&p, FormulaMode::PaperLiteral).unwrap();
        assert_eq!(ss.a, Mat::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap());
        assert_eq!(ss.b, Mat::column(&[0.0, 0.0]).unwrap());
    }

    #[test]
    fn robot_reduced_literal() {
        let p = PlantParams::robot();
        assert!((p.denominator(FormulaMode::PaperLiteral) - D_LIT).abs() < 1e-15);
        let ss = build_reduced(&p, FormulaMode::PaperLiteral).unwrap();
        assert!((ss.a21() - 14.056).abs() < 1e-3, "{}", ss.a21());
        assert!((ss.b2() - 5.208).abs() < 1e-3, "{}", ss.b2());
    }

    #[test]
    fn robot_reduced_standard() {
        let p = PlantParams::robot();
        assert!((p.denominator(FormulaMode::Standard) - D_STD).abs() < 1e-15);
        let ss = build_reduced(&p, FormulaMode::Standard).unwrap();
        assert!((ss.a21() - 25.03).abs() < 0.01, "{}", ss.a21());
        assert!((ss.b2() - 0.0314 / D_STD).abs() < 1e-12);
    }

    #[test]
    fn full_model_without_mass_or_friction() {
        let p = PlantParams {
            pendulum_mass: 0.0,
            friction: 0.0,
            ..PlantParams::robot()
        };
        let ss = build_full(&p, FormulaMode::PaperLiteral).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (0, 1) || (i, j) == (2, 3) {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(ss.a[(i, j)].abs(), expected, "A[{i}][{j}]");
            }
        }
    }

    #[test]
    fn full_model_damping_term() {
        let ss = build_full(&PlantParams::robot(), FormulaMode::PaperLiteral).unwrap();
        let expected = -(0.01094 + 0.2 * 0.157 * 0.157) * 0.65 / D_LIT;
        assert!((ss.a[(1, 1)] - expected).abs() < 1e-12);
        assert!((ss.a[(1, 1)] + 1.711).abs() < 1e-3);
    }

    #[test]
    fn full_and_reduced_share_pitch_input_gain() {
        for mode in [FormulaMode::PaperLiteral, FormulaMode::Standard] {
            let p = PlantParams::robot().with_pendulum_mass(0.37);
            let full = build_full(&p, mode).unwrap();
            let reduced = build_reduced(&p, mode).unwrap();
            assert_eq!(full.b[(3, 0)], reduced.b[(1, 0)]);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = PlantParams {
            cart_mass: 0.0,
            ..PlantParams::robot()
        };
        assert!(build_reduced(&bad, FormulaMode::PaperLiteral).is_err());
        let bad = PlantParams::robot().with_pendulum_mass(-0.1);
        assert!(build_full(&bad, FormulaMode::Standard).is_err());
    }

    #[test]
    fn equilibria() {
        let p = PlantParams::robot();
        let mode = FormulaMode::PaperLiteral;
        let d = nonlinear_deriv(&p, mode, PitchState::new(0.0, 0.0), 0.0, 0.0).unwrap();
        assert_eq!(d, PitchState::new(0.0, 0.0));
        let d = nonlinear_deriv(
            &p,
            mode,
            PitchState::new(std::f64::consts::PI, 0.0),
            0.0,
            0.0,
        )
        .unwrap();
        assert!(d.phi_dot.abs() < 1e-13);
    }

    #[test]
    fn small_angle_matches_linear_model() {
        let p = PlantParams::robot();
        let dynamics = PitchDynamics::new(&p, FormulaMode::PaperLiteral, 0.0).unwrap();
        let phi = 1e-4;
        let nl = dynamics.nonlinear(&[phi, 0.0], 0.0)[1];
        assert!((nl - dynamics.a21 * phi).abs() < 1e-11 * dynamics.a21);
    }

    #[test]
    fn central_difference_recovers_stiffness() {
        let dynamics =
            PitchDynamics::new(&PlantParams::robot(), FormulaMode::Standard, 0.0).unwrap();
        let h = 1e-5;
        let slope = (dynamics.nonlinear(&[h, 0.0], 0.0)[1]
            - dynamics.nonlinear(&[-h, 0.0], 0.0)[1])
            / (2.0 * h);
        assert!((slope - dynamics.a21).abs() < 1e-6 * dynamics.a21);
    }

    #[test]
    fn formula_mode_parses() {
        assert_eq!(
            "standard".parse::<FormulaMode>().unwrap(),
            FormulaMode::Standard
        );
        assert!("textbook".parse::<FormulaMode>().is_err());
    }
}

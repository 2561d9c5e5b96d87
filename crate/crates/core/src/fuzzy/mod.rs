//! Mamdani fuzzy controller over pitch error and error rate.
//!
//! Each variable carries five triangular sets with peaks at
//! `{−W, −W/2, 0, W/2, W}` and feet on the neighbouring peaks, so adjacent
//! sets overlap by half and memberships always sum to one. The two outer sets
//! are shouldered: they stay at 1 past their peak.
//!
//! Inference uses `min` for rule strength, clips each consequent at its
//! strength, aggregates with `max`, and defuzzifies by centroid on a uniform
//! grid over the output universe.

mod rules;

use std::fmt;
use std::str::FromStr;

pub use rules::RuleBase;

use crate::error::{invalid, Result};

/// Points in the output-universe grid used for the centroid.
pub const CENTROID_POINTS: usize = 1001;

/// Aggregated areas below this defuzzify to zero.
pub const MIN_AREA: f64 = 1e-12;

/// Linguistic labels of the error and error-rate inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InputLabel {
    LongNegative,
    ShortNegative,
    Medium,
    ShortPositive,
    LongPositive,
}

impl InputLabel {
    pub const ALL: [InputLabel; 5] = [
        InputLabel::LongNegative,
        InputLabel::ShortNegative,
        InputLabel::Medium,
        InputLabel::ShortPositive,
        InputLabel::LongPositive,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        ["LN", "SN", "M", "SP", "LP"][self.index()]
    }
}

/// Linguistic labels of the control output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutputLabel {
    HighNegative,
    Negative,
    Zero,
    Positive,
    HighPositive,
}

impl OutputLabel {
    pub const ALL: [OutputLabel; 5] = [
        OutputLabel::HighNegative,
        OutputLabel::Negative,
        OutputLabel::Zero,
        OutputLabel::Positive,
        OutputLabel::HighPositive,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        ["HN", "N", "Z", "P", "HP"][self.index()]
    }
}

macro_rules! label_text {
    ($ty:ty, $kind:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = crate::Error;

            fn from_str(s: &str) -> Result<Self> {
                Self::ALL
                    .into_iter()
                    .find(|l| l.as_str() == s)
                    .ok_or_else(|| invalid(format!("unknown {} label `{s}`", $kind)))
            }
        }
    };
}

label_text!(InputLabel, "input");
label_text!(OutputLabel, "output");

/// A fuzzy variable: five shouldered triangles over `[−W, W]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyVariable {
    halfwidth: f64,
}

impl FuzzyVariable {
    pub fn new(halfwidth: f64) -> Result<Self> {
        if !(halfwidth > 0.0) || !halfwidth.is_finite() {
            return Err(invalid(format!(
                "universe half-width must be finite and > 0, got {halfwidth}"
            )));
        }
        Ok(Self { halfwidth })
    }

    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    /// Peak of set `index` (0..5).
    pub fn peak(&self, index: usize) -> f64 {
        (index as f64 - 2.0) * 0.5 * self.halfwidth
    }

    /// `(left foot, peak, right foot)`; outer feet sit one spacing past the
    /// universe edge but the shoulder makes them irrelevant.
    pub fn breakpoints(&self, index: usize) -> (f64, f64, f64) {
        let h = 0.5 * self.halfwidth;
        let p = self.peak(index);
        (p - h, p, p + h)
    }

    /// Membership of `x` in set `index` (0..5).
    pub fn degree(&self, index: usize, x: f64) -> f64 {
        assert!(index < 5, "set index {index} out of range");
        let (left, peak, right) = self.breakpoints(index);
        let h = 0.5 * self.halfwidth;
        if (index == 0 && x <= peak) || (index == 4 && x >= peak) {
            return 1.0;
        }
        if x <= left || x >= right {
            return 0.0;
        }
        (1.0 - (x - peak).abs() / h).clamp(0.0, 1.0)
    }

    /// Memberships of `x` in all five sets, in label order.
    pub fn fuzzify(&self, x: f64) -> [f64; 5] {
        std::array::from_fn(|i| self.degree(i, x))
    }
}

/// Membership of `x` in the set named `label` (`LN`…`LP` or `HN`…`HP`).
pub fn membership(var: &FuzzyVariable, label: &str, x: f64) -> Result<f64> {
    let index = match label.parse::<InputLabel>() {
        Ok(l) => l.index(),
        Err(_) => label
            .parse::<OutputLabel>()
            .map_err(|_| invalid(format!("unknown fuzzy set label `{label}`")))?
            .index(),
    };
    Ok(var.degree(index, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FuzzyVariant {
    /// Fuzzy map of error and error rate only.
    #[default]
    Pd,
    /// Fuzzy PD plus a crisp integral term `ki·∫e dt`.
    PdI,
}

impl FuzzyVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            FuzzyVariant::Pd => "PD",
            FuzzyVariant::PdI => "PD+I",
        }
    }
}

impl fmt::Display for FuzzyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Complete fuzzy controller configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyConfig {
    pub error_var: FuzzyVariable,
    pub rate_var: FuzzyVariable,
    pub output_var: FuzzyVariable,
    pub rules: RuleBase,
    pub variant: FuzzyVariant,
    /// Integral gain; only read by [`FuzzyVariant::PdI`].
    pub ki: f64,
}

impl FuzzyConfig {
    pub const DEFAULT_ERROR_HALFWIDTH: f64 = 0.5;
    pub const DEFAULT_RATE_HALFWIDTH: f64 = 2.0;
    pub const DEFAULT_OUTPUT_HALFWIDTH: f64 = 20.0;
    pub const DEFAULT_KI: f64 = 0.8;

    pub fn new(
        error_halfwidth: f64,
        rate_halfwidth: f64,
        output_halfwidth: f64,
        rules: RuleBase,
        variant: FuzzyVariant,
        ki: f64,
    ) -> Result<Self> {
        if !(ki >= 0.0) || !ki.is_finite() {
            return Err(invalid(format!(
                "fuzzy ki must be finite and >= 0, got {ki}"
            )));
        }
        Ok(Self {
            error_var: FuzzyVariable::new(error_halfwidth)?,
            rate_var: FuzzyVariable::new(rate_halfwidth)?,
            output_var: FuzzyVariable::new(output_halfwidth)?,
            rules,
            variant,
            ki,
        })
    }

    pub fn with_variant(self, variant: FuzzyVariant) -> Self {
        Self { variant, ..self }
    }
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        Self::new(
            Self::DEFAULT_ERROR_HALFWIDTH,
            Self::DEFAULT_RATE_HALFWIDTH,
            Self::DEFAULT_OUTPUT_HALFWIDTH,
            RuleBase::published(),
            FuzzyVariant::Pd,
            Self::DEFAULT_KI,
        )
        .expect("default fuzzy config is valid")
    }
}

/// A rule with non-zero firing strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiredRule {
    pub error: InputLabel,
    pub rate: InputLabel,
    pub consequent: OutputLabel,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub fired: Vec<FiredRule>,
    pub output: f64,
}

/// Runs the full Mamdani pipeline and keeps the fired rules.
pub fn infer_detailed(cfg: &FuzzyConfig, e: f64, e_rate: f64) -> Inference {
    let mu_e = cfg.error_var.fuzzify(e);
    let mu_r = cfg.rate_var.fuzzify(e_rate);

    let mut fired = Vec::new();
    let mut clip = [0.0f64; 5];
    for rate in InputLabel::ALL {
        for error in InputLabel::ALL {
            let strength = mu_e[error.index()].min(mu_r[rate.index()]);
            if strength > 0.0 {
                let consequent = cfg.rules.consequent(rate, error);
                clip[consequent.index()] = clip[consequent.index()].max(strength);
                fired.push(FiredRule {
                    error,
                    rate,
                    consequent,
                    strength,
                });
            }
        }
    }

    let out = &cfg.output_var;
    let w = out.halfwidth();
    let step = 2.0 * w / (CENTROID_POINTS - 1) as f64;
    let aggregated = |x: f64| {
        (0..5)
            .filter(|&c| clip[c] > 0.0)
            .map(|c| clip[c].min(out.degree(c, x)))
            .fold(0.0, f64::max)
    };
    // Grid points are summed in mirrored pairs about zero so that a
    // symmetric aggregate has an exactly zero moment.
    let half = (CENTROID_POINTS - 1) / 2;
    let (mut area, mut moment) = (aggregated(0.0) * step, 0.0);
    for k in 1..=half {
        let x = k as f64 * step;
        let (mu_pos, mu_neg) = (aggregated(x), aggregated(-x));
        area += (mu_pos + mu_neg) * step;
        moment += (mu_pos - mu_neg) * x * step;
    }
    let output = if area < MIN_AREA { 0.0 } else { moment / area };
    Inference { fired, output }
}

/// Crisp controller output for error `e` and error rate `e_rate`.
pub fn infer(cfg: &FuzzyConfig, e: f64, e_rate: f64) -> f64 {
    infer_detailed(cfg, e, e_rate).output
}

/// Integral memory of the PD+I variant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegralState {
    pub error_sum: f64,
}

/// One controller step. The PD variant leaves `st` untouched.
pub fn fuzzy_control(
    cfg: &FuzzyConfig,
    st: IntegralState,
    e: f64,
    e_rate: f64,
    dt: f64,
) -> (f64, IntegralState) {
    debug_assert!(dt > 0.0);
    let pd = infer(cfg, e, e_rate);
    match cfg.variant {
        FuzzyVariant::Pd => (pd, st),
        FuzzyVariant::PdI => {
            let sum = st.error_sum + e * dt;
            (pd + cfg.ki * sum, IntegralState { error_sum: sum })
        }
    }
}

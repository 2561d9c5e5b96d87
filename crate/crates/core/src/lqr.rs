//! State-feedback LQR on the reduced pitch model.

use crate::error::{invalid, Result};
use crate::numerics::{lqr_gain, Mat};
use crate::plant::{PitchState, StateSpace};

/// Quadratic cost weights `Q` (2×2) and `R` (1×1).
#[derive(Debug, Clone, PartialEq)]
pub struct LqrWeights {
    pub q: Mat,
    pub r: Mat,
}

impl LqrWeights {
    pub fn new(q: Mat, r: Mat) -> Result<Self> {
        if q.rows() != 2 || q.cols() != 2 {
            return Err(invalid("Q must be 2x2"));
        }
        if r.rows() != 1 || r.cols() != 1 {
            return Err(invalid("R must be 1x1"));
        }
        if !q.is_symmetric(1e-12 * q.max_abs().max(1.0)) {
            return Err(invalid("Q must be symmetric"));
        }
        let (q11, q12, q22) = (q[(0, 0)], q[(0, 1)], q[(1, 1)]);
        if q11 < 0.0 || q22 < 0.0 || q11 * q22 - q12 * q12 < -1e-12 * q.max_abs().powi(2) {
            return Err(invalid("Q must be positive semidefinite"));
        }
        if !(r[(0, 0)] > 0.0) {
            return Err(invalid(format!("R must be > 0, got {}", r[(0, 0)])));
        }
        Ok(Self { q, r })
    }

    /// Diagonal `Q = diag(q11, q22)` and scalar `R = r`.
    pub fn diagonal(q11: f64, q22: f64, r: f64) -> Result<Self> {
        Self::new(Mat::diag(&[q11, q22])?, Mat::scalar(r)?)
    }

    /// First published weight pair: `Q = diag(10, 100)`, `R = 0.001`.
    pub fn first() -> Self {
        Self::diagonal(10.0, 100.0, 0.001).expect("valid constant weights")
    }

    /// Second published weight pair: `Q = diag(100, 1000)`, `R = 0.0001`.
    pub fn second() -> Self {
        Self::diagonal(100.0, 1000.0, 0.0001).expect("valid constant weights")
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.q.scale(c), self.r.scale(c))
    }
}

/// Synthesized gain `K` (1×2) for `u = −K·(φ, φ̇)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LqrController {
    pub k: Mat,
    pub source_weights: LqrWeights,
}

impl LqrController {
    pub fn k1(&self) -> f64 {
        self.k[(0, 0)]
    }

    pub fn k2(&self) -> f64 {
        self.k[(0, 1)]
    }

    /// Closed-loop matrix `A − BK` for a given model.
    pub fn closed_loop(&self, ss: &StateSpace) -> Result<Mat> {
        Ok(&ss.a - &ss.b.mul(&self.k)?)
    }
}

pub fn synthesize(ss: &StateSpace, w: &LqrWeights) -> Result<LqrController> {
    ss.require_reduced()?;
    let k = lqr_gain(&ss.a, &ss.b, &w.q, &w.r)?;
    Ok(LqrController {
        k,
        source_weights: w.clone(),
    })
}

pub fn lqr_control(ctl: &LqrController, s: PitchState) -> f64 {
    -(ctl.k1() * s.phi + ctl.k2() * s.phi_dot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{char_poly, matrix_stability, routh_hurwitz, Stability};
    use crate::plant::{build_reduced, FormulaMode, PlantParams};

    fn robot() -> StateSpace {
        build_reduced(&PlantParams::robot(), FormulaMode::PaperLiteral).unwrap()
    }

    #[test]
    fn first_weights_stabilize_robot() {
        let ctl = synthesize(&robot(), &LqrWeights::first()).unwrap();
        let p = char_poly(&ctl.closed_loop(&robot()).unwrap()).unwrap();
        assert_eq!(routh_hurwitz(&p).unwrap(), Stability::Hurwitz);
    }

    #[test]
    fn second_weights_are_more_aggressive() {
        let ss = robot();
        let first = char_poly(
            &synthesize(&ss, &LqrWeights::first())
                .unwrap()
                .closed_loop(&ss)
                .unwrap(),
        )
        .unwrap();
        let second = char_poly(
            &synthesize(&ss, &LqrWeights::second())
                .unwrap()
                .closed_loop(&ss)
                .unwrap(),
        )
        .unwrap();
        assert!(second.coeff(0) > first.coeff(0), "{first} vs {second}");
        // recorded regression values
        assert!((first.coeff(0) - 521.016).abs() < 1e-2, "{first}");
        assert!((second.coeff(0) - 5208.29).abs() < 1e-1, "{second}");
    }

    #[test]
    fn scaled_weights_give_same_gain() {
        let base = synthesize(&robot(), &LqrWeights::first()).unwrap();
        let scaled = synthesize(&robot(), &LqrWeights::first().scaled(7.0).unwrap()).unwrap();
        assert!((&base.k - &scaled.k).max_abs() < 1e-10 * base.k.max_abs().max(1.0));
    }

    #[test]
    fn control_law() {
        let ctl = LqrController {
            k: Mat::from_rows(&[[1.0, 3f64.sqrt()]]).unwrap(),
            source_weights: LqrWeights::diagonal(1.0, 1.0, 1.0).unwrap(),
        };
        assert_eq!(lqr_control(&ctl, PitchState::new(0.0, 0.0)), 0.0);
        assert_eq!(lqr_control(&ctl, PitchState::new(1.0, 0.0)), -1.0);
        for phi in [-0.3, -1e-3, 2e-3, 0.4] {
            assert_eq!(
                lqr_control(&ctl, PitchState::new(phi, 0.0)).signum(),
                -phi.signum()
            );
        }
    }

    #[test]
    fn hurwitz_across_masses_and_modes() {
        for m in [0.05, 0.2, 0.5] {
            for mode in [FormulaMode::PaperLiteral, FormulaMode::Standard] {
                let ss = build_reduced(&PlantParams::robot().with_pendulum_mass(m), mode).unwrap();
                for w in [LqrWeights::first(), LqrWeights::second()] {
                    let ctl = synthesize(&ss, &w).unwrap();
                    assert!(matrix_stability(&ctl.closed_loop(&ss).unwrap())
                        .unwrap()
                        .is_hurwitz());
                }
            }
        }
    }

    #[test]
    fn weight_validation() {
        assert!(LqrWeights::diagonal(1.0, 1.0, 0.0).is_err());
        assert!(LqrWeights::diagonal(-1.0, 1.0, 1.0).is_err());
        let q = Mat::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(LqrWeights::new(q, Mat::scalar(1.0).unwrap()).is_err());
    }
}

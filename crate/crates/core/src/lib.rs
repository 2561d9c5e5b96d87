//! Controller bench for a two-wheeled self-balancing robot modelled as an
//! inverted pendulum.
//!
//! The crate builds the pitch linearizations from physical constants,
//! synthesizes PID, LQR and Mamdani fuzzy controllers, simulates them in
//! closed loop with a fixed-step RK4 integrator, and ranks the responses.
//!
//! ```
//! use balance_core::{lqr, plant, sim};
//!
//! let params = plant::PlantParams::robot();
//! let ss = plant::build_reduced(&params, plant::FormulaMode::PaperLiteral).unwrap();
//! let ctl = lqr::synthesize(&ss, &lqr::LqrWeights::first()).unwrap();
//! assert!(ctl.k1() > 0.0);
//!
//! let tr = sim::run(
//!     &params,
//!     plant::FormulaMode::PaperLiteral,
//!     &sim::ControllerConfig::Lqr(lqr::LqrWeights::first()),
//!     &sim::SimConfig { t_final: 1.0, ..Default::default() },
//! )
//! .unwrap();
//! assert!(!tr.diverged());
//! ```

// `!(x <= y)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csv;
pub mod error;
pub mod fuzzy;
pub mod lqr;
pub mod metrics;
pub mod numerics;
pub mod pid;
pub mod plant;
pub mod sim;
pub mod suite;

pub use error::{Error, Result};

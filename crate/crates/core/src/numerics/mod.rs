//! Dense numeric substrate: small matrices, Riccati and Lyapunov solvers,
//! Routh–Hurwitz stability and RK4 integration.

pub mod care;
pub mod mat;
pub mod poly;
pub mod rk4;

pub use care::{care_residual, lqr_gain, solve_care, solve_care_detailed, CareSolution};
pub use mat::{mat_mul, Mat};
pub use poly::{char_poly, matrix_stability, routh_hurwitz, Poly, Stability};
pub use rk4::rk4_step;

//! Continuous algebraic Riccati equation via Newton–Kleinman iteration.
//!
//! Given a stabilizing gain `K₀`, each iteration solves the Lyapunov equation
//!
//! ```text
//! (A − B Kᵢ)ᵀ Pᵢ + Pᵢ (A − B Kᵢ) = −(Q + Kᵢᵀ R Kᵢ)
//! ```
//!
//! and updates `Kᵢ₊₁ = R⁻¹ Bᵀ Pᵢ`. The Lyapunov equation is vectorized into
//! an n²×n² linear system (at most 16×16 here) and solved densely.

use super::mat::{gauss_solve, Mat};
use super::poly::matrix_stability;
use crate::error::{invalid, Error, Result};

/// Newton iteration budget.
pub const MAX_ITERATIONS: usize = 100;

/// Residual at which the iteration stops early.
pub const TARGET_RESIDUAL: f64 = 1e-12;

/// Largest residual accepted when the iteration stalls, relative to
/// `max(1, ‖Q‖∞)`.
pub const ACCEPT_RESIDUAL: f64 = 1e-9;

/// Stabilizing Riccati solution together with convergence diagnostics.
#[derive(Debug, Clone)]
pub struct CareSolution {
    pub p: Mat,
    pub residual: f64,
    pub iterations: usize,
}

/// `AᵀP + PA − PBR⁻¹BᵀP + Q`.
pub fn care_residual_matrix(a: &Mat, b: &Mat, q: &Mat, r: &Mat, p: &Mat) -> Result<Mat> {
    let at_p = a.transpose().mul(p)?;
    let p_a = p.mul(a)?;
    let bt_p = b.transpose().mul(p)?;
    let gain_term = bt_p.transpose().mul(&r.solve(&bt_p)?)?;
    Ok(&(&(&at_p + &p_a) - &gain_term) + q)
}

/// ‖AᵀP + PA − PBR⁻¹BᵀP + Q‖∞.
pub fn care_residual(a: &Mat, b: &Mat, q: &Mat, r: &Mat, p: &Mat) -> Result<f64> {
    Ok(care_residual_matrix(a, b, q, r, p)?.norm_inf())
}

/// Cholesky test for positive definiteness of a symmetric matrix.
fn is_positive_definite(m: &Mat) -> bool {
    let n = m.rows();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum();
            if i == j {
                let d = m[(i, i)] - s;
                if !(d > 0.0) {
                    return false;
                }
                l[i * n + i] = d.sqrt();
            } else {
                l[i * n + j] = (m[(i, j)] - s) / l[j * n + j];
            }
        }
    }
    true
}

fn check_inputs(a: &Mat, b: &Mat, q: &Mat, r: &Mat) -> Result<()> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::Dimension("A must be square".into()));
    }
    if b.rows() != n {
        return Err(Error::Dimension(format!("B must have {n} rows")));
    }
    let m = b.cols();
    if q.rows() != n || q.cols() != n {
        return Err(Error::Dimension(format!("Q must be {n}x{n}")));
    }
    if r.rows() != m || r.cols() != m {
        return Err(Error::Dimension(format!("R must be {m}x{m}")));
    }
    let sym_tol = |x: &Mat| 1e-12 * x.max_abs().max(1.0);
    if !q.is_symmetric(sym_tol(q)) {
        return Err(invalid("Q must be symmetric"));
    }
    // PSD: Q + εI must be positive definite for a tiny ε.
    let shift = 1e-12 * q.max_abs().max(1.0);
    if !is_positive_definite(&(q + &Mat::identity(n).scale(shift))) {
        return Err(invalid("Q must be positive semidefinite"));
    }
    if !r.is_symmetric(sym_tol(r)) || !is_positive_definite(r) {
        return Err(invalid("R must be symmetric positive definite"));
    }
    Ok(())
}

/// Solves `XᵀP + PX = −C` for symmetric `C` by vectorization.
pub fn solve_lyapunov(x: &Mat, c: &Mat) -> Result<Mat> {
    let n = x.rows();
    let nn = n * n;
    // vec is row-major: index (i, j) -> i*n + j.
    // (XᵀP)_{ij} = Σ_k X_{ki} P_{kj};  (PX)_{ij} = Σ_k P_{ik} X_{kj}.
    let mut sys = vec![0.0; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                sys[row * nn + k * n + j] += x[(k, i)];
                sys[row * nn + i * n + k] += x[(k, j)];
            }
        }
    }
    let mut rhs: Vec<f64> = c.as_slice().iter().map(|v| -v).collect();
    let sys_copy = sys.clone();
    gauss_solve(&mut sys, &mut rhs, nn, 1)?;
    // one round of iterative refinement
    let mut correction: Vec<f64> = (0..nn)
        .map(|row| {
            let ax: f64 = (0..nn).map(|col| sys_copy[row * nn + col] * rhs[col]).sum();
            -c.as_slice()[row] - ax
        })
        .collect();
    let mut sys2 = sys_copy;
    gauss_solve(&mut sys2, &mut correction, nn, 1)?;
    let sol: Vec<f64> = rhs.iter().zip(&correction).map(|(a, b)| a + b).collect();
    Ok(Mat::new(n, n, sol)?.symmetrize())
}

/// Geometric magnitudes tried for each gain entry during the seed search.
const SEED_MAGNITUDES: [f64; 8] = [0.01, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4, 1e5];

/// Finds a gain `K` (m×n) with `A − BK` Hurwitz.
///
/// Returns zero when A is already Hurwitz. Otherwise every single-input
/// candidate whose entries are drawn from `{0, ±SEED_MAGNITUDES}` is tried in
/// order of increasing size, and the first one that passes Routh–Hurwitz is
/// kept. For multi-input systems, or when the grid finds nothing, a Bass-style
/// shifted-Lyapunov gain is used instead.
pub fn stabilizing_gain(a: &Mat, b: &Mat) -> Result<Mat> {
    let n = a.rows();
    let m = b.cols();
    if matrix_stability(a)?.is_hurwitz() {
        return Ok(Mat::zeros(m, n));
    }
    if m == 1 {
        if let Some(k) = grid_seed(a, b)? {
            return Ok(k);
        }
    }
    if let Some(k) = bass_seed(a, b)? {
        return Ok(k);
    }
    Err(Error::SolverFailure {
        iterations: 0,
        best_residual: f64::INFINITY,
        reason: "no stabilizing initial gain found; (A, B) may not be stabilizable".into(),
    })
}

fn grid_seed(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    let n = a.rows();
    let mut values = vec![0.0];
    for v in SEED_MAGNITUDES {
        values.push(v);
        values.push(-v);
    }
    let total = values.len().pow(n as u32);
    let mut candidates: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let v = values[idx % values.len()];
                    idx /= values.len();
                    v
                })
                .collect()
        })
        .collect();
    candidates.sort_by(|x, y| {
        let nx = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let ny = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
        nx.total_cmp(&ny)
    });
    for cand in candidates {
        let k = Mat::new(1, n, cand)?;
        let closed = a - &b.mul(&k)?;
        if matrix_stability(&closed)?.is_hurwitz() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `K = Bᵀ X⁻¹` where `(A + βI) X + X (A + βI)ᵀ = 2BBᵀ` and `β > ‖A‖∞`.
fn bass_seed(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    let n = a.rows();
    let beta = a.norm_inf() + 1.0;
    let shifted = a + &Mat::identity(n).scale(beta);
    let bbt = b.mul(&b.transpose())?.scale(2.0);
    // solve_lyapunov solves Yᵀ X + X Y = −C; take Y = −(A + βI)ᵀ.
    let y = (-&shifted).transpose();
    let x = match solve_lyapunov(&y, &bbt) {
        Ok(x) => x,
        Err(Error::Singular { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let x_inv = match x.inverse() {
        Ok(v) => v,
        Err(Error::Singular { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let k = b.transpose().mul(&x_inv)?;
    let closed = a - &b.mul(&k)?;
    Ok(matrix_stability(&closed)?.is_hurwitz().then_some(k))
}

/// Stabilizing solution `P` of `AᵀP + PA − PBR⁻¹BᵀP + Q = 0`.
pub fn solve_care(a: &Mat, b: &Mat, q: &Mat, r: &Mat) -> Result<Mat> {
    Ok(solve_care_detailed(a, b, q, r)?.p)
}

/// Like [`solve_care`] but also reports the residual and iteration count.
pub fn solve_care_detailed(a: &Mat, b: &Mat, q: &Mat, r: &Mat) -> Result<CareSolution> {
    check_inputs(a, b, q, r)?;
    let accept = ACCEPT_RESIDUAL * q.norm_inf().max(1.0);
    let mut k = stabilizing_gain(a, b)?;
    let mut best: Option<CareSolution> = None;
    let mut stalled = 0;

    for iteration in 1..=MAX_ITERATIONS {
        let closed = a - &b.mul(&k)?;
        let kt_r_k = k.transpose().mul(&r.mul(&k)?)?;
        let p = match solve_lyapunov(&closed, &(q + &kt_r_k)) {
            Ok(p) => p,
            Err(Error::Singular { .. }) => break,
            Err(e) => return Err(e),
        };
        let residual = care_residual(a, b, q, r, &p)?;
        if !residual.is_finite() {
            break;
        }
        let progress = best.as_ref().is_none_or(|s| residual < 0.5 * s.residual);
        if !progress && best.as_ref().is_some_and(|s| s.residual <= accept) {
            stalled += 1;
        } else if progress {
            stalled = 0;
        }
        if best.as_ref().is_none_or(|s| residual < s.residual) {
            best = Some(CareSolution {
                p: p.clone(),
                residual,
                iterations: iteration,
            });
        }
        if residual < TARGET_RESIDUAL || stalled >= 3 {
            break;
        }
        k = r.solve(&b.transpose().mul(&p)?)?;
    }

    match best {
        Some(sol) if sol.residual <= accept => Ok(sol),
        Some(sol) => Err(Error::SolverFailure {
            iterations: sol.iterations,
            best_residual: sol.residual,
            reason: "residual did not reach tolerance".into(),
        }),
        None => Err(Error::SolverFailure {
            iterations: 0,
            best_residual: f64::INFINITY,
            reason: "Lyapunov step failed".into(),
        }),
    }
}

/// Optimal state-feedback gain `K = R⁻¹BᵀP` for `u = −Kx`.
pub fn lqr_gain(a: &Mat, b: &Mat, q: &Mat, r: &Mat) -> Result<Mat> {
    let p = solve_care(a, b, q, r)?;
    let k = r.solve(&b.transpose().mul(&p)?)?;
    let closed = a - &b.mul(&k)?;
    if !matrix_stability(&closed)?.is_hurwitz() {
        return Err(Error::SolverFailure {
            iterations: 0,
            best_residual: care_residual(a, b, q, r, &p)?,
            reason: "closed loop A - BK is not Hurwitz".into(),
        });
    }
    Ok(k)
}

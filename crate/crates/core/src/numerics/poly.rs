//! Characteristic polynomials and the Routh–Hurwitz test.

use std::fmt;

use super::mat::Mat;
use crate::error::{invalid, Result};

/// Highest polynomial degree handled here.
pub const MAX_DEGREE: usize = 4;

/// Real polynomial with coefficients stored highest degree first.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > MAX_DEGREE + 1 {
            return Err(invalid(format!(
                "polynomial must have 1..={} coefficients, got {}",
                MAX_DEGREE + 1,
                coeffs.len()
            )));
        }
        if coeffs[0] == 0.0 {
            return Err(invalid("leading coefficient must be non-zero"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("polynomial coefficients must be finite"));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients, highest degree first.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `s^power`.
    pub fn coeff(&self, power: usize) -> f64 {
        let d = self.degree();
        if power > d {
            0.0
        } else {
            self.coeffs[d - power]
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc * s + c)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            let power = d - i;
            if *c == 0.0 && !(first && power == 0) {
                continue;
            }
            let sign = if *c < 0.0 { "-" } else { "+" };
            if first {
                if *c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            let show_mag = power == 0 || mag != 1.0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match power {
                0 => {}
                1 => write!(f, "{}s", if show_mag { "·" } else { "" })?,
                _ => write!(f, "{}s^{power}", if show_mag { "·" } else { "" })?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Outcome of a Routh–Hurwitz test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// Every root has strictly negative real part.
    Hurwitz,
    /// At least one root on or right of the imaginary axis.
    NotHurwitz,
}

impl Stability {
    pub fn is_hurwitz(self) -> bool {
        self == Stability::Hurwitz
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Hurwitz => "Hurwitz",
            Stability::NotHurwitz => "not Hurwitz",
        })
    }
}

fn det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Monic characteristic polynomial `det(sI − A)` of a square matrix.
///
/// The coefficient of `s^(n−k)` is `(−1)^k` times the sum of all k×k
/// principal minors, each evaluated by cofactor expansion.
pub fn char_poly(a: &Mat) -> Result<Poly> {
    if !a.is_square() {
        return Err(invalid("characteristic polynomial needs a square matrix"));
    }
    let n = a.rows();
    if n > MAX_DEGREE {
        return Err(invalid(format!("matrix order {n} exceeds {MAX_DEGREE}")));
    }
    let mut coeffs = vec![1.0];
    for k in 1..=n {
        let mut sum = 0.0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let minor: Vec<Vec<f64>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| a[(i, j)]).collect())
                .collect();
            sum += det(&minor);
        }
        coeffs.push(if k % 2 == 0 { sum } else { -sum });
    }
    Poly::new(coeffs)
}

/// Exact Routh–Hurwitz test for degrees 1 through 4.
///
/// After normalizing the leading coefficient to be positive, the polynomial
/// is Hurwitz iff every coefficient is strictly positive and the leading
/// Hurwitz determinants are positive: `a₂a₁ > a₃a₀` for cubics and
/// `a₃a₂a₁ > a₃²a₀ + a₄a₁²` for quartics (subscripts are powers of s).
pub fn routh_hurwitz(p: &Poly) -> Result<Stability> {
    let d = p.degree();
    if d == 0 || d > MAX_DEGREE {
        return Err(invalid(format!(
            "Routh-Hurwitz test needs degree 1..={MAX_DEGREE}, got {d}"
        )));
    }
    let lead = p.coeff(d);
    if lead == 0.0 {
        return Err(invalid("leading coefficient must be non-zero"));
    }
    let sign = lead.signum();
    let a = |k: usize| sign * p.coeff(k);
    if (0..=d).any(|k| !(a(k) > 0.0)) {
        return Ok(Stability::NotHurwitz);
    }
    let ok = match d {
        1 | 2 => true,
        3 => a(2) * a(1) > a(3) * a(0),
        4 => a(3) * a(2) * a(1) > a(3) * a(3) * a(0) + a(4) * a(1) * a(1),
        _ => unreachable!(),
    };
    Ok(if ok {
        Stability::Hurwitz
    } else {
        Stability::NotHurwitz
    })
}

/// Routh–Hurwitz verdict for the characteristic polynomial of `a`.
pub fn matrix_stability(a: &Mat) -> Result<Stability> {
    routh_hurwitz(&char_poly(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn char_poly_of_companion_form() {
        let a = Mat::from_rows(&[[0.0, 1.0], [-1.0, -SQRT3]]).unwrap();
        let p = char_poly(&a).unwrap();
        assert!(close(p.coeffs(), &[1.0, SQRT3, 1.0], 1e-15));
    }

    #[test]
    fn char_poly_of_zero_matrix() {
        let p = char_poly(&Mat::zeros(2, 2)).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn char_poly_of_diagonal() {
        let p = char_poly(&Mat::diag(&[-1.0, -2.0]).unwrap()).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 3.0, 2.0]);
    }

    #[test]
    fn char_poly_4x4_companion_recovers_coefficients() {
        // companion matrix of s^4 + 2s^3 + 3s^2 + 4s + 5
        let a = Mat::from_rows(&[
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-5.0, -4.0, -3.0, -2.0],
        ])
        .unwrap();
        let p = char_poly(&a).unwrap();
        assert!(close(p.coeffs(), &[1.0, 2.0, 3.0, 4.0, 5.0], 1e-12));
    }

    #[test]
    fn char_poly_rejects_non_square() {
        assert!(char_poly(&Mat::zeros(2, 3)).is_err());
    }

    #[test]
    fn routh_examples() {
        let p = Poly::new(vec![1.0, SQRT3, 1.0]).unwrap();
        assert_eq!(routh_hurwitz(&p).unwrap(), Stability::Hurwitz);
        let p = Poly::new(vec![1.0, 0.0, -14.06]).unwrap();
        assert_eq!(routh_hurwitz(&p).unwrap(), Stability::NotHurwitz);
        let p = Poly::new(vec![1.0, 0.2604, 246.3, 4.166]).unwrap();
        assert_eq!(routh_hurwitz(&p).unwrap(), Stability::Hurwitz);
    }

    #[test]
    fn routh_cubic_boundary() {
        // (s+1)(s^2+1) = s^3 + s^2 + s + 1 has roots on the imaginary axis
        let p = Poly::new(vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(routh_hurwitz(&p).unwrap(), Stability::NotHurwitz);
    }

    #[test]
    fn routh_quartic() {
        // (s+1)(s+2)(s+3)(s+4)
        let p = Poly::new(vec![1.0, 10.0, 35.0, 50.0, 24.0]).unwrap();
        assert_eq!(routh_hurwitz(&p).unwrap(), Stability::Hurwitz);
        // (s^2 - s + 5)(s^2 + 6s + 5): all coefficients positive, unstable pair
        let p = Poly::new(vec![1.0, 5.0, 4.0, 25.0, 25.0]).unwrap();
        assert_eq!(routh_hurwitz(&p).unwrap(), Stability::NotHurwitz);
    }

    #[test]
    fn negative_leading_coefficient_is_normalized() {
        let p = Poly::new(vec![-1.0, -3.0, -2.0]).unwrap();
        assert_eq!(routh_hurwitz(&p).unwrap(), Stability::Hurwitz);
    }

    #[test]
    fn zero_leading_coefficient_rejected() {
        assert!(Poly::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(routh_hurwitz(&Poly::new(vec![3.0]).unwrap()).is_err());
    }

    #[test]
    fn display_reads_naturally() {
        let p = Poly::new(vec![1.0, 3.0, -2.0]).unwrap();
        assert_eq!(p.to_string(), "s^2 + 3·s - 2");
    }
}

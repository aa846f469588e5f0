use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Coefficients below this magnitude are dropped after arithmetic.
pub const COEFF_EPS: f64 = 1e-14;

/// Element of `C[Z] = C[z, z^-1]`, stored densely from the lowest exponent.
///
/// Canonical form: both the first and last stored coefficients are nonzero
/// (above [`COEFF_EPS`]); the zero polynomial stores nothing with `low == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<Complex64>,
}

impl Default for LaurentPoly {
    fn default() -> Self {
        LaurentPoly::zero()
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_coeffs(0, vec![c])
    }

    pub fn real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    /// `c * z^k`
    pub fn monomial(c: Complex64, k: i64) -> Self {
        Self::from_coeffs(k, vec![c])
    }

    /// `sum_j coeffs[j] z^(low + j)`
    pub fn from_coeffs(low: i64, coeffs: Vec<Complex64>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.canonicalize();
        p
    }

    pub fn from_real(low: i64, coeffs: &[f64]) -> Self {
        Self::from_coeffs(low, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (k, c) in terms {
            coeffs[(k - lo) as usize] += c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    fn canonicalize(&mut self) {
        for c in self.coeffs.iter_mut() {
            if c.norm() < COEFF_EPS {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        while self.coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn min_exp(&self) -> i64 {
        self.low
    }

    pub fn max_exp(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// `max_exp - min_exp`, or 0 for the zero polynomial.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.low || k > self.max_exp() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k - self.low) as usize]
    }

    /// Coefficients from `min_exp` to `max_exp`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(move |(j, &c)| (self.low + j as i64, c))
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.len() == 1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        // Horner on the polynomial part, then the z^low shift.
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.low as i32)
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// `p(s z)` for a real `s > 0`: the coefficient of `z^k` picks up `s^k`.
    pub fn dilate(&self, s: f64) -> Self {
        Self::from_coeffs(
            self.low,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| c * s.powi((self.low + j as i64) as i32))
                .collect(),
        )
    }

    /// The ring involution: `z^k -> z^-k` with conjugated coefficients.
    pub fn involute(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        LaurentPoly { low: -self.max_exp(), coeffs }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Sup-norm of the coefficient difference.
    pub fn distance(&self, other: &LaurentPoly) -> f64 {
        let lo = self.low.min(other.low);
        let hi = self.max_exp().max(other.max_exp());
        (lo..=hi).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &LaurentPoly, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Sum of coefficient magnitudes; bounds `|p(z)|` on the unit circle.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Coefficients rounded to integers if every one is within `tol` of a real integer.
    pub fn integer_coeffs(&self, tol: f64) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| {
                let r = c.re.round();
                ((c.re - r).abs() <= tol && c.im.abs() <= tol).then_some(r as i64)
            })
            .collect()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.max_exp().max(rhs.max_exp());
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        LaurentPoly::from_coeffs(lo, coeffs)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_coeffs(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let coeff = if c.im == 0.0 { format!("{}", c.re) } else { format!("({})", c) };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}*z")?,
                _ => write!(f, "{coeff}*z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_form_strips_zeros() {
        let p = LaurentPoly::from_real(-2, &[0.0, 0.0, 1.0, 2.0, 0.0]);
        assert_eq!(p.min_exp(), 0);
        assert_eq!(p.max_exp(), 1);
        assert_eq!(p.span(), 1);
        assert!(LaurentPoly::from_real(3, &[0.0, 1e-16]).is_zero());
    }

    #[test]
    fn multiplication_adds_exponents() {
        let a = LaurentPoly::from_real(-1, &[1.0, 1.0]); // z^-1 + 1
        let b = LaurentPoly::from_real(0, &[-1.0, 1.0]); // z - 1
        let p = &a * &b; // -z^-1 + z
        assert_eq!(p, LaurentPoly::from_real(-1, &[-1.0, 0.0, 1.0]));
    }

    #[test]
    fn involution_conjugates_and_mirrors() {
        let p = LaurentPoly::from_coeffs(1, vec![c(0.0, 2.0), c(3.0, 0.0)]);
        let q = p.involute();
        assert_eq!(q.min_exp(), -2);
        assert_eq!(q.coeff(-1), c(0.0, -2.0));
        assert_eq!(q.coeff(-2), c(3.0, 0.0));
        assert_eq!(q.involute(), p);
    }

    #[test]
    fn dilate_matches_evaluation() {
        let p = LaurentPoly::from_real(-1, &[2.0, -1.0, 0.5]);
        let z = Complex64::from_polar(1.0, 0.7);
        let s = 1.7;
        assert!((p.dilate(s).eval(z) - p.eval(z * s)).norm() < 1e-12);
    }

    #[test]
    fn integer_rounding() {
        let p = LaurentPoly::from_real(0, &[1.0 + 1e-12, -3.0, 1.0]);
        assert_eq!(p.integer_coeffs(1e-9), Some(vec![1, -3, 1]));
        assert_eq!(LaurentPoly::real(0.5).integer_coeffs(1e-9), None);
    }
}

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::laurent::COEFF_EPS;
use super::word::GroupWord;

/// Finite complex-linear combination of free-group words, an element of `C[F]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RingElement {
    terms: BTreeMap<GroupWord, Complex64>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn one() -> Self {
        Self::word(GroupWord::identity())
    }

    pub fn word(w: GroupWord) -> Self {
        Self::term(w, Complex64::new(1.0, 0.0))
    }

    pub fn term(w: GroupWord, c: Complex64) -> Self {
        let mut e = RingElement::zero();
        e.add_term(w, c);
        e
    }

    pub fn generator(gen: usize) -> Self {
        Self::word(GroupWord::generator(gen))
    }

    pub fn from_terms<I: IntoIterator<Item = (GroupWord, Complex64)>>(terms: I) -> Self {
        let mut e = RingElement::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: GroupWord, c: Complex64) {
        match self.terms.entry(w) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().norm() < COEFF_EPS {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if c.norm() >= COEFF_EPS {
                    v.insert(c);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &GroupWord) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_default()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, &a)| (w.clone(), a * c)))
    }

    /// Conjugate each coefficient and invert each word.
    pub fn involve(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.inverse(), c.conj())))
    }

    pub fn coefficient_norms(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.terms.values().map(|c| c.norm()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Sup-norm of the coefficient difference.
    pub fn distance(&self, other: &RingElement) -> f64 {
        (self - other).terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (w, &c) in rhs.terms.iter() {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self + &(-rhs)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (a, &ca) in self.terms.iter() {
            for (b, &cb) in rhs.terms.iter() {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(self, rhs: RingElement) -> RingElement {
        &self + &rhs
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(self, rhs: RingElement) -> RingElement {
        &self - &rhs
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        &self * &rhs
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::word::Letter;

    #[test]
    fn involution_of_imaginary_multiple() {
        let a = RingElement::term(GroupWord::generator(0), Complex64::new(0.0, 2.0));
        let expected = RingElement::term(GroupWord::power(0, -1), Complex64::new(0.0, -2.0));
        assert_eq!(a.involve(), expected);
    }

    #[test]
    fn involution_fixes_identity() {
        assert_eq!(RingElement::one().involve(), RingElement::one());
    }

    #[test]
    fn involution_of_sum() {
        let a = &RingElement::generator(0) + &RingElement::generator(1);
        let b = &RingElement::word(GroupWord::power(0, -1)) + &RingElement::word(GroupWord::power(1, -1));
        assert_eq!(a.involve(), b);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = RingElement::generator(0);
        assert!((&x - &x).is_zero());
        let xy = GroupWord::reduce([Letter::new(0, 1), Letter::new(1, 1)]);
        let e = &RingElement::word(xy.clone()) + &RingElement::generator(2);
        let f = &e - &RingElement::word(xy);
        assert_eq!(f, RingElement::generator(2));
    }
}

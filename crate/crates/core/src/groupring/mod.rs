//! Free-group words, the group ring `C[F]`, Laurent polynomials `C[Z]` and the
//! monomial specialization `g -> t^phi(g) z^phi(g)` between them.

mod element;
mod laurent;
mod matrix;
mod word;

pub use element::RingElement;
pub use laurent::{LaurentPoly, COEFF_EPS};
pub use matrix::{LaurentMatrix, Matrix, Ring, RingMatrix};
pub use word::{GroupWord, Letter};

use num_complex::Complex64;

/// A homomorphism `phi: F -> Z`, given by the image of each free generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianizationMap {
    images: Vec<i64>,
}

impl AbelianizationMap {
    pub fn new(images: Vec<i64>) -> Self {
        AbelianizationMap { images }
    }

    /// Every one of `n` generators sent to 1 (the meridian map of a knot group).
    pub fn uniform(n: usize) -> Self {
        AbelianizationMap { images: vec![1; n] }
    }

    pub fn images(&self) -> &[i64] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|&k| k == 0)
    }

    /// Generators beyond the stored list map to 0.
    pub fn apply(&self, w: &GroupWord) -> i64 {
        w.weighted_exponent(&self.images)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecializeMode {
    /// `g -> t^phi(g) z^phi(g)`
    WithZ,
    /// `g -> t^phi(g)`, i.e. the `WithZ` image evaluated at `z = 1`.
    ScalarOnly,
}

pub fn specialize(a: &RingElement, phi: &AbelianizationMap, t: f64, mode: SpecializeMode) -> LaurentPoly {
    debug_assert!(t > 0.0);
    LaurentPoly::from_terms(a.terms().map(|(w, &c)| {
        let k = phi.apply(w);
        let exp = match mode {
            SpecializeMode::WithZ => k,
            SpecializeMode::ScalarOnly => 0,
        };
        (exp, c * t.powi(k as i32))
    }))
}

pub fn matrix_specialize(m: &RingMatrix, phi: &AbelianizationMap, t: f64) -> LaurentMatrix {
    m.map(|a| specialize(a, phi, t, SpecializeMode::WithZ))
}

/// The one-dimensional monomial representation `g -> t^phi(g) z^phi(g)` of a free group.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialRepresentation {
    pub phi: AbelianizationMap,
    pub t: f64,
}

impl MonomialRepresentation {
    pub fn new(phi: AbelianizationMap, t: f64) -> Self {
        MonomialRepresentation { phi, t }
    }

    pub fn image(&self, g: &GroupWord) -> LaurentPoly {
        let k = self.phi.apply(g);
        LaurentPoly::monomial(Complex64::new(self.t.powi(k as i32), 0.0), k)
    }

    pub fn image_of(&self, a: &RingElement) -> LaurentPoly {
        specialize(a, &self.phi, self.t, SpecializeMode::WithZ)
    }
}

//! Knot ingestion (braid words and PD codes), Wirtinger presentations, Fox
//! calculus, Alexander polynomials and the presentation chain complex.

mod braid;
mod pd;
mod wirtinger;

pub use braid::{parse_braid, BraidWord};
pub use pd::{braid_to_pd, parse_pd, OrientedCrossing, PDCode};
pub use wirtinger::{fox_derivative, wirtinger, WirtingerPresentation};

use num_complex::Complex64;

use crate::chain::BasedChainComplex;
use crate::error::{Error, Result};
use crate::fkdet::laurent_det;
use crate::groupring::{matrix_specialize, LaurentPoly, Matrix, MonomialRepresentation};

/// `0 -> C[Z]^(n-1) -> C[Z]^n -> C[Z] -> 0` with the specialized Fox matrix as
/// `A_2` and the column `(gamma_t(x_i) - 1)` as `A_1`.
pub fn presentation_complex(p: &WirtingerPresentation, t: f64) -> Result<BasedChainComplex> {
    let n = p.generators();
    let rep = MonomialRepresentation::new(p.phi().clone(), t);
    let a2 = matrix_specialize(&p.fox_matrix(), p.phi(), t);
    let a1 = Matrix::from_fn(n, 1, |i, _| &rep.image(&crate::groupring::GroupWord::generator(i)) - &LaurentPoly::one());
    BasedChainComplex::new(vec![1, n, p.relators().len()], vec![a1, a2], t)
}

/// Shift to lowest exponent 0, make the leading coefficient positive and snap
/// near-integer coefficients.
pub fn normalize_alexander(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    let mut q = p.shift(-p.min_exp());
    let lead = q.leading();
    if lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0) {
        q = -q;
    }
    let snapped: Vec<Complex64> = q
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.re.round();
            if (c.re - r).abs() < 1e-8 && c.im.abs() < 1e-8 {
                Complex64::new(r, 0.0)
            } else {
                *c
            }
        })
        .collect();
    LaurentPoly::from_coeffs(0, snapped)
}

/// Determinant of the Fox matrix at `t = 1` with column `column` deleted, unnormalized.
pub fn alexander_minor(p: &WirtingerPresentation, column: usize) -> Result<LaurentPoly> {
    if column >= p.generators() {
        return Err(Error::InvalidArgument(format!("no generator column {column}")));
    }
    let fox = matrix_specialize(&p.fox_matrix(), p.phi(), 1.0);
    if fox.rows() + 1 != fox.cols() {
        return Err(Error::Degenerate(format!(
            "{} relators for {} generators, deficiency one needed",
            fox.rows(),
            fox.cols()
        )));
    }
    laurent_det(&fox.without_col(column), None)
}

/// Normalized Alexander polynomial from the meridian-deleted Fox matrix.
pub fn alexander_polynomial(p: &WirtingerPresentation) -> Result<LaurentPoly> {
    let d = alexander_minor(p, p.meridian())?;
    if d.is_zero() {
        return Err(Error::Degenerate("Alexander determinant vanishes".into()));
    }
    Ok(normalize_alexander(&d))
}

#[derive(Debug, Clone, PartialEq)]
pub enum KnotSource {
    Braid(BraidWord),
    Pd(PDCode),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnotRecord {
    pub name: String,
    pub source: KnotSource,
    /// Explicit genus; fibered knots may leave it to be read off `Delta`.
    pub genus: Option<u32>,
    pub fibered: Option<bool>,
}

impl KnotRecord {
    pub fn from_braid(name: &str, b: BraidWord) -> Self {
        KnotRecord { name: name.into(), source: KnotSource::Braid(b), genus: None, fibered: None }
    }

    pub fn from_pd(name: &str, pd: PDCode) -> Self {
        KnotRecord { name: name.into(), source: KnotSource::Pd(pd), genus: None, fibered: None }
    }

    pub fn pd(&self) -> Result<PDCode> {
        match &self.source {
            KnotSource::Braid(b) => braid_to_pd(b),
            KnotSource::Pd(p) => Ok(p.clone()),
        }
    }

    pub fn presentation(&self) -> Result<WirtingerPresentation> {
        wirtinger(&self.pd()?)
    }

    pub fn alexander(&self) -> Result<LaurentPoly> {
        alexander_polynomial(&self.presentation()?)
    }

    /// Explicit genus, or half the span of `Delta` for a fibered knot.
    pub fn genus(&self) -> Result<Option<u32>> {
        let derived = match self.fibered {
            Some(true) => Some(self.alexander()?.span() as u32 / 2),
            _ => None,
        };
        match (self.genus, derived) {
            (Some(g), Some(d)) if g != d => Err(Error::InvalidArgument(format!(
                "{}: genus {g} disagrees with span(Delta)/2 = {d} for a fibered knot",
                self.name
            ))),
            (Some(g), _) => Ok(Some(g)),
            (None, d) => Ok(d),
        }
    }
}

const BUNDLED: &[(&str, &[&str], &str)] = &[
    ("unknot", &["0_1"], "strands=1;"),
    ("trefoil", &["3_1"], "strands=2; s1 s1 s1"),
    ("figure-eight", &["4_1", "figure8"], "strands=3; s1 s2^-1 s1 s2^-1"),
];

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _, _)| *n).collect()
}

/// A bundled knot by name or alias. All bundled knots are fibered.
pub fn bundled(name: &str) -> Option<KnotRecord> {
    let key = name.trim().to_ascii_lowercase();
    BUNDLED.iter().find(|(n, aliases, _)| *n == key || aliases.contains(&key.as_str())).map(|(n, _, braid)| {
        let mut rec = KnotRecord::from_braid(n, parse_braid(braid).expect("bundled braid parses"));
        rec.fibered = Some(true);
        rec
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{l2_betti_generic, torsion_with, TorsionMethod};

    fn lp(c: &[f64]) -> LaurentPoly {
        LaurentPoly::from_real(0, c)
    }

    #[test]
    fn trefoil_alexander() {
        assert_eq!(bundled("trefoil").unwrap().alexander().unwrap(), lp(&[1.0, -1.0, 1.0]));
    }

    #[test]
    fn figure_eight_alexander() {
        assert_eq!(bundled("4_1").unwrap().alexander().unwrap(), lp(&[1.0, -3.0, 1.0]));
    }

    #[test]
    fn unknot_alexander() {
        assert_eq!(bundled("unknot").unwrap().alexander().unwrap(), LaurentPoly::one());
        let curl = KnotRecord::from_braid("curl", parse_braid("s1").unwrap());
        assert_eq!(curl.alexander().unwrap(), LaurentPoly::one());
    }

    #[test]
    fn trefoil_from_pd_text() {
        let rec = KnotRecord::from_pd("t", parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]").unwrap());
        assert_eq!(rec.alexander().unwrap(), lp(&[1.0, -1.0, 1.0]));
    }

    #[test]
    fn bundled_genus() {
        assert_eq!(bundled("trefoil").unwrap().genus().unwrap(), Some(1));
        assert_eq!(bundled("figure-eight").unwrap().genus().unwrap(), Some(1));
        let mut wrong = bundled("trefoil").unwrap();
        wrong.genus = Some(2);
        assert!(wrong.genus().is_err());
    }

    #[test]
    fn column_deletion_changes_only_normalization() {
        let p = bundled("figure-eight").unwrap().presentation().unwrap();
        let base = alexander_polynomial(&p).unwrap();
        for c in 0..p.generators() {
            assert_eq!(normalize_alexander(&alexander_minor(&p, c).unwrap()), base);
        }
    }

    #[test]
    fn unknot_complex() {
        let p = bundled("unknot").unwrap().presentation().unwrap();
        let c = presentation_complex(&p, 2.0).unwrap();
        assert_eq!(c.ranks(), &[1, 1, 0]);
        assert_eq!(c.boundary(1).get(0, 0), &LaurentPoly::from_real(0, &[-1.0, 2.0]));
        let v = torsion_with(&c, &TorsionMethod::Exact).unwrap().value;
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn trefoil_complex_is_a_complex() {
        let p = bundled("trefoil").unwrap().presentation().unwrap();
        for t in [0.5, 1.0, 2.0] {
            let c = presentation_complex(&p, t).unwrap();
            let prod = c.boundary(2).mul(c.boundary(1)).unwrap();
            assert!(prod.max_entry_norm() <= 1e-12);
            assert_eq!(l2_betti_generic(&c).unwrap(), vec![0, 0, 0]);
        }
    }

    #[test]
    fn degenerate_presentation() {
        let p = WirtingerPresentation::new(2, vec![]);
        assert!(matches!(alexander_polynomial(&p), Err(Error::Degenerate(_))));
    }
}

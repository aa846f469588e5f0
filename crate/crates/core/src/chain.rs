//! Based chain complexes over `C[Z]`, their L2-torsion, Euler-lift decorations
//! and the dual complex.
//!
//! Conventions: the complex is `0 -> C_m -> ... -> C_1 -> C_0 -> 0` with
//! `C_i = C[Z]^{n_i}`, and `A_i` is the `n_i x n_{i-1}` matrix of the boundary
//! acting on row vectors from the right. `A_{i+1} * A_i = 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fkdet::{fk_det, fk_det_gram, generic_rank, FkResult, QuadratureSettings};
use crate::groupring::{GroupWord, LaurentMatrix, LaurentPoly, Matrix, MonomialRepresentation};

/// Residual bound for `A_{i+1} A_i = 0`, relative to the entry scale.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Acting on an Euler lift by `z^k` multiplies the torsion function by
/// `t^(EULER_EPSILON * k)`.
///
/// The action on a degree-`i` cell is by `g^((-1)^i)`, so the sign is the same
/// in every degree. Pinned by the `act_euler_fixture` test.
pub const EULER_EPSILON: i64 = 1;

/// A group-ring monomial `sign * z^power`, used as a basis decoration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub sign: i8,
    pub power: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { sign: 1, power: 0 };

    pub fn new(sign: i8, power: i64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Monomial { sign, power }
    }

    pub fn z(power: i64) -> Self {
        Monomial { sign: 1, power }
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial { sign: self.sign * other.sign, power: self.power + other.power }
    }

    pub fn inverse(self) -> Monomial {
        Monomial { sign: self.sign, power: -self.power }
    }

    /// Image under `z^k -> t^k z^k`.
    pub fn image(self, t: f64) -> LaurentPoly {
        LaurentPoly::monomial(Complex64::new(self.sign as f64 * t.powi(self.power as i32), 0.0), self.power)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasedChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<LaurentMatrix>,
    decorations: Vec<Vec<Monomial>>,
    /// Parameter of the monomial representation the boundaries were specialized with.
    t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionValue {
    pub value: f64,
    pub acyclic: bool,
    pub per_degree: Vec<FkResult>,
}

/// How the FK determinants of the boundary matrices are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TorsionMethod {
    Quadrature(QuadratureSettings),
    /// Interpolated determinants (or Cauchy-Binet Gram polynomials) and Jensen's formula.
    Exact,
}

impl Default for TorsionMethod {
    fn default() -> Self {
        TorsionMethod::Quadrature(QuadratureSettings::default())
    }
}

impl BasedChainComplex {
    /// `boundaries[i - 1]` is `A_i`, of shape `ranks[i] x ranks[i - 1]`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<LaurentMatrix>, t: f64) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::InvalidArgument("a chain complex needs at least C_0".into()));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::Shape(format!(
                "{} ranks need {} boundary matrices, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
        }
        for (k, a) in boundaries.iter().enumerate() {
            let i = k + 1;
            if a.shape() != (ranks[i], ranks[i - 1]) {
                return Err(Error::Shape(format!(
                    "A_{i} is {}x{}, expected {}x{}",
                    a.rows(),
                    a.cols(),
                    ranks[i],
                    ranks[i - 1]
                )));
            }
        }
        for k in 1..boundaries.len() {
            let prod = boundaries[k].mul(&boundaries[k - 1])?;
            let scale = 1.0_f64.max(boundaries[k].max_entry_norm() * boundaries[k - 1].max_entry_norm());
            let residual = prod.max_entry_norm();
            if residual > BOUNDARY_TOLERANCE * scale {
                return Err(Error::BoundaryResidual(residual));
            }
        }
        let decorations = ranks.iter().map(|&n| vec![Monomial::ONE; n]).collect();
        Ok(BasedChainComplex { ranks, boundaries, decorations, t })
    }

    /// A complex over plain complex scalars (all entries constant).
    pub fn from_constant(ranks: Vec<usize>, boundaries: &[nalgebra::DMatrix<Complex64>]) -> Result<Self> {
        Self::new(ranks, boundaries.iter().map(LaurentMatrix::from_constants).collect(), 1.0)
    }

    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `A_i` for `1 <= i <= m`.
    pub fn boundary(&self, i: usize) -> &LaurentMatrix {
        &self.boundaries[i - 1]
    }

    pub fn boundaries(&self) -> &[LaurentMatrix] {
        &self.boundaries
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn decoration(&self, degree: usize, index: usize) -> Monomial {
        self.decorations[degree][index]
    }

    /// Boundary matrices with the basis decorations applied: a decoration `h` in
    /// degree `i` multiplies row `j` of `A_i` and divides column `j` of `A_{i+1}`.
    pub fn folded_boundaries(&self) -> Vec<LaurentMatrix> {
        let mut out = self.boundaries.clone();
        for (deg, decs) in self.decorations.iter().enumerate() {
            for (j, &h) in decs.iter().enumerate() {
                if h == Monomial::ONE {
                    continue;
                }
                if deg >= 1 {
                    out[deg - 1].scale_row(j, &h.image(self.t));
                }
                if deg < self.length() {
                    out[deg].scale_col(j, &h.inverse().image(self.t));
                }
            }
        }
        out
    }

    /// Rebased copy with all decorations folded into the matrices.
    pub fn rebased(&self) -> BasedChainComplex {
        BasedChainComplex {
            ranks: self.ranks.clone(),
            boundaries: self.folded_boundaries(),
            decorations: self.ranks.iter().map(|&n| vec![Monomial::ONE; n]).collect(),
            t: self.t,
        }
    }

    pub fn direct_sum(&self, other: &BasedChainComplex) -> Result<BasedChainComplex> {
        let m = self.length().max(other.length());
        let rank = |c: &BasedChainComplex, i: usize| c.ranks.get(i).copied().unwrap_or(0);
        let a = self.folded_boundaries();
        let b = other.folded_boundaries();
        let ranks: Vec<usize> = (0..=m).map(|i| rank(self, i) + rank(other, i)).collect();
        let boundary = |c: &BasedChainComplex, mats: &[LaurentMatrix], i: usize| {
            mats.get(i - 1).cloned().unwrap_or_else(|| Matrix::zeros(rank(c, i), rank(c, i - 1)))
        };
        let boundaries =
            (1..=m).map(|i| boundary(self, &a, i).direct_sum(&boundary(other, &b, i))).collect();
        BasedChainComplex::new(ranks, boundaries, self.t)
    }
}

/// `b_i = n_i - rank(A_i) - rank(A_{i+1})`, with ranks taken at generic points of the circle.
pub fn l2_betti_generic(c: &BasedChainComplex) -> Result<Vec<usize>> {
    let m = c.length();
    let mut r = vec![0usize; m + 2];
    for i in 1..=m {
        r[i] = generic_rank(c.boundary(i))?;
    }
    (0..=m)
        .map(|i| {
            c.ranks[i].checked_sub(r[i] + r[i + 1]).ok_or_else(|| {
                Error::InvalidArgument(format!("ranks of A_{i} and A_{} exceed n_{i}", i + 1))
            })
        })
        .collect()
}

pub fn torsion(c: &BasedChainComplex) -> Result<TorsionValue> {
    torsion_with(c, &TorsionMethod::default())
}

/// `prod_i det(A_i)^((-1)^i)`, or 0 when some L2-Betti number is nonzero.
pub fn torsion_with(c: &BasedChainComplex, method: &TorsionMethod) -> Result<TorsionValue> {
    if l2_betti_generic(c)?.iter().any(|&b| b != 0) {
        return Ok(TorsionValue { value: 0.0, acyclic: false, per_degree: Vec::new() });
    }
    let mut log_value = 0.0;
    let mut per_degree = Vec::with_capacity(c.length());
    for (k, a) in c.folded_boundaries().iter().enumerate() {
        let det = match method {
            TorsionMethod::Quadrature(s) => fk_det(a, s)?,
            TorsionMethod::Exact => fk_det_gram(a)?,
        };
        if !det.det_class {
            return Ok(TorsionValue { value: 0.0, acyclic: true, per_degree });
        }
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        log_value += sign * det.value.ln();
        per_degree.push(det);
    }
    Ok(TorsionValue { value: log_value.exp(), acyclic: true, per_degree })
}

/// Act on the Euler lift: the `index`-th cell of `degree` is moved by `g^((-1)^degree)`.
pub fn act_euler(c: &BasedChainComplex, degree: usize, index: usize, g: Monomial) -> Result<BasedChainComplex> {
    if degree > c.length() || index >= c.ranks[degree] {
        return Err(Error::InvalidArgument(format!(
            "no basis element {index} in degree {degree} (ranks {:?})",
            c.ranks
        )));
    }
    let h = if degree.is_multiple_of(2) { g } else { g.inverse() };
    let mut out = c.clone();
    out.decorations[degree][index] = out.decorations[degree][index].mul(h);
    Ok(out)
}

/// The dual complex `C^#`: `n^#_i = n_{m-i}` and `A^#_j = (-1)^(m-j+1) * conj(A_{m-j+1})^T`.
///
/// Decorations are folded first; the dual carries the parameter `1/t`, since the
/// dual of `g -> t^phi(g) z^phi(g)` is the same representation at `1/t`.
pub fn dualize(c: &BasedChainComplex) -> BasedChainComplex {
    let m = c.length();
    let folded = c.folded_boundaries();
    let ranks: Vec<usize> = c.ranks.iter().rev().copied().collect();
    let boundaries = (1..=m)
        .map(|j| {
            let a = folded[m - j].involute_transpose();
            if (m - j + 1).is_multiple_of(2) {
                a
            } else {
                a.neg()
            }
        })
        .collect();
    BasedChainComplex {
        decorations: ranks.iter().map(|&n| vec![Monomial::ONE; n]).collect(),
        ranks,
        boundaries,
        t: 1.0 / c.t,
    }
}

/// The dual representation `g -> conj(rho(g^-1))^T`, evaluated from its definition.
pub fn dual_image(rep: &MonomialRepresentation, g: &GroupWord) -> LaurentPoly {
    rep.image(&g.inverse()).involute()
}

/// Closed form of the dual of the monomial representation at `t`: the same map at `1/t`.
pub fn dual_representation(rep: &MonomialRepresentation) -> MonomialRepresentation {
    MonomialRepresentation::new(rep.phi.clone(), 1.0 / rep.t)
}

/// The torus complex `0 -> C -> C^2 -> C -> 0` with
/// `A_2 = (y - 1, 1 - x)`, `A_1 = (1 - x; 1 - y)` under `x -> (tz)^a`, `y -> (tz)^b`.
pub fn torus_complex(a: i64, b: i64, t: f64) -> Result<BasedChainComplex> {
    if a == 0 && b == 0 {
        return Err(Error::TorusUndefined);
    }
    let one = LaurentPoly::one();
    let x = LaurentPoly::monomial(Complex64::new(t.powi(a as i32), 0.0), a);
    let y = LaurentPoly::monomial(Complex64::new(t.powi(b as i32), 0.0), b);
    let a2 = Matrix::from_rows(vec![vec![&y - &one, &one - &x]], 2)?;
    let a1 = Matrix::from_rows(vec![vec![&one - &x], vec![&one - &y]], 1)?;
    BasedChainComplex::new(vec![1, 2, 1], vec![a1, a2], t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::AbelianizationMap;

    fn lp(low: i64, c: &[f64]) -> LaurentPoly {
        LaurentPoly::from_real(low, c)
    }

    fn single(p: LaurentPoly, t: f64) -> BasedChainComplex {
        BasedChainComplex::new(vec![1, 1], vec![Matrix::from_rows(vec![vec![p]], 1).unwrap()], t).unwrap()
    }

    fn exact(c: &BasedChainComplex) -> f64 {
        torsion_with(c, &TorsionMethod::Exact).unwrap().value
    }

    #[test]
    fn betti_of_generic_map() {
        assert_eq!(l2_betti_generic(&single(lp(0, &[-1.0, 1.0]), 1.0)).unwrap(), vec![0, 0]);
    }

    #[test]
    fn betti_of_zero_map() {
        assert_eq!(l2_betti_generic(&single(LaurentPoly::zero(), 1.0)).unwrap(), vec![1, 1]);
    }

    #[test]
    fn betti_of_torus() {
        assert_eq!(l2_betti_generic(&torus_complex(1, 0, 2.0).unwrap()).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn torsion_of_single_map() {
        let c = single(lp(0, &[-1.0, 2.0]), 1.0);
        assert!((torsion(&c).unwrap().value - 0.5).abs() < 1e-9);
        assert!((exact(&c) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn torus_torsion_is_one() {
        for t in [0.5, 1.0, 2.0, 5.0] {
            for (a, b) in [(1, 0), (1, 1), (0, 1), (2, -1)] {
                let v = torsion(&torus_complex(a, b, t).unwrap()).unwrap();
                assert!(v.acyclic);
                assert!((v.value - 1.0).abs() < 1e-6, "({a},{b}) t={t}: {}", v.value);
            }
        }
    }

    #[test]
    fn torus_boundaries_at_t2() {
        let c = torus_complex(1, 0, 2.0).unwrap();
        assert!(c.boundary(2).get(0, 0).is_zero());
        assert_eq!(c.boundary(2).get(0, 1), &lp(0, &[1.0, -2.0]));
        assert_eq!(c.boundary(1).get(0, 0), &lp(0, &[1.0, -2.0]));
        assert!(c.boundary(1).get(1, 0).is_zero());
    }

    #[test]
    fn torus_rejects_zero_class() {
        assert_eq!(torus_complex(0, 0, 2.0), Err(Error::TorusUndefined));
    }

    #[test]
    fn zero_boundary_gives_zero_torsion() {
        let v = torsion(&single(LaurentPoly::zero(), 1.0)).unwrap();
        assert_eq!(v.value, 0.0);
        assert!(!v.acyclic);
    }

    #[test]
    fn empty_complex_has_unit_torsion() {
        let c = BasedChainComplex::new(vec![0, 0, 0], vec![Matrix::zeros(0, 0), Matrix::zeros(0, 0)], 1.0).unwrap();
        assert_eq!(torsion(&c).unwrap().value, 1.0);
    }

    #[test]
    fn rejects_nonzero_composition() {
        let a1 = Matrix::from_rows(vec![vec![LaurentPoly::one()]], 1).unwrap();
        let a2 = Matrix::from_rows(vec![vec![LaurentPoly::one()]], 1).unwrap();
        assert!(matches!(
            BasedChainComplex::new(vec![1, 1, 1], vec![a1, a2], 1.0),
            Err(Error::BoundaryResidual(_))
        ));
    }

    #[test]
    fn act_euler_fixture() {
        // 0 -> C[Z] --(tz)--> C[Z] -> 0; moving the 1-cell by z
        let t = 3.0;
        let c = single(Monomial::z(1).image(t), t);
        let base = exact(&c);
        assert!((base - 1.0 / t).abs() < 1e-12);
        let moved = act_euler(&c, 1, 0, Monomial::z(1)).unwrap();
        let expected = t.powi(EULER_EPSILON as i32) / t;
        assert!((exact(&moved) - expected).abs() < 1e-12);
        // same constant in degree 0
        let moved0 = act_euler(&c, 0, 0, Monomial::z(1)).unwrap();
        assert!((exact(&moved0) - expected).abs() < 1e-12);
    }

    #[test]
    fn act_euler_trivial_and_inverse() {
        let c = torus_complex(1, 1, 2.0).unwrap();
        let same = act_euler(&c, 1, 1, Monomial::ONE).unwrap();
        assert_eq!(same, c);
        let there = act_euler(&c, 1, 0, Monomial::z(2)).unwrap();
        let back = act_euler(&there, 1, 0, Monomial::z(-2)).unwrap();
        assert_eq!(back, c);
        assert!(act_euler(&c, 3, 0, Monomial::z(1)).is_err());
        assert!(act_euler(&c, 1, 2, Monomial::z(1)).is_err());
    }

    #[test]
    fn dual_of_scalar_single_map() {
        let c = BasedChainComplex::from_constant(
            vec![1, 1],
            &[nalgebra::DMatrix::from_element(1, 1, Complex64::new(2.0, 0.0))],
        )
        .unwrap();
        let d = dualize(&c);
        assert_eq!(d.boundary(1).get(0, 0), &LaurentPoly::real(-2.0));
        assert!((torsion(&c).unwrap().value - 0.5).abs() < 1e-15);
        assert!((torsion(&d).unwrap().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dual_of_length_two_complex() {
        // 0 -> 0 -> C --(3)--> C -> 0
        let c = BasedChainComplex::new(
            vec![1, 1, 0],
            vec![Matrix::from_rows(vec![vec![LaurentPoly::real(3.0)]], 1).unwrap(), Matrix::zeros(0, 1)],
            1.0,
        )
        .unwrap();
        let d = dualize(&c);
        assert_eq!(d.ranks(), &[0, 1, 1]);
        assert!((torsion(&c).unwrap().value - 1.0 / 3.0).abs() < 1e-15);
        assert!((torsion(&d).unwrap().value - 3.0).abs() < 1e-15);
    }

    #[test]
    fn dual_of_torus() {
        let c = torus_complex(1, 1, 2.0).unwrap();
        let d = dualize(&c);
        assert!((d.t() - 0.5).abs() < 1e-15);
        assert!((torsion(&d).unwrap().value - 1.0).abs() < 1e-6);
        assert!((exact(&d) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn double_dual_is_original_up_to_sign() {
        let c = torus_complex(2, 1, 1.5).unwrap();
        let dd = dualize(&dualize(&c));
        assert_eq!(dd.ranks(), c.ranks());
        for i in 1..=2 {
            let a = c.boundary(i);
            let b = dd.boundary(i);
            assert!(a.max_entry_distance(b) < 1e-15 || a.max_entry_distance(&b.neg()) < 1e-15);
        }
    }

    #[test]
    fn dual_representation_examples() {
        let rep = MonomialRepresentation::new(AbelianizationMap::new(vec![1, 0]), 2.0);
        let x = GroupWord::generator(0);
        assert_eq!(dual_image(&rep, &x), LaurentPoly::monomial(Complex64::new(0.5, 0.0), 1));
        assert_eq!(dual_representation(&rep).image(&x), dual_image(&rep, &x));
        let y = GroupWord::generator(1);
        assert_eq!(dual_image(&rep, &y), LaurentPoly::one());
        let at_one = MonomialRepresentation::new(AbelianizationMap::new(vec![1]), 1.0);
        assert_eq!(dual_image(&at_one, &x), at_one.image(&x));
    }

    #[test]
    fn direct_sum_multiplies() {
        let c = single(lp(0, &[-1.0, 2.0]), 1.0);
        let d = torus_complex(1, 0, 3.0).unwrap();
        let s = c.direct_sum(&d).unwrap();
        assert_eq!(s.ranks(), &[2, 3, 1]);
        assert!((exact(&s) - exact(&c) * exact(&d)).abs() < 1e-9);
    }
}

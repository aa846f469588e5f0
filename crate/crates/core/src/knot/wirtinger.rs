use std::collections::BTreeMap;

use num_complex::Complex64;

use super::pd::PDCode;
use crate::error::Result;
use crate::groupring::{AbelianizationMap, GroupWord, Letter, Matrix, RingElement, RingMatrix};

/// A knot-group presentation with one meridian generator per arc.
#[derive(Debug, Clone, PartialEq)]
pub struct WirtingerPresentation {
    generators: usize,
    relators: Vec<GroupWord>,
    meridian: usize,
    phi: AbelianizationMap,
}

impl WirtingerPresentation {
    pub fn new(generators: usize, relators: Vec<GroupWord>) -> Self {
        WirtingerPresentation { generators, relators, meridian: 0, phi: AbelianizationMap::uniform(generators) }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[GroupWord] {
        &self.relators
    }

    pub fn meridian(&self) -> usize {
        self.meridian
    }

    pub fn phi(&self) -> &AbelianizationMap {
        &self.phi
    }

    /// `relators x generators` matrix of Fox derivatives.
    pub fn fox_matrix(&self) -> RingMatrix {
        Matrix::from_fn(self.relators.len(), self.generators, |i, j| fox_derivative(&self.relators[i], j))
    }
}

/// Free derivative `d w / d x_k`, with `d(uv) = du + u dv`.
pub fn fox_derivative(w: &GroupWord, k: usize) -> RingElement {
    let one = Complex64::new(1.0, 0.0);
    let mut out = RingElement::zero();
    let mut prefix = GroupWord::identity();
    for &Letter { gen, exp } in w.letters() {
        if gen == k {
            if exp > 0 {
                for j in 0..exp {
                    out.add_term(prefix.mul(&GroupWord::power(gen, j)), one);
                }
            } else {
                for j in exp..0 {
                    out.add_term(prefix.mul(&GroupWord::power(gen, j)), -one);
                }
            }
        }
        prefix = prefix.mul(&GroupWord::power(gen, exp));
    }
    out
}

/// Wirtinger presentation of a one-component diagram. The relator at a crossing
/// with over-arc `o`, incoming under-arc `a`, outgoing under-arc `b` and sign `e`
/// is `x_o^e x_a x_o^-e x_b^-1`; the last relator is dropped.
pub fn wirtinger(pd: &PDCode) -> Result<WirtingerPresentation> {
    let (crossings, _) = pd.orient()?;
    if crossings.is_empty() {
        return Ok(WirtingerPresentation::new(1, Vec::new()));
    }
    // arcs: edges joined through the over-strand of each crossing
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<u32, u32>, e: u32) -> u32 {
        let p = *parent.entry(e).or_insert(e);
        if p == e {
            return e;
        }
        let root = find(parent, p);
        parent.insert(e, root);
        root
    }
    for x in &crossings {
        let (a, b) = (find(&mut parent, x.over_in), find(&mut parent, x.over_out));
        if a != b {
            parent.insert(a.max(b), a.min(b));
        }
        find(&mut parent, x.under_in);
        find(&mut parent, x.under_out);
    }
    let edges: Vec<u32> = parent.keys().copied().collect();
    let mut arc_of_root: BTreeMap<u32, usize> = BTreeMap::new();
    for &e in &edges {
        let r = find(&mut parent, e);
        let next = arc_of_root.len();
        arc_of_root.entry(r).or_insert(next);
    }
    let mut arc = |e: u32| arc_of_root[&find(&mut parent, e)];

    let mut relators: Vec<GroupWord> = crossings
        .iter()
        .map(|x| {
            let (o, a, b, s) = (arc(x.over_in), arc(x.under_in), arc(x.under_out), x.sign as i64);
            GroupWord::reduce([Letter::new(o, s), Letter::new(a, 1), Letter::new(o, -s), Letter::new(b, -1)])
        })
        .collect();
    relators.pop();
    Ok(WirtingerPresentation::new(arc_of_root.len(), relators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::braid::parse_braid;
    use crate::knot::pd::{braid_to_pd, parse_pd};

    fn x(g: usize) -> GroupWord {
        GroupWord::generator(g)
    }

    #[test]
    fn fox_of_product() {
        let xy = x(0).mul(&x(1));
        assert_eq!(fox_derivative(&xy, 0), RingElement::one());
    }

    #[test]
    fn fox_of_inverse() {
        let d = fox_derivative(&x(0).inverse(), 0);
        assert_eq!(d, RingElement::word(x(0).inverse()).scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn fox_of_commutator() {
        let w = GroupWord::reduce([Letter::new(0, 1), Letter::new(1, 1), Letter::new(0, -1), Letter::new(1, -1)]);
        let expected = &RingElement::word(x(0)) - &RingElement::word(w.clone());
        assert_eq!(fox_derivative(&w, 1), expected);
    }

    #[test]
    fn fox_of_other_generator_is_zero() {
        assert!(fox_derivative(&x(1), 0).is_zero());
    }

    #[test]
    fn fox_of_powers() {
        // d x^3 / dx = 1 + x + x^2
        let d = fox_derivative(&GroupWord::power(0, 3), 0);
        assert_eq!(d.len(), 3);
        // d x^-2 / dx = -x^-1 - x^-2
        let d = fox_derivative(&GroupWord::power(0, -2), 0);
        assert_eq!(d.coeff(&GroupWord::power(0, -2)), Complex64::new(-1.0, 0.0));
        assert_eq!(d.coeff(&GroupWord::power(0, -1)), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn fundamental_identity() {
        // sum_i (dw/dx_i)(x_i - 1) = w - 1
        let w = GroupWord::reduce([Letter::new(0, 2), Letter::new(2, -1), Letter::new(1, 3), Letter::new(0, -1)]);
        let mut acc = RingElement::zero();
        for i in 0..3 {
            acc = &acc + &(&fox_derivative(&w, i) * &(&RingElement::generator(i) - &RingElement::one()));
        }
        assert_eq!(acc, &RingElement::word(w) - &RingElement::one());
    }

    #[test]
    fn trefoil_presentation() {
        let p = wirtinger(&braid_to_pd(&parse_braid("s1 s1 s1").unwrap()).unwrap()).unwrap();
        assert_eq!(p.generators(), 3);
        assert_eq!(p.relators().len(), 2);
        for r in p.relators() {
            assert_eq!(p.phi().apply(r), 0);
        }
    }

    #[test]
    fn figure_eight_presentation() {
        let p = wirtinger(&braid_to_pd(&parse_braid("strands=3; s1 s2^-1 s1 s2^-1").unwrap()).unwrap()).unwrap();
        assert_eq!((p.generators(), p.relators().len()), (4, 3));
    }

    #[test]
    fn unknot_presentation() {
        let p = wirtinger(&parse_pd("PD[]").unwrap()).unwrap();
        assert_eq!((p.generators(), p.relators().len()), (1, 0));
    }
}

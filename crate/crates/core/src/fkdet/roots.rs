//! Polynomial roots as eigenvalues of a balanced companion matrix.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

const SCHUR_MAX_ITER: usize = 10_000;

fn l1(c: Complex64) -> f64 {
    c.re.abs() + c.im.abs()
}

/// Parlett-Reinsch balancing with power-of-two scalings, in place.
pub(crate) fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let radix = 2.0_f64;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(m[(j, i)]);
                    r += l1(m[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / radix;
            let mut f = 1.0;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= g;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of `sum_k coeffs[k] x^k`; `coeffs.last()` must be nonzero.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len().saturating_sub(1);
    let lead = *coeffs.last().ok_or_else(|| Error::NotInDomain("empty coefficient list".into()))?;
    if lead.norm() == 0.0 {
        return Err(Error::NotInDomain("leading coefficient is zero".into()));
    }
    match deg {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-coeffs[0] / lead]),
        _ => {}
    }

    // Companion matrix of the monic normalization, last column holds -a_k.
    let mut comp = DMatrix::from_element(deg, deg, Complex64::new(0.0, 0.0));
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    balance(&mut comp);

    let schur = Schur::try_new(comp, f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::NotInDomain("companion Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut roots: Vec<Complex64> = (0..deg).map(|i| t[(i, i)]).collect();

    // A few Newton steps on the original polynomial; keep a step only if it helps.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *r - p / dp;
            if horner(coeffs, cand).0.norm() < p.norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_moduli(r: &[Complex64]) -> Vec<f64> {
        let mut v: Vec<f64> = r.iter().map(|z| z.norm()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn quadratic_roots() {
        // x^2 - 3x + 2
        let r = poly_roots(&[c(2.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(sorted_moduli(&r).len(), 2);
        let m = sorted_moduli(&r);
        assert!((m[0] - 1.0).abs() < 1e-12 && (m[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sixth_roots_of_unity() {
        let r = poly_roots(&[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-13);
            assert!((z.powi(6) - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn badly_scaled_roots() {
        // (x - 1e-3)(x - 1e3)(x - i)
        let p1 = [c(-1e-3, 0.0), c(1.0, 0.0)];
        let p2 = [c(-1e3, 0.0), c(1.0, 0.0)];
        let p3 = [c(0.0, -1.0), c(1.0, 0.0)];
        let mul = |a: &[Complex64], b: &[Complex64]| {
            let mut out = vec![c(0.0, 0.0); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let p = mul(&mul(&p1, &p2), &p3);
        let m = sorted_moduli(&poly_roots(&p).unwrap());
        assert!((m[0] - 1e-3).abs() < 1e-12);
        assert!((m[1] - 1.0).abs() < 1e-12);
        assert!((m[2] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn zero_leading_coefficient_rejected() {
        assert!(poly_roots(&[c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    }
}

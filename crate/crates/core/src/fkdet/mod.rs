//! Fuglede-Kadison determinants over the group von Neumann algebra of `Z`.
//!
//! A matrix `A` over `C[Z]` is a matrix-valued function `A(e^{i theta})` on the
//! unit circle. Its FK determinant is
//!
//! ```text
//! det(A) = exp( (1/2 pi) * integral of sum_{i <= r} log sigma_i(theta) d theta )
//! ```
//!
//! where `sigma_1 >= sigma_2 >= ...` are the singular values of `A(e^{i theta})`
//! and `r` is the rank of `A` off a finite set of angles. Three routes are
//! provided:
//!
//! * [`mahler_jensen`]: the `1 x 1` case via Jensen's formula on the roots;
//! * [`fk_det`]: trapezoidal quadrature on the circle for any shape;
//! * [`fk_det_square_poly`] / [`fk_det_gram`]: the scalar Laurent determinant
//!   (resp. the Cauchy-Binet Gram polynomial) by interpolation, then Jensen.

mod roots;

pub use roots::poly_roots;

use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupring::{LaurentMatrix, LaurentPoly};

/// Roots this close to the unit circle count as modulus exactly one.
pub const UNIT_SNAP: f64 = 1e-10;
/// Relative singular-value cutoff used for numeric rank.
pub const RANK_THRESHOLD: f64 = 1e-10;
/// A node is singular when its normalized retained Gram product drops below this.
pub const SINGULAR_NODE: f64 = 1e-26;
const PROBE_COUNT: usize = 7;
const MAX_ROTATIONS: usize = 16;
// Irrational fraction of a step, so rotated lattices never revisit a node under doubling.
const ROTATION_FRACTION: f64 = 0.309_016_994_374_947_4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FkResult {
    pub value: f64,
    /// Rank of the matrix at generic points of the unit circle.
    pub rank: usize,
    pub det_class: bool,
}

impl FkResult {
    fn of(value: f64, rank: usize) -> Self {
        FkResult { value, rank, det_class: true }
    }

    fn not_det_class(rank: usize) -> Self {
        FkResult { value: 0.0, rank, det_class: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSettings {
    node_count: usize,
    refinement_limit: u32,
    tolerance: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings { node_count: 64, refinement_limit: 18, tolerance: 1e-7 }
    }
}

impl QuadratureSettings {
    pub fn new(node_count: usize, refinement_limit: u32, tolerance: f64) -> Result<Self> {
        if node_count < 16 || !node_count.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "node count must be a power of two >= 16, got {node_count}"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(QuadratureSettings { node_count, refinement_limit, tolerance })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn refinement_limit(&self) -> u32 {
        self.refinement_limit
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// Leading-coefficient magnitude and root moduli of the polynomial part of `p`,
/// plus the lowest exponent of `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct JensenData {
    pub lead_abs: f64,
    pub root_moduli: Vec<f64>,
    pub min_exp: i64,
}

impl JensenData {
    pub fn of(p: &LaurentPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::NotInDomain("zero polynomial".into()));
        }
        let roots = poly_roots(p.coeffs())?;
        let root_moduli = roots
            .iter()
            .map(|r| {
                let m = r.norm();
                if (m - 1.0).abs() < UNIT_SNAP {
                    1.0
                } else {
                    m
                }
            })
            .collect();
        Ok(JensenData { lead_abs: p.leading().norm(), root_moduli, min_exp: p.min_exp() })
    }

    /// Mahler measure of `p(s z)`: `s^k |lead| * prod max(s, |a_i|)` with `k` the lowest exponent.
    pub fn dilated_measure(&self, s: f64) -> f64 {
        s.powi(self.min_exp as i32) * self.lead_abs * self.root_moduli.iter().map(|&m| m.max(s)).product::<f64>()
    }

    pub fn measure(&self) -> f64 {
        self.dilated_measure(1.0)
    }
}

/// Mahler measure `|lead| * prod max(1, |r_i|)`; equals the FK determinant of the `1 x 1` matrix `(p)`.
pub fn mahler_jensen(p: &LaurentPoly) -> Result<f64> {
    Ok(JensenData::of(p)?.measure())
}

fn probe_points() -> [Complex64; PROBE_COUNT] {
    // Golden-ratio angles: deterministic, and never a root of unity of small order.
    let golden = 0.618_033_988_749_894_9;
    std::array::from_fn(|j| {
        let frac = (0.123_456_789 + j as f64 * golden).fract();
        Complex64::from_polar(1.0, 2.0 * PI * frac)
    })
}

fn numeric_rank(m: &DMatrix<Complex64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_THRESHOLD * smax).count()
}

/// Rank of `m` at generic points of the unit circle, by majority over fixed probes.
pub fn generic_rank(m: &LaurentMatrix) -> Result<usize> {
    if m.rows() == 0 || m.cols() == 0 || m.is_zero() {
        return Ok(0);
    }
    if m.is_constant() {
        return Ok(numeric_rank(&m.eval(Complex64::new(1.0, 0.0))));
    }
    let ranks: Vec<usize> = probe_points().iter().map(|&z| numeric_rank(&m.eval(z))).collect();
    let mut best = (0, 0);
    for &r in &ranks {
        let votes = ranks.iter().filter(|&&q| q == r).count();
        if votes > best.1 {
            best = (r, votes);
        }
    }
    if best.1 * 2 > PROBE_COUNT {
        Ok(best.0)
    } else {
        Err(Error::RankDisagreement(ranks))
    }
}

/// In-place LU with partial pivoting on a row-major `n x n` buffer.
fn det_lu(a: &mut [Complex64], n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].norm();
        for i in k + 1..n {
            let v = a[i * n + k].norm();
            if v > best {
                best = v;
                piv = i;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let d = a[k * n + k];
        det *= d;
        for i in k + 1..n {
            let f = a[i * n + k] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let u = a[k * n + j];
                a[i * n + j] -= f * u;
            }
        }
    }
    det
}

pub(crate) fn complex_det(m: &DMatrix<Complex64>) -> Complex64 {
    let n = m.nrows();
    let mut buf: Vec<Complex64> = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
    det_lu(&mut buf, n)
}

/// Evaluates the retained Gram product `prod_{i<=r} sigma_i^2` on the circle.
struct NodeEvaluator<'a> {
    m: &'a LaurentMatrix,
    rank: usize,
    /// `sum |entry|_1^2`, a bound for `|A(z)|_F^2` on the circle.
    scale2: f64,
    /// Sum of row spans, a bound for the degree of the Gram function.
    degree: usize,
    buf: Vec<Complex64>,
}

impl<'a> NodeEvaluator<'a> {
    fn new(m: &'a LaurentMatrix, rank: usize) -> Self {
        let scale2 = m.entries().map(|e| e.l1_norm().powi(2)).sum::<f64>();
        let degree = (0..m.rows())
            .map(|i| {
                let nz: Vec<&LaurentPoly> = m.row(i).iter().filter(|e| !e.is_zero()).collect();
                match (nz.iter().map(|e| e.min_exp()).min(), nz.iter().map(|e| e.max_exp()).max()) {
                    (Some(lo), Some(hi)) => (hi - lo) as usize,
                    _ => 0,
                }
            })
            .sum();
        NodeEvaluator { m, rank, scale2, degree, buf: Vec::new() }
    }

    /// Returns `(log prod sigma_i, singular)` at the angle `theta`.
    fn log_value(&mut self, theta: f64) -> (f64, bool) {
        let z = Complex64::from_polar(1.0, theta);
        let (k, l) = self.m.shape();
        let r = self.rank;
        let gram = if k == 1 || l == 1 {
            self.m.entries().map(|e| e.eval(z).norm_sqr()).sum::<f64>()
        } else if r == k.min(l) {
            if k == l {
                self.buf.clear();
                self.buf.extend(self.m.entries().map(|e| e.eval(z)));
                det_lu(&mut self.buf, k).norm_sqr()
            } else {
                // |det R|^2 = det(A A^*) for the QR factor of the tall orientation
                let a = self.m.eval(z);
                let tall = if k < l { a.adjoint() } else { a };
                let qr = tall.qr();
                let rr = qr.r();
                (0..r).map(|i| rr[(i, i)].norm_sqr()).product::<f64>()
            }
        } else {
            let sv = self.m.eval(z).singular_values();
            let mut s: Vec<f64> = sv.iter().cloned().collect();
            s.sort_by(|a, b| b.total_cmp(a));
            s.iter().take(r).map(|x| x * x).product::<f64>()
        };
        let normalized = gram / self.scale2.powi(r as i32);
        let singular = !(gram > 0.0 && gram.is_finite()) || normalized < SINGULAR_NODE;
        (0.5 * gram.ln(), singular)
    }
}

/// A zero of `prod sigma_i` on the circle, vanishing like `|theta - angle|^order`.
#[derive(Debug, Clone, Copy)]
struct CircleZero {
    angle: f64,
    order: f64,
}

// A local minimum counts as a zero below this normalized level.
const CIRCLE_ZERO_LEVEL: f64 = 1e-8;
// Offset used to read off the vanishing order.
const ZERO_PROBE: f64 = 1e-6;
const SCAN_NODES_MAX: usize = 1 << 16;

fn golden_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.381_966_011_250_105_1;
    let mut x1 = a + g * (b - a);
    let mut x2 = b - g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= 4.0 * f64::EPSILON * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// Scans a lattice for local minima of the log integrand that are genuine
/// zeros, then pins down their angle and vanishing order.
fn locate_circle_zeros(eval: &mut NodeEvaluator, n: usize) -> Vec<CircleZero> {
    let step = 2.0 * PI / n as f64;
    let vals: Vec<f64> = (0..n).map(|k| eval.log_value(k as f64 * step).0).collect();
    let floor = 0.5 * eval.rank as f64 * eval.scale2.ln() + CIRCLE_ZERO_LEVEL.ln();
    let mut out: Vec<CircleZero> = Vec::new();
    for k in 0..n {
        let (prev, next) = (vals[(k + n - 1) % n], vals[(k + 1) % n]);
        if !(vals[k] <= prev && vals[k] < next) {
            continue;
        }
        let centre = k as f64 * step;
        let theta = golden_min(|x| eval.log_value(x).0, centre - step, centre + step);
        if !(eval.log_value(theta).0 < floor) {
            continue;
        }
        let mut order_at = |h: f64| (eval.log_value(theta + 2.0 * h).0 - eval.log_value(theta + h).0) / LN_2;
        let (up, down) = (order_at(ZERO_PROBE), order_at(-ZERO_PROBE));
        let m = up.round();
        if m < 1.0 || (up - m).abs() > 0.25 || (down - m).abs() > 0.25 {
            continue;
        }
        let angle = theta.rem_euclid(2.0 * PI);
        if out.iter().all(|z| (z.angle - angle).abs() > 1e-9) {
            out.push(CircleZero { angle, order: m });
        }
    }
    out
}

/// Trapezoidal rule with nested doubling; returns the mean of the log integrand.
///
/// Zeros of the integrand on the circle are located first and their exact
/// `order * log|2 sin((theta - angle)/2)|` part is subtracted node by node.
/// That part has mean zero, so the limit is unchanged, but what remains is
/// smooth and the rule converges geometrically instead of like `1/N`.
fn circle_mean(m: &LaurentMatrix, rank: usize, settings: &QuadratureSettings) -> Result<f64> {
    let mut eval = NodeEvaluator::new(m, rank);
    let scan = settings.node_count.max((8 * eval.degree).next_power_of_two()).min(SCAN_NODES_MAX);
    let zeros = locate_circle_zeros(&mut eval, scan);
    let mut offset = 0.0_f64;
    let mut rotations = 0;

    // Sum over nodes offset + k*step, k < n; None when a node is singular.
    let lattice_sum = |offset: f64, n: usize, eval: &mut NodeEvaluator| -> Option<f64> {
        let step = 2.0 * PI / n as f64;
        let mut sum = 0.0;
        for k in 0..n {
            let theta = offset + k as f64 * step;
            let (v, singular) = eval.log_value(theta);
            if singular {
                return None;
            }
            let removed: f64 =
                zeros.iter().map(|z| z.order * (2.0 * ((theta - z.angle) / 2.0).sin()).abs().ln()).sum();
            sum += v - removed;
        }
        Some(sum)
    };

    let mut n = settings.node_count;
    let mut sum = loop {
        match lattice_sum(offset, n, &mut eval) {
            Some(s) => break s,
            None => {
                rotations += 1;
                if rotations > MAX_ROTATIONS {
                    return Err(Error::NonConvergence { last: f64::NAN, previous: f64::NAN });
                }
                offset += ROTATION_FRACTION * 2.0 * PI / n as f64;
            }
        }
    };
    let mut estimates = vec![sum / n as f64];

    for _ in 0..settings.refinement_limit {
        let step = 2.0 * PI / n as f64;
        match lattice_sum(offset + 0.5 * step, n, &mut eval) {
            Some(mid) => {
                sum += mid;
                n *= 2;
            }
            None => {
                rotations += 1;
                if rotations > MAX_ROTATIONS {
                    break;
                }
                // Rotate the doubled lattice and rebuild it from scratch.
                n *= 2;
                offset += ROTATION_FRACTION * 2.0 * PI / n as f64;
                match lattice_sum(offset, n, &mut eval) {
                    Some(s) => sum = s,
                    None => continue,
                }
            }
        }
        estimates.push(sum / n as f64);
        let len = estimates.len();
        // Two consecutive small differences: a single one can be a coincidence
        // when the integrand has a logarithmic singularity.
        if len >= 3
            && (estimates[len - 1] - estimates[len - 2]).abs() < settings.tolerance
            && (estimates[len - 2] - estimates[len - 3]).abs() < settings.tolerance
        {
            return Ok(estimates[len - 1]);
        }
    }
    let len = estimates.len();
    Err(Error::NonConvergence {
        last: estimates[len - 1].exp(),
        previous: if len >= 2 { estimates[len - 2].exp() } else { f64::NAN },
    })
}

/// FK determinant of an arbitrary `k x l` matrix over `C[Z]` by quadrature on the unit circle.
///
/// The zero matrix (and any empty shape) has determinant 1 and rank 0.
pub fn fk_det(m: &LaurentMatrix, settings: &QuadratureSettings) -> Result<FkResult> {
    let rank = generic_rank(m)?;
    if rank == 0 {
        return Ok(FkResult::of(1.0, 0));
    }
    if m.is_constant() {
        let sv = m.eval(Complex64::new(1.0, 0.0)).singular_values();
        let mut s: Vec<f64> = sv.iter().cloned().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        return Ok(FkResult::of(s.iter().take(rank).product(), rank));
    }
    let mean = circle_mean(m, rank, settings)?;
    Ok(FkResult::of(mean.exp(), rank))
}

/// Determinant of a square Laurent matrix by evaluation at roots of unity and
/// inverse DFT. `samples` defaults to the smallest power of two above the degree bound.
pub fn laurent_det(m: &LaurentMatrix, samples: Option<usize>) -> Result<LaurentPoly> {
    if !m.is_square() {
        return Err(Error::Shape(format!("determinant of a {}x{} matrix", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut lows = Vec::with_capacity(n);
    let mut degree = 0usize;
    let mut bound = 1.0;
    for i in 0..n {
        let nonzero: Vec<&LaurentPoly> = m.row(i).iter().filter(|e| !e.is_zero()).collect();
        if nonzero.is_empty() {
            return Ok(LaurentPoly::zero());
        }
        let lo = nonzero.iter().map(|e| e.min_exp()).min().unwrap();
        let hi = nonzero.iter().map(|e| e.max_exp()).max().unwrap();
        lows.push(lo);
        degree += (hi - lo) as usize;
        bound *= nonzero.iter().map(|e| e.l1_norm()).sum::<f64>();
    }
    let needed = degree + 1;
    let count = samples.unwrap_or_else(|| needed.next_power_of_two());
    if count < needed {
        return Err(Error::DegreeBoundOverflow { needed, samples: count });
    }

    let mut values = Vec::with_capacity(count);
    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..count {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / count as f64);
        for i in 0..n {
            let shift = z.powi(-lows[i] as i32);
            for j in 0..n {
                buf[i * n + j] = m.get(i, j).eval(z) * shift;
            }
        }
        values.push(det_lu(&mut buf, n));
    }

    let cutoff = 1e-12 * bound;
    let coeffs: Vec<Complex64> = (0..needed)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in values.iter().enumerate() {
                let angle = -2.0 * PI * ((j * k) % count) as f64 / count as f64;
                acc += v * Complex64::from_polar(1.0, angle);
            }
            let c = acc / count as f64;
            if c.norm() < cutoff {
                Complex64::new(0.0, 0.0)
            } else {
                c
            }
        })
        .collect();
    Ok(LaurentPoly::from_coeffs(lows.iter().sum(), coeffs))
}

/// Square matrices: Jensen on the interpolated scalar determinant.
///
/// An identically zero determinant is reported as not of determinant class with value 0.
pub fn fk_det_square_poly(m: &LaurentMatrix) -> Result<FkResult> {
    let det = laurent_det(m, None)?;
    if det.is_zero() {
        return Ok(FkResult::not_det_class(generic_rank(m)?));
    }
    Ok(FkResult::of(mahler_jensen(&det)?, m.rows()))
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Upper limit on `C(k, r) * C(l, r)` minors for [`fk_det_gram`].
pub const MAX_GRAM_MINORS: usize = 20_000;

/// Exact route for any shape: by Cauchy-Binet the retained Gram product on the
/// circle is `Q(z) = sum_{I,J} m_IJ(z) * conj(m_IJ)(1/z)` over the rank-`r` minors,
/// so the FK determinant is `sqrt(Mahler(Q))`.
pub fn fk_det_gram(m: &LaurentMatrix) -> Result<FkResult> {
    let rank = generic_rank(m)?;
    if rank == 0 {
        return Ok(FkResult::of(1.0, 0));
    }
    if m.is_square() && rank == m.rows() {
        return fk_det_square_poly(m);
    }
    let rows = subsets(m.rows(), rank);
    let cols = subsets(m.cols(), rank);
    if rows.len() * cols.len() > MAX_GRAM_MINORS {
        return Err(Error::InvalidArgument(format!(
            "{} minors exceed the Gram route limit",
            rows.len() * cols.len()
        )));
    }
    let mut gram = LaurentPoly::zero();
    for ri in &rows {
        for cj in &cols {
            let minor = laurent_det(&m.select(ri, cj), None)?;
            if !minor.is_zero() {
                gram = &gram + &(&minor * &minor.involute());
            }
        }
    }
    Ok(FkResult::of(mahler_jensen(&gram)?.sqrt(), rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::Matrix;

    fn lp(low: i64, c: &[f64]) -> LaurentPoly {
        LaurentPoly::from_real(low, c)
    }

    fn settings() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn mahler_of_cyclotomic_factor() {
        assert!((mahler_jensen(&lp(0, &[-1.0, 1.0])).unwrap() - 1.0).abs() < 1e-12);
        assert!((mahler_jensen(&lp(0, &[1.0, -1.0, 1.0])).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mahler_by_hand() {
        // 2z - 1: |2| * max(1, 1/2)
        assert!((mahler_jensen(&lp(0, &[-1.0, 2.0])).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mahler_ignores_monomial_factor() {
        let p = lp(0, &[3.0, -1.0, 2.0]);
        let q = -&p.shift(-5);
        assert!((mahler_jensen(&p).unwrap() - mahler_jensen(&q).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn mahler_of_zero_is_error() {
        assert!(matches!(mahler_jensen(&LaurentPoly::zero()), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn settings_validation() {
        assert!(QuadratureSettings::new(48, 4, 1e-8).is_err());
        assert!(QuadratureSettings::new(8, 4, 1e-8).is_err());
        assert!(QuadratureSettings::new(32, 4, 0.0).is_err());
        assert!(QuadratureSettings::new(32, 4, 1e-8).is_ok());
    }

    #[test]
    fn row_vector_with_zero_entry() {
        let m = Matrix::from_rows(vec![vec![LaurentPoly::zero(), lp(0, &[1.0, -2.0])]], 2).unwrap();
        let r = fk_det(&m, &settings()).unwrap();
        assert_eq!(r.rank, 1);
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn constant_matrix_is_abs_det() {
        let c = Complex64::new(3.0, -4.0);
        let m = Matrix::from_rows(vec![vec![LaurentPoly::constant(c)]], 1).unwrap();
        assert!((fk_det(&m, &settings()).unwrap().value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_column_vector() {
        let e = lp(0, &[1.0, -2.0]);
        let m = Matrix::from_rows(vec![vec![e.clone()], vec![e]], 1).unwrap();
        let r = fk_det(&m, &settings()).unwrap();
        assert!((r.value - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn zero_matrix_has_unit_determinant() {
        let m: LaurentMatrix = Matrix::zeros(2, 3);
        let r = fk_det(&m, &settings()).unwrap();
        assert_eq!((r.value, r.rank, r.det_class), (1.0, 0, true));
        let e: LaurentMatrix = Matrix::zeros(0, 0);
        assert_eq!(fk_det(&e, &settings()).unwrap().value, 1.0);
    }

    #[test]
    fn singular_integrand_converges() {
        // z - 1 vanishes at the node z = 1 of every lattice without rotation.
        let m = Matrix::from_rows(vec![vec![lp(0, &[-1.0, 1.0])]], 1).unwrap();
        let r = fk_det(&m, &settings()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn nonconvergence_carries_estimates() {
        let m = Matrix::from_rows(vec![vec![lp(0, &[-0.999, 1.0])]], 1).unwrap();
        let tight = QuadratureSettings::new(16, 2, 1e-12).unwrap();
        match fk_det(&m, &tight) {
            Err(Error::NonConvergence { last, previous }) => {
                assert!(last.is_finite() && previous.is_finite())
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn diagonal_square_poly() {
        let m = Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => lp(0, &[-1.0, 1.0]),
            (1, 1) => lp(0, &[-1.0, 2.0]),
            _ => LaurentPoly::zero(),
        });
        let r = fk_det_square_poly(&m).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.det_class);
    }

    #[test]
    fn laurent_det_matches_hand_expansion() {
        // [[z, 1], [1, z^-1 + 2]] -> z*(z^-1 + 2) - 1 = 2z
        let m = Matrix::from_rows(
            vec![vec![lp(1, &[1.0]), lp(0, &[1.0])], vec![lp(0, &[1.0]), lp(-1, &[1.0, 2.0])]],
            2,
        )
        .unwrap();
        let d = laurent_det(&m, None).unwrap();
        assert!(d.approx_eq(&lp(1, &[2.0]), 1e-12), "{d}");
    }

    #[test]
    fn laurent_det_degree_overflow() {
        let m = Matrix::from_rows(vec![vec![lp(0, &[1.0, 1.0, 1.0, 1.0])]], 1).unwrap();
        assert!(matches!(
            laurent_det(&m, Some(2)),
            Err(Error::DegreeBoundOverflow { needed: 4, samples: 2 })
        ));
    }

    #[test]
    fn zero_determinant_not_det_class() {
        let e = lp(0, &[1.0, 1.0]);
        let m = Matrix::from_fn(2, 2, |_, _| e.clone());
        let r = fk_det_square_poly(&m).unwrap();
        assert!(!r.det_class);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn gram_route_matches_vector_closed_form() {
        let e = lp(0, &[1.0, -2.0]);
        let m = Matrix::from_rows(vec![vec![e.clone()], vec![e]], 1).unwrap();
        let r = fk_det_gram(&m).unwrap();
        assert!((r.value - 2.0 * 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn generic_rank_of_rank_one_block() {
        let a = lp(0, &[1.0, 1.0]);
        let b = lp(0, &[2.0, -1.0]);
        // rows proportional: [a, b], [z a, z b]
        let m = Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![a.shift(1), b.shift(1)]], 2).unwrap();
        assert_eq!(generic_rank(&m).unwrap(), 1);
    }
}

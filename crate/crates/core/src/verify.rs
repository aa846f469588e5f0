//! Randomized invariant suites with reproducible seeds and counterexample dumps.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alexl2::{symmetry_report, AdmissibleTripleAbelian, Backend, EulerAction, TorsionFunction};
use crate::chain::{
    act_euler, dualize, torsion_with, torus_complex, BasedChainComplex, Monomial, TorsionMethod, EULER_EPSILON,
};
use crate::error::{Error, Result};
use crate::fkdet::{complex_det, fk_det, fk_det_square_poly, mahler_jensen, JensenData, QuadratureSettings};
use crate::groupring::{LaurentMatrix, LaurentPoly, Matrix};
use crate::knot::{braid_to_pd, bundled, presentation_complex, wirtinger, BraidWord, KnotRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fkdet,
    Duality,
    Euler,
    Torus,
    Alexander,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Fkdet, Suite::Duality, Suite::Euler, Suite::Torus, Suite::Alexander];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fkdet => "fkdet",
            Suite::Duality => "duality",
            Suite::Euler => "euler",
            Suite::Torus => "torus",
            Suite::Alexander => "alexander",
        }
    }

    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|s| s.name() == name).map(|&s| vec![s])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides the per-check case count.
    pub cases: Option<usize>,
    pub settings: QuadratureSettings,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 20_240_601, cases: None, settings: QuadratureSettings::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub tolerance: f64,
    pub passed: usize,
    pub total: usize,
    pub max_residual: f64,
    pub failures: Vec<Counterexample>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(CheckReport::pass)
    }
}

/// Outcome of one case: residual, or a failure message for errors.
type CaseResult = std::result::Result<f64, String>;

fn case_seed(seed: u64, check: &str, case: usize) -> u64 {
    // FNV-1a over the check name keeps seeds distinct across checks.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in check.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h ^ (case as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn run_check(
    name: &str,
    tolerance: f64,
    total: usize,
    seed: u64,
    mut case: impl FnMut(&mut ChaCha8Rng, usize) -> CaseResult,
) -> CheckReport {
    let mut passed = 0;
    let mut max_residual: f64 = 0.0;
    let mut failures = Vec::new();
    for i in 0..total {
        let s = case_seed(seed, name, i);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        match case(&mut rng, i) {
            Ok(r) if r <= tolerance => {
                passed += 1;
                max_residual = max_residual.max(r);
            }
            Ok(r) => {
                max_residual = max_residual.max(r);
                failures.push(Counterexample { case: i, seed: s, detail: format!("residual {r:e}") });
            }
            Err(detail) => failures.push(Counterexample { case: i, seed: s, detail }),
        }
    }
    CheckReport { name: name.into(), tolerance, passed, total, max_residual, failures }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

fn err(e: Error) -> String {
    e.to_string()
}

fn gauss(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gauss(rng), gauss(rng))
}

/// A nonzero Laurent polynomial with at most `span + 1` terms, exponents starting in `-2..=1`.
pub fn random_laurent(rng: &mut impl Rng, span: usize) -> LaurentPoly {
    loop {
        let low = rng.gen_range(-2..=1);
        let len = rng.gen_range(1..=span + 1);
        let p = LaurentPoly::from_coeffs(low, (0..len).map(|_| random_complex(rng)).collect());
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_laurent_matrix(rng: &mut impl Rng, rows: usize, cols: usize, span: usize) -> LaurentMatrix {
    Matrix::from_fn(rows, cols, |_, _| if rng.gen_bool(0.15) { LaurentPoly::zero() } else { random_laurent(rng, span) })
}

pub fn random_constant_matrix(rng: &mut impl Rng, n: usize) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

fn block_standard(rows_r: usize, rows_next: usize, cols_prev: usize, diag: &[LaurentPoly]) -> LaurentMatrix {
    // rows: r_i (mapped) then r_{i+1} (kernel); cols: r_{i-1} then r_i
    Matrix::from_fn(rows_r + rows_next, cols_prev + rows_r, |i, j| {
        if i < rows_r && j == cols_prev + i {
            diag[i].clone()
        } else {
            LaurentPoly::zero()
        }
    })
}

fn unipotent_with_inverse(rng: &mut impl Rng, n: usize, laurent: bool) -> (LaurentMatrix, LaurentMatrix) {
    let mut b: LaurentMatrix = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(0.5) {
                let k = if laurent { rng.gen_range(-1..=1) } else { 0 };
                b.set(i, j, LaurentPoly::monomial(random_complex(rng) * 0.7, k));
            }
        }
    }
    // forward substitution for the lower unipotent inverse
    let mut inv: LaurentMatrix = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            let mut acc = LaurentPoly::zero();
            for k in j..i {
                acc = &acc + &(b.get(i, k) * inv.get(k, j));
            }
            inv.set(i, j, -acc);
        }
    }
    (b, inv)
}

/// A based complex `A_i = B_i E_i B_{i-1}^-1` with block-standard `E_i`.
///
/// With `defect > 0` a free summand is added in a random degree so the complex
/// is not acyclic. Scalar complexes have constant entries and random invertible
/// `B_i`; Laurent complexes use unipotent `B_i` with monomial entries.
pub fn random_complex_chain(rng: &mut impl Rng, laurent: bool, defect: usize) -> Result<BasedChainComplex> {
    let m = rng.gen_range(1..=4);
    let max_r = if laurent { 2 } else { 3 };
    let mut r = vec![0usize; m + 2];
    for ri in r.iter_mut().take(m + 1).skip(1) {
        *ri = rng.gen_range(0..=max_r);
    }
    let extra_deg = rng.gen_range(0..=m);
    let mut ranks: Vec<usize> = (0..=m).map(|i| r[i] + r[i + 1]).collect();
    ranks[extra_deg] += defect;

    let mut bases = Vec::with_capacity(m + 1);
    for &n in &ranks {
        if laurent {
            bases.push(unipotent_with_inverse(rng, n, true));
        } else {
            let g = loop {
                let g = random_constant_matrix(rng, n);
                if let Some(inv) = g.clone().try_inverse() {
                    break (LaurentMatrix::from_constants(&g), LaurentMatrix::from_constants(&inv));
                }
            };
            bases.push(g);
        }
    }
    let mut boundaries = Vec::with_capacity(m);
    for i in 1..=m {
        let diag: Vec<LaurentPoly> = (0..r[i])
            .map(|_| if laurent { random_laurent(rng, 2) } else { LaurentPoly::constant(random_complex(rng)) })
            .collect();
        let mut e = block_standard(r[i], r[i + 1], r[i - 1], &diag);
        if defect > 0 {
            // pad the free summand with zero rows/columns
            let rows = ranks[i];
            let cols = ranks[i - 1];
            e = Matrix::from_fn(rows, cols, |a, b| {
                if a < e.rows() && b < e.cols() {
                    e.get(a, b).clone()
                } else {
                    LaurentPoly::zero()
                }
            });
        }
        let a = bases[i].0.mul(&e)?.mul(&bases[i - 1].1)?;
        boundaries.push(a);
    }
    BasedChainComplex::new(ranks, boundaries, 1.0)
}

/// A random braid on 2 to 4 strands with at most `max_crossings` letters whose closure is a knot.
pub fn random_knot_braid(rng: &mut impl Rng, max_crossings: usize) -> BraidWord {
    loop {
        let strands = rng.gen_range(2..=4usize);
        let len = rng.gen_range(strands - 1..=max_crossings);
        let letters: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands) as i32;
                if rng.gen_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let b = BraidWord::new(strands, letters).expect("indices in range");
        if b.closure_components() == 1 {
            return b;
        }
    }
}

fn fk_value(m: &LaurentMatrix, s: &QuadratureSettings) -> std::result::Result<f64, String> {
    fk_det(m, s).map(|r| r.value).map_err(err)
}

fn random_shape(rng: &mut impl Rng) -> (usize, usize) {
    (rng.gen_range(1..=4), rng.gen_range(1..=4))
}

fn fkdet_suite(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let n = cfg.cases.unwrap_or(100);
    let s = cfg.settings;
    vec![
        run_check("constant matrices give |det|", 1e-12, n, cfg.seed, |rng, _| {
            let k = rng.gen_range(1..=5);
            let a = random_constant_matrix(rng, k);
            let fk = fk_value(&LaurentMatrix::from_constants(&a), &s)?;
            Ok(rel(fk, complex_det(&a).norm()))
        }),
        run_check("row and column swaps", 1e-6, n, cfg.seed, |rng, _| {
            let (k, l) = random_shape(rng);
            let a = random_laurent_matrix(rng, k, l, 3);
            let mut b = a.clone();
            b.swap_rows(rng.gen_range(0..k), rng.gen_range(0..k));
            b.swap_cols(rng.gen_range(0..l), rng.gen_range(0..l));
            Ok(rel(fk_value(&a, &s)?, fk_value(&b, &s)?))
        }),
        run_check("column times +-z^k", 1e-6, n, cfg.seed, |rng, _| {
            let (k, l) = random_shape(rng);
            let a = random_laurent_matrix(rng, k, l, 3);
            let mut b = a.clone();
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            b.scale_col(rng.gen_range(0..l), &LaurentPoly::monomial(Complex64::new(sign, 0.0), rng.gen_range(-3..=3)));
            Ok(rel(fk_value(&a, &s)?, fk_value(&b, &s)?))
        }),
        run_check("involute-transpose", 1e-6, n, cfg.seed, |rng, _| {
            let (k, l) = random_shape(rng);
            let a = random_laurent_matrix(rng, k, l, 3);
            Ok(rel(fk_value(&a, &s)?, fk_value(&a.involute_transpose(), &s)?))
        }),
        run_check("quadrature agrees with interpolated determinant", 1e-6, n, cfg.seed, |rng, _| {
            let k = rng.gen_range(1..=4);
            let a = random_laurent_matrix(rng, k, k, 6);
            let exact = fk_det_square_poly(&a).map_err(err)?;
            if !exact.det_class {
                return Ok(0.0);
            }
            Ok(rel(fk_value(&a, &s)?, exact.value))
        }),
        run_check("dilated Mahler measure", 1e-6, n, cfg.seed, |rng, _| {
            let p = random_laurent(rng, 5);
            let jd = JensenData::of(&p).map_err(err)?;
            let mut worst: f64 = 0.0;
            for t in [0.5, 1.0, 2.0] {
                let direct = mahler_jensen(&p.dilate(t)).map_err(err)?;
                let quad = fk_value(&Matrix::from_fn(1, 1, |_, _| p.dilate(t)), &s)?;
                worst = worst.max(rel(direct, jd.dilated_measure(t))).max(rel(quad, direct));
            }
            Ok(worst)
        }),
    ]
}

fn duality_residual(c: &BasedChainComplex, method: &TorsionMethod) -> CaseResult {
    let tc = torsion_with(c, method).map_err(err)?.value;
    let td = torsion_with(&dualize(c), method).map_err(err)?.value;
    if tc == 0.0 || td == 0.0 {
        return if tc == td { Ok(0.0) } else { Err(format!("tau(C) = {tc:e}, tau(C#) = {td:e}")) };
    }
    let m = c.length() as i32;
    Ok(rel(td, tc.powi(if m % 2 == 0 { -1 } else { 1 })))
}

fn duality_suite(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let n = cfg.cases.unwrap_or(200);
    let quad = TorsionMethod::Quadrature(cfg.settings);
    vec![
        run_check("scalar complexes", 1e-9, n, cfg.seed, |rng, _| {
            let c = random_complex_chain(rng, false, 0).map_err(err)?;
            duality_residual(&c, &quad)
        }),
        run_check("Laurent complexes", 1e-6, (n / 4).max(1), cfg.seed, |rng, _| {
            let c = random_complex_chain(rng, true, 0).map_err(err)?;
            duality_residual(&c, &quad)
        }),
        run_check("zero torsion dualizes to zero", 0.0, (n / 10).max(1), cfg.seed, |rng, i| {
            let c = random_complex_chain(rng, i % 2 == 1, 1).map_err(err)?;
            let tc = torsion_with(&c, &quad).map_err(err)?.value;
            let td = torsion_with(&dualize(&c), &quad).map_err(err)?.value;
            if tc == 0.0 && td == 0.0 {
                Ok(0.0)
            } else {
                Err(format!("tau(C) = {tc:e}, tau(C#) = {td:e}"))
            }
        }),
    ]
}

fn random_actions(rng: &mut impl Rng, c: &BasedChainComplex) -> Vec<(usize, usize, Monomial)> {
    let count = rng.gen_range(1..=3);
    let degrees: Vec<usize> = (0..=c.length()).filter(|&d| c.ranks()[d] > 0).collect();
    (0..count)
        .map(|_| {
            let d = degrees[rng.gen_range(0..degrees.len())];
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            (d, rng.gen_range(0..c.ranks()[d]), Monomial::new(sign, rng.gen_range(-3..=3)))
        })
        .collect()
}

/// Fixture complexes whose torsion the exact route computes directly.
fn euler_fixture(rng: &mut impl Rng, i: usize) -> Result<BasedChainComplex> {
    let t = [0.5, 2.0, 3.0][rng.gen_range(0..3)];
    match i % 3 {
        0 => {
            let p = random_laurent(rng, 3);
            BasedChainComplex::new(vec![1, 1], vec![Matrix::from_fn(1, 1, |_, _| p.clone())], t)
        }
        1 => torus_complex(rng.gen_range(1..=2), rng.gen_range(-1..=1), t),
        _ => {
            let name = if rng.gen_bool(0.5) { "trefoil" } else { "figure-eight" };
            presentation_complex(&bundled(name).expect("bundled").presentation()?, t)
        }
    }
}

fn euler_residual(c: &BasedChainComplex, rng: &mut ChaCha8Rng, method: &TorsionMethod) -> CaseResult {
    let before = torsion_with(c, method).map_err(err)?.value;
    let mut moved = c.clone();
    let mut k = 0;
    for (d, j, g) in random_actions(rng, c) {
        moved = act_euler(&moved, d, j, g).map_err(err)?;
        k += g.power;
    }
    let after = torsion_with(&moved, method).map_err(err)?.value;
    Ok((after.ln() - before.ln() - (EULER_EPSILON * k) as f64 * c.t().ln()).abs())
}

fn euler_suite(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let n = cfg.cases.unwrap_or(30);
    let quad = TorsionMethod::Quadrature(cfg.settings);
    let settings = cfg.settings;
    vec![
        run_check("log-torsion shift, exact route", 1e-9, n, cfg.seed, |rng, i| {
            let c = euler_fixture(rng, i).map_err(err)?;
            euler_residual(&c, rng, &TorsionMethod::Exact)
        }),
        run_check("log-torsion shift, quadrature", 1e-5, n, cfg.seed, |rng, i| {
            let c = euler_fixture(rng, i).map_err(err)?;
            euler_residual(&c, rng, &quad)
        }),
        run_check("parity of symmetry exponent", 0.0, (n / 3).max(2), cfg.seed, |rng, i| {
            let name = if i % 2 == 0 { "trefoil" } else { "figure-eight" };
            let triple = AdmissibleTripleAbelian::from_record(&bundled(name).expect("bundled")).map_err(err)?;
            let backend = if i % 4 < 2 { Backend::Roots } else { Backend::Quadrature };
            let base = TorsionFunction::new(triple, backend).with_settings(settings);
            let mut moved = base.clone();
            for _ in 0..rng.gen_range(1..=3) {
                let degree = rng.gen_range(0..=2usize);
                let rank = [1, moved.triple.presentation().generators(), moved.triple.presentation().relators().len()][degree];
                if rank == 0 {
                    continue;
                }
                moved = moved.with_action(EulerAction { degree, index: rng.gen_range(0..rank), power: rng.gen_range(-3..=3) });
            }
            let grid = [2.0, 3.0, 5.0];
            let a = symmetry_report(&base, &grid).map_err(err)?;
            let b = symmetry_report(&moved, &grid).map_err(err)?;
            if a.parity.is_some() && a.parity == b.parity && b.pass {
                Ok(0.0)
            } else {
                Err(format!("parity {:?} became {:?} (n = {} -> {})", a.parity, b.parity, a.fitted, b.fitted))
            }
        }),
    ]
}

fn torus_suite(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let classes = [(1, 0), (1, 1), (0, 1), (2, 1), (1, -1)];
    let ts = [0.5, 1.0, 2.0, 5.0];
    let total = classes.len() * ts.len();
    let quad = TorsionMethod::Quadrature(cfg.settings);
    vec![
        run_check("torsion equals one", 1e-6, total, cfg.seed, |_, i| {
            let (a, b) = classes[i / ts.len()];
            let c = torus_complex(a, b, ts[i % ts.len()]).map_err(err)?;
            Ok((torsion_with(&c, &quad).map_err(err)?.value - 1.0).abs())
        }),
        run_check("dual torsion equals one", 1e-6, total, cfg.seed, |_, i| {
            let (a, b) = classes[i / ts.len()];
            let c = dualize(&torus_complex(a, b, ts[i % ts.len()]).map_err(err)?);
            Ok((torsion_with(&c, &quad).map_err(err)?.value - 1.0).abs())
        }),
    ]
}

fn alexander_suite(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let n = cfg.cases.unwrap_or(20);
    let delta = |rng: &mut ChaCha8Rng| -> std::result::Result<LaurentPoly, String> {
        let b = random_knot_braid(rng, 8);
        let rec = KnotRecord::from_braid("random", b.clone());
        rec.alexander().map_err(|e| format!("{b}: {e}"))
    };
    vec![
        run_check("Delta(1/z) = +-z^-d Delta(z)", 1e-9, n, cfg.seed, |rng, _| {
            let d = delta(rng)?;
            let mirrored = crate::knot::normalize_alexander(&d.involute());
            Ok(mirrored.distance(&d))
        }),
        run_check("|Delta(1)| = 1", 1e-9, n, cfg.seed, |rng, _| {
            let d = delta(rng)?;
            Ok((d.eval(Complex64::new(1.0, 0.0)).norm() - 1.0).abs())
        }),
        run_check("Fox identity residual", 1e-12, n, cfg.seed, |rng, _| {
            let b = random_knot_braid(rng, 8);
            let p = wirtinger(&braid_to_pd(&b).map_err(err)?).map_err(err)?;
            let c = presentation_complex(&p, rng.gen_range(0.3..3.0)).map_err(err)?;
            if c.length() < 2 || c.ranks()[2] == 0 {
                return Ok(0.0);
            }
            Ok(c.boundary(2).mul(c.boundary(1)).map_err(err)?.max_entry_norm())
        }),
    ]
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let checks = match suite {
        Suite::Fkdet => fkdet_suite(cfg),
        Suite::Duality => duality_suite(cfg),
        Suite::Euler => euler_suite(cfg),
        Suite::Torus => torus_suite(cfg),
        Suite::Alexander => alexander_suite(cfg),
    };
    SuiteReport { suite, seed: cfg.seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::l2_betti_generic;

    #[test]
    fn random_complexes_are_acyclic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for laurent in [false, true] {
            for _ in 0..10 {
                let c = random_complex_chain(&mut rng, laurent, 0).unwrap();
                assert!(l2_betti_generic(&c).unwrap().iter().all(|&b| b == 0));
            }
        }
    }

    #[test]
    fn defect_breaks_acyclicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let c = random_complex_chain(&mut rng, false, 1).unwrap();
            assert!(l2_betti_generic(&c).unwrap().iter().any(|&b| b != 0));
        }
    }

    #[test]
    fn random_braids_close_to_knots() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let b = random_knot_braid(&mut rng, 8);
            assert_eq!(b.closure_components(), 1);
            assert!(b.letters().len() <= 8);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let cfg = VerifyConfig { cases: Some(3), ..VerifyConfig::default() };
        assert_eq!(run_suite(Suite::Fkdet, &cfg), run_suite(Suite::Fkdet, &cfg));
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse("all").unwrap().len(), 5);
        assert_eq!(Suite::parse("torus").unwrap(), vec![Suite::Torus]);
        assert!(Suite::parse("bogus").is_none());
    }
}

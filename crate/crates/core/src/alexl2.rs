//! The L2-Alexander torsion function `t -> tau(t)` of a knot exterior for the
//! abelian representation `gamma = phi`, with two backends and the symmetry
//! exponent `n` in `tau(1/t) = t^n tau(t)`.

use serde::Serialize;

use crate::chain::{act_euler, torsion_with, BasedChainComplex, Monomial, TorsionMethod, EULER_EPSILON};
use crate::error::{Error, Result};
use crate::fkdet::{JensenData, QuadratureSettings};
use crate::groupring::LaurentPoly;
use crate::knot::{alexander_polynomial, presentation_complex, KnotRecord, WirtingerPresentation};

/// Grid points closer than this to `t = 1` are rejected.
pub const GRID_EXCLUSION: f64 = 1e-3;
/// Maximal deviation of `n(t)` from an integer for the report to pass.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

pub const ROOTS_NORMALIZATION: &str = "|c| prod max(t,|a_i|) / max(t,1)";
pub const QUADRATURE_NORMALIZATION: &str = "presentation complex, given Euler lift";

/// A knot exterior with `phi` the meridian map scaled by a real factor `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleTripleAbelian {
    name: String,
    presentation: WirtingerPresentation,
    alexander: LaurentPoly,
    jensen: JensenData,
    genus: Option<u32>,
    scale: f64,
}

impl AdmissibleTripleAbelian {
    /// Rejects knots with `Delta = 1` as a conservative stand-in for the unknot,
    /// whose exterior is a solid torus.
    pub fn new(name: &str, presentation: WirtingerPresentation, genus: Option<u32>) -> Result<Self> {
        let alexander = alexander_polynomial(&presentation)?;
        if alexander.span() == 0 {
            return Err(Error::NotAdmissible(format!(
                "{name}: Delta = 1, the exterior is not distinguished from a solid torus"
            )));
        }
        let jensen = JensenData::of(&alexander)?;
        Ok(AdmissibleTripleAbelian { name: name.into(), presentation, alexander, jensen, genus, scale: 1.0 })
    }

    pub fn from_record(rec: &KnotRecord) -> Result<Self> {
        Self::new(&rec.name, rec.presentation()?, rec.genus()?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn presentation(&self) -> &WirtingerPresentation {
        &self.presentation
    }

    pub fn alexander(&self) -> &LaurentPoly {
        &self.alexander
    }

    pub fn genus(&self) -> Option<u32> {
        self.genus
    }

    /// The real factor `r` in `r * phi`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `|r| (2g - 1)` when `r` is an integer and the genus is known.
    pub fn thurston_norm(&self) -> Option<i64> {
        let g = self.genus? as i64;
        (self.scale.fract() == 0.0).then(|| self.scale.abs() as i64 * (2 * g - 1))
    }
}

/// The triple with `phi` replaced by `r * phi`.
pub fn real_scale(triple: &AdmissibleTripleAbelian, r: f64) -> Result<AdmissibleTripleAbelian> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("real scale must be finite and nonzero, got {r}")));
    }
    let mut out = triple.clone();
    out.scale *= r;
    Ok(out)
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("t must be positive, got {t}")))
    }
}

/// `|c| prod max(s, |a_i|) / max(s, 1)` at `s = t^r`, from the roots of `Delta`.
pub fn torsion_roots(triple: &AdmissibleTripleAbelian, t: f64) -> Result<f64> {
    check_t(t)?;
    let s = t.powf(triple.scale);
    Ok(triple.jensen.dilated_measure(s) / s.max(1.0))
}

/// The presentation complex of the triple at `t`; `r * phi` at `t` is `phi` at `t^r`.
pub fn triple_complex(triple: &AdmissibleTripleAbelian, t: f64) -> Result<BasedChainComplex> {
    check_t(t)?;
    presentation_complex(&triple.presentation, t.powf(triple.scale))
}

/// Chain-level torsion of the presentation complex by circle quadrature.
pub fn torsion_quadrature(triple: &AdmissibleTripleAbelian, t: f64, settings: &QuadratureSettings) -> Result<f64> {
    Ok(torsion_with(&triple_complex(triple, t)?, &TorsionMethod::Quadrature(*settings))?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Roots,
    Quadrature,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Roots => "roots",
            Backend::Quadrature => "quadrature",
        }
    }

    pub fn normalization(self) -> &'static str {
        match self {
            Backend::Roots => ROOTS_NORMALIZATION,
            Backend::Quadrature => QUADRATURE_NORMALIZATION,
        }
    }
}

/// Moving the `index`-th cell of `degree` in the Euler lift by `z^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerAction {
    pub degree: usize,
    pub index: usize,
    pub power: i64,
}

/// `t -> tau(t)` for a triple, a backend and a choice of Euler lift.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionFunction {
    pub triple: AdmissibleTripleAbelian,
    pub backend: Backend,
    pub settings: QuadratureSettings,
    pub actions: Vec<EulerAction>,
}

impl TorsionFunction {
    pub fn new(triple: AdmissibleTripleAbelian, backend: Backend) -> Self {
        TorsionFunction { triple, backend, settings: QuadratureSettings::default(), actions: Vec::new() }
    }

    pub fn with_settings(mut self, settings: QuadratureSettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn with_action(mut self, action: EulerAction) -> Self {
        self.actions.push(action);
        self
    }

    pub fn normalization(&self) -> &'static str {
        self.backend.normalization()
    }

    /// Total power `k` of the Euler actions; they multiply `tau` by `(t^r)^(EULER_EPSILON k)`.
    pub fn euler_shift(&self) -> i64 {
        self.actions.iter().map(|a| a.power).sum()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self.backend {
            Backend::Roots => {
                let base = torsion_roots(&self.triple, t)?;
                let k = (EULER_EPSILON * self.euler_shift()) as f64;
                Ok(base * t.powf(self.triple.scale * k))
            }
            Backend::Quadrature => {
                let mut c = triple_complex(&self.triple, t)?;
                for a in &self.actions {
                    c = act_euler(&c, a.degree, a.index, Monomial::z(a.power))?;
                }
                Ok(torsion_with(&c, &TorsionMethod::Quadrature(self.settings))?.value)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Parity {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub grid: Vec<f64>,
    /// `n(t) = log(tau(1/t) / tau(t)) / log t` for each grid point.
    pub exponents: Vec<f64>,
    pub fitted: f64,
    /// Maximal deviation of `n(t)` from the fitted mean.
    pub spread: f64,
    /// Maximal deviation of `n(t)` from the nearest integer to the mean; `None` for non-integer scales.
    pub integrality_residual: Option<f64>,
    pub parity: Option<Parity>,
    pub expected_parity: Option<Parity>,
    pub pass: bool,
}

/// Fits `n` in `tau(1/t) = t^n tau(t)` over `grid`.
pub fn symmetry_report(f: &TorsionFunction, grid: &[f64]) -> Result<SymmetryReport> {
    if grid.len() < 3 {
        return Err(Error::InvalidArgument(format!("symmetry needs at least 3 grid points, got {}", grid.len())));
    }
    for &t in grid {
        check_t(t)?;
        if (t - 1.0).abs() < GRID_EXCLUSION {
            return Err(Error::InvalidArgument(format!("grid point {t} too close to 1")));
        }
    }
    let mut exponents = Vec::with_capacity(grid.len());
    for &t in grid {
        let (fwd, back) = (f.eval(t)?, f.eval(1.0 / t)?);
        if fwd == 0.0 || back == 0.0 {
            return Err(Error::Vacuous(t));
        }
        exponents.push((back / fwd).ln() / t.ln());
    }
    let fitted = exponents.iter().sum::<f64>() / exponents.len() as f64;
    let spread = exponents.iter().map(|n| (n - fitted).abs()).fold(0.0, f64::max);
    let integral = f.triple.scale.fract() == 0.0;
    let (integrality_residual, parity) = if integral {
        let rounded = fitted.round();
        let residual = exponents.iter().map(|n| (n - rounded).abs()).fold(0.0, f64::max);
        (Some(residual), Some(Parity::of(rounded as i64)))
    } else {
        (None, None)
    };
    let expected_parity = f.triple.thurston_norm().map(Parity::of);
    let pass = integrality_residual.is_none_or(|r| r <= INTEGRALITY_TOLERANCE)
        && match (parity, expected_parity) {
            (Some(p), Some(e)) => p == e,
            _ => true,
        };
    Ok(SymmetryReport {
        grid: grid.to_vec(),
        exponents,
        fitted,
        spread,
        integrality_residual,
        parity,
        expected_parity,
        pass,
    })
}

/// The integer `m` with `tau_quadrature(t) = t^m tau_roots(t)` at each grid point,
/// together with the worst residual `|log ratio - m log t|`.
pub fn backend_offset(triple: &AdmissibleTripleAbelian, grid: &[f64], settings: &QuadratureSettings) -> Result<(i64, f64)> {
    let mut ms = Vec::new();
    let mut logs = Vec::new();
    for &t in grid {
        check_t(t)?;
        let q = torsion_quadrature(triple, t, settings)?;
        let r = torsion_roots(triple, t)?;
        let d = q.ln() - r.ln();
        if (t - 1.0).abs() >= GRID_EXCLUSION {
            ms.push(d / t.ln());
        }
        logs.push((t, d));
    }
    if ms.is_empty() {
        return Err(Error::InvalidArgument("backend offset needs a grid point away from 1".into()));
    }
    let m = (ms.iter().sum::<f64>() / ms.len() as f64).round();
    let residual = logs.iter().map(|&(t, d)| (d - m * t.ln()).abs()).fold(0.0, f64::max);
    Ok((m as i64, residual))
}

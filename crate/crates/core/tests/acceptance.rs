//! Acceptance criteria, one PASS/FAIL line each. Runs without the test harness
//! so the lines are always printed; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use torsionlab::alexl2::{backend_offset, real_scale, symmetry_report, AdmissibleTripleAbelian, Backend, Parity, TorsionFunction};
use torsionlab::chain::{torsion_with, torus_complex, TorsionMethod};
use torsionlab::fkdet::QuadratureSettings;
use torsionlab::groupring::LaurentPoly;
use torsionlab::knot::bundled;
use torsionlab::verify::{run_suite, Suite, SuiteReport, VerifyConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn triple(name: &str) -> AdmissibleTripleAbelian {
    AdmissibleTripleAbelian::from_record(&bundled(name).expect("bundled knot")).expect("admissible")
}

fn within(elapsed: Duration, limit_secs: u64) -> Outcome {
    if elapsed <= Duration::from_secs(limit_secs) {
        Ok(format!("{:.2}s < {limit_secs}s", elapsed.as_secs_f64()))
    } else {
        Err(format!("took {:.2}s, limit {limit_secs}s", elapsed.as_secs_f64()))
    }
}

fn suite_outcome(reports: &[SuiteReport]) -> Outcome {
    let mut summary = Vec::new();
    for r in reports {
        for c in &r.checks {
            summary.push(format!("{} {}/{}", c.name, c.passed, c.total));
            if !c.pass() {
                let first = c.failures.first().map(|f| format!("case {} seed {}: {}", f.case, f.seed, f.detail));
                return Err(format!("{}: {}/{} passed; {}", c.name, c.passed, c.total, first.unwrap_or_default()));
            }
        }
    }
    Ok(summary.join(", "))
}

fn torus_is_trivial() -> Outcome {
    let start = Instant::now();
    let method = TorsionMethod::Quadrature(QuadratureSettings::default());
    let mut worst: f64 = 0.0;
    for (a, b) in [(1, 0), (1, 1)] {
        for t in [0.5, 1.0, 2.0, 5.0] {
            let v = torsion_with(&torus_complex(a, b, t).map_err(|e| e.to_string())?, &method)
                .map_err(|e| e.to_string())?
                .value;
            worst = worst.max((v - 1.0).abs());
        }
    }
    if worst > 1e-6 {
        return Err(format!("max |tau - 1| = {worst:e}"));
    }
    Ok(format!("max |tau - 1| = {worst:e}, {}", within(start.elapsed(), 5)?))
}

fn knot_symmetry() -> Outcome {
    let start = Instant::now();
    let grid = [2.0, 3.0, 5.0];
    let mut notes = Vec::new();
    for name in ["trefoil", "figure-eight"] {
        let tr = triple(name);
        if tr.genus() != Some(1) || tr.thurston_norm() != Some(1) {
            return Err(format!("{name}: genus {:?}, Thurston norm {:?}", tr.genus(), tr.thurston_norm()));
        }
        for (backend, tol) in [(Backend::Roots, 1e-9), (Backend::Quadrature, 1e-6)] {
            let r = symmetry_report(&TorsionFunction::new(tr.clone(), backend), &grid).map_err(|e| e.to_string())?;
            let residual = r.integrality_residual.ok_or("no integrality residual")?;
            let ok = residual <= tol
                && r.parity == Some(Parity::Odd)
                && r.expected_parity == Some(Parity::Odd)
                && (backend != Backend::Roots || r.fitted.round() == -1.0);
            if !ok {
                return Err(format!("{name}/{}: n = {}, residual {residual:e}, parity {:?}", backend.name(), r.fitted, r.parity));
            }
            notes.push(format!("{name}/{} n = {}", backend.name(), r.fitted.round()));
        }
    }
    Ok(format!("{}, {}", notes.join(", "), within(start.elapsed(), 5)?))
}

fn timed_suites(suites: &[Suite], limit: Option<u64>) -> Outcome {
    let start = Instant::now();
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &VerifyConfig::default())).collect();
    let summary = suite_outcome(&reports)?;
    match limit {
        Some(l) => Ok(format!("{summary}, {}", within(start.elapsed(), l)?)),
        None => Ok(summary),
    }
}

fn backends_agree() -> Outcome {
    let mut notes = Vec::new();
    for name in ["trefoil", "figure-eight"] {
        let (m, residual) = backend_offset(&triple(name), &[0.5, 2.0, 3.0], &QuadratureSettings::default())
            .map_err(|e| e.to_string())?;
        if residual > 1e-5 {
            return Err(format!("{name}: m = {m}, residual {residual:e}"));
        }
        notes.push(format!("{name} m = {m} residual {residual:.1e}"));
    }
    Ok(notes.join(", "))
}

fn alexander_pipeline() -> Outcome {
    let start = Instant::now();
    for (name, coeffs) in [("trefoil", [1.0, -1.0, 1.0]), ("figure-eight", [1.0, -3.0, 1.0])] {
        let delta = bundled(name).unwrap().alexander().map_err(|e| e.to_string())?;
        if delta != LaurentPoly::from_real(0, &coeffs) {
            return Err(format!("{name}: Delta = {delta}"));
        }
    }
    let summary = suite_outcome(&[run_suite(Suite::Alexander, &VerifyConfig::default())])?;
    Ok(format!("trefoil z^2 - z + 1, figure-eight z^2 - 3z + 1, {summary}, {}", within(start.elapsed(), 30)?))
}

fn real_classes() -> Outcome {
    let grid = [0.5, 2.0, 3.0, 5.0];
    let sym_grid = [2.0, 3.0, 5.0];
    let mut worst: f64 = 0.0;
    for name in ["trefoil", "figure-eight"] {
        let base = TorsionFunction::new(triple(name), Backend::Roots);
        let n = symmetry_report(&base, &sym_grid).map_err(|e| e.to_string())?.fitted;
        for r in [0.5, 2.0, -1.0] {
            let scaled = TorsionFunction::new(real_scale(&triple(name), r).map_err(|e| e.to_string())?, Backend::Roots);
            for &t in &grid {
                let (a, b) = (scaled.eval(t).map_err(|e| e.to_string())?, base.eval(t.powf(r)).map_err(|e| e.to_string())?);
                worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
            }
            let fitted = symmetry_report(&scaled, &sym_grid).map_err(|e| e.to_string())?.fitted;
            if (fitted - r * n).abs() > 1e-9 {
                return Err(format!("{name}, r = {r}: exponent {fitted}, expected {}", r * n));
            }
        }
    }
    if worst > 1e-9 {
        return Err(format!("max relative deviation {worst:e}"));
    }
    Ok(format!("max relative deviation {worst:e}, exponents scale by r"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 torus complex torsion is 1", torus_is_trivial),
        ("2 knot symmetry exponent and parity", knot_symmetry),
        ("3 duality suite", || timed_suites(&[Suite::Duality], Some(60))),
        ("4 determinant properties suite", || timed_suites(&[Suite::Fkdet], None)),
        ("5 Euler lift shifts and parity", || timed_suites(&[Suite::Euler], None)),
        ("6 backend cross-validation", backends_agree),
        ("7 Alexander pipeline", alexander_pipeline),
        ("8 real classes", real_classes),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Torsion values against closed forms computed by hand from the roots of Delta.

use torsionlab::alexl2::{real_scale, torsion_quadrature, AdmissibleTripleAbelian, Backend, TorsionFunction};
use torsionlab::fkdet::QuadratureSettings;
use torsionlab::knot::bundled;

fn triple(name: &str) -> AdmissibleTripleAbelian {
    AdmissibleTripleAbelian::from_record(&bundled(name).unwrap()).unwrap()
}

// Delta = z^2 - z + 1 has both roots on the circle: M(Delta(tz)) = max(1, t)^2.
fn trefoil(t: f64) -> f64 {
    t.max(1.0)
}

// Delta = z^2 - 3z + 1 has roots a and 1/a with a = (3 + sqrt 5) / 2.
fn figure_eight(t: f64) -> f64 {
    let a = (3.0 + 5f64.sqrt()) / 2.0;
    t * t * (a / t).max(1.0) * (1.0 / (a * t)).max(1.0) / t.max(1.0)
}

const GRID: [f64; 7] = [0.2, 0.5, 0.9, 1.0, 1.5, 2.0, 7.0];

#[test]
fn roots_backend_closed_forms() {
    for (name, oracle) in [("trefoil", trefoil as fn(f64) -> f64), ("figure-eight", figure_eight)] {
        let f = TorsionFunction::new(triple(name), Backend::Roots);
        for t in GRID {
            let v = f.eval(t).unwrap();
            assert!((v - oracle(t)).abs() <= 1e-12 * oracle(t), "{name} at {t}: {v} vs {}", oracle(t));
        }
    }
}

#[test]
fn quadrature_backend_closed_forms() {
    let s = QuadratureSettings::default();
    for (name, oracle) in [("trefoil", trefoil as fn(f64) -> f64), ("figure-eight", figure_eight)] {
        for t in GRID {
            let v = torsion_quadrature(&triple(name), t, &s).unwrap();
            assert!((v - oracle(t)).abs() <= 1e-6 * oracle(t), "{name} at {t}: {v} vs {}", oracle(t));
        }
    }
}

#[test]
fn figure_eight_symmetry_by_hand() {
    // tau(1/t) = t^-1 tau(t) for the pinned representative
    for t in [2.0, 3.0, 5.0] {
        assert!((figure_eight(1.0 / t) - figure_eight(t) / t).abs() < 1e-12);
    }
}

#[test]
fn real_scale_closed_form() {
    for r in [0.5, 2.0, -1.0] {
        let f = TorsionFunction::new(real_scale(&triple("trefoil"), r).unwrap(), Backend::Roots);
        let q = real_scale(&triple("trefoil"), r).unwrap();
        for t in [0.5f64, 2.0, 3.0] {
            let expected = trefoil(t.powf(r));
            assert!((f.eval(t).unwrap() - expected).abs() <= 1e-12 * expected);
            let vq = torsion_quadrature(&q, t, &QuadratureSettings::default()).unwrap();
            assert!((vq - expected).abs() <= 1e-6 * expected, "r = {r}, t = {t}: {vq} vs {expected}");
        }
    }
}

//! Linearity, superposition and parity of the numeric force and torque.

use lubgap::fields::ProblemParams;
use lubgap::geometry::{Dimension, GapProfile};
use lubgap::traction::{force_numeric, total_numeric};
use lubgap::QuadSpec;
use proptest::prelude::*;
use std::f64::consts::PI;

fn spec() -> QuadSpec {
    QuadSpec::with_rel_tol(1e-8)
}

fn p3(flat: bool, eps: f64, u: [f64; 3], w: [f64; 3]) -> ProblemParams {
    let pr = if flat {
        GapProfile::flat_capped(Dimension::Three, 0.15, 0.5, eps, 1.0).unwrap()
    } else {
        GapProfile::m_convex(Dimension::Three, 2.0, 0.5, eps, 1.0).unwrap()
    };
    ProblemParams::new_3d(pr, 1.3, u, w).unwrap()
}

fn p2(eps: f64, u: [f64; 2], w: f64) -> ProblemParams {
    let pr = GapProfile::m_convex(Dimension::Two, 2.0, 0.5, eps, 1.0).unwrap();
    ProblemParams::new_2d(pr, 1.3, u, w).unwrap()
}

fn tolerance(a: &[f64], ea: &[f64], b: &[f64], eb: &[f64]) -> Vec<f64> {
    a.iter()
        .zip(ea)
        .zip(b.iter().zip(eb))
        .map(|((a, ea), (b, eb))| 10.0 * (ea + eb) + 1e-9 * (a.abs() + b.abs()))
        .collect()
}

fn motion() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(-1.0f64..1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn total_is_linear(m in motion(), c in -3.0f64..3.0, flat in any::<bool>()) {
        let u = [m[0], m[1], m[2]];
        let w = [m[3], m[4], m[5]];
        let a = total_numeric(&p3(flat, 1e-2, u, w), &spec()).unwrap();
        let b = total_numeric(&p3(flat, 1e-2, u.map(|v| c * v), w.map(|v| c * v)), &spec()).unwrap();
        let scaled: Vec<f64> = a.values().iter().map(|v| c * v).collect();
        let scaled_err: Vec<f64> = a.errors().iter().map(|e| c.abs() * e).collect();
        let tol = tolerance(&scaled, &scaled_err, &b.values(), &b.errors());
        for ((x, y), t) in scaled.iter().zip(b.values()).zip(tol) {
            prop_assert!((x - y).abs() <= t, "{x} vs {y}");
        }
    }

    #[test]
    fn total_superposes(m in motion(), n in motion()) {
        let split = |v: [f64; 6]| ([v[0], v[1], v[2]], [v[3], v[4], v[5]]);
        let (u1, w1) = split(m);
        let (u2, w2) = split(n);
        let sum: [f64; 6] = std::array::from_fn(|i| m[i] + n[i]);
        let (us, ws) = split(sum);
        let a = total_numeric(&p3(false, 1e-2, u1, w1), &spec()).unwrap();
        let b = total_numeric(&p3(false, 1e-2, u2, w2), &spec()).unwrap();
        let s = total_numeric(&p3(false, 1e-2, us, ws), &spec()).unwrap();
        let ab = a.add(&b);
        let tol = tolerance(&ab.values(), &ab.errors(), &s.values(), &s.errors());
        for ((x, y), t) in ab.values().iter().zip(s.values()).zip(tol) {
            prop_assert!((x - y).abs() <= t, "{x} vs {y}");
        }
    }

    // Spin about the contact axis is excluded: its torque is measurably nonzero.
    #[test]
    fn spin_torque_vanishes(m in motion(), flat in any::<bool>()) {
        let p = p3(flat, 1e-3, [m[0], m[1], m[2]], [m[3], m[4], 0.0]);
        let t = total_numeric(&p, &spec()).unwrap();
        let scale = t.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        prop_assert!(t.torque[2].abs() <= 10.0 * t.torque_error[2] + 1e-10 * scale, "T3={}", t.torque[2]);
    }
}

#[test]
fn translation_parity_zeros() {
    let p = p3(false, 1e-3, [1.0, 0.0, 0.0], [0.0; 3]);
    let f = force_numeric(1, &p, &spec()).unwrap();
    let scale = f.force[0].abs();
    for (name, v, e) in [
        ("F2", f.force[1], f.force_error[1]),
        ("F3", f.force[2], f.force_error[2]),
        ("T1", f.torque[0], f.torque_error[0]),
        ("T3", f.torque[2], f.torque_error[2]),
    ] {
        assert!(v.abs() <= 10.0 * e + 1e-10 * scale, "{name}={v}");
    }
    assert!(f.force[0] < 0.0);
}

#[test]
fn squeeze_force_matches_lubrication_limit() {
    // Frozen from an independent run at rel_tol 1e-10; the leading term is 3 pi mu / (2 eps).
    let eps = 1e-4;
    let p = ProblemParams::new_3d(
        GapProfile::m_convex(Dimension::Three, 2.0, 0.5, eps, 1.0).unwrap(),
        1.0,
        [0.0, 0.0, -1.0],
        [0.0; 3],
    )
    .unwrap();
    let f = force_numeric(3, &p, &spec()).unwrap();
    assert!(
        (f.force[2] - 47098.0).abs() <= 1e-3 * 47098.0,
        "F3={}",
        f.force[2]
    );
    assert!((f.force[2] / (1.5 * PI / eps) - 1.0).abs() < 0.02);
    assert!(f.force[0].abs() <= 10.0 * f.force_error[0] + 1e-10 * f.force[2]);
    assert!(f.force[1].abs() <= 10.0 * f.force_error[1] + 1e-10 * f.force[2]);
}

#[test]
fn planar_squeeze_has_no_tangential_force() {
    let p = p2(1e-3, [0.0, -1.0], 0.0);
    let f = total_numeric(&p, &spec()).unwrap();
    assert!(f.force[1] > 0.0);
    assert!(f.force[0].abs() <= 10.0 * f.force_error[0] + 1e-10 * f.force[1]);
    assert!(f.torque[0].abs() <= 10.0 * f.torque_error[0] + 1e-10 * f.force[1]);
}

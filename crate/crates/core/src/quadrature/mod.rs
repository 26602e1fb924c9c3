//! Adaptive quadrature: 1D intervals, nested integrals with cached
//! antiderivatives, and surface integrals over the gap boundary.

mod kronrod;
mod nested;
mod surface;

pub use nested::{integrate_nested, CumulativeIntegral};
pub use surface::{
    integrate_disk_vec, integrate_surface, integrate_surface_vec, radial_breakpoints, AngularRule,
};

use crate::error::{Error, Result};
use kronrod::Panel;
use serde::{Deserialize, Serialize};

/// Tolerances and breakpoints for an adaptive integration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub split_points: Vec<f64>,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
            split_points: Vec::new(),
        }
    }
}

impl QuadSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_splits(&self, split_points: Vec<f64>) -> Self {
        Self {
            split_points,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0)
            || (self.abs_tol == 0.0 && self.rel_tol == 0.0)
        {
            return Err(Error::Domain(
                "quadrature needs a positive abs_tol or rel_tol".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Result of a vector-valued integration, one error estimate per component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VecQuadResult<const K: usize> {
    pub value: [f64; K],
    pub error_estimate: [f64; K],
    /// Integral of the magnitude proxy.
    pub magnitude: [f64; K],
    pub evaluations: usize,
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b].
pub fn integrate_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult> {
    let r = integrate_1d_vec::<1>(
        |x| {
            let v = f(x);
            Ok(([v], [v]))
        },
        a,
        b,
        spec,
    )?;
    Ok(QuadResult {
        value: r.value[0],
        error_estimate: r.error_estimate[0],
        evaluations: r.evaluations,
    })
}

/// Adaptive integration of a fallible vector-valued integrand.
///
/// The integrand returns `(value, magnitude)`; the magnitude only feeds the
/// roundoff floor of the error estimate. Every component must satisfy
/// `error <= max(abs_tol, rel_tol * |value|)` once each panel's roundoff floor
/// is discounted.
/// Panels are split by global bisection of the worst panel, and the final
/// sums run over panels in left-to-right order so results are reproducible.
pub fn integrate_1d_vec<const K: usize>(
    mut f: impl FnMut(f64) -> Result<([f64; K], [f64; K])>,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<VecQuadResult<K>> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("non-finite interval [{a}, {b}]")));
    }
    if a > b {
        return Err(Error::Domain(format!("reversed interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(VecQuadResult {
            value: [0.0; K],
            error_estimate: [0.0; K],
            magnitude: [0.0; K],
            evaluations: 0,
        });
    }
    let mut edges = vec![a];
    let mut splits: Vec<f64> = spec
        .split_points
        .iter()
        .copied()
        .filter(|&s| s > a && s < b)
        .collect();
    splits.sort_by(|x, y| x.partial_cmp(y).unwrap());
    splits.dedup();
    edges.extend(splits);
    edges.push(b);

    let mut panels: Vec<Panel<K>> = Vec::with_capacity(edges.len() * 4);
    let mut evaluations = 0;
    for w in edges.windows(2) {
        panels.push(kronrod::apply(&mut f, w[0], w[1])?);
        evaluations += kronrod::NODES;
    }
    let mut frozen = vec![false; panels.len()];
    let mut splits_done = 0;

    loop {
        let (value, error, excess, magnitude) = totals(&panels);
        let mut worst: Option<(usize, f64)> = None;
        let mut converged = true;
        for k in 0..K {
            let tol = spec.abs_tol.max(spec.rel_tol * value[k].abs());
            if excess[k] > tol {
                converged = false;
            }
        }
        if converged {
            return Ok(VecQuadResult {
                value,
                error_estimate: error,
                magnitude,
                evaluations,
            });
        }
        for (i, p) in panels.iter().enumerate() {
            if frozen[i] {
                continue;
            }
            let mut score = 0.0f64;
            for k in 0..K {
                let tol = spec
                    .abs_tol
                    .max(spec.rel_tol * value[k].abs())
                    .max(f64::MIN_POSITIVE);
                score = score.max(p.excess(k) / tol);
            }
            if score > 0.0 && worst.is_none_or(|(_, s)| score > s) {
                worst = Some((i, score));
            }
        }
        let Some((i, _)) = worst else {
            return Err(best_effort(value, error, evaluations));
        };
        if splits_done >= spec.max_subdivisions {
            return Err(best_effort(value, error, evaluations));
        }
        let p = panels[i];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) || (p.b - p.a) <= 4.0 * f64::EPSILON * p.a.abs().max(p.b.abs())
        {
            frozen[i] = true;
            continue;
        }
        let left = kronrod::apply(&mut f, p.a, mid)?;
        let right = kronrod::apply(&mut f, mid, p.b)?;
        evaluations += 2 * kronrod::NODES;
        splits_done += 1;
        panels[i] = left;
        panels.insert(i + 1, right);
        frozen.insert(i + 1, false);
    }
}

/// Magnitude proxy whose roundoff floor equals a known integrand `noise`.
pub fn noise_magnitude(noise: f64) -> f64 {
    noise / (kronrod::FLOOR * f64::EPSILON)
}

fn best_effort<const K: usize>(value: [f64; K], error: [f64; K], evaluations: usize) -> Error {
    let (k, _) = error.iter().enumerate().fold(
        (0, -1.0),
        |acc, (k, &e)| if e > acc.1 { (k, e) } else { acc },
    );
    Error::ToleranceNotMet {
        value: value[k],
        error_estimate: error[k],
        evaluations,
    }
}

/// Value, error, the part of the error above each panel's roundoff floor, and
/// the magnitude integral.
fn totals<const K: usize>(panels: &[Panel<K>]) -> ([f64; K], [f64; K], [f64; K], [f64; K]) {
    let mut v = [0.0; K];
    let mut e = [0.0; K];
    let mut x = [0.0; K];
    let mut a = [0.0; K];
    for k in 0..K {
        v[k] = pairwise(panels, &|p: &Panel<K>| p.value[k]);
        e[k] = pairwise(panels, &|p: &Panel<K>| p.error[k]);
        x[k] = pairwise(panels, &|p: &Panel<K>| p.excess(k));
        a[k] = pairwise(panels, &|p: &Panel<K>| p.abs[k]);
    }
    (v, e, x, a)
}

fn pairwise<T>(items: &[T], get: &impl Fn(&T) -> f64) -> f64 {
    match items.len() {
        0 => 0.0,
        1 => get(&items[0]),
        n => {
            let (l, r) = items.split_at(n / 2);
            pairwise(l, get) + pairwise(r, get)
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Geometric breakpoints `scale * 2^k` strictly inside (0, limit).
pub fn graded_breakpoints(scale: f64, limit: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if !(scale > 0.0) {
        return out;
    }
    let mut t = scale;
    while t < limit {
        out.push(t);
        t *= 2.0;
    }
    let mut t = scale / 2.0;
    for _ in 0..4 {
        if t > 0.0 && t < limit {
            out.push(t);
        }
        t /= 2.0;
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_sine() {
        let s = QuadSpec::default();
        let r = integrate_1d(|_| 1.0, 0.0, 1.0, &s).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        let r = integrate_1d(f64::sin, 0.0, std::f64::consts::PI, &s).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn peaked_rational() {
        let eps: f64 = 1e-4;
        let s = QuadSpec::default().with_splits(graded_breakpoints(eps.sqrt(), 1.0));
        let r = integrate_1d(|t| t / (eps + t * t), 0.0, 1.0, &s).unwrap();
        let exact = 0.5 * (10001.0f64).ln();
        assert!((r.value - exact).abs() <= 1e-10 * exact);
        assert!(r.error_estimate <= 1e-10 * exact);
    }

    #[test]
    fn empty_interval_and_errors() {
        let s = QuadSpec::default();
        assert_eq!(integrate_1d(|x| x, 2.0, 2.0, &s).unwrap().value, 0.0);
        assert!(integrate_1d(|x| x, 2.0, 1.0, &s).is_err());
        let tight = QuadSpec {
            max_subdivisions: 3,
            rel_tol: 1e-15,
            ..QuadSpec::default()
        };
        let e = integrate_1d(|x: f64| x.abs().sqrt(), -1.0, 1.0, &tight).unwrap_err();
        assert!(matches!(e, Error::ToleranceNotMet { .. }));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(6);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }
}

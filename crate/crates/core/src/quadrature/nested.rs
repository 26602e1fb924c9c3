use super::kronrod::FLOOR;
use super::{integrate_1d, QuadResult, QuadSpec};
use crate::error::{Error, Result};

const NODES: usize = 32;

/// Piecewise-Chebyshev antiderivative `x ↦ ∫_a^x f` on `[a, b]`.
///
/// Panels are bisected until the trailing Chebyshev coefficients fall below
/// the panel's share of the error budget; evaluation is a Clenshaw sum.
#[derive(Clone, Debug)]
pub struct CumulativeIntegral {
    a: f64,
    b: f64,
    panels: Vec<ChebPanel>,
    error_estimate: f64,
    evaluations: usize,
}

#[derive(Clone, Debug)]
struct ChebPanel {
    lo: f64,
    hi: f64,
    base: f64,
    cint: Vec<f64>,
}

/// Result of a nested integration. The cache error bounds the inner
/// antiderivative and is reported apart from the outer quadrature error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NestedResult {
    pub value: f64,
    pub error_estimate: f64,
    pub cache_error_estimate: f64,
    pub evaluations: usize,
}

impl From<NestedResult> for QuadResult {
    fn from(r: NestedResult) -> Self {
        QuadResult {
            value: r.value,
            error_estimate: r.error_estimate + r.cache_error_estimate,
            evaluations: r.evaluations,
        }
    }
}

fn cos_table() -> Vec<f64> {
    let n = NODES as f64;
    let mut t = vec![0.0; NODES * NODES];
    for j in 0..NODES {
        for k in 0..NODES {
            t[j * NODES + k] = (std::f64::consts::PI * j as f64 * (k as f64 + 0.5) / n).cos();
        }
    }
    t
}

/// Chebyshev coefficients of `f` on [lo, hi], of its antiderivative
/// vanishing at `lo`, and the largest sampled `|f|`.
fn fit(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, table: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
    let bma = 0.5 * (hi - lo);
    let bpa = 0.5 * (hi + lo);
    let fv: Vec<f64> = (0..NODES)
        .map(|k| f(table[NODES + k] * bma + bpa))
        .collect();
    let fac = 2.0 / NODES as f64;
    let c: Vec<f64> = (0..NODES)
        .map(|j| {
            fac * (0..NODES)
                .map(|k| fv[k] * table[j * NODES + k])
                .sum::<f64>()
        })
        .collect();
    let con = 0.25 * (hi - lo);
    let mut cint = vec![0.0; NODES];
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..NODES - 1 {
        cint[j] = con * (c[j - 1] - c[j + 1]) / j as f64;
        sum += sign * cint[j];
        sign = -sign;
    }
    cint[NODES - 1] = con * c[NODES - 2] / (NODES - 1) as f64;
    sum += sign * cint[NODES - 1];
    cint[0] = 2.0 * sum;
    let fmax = fv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (c, cint, fmax)
}

fn clenshaw(c: &[f64], y: f64) -> f64 {
    let y2 = 2.0 * y;
    let (mut d, mut dd) = (0.0, 0.0);
    for &cj in c[1..].iter().rev() {
        let sv = d;
        d = y2 * d - dd + cj;
        dd = sv;
    }
    y * d - dd + 0.5 * c[0]
}

impl CumulativeIntegral {
    /// Tabulates `∫_a^x f` with absolute accuracy `rel_tol * ∫_a^b |f|`.
    pub fn build(
        f: impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        breakpoints: &[f64],
        rel_tol: f64,
    ) -> Result<Self> {
        if !(a <= b) {
            return Err(Error::Domain(format!("reversed table interval [{a}, {b}]")));
        }
        let mut edges: Vec<f64> = std::iter::once(a)
            .chain(breakpoints.iter().copied().filter(|&x| x > a && x < b))
            .chain(std::iter::once(b))
            .collect();
        edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
        edges.dedup();
        if a == b {
            return Ok(Self {
                a,
                b,
                panels: Vec::new(),
                error_estimate: 0.0,
                evaluations: 0,
            });
        }
        let scale_spec = QuadSpec {
            rel_tol: 1e-3,
            split_points: edges.clone(),
            ..QuadSpec::default()
        };
        let scale = integrate_1d(|x| f(x).abs(), a, b, &scale_spec)?;
        let budget = rel_tol * scale.value.max(f64::MIN_POSITIVE);
        let width = b - a;
        let table = cos_table();
        let mut evaluations = scale.evaluations;
        let mut panels = Vec::new();
        let mut error_estimate = 0.0;
        let mut unresolved = false;
        for w in edges.windows(2) {
            let mut stack = vec![(w[0], w[1])];
            while let Some((lo, hi)) = stack.pop() {
                let (c, cint, fmax) = fit(&f, lo, hi, &table);
                evaluations += NODES;
                let err =
                    (hi - lo) * (c[NODES - 1].abs() + c[NODES - 2].abs() + c[NODES - 3].abs());
                // A tail at the panel's own rounding level cannot shrink further.
                let noise = FLOOR * f64::EPSILON * (hi - lo) * fmax;
                let allowed = (budget * (hi - lo) / width).max(noise);
                let tiny = (hi - lo) <= 1e-12 * width;
                if err <= allowed || tiny || !err.is_finite() {
                    if !err.is_finite() || (tiny && err > allowed) {
                        unresolved = true;
                    }
                    error_estimate += err;
                    panels.push(ChebPanel {
                        lo,
                        hi,
                        base: 0.0,
                        cint,
                    });
                } else {
                    let mid = 0.5 * (lo + hi);
                    stack.push((mid, hi));
                    stack.push((lo, mid));
                }
            }
        }
        if unresolved {
            return Err(Error::CacheResolution {
                achieved: error_estimate,
                requested: budget,
            });
        }
        let mut acc = 0.0;
        for p in panels.iter_mut() {
            p.base = acc;
            acc += clenshaw(&p.cint, 1.0);
        }
        Ok(Self {
            a,
            b,
            panels,
            error_estimate,
            evaluations,
        })
    }

    /// `∫_a^x f`; `x` is clamped to `[a, b]`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.panels.is_empty() {
            return 0.0;
        }
        let x = x.clamp(self.a, self.b);
        let i = self
            .panels
            .partition_point(|p| p.hi < x)
            .min(self.panels.len() - 1);
        let p = &self.panels[i];
        let y = (2.0 * x - p.lo - p.hi) / (p.hi - p.lo);
        p.base + clenshaw(&p.cint, y)
    }

    /// `∫_x0^x1 f`.
    pub fn between(&self, x0: f64, x1: f64) -> f64 {
        self.eval(x1) - self.eval(x0)
    }

    pub fn total(&self) -> f64 {
        self.eval(self.b)
    }

    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }
}

/// Computes `∫_a^b outer(x, ∫_{lower}^x kernel(t) dt) dx`, tabulating the
/// inner antiderivative once with a tenth of the relative budget.
pub fn integrate_nested(
    outer: impl Fn(f64, f64) -> f64,
    kernel: impl Fn(f64) -> f64,
    lower: f64,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<NestedResult> {
    let lo = a.min(lower);
    let hi = b.max(lower);
    let mut table_splits = spec.split_points.clone();
    table_splits.extend([a, b, lower]);
    let table = CumulativeIntegral::build(
        &kernel,
        lo,
        hi,
        &table_splits,
        0.1 * spec.rel_tol.max(1e-15),
    )?;
    let base = table.eval(lower);
    let r = integrate_1d(|x| outer(x, table.eval(x) - base), a, b, spec)?;
    Ok(NestedResult {
        value: r.value,
        error_estimate: r.error_estimate,
        cache_error_estimate: table.error_estimate() * (b - a),
        evaluations: r.evaluations + table.evaluations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_nesting() {
        let r = integrate_nested(
            |_, inner| inner,
            |t| t * t,
            0.0,
            0.0,
            1.0,
            &QuadSpec::default(),
        )
        .unwrap();
        assert!((r.value - 1.0 / 12.0).abs() < 1e-13);
    }

    #[test]
    fn antiderivative_of_peaked_kernel() {
        let eps = 1e-4f64;
        let r = 0.5;
        let k = |t: f64| t * t / (eps + t * t).powi(3);
        let bps = super::super::graded_breakpoints(eps.sqrt(), r);
        let mut all = bps.clone();
        all.extend(bps.iter().map(|x| -x));
        all.push(0.0);
        let tab = CumulativeIntegral::build(k, -r, r, &all, 1e-12).unwrap();
        let exact = |x: f64| {
            super::super::integrate_1d(
                k,
                -r,
                x,
                &QuadSpec::with_rel_tol(1e-13).with_splits(all.clone()),
            )
            .unwrap()
            .value
        };
        for x in [-0.4, -0.01, 0.0, 0.003, 0.2, 0.5] {
            let e = exact(x);
            assert!((tab.eval(x) - e).abs() <= 1e-10 * tab.total(), "x = {x}");
        }
        assert!(tab.eval(-r).abs() <= 1e-14 * tab.total());
    }

    #[test]
    fn sharp_spike_stops_at_rounding_level() {
        let (eps, m, r) = (1e-8f64, 5.0 / 3.0, 0.5);
        let k = |t: f64| t * t / (eps + t.abs().powf(m)).powi(3);
        let bps = super::super::graded_breakpoints(eps.powf(1.0 / m), r);
        let mut all = bps.clone();
        all.extend(bps.iter().map(|x| -x));
        all.push(0.0);
        let tab = CumulativeIntegral::build(k, -r, r, &all, 1e-11).unwrap();
        assert!(tab.panel_count() < 10_000, "{} panels", tab.panel_count());
        assert!(tab.error_estimate() <= 1e-10 * tab.total());
    }
}

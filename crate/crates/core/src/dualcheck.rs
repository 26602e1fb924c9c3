//! Numerical witnesses for the dual variational bound in 3D: the strain
//! energy of the constructed field, the divergence-free test stresses
//! `S^(k)`, and the pairwise error terms
//!
//! `l[i,j] = mu ∫ [D(u_i) - dev(S_i)/(2 mu)] : [D(u_j) - dev(S_j)/(2 mu)] dx`
//!
//! over `{|x'| < r/4, |x3| < h/2}`. The energy identity with the force and
//! torque holds only for the exact solution on the whole domain, so
//! [`energy`] is meant for growth-rate comparisons, not equality tests.

use crate::asymptotics::fit_exponent;
use crate::error::{Error, Result};
use crate::fields::{
    check_subflow, eval_regular, has_nested_pressure, pressure_integral, rigid_divergence,
    shear_coefficients, squeeze_coefficients, FieldEval, ProblemParams,
};
use crate::geometry::Dimension;
use crate::quadrature::{
    gauss_legendre, graded_breakpoints, integrate_1d_vec, integrate_disk_vec, AngularRule,
    QuadResult, QuadSpec,
};
use crate::traction::stress;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub type Tensor = [[f64; 3]; 3];

/// Number of 3D sub-flows.
pub const SUBFLOWS: usize = 7;

/// Sub-flows with a nonzero test stress.
pub const DUAL_SUBFLOWS: [usize; 4] = [1, 2, 3, 6];

/// Gauss points across the gap; every integrand is a polynomial of degree at
/// most 8 in `x3`.
const VERTICAL_POINTS: usize = 8;

/// Relative step of the central differences for `ΔA3` and `ΔB3`.
const FD_STEP: f64 = 1e-5;

fn require_3d(params: &ProblemParams) -> Result<()> {
    params.validate()?;
    if params.dimension() != Dimension::Three {
        return Err(Error::Domain(
            "dual checks are defined for 3D problems only".into(),
        ));
    }
    Ok(())
}

/// Whether sub-flow `k` is driven by a nonzero part of the motion.
pub fn subflow_active(k: usize, params: &ProblemParams) -> bool {
    let [u1, u2, u3] = params.velocity;
    let [w1, w2, w3] = params.omega;
    let big_r = params.profile.big_r;
    match k {
        0 => params
            .velocity
            .iter()
            .chain(params.omega.iter())
            .any(|v| *v != 0.0),
        1 => u1 - w2 * big_r != 0.0,
        2 => u2 + w1 * big_r != 0.0,
        3 => u3 != 0.0,
        4 => w3 != 0.0,
        5 | 6 => w1 != 0.0 || w2 != 0.0,
        _ => false,
    }
}

/// Whether `x` lies in `{|x'| < r/4, |x3| < h/2}`.
pub fn in_dual_region(params: &ProblemParams, x: &[f64; 3]) -> bool {
    let pr = &params.profile;
    let rho = x[0].hypot(x[1]);
    rho < 0.25 * pr.r && x[2].abs() < 0.5 * pr.height(rho)
}

/// Per-column data of the test stress for a squeeze sub-flow.
#[derive(Clone, Copy, Debug, Default)]
struct Column {
    /// Nested-integral part of the pressure.
    pressure: f64,
    /// `q1 = mu (p1 + 3 x3^2 r1)`, `q2 = mu (p2 + 3 x3^2 r2)`.
    p1: f64,
    r1: f64,
    p2: f64,
    r2: f64,
    lap_a3: f64,
    lap_b3: f64,
}

/// `(∫_0^{x_axis} [ΔA_a - ∂_a A3] dt, ∫_0^{x_axis} [ΔB_a + ∂_a B3] dt)` along
/// one horizontal axis with the other coordinate held fixed.
fn q_line(k: usize, params: &ProblemParams, axis: usize, x1: f64, x2: f64) -> Result<(f64, f64)> {
    let end = if axis == 0 { x1 } else { x2 };
    if end == 0.0 {
        return Ok((0.0, 0.0));
    }
    let len = end.abs();
    let sign = end.signum();
    let spec = QuadSpec {
        rel_tol: 1e-10,
        abs_tol: 0.0,
        max_subdivisions: 2000,
        split_points: graded_breakpoints(params.profile.layer_scale(), len),
    };
    let r = integrate_1d_vec::<2>(
        |t| {
            let (y1, y2) = if axis == 0 {
                (sign * t, x2)
            } else {
                (x1, sign * t)
            };
            let s = squeeze_coefficients(k, params, y1, y2);
            let (a, b) = if axis == 0 {
                (s.a1, s.b1)
            } else {
                (s.a2, s.b2)
            };
            let (da3, db3) = (s.a3().g[axis], s.b3().g[axis]);
            let (la, lb) = (a.laplacian(), b.laplacian());
            Ok((
                [la - da3, lb + db3],
                [la.abs() + da3.abs(), lb.abs() + db3.abs()],
            ))
        },
        0.0,
        len,
        &spec,
    )?;
    Ok((sign * r.value[0], sign * r.value[1]))
}

/// `(ΔA3, ΔB3)` by Richardson-extrapolated central differences of the exact
/// gradients.
fn lap_third(k: usize, params: &ProblemParams, x1: f64, x2: f64) -> (f64, f64) {
    let grad = |y1: f64, y2: f64| {
        let s = squeeze_coefficients(k, params, y1, y2);
        (s.a3().g, s.b3().g)
    };
    let central = |step: f64| {
        let mut la = 0.0;
        let mut lb = 0.0;
        for i in 0..2 {
            let (dx, dy) = if i == 0 { (step, 0.0) } else { (0.0, step) };
            let (ap, bp) = grad(x1 + dx, x2 + dy);
            let (am, bm) = grad(x1 - dx, x2 - dy);
            la += (ap[i] - am[i]) / (2.0 * step);
            lb += (bp[i] - bm[i]) / (2.0 * step);
        }
        (la, lb)
    };
    let step = FD_STEP * params.profile.r;
    let (a1, b1) = central(step);
    let (a2, b2) = central(0.5 * step);
    ((4.0 * a2 - a1) / 3.0, (4.0 * b2 - b1) / 3.0)
}

fn column(k: usize, params: &ProblemParams, x1: f64, x2: f64) -> Result<Column> {
    let (p1, r1) = q_line(k, params, 0, x1, x2)?;
    let (p2, r2) = q_line(k, params, 1, x1, x2)?;
    let (lap_a3, lap_b3) = lap_third(k, params, x1, x2);
    Ok(Column {
        pressure: pressure_integral(k, params, &[x1, x2])?,
        p1,
        r1,
        p2,
        r2,
        lap_a3,
        lap_b3,
    })
}

/// Test stress of sub-flow `k` at `x` inside the region; `col` must come from
/// [`column`] at the same `x'` for the squeeze modes.
fn tensor_in_region(k: usize, params: &ProblemParams, col: &Column, x: &[f64; 3]) -> Tensor {
    let mu = params.mu;
    let x3 = x[2];
    match k {
        1 | 2 => {
            let s = shear_coefficients(k, params, x[0], x[1]);
            let b = s.h1.d(0).v + s.h2.d(1).v;
            let hk = if k == 1 { s.h1.v } else { s.h2.v };
            let a = k - 1;
            let mut t = [[0.0; 3]; 3];
            t[a][2] = mu * hk;
            t[2][a] = mu * hk;
            t[2][2] = -mu * b * x3;
            t
        }
        3 | 6 => {
            let mut f: FieldEval<3> = eval_regular(k, params, x);
            f.p += col.pressure;
            let mut t = stress(&f, mu);
            let z2 = x3 * x3;
            t[0][0] += mu * (col.p1 + 3.0 * z2 * col.r1);
            t[1][1] += mu * (col.p2 + 3.0 * z2 * col.r2);
            t[2][2] -= mu * (0.5 * col.lap_a3 * z2 + 0.25 * col.lap_b3 * z2 * z2);
            t
        }
        _ => [[0.0; 3]; 3],
    }
}

/// Test stress `S^(k)` at `x`; zero outside `{|x'| < r/4, |x3| < h/2}` and for
/// the sub-flows 0, 4 and 5.
pub fn dual_tensor(k: usize, params: &ProblemParams, x: [f64; 3]) -> Result<Tensor> {
    require_3d(params)?;
    check_subflow(Dimension::Three, k)?;
    if !in_dual_region(params, &x) || !DUAL_SUBFLOWS.contains(&k) {
        return Ok([[0.0; 3]; 3]);
    }
    let col = if has_nested_pressure(Dimension::Three, k) {
        column(k, params, x[0], x[1])?
    } else {
        Column::default()
    };
    Ok(tensor_in_region(k, params, &col, &x))
}

/// Evaluator bound to one sub-flow.
#[derive(Clone, Debug)]
pub struct DualTensor {
    pub k: usize,
    pub params: ProblemParams,
}

impl DualTensor {
    pub fn new(k: usize, params: ProblemParams) -> Result<Self> {
        require_3d(&params)?;
        check_subflow(Dimension::Three, k)?;
        Ok(Self { k, params })
    }

    pub fn eval(&self, x: [f64; 3]) -> Result<Tensor> {
        dual_tensor(self.k, &self.params, x)
    }
}

/// `D(u) - (S - tr S / 3 E) / (2 mu)`.
fn mismatch(f: &FieldEval<3>, s: &Tensor, mu: f64) -> Tensor {
    let d = f.strain();
    let tr = (s[0][0] + s[1][1] + s[2][2]) / 3.0;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let dev = s[i][j] - if i == j { tr } else { 0.0 };
            out[i][j] = d[i][j] - dev / (2.0 * mu);
        }
    }
    out
}

fn contract(a: &Tensor, b: &Tensor) -> (f64, f64) {
    let mut v = 0.0;
    let mut m = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            v += a[i][j] * b[i][j];
            m += (a[i][j] * b[i][j]).abs();
        }
    }
    (v, m)
}

/// Pair index of `(i, j)` with `i <= j` in row-major upper-triangular order.
fn pair_slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * SUBFLOWS - i * (i + 1) / 2 + j
}

const PAIRS: usize = SUBFLOWS * (SUBFLOWS + 1) / 2;

/// Integrates `mu M_i : M_j` for the requested sub-flows, accumulating into
/// the slots returned by `slot`.
fn ell_integrate<const K: usize>(
    params: &ProblemParams,
    spec: &QuadSpec,
    subflows: &[usize],
    slot: impl Fn(usize, usize) -> Option<usize> + Sync,
) -> Result<crate::quadrature::VecQuadResult<K>> {
    let (nodes, weights) = gauss_legendre(VERTICAL_POINTS);
    let mu = params.mu;
    let pr = params.profile;
    integrate_disk_vec::<K>(
        |x1, x2| {
            let h = pr.height(x1.hypot(x2));
            let mut cols = [Column::default(); SUBFLOWS];
            for &k in subflows {
                if has_nested_pressure(Dimension::Three, k) {
                    cols[k] = column(k, params, x1, x2)?;
                }
            }
            let mut v = [0.0; K];
            let mut a = [0.0; K];
            for (xi, wi) in nodes.iter().zip(&weights) {
                let x = [x1, x2, 0.5 * h * xi];
                let w = 0.5 * h * wi;
                let mut ms = [[[0.0; 3]; 3]; SUBFLOWS];
                for &k in subflows {
                    let f = eval_regular(k, params, &x);
                    let s = tensor_in_region(k, params, &cols[k], &x);
                    ms[k] = mismatch(&f, &s, mu);
                }
                for (ii, &i) in subflows.iter().enumerate() {
                    for &j in &subflows[ii..] {
                        if let Some(c) = slot(i, j) {
                            let (cv, cm) = contract(&ms[i], &ms[j]);
                            v[c] += mu * w * cv;
                            a[c] += mu * w * cm;
                        }
                    }
                }
            }
            Ok((v, a))
        },
        &pr,
        0.25 * pr.r,
        spec,
        AngularRule::default(),
    )
}

/// `l[i,j]` for one pair.
pub fn ell(i: usize, j: usize, params: &ProblemParams, spec: &QuadSpec) -> Result<QuadResult> {
    require_3d(params)?;
    check_subflow(Dimension::Three, i)?;
    check_subflow(Dimension::Three, j)?;
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if !subflow_active(i, params) || !subflow_active(j, params) {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let subflows: Vec<usize> = if i == j { vec![i] } else { vec![i, j] };
    let r = ell_integrate::<1>(params, spec, &subflows, |a, b| {
        (a == i && b == j).then_some(0)
    })?;
    Ok(QuadResult {
        value: r.value[0],
        error_estimate: r.error_estimate[0],
        evaluations: r.evaluations,
    })
}

/// All `l[i,j]`, symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllMatrix {
    pub values: [[f64; SUBFLOWS]; SUBFLOWS],
    pub errors: [[f64; SUBFLOWS]; SUBFLOWS],
    pub evaluations: usize,
}

impl EllMatrix {
    /// Largest relative violation of `l[i,j]^2 <= l[i,i] l[j,j]`, with each
    /// side widened by its quadrature error; `<= 0` means it holds.
    pub fn cauchy_schwarz_excess(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..SUBFLOWS {
            for j in i + 1..SUBFLOWS {
                let lij = self.values[i][j].abs() - self.errors[i][j];
                let rhs = (self.values[i][i] + self.errors[i][i]).max(0.0)
                    * (self.values[j][j] + self.errors[j][j]).max(0.0);
                let lhs = lij.max(0.0).powi(2);
                let scale = rhs.max(f64::MIN_POSITIVE);
                worst = worst.max((lhs - rhs) / scale);
            }
        }
        worst
    }
}

/// Every `l[i,j]` in one pass over the region.
pub fn ell_matrix(params: &ProblemParams, spec: &QuadSpec) -> Result<EllMatrix> {
    require_3d(params)?;
    let active: Vec<usize> = (0..SUBFLOWS)
        .filter(|&k| subflow_active(k, params))
        .collect();
    let mut values = [[0.0; SUBFLOWS]; SUBFLOWS];
    let mut errors = [[0.0; SUBFLOWS]; SUBFLOWS];
    if active.is_empty() {
        return Ok(EllMatrix {
            values,
            errors,
            evaluations: 0,
        });
    }
    let r = ell_integrate::<PAIRS>(params, spec, &active, |i, j| Some(pair_slot(i, j)))?;
    for i in 0..SUBFLOWS {
        for j in 0..SUBFLOWS {
            let c = pair_slot(i, j);
            values[i][j] = r.value[c];
            errors[i][j] = r.error_estimate[c];
        }
    }
    Ok(EllMatrix {
        values,
        errors,
        evaluations: r.evaluations,
    })
}

/// `½ ∫ σ(u) : D(u) dx` over the gap region `|x'| < r` for the summed field.
pub fn energy(params: &ProblemParams, spec: &QuadSpec) -> Result<QuadResult> {
    require_3d(params)?;
    let active: Vec<usize> = (0..SUBFLOWS)
        .filter(|&k| subflow_active(k, params))
        .collect();
    if active.is_empty() {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let (nodes, weights) = gauss_legendre(VERTICAL_POINTS);
    let mu = params.mu;
    let pr = params.profile;
    let r = integrate_disk_vec::<1>(
        |x1, x2| {
            let h = pr.height(x1.hypot(x2));
            // Only the rigid half-motion has a trace; the pressure then matters.
            let trace = rigid_divergence(params, &[x1, x2]);
            let mut nested = 0.0;
            if trace != 0.0 {
                for &k in &active {
                    if has_nested_pressure(Dimension::Three, k) {
                        nested += pressure_integral(k, params, &[x1, x2])?;
                    }
                }
            }
            let mut v = 0.0;
            let mut a = 0.0;
            for (xi, wi) in nodes.iter().zip(&weights) {
                let x = [x1, x2, 0.5 * h * xi];
                let w = 0.5 * h * wi;
                let mut total = FieldEval::<3>::zero();
                for &k in &active {
                    let f = eval_regular(k, params, &x);
                    total.p += f.p;
                    for i in 0..3 {
                        for j in 0..3 {
                            total.grad_u[i][j] += f.grad_u[i][j];
                        }
                    }
                }
                total.p += nested;
                let d = total.strain();
                let s = stress(&total, mu);
                let (cv, cm) = contract(&s, &d);
                v += 0.5 * w * cv;
                a += 0.5 * w * cm;
            }
            Ok(([v], [a]))
        },
        &pr,
        pr.r,
        spec,
        AngularRule::default(),
    )?;
    Ok(QuadResult {
        value: r.value[0],
        error_estimate: r.error_estimate[0],
        evaluations: r.evaluations,
    })
}

/// One pair's values across an epsilon sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllSeries {
    pub pair: (usize, usize),
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Log-log slope, absent when the values vanish or change sign.
    pub slope: Option<f64>,
    /// Slope below [`EllReport::VIOLATION_SLOPE`].
    pub unbounded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllReport {
    /// Strictly decreasing.
    pub eps: Vec<f64>,
    pub series: Vec<EllSeries>,
    /// Worst Cauchy–Schwarz excess over the sweep (`<= 0` means it holds).
    pub cauchy_schwarz_excess: f64,
}

impl EllReport {
    pub const VIOLATION_SLOPE: f64 = -0.2;

    pub fn get(&self, i: usize, j: usize) -> Option<&EllSeries> {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.series.iter().find(|s| s.pair == key)
    }

    pub fn violations(&self) -> Vec<(usize, usize)> {
        self.series
            .iter()
            .filter(|s| s.unbounded)
            .map(|s| s.pair)
            .collect()
    }
}

/// Evaluates every `l[i,j]` between active sub-flows at each epsilon.
pub fn err_sweep(params: &ProblemParams, eps_list: &[f64], spec: &QuadSpec) -> Result<EllReport> {
    require_3d(params)?;
    let mut eps: Vec<f64> = eps_list.to_vec();
    if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Domain(
            "sweep epsilons must be positive and finite".into(),
        ));
    }
    eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eps.dedup();
    if eps.len() < 3 || eps[0] / eps[eps.len() - 1] < 10.0 * (1.0 - 1e-12) {
        return Err(Error::Domain(
            "sweep needs at least 3 distinct epsilons spanning a decade".into(),
        ));
    }
    let mats: Vec<EllMatrix> = eps
        .par_iter()
        .map(|&e| ell_matrix(&params.with_eps(e), spec))
        .collect::<Result<_>>()?;
    let active: Vec<usize> = (0..SUBFLOWS)
        .filter(|&k| subflow_active(k, params))
        .collect();
    let mut series = Vec::new();
    for (ii, &i) in active.iter().enumerate() {
        for &j in &active[ii..] {
            let values: Vec<f64> = mats.iter().map(|m| m.values[i][j]).collect();
            let errors: Vec<f64> = mats.iter().map(|m| m.errors[i][j]).collect();
            let samples: Vec<(f64, f64)> =
                eps.iter().copied().zip(values.iter().copied()).collect();
            let slope = fit_exponent(&samples).ok().map(|f| f.slope);
            series.push(EllSeries {
                pair: (i, j),
                values,
                errors,
                slope,
                unbounded: slope.is_some_and(|s| s < EllReport::VIOLATION_SLOPE),
            });
        }
    }
    let cauchy_schwarz_excess = mats
        .iter()
        .map(|m| m.cauchy_schwarz_excess())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EllReport {
        eps,
        series,
        cauchy_schwarz_excess,
    })
}

/// Divergence of `S^(k)` at `x` by central differences with step `step`.
pub fn dual_divergence(
    k: usize,
    params: &ProblemParams,
    x: [f64; 3],
    step: f64,
) -> Result<[f64; 3]> {
    let mut div = [0.0; 3];
    for j in 0..3 {
        let mut xp = x;
        let mut xm = x;
        xp[j] += step;
        xm[j] -= step;
        let (sp, sm) = (dual_tensor(k, params, xp)?, dual_tensor(k, params, xm)?);
        for i in 0..3 {
            div[i] += (sp[i][j] - sm[i][j]) / (2.0 * step);
        }
    }
    Ok(div)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GapProfile;

    fn params(u: [f64; 3], w: [f64; 3], eps: f64) -> ProblemParams {
        let pr = GapProfile::m_convex(Dimension::Three, 2.0, 0.5, eps, 1.0).unwrap();
        ProblemParams::new_3d(pr, 1.0, u, w).unwrap()
    }

    #[test]
    fn zero_tensors_and_region() {
        let p = params([1.0, 1.0, -1.0], [0.5, 0.5, 0.5], 1e-3);
        for k in [0, 4, 5] {
            assert_eq!(dual_tensor(k, &p, [0.01, 0.0, 0.0]).unwrap(), [[0.0; 3]; 3]);
        }
        assert_eq!(dual_tensor(1, &p, [0.2, 0.0, 0.0]).unwrap(), [[0.0; 3]; 3]);
    }

    #[test]
    fn shear_tensor_on_midplane() {
        let p = params([1.0, 0.0, 0.0], [0.0, 0.3, 0.0], 1e-3);
        let x = [0.03, -0.02, 0.0];
        let s = dual_tensor(1, &p, x).unwrap();
        let h = p.profile.height(x[0].hypot(x[1]));
        assert!((s[0][2] - (1.0 - 0.3) / h).abs() < 1e-12 / h);
        assert_eq!(s[2][0], s[0][2]);
        assert_eq!(s[2][2], 0.0);
    }

    #[test]
    fn pair_slots_are_dense() {
        let mut seen = [false; PAIRS];
        for i in 0..SUBFLOWS {
            for j in i..SUBFLOWS {
                assert!(!seen[pair_slot(i, j)]);
                seen[pair_slot(i, j)] = true;
                assert_eq!(pair_slot(i, j), pair_slot(j, i));
            }
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn trivial_motion_short_circuits() {
        let p = params([0.0; 3], [0.0; 3], 1e-3);
        let spec = QuadSpec::with_rel_tol(1e-6);
        assert_eq!(ell(1, 1, &p, &spec).unwrap().value, 0.0);
        assert_eq!(energy(&p, &spec).unwrap().value, 0.0);
        assert!(ell_matrix(&p, &spec)
            .unwrap()
            .values
            .iter()
            .flatten()
            .all(|v| *v == 0.0));
    }
}

//! Stress, traction and the numeric force and torque on the upper particle.
//!
//! Integrals run over the gap boundary `Σ_r^+` only; contributions from the
//! rest of the particle surface are bounded as `eps -> 0` and not included.

use crate::error::{Error, Result};
use crate::fields::{
    check_subflow, eval_field, eval_regular, has_nested_pressure, symmetric_breakpoints, FieldEval,
    ProblemParams,
};
use crate::geometry::{surface_sample, Dimension, GapProfile, Side, SurfacePoint};
use crate::quadrature::{
    integrate_1d_vec, integrate_surface_vec, noise_magnitude, radial_breakpoints, AngularRule,
    CumulativeIntegral, QuadSpec, VecQuadResult,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Newtonian stress `mu (grad u + grad u^T) - p I`.
pub fn stress<const D: usize>(f: &FieldEval<D>, mu: f64) -> [[f64; D]; D] {
    let mut s = [[0.0; D]; D];
    for i in 0..D {
        for j in 0..D {
            s[i][j] = mu * (f.grad_u[i][j] + f.grad_u[j][i]);
        }
        s[i][i] -= f.p;
    }
    s
}

fn apply<const D: usize>(s: &[[f64; D]; D], n: &[f64; D]) -> [f64; D] {
    let mut t = [0.0; D];
    for i in 0..D {
        t[i] = (0..D).map(|j| s[i][j] * n[j]).sum();
    }
    t
}

fn frobenius<const D: usize>(s: &[[f64; D]; D]) -> f64 {
    s.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

fn norm<const D: usize>(v: &[f64; D]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Traction `sigma(u_k) n` of sub-flow `k` at a point of the top gap boundary.
pub fn traction<const D: usize>(
    k: usize,
    params: &ProblemParams,
    sp: &SurfacePoint<D>,
) -> Result<[f64; D]> {
    let f = eval_field(k, params, sp.x)?;
    Ok(apply(&stress(&f, params.mu), &sp.n))
}

/// Force and torque on the upper particle with per-component error estimates.
/// The torque has three components in 3D and one in 2D.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceTorque {
    pub dimension: Dimension,
    pub force: Vec<f64>,
    pub torque: Vec<f64>,
    pub force_error: Vec<f64>,
    pub torque_error: Vec<f64>,
}

impl ForceTorque {
    pub fn zero(dimension: Dimension) -> Self {
        let (nf, nt) = component_counts(dimension);
        Self {
            dimension,
            force: vec![0.0; nf],
            torque: vec![0.0; nt],
            force_error: vec![0.0; nf],
            torque_error: vec![0.0; nt],
        }
    }

    fn from_components(dimension: Dimension, v: &[f64], e: &[f64]) -> Self {
        let (nf, _) = component_counts(dimension);
        Self {
            dimension,
            force: v[..nf].to_vec(),
            torque: v[nf..].to_vec(),
            force_error: e[..nf].to_vec(),
            torque_error: e[nf..].to_vec(),
        }
    }

    /// Force components followed by torque components.
    pub fn values(&self) -> Vec<f64> {
        self.force.iter().chain(&self.torque).copied().collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.force_error
            .iter()
            .chain(&self.torque_error)
            .copied()
            .collect()
    }

    /// Component-wise sum; error estimates add.
    pub fn add(&self, o: &Self) -> Self {
        let v: Vec<f64> = self
            .values()
            .iter()
            .zip(o.values())
            .map(|(a, b)| a + b)
            .collect();
        let e: Vec<f64> = self
            .errors()
            .iter()
            .zip(o.errors())
            .map(|(a, b)| a + b)
            .collect();
        Self::from_components(self.dimension, &v, &e)
    }
}

pub fn component_counts(dim: Dimension) -> (usize, usize) {
    match dim {
        Dimension::Three => (3, 3),
        Dimension::Two => (2, 1),
    }
}

/// Report labels of the force and torque components.
pub fn component_names(dim: Dimension) -> &'static [&'static str] {
    match dim {
        Dimension::Three => &["F1", "F2", "F3", "T1", "T2", "T3"],
        Dimension::Two => &["F1", "F2", "T"],
    }
}

/// Numeric force and torque of sub-flow `k` over the top gap boundary.
pub fn force_numeric(k: usize, params: &ProblemParams, spec: &QuadSpec) -> Result<ForceTorque> {
    params.validate()?;
    spec.validate()?;
    check_subflow(params.dimension(), k)?;
    match params.dimension() {
        Dimension::Three => force_3d(k, params, spec),
        Dimension::Two => force_2d(k, params, spec),
    }
}

/// Numeric force and torque summed over all sub-flows.
pub fn total_numeric(params: &ProblemParams, spec: &QuadSpec) -> Result<ForceTorque> {
    let parts = subflow_numeric(params, spec)?;
    Ok(sum_parts(params.dimension(), &parts))
}

/// Per-sub-flow numeric forces, computed in parallel and returned in order.
pub fn subflow_numeric(params: &ProblemParams, spec: &QuadSpec) -> Result<Vec<ForceTorque>> {
    let n = params.dimension().subflow_count();
    (0..n)
        .into_par_iter()
        .map(|k| force_numeric(k, params, spec))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

pub fn sum_parts(dim: Dimension, parts: &[ForceTorque]) -> ForceTorque {
    parts
        .iter()
        .fold(ForceTorque::zero(dim), |acc, p| acc.add(p))
}

fn is_zero_motion(params: &ProblemParams) -> bool {
    params
        .velocity
        .iter()
        .chain(&params.omega)
        .all(|&v| v == 0.0)
}

fn radial_table(profile: &GapProfile, rel_tol: f64) -> Result<CumulativeIntegral> {
    let splits = radial_breakpoints(profile);
    CumulativeIntegral::build(
        |t| t / profile.height(t).powi(3),
        0.0,
        profile.r,
        &splits,
        rel_tol,
    )
}

fn table_tol(spec: &QuadSpec) -> f64 {
    (0.1 * spec.rel_tol).max(1e-15)
}

/// Bounds on `∫ |n_i| dS` and `∫ |(nu x n)_i| dS` over the gap boundary,
/// which carry a uniform pressure error into each component. The axial
/// moment of a radial profile's normal vanishes identically.
fn pressure_error_weights_3d(pr: &GapProfile) -> [f64; 6] {
    let area = std::f64::consts::PI * pr.r * pr.r;
    let slope = 0.5 * pr.shape(pr.r).1;
    let arm = pr.big_r + pr.r;
    [
        area * slope,
        area * slope,
        area,
        area * arm * (1.0 + slope),
        area * arm * (1.0 + slope),
        0.0,
    ]
}

fn force_3d(k: usize, params: &ProblemParams, spec: &QuadSpec) -> Result<ForceTorque> {
    if is_zero_motion(params) {
        return Ok(ForceTorque::zero(Dimension::Three));
    }
    let pr = &params.profile;
    let mu = params.mu;
    let radial = if k == 3 && params.velocity[2] != 0.0 {
        Some(radial_table(pr, table_tol(spec))?)
    } else {
        None
    };
    let integrand = |sp: &SurfacePoint<3>| -> Result<([f64; 6], [f64; 6])> {
        let mut f = eval_regular(k, params, &sp.x);
        if let Some(tab) = &radial {
            let rho = (sp.x[0] * sp.x[0] + sp.x[1] * sp.x[1]).sqrt();
            f.p -= 6.0 * mu * params.velocity[2] * (tab.total() - tab.eval(rho));
        }
        let s = stress(&f, mu);
        let t = apply(&s, &sp.n);
        let m = cross(&sp.nu, &t);
        let sm = frobenius(&s);
        let tm = sm * norm(&sp.nu);
        Ok((
            [t[0], t[1], t[2], m[0], m[1], m[2]],
            [sm, sm, sm, tm, tm, tm],
        ))
    };
    let mut r = integrate_surface_vec(integrand, pr, spec, AngularRule::default())?;
    if let Some(tab) = &radial {
        let dp = 6.0 * mu * params.velocity[2].abs() * tab.error_estimate();
        let w = pressure_error_weights_3d(pr);
        for c in 0..6 {
            r.error_estimate[c] += dp * w[c];
        }
    }
    if k == 6 {
        let g = rotation_potential_force(params, spec)?;
        for c in 0..6 {
            r.value[c] += g.value[c];
            r.error_estimate[c] += g.error_estimate[c];
        }
    }
    Ok(ForceTorque::from_components(
        Dimension::Three,
        &r.value,
        &r.error_estimate,
    ))
}

/// Force and torque from the pressure `-6 mu (G1 + G2)` of the rotation-induced
/// squeeze flow. Each potential is integrated in Cartesian coordinates with
/// its own integration variable innermost and tabulated per outer line.
fn rotation_potential_force(params: &ProblemParams, spec: &QuadSpec) -> Result<VecQuadResult<6>> {
    let mut total = VecQuadResult {
        value: [0.0; 6],
        error_estimate: [0.0; 6],
        magnitude: [0.0; 6],
        evaluations: 0,
    };
    let w = params.omega;
    for (axis, coeff) in [(0usize, w[1]), (1usize, -w[0])] {
        if coeff == 0.0 {
            continue;
        }
        let part = potential_line_force(params, spec, axis, coeff)?;
        for c in 0..6 {
            total.value[c] += part.value[c];
            total.error_estimate[c] += part.error_estimate[c];
            total.magnitude[c] += part.magnitude[c];
        }
        total.evaluations += part.evaluations;
    }
    Ok(total)
}

/// Contribution of `G = coeff ∫_{a}^{x_axis} t^2 / h^3 dt` along `axis`, where
/// the lower limit is `r` for axis 0 and `-r` for axis 1.
fn potential_line_force(
    params: &ProblemParams,
    spec: &QuadSpec,
    axis: usize,
    coeff: f64,
) -> Result<VecQuadResult<6>> {
    let pr = &params.profile;
    let r = pr.r;
    let mu = params.mu;
    let splits = symmetric_breakpoints(pr, r);
    let lower = if axis == 0 { r } else { -r };
    let point = |along: f64, across: f64| -> [f64; 2] {
        if axis == 0 {
            [along, across]
        } else {
            [across, along]
        }
    };
    let line = |across: f64| -> Result<([f64; 6], [f64; 6])> {
        let half = (r * r - across * across).max(0.0).sqrt();
        if half == 0.0 {
            return Ok(([0.0; 6], [0.0; 6]));
        }
        let kernel = |t: f64| {
            let x = point(t, across);
            let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
            t * t / pr.height(rho).powi(3)
        };
        let tab = CumulativeIntegral::build(kernel, -r, r, &splits, table_tol(spec))?;
        let base = tab.eval(lower);
        let g_noise = 2.0 * coeff.abs() * tab.error_estimate();
        let mut inner_splits = splits.clone();
        if let Some(s) = pr.s() {
            let c = (s * s - across * across).max(0.0).sqrt();
            inner_splits.extend([c, -c]);
        }
        let inner = integrate_1d_vec::<6>(
            |along: f64| {
                let x = point(along, across);
                let hj = pr.gap_jet_3d(x[0], x[1]);
                let g = coeff * (tab.eval(along) - base);
                let v = [0.5 * hj.g[0] * g, 0.5 * hj.g[1] * g, -g];
                let nu = [x[0], x[1], 0.5 * (hj.v - pr.eps) - pr.big_r];
                let m = cross(&nu, &v);
                let out = [v[0], v[1], v[2], m[0], m[1], m[2]].map(|c| 6.0 * mu * c);
                let vm = 6.0 * mu * norm(&v);
                let mm = vm * norm(&nu);
                let dv = 6.0 * mu * g_noise * (1.0 + 0.5 * norm(&[hj.g[0], hj.g[1]]));
                let (nv, nm) = (noise_magnitude(dv), noise_magnitude(dv * norm(&nu)));
                Ok((out, [vm + nv, vm + nv, vm + nv, mm + nm, mm + nm, mm + nm]))
            },
            -half,
            half,
            &spec.with_splits(inner_splits),
        )?;
        // The inner error is noise to the outer rule, so it widens the floor.
        let mag: [f64; 6] =
            std::array::from_fn(|c| inner.magnitude[c] + noise_magnitude(inner.error_estimate[c]));
        Ok((inner.value, mag))
    };
    // Folding the outer variable onto [0, r] cancels the odd parts pointwise.
    let outer_spec = spec.with_splits(splits.iter().copied().filter(|&t| t > 0.0).collect());
    integrate_1d_vec(
        |across: f64| {
            let (vp, mp) = line(across)?;
            let (vm, mm) = line(-across)?;
            Ok((
                std::array::from_fn(|c| vp[c] + vm[c]),
                std::array::from_fn(|c| mp[c] + mm[c]),
            ))
        },
        0.0,
        r,
        &outer_spec,
    )
}

fn force_2d(k: usize, params: &ProblemParams, spec: &QuadSpec) -> Result<ForceTorque> {
    if is_zero_motion(params) {
        return Ok(ForceTorque::zero(Dimension::Two));
    }
    let pr = &params.profile;
    let mu = params.mu;
    let r = pr.r;
    let coeff = match k {
        2 => params.velocity[1],
        4 => params.omega[0],
        _ => 0.0,
    };
    let table = if has_nested_pressure(Dimension::Two, k) && coeff != 0.0 {
        let splits = symmetric_breakpoints(pr, r);
        let t = match k {
            2 => CumulativeIntegral::build(
                |t| t / pr.height(t).powi(3),
                0.0,
                r,
                &splits,
                table_tol(spec),
            )?,
            _ => CumulativeIntegral::build(
                |t| t * t / pr.height(t.abs()).powi(3),
                -r,
                r,
                &splits,
                table_tol(spec),
            )?,
        };
        Some(t)
    } else {
        None
    };
    let potential = |x1: f64| -> f64 {
        match (&table, k) {
            (Some(t), 2) => 2.0 * (t.total() - t.eval(x1.abs())),
            (Some(t), _) => -t.eval(x1),
            (None, _) => 0.0,
        }
    };
    let line = |x1: f64| -> Result<([f64; 3], [f64; 3])> {
        let sp: SurfacePoint<2> = surface_sample(pr, Side::Top, &[x1])?;
        let mut f = eval_regular(k, params, &sp.x);
        f.p -= 6.0 * mu * coeff * potential(x1);
        let s = stress(&f, mu);
        let t = apply(&s, &sp.n);
        let torque = sp.nu[0] * t[1] - sp.nu[1] * t[0];
        let v = [t[0] * sp.jac, t[1] * sp.jac, torque * sp.jac];
        let sm = frobenius(&s) * sp.jac;
        Ok((v, [sm, sm, sm * norm(&sp.nu)]))
    };
    // Folding onto [0, r] cancels the odd parts pointwise.
    let mut splits = symmetric_breakpoints(pr, r);
    splits.extend(spec.split_points.iter().map(|t| t.abs()));
    splits.retain(|&t| t > 0.0);
    let r_int = integrate_1d_vec::<3>(
        |x1: f64| {
            let (vp, mp) = line(x1)?;
            let (vm, mm) = line(-x1)?;
            Ok((
                std::array::from_fn(|c| vp[c] + vm[c]),
                std::array::from_fn(|c| mp[c] + mm[c]),
            ))
        },
        0.0,
        r,
        &spec.with_splits(splits),
    )?;
    let mut err = r_int.error_estimate;
    if let Some(t) = &table {
        // Both planar potentials are built from at most two table lookups.
        let dp = 12.0 * mu * coeff.abs() * t.error_estimate();
        let slope = 0.5 * pr.shape(r).1;
        let w = [
            2.0 * r * slope,
            2.0 * r,
            2.0 * r * (pr.big_r + r) * (1.0 + slope),
        ];
        for c in 0..3 {
            err[c] += dp * w[c];
        }
    }
    Ok(ForceTorque::from_components(
        Dimension::Two,
        &r_int.value,
        &err,
    ))
}

/// Checks that a result is finite; used before reporting.
pub fn ensure_finite(ft: &ForceTorque) -> Result<()> {
    if ft
        .values()
        .iter()
        .chain(ft.errors().iter())
        .all(|v| v.is_finite())
    {
        Ok(())
    } else {
        Err(Error::Degenerate("non-finite force or torque".into()))
    }
}

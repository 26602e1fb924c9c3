use super::{graded_breakpoints, integrate_1d_vec, QuadResult, QuadSpec, VecQuadResult};
use crate::error::{Error, Result};
use crate::geometry::{surface_sample, Dimension, GapProfile, ProfileKind, Side, SurfacePoint};

/// Angular rule for surface integrals: an `points`-point trapezoid in θ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AngularRule {
    pub points: usize,
}

impl Default for AngularRule {
    fn default() -> Self {
        Self { points: 64 }
    }
}

/// Radial breakpoints for integrals over `[0, r]`: geometric grading from the
/// boundary-layer scale, plus the cap edge `s` for flat-capped profiles.
pub fn radial_breakpoints(profile: &GapProfile) -> Vec<f64> {
    let r = profile.r;
    let ell = profile.layer_scale();
    let mut pts = graded_breakpoints(ell, r);
    if let ProfileKind::FlatCapped { s } = profile.kind {
        pts.retain(|&t| t < s);
        pts.push(s);
        pts.extend(graded_breakpoints(ell, r - s).into_iter().map(|d| s + d));
        pts.extend([0.5 * s, 0.25 * s]);
    }
    pts.retain(|&t| t > 0.0 && t < r);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// Integrates a vector-valued `g` over the top gap boundary `|x'| < r` in
/// polar coordinates: `∫_0^r ∫_0^{2π} g J t dθ dt`.
///
/// `g` returns values and the magnitudes of the terms they were summed from;
/// the magnitudes set the roundoff floor of the error estimate.
pub fn integrate_surface_vec<const K: usize>(
    g: impl Fn(&SurfacePoint<3>) -> Result<([f64; K], [f64; K])>,
    profile: &GapProfile,
    spec: &QuadSpec,
    rule: AngularRule,
) -> Result<VecQuadResult<K>> {
    if profile.dimension != Dimension::Three {
        return Err(Error::Domain(
            "surface integration needs a 3D profile".into(),
        ));
    }
    if rule.points < 4 {
        return Err(Error::Domain("angular rule needs at least 4 points".into()));
    }
    let n = rule.points;
    let dtheta = std::f64::consts::TAU / n as f64;
    let trig: Vec<(f64, f64)> = (0..n).map(|j| (j as f64 * dtheta).sin_cos()).collect();
    let mut splits = radial_breakpoints(profile);
    splits.extend(spec.split_points.iter().copied());
    let radial_spec = spec.with_splits(splits);
    integrate_1d_vec(
        |t| {
            let mut v = [0.0; K];
            let mut a = [0.0; K];
            for &(s, c) in &trig {
                let sp = surface_sample::<3>(profile, Side::Top, &[t * c, t * s])?;
                let (gv, gm) = g(&sp)?;
                for k in 0..K {
                    v[k] += gv[k] * sp.jac;
                    a[k] += gm[k].abs() * sp.jac;
                }
            }
            for k in 0..K {
                v[k] *= t * dtheta;
                a[k] *= t * dtheta;
            }
            Ok((v, a))
        },
        0.0,
        profile.r,
        &radial_spec,
    )
}

/// Integrates a vector-valued `g(x1, x2)` over the disk `|x'| < radius` in
/// polar coordinates, with the radial breakpoints of `profile`.
pub fn integrate_disk_vec<const K: usize>(
    g: impl Fn(f64, f64) -> Result<([f64; K], [f64; K])>,
    profile: &GapProfile,
    radius: f64,
    spec: &QuadSpec,
    rule: AngularRule,
) -> Result<VecQuadResult<K>> {
    if profile.dimension != Dimension::Three {
        return Err(Error::Domain("disk integration needs a 3D profile".into()));
    }
    if rule.points < 4 {
        return Err(Error::Domain("angular rule needs at least 4 points".into()));
    }
    if !(radius > 0.0 && radius <= profile.r) {
        return Err(Error::Domain(format!(
            "disk radius {radius} outside (0, {}]",
            profile.r
        )));
    }
    let n = rule.points;
    let dtheta = std::f64::consts::TAU / n as f64;
    let trig: Vec<(f64, f64)> = (0..n).map(|j| (j as f64 * dtheta).sin_cos()).collect();
    let mut splits = radial_breakpoints(profile);
    splits.extend(spec.split_points.iter().copied());
    integrate_1d_vec(
        |t| {
            let mut v = [0.0; K];
            let mut a = [0.0; K];
            for &(s, c) in &trig {
                let (gv, gm) = g(t * c, t * s)?;
                for k in 0..K {
                    v[k] += gv[k];
                    a[k] += gm[k].abs();
                }
            }
            for k in 0..K {
                v[k] *= t * dtheta;
                a[k] *= t * dtheta;
            }
            Ok((v, a))
        },
        0.0,
        radius,
        &spec.with_splits(splits),
    )
}

/// Scalar surface integral over the top gap boundary.
pub fn integrate_surface(
    g: impl Fn(&SurfacePoint<3>) -> f64,
    profile: &GapProfile,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    let r = integrate_surface_vec::<1>(
        |sp| {
            let v = g(sp);
            Ok(([v], [v]))
        },
        profile,
        spec,
        AngularRule::default(),
    )?;
    Ok(QuadResult {
        value: r.value[0],
        error_estimate: r.error_estimate[0],
        evaluations: r.evaluations,
    })
}

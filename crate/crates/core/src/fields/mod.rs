//! Thin-gap velocity and pressure fields for each sub-flow of the boundary
//! data decomposition, with exact velocity gradients.
//!
//! In 3D the sub-flows are indexed 0..=6: rigid half-motion, the two shear
//! modes, squeeze, spin about the axis, the curvature-driven shear, and the
//! rotation-induced squeeze. In 2D they are indexed 0..=4 with `x2` the
//! vertical coordinate. Pressures that the construction leaves undetermined
//! up to a constant are taken as zero.

mod three_d;
mod two_d;

pub(crate) use three_d::{shear_coefficients, squeeze_coefficients};

use crate::error::{Error, Result};
use crate::geometry::{Dimension, GapProfile, Side};
use crate::quadrature::{graded_breakpoints, integrate_1d, QuadSpec};
use serde::{Deserialize, Serialize};

/// Geometry, viscosity and rigid motion of the upper particle.
///
/// In 2D only `velocity[0..2]` and `omega[0]` (the in-plane angular velocity)
/// are used; the remaining entries must be zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub profile: GapProfile,
    pub mu: f64,
    pub velocity: [f64; 3],
    pub omega: [f64; 3],
}

impl ProblemParams {
    pub fn new_3d(
        profile: GapProfile,
        mu: f64,
        velocity: [f64; 3],
        omega: [f64; 3],
    ) -> Result<Self> {
        let p = Self {
            profile,
            mu,
            velocity,
            omega,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn new_2d(profile: GapProfile, mu: f64, velocity: [f64; 2], omega0: f64) -> Result<Self> {
        let p = Self {
            profile,
            mu,
            velocity: [velocity[0], velocity[1], 0.0],
            omega: [omega0, 0.0, 0.0],
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::Domain(format!(
                "viscosity must be positive, got {}",
                self.mu
            )));
        }
        if !self
            .velocity
            .iter()
            .chain(&self.omega)
            .all(|v| v.is_finite())
        {
            return Err(Error::Domain(
                "velocity and angular velocity must be finite".into(),
            ));
        }
        if self.profile.dimension == Dimension::Two
            && (self.velocity[2] != 0.0 || self.omega[1] != 0.0 || self.omega[2] != 0.0)
        {
            return Err(Error::Domain(
                "2D problems take velocity (U1, U2) and a single angular velocity".into(),
            ));
        }
        Ok(())
    }

    pub fn dimension(&self) -> Dimension {
        self.profile.dimension
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        Self {
            profile: self.profile.with_eps(eps),
            ..*self
        }
    }

    pub fn with_motion(&self, velocity: [f64; 3], omega: [f64; 3]) -> Self {
        Self {
            velocity,
            omega,
            ..*self
        }
    }

    /// Largest boundary speed over the gap region, used to scale residuals.
    pub fn velocity_scale(&self) -> f64 {
        let u = self.velocity.iter().map(|v| v * v).sum::<f64>().sqrt();
        let w = self.omega.iter().map(|v| v * v).sum::<f64>().sqrt();
        u + w * (self.profile.big_r + self.profile.r)
    }
}

/// Velocity, pressure and velocity gradient (`grad_u[i][j] = d u_i / d x_j`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldEval<const D: usize> {
    pub u: [f64; D],
    pub p: f64,
    pub grad_u: [[f64; D]; D],
}

impl<const D: usize> FieldEval<D> {
    pub fn zero() -> Self {
        Self {
            u: [0.0; D],
            p: 0.0,
            grad_u: [[0.0; D]; D],
        }
    }

    pub fn divergence(&self) -> f64 {
        (0..D).map(|i| self.grad_u[i][i]).sum()
    }

    /// Frobenius norm of the velocity gradient.
    pub fn grad_norm(&self) -> f64 {
        self.grad_u
            .iter()
            .flatten()
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt()
    }

    /// Rate-of-strain tensor `(grad u + grad u^T) / 2`.
    pub fn strain(&self) -> [[f64; D]; D] {
        let mut d = [[0.0; D]; D];
        for i in 0..D {
            for j in 0..D {
                d[i][j] = 0.5 * (self.grad_u[i][j] + self.grad_u[j][i]);
            }
        }
        d
    }

    fn recast<const E: usize>(self) -> FieldEval<E> {
        assert_eq!(D, E);
        let mut out = FieldEval::<E>::zero();
        out.p = self.p;
        for i in 0..D {
            out.u[i] = self.u[i];
            for j in 0..D {
                out.grad_u[i][j] = self.grad_u[i][j];
            }
        }
        out
    }
}

/// Sub-flow indices with a pressure built from nested integrals.
pub fn has_nested_pressure(dim: Dimension, k: usize) -> bool {
    matches!(
        (dim, k),
        (Dimension::Three, 3 | 6) | (Dimension::Two, 2 | 4)
    )
}

pub fn check_subflow(dim: Dimension, k: usize) -> Result<()> {
    if k < dim.subflow_count() {
        Ok(())
    } else {
        Err(Error::InvalidSubflow {
            k,
            dim: dim.value(),
        })
    }
}

fn check_dim<const D: usize>(p: &ProblemParams) -> Result<()> {
    if p.dimension().value() != D {
        return Err(Error::Domain(format!(
            "{}D problem evaluated with {D}D coordinates",
            p.dimension().value()
        )));
    }
    Ok(())
}

/// Prescribed velocity of sub-flow `k` on the top or bottom gap boundary.
pub fn boundary_target<const D: usize>(
    k: usize,
    params: &ProblemParams,
    side: Side,
    xprime: &[f64],
) -> Result<[f64; D]> {
    check_dim::<D>(params)?;
    check_subflow(params.dimension(), k)?;
    let rho = params.profile.check_region(xprime)?;
    let f = params.profile.shape(rho).0;
    let s = match side {
        Side::Top => 1.0,
        Side::Bottom => -1.0,
    };
    let (u, w, big_r) = (params.velocity, params.omega, params.profile.big_r);
    let mut out = [0.0; D];
    if D == 3 {
        let (x1, x2) = (xprime[0], xprime[1]);
        let v: [f64; 3] = match k {
            0 => {
                let nu = [x1, x2, 0.5 * f - big_r];
                [
                    0.5 * (u[0] + w[1] * nu[2] - w[2] * nu[1]),
                    0.5 * (u[1] + w[2] * nu[0] - w[0] * nu[2]),
                    0.5 * (u[2] + w[0] * nu[1] - w[1] * nu[0]),
                ]
            }
            1 => [s * 0.5 * (u[0] - w[1] * big_r), 0.0, 0.0],
            2 => [0.0, s * 0.5 * (u[1] + w[0] * big_r), 0.0],
            3 => [0.0, 0.0, s * 0.5 * u[2]],
            4 => [-s * 0.5 * w[2] * x2, s * 0.5 * w[2] * x1, 0.0],
            5 => [s * 0.25 * f * w[1], -s * 0.25 * f * w[0], 0.0],
            _ => [0.0, 0.0, s * 0.5 * (w[0] * x2 - w[1] * x1)],
        };
        out.copy_from_slice(&v[..D]);
    } else {
        let x1 = xprime[0];
        let w0 = w[0];
        let v: [f64; 2] = match k {
            0 => [
                0.5 * (u[0] + w0 * (big_r - 0.5 * f)),
                0.5 * (u[1] + w0 * x1),
            ],
            1 => [s * 0.5 * (u[0] + w0 * big_r), 0.0],
            2 => [0.0, s * 0.5 * u[1]],
            3 => [-s * 0.25 * w0 * f, 0.0],
            _ => [0.0, s * 0.5 * w0 * x1],
        };
        out.copy_from_slice(&v[..D]);
    }
    Ok(out)
}

fn check_point<const D: usize>(profile: &GapProfile, x: &[f64; D]) -> Result<()> {
    let rho = profile.check_region(&x[..D - 1])?;
    let half = 0.5 * profile.height(rho);
    if !(x[D - 1].abs() <= half * (1.0 + 1e-12)) {
        return Err(Error::OutOfRegion(format!(
            "|x_{D}| = {} exceeds h/2 = {half}",
            x[D - 1].abs()
        )));
    }
    Ok(())
}

/// Evaluates sub-flow `k` at a point of the closed gap region.
pub fn eval_field<const D: usize>(
    k: usize,
    params: &ProblemParams,
    x: [f64; D],
) -> Result<FieldEval<D>> {
    check_dim::<D>(params)?;
    check_subflow(params.dimension(), k)?;
    check_point(&params.profile, &x)?;
    let mut out = eval_regular(k, params, &x);
    if has_nested_pressure(params.dimension(), k) {
        out.p += pressure_integral(k, params, &x[..D - 1])?;
    }
    Ok(out)
}

/// Field without the nested-integral pressure terms and without region checks.
pub(crate) fn eval_regular<const D: usize>(
    k: usize,
    params: &ProblemParams,
    x: &[f64; D],
) -> FieldEval<D> {
    if D == 3 {
        three_d::eval_regular(k, params, [x[0], x[1], x[2]]).recast()
    } else {
        two_d::eval_regular(k, params, [x[0], x[1]]).recast()
    }
}

/// Trace of the analytic velocity gradient.
pub fn divergence<const D: usize>(k: usize, params: &ProblemParams, x: [f64; D]) -> Result<f64> {
    Ok(eval_field(k, params, x)?.divergence())
}

/// Closed-form divergence of the rigid half-motion field `k = 0`, which is
/// not solenoidal when the particle rotates about a horizontal axis.
pub fn rigid_divergence(params: &ProblemParams, xprime: &[f64]) -> f64 {
    let w = params.omega;
    if xprime.len() == 2 {
        let g = params.profile.gap_jet_3d(xprime[0], xprime[1]).g;
        0.25 * (w[1] * g[0] - w[0] * g[1])
    } else {
        -0.25 * w[0] * params.profile.gap_jet_2d(xprime[0]).g[0]
    }
}

fn nested_spec() -> QuadSpec {
    QuadSpec::with_rel_tol(1e-12)
}

/// Breakpoints for line integrals through the apex region, symmetric about 0.
pub(crate) fn symmetric_breakpoints(profile: &GapProfile, extent: f64) -> Vec<f64> {
    let g = graded_breakpoints(profile.layer_scale(), extent);
    let mut out: Vec<f64> = g.iter().flat_map(|&t| [t, -t]).collect();
    out.push(0.0);
    if let Some(s) = profile.s() {
        out.extend([s, -s]);
    }
    out
}

/// `∫_a^b f` for either ordering of the limits.
fn signed_integral(f: impl Fn(f64) -> f64, a: f64, b: f64, splits: Vec<f64>) -> Result<f64> {
    let spec = nested_spec().with_splits(splits);
    if a <= b {
        Ok(integrate_1d(f, a, b, &spec)?.value)
    } else {
        Ok(-integrate_1d(f, b, a, &spec)?.value)
    }
}

/// `∫_rho^r t / h(t)^3 dt`, the radial potential of the 3D squeeze flow.
pub fn radial_potential(profile: &GapProfile, rho: f64) -> Result<f64> {
    let splits = symmetric_breakpoints(profile, profile.r);
    signed_integral(|t| t / profile.height(t).powi(3), rho, profile.r, splits)
}

/// `(G1, G2)` of the 3D rotation-induced squeeze flow: `G1 = w2 ∫_r^{x1}
/// t^2 / h(t, x2)^3 dt` and `G2 = -w1 ∫_{-r}^{x2} t^2 / h(x1, t)^3 dt`.
pub fn rotation_potentials(params: &ProblemParams, x1: f64, x2: f64) -> Result<(f64, f64)> {
    let pr = &params.profile;
    let w = params.omega;
    let splits = symmetric_breakpoints(pr, 2.0 * pr.r);
    let h = |a: f64, b: f64| pr.height((a * a + b * b).sqrt());
    let g1 = if w[1] != 0.0 {
        w[1] * signed_integral(|t| t * t / h(t, x2).powi(3), pr.r, x1, splits.clone())?
    } else {
        0.0
    };
    let g2 = if w[0] != 0.0 {
        -w[0] * signed_integral(|t| t * t / h(x1, t).powi(3), -pr.r, x2, splits)?
    } else {
        0.0
    };
    Ok((g1, g2))
}

/// `G` of the planar squeeze flows: `2 ∫_{|x1|}^r t / h^3` for `k = 2` and
/// `-∫_{-r}^{x1} t^2 / h^3` for `k = 4`.
pub fn planar_potential(profile: &GapProfile, k: usize, x1: f64) -> Result<f64> {
    let splits = symmetric_breakpoints(profile, profile.r);
    let h3 = |t: f64| profile.height(t.abs()).powi(3);
    match k {
        2 => Ok(2.0 * signed_integral(|t| t / h3(t), x1.abs(), profile.r, splits)?),
        4 => Ok(-signed_integral(|t| t * t / h3(t), -profile.r, x1, splits)?),
        _ => Err(Error::InvalidSubflow { k, dim: 2 }),
    }
}

/// Nested-integral part of the pressure of sub-flow `k` at a planar point.
pub fn pressure_integral(k: usize, params: &ProblemParams, xprime: &[f64]) -> Result<f64> {
    let mu = params.mu;
    match (params.dimension(), k) {
        (Dimension::Three, 3) => {
            if params.velocity[2] == 0.0 {
                return Ok(0.0);
            }
            let rho = (xprime[0] * xprime[0] + xprime[1] * xprime[1]).sqrt();
            Ok(-6.0 * mu * params.velocity[2] * radial_potential(&params.profile, rho)?)
        }
        (Dimension::Three, 6) => {
            let (g1, g2) = rotation_potentials(params, xprime[0], xprime[1])?;
            Ok(-6.0 * mu * (g1 + g2))
        }
        (Dimension::Two, 2) => {
            let c = params.velocity[1];
            if c == 0.0 {
                return Ok(0.0);
            }
            Ok(-6.0 * mu * c * planar_potential(&params.profile, 2, xprime[0])?)
        }
        (Dimension::Two, 4) => {
            let c = params.omega[0];
            if c == 0.0 {
                return Ok(0.0);
            }
            Ok(-6.0 * mu * c * planar_potential(&params.profile, 4, xprime[0])?)
        }
        _ => Ok(0.0),
    }
}

/// Analytic pressure gradient of sub-flow `k`. The cross derivatives of the
/// 3D rotation potentials are evaluated by quadrature of `∂h`.
pub fn pressure_gradient<const D: usize>(
    k: usize,
    params: &ProblemParams,
    x: [f64; D],
) -> Result<[f64; D]> {
    check_dim::<D>(params)?;
    check_subflow(params.dimension(), k)?;
    check_point(&params.profile, &x)?;
    let mu = params.mu;
    let mut out = [0.0; D];
    if !has_nested_pressure(params.dimension(), k) {
        return Ok(out);
    }
    if D == 3 {
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let s = squeeze_coefficients(k, params, x1, x2);
        let (a3, b3) = (s.a3(), s.b3());
        let z2 = x3 * x3;
        let mut g = [0.0; 3];
        for j in 0..2 {
            g[j] = mu * (-a3.g[j] + 3.0 * b3.g[j] * z2);
        }
        g[2] = 6.0 * mu * b3.v * x3;
        g[0] -= 6.0 * mu * s.b1.v;
        g[1] -= 6.0 * mu * s.b2.v;
        if k == 6 {
            let pr = &params.profile;
            let w = params.omega;
            let splits = symmetric_breakpoints(pr, 2.0 * pr.r);
            let dh = |a: f64, b: f64| {
                let j = pr.gap_jet_3d(a, b);
                (j.v, j.g)
            };
            if w[1] != 0.0 {
                let d2g1 = w[1]
                    * signed_integral(
                        |t| {
                            let (h, gh) = dh(t, x2);
                            -3.0 * t * t * gh[1] / h.powi(4)
                        },
                        pr.r,
                        x1,
                        splits.clone(),
                    )?;
                g[1] -= 6.0 * mu * d2g1;
            }
            if w[0] != 0.0 {
                let d1g2 = -w[0]
                    * signed_integral(
                        |t| {
                            let (h, gh) = dh(x1, t);
                            -3.0 * t * t * gh[0] / h.powi(4)
                        },
                        -pr.r,
                        x2,
                        splits,
                    )?;
                g[0] -= 6.0 * mu * d1g2;
            }
        }
        out.copy_from_slice(&g[..D]);
    } else {
        let (x1, y) = (x[0], x[1]);
        let (a1, b1) = two_d::squeeze_coefficients(k, params, x1);
        let a2 = a1.d(0);
        let b2 = b1.d(0);
        let y2 = y * y;
        let g = [
            mu * (-a2.g[0] + 3.0 * b2.g[0] * y2) - 6.0 * mu * b1.v,
            6.0 * mu * b2.v * y,
        ];
        out.copy_from_slice(&g[..D]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::surface_sample;

    fn params3(m: f64) -> ProblemParams {
        let pr = GapProfile::m_convex(Dimension::Three, m, 0.5, 1e-3, 1.0).unwrap();
        ProblemParams::new_3d(pr, 1.3, [0.3, -0.7, -1.1], [0.4, 0.9, -0.6]).unwrap()
    }

    #[test]
    fn shear_top_value() {
        let p = params3(2.0);
        let x1 = [0.12, -0.2];
        let h = p.profile.gap(&x1).unwrap();
        let f = eval_field(1, &p, [x1[0], x1[1], 0.5 * h]).unwrap();
        let c = 0.5 * (p.velocity[0] - p.omega[1] * p.profile.big_r);
        assert!((f.u[0] - c).abs() < 1e-14);
        assert!(f.u[2].abs() < 1e-14);
    }

    #[test]
    fn squeeze_top_value_and_pressure() {
        let p = params3(3.0);
        let xp = [0.1, 0.05];
        let h = p.profile.gap(&xp).unwrap();
        let f = eval_field(3, &p, [xp[0], xp[1], 0.5 * h]).unwrap();
        assert!(f.u[0].abs() < 1e-12 * f.grad_norm());
        assert!((f.u[2] - 0.5 * p.velocity[2]).abs() < 1e-12);
        let edge = eval_field(3, &p, [0.5, 0.0, 0.0]).unwrap();
        let reg = eval_regular(3, &p, &[0.5, 0.0, 0.0]);
        assert_eq!(edge.p, reg.p);
    }

    #[test]
    fn targets_sum_to_rigid_motion() {
        let p = params3(2.5);
        let xp = [0.2, -0.15];
        let mut top = [0.0; 3];
        let mut bottom = [0.0; 3];
        for k in 0..7 {
            let t: [f64; 3] = boundary_target(k, &p, Side::Top, &xp).unwrap();
            let b: [f64; 3] = boundary_target(k, &p, Side::Bottom, &xp).unwrap();
            for i in 0..3 {
                top[i] += t[i];
                bottom[i] += b[i];
            }
        }
        let sp: crate::geometry::SurfacePoint<3> =
            surface_sample(&p.profile, Side::Top, &xp).unwrap();
        let (u, w, nu) = (p.velocity, p.omega, sp.nu);
        let rigid = [
            u[0] + w[1] * nu[2] - w[2] * nu[1],
            u[1] + w[2] * nu[0] - w[0] * nu[2],
            u[2] + w[0] * nu[1] - w[1] * nu[0],
        ];
        for i in 0..3 {
            assert!((top[i] - rigid[i]).abs() < 1e-14);
            assert!(bottom[i].abs() < 1e-15);
        }
    }

    #[test]
    fn region_errors() {
        let p = params3(2.0);
        assert!(matches!(
            eval_field(1, &p, [0.6, 0.0, 0.0]),
            Err(Error::OutOfRegion(_))
        ));
        assert!(matches!(
            eval_field(1, &p, [0.0, 0.0, 0.01]),
            Err(Error::OutOfRegion(_))
        ));
        assert!(matches!(
            eval_field(7, &p, [0.0, 0.0, 0.0]),
            Err(Error::InvalidSubflow { .. })
        ));
        assert!(eval_field::<2>(1, &p, [0.0, 0.0]).is_err());
    }

    #[test]
    fn planar_squeeze_top_values() {
        let pr = GapProfile::m_convex(Dimension::Two, 1.5, 0.5, 1e-3, 1.0).unwrap();
        let p = ProblemParams::new_2d(pr, 1.0, [0.0, 2.0], 0.7).unwrap();
        let x1 = -0.23;
        let h = pr.gap(&[x1]).unwrap();
        let f = eval_field(4, &p, [x1, 0.5 * h]).unwrap();
        assert!((f.u[1] - 0.35 * x1).abs() < 1e-12);
        let f = eval_field(2, &p, [x1, -0.5 * h]).unwrap();
        assert!((f.u[1] + 1.0).abs() < 1e-12);
        assert!(planar_potential(&pr, 4, -0.5).unwrap().abs() < 1e-15);
    }
}

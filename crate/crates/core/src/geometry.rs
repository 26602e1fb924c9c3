//! Gap profiles, the gap function `h`, and samples of the gap boundary.
//!
//! The particles sit symmetrically about the midplane `x3 = 0`. The upper
//! particle `D1` has its centroid at `(0', eps/2 + R)` and its lower surface
//! at `x3 = h(x')/2`; the lower particle mirrors it. Both particles have unit
//! curvature coefficients.

use crate::error::{Error, Result};
use crate::jet::Jet2;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
}

impl Dimension {
    pub fn value(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    pub fn from_value(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(Error::Domain(format!("dimension must be 2 or 3, got {d}"))),
        }
    }

    /// Number of sub-flows in the boundary-data decomposition.
    pub fn subflow_count(self) -> usize {
        match self {
            Dimension::Two => 5,
            Dimension::Three => 7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileKind {
    /// `h = eps + |x'|^m`.
    MConvex { m: f64 },
    /// `h = eps` for `|x'| <= s`, `eps + (|x'| - s)^2` beyond.
    FlatCapped { s: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Top,
    Bottom,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub dimension: Dimension,
    pub kind: ProfileKind,
    /// Radius (half-width in 2D) of the gap region.
    pub r: f64,
    pub eps: f64,
    /// Distance from the particle apex to its centroid.
    pub big_r: f64,
}

/// A point on the gap boundary. The last coordinate is vertical.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint<const D: usize> {
    pub x: [f64; D],
    /// Unit normal pointing into the gap (downward on the top surface).
    pub n: [f64; D],
    /// Lever arm `x - x_D1`.
    pub nu: [f64; D],
    /// Area element `dS / dx'`.
    pub jac: f64,
}

impl<const D: usize> SurfacePoint<D> {
    pub fn xprime(&self) -> &[f64] {
        &self.x[..D - 1]
    }

    pub fn x3(&self) -> f64 {
        self.x[D - 1]
    }
}

impl GapProfile {
    pub fn m_convex(dimension: Dimension, m: f64, r: f64, eps: f64, big_r: f64) -> Result<Self> {
        let p = Self {
            dimension,
            kind: ProfileKind::MConvex { m },
            r,
            eps,
            big_r,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn flat_capped(dimension: Dimension, s: f64, r: f64, eps: f64, big_r: f64) -> Result<Self> {
        let p = Self {
            dimension,
            kind: ProfileKind::FlatCapped { s },
            r,
            eps,
            big_r,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |c: bool, msg: String| if c { Ok(()) } else { Err(Error::Domain(msg)) };
        ok(
            self.eps > 0.0 && self.eps.is_finite(),
            format!("eps must be positive, got {}", self.eps),
        )?;
        ok(
            self.r > 0.0 && self.r.is_finite(),
            format!("r must be positive, got {}", self.r),
        )?;
        ok(
            self.eps < self.r,
            format!("eps = {} must be smaller than r = {}", self.eps, self.r),
        )?;
        ok(
            self.r < self.big_r,
            format!("r = {} must be smaller than R = {}", self.r, self.big_r),
        )?;
        match self.kind {
            ProfileKind::MConvex { m } => match self.dimension {
                Dimension::Three => ok(m >= 2.0, format!("3D profiles need m >= 2, got {m}")),
                Dimension::Two => ok(m > 1.0, format!("2D profiles need m > 1, got {m}")),
            },
            ProfileKind::FlatCapped { s } => ok(
                s > 0.0 && s < self.r,
                format!("flat radius s = {s} must lie in (0, r)"),
            ),
        }
    }

    /// Returns a copy with a different gap width.
    pub fn with_eps(&self, eps: f64) -> Self {
        Self { eps, ..*self }
    }

    /// Convexity exponent; the curved part of a flat-capped profile is quadratic.
    pub fn m(&self) -> f64 {
        match self.kind {
            ProfileKind::MConvex { m } => m,
            ProfileKind::FlatCapped { .. } => 2.0,
        }
    }

    pub fn s(&self) -> Option<f64> {
        match self.kind {
            ProfileKind::FlatCapped { s } => Some(s),
            ProfileKind::MConvex { .. } => None,
        }
    }

    /// Whether `0 < s < (sqrt 2 - 1) r` holds (always true for m-convex profiles).
    pub fn flat_hypothesis_holds(&self) -> bool {
        match self.kind {
            ProfileKind::FlatCapped { s } => s > 0.0 && s < (2f64.sqrt() - 1.0) * self.r,
            ProfileKind::MConvex { .. } => true,
        }
    }

    /// Width of the boundary layer where the integrands vary fastest.
    pub fn layer_scale(&self) -> f64 {
        self.eps.powf(1.0 / self.m())
    }

    /// The profile part `f(rho) = h - eps` with its first two derivatives in `rho >= 0`.
    pub fn shape(&self, rho: f64) -> (f64, f64, f64) {
        match self.kind {
            ProfileKind::MConvex { m } => {
                if rho == 0.0 {
                    let f2 = if m == 2.0 { 2.0 } else { 0.0 };
                    return (0.0, 0.0, f2);
                }
                if m == 2.0 {
                    (rho * rho, 2.0 * rho, 2.0)
                } else if m == 3.0 {
                    (rho * rho * rho, 3.0 * rho * rho, 6.0 * rho)
                } else if m == 4.0 {
                    let r2 = rho * rho;
                    (r2 * r2, 4.0 * r2 * rho, 12.0 * r2)
                } else {
                    let p = rho.powf(m - 2.0);
                    (p * rho * rho, m * p * rho, m * (m - 1.0) * p)
                }
            }
            ProfileKind::FlatCapped { s } => {
                if rho <= s {
                    (0.0, 0.0, 0.0)
                } else {
                    let d = rho - s;
                    (d * d, 2.0 * d, 2.0)
                }
            }
        }
    }

    /// Gap height at distance `rho` from the axis, without a region check.
    pub fn height(&self, rho: f64) -> f64 {
        self.eps + self.shape(rho).0
    }

    /// Gap function `h(x')` with a region check.
    pub fn gap(&self, xprime: &[f64]) -> Result<f64> {
        let rho = self.check_region(xprime)?;
        Ok(self.height(rho))
    }

    pub(crate) fn check_region(&self, xprime: &[f64]) -> Result<f64> {
        if xprime.len() + 1 != self.dimension.value() {
            return Err(Error::Domain(format!(
                "expected {} planar coordinates, got {}",
                self.dimension.value() - 1,
                xprime.len()
            )));
        }
        let rho = xprime.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(rho <= self.r * (1.0 + 1e-12)) {
            return Err(Error::OutOfRegion(format!(
                "|x'| = {rho} exceeds r = {}",
                self.r
            )));
        }
        Ok(rho)
    }

    /// Gap function as a jet in `(x1, x2)`; valid for any planar point.
    pub fn gap_jet_3d(&self, x1: f64, x2: f64) -> Jet2<2> {
        let rho = (x1 * x1 + x2 * x2).sqrt();
        let (f, f1, f2) = self.shape(rho);
        let mut j = Jet2::<2>::constant(self.eps + f);
        if rho == 0.0 {
            j.h = [[f2, 0.0], [0.0, f2]];
            return j;
        }
        let e = [x1 / rho, x2 / rho];
        let q = f1 / rho;
        for i in 0..2 {
            j.g[i] = f1 * e[i];
            for k in 0..2 {
                let delta = if i == k { 1.0 } else { 0.0 };
                j.h[i][k] = f2 * e[i] * e[k] + q * (delta - e[i] * e[k]);
            }
        }
        j
    }

    /// Gap function as a jet in `x1` for the planar problem.
    pub fn gap_jet_2d(&self, x1: f64) -> Jet2<1> {
        let (f, f1, f2) = self.shape(x1.abs());
        Jet2 {
            v: self.eps + f,
            g: [f1 * x1.signum() * if x1 == 0.0 { 0.0 } else { 1.0 }],
            h: [[f2]],
        }
    }

    /// Gradient of `h` at a planar point (length `D - 1`).
    fn gap_gradient(&self, xprime: &[f64]) -> Vec<f64> {
        match xprime.len() {
            1 => self.gap_jet_2d(xprime[0]).g.to_vec(),
            _ => self.gap_jet_3d(xprime[0], xprime[1]).g.to_vec(),
        }
    }
}

/// Gap function `h(x')`; errors outside the gap region.
pub fn gap(profile: &GapProfile, xprime: &[f64]) -> Result<f64> {
    profile.gap(xprime)
}

/// Samples the top (`D1`) or bottom (`D2`) gap boundary above `xprime`.
pub fn surface_sample<const D: usize>(
    profile: &GapProfile,
    side: Side,
    xprime: &[f64],
) -> Result<SurfacePoint<D>> {
    if profile.dimension.value() != D {
        return Err(Error::Domain(format!(
            "profile is {}D but a {D}D sample was requested",
            profile.dimension.value()
        )));
    }
    let rho = profile.check_region(xprime)?;
    let h = profile.height(rho);
    let grad = profile.gap_gradient(xprime);
    let slope2: f64 = grad.iter().map(|g| 0.25 * g * g).sum();
    let jac = (1.0 + slope2).sqrt();
    let sign = match side {
        Side::Top => 1.0,
        Side::Bottom => -1.0,
    };
    let mut x = [0.0; D];
    let mut n = [0.0; D];
    let mut nu = [0.0; D];
    for i in 0..D - 1 {
        x[i] = xprime[i];
        n[i] = 0.5 * grad[i] / jac;
        nu[i] = xprime[i];
    }
    x[D - 1] = sign * 0.5 * h;
    n[D - 1] = -sign / jac;
    nu[D - 1] = x[D - 1] - 0.5 * profile.eps - profile.big_r;
    Ok(SurfacePoint { x, n, nu, jac })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> GapProfile {
        GapProfile::m_convex(Dimension::Three, 2.0, 0.5, 1e-3, 1.0).unwrap()
    }

    fn flat() -> GapProfile {
        GapProfile::flat_capped(Dimension::Three, 0.1, 0.5, 1e-3, 1.0).unwrap()
    }

    #[test]
    fn gap_values() {
        assert!((m2().gap(&[0.1, 0.0]).unwrap() - 0.011).abs() < 1e-15);
        assert_eq!(flat().gap(&[0.05, 0.0]).unwrap(), 1e-3);
        assert!((flat().gap(&[0.3, 0.0]).unwrap() - 0.041).abs() < 1e-15);
        assert!(matches!(m2().gap(&[0.6, 0.0]), Err(Error::OutOfRegion(_))));
    }

    #[test]
    fn apex_and_normals() {
        let p = m2();
        let sp: SurfacePoint<3> = surface_sample(&p, Side::Top, &[0.0, 0.0]).unwrap();
        assert_eq!(sp.n, [0.0, 0.0, -1.0]);
        assert_eq!(sp.jac, 1.0);
        assert_eq!(sp.x[2], 0.5e-3);
        assert_eq!(sp.nu, [0.0, 0.0, -1.0]);
        let t = 0.3;
        let sp: SurfacePoint<3> = surface_sample(&p, Side::Top, &[t, 0.0]).unwrap();
        let d = (1.0 + t * t).sqrt();
        assert!((sp.n[0] - t / d).abs() < 1e-15);
        assert!((sp.n[2] + 1.0 / d).abs() < 1e-15);
        assert!((sp.n[2] * sp.jac + 1.0).abs() < 1e-15);
    }

    #[test]
    fn flat_cap_lever_arm() {
        let p = flat();
        let sp: SurfacePoint<3> = surface_sample(&p, Side::Top, &[0.05, 0.0]).unwrap();
        assert_eq!(sp.n, [0.0, 0.0, -1.0]);
        assert!((sp.nu[2] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn jet_matches_finite_differences() {
        for p in [
            m2(),
            flat(),
            GapProfile::m_convex(Dimension::Three, 3.0, 0.5, 1e-3, 1.0).unwrap(),
        ] {
            let (x1, x2) = (0.21, -0.13);
            let j = p.gap_jet_3d(x1, x2);
            let d = 1e-6;
            let h = |a: f64, b: f64| p.gap_jet_3d(a, b).v;
            let gx = (h(x1 + d, x2) - h(x1 - d, x2)) / (2.0 * d);
            let gy = (h(x1, x2 + d) - h(x1, x2 - d)) / (2.0 * d);
            assert!((gx - j.g[0]).abs() < 1e-8);
            assert!((gy - j.g[1]).abs() < 1e-8);
            let g = |a: f64, b: f64| p.gap_jet_3d(a, b).g;
            let hxy = (g(x1, x2 + d)[0] - g(x1, x2 - d)[0]) / (2.0 * d);
            let hxx = (g(x1 + d, x2)[0] - g(x1 - d, x2)[0]) / (2.0 * d);
            assert!((hxy - j.h[0][1]).abs() < 1e-7);
            assert!((hxx - j.h[0][0]).abs() < 1e-7);
        }
    }
}

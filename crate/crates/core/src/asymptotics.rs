//! Closed-form singular expansions of force and torque as `eps -> 0`, and
//! helpers for fitting blow-up exponents to numeric samples.
//!
//! Component order follows [`crate::traction::component_names`]: `F1, F2,
//! F3, T1, T2, T3` in 3D and `F1, F2, T` in 2D.

use crate::error::{Error, Result};
use crate::fields::ProblemParams;
use crate::geometry::{Dimension, ProfileKind};
use crate::special::{gamma_coeff, AsymptoticExpansion, AsymptoticTerm, BRANCH_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How to treat motions outside `U3 <= 0, omega_i >= 0` when bounds are built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignPolicy {
    /// Keep the equality terms, drop interval residuals, record a warning.
    #[default]
    Lenient,
    /// Fail with [`Error::SignConvention`].
    Strict,
}

/// Options shared by all expansion builders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AsymptoticOptions {
    pub sign_policy: SignPolicy,
    /// Evaluate flat-cap expansions even when `s >= (sqrt 2 - 1) r`.
    pub override_flat_hypothesis: bool,
}

/// Exponent case of the 2D force expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForceCase2d {
    /// `1 < m <= 3/2`.
    Mild,
    /// `m > 3/2`.
    Steep,
}

/// Exponent case of the 2D torque expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorqueCase2d {
    /// `1 < m <= 3/2`.
    UpToThreeHalves,
    /// `3/2 < m < 5/3`.
    BelowFiveThirds,
    /// `m = 5/3`, with a logarithmic term.
    FiveThirds,
    /// `5/3 < m < 3`.
    BelowThree,
    /// `m = 3`, with a logarithmic term.
    Three,
    /// `m > 3`.
    AboveThree,
}

/// Which expansion family produced a [`TheoremResult`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Regime {
    /// 3D m-convex gap with `m = 2` (logarithmic shear terms).
    Convex3dQuadratic,
    /// 3D m-convex gap with `m > 2`.
    Convex3dPower { m: f64 },
    /// 3D flat-capped gap.
    Flat3d { s: f64 },
    /// 2D m-convex gap.
    Convex2d {
        m: f64,
        force: ForceCase2d,
        torque: TorqueCase2d,
    },
    /// 2D flat-capped gap.
    Flat2d { s: f64 },
}

/// Per-component expansions with the regime that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremResult {
    pub dimension: Dimension,
    pub regime: Regime,
    pub force: Vec<AsymptoticExpansion>,
    pub torque: Vec<AsymptoticExpansion>,
    pub warnings: Vec<String>,
}

impl TheoremResult {
    /// Force components followed by torque components.
    pub fn components(&self) -> Vec<&AsymptoticExpansion> {
        self.force.iter().chain(self.torque.iter()).collect()
    }

    /// Listed terms of every component at `eps`.
    pub fn evaluate(&self, eps: f64) -> Vec<f64> {
        self.components().iter().map(|e| e.evaluate(eps)).collect()
    }
}

/// Named coefficients of the expansions for one profile and viscosity.
///
/// Entries that are undefined for the given `m` (a `Γ_ij` with `i < j/m`) are
/// `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub entries: Vec<(String, Option<f64>)>,
}

impl CoefficientSet {
    fn push(&mut self, name: &str, v: Option<f64>) {
        self.entries.push((name.to_string(), v));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .and_then(|(_, v)| *v)
    }
}

/// Index pairs `ij` for which `Γ_ij^(m)` appears in the expansions.
pub const GAMMA_INDEX_PAIRS: [(u32, u32); 9] = [
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 3),
    (2, 4),
    (3, 3),
    (3, 4),
    (3, 5),
    (3, 6),
];

fn g(i: f64, j: f64, m: f64) -> Result<f64> {
    gamma_coeff(i, j, m)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= BRANCH_TOL * a.abs().max(b.abs())
}

/// Coefficients of the 3D m-convex expansions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convex3dCoefficients {
    pub alpha12: f64,
    pub alpha34: f64,
    pub beta1: f64,
    pub beta2: f64,
}

pub fn convex_3d_coefficients(m: f64, mu: f64, r: f64, big_r: f64) -> Result<Convex3dCoefficients> {
    let g12 = g(1.0, 2.0, m)?;
    let g34 = g(3.0, 4.0, m)?;
    Ok(Convex3dCoefficients {
        alpha12: 2.0 * PI * mu * g12,
        alpha34: 1.5 * PI * mu * g34,
        beta1: 3.0 / 16.0
            * PI
            * mu
            * g34
            * (1.0 - 2f64.powf(m / 2.0 + 2.0) * big_r * r.powf(m - 2.0)
                + 2f64.powf(-2.0 * m) * r.powf(2.0 * m - 2.0)),
        beta2: 3.0
            * PI
            * mu
            * g34
            * (1.0 - 2f64.powf(-m) * big_r * r.powf(m - 2.0)
                + 2f64.powf(m - 2.0) * r.powf(2.0 * m - 2.0)),
    })
}

/// Coefficients of the 2D m-convex expansions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Convex2dCoefficients {
    pub alpha11: f64,
    pub alpha13: Option<f64>,
    pub alpha33: f64,
    pub alpha35: Option<f64>,
    pub beta: f64,
}

pub fn convex_2d_coefficients(m: f64, mu: f64, r: f64, big_r: f64) -> Result<Convex2dCoefficients> {
    let g33 = g(3.0, 3.0, m)?;
    let alpha13 = match (g(1.0, 3.0, m), g(2.0, 3.0, m)) {
        (Ok(g13), Ok(g23)) => Some(mu / (2.0 * m) * ((18.0 + 3.0 * m) * g13 + 6.0 * m * g23)),
        _ => None,
    };
    Ok(Convex2dCoefficients {
        alpha11: 2.0 * mu * g(1.0, 1.0, m)?,
        alpha13,
        alpha33: 3.0 * mu * g33,
        alpha35: g(3.0, 5.0, m).ok().map(|v| 3.0 * mu * v),
        beta: 3.0 * mu * (1.0 + 0.25 * r.powf(2.0 * m - 2.0) - big_r * r.powf(m - 2.0)) * g33,
    })
}

/// Lower/upper builders of the 3D flat-cap interval residuals, each a list of
/// terms in `eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatBounds3d {
    pub b1: Vec<AsymptoticTerm>,
    pub b2: Vec<AsymptoticTerm>,
    pub c1: Vec<AsymptoticTerm>,
    pub c2: Vec<AsymptoticTerm>,
    pub d1: Vec<AsymptoticTerm>,
    pub d2: Vec<AsymptoticTerm>,
}

fn p(c: f64, a: f64) -> AsymptoticTerm {
    AsymptoticTerm::power(c, a)
}

pub fn flat_bounds_3d(mu: f64, r: f64, s: f64, big_r: f64) -> FlatBounds3d {
    let s4 = s.powi(4);
    let pair = |c: f64, k: f64| vec![p(c, 1.0), p(c * k * s4, 3.0)];
    let sq2 = 2f64.sqrt();
    let d1_inv = 3.0 / 32.0
        * PI
        * (-4.0 * big_r * (sq2 * r - s).powi(2) + (r + s).powi(2) + (r - s).powi(4) / 16.0);
    let d1_cube = -3.0 / 16.0
        * PI
        * s4
        * (4.0 * big_r * (sq2 * r - s).powi(2) + (s - r).powi(2)
            - 2.0 * r * r
            - (r - s).powi(4) / 16.0);
    let d2_inv = 3.0 / 8.0 * PI * (-big_r * (r - s).powi(2) + 4.0 * r * r + (sq2 * r - s).powi(4));
    let d2_cube = -3.0 / 16.0
        * PI
        * s4
        * (big_r * (r - s).powi(2) - 4.0 * r * r + 2.0 * s * s - (sq2 * r - s).powi(4));
    FlatBounds3d {
        b1: pair(3.0 / 16.0 * PI * mu * (r - s).powi(2), 1.0),
        b2: pair(0.75 * PI * mu * (2.0 * r - s).powi(2), 2.0),
        c1: pair(0.75 * PI * mu * (r + s), 1.0),
        c2: pair(1.5 * PI * mu * r, 2.0),
        d1: vec![p(mu * d1_inv, 1.0), p(mu * d1_cube, 3.0)],
        d2: vec![p(mu * d2_inv, 1.0), p(mu * d2_cube, 3.0)],
    }
}

/// Coefficients of the 2D flat-cap expansions, keyed by the power of
/// `1/eps` they multiply.
#[derive(Clone, Debug, PartialEq)]
pub struct Flat2dCoefficients {
    pub alpha: [(f64, f64); 6],
    pub beta: [(f64, f64); 4],
    pub gamma0: f64,
    pub gamma: [(f64, f64); 6],
}

pub fn flat_2d_coefficients(params: &ProblemParams, s: f64) -> Result<Flat2dCoefficients> {
    let mu = params.mu;
    let (r, big_r) = (params.profile.r, params.profile.big_r);
    let (u1, u2, w) = (params.velocity[0], params.velocity[1], params.omega[0]);
    let g11 = g(1.0, 1.0, 2.0)?;
    let g21 = g(2.0, 1.0, 2.0)?;
    let g31 = g(3.0, 1.0, 2.0)?;
    let g33 = g(3.0, 3.0, 2.0)?;
    let g35 = g(3.0, 5.0, 2.0)?;
    let shear = u1 + w * big_r;
    let rs2 = (r - s).powi(2);
    let rs4 = rs2 * rs2;
    let (s2, s3) = (s * s, s * s * s);
    let alpha = [
        (0.5, 2.0 * mu * shear * g11 + 3.0 * mu * w * g33),
        (1.0, 2.0 * mu * shear * s + 3.0 * mu * w * s),
        (1.5, mu * w * (3.0 * rs2 * g33 + 3.0 * s2 * g31)),
        (2.0, mu * w * (3.0 * s * rs2 + 2.0 * s3)),
        (2.5, 3.0 * mu * w * s2 * rs2 * g31),
        (3.0, 2.0 * mu * w * s3 * rs2),
    ];
    let beta = [
        (1.5, 6.0 * mu * (2.0 * u2 - w * r) * g33),
        (2.0, 6.0 * mu * s * (u2 - w * r)),
        (2.5, 6.0 * mu * w * s2 * r * g31),
        (
            3.0,
            4.0 * mu * s * (3.0 * u2 * r * r - u2 * s2 - w * r * s2),
        ),
    ];
    let gamma = [
        (
            0.5,
            2.0 * mu * big_r * shear * g11
                + 0.75
                    * mu
                    * w
                    * (-6.0 * s2 * g11 - 2.0 * s2 * g21 + s2 * g31 + 4.0 * big_r * g33 + 4.0 * g35),
        ),
        (
            1.0,
            mu * w * s * (3.0 * big_r - s2 + 6.0) + 2.0 * mu * big_r * shear * s,
        ),
        (
            1.5,
            0.25 * mu
                * w
                * ((12.0 * big_r * rs2 - 3.0 * rs4 - 12.0 * r * r) * g33
                    + 12.0 * big_r * s2 * g31
                    + 36.0 * s2),
        ),
        (
            2.0,
            0.25 * mu
                * w
                * (8.0 * s3 * big_r - 12.0 * s * r * r + 24.0 * s3 + 12.0 * big_r * s * rs2
                    - 3.0 * s * rs4),
        ),
        (
            2.5,
            0.25 * mu
                * w
                * (-12.0 * s2 * r * r + 12.0 * s2 * s2 + 12.0 * big_r * s2 * rs2 - 3.0 * s2 * rs4)
                * g31,
        ),
        (
            3.0,
            0.5 * mu
                * w
                * (-20.0 * r * r * s3 + 12.0 * s3 * s2 + 20.0 * big_r * s3 * rs2 - 5.0 * s3 * rs4),
        ),
    ];
    Ok(Flat2dCoefficients {
        alpha,
        beta,
        gamma0: 4.5 * mu * w * s,
        gamma,
    })
}

/// Every named coefficient for the given parameters, for tabulation.
pub fn coefficient_set(params: &ProblemParams) -> Result<CoefficientSet> {
    let pr = &params.profile;
    let mut set = CoefficientSet::default();
    match (pr.dimension, pr.kind) {
        (Dimension::Three, ProfileKind::MConvex { m }) => {
            let c = convex_3d_coefficients(m, params.mu, pr.r, pr.big_r)?;
            set.push("alpha12", Some(c.alpha12));
            set.push("alpha34", Some(c.alpha34));
            set.push("beta1", Some(c.beta1));
            set.push("beta2", Some(c.beta2));
        }
        (Dimension::Two, ProfileKind::MConvex { m }) => {
            let c = convex_2d_coefficients(m, params.mu, pr.r, pr.big_r)?;
            set.push("alpha11", Some(c.alpha11));
            set.push("alpha13", c.alpha13);
            set.push("alpha33", Some(c.alpha33));
            set.push("alpha35", c.alpha35);
            set.push("beta", Some(c.beta));
        }
        (Dimension::Three, ProfileKind::FlatCapped { s }) => {
            let b = flat_bounds_3d(params.mu, pr.r, s, pr.big_r);
            let named = [
                ("B1", &b.b1),
                ("B2", &b.b2),
                ("C1", &b.c1),
                ("C2", &b.c2),
                ("D1", &b.d1),
                ("D2", &b.d2),
            ];
            for (n, terms) in named {
                set.push(&format!("{n}[eps^-1]"), Some(terms[0].coeff));
                set.push(&format!("{n}[eps^-3]"), Some(terms[1].coeff));
            }
        }
        (Dimension::Two, ProfileKind::FlatCapped { s }) => {
            let c = flat_2d_coefficients(params, s)?;
            for (a, v) in c.alpha {
                set.push(&format!("alpha_{a}"), Some(v));
            }
            for (a, v) in c.beta {
                set.push(&format!("beta_{a}"), Some(v));
            }
            set.push("gamma_0", Some(c.gamma0));
            for (a, v) in c.gamma {
                set.push(&format!("gamma_{a}"), Some(v));
            }
        }
    }
    Ok(set)
}

/// Checks `U3 <= 0` and `omega_i >= 0`; returns whether interval residuals
/// may be attached.
fn sign_check(
    params: &ProblemParams,
    policy: SignPolicy,
    warnings: &mut Vec<String>,
) -> Result<bool> {
    let mut bad = Vec::new();
    if params.velocity[2] > 0.0 {
        bad.push(format!("U3 = {} > 0", params.velocity[2]));
    }
    for (i, w) in params.omega.iter().enumerate() {
        if *w < 0.0 {
            bad.push(format!("omega{} = {} < 0", i + 1, w));
        }
    }
    if bad.is_empty() {
        return Ok(true);
    }
    let msg = bad.join(", ");
    match policy {
        SignPolicy::Strict => Err(Error::SignConvention(msg)),
        SignPolicy::Lenient => {
            warnings.push(format!("interval bounds suppressed: {msg}"));
            Ok(false)
        }
    }
}

fn scaled(terms: &[AsymptoticTerm], c: f64) -> Vec<AsymptoticTerm> {
    terms
        .iter()
        .map(|t| AsymptoticTerm {
            coeff: c * t.coeff,
            ..*t
        })
        .collect()
}

fn with_bounds(
    terms: Vec<AsymptoticTerm>,
    lower: Vec<AsymptoticTerm>,
    upper: Vec<AsymptoticTerm>,
    keep: bool,
) -> AsymptoticExpansion {
    if keep {
        AsymptoticExpansion::interval(terms, lower, upper)
    } else {
        AsymptoticExpansion::bounded(terms)
    }
}

fn require(params: &ProblemParams, dim: Dimension) -> Result<()> {
    params.validate()?;
    if params.dimension() != dim {
        return Err(Error::Domain(format!(
            "expansion needs a {}D problem, got {}D",
            dim.value(),
            params.dimension().value()
        )));
    }
    Ok(())
}

/// Expansions for a 3D m-convex gap, `m >= 2`.
pub fn force_asymptotic_3d(
    params: &ProblemParams,
    opts: &AsymptoticOptions,
) -> Result<TheoremResult> {
    require(params, Dimension::Three)?;
    let m = match params.profile.kind {
        ProfileKind::MConvex { m } if m >= 2.0 || close(m, 2.0) => m,
        other => {
            return Err(Error::Domain(format!(
                "3D m-convex expansions need m >= 2, got {other:?}"
            )))
        }
    };
    let mut warnings = Vec::new();
    let keep = sign_check(params, opts.sign_policy, &mut warnings)?;
    let (r, big_r) = (params.profile.r, params.profile.big_r);
    let c = convex_3d_coefficients(m, params.mu, r, big_r)?;
    let [u1, u2, u3] = params.velocity;
    let [w1, w2, _] = params.omega;
    let quadratic = close(m, 2.0);
    let top = 3.0 - 4.0 / m;
    // Shear terms: |ln eps| for m = 2, eps^-(1 - 2/m) otherwise.
    let shear = |coeff: f64| {
        if quadratic {
            AsymptoticTerm::log(coeff)
        } else {
            p(coeff, 1.0 - 2.0 / m)
        }
    };
    let (lo, hi) = if quadratic {
        (0.25 * r * r, 2.0 * r * r)
    } else {
        (2f64.powf(-m) * r.powf(m), 2f64.powf(m / 2.0) * r.powf(m))
    };
    // The eps^-(2 - 4/m) term is bounded at m = 2.
    let middle = |coeff: f64| {
        if quadratic {
            Vec::new()
        } else {
            vec![p(coeff, 2.0 - 4.0 / m)]
        }
    };
    let f1 = with_bounds(
        [
            vec![shear(-(u1 - w2 * big_r) * c.alpha12)],
            middle(w2 * c.alpha34),
        ]
        .concat(),
        vec![p(w2 * lo * c.alpha34, top)],
        vec![p(w2 * hi * c.alpha34, top)],
        keep,
    );
    let f2 = with_bounds(
        [
            vec![shear(-(u2 + w1 * big_r) * c.alpha12)],
            middle(-w1 * c.alpha34),
        ]
        .concat(),
        vec![p(-w1 * hi * c.alpha34, top)],
        vec![p(-w1 * lo * c.alpha34, top)],
        keep,
    );
    let f3 = with_bounds(
        vec![p(-2.0 * u3 * c.alpha34, top)],
        vec![p((w1 + w2) * r * c.alpha34, top)],
        vec![p(2.0 * (w1 + w2) * r * c.alpha34, top)],
        keep,
    );
    let t1 = with_bounds(
        vec![shear(-big_r * (u2 + w1 * big_r) * c.alpha12)],
        vec![p(w1 * r * r * c.beta1, top)],
        vec![p(w1 * r * r * c.beta2, top)],
        keep,
    );
    let t2 = with_bounds(
        vec![shear(big_r * (u1 - w2 * big_r) * c.alpha12)],
        vec![p(w2 * r * r * c.beta1, top)],
        vec![p(w2 * r * r * c.beta2, top)],
        keep,
    );
    Ok(TheoremResult {
        dimension: Dimension::Three,
        regime: if quadratic {
            Regime::Convex3dQuadratic
        } else {
            Regime::Convex3dPower { m }
        },
        force: vec![f1, f2, f3],
        torque: vec![t1, t2, AsymptoticExpansion::default()],
        warnings,
    })
}

fn flat_hypothesis(
    s: f64,
    r: f64,
    opts: &AsymptoticOptions,
    warnings: &mut Vec<String>,
) -> Result<()> {
    let limit = (2f64.sqrt() - 1.0) * r;
    if s > 0.0 && s < limit {
        return Ok(());
    }
    let msg = format!("need 0 < s < (sqrt 2 - 1) r = {limit}, got s = {s}");
    if opts.override_flat_hypothesis && s > 0.0 && s < r {
        warnings.push(format!("flat-cap hypothesis overridden: {msg}"));
        Ok(())
    } else {
        Err(Error::Hypothesis(msg))
    }
}

/// Expansions for a 3D flat-capped gap.
pub fn force_asymptotic_3d_flat(
    params: &ProblemParams,
    opts: &AsymptoticOptions,
) -> Result<TheoremResult> {
    require(params, Dimension::Three)?;
    let s = match params.profile.kind {
        ProfileKind::FlatCapped { s } => s,
        other => {
            return Err(Error::Domain(format!(
                "flat-cap expansions need a flat-capped profile, got {other:?}"
            )))
        }
    };
    let (mu, r, big_r) = (params.mu, params.profile.r, params.profile.big_r);
    let mut warnings = Vec::new();
    flat_hypothesis(s, r, opts, &mut warnings)?;
    let keep = sign_check(params, opts.sign_policy, &mut warnings)?;
    let b = flat_bounds_3d(mu, r, s, big_r);
    let [u1, u2, u3] = params.velocity;
    let [w1, w2, _] = params.omega;
    let g11 = g(1.0, 1.0, 2.0)?;
    let g21 = g(2.0, 1.0, 2.0)?;
    let g32 = g(3.0, 2.0, 2.0)?;
    let shear = |c: f64| {
        vec![
            AsymptoticTerm::log(c),
            p(c * 2.0 * s * g11, 0.5),
            p(c * s * s, 1.0),
        ]
    };
    let squeeze = |c: f64| {
        vec![
            p(c * 0.5, 1.0),
            p(c * 3.0 * s * g21, 1.5),
            p(c * 4.0 * s * s * g32, 2.0),
            p(c * (2.0 * r * r * s * s - s.powi(4)) / 2.0, 3.0),
        ]
    };
    let f1 = with_bounds(
        shear(-PI * mu * (u1 - w2 * big_r)),
        scaled(&b.b1, w2),
        scaled(&b.b2, w2),
        keep,
    );
    let f2 = with_bounds(
        shear(-PI * mu * (u2 + w1 * big_r)),
        scaled(&b.b2, -w1),
        scaled(&b.b1, -w1),
        keep,
    );
    let f3 = with_bounds(
        squeeze(-3.0 * PI * mu * u3),
        scaled(&b.c1, w1 + w2),
        scaled(&b.c2, w1 + w2),
        keep,
    );
    let t1 = with_bounds(
        shear(-PI * mu * big_r * (u2 + w1 * big_r)),
        scaled(&b.d1, w1),
        scaled(&b.d2, w1),
        keep,
    );
    let t2 = with_bounds(
        shear(PI * mu * big_r * (u1 - w2 * big_r)),
        scaled(&b.d1, w2),
        scaled(&b.d2, w2),
        keep,
    );
    Ok(TheoremResult {
        dimension: Dimension::Three,
        regime: Regime::Flat3d { s },
        force: vec![f1, f2, f3],
        torque: vec![t1, t2, AsymptoticExpansion::default()],
        warnings,
    })
}

pub fn force_case_2d(m: f64) -> Result<ForceCase2d> {
    if !(m > 1.0) {
        return Err(Error::Domain(format!("2D expansions need m > 1, got {m}")));
    }
    Ok(if m <= 1.5 || close(m, 1.5) {
        ForceCase2d::Mild
    } else {
        ForceCase2d::Steep
    })
}

pub fn torque_case_2d(m: f64) -> Result<TorqueCase2d> {
    if !(m > 1.0) {
        return Err(Error::Domain(format!("2D expansions need m > 1, got {m}")));
    }
    let five_thirds = 5.0 / 3.0;
    Ok(if m <= 1.5 || close(m, 1.5) {
        TorqueCase2d::UpToThreeHalves
    } else if close(m, five_thirds) {
        TorqueCase2d::FiveThirds
    } else if m < five_thirds {
        TorqueCase2d::BelowFiveThirds
    } else if close(m, 3.0) {
        TorqueCase2d::Three
    } else if m < 3.0 {
        TorqueCase2d::BelowThree
    } else {
        TorqueCase2d::AboveThree
    })
}

fn missing(name: &str, m: f64) -> Error {
    Error::Domain(format!("{name} is undefined for m = {m}"))
}

/// Expansions for a 2D m-convex gap, `m > 1`.
pub fn force_asymptotic_2d(params: &ProblemParams) -> Result<TheoremResult> {
    require(params, Dimension::Two)?;
    let m = match params.profile.kind {
        ProfileKind::MConvex { m } => m,
        other => {
            return Err(Error::Domain(format!(
                "2D m-convex expansions need an m-convex profile, got {other:?}"
            )))
        }
    };
    let fcase = force_case_2d(m)?;
    let tcase = torque_case_2d(m)?;
    let (mu, r, big_r) = (params.mu, params.profile.r, params.profile.big_r);
    let c = convex_2d_coefficients(m, mu, r, big_r)?;
    let (u1, u2, w) = (params.velocity[0], params.velocity[1], params.omega[0]);
    let shear = u1 + w * big_r;
    let e_shear = 1.0 - 1.0 / m;
    let e_mid = 2.0 - 3.0 / m;
    let e_top = 3.0 - 3.0 / m;

    let mut f1 = vec![
        p(-shear * c.alpha11, e_shear),
        p(-w * r.powf(m) * c.alpha33, e_top),
    ];
    if fcase == ForceCase2d::Steep {
        f1.push(p(-w * c.alpha33, e_mid));
    }
    let f2 = vec![p(-2.0 * (2.0 * u2 - w * r) * c.alpha33, e_top)];

    let mut t = vec![
        p(-big_r * shear * c.alpha11, e_shear),
        p(w * r * r * c.beta, e_top),
    ];
    use TorqueCase2d::*;
    if tcase != UpToThreeHalves {
        t.push(p(-big_r * w * c.alpha33, e_mid));
    }
    match tcase {
        FiveThirds => t.push(AsymptoticTerm::log(-18.0 / 5.0 * mu * w)),
        BelowThree | Three | AboveThree => {
            let a35 = c.alpha35.ok_or_else(|| missing("alpha35", m))?;
            t.push(p(-w * a35, 3.0 - 5.0 / m));
        }
        _ => {}
    }
    match tcase {
        Three => t.push(AsymptoticTerm::log(1.5 * mu * w)),
        AboveThree => {
            let a13 = c.alpha13.ok_or_else(|| missing("alpha13", m))?;
            t.push(p(w * a13, 1.0 - 3.0 / m));
        }
        _ => {}
    }
    Ok(TheoremResult {
        dimension: Dimension::Two,
        regime: Regime::Convex2d {
            m,
            force: fcase,
            torque: tcase,
        },
        force: vec![
            AsymptoticExpansion::bounded(f1),
            AsymptoticExpansion::bounded(f2),
        ],
        torque: vec![AsymptoticExpansion::bounded(t)],
        warnings: Vec::new(),
    })
}

/// Expansions for a 2D flat-capped gap.
pub fn force_asymptotic_2d_flat(
    params: &ProblemParams,
    opts: &AsymptoticOptions,
) -> Result<TheoremResult> {
    require(params, Dimension::Two)?;
    let s = match params.profile.kind {
        ProfileKind::FlatCapped { s } => s,
        other => {
            return Err(Error::Domain(format!(
                "flat-cap expansions need a flat-capped profile, got {other:?}"
            )))
        }
    };
    let mut warnings = Vec::new();
    flat_hypothesis(s, params.profile.r, opts, &mut warnings)?;
    let c = flat_2d_coefficients(params, s)?;
    let neg = |v: &[(f64, f64)]| v.iter().map(|&(a, k)| p(-k, a)).collect::<Vec<_>>();
    let mut f2 = neg(&c.beta);
    // The eps^(-5/2) term enters with the opposite sign.
    f2[2].coeff = -f2[2].coeff;
    let mut t = neg(&c.gamma);
    // -gamma0 ln eps = gamma0 |ln eps| for eps < 1.
    t.push(AsymptoticTerm::log(c.gamma0));
    Ok(TheoremResult {
        dimension: Dimension::Two,
        regime: Regime::Flat2d { s },
        force: vec![
            AsymptoticExpansion::bounded(neg(&c.alpha)),
            AsymptoticExpansion::bounded(f2),
        ],
        torque: vec![AsymptoticExpansion::bounded(t)],
        warnings,
    })
}

/// Dispatches on dimension and profile kind.
pub fn force_asymptotic(params: &ProblemParams, opts: &AsymptoticOptions) -> Result<TheoremResult> {
    match (params.dimension(), params.profile.kind) {
        (Dimension::Three, ProfileKind::MConvex { .. }) => force_asymptotic_3d(params, opts),
        (Dimension::Three, ProfileKind::FlatCapped { .. }) => {
            force_asymptotic_3d_flat(params, opts)
        }
        (Dimension::Two, ProfileKind::MConvex { .. }) => force_asymptotic_2d(params),
        (Dimension::Two, ProfileKind::FlatCapped { .. }) => force_asymptotic_2d_flat(params, opts),
    }
}

/// Least-squares fit of `ln|v| = slope * ln eps + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the fit residuals in `ln|v|`.
    pub residual: f64,
}

pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    if samples.len() < 3 {
        return Err(Error::Degenerate(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let positive = samples[0].1 > 0.0;
    for &(e, v) in samples {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::Degenerate(format!(
                "eps must be positive and finite, got {e}"
            )));
        }
        if v == 0.0 || !v.is_finite() || (v > 0.0) != positive {
            return Err(Error::Degenerate(
                "values must be finite, nonzero and of one sign".into(),
            ));
        }
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(e, _)| {
            (lo.min(e), hi.max(e))
        });
    if hi / lo < 10.0 * (1.0 - 1e-12) {
        return Err(Error::Degenerate(format!(
            "eps range [{lo:e}, {hi:e}] spans less than a decade"
        )));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(e, v)| (e.ln(), v.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / n;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|q| (q.1 - intercept - slope * q.0).powi(2))
        .sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual: (rss / n).sqrt(),
    })
}

/// Solves `v = c * shape(eps) + d` through two samples, where `shape` is the
/// unit-coefficient form of `term` (`eps^-a` or `|ln eps|`). Returns `(c, d)`.
pub fn two_point_coefficient(
    term: AsymptoticTerm,
    a: (f64, f64),
    b: (f64, f64),
) -> Result<(f64, f64)> {
    let unit = AsymptoticTerm { coeff: 1.0, ..term };
    let (sa, sb) = (unit.evaluate(a.0), unit.evaluate(b.0));
    if sa == sb || !sa.is_finite() || !sb.is_finite() {
        return Err(Error::Degenerate(format!(
            "samples at eps = {} and {} do not separate the term",
            a.0, b.0
        )));
    }
    let c = (a.1 - b.1) / (sa - sb);
    Ok((c, a.1 - c * sa))
}

/// Log-spaced epsilons from `from` down to `to`, inclusive.
pub fn log_grid(from: f64, to: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![from];
    }
    let (a, b) = (from.ln(), to.ln());
    (0..points)
        .map(|i| {
            if i == 0 {
                from
            } else if i == points - 1 {
                to
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

//! Property suites run against a configured problem.

use crate::config::RunConfig;
use lubgap::asymptotics::{fit_exponent, force_asymptotic, log_grid, two_point_coefficient};
use lubgap::dualcheck::{err_sweep, subflow_active, DUAL_SUBFLOWS};
use lubgap::fields::{pressure_gradient, rigid_divergence};
use lubgap::traction::total_numeric;
use lubgap::{
    boundary_target, eval_field, force_numeric, Dimension, Error, ProblemParams, ProfileKind, Side,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const SEED: u64 = 0x6c75_6267_6170;
const BC_POINTS: usize = 1000;
const INTERIOR_POINTS: usize = 200;
const PARITY_CONFIGS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bc,
    Div,
    Parity,
    Dual,
    Exponents,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: measured <= tolerance,
            measured,
            tolerance,
            detail: String::new(),
        }
    }

    fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: false,
            measured: f64::NAN,
            tolerance: f64::NAN,
            detail: detail.into(),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<VerifyReport, Error> {
    let p = &cfg.problem;
    let checks = match suite {
        Suite::Bc => boundary_suite(p)?,
        Suite::Div => divergence_suite(p)?,
        Suite::Parity => parity_suite(cfg)?,
        Suite::Dual => dual_suite(cfg)?,
        Suite::Exponents => exponent_suite(cfg)?,
    };
    Ok(VerifyReport {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

/// Uniform planar point in the gap region.
fn planar_point(rng: &mut ChaCha8Rng, p: &ProblemParams) -> Vec<f64> {
    let r = p.profile.r;
    match p.dimension() {
        Dimension::Three => {
            let rho = r * rng.gen::<f64>().sqrt();
            let th = std::f64::consts::TAU * rng.gen::<f64>();
            vec![rho * th.cos(), rho * th.sin()]
        }
        Dimension::Two => vec![rng.gen_range(-r..r)],
    }
}

fn point_with_height<const D: usize>(xp: &[f64], x3: f64) -> [f64; D] {
    let mut x = [0.0; D];
    x[..D - 1].copy_from_slice(xp);
    x[D - 1] = x3;
    x
}

fn boundary_suite(p: &ProblemParams) -> Result<Vec<Check>, Error> {
    match p.dimension() {
        Dimension::Three => boundary_suite_dim::<3>(p),
        Dimension::Two => boundary_suite_dim::<2>(p),
    }
}

fn boundary_suite_dim<const D: usize>(p: &ProblemParams) -> Result<Vec<Check>, Error> {
    let mut rng = rng();
    let pts: Vec<Vec<f64>> = (0..BC_POINTS).map(|_| planar_point(&mut rng, p)).collect();
    let scale = p.velocity_scale().max(f64::MIN_POSITIVE);
    (0..p.dimension().subflow_count())
        .into_par_iter()
        .map(|k| {
            let mut worst = 0.0f64;
            for xp in &pts {
                let h = p.profile.gap(xp)?;
                for (side, z) in [(Side::Top, 0.5 * h), (Side::Bottom, -0.5 * h)] {
                    let f = eval_field::<D>(k, p, point_with_height(xp, z))?;
                    let t: [f64; D] = boundary_target(k, p, side, xp)?;
                    for i in 0..D {
                        worst = worst.max((f.u[i] - t[i]).abs() / scale);
                    }
                }
            }
            Ok(Check::at_most(
                format!("boundary residual k={k}"),
                worst,
                1e-12,
            ))
        })
        .collect()
}

fn divergence_suite(p: &ProblemParams) -> Result<Vec<Check>, Error> {
    match p.dimension() {
        Dimension::Three => divergence_suite_dim::<3>(p),
        Dimension::Two => divergence_suite_dim::<2>(p),
    }
}

fn interior_points<const D: usize>(p: &ProblemParams) -> Result<Vec<[f64; D]>, Error> {
    let mut rng = rng();
    (0..INTERIOR_POINTS)
        .map(|_| {
            let xp = planar_point(&mut rng, p);
            let xp: Vec<f64> = xp.iter().map(|v| 0.9 * v).collect();
            let h = p.profile.gap(&xp)?;
            let z = rng.gen_range(-0.45..0.45) * h;
            Ok(point_with_height(&xp, z))
        })
        .collect()
}

fn divergence_suite_dim<const D: usize>(p: &ProblemParams) -> Result<Vec<Check>, Error> {
    let pts = interior_points::<D>(p)?;
    let n = p.dimension().subflow_count();
    let per_k: Vec<Vec<Check>> = (0..n)
        .into_par_iter()
        .map(|k| -> Result<Vec<Check>, Error> {
            let mut div = 0.0f64;
            let mut grad = 0.0f64;
            let mut pres = 0.0f64;
            let nested = lubgap::fields::has_nested_pressure(p.dimension(), k);
            for x in &pts {
                let f = eval_field::<D>(k, p, *x)?;
                let norm = f.grad_norm();
                let d = if k == 0 {
                    f.divergence() - rigid_divergence(p, &x[..D - 1])
                } else {
                    f.divergence()
                };
                if norm > 0.0 {
                    div = div.max(d.abs() / norm);
                }
                let h = p.profile.gap(&x[..D - 1])?;
                if norm > 0.0 {
                    let mut best = f64::INFINITY;
                    for rel in [1e-3, 1e-4, 1e-5] {
                        best = best.min(gradient_error(k, p, x, &f, rel * h.min(0.5))?);
                    }
                    grad = grad.max(best / norm);
                }
                if nested {
                    let gp = pressure_gradient::<D>(k, p, *x)?;
                    let lap = viscous_force::<D>(k, p, *x, h)?;
                    let gn = gp.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if gn > 0.0 {
                        for j in 0..D {
                            pres = pres.max((gp[j] - lap[j]).abs() / gn);
                        }
                    }
                }
            }
            let mut out = vec![
                Check::at_most(format!("divergence k={k}"), div, 1e-12),
                Check::at_most(format!("gradient vs differences k={k}"), grad, 1e-6),
            ];
            if nested {
                out.push(Check::at_most(
                    format!("pressure gradient vs 2 mu div D k={k}"),
                    pres,
                    1e-5,
                ));
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    Ok(per_k.into_iter().flatten().collect())
}

/// Largest deviation of the analytic gradient from central differences,
/// less the roundoff allowance of the differences.
fn gradient_error<const D: usize>(
    k: usize,
    p: &ProblemParams,
    x: &[f64; D],
    f: &lubgap::FieldEval<D>,
    step: f64,
) -> Result<f64, Error> {
    let roundoff = 10.0 * f64::EPSILON * p.velocity_scale() / step;
    let mut worst = 0.0f64;
    for j in 0..D {
        let (mut a, mut b) = (*x, *x);
        a[j] += step;
        b[j] -= step;
        let (ua, ub) = (eval_field::<D>(k, p, a)?.u, eval_field::<D>(k, p, b)?.u);
        for i in 0..D {
            let fd = (ua[i] - ub[i]) / (2.0 * step);
            worst = worst.max((fd - f.grad_u[i][j]).abs() - roundoff);
        }
    }
    Ok(worst.max(0.0))
}

/// `2 mu div D(u)` by Richardson-extrapolated second differences of `u`.
fn viscous_force<const D: usize>(
    k: usize,
    p: &ProblemParams,
    x: [f64; D],
    h: f64,
) -> Result<[f64; D], Error> {
    let u = |y: [f64; D]| eval_field::<D>(k, p, y).map(|f| f.u);
    // div D = (Δu + grad div u) / 2; the mixed terms need cross differences.
    let second = |d: f64| -> Result<[[[f64; D]; D]; D], Error> {
        let mut out = [[[0.0; D]; D]; D];
        let u0 = u(x)?;
        for a in 0..D {
            for b in a..D {
                let val: [f64; D] = if a == b {
                    let (mut xp, mut xm) = (x, x);
                    xp[a] += d;
                    xm[a] -= d;
                    let (up, um) = (u(xp)?, u(xm)?);
                    std::array::from_fn(|i| (up[i] - 2.0 * u0[i] + um[i]) / (d * d))
                } else {
                    let mut c = [[0.0; D]; 4];
                    for (n, (sa, sb)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
                        .into_iter()
                        .enumerate()
                    {
                        let mut y = x;
                        y[a] += sa * d;
                        y[b] += sb * d;
                        c[n] = u(y)?;
                    }
                    std::array::from_fn(|i| (c[0][i] - c[1][i] - c[2][i] + c[3][i]) / (4.0 * d * d))
                };
                for i in 0..D {
                    out[i][a][b] = val[i];
                    out[i][b][a] = val[i];
                }
            }
        }
        Ok(out)
    };
    let d = 1e-2 * h;
    let (c, f) = (second(d)?, second(0.5 * d)?);
    let mut force = [0.0; D];
    for i in 0..D {
        for j in 0..D {
            let uij = (4.0 * f[i][j][j] - c[i][j][j]) / 3.0;
            let uji = (4.0 * f[j][i][j] - c[j][i][j]) / 3.0;
            force[i] += p.mu * (uij + uji);
        }
    }
    Ok(force)
}

fn random_motion(rng: &mut ChaCha8Rng, dim: Dimension) -> ([f64; 3], [f64; 3]) {
    let mut v = || rng.gen_range(-1.0..1.0);
    match dim {
        Dimension::Three => ([v(), v(), v()], [v(), v(), v()]),
        Dimension::Two => ([v(), v(), 0.0], [v(), 0.0, 0.0]),
    }
}

fn parity_suite(cfg: &RunConfig) -> Result<Vec<Check>, Error> {
    let p = &cfg.problem;
    let spec = &cfg.quadrature;
    let mut checks = Vec::new();
    if p.dimension() == Dimension::Three {
        let mut rng = rng();
        let motions: Vec<_> = (0..PARITY_CONFIGS)
            .map(|_| random_motion(&mut rng, Dimension::Three))
            .collect();
        let totals: Vec<_> = motions
            .par_iter()
            .map(|&(u, w)| total_numeric(&p.with_motion(u, w), spec))
            .collect::<Result<_, _>>()?;
        for (n, t) in totals.iter().enumerate() {
            let bound = 10.0 * t.torque_error[2];
            checks.push(Check {
                name: format!("spin torque T3 config {n}"),
                passed: t.torque[2].abs() <= bound,
                measured: t.torque[2].abs(),
                tolerance: bound,
                detail: String::new(),
            });
        }
    }
    // Components that must stay bounded under a pure translation along e1.
    let (velocity, zero_components): ([f64; 3], &[usize]) = match p.dimension() {
        Dimension::Three => ([1.0, 0.0, 0.0], &[1, 2]),
        Dimension::Two => ([1.0, 0.0, 0.0], &[1]),
    };
    let base = p.with_motion(velocity, [0.0; 3]);
    let eps0 = p.profile.eps;
    let grid = log_grid(eps0, eps0 / 10.0, 3);
    let parts: Vec<_> = grid
        .par_iter()
        .map(|&e| force_numeric(1, &base.with_eps(e), spec))
        .collect::<Result<_, _>>()?;
    let names = lubgap::traction::component_names(p.dimension());
    for &c in zero_components {
        let within = parts
            .iter()
            .all(|f| f.values()[c].abs() <= 10.0 * f.errors()[c] + 1e-12 * f.values()[0].abs());
        let worst = parts.iter().fold(0.0f64, |a, f| a.max(f.values()[c].abs()));
        let name = format!("shear sub-flow {} bounded", names[c]);
        if within {
            checks.push(Check::at_most(name, 0.0, 0.1).with_detail(format!(
                "zero within error estimate; max |value| = {worst:e}"
            )));
            continue;
        }
        let samples: Vec<(f64, f64)> = grid
            .iter()
            .zip(&parts)
            .map(|(e, f)| (*e, f.values()[c]))
            .collect();
        checks.push(match fit_exponent(&samples) {
            Ok(fit) => Check::at_most(name, fit.slope.abs(), 0.1),
            Err(e) => Check::failed(name, e.to_string()),
        });
    }
    Ok(checks)
}

fn dual_suite(cfg: &RunConfig) -> Result<Vec<Check>, Error> {
    let p = &cfg.problem;
    let grid = match &cfg.sweep {
        Some(_) => cfg.eps_grid(),
        None => vec![1e-2, 1e-3, 1e-4],
    };
    let report = err_sweep(p, &grid, &cfg.quadrature)?;
    let mut checks = Vec::new();
    for i in DUAL_SUBFLOWS {
        if !subflow_active(i, p) {
            continue;
        }
        let name = format!("l[{i},{i}] slope");
        let Some(series) = report.get(i, i) else {
            continue;
        };
        let detail = format!(
            "values {:?}",
            series
                .values
                .iter()
                .map(|v| format!("{v:e}"))
                .collect::<Vec<_>>()
        );
        checks.push(match series.slope {
            Some(s) => Check::at_most(name, s.abs(), 0.1).with_detail(detail),
            None => Check::failed(name, "values vanish or change sign"),
        });
    }
    checks.push(Check::at_most(
        "cauchy-schwarz excess",
        report.cauchy_schwarz_excess.max(0.0),
        1e-8,
    ));
    Ok(checks)
}

/// Index of the squeeze force component, fitted to the tighter tolerance.
fn squeeze_component(dim: Dimension) -> usize {
    match dim {
        Dimension::Three => 2,
        Dimension::Two => 1,
    }
}

fn exponent_suite(cfg: &RunConfig) -> Result<Vec<Check>, Error> {
    let p = &cfg.problem;
    if !matches!(p.profile.kind, ProfileKind::MConvex { .. }) {
        return Err(Error::Domain(
            "the exponent suite needs an m-convex profile".into(),
        ));
    }
    let grid = match &cfg.sweep {
        Some(_) => cfg.eps_grid(),
        None => log_grid(p.profile.eps, p.profile.eps / 100.0, 5),
    };
    let theorem = force_asymptotic(p, &cfg.asymptotic)?;
    let totals: Vec<_> = grid
        .par_iter()
        .map(|&e| total_numeric(&p.with_eps(e), &cfg.quadrature))
        .collect::<Result<_, _>>()?;
    let names = lubgap::traction::component_names(p.dimension());
    let mut checks = Vec::new();
    for (c, exp) in theorem.components().iter().enumerate() {
        let Some(lead) = exp.leading() else {
            continue;
        };
        let samples: Vec<(f64, f64)> = grid
            .iter()
            .zip(&totals)
            .map(|(e, t)| (*e, t.values()[c]))
            .collect();
        if lead.is_log {
            let name = format!("{} log coefficient", names[c]);
            // Remove the listed power terms, then difference against |ln eps|.
            let rest = |e: f64| -> f64 {
                exp.terms
                    .iter()
                    .filter(|t| !t.is_log)
                    .map(|t| t.evaluate(e))
                    .sum()
            };
            let n = samples.len();
            let (a, b) = (samples[n - 2], samples[n - 1]);
            let coeff = two_point_coefficient(lead, (a.0, a.1 - rest(a.0)), (b.0, b.1 - rest(b.0)));
            checks.push(match coeff {
                Ok((c_num, _)) => {
                    let rel = (c_num - lead.coeff).abs() / lead.coeff.abs();
                    Check::at_most(name, rel, 0.05)
                        .with_detail(format!("numeric {c_num:e}, expansion {:e}", lead.coeff))
                }
                Err(e) => Check::failed(name, e.to_string()),
            });
            continue;
        }
        let name = format!("{} slope", names[c]);
        let tol = if c == squeeze_component(p.dimension()) {
            0.01
        } else {
            0.02
        };
        checks.push(match fit_exponent(&samples) {
            Ok(fit) => {
                let rel = (fit.slope + lead.power).abs() / lead.power;
                Check::at_most(name, rel, tol).with_detail(format!(
                    "slope {:.6}, expected {:.6}",
                    fit.slope, -lead.power
                ))
            }
            Err(e) => Check::failed(name, e.to_string()),
        });
    }
    Ok(checks)
}

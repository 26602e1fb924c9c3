//! Force computations over an epsilon grid and their CSV/JSON reports.

use crate::config::RunConfig;
use crate::verify::VerifyReport;
use lubgap::asymptotics::{fit_exponent, force_asymptotic, TheoremResult};
use lubgap::traction::{component_names, force_numeric, sum_parts};
use lubgap::ForceTorque;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const SCHEMA: &str = "lubgap-report v1";

const CSV_COLUMNS: &str = "eps,component,subflow,numeric,error_est,asymptotic,ratio";

/// One comparison row. `subflow` is the sub-flow index or `total`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub eps: f64,
    pub component: String,
    pub subflow: String,
    pub numeric: Option<f64>,
    pub error_est: Option<f64>,
    pub asymptotic: Option<f64>,
    pub ratio: Option<f64>,
}

/// A computation that failed at one epsilon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub eps: f64,
    /// Sub-flow index, or `None` for the asymptotic expansion.
    pub subflow: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub eps: f64,
    /// Indexed by sub-flow; `None` where the computation failed.
    pub subflows: Vec<Option<ForceTorque>>,
    pub total: Option<ForceTorque>,
    pub asymptotic: Option<TheoremResult>,
}

/// Log-log slope of one total component across the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentFit {
    pub component: String,
    pub slope: Option<f64>,
    /// Slope implied by the leading power term of the expansion.
    pub expected: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub config: RunConfig,
    pub points: Vec<Point>,
    pub rows: Vec<Row>,
    pub fits: Vec<ComponentFit>,
    pub errors: Vec<PointError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifyReport>,
}

fn compute_point(cfg: &RunConfig, eps: f64) -> (Point, Vec<PointError>) {
    let params = cfg.problem.with_eps(eps);
    let dim = params.dimension();
    let mut errors = Vec::new();
    let mut subflows = Vec::new();
    let mut total = None;
    if cfg.mode.numeric() {
        subflows = (0..dim.subflow_count())
            .into_par_iter()
            .map(|k| force_numeric(k, &params, &cfg.quadrature))
            .collect::<Vec<_>>()
            .into_iter()
            .enumerate()
            .map(|(k, r)| {
                r.map_err(|e| {
                    errors.push(PointError {
                        eps,
                        subflow: Some(k),
                        message: e.to_string(),
                    })
                })
                .ok()
            })
            .collect();
        if subflows.iter().all(Option::is_some) {
            let parts: Vec<ForceTorque> = subflows.iter().flatten().cloned().collect();
            total = Some(sum_parts(dim, &parts));
        }
    }
    let asymptotic = if cfg.mode.asymptotic() {
        force_asymptotic(&params, &cfg.asymptotic)
            .map_err(|e| {
                errors.push(PointError {
                    eps,
                    subflow: None,
                    message: e.to_string(),
                })
            })
            .ok()
    } else {
        None
    };
    (
        Point {
            eps,
            subflows,
            total,
            asymptotic,
        },
        errors,
    )
}

fn point_rows(cfg: &RunConfig, point: &Point) -> Vec<Row> {
    let names = component_names(cfg.problem.dimension());
    let mut rows = Vec::new();
    let n = cfg.problem.dimension().subflow_count();
    let labels = (0..n)
        .map(|k| k.to_string())
        .chain(std::iter::once("total".to_string()));
    for (k, label) in labels.enumerate() {
        let ft = if k < n {
            point.subflows.get(k).and_then(Option::as_ref)
        } else {
            point.total.as_ref()
        };
        if k < n && !cfg.mode.numeric() {
            continue;
        }
        for (c, name) in names.iter().enumerate() {
            let numeric = ft.map(|f| f.values()[c]);
            let error_est = ft.map(|f| f.errors()[c]);
            let asymptotic = if k == n {
                point
                    .asymptotic
                    .as_ref()
                    .map(|t| t.components()[c])
                    .filter(|e| !e.terms.is_empty())
                    .map(|e| e.evaluate(point.eps))
            } else {
                None
            };
            let ratio = match (numeric, asymptotic) {
                (Some(v), Some(a)) if a != 0.0 => Some(v / a),
                _ => None,
            };
            rows.push(Row {
                eps: point.eps,
                component: name.to_string(),
                subflow: label.clone(),
                numeric,
                error_est,
                asymptotic,
                ratio,
            });
        }
    }
    rows
}

fn fits(cfg: &RunConfig, points: &[Point]) -> Vec<ComponentFit> {
    if points.len() < 3 {
        return Vec::new();
    }
    let names = component_names(cfg.problem.dimension());
    let theorem = points.iter().find_map(|p| p.asymptotic.as_ref());
    names
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let samples: Option<Vec<(f64, f64)>> = points
                .iter()
                .map(|p| p.total.as_ref().map(|t| (p.eps, t.values()[c])))
                .collect();
            let slope = samples.and_then(|s| fit_exponent(&s).ok()).map(|f| f.slope);
            let expected = theorem
                .and_then(|t| t.components()[c].terms.first().copied())
                .filter(|t| !t.is_log)
                .map(|t| -t.power);
            ComponentFit {
                component: name.to_string(),
                slope,
                expected,
            }
        })
        .collect()
}

fn component_rank(cfg: &RunConfig, name: &str) -> usize {
    component_names(cfg.problem.dimension())
        .iter()
        .position(|n| *n == name)
        .unwrap_or(usize::MAX)
}

fn subflow_rank(label: &str) -> usize {
    label.parse().unwrap_or(usize::MAX)
}

/// Computes every point of the grid in parallel; output order is fixed.
pub fn run_force(cfg: &RunConfig) -> Report {
    let grid = cfg.eps_grid();
    let computed: Vec<(Point, Vec<PointError>)> =
        grid.par_iter().map(|&e| compute_point(cfg, e)).collect();
    let mut points = Vec::with_capacity(computed.len());
    let mut errors = Vec::new();
    for (p, e) in computed {
        points.push(p);
        errors.extend(e);
    }
    points.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    errors.sort_by(|a, b| {
        b.eps.total_cmp(&a.eps).then(
            a.subflow
                .unwrap_or(usize::MAX)
                .cmp(&b.subflow.unwrap_or(usize::MAX)),
        )
    });
    let mut rows: Vec<Row> = points.iter().flat_map(|p| point_rows(cfg, p)).collect();
    rows.sort_by(|a, b| {
        b.eps
            .total_cmp(&a.eps)
            .then(component_rank(cfg, &a.component).cmp(&component_rank(cfg, &b.component)))
            .then(subflow_rank(&a.subflow).cmp(&subflow_rank(&b.subflow)))
    });
    let fits = fits(cfg, &points);
    Report {
        schema: SCHEMA.to_string(),
        config: cfg.clone(),
        points,
        rows,
        fits,
        errors,
        verification: None,
    }
}

/// Shortest round-trip representation in exponent form.
pub fn format_float(v: f64) -> String {
    format!("{v:e}")
}

fn cell(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {SCHEMA}").unwrap();
        writeln!(out, "{CSV_COLUMNS}").unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                format_float(r.eps),
                r.component,
                r.subflow,
                cell(r.numeric),
                cell(r.error_est),
                cell(r.asymptotic),
                cell(r.ratio)
            )
            .unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report always serializes");
        s.push('\n');
        s
    }

    pub fn has_errors(&self) -> bool {
        !self.errors.is_empty()
    }
}

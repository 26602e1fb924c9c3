//! Table-printing commands that need no run configuration.

use crate::report::format_float;
use lubgap::asymptotics::{coefficient_set, GAMMA_INDEX_PAIRS};
use lubgap::special::{gamma_coeff, phi_leading, phi_quad};
use lubgap::{Dimension, Error, GapProfile, ProblemParams};
use std::fmt::Write as _;

/// `Γ_ij^(m)` for the tabulated index pairs, then the 3D and 2D expansion
/// coefficients. Undefined entries are left blank.
pub fn constants_table(m: f64, mu: f64, r: f64, big_r: f64) -> Result<String, Error> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::Domain(format!("m must exceed 1, got {m}")));
    }
    let mut out = String::new();
    writeln!(out, "# lubgap constants m={}", format_float(m)).unwrap();
    writeln!(out, "name,value").unwrap();
    for (i, j) in GAMMA_INDEX_PAIRS {
        let v = gamma_coeff(i as f64, j as f64, m).ok();
        writeln!(
            out,
            "gamma_{i}{j},{}",
            v.map(format_float).unwrap_or_default()
        )
        .unwrap();
    }
    for (dim, tag) in [(Dimension::Three, "3d"), (Dimension::Two, "2d")] {
        let pr = GapProfile::m_convex(dim, m, r, 1e-3, big_r)?;
        let p = match dim {
            Dimension::Three => ProblemParams::new_3d(pr, mu, [0.0; 3], [0.0; 3])?,
            Dimension::Two => ProblemParams::new_2d(pr, mu, [0.0; 2], 0.0)?,
        };
        for (name, v) in coefficient_set(&p)?.entries {
            writeln!(
                out,
                "{tag}.{name},{}",
                v.map(format_float).unwrap_or_default()
            )
            .unwrap();
        }
    }
    Ok(out)
}

/// `Φ_ij^(m)(r; ε)` with its error estimate and leading growth.
pub fn phi_table(i: f64, j: f64, m: f64, r: f64, eps: f64) -> Result<String, Error> {
    let q = phi_quad(i, j, m, r, eps)?;
    let lead = phi_leading(i, j, m)?;
    let mut out = String::new();
    writeln!(out, "i,j,m,r,eps,phi,error_est,leading").unwrap();
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        format_float(i),
        format_float(j),
        format_float(m),
        format_float(r),
        format_float(eps),
        format_float(q.value),
        format_float(q.error_estimate),
        if lead.terms.is_empty() {
            String::new()
        } else {
            format_float(lead.evaluate(eps))
        }
    )
    .unwrap();
    Ok(out)
}

//! Gamma function, the `Γ_ij^(m)` constants, and the integral families
//! `Φ_ij^(m)(r; ε) = ∫_0^r t^j / (ε + t^m)^i dt` and
//! `Ψ_ij(r; ε) = ∫_0^r (t + s)^j / (ε + t^2)^i dt`.

mod expansion;

pub use expansion::{normalize, AsymptoticExpansion, AsymptoticTerm, Residual};

use crate::error::{Error, Result};
use crate::quadrature::{graded_breakpoints, integrate_1d, QuadResult, QuadSpec};
use num_rational::Rational64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Relative tolerance for detecting the `i = j/m` branch on floating inputs.
pub const BRANCH_TOL: f64 = 1e-12;

/// Γ(s) for real `s > 0` (Lanczos approximation, g = 7).
pub fn gamma(s: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("gamma needs s > 0, got {s}")));
    }
    if s < 0.5 {
        return Ok(gamma(s + 1.0)? / s);
    }
    let z = s - 1.0;
    let mut x = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let half = 0.5 * (z + 0.5);
    let p = t.powf(half);
    Ok((2.0 * std::f64::consts::PI).sqrt() * p * (p * (-t).exp()) * x)
}

/// `Γ_ij^(m) = Γ(i - j/m) Γ(j/m) / m`, or `1/m` when `i = j/m`.
pub fn gamma_coeff(i: f64, j: f64, m: f64) -> Result<f64> {
    check_indices(i, j, m)?;
    let q = j / m;
    let d = i - q;
    if d.abs() <= BRANCH_TOL * i.max(q) {
        return Ok(1.0 / m);
    }
    if d < 0.0 {
        return Err(Error::Domain(format!(
            "gamma_coeff needs i >= j/m, got i = {i}, j/m = {q}"
        )));
    }
    Ok(gamma(d)? * gamma(q)? / m)
}

/// `Γ_ij^(m)` with exact branch detection for rational indices.
pub fn gamma_coeff_rational(i: Rational64, j: Rational64, m: Rational64) -> Result<f64> {
    let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
    let (fi, fj, fm) = (f(i), f(j), f(m));
    check_indices(fi, fj, fm)?;
    let q = j / m;
    if i == q {
        return Ok(1.0 / fm);
    }
    if i < q {
        return Err(Error::Domain(format!(
            "gamma_coeff needs i >= j/m, got i = {i}, j/m = {q}"
        )));
    }
    Ok(gamma(f(i - q))? * gamma(f(q))? / fm)
}

fn check_indices(i: f64, j: f64, m: f64) -> Result<()> {
    if !(i > 0.0) {
        return Err(Error::Domain(format!("index i must be positive, got {i}")));
    }
    if !(j > 0.0) {
        return Err(Error::Domain(format!(
            "index j must be positive (Γ(j/m) has a pole at 0), got {j}"
        )));
    }
    if !(m > 1.0) {
        return Err(Error::Domain(format!("m must exceed 1, got {m}")));
    }
    Ok(())
}

fn internal_spec(splits: Vec<f64>) -> QuadSpec {
    QuadSpec {
        rel_tol: 1e-12,
        abs_tol: 0.0,
        max_subdivisions: 4000,
        split_points: splits,
    }
}

/// `Φ_ij^(m)(r; ε)` with its quadrature error estimate.
///
/// The substitution `t = ε^(1/m) u` maps the boundary layer to unit scale;
/// the `u` axis is graded geometrically from `u = 1`.
pub fn phi_quad(i: f64, j: f64, m: f64, r: f64, eps: f64) -> Result<QuadResult> {
    if !(i > 0.0 && j >= 0.0 && m > 0.0 && r >= 0.0 && eps > 0.0) {
        return Err(Error::Domain(format!(
            "phi parameters out of range: i={i}, j={j}, m={m}, r={r}, eps={eps}"
        )));
    }
    let ts = eps.powf(1.0 / m);
    let upper = r / ts;
    let scale = eps.powf((j + 1.0) / m - i);
    let f = |u: f64| {
        let base = 1.0 + u.powf(m);
        u.powf(j) / base.powf(i)
    };
    let q = integrate_1d(
        f,
        0.0,
        upper,
        &internal_spec(graded_breakpoints(1.0, upper)),
    )?;
    let out = QuadResult {
        value: q.value * scale,
        error_estimate: q.error_estimate * scale,
        evaluations: q.evaluations,
    };
    if out.error_estimate > 1e-10 * out.value.abs() {
        return Err(Error::ToleranceNotMet {
            value: out.value,
            error_estimate: out.error_estimate,
            evaluations: out.evaluations,
        });
    }
    Ok(out)
}

/// `Φ_ij^(m)(r; ε) = ∫_0^r t^j / (ε + t^m)^i dt`.
pub fn phi(i: f64, j: f64, m: f64, r: f64, eps: f64) -> Result<f64> {
    Ok(phi_quad(i, j, m, r, eps)?.value)
}

/// Leading behaviour of `Φ_ij^(m)(r; ε)` as `ε → 0`.
///
/// For `i > (j+1)/m` the integral blows up like
/// `Γ_{i,j+1}^(m) / Γ(i) · ε^{-(i-(j+1)/m)}`; at `i = (j+1)/m` it grows like
/// `|ln ε| / m`; otherwise it stays bounded.
pub fn phi_leading(i: f64, j: f64, m: f64) -> Result<AsymptoticExpansion> {
    if !(i > 0.0 && j >= 0.0 && m > 1.0) {
        return Err(Error::Domain(format!(
            "phi_leading needs i > 0, j >= 0, m > 1; got ({i}, {j}, {m})"
        )));
    }
    let q = (j + 1.0) / m;
    let d = i - q;
    if d.abs() <= BRANCH_TOL * i.max(q) {
        return Ok(AsymptoticExpansion::bounded(vec![AsymptoticTerm::log(
            1.0 / m,
        )]));
    }
    if d < 0.0 {
        return Ok(AsymptoticExpansion::bounded(Vec::new()));
    }
    let c = gamma_coeff(i, j + 1.0, m)? / gamma(i)?;
    Ok(AsymptoticExpansion::bounded(vec![AsymptoticTerm::power(
        c, d,
    )]))
}

/// `Ψ_ij(r; ε) = ∫_0^r (t + s)^j / (ε + t^2)^i dt` with its error estimate.
pub fn psi_quad(i: f64, j: f64, s: f64, r: f64, eps: f64) -> Result<QuadResult> {
    if !(eps > 0.0 && r >= 0.0 && s >= 0.0 && i > 0.0 && j >= 0.0) {
        return Err(Error::Domain(format!(
            "psi parameters out of range: i={i}, j={j}, s={s}, r={r}, eps={eps}"
        )));
    }
    let f = |t: f64| (t + s).powf(j) / (eps + t * t).powf(i);
    let q = integrate_1d(f, 0.0, r, &internal_spec(graded_breakpoints(eps.sqrt(), r)))?;
    if q.error_estimate > 1e-10 * q.value.abs() {
        return Err(Error::ToleranceNotMet {
            value: q.value,
            error_estimate: q.error_estimate,
            evaluations: q.evaluations,
        });
    }
    Ok(q)
}

pub fn psi(i: f64, j: f64, s: f64, r: f64, eps: f64) -> Result<f64> {
    Ok(psi_quad(i, j, s, r, eps)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_known_values() {
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), 1.772_453_850_905_516) < 1e-14);
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.0).is_err());
    }

    #[test]
    fn gamma_coeff_table() {
        assert_eq!(gamma_coeff(1.0, 2.0, 2.0).unwrap(), 0.5);
        assert!(rel(gamma_coeff(3.0, 4.0, 2.0).unwrap(), 0.5) < 1e-13);
        assert!(rel(gamma_coeff(1.0, 1.0, 2.0).unwrap(), PI / 2.0) < 1e-13);
        assert!(rel(gamma_coeff(3.0, 3.0, 2.0).unwrap(), PI / 8.0) < 1e-13);
        assert!(gamma_coeff(1.0, 3.0, 2.0).is_err());
        let r = |a: i64, b: i64| Rational64::new(a, b);
        assert_eq!(
            gamma_coeff_rational(r(3, 1), r(5, 1), r(5, 3)).unwrap(),
            0.6
        );
    }

    #[test]
    fn phi_closed_forms() {
        let v = phi(1.0, 1.0, 2.0, 1.0, 1e-4).unwrap();
        assert!(rel(v, 0.5 * (1.0f64 + 1e4).ln()) < 1e-10);
        let v = phi(1.0, 0.0, 1.0, 1.0, 0.5).unwrap();
        assert!(rel(v, 3f64.ln()) < 1e-10);
        assert_eq!(phi(2.0, 1.0, 2.0, 0.0, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn phi_leading_classes() {
        let e = phi_leading(1.0, 1.0, 2.0).unwrap();
        assert_eq!(e.terms, vec![AsymptoticTerm::log(0.5)]);
        let e = phi_leading(3.0, 3.0, 2.0).unwrap();
        assert_eq!(e.terms.len(), 1);
        assert!(rel(e.terms[0].coeff, 0.25) < 1e-13);
        assert_eq!(e.terms[0].power, 1.0);
        assert!(phi_leading(1.0, 3.0, 2.0).unwrap().terms.is_empty());
    }

    #[test]
    fn psi_reduces_to_phi() {
        let a = psi(1.0, 1.0, 0.0, 1.0, 1e-4).unwrap();
        let b = phi(1.0, 1.0, 2.0, 1.0, 1e-4).unwrap();
        assert!(rel(a, b) < 1e-10);
        assert_eq!(psi(1.0, 0.0, 0.2, 0.0, 1e-3).unwrap(), 0.0);
    }
}

use serde::{Deserialize, Serialize};

/// A single term `coeff * eps^(-power)`, or `coeff * |ln eps|` when `is_log`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticTerm {
    pub coeff: f64,
    pub power: f64,
    pub is_log: bool,
}

impl AsymptoticTerm {
    pub fn power(coeff: f64, power: f64) -> Self {
        Self {
            coeff,
            power,
            is_log: false,
        }
    }

    pub fn log(coeff: f64) -> Self {
        Self {
            coeff,
            power: 0.0,
            is_log: true,
        }
    }

    pub fn evaluate(&self, eps: f64) -> f64 {
        if self.is_log {
            self.coeff * eps.ln().abs()
        } else {
            self.coeff * eps.powf(-self.power)
        }
    }

    fn same_shape(&self, o: &Self) -> bool {
        self.is_log == o.is_log
            && (self.is_log || (self.power - o.power).abs() <= 1e-12 * (1.0 + self.power.abs()))
    }
}

/// What is known about the remainder beyond the listed terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Residual {
    /// The remainder is `O(1)`.
    Bounded,
    /// The remainder lies between two expansions, up to `O(1)`.
    Interval {
        lower: Vec<AsymptoticTerm>,
        upper: Vec<AsymptoticTerm>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticExpansion {
    pub terms: Vec<AsymptoticTerm>,
    pub residual: Residual,
}

impl Default for AsymptoticExpansion {
    fn default() -> Self {
        Self::bounded(Vec::new())
    }
}

/// Merges terms of equal shape, drops zero coefficients, and sorts by
/// descending power with the log term after all positive powers.
pub fn normalize(terms: &[AsymptoticTerm]) -> Vec<AsymptoticTerm> {
    let mut out: Vec<AsymptoticTerm> = Vec::new();
    for t in terms {
        if let Some(o) = out.iter_mut().find(|o| o.same_shape(t)) {
            o.coeff += t.coeff;
        } else {
            out.push(*t);
        }
    }
    out.retain(|t| t.coeff != 0.0);
    out.sort_by(|a, b| {
        let key = |t: &AsymptoticTerm| if t.is_log { 0.0 } else { t.power };
        key(b)
            .partial_cmp(&key(a))
            .unwrap()
            .then(a.is_log.cmp(&b.is_log))
    });
    out
}

fn eval_terms(terms: &[AsymptoticTerm], eps: f64) -> f64 {
    terms.iter().map(|t| t.evaluate(eps)).sum()
}

impl AsymptoticExpansion {
    pub fn bounded(terms: Vec<AsymptoticTerm>) -> Self {
        Self {
            terms: normalize(&terms),
            residual: Residual::Bounded,
        }
    }

    /// Terms plus a remainder between `lower` and `upper`. Collapses to a
    /// bounded residual when both bounds are empty.
    pub fn interval(
        terms: Vec<AsymptoticTerm>,
        lower: Vec<AsymptoticTerm>,
        upper: Vec<AsymptoticTerm>,
    ) -> Self {
        let lower = normalize(&lower);
        let upper = normalize(&upper);
        let residual = if lower.is_empty() && upper.is_empty() {
            Residual::Bounded
        } else {
            Residual::Interval { lower, upper }
        };
        Self {
            terms: normalize(&terms),
            residual,
        }
    }

    /// Sum of the listed terms (the residual is excluded).
    pub fn evaluate(&self, eps: f64) -> f64 {
        eval_terms(&self.terms, eps)
    }

    /// Lower and upper values of terms plus residual bounds, if interval-bounded.
    pub fn bounds(&self, eps: f64) -> Option<(f64, f64)> {
        match &self.residual {
            Residual::Bounded => None,
            Residual::Interval { lower, upper } => {
                let base = self.evaluate(eps);
                Some((base + eval_terms(lower, eps), base + eval_terms(upper, eps)))
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.residual == Residual::Bounded
    }

    /// The term with the largest growth, if any.
    pub fn leading(&self) -> Option<AsymptoticTerm> {
        self.terms.first().copied()
    }

    /// Coefficient of the `eps^(-power)` term (or of the log term), zero if absent.
    pub fn coefficient(&self, power: f64, is_log: bool) -> f64 {
        let probe = AsymptoticTerm {
            coeff: 0.0,
            power,
            is_log,
        };
        self.terms
            .iter()
            .filter(|t| t.same_shape(&probe))
            .map(|t| t.coeff)
            .sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let sc = |v: &[AsymptoticTerm]| -> Vec<AsymptoticTerm> {
            v.iter()
                .map(|t| AsymptoticTerm {
                    coeff: c * t.coeff,
                    ..*t
                })
                .collect()
        };
        let residual = match &self.residual {
            Residual::Bounded => Residual::Bounded,
            Residual::Interval { lower, upper } if c >= 0.0 => Residual::Interval {
                lower: sc(lower),
                upper: sc(upper),
            },
            Residual::Interval { lower, upper } => Residual::Interval {
                lower: sc(upper),
                upper: sc(lower),
            },
        };
        Self {
            terms: normalize(&sc(&self.terms)),
            residual,
        }
    }

    /// Removes the interval residual, keeping the listed terms.
    pub fn without_interval(&self) -> Self {
        Self::bounded(self.terms.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalisation_merges_and_orders() {
        let e = AsymptoticExpansion::bounded(vec![
            AsymptoticTerm::log(1.0),
            AsymptoticTerm::power(2.0, 0.5),
            AsymptoticTerm::power(3.0, 1.5),
            AsymptoticTerm::power(-2.0, 0.5),
            AsymptoticTerm::log(0.5),
        ]);
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[0], AsymptoticTerm::power(3.0, 1.5));
        assert_eq!(e.terms[1], AsymptoticTerm::log(1.5));
    }

    #[test]
    fn evaluation_and_bounds() {
        let e = AsymptoticExpansion::interval(
            vec![AsymptoticTerm::log(-1.0)],
            vec![AsymptoticTerm::power(1.0, 1.0)],
            vec![AsymptoticTerm::power(2.0, 1.0)],
        );
        let eps = 1e-3;
        assert!((e.evaluate(eps) + 1e-3f64.ln().abs()).abs() < 1e-12);
        let (lo, hi) = e.bounds(eps).unwrap();
        assert!(lo < hi);
        let neg = e.scaled(-1.0);
        let (nlo, nhi) = neg.bounds(eps).unwrap();
        assert!((nlo + hi).abs() < 1e-9 && (nhi + lo).abs() < 1e-9);
    }
}

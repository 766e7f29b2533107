//! Uncertain variables with regular uncertainty distributions.
//!
//! Three families are supported: linear `L(a, b)`, zigzag `Z(a, b, c)` and
//! normal `N(e, σ)`. Each has a closed-form distribution `Φ`, inverse
//! distribution `Φ⁻¹` and expected value. Independent variables of the same
//! family are closed under addition.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UncertainError {
    #[error("invalid {family} parameters {params:?}: {reason}")]
    InvalidParameters {
        family: Family,
        params: Vec<f64>,
        reason: &'static str,
    },
    #[error("confidence level must lie in (0,1), got {0}")]
    ConfidenceOutOfRange(f64),
    #[error("cannot add a {0} and a {1} uncertain variable")]
    MixedFamilies(Family, Family),
    #[error("coefficient {index} is negative ({value})")]
    NegativeCoefficient { index: usize, value: f64 },
    #[error("{vars} variables but {coeffs} coefficients")]
    LengthMismatch { vars: usize, coeffs: usize },
    #[error("combination needs at least one variable")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Linear,
    Zigzag,
    Normal,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Zigzag => "zigzag",
            Family::Normal => "normal",
        }
    }

    /// Number of real parameters the family takes.
    pub fn arity(self) -> usize {
        match self {
            Family::Linear | Family::Normal => 2,
            Family::Zigzag => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A scalar uncertain parameter.
///
/// Variants are public so values can be pattern matched; use the checked
/// constructors ([`UncertainValue::linear`] and friends) or
/// [`UncertainValue::check`] to guarantee the distribution is regular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UncertainValue {
    Linear { a: f64, b: f64 },
    Zigzag { a: f64, b: f64, c: f64 },
    Normal { e: f64, sigma: f64 },
}

impl UncertainValue {
    pub fn linear(a: f64, b: f64) -> Result<Self, UncertainError> {
        Self::Linear { a, b }.checked()
    }

    pub fn zigzag(a: f64, b: f64, c: f64) -> Result<Self, UncertainError> {
        Self::Zigzag { a, b, c }.checked()
    }

    pub fn normal(e: f64, sigma: f64) -> Result<Self, UncertainError> {
        Self::Normal { e, sigma }.checked()
    }

    /// Builds a value from a family tag and its flat parameter list.
    pub fn from_params(family: Family, params: &[f64]) -> Result<Self, UncertainError> {
        if params.len() != family.arity() {
            return Err(UncertainError::InvalidParameters {
                family,
                params: params.to_vec(),
                reason: match family {
                    Family::Zigzag => "expected 3 parameters",
                    _ => "expected 2 parameters",
                },
            });
        }
        match family {
            Family::Linear => Self::linear(params[0], params[1]),
            Family::Zigzag => Self::zigzag(params[0], params[1], params[2]),
            Family::Normal => Self::normal(params[0], params[1]),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::Linear { .. } => Family::Linear,
            Self::Zigzag { .. } => Family::Zigzag,
            Self::Normal { .. } => Family::Normal,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Self::Linear { a, b } => vec![a, b],
            Self::Zigzag { a, b, c } => vec![a, b, c],
            Self::Normal { e, sigma } => vec![e, sigma],
        }
    }

    /// Verifies the parameter invariants (`a < b`, `a < b < c`, `σ > 0`, all finite).
    pub fn check(&self) -> Result<(), UncertainError> {
        let params = self.params();
        let invalid = |reason| {
            Err(UncertainError::InvalidParameters {
                family: self.family(),
                params: params.clone(),
                reason,
            })
        };
        if params.iter().any(|p| !p.is_finite()) {
            return invalid("parameters must be finite");
        }
        match *self {
            Self::Linear { a, b } if a >= b => invalid("requires a < b"),
            Self::Zigzag { a, b, c } if !(a < b && b < c) => invalid("requires a < b < c"),
            Self::Normal { sigma, .. } if sigma <= 0.0 => invalid("requires sigma > 0"),
            _ => Ok(()),
        }
    }

    fn checked(self) -> Result<Self, UncertainError> {
        self.check().map(|()| self)
    }

    /// Uncertainty distribution `Φ(x) = M{ξ ≤ x}`.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Linear { a, b } => {
                if x <= a {
                    0.0
                } else if x >= b {
                    1.0
                } else {
                    (x - a) / (b - a)
                }
            }
            Self::Zigzag { a, b, c } => {
                if x <= a {
                    0.0
                } else if x <= b {
                    (x - a) / (2.0 * (b - a))
                } else if x < c {
                    (x + c - 2.0 * b) / (2.0 * (c - b))
                } else {
                    1.0
                }
            }
            Self::Normal { e, sigma } => 1.0 / (1.0 + (PI * (e - x) / (3f64.sqrt() * sigma)).exp()),
        }
    }

    /// Inverse uncertainty distribution `Φ⁻¹(α)`.
    pub fn inv_cdf(&self, alpha: ConfidenceLevel) -> f64 {
        self.quantile(alpha.get())
    }

    // Valid for alpha in (0, 1); the midpoint quadrature never leaves that range.
    fn quantile(&self, alpha: f64) -> f64 {
        match *self {
            Self::Linear { a, b } => a + alpha * (b - a),
            Self::Zigzag { a, b, c } => {
                if alpha < 0.5 {
                    a + 2.0 * alpha * (b - a)
                } else {
                    2.0 * b - c + 2.0 * alpha * (c - b)
                }
            }
            Self::Normal { e, sigma } => e + sigma * 3f64.sqrt() / PI * (alpha / (1.0 - alpha)).ln(),
        }
    }

    /// Closed-form expected value.
    pub fn expected_value(&self) -> f64 {
        match *self {
            Self::Linear { a, b } => (a + b) / 2.0,
            Self::Zigzag { a, b, c } => (a + 2.0 * b + c) / 4.0,
            Self::Normal { e, .. } => e,
        }
    }

    /// Midpoint-rule quadrature of `∫₀¹ Φ⁻¹(α) dα` on `n_points` cells.
    ///
    /// Nodes sit at `(i + ½)/n`, so the unbounded normal quantile is never
    /// evaluated at 0 or 1.
    ///
    /// # Panics
    ///
    /// If `n_points < 2`.
    pub fn expected_value_numeric(&self, n_points: usize) -> f64 {
        assert!(n_points >= 2, "quadrature needs at least two points");
        let n = n_points as f64;
        let sum: f64 = (0..n_points)
            .map(|i| self.quantile((i as f64 + 0.5) / n))
            .sum();
        sum / n
    }

    /// Sum of two independent variables of the same family.
    pub fn sum_independent(&self, other: &Self) -> Result<Self, UncertainError> {
        self.check()?;
        other.check()?;
        match (*self, *other) {
            (Self::Linear { a: a1, b: b1 }, Self::Linear { a: a2, b: b2 }) => {
                Self::linear(a1 + a2, b1 + b2)
            }
            (Self::Zigzag { a: a1, b: b1, c: c1 }, Self::Zigzag { a: a2, b: b2, c: c2 }) => {
                Self::zigzag(a1 + a2, b1 + b2, c1 + c2)
            }
            (Self::Normal { e: e1, sigma: s1 }, Self::Normal { e: e2, sigma: s2 }) => {
                Self::normal(e1 + e2, s1 + s2)
            }
            (u, v) => Err(UncertainError::MixedFamilies(u.family(), v.family())),
        }
    }

    /// Nonnegative scaling `c·ξ`, which stays in the family.
    ///
    /// Returns `None` for `c == 0` (the result is a crisp zero, not a regular
    /// uncertain variable) or for negative / non-finite `c`.
    pub fn scale(&self, c: f64) -> Option<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return None;
        }
        Some(match *self {
            Self::Linear { a, b } => Self::Linear { a: c * a, b: c * b },
            Self::Zigzag { a, b, c: z } => Self::Zigzag { a: c * a, b: c * b, c: c * z },
            Self::Normal { e, sigma } => Self::Normal { e: c * e, sigma: c * sigma },
        })
    }
}

impl fmt::Display for UncertainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Linear { a, b } => write!(f, "L({a}, {b})"),
            Self::Zigzag { a, b, c } => write!(f, "Z({a}, {b}, {c})"),
            Self::Normal { e, sigma } => write!(f, "N({e}, {sigma})"),
        }
    }
}

/// A confidence level strictly inside the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct ConfidenceLevel(f64);

impl ConfidenceLevel {
    pub fn new(alpha: f64) -> Result<Self, UncertainError> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(UncertainError::ConfidenceOutOfRange(alpha))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 − α`, used by upper-bound (supply, capacity) chance constraints.
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

impl TryFrom<f64> for ConfidenceLevel {
    type Error = UncertainError;

    fn try_from(alpha: f64) -> Result<Self, Self::Error> {
        Self::new(alpha)
    }
}

/// `Σ cᵢ·Φᵢ⁻¹(α)`: the inverse distribution of a nonnegative combination of
/// independent variables, each of which enters strictly increasingly.
pub fn inverse_of_monotone_combination(
    vars: &[UncertainValue],
    coeffs: &[f64],
    alpha: ConfidenceLevel,
) -> Result<f64, UncertainError> {
    if vars.len() != coeffs.len() {
        return Err(UncertainError::LengthMismatch {
            vars: vars.len(),
            coeffs: coeffs.len(),
        });
    }
    if vars.is_empty() {
        return Err(UncertainError::Empty);
    }
    if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, c)| !(**c >= 0.0)) {
        return Err(UncertainError::NegativeCoefficient { index, value });
    }
    let mut total = 0.0;
    for (v, c) in vars.iter().zip(coeffs) {
        v.check()?;
        total += c * v.inv_cdf(alpha);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(a: f64) -> ConfidenceLevel {
        ConfidenceLevel::new(a).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    // 10 + 1.5·(√3/π)·ln 9, evaluated independently of the quantile code.
    fn logistic_quantile_09(e: f64, sigma: f64) -> f64 {
        e + sigma * 3f64.sqrt() / std::f64::consts::PI * 9f64.ln()
    }

    #[test]
    fn cdf_examples() {
        let l = UncertainValue::linear(2.0, 4.0).unwrap();
        assert_eq!(l.cdf(2.0), 0.0);
        assert_eq!(l.cdf(3.0), 0.5);
        let n = UncertainValue::normal(10.0, 1.5).unwrap();
        assert_eq!(n.cdf(10.0), 0.5);
        close(n.cdf(11.8174), 0.9000337208583827, 1e-12);
        close(n.cdf(logistic_quantile_09(10.0, 1.5)), 0.9, 1e-12);
    }

    #[test]
    fn inv_cdf_examples() {
        let n = UncertainValue::normal(10.0, 1.5).unwrap();
        close(n.inv_cdf(alpha(0.9)), 11.817090098824588, 1e-9);
        close(n.inv_cdf(alpha(0.9)), logistic_quantile_09(10.0, 1.5), 1e-12);
        let l = UncertainValue::linear(2.0, 4.0).unwrap();
        close(l.inv_cdf(alpha(0.25)), 2.5, 1e-15);
        let s = UncertainValue::normal(32.0, 1.5).unwrap();
        close(s.inv_cdf(alpha(0.1)), 30.182909901175414, 1e-9);
    }

    #[test]
    fn zigzag_shape() {
        let z = UncertainValue::zigzag(0.0, 1.0, 4.0).unwrap();
        assert_eq!(z.cdf(1.0), 0.5);
        assert_eq!(z.cdf(0.5), 0.25);
        assert_eq!(z.cdf(2.5), 0.75);
        assert_eq!(z.cdf(4.0), 1.0);
        close(z.inv_cdf(alpha(0.75)), 2.5, 1e-12);
    }

    #[test]
    fn expected_values() {
        assert_eq!(UncertainValue::linear(2.0, 4.0).unwrap().expected_value(), 3.0);
        assert_eq!(UncertainValue::normal(10.0, 1.5).unwrap().expected_value(), 10.0);
        assert_eq!(UncertainValue::zigzag(0.0, 1.0, 4.0).unwrap().expected_value(), 1.5);
    }

    #[test]
    fn quadrature_oracle() {
        close(UncertainValue::linear(2.0, 4.0).unwrap().expected_value_numeric(1000), 3.0, 1e-6);
        close(UncertainValue::normal(10.0, 1.5).unwrap().expected_value_numeric(100_000), 10.0, 1e-4);
        close(UncertainValue::zigzag(0.0, 1.0, 4.0).unwrap().expected_value_numeric(100_000), 1.5, 1e-4);
    }

    #[test]
    fn sums() {
        let s = UncertainValue::linear(1.0, 2.0)
            .unwrap()
            .sum_independent(&UncertainValue::linear(3.0, 4.0).unwrap())
            .unwrap();
        assert_eq!(s, UncertainValue::Linear { a: 4.0, b: 6.0 });
        let s = UncertainValue::normal(5.0, 1.0)
            .unwrap()
            .sum_independent(&UncertainValue::normal(7.0, 2.0).unwrap())
            .unwrap();
        assert_eq!(s, UncertainValue::Normal { e: 12.0, sigma: 3.0 });
        let degenerate = UncertainValue::Linear { a: 0.0, b: 0.0 };
        assert!(UncertainValue::Linear { a: 0.0, b: 1.0 }
            .sum_independent(&degenerate)
            .is_err());
        assert!(matches!(
            UncertainValue::Linear { a: 0.0, b: 1.0 }.sum_independent(&UncertainValue::Normal { e: 0.0, sigma: 1.0 }),
            Err(UncertainError::MixedFamilies(Family::Linear, Family::Normal))
        ));
    }

    #[test]
    fn constructors_reject_degenerate() {
        assert!(UncertainValue::linear(1.0, 1.0).is_err());
        assert!(UncertainValue::zigzag(0.0, 2.0, 2.0).is_err());
        assert!(UncertainValue::normal(0.0, 0.0).is_err());
        assert!(UncertainValue::normal(f64::NAN, 1.0).is_err());
        assert!(UncertainValue::from_params(Family::Zigzag, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn confidence_bounds() {
        assert!(ConfidenceLevel::new(0.0).is_err());
        assert!(ConfidenceLevel::new(1.0).is_err());
        assert!(ConfidenceLevel::new(f64::NAN).is_err());
        close(alpha(0.9).complement().get(), 0.1, 1e-15);
    }

    #[test]
    fn monotone_combination_examples() {
        let n = UncertainValue::normal(10.0, 1.5).unwrap();
        close(inverse_of_monotone_combination(&[n], &[1.0], alpha(0.9)).unwrap(), 11.817090098824588, 1e-9);
        let vars = [UncertainValue::normal(10.0, 1.0).unwrap(), UncertainValue::normal(20.0, 2.0).unwrap()];
        close(inverse_of_monotone_combination(&vars, &[1.0, 1.0], alpha(0.5)).unwrap(), 30.0, 1e-12);
        let vars = [UncertainValue::linear(0.0, 2.0).unwrap(), UncertainValue::linear(0.0, 4.0).unwrap()];
        close(inverse_of_monotone_combination(&vars, &[2.0, 1.0], alpha(0.5)).unwrap(), 4.0, 1e-12);
        assert!(matches!(
            inverse_of_monotone_combination(&vars, &[1.0, -1.0], alpha(0.5)),
            Err(UncertainError::NegativeCoefficient { index: 1, .. })
        ));
        assert!(inverse_of_monotone_combination(&vars, &[1.0], alpha(0.5)).is_err());
        assert!(inverse_of_monotone_combination(&[], &[], alpha(0.5)).is_err());
    }
}

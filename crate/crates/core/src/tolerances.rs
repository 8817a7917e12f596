//! Numerical tolerances shared by the operators and the verification suites.
//!
//! Every threshold used by a check lives here so that the acceptance suite and
//! the command line agree on the same values. [`Tolerances`] carries the subset
//! that a run configuration may override.

use crate::error::{Error, Result};

/// Absolute tolerance for comparing measures of piecewise data. The function
/// class is closed under exact arithmetic on rational inputs, so this only
/// absorbs rounding.
pub const MEASURE: f64 = 1e-12;

/// Points with `|Mu - |u|^v| <= CONTACT` are treated as contact points.
pub const CONTACT: f64 = 1e-10;

/// Width at which bisection stops when locating a boundary of the contact set.
pub const BISECTION: f64 = 1e-10;

/// Ties between candidate intervals closer than this are broken by length.
pub const TIE: f64 = 1e-12;

/// Parameter tolerance of the planar pattern search.
pub const PATTERN: f64 = 1e-6;

/// Centre and radius tolerance for treating an arc of a region as lying on a sphere.
pub const ARC_COINCIDENCE: f64 = 1e-9;

/// Closing tolerance for consecutive edges of a boundary loop.
pub const LOOP_CLOSURE: f64 = 1e-9;

/// Absolute gate on `|fd_grad|` below which the gradient formula is not applied.
pub const GRADIENT_GATE: f64 = 0.05;

/// Margin by which the best finite ball must fall below `u^v(x)` before the
/// optimal-ball set is declared empty.
pub const EMPTY_OPTIMAL_SET: f64 = 1e-9;

/// Runtime-adjustable tolerances. Defaults equal the module constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub measure: f64,
    pub contact: f64,
    pub bisection: f64,
    pub tie: f64,
    pub pattern: f64,
    pub gradient_gate: f64,
    pub empty_optimal_set: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            measure: MEASURE,
            contact: CONTACT,
            bisection: BISECTION,
            tie: TIE,
            pattern: PATTERN,
            gradient_gate: GRADIENT_GATE,
            empty_optimal_set: EMPTY_OPTIMAL_SET,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 7] = [
        "measure",
        "contact",
        "bisection",
        "tie",
        "pattern",
        "gradient_gate",
        "empty_optimal_set",
    ];

    /// Overrides one tolerance by name. Values below machine epsilon are rejected.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value >= f64::EPSILON) || !value.is_finite() {
            return Err(Error::Argument(format!(
                "tolerance {key}={value} must be finite and at least machine epsilon"
            )));
        }
        let slot = match key {
            "measure" => &mut self.measure,
            "contact" => &mut self.contact,
            "bisection" => &mut self.bisection,
            "tie" => &mut self.tie,
            "pattern" => &mut self.pattern,
            "gradient_gate" => &mut self.gradient_gate,
            "empty_optimal_set" => &mut self.empty_optimal_set,
            _ => return Err(Error::Argument(format!("unknown tolerance key `{key}`"))),
        };
        *slot = value;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_sub_epsilon_override() {
        let mut t = Tolerances::default();
        assert!(t.set("contact", 1e-20).is_err());
        assert!(t.set("nonsense", 1e-3).is_err());
        t.set("contact", 1e-8).unwrap();
        assert_eq!(t.contact, 1e-8);
    }
}

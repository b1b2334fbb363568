use std::fmt;

use crate::error::{Error, Result};

/// Relative violation threshold: a report is violated when
/// `margin < −ε·max(1, |lhs|, |rhs|)`.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationReason {
    /// `lhs − rhs` is below the threshold.
    Margin,
    /// A variance evaluated under partial transposition came out negative,
    /// which by itself shows the partially transposed state is unphysical.
    NegativePtVariance,
}

impl ViolationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationReason::Margin => "margin",
            ViolationReason::NegativePtVariance => "negative PT variance",
        }
    }
}

/// Direction of the asserted inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    /// `lhs ≥ rhs`
    AtLeast,
    /// `lhs ≤ rhs`
    AtMost,
}

/// Uniform verdict for one inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub witness: String,
    pub lhs: f64,
    pub rhs: f64,
    pub sense: Sense,
    /// Signed slack of the inequality (`lhs − rhs` for `≥`, `rhs − lhs` for
    /// `≤`); negative means it fails.
    pub margin: f64,
    pub violated: bool,
    pub reason: Option<ViolationReason>,
    /// Free parameters used, in insertion order.
    pub params: Vec<(String, String)>,
}

impl WitnessReport {
    /// Report for `lhs ≥ rhs`.
    pub fn new(witness: &str, lhs: f64, rhs: f64, params: Vec<(String, String)>) -> Result<Self> {
        Self::with_sense(witness, lhs, rhs, Sense::AtLeast, params)
    }

    /// Report for `lhs ≤ rhs`.
    pub fn at_most(witness: &str, lhs: f64, rhs: f64, params: Vec<(String, String)>) -> Result<Self> {
        Self::with_sense(witness, lhs, rhs, Sense::AtMost, params)
    }

    pub fn with_sense(
        witness: &str,
        lhs: f64,
        rhs: f64,
        sense: Sense,
        params: Vec<(String, String)>,
    ) -> Result<Self> {
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(Error::Contract(format!(
                "{witness}: non-finite sides lhs={lhs} rhs={rhs}"
            )));
        }
        let mut r = WitnessReport {
            witness: witness.to_string(),
            lhs,
            rhs,
            sense,
            margin: match sense {
                Sense::AtLeast => lhs - rhs,
                Sense::AtMost => rhs - lhs,
            },
            violated: false,
            reason: None,
            params,
        };
        r.rejudge(VIOLATION_TOL);
        Ok(r)
    }

    /// Marks the report violated because a PT variance is negative.
    pub(crate) fn force_negative_variance(mut self) -> Self {
        self.violated = true;
        self.reason = Some(ViolationReason::NegativePtVariance);
        self
    }

    /// Recomputes the margin verdict with a different relative threshold.
    /// A negative-variance verdict is kept.
    pub fn rejudge(&mut self, rel_tol: f64) {
        if self.reason == Some(ViolationReason::NegativePtVariance) {
            return;
        }
        let eps = rel_tol * 1f64.max(self.lhs.abs()).max(self.rhs.abs());
        self.violated = self.margin < -eps;
        self.reason = self.violated.then_some(ViolationReason::Margin);
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: lhs={:.6e} rhs={:.6e} margin={:.6e} violated={}",
            self.witness, self.lhs, self.rhs, self.margin, self.violated
        )
    }
}

/// Product-form uncertainty relation with both factors being PT variances;
/// either factor going negative short-circuits to a violation.
pub(crate) fn pt_product_report(
    name: &str,
    first: f64,
    second: f64,
    rhs: f64,
    params: Vec<(String, String)>,
) -> Result<WitnessReport> {
    let rep = WitnessReport::new(name, first * second, rhs, params)?;
    let scale = first.abs().max(second.abs());
    if is_negative(first, scale) || is_negative(second, scale) {
        Ok(rep.force_negative_variance())
    } else {
        Ok(rep)
    }
}

/// Relative test for a variance that is negative beyond rounding.
pub(crate) fn is_negative(value: f64, scale: f64) -> bool {
    value < -VIOLATION_TOL * scale.abs().max(1.0)
}

pub(crate) fn kv(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_is_not_violation() {
        let r = WitnessReport::new("w", 2.0, 2.0 + 1e-12, vec![]).unwrap();
        assert!(!r.violated);
        let r = WitnessReport::new("w", 0.0, 0.0625, vec![]).unwrap();
        assert!(r.violated);
        assert_eq!(r.reason, Some(ViolationReason::Margin));
        assert!((r.margin + 0.0625).abs() < 1e-15);
    }

    #[test]
    fn threshold_scales_with_magnitude() {
        let mut r = WitnessReport::new("w", 1e6, 1e6 + 1e-4, vec![]).unwrap();
        assert!(!r.violated);
        r.rejudge(1e-12);
        assert!(r.violated);
    }

    #[test]
    fn upper_bound_sense() {
        let r = WitnessReport::at_most("w", 0.25, 0.0, vec![]).unwrap();
        assert!(r.violated && (r.margin + 0.25).abs() < 1e-15);
        assert!(!WitnessReport::at_most("w", 0.0, 0.5, vec![]).unwrap().violated);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(WitnessReport::new("w", f64::NAN, 0.0, vec![]).is_err());
    }

    #[test]
    fn negative_variance_survives_rejudge() {
        let mut r = WitnessReport::new("w", 1.0, 0.0, vec![]).unwrap().force_negative_variance();
        r.rejudge(1.0);
        assert!(r.violated);
    }
}

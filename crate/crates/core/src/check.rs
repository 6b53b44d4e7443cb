//! Residual bookkeeping shared by the verification suites.

use serde::Serialize;

use crate::exactnum::{Backend, Jet, Scalar};

/// Relative tolerance of the floating backend.
pub const FLOAT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub anchor: String,
    pub passed: bool,
    /// Exact backend: every residual coefficient through its reach is zero.
    pub exact_zero: bool,
    pub max_residual: f64,
    /// Size of the compared quantities; float residuals are judged relative to it.
    pub scale: f64,
    /// Lowest jet degree through which the residuals are meaningful.
    pub min_reach: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckOutcome {
    pub fn failed(id: &str, anchor: &str, note: String) -> Self {
        CheckOutcome {
            id: id.into(),
            anchor: anchor.into(),
            passed: false,
            exact_zero: false,
            max_residual: f64::NAN,
            scale: 0.0,
            min_reach: -1,
            note: Some(note),
        }
    }

    pub fn boolean(id: &str, anchor: &str, ok: bool, note: Option<String>) -> Self {
        CheckOutcome {
            id: id.into(),
            anchor: anchor.into(),
            passed: ok,
            exact_zero: ok,
            max_residual: if ok { 0.0 } else { 1.0 },
            scale: 1.0,
            min_reach: 0,
            note,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Judges a list of residual jets that should vanish; `scale` is the size of the inputs.
pub fn vanishing<S: Scalar>(id: &str, anchor: &str, residuals: &[Jet<S>], scale: f64) -> CheckOutcome {
    let max_residual = residuals.iter().map(|j| j.max_modulus()).fold(0.0, f64::max);
    let min_reach = residuals.iter().map(|j| j.reach()).min().unwrap_or(0);
    let exact_zero = residuals.iter().all(|j| j.is_zero());
    let passed = match S::BACKEND {
        Backend::Exact => exact_zero,
        Backend::Float => min_reach >= 0 && max_residual <= FLOAT_TOL * scale.max(1.0),
    };
    CheckOutcome { id: id.into(), anchor: anchor.into(), passed, exact_zero, max_residual, scale, min_reach, note: None }
}

/// Compares two lists of jets entrywise.
pub fn agree<S: Scalar>(id: &str, anchor: &str, lhs: &[Jet<S>], rhs: &[Jet<S>]) -> CheckOutcome {
    assert_eq!(lhs.len(), rhs.len(), "comparison of different shapes in {}", id);
    let scale = lhs.iter().chain(rhs).map(|j| j.max_modulus()).fold(0.0, f64::max);
    let res: Vec<Jet<S>> = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
    vanishing(id, anchor, &res, scale)
}

/// Largest coefficient among the jets.
pub fn magnitude<S: Scalar>(jets: &[Jet<S>]) -> f64 {
    jets.iter().map(|j| j.max_modulus()).fold(0.0, f64::max)
}

/// True when some jet is nonzero beyond float noise (a witness of non-vanishing).
pub fn nonvanishing<S: Scalar>(jets: &[Jet<S>], scale: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => jets.iter().any(|j| j.terms().next().is_some()),
        Backend::Float => magnitude(jets) > 1e-6 * scale.max(1.0),
    }
}

/// `f = conj f`, exactly or within the float tolerance relative to `f`.
pub(crate) fn is_real<S: Scalar>(f: &Jet<S>, conj: &Jet<S>) -> bool {
    vanishing("", "", &[f - conj], magnitude(std::slice::from_ref(f))).passed
}

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

/// Outcome of one numerical identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub check_name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// `residual <= tolerance`; a NaN residual fails.
    pub pass: bool,
    pub context: BTreeMap<String, String>,
}

impl VerifyReport {
    pub fn new(check_name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            check_name: check_name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            context: BTreeMap::new(),
        }
    }

    /// Attach a context entry (grid size, parameters, ...).
    pub fn with(mut self, key: impl Into<String>, value: impl Display) -> Self {
        self.context.insert(key.into(), value.to_string());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_residual_within_tolerance() {
        assert!(VerifyReport::new("a", 1e-3, 1e-3).pass);
        assert!(!VerifyReport::new("a", 2e-3, 1e-3).pass);
        assert!(!VerifyReport::new("a", f64::NAN, 1e-3).pass);
        let r = VerifyReport::new("a", 0.0, 1.0).with("n_steps", 512);
        assert_eq!(r.context["n_steps"], "512");
    }
}

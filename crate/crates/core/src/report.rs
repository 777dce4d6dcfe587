use std::fmt;

/// Outcome of one numerical identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Location (index, ω or x) of the worst residual, when meaningful.
    pub location: Option<f64>,
    /// Extra named quantities recorded alongside the residual.
    pub details: Vec<(String, f64)>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            residual,
            tolerance,
            passed: residual.is_finite() && residual <= tolerance,
            location: None,
            details: Vec::new(),
        }
    }

    pub fn at(mut self, location: f64) -> Self {
        self.location = Some(location);
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: f64) -> Self {
        self.details.push((key.into(), value));
        self
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} residual={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )?;
        if let Some(loc) = self.location {
            write!(f, " at={loc}")?;
        }
        for (k, v) in &self.details {
            write!(f, " {k}={v:.6e}")?;
        }
        Ok(())
    }
}

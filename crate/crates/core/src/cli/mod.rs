//! Config-driven check runs.
//!
//! A run reads a JSON [`CheckConfig`], validates it into a [`ResolvedConfig`],
//! executes every requested check and produces a [`RunReport`]. Exit codes:
//! `0` when every check passes, `1` when any check fails, `2` for config or
//! usage errors.

mod config;
mod run;

use std::fmt::Write as _;
use std::path::Path;

pub use config::{
    CheckConfig, CheckEntry, CheckSpec, Commutation, ConfigError, Constructor, GeneratorSpec,
    ResolvedConfig, StructureKind, TensorTerm, CHECK_NAMES, GENERATOR_BUILTINS,
};
pub use run::{run_checks, CheckResult, RunReport, SCHEMA_VERSION};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut CheckConfig) {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(samples) = self.samples {
            cfg.samples = samples;
        }
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
    }
}

pub fn load_config(path: &Path, overrides: Overrides) -> Result<ResolvedConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut cfg = CheckConfig::from_json(&text)?;
    overrides.apply(&mut cfg);
    cfg.resolve()
}

pub fn exit_code(report: &RunReport) -> i32 {
    if report.all_passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn report_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// One line per check, then a summary.
pub fn summary(report: &RunReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let _ = write!(out, "{verdict} {}", c.check);
        if let Some(v) = c.max_violation {
            let _ = write!(out, " max_violation={v:.3e}");
        }
        if let Some(e) = &c.error {
            let _ = write!(out, " error: {e}");
        }
        out.push('\n');
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(
        out,
        "{passed}/{} checks passed (seed {})",
        report.checks.len(),
        report.seed
    );
    out
}

pub fn list_builtins() -> String {
    let mut out = String::from("generators:\n");
    for (name, doc) in GENERATOR_BUILTINS {
        let _ = writeln!(out, "  {name:<22}{doc}");
    }
    out.push_str("checks:\n");
    for (name, doc) in CHECK_NAMES {
        let _ = writeln!(out, "  {name:<22}{doc}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_listing_is_complete_and_stable() {
        let text = list_builtins();
        for name in ["identity", "standard_J", "quat_i", "quat_j", "quat_k", "nilpotent_null_pair"] {
            assert!(text.contains(name));
        }
        for name in [
            "symmetries",
            "almost_complex",
            "gray",
            "jordan_ip_complex",
            "jordan_ip_real",
            "spectrum",
            "admissible",
            "admissible_pair",
            "solve_constants",
        ] {
            assert!(text.contains(name));
        }
        assert_eq!(text, list_builtins());
    }
}

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureTensor;
use crate::generators::{project_commutation, random_adjoint_class};
use crate::jordan_ip::SpectrumModel;
use crate::linalg::{BilinearSpace, LinearMap, DEFAULT_JORDAN_TOL, DEFAULT_TOL};
use crate::structures::{
    nilpotent_null_pair, standard_complex_structure, standard_quaternion_structure,
    ComplexStructure, QuaternionStructure,
};

pub const GENERATOR_BUILTINS: &[(&str, &str)] = &[
    ("identity", "the identity map"),
    ("standard_J", "the standard complex structure (requires structure complex or quaternion)"),
    ("quat_i", "quaternion unit i (requires structure quaternion)"),
    ("quat_j", "quaternion unit j (requires structure quaternion)"),
    ("quat_k", "quaternion unit k (requires structure quaternion)"),
    ("nilpotent_null_pair", "self-adjoint J-commuting phi with phi^2 = 0, ker = range; signature (s,s), s even"),
    ("random_self_adjoint", "Gaussian self-adjoint map; optional seed, optional commutation"),
    ("random_skew_adjoint", "Gaussian skew-adjoint map; optional seed, optional commutation"),
    ("matrix", "explicit row-major matrix given in the `matrix` field"),
];

pub const CHECK_NAMES: &[(&str, &str)] = &[
    ("symmetries", "antisymmetry, pair symmetry and first Bianchi identity of the tensor"),
    ("almost_complex", "J*R = R and J R(pi) = R(pi) J on sampled complex lines"),
    ("gray", "the Gray identity for the tensor and J"),
    ("jordan_ip_complex", "constant Jordan form of R(pi) on sampled complex lines"),
    ("jordan_ip_real", "constant Jordan form of R(pi) per causal type of real 2-planes"),
    ("spectrum", "spectrum of J R(pi) on sampled complex lines; optional `expected`"),
    ("admissible", "admissibility of one generator (field `generator`)"),
    ("admissible_pair", "admissibility of a pair (fields `first`, `second`)"),
    ("solve_constants", "coefficients realising `spectrum` in `model`, verified by round trip"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    Complex,
    Quaternion,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Commutation {
    None,
    Commuting,
    Anticommuting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub commutation: Option<Commutation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constructor {
    SelfAdjoint,
    SkewAdjoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorTerm {
    pub coefficient: f64,
    pub generator: String,
    pub constructor: Constructor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BareCheck {
    Symmetries,
    AlmostComplex,
    Gray,
    JordanIpComplex,
    JordanIpReal,
    Spectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    Symmetries,
    AlmostComplex,
    Gray,
    JordanIpComplex,
    JordanIpReal,
    Spectrum {
        #[serde(default)]
        expected: Option<Vec<(f64, usize)>>,
    },
    Admissible {
        generator: String,
    },
    AdmissiblePair {
        first: String,
        second: String,
    },
    SolveConstants {
        model: SpectrumModel,
        spectrum: Vec<(f64, usize)>,
    },
}

impl CheckSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CheckSpec::Symmetries => "symmetries",
            CheckSpec::AlmostComplex => "almost_complex",
            CheckSpec::Gray => "gray",
            CheckSpec::JordanIpComplex => "jordan_ip_complex",
            CheckSpec::JordanIpReal => "jordan_ip_real",
            CheckSpec::Spectrum { .. } => "spectrum",
            CheckSpec::Admissible { .. } => "admissible",
            CheckSpec::AdmissiblePair { .. } => "admissible_pair",
            CheckSpec::SolveConstants { .. } => "solve_constants",
        }
    }

    fn needs_tensor(&self) -> bool {
        matches!(
            self,
            CheckSpec::Symmetries
                | CheckSpec::AlmostComplex
                | CheckSpec::Gray
                | CheckSpec::JordanIpComplex
                | CheckSpec::JordanIpReal
                | CheckSpec::Spectrum { .. }
        )
    }

    fn needs_complex_structure(&self) -> bool {
        matches!(
            self,
            CheckSpec::AlmostComplex
                | CheckSpec::Gray
                | CheckSpec::JordanIpComplex
                | CheckSpec::Spectrum { .. }
                | CheckSpec::Admissible { .. }
                | CheckSpec::AdmissiblePair { .. }
        )
    }
}

/// A check given either by bare name or as a tagged object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckEntry {
    Bare(BareCheck),
    Full(CheckSpec),
}

impl CheckEntry {
    pub fn spec(&self) -> CheckSpec {
        match self {
            CheckEntry::Bare(b) => match b {
                BareCheck::Symmetries => CheckSpec::Symmetries,
                BareCheck::AlmostComplex => CheckSpec::AlmostComplex,
                BareCheck::Gray => CheckSpec::Gray,
                BareCheck::JordanIpComplex => CheckSpec::JordanIpComplex,
                BareCheck::JordanIpReal => CheckSpec::JordanIpReal,
                BareCheck::Spectrum => CheckSpec::Spectrum { expected: None },
            },
            CheckEntry::Full(spec) => spec.clone(),
        }
    }
}

fn default_samples() -> usize {
    100
}

fn default_seed() -> u64 {
    1
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_jordan_tol() -> f64 {
    DEFAULT_JORDAN_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub signature: (usize, usize),
    #[serde(default = "default_structure")]
    pub structure: StructureKind,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub tensor: Vec<TensorTerm>,
    pub checks: Vec<CheckEntry>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_jordan_tol")]
    pub jordan_tol: f64,
}

fn default_structure() -> StructureKind {
    StructureKind::None
}

/// Validation failure with the offending field path.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

fn config_error(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.into(),
        message: message.into(),
    }
}

/// A validated configuration with every generator built.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub config: CheckConfig,
    pub space: BilinearSpace,
    pub complex: Option<ComplexStructure>,
    pub quaternion: Option<QuaternionStructure>,
    pub generators: HashMap<String, LinearMap>,
    pub tensor: Option<CurvatureTensor>,
    pub checks: Vec<CheckSpec>,
}

impl CheckConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| {
            config_error(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })
    }

    pub fn resolve(self) -> Result<ResolvedConfig, ConfigError> {
        let (p, q) = self.signature;
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(config_error("tol", "must be positive and finite"));
        }
        if !(self.jordan_tol.is_finite() && self.jordan_tol > 0.0) {
            return Err(config_error("jordan_tol", "must be positive and finite"));
        }
        if self.samples == 0 {
            return Err(config_error("samples", "must be at least 1"));
        }
        let space = BilinearSpace::with_tol(p, q, self.tol)
            .map_err(|e| config_error("signature", e.to_string()))?;

        let (complex, quaternion) = match self.structure {
            StructureKind::None => (None, None),
            StructureKind::Complex => (
                Some(
                    standard_complex_structure(&space)
                        .map_err(|e| config_error("structure", e.to_string()))?,
                ),
                None,
            ),
            StructureKind::Quaternion => {
                let h = standard_quaternion_structure(&space)
                    .map_err(|e| config_error("structure", e.to_string()))?;
                (Some(h.as_complex_structure()), Some(h))
            }
        };

        let mut generators = HashMap::new();
        for (idx, g) in self.generators.iter().enumerate() {
            let field = format!("generators[{idx}]");
            if generators.contains_key(&g.name) {
                return Err(config_error(
                    format!("{field}.name"),
                    format!("duplicate generator name '{}'", g.name),
                ));
            }
            let map = build_generator(g, &field, &space, complex.as_ref(), quaternion.as_ref())?;
            generators.insert(g.name.clone(), map);
        }

        let lookup = |name: &str, field: String| {
            generators
                .get(name)
                .ok_or_else(|| config_error(field, format!("undeclared generator '{name}'")))
        };

        let tensor = if self.tensor.is_empty() {
            None
        } else {
            let mut parts = Vec::with_capacity(self.tensor.len());
            for (idx, term) in self.tensor.iter().enumerate() {
                let field = format!("tensor[{idx}]");
                let phi = lookup(&term.generator, format!("{field}.generator"))?;
                let t = match term.constructor {
                    Constructor::SelfAdjoint => CurvatureTensor::from_self_adjoint(&space, phi),
                    Constructor::SkewAdjoint => CurvatureTensor::from_skew_adjoint(&space, phi),
                }
                .map_err(|e| config_error(format!("{field}.constructor"), e.to_string()))?;
                parts.push((term.coefficient, t));
            }
            let refs: Vec<(f64, &CurvatureTensor)> = parts.iter().map(|(c, t)| (*c, t)).collect();
            Some(CurvatureTensor::combine(&refs).map_err(|e| config_error("tensor", e.to_string()))?)
        };

        if self.checks.is_empty() {
            return Err(config_error("checks", "at least one check is required"));
        }
        let mut checks = Vec::with_capacity(self.checks.len());
        for (idx, entry) in self.checks.iter().enumerate() {
            let field = format!("checks[{idx}]");
            let spec = entry.spec();
            if spec.needs_tensor() && tensor.is_none() {
                return Err(config_error(
                    field,
                    format!("check '{}' needs a non-empty `tensor`", spec.name()),
                ));
            }
            if spec.needs_complex_structure() && complex.is_none() {
                return Err(config_error(
                    field,
                    format!("check '{}' needs structure complex or quaternion", spec.name()),
                ));
            }
            match &spec {
                CheckSpec::Admissible { generator } => {
                    lookup(generator, format!("{field}.generator"))?;
                }
                CheckSpec::AdmissiblePair { first, second } => {
                    lookup(first, format!("{field}.first"))?;
                    lookup(second, format!("{field}.second"))?;
                }
                _ => {}
            }
            checks.push(spec);
        }

        Ok(ResolvedConfig {
            config: self,
            space,
            complex,
            quaternion,
            generators,
            tensor,
            checks,
        })
    }
}

fn build_generator(
    g: &GeneratorSpec,
    field: &str,
    space: &BilinearSpace,
    complex: Option<&ComplexStructure>,
    quaternion: Option<&QuaternionStructure>,
) -> Result<LinearMap, ConfigError> {
    let m = space.dim();
    if let Some(rows) = &g.matrix {
        if g.builtin.as_deref().is_some_and(|b| b != "matrix") {
            return Err(config_error(field, "give either `builtin` or `matrix`, not both"));
        }
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(config_error(
                format!("{field}.matrix"),
                format!("expected a {m}x{m} matrix"),
            ));
        }
        return LinearMap::from_rows(rows).map_err(|e| config_error(format!("{field}.matrix"), e.to_string()));
    }
    let builtin = g
        .builtin
        .as_deref()
        .ok_or_else(|| config_error(field, "needs `builtin` or `matrix`"))?;
    let need_complex = || {
        complex.ok_or_else(|| {
            config_error(
                format!("{field}.builtin"),
                format!("'{builtin}' needs structure complex or quaternion"),
            )
        })
    };
    let need_quaternion = || {
        quaternion.ok_or_else(|| {
            config_error(
                format!("{field}.builtin"),
                format!("'{builtin}' needs structure quaternion"),
            )
        })
    };
    let map = match builtin {
        "identity" => LinearMap::identity(m),
        "standard_J" => need_complex()?.map().clone(),
        "quat_i" => need_quaternion()?.i().clone(),
        "quat_j" => need_quaternion()?.j().clone(),
        "quat_k" => need_quaternion()?.k().clone(),
        "nilpotent_null_pair" => nilpotent_null_pair(space)
            .map_err(|e| config_error(format!("{field}.builtin"), e.to_string()))?,
        "random_self_adjoint" | "random_skew_adjoint" => {
            let sign = if builtin == "random_self_adjoint" { 1.0 } else { -1.0 };
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed.unwrap_or(0));
            let phi = random_adjoint_class(space, sign, &mut rng)
                .map_err(|e| config_error(field, e.to_string()))?;
            match g.commutation.unwrap_or(Commutation::None) {
                Commutation::None => phi,
                Commutation::Commuting => project_commutation(&phi, need_complex()?, 1.0),
                Commutation::Anticommuting => project_commutation(&phi, need_complex()?, -1.0),
            }
        }
        "matrix" => return Err(config_error(format!("{field}.matrix"), "missing matrix")),
        other => {
            return Err(config_error(
                format!("{field}.builtin"),
                format!("unknown builtin '{other}'"),
            ))
        }
    };
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bare_and_tagged_checks() {
        let cfg = CheckConfig::from_json(
            r#"{
                "signature": [0, 8],
                "structure": "quaternion",
                "generators": [{"name": "id", "builtin": "identity"}, {"name": "j", "builtin": "quat_j"}],
                "tensor": [{"coefficient": 1, "generator": "id", "constructor": "self_adjoint"}],
                "checks": ["symmetries", {"check": "admissible_pair", "first": "id", "second": "j"},
                           {"check": "solve_constants", "model": "quaternionic", "spectrum": [[4, 2], [7, 1], [-4, 1]]}]
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.samples, 100);
        let resolved = cfg.resolve().unwrap();
        assert_eq!(resolved.checks.len(), 3);
        assert_eq!(resolved.checks[0], CheckSpec::Symmetries);
    }

    #[test]
    fn undeclared_generator_is_reported_with_field() {
        let cfg = CheckConfig::from_json(
            r#"{"signature": [0, 4], "structure": "complex",
                "tensor": [{"coefficient": 1, "generator": "phi", "constructor": "self_adjoint"}],
                "checks": ["symmetries"]}"#,
        )
        .unwrap();
        let err = cfg.resolve().unwrap_err();
        assert_eq!(err.field, "tensor[0].generator");
        assert!(err.message.contains("phi"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = CheckConfig::from_json("{\n \"signature\": [0, 4],\n \"checks\": [\"nope\"]\n}").unwrap_err();
        assert!(err.field.starts_with("line "), "{err}");
    }

    #[test]
    fn structure_must_fit_signature() {
        let cfg = CheckConfig::from_json(r#"{"signature": [1, 3], "structure": "complex", "checks": []}"#)
            .unwrap();
        assert_eq!(cfg.resolve().unwrap_err().field, "structure");
    }

    #[test]
    fn checks_needing_j_require_structure() {
        let cfg = CheckConfig::from_json(
            r#"{"signature": [0, 4],
                "generators": [{"name": "id", "builtin": "identity"}],
                "tensor": [{"coefficient": 1, "generator": "id", "constructor": "self_adjoint"}],
                "checks": ["gray"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.resolve().unwrap_err().field, "checks[0]");
    }
}

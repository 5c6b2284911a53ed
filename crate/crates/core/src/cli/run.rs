use serde::Serialize;
use serde_json::{json, Value};

use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::jordan_ip::{
    check_almost_complex, check_jordan_ip, check_jordan_ip_real, complex_pair_tensor,
    quaternionic_tensor, sample_planes, solve_constants, spectrum_of_jr_with_tol, CausalType,
    OrientedPlane, PlaneKind, SpectrumModel, SpectrumSpec,
};
use crate::linalg::BilinearSpace;
use crate::structures::{
    check_admissible, check_admissible_pair, standard_complex_structure,
    standard_quaternion_structure, ComplexStructure, PlaneSampler,
};

use super::config::{CheckSpec, ResolvedConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub passed: bool,
    pub max_violation: Option<f64>,
    pub witness: Option<Value>,
    pub details: Value,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub signature: (usize, usize),
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub jordan_tol: f64,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

struct Outcome {
    passed: bool,
    max_violation: Option<f64>,
    witness: Option<Value>,
    details: Value,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn run_checks(cfg: &ResolvedConfig) -> RunReport {
    let checks: Vec<CheckResult> = cfg
        .checks
        .iter()
        .map(|spec| match run_one(cfg, spec) {
            Ok(o) => CheckResult {
                check: spec.name().to_string(),
                passed: o.passed,
                max_violation: o.max_violation,
                witness: o.witness,
                details: o.details,
                error: None,
            },
            Err(e) => CheckResult {
                check: spec.name().to_string(),
                passed: false,
                max_violation: None,
                witness: None,
                details: Value::Null,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let all_passed = checks.iter().all(|c| c.passed);
    let c = &cfg.config;
    RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        signature: c.signature,
        seed: c.seed,
        samples: c.samples,
        tol: c.tol,
        jordan_tol: c.jordan_tol,
        checks,
        all_passed,
    }
}

fn tensor(cfg: &ResolvedConfig) -> &CurvatureTensor {
    cfg.tensor.as_ref().expect("validated: tensor present")
}

fn complex(cfg: &ResolvedConfig) -> &ComplexStructure {
    cfg.complex.as_ref().expect("validated: structure present")
}

/// Spacelike and timelike complex lines, `n` of each type the signature admits.
fn complex_lines(
    space: &BilinearSpace,
    j: &ComplexStructure,
    n: usize,
    seed: u64,
) -> Result<Vec<OrientedPlane>> {
    let mut planes = Vec::new();
    for (offset, causal) in [CausalType::Spacelike, CausalType::Timelike].into_iter().enumerate() {
        if causal.realizable_complex_line(space) {
            planes.extend(sample_planes(
                space,
                PlaneKind::ComplexLine(j, causal),
                n,
                seed.wrapping_add(offset as u64),
            )?);
        }
    }
    Ok(planes)
}

/// Spectra of `J R(π)` on sampled complex lines, compared against the first
/// line and optionally against an expected spectrum.
fn spectrum_consistency(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    n: usize,
    seed: u64,
    jordan_tol: f64,
    expected: Option<&SpectrumSpec>,
) -> Result<Outcome> {
    let planes = complex_lines(r.space(), j, n, seed)?;
    let mut reference: Option<SpectrumSpec> = None;
    for plane in &planes {
        let spec = match spectrum_of_jr_with_tol(r, j, plane, jordan_tol) {
            Ok(s) => s,
            Err(e @ Error::Structural(_)) => {
                return Ok(Outcome {
                    passed: false,
                    max_violation: None,
                    witness: Some(json!({"plane": plane.basis(), "reason": e.to_string()})),
                    details: json!({"lines_checked": planes.len(), "spectrum": reference}),
                });
            }
            Err(e) => return Err(e),
        };
        let scale = spec.eigenvalues.iter().fold(1.0f64, |a, (l, _)| a.max(l.abs()));
        let cmp_tol = jordan_tol * scale;
        if let Some(reference) = &reference {
            if !spec.matches(reference, cmp_tol) {
                return Ok(Outcome {
                    passed: false,
                    max_violation: None,
                    witness: Some(json!({"plane": plane.basis(), "spectrum": spec})),
                    details: json!({"lines_checked": planes.len(), "spectrum": reference}),
                });
            }
        } else {
            reference = Some(spec);
        }
    }
    let reference = reference.ok_or(Error::EmptySample)?;
    let scale = reference.eigenvalues.iter().fold(1.0f64, |a, (l, _)| a.max(l.abs()));
    let expected_ok = expected.is_none_or(|e| reference.matches(e, jordan_tol * scale));
    Ok(Outcome {
        passed: expected_ok,
        max_violation: None,
        witness: None,
        details: json!({
            "lines_checked": planes.len(),
            "spectrum": reference,
            "expected": expected,
            "matches_expected": expected.map(|_| expected_ok),
        }),
    })
}

fn run_one(cfg: &ResolvedConfig, spec: &CheckSpec) -> Result<Outcome> {
    let c = &cfg.config;
    let space = &cfg.space;
    match spec {
        CheckSpec::Symmetries => {
            let r = tensor(cfg);
            let report = r.check_symmetries();
            let bound = c.tol * r.max_abs().max(1.0);
            let worst = [report.antisymmetry, report.pair_symmetry, report.bianchi]
                .into_iter()
                .max_by(|a, b| a.max.total_cmp(&b.max))
                .expect("three entries");
            let passed = report.holds(bound);
            Ok(Outcome {
                passed,
                max_violation: Some(report.max()),
                witness: (!passed).then(|| json!({"indices": worst.at})),
                details: to_value(&report),
            })
        }
        CheckSpec::AlmostComplex => {
            let r = tensor(cfg);
            let j = complex(cfg);
            let invariance = r.check_j_invariance(j, c.tol)?;
            let planes = complex_lines(space, j, c.samples, c.seed)?;
            let lines = check_almost_complex(r, j, &planes, c.tol)?;
            let passed = lines.holds && invariance.holds;
            Ok(Outcome {
                passed,
                max_violation: Some(lines.max_commutator),
                witness: lines.witness.as_ref().map(to_value),
                details: json!({
                    "lines": lines,
                    "j_invariance": invariance,
                    "agree": lines.holds == invariance.holds,
                }),
            })
        }
        CheckSpec::Gray => {
            let check = tensor(cfg).check_gray_identity(complex(cfg), c.tol)?;
            Ok(Outcome {
                passed: check.holds,
                max_violation: Some(check.violation.max),
                witness: (!check.holds).then(|| json!({"indices": check.violation.at})),
                details: to_value(&check),
            })
        }
        CheckSpec::JordanIpComplex => {
            let report = check_jordan_ip(tensor(cfg), complex(cfg), c.samples, c.seed, c.jordan_tol)?;
            let witness = report
                .per_type
                .iter()
                .find_map(|t| t.witness.as_ref())
                .map(to_value);
            Ok(Outcome {
                passed: report.constant,
                max_violation: Some(report.max_skew_defect),
                witness,
                details: to_value(&report),
            })
        }
        CheckSpec::JordanIpReal => {
            let report = check_jordan_ip_real(tensor(cfg), c.samples, c.seed, c.jordan_tol)?;
            let witness = report
                .per_type
                .iter()
                .find_map(|t| t.witness.as_ref())
                .map(to_value);
            Ok(Outcome {
                passed: report.constant,
                max_violation: Some(report.max_skew_defect),
                witness,
                details: to_value(&report),
            })
        }
        CheckSpec::Spectrum { expected } => {
            let expected = expected.clone().map(SpectrumSpec::new).transpose()?;
            spectrum_consistency(
                tensor(cfg),
                complex(cfg),
                c.samples,
                c.seed,
                c.jordan_tol,
                expected.as_ref(),
            )
        }
        CheckSpec::Admissible { generator } => {
            let report = check_admissible(&cfg.generators[generator], complex(cfg), c.tol)?;
            Ok(Outcome {
                passed: report.admissible,
                max_violation: None,
                witness: None,
                details: to_value(&report),
            })
        }
        CheckSpec::AdmissiblePair { first, second } => {
            let sampler = PlaneSampler {
                lines: c.samples,
                seed: c.seed,
            };
            match check_admissible_pair(
                &cfg.generators[first],
                &cfg.generators[second],
                complex(cfg),
                sampler,
                c.tol,
            ) {
                Ok(report) => Ok(Outcome {
                    passed: report.admissible,
                    max_violation: None,
                    witness: None,
                    details: to_value(&report),
                }),
                Err(e @ Error::NotAdmissible(_)) => Ok(Outcome {
                    passed: false,
                    max_violation: None,
                    witness: None,
                    details: json!({"reason": e.to_string()}),
                }),
                Err(e) => Err(e),
            }
        }
        CheckSpec::SolveConstants { model, spectrum } => {
            let target = SpectrumSpec::new(spectrum.clone())?;
            let constants = solve_constants(&target, *model)?;
            let (r, j) = match model {
                SpectrumModel::ComplexPair => {
                    let j = standard_complex_structure(space)?;
                    (complex_pair_tensor(&j, &constants)?, j)
                }
                SpectrumModel::Quaternionic => {
                    let h = standard_quaternion_structure(space)?;
                    (quaternionic_tensor(&h, &constants)?, h.as_complex_structure())
                }
            };
            if target.real_dim() != space.dim() {
                return Err(Error::UnrealizableSpectrum {
                    model: "requested",
                    reason: format!(
                        "multiplicities describe real dimension {}, space has {}",
                        target.real_dim(),
                        space.dim()
                    ),
                });
            }
            let mut round_trip =
                spectrum_consistency(&r, &j, c.samples, c.seed, c.jordan_tol, Some(&target))?;
            if let Value::Object(map) = &mut round_trip.details {
                map.insert("constants".into(), to_value(&constants));
            }
            Ok(round_trip)
        }
    }
}

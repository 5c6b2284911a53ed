use serde::{Deserialize, Serialize};

use super::planes::{sample_planes, CausalType, OrientedPlane, PlaneBasis, PlaneKind};
use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::linalg::{
    jordan_equivalent, jordan_invariants, singular_values, JordanInvariants, LinearMap,
};
use crate::structures::ComplexStructure;

/// `R(π) = |(x,x)(y,y) - (x,y)²|^{-1/2} R(x,y)`.
pub fn curvature_operator(r: &CurvatureTensor, plane: &OrientedPlane) -> Result<LinearMap> {
    let space = r.space();
    let (det, threshold) = space.plane_determinant(&plane.x, &plane.y)?;
    if det.abs() <= threshold {
        return Err(Error::DegeneratePlane { det, threshold });
    }
    Ok(r.apply_pair(&plane.x, &plane.y)?.scale(det.abs().sqrt().recip()))
}

/// `max |A + A*|`.
pub fn skew_adjoint_defect(r: &CurvatureTensor, op: &LinearMap) -> Result<f64> {
    Ok(op.max_abs_diff(&r.space().adjoint(op)?.scale(-1.0)).0)
}

/// Confirms `span{x, y}` is `J`-invariant: the third singular value of
/// `[x y Jx Jy]` must vanish.
fn complex_line_residual(j: &ComplexStructure, plane: &OrientedPlane) -> Result<f64> {
    let jm = j.map();
    let cols = [
        plane.x.clone(),
        plane.y.clone(),
        jm.apply(&plane.x)?,
        jm.apply(&plane.y)?,
    ];
    let mut sv = singular_values(&nalgebra::DMatrix::from_columns(&cols));
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(if sv[0] == 0.0 { 0.0 } else { sv[2] / sv[0] })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub holds: bool,
    pub lines_checked: usize,
    /// Largest `max |J R(π) - R(π) J|` over the lines.
    pub max_commutator: f64,
    /// Largest `max |R(π) + R(π)*|` over the lines.
    pub max_skew_defect: f64,
    /// Line attaining `max_commutator` when the check fails.
    pub witness: Option<PlaneBasis>,
}

/// `J R(π) = R(π) J` on every given complex line.
pub fn check_almost_complex(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    planes: &[OrientedPlane],
    tol: f64,
) -> Result<CommutationReport> {
    let jm = j.map();
    let mut max_commutator: f64 = 0.0;
    let mut max_skew_defect: f64 = 0.0;
    let mut worst: Option<(f64, usize)> = None;
    let mut holds = true;
    for (idx, plane) in planes.iter().enumerate() {
        let residual = complex_line_residual(j, plane)?;
        if residual > 1e-6 {
            return Err(Error::NotComplexLine(residual));
        }
        let op = curvature_operator(r, plane)?;
        max_skew_defect = max_skew_defect.max(skew_adjoint_defect(r, &op)?);
        let commutator = (&(jm * &op) - &(&op * jm)).max_abs();
        if commutator > tol * op.max_abs().max(1.0) {
            holds = false;
        }
        if worst.is_none_or(|(w, _)| commutator > w) {
            worst = Some((commutator, idx));
        }
        max_commutator = max_commutator.max(commutator);
    }
    let witness = match (holds, worst) {
        (false, Some((_, idx))) => Some(planes[idx].basis()),
        _ => None,
    };
    Ok(CommutationReport {
        holds,
        lines_checked: planes.len(),
        max_commutator,
        max_skew_defect,
        witness,
    })
}

/// Two planes of one causal type whose operators are not Jordan equivalent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstancyWitness {
    pub reference_plane: PlaneBasis,
    pub other_plane: PlaneBasis,
    pub other_invariants: JordanInvariants,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeConstancy {
    pub causal: CausalType,
    pub samples: usize,
    /// Invariants of the first sampled plane.
    pub reference: JordanInvariants,
    pub reference_plane: PlaneBasis,
    pub constant: bool,
    pub witness: Option<ConstancyWitness>,
    pub max_skew_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneDomain {
    ComplexLines,
    RealPlanes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JordanIpReport {
    pub domain: PlaneDomain,
    pub seed: u64,
    pub per_type: Vec<TypeConstancy>,
    pub constant_within_types: bool,
    /// Complex lines only: whether the reference forms of the causal types
    /// agree with each other.
    pub constant_across_types: Option<bool>,
    pub constant: bool,
    /// Common rank of `R(π)` when it is the same for every sampled plane.
    pub rank: Option<usize>,
    pub rank_type_independent: bool,
    pub ambiguous: bool,
    pub max_skew_defect: f64,
}

fn type_constancy(
    r: &CurvatureTensor,
    kind: PlaneKind<'_>,
    causal: CausalType,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<(TypeConstancy, bool, Option<usize>)> {
    let planes = sample_planes(r.space(), kind, n, seed)?;
    let mut reference: Option<(JordanInvariants, &OrientedPlane)> = None;
    let mut witness = None;
    let mut max_skew_defect: f64 = 0.0;
    let mut ambiguous = false;
    let mut rank = None;
    let mut rank_constant = true;
    for plane in &planes {
        let op = curvature_operator(r, plane)?;
        max_skew_defect = max_skew_defect.max(skew_adjoint_defect(r, &op)?);
        let inv = jordan_invariants(&op, tol)?;
        ambiguous |= inv.ambiguous;
        match rank {
            None => rank = Some(inv.total_rank),
            Some(k) if k != inv.total_rank => rank_constant = false,
            _ => {}
        }
        match &reference {
            None => reference = Some((inv, plane)),
            Some((ref_inv, ref_plane)) => {
                if witness.is_none() && !jordan_equivalent(ref_inv, &inv, tol) {
                    witness = Some(ConstancyWitness {
                        reference_plane: ref_plane.basis(),
                        other_plane: plane.basis(),
                        other_invariants: inv,
                    });
                }
            }
        }
    }
    let (reference, ref_plane) = reference.expect("at least one plane sampled");
    Ok((
        TypeConstancy {
            causal,
            samples: planes.len(),
            reference_plane: ref_plane.basis(),
            reference,
            constant: witness.is_none(),
            witness,
            max_skew_defect,
        },
        ambiguous,
        if rank_constant { rank } else { None },
    ))
}

fn assemble(
    domain: PlaneDomain,
    seed: u64,
    results: Vec<(TypeConstancy, bool, Option<usize>)>,
    tol: f64,
) -> JordanIpReport {
    let ambiguous = results.iter().any(|(_, a, _)| *a);
    let ranks: Vec<Option<usize>> = results.iter().map(|(_, _, r)| *r).collect();
    let per_type: Vec<TypeConstancy> = results.into_iter().map(|(t, _, _)| t).collect();
    let constant_within_types = per_type.iter().all(|t| t.constant);
    let rank_type_independent =
        ranks.iter().all(|r| r.is_some()) && ranks.windows(2).all(|w| w[0] == w[1]);
    let rank = if rank_type_independent { ranks.first().copied().flatten() } else { None };
    let constant_across_types = match domain {
        PlaneDomain::ComplexLines => Some(
            per_type
                .windows(2)
                .all(|w| jordan_equivalent(&w[0].reference, &w[1].reference, tol)),
        ),
        PlaneDomain::RealPlanes => None,
    };
    let constant = constant_within_types && constant_across_types.unwrap_or(true);
    let max_skew_defect = per_type.iter().fold(0.0, |acc: f64, t| acc.max(t.max_skew_defect));
    JordanIpReport {
        domain,
        seed,
        per_type,
        constant_within_types,
        constant_across_types,
        constant,
        rank,
        rank_type_independent,
        ambiguous,
        max_skew_defect,
    }
}

/// Samples `n` spacelike and, when `p ≥ 2`, `n` timelike complex lines and
/// compares the Jordan invariants of `R(π)` against the first line of each
/// type.
pub fn check_jordan_ip(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<JordanIpReport> {
    let space = r.space();
    let mut results = Vec::new();
    for (offset, causal) in [CausalType::Spacelike, CausalType::Timelike].into_iter().enumerate() {
        if causal.realizable_complex_line(space) {
            let kind = PlaneKind::ComplexLine(j, causal);
            results.push(type_constancy(r, kind, causal, n, seed.wrapping_add(offset as u64), tol)?);
        }
    }
    Ok(assemble(PlaneDomain::ComplexLines, seed, results, tol))
}

/// Same as [`check_jordan_ip`] over real oriented 2-planes of every causal
/// type the signature admits; the Jordan form may differ between types.
pub fn check_jordan_ip_real(
    r: &CurvatureTensor,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<JordanIpReport> {
    let space = r.space();
    let mut results = Vec::new();
    for (offset, causal) in CausalType::ALL.into_iter().enumerate() {
        if causal.realizable_plane(space) {
            let kind = PlaneKind::RealPlane(causal);
            results.push(type_constancy(r, kind, causal, n, seed.wrapping_add(offset as u64), tol)?);
        }
    }
    Ok(assemble(PlaneDomain::RealPlanes, seed, results, tol))
}

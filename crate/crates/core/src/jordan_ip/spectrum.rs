//! Spectra of `J R(π)` on complex lines and the inverse problem of choosing
//! coefficients that realise a prescribed spectrum.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::operator::curvature_operator;
use super::planes::OrientedPlane;
use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::linalg::{jordan_invariants, power_range, LinearMap, DEFAULT_JORDAN_TOL};
use crate::structures::{ComplexStructure, QuaternionStructure};

/// Real eigenvalues of `J R(π)` with complex multiplicities
/// (real algebraic multiplicity / 2), ordered by multiplicity, largest first,
/// ties by eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSpec {
    pub eigenvalues: Vec<(f64, usize)>,
}

impl SpectrumSpec {
    pub fn new(mut eigenvalues: Vec<(f64, usize)>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Structural("empty spectrum".into()));
        }
        if eigenvalues.iter().any(|(l, mu)| *mu == 0 || !l.is_finite()) {
            return Err(Error::Structural(
                "multiplicities must be positive and eigenvalues finite".into(),
            ));
        }
        for i in 0..eigenvalues.len() {
            for k in (i + 1)..eigenvalues.len() {
                if eigenvalues[i].0 == eigenvalues[k].0 {
                    return Err(Error::Structural(format!(
                        "eigenvalue {} listed twice",
                        eigenvalues[i].0
                    )));
                }
            }
        }
        // Stable: equal multiplicities keep the caller's order.
        eigenvalues.sort_by_key(|e| std::cmp::Reverse(e.1));
        Ok(Self { eigenvalues })
    }

    /// Real dimension `2 Σ μ_s`.
    pub fn real_dim(&self) -> usize {
        2 * self.eigenvalues.iter().map(|(_, mu)| mu).sum::<usize>()
    }

    /// Multiset equality with eigenvalue tolerance `tol` (absolute).
    pub fn matches(&self, other: &SpectrumSpec, tol: f64) -> bool {
        if self.eigenvalues.len() != other.eigenvalues.len() {
            return false;
        }
        let mut used = vec![false; other.eigenvalues.len()];
        'outer: for (lambda, mu) in &self.eigenvalues {
            for (i, (l2, m2)) in other.eigenvalues.iter().enumerate() {
                if !used[i] && mu == m2 && (lambda - l2).abs() <= tol {
                    used[i] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    fn sorted_canonical(mut self) -> Self {
        self.eigenvalues
            .sort_by(|a, b| b.1.cmp(&a.1).then(a.0.total_cmp(&b.0)));
        self
    }
}

/// Spectrum of `J ∘ R(π)` with the default Jordan tolerance.
pub fn spectrum_of_jr(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    plane: &OrientedPlane,
) -> Result<SpectrumSpec> {
    spectrum_of_jr_with_tol(r, j, plane, DEFAULT_JORDAN_TOL)
}

pub fn spectrum_of_jr_with_tol(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    plane: &OrientedPlane,
    tol: f64,
) -> Result<SpectrumSpec> {
    if !plane.is_complex_line {
        return Err(Error::NotComplexLine(f64::NAN));
    }
    let op = curvature_operator(r, plane)?;
    let jm = j.map();
    let jr = jm * &op;
    let inv = jordan_invariants(&jr, tol)?;
    let m = jr.dim();
    let scale = inv.scale.max(f64::MIN_POSITIVE);
    let mut eigenvalues = Vec::with_capacity(inv.clusters.len());
    for cluster in &inv.clusters {
        let lambda = cluster.eigenvalue;
        if lambda.im != 0.0 {
            return Err(Error::Structural(format!(
                "non-real eigenvalue {} + {}i",
                lambda.re, lambda.im
            )));
        }
        if cluster.multiplicity % 2 != 0 {
            return Err(Error::Structural(format!(
                "eigenvalue {} has odd real multiplicity {}",
                lambda.re, cluster.multiplicity
            )));
        }
        // range (JR - λ)^μ is the sum of the other generalised eigenspaces;
        // all of these ranges are J-invariant iff every generalised
        // eigenspace is.
        let shifted = jr.matrix() - DMatrix::identity(m, m) * lambda.re;
        let range = power_range(&shifted, cluster.multiplicity, tol * scale);
        let kernel_dim = m - range.ncols();
        if kernel_dim != cluster.multiplicity {
            return Err(Error::Structural(format!(
                "generalised eigenspace of {} has dimension {} but multiplicity {}",
                lambda.re, kernel_dim, cluster.multiplicity
            )));
        }
        let j_range = jm.matrix() * &range;
        let residual = &j_range - &range * (range.transpose() * &j_range);
        let leak = residual.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if leak > tol.sqrt() {
            return Err(Error::Structural(format!(
                "generalised eigenspace of {} is not J-invariant (leak {leak:.2e})",
                lambda.re
            )));
        }
        eigenvalues.push((lambda.re, cluster.multiplicity / 2));
    }
    Ok(SpectrumSpec::new(eigenvalues)?.sorted_canonical())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumModel {
    /// `c₀ R_Id + c₁ R_J` on `C^s`.
    ComplexPair,
    /// `c₀ R_Id + c₁ R_i + c₂ R_j + c₃ R_k` on `C^{2s}`, `J = i`.
    Quaternionic,
}

impl SpectrumModel {
    fn name(self) -> &'static str {
        match self {
            SpectrumModel::ComplexPair => "complex pair",
            SpectrumModel::Quaternionic => "quaternionic",
        }
    }
}

/// Coefficients realising `spec`.
///
/// On a unit complex line `π = span{x, Jx}` the model tensors give
///
/// * `c₀ R_Id + c₁ R_J`: `c₀ + 3c₁` on `π` (multiplicity 1) and `2c₁` on
///   `π^⊥` (multiplicity `s - 1`);
/// * `c₀ R_Id + c₁ R_i + c₂ R_j + c₃ R_k`: `c₀ + 3c₁` on `π`, `2c₁ - c₂ - c₃`
///   on `span{jx, kx}` and `2c₁` on the rest (multiplicity `2s - 2`).
///
/// The first listed eigenvalue (largest multiplicity) is matched to `2c₁`.
/// For the quaternionic model `c₂ + c₃` is fixed and `c₃ = 0` is chosen.
pub fn solve_constants(spec: &SpectrumSpec, model: SpectrumModel) -> Result<Vec<f64>> {
    let unrealizable = |reason: String| Error::UnrealizableSpectrum {
        model: model.name(),
        reason,
    };
    let ev = &spec.eigenvalues;
    match model {
        SpectrumModel::ComplexPair => {
            if ev.len() != 2 || ev[1].1 != 1 {
                return Err(unrealizable(format!(
                    "needs exactly two eigenvalues with the second of multiplicity 1, got {ev:?}"
                )));
            }
            let c1 = ev[0].0 / 2.0;
            let c0 = ev[1].0 - 3.0 * c1;
            Ok(vec![c0, c1])
        }
        SpectrumModel::Quaternionic => {
            if !spec.real_dim().is_multiple_of(4) {
                return Err(unrealizable(format!(
                    "real dimension {} is not divisible by 4",
                    spec.real_dim()
                )));
            }
            let c1 = ev[0].0 / 2.0;
            match ev.as_slice() {
                [(_, mu0), (l1, 1)] if *mu0 >= 1 => {
                    // ℓ = 1, μ₁ = 1: the span{jx,kx} eigenvalue joins λ₀.
                    let c0 = l1 - 3.0 * c1;
                    Ok(vec![c0, c1, 2.0 * c1 - ev[0].0, 0.0])
                }
                [(_, mu0), (l1, 2)] if *mu0 >= 2 => {
                    let c0 = l1 - 3.0 * c1;
                    Ok(vec![c0, c1, 2.0 * c1 - l1, 0.0])
                }
                [(_, mu0), (l1, 1), (l2, 1)] if *mu0 >= 1 => {
                    let c0 = l1 - 3.0 * c1;
                    Ok(vec![c0, c1, 2.0 * c1 - l2, 0.0])
                }
                _ => Err(unrealizable(format!(
                    "expected two eigenvalues with μ₁ ≤ 2 or three with μ₁ = μ₂ = 1, got {ev:?}"
                ))),
            }
        }
    }
}

/// `c₀ R_Id + c₁ R_J`.
pub fn complex_pair_tensor(j: &ComplexStructure, c: &[f64]) -> Result<CurvatureTensor> {
    let space = j.space();
    let r_id = CurvatureTensor::from_self_adjoint(space, &LinearMap::identity(space.dim()))?;
    let r_j = CurvatureTensor::from_skew_adjoint(space, j.map())?;
    CurvatureTensor::combine(&[(c[0], &r_id), (c[1], &r_j)])
}

/// `c₀ R_Id + c₁ R_i + c₂ R_j + c₃ R_k`.
pub fn quaternionic_tensor(h: &QuaternionStructure, c: &[f64]) -> Result<CurvatureTensor> {
    let space = h.space();
    let r_id = CurvatureTensor::from_self_adjoint(space, &LinearMap::identity(space.dim()))?;
    let r_i = CurvatureTensor::from_skew_adjoint(space, h.i())?;
    let r_j = CurvatureTensor::from_skew_adjoint(space, h.j())?;
    let r_k = CurvatureTensor::from_skew_adjoint(space, h.k())?;
    CurvatureTensor::combine(&[(c[0], &r_id), (c[1], &r_i), (c[2], &r_j), (c[3], &r_k)])
}

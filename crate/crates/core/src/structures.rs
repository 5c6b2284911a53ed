//! Pseudo-Hermitian complex structures, skew-adjoint quaternion structures and
//! the admissibility predicates for generators `φ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan_ip::{sample_planes, CausalType, PlaneKind};
use crate::linalg::{numeric_rank, rank_above, singular_values, BilinearSpace, LinearMap};

/// An isometry `J` with `J² = -Id`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    space: BilinearSpace,
    j: LinearMap,
}

impl ComplexStructure {
    pub fn new(space: &BilinearSpace, j: LinearMap) -> Result<Self> {
        space.check_map(&j)?;
        if !space.p().is_multiple_of(2) || !space.q().is_multiple_of(2) {
            return Err(Error::UnsupportedSignature {
                p: space.p(),
                q: space.q(),
                what: "pseudo-Hermitian complex structure",
                reason: "both p and q must be even",
            });
        }
        let tol = space.tol();
        let m = space.dim();
        let minus_id = LinearMap::identity(m).scale(-1.0);
        let (sq, _, _) = j.square().max_abs_diff(&minus_id);
        if sq > tol {
            return Err(Error::InvalidComplexStructure(format!(
                "J² deviates from -Id by {sq:e}"
            )));
        }
        let (iso, _, _) = (&space.adjoint(&j)? * &j).max_abs_diff(&LinearMap::identity(m));
        if iso > tol {
            return Err(Error::InvalidComplexStructure(format!(
                "J*J deviates from Id by {iso:e}"
            )));
        }
        Ok(Self { space: *space, j })
    }

    pub fn space(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn map(&self) -> &LinearMap {
        &self.j
    }
}

/// Left multiplication by the quaternion units, `ij = k`, each unit
/// skew-adjoint and isometric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionStructure {
    space: BilinearSpace,
    i: LinearMap,
    j: LinearMap,
    k: LinearMap,
}

impl QuaternionStructure {
    pub fn new(space: &BilinearSpace, i: LinearMap, j: LinearMap, k: LinearMap) -> Result<Self> {
        let tol = space.tol();
        let m = space.dim();
        let id = LinearMap::identity(m);
        let minus_id = id.scale(-1.0);
        let close = |a: &LinearMap, b: &LinearMap| a.max_abs_diff(b).0 <= tol;
        for (name, u) in [("i", &i), ("j", &j), ("k", &k)] {
            space.check_map(u)?;
            if !close(&u.square(), &minus_id) {
                return Err(Error::InvalidQuaternionStructure(format!("{name}² ≠ -Id")));
            }
            if !space.is_skew_adjoint(u, tol)? {
                return Err(Error::InvalidQuaternionStructure(format!(
                    "{name} is not skew-adjoint"
                )));
            }
        }
        let relations = [
            ("ij = k", &i * &j, k.clone()),
            ("jk = i", &j * &k, i.clone()),
            ("ki = j", &k * &i, j.clone()),
            ("ji = -k", &j * &i, k.scale(-1.0)),
        ];
        for (name, lhs, rhs) in relations {
            if !close(&lhs, &rhs) {
                return Err(Error::InvalidQuaternionStructure(format!("{name} fails")));
            }
        }
        // Skew-adjoint with square -Id already forces u*u = Id.
        Ok(Self {
            space: *space,
            i,
            j,
            k,
        })
    }

    pub fn space(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn i(&self) -> &LinearMap {
        &self.i
    }

    pub fn j(&self) -> &LinearMap {
        &self.j
    }

    pub fn k(&self) -> &LinearMap {
        &self.k
    }

    /// The complex structure `J = i`.
    pub fn as_complex_structure(&self) -> ComplexStructure {
        ComplexStructure {
            space: self.space,
            j: self.i.clone(),
        }
    }
}

/// Rotation blocks `[[0,-1],[1,0]]` on consecutive coordinate pairs. With `p`
/// even, every block stays inside one causal type.
pub fn standard_complex_structure(space: &BilinearSpace) -> Result<ComplexStructure> {
    if !space.p().is_multiple_of(2) || !space.q().is_multiple_of(2) {
        return Err(Error::UnsupportedSignature {
            p: space.p(),
            q: space.q(),
            what: "pseudo-Hermitian complex structure",
            reason: "both p and q must be even",
        });
    }
    let m = space.dim();
    let mut j = nalgebra::DMatrix::zeros(m, m);
    for b in (0..m).step_by(2) {
        j[(b + 1, b)] = 1.0;
        j[(b, b + 1)] = -1.0;
    }
    ComplexStructure::new(space, LinearMap::from_matrix(j)?)
}

// Left multiplication on H = span{1, i, j, k}, columns are images of 1, i, j, k.
const QUAT_I: [[f64; 4]; 4] = [
    [0.0, -1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
];
const QUAT_J: [[f64; 4]; 4] = [
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
];
const QUAT_K: [[f64; 4]; 4] = [
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
];

fn block_diagonal(m: usize, block: &[[f64; 4]; 4]) -> LinearMap {
    let mut out = nalgebra::DMatrix::zeros(m, m);
    for base in (0..m).step_by(4) {
        for r in 0..4 {
            for c in 0..4 {
                out[(base + r, base + c)] = block[r][c];
            }
        }
    }
    LinearMap::from_matrix(out).expect("square by construction")
}

pub fn standard_quaternion_structure(space: &BilinearSpace) -> Result<QuaternionStructure> {
    let m = space.dim();
    if !m.is_multiple_of(4) || !space.p().is_multiple_of(4) {
        return Err(Error::UnsupportedSignature {
            p: space.p(),
            q: space.q(),
            what: "standard quaternion structure",
            reason: "p and q must both be divisible by 4",
        });
    }
    QuaternionStructure::new(
        space,
        block_diagonal(m, &QUAT_I),
        block_diagonal(m, &QUAT_J),
        block_diagonal(m, &QUAT_K),
    )
}

/// Self-adjoint, `J`-commuting `φ` with `φ² = 0` and `ker φ = range φ` on
/// signature `(s,s)`, `s` even.
///
/// With timelike `t_a` and spacelike `s_a`, the null vectors
/// `u_a = (t_a + s_a)/√2` span a totally isotropic `J`-invariant subspace and
/// `φ = -Σ_a u_a (u_a, ·)` maps `(t_a - s_a)/√2 ↦ u_a`.
pub fn nilpotent_null_pair(space: &BilinearSpace) -> Result<LinearMap> {
    let (p, q) = (space.p(), space.q());
    if p != q || p % 2 != 0 {
        return Err(Error::UnsupportedSignature {
            p,
            q,
            what: "nilpotent_null_pair generator",
            reason: "requires p = q with p even",
        });
    }
    let m = space.dim();
    let mut phi = nalgebra::DMatrix::zeros(m, m);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for a in 0..p {
        let mut u = crate::linalg::Vector::zeros(m);
        u[a] = h;
        u[p + a] = h;
        let lowered = space.lower(&u);
        phi -= &u * lowered.transpose();
    }
    LinearMap::from_matrix(phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjointClass {
    SelfAdjointCommuting,
    SelfAdjointAnticommuting,
    SkewAdjointAnticommuting,
    NotAdmissible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareType {
    PlusId,
    MinusId,
    NilpotentKernelEqualsRange,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub class: AdjointClass,
    pub square_type: SquareType,
    pub admissible: bool,
    pub self_adjoint_defect: f64,
    pub skew_adjoint_defect: f64,
    /// `max |φJ - Jφ|`.
    pub commutator: f64,
    /// `max |φJ + Jφ|`.
    pub anticommutator: f64,
    pub rank: usize,
}

pub fn check_admissible(
    phi: &LinearMap,
    j: &ComplexStructure,
    tol: f64,
) -> Result<AdmissibilityReport> {
    let space = j.space();
    space.check_map(phi)?;
    let m = space.dim();
    let jm = j.map();
    let lin_tol = tol * phi.max_abs().max(1.0);
    let quad_tol = tol * phi.max_abs().powi(2).max(1.0);

    let self_adjoint_defect = space.adjoint_defect(phi, 1.0)?.0;
    let skew_adjoint_defect = space.adjoint_defect(phi, -1.0)?.0;
    let pj = phi * jm;
    let jp = jm * phi;
    let commutator = (&pj - &jp).max_abs();
    let anticommutator = (&pj + &jp).max_abs();

    let class = if self_adjoint_defect <= lin_tol && commutator <= lin_tol {
        AdjointClass::SelfAdjointCommuting
    } else if self_adjoint_defect <= lin_tol && anticommutator <= lin_tol {
        AdjointClass::SelfAdjointAnticommuting
    } else if skew_adjoint_defect <= lin_tol && anticommutator <= lin_tol {
        AdjointClass::SkewAdjointAnticommuting
    } else {
        AdjointClass::NotAdmissible
    };

    let square = phi.square();
    let id = LinearMap::identity(m);
    let rank = numeric_rank(phi, tol);
    let square_type = if square.max_abs_diff(&id).0 <= quad_tol {
        SquareType::PlusId
    } else if square.max_abs_diff(&id.scale(-1.0)).0 <= quad_tol {
        SquareType::MinusId
    } else if m.is_multiple_of(2) && square.max_abs() <= quad_tol && rank == m / 2 && {
        // range φ ⊆ ker φ with rank m/2: stacking φ² columns adds nothing.
        let stacked = nalgebra::DMatrix::from_fn(m, 2 * m, |r, c| {
            if c < m {
                phi.matrix()[(r, c)]
            } else {
                square.matrix()[(r, c - m)]
            }
        });
        rank_above(&stacked, tol * phi.frobenius_norm()) == m / 2
    } {
        SquareType::NilpotentKernelEqualsRange
    } else {
        SquareType::None
    };

    Ok(AdmissibilityReport {
        class,
        square_type,
        admissible: class != AdjointClass::NotAdmissible && square_type != SquareType::None,
        self_adjoint_defect,
        skew_adjoint_defect,
        commutator,
        anticommutator,
        rank,
    })
}

/// How the `φ₁π ∩ φ₂π = {0}` condition is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneSampler {
    pub lines: usize,
    pub seed: u64,
}

impl Default for PlaneSampler {
    fn default() -> Self {
        Self {
            lines: 100,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionCheck {
    pub lines_sampled: usize,
    /// Smallest observed `dim(φ₁π + φ₂π)`.
    pub min_rank: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub first: AdmissibilityReport,
    pub second: AdmissibilityReport,
    /// `max |φ₁J - Jφ₁|`.
    pub first_commutator: f64,
    /// `max |φ₂J + Jφ₂|`.
    pub second_anticommutator: f64,
    /// `max |φ₁*φ₂ + φ₂*φ₁|`.
    pub cross_adjoint: f64,
    pub intersection: Option<IntersectionCheck>,
    pub admissible: bool,
}

pub fn check_admissible_pair(
    phi1: &LinearMap,
    phi2: &LinearMap,
    j: &ComplexStructure,
    sampler: PlaneSampler,
    tol: f64,
) -> Result<PairReport> {
    let first = check_admissible(phi1, j, tol)?;
    let second = check_admissible(phi2, j, tol)?;
    for (name, report) in [("first", &first), ("second", &second)] {
        if !report.admissible {
            return Err(Error::NotAdmissible(format!(
                "{name} map: class {:?}, square type {:?}",
                report.class, report.square_type
            )));
        }
    }
    let space = j.space();
    let jm = j.map();
    let scale = phi1.max_abs().max(phi2.max_abs()).max(1.0);
    let first_commutator = (&(phi1 * jm) - &(jm * phi1)).max_abs();
    let second_anticommutator = (&(phi2 * jm) + &(jm * phi2)).max_abs();
    let cross_adjoint =
        (&(&space.adjoint(phi1)? * phi2) + &(&space.adjoint(phi2)? * phi1)).max_abs();
    let mut admissible = first_commutator <= tol * scale
        && second_anticommutator <= tol * scale
        && cross_adjoint <= tol * scale * scale;

    let intersection = if first.square_type == SquareType::NilpotentKernelEqualsRange
        && second.square_type == SquareType::NilpotentKernelEqualsRange
    {
        let check = sample_intersections(phi1, phi2, j, sampler, tol)?;
        admissible &= check.min_rank == 4;
        Some(check)
    } else {
        None
    };

    Ok(PairReport {
        first,
        second,
        first_commutator,
        second_anticommutator,
        cross_adjoint,
        intersection,
        admissible,
    })
}

fn sample_intersections(
    phi1: &LinearMap,
    phi2: &LinearMap,
    j: &ComplexStructure,
    sampler: PlaneSampler,
    tol: f64,
) -> Result<IntersectionCheck> {
    let space = j.space();
    let mut kinds = Vec::new();
    if space.q() >= 2 {
        kinds.push(CausalType::Spacelike);
    }
    if space.p() >= 2 {
        kinds.push(CausalType::Timelike);
    }
    let per_kind = sampler.lines.div_ceil(kinds.len().max(1));
    let mut min_rank = 4;
    let mut sampled = 0;
    for (offset, causal) in kinds.into_iter().enumerate() {
        let planes = sample_planes(
            space,
            PlaneKind::ComplexLine(j, causal),
            per_kind,
            sampler.seed.wrapping_add(offset as u64),
        )?;
        for plane in planes {
            let cols = [
                phi1.apply(&plane.x)?,
                phi1.apply(&plane.y)?,
                phi2.apply(&plane.x)?,
                phi2.apply(&plane.y)?,
            ];
            let stacked = nalgebra::DMatrix::from_columns(&cols);
            let sv = singular_values(&stacked);
            let top = sv.iter().copied().fold(0.0, f64::max);
            let rank = sv.iter().filter(|v| **v > tol * top).count();
            min_rank = min_rank.min(rank);
            sampled += 1;
        }
    }
    Ok(IntersectionCheck {
        lines_sampled: sampled,
        min_rank,
        seed: sampler.seed,
    })
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BilinearSpace, PlaneClass, Vector};
use crate::structures::ComplexStructure;

/// Nondegenerate causal types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalType {
    Spacelike,
    Timelike,
    Mixed,
}

impl CausalType {
    pub const ALL: [CausalType; 3] = [CausalType::Spacelike, CausalType::Timelike, CausalType::Mixed];

    pub fn class(self) -> PlaneClass {
        match self {
            CausalType::Spacelike => PlaneClass::Spacelike,
            CausalType::Timelike => PlaneClass::Timelike,
            CausalType::Mixed => PlaneClass::Mixed,
        }
    }

    pub fn name(self) -> &'static str {
        self.class().name()
    }

    /// Whether `R^(p,q)` contains a 2-plane of this type.
    pub fn realizable_plane(self, space: &BilinearSpace) -> bool {
        match self {
            CausalType::Spacelike => space.q() >= 2,
            CausalType::Timelike => space.p() >= 2,
            CausalType::Mixed => space.p() >= 1 && space.q() >= 1,
        }
    }

    /// Whether a nondegenerate complex line of this type exists. Complex
    /// lines span `{x, Jx}` with `(x,Jx) = 0` and `(Jx,Jx) = (x,x)`, so they
    /// are never mixed.
    pub fn realizable_complex_line(self, space: &BilinearSpace) -> bool {
        match self {
            CausalType::Mixed => false,
            other => other.realizable_plane(space),
        }
    }
}

/// An oriented 2-plane with its ordered basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPlane {
    pub x: Vector,
    pub y: Vector,
    pub class: PlaneClass,
    pub is_complex_line: bool,
}

impl OrientedPlane {
    pub fn new(space: &BilinearSpace, x: Vector, y: Vector) -> Result<Self> {
        let class = space.classify_plane(&x, &y)?;
        Ok(Self {
            x,
            y,
            class,
            is_complex_line: false,
        })
    }

    pub fn basis(&self) -> PlaneBasis {
        PlaneBasis {
            x: self.x.iter().copied().collect(),
            y: self.y.iter().copied().collect(),
        }
    }

    /// `|(x,x)(y,y) - (x,y)²|`.
    pub fn gram_determinant(&self, space: &BilinearSpace) -> Result<f64> {
        Ok(space.plane_determinant(&self.x, &self.y)?.0.abs())
    }
}

/// Serializable copy of a plane's basis, used in witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneBasis {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// `span{x, Jx}` oriented by `(x, Jx)`.
pub fn complex_line(j: &ComplexStructure, x: &Vector) -> Result<OrientedPlane> {
    let space = j.space();
    let xx = space.inner(x, x)?;
    if xx.abs() <= space.tol() * x.norm_squared() {
        return Err(Error::NullVector(xx.abs()));
    }
    let jx = j.map().apply(x)?;
    Ok(OrientedPlane {
        x: x.clone(),
        y: jx,
        class: if xx > 0.0 {
            PlaneClass::Spacelike
        } else {
            PlaneClass::Timelike
        },
        is_complex_line: true,
    })
}

#[derive(Debug, Clone, Copy)]
pub enum PlaneKind<'a> {
    ComplexLine(&'a ComplexStructure, CausalType),
    RealPlane(CausalType),
}

const DRAWS_PER_PLANE: usize = 1000;

/// Draws `n` planes of the requested kind by rejection sampling from a
/// seeded ChaCha stream.
///
/// Candidates are standard normal vectors whose coordinates of the opposite
/// causal type are damped by a uniform factor in `(0, 1]`; every plane of the
/// requested type still has positive density.
pub fn sample_planes(
    space: &BilinearSpace,
    kind: PlaneKind<'_>,
    n: usize,
    seed: u64,
) -> Result<Vec<OrientedPlane>> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let causal = match kind {
        PlaneKind::ComplexLine(j, causal) => {
            if !j.space().same_signature(space) {
                return Err(Error::SpaceMismatch(
                    space.p(),
                    space.q(),
                    j.space().p(),
                    j.space().q(),
                ));
            }
            if !causal.realizable_complex_line(space) {
                return Err(Error::UnrealizableCausalType {
                    causal: causal.name(),
                    p: space.p(),
                    q: space.q(),
                });
            }
            causal
        }
        PlaneKind::RealPlane(causal) => {
            if !causal.realizable_plane(space) {
                return Err(Error::UnrealizableCausalType {
                    causal: causal.name(),
                    p: space.p(),
                    q: space.q(),
                });
            }
            causal
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = DRAWS_PER_PLANE * n;
    let mut planes = Vec::with_capacity(n);
    let mut draws = 0;
    while planes.len() < n {
        if draws >= budget {
            return Err(Error::SamplingBudgetExceeded { draws, wanted: n });
        }
        draws += 1;
        let candidate = match kind {
            PlaneKind::ComplexLine(j, _) => {
                let x = draw(space, causal, &mut rng);
                let xx = space.inner_unchecked(&x, &x);
                let wanted_sign = if causal == CausalType::Spacelike { 1.0 } else { -1.0 };
                if xx * wanted_sign <= space.tol() * x.norm_squared() {
                    continue;
                }
                let line = complex_line(j, &(x / xx.abs().sqrt()))?;
                // det = (x,x)^2 here, so this is stricter than the sign test.
                let (det, threshold) = space.plane_determinant(&line.x, &line.y)?;
                if det.abs() <= threshold {
                    continue;
                }
                line
            }
            PlaneKind::RealPlane(_) => {
                let x = draw(space, causal, &mut rng);
                let y = draw(space, causal, &mut rng);
                let plane = OrientedPlane::new(space, x, y)?;
                if plane.class != causal.class() {
                    continue;
                }
                plane
            }
        };
        planes.push(candidate);
    }
    Ok(planes)
}

fn draw(space: &BilinearSpace, causal: CausalType, rng: &mut ChaCha8Rng) -> Vector {
    let damp: f64 = 1.0 - rng.random::<f64>();
    Vector::from_fn(space.dim(), |i, _| {
        let g: f64 = StandardNormal.sample(rng);
        let timelike = i < space.p();
        let damped = match causal {
            CausalType::Spacelike => timelike,
            CausalType::Timelike => !timelike,
            CausalType::Mixed => false,
        };
        if damped {
            g * damp
        } else {
            g
        }
    })
}

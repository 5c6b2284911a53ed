//! Random generators `φ` with prescribed adjointness and commutation with `J`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::linalg::{BilinearSpace, LinearMap};
use crate::structures::ComplexStructure;

pub fn random_map<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> LinearMap {
    let m = nalgebra::DMatrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    LinearMap::from_matrix(m).expect("square")
}

/// `(A + εA*)/2` for a Gaussian `A`.
pub fn random_adjoint_class<R: Rng + ?Sized>(
    space: &BilinearSpace,
    sign: f64,
    rng: &mut R,
) -> Result<LinearMap> {
    let a = random_map(space.dim(), rng);
    let adj = space.adjoint(&a)?;
    Ok((&a + &adj.scale(sign)).scale(0.5))
}

pub fn random_self_adjoint<R: Rng + ?Sized>(space: &BilinearSpace, rng: &mut R) -> Result<LinearMap> {
    random_adjoint_class(space, 1.0, rng)
}

pub fn random_skew_adjoint<R: Rng + ?Sized>(space: &BilinearSpace, rng: &mut R) -> Result<LinearMap> {
    random_adjoint_class(space, -1.0, rng)
}

/// Projection onto `{φ : Jφ = ϱφJ}`: `(φ - ϱ JφJ)/2`.
///
/// `J` is an isometry, so `(JφJ)* = JφJ` up to the sign of `φ*`, and the
/// projection preserves self- and skew-adjointness.
pub fn project_commutation(phi: &LinearMap, j: &ComplexStructure, rho: f64) -> LinearMap {
    let jm = j.map();
    let jphij = &(jm * phi) * jm;
    (phi - &jphij.scale(rho)).scale(0.5)
}

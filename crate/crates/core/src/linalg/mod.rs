//! Inner products of arbitrary signature, adjoints, plane classification and
//! Jordan-structure invariants.

mod jordan;
mod map;
mod space;

pub use jordan::{
    eigenvalues, jordan_equivalent, jordan_invariants, numeric_rank, singular_values,
    EigenCluster, JordanInvariants, DEFAULT_JORDAN_TOL,
};
pub(crate) use jordan::{power_range, rank_above};
pub use map::{LinearMap, Vector};
pub use space::{basis_vector, BilinearSpace, PlaneClass, DEFAULT_TOL};

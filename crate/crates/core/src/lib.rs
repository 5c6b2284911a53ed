//! Algebraic curvature tensors over pseudo-Euclidean spaces `R^(p,q)`.
//!
//! * [`linalg`]: signature-`(p,q)` inner products, adjoints, plane
//!   classification and Jordan-structure fingerprints.
//! * [`curvature`]: the dense 4-tensor type, the `R_φ` constructors and
//!   identity checks (curvature symmetries, `J*R = R`, the Gray identity).
//! * [`structures`]: complex and quaternion structures, admissible generators.
//! * [`jordan_ip`]: the skew-symmetric curvature operator `R(π)`, plane
//!   sampling, Jordan-IP checks and spectra of `J R(π)`.
//! * [`cli`]: config-driven check runs with JSON reports.

pub mod cli;
pub mod curvature;
pub mod error;
pub mod generators;
pub mod jordan_ip;
pub mod linalg;
pub mod structures;

pub use curvature::CurvatureTensor;
pub use error::{Error, Result};
pub use linalg::{BilinearSpace, LinearMap, Vector};
pub use structures::{ComplexStructure, QuaternionStructure};

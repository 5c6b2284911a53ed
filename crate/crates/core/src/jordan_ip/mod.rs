//! The skew-symmetric curvature operator `R(π)`, Grassmannian sampling,
//! Jordan-IP verification and spectra of `J R(π)`.

mod operator;
mod planes;
mod spectrum;

pub use operator::{
    check_almost_complex, check_jordan_ip, check_jordan_ip_real, curvature_operator,
    skew_adjoint_defect, CommutationReport, ConstancyWitness, JordanIpReport, PlaneDomain,
    TypeConstancy,
};
pub use planes::{complex_line, sample_planes, CausalType, OrientedPlane, PlaneBasis, PlaneKind};
pub use spectrum::{
    complex_pair_tensor, quaternionic_tensor, solve_constants, spectrum_of_jr,
    spectrum_of_jr_with_tol, SpectrumModel, SpectrumSpec,
};

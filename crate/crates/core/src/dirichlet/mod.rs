//! Dirichlet characters, their L-functions and functional equations.

mod character;
mod functional;
mod lseries;

pub use character::{
    enumerate_characters, least_kronecker_nonresidue, least_nonresidue, root_of_unity,
    DirichletCharacter, DirichletGroup,
};
pub use functional::{
    convexity_bound_check, convexity_family_check, family_residuals,
    functional_equation_residual, gamma_factor, gamma_factor_bound_check, gauss_sum,
    root_number, twist_conductor_bound, AnalyticConductor, ConvexityReport, FeResidual,
    GammaBoundReport, TwistBound,
};
pub use lseries::{
    direct_terms, l_value, zeta, CharacterFamily, PartialZetas, ResidueSums, MAX_IMAG_PART,
    MIN_REAL_PART,
};

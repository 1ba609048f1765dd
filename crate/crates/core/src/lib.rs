//! Discrete semilinear heat equations `u_t = Δ_ω u + f(u)` on finite weighted
//! networks with Dirichlet boundary, together with a blow-up-aware integrator.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod functionals;
pub mod network;
pub mod nonlinearity;
pub mod operators;
pub mod quadrature;
pub mod random;
pub mod solver;
pub mod spectral;

pub use error::{Error, NetworkError, Result};
pub use functionals::{
    concavity_certificate, concavity_report, energy_j, identity_residuals, ConcavityReport,
    ISample, IdentityResiduals,
};
pub use network::{builders, Network, Role};
pub use nonlinearity::{
    check_condition, find_initial_data, osgood_test, superlinear_minorant, Condition,
    ConditionCParams, ConditionCertificate, InitialData, Minorant, Nonlinearity, OsgoodVerdict,
};
pub use operators::{dirichlet_energy, laplacian, pairing_identity_residual, NodeField};
pub use solver::{
    compare_runs, integrate, picard_local, ComparisonReport, Outcome, PicardSolution, SolveConfig,
    Trajectory,
};
pub use spectral::{first_eigenpair, EigenPair};

//! Fourier analysis of Boolean functions on `{1,-1}` and the label-cover conditions for 3LIN2.

mod boolean;
mod hastad;

pub use boolean::{
    chi_value, fold, fourier_expand, fourier_expand_bounded, is_representative, lambda_dist, noise_expectation, oddim, representative,
    FourierExpansion, PmFunction, FOURIER_MAX_ARITY,
};
pub use hastad::{
    auxiliary_bound, build_phi_pi, check_scan_size, glc_space, phi_assignment, phi_closed_form, phi_direct, phi_variables,
    verify_glc_conditions, verify_map, xi_from_lambda, FunctionTable, GlcReport, GlcViolation, HastadConfig, LambdaChoice, MapReport,
    PAIR_GUARD, PHI_GUARD,
};

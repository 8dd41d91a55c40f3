//! Special-function substrate.

mod bessel;
mod gamma;
mod jacobi;
mod quadrature;

pub use bessel::{bessel_first_zero, bessel_j, mehler_heine_residual, BESSEL_MAX_ARG, BESSEL_MAX_ORDER};
pub use gamma::{beta, incomplete_beta, log_gamma, regularized_incomplete_beta};
pub use jacobi::{
    euler_rayleigh_bound, jacobi_at_one, jacobi_derivative, jacobi_eval, jacobi_norm_sq, jacobi_sequence, largest_zero,
    JacobiIndex, ZeroResult,
};
pub use quadrature::{gauss_jacobi_rule, jacobi_weight_mass, weighted_tail_rule, QuadratureRule};

pub(crate) use gamma::{incomplete_beta_unchecked, ln_beta, ln_gamma, regularized_unchecked};
pub(crate) use jacobi::{eval as jacobi_unchecked, ln_at_one};
pub(crate) use quadrature::tridiagonal_eigenvalues;

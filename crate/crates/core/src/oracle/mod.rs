//! Independent numerical checks: a brute-force extremal solver for `T₂`,
//! the discretized concentration operator on `S²`, the zonal convolution
//! rule, the ordering of normalized Jacobi polynomials and the convergence
//! of `A_K`.

mod checks;
mod extremal;
mod spectral;

pub use checks::{convolution_check, limit_check, ordering_check, ordering_margin, LimitCheck, LimitRow};
pub use extremal::{default_grid_size, extremal_bruteforce, ExtremalResult, ProfileSource};
pub use spectral::{
    concentration_eigenvalue, sphere_kernel, sphere_quadrature, SpectralResult, SphereQuadrature, DENSE_NODE_LIMIT,
};

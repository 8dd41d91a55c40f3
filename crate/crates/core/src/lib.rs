//! Large-sieve concentration bounds for finite expansions of spherical
//! harmonics on compact two-point homogeneous spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Jacobi polynomials, Gauss–Jacobi quadrature, log-gamma,
//!   incomplete beta and Bessel functions.
//! * [`manifold`]: the five families of two-point homogeneous spaces and their
//!   derived constants (Jacobi parameters, eigenspace dimensions, cap measures).
//! * [`sieve`]: the sharp cap constant `T₂(K, δ)`, the Nyquist constant `A_K`,
//!   its `K → ∞` limit, the general-measure bound and the `L^p` bound.
//! * [`region`]: cap-union regions on `S^d` and `P^d(ℝ)`, cap sampling and the
//!   maximum Nyquist density estimator.
//! * [`oracle`]: independent checks (brute-force extremal problem, discretized
//!   concentration operator on `S²`, convolution theorem, ordering lemma).
//! * [`verify`]: named verification suites producing a JSON report.
//! * [`report`]: serializable reports for the command-line tool.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants keep every digit of their source
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod manifold;
pub mod oracle;
pub mod region;
pub mod report;
pub mod sieve;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use manifold::{make_space, Family, SpaceParams};

/// Crate version embedded in every serialized report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

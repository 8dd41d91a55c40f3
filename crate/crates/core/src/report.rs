//! Serializable reports for the command-line front end.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::manifold::{cap_measure, SpaceParams};
use crate::region::{max_nyquist_density_with, DensityEstimate, Region, SearchConfig};
use crate::sieve::{a_constant, a_infinity, nyquist_zero, t2_constant};
use crate::specfun::{bessel_first_zero, euler_rayleigh_bound, largest_zero};

/// Largest zero of `P_K^{(α,β)}` with its bound and asymptotic estimate.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZerosReport {
    pub version: String,
    pub space: String,
    pub K: usize,
    pub alpha: f64,
    pub beta: f64,
    pub t_KK: f64,
    pub theta_K1: f64,
    /// `1 − 2(α+1)/(K(K+α+β+1))`, an upper bound on `t_KK`.
    pub euler_rayleigh_bound: f64,
    /// `1 − j_{α,1}²/(2K²)`
    pub asymptotic: f64,
}

pub fn zeros_report(space: &SpaceParams, k: usize) -> Result<ZerosReport> {
    space.check_index(k)?;
    let t_kk = nyquist_zero(space, k)?;
    let idx = space.jacobi(k);
    let zero = largest_zero(idx)?;
    let j = bessel_first_zero(space.alpha)?;
    let kf = k as f64;
    Ok(ZerosReport {
        version: crate::VERSION.to_string(),
        space: space.id.clone(),
        K: k,
        alpha: space.alpha,
        beta: space.beta,
        t_KK: t_kk,
        theta_K1: zero.theta_n1,
        euler_rayleigh_bound: euler_rayleigh_bound(idx),
        asymptotic: 1.0 - j * j / (2.0 * kf * kf),
    })
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub version: String,
    pub space: String,
    pub alpha: f64,
    pub j_alpha_1: f64,
    pub A_infinity: f64,
}

pub fn limit_report(space: &SpaceParams) -> Result<LimitReport> {
    Ok(LimitReport {
        version: crate::VERSION.to_string(),
        space: space.id.clone(),
        alpha: space.alpha,
        j_alpha_1: bessel_first_zero(space.alpha)?,
        A_infinity: a_infinity(space)?,
    })
}

/// Density estimate together with the resulting concentration bound
/// `A_K · ρ`, or `A_K · (ρ + 3σ)` with the margin.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub version: String,
    pub region: String,
    pub estimate: DensityEstimate,
    pub A_K: f64,
    pub margin: bool,
    pub bound: f64,
}

pub fn density_report(
    region: &dyn Region,
    k: usize,
    n_per_center: usize,
    seed: u64,
    margin: bool,
) -> Result<DensityReport> {
    let estimate = max_nyquist_density_with(region, k, n_per_center, seed, &SearchConfig::default())?;
    let a_k = a_constant(region.space(), k)?;
    let rho = if margin {
        estimate.rho + 3.0 * estimate.std_error
    } else {
        estimate.rho
    };
    Ok(DensityReport {
        version: crate::VERSION.to_string(),
        region: region.summary(),
        estimate,
        A_K: a_k,
        margin,
        bound: a_k * rho,
    })
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub K: usize,
    pub t_KK: f64,
    /// `T₂(K, t_KK)`
    pub T2: f64,
    pub A_K: f64,
}

/// Rows for every `1 ≤ K ≤ k_max` in the index set.
pub fn constant_table(space: &SpaceParams, k_max: usize) -> Result<Vec<TableRow>> {
    space
        .indices_up_to(k_max)
        .filter(|&k| k >= 1)
        .map(|k| {
            let t = nyquist_zero(space, k)?;
            let t2 = t2_constant(space, k, t)?;
            Ok(TableRow {
                K: k,
                t_KK: t,
                T2: t2,
                A_K: cap_measure(space, t)? * t2,
            })
        })
        .collect()
}

//! Convolution, ordering and limit checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::spectral::sphere_quadrature;
use crate::error::{Error, Result};
use crate::manifold::SpaceParams;
use crate::sieve::{a_constant, a_infinity, nyquist_zero};
use crate::specfun::{gauss_jacobi_rule, jacobi_sequence, ln_at_one};

fn legendre_series(coeffs: &[f64], t: f64) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let p = jacobi_sequence(0.0, 0.0, coeffs.len() - 1, t);
    coeffs.iter().zip(&p).map(|(c, v)| c * v).sum()
}

/// Zonal coefficient `√(2k+1) · ½ ∫ F P_k` on `S²` from values on a
/// Gauss–Legendre rule.
fn sphere_zonal_coefficients(nodes: &[f64], weights: &[f64], values: &[f64], k_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; k_max + 1];
    for ((&t, &w), &f) in nodes.iter().zip(weights).zip(values) {
        let p = jacobi_sequence(0.0, 0.0, k_max, t);
        for (o, pk) in out.iter_mut().zip(&p) {
            *o += 0.5 * w * f * pk;
        }
    }
    out.iter_mut()
        .enumerate()
        .for_each(|(k, o)| *o *= ((2 * k + 1) as f64).sqrt());
    out
}

/// Maximum over `k ≤ K` of `|coeff(h ∗ g)(k) − d_k^{−1/2} ĥ(k,1) ĝ(k,1)|` on
/// `S²`, where `g(x, y) = G(⟨x,y⟩)`, `h(y) = H(⟨y, η⟩)`, and `G`, `H` are given
/// by Legendre coefficients (`G = Σ g_k P_k`). The convolution is integrated
/// on an `n_theta × 2n_theta` product rule and its zonal coefficients are
/// read off with `n_theta` Gauss–Legendre nodes.
pub fn convolution_check(k: usize, g: &[f64], h: &[f64], n_theta: usize) -> Result<f64> {
    if g.len() > k + 1 || h.len() > k + 1 {
        return Err(Error::precondition(
            "convolution_check",
            format!("G and H must have degree <= K = {k}"),
        ));
    }
    if n_theta < k + 1 {
        return Err(Error::precondition(
            "convolution_check",
            format!("n_theta = {n_theta} must be at least K+1 = {}", k + 1),
        ));
    }
    let quad = sphere_quadrature(n_theta, 2 * n_theta)?;
    let h_at_y: Vec<f64> = quad.points.iter().map(|y| legendre_series(h, y[2])).collect();

    let rule = gauss_jacobi_rule(0.0, 0.0, n_theta)?;
    let conv: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&s| {
            let x = [(1.0 - s * s).max(0.0).sqrt(), 0.0, s];
            quad.points
                .iter()
                .zip(&quad.weights)
                .zip(&h_at_y)
                .map(|((y, w), hy)| {
                    let t = (x[0] * y[0] + x[2] * y[2]).clamp(-1.0, 1.0);
                    w * hy * legendre_series(g, t)
                })
                .sum()
        })
        .collect();

    let g_vals: Vec<f64> = rule.nodes.iter().map(|&t| legendre_series(g, t)).collect();
    let h_vals: Vec<f64> = rule.nodes.iter().map(|&t| legendre_series(h, t)).collect();
    let c_conv = sphere_zonal_coefficients(&rule.nodes, &rule.weights, &conv, k);
    let c_g = sphere_zonal_coefficients(&rule.nodes, &rule.weights, &g_vals, k);
    let c_h = sphere_zonal_coefficients(&rule.nodes, &rule.weights, &h_vals, k);
    Ok((0..=k)
        .map(|j| {
            let expected = c_h[j] * c_g[j] / ((2 * j + 1) as f64).sqrt();
            (c_conv[j] - expected).abs()
        })
        .fold(0.0, f64::max))
}

/// Smallest of `p̃_{k'}(t) − p̃_k(t)` over consecutive indices `k' < k ≤ K`
/// of the index set and of `p̃_k(t)` itself, with `p̃_k = P_k/P_k(1)`.
pub fn ordering_margin(space: &SpaceParams, k: usize, t: f64) -> f64 {
    let raw = jacobi_sequence(space.alpha, space.beta, k, t);
    let normalized: Vec<f64> = space
        .indices_up_to(k)
        .map(|j| raw[j] / ln_at_one(space.alpha, j).exp())
        .collect();
    let mut worst = f64::INFINITY;
    for (j, p) in normalized.iter().enumerate() {
        worst = worst.min(*p);
        if j > 0 {
            worst = worst.min(normalized[j - 1] - p);
        }
    }
    worst
}

/// Most negative ordering margin over `n_samples` seeded uniform points of
/// `[t_{K,K}, 1)`; a nonnegative result means no violation was found.
pub fn ordering_check(space: &SpaceParams, k: usize, n_samples: usize, seed: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::precondition("ordering_check", "K must be >= 1"));
    }
    let t0 = nyquist_zero(space, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n_samples)
        .map(|_| {
            let u: f64 = rng.random();
            ordering_margin(space, k, t0 + u * (1.0 - t0))
        })
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct LimitRow {
    pub K: usize,
    pub A_K: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct LimitCheck {
    pub space: String,
    pub A_infinity: f64,
    pub rows: Vec<LimitRow>,
    /// Whether `|A_K − A_∞|` strictly decreases along the list.
    pub decreasing: bool,
}

/// `A_K` and `|A_K − A_∞|` for an increasing list of degrees.
pub fn limit_check(space: &SpaceParams, k_list: &[usize]) -> Result<LimitCheck> {
    if k_list.is_empty() || k_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition(
            "limit_check",
            "K_list must be nonempty and strictly increasing",
        ));
    }
    let a_inf = a_infinity(space)?;
    let rows = k_list
        .iter()
        .map(|&k| {
            let a = a_constant(space, k)?;
            Ok(LimitRow {
                K: k,
                A_K: a,
                gap: (a - a_inf).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let decreasing = rows.windows(2).all(|w| w[1].gap < w[0].gap);
    Ok(LimitCheck {
        space: space.id.clone(),
        A_infinity: a_inf,
        rows,
        decreasing,
    })
}

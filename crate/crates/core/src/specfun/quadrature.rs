//! Gauss–Jacobi quadrature.

use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use super::jacobi::{derivative, eval, ln_norm_sq};
use crate::error::{Error, Result};

/// An `m`-point Gaussian rule for the weight `(1−t)^α (1+t)^β` on `(−1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    /// `Σ w_i f(x_i)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Diagonal and squared off-diagonal of the Jacobi matrix of the monic
/// Jacobi recurrence.
fn jacobi_matrix(alpha: f64, beta: f64, m: usize) -> (Vec<f64>, Vec<f64>) {
    let s = alpha + beta;
    let diag = (0..m)
        .map(|k| {
            let k = k as f64;
            if k == 0.0 {
                (beta - alpha) / (s + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * k + s) * (2.0 * k + s + 2.0))
            }
        })
        .collect();
    let off_sq = (1..m)
        .map(|k| {
            let k = k as f64;
            if k == 1.0 {
                // cancels the (k + α + β)/(2k + α + β − 1) factor, which is 0/0 at α + β = −1
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + s).powi(2) * (3.0 + s))
            } else {
                let q = 2.0 * k + s;
                4.0 * k * (k + alpha) * (k + beta) * (k + s) / (q * q * (q + 1.0) * (q - 1.0))
            }
        })
        .collect();
    (diag, off_sq)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts. `off` holds the sub-diagonal, `off[i]` couples rows `i` and `i+1`.
pub(crate) fn tridiagonal_eigenvalues(mut d: Vec<f64>, off: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    const MAX_ITER: usize = 60;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::Convergence {
                    op: "gauss_jacobi_rule",
                    iterations: MAX_ITER,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// `m`-point Gauss–Jacobi rule, exact for polynomials of degree `≤ 2m − 1`.
///
/// Nodes are the eigenvalues of the Jacobi matrix, polished by Newton steps on
/// `P_m`; weights are Christoffel numbers `1 / Σ_{k<m} p_k(x)²` with `p_k` the
/// orthonormal Jacobi polynomials.
pub fn gauss_jacobi_rule(alpha: f64, beta: f64, m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::precondition("gauss_jacobi_rule", "need at least one node"));
    }
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::Domain {
            op: "gauss_jacobi_rule",
            value: alpha.min(beta),
            domain: "alpha, beta > -1",
        });
    }
    let (diag, off_sq) = jacobi_matrix(alpha, beta, m);
    let off: Vec<f64> = off_sq.iter().map(|v| v.sqrt()).collect();
    let mut nodes = tridiagonal_eigenvalues(diag, &off)?;

    for x in nodes.iter_mut() {
        for _ in 0..2 {
            let p = eval(alpha, beta, m, *x);
            let dp = derivative(alpha, beta, m, *x);
            if dp == 0.0 {
                break;
            }
            let next = *x - p / dp;
            if next.is_finite() && next > -1.0 && next < 1.0 {
                *x = next;
            }
        }
    }
    nodes.sort_by(f64::total_cmp);

    // 1/h_k for the orthonormalization p_k = P_k / √h_k
    let inv_norms: Vec<f64> = (0..m).map(|k| (-ln_norm_sq(alpha, beta, k)).exp()).collect();
    let weights = nodes
        .iter()
        .map(|&x| {
            let mut sum = 0.0;
            let mut prev = 0.0;
            let mut cur = 1.0;
            for (k, inv) in inv_norms.iter().enumerate() {
                sum += cur * cur * inv;
                let next = if k == 0 {
                    0.5 * ((alpha + beta + 2.0) * x + alpha - beta)
                } else {
                    let kf = k as f64;
                    let s = alpha + beta;
                    let a = (2.0 * kf + s) * (2.0 * kf + s + 1.0) * (2.0 * kf + s + 2.0);
                    let b = (2.0 * kf + s + 1.0) * (alpha * alpha - beta * beta);
                    let c = 2.0 * (kf + alpha) * (kf + beta) * (2.0 * kf + s + 2.0);
                    let d = 2.0 * (kf + 1.0) * (kf + s + 1.0) * (2.0 * kf + s);
                    ((a * x + b) * cur - c * prev) / d
                };
                prev = cur;
                cur = next;
            }
            1.0 / sum
        })
        .collect();

    Ok(QuadratureRule {
        nodes,
        weights,
        exactness_degree: 2 * m - 1,
    })
}

/// `∫_{−1}^{1} (1−t)^α (1+t)^β dt = 2^{α+β+1} B(α+1, β+1)`.
pub fn jacobi_weight_mass(alpha: f64, beta: f64) -> f64 {
    ((alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(alpha + beta + 2.0))
    .exp()
}

/// A rule for `∫_a^1 f(t) (1−t)^α (1+t)^β dt` with `f` smooth.
///
/// For `a = −1` this is the plain Gauss–Jacobi rule. Otherwise the interval is
/// mapped onto `(−1, 1)`, the `(1−t)^α` factor is absorbed by a Gauss–Jacobi
/// rule with parameters `(α, 0)`, and `(1+t)^β` (smooth on `[a, 1]`) is folded
/// into the weights.
pub fn weighted_tail_rule(alpha: f64, beta: f64, a: f64, m: usize) -> Result<QuadratureRule> {
    if !(-1.0..1.0).contains(&a) {
        return Err(Error::Domain {
            op: "weighted_tail_rule",
            value: a,
            domain: "[-1, 1)",
        });
    }
    if a == -1.0 {
        return gauss_jacobi_rule(alpha, beta, m);
    }
    let base = gauss_jacobi_rule(alpha, 0.0, m)?;
    let half = 0.5 * (1.0 - a);
    let scale = half.powf(alpha + 1.0);
    let (nodes, weights) = base
        .nodes
        .iter()
        .zip(&base.weights)
        .map(|(&u, &w)| {
            let t = a + half * (1.0 + u);
            (t, w * scale * (1.0 + t).powf(beta))
        })
        .unzip();
    Ok(QuadratureRule {
        nodes,
        weights,
        exactness_degree: base.exactness_degree,
    })
}

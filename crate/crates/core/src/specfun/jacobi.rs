//! Jacobi polynomials `P_n^{(α,β)}` on `[−1, 1]`.

use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// Tolerance on `|t| ≤ 1` before an argument is rejected.
const DOMAIN_SLACK: f64 = 1e-12;

/// Jacobi parameters `(α, β)` together with a degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiIndex {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
}

impl JacobiIndex {
    /// Builds an index, enforcing `α ≥ −1/2` and `β > −1`.
    pub fn new(alpha: f64, beta: f64, n: usize) -> Result<Self> {
        if !(alpha >= -0.5) || !alpha.is_finite() {
            return Err(Error::Domain {
                op: "JacobiIndex",
                value: alpha,
                domain: "alpha >= -1/2",
            });
        }
        if !(beta > -1.0) || !beta.is_finite() {
            return Err(Error::Domain {
                op: "JacobiIndex",
                value: beta,
                domain: "beta > -1",
            });
        }
        Ok(Self { alpha, beta, n })
    }

    /// Same parameters, different degree.
    pub fn with_degree(self, n: usize) -> Self {
        Self { n, ..self }
    }
}

/// Largest zero of `P_n^{(α,β)}` and its angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroResult {
    pub t_nn: f64,
    pub theta_n1: f64,
    pub bracket_width: f64,
}

/// Coefficients of `P_{n+1} = ((a_n t + b_n) P_n − c_n P_{n−1}) / d_n`.
#[inline]
fn recurrence(alpha: f64, beta: f64, n: f64) -> (f64, f64, f64, f64) {
    let s = alpha + beta;
    let a = (2.0 * n + s) * (2.0 * n + s + 1.0) * (2.0 * n + s + 2.0);
    let b = (2.0 * n + s + 1.0) * (alpha * alpha - beta * beta);
    let c = 2.0 * (n + alpha) * (n + beta) * (2.0 * n + s + 2.0);
    let d = 2.0 * (n + 1.0) * (n + s + 1.0) * (2.0 * n + s);
    (a, b, c, d)
}

#[inline]
fn first_degree(alpha: f64, beta: f64, t: f64) -> f64 {
    0.5 * ((alpha + beta + 2.0) * t + alpha - beta)
}

/// `P_n^{(α,β)}(t)` by upward recurrence, no argument checks.
pub(crate) fn eval(alpha: f64, beta: f64, n: usize, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = first_degree(alpha, beta, t);
    for k in 1..n {
        let (a, b, c, d) = recurrence(alpha, beta, k as f64);
        let next = ((a * t + b) * cur - c * prev) / d;
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `P_0(t), …, P_n(t)` in one pass.
pub fn jacobi_sequence(alpha: f64, beta: f64, n: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(first_degree(alpha, beta, t));
    for k in 1..n {
        let (a, b, c, d) = recurrence(alpha, beta, k as f64);
        let next = ((a * t + b) * out[k] - c * out[k - 1]) / d;
        out.push(next);
    }
    out
}

/// `ln P_n^{(α,β)}(1) = ln Γ(n+α+1) − ln n! − ln Γ(α+1)`.
pub(crate) fn ln_at_one(alpha: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    ln_gamma(n + alpha + 1.0) - ln_gamma(n + 1.0) - ln_gamma(alpha + 1.0)
}

fn check_argument(op: &'static str, t: f64) -> Result<f64> {
    if !(t.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::Domain {
            op,
            value: t,
            domain: "[-1, 1]",
        });
    }
    Ok(t.clamp(-1.0, 1.0))
}

/// Evaluates `P_n^{(α,β)}(t)` for `t ∈ [−1, 1]`.
pub fn jacobi_eval(idx: JacobiIndex, t: f64) -> Result<f64> {
    let t = check_argument("jacobi_eval", t)?;
    Ok(eval(idx.alpha, idx.beta, idx.n, t))
}

/// `P_n^{(α,β)}(1) = Γ(n+α+1) / (n! Γ(α+1))`, the maximum of `|P_n|` on `[−1, 1]`
/// when `α ≥ β`.
pub fn jacobi_at_one(idx: JacobiIndex) -> f64 {
    ln_at_one(idx.alpha, idx.n).exp()
}

/// `d/dt P_n^{(α,β)}(t) = (n+α+β+1)/2 · P_{n−1}^{(α+1,β+1)}(t)`.
pub fn jacobi_derivative(idx: JacobiIndex, t: f64) -> Result<f64> {
    let t = check_argument("jacobi_derivative", t)?;
    Ok(derivative(idx.alpha, idx.beta, idx.n, t))
}

pub(crate) fn derivative(alpha: f64, beta: f64, n: usize, t: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + alpha + beta + 1.0) * eval(alpha + 1.0, beta + 1.0, n - 1, t)
}

/// `ln ∫_{−1}^{1} P_n² ω_{α,β}`.
pub(crate) fn ln_norm_sq(alpha: f64, beta: f64, n: usize) -> f64 {
    let s = alpha + beta;
    let ln2 = std::f64::consts::LN_2;
    if n == 0 {
        // the general expression is 0/0 at n = 0 when α + β = −1
        return (s + 1.0) * ln2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(s + 2.0);
    }
    let nf = n as f64;
    (s + 1.0) * ln2 + ln_gamma(nf + alpha + 1.0) + ln_gamma(nf + beta + 1.0)
        - ln_gamma(nf + 1.0)
        - (2.0 * nf + s + 1.0).ln()
        - ln_gamma(nf + s + 1.0)
}

/// Squared weighted `L²` norm of `P_n^{(α,β)}`.
///
/// With `projective` set the integral runs over `(0, 1)` instead of `(−1, 1)`;
/// this needs `α = β` and even `n`, where by parity it is half the full norm.
pub fn jacobi_norm_sq(idx: JacobiIndex, projective: bool) -> Result<f64> {
    let JacobiIndex { alpha, beta, n } = idx;
    if !projective {
        return Ok(ln_norm_sq(alpha, beta, n).exp());
    }
    if alpha != beta {
        return Err(Error::precondition(
            "jacobi_norm_sq",
            format!("projective norm needs alpha == beta, got ({alpha}, {beta})"),
        ));
    }
    if n % 2 != 0 {
        return Err(Error::precondition(
            "jacobi_norm_sq",
            format!("projective norm needs an even degree, got {n}"),
        ));
    }
    let m = n as f64;
    let ln = if n == 0 {
        ln_norm_sq(alpha, alpha, 0) - std::f64::consts::LN_2
    } else {
        2.0 * alpha * std::f64::consts::LN_2 + 2.0 * ln_gamma(m + alpha + 1.0)
            - ln_gamma(m + 1.0)
            - (2.0 * m + 2.0 * alpha + 1.0).ln()
            - ln_gamma(m + 2.0 * alpha + 1.0)
    };
    Ok(ln.exp())
}

/// Euler–Rayleigh upper bound `1 − 2(α+1) / (n(n+α+β+1))` on the largest zero.
pub fn euler_rayleigh_bound(idx: JacobiIndex) -> f64 {
    let n = idx.n as f64;
    1.0 - 2.0 * (idx.alpha + 1.0) / (n * (n + idx.alpha + idx.beta + 1.0))
}

/// Largest zero `t_{n,n}` of `P_n^{(α,β)}`.
///
/// Scans downward from the Euler–Rayleigh bound until the sign changes, then
/// bisects the bracket to width `1e−15`.
pub fn largest_zero(idx: JacobiIndex) -> Result<ZeroResult> {
    let JacobiIndex { alpha, beta, n } = idx;
    if n == 0 {
        return Err(Error::precondition("largest_zero", "degree must be >= 1"));
    }
    let upper = euler_rayleigh_bound(idx);
    let p = |t: f64| eval(alpha, beta, n, t);

    // P_n(1) > 0, so the polynomial is positive above its largest zero.
    let (mut lo, mut hi) = if p(upper) <= 0.0 {
        // only reachable when rounding puts the zero exactly on the bound
        (upper, 1.0)
    } else {
        let mut step = (1.0 - upper) / 8.0;
        let mut bracket = None;
        'shrink: for _ in 0..60 {
            let mut hi = upper;
            // zeros are spaced much further apart than (1 − upper)/8 near t = 1
            for _ in 0..(64 * n.max(8)) {
                let lo = (hi - step).max(-1.0);
                if p(lo) <= 0.0 {
                    bracket = Some((lo, hi));
                    break 'shrink;
                }
                if lo <= -1.0 {
                    break;
                }
                hi = lo;
            }
            step *= 0.5;
        }
        bracket.ok_or(Error::Bracket { op: "largest_zero" })?
    };

    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // report the end whose value is smaller in magnitude
    let t = if p(lo).abs() <= p(hi).abs() { lo } else { hi };
    Ok(ZeroResult {
        t_nn: t,
        theta_n1: t.acos(),
        bracket_width: hi - lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(alpha: f64, beta: f64, n: usize) -> JacobiIndex {
        JacobiIndex::new(alpha, beta, n).unwrap()
    }

    /// The five (α, β) pairs of the manifold catalog at small dimension plus S¹.
    const MANIFOLD_PARAMS: [(f64, f64); 6] = [(-0.5, -0.5), (0.0, 0.0), (0.5, 0.5), (1.0, 0.0), (3.0, 1.0), (7.0, 3.0)];

    /// Explicit hypergeometric sum, independent of the recurrence, together
    /// with the sum of the absolute values of its terms.
    fn explicit(alpha: f64, beta: f64, n: usize, t: f64) -> (f64, f64) {
        if n == 0 {
            return (1.0, 1.0);
        }
        let nf = n as f64;
        let pref = ln_gamma(nf + alpha + 1.0) - ln_gamma(nf + 1.0) - ln_gamma(nf + alpha + beta + 1.0);
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut binom = 1.0;
        for m in 0..=n {
            let mf = m as f64;
            if m > 0 {
                binom *= (nf - mf + 1.0) / mf;
            }
            let g = (ln_gamma(nf + mf + alpha + beta + 1.0) - ln_gamma(mf + alpha + 1.0) + pref).exp();
            let term = binom * g * ((t - 1.0) / 2.0).powi(m as i32);
            sum += term;
            abs_sum += term.abs();
        }
        (sum, abs_sum)
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(jacobi_eval(idx(0.0, 0.0, 0), 0.3).unwrap(), 1.0);
        assert_eq!(jacobi_eval(idx(0.0, 0.0, 1), 0.5).unwrap(), 0.5);
        let t = 1.0 / 3f64.sqrt();
        assert!(jacobi_eval(idx(0.0, 0.0, 2), t).unwrap().abs() < 1e-15);
    }

    #[test]
    fn domain_is_enforced() {
        assert!(jacobi_eval(idx(0.0, 0.0, 3), 1.0 + 1e-13).is_ok());
        assert!(jacobi_eval(idx(0.0, 0.0, 3), 1.0 + 1e-9).is_err());
        assert!(jacobi_eval(idx(0.0, 0.0, 3), -1.1).is_err());
        assert!(JacobiIndex::new(-0.6, 0.0, 1).is_err());
        assert!(JacobiIndex::new(0.0, -1.0, 1).is_err());
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for &(a, b) in MANIFOLD_PARAMS.iter().chain(&[(2.5, -0.5), (1.0, 0.5)]) {
            for n in 0..=12 {
                for i in 0..=20 {
                    let t = -1.0 + 0.1 * i as f64;
                    let r = eval(a, b, n, t);
                    let (e, abs_sum) = explicit(a, b, n, t);
                    assert!(
                        (r - e).abs() <= 1e-13 * abs_sum.max(1.0),
                        "({a},{b}) n={n} t={t}: {r} vs {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn value_at_one() {
        assert!((jacobi_at_one(idx(0.0, 0.0, 7)) - 1.0).abs() < 1e-13);
        assert!((eval(0.0, 0.0, 7, 1.0) - 1.0).abs() < 1e-13);
        assert_eq!(jacobi_at_one(idx(0.5, 0.0, 0)), 1.0);
        assert!((jacobi_at_one(idx(1.0, 0.0, 2)) - 3.0).abs() < 1e-13);
        for &(a, b) in &MANIFOLD_PARAMS {
            for n in 0..40 {
                let one = jacobi_at_one(idx(a, b, n));
                assert!((eval(a, b, n, 1.0) / one - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(jacobi_derivative(idx(0.3, 0.1, 0), 0.2).unwrap(), 0.0);
        assert!((jacobi_derivative(idx(0.0, 0.0, 1), 0.9).unwrap() - 1.0).abs() < 1e-15);
        assert!((jacobi_derivative(idx(0.0, 0.0, 2), 0.4).unwrap() - 1.2).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-6;
        for &(a, b) in &MANIFOLD_PARAMS {
            for n in 1..=20 {
                let scale = (n as f64 + a + b + 1.0) * jacobi_at_one(idx(a + 1.0, b + 1.0, n - 1));
                for i in 0..=40 {
                    let t = -0.999 + 1.998 * i as f64 / 40.0;
                    let fd = (eval(a, b, n, t + h) - eval(a, b, n, t - h)) / (2.0 * h);
                    let d = derivative(a, b, n, t);
                    assert!((d - fd).abs() <= 1e-5 * scale, "({a},{b}) n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn symmetry_relation() {
        for &(a, b) in MANIFOLD_PARAMS.iter().chain(&[(2.0, 0.5)]) {
            for n in 0..=40 {
                let scale = jacobi_at_one(idx(a.max(b), 0.0, n));
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                for i in 0..=100 {
                    let t = -1.0 + 0.02 * i as f64;
                    let lhs = eval(a, b, n, -t);
                    let rhs = sign * eval(b, a, n, t);
                    assert!((lhs - rhs).abs() <= 1e-10 * scale, "({a},{b}) n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn sup_bound_on_grid() {
        for &(a, b) in &MANIFOLD_PARAMS {
            for n in 0..=40 {
                let one = jacobi_at_one(idx(a, b, n));
                for i in 0..=100 {
                    let t = -1.0 + 0.02 * i as f64;
                    assert!(eval(a, b, n, t).abs() <= one * (1.0 + 1e-12), "({a},{b}) n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn norms() {
        assert!((jacobi_norm_sq(idx(0.0, 0.0, 0), false).unwrap() - 2.0).abs() < 1e-14);
        for k in 0..30 {
            let v = jacobi_norm_sq(idx(0.0, 0.0, k), false).unwrap();
            assert!((v - 2.0 / (2.0 * k as f64 + 1.0)).abs() < 1e-14);
        }
        assert!((jacobi_norm_sq(idx(0.0, 0.0, 0), true).unwrap() - 1.0).abs() < 1e-14);
        // S¹ has α + β = −1; the n = 0 norm is ∫ (1−t²)^{−1/2} = π
        let s1 = jacobi_norm_sq(idx(-0.5, -0.5, 0), false).unwrap();
        assert!((s1 - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn projective_norm_is_half_of_full() {
        for &a in &[0.0, 0.5, 1.0, 2.5, 7.0] {
            for n in (0..30).step_by(2) {
                let full = jacobi_norm_sq(idx(a, a, n), false).unwrap();
                let half = jacobi_norm_sq(idx(a, a, n), true).unwrap();
                assert!((half / full - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn projective_norm_preconditions() {
        assert!(jacobi_norm_sq(idx(0.0, 0.0, 3), true).is_err());
        assert!(jacobi_norm_sq(idx(1.0, 0.0, 2), true).is_err());
    }

    #[test]
    fn largest_zero_examples() {
        let z = largest_zero(idx(0.0, 0.0, 1)).unwrap();
        assert!(z.t_nn.abs() < 1e-15);
        let z = largest_zero(idx(0.0, 0.0, 2)).unwrap();
        assert!((z.t_nn - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(z.theta_n1, z.t_nn.acos());
        assert!(z.bracket_width <= 1e-15);
        let z = largest_zero(idx(0.5, 0.5, 1)).unwrap();
        assert!(z.t_nn.abs() < 1e-15);
        assert!(largest_zero(idx(0.0, 0.0, 0)).is_err());
    }

    #[test]
    fn largest_zero_chebyshev_closed_form() {
        // P_n^{(−1/2,−1/2)} ∝ T_n, largest zero cos(π / 2n)
        for n in 1..=200 {
            let z = largest_zero(idx(-0.5, -0.5, n)).unwrap();
            let exact = (std::f64::consts::PI / (2.0 * n as f64)).cos();
            assert!((z.t_nn - exact).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn largest_zero_residual_and_positivity() {
        for &(a, b) in &MANIFOLD_PARAMS {
            for n in 1..=100 {
                let ix = idx(a, b, n);
                let z = largest_zero(ix).unwrap();
                let one = jacobi_at_one(ix);
                // one ulp of t moves P_n by about |P_n'| · 1.1e−16; allow ~10 ulps
                let slope = derivative(a, b, n, z.t_nn).abs();
                let tol = 1e-13 * one + 1e-15 * slope;
                let r = eval(a, b, n, z.t_nn);
                assert!(r.abs() <= tol, "({a},{b}) n={n}: {r:e} vs {tol:e}");
                for i in 1..=50 {
                    let t = z.t_nn + (1.0 - z.t_nn) * i as f64 / 50.0 + 1e-15;
                    if t <= 1.0 && t > z.t_nn + 1e-14 {
                        assert!(eval(a, b, n, t) > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn largest_zero_is_below_euler_rayleigh_and_increasing() {
        for &(a, b) in &MANIFOLD_PARAMS {
            let mut prev = -1.0;
            for n in 1..=100 {
                let ix = idx(a, b, n);
                let z = largest_zero(ix).unwrap();
                assert!(z.t_nn <= euler_rayleigh_bound(ix) + 1e-15, "({a},{b}) n={n}");
                assert!(z.t_nn > prev);
                prev = z.t_nn;
            }
        }
    }
}

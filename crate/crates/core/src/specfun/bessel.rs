//! Bessel functions of the first kind and their first positive zero.

use super::gamma::ln_gamma;
use super::jacobi::{eval, JacobiIndex};
use crate::error::{Error, Result};

/// Largest argument accepted by [`bessel_j`].
pub const BESSEL_MAX_ARG: f64 = 50.0;
/// Largest order accepted by [`bessel_j`].
pub const BESSEL_MAX_ORDER: f64 = 10.0;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self { hi: s, lo: b - (s - a) }
    }

    fn add(self, other: Self) -> Self {
        let s = Self::two_sum(self.hi, other.hi);
        let t = Self::two_sum(self.lo, other.lo);
        let s = Self::quick_two_sum(s.hi, s.lo + t.hi);
        Self::quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let err = self.hi.mul_add(other.hi, -p);
        let err = err + (self.hi * other.lo + self.lo * other.hi);
        Self::quick_two_sum(p, err)
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let p = q1 * d;
        let perr = q1.mul_add(d, -p);
        let r = (self.hi - p) - perr + self.lo;
        let q2 = r / d;
        Self::quick_two_sum(q1, q2)
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `J_α(z)` by its power series `Σ_m (−1)^m (z/2)^{2m+α} / (m! Γ(m+α+1))`.
///
/// Terms are accumulated in double-double arithmetic so that cancellation
/// between large alternating terms does not destroy absolute accuracy; the
/// sum stops once a term falls below `1e−18` of the partial sum. Accepts
/// `α ∈ (−1, 10]` and `0 ≤ z ≤ 50` (`z > 0` for negative `α`).
pub fn bessel_j(alpha: f64, z: f64) -> Result<f64> {
    if !(alpha > -1.0 && alpha <= BESSEL_MAX_ORDER) {
        return Err(Error::Domain {
            op: "bessel_j",
            value: alpha,
            domain: "alpha in (-1, 10]",
        });
    }
    if !(0.0..=BESSEL_MAX_ARG).contains(&z) || (alpha < 0.0 && z == 0.0) {
        return Err(Error::Domain {
            op: "bessel_j",
            value: z,
            domain: "z in [0, 50] (z > 0 for negative order)",
        });
    }
    Ok(bessel_series(alpha, z))
}

pub(crate) fn bessel_series(alpha: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if alpha == 0.0 { 1.0 } else { 0.0 };
    }
    let half = DoubleDouble::from_f64(0.5 * z);
    let q = half.mul(half).neg();
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sum = term;
    let peak = 0.25 * z * z;
    let mut m = 0.0f64;
    loop {
        m += 1.0;
        term = term.mul(q).div_f64(m * (m + alpha));
        sum = sum.add(term);
        if m > peak && term.hi.abs() <= 1e-18 * sum.hi.abs() {
            break;
        }
        if m > 500.0 {
            break;
        }
    }
    let prefactor = if alpha == 0.0 {
        1.0
    } else {
        (alpha * (0.5 * z).ln() - ln_gamma(alpha + 1.0)).exp()
    };
    prefactor * sum.to_f64()
}

/// Smallest positive zero `j_{α,1}` of `J_α`.
///
/// Sign scan on `(0, 2α + 20]` with step `0.05`, then bisection.
pub fn bessel_first_zero(alpha: f64) -> Result<f64> {
    if !(alpha > -1.0 && alpha <= BESSEL_MAX_ORDER) {
        return Err(Error::Domain {
            op: "bessel_first_zero",
            value: alpha,
            domain: "alpha in (-1, 10]",
        });
    }
    let step = 0.05;
    let upper = 2.0 * alpha + 20.0;
    let mut lo = step;
    let mut f_lo = bessel_series(alpha, lo);
    let mut bracket = None;
    while lo < upper {
        let hi = (lo + step).min(upper);
        let f_hi = bessel_series(alpha, hi);
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::Bracket {
        op: "bessel_first_zero",
    })?;
    let sign_lo = bessel_series(alpha, lo).signum();
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = bessel_series(alpha, mid);
        if f == 0.0 {
            return Ok(mid);
        }
        if f.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if bessel_series(alpha, lo).abs() <= bessel_series(alpha, hi).abs() {
        lo
    } else {
        hi
    };
    Ok(root)
}

/// `|n^{−α} P_n^{(α,β)}(1 − z²/(2n²)) − (2/z)^α J_α(z)|`, the error of the
/// Mehler–Heine limit at finite degree.
pub fn mehler_heine_residual(idx: JacobiIndex, z: f64) -> Result<f64> {
    if idx.n < 4 {
        return Err(Error::precondition("mehler_heine_residual", "degree must be >= 4"));
    }
    let n = idx.n as f64;
    // 1 − z²/(2n²) must stay in [−1, 1]
    if !(z > 0.0 && z <= BESSEL_MAX_ARG.min(2.0 * n)) {
        return Err(Error::Domain {
            op: "mehler_heine_residual",
            value: z,
            domain: "(0, min(50, 2n)]",
        });
    }
    let t = 1.0 - z * z / (2.0 * n * n);
    let scaled = n.powf(-idx.alpha) * eval(idx.alpha, idx.beta, idx.n, t);
    let limit = (2.0 / z).powf(idx.alpha) * bessel_j(idx.alpha, z)?;
    Ok((scaled - limit).abs())
}

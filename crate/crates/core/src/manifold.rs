//! The five families of compact two-point homogeneous spaces and their
//! derived constants.
//!
//! Every quantity is expressed in the variable `t = cos(γ·d(x, y))`, which
//! ranges over `I_M = (−1, 1)`, or `(0, 1)` on real projective spaces.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    jacobi_unchecked, ln_at_one, ln_beta, ln_gamma, regularized_unchecked, weighted_tail_rule, JacobiIndex,
};

/// Gauss–Jacobi node count used for every bound integral at degree `k`.
pub const fn quadrature_nodes(k: usize) -> usize {
    2 * k + 64
}

/// Relative tolerance between the gamma-ratio `d_k` and the exact integer.
pub const DIMENSION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sphere,
    RealProjective,
    ComplexProjective,
    QuaternionProjective,
    CayleyProjective,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Sphere,
        Family::RealProjective,
        Family::ComplexProjective,
        Family::QuaternionProjective,
        Family::CayleyProjective,
    ];

    /// Smallest admissible real dimension.
    pub fn min_dimension(self) -> usize {
        match self {
            Family::Sphere => 1,
            Family::RealProjective => 2,
            Family::ComplexProjective => 4,
            Family::QuaternionProjective => 8,
            Family::CayleyProjective => 16,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Family::Sphere => "s",
            Family::RealProjective => "rp",
            Family::ComplexProjective => "cp",
            Family::QuaternionProjective => "hp",
            Family::CayleyProjective => "cay",
        }
    }

    fn admissibility_rule(self) -> &'static str {
        match self {
            Family::Sphere => "sphere needs d >= 1",
            Family::RealProjective => "real projective space needs d >= 2",
            Family::ComplexProjective => "complex projective space needs even d >= 4",
            Family::QuaternionProjective => "quaternionic projective space needs d >= 8 divisible by 4",
            Family::CayleyProjective => "the Cayley plane has d = 16",
        }
    }

    fn admits(self, d: usize) -> bool {
        match self {
            Family::Sphere => d >= 1,
            Family::RealProjective => d >= 2,
            Family::ComplexProjective => d >= 4 && d.is_multiple_of(2),
            Family::QuaternionProjective => d >= 8 && d.is_multiple_of(4),
            Family::CayleyProjective => d == 16,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Sphere => "sphere",
            Family::RealProjective => "real projective space",
            Family::ComplexProjective => "complex projective space",
            Family::QuaternionProjective => "quaternionic projective space",
            Family::CayleyProjective => "Cayley projective plane",
        };
        f.write_str(name)
    }
}

/// `γ` as a multiple of `π/L`, with `L` the diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaScale {
    #[serde(rename = "pi/L")]
    PiOverL,
    #[serde(rename = "pi/2L")]
    PiOverTwoL,
}

/// The range `I_M` of the cosine coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interval {
    #[serde(rename = "(-1,1)")]
    Full,
    #[serde(rename = "(0,1)")]
    Half,
}

impl Interval {
    pub fn left(self) -> f64 {
        match self {
            Interval::Full => -1.0,
            Interval::Half => 0.0,
        }
    }
}

/// Parameters of one two-point homogeneous space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub id: String,
    pub family: Family,
    pub d: usize,
    pub sigma: usize,
    pub rho: usize,
    pub gamma_over_pi_l: GammaScale,
    pub alpha: f64,
    pub beta: f64,
    pub index_stride: usize,
    pub nu_perp: f64,
    pub interval: Interval,
}

/// Builds the parameter record of `family` in real dimension `d`.
pub fn make_space(family: Family, d: usize) -> Result<SpaceParams> {
    if !family.admits(d) {
        return Err(Error::Inadmissible {
            family: family.to_string(),
            d,
            rule: family.admissibility_rule(),
        });
    }
    let (sigma, rho) = match family {
        Family::Sphere | Family::RealProjective => (0, d - 1),
        Family::ComplexProjective => (d - 2, 1),
        Family::QuaternionProjective => (d - 4, 3),
        Family::CayleyProjective => (8, 7),
    };
    let alpha = (d as f64 - 2.0) / 2.0;
    let beta = (rho as f64 - 1.0) / 2.0;
    let ln2 = std::f64::consts::LN_2;
    let (gamma_over_pi_l, index_stride, interval, nu_perp) = if family == Family::RealProjective {
        let nu = (-2.0 * alpha * ln2 - ln_beta(alpha + 1.0, alpha + 1.0)).exp();
        (GammaScale::PiOverTwoL, 2, Interval::Half, nu)
    } else {
        let nu = (-(alpha + beta + 1.0) * ln2 - ln_beta(alpha + 1.0, beta + 1.0)).exp();
        (GammaScale::PiOverL, 1, Interval::Full, nu)
    };
    let id = match family {
        Family::CayleyProjective => "cay16".to_string(),
        _ => format!("{}{d}", family.prefix()),
    };
    Ok(SpaceParams {
        id,
        family,
        d,
        sigma,
        rho,
        gamma_over_pi_l,
        alpha,
        beta,
        index_stride,
        nu_perp,
        interval,
    })
}

impl SpaceParams {
    /// Left endpoint of `I_M`.
    pub fn left_endpoint(&self) -> f64 {
        self.interval.left()
    }

    pub fn in_index_set(&self, k: usize) -> bool {
        k.is_multiple_of(self.index_stride)
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if self.in_index_set(k) {
            Ok(())
        } else {
            Err(Error::NotInIndexSet {
                k,
                space: self.id.clone(),
            })
        }
    }

    /// Indices `0 = k_0 < k_1 < … ≤ k_max` of the index set.
    pub fn indices_up_to(&self, k_max: usize) -> impl Iterator<Item = usize> {
        (0..=k_max).step_by(self.index_stride)
    }

    /// Jacobi index `(α, β, k)` of this space.
    pub fn jacobi(&self, k: usize) -> JacobiIndex {
        JacobiIndex {
            alpha: self.alpha,
            beta: self.beta,
            n: k,
        }
    }

    /// Whether points live on a sphere model (`S^d` or `P^d(ℝ)` as `S^d/±1`),
    /// i.e. whether region geometry is available.
    pub fn has_sphere_model(&self) -> bool {
        matches!(self.family, Family::Sphere | Family::RealProjective)
    }

    /// Cosine coordinate of two unit vectors of the sphere model.
    pub fn cosine(&self, x: &[f64], y: &[f64]) -> f64 {
        let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        match self.family {
            Family::RealProjective => dot.abs(),
            _ => dot,
        }
    }

    /// Jacobi weight `(1−t)^α (1+t)^β`.
    pub fn weight(&self, t: f64) -> f64 {
        (1.0 - t).powf(self.alpha) * (1.0 + t).powf(self.beta)
    }
}

impl fmt::Display for SpaceParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl FromStr for SpaceParams {
    type Err = Error;

    /// Parses `s<d>`, `rp<d>`, `cp<d>`, `hp<d>` or `cay16`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || {
            Error::precondition(
                "space id",
                format!("unknown space '{s}', expected s<d>, rp<d>, cp<d>, hp<d> or cay16"),
            )
        };
        let (family, digits) = if let Some(rest) = s.strip_prefix("cay") {
            (Family::CayleyProjective, rest)
        } else if let Some(rest) = s.strip_prefix("rp") {
            (Family::RealProjective, rest)
        } else if let Some(rest) = s.strip_prefix("cp") {
            (Family::ComplexProjective, rest)
        } else if let Some(rest) = s.strip_prefix("hp") {
            (Family::QuaternionProjective, rest)
        } else if let Some(rest) = s.strip_prefix('s') {
            (Family::Sphere, rest)
        } else {
            return Err(bad());
        };
        let d: usize = digits.parse().map_err(|_| bad())?;
        make_space(family, d)
    }
}

/// Eigenvalue and eigenspace data for one index `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenspaceInfo {
    pub k: usize,
    pub lambda_k: f64,
    /// Exact dimension, rounded to the nearest double.
    pub d_k: f64,
    /// Exact dimension in decimal.
    pub d_k_exact: String,
    /// Dimension from the gamma-ratio formula.
    pub d_k_raw: f64,
    #[serde(rename = "D_k")]
    pub big_d_k: f64,
    /// False when the gamma-ratio value is not within tolerance of an integer.
    pub integral: bool,
}

/// `ln D_k` from the gamma-ratio closed form.
fn ln_addition_coefficient(space: &SpaceParams, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let (a, b) = (space.alpha, space.beta);
    let s = a + b;
    let k = k as f64;
    (2.0 * k + s + 1.0).ln() + ln_gamma(k + s + 1.0) + ln_gamma(b + 1.0) - ln_gamma(k + b + 1.0) - ln_gamma(s + 2.0)
}

/// Exact `d_k` as a quotient of integers in the doubled parameters
/// `a = 2α`, `b = 2β`:
/// `d_k = (4k+a+b+2) ∏_{j=2}^{k}(a+b+2j) ∏_{j=1}^{k}(a+2j) / (2^k k! ∏_{j=1}^{k}(b+2j))`.
/// Returns the quotient and whether the division is exact.
fn exact_dimension(space: &SpaceParams, k: usize) -> (BigInt, bool) {
    if k == 0 {
        return (BigInt::from(1), true);
    }
    let a = (2.0 * space.alpha).round() as i64;
    let b = (2.0 * space.beta).round() as i64;
    let kk = k as i64;
    let mut num = BigInt::from(4 * kk + a + b + 2);
    let mut den = BigInt::from(1) << k;
    for j in 1..=kk {
        if j >= 2 {
            num *= a + b + 2 * j;
        }
        num *= a + 2 * j;
        den *= j * (b + 2 * j);
    }
    let (q, r) = num.div_rem(&den);
    (q, r.is_zero())
}

/// Eigenvalue `λ_k`, dimension `d_k` and addition-formula coefficient `D_k`.
pub fn eigenspace_info(space: &SpaceParams, k: usize) -> Result<EigenspaceInfo> {
    space.check_index(k)?;
    let ln_big_d = ln_addition_coefficient(space, k);
    let big_d_k = ln_big_d.exp();
    let d_k_raw = (ln_big_d + ln_at_one(space.alpha, k)).exp();
    let (exact, divides) = exact_dimension(space, k);
    let d_k = exact.to_f64().unwrap_or(f64::INFINITY);
    let integral = divides && (d_k_raw - d_k).abs() <= DIMENSION_TOLERANCE * d_k.max(1.0);
    let kf = k as f64;
    Ok(EigenspaceInfo {
        k,
        lambda_k: -kf * (kf + space.alpha + space.beta + 1.0),
        d_k,
        d_k_exact: exact.to_string(),
        d_k_raw,
        big_d_k,
        integral,
    })
}

/// Normalized measure of a cap `{t ≥ δ}`:
/// `2^{α+β+1} ν⊥ B_{(1−δ)/2}(α+1, β+1)`.
pub fn cap_measure(space: &SpaceParams, delta: f64) -> Result<f64> {
    let left = space.left_endpoint();
    if !(delta >= left && delta < 1.0) {
        return Err(Error::Domain {
            op: "cap_measure",
            value: delta,
            domain: if left == 0.0 { "[0, 1)" } else { "[-1, 1)" },
        });
    }
    Ok(cap_measure_unchecked(space, delta))
}

/// `2^{α+β+1} ν⊥ B(α+1, β+1)` is 1, or 2 on `P^d(ℝ)` where `I_M` is half of
/// `(−1, 1)`; the regularized form keeps full relative accuracy as `δ → 1`.
pub(crate) fn cap_measure_unchecked(space: &SpaceParams, delta: f64) -> f64 {
    let scale = if space.family == Family::RealProjective {
        2.0
    } else {
        1.0
    };
    scale * regularized_unchecked(0.5 * (1.0 - delta), space.alpha + 1.0, space.beta + 1.0)
}

/// Zonal coefficient `ĝ(k, 1) = √d_k ν⊥ ∫_{I_M} G(t) P_k(t)/P_k(1) ω(t) dt`.
pub fn zonal_coefficient<F: Fn(f64) -> f64>(space: &SpaceParams, k_max: usize, g: F, k: usize) -> Result<f64> {
    zonal_coefficient_on(space, k_max, space.left_endpoint(), g, k)
}

/// As [`zonal_coefficient`] for `G` supported on the cap `[lower, 1]`.
pub fn zonal_coefficient_on<F: Fn(f64) -> f64>(
    space: &SpaceParams,
    k_max: usize,
    lower: f64,
    g: F,
    k: usize,
) -> Result<f64> {
    space.check_index(k)?;
    if !(lower >= space.left_endpoint() && lower < 1.0) {
        return Err(Error::Domain {
            op: "zonal_coefficient",
            value: lower,
            domain: "I_M",
        });
    }
    let rule = weighted_tail_rule(space.alpha, space.beta, lower, quadrature_nodes(k_max.max(k)))?;
    let at_one = ln_at_one(space.alpha, k).exp();
    let integral = rule.integrate(|t| g(t) * jacobi_unchecked(space.alpha, space.beta, k, t) / at_one);
    let d_k = eigenspace_info(space, k)?.d_k_raw;
    Ok(d_k.sqrt() * space.nu_perp * integral)
}

/// Minimal admissible member of every family.
pub fn catalog() -> Vec<SpaceParams> {
    Family::ALL
        .iter()
        .map(|&f| make_space(f, f.min_dimension()).expect("minimal dimensions are admissible"))
        .collect()
}

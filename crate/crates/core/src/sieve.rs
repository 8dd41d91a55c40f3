//! Large-sieve bound constants: `T₂(K, δ)`, `A_K`, its limit, the bound for a
//! general measure and the `L^p` bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{cap_measure, quadrature_nodes, SpaceParams};
use crate::region::{coordinate_ascent, midpoints, normalize, sphere_grid, SearchConfig};
use crate::specfun::{
    bessel_first_zero, bessel_j, incomplete_beta_unchecked, jacobi_unchecked, largest_zero, ln_at_one, ln_gamma,
    weighted_tail_rule,
};

/// Atoms beyond which pairwise midpoints are left out of the sup search.
const MIDPOINT_ATOM_LIMIT: usize = 256;

/// Largest zero `t_{K,K}` of `P_K^{(α,β)}`; `K ≥ 1`.
pub fn nyquist_zero(space: &SpaceParams, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::precondition("nyquist_zero", "P_0 has no zeros"));
    }
    space.check_index(k)?;
    Ok(largest_zero(space.jacobi(k))?.t_nn)
}

/// Smallest admissible `δ` for degree `K`: `t_{K,K}`, or the left end of
/// `I_M` when `K = 0`.
fn lower_delta(space: &SpaceParams, k: usize) -> Result<f64> {
    if k == 0 {
        Ok(space.left_endpoint())
    } else {
        nyquist_zero(space, k)
    }
}

pub(crate) fn check_delta(op: &'static str, space: &SpaceParams, k: usize, delta: f64) -> Result<()> {
    space.check_index(k)?;
    let lower = lower_delta(space, k)?;
    if !(delta >= lower && delta < 1.0) {
        return Err(Error::precondition(
            op,
            format!("delta = {delta} must lie in [t_KK, 1) = [{lower}, 1) for K = {k}"),
        ));
    }
    Ok(())
}

/// `∫_δ¹ (P_K(t)/P_K(1))² ω_{α,β}(t) dt` with `2K + 64` Gauss–Jacobi nodes.
fn tail_integral(space: &SpaceParams, k: usize, delta: f64) -> Result<f64> {
    let rule = weighted_tail_rule(space.alpha, space.beta, delta, quadrature_nodes(k))?;
    let at_one = ln_at_one(space.alpha, k).exp();
    Ok(rule.integrate(|t| {
        let p = jacobi_unchecked(space.alpha, space.beta, k, t) / at_one;
        p * p
    }))
}

/// Sharp cap constant `T₂(K, δ) = (ν⊥ ∫_δ¹ (P_K/P_K(1))² ω)^{−1}`, valid for
/// `t_{K,K} ≤ δ < 1`.
pub fn t2_constant(space: &SpaceParams, k: usize, delta: f64) -> Result<f64> {
    check_delta("t2_constant", space, k, delta)?;
    Ok(1.0 / (space.nu_perp * tail_integral(space, k, delta)?))
}

/// `A_K = 2^{α+β+1} B_{(1−t_KK)/2}(α+1, β+1) / ∫_{t_KK}¹ (P_K/P_K(1))² ω`,
/// which equals `|C_{t_KK}| · T₂(K, t_KK)`.
pub fn a_constant(space: &SpaceParams, k: usize) -> Result<f64> {
    let t = nyquist_zero(space, k)?;
    let (a, b) = (space.alpha, space.beta);
    let cap = (a + b + 1.0).exp2() * incomplete_beta_unchecked(0.5 * (1.0 - t), a + 1.0, b + 1.0);
    Ok(cap / tail_integral(space, k, t)?)
}

/// `lim_{K→∞} A_K = (j/2)^{2α} / ((α+1) Γ(α+1)² J_{α+1}(j)²)` with
/// `j = j_{α,1}`; depends on `α` only.
pub fn a_infinity(space: &SpaceParams) -> Result<f64> {
    let a = space.alpha;
    let j = bessel_first_zero(a)?;
    let jp = bessel_j(a + 1.0, j)?;
    let ln = 2.0 * a * (0.5 * j).ln() - (a + 1.0).ln() - 2.0 * ln_gamma(a + 1.0) - 2.0 * jp.abs().ln();
    Ok(ln.exp())
}

/// The exponent map `p ↦ min(p − 1, 1)` of the `L^p` bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct PExponent;

impl PExponent {
    const FORM: &'static str = "min(p-1,1)";

    pub fn eval(self, p: f64) -> f64 {
        (p - 1.0).min(1.0)
    }
}

impl From<PExponent> for String {
    fn from(_: PExponent) -> String {
        PExponent::FORM.to_string()
    }
}

impl TryFrom<String> for PExponent {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        if s == PExponent::FORM {
            Ok(PExponent)
        } else {
            Err(format!("unknown exponent form '{s}'"))
        }
    }
}

/// All bound constants for one `(space, K, δ)`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub version: String,
    pub space: SpaceParams,
    pub K: usize,
    pub delta: f64,
    /// `None` for `K = 0`, where `P_0` has no zero.
    pub t_KK: Option<f64>,
    pub T2: f64,
    pub cap_measure_at_tKK: Option<f64>,
    pub A_K: Option<f64>,
    pub A_infinity: f64,
    pub p_exponent: PExponent,
    pub quadrature_nodes: usize,
}

/// Builds a [`BoundReport`]; `delta` defaults to `t_KK` (left end of `I_M`
/// when `K = 0`). `A_K` is `|C_{t_KK}| · T₂(K, t_KK)`.
pub fn bound_report(space: &SpaceParams, k: usize, delta: Option<f64>) -> Result<BoundReport> {
    space.check_index(k)?;
    let t_kk = if k == 0 { None } else { Some(nyquist_zero(space, k)?) };
    let delta = delta.unwrap_or_else(|| t_kk.unwrap_or(space.left_endpoint()));
    let t2 = t2_constant(space, k, delta)?;
    let (cap_at, a_k) = match t_kk {
        Some(t) => {
            let cap = cap_measure(space, t)?;
            (Some(cap), Some(cap * t2_constant(space, k, t)?))
        }
        None => (None, None),
    };
    Ok(BoundReport {
        version: crate::VERSION.to_string(),
        space: space.clone(),
        K: k,
        delta,
        t_KK: t_kk,
        T2: t2,
        cap_measure_at_tKK: cap_at,
        A_K: a_k,
        A_infinity: a_infinity(space)?,
        p_exponent: PExponent,
        quadrature_nodes: quadrature_nodes(k),
    })
}

/// One point mass of a finitely supported measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Vec<f64>,
    pub weight: f64,
}

/// A finitely supported positive measure on a sphere-model space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub atoms: Vec<Atom>,
}

impl MeasureSpec {
    /// Checks weights are positive and normalizes the points.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let mut out = Vec::with_capacity(atoms.len());
        for mut a in atoms {
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(Error::precondition(
                    "MeasureSpec",
                    format!("atom weight {} must be positive", a.weight),
                ));
            }
            normalize(&mut a.point)?;
            out.push(a);
        }
        Ok(Self { atoms: out })
    }

    /// `μ(C_δ(y))`.
    pub fn cap_mass(&self, space: &SpaceParams, y: &[f64], delta: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| space.cosine(&a.point, y) >= delta)
            .map(|a| a.weight)
            .sum()
    }
}

/// Result of [`measure_bound`].
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureBound {
    pub bound: f64,
    pub T2: f64,
    /// Largest cap mass found, `sup_y μ(C_δ(y))`.
    pub sup_mass: f64,
    pub argmax_center: Vec<f64>,
    pub n_candidates: usize,
    pub search: SearchConfig,
}

/// `T₂(K, δ) · sup_y μ(C_δ(y))`. The sup is searched over the atoms, their
/// pairwise midpoints (up to 256 atoms) and a sphere grid; the best 64
/// candidates are refined by coordinate ascent.
pub fn measure_bound(space: &SpaceParams, k: usize, delta: f64, mu: &MeasureSpec) -> Result<MeasureBound> {
    measure_bound_with(space, k, delta, mu, &SearchConfig::default(), 64)
}

pub fn measure_bound_with(
    space: &SpaceParams,
    k: usize,
    delta: f64,
    mu: &MeasureSpec,
    config: &SearchConfig,
    refine_top: usize,
) -> Result<MeasureBound> {
    if !space.has_sphere_model() {
        return Err(Error::UnsupportedSpace {
            op: "measure_bound",
            space: space.id.clone(),
        });
    }
    if let Some(a) = mu.atoms.iter().find(|a| a.point.len() != space.d + 1) {
        return Err(Error::precondition(
            "measure_bound",
            format!(
                "atom has {} coordinates, {} needs {}",
                a.point.len(),
                space.id,
                space.d + 1
            ),
        ));
    }
    let t2 = t2_constant(space, k, delta)?;
    let points: Vec<Vec<f64>> = mu.atoms.iter().map(|a| a.point.clone()).collect();
    let mut candidates = points.clone();
    if points.len() <= MIDPOINT_ATOM_LIMIT {
        candidates.extend(midpoints(&points, space.index_stride == 2));
    }
    candidates.extend(sphere_grid(space.d, config.grid_size, 0));

    let scores: Vec<f64> = candidates.par_iter().map(|c| mu.cap_mass(space, c, delta)).collect();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

    let step = 0.5 * delta.acos();
    let (center, sup) = order
        .iter()
        .take(refine_top.max(1))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| {
            coordinate_ascent(&candidates[i], step, config.refine_iterations, |y| {
                mu.cap_mass(space, y, delta)
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(
            (Vec::new(), f64::NEG_INFINITY),
            |acc, r| if r.1 > acc.1 { r } else { acc },
        );
    let sup = sup.max(0.0);
    Ok(MeasureBound {
        bound: t2 * sup,
        T2: t2,
        sup_mass: sup,
        argmax_center: center,
        n_candidates: candidates.len(),
        search: *config,
    })
}

/// `min(1, (A_K ρ)^{min(p−1, 1)})` for `1 < p ≤ ∞`.
pub fn lp_bound(space: &SpaceParams, k: usize, rho: f64, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Domain {
            op: "lp_bound",
            value: p,
            domain: "(1, inf]",
        });
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain {
            op: "lp_bound",
            value: rho,
            domain: "[0, 1]",
        });
    }
    let a = a_constant(space, k)?;
    Ok((a * rho).powf(PExponent.eval(p)).min(1.0))
}

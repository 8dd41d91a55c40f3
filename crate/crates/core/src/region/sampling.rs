//! Sampling the normalized measure restricted to a cap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::geometry::{normalize, Householder};
use crate::error::{Error, Result};
use crate::manifold::SpaceParams;
use crate::specfun::regularized_unchecked;

/// Bisection tolerance on `x = (1 − t)/2` when inverting the cap CDF.
const CDF_TOLERANCE: f64 = 1e-12;

/// Cap samples around the pole `e₀`, stored row-major with `d + 1` columns.
#[derive(Debug, Clone)]
pub(crate) struct PoleSamples {
    pub dim: usize,
    pub points: Vec<f64>,
}

impl PoleSamples {
    pub(crate) fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }
}

pub(crate) fn check_cap(space: &SpaceParams, delta: f64) -> Result<()> {
    if !space.has_sphere_model() {
        return Err(Error::UnsupportedSpace {
            op: "cap sampling",
            space: space.id.clone(),
        });
    }
    let left = space.left_endpoint();
    if !(delta >= left && delta <= 1.0) {
        return Err(Error::Domain {
            op: "cap sampling",
            value: delta,
            domain: "closure of I_M",
        });
    }
    Ok(())
}

/// Draws `t ∈ [δ, 1]` with density `∝ (1−t)^α (1+t)^β` by bisection on the
/// regularized incomplete beta CDF of `x = (1 − t)/2`.
fn sample_t(a: f64, b: f64, x_max: f64, mass: f64, u: f64) -> f64 {
    let target = u * mass;
    let (mut lo, mut hi) = (0.0, x_max);
    while hi - lo > CDF_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if regularized_unchecked(mid, a, b) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    1.0 - (lo + hi)
}

pub(crate) fn pole_samples(space: &SpaceParams, delta: f64, n: usize, seed: u64) -> PoleSamples {
    let dim = space.d + 1;
    let (a, b) = (space.alpha + 1.0, space.beta + 1.0);
    let x_max = 0.5 * (1.0 - delta);
    let mass = regularized_unchecked(x_max, a, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n * dim);
    let mut u = vec![0.0; dim - 1];
    for _ in 0..n {
        let t: f64 = sample_t(a, b, x_max, mass, rng.random());
        loop {
            u.iter_mut().for_each(|x| *x = StandardNormal.sample(&mut rng));
            if normalize(&mut u).is_ok() {
                break;
            }
        }
        let r = (1.0 - t * t).max(0.0).sqrt();
        points.push(t);
        points.extend(u.iter().map(|x| r * x));
    }
    PoleSamples { dim, points }
}

/// `n` points distributed as the normalized measure restricted to
/// `C_δ(center)`. Deterministic in `seed`.
pub fn sample_cap(space: &SpaceParams, center: &[f64], delta: f64, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    check_cap(space, delta)?;
    let c = super::unit_center(space, center)?;
    let pole = pole_samples(space, delta, n, seed);
    let h = Householder::to(&c);
    Ok(pole
        .rows()
        .map(|p| {
            let mut x = vec![0.0; p.len()];
            h.apply(p, &mut x);
            x
        })
        .collect())
}

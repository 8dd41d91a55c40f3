//! Unit-sphere helpers shared by the region and sieve modules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Step shrink factor per coordinate-ascent sweep.
const SHRINK: f64 = 0.7;

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scales `v` to unit length.
pub fn normalize(v: &mut [f64]) -> Result<()> {
    let norm = dot(v, v).sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Region(format!("cannot normalize vector of norm {norm}")));
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Ok(())
}

/// Reflection `H = I − 2vvᵀ/|v|²` with `v = e₀ − c`, so `H e₀ = c`.
#[derive(Debug, Clone)]
pub(crate) struct Householder {
    v: Vec<f64>,
    /// `2/|v|²`, zero when `c = e₀`
    scale: f64,
}

impl Householder {
    pub(crate) fn to(c: &[f64]) -> Self {
        let mut v: Vec<f64> = c.iter().map(|x| -x).collect();
        v[0] += 1.0;
        let nn = dot(&v, &v);
        let scale = if nn < 1e-30 { 0.0 } else { 2.0 / nn };
        Self { v, scale }
    }

    #[inline]
    pub(crate) fn apply(&self, x: &[f64], out: &mut [f64]) {
        let s = self.scale * dot(&self.v, x);
        for ((o, &xi), &vi) in out.iter_mut().zip(x).zip(&self.v) {
            *o = xi - s * vi;
        }
    }

    /// `H e_j`; for `j ≥ 1` these span the tangent space at `c`.
    pub(crate) fn column(&self, j: usize) -> Vec<f64> {
        let s = self.scale * self.v[j];
        let mut col: Vec<f64> = self.v.iter().map(|vi| -s * vi).collect();
        col[j] += 1.0;
        col
    }
}

/// `n` well-spread points on `S^d ⊂ ℝ^{d+1}`: equally spaced angles on `S¹`,
/// a Fibonacci lattice on `S²`, a super-Fibonacci spiral on `S³`, and seeded
/// Gaussian directions above that.
pub fn sphere_grid(d: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let nf = n as f64;
    let tau = std::f64::consts::TAU;
    match d {
        1 => (0..n)
            .map(|i| {
                let a = tau * i as f64 / nf;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        2 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / nf;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * i as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        3 => {
            let phi = std::f64::consts::SQRT_2;
            let psi = 1.533_751_168_755_204_3;
            (0..n)
                .map(|i| {
                    let s = i as f64 + 0.5;
                    let r = (s / nf).sqrt();
                    let big_r = (1.0 - s / nf).sqrt();
                    let a = tau * s / phi;
                    let b = tau * s / psi;
                    vec![r * a.sin(), r * a.cos(), big_r * b.sin(), big_r * b.cos()]
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1);
            (0..n)
                .map(|_| loop {
                    let mut v: Vec<f64> = (0..=d).map(|_| StandardNormal.sample(&mut rng)).collect();
                    if normalize(&mut v).is_ok() {
                        break v;
                    }
                })
                .collect()
        }
    }
}

/// Normalized midpoints of all pairs; with `projective` set also of
/// `x` and `−y`, the other representative of `y`.
pub(crate) fn midpoints(points: &[Vec<f64>], projective: bool) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            for sign in [1.0, -1.0] {
                if sign < 0.0 && !projective {
                    continue;
                }
                let mut m: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + sign * y).collect();
                if dot(&m, &m) > 1e-20 && normalize(&mut m).is_ok() {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Greedy ascent of `f` over the sphere: each sweep tries `x cos h ± e sin h`
/// along every tangent direction `e` at the current point and keeps strict
/// improvements; `h` starts at `step` and shrinks geometrically.
pub(crate) fn coordinate_ascent<F: FnMut(&[f64]) -> f64>(
    start: &[f64],
    step: f64,
    iterations: usize,
    mut f: F,
) -> (Vec<f64>, f64) {
    let dim = start.len();
    let mut x = start.to_vec();
    let mut best = f(&x);
    let mut h = step;
    for _ in 0..iterations {
        let frame = Householder::to(&x);
        for j in 1..dim {
            let e = frame.column(j);
            for sign in [1.0, -1.0] {
                let mut cand: Vec<f64> = x
                    .iter()
                    .zip(&e)
                    .map(|(xi, ei)| xi * h.cos() + sign * h.sin() * ei)
                    .collect();
                if normalize(&mut cand).is_err() {
                    continue;
                }
                let val = f(&cand);
                if val > best {
                    best = val;
                    x = cand;
                }
            }
        }
        h *= SHRINK;
    }
    (x, best)
}

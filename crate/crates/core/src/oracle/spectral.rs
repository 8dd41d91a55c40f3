//! Discretized concentration operator `χ_Ω P_K χ_Ω` on `S²`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::Family;
use crate::region::{dot, normalize, Region};
use crate::specfun::{gauss_jacobi_rule, tridiagonal_eigenvalues};

/// Nodes inside the region above which the operator is applied matrix-free.
pub const DENSE_NODE_LIMIT: usize = 8192;
/// Relative Ritz-value stagnation at which Lanczos stops.
pub const LANCZOS_TOLERANCE: f64 = 1e-13;
/// Lanczos step budget.
pub const LANCZOS_MAX_STEPS: usize = 400;

/// Product rule on `S²`: Gauss–Legendre in `cos θ` times equally spaced
/// azimuths, weights summing to one.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub n_theta: usize,
    pub n_phi: usize,
}

/// Exact for spherical polynomials of degree `≤ min(2 n_theta − 1, n_phi − 1)`.
pub fn sphere_quadrature(n_theta: usize, n_phi: usize) -> Result<SphereQuadrature> {
    if n_theta == 0 || n_phi == 0 {
        return Err(Error::precondition(
            "sphere_quadrature",
            "need at least one node per direction",
        ));
    }
    let rule = gauss_jacobi_rule(0.0, 0.0, n_theta)?;
    let mut points = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
        let r = (1.0 - z * z).max(0.0).sqrt();
        for j in 0..n_phi {
            let phi = std::f64::consts::TAU * j as f64 / n_phi as f64;
            points.push([r * phi.cos(), r * phi.sin(), z]);
            weights.push(0.5 * w / n_phi as f64);
        }
    }
    Ok(SphereQuadrature {
        points,
        weights,
        n_theta,
        n_phi,
    })
}

/// Reproducing kernel of polynomials of degree `≤ K` on `S²` as a function
/// of `t = ⟨x, y⟩`: `Σ_{k≤K} (2k+1) P_k(t)`.
pub fn sphere_kernel(k: usize, t: f64) -> f64 {
    let mut sum = 1.0;
    let (mut prev, mut cur) = (1.0, t);
    for n in 1..=k {
        sum += (2 * n + 1) as f64 * cur;
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * t * cur - nf * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    sum
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SpectralResult {
    /// Largest eigenvalue of the discretized operator.
    pub lambda_max: f64,
    pub n_nodes: usize,
    /// Nodes inside the region (the operator's dimension).
    pub n_inside: usize,
    pub K: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub region: String,
    /// Sum of the diagonal.
    pub trace: f64,
    /// `max |M_ij − M_ji|`; zero when applied matrix-free.
    pub max_asymmetry: f64,
    pub lanczos_steps: usize,
    pub converged: bool,
    pub dense: bool,
}

/// `M_ij = √(w_i w_j) K(⟨x_i, x_j⟩)` over the nodes inside the region.
struct Operator {
    points: Vec<[f64; 3]>,
    sqrt_w: Vec<f64>,
    k: usize,
    dense: Option<Vec<f64>>,
}

impl Operator {
    fn entry(&self, i: usize, j: usize) -> f64 {
        let t = dot(&self.points[i], &self.points[j]).clamp(-1.0, 1.0);
        self.sqrt_w[i] * self.sqrt_w[j] * sphere_kernel(self.k, t)
    }

    fn new(points: Vec<[f64; 3]>, sqrt_w: Vec<f64>, k: usize) -> Self {
        let mut op = Self {
            points,
            sqrt_w,
            k,
            dense: None,
        };
        let n = op.points.len();
        if n <= DENSE_NODE_LIMIT {
            let mut m = vec![0.0; n * n];
            m.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = op.entry(i, j);
                }
            });
            op.dense = Some(m);
        }
        op
    }

    fn dim(&self) -> usize {
        self.points.len()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        match &self.dense {
            Some(m) => m.par_chunks(n).map(|row| dot(row, x)).collect(),
            None => (0..n)
                .into_par_iter()
                .map(|i| (0..n).map(|j| self.entry(i, j) * x[j]).sum())
                .collect(),
        }
    }

    fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    fn max_asymmetry(&self) -> f64 {
        let Some(m) = &self.dense else { return 0.0 };
        let n = self.dim();
        (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .map(|j| (m[i * n + j] - m[j * n + i]).abs())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Largest eigenvalue of a symmetric operator by Lanczos with full
/// reorthogonalization. Returns `(θ, steps, converged)`.
fn lanczos_top<F: Fn(&[f64]) -> Vec<f64>>(n: usize, apply: F) -> Result<(f64, usize, bool)> {
    if n == 0 {
        return Ok((0.0, 0, true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c_0505);
    let mut q: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&mut q)?;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut theta = f64::NEG_INFINITY;
    let mut stagnant = 0;
    let max_steps = n.min(LANCZOS_MAX_STEPS);

    for step in 1..=max_steps {
        let mut w = apply(&q);
        let a = dot(&q, &w);
        basis.push(q);
        alphas.push(a);
        // two passes of classical Gram–Schmidt against the whole basis
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = dot(&w, &w).sqrt();
        let ritz = tridiagonal_eigenvalues(alphas.clone(), &betas)?;
        let next = ritz.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let scale = next.abs().max(1e-300);
        if (next - theta).abs() <= LANCZOS_TOLERANCE * scale {
            stagnant += 1;
        } else {
            stagnant = 0;
        }
        theta = next;
        if b <= 1e-12 * alphas.iter().fold(scale, |m, x| m.max(x.abs())) || stagnant >= 3 {
            return Ok((theta, step, true));
        }
        betas.push(b);
        q = w.iter().map(|x| x / b).collect();
    }
    Ok((theta, max_steps, max_steps == n))
}

/// Top eigenvalue of `χ_Ω P_K χ_Ω` discretized by an `n_theta × n_phi`
/// product rule; approximates `λ₂(Ω, K)` from below as the rule refines.
/// Requires a region on `S²` and `n_theta ≥ 2K + 8`.
pub fn concentration_eigenvalue(region: &dyn Region, k: usize, n_theta: usize, n_phi: usize) -> Result<SpectralResult> {
    let space = region.space();
    if space.family != Family::Sphere || space.d != 2 {
        return Err(Error::UnsupportedSpace {
            op: "concentration_eigenvalue",
            space: space.id.clone(),
        });
    }
    if n_theta < 2 * k + 8 {
        return Err(Error::precondition(
            "concentration_eigenvalue",
            format!("n_theta = {n_theta} must be at least 2K+8 = {}", 2 * k + 8),
        ));
    }
    if n_phi < 2 * k + 1 {
        return Err(Error::precondition(
            "concentration_eigenvalue",
            format!("n_phi = {n_phi} must be at least 2K+1 = {}", 2 * k + 1),
        ));
    }
    let quad = sphere_quadrature(n_theta, n_phi)?;
    let (points, sqrt_w): (Vec<[f64; 3]>, Vec<f64>) = quad
        .points
        .iter()
        .zip(&quad.weights)
        .filter(|(p, _)| region.contains(&p[..]))
        .map(|(p, w)| (*p, w.sqrt()))
        .unzip();
    let op = Operator::new(points, sqrt_w, k);
    let (lambda_max, lanczos_steps, converged) = lanczos_top(op.dim(), |x| op.apply(x))?;
    Ok(SpectralResult {
        lambda_max: lambda_max.max(0.0),
        n_nodes: quad.points.len(),
        n_inside: op.dim(),
        K: k,
        n_theta,
        n_phi,
        region: region.summary(),
        trace: op.trace(),
        max_asymmetry: op.max_asymmetry(),
        lanczos_steps,
        converged,
        dense: op.dense.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::SpaceParams;
    use crate::region::{Cap, FnRegion, RegionSpec};

    fn s2() -> SpaceParams {
        "s2".parse().unwrap()
    }

    #[test]
    fn kernel_examples() {
        for t in [-1.0, -0.3, 0.0, 0.7] {
            assert_eq!(sphere_kernel(0, t), 1.0);
        }
        for k in [1usize, 5, 10, 40] {
            let v = sphere_kernel(k, 1.0);
            assert!((v - ((k + 1) * (k + 1)) as f64).abs() < 1e-10 * v);
        }
        // reproduces constants: the average over y of K(⟨x,y⟩) is 1
        let rule = gauss_jacobi_rule(0.0, 0.0, 32).unwrap();
        for k in [0usize, 3, 12] {
            let mean: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(t, w)| 0.5 * w * sphere_kernel(k, *t))
                .sum();
            assert!((mean - 1.0).abs() < 1e-13, "{k}: {mean}");
        }
    }

    #[test]
    fn quadrature_integrates_harmonics() {
        let q = sphere_quadrature(12, 24).unwrap();
        let total: f64 = q.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        // E[x²] = 1/3, E[x² y² z²] = 1/105
        let m2: f64 = q.points.iter().zip(&q.weights).map(|(p, w)| w * p[0] * p[0]).sum();
        let m6: f64 = q
            .points
            .iter()
            .zip(&q.weights)
            .map(|(p, w)| w * (p[0] * p[1] * p[2]).powi(2))
            .sum();
        assert!((m2 - 1.0 / 3.0).abs() < 1e-15);
        assert!((m6 - 1.0 / 105.0).abs() < 1e-16);
    }

    #[test]
    fn full_and_empty_regions() {
        let full = RegionSpec::full(s2()).unwrap();
        let r = concentration_eigenvalue(&full, 6, 20, 40).unwrap();
        assert!((r.lambda_max - 1.0).abs() < 1e-10, "{}", r.lambda_max);
        assert!((r.trace - 49.0).abs() < 1e-9);
        assert_eq!(r.max_asymmetry, 0.0);
        assert_eq!(r.n_nodes, 800);

        let empty = FnRegion::new(s2(), |_: &[f64]| false).unwrap();
        let r = concentration_eigenvalue(&empty, 6, 20, 40).unwrap();
        assert_eq!(r.lambda_max, 0.0);
        assert_eq!(r.n_inside, 0);
    }

    #[test]
    fn cap_eigenvalue_is_a_proper_fraction() {
        let cap = RegionSpec::new(
            s2(),
            vec![Cap {
                center: vec![0.0, 0.0, 1.0],
                delta: 0.8,
            }],
            false,
        )
        .unwrap();
        let r = concentration_eigenvalue(&cap, 5, 18, 36).unwrap();
        assert!(r.lambda_max > 0.1 && r.lambda_max < 1.0, "{}", r.lambda_max);
        // refining the rule changes the value only slightly
        let fine = concentration_eigenvalue(&cap, 5, 40, 80).unwrap();
        assert!((fine.lambda_max - r.lambda_max).abs() < 0.05);
        assert!(r.converged && fine.converged);
    }

    #[test]
    fn lanczos_matches_a_known_spectrum() {
        let diag: Vec<f64> = (0..50).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let (top, _, ok) = lanczos_top(50, |x| x.iter().zip(&diag).map(|(a, b)| a * b).collect()).unwrap();
        assert!(ok);
        assert!((top - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let full = RegionSpec::full(s2()).unwrap();
        assert!(concentration_eigenvalue(&full, 10, 27, 60).is_err());
        assert!(concentration_eigenvalue(&full, 10, 28, 20).is_err());
        let s3 = RegionSpec::full("s3".parse().unwrap()).unwrap();
        assert!(concentration_eigenvalue(&s3, 2, 20, 40).is_err());
    }
}

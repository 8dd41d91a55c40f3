use capsieve::manifold::eigenspace_info;
use capsieve::region::{
    cap_contains, cap_fraction, max_nyquist_density_with, normalize, Cap, RegionSpec, SearchConfig,
};
use capsieve::sieve::{a_constant, lp_bound, measure_bound_with, nyquist_zero, Atom, MeasureSpec};
use capsieve::specfun::{jacobi_at_one, jacobi_eval};
use capsieve::SpaceParams;
use proptest::prelude::*;

fn unit(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    normalize(&mut v).unwrap();
    v
}

/// Reproducing kernel `Σ_{k ≤ K} d_k P_k(t)/P_k(1)` over the index set.
fn kernel(space: &SpaceParams, k_max: usize, t: f64) -> f64 {
    space
        .indices_up_to(k_max)
        .map(|k| {
            let idx = space.jacobi(k);
            eigenspace_info(space, k).unwrap().d_k * jacobi_eval(idx, t.clamp(-1.0, 1.0)).unwrap() / jacobi_at_one(idx)
        })
        .sum()
}

/// Reflection through the hyperplane orthogonal to `v`.
fn reflect(v: &[f64], x: &[f64]) -> Vec<f64> {
    let vv: f64 = v.iter().map(|a| a * a).sum();
    let s = 2.0 * v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / vv;
    x.iter().zip(v).map(|(a, b)| a - s * b).collect()
}

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim).prop_filter("nonzero", |v| v.iter().map(|a| a * a).sum::<f64>() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// `Σ_a w_a |f(a)|² ≤ T₂(K,δ) sup_y μ(C_δ(y)) ‖f‖²` for `f` a random
    /// combination of reproducing kernels, whose norm is exact:
    /// `‖Σ c_i K(·, y_i)‖² = Σ c_i c_j K(y_i, y_j)`.
    #[test]
    fn discrete_large_sieve(
        id in prop::sample::select(vec!["s1", "s2", "s3", "rp2"]),
        k_pick in 1usize..7,
        frac in 0.0f64..0.9,
        centers in prop::collection::vec((point(4), -1.0f64..1.0), 1..5),
        atoms in prop::collection::vec((point(4), 0.1f64..1.0), 1..25),
    ) {
        let space: SpaceParams = id.parse().unwrap();
        let k = if space.in_index_set(k_pick) { k_pick } else { k_pick + 1 };
        let dim = space.d + 1;
        let t = nyquist_zero(&space, k).unwrap();
        let delta = t + frac * (1.0 - t);
        let ys: Vec<(Vec<f64>, f64)> = centers.iter().map(|(p, c)| (unit(&p[..dim]), *c)).collect();
        let f = |x: &[f64]| -> f64 { ys.iter().map(|(y, c)| c * kernel(&space, k, space.cosine(x, y))).sum() };
        let norm_sq: f64 = ys
            .iter()
            .flat_map(|(a, ca)| ys.iter().map(move |(b, cb)| (a, ca, b, cb)))
            .map(|(a, ca, b, cb)| ca * cb * kernel(&space, k, space.cosine(a, b)))
            .sum();
        let mu = MeasureSpec::new(
            atoms.iter().map(|(p, w)| Atom { point: p[..dim].to_vec(), weight: *w }).collect(),
        ).unwrap();
        let lhs: f64 = mu.atoms.iter().map(|a| a.weight * f(&a.point).powi(2)).sum();
        let config = SearchConfig { grid_size: 1024, ..SearchConfig::default() };
        let b = measure_bound_with(&space, k, delta, &mu, &config, 32).unwrap();
        prop_assert!(lhs <= b.bound * norm_sq * (1.0 + 1e-9) + 1e-12, "{} > {} * {}", lhs, b.bound, norm_sq);
    }

    /// Adding caps never lowers the fraction of a fixed cap that is covered.
    #[test]
    fn union_is_monotone(
        a in point(3), b in point(3), c in point(3),
        da in 0.0f64..0.95, db in 0.0f64..0.95, dc in 0.3f64..0.95,
        seed in 0u64..1000,
    ) {
        let s2: SpaceParams = "s2".parse().unwrap();
        let one = RegionSpec::new(s2.clone(), vec![Cap { center: a.clone(), delta: da }], false).unwrap();
        let two = RegionSpec::new(
            s2,
            vec![Cap { center: a, delta: da }, Cap { center: b, delta: db }],
            false,
        ).unwrap();
        let (f1, _) = cap_fraction(&one, &c, dc, 500, seed).unwrap();
        let (f2, _) = cap_fraction(&two, &c, dc, 500, seed).unwrap();
        prop_assert!(f1 <= f2);
    }

    /// Cap membership is invariant under reflections of the sphere.
    #[test]
    fn membership_is_isometry_invariant(
        id in prop::sample::select(vec!["s2", "s3", "rp3"]),
        v in point(4), c in point(4), x in point(4), delta in 0.0f64..1.0,
    ) {
        let space: SpaceParams = id.parse().unwrap();
        let dim = space.d + 1;
        let (v, c, x) = (&v[..dim], unit(&c[..dim]), unit(&x[..dim]));
        let gap = (space.cosine(&c, &x) - delta).abs();
        prop_assume!(gap > 1e-12);
        prop_assert_eq!(
            cap_contains(&space, &c, delta, &x),
            cap_contains(&space, &reflect(v, &c), delta, &reflect(v, &x))
        );
    }
}

#[test]
fn density_is_isometry_invariant() {
    let s2: SpaceParams = "s2".parse().unwrap();
    let caps = vec![
        Cap {
            center: vec![0.2, 0.1, 1.0],
            delta: 0.9,
        },
        Cap {
            center: vec![1.0, -0.3, 0.2],
            delta: 0.85,
        },
    ];
    let v = [0.3, -0.7, 0.5];
    let rotated: Vec<Cap> = caps
        .iter()
        .map(|c| Cap {
            center: reflect(&v, &unit(&c.center)),
            delta: c.delta,
        })
        .collect();
    let config = SearchConfig::default();
    let a = max_nyquist_density_with(&RegionSpec::new(s2.clone(), caps, false).unwrap(), 10, 3000, 7, &config).unwrap();
    let b = max_nyquist_density_with(&RegionSpec::new(s2, rotated, false).unwrap(), 10, 3000, 7, &config).unwrap();
    assert!(
        (a.rho - b.rho).abs() <= 4.0 * (a.std_error + b.std_error) + 0.01,
        "{} vs {}",
        a.rho,
        b.rho
    );
}

#[test]
fn l2_bound_is_capped_product() {
    let s2: SpaceParams = "s2".parse().unwrap();
    let a = a_constant(&s2, 12).unwrap();
    for rho in [0.0, 0.05, 0.2, 0.9] {
        let v = lp_bound(&s2, 12, rho, 2.0).unwrap();
        assert!((v - (a * rho).min(1.0)).abs() < 1e-15);
    }
    // exponent saturates at p = 2
    assert_eq!(
        lp_bound(&s2, 12, 0.05, 3.0).unwrap(),
        lp_bound(&s2, 12, 0.05, 2.0).unwrap()
    );
    let half = lp_bound(&s2, 12, 0.05, 1.5).unwrap();
    assert!((half - (a * 0.05).sqrt()).abs() < 1e-15);
}

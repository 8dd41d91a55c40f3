//! Regions on `S^d` and `P^d(ℝ)` built from geodesic caps, and the maximum
//! Nyquist density `ρ(Ω, K)`.
//!
//! Points are unit vectors in `ℝ^{d+1}`. On `P^d(ℝ)` a vector stands for the
//! pair `±x` and the cosine coordinate is `|⟨x, y⟩|`.

mod geometry;
mod sampling;

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::SpaceParams;
use crate::specfun::largest_zero;

pub(crate) use geometry::{coordinate_ascent, dot, midpoints, Householder};
pub use geometry::{normalize, sphere_grid};
pub use sampling::sample_cap;
pub(crate) use sampling::{pole_samples, PoleSamples};

/// A closed geodesic cap `{x : cos(γ d(x, center)) ≥ delta}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub center: Vec<f64>,
    pub delta: f64,
}

/// Membership oracle for a measurable subset of a sphere-model space.
pub trait Region: Sync {
    fn space(&self) -> &SpaceParams;

    fn contains(&self, x: &[f64]) -> bool;

    /// Points worth trying as cap centers in the density search.
    fn anchors(&self) -> Vec<Vec<f64>> {
        Vec::new()
    }

    /// Short human-readable description.
    fn summary(&self) -> String {
        format!("region on {}", self.space().id)
    }
}

/// A region given by an arbitrary membership function.
pub struct FnRegion<F> {
    space: SpaceParams,
    f: F,
}

impl<F: Fn(&[f64]) -> bool + Sync> FnRegion<F> {
    pub fn new(space: SpaceParams, f: F) -> Result<Self> {
        if !space.has_sphere_model() {
            return Err(Error::UnsupportedSpace {
                op: "region",
                space: space.id,
            });
        }
        Ok(Self { space, f })
    }
}

impl<F: Fn(&[f64]) -> bool + Sync> Region for FnRegion<F> {
    fn space(&self) -> &SpaceParams {
        &self.space
    }

    fn contains(&self, x: &[f64]) -> bool {
        (self.f)(x)
    }
}

/// A union of caps, optionally complemented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "RegionFile", try_from = "RegionFile")]
pub struct RegionSpec {
    pub space: SpaceParams,
    pub complement: bool,
    pub caps: Vec<Cap>,
}

/// On-disk layout: `{"space": "s2", "complement": false, "caps": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    space: String,
    #[serde(default)]
    complement: bool,
    #[serde(default)]
    caps: Vec<Cap>,
}

impl From<RegionSpec> for RegionFile {
    fn from(r: RegionSpec) -> Self {
        RegionFile {
            space: r.space.id,
            complement: r.complement,
            caps: r.caps,
        }
    }
}

impl TryFrom<RegionFile> for RegionSpec {
    type Error = Error;

    fn try_from(f: RegionFile) -> Result<Self> {
        let space: SpaceParams = f.space.parse()?;
        RegionSpec::new(space, f.caps, f.complement)
    }
}

/// Normalizes `center` after checking its length and dimension.
pub(crate) fn unit_center(space: &SpaceParams, center: &[f64]) -> Result<Vec<f64>> {
    if center.len() != space.d + 1 {
        return Err(Error::Region(format!(
            "center has {} coordinates, {} needs {}",
            center.len(),
            space.id,
            space.d + 1
        )));
    }
    let mut c = center.to_vec();
    normalize(&mut c)?;
    Ok(c)
}

impl RegionSpec {
    /// Validates the caps and normalizes their centers.
    pub fn new(space: SpaceParams, caps: Vec<Cap>, complement: bool) -> Result<Self> {
        if !space.has_sphere_model() {
            return Err(Error::UnsupportedSpace {
                op: "region",
                space: space.id,
            });
        }
        let left = space.left_endpoint();
        let caps = caps
            .into_iter()
            .map(|cap| {
                if !(cap.delta >= left && cap.delta <= 1.0) {
                    return Err(Error::Region(format!(
                        "cap delta {} outside [{left}, 1] for {}",
                        cap.delta, space.id
                    )));
                }
                Ok(Cap {
                    center: unit_center(&space, &cap.center)?,
                    delta: cap.delta,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            space,
            complement,
            caps,
        })
    }

    /// The whole space.
    pub fn full(space: SpaceParams) -> Result<Self> {
        Self::new(space, Vec::new(), true)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Region(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Region(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("region serializes")
    }
}

impl Region for RegionSpec {
    fn space(&self) -> &SpaceParams {
        &self.space
    }

    fn contains(&self, x: &[f64]) -> bool {
        let inside = self
            .caps
            .iter()
            .any(|cap| self.space.cosine(x, &cap.center) >= cap.delta);
        inside != self.complement
    }

    fn anchors(&self) -> Vec<Vec<f64>> {
        self.caps.iter().map(|c| c.center.clone()).collect()
    }

    fn summary(&self) -> String {
        format!(
            "{}{} cap(s) on {}",
            if self.complement { "complement of " } else { "" },
            self.caps.len(),
            self.space.id
        )
    }
}

/// Whether `x` lies in the closed cap `C_δ(center)`.
pub fn cap_contains(space: &SpaceParams, center: &[f64], delta: f64, x: &[f64]) -> bool {
    space.cosine(x, center) >= delta
}

/// Monte Carlo estimate of `|Ω ∩ C_δ(center)| / |C_δ(center)|` and its
/// standard error `√(f(1−f)/n)`.
pub fn cap_fraction(region: &dyn Region, center: &[f64], delta: f64, n: usize, seed: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::precondition("cap_fraction", "need at least one sample"));
    }
    let pts = sample_cap(region.space(), center, delta, n, seed)?;
    let hits = pts.iter().filter(|x| region.contains(x)).count();
    let f = hits as f64 / n as f64;
    Ok((f, (f * (1.0 - f) / n as f64).sqrt()))
}

/// Candidate set and refinement schedule of the density search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub grid_size: usize,
    pub refine_iterations: usize,
    /// Number of best candidates that are refined.
    pub refine_starts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_size: 4096,
            refine_iterations: 20,
            refine_starts: 4,
        }
    }
}

/// Estimate of the maximum Nyquist density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub rho: f64,
    pub argmax_center: Vec<f64>,
    pub std_error: f64,
    pub n_samples: usize,
    pub n_centers: usize,
    pub seed: u64,
    #[serde(rename = "K")]
    pub k: usize,
    pub delta: f64,
    pub search: SearchConfig,
}

/// Counts cap samples that land in `region`, the cap being the pole samples
/// rotated to `center`.
fn hits(region: &dyn Region, samples: &PoleSamples, center: &[f64], buf: &mut [f64]) -> usize {
    let h = Householder::to(center);
    samples
        .rows()
        .filter(|p| {
            h.apply(p, buf);
            region.contains(buf)
        })
        .count()
}

/// `ρ(Ω, K)` with the default search configuration.
pub fn max_nyquist_density(region: &dyn Region, k: usize, n_per_center: usize, seed: u64) -> Result<DensityEstimate> {
    max_nyquist_density_with(region, k, n_per_center, seed, &SearchConfig::default())
}

/// `ρ(Ω, K) = sup_y |Ω ∩ C_{t_KK}(y)| / |C_{t_KK}(y)|`, estimated over the
/// region's cap centers, their pairwise midpoints and a sphere grid, followed
/// by coordinate ascent from the best candidates.
///
/// Every center is scored on the same pole-frame samples rotated into place,
/// so differences between centers are not swamped by sampling noise and the
/// result does not depend on evaluation order.
pub fn max_nyquist_density_with(
    region: &dyn Region,
    k: usize,
    n_per_center: usize,
    seed: u64,
    config: &SearchConfig,
) -> Result<DensityEstimate> {
    let space = region.space();
    if !space.has_sphere_model() {
        return Err(Error::UnsupportedSpace {
            op: "max_nyquist_density",
            space: space.id.clone(),
        });
    }
    if k == 0 {
        return Err(Error::precondition("max_nyquist_density", "K must be >= 1"));
    }
    space.check_index(k)?;
    if n_per_center == 0 {
        return Err(Error::precondition("max_nyquist_density", "need at least one sample"));
    }
    let delta = largest_zero(space.jacobi(k))?.t_nn;
    let samples = pole_samples(space, delta, n_per_center, seed);
    let dim = space.d + 1;

    let anchors = region.anchors();
    let mut candidates = anchors.clone();
    candidates.extend(midpoints(&anchors, space.index_stride == 2));
    candidates.extend(sphere_grid(space.d, config.grid_size, seed));

    let scores: Vec<usize> = candidates
        .par_iter()
        .map_init(|| vec![0.0; dim], |buf, c| hits(region, &samples, c, buf))
        .collect();

    // best first, ties broken by candidate index
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));

    let step = 0.5 * delta.clamp(-1.0, 1.0).acos();
    let refined: Vec<(Vec<f64>, f64)> = order
        .iter()
        .take(config.refine_starts.max(1))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| {
            let mut buf = vec![0.0; dim];
            coordinate_ascent(&candidates[i], step, config.refine_iterations, |c| {
                hits(region, &samples, c, &mut buf) as f64
            })
        })
        .collect();
    let (center, best) = refined
        .into_iter()
        .fold((Vec::new(), -1.0), |acc, r| if r.1 > acc.1 { r } else { acc });

    let n = n_per_center as f64;
    let rho = best / n;
    Ok(DensityEstimate {
        rho,
        argmax_center: center,
        std_error: (rho * (1.0 - rho) / n).sqrt(),
        n_samples: n_per_center,
        n_centers: candidates.len(),
        seed,
        k,
        delta,
        search: *config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::cap_measure;

    fn s(id: &str) -> SpaceParams {
        id.parse().unwrap()
    }

    fn single_cap(space: &str, center: Vec<f64>, delta: f64) -> RegionSpec {
        RegionSpec::new(s(space), vec![Cap { center, delta }], false).unwrap()
    }

    #[test]
    fn cap_contains_examples() {
        let s2 = s("s2");
        let c = [0.0, 0.0, 1.0];
        assert!(cap_contains(&s2, &c, 0.999, &c));
        assert!(cap_contains(&s2, &c, 0.0, &[1.0, 0.0, 0.0]));
        assert!(!cap_contains(&s2, &c, 0.0, &[0.0, 0.0, -1.0]));
        let rp2 = s("rp2");
        assert!(cap_contains(&rp2, &c, 0.9, &[0.0, 0.0, -1.0]));
    }

    #[test]
    fn samples_lie_in_the_cap() {
        for id in ["s1", "s2", "s3", "rp2", "rp3", "s5"] {
            let sp = s(id);
            let mut c: Vec<f64> = (0..=sp.d).map(|i| (i as f64 + 1.0).sin()).collect();
            normalize(&mut c).unwrap();
            let delta = if sp.index_stride == 2 { 0.4 } else { -0.2 };
            let pts = sample_cap(&sp, &c, delta, 2000, 5).unwrap();
            for p in &pts {
                assert!((dot(p, p) - 1.0).abs() < 1e-12);
                assert!(cap_contains(&sp, &c, delta - 1e-12, p), "{id}");
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let sp = s("s3");
        let c = [0.5, 0.5, 0.5, 0.5];
        assert_eq!(
            sample_cap(&sp, &c, 0.3, 50, 9).unwrap(),
            sample_cap(&sp, &c, 0.3, 50, 9).unwrap()
        );
        assert_ne!(
            sample_cap(&sp, &c, 0.3, 50, 9).unwrap(),
            sample_cap(&sp, &c, 0.3, 50, 10).unwrap()
        );
    }

    #[test]
    fn hemisphere_mean_is_one_half() {
        let sp = s("s2");
        let c = [0.0, 1.0, 0.0];
        let n = 100_000;
        let pts = sample_cap(&sp, &c, 0.0, n, 42).unwrap();
        let ts: Vec<f64> = pts.iter().map(|p| dot(p, &c)).collect();
        let mean = ts.iter().sum::<f64>() / n as f64;
        let var = ts.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / n as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn cdf_matches_cap_measure_ratio() {
        for (id, delta, inner) in [("s2", 0.2, 0.7), ("s3", -0.5, 0.4), ("s5", 0.1, 0.6), ("rp3", 0.3, 0.8)] {
            let sp = s(id);
            let mut c = vec![0.0; sp.d + 1];
            c[sp.d] = 1.0;
            let n = 40_000;
            let pts = sample_cap(&sp, &c, delta, n, 3).unwrap();
            let f = pts.iter().filter(|p| sp.cosine(p, &c) >= inner).count() as f64 / n as f64;
            let expected = cap_measure(&sp, inner).unwrap() / cap_measure(&sp, delta).unwrap();
            let se = (expected * (1.0 - expected) / n as f64).sqrt();
            assert!((f - expected).abs() < 3.0 * se, "{id}: {f} vs {expected}");
        }
    }

    #[test]
    fn cap_fraction_examples() {
        let sp = s("s2");
        let c = vec![0.0, 0.0, 1.0];
        let cap = single_cap("s2", c.clone(), 0.5);
        assert_eq!(cap_fraction(&cap, &c, 0.5, 1000, 1).unwrap(), (1.0, 0.0));
        let comp = RegionSpec::new(sp.clone(), cap.caps.clone(), true).unwrap();
        assert_eq!(cap_fraction(&comp, &c, 0.5, 1000, 1).unwrap(), (0.0, 0.0));
        // a small polar cap inside the upper hemisphere
        let hemi = single_cap("s2", c.clone(), 0.0);
        let (f, se) = cap_fraction(&hemi, &[0.0, 0.2, 0.98], 0.95, 1000, 1).unwrap();
        assert!((f - 1.0).abs() <= 3.0 * se);
    }

    #[test]
    fn region_json_round_trip() {
        let text = r#"{"space":"s2","complement":false,"caps":[{"center":[0.0,0.0,2.0],"delta":0.9}]}"#;
        let r = RegionSpec::from_json(text).unwrap();
        assert_eq!(r.caps[0].center, vec![0.0, 0.0, 1.0]);
        let again = RegionSpec::from_json(&r.to_json()).unwrap();
        assert_eq!(again, r);
        assert_eq!(again.to_json(), r.to_json());

        for bad in [
            r#"{"space":"cp4","caps":[]}"#,
            r#"{"space":"s2","caps":[{"center":[0,0],"delta":0.9}]}"#,
            r#"{"space":"s2","caps":[{"center":[0,0,0],"delta":0.9}]}"#,
            r#"{"space":"rp2","caps":[{"center":[0,0,1],"delta":-0.5}]}"#,
            r#"{"space":"s2","caps":[],"extra":1}"#,
        ] {
            assert!(RegionSpec::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn density_of_full_space_and_nyquist_cap() {
        let full = RegionSpec::full(s("s2")).unwrap();
        let est = max_nyquist_density(&full, 6, 500, 1).unwrap();
        assert_eq!(est.rho, 1.0);

        let t = largest_zero(s("s2").jacobi(6)).unwrap().t_nn;
        let y0 = vec![0.6, 0.0, 0.8];
        let cap = single_cap("s2", y0.clone(), t);
        let est = max_nyquist_density(&cap, 6, 500, 1).unwrap();
        assert_eq!(est.rho, 1.0);
        assert!(dot(&est.argmax_center, &y0) > 0.99);
    }

    #[test]
    fn density_of_a_smaller_cap() {
        let sp = s("s2");
        let k = 8;
        let t = largest_zero(sp.jacobi(k)).unwrap().t_nn;
        let inner = 0.5 * (1.0 + t);
        let y0 = vec![0.0, 0.6, -0.8];
        let cap = single_cap("s2", y0.clone(), inner);
        let n = 4000;
        let est = max_nyquist_density(&cap, k, n, 2).unwrap();
        let expected = cap_measure(&sp, inner).unwrap() / cap_measure(&sp, t).unwrap();
        // the search maximizes over centers, which biases upward by a few stderr
        assert!(est.rho >= expected - 3.0 * est.std_error, "{} vs {expected}", est.rho);
        assert!(est.rho <= expected + 6.0 * est.std_error, "{} vs {expected}", est.rho);
        assert!(dot(&est.argmax_center, &y0) > 0.99);
    }

    #[test]
    fn density_rejects_bad_inputs() {
        let r = RegionSpec::full(s("rp2")).unwrap();
        assert!(max_nyquist_density(&r, 3, 100, 1).is_err());
        assert!(max_nyquist_density(&r, 0, 100, 1).is_err());
        assert!(RegionSpec::full(s("cp4")).is_err());
        let f = FnRegion::new(s("s2"), |x: &[f64]| x[0] > 0.0).unwrap();
        assert!(max_nyquist_density(&f, 4, 0, 1).is_err());
    }

    #[test]
    fn density_is_deterministic_and_works_on_plug_in_regions() {
        let f = FnRegion::new(s("s3"), |x: &[f64]| x[0] + x[1] > 0.5).unwrap();
        let cfg = SearchConfig {
            grid_size: 256,
            ..SearchConfig::default()
        };
        let a = max_nyquist_density_with(&f, 5, 300, 7, &cfg).unwrap();
        let b = max_nyquist_density_with(&f, 5, 300, 7, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.rho > 0.9);
    }
}

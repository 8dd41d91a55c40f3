//! Verification suites: each produces a list of named checks, a measured
//! value, a threshold and whether the comparison holds.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{cap_measure, catalog, eigenspace_info, make_space, Family, SpaceParams};
use crate::oracle::{
    concentration_eigenvalue, convolution_check, default_grid_size, extremal_bruteforce, limit_check, ordering_check,
};
use crate::region::{max_nyquist_density_with, Cap, FnRegion, RegionSpec, SearchConfig};
use crate::sieve::{a_constant, nyquist_zero, t2_constant};
use crate::specfun::{
    bessel_first_zero, euler_rayleigh_bound, largest_zero, mehler_heine_residual, weighted_tail_rule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
}

impl Comparison {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::Le => value <= threshold,
            Comparison::Lt => value < threshold,
            Comparison::Ge => value >= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Measured value; non-finite measurements are stored as `f64::MAX`.
    pub value: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, comparison: Comparison, threshold: f64) -> Self {
        let pass = comparison.holds(value, threshold);
        let value = if value.is_finite() { value } else { f64::MAX };
        Self {
            name: name.into(),
            value,
            threshold,
            comparison,
            pass,
        }
    }

    pub fn le(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(name, value, Comparison::Le, threshold)
    }

    pub fn lt(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(name, value, Comparison::Lt, threshold)
    }

    pub fn ge(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(name, value, Comparison::Ge, threshold)
    }

    /// A boolean outcome as value 1 or 0 against threshold 1.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::ge(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    ClosedForm,
    Oracle,
    Soundness,
    Limit,
    Ordering,
    Zeros,
    MehlerHeine,
    Convolution,
    Spectral,
    Structural,
    All,
}

impl Suite {
    /// Every concrete suite, in run order.
    pub const EACH: [Suite; 10] = [
        Suite::ClosedForm,
        Suite::Oracle,
        Suite::Soundness,
        Suite::Limit,
        Suite::Ordering,
        Suite::Zeros,
        Suite::MehlerHeine,
        Suite::Convolution,
        Suite::Spectral,
        Suite::Structural,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForm => "closed_form",
            Suite::Oracle => "oracle",
            Suite::Soundness => "soundness",
            Suite::Limit => "limit",
            Suite::Ordering => "ordering",
            Suite::Zeros => "zeros",
            Suite::MehlerHeine => "mehler_heine",
            Suite::Convolution => "convolution",
            Suite::Spectral => "spectral",
            Suite::Structural => "structural",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s.replace('-', "_"))
            .copied()
            .ok_or_else(|| Error::precondition("verify", format!("unknown suite '{s}'")))
    }
}

/// Restrictions for the suites that accept them (`oracle`, `ordering`).
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub space: Option<SpaceParams>,
    pub k: Option<usize>,
}

/// Runs one suite, or all of them in order.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Report> {
    let checks = if suite == Suite::All {
        let mut all = Vec::new();
        for s in Suite::EACH {
            all.extend(suite_checks(s, opts)?.into_iter().map(|mut c| {
                c.name = format!("{s}/{}", c.name);
                c
            }));
        }
        all
    } else {
        suite_checks(suite, opts)?
    };
    let all_passed = checks.iter().all(|c| c.pass);
    Ok(Report {
        version: crate::VERSION.to_string(),
        suite,
        checks,
        all_passed,
    })
}

/// Checks of a single concrete suite.
pub fn suite_checks(suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>> {
    match suite {
        Suite::ClosedForm => closed_form(),
        Suite::Oracle => oracle(opts),
        Suite::Soundness => soundness(),
        Suite::Limit => limit(),
        Suite::Ordering => ordering(opts),
        Suite::Zeros => zeros(),
        Suite::MehlerHeine => mehler_heine(),
        Suite::Convolution => convolution(),
        Suite::Spectral => spectral(),
        Suite::Structural => structural(),
        Suite::All => run_suite(Suite::All, opts).map(|r| r.checks),
    }
}

fn space(id: &str) -> SpaceParams {
    id.parse().expect("built-in space ids parse")
}

fn relative(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn closed_form() -> Result<Vec<Check>> {
    let s2 = space("s2");
    Ok(vec![Check::le(
        "t2(s2,K=0,delta=0) - 2",
        (t2_constant(&s2, 0, 0.0)? - 2.0).abs(),
        1e-12,
    )])
}

fn oracle(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let spaces = match &opts.space {
        Some(s) => vec![s.clone()],
        None => vec![space("s2"), space("s3"), space("rp2")],
    };
    let ks = match opts.k {
        Some(k) => vec![k],
        None => vec![2, 4, 8],
    };
    let mut checks = Vec::new();
    for sp in &spaces {
        for &k in &ks {
            let t = if k == 0 {
                sp.left_endpoint()
            } else {
                nyquist_zero(sp, k)?
            };
            for delta in [t, 0.5 * (1.0 + t)] {
                let tag = format!("{},K={k},delta={delta:.6}", sp.id);
                let exact = t2_constant(sp, k, delta)?;
                let r = extremal_bruteforce(sp, k, delta, default_grid_size(k))?;
                checks.push(Check::le(
                    format!("{tag}: oracle rel. error"),
                    relative(r.T2_oracle, exact),
                    0.01,
                ));
                checks.push(Check::le(
                    format!("{tag}: search rel. error"),
                    relative(r.T2_search, exact),
                    0.01,
                ));
                checks.push(Check::le(
                    format!("{tag}: lower bound excess"),
                    (r.T2_lower - exact) / exact,
                    1e-8,
                ));
                checks.push(Check::ge(
                    format!("{tag}: correlation with P_K"),
                    r.search_correlation,
                    0.99,
                ));
                let min_profile = r.minimizer_profile.iter().copied().fold(f64::INFINITY, f64::min);
                checks.push(Check::ge(format!("{tag}: profile minimum"), min_profile, -1e-9));
                checks.push(Check::ge(format!("{tag}: T2 >= 1"), r.T2_oracle, 1.0));
            }
        }
    }
    Ok(checks)
}

/// Number of random regions in the soundness battery.
pub const SOUNDNESS_REGIONS: usize = 20;
/// Degrees of the soundness battery.
pub const SOUNDNESS_DEGREES: [usize; 3] = [5, 10, 20];
/// Cap samples per candidate center in the soundness battery.
pub const SOUNDNESS_SAMPLES: usize = 2000;

/// Seeded union of one to four caps on `S²` with `δ ∈ [0.3, 0.97]`.
pub fn random_cap_union(seed: u64) -> Result<RegionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_caps = rng.random_range(1..=4);
    let caps = (0..n_caps)
        .map(|_| {
            let center: Vec<f64> = (0..3).map(|_| StandardNormal.sample(&mut rng)).collect();
            Cap {
                center,
                delta: rng.random_range(0.3..0.97),
            }
        })
        .collect();
    RegionSpec::new(space("s2"), caps, false)
}

/// `(λ_max, A_K (ρ + 3σ))` for one region and degree.
pub fn soundness_pair(region: &RegionSpec, k: usize) -> Result<(f64, f64)> {
    let n_theta = 2 * k + 24;
    let lambda = concentration_eigenvalue(region, k, n_theta, 2 * n_theta)?.lambda_max;
    let density = max_nyquist_density_with(region, k, SOUNDNESS_SAMPLES, 42, &SearchConfig::default())?;
    let bound = a_constant(&region.space, k)? * (density.rho + 3.0 * density.std_error);
    Ok((lambda, bound))
}

fn soundness() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let polar = RegionSpec::new(
        space("s2"),
        vec![Cap {
            center: vec![0.0, 0.0, 1.0],
            delta: 0.8,
        }],
        false,
    )?;
    let (lambda, bound) = soundness_pair(&polar, 10)?;
    checks.push(Check::le(
        "polar cap |C|=0.1, K=10: lambda - bound",
        lambda - bound,
        0.0,
    ));
    for i in 0..SOUNDNESS_REGIONS {
        let region = random_cap_union(1000 + i as u64)?;
        for k in SOUNDNESS_DEGREES {
            let (lambda, bound) = soundness_pair(&region, k)?;
            checks.push(Check::le(
                format!("region {i} ({}), K={k}: lambda - bound", region.caps.len()),
                lambda - bound,
                0.0,
            ));
        }
    }
    Ok(checks)
}

fn limit() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for id in ["s2", "s3", "cp4"] {
        let sp = space(id);
        let c = limit_check(&sp, &[64, 128, 256, 512])?;
        checks.push(Check::flag(
            format!("{id}: gap decreasing over K=64..512"),
            c.decreasing,
        ));
        let last = c.rows.last().expect("nonempty list");
        checks.push(Check::le(
            format!("{id}: relative gap at K=512"),
            last.gap / c.A_infinity,
            0.02,
        ));
    }
    Ok(checks)
}

fn ordering(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let spaces = match &opts.space {
        Some(s) => vec![s.clone()],
        None => catalog(),
    };
    let k = opts.k.unwrap_or(50);
    spaces
        .iter()
        .map(|sp| {
            let worst = ordering_check(sp, k, 500, 42)?;
            Ok(Check::ge(format!("{},K={k}: worst violation", sp.id), worst, -1e-12))
        })
        .collect()
}

/// The five `(α, β)` pairs of the minimal catalog members above `S¹`.
fn zero_spaces() -> Vec<SpaceParams> {
    ["s2", "s3", "cp4", "hp8", "cay16"].iter().map(|id| space(id)).collect()
}

fn zeros() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for sp in zero_spaces() {
        let mut excess = f64::NEG_INFINITY;
        for k in 1..=100 {
            let t = largest_zero(sp.jacobi(k))?.t_nn;
            excess = excess.max(t - euler_rayleigh_bound(sp.jacobi(k)));
        }
        checks.push(Check::le(
            format!(
                "alpha={},beta={}: max(t_KK - Euler-Rayleigh), K<=100",
                sp.alpha, sp.beta
            ),
            excess,
            0.0,
        ));
        let j = bessel_first_zero(sp.alpha)?;
        let scaled: Vec<f64> = (32..=256)
            .map(|k| {
                let kf = k as f64;
                let t = largest_zero(sp.jacobi(k))?.t_nn;
                Ok(kf.powi(3) * (t - (1.0 - j * j / (2.0 * kf * kf))).abs())
            })
            .collect::<Result<_>>()?;
        let hi = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
        checks.push(Check::lt(
            format!(
                "alpha={},beta={}: spread of K^3 |t_KK - asymptotic|, K=32..256",
                sp.alpha, sp.beta
            ),
            hi / lo,
            4.0,
        ));
    }
    Ok(checks)
}

fn mehler_heine() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for id in ["s1", "rp2", "cp4", "hp8", "cay16"] {
        let sp = space(id);
        let j = bessel_first_zero(sp.alpha)?;
        for z in [0.5, 1.0, 2.0, j] {
            let residuals = [32usize, 64, 128, 256]
                .iter()
                .map(|&n| mehler_heine_residual(sp.jacobi(n), z))
                .collect::<Result<Vec<_>>>()?;
            let worst_ratio = residuals.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
            checks.push(Check::lt(
                format!("{id},z={z:.6}: max residual ratio over n=32..256"),
                worst_ratio,
                1.0,
            ));
        }
    }
    Ok(checks)
}

/// Seeded Legendre coefficients of a random zonal polynomial of degree ≤ 5.
pub fn random_zonal(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let degree = rng.random_range(0..=5);
    (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn convolution() -> Result<Vec<Check>> {
    let mut checks = vec![Check::le("constants", convolution_check(0, &[1.0], &[1.0], 8)?, 1e-10)];
    for (k, m) in [(1usize, 2usize), (3, 5), (0, 4)] {
        let kk = k.max(m);
        let mut g = vec![0.0; kk + 1];
        let mut h = vec![0.0; kk + 1];
        g[k] = ((2 * k + 1) as f64).sqrt();
        h[m] = ((2 * m + 1) as f64).sqrt();
        checks.push(Check::le(
            format!("Y_{k} * Y_{m}"),
            convolution_check(kk, &g, &h, 16)?,
            1e-8,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..10 {
        let g = random_zonal(&mut rng);
        let h = random_zonal(&mut rng);
        checks.push(Check::le(
            format!("random pair {i}"),
            convolution_check(5, &g, &h, 64)?,
            1e-7,
        ));
    }
    Ok(checks)
}

fn spectral() -> Result<Vec<Check>> {
    let k = 10;
    let n_theta = 2 * k + 8;
    let full = RegionSpec::full(space("s2"))?;
    let r = concentration_eigenvalue(&full, k, n_theta, 2 * n_theta)?;
    let dim = ((k + 1) * (k + 1)) as f64;
    let empty = FnRegion::new(space("s2"), |_: &[f64]| false)?;
    let e = concentration_eigenvalue(&empty, k, n_theta, 2 * n_theta)?;
    Ok(vec![
        Check::le("full space K=10: |lambda_max - 1|", (r.lambda_max - 1.0).abs(), 1e-6),
        Check::le(
            "full space K=10: relative trace error vs 121",
            (r.trace - dim).abs() / dim,
            1e-3,
        ),
        Check::le("full space K=10: asymmetry", r.max_asymmetry, 1e-14),
        Check::le("empty region: lambda_max", e.lambda_max, 0.0),
    ])
}

/// Spaces for the structural checks: each family over several dimensions.
fn structural_spaces() -> Vec<SpaceParams> {
    let mut out = Vec::new();
    for family in Family::ALL {
        let d0 = family.min_dimension();
        let step = match family {
            Family::Sphere | Family::RealProjective => 1,
            Family::ComplexProjective => 2,
            Family::QuaternionProjective => 4,
            Family::CayleyProjective => 8,
        };
        for i in 0..if family == Family::CayleyProjective { 1 } else { 6 } {
            out.push(make_space(family, d0 + i * step).expect("admissible dimension"));
        }
    }
    out
}

fn structural() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut non_integral = 0usize;
    let mut worst_identity: f64 = 0.0;
    let mut worst_mass: f64 = 0.0;
    for sp in structural_spaces() {
        for k in sp.indices_up_to(100) {
            if !eigenspace_info(&sp, k)?.integral {
                non_integral += 1;
            }
        }
        for k in [1, 2, 3, 4, 5, 6, 8, 16, 32, 64]
            .into_iter()
            .filter(|&k| sp.in_index_set(k))
        {
            let t = nyquist_zero(&sp, k)?;
            let product = cap_measure(&sp, t)? * t2_constant(&sp, k, t)?;
            worst_identity = worst_identity.max(relative(a_constant(&sp, k)?, product));
        }
        let rule = weighted_tail_rule(sp.alpha, sp.beta, sp.left_endpoint(), 32)?;
        let mass: f64 = sp.nu_perp * rule.weights.iter().sum::<f64>();
        worst_mass = worst_mass.max((mass - 1.0).abs());
    }
    checks.push(Check::le(
        "d_k integrality flags raised, k<=100",
        non_integral as f64,
        0.0,
    ));
    checks.push(Check::le("A_K vs |C_tKK| T2(K,tKK), K in 1..64", worst_identity, 1e-12));
    checks.push(Check::le("|nu(M) - 1|", worst_mass, 1e-12));
    Ok(checks)
}

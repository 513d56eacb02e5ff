//! Randomized verification harness.
//!
//! Generates seeded random instances, checks every inequality chain link
//! against the one-sided slack tolerance, and aggregates violation counts
//! and tightness statistics. A violation of a *derived* link is an
//! implementation bug (the fuzz run fails); violations of *printed* forms
//! are findings, collected by the [`audit`] submodule.
//!
//! Everything is a deterministic function of `(seed, index)`: instance `k`
//! draws from an independent ChaCha stream, so runs are reproducible and
//! order-independent.

pub mod audit;

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bombieri_bound, double_sum_m, holder_bound, middle_value, norm_expansion, pecaric_bounds,
    pecaric_chain, pecaric_lhs, pecaric_self_bounds, ratio_bound, BoundError, EvalContext,
};
use crate::exponents::{BranchSelector, ConjugatePair, HolderParams, MAX_EXPONENT};
use crate::gram::{inner_product, Complex, GramData, ProjectionData, VectorFamily};
use crate::instance::Instance;
use crate::slack_tol;

/// Entry distribution for random draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryDistribution {
    /// uniform over the closed unit disk
    UnitDiskUniform,
    /// standard complex Gaussian (independent N(0,1) components)
    Gaussian,
    /// zero with probability `1 - density`, else a unit-disk draw
    Sparse { density: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub instances: u64,
    /// Inclusive range for the family size `n`.
    pub n_range: (usize, usize),
    /// Inclusive range for the coordinate dimension `d`.
    pub d_range: (usize, usize),
    pub distribution: EntryDistribution,
    /// Conjugate-pair samples per instance; the first is always
    /// `p = alpha = gamma = 2`.
    pub pq_samples: u32,
    /// Also probe arbitrary (non-PSD) Hermitian Gram data in the audit.
    pub include_gram_direct: bool,
    /// Test-only: shrink every derived branch bound by this fraction before
    /// checking, to exercise the violation reporting path. 0 disables.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub fault_injection: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

impl FuzzConfig {
    pub fn new(seed: u64) -> Self {
        FuzzConfig {
            seed,
            instances: 10_000,
            n_range: (1, 8),
            d_range: (1, 8),
            distribution: EntryDistribution::UnitDiskUniform,
            pq_samples: 5,
            include_gram_direct: false,
            fault_injection: 0.0,
        }
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_entry(rng: &mut ChaCha8Rng, dist: EntryDistribution) -> Complex {
    match dist {
        EntryDistribution::UnitDiskUniform => {
            let r = rng.random::<f64>().sqrt();
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            Complex::from_polar(r, theta)
        }
        EntryDistribution::Gaussian => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(re, im)
        }
        EntryDistribution::Sparse { density } => {
            if rng.random::<f64>() < density {
                draw_entry(rng, EntryDistribution::UnitDiskUniform)
            } else {
                Complex::new(0.0, 0.0)
            }
        }
    }
}

fn draw_vector(rng: &mut ChaCha8Rng, d: usize, dist: EntryDistribution) -> Vec<Complex> {
    (0..d).map(|_| draw_entry(rng, dist)).collect()
}

/// Deterministic coordinate instance for `(config.seed, index)`.
pub fn random_instance(config: &FuzzConfig, index: u64) -> Instance {
    let mut rng = stream_rng(config.seed, index);
    let n = rng.random_range(config.n_range.0..=config.n_range.1);
    let d = rng.random_range(config.d_range.0..=config.d_range.1);
    let x = draw_vector(&mut rng, d, config.distribution);
    let vectors: Vec<Vec<Complex>> = (0..n)
        .map(|_| draw_vector(&mut rng, d, config.distribution))
        .collect();
    let c = draw_vector(&mut rng, n, config.distribution);
    let family = VectorFamily::new(vectors).expect("n, d >= 1 and finite entries");
    Instance::from_coordinates(x, family, Some(c)).expect("dimensions consistent")
}

const GRAM_DIRECT_STREAM_BIT: u64 = 1 << 63;

/// Deterministic Hermitian probe (generally not positive semidefinite) for
/// the audit: random Hermitian matrix with nonnegative diagonal plus
/// unconstrained projection data.
#[allow(clippy::needless_range_loop)] // i and j both index rows for the mirrored entry
pub fn random_gram_direct_instance(config: &FuzzConfig, index: u64) -> Instance {
    let mut rng = stream_rng(config.seed, GRAM_DIRECT_STREAM_BIT | index);
    let n = rng.random_range(config.n_range.0..=config.n_range.1);
    let mut rows = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for i in 0..n {
        rows[i][i] = Complex::new(draw_entry(&mut rng, config.distribution).norm(), 0.0);
        for j in i + 1..n {
            let z = draw_entry(&mut rng, config.distribution);
            rows[i][j] = z;
            rows[j][i] = z.conj();
        }
    }
    let proj = draw_vector(&mut rng, n, config.distribution);
    let norm_x_sq = draw_entry(&mut rng, config.distribution).norm_sqr();
    let c = draw_vector(&mut rng, n, config.distribution);
    let gram = GramData::from_matrix(rows).expect("Hermitian by construction");
    let proj = ProjectionData::new(proj, norm_x_sq).expect("finite entries");
    Instance::from_gram_parts(gram, proj, Some(c)).expect("lengths consistent")
}

/// Modified Gram-Schmidt with a second re-orthogonalization pass; `None`
/// when a draw is numerically rank-deficient.
fn orthonormalize(mut vectors: Vec<Vec<Complex>>) -> Option<Vec<Vec<Complex>>> {
    for i in 0..vectors.len() {
        for _pass in 0..2 {
            for j in 0..i {
                let coeff = inner_product(&vectors[i], &vectors[j]).expect("same dimension");
                let prev = vectors[j].clone();
                for (vi, pj) in vectors[i].iter_mut().zip(&prev) {
                    *vi -= coeff * pj;
                }
            }
        }
        let norm = inner_product(&vectors[i], &vectors[i])
            .expect("finite")
            .re
            .sqrt();
        if norm < 1e-8 {
            return None;
        }
        for vi in vectors[i].iter_mut() {
            *vi /= norm;
        }
    }
    Some(vectors)
}

/// Deterministic orthonormal family (QR-orthonormalized Gaussian draws,
/// `n <= d`) with `x` in its span.
pub fn random_orthonormal_instance(config: &FuzzConfig, index: u64) -> Instance {
    let mut rng = stream_rng(config.seed, index);
    let d = rng.random_range(config.d_range.0.max(1)..=config.d_range.1);
    let n = rng.random_range(config.n_range.0.min(d)..=config.n_range.1.min(d));
    let family = loop {
        let draws: Vec<Vec<Complex>> = (0..n)
            .map(|_| draw_vector(&mut rng, d, EntryDistribution::Gaussian))
            .collect();
        if let Some(vs) = orthonormalize(draws) {
            break vs;
        }
    };
    let weights = draw_vector(&mut rng, n, EntryDistribution::Gaussian);
    let mut x = vec![Complex::new(0.0, 0.0); d];
    for (w, e) in weights.iter().zip(&family) {
        for (xk, ek) in x.iter_mut().zip(e) {
            *xk += w * ek;
        }
    }
    let c = draw_vector(&mut rng, n, config.distribution);
    let family = VectorFamily::new(family).expect("orthonormalized vectors");
    Instance::from_coordinates(x, family, Some(c)).expect("dimensions consistent")
}

/// Log-uniform conjugate-pair draw: `p = 1 + 10^u`, `u` uniform on
/// `[-2, 2]`, clamped so both members stay inside the exponent domain.
fn sample_pair(rng: &mut ChaCha8Rng) -> ConjugatePair {
    let u: f64 = rng.random_range(-2.0..=2.0);
    let p = (1.0 + 10f64.powf(u)).clamp(crate::exponents::feasible_low(), MAX_EXPONENT);
    ConjugatePair::from_p(p).expect("clamped into the feasible domain")
}

/// The parameter samples for one instance: the all-2 reference first, then
/// `pq_samples - 1` log-uniform draws (secondary pairs always supplied).
pub fn params_stream(config: &FuzzConfig, index: u64) -> Vec<HolderParams> {
    let mut rng = stream_rng(config.seed, (1 << 62) | index);
    let two = ConjugatePair::from_p(2.0).expect("2 is self-conjugate");
    let mut out = vec![HolderParams::new(two).with_ab(two).with_gd(two)];
    for _ in 1..config.pq_samples.max(1) {
        let pq = sample_pair(&mut rng);
        let ab = sample_pair(&mut rng);
        let gd = sample_pair(&mut rng);
        out.push(HolderParams::new(pq).with_ab(ab).with_gd(gd));
    }
    out
}

/// One inequality link `lhs <= rhs` with its slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl LinkCheck {
    fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        LinkCheck {
            name: name.into(),
            lhs,
            rhs,
            slack,
            pass: slack >= -slack_tol(rhs),
        }
    }
}

/// All link checks for one instance at one parameter sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub instance_id: u64,
    pub checks: Vec<LinkCheck>,
    pub min_slack: f64,
    /// `(bound name, bound / chain lhs)` samples, for aggregation; only
    /// recorded when the chain lhs is positive and the ratio finite.
    pub tightness: Vec<(String, f64)>,
    /// Links dropped because the bound underflowed to zero against a
    /// positive left side. In exact arithmetic every link bound dominates
    /// its left side, so a zero bound with positive lhs can only be a
    /// floating-point underflow at extreme exponents, not a violation.
    pub numeric_skips: u64,
}

/// Evaluates every chain link valid for the instance.
///
/// Coordinate instances get all three chains plus the classical bounds.
/// Gram-direct data only guarantees the links that are pure majorizations
/// of nonnegative row data, so the Schwarz-dependent first links are
/// omitted for them. Params must carry both secondary pairs.
pub fn check_chain(
    instance: &Instance,
    params: &HolderParams,
    instance_id: u64,
) -> Result<ChainReport, BoundError> {
    let gram = instance.gram();
    let proj = instance.proj();
    let pq = params.pq();
    let geometric = !instance.is_gram_direct();
    let mut checks: Vec<LinkCheck> = Vec::with_capacity(64);
    let mut tightness: Vec<(String, f64)> = Vec::new();
    let mut numeric_skips = 0u64;
    let record = |checks: &mut Vec<LinkCheck>, skips: &mut u64, name: &str, lhs: f64, rhs: f64| {
        if rhs == 0.0 && lhs > 0.0 {
            *skips += 1;
        } else {
            checks.push(LinkCheck::new(name, lhs, rhs));
        }
    };

    // combination chain, with the instance coefficients as the alphas
    if let Some(alphas) = instance.c() {
        let expansion = norm_expansion(alphas, gram)?;
        let m = double_sum_m(alphas, gram)?;
        let holder = holder_bound(alphas, gram, pq)?;
        record(
            &mut checks,
            &mut numeric_skips,
            "combination_expansion_le_double_sum",
            expansion,
            m,
        );
        record(
            &mut checks,
            &mut numeric_skips,
            "combination_double_sum_le_holder",
            m,
            holder,
        );
        let ctx = EvalContext::Combination { alphas, gram };
        for branch in BranchSelector::all() {
            let sub = params
                .for_branch(branch)
                .map_err(|issues| BoundError::InvalidParams {
                    branch: branch.index(),
                    issues,
                })?;
            let bv = crate::bounds::derived_form_value(&ctx, &sub, branch)?;
            record(
                &mut checks,
                &mut numeric_skips,
                &format!("combination_holder_le_branch_{}", branch.index()),
                holder,
                bv.value,
            );
            if expansion > 0.0 {
                tightness.push((bv.name.clone(), bv.value / expansion));
            }
        }
        if expansion > 0.0 {
            tightness.push(("combination_holder".into(), holder / expansion));
        }
    }

    // Pecaric-type chain needs coefficients; its first link needs geometry
    if let Some(c) = instance.c() {
        let chain = pecaric_chain(proj, c, gram, params, &BranchSelector::all())?;
        let middle = chain.middle.expect("chain builder sets the middle bound");
        if geometric {
            record(
                &mut checks,
                &mut numeric_skips,
                "pecaric_lhs_le_holder",
                chain.lhs,
                middle,
            );
        }
        for bv in &chain.branches {
            record(
                &mut checks,
                &mut numeric_skips,
                &format!(
                    "pecaric_holder_le_branch_{}",
                    bv.branch.expect("branch set").index()
                ),
                middle,
                bv.value,
            );
            if chain.lhs > 0.0 {
                tightness.push((bv.name.clone(), bv.value / chain.lhs));
            }
        }
        if chain.lhs > 0.0 {
            tightness.push(("pecaric_holder".into(), middle / chain.lhs));
        }

        let (b1, b2) = pecaric_bounds(proj, c, gram)?;
        let lhs = pecaric_lhs(proj, c)?;
        if geometric {
            record(
                &mut checks,
                &mut numeric_skips,
                "pecaric_lhs_le_row_sum",
                lhs,
                b1,
            );
        }
        record(
            &mut checks,
            &mut numeric_skips,
            "pecaric_row_sum_le_max_row",
            b1,
            b2,
        );
        if lhs > 0.0 {
            tightness.push(("pecaric_row_sum".into(), b1 / lhs));
            tightness.push(("pecaric_max_row".into(), b2 / lhs));
        }
    }

    // self-coefficient chain and Bombieri-type results need only proj
    let (self_lhs, self_b1, self_b2) = pecaric_self_bounds(proj, gram)?;
    if geometric {
        record(
            &mut checks,
            &mut numeric_skips,
            "pecaric_self_lhs_le_row_sum",
            self_lhs,
            self_b1,
        );
    }
    record(
        &mut checks,
        &mut numeric_skips,
        "pecaric_self_row_sum_le_max_row",
        self_b1,
        self_b2,
    );

    let (energy, bombieri) = bombieri_bound(proj, gram)?;
    if geometric {
        record(
            &mut checks,
            &mut numeric_skips,
            "bombieri_lhs_le_bound",
            energy,
            bombieri,
        );
        if energy > 0.0 {
            tightness.push(("bombieri".into(), bombieri / energy));
        }
    }

    let ctx = EvalContext::Bombieri { proj, gram };
    let middle = middle_value(&ctx, pq)?;
    if geometric {
        record(
            &mut checks,
            &mut numeric_skips,
            "bombieri_lhs_le_middle",
            energy,
            middle,
        );
    }
    for branch in BranchSelector::all() {
        let sub = params
            .for_branch(branch)
            .map_err(|issues| BoundError::InvalidParams {
                branch: branch.index(),
                issues,
            })?;
        let bv = crate::bounds::derived_form_value(&ctx, &sub, branch)?;
        record(
            &mut checks,
            &mut numeric_skips,
            &format!("bombieri_middle_le_branch_{}", branch.index()),
            middle,
            bv.value,
        );
        if energy > 0.0 {
            tightness.push((bv.name.clone(), bv.value / energy));
        }
    }
    if energy > 0.0 {
        tightness.push(("bombieri_middle".into(), middle / energy));
    }

    let (ratio_lhs, ratio_rhs) = ratio_bound(proj, gram, pq)?;
    if geometric {
        record(
            &mut checks,
            &mut numeric_skips,
            "ratio_lhs_le_bound",
            ratio_lhs,
            ratio_rhs,
        );
    }

    let min_slack = checks.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
    tightness.retain(|(_, ratio)| ratio.is_finite());
    Ok(ChainReport {
        instance_id,
        checks,
        min_slack,
        tightness,
        numeric_skips,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkStats {
    pub checks: u64,
    pub violations: u64,
    pub min_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub count: u64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

fn quantiles(samples: &mut [f64]) -> Quantiles {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    let at = |q: f64| samples[((n - 1) as f64 * q).round() as usize];
    Quantiles {
        count: n as u64,
        min: samples[0],
        q25: at(0.25),
        median: at(0.5),
        q75: at(0.75),
        max: samples[n - 1],
    }
}

/// A derived-link violation, replayable from `(seed, instance_index)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub instance_index: u64,
    pub sample_index: u32,
    pub link: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub params: HolderParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub instances: u64,
    pub total_checks: u64,
    pub derived_violations: u64,
    pub links: BTreeMap<String, LinkStats>,
    pub tightness: BTreeMap<String, Quantiles>,
    /// Links dropped as floating-point underflow artifacts; see
    /// [`ChainReport::numeric_skips`].
    pub numeric_skips: u64,
    /// First violations encountered (capped), for replay.
    pub violations: Vec<ViolationRecord>,
}

const MAX_VIOLATION_RECORDS: usize = 32;

/// Runs the full chain check over the seeded instance stream.
pub fn fuzz(config: &FuzzConfig) -> Result<FuzzSummary, BoundError> {
    let mut links: BTreeMap<String, LinkStats> = BTreeMap::new();
    let mut samples: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut total_checks = 0u64;
    let mut derived_violations = 0u64;
    let mut numeric_skips = 0u64;

    for index in 0..config.instances {
        let instance = random_instance(config, index);
        for (k, params) in params_stream(config, index).into_iter().enumerate() {
            let mut report = check_chain(&instance, &params, index)?;
            if config.fault_injection > 0.0 {
                inject_fault(&mut report, config.fault_injection);
            }
            for check in &report.checks {
                total_checks += 1;
                let entry = links.entry(check.name.clone()).or_insert(LinkStats {
                    checks: 0,
                    violations: 0,
                    min_slack: f64::INFINITY,
                });
                entry.checks += 1;
                entry.min_slack = entry.min_slack.min(check.slack);
                if !check.pass {
                    entry.violations += 1;
                    derived_violations += 1;
                    if violations.len() < MAX_VIOLATION_RECORDS {
                        violations.push(ViolationRecord {
                            instance_index: index,
                            sample_index: k as u32,
                            link: check.name.clone(),
                            lhs: check.lhs,
                            rhs: check.rhs,
                            slack: check.slack,
                            params,
                        });
                    }
                }
            }
            for (name, ratio) in report.tightness {
                samples.entry(name).or_default().push(ratio);
            }
            numeric_skips += report.numeric_skips;
        }
    }

    let tightness = samples
        .into_iter()
        .map(|(name, mut s)| (name, quantiles(&mut s)))
        .collect();
    Ok(FuzzSummary {
        config: config.clone(),
        instances: config.instances,
        total_checks,
        derived_violations,
        links,
        tightness,
        numeric_skips,
        violations,
    })
}

/// Shrinks every branch-link bound, forcing violations; exercises the
/// fuzz failure path from tests without corrupting the real evaluators.
fn inject_fault(report: &mut ChainReport, fraction: f64) {
    for check in report.checks.iter_mut() {
        if check.name.contains("branch") {
            check.rhs *= 1.0 - fraction;
            check.slack = check.rhs - check.lhs;
            check.pass = check.slack >= -slack_tol(check.rhs);
        }
    }
}

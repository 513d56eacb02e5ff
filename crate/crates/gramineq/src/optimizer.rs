//! Exponent and branch search.
//!
//! The classical displays leave every Holder exponent free; for a concrete
//! instance the bounds can differ by orders of magnitude across `p` and the
//! secondary pairs. [`optimize`] scans a log-spaced grid (the reference
//! point `p = alpha = gamma = 2` is always evaluated first) and then runs
//! golden-section refinement along each active coordinate around the grid
//! minimum. Derivative-free search is deliberate: the objective is smooth
//! in `p` but takes minima across branches, and the dimension is at most 3.
//!
//! Determinism: identical `(instance, config)` give a bit-identical result.
//! Ties prefer the lowest branch index, then `p = 2`, then the smallest
//! exponents. Parameter points whose powers overflow are skipped and
//! counted, never fatal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    bombieri_bound, branch_bound, derived_form_value, holder_bound, middle_value, norm_expansion,
    pecaric_lhs, ratio_bound, BoundError, BoundValue, EvalContext,
};
use crate::exponents::{
    BranchSelector, ConjugatePair, FactorReduction, HolderParams, MAX_EXPONENT, MIN_EXPONENT,
};
use crate::gram::Complex;
use crate::instance::Instance;
use crate::slack_tol;

#[derive(Debug, Error)]
pub enum OptimError {
    #[error("target requires coefficients c, but the instance has none")]
    MissingCoefficients,
    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),
    #[error("every parameter point was skipped (overflow); nothing to report")]
    AllPointsSkipped,
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Which bound family the search minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimTarget {
    /// the two-factor Holder bound on the combination chain
    Holder,
    /// a fixed branch of the combination chain
    Branch(BranchSelector),
    /// the Pecaric-type chain on `|sum c_i (x, y_i)|^2`
    Pecaric,
    /// the Bombieri-type (square-rooted) chain on `sum |(x, y_i)|^2`
    Bombieri,
    /// the ratio refinement; the bound is constant in `p`, so the search
    /// maximizes the left-hand side (minimizes the tightness ratio)
    Ratio,
}

impl std::fmt::Display for OptimTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OptimTarget::Holder => write!(f, "holder"),
            OptimTarget::Branch(b) => write!(f, "branch-{}", b.index()),
            OptimTarget::Pecaric => write!(f, "pecaric"),
            OptimTarget::Bombieri => write!(f, "bombieri"),
            OptimTarget::Ratio => write!(f, "ratio"),
        }
    }
}

impl std::str::FromStr for OptimTarget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "holder" => Ok(OptimTarget::Holder),
            "pecaric" => Ok(OptimTarget::Pecaric),
            "bombieri" => Ok(OptimTarget::Bombieri),
            "ratio" => Ok(OptimTarget::Ratio),
            other => {
                if let Some(ix) = other.strip_prefix("branch-") {
                    let ix: u8 = ix
                        .parse()
                        .map_err(|_| format!("bad branch index in {other:?}"))?;
                    BranchSelector::from_index(ix)
                        .map(OptimTarget::Branch)
                        .ok_or_else(|| format!("branch index {ix} not in 1..=9"))
                } else {
                    Err(format!(
                        "unknown target {other:?} (expected holder, branch-1..branch-9, \
                         pecaric, bombieri, ratio)"
                    ))
                }
            }
        }
    }
}

/// Whether chain targets optimize their middle Holder bound or the best of
/// the nine branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveScope {
    SingleBranch,
    BestOfAll,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimConfig {
    /// Sorted log-spaced scan points for `p`.
    pub p_grid: Vec<f64>,
    /// Sorted log-spaced scan points for `alpha` and `gamma`.
    pub secondary_grid: Vec<f64>,
    /// Golden-section iterations per active coordinate.
    pub refine_iters: usize,
    pub target: OptimTarget,
    pub scope: ObjectiveScope,
}

/// `n` logarithmically spaced points over `[lo, hi]`, endpoints exact.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (llo, lhi) = (lo.log10(), hi.log10());
    let mut out: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            10f64.powf(llo * (1.0 - t) + lhi * t).clamp(lo, hi)
        })
        .collect();
    out[0] = lo;
    out[n - 1] = hi;
    out
}

/// Smallest grid value whose conjugate stays inside the exponent domain.
pub fn grid_low() -> f64 {
    crate::exponents::feasible_low()
}

impl OptimConfig {
    pub fn new(target: OptimTarget) -> Self {
        Self {
            p_grid: geomspace(grid_low(), MAX_EXPONENT, 40),
            secondary_grid: geomspace(grid_low(), MAX_EXPONENT, 20),
            refine_iters: 32,
            target,
            scope: ObjectiveScope::SingleBranch,
        }
    }

    pub fn with_scope(mut self, scope: ObjectiveScope) -> Self {
        self.scope = scope;
        self
    }

    /// Same search with a denser `p` grid, for cross-checking.
    pub fn dense(&self, points: usize) -> Self {
        let mut out = self.clone();
        out.p_grid = geomspace(grid_low(), MAX_EXPONENT, points);
        out
    }

    fn validate(&self) -> Result<(), OptimError> {
        for (name, grid) in [
            ("p_grid", &self.p_grid),
            ("secondary_grid", &self.secondary_grid),
        ] {
            if grid.is_empty() {
                return Err(OptimError::InvalidConfig(format!("{name} is empty")));
            }
            if !grid.windows(2).all(|w| w[0] < w[1]) {
                return Err(OptimError::InvalidConfig(format!(
                    "{name} must be strictly ascending"
                )));
            }
            if grid
                .iter()
                .any(|&v| !v.is_finite() || !(MIN_EXPONENT..=MAX_EXPONENT).contains(&v))
            {
                return Err(OptimError::InvalidConfig(format!(
                    "{name} has points outside [{MIN_EXPONENT}, {MAX_EXPONENT}]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimResult {
    pub best_value: f64,
    pub best_params: HolderParams,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub best_branch: Option<BranchSelector>,
    /// Parameter points evaluated (grid plus refinement).
    pub evaluations: u64,
    /// Points skipped for numeric overflow/underflow.
    pub skipped: u64,
    pub lhs: f64,
    /// `best_value / max(lhs, tiny)`.
    pub tightness: f64,
}

impl OptimResult {
    pub fn skipped_fraction(&self) -> f64 {
        if self.evaluations == 0 {
            0.0
        } else {
            self.skipped as f64 / self.evaluations as f64
        }
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    score: f64,
    value: f64,
    lhs: f64,
    branch: Option<BranchSelector>,
    params: HolderParams,
    /// Raw scan coordinates `(p, alpha, gamma)`; kept separate from
    /// `params` because a winning branch may not consume every coordinate.
    coords: (f64, f64, f64),
}

fn tie_key(c: &Candidate) -> (u8, u8, f64, f64, f64) {
    let p = c.coords.0;
    (
        c.branch.map_or(0, |b| b.index()),
        u8::from(p != 2.0),
        p,
        c.coords.1,
        c.coords.2,
    )
}

/// Scores within 1e-12 relative count as tied: branches that agree in exact
/// arithmetic land a few ulp apart after rounding, and the tie-break rule
/// must still apply to them.
fn approx_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn better(candidate: &Candidate, incumbent: &Candidate) -> bool {
    if approx_tie(candidate.score, incumbent.score) {
        tie_key(candidate) < tie_key(incumbent)
    } else {
        candidate.score < incumbent.score
    }
}

struct Search<'a> {
    instance: &'a Instance,
    target: OptimTarget,
    scope: ObjectiveScope,
    evaluations: u64,
    skipped: u64,
}

impl<'a> Search<'a> {
    fn coefficients(&self) -> Result<&'a [Complex], OptimError> {
        self.instance.c().ok_or(OptimError::MissingCoefficients)
    }

    /// Evaluates the objective at scan coordinates, or `None` when the
    /// point is skipped for numeric reasons.
    fn objective(&mut self, coords: (f64, f64, f64)) -> Result<Option<Candidate>, OptimError> {
        self.evaluations += 1;
        let (p, a, g) = coords;
        let (pq, ab, gd) = match (
            ConjugatePair::from_p(p),
            ConjugatePair::from_p(a),
            ConjugatePair::from_p(g),
        ) {
            (Ok(pq), Ok(ab), Ok(gd)) => (pq, ab, gd),
            _ => {
                self.skipped += 1;
                return Ok(None);
            }
        };
        let gram = self.instance.gram();
        let proj = self.instance.proj();

        let (value, lhs, branch, params): (f64, f64, Option<BranchSelector>, HolderParams) =
            match (self.target, self.scope) {
                (OptimTarget::Holder, _) => {
                    let alphas = self.coefficients()?;
                    let value = holder_bound(alphas, gram, pq)?;
                    let lhs = norm_expansion(alphas, gram)?;
                    (value, lhs, None, HolderParams::new(pq))
                }
                (OptimTarget::Branch(branch), ObjectiveScope::SingleBranch) => {
                    let alphas = self.coefficients()?;
                    let full = HolderParams::new(pq).with_ab(ab).with_gd(gd);
                    let sub = full.for_branch(branch).expect("pairs supplied");
                    let value = branch_bound(alphas, gram, &sub, branch)?.value;
                    let lhs = norm_expansion(alphas, gram)?;
                    (value, lhs, Some(branch), sub)
                }
                (OptimTarget::Branch(_), ObjectiveScope::BestOfAll) => {
                    let alphas = self.coefficients()?;
                    let ctx = EvalContext::Combination { alphas, gram };
                    let lhs = norm_expansion(alphas, gram)?;
                    let Some((bv, sub)) = min_branch(&ctx, pq, ab, gd)? else {
                        self.skipped += 1;
                        return Ok(None);
                    };
                    (bv.value, lhs, bv.branch, sub)
                }
                (OptimTarget::Pecaric, ObjectiveScope::SingleBranch) => {
                    let c = self.coefficients()?;
                    let conj_c: Vec<Complex> = c.iter().map(|z| z.conj()).collect();
                    let ctx = EvalContext::Pecaric {
                        c: &conj_c,
                        proj,
                        gram,
                    };
                    let value = middle_value(&ctx, pq)?;
                    let lhs = pecaric_lhs(proj, c)?;
                    (value, lhs, None, HolderParams::new(pq))
                }
                (OptimTarget::Pecaric, ObjectiveScope::BestOfAll) => {
                    let c = self.coefficients()?;
                    let conj_c: Vec<Complex> = c.iter().map(|z| z.conj()).collect();
                    let ctx = EvalContext::Pecaric {
                        c: &conj_c,
                        proj,
                        gram,
                    };
                    let lhs = pecaric_lhs(proj, c)?;
                    let Some((bv, sub)) = min_branch(&ctx, pq, ab, gd)? else {
                        self.skipped += 1;
                        return Ok(None);
                    };
                    (bv.value, lhs, bv.branch, sub)
                }
                (OptimTarget::Bombieri, ObjectiveScope::SingleBranch) => {
                    let ctx = EvalContext::Bombieri { proj, gram };
                    let value = middle_value(&ctx, pq)?;
                    let (lhs, _) = bombieri_bound(proj, gram)?;
                    (value, lhs, None, HolderParams::new(pq))
                }
                (OptimTarget::Bombieri, ObjectiveScope::BestOfAll) => {
                    let ctx = EvalContext::Bombieri { proj, gram };
                    let (lhs, _) = bombieri_bound(proj, gram)?;
                    let Some((bv, sub)) = min_branch(&ctx, pq, ab, gd)? else {
                        self.skipped += 1;
                        return Ok(None);
                    };
                    (bv.value, lhs, bv.branch, sub)
                }
                (OptimTarget::Ratio, _) => {
                    let (ratio_lhs, bound) = ratio_bound(proj, gram, pq)?;
                    (bound, ratio_lhs, None, HolderParams::new(pq))
                }
            };

        if !value.is_finite() || value < lhs - slack_tol(value) {
            self.skipped += 1;
            return Ok(None);
        }
        let score = match self.target {
            OptimTarget::Ratio => value / lhs.max(f64::MIN_POSITIVE),
            _ => value,
        };
        Ok(Some(Candidate {
            score,
            value,
            lhs,
            branch,
            params,
            coords,
        }))
    }
}

/// Minimum derived branch value over all nine branches; ties go to the
/// lowest index. `None` when every branch evaluates non-finite.
fn min_branch(
    ctx: &EvalContext,
    pq: ConjugatePair,
    ab: ConjugatePair,
    gd: ConjugatePair,
) -> Result<Option<(BoundValue, HolderParams)>, OptimError> {
    let full = HolderParams::new(pq).with_ab(ab).with_gd(gd);
    let mut best: Option<(BoundValue, HolderParams)> = None;
    for branch in BranchSelector::all() {
        let sub = full.for_branch(branch).expect("pairs supplied");
        let bv = derived_form_value(ctx, &sub, branch)?;
        if !bv.value.is_finite() {
            continue;
        }
        let replace = match &best {
            None => true,
            Some((b, _)) => !approx_tie(bv.value, b.value) && bv.value < b.value,
        };
        if replace {
            best = Some((bv, sub));
        }
    }
    Ok(best)
}

fn needs_secondary(target: OptimTarget, scope: ObjectiveScope) -> (bool, bool) {
    match (target, scope) {
        (OptimTarget::Branch(b), ObjectiveScope::SingleBranch) => (
            b.p_side == FactorReduction::DoubleHolder,
            b.q_side == FactorReduction::DoubleHolder,
        ),
        (OptimTarget::Branch(_), ObjectiveScope::BestOfAll)
        | (OptimTarget::Pecaric, ObjectiveScope::BestOfAll)
        | (OptimTarget::Bombieri, ObjectiveScope::BestOfAll) => (true, true),
        _ => (false, false),
    }
}

/// Reference point first, then the grid (minus an exact duplicate of 2).
fn scan_points(grid: &[f64]) -> Vec<f64> {
    let mut points = Vec::with_capacity(grid.len() + 1);
    points.push(2.0);
    points.extend(grid.iter().copied().filter(|&v| v != 2.0));
    points
}

/// Neighbors of `x` among the grid values and the reference 2.0, clamped to
/// the feasible domain.
fn bracket(x: f64, grid: &[f64]) -> (f64, f64) {
    let mut lo = grid_low();
    let mut hi = MAX_EXPONENT;
    for &v in grid.iter().chain(std::iter::once(&2.0)) {
        if v < x && v > lo {
            lo = v;
        }
        if v > x && v < hi {
            hi = v;
        }
    }
    (lo, hi)
}

/// Grid scan plus golden-section refinement; see the module docs for the
/// tie-break and skip policy.
pub fn optimize(instance: &Instance, config: &OptimConfig) -> Result<OptimResult, OptimError> {
    config.validate()?;
    let mut search = Search {
        instance,
        target: config.target,
        scope: config.scope,
        evaluations: 0,
        skipped: 0,
    };
    let (scan_ab, scan_gd) = needs_secondary(config.target, config.scope);
    let p_points = scan_points(&config.p_grid);
    let a_points = if scan_ab {
        scan_points(&config.secondary_grid)
    } else {
        vec![2.0]
    };
    let g_points = if scan_gd {
        scan_points(&config.secondary_grid)
    } else {
        vec![2.0]
    };

    let mut best: Option<Candidate> = None;
    for &p in &p_points {
        for &a in &a_points {
            for &g in &g_points {
                if let Some(cand) = search.objective((p, a, g))? {
                    if best.as_ref().is_none_or(|b| better(&cand, b)) {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    let mut best = best.ok_or(OptimError::AllPointsSkipped)?;

    // golden-section refinement per active coordinate, in log10 space,
    // accepted only on strict improvement
    let coords_active: [(usize, &[f64]); 3] = [
        (0, &config.p_grid),
        (1, &config.secondary_grid),
        (2, &config.secondary_grid),
    ];
    for &(axis, grid) in &coords_active {
        if (axis == 1 && !scan_ab) || (axis == 2 && !scan_gd) {
            continue;
        }
        let current = match axis {
            0 => best.coords.0,
            1 => best.coords.1,
            _ => best.coords.2,
        };
        let (lo, hi) = bracket(current, grid);
        if hi <= lo {
            continue;
        }
        let refined = golden_section(&mut search, &best, axis, lo, hi, config.refine_iters)?;
        if let Some(cand) = refined {
            if better(&cand, &best) {
                best = cand;
            }
        }
    }

    Ok(OptimResult {
        best_value: best.value,
        best_params: best.params,
        best_branch: best.branch,
        evaluations: search.evaluations,
        skipped: search.skipped,
        lhs: best.lhs,
        tightness: best.value / best.lhs.max(f64::MIN_POSITIVE),
    })
}

fn golden_section(
    search: &mut Search,
    base: &Candidate,
    axis: usize,
    lo: f64,
    hi: f64,
    iters: usize,
) -> Result<Option<Candidate>, OptimError> {
    let at = |x: f64| -> (f64, f64, f64) {
        let mut coords = base.coords;
        match axis {
            0 => coords.0 = x,
            1 => coords.1 = x,
            _ => coords.2 = x,
        }
        coords
    };
    let mut best: Option<Candidate> = None;
    fn consider(cand: Option<Candidate>, best: &mut Option<Candidate>) {
        if let Some(c) = cand {
            if best.as_ref().is_none_or(|b| better(&c, b)) {
                *best = Some(c);
            }
        }
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo.log10(), hi.log10());
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut c1 = search.objective(at(10f64.powf(x1).clamp(lo, hi)))?;
    let mut c2 = search.objective(at(10f64.powf(x2).clamp(lo, hi)))?;
    let score = |c: &Option<Candidate>| c.as_ref().map_or(f64::INFINITY, |c| c.score);
    for _ in 0..iters {
        if score(&c1) <= score(&c2) {
            b = x2;
            x2 = x1;
            consider(c2.take(), &mut best);
            c2 = c1.take();
            x1 = b - INV_PHI * (b - a);
            c1 = search.objective(at(10f64.powf(x1).clamp(lo, hi)))?;
        } else {
            a = x1;
            x1 = x2;
            consider(c1.take(), &mut best);
            c1 = c2.take();
            x2 = a + INV_PHI * (b - a);
            c2 = search.objective(at(10f64.powf(x2).clamp(lo, hi)))?;
        }
    }
    consider(c1, &mut best);
    consider(c2, &mut best);
    Ok(best)
}

/// The minimal derived branch at fixed parameters; ties break to the lowest
/// branch index. Secondary pairs must be present where a branch needs them.
pub fn best_branch(
    instance: &Instance,
    params: &HolderParams,
) -> Result<(BranchSelector, BoundValue), OptimError> {
    let alphas = instance.c().ok_or(OptimError::MissingCoefficients)?;
    let gram = instance.gram();
    let mut best: Option<(BranchSelector, BoundValue)> = None;
    for branch in BranchSelector::all() {
        let sub = params
            .for_branch(branch)
            .map_err(|issues| BoundError::InvalidParams {
                branch: branch.index(),
                issues,
            })?;
        let bv = branch_bound(alphas, gram, &sub, branch)?;
        let replace = match &best {
            None => true,
            Some((_, b)) => !approx_tie(bv.value, b.value) && bv.value < b.value,
        };
        if replace {
            best = Some((branch, bv));
        }
    }
    Ok(best.expect("nine branches evaluated"))
}

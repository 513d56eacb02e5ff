//! Evaluation of the full bound hierarchy.
//!
//! For coefficients `a_1..a_n` and a Gram matrix `G` with absolute row sums
//! `r_i`, the chain runs
//!
//! ```text
//! |quadratic form| <= M <= holder(p, q) <= branch_k            k = 1..9
//! ```
//!
//! where `M = sum_ij |a_i||a_j||G_ij|`, `holder` is the two-factor Holder
//! bound `(sum |a_i|^p r_i)^(1/p) (sum |a_i|^q r_i)^(1/q)`, and each branch
//! majorizes the two factors per its [`BranchSelector`]. The chain applies
//! to `|sum_i c_i (x, y_i)|^2` (Pecaric-type, via [`pecaric_chain`]) and to
//! `sum_i |(x, y_i)|^2` (Bombieri-type, via [`bombieri_chain`]);
//! [`printed_form_value`] evaluates the literal transcriptions of the
//! closed-form displays for the audit.

mod classical;
mod factors;
mod printed;

pub use classical::{
    bombieri_bound, bombieri_chain, pecaric_bounds, pecaric_chain, pecaric_lhs,
    pecaric_self_bounds, ratio_bound,
};
pub use printed::printed_form_value;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::{BranchSelector, ConjugatePair, FactorReduction, HolderParams, ParamIssue};
use crate::gram::{Complex, GramData, GramError, ProjectionData};
use crate::sum::Accumulator;

use factors::{canonical_product, Factor, FactorContext, FactorKind};

#[derive(Debug, Error, PartialEq)]
pub enum BoundError {
    #[error("coefficient count {coeffs} does not match Gram size {gram}")]
    LengthMismatch { coeffs: usize, gram: usize },
    #[error("invalid parameters for branch {branch}: {}", format_issues(.issues))]
    InvalidParams { branch: u8, issues: Vec<ParamIssue> },
    #[error("power-sum exponent must be finite and > 0, got {value}")]
    NonPositiveExponent { value: f64 },
    #[error(
        "quadratic form has non-vanishing imaginary part {imag:e} \
         (relative {relative:e}); Gram data is not Hermitian-consistent"
    )]
    ImaginaryResidue { imag: f64, relative: f64 },
    #[error(transparent)]
    Gram(#[from] GramError),
}

fn format_issues(issues: &[ParamIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Whether a branch value comes from the composed factor majorizations or
/// from a literal transcription of the closed-form display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    Derived,
    Printed,
}

/// Which chain a branch bound belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    /// bounds on `||sum_i a_i z_i||^2`
    Combination,
    /// bounds on `|sum_i c_i (x, y_i)|^2` (Pecaric-type)
    Pecaric,
    /// bounds on `sum_i |(x, y_i)|^2` (Bombieri-type, square-rooted chain)
    Bombieri,
}

impl BoundSource {
    pub fn label(self) -> &'static str {
        match self {
            BoundSource::Combination => "combination",
            BoundSource::Pecaric => "pecaric",
            BoundSource::Bombieri => "bombieri",
        }
    }
}

/// A named bound evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub branch: Option<BranchSelector>,
    pub params: HolderParams,
    pub form: Form,
}

/// A left-hand side with the ladder of bounds above it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundChain {
    pub lhs: f64,
    /// The first (two-factor Holder) bound, when the chain has one.
    pub middle: Option<f64>,
    pub branches: Vec<BoundValue>,
    pub classical: Vec<BoundValue>,
}

fn check_len(coeffs: &[Complex], gram: &GramData) -> Result<(), BoundError> {
    if coeffs.len() != gram.len() {
        return Err(BoundError::LengthMismatch {
            coeffs: coeffs.len(),
            gram: gram.len(),
        });
    }
    if !coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(BoundError::Gram(GramError::NonFinite {
            context: "coefficients",
        }));
    }
    Ok(())
}

/// `M = sum_ij |a_i| |a_j| |G_ij|`, the absolute double sum dominating the
/// quadratic form.
pub fn double_sum_m(alphas: &[Complex], gram: &GramData) -> Result<f64, BoundError> {
    check_len(alphas, gram)?;
    let n = gram.len();
    let abs: Vec<f64> = alphas.iter().map(|z| z.norm()).collect();
    let mut acc = Accumulator::new();
    for i in 0..n {
        for j in 0..n {
            acc.add(abs[i] * abs[j] * gram.entry(i, j).norm());
        }
    }
    Ok(acc.value())
}

/// `Re sum_ij a_i conj(a_j) G_ij`; equals `||sum_i a_i z_i||^2` when `G`
/// came from coordinates.
///
/// For Hermitian `G` the form is real; an imaginary residue above 1e-9
/// relative to `M` signals corrupted Gram data and is an error.
pub fn norm_expansion(alphas: &[Complex], gram: &GramData) -> Result<f64, BoundError> {
    check_len(alphas, gram)?;
    let n = gram.len();
    let mut re = Accumulator::new();
    let mut im = Accumulator::new();
    for i in 0..n {
        for j in 0..n {
            let term = alphas[i] * alphas[j].conj() * gram.entry(i, j);
            re.add(term.re);
            im.add(term.im);
        }
    }
    let scale = double_sum_m(alphas, gram)?;
    let imag = im.value().abs();
    if imag > 1e-9 * scale {
        return Err(BoundError::ImaginaryResidue {
            imag,
            relative: imag / scale,
        });
    }
    Ok(re.value())
}

/// `sum_i |a_i|^t r_i` for nonnegative inputs; `0^t = 0`.
pub fn weighted_power_sum(abs_alphas: &[f64], t: f64, row_sums: &[f64]) -> Result<f64, BoundError> {
    if !t.is_finite() || t <= 0.0 {
        return Err(BoundError::NonPositiveExponent { value: t });
    }
    if abs_alphas.len() != row_sums.len() {
        return Err(BoundError::LengthMismatch {
            coeffs: abs_alphas.len(),
            gram: row_sums.len(),
        });
    }
    let mut acc = Accumulator::new();
    for (&a, &r) in abs_alphas.iter().zip(row_sums) {
        acc.add(a.powf(t) * r);
    }
    Ok(acc.value())
}

/// The two-factor Holder bound
/// `(sum |a_i|^p r_i)^(1/p) (sum |a_i|^q r_i)^(1/q)`, dominating `M`.
pub fn holder_bound(
    alphas: &[Complex],
    gram: &GramData,
    pq: ConjugatePair,
) -> Result<f64, BoundError> {
    check_len(alphas, gram)?;
    let ctx = FactorContext::new(alphas, gram);
    Ok(holder_from_ctx(&ctx, pq, false))
}

/// Shared middle-bound evaluation; `half` takes the square-rooted form used
/// by the Bombieri-type chain.
fn holder_from_ctx(ctx: &FactorContext, pq: ConjugatePair, half: bool) -> f64 {
    let (p, q) = (pq.p(), pq.q());
    let scale = if half { 0.5 } else { 1.0 };
    canonical_product(vec![
        ctx.factor(FactorKind::WeightedPowerSum(p), scale * (1.0 / p)),
        ctx.factor(FactorKind::WeightedPowerSum(q), scale * (1.0 / q)),
    ])
}

fn side_factors(
    ctx: &FactorContext,
    reduction: FactorReduction,
    t: f64,
    secondary: Option<ConjugatePair>,
    half: bool,
) -> Result<Vec<Factor>, BoundError> {
    let scale = if half { 0.5 } else { 1.0 };
    let factors = match reduction {
        FactorReduction::MaxAll => vec![
            ctx.factor(FactorKind::MaxAbsCoeff, scale),
            ctx.factor(FactorKind::TotalAbsSum, scale * (1.0 / t)),
        ],
        FactorReduction::DoubleHolder => {
            // (u, v) is (alpha, beta) on the p-side, (gamma, delta) on the q-side
            let pair = secondary.expect("validated before building factors");
            let (u, v) = (pair.p(), pair.q());
            vec![
                ctx.factor(FactorKind::CoeffPowerSum(u * t), scale * (1.0 / (u * t))),
                ctx.factor(FactorKind::RowPowerSum(v), scale * (1.0 / (v * t))),
            ]
        }
        FactorReduction::MaxRow => vec![
            ctx.factor(FactorKind::CoeffPowerSum(t), scale * (1.0 / t)),
            ctx.factor(FactorKind::MaxRowSum, scale * (1.0 / t)),
        ],
    };
    Ok(factors)
}

fn branch_factors(
    ctx: &FactorContext,
    params: &HolderParams,
    branch: BranchSelector,
    half: bool,
) -> Result<Vec<Factor>, BoundError> {
    params
        .validate(branch)
        .map_err(|issues| BoundError::InvalidParams {
            branch: branch.index(),
            issues,
        })?;
    let pq = params.pq();
    let mut factors = side_factors(ctx, branch.p_side, pq.p(), params.ab(), half)?;
    factors.extend(side_factors(ctx, branch.q_side, pq.q(), params.gd(), half)?);
    Ok(factors)
}

/// The p-side majorization of `(sum |a_i|^p r_i)^(1/p)`:
/// max-all `m S^(1/p)`, double-Holder
/// `(sum |a_i|^(alpha p))^(1/(alpha p)) (sum r_i^beta)^(1/(beta p))`, or
/// max-row `(sum |a_i|^p)^(1/p) (max_i r_i)^(1/p)`.
pub fn factor_p(
    alphas: &[Complex],
    gram: &GramData,
    params: &HolderParams,
    reduction: FactorReduction,
) -> Result<f64, BoundError> {
    check_len(alphas, gram)?;
    if reduction == FactorReduction::DoubleHolder && params.ab().is_none() {
        return Err(BoundError::InvalidParams {
            branch: BranchSelector::new(reduction, FactorReduction::MaxAll).index(),
            issues: vec![ParamIssue::MissingSecondary {
                pair: "ab",
                side: "p",
            }],
        });
    }
    let ctx = FactorContext::new(alphas, gram);
    let factors = side_factors(&ctx, reduction, params.pq().p(), params.ab(), false)?;
    Ok(canonical_product(factors))
}

/// Mirror of [`factor_p`] with `q` and the `(gamma, delta)` pair.
pub fn factor_q(
    alphas: &[Complex],
    gram: &GramData,
    params: &HolderParams,
    reduction: FactorReduction,
) -> Result<f64, BoundError> {
    check_len(alphas, gram)?;
    if reduction == FactorReduction::DoubleHolder && params.gd().is_none() {
        return Err(BoundError::InvalidParams {
            branch: BranchSelector::new(FactorReduction::MaxAll, reduction).index(),
            issues: vec![ParamIssue::MissingSecondary {
                pair: "gd",
                side: "q",
            }],
        });
    }
    let ctx = FactorContext::new(alphas, gram);
    let factors = side_factors(&ctx, reduction, params.pq().q(), params.gd(), false)?;
    Ok(canonical_product(factors))
}

/// The composed (derived) branch bound `factor_p * factor_q`, dominating
/// [`holder_bound`]. Params must fit the branch exactly (no superfluous
/// secondary pair).
pub fn branch_bound(
    alphas: &[Complex],
    gram: &GramData,
    params: &HolderParams,
    branch: BranchSelector,
) -> Result<BoundValue, BoundError> {
    check_len(alphas, gram)?;
    let ctx = FactorContext::new(alphas, gram);
    let factors = branch_factors(&ctx, params, branch, false)?;
    Ok(BoundValue {
        name: format!("combination_branch_{}", branch.index()),
        value: canonical_product(factors),
        branch: Some(branch),
        params: *params,
        form: Form::Derived,
    })
}

/// Evaluation context shared by the derived and printed branch evaluators.
#[derive(Debug, Clone, Copy)]
pub enum EvalContext<'a> {
    Combination {
        alphas: &'a [Complex],
        gram: &'a GramData,
    },
    Pecaric {
        c: &'a [Complex],
        proj: &'a ProjectionData,
        gram: &'a GramData,
    },
    Bombieri {
        proj: &'a ProjectionData,
        gram: &'a GramData,
    },
}

impl<'a> EvalContext<'a> {
    pub fn source(&self) -> BoundSource {
        match self {
            EvalContext::Combination { .. } => BoundSource::Combination,
            EvalContext::Pecaric { .. } => BoundSource::Pecaric,
            EvalContext::Bombieri { .. } => BoundSource::Bombieri,
        }
    }

    pub fn gram(&self) -> &'a GramData {
        match self {
            EvalContext::Combination { gram, .. }
            | EvalContext::Pecaric { gram, .. }
            | EvalContext::Bombieri { gram, .. } => gram,
        }
    }

    fn coeffs(&self) -> &'a [Complex] {
        match self {
            EvalContext::Combination { alphas, .. } => alphas,
            EvalContext::Pecaric { c, .. } => c,
            EvalContext::Bombieri { proj, .. } => proj.proj(),
        }
    }

    /// Multiplier applied outside the factor product: `1`, `||x||^2`, or
    /// `||x||` for the square-rooted chain.
    fn outer_scale(&self) -> f64 {
        match self {
            EvalContext::Combination { .. } => 1.0,
            EvalContext::Pecaric { proj, .. } => proj.norm_x_sq(),
            EvalContext::Bombieri { proj, .. } => proj.norm_x_sq().sqrt(),
        }
    }

    fn half(&self) -> bool {
        matches!(self, EvalContext::Bombieri { .. })
    }

    pub(crate) fn check(&self) -> Result<FactorContext<'a>, BoundError> {
        let coeffs = self.coeffs();
        check_len(coeffs, self.gram())?;
        if let EvalContext::Pecaric { c, proj, .. } = self {
            if c.len() != proj.len() {
                return Err(BoundError::LengthMismatch {
                    coeffs: c.len(),
                    gram: proj.len(),
                });
            }
        }
        Ok(FactorContext::new(coeffs, self.gram()))
    }
}

/// Derived branch value for any of the three chains (the Bombieri-type
/// chain takes square-rooted exponents and scales by `||x||`).
pub fn derived_form_value(
    ctx: &EvalContext,
    params: &HolderParams,
    branch: BranchSelector,
) -> Result<BoundValue, BoundError> {
    let fctx = ctx.check()?;
    let factors = branch_factors(&fctx, params, branch, ctx.half())?;
    let value = ctx.outer_scale() * canonical_product(factors);
    Ok(BoundValue {
        name: format!("{}_branch_{}", ctx.source().label(), branch.index()),
        value,
        branch: Some(branch),
        params: *params,
        form: Form::Derived,
    })
}

/// The first (Holder) bound of the chain, which every branch dominates:
/// `holder`, `||x||^2 holder`, or
/// `||x|| (sum |(x,y_i)|^p r_i)^(1/2p) (sum |(x,y_i)|^q r_i)^(1/2q)`.
pub fn middle_value(ctx: &EvalContext, pq: ConjugatePair) -> Result<f64, BoundError> {
    let fctx = ctx.check()?;
    Ok(ctx.outer_scale() * holder_from_ctx(&fctx, pq, ctx.half()))
}

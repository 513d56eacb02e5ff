//! Literal transcriptions of the closed-form branch displays.
//!
//! The derived branch values compose the two factor majorizations; the
//! classical displays instead print one closed formula per branch. Most
//! transcriptions agree with the composition, but not all: the combination
//! display's branch 4 carries `1/(beta q)` where the composition gives
//! `1/(beta p)`, and the square-rooted (Bombieri-type) display differs on
//! branch 4 (`1/(2 alpha beta)` vs `1/(2 alpha p)`, `1/(p beta)` vs
//! `1/(2 p beta)`) and branch 6 (`1/(2p)` vs `1/(2q)` on the max-row
//! factor). This module keeps the transcriptions as an independent,
//! audited code path — discrepancies are demonstrable, never silently
//! repaired.

use crate::exponents::{BranchSelector, HolderParams};

use super::factors::{canonical_product, Factor, FactorContext, FactorKind};
use super::{BoundError, BoundSource, BoundValue, EvalContext, Form};

/// Evaluates a branch formula with the exponents exactly as printed in the
/// classical display for the chain. Where the transcription matches the
/// composition, the value agrees bit for bit with the derived form.
pub fn printed_form_value(
    ctx: &EvalContext,
    params: &HolderParams,
    branch: BranchSelector,
) -> Result<BoundValue, BoundError> {
    let fctx = ctx.check()?;
    params
        .validate(branch)
        .map_err(|issues| BoundError::InvalidParams {
            branch: branch.index(),
            issues,
        })?;
    let factors = match ctx.source() {
        BoundSource::Combination | BoundSource::Pecaric => {
            squared_chain_factors(&fctx, params, branch, ctx.source())
        }
        BoundSource::Bombieri => rooted_chain_factors(&fctx, params, branch),
    };
    let value = ctx_outer_scale(ctx) * canonical_product(factors);
    Ok(BoundValue {
        name: format!("{}_branch_{}_printed", ctx.source().label(), branch.index()),
        value,
        branch: Some(branch),
        params: *params,
        form: Form::Printed,
    })
}

fn ctx_outer_scale(ctx: &EvalContext) -> f64 {
    match ctx {
        EvalContext::Combination { .. } => 1.0,
        EvalContext::Pecaric { proj, .. } => proj.norm_x_sq(),
        EvalContext::Bombieri { proj, .. } => proj.norm_x_sq().sqrt(),
    }
}

/// The nine closed forms of the squared chains. The combination and
/// Pecaric-type displays are identical transcriptions except for branch 4's
/// final exponent: `1/(beta q)` in the former, `1/(p beta)` in the latter.
fn squared_chain_factors(
    ctx: &FactorContext,
    params: &HolderParams,
    branch: BranchSelector,
    source: BoundSource,
) -> Vec<Factor> {
    let p = params.pq().p();
    let q = params.pq().q();
    use FactorKind::*;
    match branch.index() {
        // max|a|^2 S
        1 => vec![ctx.factor(MaxAbsCoeff, 2.0), ctx.factor(TotalAbsSum, 1.0)],
        // max|a| (sum |a|^(gq))^(1/(gq)) S^(1/p) (sum r^d)^(1/(dq))
        2 => {
            let (g, d) = pair(params.gd());
            vec![
                ctx.factor(MaxAbsCoeff, 1.0),
                ctx.factor(CoeffPowerSum(g * q), 1.0 / (g * q)),
                ctx.factor(TotalAbsSum, 1.0 / p),
                ctx.factor(RowPowerSum(d), 1.0 / (d * q)),
            ]
        }
        // max|a| (sum |a|^q)^(1/q) S^(1/p) (max r)^(1/q)
        3 => vec![
            ctx.factor(MaxAbsCoeff, 1.0),
            ctx.factor(CoeffPowerSum(q), 1.0 / q),
            ctx.factor(TotalAbsSum, 1.0 / p),
            ctx.factor(MaxRowSum, 1.0 / q),
        ],
        // max|a| (sum |a|^(ap))^(1/(ap)) S^(1/q) (sum r^b)^(...)
        // the final exponent is the transcriptions' point of divergence:
        // 1/(b*q) in the combination display, 1/(p*b) in the Pecaric-type one
        4 => {
            let (a, b) = pair(params.ab());
            let row_exp = match source {
                BoundSource::Combination => 1.0 / (b * q),
                _ => 1.0 / (p * b),
            };
            vec![
                ctx.factor(MaxAbsCoeff, 1.0),
                ctx.factor(CoeffPowerSum(a * p), 1.0 / (a * p)),
                ctx.factor(TotalAbsSum, 1.0 / q),
                ctx.factor(RowPowerSum(b), row_exp),
            ]
        }
        // (sum |a|^(ap))^(1/(ap)) (sum |a|^(gq))^(1/(gq)) (sum r^b)^(1/(pb)) (sum r^d)^(1/(dq))
        5 => {
            let (a, b) = pair(params.ab());
            let (g, d) = pair(params.gd());
            vec![
                ctx.factor(CoeffPowerSum(a * p), 1.0 / (a * p)),
                ctx.factor(CoeffPowerSum(g * q), 1.0 / (g * q)),
                ctx.factor(RowPowerSum(b), 1.0 / (b * p)),
                ctx.factor(RowPowerSum(d), 1.0 / (d * q)),
            ]
        }
        // (sum |a|^q)^(1/q) (sum |a|^(ap))^(1/(ap)) (max r)^(1/q) (sum r^b)^(1/(pb))
        6 => {
            let (a, b) = pair(params.ab());
            vec![
                ctx.factor(CoeffPowerSum(q), 1.0 / q),
                ctx.factor(CoeffPowerSum(a * p), 1.0 / (a * p)),
                ctx.factor(MaxRowSum, 1.0 / q),
                ctx.factor(RowPowerSum(b), 1.0 / (b * p)),
            ]
        }
        // max|a| (sum |a|^p)^(1/p) (max r)^(1/p) S^(1/q)
        7 => vec![
            ctx.factor(MaxAbsCoeff, 1.0),
            ctx.factor(CoeffPowerSum(p), 1.0 / p),
            ctx.factor(MaxRowSum, 1.0 / p),
            ctx.factor(TotalAbsSum, 1.0 / q),
        ],
        // (sum |a|^p)^(1/p) (sum |a|^(gq))^(1/(gq)) (max r)^(1/p) (sum r^d)^(1/(dq))
        8 => {
            let (g, d) = pair(params.gd());
            vec![
                ctx.factor(CoeffPowerSum(p), 1.0 / p),
                ctx.factor(CoeffPowerSum(g * q), 1.0 / (g * q)),
                ctx.factor(MaxRowSum, 1.0 / p),
                ctx.factor(RowPowerSum(d), 1.0 / (d * q)),
            ]
        }
        // (sum |a|^p)^(1/p) (sum |a|^q)^(1/q) max r
        9 => vec![
            ctx.factor(CoeffPowerSum(p), 1.0 / p),
            ctx.factor(CoeffPowerSum(q), 1.0 / q),
            ctx.factor(MaxRowSum, 1.0),
        ],
        _ => unreachable!("branch index validated"),
    }
}

/// The nine closed forms of the square-rooted (Bombieri-type) display,
/// coefficients being the projections `|(x, y_i)|`.
fn rooted_chain_factors(
    ctx: &FactorContext,
    params: &HolderParams,
    branch: BranchSelector,
) -> Vec<Factor> {
    let p = params.pq().p();
    let q = params.pq().q();
    use FactorKind::*;
    match branch.index() {
        // max|a| S^(1/2)
        1 => vec![ctx.factor(MaxAbsCoeff, 1.0), ctx.factor(TotalAbsSum, 0.5)],
        // max|a|^(1/2) (sum |a|^(gq))^(1/(2gq)) S^(1/(2p)) (sum r^d)^(1/(2dq))
        2 => {
            let (g, d) = pair(params.gd());
            vec![
                ctx.factor(MaxAbsCoeff, 0.5),
                ctx.factor(CoeffPowerSum(g * q), 1.0 / (2.0 * g * q)),
                ctx.factor(TotalAbsSum, 1.0 / (2.0 * p)),
                ctx.factor(RowPowerSum(d), 1.0 / (2.0 * d * q)),
            ]
        }
        // max|a|^(1/2) (sum |a|^q)^(1/(2q)) S^(1/(2p)) (max r)^(1/(2q))
        3 => vec![
            ctx.factor(MaxAbsCoeff, 0.5),
            ctx.factor(CoeffPowerSum(q), 1.0 / (2.0 * q)),
            ctx.factor(TotalAbsSum, 1.0 / (2.0 * p)),
            ctx.factor(MaxRowSum, 1.0 / (2.0 * q)),
        ],
        // max|a|^(1/2) (sum |a|^(ap))^(1/(2ab)) S^(1/(2q)) (sum r^b)^(1/(pb))
        // — both printed exponents diverge from the composition's
        //   1/(2ap) and 1/(2pb)
        4 => {
            let (a, b) = pair(params.ab());
            vec![
                ctx.factor(MaxAbsCoeff, 0.5),
                ctx.factor(CoeffPowerSum(a * p), 1.0 / (2.0 * a * b)),
                ctx.factor(TotalAbsSum, 1.0 / (2.0 * q)),
                ctx.factor(RowPowerSum(b), 1.0 / (p * b)),
            ]
        }
        // (sum |a|^(ap))^(1/(2ap)) (sum |a|^(gq))^(1/(2gq)) (sum r^b)^(1/(2pb)) (sum r^d)^(1/(2dq))
        5 => {
            let (a, b) = pair(params.ab());
            let (g, d) = pair(params.gd());
            vec![
                ctx.factor(CoeffPowerSum(a * p), 1.0 / (2.0 * a * p)),
                ctx.factor(CoeffPowerSum(g * q), 1.0 / (2.0 * g * q)),
                ctx.factor(RowPowerSum(b), 1.0 / (2.0 * b * p)),
                ctx.factor(RowPowerSum(d), 1.0 / (2.0 * d * q)),
            ]
        }
        // (sum |a|^q)^(1/(2q)) (sum |a|^(ap))^(1/(2ap)) (max r)^(1/(2p)) (sum r^b)^(1/(2pb))
        // — the max-row exponent is printed 1/(2p) where the composition
        //   gives 1/(2q)
        6 => {
            let (a, b) = pair(params.ab());
            vec![
                ctx.factor(CoeffPowerSum(q), 1.0 / (2.0 * q)),
                ctx.factor(CoeffPowerSum(a * p), 1.0 / (2.0 * a * p)),
                ctx.factor(MaxRowSum, 1.0 / (2.0 * p)),
                ctx.factor(RowPowerSum(b), 1.0 / (2.0 * b * p)),
            ]
        }
        // max|a|^(1/2) (sum |a|^p)^(1/(2p)) (max r)^(1/(2p)) S^(1/(2q))
        7 => vec![
            ctx.factor(MaxAbsCoeff, 0.5),
            ctx.factor(CoeffPowerSum(p), 1.0 / (2.0 * p)),
            ctx.factor(MaxRowSum, 1.0 / (2.0 * p)),
            ctx.factor(TotalAbsSum, 1.0 / (2.0 * q)),
        ],
        // (sum |a|^p)^(1/(2p)) (sum |a|^(gq))^(1/(2gq)) (max r)^(1/(2p)) (sum r^d)^(1/(2dq))
        8 => {
            let (g, d) = pair(params.gd());
            vec![
                ctx.factor(CoeffPowerSum(p), 1.0 / (2.0 * p)),
                ctx.factor(CoeffPowerSum(g * q), 1.0 / (2.0 * g * q)),
                ctx.factor(MaxRowSum, 1.0 / (2.0 * p)),
                ctx.factor(RowPowerSum(d), 1.0 / (2.0 * d * q)),
            ]
        }
        // (sum |a|^p)^(1/(2p)) (sum |a|^q)^(1/(2q)) (max r)^(1/2)
        9 => vec![
            ctx.factor(CoeffPowerSum(p), 1.0 / (2.0 * p)),
            ctx.factor(CoeffPowerSum(q), 1.0 / (2.0 * q)),
            ctx.factor(MaxRowSum, 0.5),
        ],
        _ => unreachable!("branch index validated"),
    }
}

fn pair(opt: Option<crate::exponents::ConjugatePair>) -> (f64, f64) {
    let pair = opt.expect("validated before building factors");
    (pair.p(), pair.q())
}

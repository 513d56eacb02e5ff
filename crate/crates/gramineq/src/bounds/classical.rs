//! The classical bounds and the two x-based chains.
//!
//! Pecaric's inequality bounds `|sum_i c_i (x, y_i)|^2` by
//! `||x||^2 sum_i |c_i|^2 r_i` and its max-row relaxation; with
//! `c_i = conj((x, y_i))` it yields the self-coefficient form, Bombieri's
//! inequality `sum_i |(x,y_i)|^2 <= ||x||^2 max_i r_i`, and — for an
//! orthonormal family, where `max_i r_i = 1` — Bessel's inequality. The
//! chain builders generalize both along the Holder-exponent hierarchy.

use crate::exponents::{BranchSelector, ConjugatePair, HolderParams};
use crate::gram::{Complex, GramData, ProjectionData};
use crate::sum::Accumulator;

use super::factors::{canonical_product, FactorKind};
use super::{
    derived_form_value, middle_value, BoundChain, BoundError, BoundValue, EvalContext, Form,
};

fn check_lengths(proj: &ProjectionData, c: &[Complex], gram: &GramData) -> Result<(), BoundError> {
    if c.len() != gram.len() || proj.len() != gram.len() {
        return Err(BoundError::LengthMismatch {
            coeffs: c.len().min(proj.len()),
            gram: gram.len(),
        });
    }
    Ok(())
}

/// `|sum_i c_i (x, y_i)|^2`.
pub fn pecaric_lhs(proj: &ProjectionData, c: &[Complex]) -> Result<f64, BoundError> {
    if c.len() != proj.len() {
        return Err(BoundError::LengthMismatch {
            coeffs: c.len(),
            gram: proj.len(),
        });
    }
    let mut re = Accumulator::new();
    let mut im = Accumulator::new();
    for (ci, pi) in c.iter().zip(proj.proj()) {
        let term = ci * pi;
        re.add(term.re);
        im.add(term.im);
    }
    let (re, im) = (re.value(), im.value());
    Ok(re * re + im * im)
}

/// Pecaric's two bounds: `(||x||^2 sum_i |c_i|^2 r_i,
/// ||x||^2 (sum_i |c_i|^2) max_i r_i)`.
pub fn pecaric_bounds(
    proj: &ProjectionData,
    c: &[Complex],
    gram: &GramData,
) -> Result<(f64, f64), BoundError> {
    check_lengths(proj, c, gram)?;
    let mut weighted = Accumulator::new();
    let mut plain = Accumulator::new();
    for (ci, &r) in c.iter().zip(gram.abs_row_sums()) {
        let sq = ci.norm_sqr();
        weighted.add(sq * r);
        plain.add(sq);
    }
    let b1 = proj.norm_x_sq() * weighted.value();
    let b2 = proj.norm_x_sq() * (plain.value() * gram.max_row_sum());
    Ok((b1, b2))
}

/// The self-coefficient specialization `c_i = conj((x, y_i))`:
/// `((sum |(x,y_i)|^2)^2, ||x||^2 sum |(x,y_i)|^2 r_i,
/// ||x||^2 (sum |(x,y_i)|^2) max_i r_i)`.
pub fn pecaric_self_bounds(
    proj: &ProjectionData,
    gram: &GramData,
) -> Result<(f64, f64, f64), BoundError> {
    check_lengths(proj, proj.proj(), gram)?;
    let mut weighted = Accumulator::new();
    let mut plain = Accumulator::new();
    for (pi, &r) in proj.proj().iter().zip(gram.abs_row_sums()) {
        let sq = pi.norm_sqr();
        weighted.add(sq * r);
        plain.add(sq);
    }
    let total = plain.value();
    Ok((
        total * total,
        proj.norm_x_sq() * weighted.value(),
        proj.norm_x_sq() * (total * gram.max_row_sum()),
    ))
}

/// Bombieri's inequality: `(sum_i |(x,y_i)|^2, ||x||^2 max_i r_i)`.
///
/// For an orthonormal family the bound is `||x||^2`, i.e. Bessel's
/// inequality.
pub fn bombieri_bound(proj: &ProjectionData, gram: &GramData) -> Result<(f64, f64), BoundError> {
    check_lengths(proj, proj.proj(), gram)?;
    let mut acc = Accumulator::new();
    for pi in proj.proj() {
        acc.add(pi.norm_sqr());
    }
    Ok((acc.value(), proj.norm_x_sq() * gram.max_row_sum()))
}

/// The ratio refinement of Bombieri's inequality:
/// `(sum |(x,y_i)|^2)^2 / [(sum |(x,y_i)|^p)^(1/p) (sum |(x,y_i)|^q)^(1/q)]
/// <= ||x||^2 max_i r_i`, with the ratio defined as 0 when the denominator
/// vanishes. At `p = q = 2` the left side reduces to `sum |(x,y_i)|^2`.
pub fn ratio_bound(
    proj: &ProjectionData,
    gram: &GramData,
    pq: ConjugatePair,
) -> Result<(f64, f64), BoundError> {
    check_lengths(proj, proj.proj(), gram)?;
    let (lhs_sum, bound) = bombieri_bound(proj, gram)?;
    let ctx = super::factors::FactorContext::new(proj.proj(), gram);
    let (p, q) = (pq.p(), pq.q());
    let denom = canonical_product(vec![
        ctx.factor(FactorKind::CoeffPowerSum(p), 1.0 / p),
        ctx.factor(FactorKind::CoeffPowerSum(q), 1.0 / q),
    ]);
    let ratio = if denom == 0.0 {
        0.0
    } else {
        lhs_sum * lhs_sum / denom
    };
    Ok((ratio, bound))
}

fn chain_branches(
    ctx: &EvalContext,
    params: &HolderParams,
    branches: &[BranchSelector],
) -> Result<Vec<BoundValue>, BoundError> {
    branches
        .iter()
        .map(|&branch| {
            let sub = params
                .for_branch(branch)
                .map_err(|issues| BoundError::InvalidParams {
                    branch: branch.index(),
                    issues,
                })?;
            derived_form_value(ctx, &sub, branch)
        })
        .collect()
}

/// The Pecaric-type chain on `|sum_i c_i (x, y_i)|^2`:
/// lhs, `||x||^2 * holder(conj c)`, and the requested derived branches,
/// with the classical row-sum/max-row bounds attached.
pub fn pecaric_chain(
    proj: &ProjectionData,
    c: &[Complex],
    gram: &GramData,
    params: &HolderParams,
    branches: &[BranchSelector],
) -> Result<BoundChain, BoundError> {
    check_lengths(proj, c, gram)?;
    let lhs = pecaric_lhs(proj, c)?;
    // Schwarz step: the chain bounds ||x||^2 ||sum conj(c_i) y_i||^2
    let conj_c: Vec<Complex> = c.iter().map(|z| z.conj()).collect();
    let ctx = EvalContext::Pecaric {
        c: &conj_c,
        proj,
        gram,
    };
    let middle = middle_value(&ctx, params.pq())?;
    let branch_values = chain_branches(&ctx, params, branches)?;
    let (b1, b2) = pecaric_bounds(proj, c, gram)?;
    let base = HolderParams::new(params.pq());
    let classical = vec![
        BoundValue {
            name: "pecaric_row_sum".into(),
            value: b1,
            branch: None,
            params: base,
            form: Form::Derived,
        },
        BoundValue {
            name: "pecaric_max_row".into(),
            value: b2,
            branch: None,
            params: base,
            form: Form::Derived,
        },
    ];
    Ok(BoundChain {
        lhs,
        middle: Some(middle),
        branches: branch_values,
        classical,
    })
}

/// The Bombieri-type (square-rooted) chain on `sum_i |(x, y_i)|^2`: lhs,
/// `||x|| [sum |(x,y_i)|^p r_i]^(1/2p) [sum |(x,y_i)|^q r_i]^(1/2q)`, and
/// the requested derived branches, with Bombieri's bound attached.
pub fn bombieri_chain(
    proj: &ProjectionData,
    gram: &GramData,
    params: &HolderParams,
    branches: &[BranchSelector],
) -> Result<BoundChain, BoundError> {
    check_lengths(proj, proj.proj(), gram)?;
    let (lhs, bombieri) = bombieri_bound(proj, gram)?;
    let ctx = EvalContext::Bombieri { proj, gram };
    let middle = middle_value(&ctx, params.pq())?;
    let branch_values = chain_branches(&ctx, params, branches)?;
    let classical = vec![BoundValue {
        name: "bombieri".into(),
        value: bombieri,
        branch: None,
        params: HolderParams::new(params.pq()),
        form: Form::Derived,
    }];
    Ok(BoundChain {
        lhs,
        middle: Some(middle),
        branches: branch_values,
        classical,
    })
}

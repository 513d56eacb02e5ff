//! Printed-vs-derived audit.
//!
//! For every chain and branch, the printed closed form claims to bound the
//! chain's middle (Holder) expression. Where the transcription matches the
//! composed form that is a theorem; where it does not — the combination
//! display's branch 4 and the square-rooted display's branches 4 and 6 —
//! whether the printed form is still a valid upper bound is an empirical
//! question. The audit searches the seeded instance stream for violations
//! `printed < middle - tol` and keeps the worst counterexample per
//! `(chain, branch)`, serialized so it replays exactly.

use serde::{Deserialize, Serialize};

use crate::bounds::{
    derived_form_value, middle_value, printed_form_value, BoundError, BoundSource, EvalContext,
};
use crate::exponents::{BranchSelector, HolderParams};
use crate::gram::Complex;
use crate::instance::Instance;
use crate::report::InstanceFile;
use crate::slack_tol;

use super::{params_stream, random_gram_direct_instance, random_instance, FuzzConfig};

/// A replayable audit counterexample: the full instance plus the parameter
/// point and the three values in question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub instance_index: u64,
    pub gram_direct: bool,
    pub sample_index: u32,
    pub instance: InstanceFile,
    pub params: HolderParams,
    pub printed_value: f64,
    pub derived_value: f64,
    pub middle_value: f64,
    /// `printed - middle`; negative beyond tolerance is the violation.
    pub slack: f64,
}

/// Outcome counts for one `(chain, branch)` printed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub source: BoundSource,
    pub branch: u8,
    pub checks: u64,
    pub holds: u64,
    pub violations: u64,
    /// Checks dropped because a value underflowed to zero or overflowed;
    /// see `ChainReport::numeric_skips` for the rationale.
    pub numeric_skips: u64,
    /// Largest relative printed-vs-derived deviation seen (0 when the
    /// transcription matches the composition).
    pub max_form_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: FuzzConfig,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn row(&self, source: BoundSource, branch: u8) -> &AuditRow {
        self.rows
            .iter()
            .find(|r| r.source == source && r.branch == branch)
            .expect("all 27 rows present")
    }

    pub fn total_violations(&self) -> u64 {
        self.rows.iter().map(|r| r.violations).sum()
    }
}

struct RowAccum {
    checks: u64,
    holds: u64,
    violations: u64,
    numeric_skips: u64,
    max_form_deviation: f64,
    worst: Option<Counterexample>,
}

impl RowAccum {
    fn new() -> Self {
        RowAccum {
            checks: 0,
            holds: 0,
            violations: 0,
            numeric_skips: 0,
            max_form_deviation: 0.0,
            worst: None,
        }
    }
}

/// Tests `printed >= middle - tol` for all 27 printed forms across the
/// fuzz stream; deterministic given the config.
pub fn audit_printed_forms(config: &FuzzConfig) -> Result<AuditReport, BoundError> {
    let mut rows: Vec<(BoundSource, u8, RowAccum)> = Vec::with_capacity(27);
    for source in [
        BoundSource::Combination,
        BoundSource::Pecaric,
        BoundSource::Bombieri,
    ] {
        for branch in 1..=9u8 {
            rows.push((source, branch, RowAccum::new()));
        }
    }

    for index in 0..config.instances {
        let coordinate = random_instance(config, index);
        audit_instance(config, index, false, &coordinate, &mut rows)?;
        if config.include_gram_direct {
            let probe = random_gram_direct_instance(config, index);
            audit_instance(config, index, true, &probe, &mut rows)?;
        }
    }

    Ok(AuditReport {
        config: config.clone(),
        rows: rows
            .into_iter()
            .map(|(source, branch, acc)| AuditRow {
                source,
                branch,
                checks: acc.checks,
                holds: acc.holds,
                violations: acc.violations,
                numeric_skips: acc.numeric_skips,
                max_form_deviation: acc.max_form_deviation,
                worst: acc.worst,
            })
            .collect(),
    })
}

fn audit_instance(
    config: &FuzzConfig,
    index: u64,
    gram_direct: bool,
    instance: &Instance,
    rows: &mut [(BoundSource, u8, RowAccum)],
) -> Result<(), BoundError> {
    let gram = instance.gram();
    let proj = instance.proj();
    let conj_c: Option<Vec<Complex>> = instance.c().map(|c| c.iter().map(|z| z.conj()).collect());

    for (k, params) in params_stream(config, index).into_iter().enumerate() {
        for (source, branch_ix, acc) in rows.iter_mut() {
            let ctx = match source {
                BoundSource::Combination => match instance.c() {
                    Some(alphas) => EvalContext::Combination { alphas, gram },
                    None => continue,
                },
                BoundSource::Pecaric => match &conj_c {
                    Some(c) => EvalContext::Pecaric { c, proj, gram },
                    None => continue,
                },
                BoundSource::Bombieri => EvalContext::Bombieri { proj, gram },
            };
            let branch = BranchSelector::from_index(*branch_ix).expect("1..=9");
            let sub = params
                .for_branch(branch)
                .map_err(|issues| BoundError::InvalidParams {
                    branch: *branch_ix,
                    issues,
                })?;
            let printed = printed_form_value(&ctx, &sub, branch)?;
            let derived = derived_form_value(&ctx, &sub, branch)?;
            let middle = middle_value(&ctx, sub.pq())?;
            // overflow, or an underflow-to-zero against a positive middle,
            // says nothing about the transcription; skip and count
            if !printed.value.is_finite()
                || !middle.is_finite()
                || (printed.value == 0.0 && middle > 0.0)
            {
                acc.numeric_skips += 1;
                continue;
            }
            let slack = printed.value - middle;
            acc.checks += 1;
            if derived.value.is_finite() && printed.value.max(derived.value) > 0.0 {
                let dev = (printed.value - derived.value).abs() / printed.value.max(derived.value);
                acc.max_form_deviation = acc.max_form_deviation.max(dev);
            }
            if slack >= -slack_tol(printed.value) {
                acc.holds += 1;
            } else {
                acc.violations += 1;
                let replace = match &acc.worst {
                    None => true,
                    Some(w) => slack < w.slack,
                };
                if replace {
                    acc.worst = Some(Counterexample {
                        instance_index: index,
                        gram_direct,
                        sample_index: k as u32,
                        instance: InstanceFile::from_instance(instance),
                        params: sub,
                        printed_value: printed.value,
                        derived_value: derived.value,
                        middle_value: middle,
                        slack,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Recomputes a counterexample's `(printed, derived, middle)` values for
/// its `(source, branch)` row from the serialized instance.
pub fn replay_branch(
    ce: &Counterexample,
    source: BoundSource,
    branch: BranchSelector,
) -> Result<(f64, f64, f64), BoundError> {
    let instance = ce.instance.clone().into_instance().map_err(|e| {
        BoundError::Gram(crate::gram::GramError::NonFinite {
            context: Box::leak(format!("counterexample replay: {e}").into_boxed_str()),
        })
    })?;
    let gram = instance.gram();
    let proj = instance.proj();
    let conj_c: Option<Vec<Complex>> = instance.c().map(|c| c.iter().map(|z| z.conj()).collect());
    let ctx = match source {
        BoundSource::Combination => EvalContext::Combination {
            alphas: instance.c().expect("counterexample instance carries c"),
            gram,
        },
        BoundSource::Pecaric => EvalContext::Pecaric {
            c: conj_c
                .as_deref()
                .expect("counterexample instance carries c"),
            proj,
            gram,
        },
        BoundSource::Bombieri => EvalContext::Bombieri { proj, gram },
    };
    let printed = printed_form_value(&ctx, &ce.params, branch)?;
    let derived = derived_form_value(&ctx, &ce.params, branch)?;
    let middle = middle_value(&ctx, ce.params.pq())?;
    Ok((printed.value, derived.value, middle))
}

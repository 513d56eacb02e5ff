//! Audit the printed branch displays against the composed forms.
//!
//! Each branch bound exists in two forms: the composition of the two
//! factor majorizations (derived) and the closed formula as printed in the
//! classical displays. Three printed transcriptions carry exponents that
//! disagree with the composition; whether those printed forms still bound
//! the middle Holder expression is an empirical question this audit
//! settles by counterexample search. Everything is seeded and replayable.
//!
//! Run with: `cargo run --release --example audit_printed_forms`

use gramineq::verify::audit::audit_printed_forms;
use gramineq::verify::FuzzConfig;

fn main() {
    let mut config = FuzzConfig::new(20240810);
    config.instances = 1500;
    config.include_gram_direct = true;
    let report = audit_printed_forms(&config).unwrap();

    println!(
        "{:<14} {:>6} {:>8} {:>10} {:>12} {:>14}",
        "chain", "branch", "checks", "holds", "violations", "max form dev"
    );
    for row in &report.rows {
        println!(
            "{:<14} {:>6} {:>8} {:>10} {:>12} {:>14.3e}",
            row.source.label(),
            row.branch,
            row.checks,
            row.holds,
            row.violations,
            row.max_form_deviation
        );
    }
    println!();
    for row in &report.rows {
        if let Some(worst) = &row.worst {
            println!(
                "worst counterexample for {} branch {}: printed {:.6e} < middle {:.6e} \
                 (derived form gives {:.6e}) at p = {:.4}",
                row.source.label(),
                row.branch,
                worst.printed_value,
                worst.middle_value,
                worst.derived_value,
                worst.params.pq().p()
            );
        }
    }
}

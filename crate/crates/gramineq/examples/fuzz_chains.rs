//! Randomized verification sweep over every inequality chain.
//!
//! Draws seeded instances, checks each derived link (expansion <= M <=
//! holder <= branches, the weighted chain, the square-rooted chain, and
//! the classical bounds), and prints per-link statistics. A derived-link
//! violation would be an implementation bug; the run is expected clean.
//!
//! Run with: `cargo run --release --example fuzz_chains`

use gramineq::verify::{fuzz, FuzzConfig};

fn main() {
    let mut config = FuzzConfig::new(7);
    config.instances = 2000;
    let summary = fuzz(&config).unwrap();

    println!(
        "{} instances x {} parameter samples: {} checks, {} violations, {} numeric skips\n",
        summary.instances,
        config.pq_samples,
        summary.total_checks,
        summary.derived_violations,
        summary.numeric_skips
    );
    println!("{:<40} {:>9} {:>12}", "link", "checks", "min slack");
    for (name, stats) in &summary.links {
        println!(
            "{:<40} {:>9} {:>12.3e}",
            name, stats.checks, stats.min_slack
        );
    }
    println!("\ntightness quantiles (bound / lhs), median and extremes:");
    println!(
        "{:<28} {:>10} {:>10} {:>10}",
        "bound", "min", "median", "max"
    );
    for (name, q) in &summary.tightness {
        println!(
            "{:<28} {:>10.3} {:>10.3} {:>10.3}",
            name, q.min, q.median, q.max
        );
    }
    assert_eq!(summary.derived_violations, 0);
}

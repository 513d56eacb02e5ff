//! Evaluate the full bound ladder for a small complex family.
//!
//! Builds three vectors in C^3, a fixed `x`, and coefficients `c`, then
//! prints every bound with its slack over the left-hand side it dominates.
//!
//! Run with: `cargo run --example evaluate`

use gramineq::cli::build_eval_report;
use gramineq::exponents::{BranchSelector, ConjugatePair, HolderParams};
use gramineq::{Complex, Instance, VectorFamily};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn main() {
    let family = VectorFamily::new(vec![
        vec![c(1.0, 0.0), c(0.25, -0.5), c(0.0, 0.3)],
        vec![c(-0.6, 0.2), c(0.9, 0.0), c(0.45, 0.45)],
        vec![c(0.1, 0.7), c(-0.2, 0.35), c(0.65, 0.0)],
    ])
    .unwrap();
    let x = vec![c(0.8, -0.3), c(0.2, 0.5), c(-0.4, 0.1)];
    let coeffs = vec![c(0.7, 0.4), c(-0.5, 0.6), c(0.3, -0.8)];
    let instance = Instance::from_coordinates(x, family, Some(coeffs)).unwrap();

    let pq = ConjugatePair::from_p(2.5).unwrap();
    let two = ConjugatePair::from_p(2.0).unwrap();
    let params = HolderParams::new(pq).with_ab(two).with_gd(two);

    let report = build_eval_report(&instance, &params, &BranchSelector::all(), false).unwrap();
    println!(
        "instance: n = {}, {}",
        report.instance.n, report.instance.bessel_note
    );
    println!("params: p = {}, q = {}\n", params.pq().p(), params.pq().q());
    println!(
        "{:<28} {:>14} {:>14} {:>12}",
        "bound", "value", "lhs", "tightness"
    );
    for row in &report.rows {
        println!(
            "{:<28} {:>14.6e} {:>14.6e} {:>12.4}",
            row.name,
            row.value,
            row.lhs,
            row.tightness.unwrap_or(f64::NAN)
        );
    }
}

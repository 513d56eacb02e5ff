//! Search the Holder exponents and branch choice minimizing a bound.
//!
//! The exponent `p` (and the secondary pairs on double-Holder branches) are
//! free parameters; for a lopsided instance the best choice is usually far
//! from the textbook `p = 2`. This example optimizes the weighted-sum
//! chain over all nine branches and compares against the `p = 2` baseline.
//!
//! Run with: `cargo run --example optimize_exponents`

use gramineq::bounds::pecaric_chain;
use gramineq::exponents::{BranchSelector, ConjugatePair, HolderParams};
use gramineq::optimizer::{optimize, ObjectiveScope, OptimConfig, OptimTarget};
use gramineq::{Complex, Instance, VectorFamily};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn main() {
    // a family with one long vector and a lopsided coefficient profile
    let family = VectorFamily::new(vec![
        vec![c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.4, 0.3), c(0.8, 0.0), c(0.0, 0.0)],
        vec![c(0.1, -0.2), c(0.3, 0.1), c(0.5, 0.0)],
    ])
    .unwrap();
    let x = vec![c(1.0, 0.0), c(0.5, -0.5), c(0.25, 0.25)];
    let coeffs = vec![c(0.05, 0.0), c(1.4, -0.3), c(0.9, 1.1)];
    let instance = Instance::from_coordinates(x, family, Some(coeffs)).unwrap();

    let config = OptimConfig::new(OptimTarget::Pecaric).with_scope(ObjectiveScope::BestOfAll);
    let result = optimize(&instance, &config).unwrap();

    let two = ConjugatePair::from_p(2.0).unwrap();
    let baseline_params = HolderParams::new(two).with_ab(two).with_gd(two);
    let baseline = pecaric_chain(
        instance.proj(),
        instance.c().unwrap(),
        instance.gram(),
        &baseline_params,
        &BranchSelector::all(),
    )
    .unwrap();
    let baseline_best = baseline
        .branches
        .iter()
        .map(|b| b.value)
        .fold(f64::INFINITY, f64::min);

    println!("lhs |sum c_i (x, y_i)|^2          = {:.6}", result.lhs);
    println!(
        "best bound found                  = {:.6}",
        result.best_value
    );
    println!(
        "  at p = {:.4} (q = {:.4})",
        result.best_params.pq().p(),
        result.best_params.pq().q()
    );
    if let Some(ab) = result.best_params.ab() {
        println!(
            "  secondary pair alpha = {:.4}, beta = {:.4}",
            ab.p(),
            ab.q()
        );
    }
    if let Some(gd) = result.best_params.gd() {
        println!(
            "  secondary pair gamma = {:.4}, delta = {:.4}",
            gd.p(),
            gd.q()
        );
    }
    if let Some(branch) = result.best_branch {
        println!("  using {branch}");
    }
    println!("  tightness = {:.4}", result.tightness);
    println!(
        "  {} parameter points evaluated, {} skipped",
        result.evaluations, result.skipped
    );
    println!("best branch bound at p = 2        = {baseline_best:.6}");
    println!(
        "improvement over p = 2 baseline   = {:.2}%",
        100.0 * (1.0 - result.best_value / baseline_best)
    );
}

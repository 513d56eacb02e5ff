//! Work directly from a Hermitian Gram matrix, without coordinates.
//!
//! The branch bounds consume only `|G_ij|`, the absolute row sums, and the
//! projection magnitudes, so a family can be specified by its Gram matrix
//! plus the inner products `(x, y_i)` and `||x||^2` alone. The matrix here
//! is not positive semidefinite — fine for the majorization links, which
//! hold for any Hermitian data.
//!
//! Run with: `cargo run --example gram_direct`

use gramineq::bounds::bombieri_chain;
use gramineq::exponents::{BranchSelector, ConjugatePair, HolderParams};
use gramineq::{Complex, GramData, ProjectionData};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn main() {
    let gram = GramData::from_matrix(vec![
        vec![c(1.0, 0.0), c(0.4, 0.9), c(-0.3, 0.2)],
        vec![c(0.4, -0.9), c(0.5, 0.0), c(0.8, 0.0)],
        vec![c(-0.3, -0.2), c(0.8, 0.0), c(2.0, 0.0)],
    ])
    .unwrap();
    println!("absolute row sums: {:?}", gram.abs_row_sums());
    println!(
        "total |G|: {}, max row: {}\n",
        gram.total_abs_sum(),
        gram.max_row_sum()
    );

    let proj = ProjectionData::new(vec![c(0.6, 0.1), c(-0.2, 0.4), c(0.9, -0.5)], 1.8).unwrap();
    let pq = ConjugatePair::from_p(3.0).unwrap();
    let two = ConjugatePair::from_p(2.0).unwrap();
    let params = HolderParams::new(pq).with_ab(two).with_gd(two);

    let chain = bombieri_chain(&proj, &gram, &params, &BranchSelector::all()).unwrap();
    println!("projection energy (chain lhs): {:.6}", chain.lhs);
    println!(
        "middle bound at p = 3:         {:.6}",
        chain.middle.unwrap()
    );
    for bound in &chain.branches {
        println!("{:<22} {:.6}", bound.name, bound.value);
    }
    for bound in &chain.classical {
        println!("{:<22} {:.6}  (classical)", bound.name, bound.value);
    }
}

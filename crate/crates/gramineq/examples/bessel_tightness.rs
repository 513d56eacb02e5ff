//! Bessel's inequality as the tight orthonormal case of Bombieri's bound.
//!
//! For an orthonormal family every absolute row sum is 1, so Bombieri's
//! bound `||x||^2 max_i r_i` collapses to `||x||^2` — Bessel's inequality —
//! and for `x` inside the span the projection energy attains it exactly
//! (Parseval). Off-span components open a gap.
//!
//! Run with: `cargo run --example bessel_tightness`

use gramineq::bounds::bombieri_bound;
use gramineq::verify::{random_orthonormal_instance, FuzzConfig};
use gramineq::{Complex, Instance, InstanceSource, ProjectionData, VectorFamily};

fn main() {
    let mut config = FuzzConfig::new(99);
    config.n_range = (3, 3);
    config.d_range = (3, 3);

    // x in the span: equality
    let inst = random_orthonormal_instance(&config, 0);
    let (energy, bound) = bombieri_bound(inst.proj(), inst.gram()).unwrap();
    println!("x in span of 3 orthonormal vectors in C^3:");
    println!("  sum |(x, e_i)|^2 = {energy:.12}");
    println!("  Bombieri bound   = {bound:.12}");
    println!("  ||x||^2          = {:.12}", inst.proj().norm_x_sq());
    println!("  gap              = {:.3e}\n", bound - energy);

    // same family, x pushed partly out of the span (d = 4)
    let (family3, x3) = match inst.source() {
        InstanceSource::Coordinates { x, family } => (family.clone(), x.clone()),
        InstanceSource::GramDirect => unreachable!(),
    };
    let pad = |v: &[Complex], extra: Complex| -> Vec<Complex> {
        let mut out = v.to_vec();
        out.push(extra);
        out
    };
    let family4 = VectorFamily::new(
        family3
            .iter()
            .map(|y| pad(y, Complex::new(0.0, 0.0)))
            .collect(),
    )
    .unwrap();
    let x4 = pad(&x3, Complex::new(0.9, -0.4));
    let inst4 = Instance::from_coordinates(x4, family4, None).unwrap();
    let (energy, bound) = bombieri_bound(inst4.proj(), inst4.gram()).unwrap();
    println!("same family in C^4 with an off-span component added to x:");
    println!("  sum |(x, e_i)|^2 = {energy:.12}");
    println!("  Bessel bound     = {bound:.12}");
    println!(
        "  gap              = {:.6}  (the off-span energy)",
        bound - energy
    );

    // ProjectionData can also be given directly
    let direct =
        ProjectionData::new(vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)], 1.0).unwrap();
    println!(
        "\ndirect projection data: energy {:.4} <= ||x||^2 = {:.4}",
        direct.proj().iter().map(|z| z.norm_sqr()).sum::<f64>(),
        direct.norm_x_sq()
    );
}

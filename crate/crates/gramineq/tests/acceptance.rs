//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured numbers (run with `--nocapture` to see them).

mod common;

use std::time::Instant;

use common::naive::Naive;
use gramineq::bounds::{
    bombieri_bound, derived_form_value, double_sum_m, holder_bound, middle_value, norm_expansion,
    pecaric_bounds, pecaric_chain, pecaric_lhs, pecaric_self_bounds, printed_form_value,
    ratio_bound, BoundSource, EvalContext,
};
use gramineq::exponents::{BranchSelector, ConjugatePair, HolderParams};
use gramineq::optimizer::{optimize, ObjectiveScope, OptimConfig, OptimTarget};
use gramineq::verify::audit::{audit_printed_forms, replay_branch};
use gramineq::verify::{
    check_chain, fuzz, params_stream, random_instance, random_orthonormal_instance, FuzzConfig,
};
use gramineq::{slack_tol, Complex};

const ACCEPT_SEED: u64 = 0x6772_616d; // "gram"

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    if !a.is_finite() || !b.is_finite() {
        return false;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Criterion 1: zero derived-link violations over 10^4 seeded instances
/// (n, d <= 8, unit-disk entries) x 5 conjugate-pair samples.
#[test]
fn criterion_1_chain_soundness() {
    let start = Instant::now();
    let config = FuzzConfig::new(ACCEPT_SEED);
    assert_eq!(config.instances, 10_000);
    assert_eq!(config.pq_samples, 5);
    let summary = fuzz(&config).expect("fuzz runs");
    let elapsed = start.elapsed();
    println!(
        "criterion 1 (chain soundness): {} checks on {} instances, {} violations, \
         {} numeric skips, {:.1}s",
        summary.total_checks,
        summary.instances,
        summary.derived_violations,
        summary.numeric_skips,
        elapsed.as_secs_f64()
    );
    assert_eq!(
        summary.derived_violations, 0,
        "derived violations: {:#?}",
        summary.violations
    );
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "expected under 60 s, took {:.1}s",
        elapsed.as_secs_f64()
    );
    println!("criterion 1: PASS");
}

/// Criterion 2: at p = q = 2 the chain reproduces the classical bounds —
/// branch (max-row, max-row) gives the max-row bound, the middle gives the
/// row-sum bound, and the ratio refinement collapses to Bombieri — all
/// within 1e-12 relative on 10^3 instances.
#[test]
fn criterion_2_classical_reductions() {
    let mut config = FuzzConfig::new(ACCEPT_SEED + 1);
    config.instances = 1000;
    let two = ConjugatePair::from_p(2.0).unwrap();
    let params = HolderParams::new(two);
    let nine = [BranchSelector::from_index(9).unwrap()];
    for index in 0..config.instances {
        let inst = random_instance(&config, index);
        let c = inst.c().expect("generated instances carry c");
        let chain = pecaric_chain(inst.proj(), c, inst.gram(), &params, &nine).unwrap();
        let (b1, b2) = pecaric_bounds(inst.proj(), c, inst.gram()).unwrap();
        let middle = chain.middle.unwrap();
        assert!(
            rel_close(middle, b1, 1e-12),
            "instance {index}: middle {middle} vs row-sum bound {b1}"
        );
        let branch9 = chain.branches[0].value;
        assert!(
            rel_close(branch9, b2, 1e-12),
            "instance {index}: branch 9 {branch9} vs max-row bound {b2}"
        );
        let (ratio_lhs, ratio_rhs) = ratio_bound(inst.proj(), inst.gram(), two).unwrap();
        let (energy, bombieri) = bombieri_bound(inst.proj(), inst.gram()).unwrap();
        assert!(
            rel_close(ratio_lhs, energy, 1e-12),
            "instance {index}: ratio lhs {ratio_lhs} vs energy {energy}"
        );
        assert!(rel_close(ratio_rhs, bombieri, 1e-12));
    }
    println!("criterion 2 (classical reductions at p = 2): PASS on 1000 instances");
}

/// Criterion 3: for orthonormal families with x in their span, the
/// projection energy equals ||x||^2 and Bombieri's bound equals ||x||^2,
/// both within 1e-10 relative (Bessel tightness).
#[test]
fn criterion_3_bessel_equality() {
    let mut config = FuzzConfig::new(ACCEPT_SEED + 2);
    config.instances = 1000;
    let mut worst: f64 = 0.0;
    for index in 0..config.instances {
        let inst = random_orthonormal_instance(&config, index);
        let (energy, bound) = bombieri_bound(inst.proj(), inst.gram()).unwrap();
        let norm_x_sq = inst.proj().norm_x_sq();
        let dev_energy = (energy - norm_x_sq).abs() / norm_x_sq.max(1e-300);
        let dev_bound = (bound - norm_x_sq).abs() / norm_x_sq.max(1e-300);
        worst = worst.max(dev_energy).max(dev_bound);
        assert!(
            dev_energy <= 1e-10,
            "instance {index}: Parseval deviation {dev_energy:e}"
        );
        assert!(
            dev_bound <= 1e-10,
            "instance {index}: Bessel bound deviation {dev_bound:e}"
        );
    }
    println!(
        "criterion 3 (Bessel equality): PASS on 1000 orthonormal instances, worst dev {worst:.2e}"
    );
}

/// Criterion 4: every bound value agrees with the independent naive
/// direct-loop oracle within 1e-9 relative, on 10^3 instances with n <= 3.
#[test]
fn criterion_4_oracle_equivalence() {
    let mut config = FuzzConfig::new(ACCEPT_SEED + 3);
    config.instances = 1000;
    config.n_range = (1, 3);
    let mut compared = 0u64;
    let mut check = |name: &str, index: u64, got: f64, want: f64| {
        assert!(
            rel_close(got, want, 1e-9),
            "instance {index} {name}: implementation {got:.17e} vs oracle {want:.17e}"
        );
        compared += 1;
    };
    for index in 0..config.instances {
        let inst = random_instance(&config, index);
        let naive = Naive::from_instance(&inst);
        let gram = inst.gram();
        let proj = inst.proj();
        let c = inst.c().unwrap();
        let abs_c = naive.abs_c();

        for params in params_stream(&config, index) {
            let pq = params.pq();
            let (p, q) = (pq.p(), pq.q());

            check(
                "expansion",
                index,
                norm_expansion(c, gram).unwrap(),
                naive.expansion(c),
            );
            check(
                "double_sum",
                index,
                double_sum_m(c, gram).unwrap(),
                naive.double_sum(c),
            );
            check(
                "holder",
                index,
                holder_bound(c, gram, pq).unwrap(),
                naive.holder(&abs_c, p, q),
            );

            let comb = EvalContext::Combination { alphas: c, gram };
            let conj_c: Vec<Complex> = c.iter().map(|z| z.conj()).collect();
            let pec = EvalContext::Pecaric {
                c: &conj_c,
                proj,
                gram,
            };
            let bom = EvalContext::Bombieri { proj, gram };
            for branch in BranchSelector::all() {
                let sub = params.for_branch(branch).unwrap();
                let derived = derived_form_value(&comb, &sub, branch).unwrap().value;
                check(
                    &format!("combination_branch_{}", branch.index()),
                    index,
                    derived,
                    naive.branch(&abs_c, &sub, branch),
                );
                let printed = printed_form_value(&comb, &sub, branch).unwrap().value;
                check(
                    &format!("combination_branch_{}_printed", branch.index()),
                    index,
                    printed,
                    naive.printed_squared(&abs_c, &sub, branch, true),
                );
                let derived31 = derived_form_value(&pec, &sub, branch).unwrap().value;
                check(
                    &format!("pecaric_branch_{}", branch.index()),
                    index,
                    derived31,
                    naive.norm_x_sq * naive.branch(&abs_c, &sub, branch),
                );
                let printed31 = printed_form_value(&pec, &sub, branch).unwrap().value;
                check(
                    &format!("pecaric_branch_{}_printed", branch.index()),
                    index,
                    printed31,
                    naive.norm_x_sq * naive.printed_squared(&abs_c, &sub, branch, false),
                );
                let derived41 = derived_form_value(&bom, &sub, branch).unwrap().value;
                check(
                    &format!("bombieri_branch_{}", branch.index()),
                    index,
                    derived41,
                    (naive.norm_x_sq * naive.branch(&naive.abs_proj(), &sub, branch)).sqrt(),
                );
                let printed41 = printed_form_value(&bom, &sub, branch).unwrap().value;
                check(
                    &format!("bombieri_branch_{}_printed", branch.index()),
                    index,
                    printed41,
                    naive.printed_rooted(&sub, branch),
                );
            }

            check(
                "pecaric_middle",
                index,
                middle_value(&pec, pq).unwrap(),
                naive.norm_x_sq * naive.holder(&abs_c, p, q),
            );
            check(
                "bombieri_middle",
                index,
                middle_value(&bom, pq).unwrap(),
                naive.rooted_middle(p, q),
            );

            let (ratio_lhs, ratio_rhs) = ratio_bound(proj, gram, pq).unwrap();
            let (naive_ratio, naive_bound) = naive.ratio(p, q);
            check("ratio_lhs", index, ratio_lhs, naive_ratio);
            check("ratio_bound", index, ratio_rhs, naive_bound);
        }

        check(
            "pecaric_lhs",
            index,
            pecaric_lhs(proj, c).unwrap(),
            naive.pecaric_lhs(),
        );
        let (b1, b2) = pecaric_bounds(proj, c, gram).unwrap();
        let (nb1, nb2) = naive.pecaric_bounds();
        check("pecaric_row_sum", index, b1, nb1);
        check("pecaric_max_row", index, b2, nb2);
        let (sl, sb1, sb2) = pecaric_self_bounds(proj, gram).unwrap();
        let (nsl, nsb1, nsb2) = naive.pecaric_self();
        check("pecaric_self_lhs", index, sl, nsl);
        check("pecaric_self_row_sum", index, sb1, nsb1);
        check("pecaric_self_max_row", index, sb2, nsb2);
        let (energy, bombieri) = bombieri_bound(proj, gram).unwrap();
        let (nenergy, nbombieri) = naive.bombieri();
        check("bombieri_lhs", index, energy, nenergy);
        check("bombieri", index, bombieri, nbombieri);
    }
    println!("criterion 4 (oracle equivalence): PASS, {compared} values compared at 1e-9");
}

/// Criterion 5: the optimizer never goes below the lhs, never exceeds the
/// p = 2 value, and matches a 400-point dense-grid scan within 1e-6
/// relative, on 100 instances.
#[test]
fn criterion_5_optimizer_soundness_and_quality() {
    let mut config = FuzzConfig::new(ACCEPT_SEED + 4);
    config.instances = 100;
    let two = ConjugatePair::from_p(2.0).unwrap();
    let mut max_gap: f64 = 0.0;
    for index in 0..config.instances {
        let inst = random_instance(&config, index);
        for target in [
            OptimTarget::Holder,
            OptimTarget::Branch(BranchSelector::from_index(9).unwrap()),
        ] {
            let opt_config = OptimConfig::new(target);
            let result = optimize(&inst, &opt_config).unwrap();
            assert!(
                result.best_value >= result.lhs - slack_tol(result.best_value),
                "instance {index} {target}: best {} below lhs {}",
                result.best_value,
                result.lhs
            );
            let at_two = match target {
                OptimTarget::Holder => holder_bound(inst.c().unwrap(), inst.gram(), two).unwrap(),
                OptimTarget::Branch(b) => {
                    let params = HolderParams::new(two);
                    gramineq::bounds::branch_bound(inst.c().unwrap(), inst.gram(), &params, b)
                        .unwrap()
                        .value
                }
                _ => unreachable!(),
            };
            assert!(
                result.best_value <= at_two + slack_tol(at_two),
                "instance {index} {target}: best {} above p=2 value {at_two}",
                result.best_value
            );
            let dense = optimize(&inst, &opt_config.dense(400)).unwrap();
            let scale = result
                .best_value
                .abs()
                .max(dense.best_value.abs())
                .max(1e-300);
            let gap = (result.best_value - dense.best_value).abs() / scale;
            max_gap = max_gap.max(gap);
            assert!(
                gap <= 1e-6,
                "instance {index} {target}: dense-grid gap {gap:e} ({} vs {})",
                result.best_value,
                dense.best_value
            );
        }
        // soundness spot-check on the 3-coordinate search
        if index % 10 == 0 {
            let opt_config =
                OptimConfig::new(OptimTarget::Pecaric).with_scope(ObjectiveScope::BestOfAll);
            let result = optimize(&inst, &opt_config).unwrap();
            assert!(result.best_value >= result.lhs - slack_tol(result.best_value));
        }
    }
    println!(
        "criterion 5 (optimizer): PASS on 100 instances x 2 targets, max dense-grid gap {max_gap:.2e}"
    );
}

/// Criterion 6: the audit is deterministic and replayable, and covers the
/// three printed forms whose transcriptions diverge from the composition.
/// The per-branch violation counts are reported, not presumed.
#[test]
fn criterion_6_audit_determinism_and_replay() {
    let mut config = FuzzConfig::new(ACCEPT_SEED + 5);
    config.instances = 600;
    config.include_gram_direct = true;
    let report_a = audit_printed_forms(&config).unwrap();
    let report_b = audit_printed_forms(&config).unwrap();
    assert_eq!(
        serde_json::to_string(&report_a).unwrap(),
        serde_json::to_string(&report_b).unwrap(),
        "audit must be byte-identical for a fixed seed"
    );
    // coverage of the discrepant transcriptions
    for (source, branch) in [
        (BoundSource::Combination, 4u8),
        (BoundSource::Bombieri, 4),
        (BoundSource::Bombieri, 6),
    ] {
        let row = report_a.row(source, branch);
        assert!(row.checks > 0, "{source:?} branch {branch} not covered");
        println!(
            "criterion 6: {:?} branch {}: {} violations / {} checks (max form deviation {:.3e})",
            source, branch, row.violations, row.checks, row.max_form_deviation
        );
    }
    // every recorded counterexample replays to the same values
    let mut replayed = 0;
    for row in &report_a.rows {
        if let Some(ce) = &row.worst {
            let branch = BranchSelector::from_index(row.branch).unwrap();
            let (printed, derived, middle) = replay_branch(ce, row.source, branch).unwrap();
            assert!(rel_close(printed, ce.printed_value, 1e-12));
            assert!(rel_close(derived, ce.derived_value, 1e-12));
            assert!(rel_close(middle, ce.middle_value, 1e-12));
            replayed += 1;
        }
    }
    println!(
        "criterion 6 (audit determinism and replay): PASS, {} total violations, {} counterexamples replayed",
        report_a.total_violations(),
        replayed
    );
}

/// Criterion 7: each square-rooted-chain derived branch value, squared,
/// equals the squared-chain value at c = conj(proj), within 1e-12
/// relative, on 10^3 instances.
#[test]
fn criterion_7_chain_self_consistency() {
    let mut config = FuzzConfig::new(ACCEPT_SEED + 6);
    config.instances = 1000;
    for index in 0..config.instances {
        let inst = random_instance(&config, index);
        let gram = inst.gram();
        let proj = inst.proj();
        // with c = conj(proj), the post-Schwarz coefficient vector is proj
        let pec = EvalContext::Pecaric {
            c: proj.proj(),
            proj,
            gram,
        };
        let bom = EvalContext::Bombieri { proj, gram };
        for params in params_stream(&config, index).into_iter().take(3) {
            for branch in BranchSelector::all() {
                let sub = params.for_branch(branch).unwrap();
                let rooted = derived_form_value(&bom, &sub, branch).unwrap().value;
                let squared = derived_form_value(&pec, &sub, branch).unwrap().value;
                assert!(
                    rel_close(rooted * rooted, squared, 1e-12),
                    "instance {index} branch {}: {} vs {}",
                    branch.index(),
                    rooted * rooted,
                    squared
                );
            }
        }
    }
    println!("criterion 7 (square-rooted chain self-consistency): PASS on 1000 instances");
}

/// The chain checker itself agrees link by link on a spot sample (guards
/// the acceptance harness against drifting from the library evaluators).
#[test]
fn chain_reports_are_internally_consistent() {
    let config = FuzzConfig::new(ACCEPT_SEED + 7);
    for index in 0..50 {
        let inst = random_instance(&config, index);
        for params in params_stream(&config, index).into_iter().take(2) {
            let report = check_chain(&inst, &params, index).unwrap();
            assert!(report.checks.iter().all(|c| c.pass));
            assert!(report.min_slack >= -1e-12);
        }
    }
}

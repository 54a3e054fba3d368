//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test -p valdiff-cli --test acceptance -- --nocapture`.

use std::time::Instant;

use valdiff_core::deeply_ramified::{
    equivalence_report, is_deeply_ramified, witness_extension, Trivalent,
};
use valdiff_core::extensions::theta_m_generator;
use valdiff_core::gen::{builders, DescriptorGen};
use valdiff_core::kahler::{
    kahler_of, kahler_of_tower, CaseTag, HenselizeNormalize, TowerStep, VanishingReason,
};
use valdiff_core::ordered_groups::{check_drvg, check_drvg_by_quotients};
use valdiff_core::rational::rat;

use valdiff_oracle::instances::{compare_instance, derivative_checks, gen_instances};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_1_radical_tower_square_root() {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [3u64, 5] {
        for equal_char in [false, true] {
            let ext = builders::example_one_extension(p, equal_char);
            let v = kahler_of(&ext).expect("classifies");
            let trail_ok = matches!(
                v.reason,
                VanishingReason::EmptyObstructionDenseClasses { vq_zero: true, .. }
            );
            if !(v.is_zero && v.case == CaseTag::KummerRamified && trail_ok) {
                ok = false;
                notes.push(format!("p={p} equal_char={equal_char}: {v:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let timing = elapsed.as_secs_f64() < 1.0;
    report(
        "criterion 1 (square root of the radical tower field: zero via the \
         vq-emptiness and dense-component clauses)",
        ok && timing,
        &format!(
            "verdict trail exact{}; {:.3}s (< 1s required)",
            if notes.is_empty() {
                String::new()
            } else {
                format!("; deviations: {notes:?}")
            },
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_composite_valuation_extension() {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [3u64, 5] {
        let ext = builders::example_two_extension(p);
        let v = kahler_of(&ext).expect("classifies");
        let reason_ok = matches!(
            v.reason,
            VanishingReason::EmptyObstructionDenseClasses {
                vq_zero: false,
                isolated_level: 0
            }
        );
        let drvg = check_drvg(&ext.base_group).expect("nontrivial group");
        if !(v.is_zero && reason_ok && !drvg.holds()) {
            ok = false;
            notes.push(format!("p={p}: verdict {v:?}, drvg {drvg:?}"));
        }
    }
    let elapsed = start.elapsed();
    let timing = elapsed.as_secs_f64() < 1.0;
    report(
        "criterion 2 (composite-valuation radical extension: zero with the \
         convex-emptiness + dense-isolated-class reason, while the value group \
         fails the deeply-ramified condition)",
        ok && timing,
        &format!(
            "both primes agree{}; {:.3}s (< 1s required)",
            if notes.is_empty() {
                String::new()
            } else {
                format!("; deviations: {notes:?}")
            },
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_3_oracle_equivalence() {
    let start = Instant::now();
    let instances = gen_instances(20260808, 64);
    let mut mismatches = Vec::new();
    for inst in &instances {
        let cmp = compare_instance(inst).expect("oracle runs");
        if !cmp.matched {
            mismatches.push(format!("{}: {}", cmp.label, cmp.detail));
        }
    }
    let elapsed = start.elapsed();
    let ok = instances.len() >= 50 && mismatches.is_empty();
    let timing = elapsed.as_secs_f64() < 30.0;
    report(
        "criterion 3 (oracle equivalence on randomized equal-characteristic \
         instances)",
        ok && timing,
        &format!(
            "{} instances, {} mismatches{}; {:.2}s (< 30s required)",
            instances.len(),
            mismatches.len(),
            if mismatches.is_empty() {
                String::new()
            } else {
                format!(" {mismatches:?}")
            },
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_4_derivative_formulas() {
    let start = Instant::now();
    let checks = derivative_checks(424242, 100).expect("checks run");
    let bad: Vec<_> = checks.iter().filter(|c| !c.matched).collect();
    let elapsed = start.elapsed();
    report(
        "criterion 4 (symbolic minimal-polynomial derivatives match the case \
         table exactly)",
        checks.len() >= 100 && bad.is_empty(),
        &format!(
            "{} comparisons at zero tolerance, {} mismatches; {:.2}s",
            checks.len(),
            bad.len(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_5_drvg_double_implementation() {
    let mut gen = DescriptorGen::new(5150);
    let mut disagreements = 0usize;
    let total = 1000usize;
    for _ in 0..total {
        let group = gen.rand_group(4);
        let a = check_drvg(&group).expect("nontrivial");
        let b = check_drvg_by_quotients(&group).expect("nontrivial");
        if a != b {
            disagreements += 1;
        }
    }
    report(
        "criterion 5 (level-scan and consecutive-quotient implementations of \
         the value-group condition agree)",
        disagreements == 0,
        &format!("{total} random groups of rank <= 4, {disagreements} disagreements"),
    );
}

#[test]
fn criterion_6_tower_law() {
    let mut gen = DescriptorGen::new(606060);
    let mut failures = 0usize;
    let total = 500usize;
    for _ in 0..total {
        let tower = gen.rand_tower(5);
        let v = kahler_of_tower(&tower).expect("tower classifies");
        let mut conj = true;
        for step in &tower.steps {
            let z = match step {
                TowerStep::Inertial { .. } => true,
                TowerStep::Prime(ext) => kahler_of(ext).expect("step classifies").is_zero,
            };
            conj &= z;
        }
        let (h, _) = tower.henselize_normalize();
        let hv = kahler_of_tower(&h).expect("normalized tower classifies");
        if v.is_zero != conj || hv.is_zero != v.is_zero {
            failures += 1;
        }
    }
    report(
        "criterion 6 (tower verdict equals the conjunction of step verdicts and \
         is invariant under henselization)",
        failures == 0,
        &format!("{total} random towers of length <= 5, {failures} failures"),
    );
}

#[test]
fn criterion_7_equivalence_contrapositive() {
    let start = Instant::now();
    let mut gen = DescriptorGen::new(777000);

    // every violating descriptor yields confirmed nonzero witnesses
    let mut witness_failures = Vec::new();
    let mut witnesses_checked = 0usize;
    for i in 0..200usize {
        let field = gen.rand_violating_field();
        let dr = is_deeply_ramified(&field).expect("valid descriptor");
        if dr.violations.is_empty() {
            witness_failures.push(format!("field {i} has no violations"));
            continue;
        }
        for violation in &dr.violations {
            let ext = witness_extension(&field, violation).expect("witness constructs");
            let v = kahler_of(&ext).expect("witness classifies");
            witnesses_checked += 1;
            if v.is_zero {
                witness_failures.push(format!("field {i}, {violation}: witness is zero"));
            }
        }
    }

    // every deeply ramified descriptor carries an all-zero degree-p family
    let mut family_failures = Vec::new();
    let mut family_checked = 0usize;
    let mut field_count = 0usize;
    while family_checked < 200 {
        let field = gen.rand_dr_field();
        field_count += 1;
        let dr = is_deeply_ramified(&field).expect("valid descriptor");
        if dr.verdict != Trivalent::True {
            family_failures.push(format!("generated field {field_count} not deeply ramified"));
            break;
        }
        let family = gen.dr_family(&field, 20).expect("family generates");
        let rep = equivalence_report(&field, &family).expect("report runs");
        family_checked += rep.family.len();
        if !rep.inconsistencies.is_empty() {
            family_failures.push(format!("{:?}", rep.inconsistencies));
        }
        if !rep.family.iter().all(|c| c.is_zero) {
            family_failures.push(format!("field {field_count}: nonzero family member"));
        }
    }

    let elapsed = start.elapsed();
    let ok = witness_failures.is_empty() && family_failures.is_empty();
    let timing = elapsed.as_secs_f64() < 30.0;
    report(
        "criterion 7 (witness extensions over failing descriptors are nonzero; \
         degree-p families over deeply ramified descriptors vanish)",
        ok && timing,
        &format!(
            "{witnesses_checked} witnesses over 200 violating fields, \
             {family_checked} family members over {field_count} deeply ramified fields{}{}; \
             {:.2}s (< 30s required)",
            if witness_failures.is_empty() {
                String::new()
            } else {
                format!("; witness failures: {witness_failures:?}")
            },
            if family_failures.is_empty() {
                String::new()
            } else {
                format!("; family failures: {family_failures:?}")
            },
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_8_distinguished_generator_table() {
    let mut failures = Vec::new();
    let mut rows = 0usize;
    for p in [2u64, 3, 5, 7] {
        for m in 1..p {
            let t = theta_m_generator(p, m).expect("in range");
            rows += 1;
            // -l m = 1 - k p as integers
            let identity = (t.ell * m) as i128 == (t.k * p) as i128 - 1;
            let value_ok = t.value == rat(1, p as i64);
            let ell_iff = (t.ell == 1) == (m == p - 1);
            if !(identity && value_ok && ell_iff) {
                failures.push(format!("p={p} m={m}: {t:?}"));
            }
        }
    }
    report(
        "criterion 8 (distinguished generator table: -l*m = 1 - k*p, value \
         v(pi)/p, and l = 1 exactly at m = p-1)",
        failures.is_empty(),
        &format!(
            "{rows} rows checked{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {failures:?}")
            }
        ),
    );
}

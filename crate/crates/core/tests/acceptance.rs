//! Acceptance gate. Each test is one acceptance criterion; the harness
//! line for the test is the criterion's pass/fail verdict. The heavy
//! shared artefact (the exhaustive PG(4,3) run) is computed once and
//! reused across criteria.

mod common;

use std::sync::OnceLock;

use pgcaps::classify::{classify_with_group, verify, Classification, Options};
use pgcaps::code::{group_descriptor, weight_distribution};
use pgcaps::equiv::stabilizer;
use pgcaps::fixtures::{FIXTURES, KNOWN_COUNTS};
use pgcaps::geometry::Space;
use pgcaps::group::ProjectiveGroup;

fn context() -> &'static (Space, ProjectiveGroup) {
    static CTX: OnceLock<(Space, ProjectiveGroup)> = OnceLock::new();
    CTX.get_or_init(|| {
        let space = Space::new(4, 3).unwrap();
        let group = ProjectiveGroup::new(&space);
        (space, group)
    })
}

/// The exhaustive PG(4,3) classification, computed once per test run.
fn full_run() -> &'static Classification {
    static RUN: OnceLock<Classification> = OnceLock::new();
    RUN.get_or_init(|| {
        let (space, group) = context();
        classify_with_group(space, group, &Options::default())
    })
}

#[test]
fn criterion_1_class_counts_reproduced_exactly() {
    let run = full_run();
    let expected: Vec<(u16, u64, u64)> = KNOWN_COUNTS.to_vec();
    let got = run.table();
    for &(size, complete, incomplete) in &expected {
        println!(
            "size {size:>2}: {complete:>3} complete {incomplete:>5} incomplete: {}",
            if got.contains(&(size, complete, incomplete)) {
                "ok"
            } else {
                "MISMATCH"
            }
        );
    }
    assert_eq!(got, expected, "class counts diverge from the reference");
    assert_eq!(run.classes.len(), 8226);
}

#[test]
fn criterion_2_published_caps_each_match_one_class() {
    let (space, group) = context();
    let report = verify(space, group, full_run());
    println!("{}", report.render());
    assert_eq!(report.fixtures.len(), 14);
    let matched = report
        .fixtures
        .iter()
        .filter(|f| f.class_index.is_some())
        .count();
    assert_eq!(matched, 14, "{}", report.render());
    // One class each: matching is through canonical forms, which the
    // report has already checked for collisions.
    assert!(report.passed(), "{}", report.render());
}

#[test]
fn criterion_3_stabilizer_orders_match() {
    let (space, _) = context();
    for fx in FIXTURES {
        let set = fx.points(space).unwrap();
        let stab = stabilizer(space, &set).unwrap();
        let descriptor = group_descriptor(space, &stab.elements);
        println!("{}: {}", fx.label, descriptor);
        assert_eq!(stab.order, fx.stabilizer.order(), "{}", fx.label);
        assert!(
            fx.stabilizer.matches(&descriptor),
            "{}: computed {descriptor}",
            fx.label
        );
    }
}

#[test]
fn criterion_4_weight_distributions_match() {
    let (space, _) = context();
    for fx in FIXTURES {
        let wd = weight_distribution(space, &fx.points(space).unwrap());
        println!("{}: {}", fx.label, wd);
        assert_eq!(wd.to_string(), fx.weights, "{}", fx.label);
        assert_eq!(wd.total(), 242, "{}", fx.label);
    }
}

#[test]
fn criterion_5_search_equals_plain_enumeration() {
    for (r, q, max) in [(2, 3, None), (3, 3, None), (4, 3, Some(7u16))] {
        let space = Space::new(r, q).unwrap();
        let group = ProjectiveGroup::new(&space);
        let searched = classify_with_group(
            &space,
            &group,
            &Options {
                max_size: max,
                jobs: 1,
            },
        );
        let by_search = common::search_classes(&searched);
        let by_enumeration =
            common::enumeration_classes(&space, &group, max.map(usize::from).unwrap_or(usize::MAX));
        println!(
            "PG({r},{q}) max {max:?}: {} classes by search, {} by enumeration",
            by_search.values().map(|s| s.len()).sum::<usize>(),
            by_enumeration.values().map(|s| s.len()).sum::<usize>(),
        );
        assert_eq!(by_search, by_enumeration, "PG({r},{q}) max {max:?}");
    }
}

#[test]
fn criterion_6_property_suites_green() {
    let (space, group) = context();
    let pg33 = Space::new(3, 3).unwrap();
    let pg33_group = ProjectiveGroup::new(&pg33);
    let pg23 = Space::new(2, 3).unwrap();
    let pg23_group = ProjectiveGroup::new(&pg23);

    let checks: Vec<(&str, Result<(), String>)> = vec![
        (
            "normalization idempotence",
            common::check_normalization_idempotence(space),
        ),
        (
            "secant-table line closure",
            common::check_line_closure(space),
        ),
        (
            "canonical-form orbit constancy (100 samples per cap)",
            common::check_orbit_constancy(space, group, 100),
        ),
        (
            "weight parity and full sum",
            common::check_weight_parity_and_sum(space),
        ),
        (
            "determinism across worker counts",
            common::check_thread_determinism(&pg33, &pg33_group),
        ),
        (
            "catalog round-trip",
            common::check_catalog_round_trip(&pg23, &pg23_group),
        ),
    ];
    let mut failures = Vec::new();
    for (name, outcome) in checks {
        match outcome {
            Ok(()) => println!("{name}: ok"),
            Err(e) => {
                println!("{name}: FAILED: {e}");
                failures.push(format!("{name}: {e}"));
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("; "));
}

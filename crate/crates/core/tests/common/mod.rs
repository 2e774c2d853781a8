//! Helpers shared by the integration suites: a pruning-free reference
//! classification and the deterministic property checks the acceptance
//! gate re-runs.
//!
//! Each test binary compiles its own copy, so not every helper is used
//! everywhere.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use pgcaps::canonical::canonical_set;
use pgcaps::catalog::{self, AnalyzeOptions};
use pgcaps::classify::{classify_with_group, Classification, Options};
use pgcaps::code::weight_distribution;
use pgcaps::geometry::Space;
use pgcaps::group::ProjectiveGroup;
use pgcaps::projectivity::Projectivity;
use pgcaps::rng::Rng;
use pgcaps::PointSet;

/// Calls `f` on every cap of size <= `max` containing the standard root,
/// visiting each cap exactly once (added points ascend).
pub fn each_cap_over_root(space: &Space, max: usize, f: &mut impl FnMut(&PointSet)) {
    fn recurse(space: &Space, cap: PointSet, last: u16, max: usize, f: &mut impl FnMut(&PointSet)) {
        f(&cap);
        if cap.len() >= max {
            return;
        }
        for p in space.candidates(&cap).iter() {
            if p > last {
                recurse(space, cap.with(p), p, max, f);
            }
        }
    }
    recurse(space, space.standard_root(), 0, max, f);
}

/// Classifies without any search tree: enumerate every cap over the root
/// and bucket by canonical form. Returns the canonical forms per size.
pub fn enumeration_classes(
    space: &Space,
    group: &ProjectiveGroup,
    max: usize,
) -> BTreeMap<u16, BTreeSet<Vec<u16>>> {
    let mut classes: BTreeMap<u16, BTreeSet<Vec<u16>>> = BTreeMap::new();
    each_cap_over_root(space, max, &mut |cap| {
        classes
            .entry(cap.len() as u16)
            .or_default()
            .insert(canonical_set(group, cap).to_vec());
    });
    classes
}

/// The search result in the same shape, for comparison.
pub fn search_classes(result: &Classification) -> BTreeMap<u16, BTreeSet<Vec<u16>>> {
    let mut classes: BTreeMap<u16, BTreeSet<Vec<u16>>> = BTreeMap::new();
    for c in &result.classes {
        classes
            .entry(c.size)
            .or_default()
            .insert(c.canonical.to_vec());
    }
    classes
}

/// A pseudorandom cap grown greedily from a random seed point.
pub fn random_cap(space: &Space, rng: &mut Rng, target: usize) -> PointSet {
    let mut cap = PointSet::EMPTY;
    cap.insert(rng.below(space.n_points() as u64) as u16);
    while cap.len() < target {
        let cands = space.candidates(&cap);
        if cands.is_empty() {
            break;
        }
        let picks = cands.to_vec();
        cap.insert(picks[rng.below(picks.len() as u64) as usize]);
    }
    cap
}

// The deterministic property checks below return Err with a description
// instead of panicking so the acceptance gate can aggregate them.

/// Normalization is idempotent and constant on scalar multiples.
pub fn check_normalization_idempotence(space: &Space) -> Result<(), String> {
    let f = space.field();
    for p in 0..space.n_points() as u16 {
        let v = space.point(p);
        let n1 = space.normalize(v).map_err(|e| e.to_string())?;
        let n2 = space.normalize(&n1).map_err(|e| e.to_string())?;
        if n1 != n2 {
            return Err(format!("normalize not idempotent at point {p}"));
        }
        for s in 1..space.q() as u8 {
            let scaled: Vec<u8> = v.iter().map(|&x| f.mul(x, s)).collect();
            if space.normalize(&scaled).map_err(|e| e.to_string())? != n1 {
                return Err(format!("normalize({s} * point {p}) differs"));
            }
        }
    }
    Ok(())
}

/// Every line has q + 1 points and is recoverable from any two of them.
pub fn check_line_closure(space: &Space) -> Result<(), String> {
    let n = space.n_points() as u16;
    let mut rng = Rng::seeded(20260815);
    for _ in 0..400 {
        let a = rng.below(n as u64) as u16;
        let mut b = rng.below(n as u64) as u16;
        if a == b {
            b = (b + 1) % n;
        }
        let line = space.line(a, b);
        if line.len() != space.q() as usize + 1 {
            return Err(format!("line({a},{b}) has {} points", line.len()));
        }
        let others = space.secant_others(a, b);
        if others.len() != space.q() as usize - 1 {
            return Err(format!("secant_others({a},{b}) has {}", others.len()));
        }
        for &x in others {
            if !line.contains(x) {
                return Err(format!("secant table disagrees with line({a},{b})"));
            }
        }
        let pts = line.to_vec();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if space.line(pts[i], pts[j]) != line {
                    return Err(format!(
                        "line not closed: ({},{}) spans a different line than ({a},{b})",
                        pts[i], pts[j]
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Canonical form is constant on orbits: `samples` random projectivities
/// per published cap all map to the same canonical form.
pub fn check_orbit_constancy(
    space: &Space,
    group: &ProjectiveGroup,
    samples: usize,
) -> Result<(), String> {
    let mut rng = Rng::seeded(11);
    for fx in pgcaps::fixtures::FIXTURES {
        let set = fx.points(space).map_err(|e| e.to_string())?;
        let expect = canonical_set(group, &set);
        for i in 0..samples {
            let g = Projectivity::random(space, &mut rng);
            let moved = g.apply_set(space, &set);
            if canonical_set(group, &moved) != expect {
                return Err(format!(
                    "canonical form of {} changed under projectivity {i}",
                    fx.label
                ));
            }
        }
    }
    Ok(())
}

/// Weight counts are even (q = 3) and sum to q^(r+1) - 1 for spanning
/// caps; checked on the published caps and on random caps.
pub fn check_weight_parity_and_sum(space: &Space) -> Result<(), String> {
    let full = 3u64.pow(space.dim() as u32) - 1;
    let check = |set: &PointSet, what: &str| -> Result<(), String> {
        let wd = weight_distribution(space, set);
        for &(w, c) in &wd.pairs {
            if c % 2 != 0 {
                return Err(format!("{what}: odd count {c} at weight {w}"));
            }
        }
        if space.rank_of(set) == space.dim() && wd.total() != full {
            return Err(format!("{what}: weights sum to {}, not {full}", wd.total()));
        }
        Ok(())
    };
    for fx in pgcaps::fixtures::FIXTURES {
        check(&fx.points(space).map_err(|e| e.to_string())?, fx.label)?;
    }
    let mut rng = Rng::seeded(99);
    for i in 0..50 {
        let cap = random_cap(space, &mut rng, 4 + (i % 14));
        check(&cap, &format!("random cap {i}"))?;
    }
    Ok(())
}

/// Identical classifications regardless of worker count.
pub fn check_thread_determinism(space: &Space, group: &ProjectiveGroup) -> Result<(), String> {
    let run = |jobs| {
        classify_with_group(
            space,
            group,
            &Options {
                max_size: None,
                jobs,
            },
        )
    };
    let one = run(1);
    for jobs in [2, 5] {
        let other = run(jobs);
        if other.classes != one.classes {
            return Err(format!("classes differ between jobs=1 and jobs={jobs}"));
        }
        if other.diagnostics != one.diagnostics {
            return Err(format!("diagnostics differ between jobs=1 and jobs={jobs}"));
        }
    }
    Ok(())
}

/// Catalogs survive a write/read cycle exactly, whatever the analyses.
pub fn check_catalog_round_trip(space: &Space, group: &ProjectiveGroup) -> Result<(), String> {
    let result = classify_with_group(
        space,
        group,
        &Options {
            max_size: None,
            jobs: 1,
        },
    );
    for (stabilizers, weights) in [(false, false), (true, false), (false, true), (true, true)] {
        let built = catalog::build(
            space,
            &result,
            AnalyzeOptions {
                stabilizers,
                weights,
            },
        );
        let text = catalog::to_string(&built);
        let back = catalog::from_str(&text).map_err(|e| e.to_string())?;
        if back != built {
            return Err(format!(
                "catalog changed across a round trip (stabilizers={stabilizers}, weights={weights})"
            ));
        }
        if catalog::to_string(&back) != text {
            return Err("re-rendering a parsed catalog changed the bytes".to_string());
        }
    }
    Ok(())
}

//! Exhaustive classification of caps up to projective equivalence.
//!
//! Every cap of size >= 3 contains a triangle, and PGL is transitive on
//! triangles, so every class of caps has a member containing the
//! standard root R = {e1, e2, e3}. Classes are therefore discovered by
//! closure: starting from [R], each stored class is expanded exactly
//! once from its canonical representative A by partitioning the
//! candidate extensions of A into equivalence classes of the extended
//! cap (P ~ Q iff A ∪ {P} and A ∪ {Q} are projectively equivalent) and
//! inserting the canonical forms of the extensions that are new. The
//! store is closed under single-point extension and contains the
//! triangle class, so it contains every class: deleting any point of a
//! cap of size n ≥ 4 leaves a cap of size n − 1 whose class is already
//! stored by induction, and the deleted point rides back in as one of
//! its extension classes.
//!
//! Each class is expanded once, so the node count equals the class
//! count. Partitioning uses two tiers: candidates are first bucketed by
//! the hyperplane-intersection profile of the extended cap, a cheap
//! projective invariant; exact canonical forms are computed only inside
//! buckets with more than one member. Profiles never merge distinct
//! classes incorrectly because they are invariants; canonical forms
//! resolve the rest exactly.

use std::hash::Hasher;

use rustc_hash::{FxHashMap, FxHasher};

use crate::canonical::canonical_set;
use crate::geometry::Space;
use crate::group::ProjectiveGroup;
use crate::pointset::PointSet;

fn fx_hash(bytes: &[u8]) -> u64 {
    let mut h = FxHasher::default();
    h.write(bytes);
    h.finish()
}

fn fx_hash_u64s(words: &[u64]) -> u64 {
    let mut h = FxHasher::default();
    for &w in words {
        h.write_u64(w);
    }
    h.finish()
}

/// Equivalence-invariant fingerprint of a set: a hash of the multiset,
/// over the set's points, of each point's sorted hyperplane-intersection
/// counts. The counts slice must already describe the fingerprinted set;
/// `skip` leaves one member out (the counts must reflect its removal).
/// Determines the hyperplane profile and more, and never separates
/// equivalent sets.
fn fingerprint(space: &Space, counts: &[u8], set: &PointSet, skip: Option<u16>) -> u64 {
    let mut sig: Vec<u8> = Vec::with_capacity(64);
    let mut sig_hashes: Vec<u64> = Vec::with_capacity(set.len());
    for x in set.iter() {
        if Some(x) == skip {
            continue;
        }
        sig.clear();
        sig.extend(
            space
                .hyperplanes_through(x)
                .iter()
                .map(|&hp| counts[hp as usize]),
        );
        sig.sort_unstable();
        sig_hashes.push(fx_hash(&sig));
    }
    sig_hashes.sort_unstable();
    fx_hash_u64s(&sig_hashes)
}

/// One equivalence class of caps. The canonical form doubles as the
/// class representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassRecord {
    pub canonical: PointSet,
    pub size: u16,
    pub complete: bool,
}

/// Search statistics. Parent rejections are extension classes dropped
/// because a cheaper parent class will generate them (fingerprint rule);
/// duplicate arrivals are extension classes whose canonical form was
/// already stored when reached again from another class. Both measure
/// how often distinct classes share extensions; neither is an error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub expanded: u64,
    pub parent_rejections: u64,
    pub duplicate_arrivals: u64,
}

/// Result of a classification run.
#[derive(Debug, Clone)]
pub struct Classification {
    pub r: usize,
    pub q: u32,
    pub max_size: Option<u16>,
    /// All classes, sorted by size and then by point list.
    pub classes: Vec<ClassRecord>,
    pub diagnostics: Diagnostics,
}

impl Classification {
    /// (size, complete classes, incomplete classes) rows for every size
    /// that occurs, ascending.
    pub fn table(&self) -> Vec<(u16, u64, u64)> {
        let mut rows: Vec<(u16, u64, u64)> = Vec::new();
        for c in &self.classes {
            match rows.binary_search_by_key(&c.size, |r| r.0) {
                Ok(i) => {
                    if c.complete {
                        rows[i].1 += 1;
                    } else {
                        rows[i].2 += 1;
                    }
                }
                Err(i) => rows.insert(i, (c.size, c.complete as u64, !c.complete as u64)),
            }
        }
        rows
    }

    pub fn count(&self, size: u16, complete: bool) -> u64 {
        self.classes
            .iter()
            .filter(|c| c.size == size && c.complete == complete)
            .count() as u64
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    /// Stop extending caps at this size; None lets the search run until
    /// no cap extends.
    pub max_size: Option<u16>,
    /// Worker threads; 0 means all available, 1 forces sequential.
    pub jobs: usize,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            max_size: None,
            jobs: 1,
        }
    }
}

/// Classifies all caps of size >= 3 in the space up to projective
/// equivalence. Results are deterministic regardless of thread count.
pub fn classify(space: &Space, opts: &Options) -> Classification {
    let group = ProjectiveGroup::new(space);
    classify_with_group(space, &group, opts)
}

/// As [`classify`], reusing an already-built group.
pub fn classify_with_group(
    space: &Space,
    group: &ProjectiveGroup,
    opts: &Options,
) -> Classification {
    classify_observed(space, group, opts, &mut |_, _| {})
}

/// As [`classify_with_group`], reporting progress: after each size layer
/// merges, the observer receives the size just produced and the number
/// of new classes of that size.
pub fn classify_observed(
    space: &Space,
    group: &ProjectiveGroup,
    opts: &Options,
    observer: &mut dyn FnMut(u16, usize),
) -> Classification {
    let max_size = opts.max_size.unwrap_or(u16::MAX).max(3);
    let jobs = effective_jobs(opts.jobs);

    let root = canonical_set(group, &space.standard_root());
    let mut store: FxHashMap<PointSet, u16> = FxHashMap::default();
    store.insert(root, 3);
    let mut diag = Diagnostics::default();

    // Breadth-first over sizes: expand every class of the current size,
    // collect child canonical forms, merge. The merged store is a set
    // closure, so the outcome cannot depend on expansion order or
    // thread count.
    //
    // Expansion applies a parent rule so that the expensive canonical
    // form runs roughly once per class instead of once per (class,
    // extension) edge: a child T = A ∪ {x} is taken at A only if no
    // single-point deletion of T has a fingerprint below A's own. The
    // fingerprint is an equivalence invariant, so when A is rejected the
    // minimizing deletion class accepts T instead, and the breadth-first
    // order guarantees that class is expanded in the same layer (all
    // classes of size |A| are stored before the layer runs). Fingerprint
    // ties accept at every tying parent; the store drops the extra
    // arrivals harmlessly.
    let mut layer: Vec<PointSet> = vec![root];
    let mut size: u16 = 3;
    let pool = (jobs > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
    });
    while !layer.is_empty() && size < max_size {
        let expand = |cap: &PointSet| -> (Vec<PointSet>, u64) {
            let counts = space.hyperplane_counts(cap);
            let own = fingerprint(space, &counts, cap, None);
            let mut accepted: Vec<PointSet> = Vec::new();
            let mut rejected = 0u64;
            for class in partition_candidates(space, group, cap, &PointSet::EMPTY) {
                let t = cap.with(class.representative);
                let mut counts_t = counts.clone();
                for &hp in space.hyperplanes_through(class.representative) {
                    counts_t[hp as usize] += 1;
                }
                let cheaper_parent = t.iter().any(|del| {
                    let mut counts_del = counts_t.clone();
                    for &hp in space.hyperplanes_through(del) {
                        counts_del[hp as usize] -= 1;
                    }
                    fingerprint(space, &counts_del, &t, Some(del)) < own
                });
                if cheaper_parent {
                    rejected += 1;
                    continue;
                }
                accepted.push(class.canonical.unwrap_or_else(|| canonical_set(group, &t)));
            }
            (accepted, rejected)
        };
        let children: Vec<(Vec<PointSet>, u64)> = match &pool {
            Some(pool) => pool.install(|| {
                use rayon::prelude::*;
                layer.par_iter().map(expand).collect()
            }),
            None => layer.iter().map(expand).collect(),
        };
        diag.expanded += layer.len() as u64;
        let mut next: Vec<PointSet> = Vec::new();
        for (accepted, rejected) in children {
            diag.parent_rejections += rejected;
            for canon in accepted {
                if store.insert(canon, size + 1).is_none() {
                    next.push(canon);
                } else {
                    diag.duplicate_arrivals += 1;
                }
            }
        }
        next.sort_by_key(|c| c.to_vec());
        layer = next;
        size += 1;
        observer(size, layer.len());
    }

    let mut classes: Vec<ClassRecord> = store
        .into_iter()
        .map(|(canonical, size)| ClassRecord {
            canonical,
            size,
            complete: space.is_complete(&canonical),
        })
        .collect();
    classes.sort_by_key(|c| (c.size, c.canonical.to_vec()));
    Classification {
        r: space.r(),
        q: space.q(),
        max_size: opts.max_size,
        classes,
        diagnostics: diag,
    }
}

/// One class of the candidate partition at a cap.
#[derive(Debug, Clone)]
pub struct ExtensionClass {
    /// The candidate points in this class.
    pub points: PointSet,
    /// Smallest member, used when extending.
    pub representative: u16,
    /// Canonical form of cap ∪ {representative}, when the partition had
    /// to compute it (profile buckets with a single member skip it).
    pub canonical: Option<PointSet>,
}

/// Splits candidates(cap) minus the avoid set into projective
/// equivalence classes of the extended cap, ordered by smallest member.
///
/// Candidates are pre-bucketed by an invariant fingerprint of the
/// extension (hyperplane profile plus the multiset of per-point
/// hyperplane signatures, both preserved by projectivities); canonical
/// forms are computed only inside buckets that hold more than one
/// candidate. Since most fingerprint buckets are singletons, the
/// expensive canonical form usually runs once per resulting class.
pub fn partition_candidates(
    space: &Space,
    group: &ProjectiveGroup,
    cap: &PointSet,
    avoid: &PointSet,
) -> Vec<ExtensionClass> {
    let ext = space.candidates(cap).difference(avoid);
    let counts = space.hyperplane_counts(cap);

    let mut buckets: FxHashMap<u64, Vec<u16>> = FxHashMap::default();
    for p in ext.iter() {
        let mut counts_p = counts.clone();
        for &hp in space.hyperplanes_through(p) {
            counts_p[hp as usize] += 1;
        }
        let key = fingerprint(space, &counts_p, &cap.with(p), None);
        buckets.entry(key).or_default().push(p);
    }

    let mut classes: Vec<ExtensionClass> = Vec::new();
    for members in buckets.into_values() {
        if let [lone] = members[..] {
            classes.push(ExtensionClass {
                points: PointSet::from_iter([lone]),
                representative: lone,
                canonical: None,
            });
            continue;
        }
        let mut by_canon: FxHashMap<PointSet, PointSet> = FxHashMap::default();
        for &p in &members {
            let c = canonical_set(group, &cap.with(p));
            by_canon.entry(c).or_insert(PointSet::EMPTY).insert(p);
        }
        for (c, points) in by_canon {
            classes.push(ExtensionClass {
                representative: points.first().expect("nonempty class"),
                points,
                canonical: Some(c),
            });
        }
    }
    classes.sort_by_key(|c| c.representative);
    classes
}

fn effective_jobs(jobs: usize) -> usize {
    if jobs == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        jobs
    }
}

/// Comparison of one size row against the reference counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub size: u16,
    pub expected_complete: u64,
    pub expected_incomplete: u64,
    pub complete: u64,
    pub incomplete: u64,
}

impl TableRow {
    pub fn pass(&self) -> bool {
        self.expected_complete == self.complete && self.expected_incomplete == self.incomplete
    }
}

/// Result of matching one published cap against a classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureMatch {
    pub label: &'static str,
    /// Index into `Classification::classes` of the equivalent class.
    pub class_index: Option<usize>,
}

/// Report from [`verify`]. Mismatches land in the report rather than
/// aborting it, so a broken result yields a complete diff.
#[derive(Debug, Clone, Default)]
pub struct Verification {
    /// Per-representative problems: not a cap, wrong completeness flag,
    /// size inconsistencies.
    pub representative_errors: Vec<String>,
    /// Pairs of class indices sharing a canonical form.
    pub collisions: Vec<(usize, usize)>,
    /// Per-size comparison against the reference table; filled for
    /// PG(4,3) only, up to the run's size cutoff.
    pub table: Vec<TableRow>,
    /// Matches of the fourteen published caps; filled for full PG(4,3)
    /// runs only.
    pub fixtures: Vec<FixtureMatch>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.representative_errors.is_empty()
            && self.collisions.is_empty()
            && self.table.iter().all(TableRow::pass)
            && self.fixtures.iter().all(|f| f.class_index.is_some())
    }

    /// Multi-line report: every representative problem, every collision,
    /// one line per table row and per published cap, then a verdict.
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for e in &self.representative_errors {
            let _ = writeln!(out, "representative: {e}");
        }
        for &(i, j) in &self.collisions {
            let _ = writeln!(out, "collision: classes {i} and {j} share a canonical form");
        }
        for row in &self.table {
            let _ = writeln!(
                out,
                "size {:>2}: expected {:>3} complete {:>5} incomplete, got {:>3} / {:>5}  {}",
                row.size,
                row.expected_complete,
                row.expected_incomplete,
                row.complete,
                row.incomplete,
                if row.pass() { "ok" } else { "MISMATCH" }
            );
        }
        for f in &self.fixtures {
            match f.class_index {
                Some(i) => {
                    let _ = writeln!(out, "cap {}: matched class {i}", f.label);
                }
                None => {
                    let _ = writeln!(out, "cap {}: NOT MATCHED", f.label);
                }
            }
        }
        let _ = writeln!(
            out,
            "verification {}",
            if self.passed() { "passed" } else { "FAILED" }
        );
        out
    }
}

/// Re-validates a classification: every representative must be a cap
/// with the stated size and completeness, canonical forms must be
/// pairwise distinct, and for PG(4,3) the per-size counts must equal the
/// reference table. On top of that, a full PG(4,3) run must contain a
/// class equivalent to each of the fourteen published caps; candidates
/// are located through their canonical form and confirmed with an
/// explicit equivalence witness.
pub fn verify(space: &Space, group: &ProjectiveGroup, result: &Classification) -> Verification {
    let mut v = Verification::default();
    if result.r != space.r() || result.q != space.q() {
        v.representative_errors.push(format!(
            "result is for PG({},{}) but the space is PG({},{})",
            result.r,
            result.q,
            space.r(),
            space.q()
        ));
        return v;
    }
    let cutoff = result.max_size.unwrap_or(u16::MAX);

    let mut seen: FxHashMap<PointSet, usize> = FxHashMap::default();
    for (i, c) in result.classes.iter().enumerate() {
        if c.canonical.len() != c.size as usize {
            v.representative_errors.push(format!(
                "class {i} says size {} but lists {} points",
                c.size,
                c.canonical.len()
            ));
        }
        if c.size < 3 || c.size > cutoff {
            v.representative_errors
                .push(format!("class {i} has out-of-range size {}", c.size));
        }
        if let Some((x, y, z)) = space.cap_violation(&c.canonical) {
            v.representative_errors.push(format!(
                "class {i} is not a cap: points {x}, {y}, {z} are collinear"
            ));
        } else if space.is_complete(&c.canonical) != c.complete {
            v.representative_errors.push(format!(
                "class {i} is flagged {} but is {}",
                if c.complete { "complete" } else { "incomplete" },
                if c.complete { "extendable" } else { "complete" }
            ));
        }
        match seen.entry(c.canonical) {
            std::collections::hash_map::Entry::Occupied(e) => v.collisions.push((*e.get(), i)),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(i);
            }
        }
    }

    if (space.r(), space.q()) == (4, 3) {
        for &(size, complete, incomplete) in crate::fixtures::KNOWN_COUNTS {
            if size > cutoff {
                continue;
            }
            v.table.push(TableRow {
                size,
                expected_complete: complete,
                expected_incomplete: incomplete,
                complete: result.count(size, true),
                incomplete: result.count(size, false),
            });
        }
        if cutoff >= 20 {
            for fx in crate::fixtures::FIXTURES {
                let class_index = fx.points(space).ok().and_then(|set| {
                    let canon = canonical_set(group, &set);
                    seen.get(&canon).copied().filter(|&i| {
                        crate::equiv::find_equivalence(space, &set, &result.classes[i].canonical)
                            .is_some()
                    })
                });
                v.fixtures.push(FixtureMatch {
                    label: fx.label,
                    class_index,
                });
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::find_equivalence;

    #[test]
    fn pg23_classification() {
        // PG(2,3) by hand: one class of triangles (extendable) and one of
        // 4-arcs (complete, since 4 = q + 1 is the arc bound for odd q).
        let s = Space::new(2, 3).unwrap();
        let got = classify(&s, &Options::default());
        assert_eq!(got.table(), vec![(3, 0, 1), (4, 1, 0)]);
        assert_eq!(got.classes.len(), 2);
        for c in &got.classes {
            assert!(s.is_cap(&c.canonical));
            assert_eq!(s.is_complete(&c.canonical), c.complete);
        }
        assert_eq!(got.diagnostics.expanded, 2);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let s = Space::new(3, 3).unwrap();
        let seq = classify(
            &s,
            &Options {
                max_size: Some(6),
                jobs: 1,
            },
        );
        let par = classify(
            &s,
            &Options {
                max_size: Some(6),
                jobs: 3,
            },
        );
        assert_eq!(seq.classes, par.classes);
        assert_eq!(seq.diagnostics, par.diagnostics);
    }

    #[test]
    fn root_extensions_in_pg43_form_two_classes() {
        // The 112 candidate extensions of the root triangle fall into
        // exactly two classes: the added point lies on the plane of the
        // triangle or outside it.
        let s = Space::new(4, 3).unwrap();
        let group = ProjectiveGroup::new(&s);
        let root = s.standard_root();
        assert_eq!(s.candidates(&root).len(), 112);
        let classes = partition_candidates(&s, &group, &root, &PointSet::EMPTY);
        assert_eq!(classes.len(), 2);
        let total: usize = classes.iter().map(|c| c.points.len()).sum();
        assert_eq!(total, 112);

        // Cross-check the partition against the witness-search route:
        // members of one class are all equivalent as extended caps, and
        // representatives of different classes are not.
        let reps: Vec<PointSet> = classes
            .iter()
            .map(|c| root.with(c.representative))
            .collect();
        assert!(find_equivalence(&s, &reps[0], &reps[1]).is_none());
        for class in &classes {
            let rep = root.with(class.representative);
            for p in class.points.iter().take(8) {
                assert!(find_equivalence(&s, &root.with(p), &rep).is_some());
            }
        }
    }

    #[test]
    fn avoiding_all_candidates_leaves_nothing() {
        let s = Space::new(4, 3).unwrap();
        let group = ProjectiveGroup::new(&s);
        let root = s.standard_root();
        let all = s.candidates(&root);
        assert!(partition_candidates(&s, &group, &root, &all).is_empty());
    }

    #[test]
    fn pg43_truncated_matches_known_counts() {
        let s = Space::new(4, 3).unwrap();
        let got = classify(
            &s,
            &Options {
                max_size: Some(7),
                jobs: 1,
            },
        );
        assert_eq!(
            got.table(),
            vec![(3, 0, 1), (4, 0, 2), (5, 0, 3), (6, 0, 5), (7, 0, 8)]
        );
    }

    #[test]
    fn verify_accepts_a_clean_run() {
        let s = Space::new(2, 3).unwrap();
        let group = ProjectiveGroup::new(&s);
        let result = classify_with_group(&s, &group, &Options::default());
        let v = verify(&s, &group, &result);
        assert!(v.passed(), "{}", v.render());
        assert!(v.representative_errors.is_empty());
        // No reference data outside PG(4,3): nothing to compare against.
        assert!(v.table.is_empty());
        assert!(v.fixtures.is_empty());
    }

    #[test]
    fn verify_diffs_seeded_faults() {
        let s = Space::new(4, 3).unwrap();
        let group = ProjectiveGroup::new(&s);
        let result = classify_with_group(
            &s,
            &group,
            &Options {
                max_size: Some(6),
                jobs: 1,
            },
        );
        let clean = verify(&s, &group, &result);
        assert!(clean.passed(), "{}", clean.render());
        assert_eq!(clean.table.len(), 4); // sizes 3..=6
        assert!(clean.fixtures.is_empty()); // truncated run, no matching

        // Deleting a representative shows up as a count mismatch in its row.
        let mut dropped = result.clone();
        let victim = dropped.classes.iter().position(|c| c.size == 6).unwrap();
        dropped.classes.remove(victim);
        let v = verify(&s, &group, &dropped);
        assert!(!v.passed());
        let row6 = v.table.iter().find(|r| r.size == 6).unwrap();
        assert!(!row6.pass());
        assert_eq!(row6.incomplete, 4);
        assert!(v.render().contains("MISMATCH"));

        // Injecting a second copy of a class under an equivalent cap is a
        // canonical-form collision (and a count mismatch on top).
        let mut duplicated = result.clone();
        let copy = duplicated.classes[victim];
        let twin = {
            // Re-canonicalizing an equivalent cap reproduces the same form.
            let g = crate::projectivity::Projectivity::random(&s, &mut crate::rng::Rng::seeded(7));
            canonical_set(&group, &g.apply_set(&s, &copy.canonical))
        };
        duplicated.classes.push(ClassRecord {
            canonical: twin,
            ..copy
        });
        let v = verify(&s, &group, &duplicated);
        assert!(!v.passed());
        assert_eq!(v.collisions.len(), 1);
        assert!(v.render().contains("share a canonical form"));

        // A wrong completeness flag is a representative error.
        let mut misflagged = result.clone();
        misflagged.classes[victim].complete = true;
        let v = verify(&s, &group, &misflagged);
        assert!(!v.passed());
        assert!(v.representative_errors[0].contains("flagged complete"));
    }
}

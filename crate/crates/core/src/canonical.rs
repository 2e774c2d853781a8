//! Canonical forms of point sets under the projective group.
//!
//! The canonical form of a set S is the minimum, over every image g(S)
//! with g in PGL(r+1,q), of the sorted list of point indices, compared
//! lexicographically. Two sets are projectively equivalent exactly when
//! their canonical forms agree, so canonical forms serve as class keys
//! throughout the classification.
//!
//! The minimum image is found level by level rather than by touring the
//! orbit: commit the smallest reachable first element, restrict to the
//! stabilizer of the committed point, and repeat on the remainders. At
//! each level the live branches are (image set, witness) pairs that still
//! attain the committed prefix; identical image sets are merged, which is
//! what keeps highly symmetric sets cheap. The per-level work uses the
//! orbit minima and transversal elements cached in
//! [`ProjectiveGroup`](crate::group::ProjectiveGroup).
//!
//! Correctness sketch: committing m = min over branches and members p of
//! orbitMin(p) is sound because any image u(c) of a branch c under the
//! current stabilizer H has all elements in H-orbits of c's elements, so
//! no image reaches below m, and the branches mapping some p with
//! orbitMin(p) = m to m realize it. Injectivity of group elements keeps
//! committed points out of the remainders, which also makes the committed
//! prefix strictly increasing.

use crate::group::{Perm, PrefixGroup, ProjectiveGroup};
use crate::pointset::PointSet;
use rustc_hash::FxHashSet;
use std::sync::Arc;

/// A canonical form with a witness mapping the original set onto it.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub set: PointSet,
    pub witness: Perm,
}

/// The canonical form of a set (class key only, no witness).
pub fn canonical_set(group: &ProjectiveGroup, set: &PointSet) -> PointSet {
    min_image(group, set, false).0
}

/// The canonical form together with a projectivity-induced permutation w
/// such that w(set) equals the canonical set.
pub fn canonical_form(group: &ProjectiveGroup, set: &PointSet) -> Canonical {
    let (canon, witness) = min_image(group, set, true);
    Canonical {
        set: canon,
        witness: witness.expect("witness requested"),
    }
}

fn min_image(group: &ProjectiveGroup, set: &PointSet, track: bool) -> (PointSet, Option<Perm>) {
    let n = group.degree();
    if set.is_empty() {
        return (PointSet::EMPTY, track.then(|| Perm::identity(n)));
    }

    let mut prefix: Vec<u16> = Vec::with_capacity(set.len());
    let mut committed = PointSet::EMPTY;
    let mut h: Arc<PrefixGroup> = group.root();
    // Live branches: remaining image sets, each with a witness for the
    // part already committed when one was requested. Witnesses are kept
    // out of the untracked path entirely; composing or copying a whole
    // permutation per branch dominates the runtime otherwise.
    let mut branches: Vec<PointSet> = vec![*set];
    let mut witnesses: Vec<Perm> = if track {
        vec![Perm::identity(n)]
    } else {
        Vec::new()
    };

    loop {
        if h.is_trivial() {
            // Nothing can move any more; the best branch is decided by a
            // direct comparison of sorted remainders.
            let (i, rest) = branches
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.to_vec().cmp(&b.1.to_vec()))
                .expect("at least one branch");
            return (
                committed.union(rest),
                track.then(|| witnesses.swap_remove(i)),
            );
        }

        let m = branches
            .iter()
            .flat_map(|c| c.iter().map(|p| h.orbit_min(p)))
            .min()
            .expect("branches are nonempty");
        prefix.push(m);
        committed.insert(m);

        let mut seen: FxHashSet<PointSet> =
            FxHashSet::with_capacity_and_hasher(branches.len() * 8, Default::default());
        let mut next: Vec<PointSet> = Vec::new();
        let mut next_w: Vec<Perm> = Vec::new();
        for (i, c) in branches.iter().enumerate() {
            for p in c.iter() {
                if h.orbit_min(p) != m {
                    continue;
                }
                let u = h.to_min(p);
                let img = u.apply_set_without(c, p);
                if seen.insert(img) {
                    if track {
                        next_w.push(u.compose(&witnesses[i]));
                    }
                    next.push(img);
                }
            }
        }
        branches = next;
        witnesses = next_w;

        if branches[0].is_empty() {
            return (committed, track.then(|| witnesses.swap_remove(0)));
        }
        h = group.stabilizer_of_prefix(&h, &prefix, m);
    }
}

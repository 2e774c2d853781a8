//! Explicit equivalence tests and stabilizer enumeration.
//!
//! [`find_equivalence`] searches for a projectivity mapping one point set
//! onto another and returns it as a matrix witness; [`stabilizer`]
//! enumerates every projectivity fixing a cap setwise. Both work by
//! backtracking over images of a well-chosen subset of the source set:
//!
//!   * a greedy maximal independent subset d_0.. d_{k-1} (k = rank),
//!   * plus, if one exists, a frame point of the set: a further point
//!     whose coordinates in the d-basis are all nonzero. Its image pins
//!     down the basis rescaling uniquely. Sets without a frame point do
//!     occur (e.g. a basis plus one point supported on part of it), and
//!     for those the remaining (q-1)^(k-1) diagonal rescalings are simply
//!     enumerated.
//!
//! Candidate images are pruned with projective invariants before any
//! matrix is built: per-point and per-pair signatures derived from
//! hyperplane intersection counts and from the secant structure of the
//! set. Each surviving candidate map is verified point by point, so the
//! invariants only ever cut work, never change answers.
//!
//! This module is deliberately independent of the canonical-form machinery
//! in [`crate::canonical`]: the two give the same equivalence relation by
//! construction, which the test suite exploits as a cross-check.

use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::matrix::{Echelon, Mat};
use crate::pointset::PointSet;
use crate::projectivity::Projectivity;

/// All projectivities stabilizing a cap setwise.
#[derive(Debug, Clone)]
pub struct Stabilizer {
    pub order: u64,
    /// Every element, identity included, in deterministic search order.
    pub elements: Vec<Projectivity>,
}

/// Per-set invariant data used for pruning.
struct SetData {
    members: Vec<u16>,
    /// Sorted hyperplane intersection counts through each member.
    point_sigs: Vec<Vec<u8>>,
    /// For each member pair (i,j), i < j: sorted counts of hyperplanes
    /// through both, then sorted secant multiplicities of the other points
    /// on the line, encoded flat.
    pair_sigs: Vec<Vec<u16>>,
    profile: Vec<u32>,
    rank: usize,
}

impl SetData {
    fn build(space: &Space, set: &PointSet) -> SetData {
        let members = set.to_vec();
        let k = members.len();
        let counts = space.hyperplane_counts(set);

        // How many secants of the set pass through each point of the space.
        let mut through = vec![0u16; space.n_points()];
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                for &w in space.secant_others(x, y) {
                    through[w as usize] += 1;
                }
            }
        }

        let point_sigs = members
            .iter()
            .map(|&x| {
                let mut sig: Vec<u8> = space
                    .hyperplanes_through(x)
                    .iter()
                    .map(|&h| counts[h as usize])
                    .collect();
                sig.sort_unstable();
                sig
            })
            .collect();

        let mut pair_sigs = vec![Vec::new(); k * k];
        for i in 0..k {
            for j in (i + 1)..k {
                let (x, y) = (members[i], members[j]);
                let mut hyp: Vec<u16> = space
                    .hyperplanes_through(x)
                    .iter()
                    .filter(|h| space.hyperplane(**h).contains(y))
                    .map(|&h| counts[h as usize] as u16)
                    .collect();
                hyp.sort_unstable();
                let mut sec: Vec<u16> = space
                    .secant_others(x, y)
                    .iter()
                    .map(|&w| through[w as usize])
                    .collect();
                sec.sort_unstable();
                hyp.push(u16::MAX); // separator
                hyp.extend(sec);
                pair_sigs[i * k + j] = hyp.clone();
                pair_sigs[j * k + i] = hyp;
            }
        }

        SetData {
            members,
            point_sigs,
            pair_sigs,
            profile: space.profile(set),
            rank: space.rank_of(set),
        }
    }

    fn pair_sig(&self, i: usize, j: usize) -> &Vec<u16> {
        &self.pair_sigs[i * self.members.len() + j]
    }
}

/// Searches for a projectivity g with g(a) = b.
pub fn find_equivalence(space: &Space, a: &PointSet, b: &PointSet) -> Option<Projectivity> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(Projectivity::identity(space.dim()));
    }
    let da = SetData::build(space, a);
    let db = SetData::build(space, b);
    if da.rank != db.rank || da.profile != db.profile {
        return None;
    }
    let mut found = None;
    search_maps(space, &da, &db, b, &mut |g| {
        found = Some(g);
        false // stop at the first witness
    });
    if let Some(g) = &found {
        debug_assert_eq!(&g.apply_set(space, a), b);
    }
    found
}

/// Enumerates the setwise stabilizer of a spanning cap with at least
/// r + 2 points.
pub fn stabilizer(space: &Space, cap: &PointSet) -> Result<Stabilizer> {
    if let Some((x, y, z)) = space.cap_violation(cap) {
        return Err(Error::NotACap(x, y, z));
    }
    if cap.len() < space.dim() + 1 {
        return Err(Error::TooFewPoints(cap.len(), space.dim() + 1));
    }
    let d = SetData::build(space, cap);
    if d.rank < space.dim() {
        return Err(Error::NotSpanning {
            rank: d.rank,
            dim: space.dim(),
        });
    }
    let mut elements = Vec::new();
    search_maps(space, &d, &d, cap, &mut |g| {
        elements.push(g);
        true // keep enumerating
    });
    debug_assert!(elements.iter().any(|g| g.is_identity()));
    Ok(Stabilizer {
        order: elements.len() as u64,
        elements,
    })
}

/// Core backtracking: reports every projectivity mapping the set behind
/// `da` onto the set behind `db` (as sets) to `emit`; stops early when
/// `emit` returns false.
fn search_maps(
    space: &Space,
    da: &SetData,
    db: &SetData,
    b_set: &PointSet,
    emit: &mut dyn FnMut(Projectivity) -> bool,
) {
    let f = space.field();
    let dim = space.dim();
    let k = da.rank;

    // Greedy independent subset of a, by ascending index.
    let mut basis_idx: Vec<usize> = Vec::with_capacity(k);
    let mut ech = Echelon::new(f, dim);
    for (i, &p) in da.members.iter().enumerate() {
        if ech.insert(space.point(p)) {
            basis_idx.push(i);
            if basis_idx.len() == k {
                break;
            }
        }
    }
    let basis_cols: Vec<Vec<u8>> = basis_idx
        .iter()
        .map(|&i| space.point(da.members[i]).to_vec())
        .collect();
    let basis_mat = Mat::from_cols(&basis_cols);

    // Coefficients of every a-member in the d-basis.
    let coeffs: Vec<Vec<u8>> = da
        .members
        .iter()
        .map(|&p| {
            basis_mat
                .solve(space.point(p), f)
                .expect("member lies in the span of the greedy basis")
        })
        .collect();

    // A frame point: some non-basis member with all coordinates nonzero.
    let frame_idx = (0..da.members.len())
        .find(|i| !basis_idx.contains(i) && coeffs[*i].iter().all(|&c| c != 0));

    let mut chosen: Vec<usize> = Vec::with_capacity(k); // indices into db.members
    let mut used = vec![false; db.members.len()];
    let mut ranks: Vec<Echelon> = vec![Echelon::new(f, dim)];

    struct Ctx<'a> {
        space: &'a Space,
        da: &'a SetData,
        db: &'a SetData,
        b_set: &'a PointSet,
        basis_idx: &'a [usize],
        frame_idx: Option<usize>,
        coeffs: &'a [Vec<u8>],
        basis_mat: &'a Mat,
        k: usize,
        dim: usize,
    }

    fn descend(
        ctx: &Ctx,
        depth: usize,
        chosen: &mut Vec<usize>,
        used: &mut [bool],
        ranks: &mut Vec<Echelon>,
        emit: &mut dyn FnMut(Projectivity) -> bool,
    ) -> bool {
        if depth == ctx.k {
            return close_map(ctx, chosen, used, emit);
        }
        let ai = ctx.basis_idx[depth];
        for ti in 0..ctx.db.members.len() {
            if used[ti] || ctx.da.point_sigs[ai] != ctx.db.point_sigs[ti] {
                continue;
            }
            if (0..depth)
                .any(|e| ctx.da.pair_sig(ctx.basis_idx[e], ai) != ctx.db.pair_sig(chosen[e], ti))
            {
                continue;
            }
            let mut next_rank = ranks[depth].clone();
            if !next_rank.insert(ctx.space.point(ctx.db.members[ti])) {
                continue; // image must stay independent
            }
            chosen.push(ti);
            used[ti] = true;
            ranks.push(next_rank);
            let keep_going = descend(ctx, depth + 1, chosen, used, ranks, emit);
            ranks.pop();
            used[ti] = false;
            chosen.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// With a full image basis chosen, fix the rescaling (via the frame
    /// point or by enumeration), verify the induced map on every member,
    /// and emit survivors.
    fn close_map(
        ctx: &Ctx,
        chosen: &[usize],
        used: &[bool],
        emit: &mut dyn FnMut(Projectivity) -> bool,
    ) -> bool {
        let f = ctx.space.field();
        let target_cols: Vec<Vec<u8>> = chosen
            .iter()
            .map(|&ti| ctx.space.point(ctx.db.members[ti]).to_vec())
            .collect();
        let target_mat = Mat::from_cols(&target_cols);

        match ctx.frame_idx {
            Some(fi) => {
                let alpha = &ctx.coeffs[fi];
                for tf in 0..ctx.db.members.len() {
                    if used[tf] || ctx.da.point_sigs[fi] != ctx.db.point_sigs[tf] {
                        continue;
                    }
                    if (0..ctx.k).any(|e| {
                        ctx.da.pair_sig(ctx.basis_idx[e], fi) != ctx.db.pair_sig(chosen[e], tf)
                    }) {
                        continue;
                    }
                    let Some(beta) = target_mat.solve(ctx.space.point(ctx.db.members[tf]), f)
                    else {
                        continue;
                    };
                    if beta.iter().any(|&c| c == 0) {
                        continue;
                    }
                    let lambda: Vec<u8> = (0..ctx.k).map(|i| f.div(beta[i], alpha[i])).collect();
                    if !check_and_emit(ctx, &target_mat, &lambda, emit) {
                        return false;
                    }
                }
            }
            None => {
                // Enumerate diagonal rescalings with the first entry fixed
                // at 1: an odometer over nonzero values in positions 1..k.
                let q = f.order();
                let mut lambda = vec![1u8; ctx.k];
                'outer: loop {
                    if !check_and_emit(ctx, &target_mat, &lambda, emit) {
                        return false;
                    }
                    let mut pos = ctx.k;
                    while pos > 1 {
                        pos -= 1;
                        if lambda[pos] + 1 < q {
                            lambda[pos] += 1;
                            for l in &mut lambda[pos + 1..] {
                                *l = 1;
                            }
                            continue 'outer;
                        }
                        lambda[pos] = 1;
                    }
                    break;
                }
            }
        }
        true
    }

    /// Verifies that the map defined by the chosen image basis and the
    /// rescaling lambda sends every member of a into b, and if so builds
    /// the ambient matrix and emits it.
    fn check_and_emit(
        ctx: &Ctx,
        target_mat: &Mat,
        lambda: &[u8],
        emit: &mut dyn FnMut(Projectivity) -> bool,
    ) -> bool {
        let f = ctx.space.field();
        for x in ctx.coeffs.iter() {
            let scaled: Vec<u8> = (0..ctx.k).map(|j| f.mul(lambda[j], x[j])).collect();
            let img = target_mat.apply(&scaled, f);
            let Ok(idx) = ctx.space.index_of(&img) else {
                return true; // the zero vector cannot arise, but be safe
            };
            if !ctx.b_set.contains(idx) {
                return true; // not a match; continue searching
            }
        }
        let g = build_ambient(ctx, target_mat, lambda);
        emit(g)
    }

    /// Extends the span-level map to an ambient projectivity: complete
    /// both bases with standard vectors and map the complement identically.
    fn build_ambient(ctx: &Ctx, target_mat: &Mat, lambda: &[u8]) -> Projectivity {
        let f = ctx.space.field();
        let scaled_cols: Vec<Vec<u8>> = (0..ctx.k)
            .map(|j| {
                (0..ctx.dim)
                    .map(|i| f.mul(target_mat[(i, j)], lambda[j]))
                    .collect()
            })
            .collect();
        let src = complete_basis(ctx.space, ctx.basis_mat);
        let dst = complete_basis(ctx.space, &Mat::from_cols(&scaled_cols));
        let m = dst.mul(&src.inverse(f).expect("completed basis"), f);
        Projectivity::new(m, f).expect("change of basis is invertible")
    }

    let ctx = Ctx {
        space,
        da,
        db,
        b_set,
        basis_idx: &basis_idx,
        frame_idx,
        coeffs: &coeffs,
        basis_mat: &basis_mat,
        k,
        dim,
    };
    descend(&ctx, 0, &mut chosen, &mut used, &mut ranks, emit);
}

/// Appends standard basis vectors to the columns of m until it is a square
/// invertible matrix.
fn complete_basis(space: &Space, m: &Mat) -> Mat {
    let f = space.field();
    let dim = space.dim();
    let mut cols: Vec<Vec<u8>> = (0..m.cols()).map(|j| m.col(j)).collect();
    let mut ech = Echelon::new(f, dim);
    for c in &cols {
        ech.insert(c);
    }
    for i in 0..dim {
        if cols.len() == dim {
            break;
        }
        let mut e = vec![0u8; dim];
        e[i] = 1;
        if ech.insert(&e) {
            cols.push(e);
        }
    }
    debug_assert_eq!(cols.len(), dim);
    Mat::from_cols(&cols)
}

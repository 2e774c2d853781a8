//! The projective space PG(r,q) and its incidence tables.
//!
//! Points are the 1-dimensional subspaces of GF(q)^(r+1). Each point is
//! stored once, as the representative whose first nonzero coordinate is 1,
//! and points are indexed 0..N in lexicographic order of these normalized
//! vectors (so index 0 is (0:...:0:1)). All higher layers work with point
//! indices; the coordinate vectors matter only at construction, parsing and
//! printing time.
//!
//! [`Space`] precomputes
//!   * the secant table: for every pair of distinct points, the q-1 further
//!     points on the line through them, both as index slices and as bit
//!     masks, giving an O(1) collinearity oracle;
//!   * hyperplane incidence: hyperplanes are indexed like dual points, and
//!     each carries the bitset of points it contains.
//!
//! A *cap* is a set of points no three of which are collinear. Cap
//! predicates, candidate extension sets and completeness tests all reduce to
//! a few bitset operations against the secant table.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{Echelon, Mat};
use crate::pointset::{PointSet, MAX_POINTS};

const NO_POINT: u16 = u16::MAX;

/// PG(r,q) with all incidence tables built.
#[derive(Debug, Clone)]
pub struct Space {
    f: PrimeField,
    r: usize,
    dim: usize,
    n_points: usize,
    /// Normalized coordinates, dim bytes per point, in index order.
    coords: Vec<u8>,
    /// Radix value of a normalized vector -> point index.
    index_by_radix: Vec<u16>,
    /// For each ordered pair (a,b), a != b, the q-1 other points on the
    /// line ab, as a flat array of (q-1)-slices indexed by a*N + b.
    sec_other: Vec<u16>,
    /// Same data as bit masks.
    sec_mask: Vec<PointSet>,
    /// For each hyperplane (indexed like a dual point), its point set.
    hyp_mask: Vec<PointSet>,
    /// For each point, the sorted list of hyperplanes through it.
    hyps_through: Vec<Vec<u16>>,
    all_points: PointSet,
}

impl Space {
    /// Builds PG(r,q). q must be prime, r >= 2, and the point count must
    /// not exceed [`MAX_POINTS`].
    pub fn new(r: usize, q: u32) -> Result<Space> {
        if r < 2 {
            return Err(Error::DimensionTooSmall(r));
        }
        let f = PrimeField::new(q)?;
        let dim = r + 1;
        let mut n_raw = 1u64; // q^dim
        for _ in 0..dim {
            n_raw *= q as u64;
        }
        let n_points = ((n_raw - 1) / (q as u64 - 1).max(1)) as usize;
        if n_points > MAX_POINTS {
            return Err(Error::SpaceTooLarge {
                r,
                q,
                points: n_points,
                max: MAX_POINTS,
            });
        }

        // Enumerate normalized representatives in lex order.
        let mut coords = Vec::with_capacity(n_points * dim);
        let mut index_by_radix = vec![NO_POINT; n_raw as usize];
        let mut v = vec![0u8; dim];
        loop {
            if let Some(first) = v.iter().position(|&x| x != 0) {
                if v[first] == 1 {
                    let idx = (coords.len() / dim) as u16;
                    index_by_radix[radix(&v, q)] = idx;
                    coords.extend_from_slice(&v);
                }
            }
            // Next vector in lex order (most significant digit first).
            let mut i = dim;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if v[i] as u32 + 1 < q {
                    v[i] += 1;
                    for x in &mut v[i + 1..] {
                        *x = 0;
                    }
                    break;
                }
                if i == 0 {
                    v.clear();
                    break;
                }
            }
            if v.is_empty() {
                break;
            }
        }
        debug_assert_eq!(coords.len(), n_points * dim);

        let mut space = Space {
            f,
            r,
            dim,
            n_points,
            coords,
            index_by_radix,
            sec_other: Vec::new(),
            sec_mask: Vec::new(),
            hyp_mask: Vec::new(),
            hyps_through: Vec::new(),
            all_points: PointSet::full(n_points),
        };
        space.build_secants();
        space.build_hyperplanes();
        Ok(space)
    }

    fn build_secants(&mut self) {
        let n = self.n_points;
        let w = self.sec_width();
        self.sec_other = vec![NO_POINT; n * n * w];
        self.sec_mask = vec![PointSet::EMPTY; n * n];
        let mut tmp = vec![0u8; self.dim];
        for a in 0..n as u16 {
            for b in (a + 1)..n as u16 {
                let mut others = Vec::with_capacity(w);
                for lambda in 1..self.f.order() {
                    // a + lambda * b, normalized.
                    for i in 0..self.dim {
                        tmp[i] = self.f.add(
                            self.coords[a as usize * self.dim + i],
                            self.f.mul(lambda, self.coords[b as usize * self.dim + i]),
                        );
                    }
                    let p = self.index_of_raw(&mut tmp).expect("line point is nonzero");
                    others.push(p);
                }
                others.sort_unstable();
                let mut mask = PointSet::EMPTY;
                for &p in &others {
                    mask.insert(p);
                }
                for (pair, _) in [(a, b), (b, a)].into_iter().enumerate() {
                    let key = if pair == 0 {
                        a as usize * n + b as usize
                    } else {
                        b as usize * n + a as usize
                    };
                    self.sec_other[key * w..(key + 1) * w].copy_from_slice(&others);
                    self.sec_mask[key] = mask;
                }
            }
        }
    }

    fn build_hyperplanes(&mut self) {
        let n = self.n_points;
        self.hyp_mask = vec![PointSet::EMPTY; n];
        self.hyps_through = vec![Vec::new(); n];
        for h in 0..n {
            let fvec = self.point(h as u16).to_vec();
            let mut mask = PointSet::EMPTY;
            for p in 0..n {
                let dot = (0..self.dim).fold(0u8, |acc, i| {
                    self.f
                        .add(acc, self.f.mul(fvec[i], self.coords[p * self.dim + i]))
                });
                if dot == 0 {
                    mask.insert(p as u16);
                    self.hyps_through[p].push(h as u16);
                }
            }
            self.hyp_mask[h] = mask;
        }
    }

    #[inline]
    fn sec_width(&self) -> usize {
        self.f.order() as usize - 1
    }

    pub fn field(&self) -> &PrimeField {
        &self.f
    }

    /// Projective dimension r.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Linear dimension r + 1.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q(&self) -> u32 {
        self.f.order() as u32
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// The set of all points.
    pub fn all_points(&self) -> PointSet {
        self.all_points
    }

    /// Normalized coordinates of a point.
    pub fn point(&self, idx: u16) -> &[u8] {
        let i = idx as usize * self.dim;
        &self.coords[i..i + self.dim]
    }

    /// Scales a coordinate vector so its first nonzero entry is 1.
    pub fn normalize(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.dim {
            return Err(Error::BadCoordinateLength {
                got: v.len(),
                want: self.dim,
            });
        }
        let Some(first) = v.iter().position(|&x| x != 0) else {
            return Err(Error::ZeroVector);
        };
        let inv = self.f.inv(v[first]);
        Ok(v.iter().map(|&x| self.f.mul(x, inv)).collect())
    }

    /// Index of the point with the given (not necessarily normalized)
    /// coordinates.
    pub fn index_of(&self, v: &[u8]) -> Result<u16> {
        let norm = self.normalize(v)?;
        Ok(self.index_by_radix[radix(&norm, self.q())])
    }

    /// Index lookup for an already normalized vector; None for zero.
    fn index_of_raw(&self, v: &mut [u8]) -> Option<u16> {
        let first = v.iter().position(|&x| x != 0)?;
        if v[first] != 1 {
            let inv = self.f.inv(v[first]);
            for x in v.iter_mut() {
                *x = self.f.mul(*x, inv);
            }
        }
        let idx = self.index_by_radix[radix(v, self.q())];
        debug_assert_ne!(idx, NO_POINT);
        Some(idx)
    }

    /// The q-1 points on the line ab other than a and b.
    pub fn secant_others(&self, a: u16, b: u16) -> &[u16] {
        debug_assert_ne!(a, b);
        let w = self.sec_width();
        let key = a as usize * self.n_points + b as usize;
        &self.sec_other[key * w..(key + 1) * w]
    }

    /// Same as [`secant_others`](Self::secant_others) but as a bitset.
    #[inline]
    pub fn secant_mask(&self, a: u16, b: u16) -> &PointSet {
        debug_assert_ne!(a, b);
        &self.sec_mask[a as usize * self.n_points + b as usize]
    }

    /// The full line through a and b as a point set (q + 1 points).
    pub fn line(&self, a: u16, b: u16) -> PointSet {
        let mut l = *self.secant_mask(a, b);
        l.insert(a);
        l.insert(b);
        l
    }

    /// Whether no three points of the set are collinear.
    pub fn is_cap(&self, set: &PointSet) -> bool {
        self.cap_violation(set).is_none()
    }

    /// Finds a collinear triple in the set, if any.
    pub fn cap_violation(&self, set: &PointSet) -> Option<(u16, u16, u16)> {
        let members = set.to_vec();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let hit = self.secant_mask(a, b).intersection(set);
                if let Some(c) = hit.first() {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    /// The set together with every point on a secant of the set.
    pub fn blocked(&self, set: &PointSet) -> PointSet {
        let members = set.to_vec();
        let mut blocked = *set;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                blocked.union_with(self.secant_mask(a, b));
            }
        }
        blocked
    }

    /// Points p such that set ∪ {p} is still a cap. The set itself is
    /// excluded. For a non-cap the result is meaningless.
    pub fn candidates(&self, set: &PointSet) -> PointSet {
        self.all_points.difference(&self.blocked(set))
    }

    /// Whether the cap extends to no larger cap.
    pub fn is_complete(&self, cap: &PointSet) -> bool {
        self.candidates(cap).is_empty()
    }

    /// The root cap {e1, e2, e3} every classification starts from.
    pub fn standard_root(&self) -> PointSet {
        PointSet::from_iter((0..3).map(|i| self.basis_point(i)))
    }

    /// Index of the i-th standard basis point (1 in coordinate i).
    pub fn basis_point(&self, i: usize) -> u16 {
        debug_assert!(i < self.dim);
        let mut v = vec![0u8; self.dim];
        v[i] = 1;
        self.index_of(&v).expect("basis vector is a point")
    }

    pub fn n_hyperplanes(&self) -> usize {
        self.n_points
    }

    /// Point set of hyperplane h.
    pub fn hyperplane(&self, h: u16) -> &PointSet {
        &self.hyp_mask[h as usize]
    }

    /// Sorted indices of the hyperplanes containing point p.
    pub fn hyperplanes_through(&self, p: u16) -> &[u16] {
        &self.hyps_through[p as usize]
    }

    /// |H ∩ set| for every hyperplane H, indexed by hyperplane.
    pub fn hyperplane_counts(&self, set: &PointSet) -> Vec<u8> {
        let mut counts = vec![0u8; self.n_points];
        for p in set.iter() {
            for &h in self.hyperplanes_through(p) {
                counts[h as usize] += 1;
            }
        }
        counts
    }

    /// Histogram of hyperplane intersection sizes: entry i counts the
    /// hyperplanes meeting the set in exactly i points. This is invariant
    /// under projectivities, so sets with different profiles are
    /// inequivalent.
    pub fn profile(&self, set: &PointSet) -> Vec<u32> {
        let counts = self.hyperplane_counts(set);
        let mut hist = vec![0u32; set.len() + 1];
        for &c in &counts {
            hist[c as usize] += 1;
        }
        hist
    }

    /// Rank of the coordinate vectors of the set (dimension of its span).
    pub fn rank_of(&self, set: &PointSet) -> usize {
        let mut e = Echelon::new(&self.f, self.dim);
        for p in set.iter() {
            e.insert(self.point(p));
            if e.rank() == self.dim {
                break;
            }
        }
        e.rank()
    }

    /// Coordinate matrix with one column per point, columns in increasing
    /// index order.
    pub fn matrix_of(&self, set: &PointSet) -> Mat {
        let cols: Vec<Vec<u8>> = set.iter().map(|p| self.point(p).to_vec()).collect();
        Mat::from_cols(&cols)
    }
}

fn radix(v: &[u8], q: u32) -> usize {
    v.iter()
        .fold(0usize, |acc, &x| acc * q as usize + x as usize)
}

/// A cap under construction, with its blocked set maintained
/// incrementally: extending by one point costs O(|cap|) mask unions
/// instead of the O(|cap|^2) of a fresh [`Space::blocked`] call.
#[derive(Debug, Clone)]
pub struct CapBuilder<'a> {
    space: &'a Space,
    cap: PointSet,
    blocked: PointSet,
    members: Vec<u16>,
}

impl<'a> CapBuilder<'a> {
    pub fn new(space: &'a Space) -> CapBuilder<'a> {
        CapBuilder {
            space,
            cap: PointSet::EMPTY,
            blocked: PointSet::EMPTY,
            members: Vec::new(),
        }
    }

    /// Starts from an existing cap; fails on a collinear triple.
    pub fn from_set(space: &'a Space, set: &PointSet) -> Result<CapBuilder<'a>> {
        if let Some((a, b, c)) = space.cap_violation(set) {
            return Err(Error::NotACap(a, b, c));
        }
        let mut b = CapBuilder::new(space);
        for p in set.iter() {
            b.push(p);
        }
        Ok(b)
    }

    /// Adds a point. The caller must pass a current candidate.
    pub fn push(&mut self, p: u16) {
        debug_assert!(!self.blocked.contains(p), "point {p} is blocked");
        for &m in &self.members {
            self.blocked.union_with(self.space.secant_mask(m, p));
        }
        self.blocked.insert(p);
        self.cap.insert(p);
        self.members.push(p);
    }

    pub fn cap(&self) -> &PointSet {
        &self.cap
    }

    pub fn members(&self) -> &[u16] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn candidates(&self) -> PointSet {
        self.space.all_points().difference(&self.blocked)
    }

    pub fn is_complete(&self) -> bool {
        self.candidates().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        assert_eq!(Space::new(2, 3).unwrap().n_points(), 13);
        assert_eq!(Space::new(3, 3).unwrap().n_points(), 40);
        assert_eq!(Space::new(4, 3).unwrap().n_points(), 121);
        assert_eq!(Space::new(2, 2).unwrap().n_points(), 7);
        assert_eq!(Space::new(2, 5).unwrap().n_points(), 31);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Space::new(1, 3).is_err());
        assert!(Space::new(2, 4).is_err());
        assert!(Space::new(5, 3).is_err(), "364 points exceeds the limit");
    }

    #[test]
    fn normalization() {
        let s = Space::new(4, 3).unwrap();
        assert_eq!(s.normalize(&[2, 0, 1, 0, 0]).unwrap(), vec![1, 0, 2, 0, 0]);
        assert_eq!(s.normalize(&[0, 0, 0, 0, 2]).unwrap(), vec![0, 0, 0, 0, 1]);
        assert!(s.normalize(&[0; 5]).is_err());
        assert!(s.normalize(&[1, 0]).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let s = Space::new(4, 3).unwrap();
        // First point is (0:0:0:0:1), last is (1:2:2:2:2).
        assert_eq!(s.point(0), &[0, 0, 0, 0, 1]);
        assert_eq!(s.point(120), &[1, 2, 2, 2, 2]);
        for i in 1..s.n_points() as u16 {
            assert!(s.point(i - 1) < s.point(i), "order broken at {i}");
        }
        // Standard basis points land at known indices.
        assert_eq!(s.basis_point(0), 40);
        assert_eq!(s.basis_point(1), 13);
        assert_eq!(s.basis_point(2), 4);
        assert_eq!(s.basis_point(3), 1);
        assert_eq!(s.basis_point(4), 0);
        assert_eq!(s.standard_root().to_vec(), vec![4, 13, 40]);
    }

    #[test]
    fn index_round_trip() {
        let s = Space::new(3, 3).unwrap();
        for i in 0..s.n_points() as u16 {
            assert_eq!(s.index_of(s.point(i)).unwrap(), i);
        }
    }

    #[test]
    fn secants_of_basis_pair() {
        let s = Space::new(4, 3).unwrap();
        let e1 = s.basis_point(0);
        let e2 = s.basis_point(1);
        let others = s.secant_others(e1, e2);
        let got: Vec<&[u8]> = others.iter().map(|&p| s.point(p)).collect();
        assert_eq!(got, vec![&[1, 1, 0, 0, 0][..], &[1, 2, 0, 0, 0][..]]);
        assert_eq!(s.secant_others(e2, e1), others);
        assert_eq!(s.secant_mask(e1, e2).to_vec(), others.to_vec());
    }

    #[test]
    fn every_line_has_q_plus_1_points() {
        for (r, q) in [(2usize, 3u32), (3, 3), (2, 5), (2, 2)] {
            let s = Space::new(r, q).unwrap();
            let n = s.n_points() as u16;
            for a in 0..n.min(12) {
                for b in (a + 1)..n {
                    assert_eq!(s.line(a, b).len(), q as usize + 1);
                }
            }
        }
    }

    #[test]
    fn line_closure() {
        // The line through any two of its points is the same set.
        let s = Space::new(3, 3).unwrap();
        let l = s.line(5, 17);
        let pts = l.to_vec();
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                assert_eq!(s.line(a, b), l);
            }
        }
    }

    #[test]
    fn root_cap_counts() {
        let s = Space::new(4, 3).unwrap();
        let root = s.standard_root();
        assert!(s.is_cap(&root));
        assert_eq!(s.blocked(&root).len(), 9);
        assert_eq!(s.candidates(&root).len(), 112);
        assert!(!s.is_complete(&root));
    }

    #[test]
    fn candidates_of_small_sets() {
        let s = Space::new(4, 3).unwrap();
        assert_eq!(s.candidates(&PointSet::EMPTY).len(), 121);
        let single = PointSet::from_iter([7u16]);
        assert_eq!(s.candidates(&single).len(), 120);
    }

    #[test]
    fn collinear_triple_is_not_a_cap() {
        let s = Space::new(4, 3).unwrap();
        let e1 = s.basis_point(0);
        let e2 = s.basis_point(1);
        let third = s.secant_others(e1, e2)[0];
        let bad = PointSet::from_iter([e1, e2, third]);
        assert!(!s.is_cap(&bad));
        let (a, b, c) = s.cap_violation(&bad).unwrap();
        let l = s.line(a, b);
        assert!(l.contains(c));
    }

    #[test]
    fn builder_matches_batch_blocked() {
        let s = Space::new(4, 3).unwrap();
        let mut b = CapBuilder::new(&s);
        for p in s.standard_root().iter() {
            b.push(p);
        }
        assert_eq!(b.candidates(), s.candidates(&s.standard_root()));
        let next = b.candidates().first().unwrap();
        b.push(next);
        let grown = s.standard_root().with(next);
        assert_eq!(b.candidates(), s.candidates(&grown));
        // Candidates only shrink as the cap grows.
        assert!(b.candidates().is_subset(&s.candidates(&s.standard_root())));
    }

    #[test]
    fn hyperplane_incidence() {
        let s = Space::new(4, 3).unwrap();
        assert_eq!(s.n_hyperplanes(), 121);
        for h in 0..s.n_hyperplanes() as u16 {
            assert_eq!(s.hyperplane(h).len(), 40, "hyperplane {h}");
        }
        for p in 0..s.n_points() as u16 {
            assert_eq!(s.hyperplanes_through(p).len(), 40, "point {p}");
            for &h in s.hyperplanes_through(p) {
                assert!(s.hyperplane(h).contains(p));
            }
        }
    }

    #[test]
    fn profile_is_a_histogram() {
        let s = Space::new(4, 3).unwrap();
        let root = s.standard_root();
        let prof = s.profile(&root);
        assert_eq!(prof.iter().sum::<u32>(), 121);
        // Expected intersection sizes with the plane spanned by the root:
        // each hyperplane meets it in 1 point or a full line (2 of the 3
        // root points plus neither... sizes are 0..3).
        assert_eq!(prof.len(), 4);
    }

    #[test]
    fn rank_and_matrix() {
        let s = Space::new(4, 3).unwrap();
        let root = s.standard_root();
        assert_eq!(s.rank_of(&root), 3);
        let m = s.matrix_of(&root);
        assert_eq!((m.rows(), m.cols()), (5, 3));
        assert_eq!(m.rank(s.field()), 3);
        assert_eq!(s.rank_of(&s.all_points()), 5);
    }
}

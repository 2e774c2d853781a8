//! Fixed-width bitsets over point indices.
//!
//! Every supported geometry has at most 256 points, so a set of points fits
//! in four machine words. Keeping the width fixed makes sets `Copy`, lets
//! them serve as hash keys, and turns the hot operations of the search
//! (union, intersection, complement, subset tests) into a handful of word
//! instructions.

const WORDS: usize = 4;

/// Maximum number of points a [`PointSet`] can hold.
pub const MAX_POINTS: usize = WORDS * 64;

/// A set of point indices in 0..256.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet([u64; WORDS]);

impl PointSet {
    pub const EMPTY: PointSet = PointSet([0; WORDS]);

    /// The set {0, 1, .., n-1}.
    pub fn full(n: usize) -> PointSet {
        debug_assert!(n <= MAX_POINTS);
        let mut s = PointSet::EMPTY;
        for w in 0..WORDS {
            let lo = w * 64;
            if n >= lo + 64 {
                s.0[w] = !0;
            } else if n > lo {
                s.0[w] = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = u16>>(iter: I) -> PointSet {
        let mut s = PointSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, p: u16) {
        self.0[(p >> 6) as usize] |= 1u64 << (p & 63);
    }

    #[inline]
    pub fn remove(&mut self, p: u16) {
        self.0[(p >> 6) as usize] &= !(1u64 << (p & 63));
    }

    #[inline]
    pub fn contains(&self, p: u16) -> bool {
        self.0[(p >> 6) as usize] >> (p & 63) & 1 != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == [0; WORDS]
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<u16> {
        for (w, &word) in self.0.iter().enumerate() {
            if word != 0 {
                return Some((w * 64) as u16 + word.trailing_zeros() as u16);
            }
        }
        None
    }

    #[inline]
    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut r = *self;
        r.union_with(other);
        r
    }

    #[inline]
    pub fn union_with(&mut self, other: &PointSet) {
        for w in 0..WORDS {
            self.0[w] |= other.0[w];
        }
    }

    #[inline]
    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut r = *self;
        for w in 0..WORDS {
            r.0[w] &= other.0[w];
        }
        r
    }

    /// Set difference self \ other.
    #[inline]
    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut r = *self;
        for w in 0..WORDS {
            r.0[w] &= !other.0[w];
        }
        r
    }

    #[inline]
    pub fn intersects(&self, other: &PointSet) -> bool {
        (0..WORDS).any(|w| self.0[w] & other.0[w] != 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &PointSet) -> bool {
        (0..WORDS).all(|w| self.0[w] & !other.0[w] == 0)
    }

    pub fn with(&self, p: u16) -> PointSet {
        let mut r = *self;
        r.insert(p);
        r
    }

    pub fn without(&self, p: u16) -> PointSet {
        let mut r = *self;
        r.remove(p);
        r
    }

    /// Iterates members in increasing order.
    pub fn iter(&self) -> Iter {
        Iter {
            set: *self,
            word: 0,
        }
    }

    /// Members in increasing order.
    pub fn to_vec(&self) -> Vec<u16> {
        self.iter().collect()
    }
}

pub struct Iter {
    set: PointSet,
    word: usize,
}

impl Iterator for Iter {
    type Item = u16;

    #[inline]
    fn next(&mut self) -> Option<u16> {
        while self.word < WORDS {
            let w = self.set.0[self.word];
            if w != 0 {
                let bit = w.trailing_zeros();
                self.set.0[self.word] &= w - 1;
                return Some((self.word * 64) as u16 + bit as u16);
            }
            self.word += 1;
        }
        None
    }
}

impl FromIterator<u16> for PointSet {
    fn from_iter<I: IntoIterator<Item = u16>>(iter: I) -> Self {
        PointSet::from_iter(iter)
    }
}

impl std::fmt::Display for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

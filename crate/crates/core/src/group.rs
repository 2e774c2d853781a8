//! PGL(r+1,q) as a permutation group on point indices.
//!
//! The classification needs three group-theoretic services, all of which
//! reduce to permutation machinery once projectivities are converted to
//! permutations of the point list:
//!
//!   * the group order (to cross-check against the closed formula and for
//!     orbit-stabilizer sanity checks),
//!   * membership tests (for validating witnesses),
//!   * pointwise stabilizers of short prefixes of committed points,
//!     together with per-point orbit minima and transversal elements:
//!     exactly the data the minimal-image computation in [`crate::canonical`]
//!     consumes.
//!
//! Stabilizer chains are built with the deterministic incremental
//! Schreier-Sims algorithm. Pointwise stabilizers are derived level by
//! level via Schreier generators and cached per prefix, since the search
//! revisits the same prefixes constantly.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::geometry::Space;
use crate::matrix::Mat;
use crate::pointset::PointSet;
use crate::projectivity::Projectivity;

/// A permutation of 0..n, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Box<[u16]>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u16).collect(),
        }
    }

    pub fn from_images(images: Vec<u16>) -> Perm {
        let p = Perm {
            images: images.into_boxed_slice(),
        };
        debug_assert!(p.is_valid());
        p
    }

    fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &i in self.images.iter() {
            if (i as usize) >= self.images.len() || seen[i as usize] {
                return false;
            }
            seen[i as usize] = true;
        }
        true
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, p: u16) -> u16 {
        self.images[p as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u16 == v)
    }

    /// Function composition: (a.compose(b))(x) = a(b(x)).
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u16;
        }
        Perm {
            images: inv.into_boxed_slice(),
        }
    }

    pub fn apply_set(&self, set: &PointSet) -> PointSet {
        set.iter().map(|p| self.image(p)).collect()
    }

    /// Image of the set with one member left out of the result.
    pub fn apply_set_without(&self, set: &PointSet, skip: u16) -> PointSet {
        set.iter()
            .filter(|&p| p != skip)
            .map(|p| self.image(p))
            .collect()
    }

    /// Smallest point moved, if the permutation is not the identity.
    pub fn first_moved(&self) -> Option<u16> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &v)| *i as u16 != v)
            .map(|(i, _)| i as u16)
    }
}

/// |PGL(dim, q)| = (q^dim - q^0)(q^dim - q^1)...(q^dim - q^(dim-1)) / (q-1).
pub fn pgl_order(dim: usize, q: u32) -> u64 {
    let mut qd = 1u64;
    for _ in 0..dim {
        qd *= q as u64;
    }
    let mut ord = 1u64;
    let mut qi = 1u64;
    for _ in 0..dim {
        ord = ord.checked_mul(qd - qi).expect("PGL order fits u64");
        qi *= q as u64;
    }
    ord / (q as u64 - 1)
}

/// Matrix generators of GL(r+1,q): all elementary transvections I + E_ij
/// plus one diagonal matrix diag(g,1,..,1) with g a primitive root. The
/// transvections generate SL, and the diagonal provides the missing
/// determinants, so together they generate GL and hence PGL mod scalars.
pub fn pgl_generators(space: &Space) -> Vec<Projectivity> {
    let dim = space.dim();
    let f = space.field();
    let mut gens = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let mut m = Mat::identity(dim);
            m[(i, j)] = 1;
            gens.push(Projectivity::new(m, f).unwrap());
        }
    }
    if space.q() > 2 {
        let mut d = Mat::identity(dim);
        d[(0, 0)] = f.primitive_root();
        gens.push(Projectivity::new(d, f).unwrap());
    }
    gens
}

struct Level {
    base: u16,
    gens: Vec<Arc<Perm>>,
    /// Orbit of base under this level's generators, in discovery order.
    orbit: Vec<u16>,
    /// transversal[p] = Some(u) with u(base) = p for p in the orbit.
    transversal: Vec<Option<Arc<Perm>>>,
    /// (orbit point, generator index) pairs whose Schreier product has not
    /// been checked yet.
    queue: Vec<(u16, usize)>,
}

impl Level {
    fn new(base: u16, n: usize) -> Level {
        let mut transversal = vec![None; n];
        transversal[base as usize] = Some(Arc::new(Perm::identity(n)));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
            queue: Vec::new(),
        }
    }

    fn add_gen(&mut self, g: Arc<Perm>) {
        let gi = self.gens.len();
        self.gens.push(g);
        for &p in &self.orbit {
            self.queue.push((p, gi));
        }
    }
}

/// A stabilizer chain for a permutation group, built incrementally.
pub struct StabChain {
    n: usize,
    levels: Vec<Level>,
    /// Every strong generator ever registered, with the shallowest level
    /// it has been added from. The same Schreier residue routinely shows
    /// up several times before the orbit extension that would make it sift
    /// to the identity has been processed, and re-adding it would balloon
    /// the generator lists.
    known: HashMap<Box<[u16]>, usize>,
}

impl StabChain {
    /// The trivial group on n points.
    pub fn trivial(n: usize) -> StabChain {
        StabChain {
            n,
            levels: Vec::new(),
            known: HashMap::new(),
        }
    }

    pub fn from_generators<'a, I>(n: usize, gens: I) -> StabChain
    where
        I: IntoIterator<Item = &'a Perm>,
    {
        let mut chain = StabChain::trivial(n);
        for g in gens {
            chain.extend(g.clone());
        }
        chain
    }

    /// Reduces g through the chain. Returns the first level whose base
    /// image has no transversal element, together with the partially
    /// reduced permutation; or the fully reduced residue at chain length.
    fn sift(&self, mut g: Perm) -> (usize, Perm) {
        for (i, level) in self.levels.iter().enumerate() {
            let img = g.image(level.base);
            match &level.transversal[img as usize] {
                None => return (i, g),
                Some(u) => g = u.inverse().compose(&g),
            }
        }
        (self.levels.len(), g)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (_, residue) = self.sift(g.clone());
        residue.is_identity()
    }

    /// Adds a group element, restoring the chain invariants.
    pub fn extend(&mut self, g: Perm) {
        debug_assert_eq!(g.degree(), self.n);
        if self.insert(g, 0) {
            self.drain();
        }
    }

    /// Sifts y and, if a nontrivial residue remains, registers it as a
    /// generator on the levels `from ..= stuck level`. Input generators
    /// use from = 0; a Schreier generator discovered at level k is already
    /// generated by the levels above k+1, so it enters at from = k+1.
    /// Returns whether anything was inserted.
    fn insert(&mut self, y: Perm, from: usize) -> bool {
        let (level, residue) = self.sift(y);
        if residue.is_identity() {
            return false;
        }
        // Skip if this residue already covers the requested range; extend
        // only the missing shallow part otherwise.
        let upto = match self.known.get_mut(&residue.images) {
            Some(prev_from) if *prev_from <= from => return false,
            Some(prev_from) => {
                let upto = *prev_from - 1;
                *prev_from = from;
                upto
            }
            None => {
                self.known.insert(residue.images.clone(), from);
                level
            }
        };
        if level == self.levels.len() {
            let base = residue.first_moved().expect("non-identity residue");
            self.levels.push(Level::new(base, self.n));
        }
        let residue = Arc::new(residue);
        for k in from..=upto.min(self.levels.len() - 1) {
            self.levels[k].add_gen(Arc::clone(&residue));
        }
        true
    }

    /// Processes outstanding (orbit point, generator) pairs on all levels:
    /// grows orbits and sifts Schreier generators, inserting any residues
    /// deeper in the chain. On return every Schreier generator of every
    /// level sifts to the identity, which by Schreier's lemma makes each
    /// level's deeper chain exactly the stabilizer of its base.
    fn drain(&mut self) {
        loop {
            // Deepest level first, so short chains near the bottom settle
            // before the floods of Schreier products from the big orbits
            // above are checked against them.
            let Some(k) = (0..self.levels.len())
                .rev()
                .find(|&k| !self.levels[k].queue.is_empty())
            else {
                return;
            };
            let (p, gi) = self.levels[k].queue.pop().unwrap();
            let level = &self.levels[k];
            let s = Arc::clone(&level.gens[gi]);
            let u_p = Arc::clone(level.transversal[p as usize].as_ref().unwrap());
            let sp = s.image(p);
            if self.levels[k].transversal[sp as usize].is_none() {
                // New orbit point: transversal element s . u_p, trivial
                // Schreier generator.
                let u_sp = Arc::new(s.compose(&u_p));
                let level = &mut self.levels[k];
                level.transversal[sp as usize] = Some(u_sp);
                level.orbit.push(sp);
                for gj in 0..level.gens.len() {
                    level.queue.push((sp, gj));
                }
            } else {
                let u_sp = self.levels[k].transversal[sp as usize].as_ref().unwrap();
                let schreier = u_sp.inverse().compose(&s).compose(&u_p);
                if !schreier.is_identity() {
                    self.insert(schreier, k + 1);
                }
            }
        }
    }

    pub fn order(&self) -> u64 {
        self.levels.iter().fold(1u64, |acc, l| {
            acc.checked_mul(l.orbit.len() as u64).unwrap()
        })
    }

    pub fn base(&self) -> Vec<u16> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Generators of the whole group: the union of all level generators.
    pub fn strong_generators(&self) -> Vec<Arc<Perm>> {
        let mut out: Vec<Arc<Perm>> = Vec::new();
        for level in &self.levels {
            for g in &level.gens {
                if !out.iter().any(|h| h.as_ref() == g.as_ref()) {
                    out.push(Arc::clone(g));
                }
            }
        }
        out
    }
}

/// A subgroup arising as the pointwise stabilizer of a prefix of committed
/// points, with the orbit data the minimal-image search needs.
pub struct PrefixGroup {
    pub order: u64,
    gens: Vec<Arc<Perm>>,
    /// orbit_min[p] = smallest point in the orbit of p.
    orbit_min: Box<[u16]>,
    /// to_min[p] maps p to orbit_min[p]; None means p is already minimal
    /// and fixed... (always Some for orbit members reached by BFS; the
    /// orbit minimum itself carries the identity).
    to_min: Vec<Option<Arc<Perm>>>,
}

impl PrefixGroup {
    fn build(n: usize, order: u64, gens: Vec<Arc<Perm>>) -> PrefixGroup {
        let mut orbit_min = vec![u16::MAX; n].into_boxed_slice();
        let mut to_min: Vec<Option<Arc<Perm>>> = vec![None; n];
        let identity = Arc::new(Perm::identity(n));
        let inverses: Vec<(Arc<Perm>, Arc<Perm>)> = gens
            .iter()
            .map(|g| (Arc::clone(g), Arc::new(g.inverse())))
            .collect();
        for start in 0..n as u16 {
            if orbit_min[start as usize] != u16::MAX {
                continue;
            }
            // Ascending scan: `start` is the minimum of its orbit.
            orbit_min[start as usize] = start;
            to_min[start as usize] = Some(Arc::clone(&identity));
            let mut frontier = vec![start];
            while let Some(y) = frontier.pop() {
                let u_y = Arc::clone(to_min[y as usize].as_ref().unwrap());
                for (g, g_inv) in &inverses {
                    // Walk edges in both directions so the whole orbit is
                    // reached regardless of generator orientation.
                    for (z, via) in [(g.image(y), g_inv), (g_inv.image(y), g)] {
                        if orbit_min[z as usize] == u16::MAX {
                            orbit_min[z as usize] = start;
                            // via maps z back to y, so u_y . via maps z to start.
                            to_min[z as usize] = Some(Arc::new(u_y.compose(via)));
                            frontier.push(z);
                        }
                    }
                }
            }
        }
        PrefixGroup {
            order,
            gens,
            orbit_min,
            to_min,
        }
    }

    #[inline]
    pub fn orbit_min(&self, p: u16) -> u16 {
        self.orbit_min[p as usize]
    }

    /// A permutation in the group mapping p to orbit_min(p).
    pub fn to_min(&self, p: u16) -> &Arc<Perm> {
        self.to_min[p as usize]
            .as_ref()
            .expect("orbit data covers all points")
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn generators(&self) -> &[Arc<Perm>] {
        &self.gens
    }
}

/// PGL(r+1,q) acting on the points of a [`Space`], with a cache of
/// pointwise prefix stabilizers.
pub struct ProjectiveGroup {
    n: usize,
    order: u64,
    root: Arc<PrefixGroup>,
    cache: RwLock<HashMap<Box<[u16]>, Arc<PrefixGroup>>>,
}

impl ProjectiveGroup {
    pub fn new(space: &Space) -> ProjectiveGroup {
        let n = space.n_points();
        let gen_perms: Vec<Perm> = pgl_generators(space)
            .iter()
            .map(|g| g.to_permutation(space))
            .collect();
        let chain = StabChain::from_generators(n, gen_perms.iter());
        let order = chain.order();
        debug_assert_eq!(order, pgl_order(space.dim(), space.q()));
        let gens: Vec<Arc<Perm>> = gen_perms.into_iter().map(Arc::new).collect();
        ProjectiveGroup {
            n,
            order,
            root: Arc::new(PrefixGroup::build(n, order, gens)),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The full group, viewed as the stabilizer of the empty prefix.
    pub fn root(&self) -> Arc<PrefixGroup> {
        Arc::clone(&self.root)
    }

    /// The subgroup of `parent` fixing `point`, where `parent` is the
    /// pointwise stabilizer of `prefix[..len-1]` and `prefix` ends with
    /// `point`. Cached by prefix.
    pub fn stabilizer_of_prefix(
        &self,
        parent: &Arc<PrefixGroup>,
        prefix: &[u16],
        point: u16,
    ) -> Arc<PrefixGroup> {
        debug_assert_eq!(*prefix.last().unwrap(), point);
        if let Some(hit) = self.cache.read().unwrap().get(prefix) {
            return Arc::clone(hit);
        }
        let derived = Arc::new(self.derive_stabilizer(parent, point));
        self.cache
            .write()
            .unwrap()
            .entry(prefix.into())
            .or_insert_with(|| Arc::clone(&derived));
        derived
    }

    /// Point stabilizer via Schreier's lemma: BFS the orbit of `point`
    /// under the parent generators, collect the Schreier generators, and
    /// reduce them to a strong generating set with a fresh chain.
    fn derive_stabilizer(&self, parent: &PrefixGroup, point: u16) -> PrefixGroup {
        let n = self.n;
        let mut transversal: Vec<Option<Arc<Perm>>> = vec![None; n];
        transversal[point as usize] = Some(Arc::new(Perm::identity(n)));
        let mut orbit = vec![point];
        let mut head = 0;
        let mut chain = StabChain::trivial(n);
        while head < orbit.len() {
            let y = orbit[head];
            head += 1;
            let u_y = Arc::clone(transversal[y as usize].as_ref().unwrap());
            for s in &parent.gens {
                let z = s.image(y);
                if transversal[z as usize].is_none() {
                    transversal[z as usize] = Some(Arc::new(s.compose(&u_y)));
                    orbit.push(z);
                } else {
                    let u_z = transversal[z as usize].as_ref().unwrap();
                    let schreier = u_z.inverse().compose(s).compose(&u_y);
                    if !schreier.is_identity() {
                        chain.extend(schreier);
                    }
                }
            }
        }
        let order = parent.order / orbit.len() as u64;
        debug_assert_eq!(chain.order(), order, "orbit-stabilizer mismatch");
        PrefixGroup::build(n, order, chain.strong_generators())
    }

    /// Number of cached prefix stabilizers (diagnostics).
    pub fn cached_prefixes(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn perm_basics() {
        let id = Perm::identity(5);
        assert!(id.is_identity());
        let g = Perm::from_images(vec![1, 2, 0, 4, 3]);
        assert_eq!(g.image(0), 1);
        assert_eq!(g.inverse().image(1), 0);
        assert!(g.compose(&g.inverse()).is_identity());
        assert_eq!(g.first_moved(), Some(0));
        let h = Perm::from_images(vec![0, 1, 2, 4, 3]);
        // compose applies the right factor first.
        assert_eq!(g.compose(&h).image(3), 3);
        assert_eq!(h.compose(&g).image(0), 1);
    }

    #[test]
    fn perm_set_action() {
        let g = Perm::from_images(vec![2, 0, 1, 3]);
        let s = PointSet::from_iter([0u16, 3]);
        assert_eq!(g.apply_set(&s).to_vec(), vec![2, 3]);
    }

    #[test]
    fn chain_on_symmetric_group() {
        // <(0 1), (0 1 2 3)> = S4.
        let gens = vec![
            Perm::from_images(vec![1, 0, 2, 3]),
            Perm::from_images(vec![1, 2, 3, 0]),
        ];
        let chain = StabChain::from_generators(4, gens.iter());
        assert_eq!(chain.order(), 24);
        assert!(chain.contains(&Perm::from_images(vec![3, 2, 1, 0])));
    }

    #[test]
    fn pgl_order_formula() {
        assert_eq!(pgl_order(3, 2), 168);
        assert_eq!(pgl_order(3, 3), 5616);
        assert_eq!(pgl_order(4, 3), 12_130_560);
        assert_eq!(pgl_order(5, 3), 237_783_237_120);
        assert_eq!(pgl_order(2, 3), 24);
    }

    #[test]
    fn pgl_chain_orders_match_formula() {
        for (r, q) in [(2usize, 2u32), (2, 3), (3, 3)] {
            let s = Space::new(r, q).unwrap();
            let g = ProjectiveGroup::new(&s);
            assert_eq!(g.order(), pgl_order(r + 1, q), "PG({r},{q})");
        }
    }

    #[test]
    fn pgl_5_3_order() {
        let s = Space::new(4, 3).unwrap();
        let g = ProjectiveGroup::new(&s);
        assert_eq!(g.order(), 237_783_237_120);
    }

    #[test]
    fn membership_of_random_products() {
        let s = Space::new(2, 3).unwrap();
        let gens = pgl_generators(&s);
        let perms: Vec<Perm> = gens.iter().map(|g| g.to_permutation(&s)).collect();
        let chain = StabChain::from_generators(s.n_points(), perms.iter());
        let mut rng = Rng::seeded(9);
        // Random products of generators are members.
        let mut acc = Perm::identity(s.n_points());
        for _ in 0..50 {
            let pick = rng.below(perms.len() as u64) as usize;
            acc = acc.compose(&perms[pick]);
            assert!(chain.contains(&acc));
        }
        // A non-PGL permutation (swap two points sharing no projectivity
        // orbit relation... use an odd transposition) is typically outside.
        let mut images: Vec<u16> = (0..s.n_points() as u16).collect();
        images.swap(0, 1);
        let transposition = Perm::from_images(images);
        assert!(!chain.contains(&transposition));
    }

    #[test]
    fn prefix_stabilizer_orders() {
        // In PG(2,3): |PGL(3,3)| = 5616, point stabilizer has index 13,
        // the stabilizer of two points index 13*12, and so on while the
        // action remains transitive on the remaining points of a frame.
        let s = Space::new(2, 3).unwrap();
        let g = ProjectiveGroup::new(&s);
        let root = g.root();
        assert_eq!(root.order, 5616);
        assert_eq!(root.orbit_min(7), 0, "transitive action");
        let s1 = g.stabilizer_of_prefix(&root, &[0], 0);
        assert_eq!(s1.order, 5616 / 13);
        let s2 = g.stabilizer_of_prefix(&s1, &[0, 1], 1);
        assert_eq!(s2.order, 5616 / (13 * 12));
        assert_eq!(g.cached_prefixes(), 2);
        // Repeat lookups hit the cache.
        let s2b = g.stabilizer_of_prefix(&s1, &[0, 1], 1);
        assert_eq!(s2b.order, s2.order);
        assert_eq!(g.cached_prefixes(), 2);
    }

    #[test]
    fn to_min_maps_to_orbit_minimum() {
        let s = Space::new(2, 3).unwrap();
        let g = ProjectiveGroup::new(&s);
        let root = g.root();
        for p in 0..s.n_points() as u16 {
            assert_eq!(root.to_min(p).image(p), root.orbit_min(p));
        }
        let s1 = g.stabilizer_of_prefix(&root, &[0], 0);
        for p in 0..s.n_points() as u16 {
            let m = s1.orbit_min(p);
            assert_eq!(s1.to_min(p).image(p), m);
            // The stabilizer fixes 0.
            assert_eq!(s1.to_min(p).image(0), 0);
        }
    }
}

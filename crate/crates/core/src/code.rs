//! Linear-code invariants of point sets and structure descriptors for
//! their stabilizers.
//!
//! A point set in PG(r,q) spans a ternary (or q-ary) linear code: the row
//! space of the matrix whose columns are the normalized point coordinates.
//! [`weight_distribution`] histograms the nonzero codewords of that code
//! by Hamming weight. The zero word is excluded; for a spanning set the
//! code has dimension r + 1 and the counts sum to q^(r+1) - 1.
//!
//! [`group_descriptor`] summarizes a projectivity group given by
//! generators: order, abelianness, the element-order multiset, and named
//! identification of small cyclic / Klein / dihedral patterns. Anything
//! beyond that (full abstract-group identification) is out of scope.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::group::Perm;
use crate::pointset::PointSet;
use crate::projectivity::Projectivity;

/// Histogram of nonzero-codeword weights, sorted by weight.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WeightDistribution {
    pub pairs: Vec<(u16, u64)>,
}

impl WeightDistribution {
    /// Total number of nonzero codewords: q^rank - 1.
    pub fn total(&self) -> u64 {
        self.pairs.iter().map(|&(_, c)| c).sum()
    }

    /// Smallest nonzero weight (the minimum distance of the code).
    pub fn min_weight(&self) -> Option<u16> {
        self.pairs.first().map(|&(w, _)| w)
    }
}

impl fmt::Display for WeightDistribution {
    /// Bracket notation: `[<6,132>,<9,110>]`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "[")?;
        for (i, (w, c)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(out, ",")?;
            }
            write!(out, "<{w},{c}>")?;
        }
        write!(out, "]")
    }
}

impl FromStr for WeightDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<WeightDistribution> {
        let msg = |m: &str| Error::Parse {
            line: 0,
            msg: m.to_string(),
        };
        let body = s.trim();
        let body = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| msg("weight distribution must be enclosed in [ ]"))?;
        let mut pairs = Vec::new();
        let mut rest = body.trim();
        while !rest.is_empty() {
            let rest2 = rest.strip_prefix(',').map(str::trim_start).unwrap_or(rest);
            let inner = rest2
                .strip_prefix('<')
                .ok_or_else(|| msg("expected <weight,count>"))?;
            let end = inner
                .find('>')
                .ok_or_else(|| msg("unterminated <weight,count>"))?;
            let (w, c) = inner[..end]
                .split_once(',')
                .ok_or_else(|| msg("expected comma inside < >"))?;
            let w: u16 = w.trim().parse().map_err(|_| msg("bad weight"))?;
            let c: u64 = c.trim().parse().map_err(|_| msg("bad count"))?;
            pairs.push((w, c));
            rest = inner[end + 1..].trim_start();
        }
        if !pairs.windows(2).all(|p| p[0].0 < p[1].0) {
            return Err(msg("weights must be strictly increasing"));
        }
        Ok(WeightDistribution { pairs })
    }
}

/// Weight distribution of the code generated by the set's coordinate
/// matrix (columns = points in index order): every nonzero codeword of
/// the row space, bucketed by Hamming weight.
pub fn weight_distribution(space: &Space, set: &PointSet) -> WeightDistribution {
    let f = space.field();
    let q = f.order() as u64;
    let n = set.len();
    if n == 0 {
        return WeightDistribution { pairs: Vec::new() };
    }
    let mut m = space.matrix_of(set);
    let rank = m.row_reduce(f);
    let basis: Vec<&[u8]> = (0..rank).map(|i| m.row(i)).collect();

    let mut hist: HashMap<u16, u64> = HashMap::new();
    let mut msg = vec![0u8; rank];
    let mut word = vec![0u8; n];
    // Odometer over message vectors; each step changes one digit by +1
    // (with rollovers), so the codeword is updated incrementally.
    let total = q.pow(rank as u32);
    for _ in 1..total {
        let mut pos = rank;
        loop {
            pos -= 1;
            // Adding one more copy of basis row `pos` to the running word
            // realizes both the +1 step and, on rollover, the wrap from
            // q-1 back to 0 (q copies sum to zero).
            for (wj, bj) in word.iter_mut().zip(basis[pos]) {
                *wj = f.add(*wj, *bj);
            }
            if msg[pos] as u64 + 1 < q {
                msg[pos] += 1;
                break;
            }
            msg[pos] = 0;
        }
        let weight = word.iter().filter(|&&x| x != 0).count() as u16;
        *hist.entry(weight).or_insert(0) += 1;
    }

    let mut pairs: Vec<(u16, u64)> = hist.into_iter().collect();
    pairs.sort_unstable();
    WeightDistribution { pairs }
}

/// Structure summary of a projectivity group.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GroupDescriptor {
    pub order: u64,
    pub abelian: bool,
    /// Sorted (element order, multiplicity) pairs, identity included.
    pub element_orders: Vec<(u32, u64)>,
    /// Whether the group matches a dihedral presentation
    /// ⟨a,s | a^m = s^2 = 1, s a s = a^-1⟩ of order 2m, m ≥ 2. The
    /// degenerate case m = 2 is the Klein four-group.
    pub dihedral: bool,
    /// Named identification when the order is at most 16 and a cyclic,
    /// Klein, or dihedral pattern matches.
    pub name: Option<String>,
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "order {}, {}",
            self.order,
            if self.abelian {
                "abelian"
            } else {
                "non-abelian"
            }
        )?;
        if let Some(name) = &self.name {
            write!(out, " ({name})")?;
        }
        Ok(())
    }
}

/// Computes the structure summary of the group generated by the given
/// projectivities, working with their faithful permutation action on the
/// whole space. The input may be any generating collection; the closure
/// is formed internally.
pub fn group_descriptor(space: &Space, generators: &[Projectivity]) -> GroupDescriptor {
    // Callers may hand over every element of the group (a stabilizer
    // enumeration does), so first thin the input to a small generating
    // set, closing incrementally: a generator is kept only if it falls
    // outside the subgroup generated so far. Closure work then stays
    // near |G| times the number of kept generators.
    let id = Perm::identity(space.n_points());
    let mut elements: Vec<Perm> = vec![id.clone()];
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    seen.insert(id, ());
    let mut small_gens: Vec<Perm> = Vec::new();
    for g in generators {
        let g = g.to_permutation(space);
        if seen.contains_key(&g) {
            continue;
        }
        small_gens.push(g);
        // Re-close the element list under the enlarged generating set.
        let mut frontier = 0;
        while frontier < elements.len() {
            let cur = elements[frontier].clone();
            frontier += 1;
            for h in &small_gens {
                let next = h.compose(&cur);
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), ());
                    elements.push(next);
                }
            }
        }
    }
    let order = elements.len() as u64;

    // The group is abelian iff its generators pairwise commute.
    let abelian = small_gens.iter().enumerate().all(|(i, g)| {
        small_gens[i + 1..]
            .iter()
            .all(|h| g.compose(h) == h.compose(g))
    });

    let orders: Vec<u32> = elements.iter().map(perm_order).collect();
    let mut order_hist: HashMap<u32, u64> = HashMap::new();
    for &o in &orders {
        *order_hist.entry(o).or_insert(0) += 1;
    }
    let mut element_orders: Vec<(u32, u64)> = order_hist.into_iter().collect();
    element_orders.sort_unstable();

    let dihedral = is_dihedral(&elements, &orders);

    let name = if order <= 16 {
        if order == 1 {
            Some("trivial".to_string())
        } else if orders.iter().any(|&o| o as u64 == order) {
            Some(format!("cyclic of order {order}"))
        } else if order == 4 && orders.iter().all(|&o| o <= 2) {
            Some("Klein four-group".to_string())
        } else if dihedral {
            Some(format!("dihedral of order {order}"))
        } else {
            None
        }
    } else {
        None
    };

    GroupDescriptor {
        order,
        abelian,
        element_orders,
        dihedral,
        name,
    }
}

/// Order of a permutation: lcm of its cycle lengths.
fn perm_order(p: &Perm) -> u32 {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut l: u64 = 1;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut x = start as u16;
        loop {
            seen[x as usize] = true;
            len += 1;
            x = p.image(x);
            if x as usize == start {
                break;
            }
        }
        l = l / gcd(l, len) * len;
    }
    l as u32
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Tests for a dihedral presentation: an element a of order n/2 and an
/// involution s outside ⟨a⟩ with s a s⁻¹ = a⁻¹.
fn is_dihedral(elements: &[Perm], orders: &[u32]) -> bool {
    let n = elements.len() as u64;
    if n < 4 || n % 2 != 0 {
        return false;
    }
    let m = (n / 2) as u32;
    for (i, a) in elements.iter().enumerate() {
        if orders[i] != m {
            continue;
        }
        // ⟨a⟩ as an explicit set.
        let mut cyc = Vec::with_capacity(m as usize);
        let mut p = Perm::identity(a.degree());
        for _ in 0..m {
            cyc.push(p.clone());
            p = a.compose(&p);
        }
        let a_inv = a.inverse();
        for (j, s) in elements.iter().enumerate() {
            if orders[j] != 2 || cyc.contains(s) {
                continue;
            }
            let conj = s.compose(&a.compose(&s.inverse()));
            if conj == a_inv {
                return true;
            }
        }
    }
    false
}

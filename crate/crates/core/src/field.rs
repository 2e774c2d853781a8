//! Arithmetic in the prime field GF(q).
//!
//! Field elements are residues 0..q stored as `u8`. All operations take the
//! modulus from a [`PrimeField`] value so the same code serves every
//! supported q. Intermediate products are widened to `u16`, which is safe
//! for q <= 251.

use crate::error::{Error, Result};

/// A prime field GF(q) with a precomputed inverse table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    q: u8,
    inv: Vec<u8>,
}

impl PrimeField {
    /// Builds GF(q). Fails if q is not prime or does not fit in a byte.
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 || q > 251 || !is_prime(q) {
            return Err(Error::NonPrimeOrder(q));
        }
        let q = q as u8;
        let mut inv = vec![0u8; q as usize];
        for a in 1..q {
            for b in 1..q {
                if (a as u16 * b as u16) % q as u16 == 1 {
                    inv[a as usize] = b;
                    break;
                }
            }
        }
        Ok(PrimeField { q, inv })
    }

    pub fn order(&self) -> u8 {
        self.q
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        let s = a as u16 + b as u16;
        (s % self.q as u16) as u8
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        let s = a as u16 + self.q as u16 - b as u16;
        (s % self.q as u16) as u8
    }

    pub fn neg(&self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0 && a < self.q);
        self.inv[a as usize]
    }

    pub fn div(&self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }

    /// A generator of the multiplicative group (smallest primitive root).
    pub fn primitive_root(&self) -> u8 {
        if self.q == 2 {
            return 1;
        }
        'outer: for g in 2..self.q {
            let mut x = g;
            let mut ord = 1u32;
            while x != 1 {
                x = self.mul(x, g);
                ord += 1;
            }
            if ord == self.q as u32 - 1 {
                return g;
            }
            continue 'outer;
        }
        unreachable!("every prime field has a primitive root")
    }

    /// Checks that a value is a valid residue.
    pub fn check(&self, a: u32) -> Result<u8> {
        if a < self.q as u32 {
            Ok(a as u8)
        } else {
            Err(Error::BadCoordinateValue(a, self.q as u32))
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_primes() {
        for q in [0u32, 1, 4, 6, 8, 9, 256, 1000] {
            assert!(PrimeField::new(q).is_err(), "q = {q} accepted");
        }
    }

    #[test]
    fn gf3_tables() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.add(2, 2), 1);
        assert_eq!(f.sub(0, 1), 2);
        assert_eq!(f.mul(2, 2), 1);
        assert_eq!(f.inv(2), 2);
        assert_eq!(f.neg(1), 2);
        assert_eq!(f.primitive_root(), 2);
    }

    #[test]
    fn inverses_over_sample_fields() {
        for q in [2u32, 3, 5, 7, 11, 13, 251] {
            let f = PrimeField::new(q).unwrap();
            for a in 1..f.order() {
                assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn primitive_root_generates() {
        for q in [3u32, 5, 7, 11, 13] {
            let f = PrimeField::new(q).unwrap();
            let g = f.primitive_root();
            let mut seen = vec![false; q as usize];
            let mut x = 1u8;
            for _ in 0..q - 1 {
                x = f.mul(x, g);
                seen[x as usize] = true;
            }
            assert!((1..q as usize).all(|i| seen[i]), "q={q}");
        }
    }
}

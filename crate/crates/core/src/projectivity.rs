//! Projectivities of PG(r,q): invertible (r+1)x(r+1) matrices modulo
//! scalars, i.e. elements of PGL(r+1,q).
//!
//! A projectivity is stored as the unique scalar multiple of its matrix
//! whose first nonzero entry (scanning row-major) equals 1, so equality and
//! hashing of [`Projectivity`] values mean equality in PGL. Acting on a
//! point applies the matrix to the coordinate vector and renormalizes.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::geometry::Space;
use crate::group::Perm;
use crate::matrix::Mat;
use crate::pointset::PointSet;
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Projectivity {
    mat: Mat,
}

impl Projectivity {
    /// Wraps a matrix; fails if it is singular.
    pub fn new(mat: Mat, f: &PrimeField) -> Result<Projectivity> {
        debug_assert_eq!(mat.rows(), mat.cols());
        if mat.rank(f) < mat.rows() {
            return Err(Error::SingularMatrix);
        }
        Ok(Projectivity {
            mat: scalar_normalize(mat, f),
        })
    }

    pub fn identity(dim: usize) -> Projectivity {
        Projectivity {
            mat: Mat::identity(dim),
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Image of a point index.
    pub fn apply_point(&self, space: &Space, p: u16) -> u16 {
        let v = self.mat.apply(space.point(p), space.field());
        space.index_of(&v).expect("projectivity image is nonzero")
    }

    /// Image of a point set.
    pub fn apply_set(&self, space: &Space, set: &PointSet) -> PointSet {
        set.iter().map(|p| self.apply_point(space, p)).collect()
    }

    /// Composition: (self.compose(other)) acts as other first, then self.
    pub fn compose(&self, other: &Projectivity, f: &PrimeField) -> Projectivity {
        Projectivity {
            mat: scalar_normalize(self.mat.mul(&other.mat, f), f),
        }
    }

    pub fn inverse(&self, f: &PrimeField) -> Projectivity {
        let inv = self.mat.inverse(f).expect("projectivity is invertible");
        Projectivity {
            mat: scalar_normalize(inv, f),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mat == Mat::identity(self.dim())
    }

    /// Order as a projective transformation: the least k >= 1 with M^k a
    /// scalar matrix.
    pub fn projective_order(&self, f: &PrimeField) -> u32 {
        let id = Projectivity::identity(self.dim());
        let mut acc = self.clone();
        let mut k = 1;
        while acc != id {
            acc = acc.compose(self, f);
            k += 1;
            debug_assert!(k < 1 << 20, "order computation runaway");
        }
        k
    }

    /// The permutation this projectivity induces on point indices.
    pub fn to_permutation(&self, space: &Space) -> Perm {
        Perm::from_images(
            (0..space.n_points() as u16)
                .map(|p| self.apply_point(space, p))
                .collect(),
        )
    }

    /// A uniformly-ish random projectivity (rejection sampling on the
    /// matrix entries until invertible).
    pub fn random(space: &Space, rng: &mut Rng) -> Projectivity {
        let dim = space.dim();
        let q = space.q() as u64;
        loop {
            let mut m = Mat::zero(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] = rng.below(q) as u8;
                }
            }
            if let Ok(p) = Projectivity::new(m, space.field()) {
                return p;
            }
        }
    }
}

/// Scales a nonzero matrix so its first nonzero entry (row-major) is 1.
fn scalar_normalize(mut m: Mat, f: &PrimeField) -> Mat {
    'find: for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m[(i, j)];
            if v != 0 {
                if v != 1 {
                    let inv = f.inv(v);
                    for row in 0..m.rows() {
                        m.scale_row(row, inv, f);
                    }
                }
                break 'find;
            }
        }
    }
    m
}

impl std::fmt::Display for Projectivity {
    /// One line per row, entries as digits separated by spaces.
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.mat.rows() {
            if i > 0 {
                writeln!(out)?;
            }
            for j in 0..self.mat.cols() {
                if j > 0 {
                    write!(out, " ")?;
                }
                write!(out, "{}", self.mat[(i, j)])?;
            }
        }
        Ok(())
    }
}

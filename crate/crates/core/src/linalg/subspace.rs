use num_traits::{One, Zero};

use super::echelon::{integer_row, Echelon};
use super::{Rational, SparseMatrix};
use crate::error::{Error, Result};

/// A linear subspace of `ℚ^n`, stored as its reduced row echelon basis.
///
/// The basis is canonical: two subspaces are equal exactly when their bases are
/// identical, whatever spanning set they were built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| unit(ambient_dim, i)).collect();
        Self { ambient_dim, basis }
    }

    /// Span of arbitrary vectors of length `ambient_dim`.
    pub fn from_spanning<I>(ambient_dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: AsRef<[Rational]>,
    {
        let mut echelon = Echelon::new(ambient_dim);
        for v in vectors {
            let v = v.as_ref();
            if v.len() != ambient_dim {
                return Err(Error::Contract(format!(
                    "vector of length {} in a space of dimension {ambient_dim}",
                    v.len()
                )));
            }
            echelon.insert(integer_row(v.iter().enumerate()));
        }
        Ok(Self::from_echelon(ambient_dim, echelon))
    }

    /// Span of the rows of a sparse matrix.
    pub fn row_space(m: &SparseMatrix) -> Self {
        let mut echelon = Echelon::new(m.cols());
        for row in m.row_lists() {
            if !row.is_empty() {
                echelon.insert(integer_row(row));
            }
        }
        Self::from_echelon(m.cols(), echelon)
    }

    pub(crate) fn from_echelon(ambient_dim: usize, echelon: Echelon) -> Self {
        let basis = echelon
            .into_rref()
            .into_iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); ambient_dim];
                for (c, v) in row {
                    dense[c] = v;
                }
                dense
            })
            .collect();
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Pivot column of every basis vector, strictly increasing.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|v| v.iter().position(|x| !x.is_zero()).unwrap())
            .collect()
    }

    /// Basis vectors as the rows of a sparse matrix.
    pub fn basis_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_dense(&self.basis)
            .unwrap_or_else(|_| unreachable!("basis rows share the ambient dimension"))
            .padded(self.basis.len(), self.ambient_dim)
    }

    /// Remainder of `v` after eliminating every pivot coordinate of this subspace.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(v.len())?;
        let mut out = v.to_vec();
        for (row, pivot) in self.basis.iter().zip(self.pivots()) {
            if out[pivot].is_zero() {
                continue;
            }
            let factor = out[pivot].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o -= &factor * r;
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(Zero::is_zero))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_same_ambient(other)?;
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical complement of `part` inside `self`: the vectors of `self`
    /// vanishing on every pivot coordinate of `part`.
    pub fn complement_of(&self, part: &Subspace) -> Result<Subspace> {
        if !part.is_subspace_of(self)? {
            return Err(Error::Contract("complement of a non-subspace".into()));
        }
        let reduced = self
            .basis
            .iter()
            .map(|v| part.reduce(v))
            .collect::<Result<Vec<_>>>()?;
        Subspace::from_spanning(self.ambient_dim, reduced)
    }

    /// `self ∩ other`, via the kernel of the stacked annihilators.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let a = self.annihilator();
        let b = other.annihilator();
        Ok(super::kernel_basis(&a.vstack(&b)?))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Subspace::from_spanning(
            self.ambient_dim,
            self.basis.iter().chain(other.basis.iter()),
        )
    }

    /// A matrix whose kernel is exactly this subspace.
    pub fn annihilator(&self) -> SparseMatrix {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        // Rows span the null space of the basis matrix: one per free column.
        let mut triplets = Vec::new();
        let mut r = 0;
        for f in 0..self.ambient_dim {
            if is_pivot[f] {
                continue;
            }
            triplets.push((r, f, Rational::one()));
            for (row, &p) in self.basis.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    triplets.push((r, p, -row[f].clone()));
                }
            }
            r += 1;
        }
        SparseMatrix::from_triplets(r, self.ambient_dim, triplets)
            .unwrap_or_else(|_| unreachable!("indices come from the basis"))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.ambient_dim {
            return Err(Error::Contract(format!(
                "vector of length {len} in a space of dimension {}",
                self.ambient_dim
            )));
        }
        Ok(())
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::Contract(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

impl SparseMatrix {
    fn padded(self, rows: usize, cols: usize) -> SparseMatrix {
        if self.rows() == rows && self.cols() == cols {
            return self;
        }
        SparseMatrix::from_triplets(rows, cols, self.entries().iter().cloned())
            .unwrap_or_else(|_| unreachable!("padding only grows the shape"))
    }
}

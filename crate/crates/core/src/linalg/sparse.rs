use num_traits::Zero;

use super::Rational;
use crate::error::{Error, Result};

/// Coordinate-format rational matrix. Entries are sorted by `(row, col)`, hold
/// no duplicates and no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Rational)>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            entries: (0..n)
                .map(|i| (i, i, Rational::from_integer(1.into())))
                .collect(),
        }
    }

    /// Builds a matrix from unordered triplets; duplicate positions are summed
    /// and zeros dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Contract(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            entries.push((r, c, v));
        }
        entries.sort_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, Rational)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| !e.2.is_zero());
        Ok(Self {
            rows,
            cols,
            entries: merged,
        })
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        Self::from_triplets(
            rows,
            cols,
            triplets
                .into_iter()
                .map(|(r, c, v)| (r, c, Rational::from_integer(v.into()))),
        )
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Contract("ragged dense matrix".into()));
        }
        Self::from_triplets(
            rows.len(),
            cols,
            rows.iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries
            .binary_search_by_key(&(row, col), |e| (e.0, e.1))
            .map(|i| self.entries[i].2.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Rows as sparse `(col, value)` lists; empty rows are included.
    pub fn row_lists(&self) -> Vec<Vec<(usize, &Rational)>> {
        let mut out: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c, v));
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        entries.sort_by_key(|e| (e.0, e.1));
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::Contract(format!(
                "vector of length {} applied to a matrix with {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (r, c, v) in &self.entries {
            if !x[*c].is_zero() {
                out[*r] += v * &x[*c];
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Contract(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rhs_rows = other.row_lists();
        let mut triplets = Vec::new();
        for (r, k, v) in &self.entries {
            for (c, w) in &rhs_rows[*k] {
                triplets.push((*r, *c, v * *w));
            }
        }
        Self::from_triplets(self.rows, other.cols, triplets)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.cols {
            return Err(Error::Contract(format!(
                "cannot stack matrices with {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(
            other
                .entries
                .iter()
                .map(|(r, c, v)| (r + self.rows, *c, v.clone())),
        );
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Keeps the listed columns, renumbered in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> SparseMatrix {
        let mut map = vec![None; self.cols];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = Some(new);
        }
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .filter_map(|(r, c, v)| map[*c].map(|nc| (*r, nc, v.clone())))
            .collect();
        entries.sort_by_key(|e| (e.0, e.1));
        Self {
            rows: self.rows,
            cols: keep.len(),
            entries,
        }
    }
}

//! Exact linear algebra over `ℚ`.
//!
//! Every character space, kernel, image and quotient in the crate is computed
//! here. Elimination is fraction-free on integer rows and only the final basis
//! is scaled to reduced row echelon form, so results do not depend on the order
//! rows are fed in.

mod echelon;
mod sparse;
mod subspace;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use echelon::{integer_row, Echelon};

pub use sparse::SparseMatrix;
pub(crate) use subspace::unit as unit_vector;
pub use subspace::Subspace;

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

fn echelon_of_rows(m: &SparseMatrix) -> Echelon {
    let mut echelon = Echelon::new(m.cols());
    for row in m.row_lists() {
        if !row.is_empty() {
            echelon.insert(integer_row(row));
        }
    }
    echelon
}

/// Solution space of `m·x = 0`.
pub fn kernel_basis(m: &SparseMatrix) -> Subspace {
    let cols = m.cols();
    let rref = echelon_of_rows(m).into_rref();
    let mut is_pivot = vec![false; cols];
    for row in &rref {
        is_pivot[row[0].0] = true;
    }
    // Column f of the RREF, read off per pivot row.
    let mut column_entries: Vec<Vec<(usize, &Rational)>> = vec![Vec::new(); cols];
    for row in &rref {
        let pivot = row[0].0;
        for (c, v) in &row[1..] {
            column_entries[*c].push((pivot, v));
        }
    }
    let vectors = (0..cols).filter(|&f| !is_pivot[f]).map(|f| {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (pivot, value) in &column_entries[f] {
            v[*pivot] = -(*value).clone();
        }
        v
    });
    Subspace::from_spanning(cols, vectors).unwrap_or_else(|_| unreachable!("lengths match"))
}

/// Column space of `m`, in `ℚ^rows`.
pub fn image_basis(m: &SparseMatrix) -> Subspace {
    Subspace::row_space(&m.transpose())
}

/// `rank(m)`.
pub fn rank(m: &SparseMatrix) -> usize {
    echelon_of_rows(m).rank()
}

/// Image of a subspace under `m` (a matrix acting on column vectors).
pub fn image_of(m: &SparseMatrix, space: &Subspace) -> Result<Subspace> {
    if m.cols() != space.ambient_dim() {
        return Err(Error::Contract(format!(
            "map with {} columns applied to a subspace of dimension {}",
            m.cols(),
            space.ambient_dim()
        )));
    }
    let images = space
        .basis()
        .iter()
        .map(|v| m.mul_vec(v))
        .collect::<Result<Vec<_>>>()?;
    Subspace::from_spanning(m.rows(), images)
}

pub fn subspace_equal(a: &Subspace, b: &Subspace) -> Result<bool> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::Contract(format!(
            "ambient dimensions differ: {} vs {}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    Ok(a == b)
}

/// `dim(whole) − dim(part)`, after checking `part ⊆ whole`.
pub fn quotient_dim(whole: &Subspace, part: &Subspace) -> Result<usize> {
    if !part.is_subspace_of(whole)? {
        return Err(Error::Contract(
            "quotient by a subspace that is not contained".into(),
        ));
    }
    Ok(whole.dim() - part.dim())
}

/// Some `x` with `m·x = rhs`, or `None`. Free variables are set to zero.
pub fn solve(m: &SparseMatrix, rhs: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if rhs.len() != m.rows() {
        return Err(Error::Contract(format!(
            "right-hand side of length {} for a matrix with {} rows",
            rhs.len(),
            m.rows()
        )));
    }
    let cols = m.cols();
    let mut echelon = Echelon::new(cols + 1);
    for (r, row) in m.row_lists().into_iter().enumerate() {
        let mut entries = row;
        if !rhs[r].is_zero() {
            entries.push((cols, &rhs[r]));
        }
        if !entries.is_empty() {
            echelon.insert(integer_row(entries));
        }
    }
    if echelon.is_pivot(cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); cols];
    for row in echelon.into_rref() {
        if let Some((_, v)) = row.iter().find(|(c, _)| *c == cols) {
            x[row[0].0] = v.clone();
        }
    }
    Ok(Some(x))
}

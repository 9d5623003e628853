//! Incremental fraction-free Gauss-Jordan elimination on sparse integer rows.
//!
//! Rows are kept primitive (content 1) with a positive leading coefficient and
//! fully reduced against each other, so every stored row is zero in every other
//! row's pivot column. Scaling to a unit pivot happens once, in [`Echelon::into_rref`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Sparse integer row: strictly increasing column indices, no zero entries.
pub(crate) type IntRow = Vec<(usize, BigInt)>;

pub(crate) struct Echelon {
    ncols: usize,
    rows: Vec<IntRow>,
    pivot_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub(crate) fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivot_of_col: vec![None; ncols],
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col[col].is_some()
    }

    /// Reduces `row` modulo the stored rows. The result is zero in every pivot
    /// column and is normalized (primitive, positive leading coefficient).
    pub(crate) fn reduce(&self, mut row: IntRow) -> IntRow {
        debug_assert!(row.iter().all(|(c, _)| *c < self.ncols));
        let pivot_cols: Vec<usize> = row
            .iter()
            .filter(|(c, _)| self.pivot_of_col[*c].is_some())
            .map(|(c, _)| *c)
            .collect();
        // Stored rows vanish on foreign pivot columns, so eliminating one pivot
        // never disturbs the coefficient of another.
        for col in pivot_cols {
            let Ok(pos) = row.binary_search_by_key(&col, |e| e.0) else {
                continue;
            };
            let coeff = row[pos].1.clone();
            let pivot = &self.rows[self.pivot_of_col[col].unwrap()];
            let lead = &pivot[0].1;
            let g = lead.gcd(&coeff);
            row = combine(&(lead / &g), &row, &(&coeff / &g), pivot);
        }
        normalize(&mut row);
        row
    }

    /// Inserts a row; returns `true` when it increased the rank.
    pub(crate) fn insert(&mut self, row: IntRow) -> bool {
        let row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        let lead_col = row[0].0;
        let lead = row[0].1.clone();
        for stored in self.rows.iter_mut() {
            if let Ok(pos) = stored.binary_search_by_key(&lead_col, |e| e.0) {
                let coeff = stored[pos].1.clone();
                let g = lead.gcd(&coeff);
                *stored = combine(&(&lead / &g), stored, &(&coeff / &g), &row);
                normalize(stored);
            }
        }
        self.pivot_of_col[lead_col] = Some(self.rows.len());
        self.rows.push(row);
        true
    }

    /// Reduced row echelon form, rows sorted by pivot column, each pivot equal to 1.
    pub(crate) fn into_rref(mut self) -> Vec<Vec<(usize, Rational)>> {
        self.rows.sort_by_key(|r| r[0].0);
        self.rows
            .into_iter()
            .map(|row| {
                let lead = row[0].1.clone();
                row.into_iter()
                    .map(|(c, v)| (c, Rational::new(v, lead.clone())))
                    .collect()
            })
            .collect()
    }
}

/// `a·x − b·y` on sparse rows.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Clears denominators of a sparse rational row.
pub(crate) fn integer_row<'a>(entries: impl IntoIterator<Item = (usize, &'a Rational)>) -> IntRow {
    let entries: Vec<(usize, &Rational)> =
        entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    let mut lcm = BigInt::one();
    for (_, v) in &entries {
        lcm = lcm.lcm(v.denom());
    }
    entries
        .into_iter()
        .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect()
}

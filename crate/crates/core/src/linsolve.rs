//! Exact fraction-free solver for sparse rational linear systems.
//!
//! Rows are scaled to integers, reduced by their content, and eliminated
//! with cross-multiplication updates (`pivot * row - coeff * pivot_row`)
//! followed by a gcd reduction, so no fractions appear during elimination.
//! Back substitution then runs over the rationals with free variables
//! pinned to zero, returning one solution of an underdetermined system.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polyring::Rat;

/// One equation `sum coeffs[col] * x_col = rhs` with sparse coefficients.
#[derive(Debug, Clone)]
pub(crate) struct SparseRow {
    /// Sorted by column index, no zero coefficients.
    pub cols: Vec<(usize, BigInt)>,
    pub rhs: BigInt,
}

impl SparseRow {
    /// Builds an integer row from rational terms by clearing denominators
    /// and dividing out the content.
    pub fn from_rational(terms: &HashMap<usize, Rat>, rhs: &Rat) -> SparseRow {
        let mut lcm = BigInt::one();
        for c in terms.values().chain(std::iter::once(rhs)) {
            lcm = lcm.lcm(c.denom());
        }
        let mut cols: Vec<(usize, BigInt)> = terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&col, c)| (col, c.numer() * (&lcm / c.denom())))
            .collect();
        cols.sort_by_key(|&(col, _)| col);
        let rhs = rhs.numer() * (&lcm / rhs.denom());
        let mut row = SparseRow { cols, rhs };
        row.reduce();
        row
    }

    fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    fn leading_col(&self) -> Option<usize> {
        self.cols.first().map(|&(col, _)| col)
    }

    fn coeff_of(&self, col: usize) -> Option<&BigInt> {
        self.cols
            .binary_search_by_key(&col, |&(c, _)| c)
            .ok()
            .map(|idx| &self.cols[idx].1)
    }

    /// Divides out the gcd of all entries and normalizes the sign of the
    /// leading coefficient.
    fn reduce(&mut self) {
        let mut g = self.rhs.abs();
        for (_, c) in &self.cols {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if !g.is_zero() && !g.is_one() {
            for (_, c) in &mut self.cols {
                *c = &*c / &g;
            }
            self.rhs = &self.rhs / &g;
        }
        let negative = match self.cols.first() {
            Some((_, c)) => c.is_negative(),
            None => self.rhs.is_negative(),
        };
        if negative {
            for (_, c) in &mut self.cols {
                *c = -&*c;
            }
            self.rhs = -&self.rhs;
        }
    }

    /// `self := pivot_coeff * self - own_coeff * pivot_row`, eliminating
    /// `col` from this row, then content-reduced.
    fn eliminate(&mut self, pivot: &SparseRow, col: usize) {
        let own = match self.coeff_of(col) {
            Some(c) => c.clone(),
            None => return,
        };
        let scale = pivot.coeff_of(col).expect("pivot column present").clone();
        let mut merged: Vec<(usize, BigInt)> =
            Vec::with_capacity(self.cols.len() + pivot.cols.len());
        let (mut i, mut j) = (0, 0);
        while i < self.cols.len() || j < pivot.cols.len() {
            let next = match (self.cols.get(i), pivot.cols.get(j)) {
                (Some(&(ca, _)), Some(&(cb, _))) if ca == cb => {
                    let v = &self.cols[i].1 * &scale - &pivot.cols[j].1 * &own;
                    i += 1;
                    j += 1;
                    (ca, v)
                }
                (Some(&(ca, _)), Some(&(cb, _))) if ca < cb => {
                    let v = &self.cols[i].1 * &scale;
                    i += 1;
                    (ca, v)
                }
                (Some(_), Some(&(cb, _))) => {
                    let v = -(&pivot.cols[j].1 * &own);
                    j += 1;
                    (cb, v)
                }
                (Some(&(ca, _)), None) => {
                    let v = &self.cols[i].1 * &scale;
                    i += 1;
                    (ca, v)
                }
                (None, Some(&(cb, _))) => {
                    let v = -(&pivot.cols[j].1 * &own);
                    j += 1;
                    (cb, v)
                }
                (None, None) => unreachable!(),
            };
            if !next.1.is_zero() {
                merged.push(next);
            }
        }
        self.cols = merged;
        self.rhs = &self.rhs * &scale - &pivot.rhs * &own;
        self.reduce();
    }
}

/// Solves the sparse system, returning one exact solution vector of length
/// `ncols`, or `None` when the system is inconsistent. Free variables are
/// set to zero.
pub(crate) fn solve(mut rows: Vec<SparseRow>, ncols: usize) -> Option<Vec<Rat>> {
    // Deduplicate after normalization; identical equations are common here.
    rows.sort_by(|a, b| a.cols.cmp(&b.cols).then_with(|| a.rhs.cmp(&b.rhs)));
    rows.dedup_by(|a, b| a.cols == b.cols && a.rhs == b.rhs);

    let mut pivots: Vec<(usize, SparseRow)> = Vec::new();
    let mut active: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();

    // Each pivot column is the smallest leading column still present, and
    // among its candidate rows the sparsest one wins.
    while let Some(col) = active.iter().filter_map(SparseRow::leading_col).min() {
        let pick = active
            .iter()
            .enumerate()
            .filter(|(_, r)| r.leading_col() == Some(col))
            .min_by_key(|(_, r)| r.cols.len())
            .map(|(idx, _)| idx)
            .expect("candidate row exists");
        let pivot = active.swap_remove(pick);
        for row in &mut active {
            row.eliminate(&pivot, col);
        }
        active.retain(|r| !r.is_empty() || !r.rhs.is_zero());
        pivots.push((col, pivot));
    }

    // Remaining rows have no coefficients; a nonzero rhs is a contradiction.
    if active.iter().any(|r| !r.rhs.is_zero()) {
        return None;
    }

    let mut solution = vec![Rat::zero(); ncols];
    for (col, row) in pivots.iter().rev() {
        let mut acc = Rat::from_integer(row.rhs.clone());
        let mut lead = BigInt::zero();
        for (c, v) in &row.cols {
            if c == col {
                lead = v.clone();
            } else {
                acc -= Rat::from_integer(v.clone()) * &solution[*c];
            }
        }
        solution[*col] = acc / Rat::from_integer(lead);
    }
    Some(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat_int;

    fn row(coeffs: &[(usize, i64)], rhs: i64) -> SparseRow {
        let terms: HashMap<usize, Rat> = coeffs
            .iter()
            .map(|&(c, v)| (c, rat_int(v)))
            .collect();
        SparseRow::from_rational(&terms, &rat_int(rhs))
    }

    #[test]
    fn solves_unique_system() {
        // x + y = 3, x - y = 1 -> x = 2, y = 1.
        let rows = vec![row(&[(0, 1), (1, 1)], 3), row(&[(0, 1), (1, -1)], 1)];
        let sol = solve(rows, 2).unwrap();
        assert_eq!(sol, vec![rat_int(2), rat_int(1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let rows = vec![row(&[(0, 1)], 1), row(&[(0, 2)], 3)];
        assert!(solve(rows, 1).is_none());
    }

    #[test]
    fn underdetermined_pins_free_variables() {
        // x + y = 5 with y free -> y = 0, x = 5.
        let rows = vec![row(&[(0, 1), (1, 1)], 5)];
        let sol = solve(rows, 2).unwrap();
        assert_eq!(sol, vec![rat_int(5), rat_int(0)]);
    }

    #[test]
    fn rational_rows_are_cleared() {
        // x/2 + y/3 = 1, y = 3 -> x = 0... solve: x/2 = 1 - 1 = 0.
        let terms: HashMap<usize, Rat> = [
            (0, crate::polyring::rat(1, 2)),
            (1, crate::polyring::rat(1, 3)),
        ]
        .into_iter()
        .collect();
        let r0 = SparseRow::from_rational(&terms, &rat_int(1));
        let rows = vec![r0, row(&[(1, 1)], 3)];
        let sol = solve(rows, 2).unwrap();
        assert_eq!(sol, vec![rat_int(0), rat_int(3)]);
    }
}

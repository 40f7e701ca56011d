//! Small exact linear algebra helper: repeated solves against a fixed set of
//! columns, used to express ambient cyclotomic elements in a subfield basis.

use num_rational::BigRational;
use num_traits::Zero;

/// Precomputed Gauss-Jordan data for the column space of a fixed matrix.
#[derive(Debug, Clone)]
pub(crate) struct LinSolver {
    /// Row-transform matrix T with T*A in reduced row echelon form.
    transform: Vec<Vec<BigRational>>,
    /// For each column of A, the row of T*A holding its pivot.
    pivot_rows: Vec<usize>,
    nrows: usize,
}

impl LinSolver {
    /// Columns must be linearly independent.
    pub fn new(cols: &[Vec<BigRational>]) -> Self {
        let ncols = cols.len();
        let nrows = cols[0].len();
        let mut a: Vec<Vec<BigRational>> = (0..nrows)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let mut t: Vec<Vec<BigRational>> = (0..nrows)
            .map(|r| {
                let mut row = vec![BigRational::zero(); nrows];
                row[r] = BigRational::from_integer(1.into());
                row
            })
            .collect();
        let mut pivot_rows = Vec::with_capacity(ncols);
        let mut row = 0usize;
        for col in 0..ncols {
            let pr = (row..nrows)
                .find(|&r| !a[r][col].is_zero())
                .expect("columns must be linearly independent");
            a.swap(row, pr);
            t.swap(row, pr);
            let inv = a[row][col].recip();
            for x in a[row].iter_mut() {
                *x = &*x * &inv;
            }
            for x in t[row].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..nrows {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c2 in 0..ncols {
                        let v = &f * &a[row][c2];
                        a[r][c2] -= v;
                    }
                    for c2 in 0..nrows {
                        let v = &f * &t[row][c2];
                        t[r][c2] -= v;
                    }
                }
            }
            pivot_rows.push(row);
            row += 1;
        }
        LinSolver { transform: t, pivot_rows, nrows }
    }

    /// Coordinates of rhs in the column space, or None when rhs lies outside.
    pub fn solve(&self, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
        debug_assert_eq!(rhs.len(), self.nrows);
        let y: Vec<BigRational> = self
            .transform
            .iter()
            .map(|row| {
                let mut acc = BigRational::zero();
                for (t, r) in row.iter().zip(rhs) {
                    if !t.is_zero() && !r.is_zero() {
                        acc += t * r;
                    }
                }
                acc
            })
            .collect();
        let rank = self.pivot_rows.len();
        for v in &y[rank..] {
            if !v.is_zero() {
                return None;
            }
        }
        Some(self.pivot_rows.iter().map(|&r| y[r].clone()).collect())
    }
}

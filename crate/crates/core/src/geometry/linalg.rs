//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::rational::Rational;

/// Row-reduces `rows` in place to reduced row echelon form and returns the
/// pivot column of each nonzero row.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Unique solution of the square system `a x = b`, or `None` when singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// A nonzero vector `x` with `a x = 0`, if the kernel is nontrivial.
/// Uses the first free column, so the result is deterministic.
pub fn nullspace_vector(a: &[Vec<Rational>], n_cols: usize) -> Option<Vec<Rational>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free = (0..n_cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::zero(); n_cols];
    x[free] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = -m[row][free].clone();
    }
    Some(x)
}

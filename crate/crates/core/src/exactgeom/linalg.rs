//! Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::rational::{RVector, Rational};

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (x, p) in other.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[RVector]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.dim();
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    rref(&mut m, cols).len()
}

/// Basis of `{x : <row, x> = 0 for every row}` in dimension `dim`.
pub fn nullspace(rows: &[RVector], dim: usize) -> Vec<RVector> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let pivots = rref(&mut m, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = RVector::zeros(dim);
            v.0[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v.0[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of the square system `rows · x = rhs`, or `None` if singular.
pub fn solve(rows: &[RVector], rhs: &[Rational]) -> Option<RVector> {
    let dim = rows.first()?.dim();
    if rows.len() != dim {
        return None;
    }
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.0.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, dim);
    if pivots.len() < dim {
        return None;
    }
    Some(RVector(m.into_iter().map(|row| row[dim].clone()).collect()))
}

/// Determinant by fraction-tracking elimination.
pub fn det(rows: &[RVector]) -> Rational {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            d = -d;
        }
        let pivot = m[col][col].clone();
        d *= &pivot;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &pivot;
                for c in col..n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    d
}

/// Dimension of the affine hull of a point set (-1 for the empty set).
pub fn affine_dim(points: &[&RVector]) -> isize {
    match points.split_first() {
        None => -1,
        Some((p0, rest)) => {
            let diffs: Vec<RVector> = rest.iter().map(|p| *p - *p0).collect();
            rank(&diffs) as isize
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::rational::{frac, rat};

    #[test]
    fn solves_small_system() {
        let rows = vec![RVector::from_ints(&[1, 1]), RVector::from_ints(&[1, -1])];
        let x = solve(&rows, &[rat(3), rat(0)]).unwrap();
        assert_eq!(x, RVector(vec![frac(3, 2), frac(3, 2)]));
        assert!(solve(&[RVector::from_ints(&[1, 1]), RVector::from_ints(&[2, 2])], &[rat(1), rat(2)]).is_none());
    }

    #[test]
    fn determinant_and_rank() {
        let rows = vec![
            RVector::from_ints(&[2, 0, 1]),
            RVector::from_ints(&[1, 3, 2]),
            RVector::from_ints(&[1, 1, 1]),
        ];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det(&rows), rat(0));
        assert_eq!(rank(&rows), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            assert!(r.dot(&ns[0]).is_zero());
        }
    }
}

//! Exact rational linear algebra on small dense matrices (rows of `Rational`).

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::numeric::{dot, sub_points, Point, Rational};

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
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

/// Determinant by fraction-tracking Gaussian elimination.
pub fn det(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut m = matrix.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(c, p);
            d = -d;
        }
        let pivot = m[c][c].clone();
        d *= &pivot;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..n {
                let delta = &f * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    d
}

/// Basis of `{x : M x = 0}` where `M` has `cols` columns.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves the square system `M x = b`; `None` when `M` is singular.
pub fn solve(matrix: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = matrix.len();
    let mut aug: Matrix = matrix
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// All solutions of `M x = b` as a particular solution plus a nullspace
/// basis; `None` when inconsistent.
pub fn solve_affine(rows: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let mut aug: Matrix = rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut particular = vec![Rational::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug[r][cols].clone();
    }
    Some((particular, nullspace(rows, cols)))
}

pub fn inverse(matrix: &[Vec<Rational>]) -> Option<Matrix> {
    let n = matrix.len();
    let mut aug: Matrix = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &[Vec<Rational>]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|r| dot(r, v)).collect()
}

/// `G[i][j] = v_i · v_j`.
pub fn gram(vectors: &[Vec<Rational>]) -> Matrix {
    vectors
        .iter()
        .map(|a| vectors.iter().map(|b| dot(a, b)).collect())
        .collect()
}

/// Edge vectors `p_i - p_0`, `i ≥ 1`.
pub fn edges(points: &[Point]) -> Vec<Point> {
    points[1..].iter().map(|p| sub_points(p, &points[0])).collect()
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_dim(points: &[Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    rank(&edges(points))
}

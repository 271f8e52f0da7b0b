//! Bounded convex polytopes in ℝ^d given by linear inequalities, with exact
//! vertex enumeration and a pulling triangulation.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::linalg::{affine_dim, det, edges, solve};
use crate::numeric::{dot, Point, Rational};

/// `a·x ≤ b`, or `a·x < b` when `strict`.
#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub a: Vec<Rational>,
    pub b: Rational,
    pub strict: bool,
}

impl Constraint {
    pub fn new(a: Vec<Rational>, b: Rational, strict: bool) -> Self {
        Constraint { a, b, strict }
    }

    fn slack(&self, x: &[Rational]) -> Rational {
        &self.b - dot(&self.a, x)
    }

    /// Membership honoring strictness.
    pub fn contains(&self, x: &[Rational]) -> bool {
        let s = self.slack(x);
        if self.strict {
            s.is_positive()
        } else {
            !s.is_negative()
        }
    }
}

/// The constraints `λ_i ≥ 0`, `Σ λ_i ≤ 1` of the standard d-simplex.
pub(crate) fn standard_simplex(d: usize) -> Vec<Constraint> {
    let mut cons: Vec<Constraint> = (0..d)
        .map(|i| {
            let mut a = vec![Rational::zero(); d];
            a[i] = -Rational::one();
            Constraint::new(a, Rational::zero(), false)
        })
        .collect();
    cons.push(Constraint::new(vec![Rational::one(); d], Rational::one(), false));
    cons
}

fn combinations(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for i in start..n {
        if n - i < k - current.len() {
            break;
        }
        current.push(i);
        combinations(n, k, i + 1, current, out);
        current.pop();
    }
}

/// A nonempty bounded polytope with its vertices sorted lexicographically and,
/// per vertex, the set of constraints tight there.
pub(crate) struct Polytope {
    pub dim: usize,
    pub vertices: Vec<Point>,
    tight: Vec<Vec<bool>>,
}

impl Polytope {
    /// Vertex enumeration over all d-subsets of constraints. The constraint
    /// system must describe a bounded set. Returns `None` when empty.
    ///
    /// Strictness only matters for constraints that are constant on ℝ^d
    /// (`a = 0`); others are treated as closed, which changes the result by
    /// a lower-dimensional set.
    pub fn from_constraints(d: usize, constraints: &[Constraint]) -> Option<Polytope> {
        let mut active = Vec::new();
        for c in constraints {
            if c.a.iter().all(Zero::is_zero) {
                if !c.contains(&vec![Rational::zero(); d]) {
                    return None;
                }
            } else {
                active.push(c.clone());
            }
        }
        let mut found: BTreeSet<Point> = BTreeSet::new();
        if d == 0 {
            found.insert(Vec::new());
        } else {
            let mut subsets = Vec::new();
            combinations(active.len(), d, 0, &mut Vec::new(), &mut subsets);
            for subset in subsets {
                let m: Vec<Vec<Rational>> = subset.iter().map(|&i| active[i].a.clone()).collect();
                let b: Vec<Rational> = subset.iter().map(|&i| active[i].b.clone()).collect();
                if let Some(x) = solve(&m, &b) {
                    if active.iter().all(|c| !c.slack(&x).is_negative()) {
                        found.insert(x);
                    }
                }
            }
        }
        if found.is_empty() {
            return None;
        }
        let vertices: Vec<Point> = found.into_iter().collect();
        let tight = vertices
            .iter()
            .map(|v| active.iter().map(|c| c.slack(v).is_zero()).collect())
            .collect();
        Some(Polytope { dim: d, vertices, tight })
    }

    pub fn affine_dim(&self) -> usize {
        affine_dim(&self.vertices)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim
    }

    /// Triangulates a full-dimensional polytope into positively oriented
    /// d-simplices (edge determinant > 0). Lower-dimensional polytopes give
    /// an empty list.
    pub fn triangulate(&self) -> Vec<Vec<Point>> {
        if !self.is_full_dimensional() {
            return Vec::new();
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        for idx in self.pull(&all, self.dim) {
            let mut simplex: Vec<Point> = idx.iter().map(|&i| self.vertices[i].clone()).collect();
            if simplex.len() >= 2 && det(&edges(&simplex)).is_negative() {
                let n = simplex.len();
                simplex.swap(n - 2, n - 1);
            }
            out.push(simplex);
        }
        out
    }

    fn face_dim(&self, face: &[usize]) -> usize {
        let pts: Vec<Point> = face.iter().map(|&i| self.vertices[i].clone()).collect();
        affine_dim(&pts)
    }

    /// Cone from the first vertex of `face` over the facets avoiding it.
    fn pull(&self, face: &[usize], dim: usize) -> Vec<Vec<usize>> {
        if dim == 0 {
            return vec![vec![face[0]]];
        }
        let apex = face[0];
        let constraints = self.tight.first().map_or(0, Vec::len);
        let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in 0..constraints {
            if self.tight[apex][c] {
                continue;
            }
            let sub: Vec<usize> = face.iter().copied().filter(|&v| self.tight[v][c]).collect();
            if sub.len() >= dim && self.face_dim(&sub) == dim - 1 {
                facets.insert(sub);
            }
        }
        let mut out = Vec::new();
        for facet in facets {
            for mut s in self.pull(&facet, dim - 1) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    }
}

/// Signed d-volume of a d-simplex in ℝ^d times d!.
#[cfg(test)]
pub(crate) fn oriented_measure(simplex: &[Point]) -> Rational {
    det(&edges(simplex))
}

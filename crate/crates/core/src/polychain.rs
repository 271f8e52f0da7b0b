//! Polyhedral k-chains in ℝ^N: formal sums of group-weighted oriented simplices.
//!
//! Chains are kept in canonical form: no zero coefficients, no degenerate
//! simplices, vertices of each simplex in lexicographic order (the coefficient
//! absorbs the permutation sign), equal supports merged, and terms sorted.
//! Collinear 1-simplices are merged exactly into maximal pieces of constant
//! coefficient; for k ≥ 2, simplices whose interiors partially overlap are
//! rejected.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::coeffgroup::{Group, GroupElement};
use crate::error::{Error, Result};
use crate::linalg::{affine_dim, det, edges, gram, inverse, mat_vec, rank};
use crate::numeric::{add_points, dot, f64_to_rational, scale_point, sqrt, squared_distance, sub_points, to_f64, Point, Rational};
use crate::polytope::{standard_simplex, Constraint, Polytope};

/// An ordered list of k+1 points; the order is the orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<Point>,
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i.into()))
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidArgument("a simplex needs at least one vertex".to_string()));
        };
        let n = first.len();
        if let Some(bad) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(Simplex { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn edge_vectors(&self) -> Vec<Point> {
        edges(&self.vertices)
    }

    pub fn is_degenerate(&self) -> bool {
        self.dim() > self.ambient() || affine_dim(&self.vertices) < self.dim()
    }

    /// `det(EᵀE)` for the edge matrix `E`; equals `(k! vol)^2`.
    pub fn gram_det(&self) -> Rational {
        det(&gram(&self.edge_vectors()))
    }

    /// k-dimensional volume; a point has volume 1.
    pub fn volume(&self) -> f64 {
        let k = self.dim();
        if k == 0 {
            return 1.0;
        }
        let f = factorial(k);
        sqrt(to_f64(&(self.gram_det() / (&f * &f))))
    }

    /// Vertices sorted lexicographically, and whether that is an odd permutation.
    pub fn sorted(&self) -> (Simplex, bool) {
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        idx.sort_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]));
        let mut odd = false;
        let mut seen = vec![false; idx.len()];
        for start in 0..idx.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = idx[j];
                len += 1;
            }
            if len % 2 == 0 {
                odd = !odd;
            }
        }
        let vertices = idx.iter().map(|&i| self.vertices[i].clone()).collect();
        (Simplex { vertices }, odd)
    }

    /// Codimension-one faces with their boundary signs `(−1)^i`.
    pub fn faces(&self) -> Vec<(bool, Simplex)> {
        (0..self.vertices.len())
            .map(|i| {
                let mut v = self.vertices.clone();
                v.remove(i);
                (i % 2 == 1, Simplex { vertices: v })
            })
            .collect()
    }

    pub fn map_vertices(&self, f: impl Fn(&Point) -> Point) -> Simplex {
        Simplex { vertices: self.vertices.iter().map(f).collect() }
    }

    fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for i in 0..v.len() {
                if v[i] < lo[i] {
                    lo[i] = v[i].clone();
                }
                if v[i] > hi[i] {
                    hi[i] = v[i].clone();
                }
            }
        }
        (lo, hi)
    }

    /// `x = v₀ + E λ` for parameters `λ ∈ ℝ^k`.
    pub fn point_at(&self, lambda: &[Rational]) -> Point {
        let mut x = self.vertices[0].clone();
        for (e, l) in self.edge_vectors().iter().zip(lambda) {
            x = add_points(&x, &scale_point(e, l));
        }
        x
    }

    /// Rewrites `a·x ≤ b` (x on this simplex's affine hull) in parameter space.
    pub(crate) fn pull_back(&self, normal: &[Rational], offset: &Rational, strict: bool) -> Constraint {
        let a = self.edge_vectors().iter().map(|e| dot(normal, e)).collect();
        Constraint::new(a, offset - dot(normal, &self.vertices[0]), strict)
    }

    /// Pieces of a parameter-space polytope (positively oriented) as simplices
    /// with this simplex's orientation.
    pub(crate) fn push_pieces(&self, polytope: &Polytope) -> Vec<Simplex> {
        polytope
            .triangulate()
            .into_iter()
            .map(|piece| Simplex { vertices: piece.iter().map(|l| self.point_at(l)).collect() })
            .collect()
    }
}

/// Whether two k-simplices (k ≥ 1) share a k-dimensional piece of interior.
pub fn interiors_overlap(a: &Simplex, b: &Simplex) -> bool {
    let k = a.dim();
    if k != b.dim() || k == 0 {
        return k == 0 && a == b;
    }
    let (alo, ahi) = a.bounding_box();
    let (blo, bhi) = b.bounding_box();
    for i in 0..alo.len() {
        let a_flat = alo[i] == ahi[i];
        let b_flat = blo[i] == bhi[i];
        if ahi[i] < blo[i] || bhi[i] < alo[i] {
            return false;
        }
        if (ahi[i] == blo[i] || bhi[i] == alo[i]) && !(a_flat && b_flat) {
            return false;
        }
    }
    let ea = a.edge_vectors();
    let mut span = ea.clone();
    span.extend(b.vertices.iter().map(|v| sub_points(v, &a.vertices[0])));
    if rank(&span) != k {
        return false;
    }
    // Barycentric coordinates relative to `a` of points of `b`'s hull.
    let ginv = inverse(&gram(&ea)).expect("nondegenerate simplex");
    let m: Vec<Vec<Rational>> = ginv
        .iter()
        .map(|row| {
            (0..a.ambient())
                .map(|j| row.iter().zip(&ea).map(|(g, e)| g * &e[j]).sum())
                .collect()
        })
        .collect();
    let eb = b.edge_vectors();
    let base = mat_vec(&m, &sub_points(&b.vertices[0], &a.vertices[0]));
    let mut cons = standard_simplex(k);
    let mut total_c = vec![Rational::zero(); k];
    let mut total_m = Rational::zero();
    for (row, m_i) in m.iter().zip(&base) {
        let c: Vec<Rational> = eb.iter().map(|e| dot(row, e)).collect();
        cons.push(Constraint::new(c.iter().map(|x| -x).collect(), m_i.clone(), false));
        total_c = add_points(&total_c, &c);
        total_m += m_i;
    }
    cons.push(Constraint::new(total_c, Rational::one() - total_m, false));
    Polytope::from_constraints(k, &cons).is_some_and(|p| p.is_full_dimensional())
}

/// A formal sum `Σ g_i [σ_i]` of k-simplices in ℝ^N, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    group: Group,
    ambient: usize,
    dim: usize,
    terms: Vec<(GroupElement, Simplex)>,
}

impl Chain {
    pub fn zero(group: Group, ambient: usize, dim: usize) -> Chain {
        Chain { group, ambient, dim, terms: Vec::new() }
    }

    /// Strict construction: degenerate simplices and mismatched dimensions or
    /// groups are errors; the result is canonicalized.
    pub fn new(group: Group, ambient: usize, dim: usize, terms: Vec<(GroupElement, Simplex)>) -> Result<Chain> {
        check_terms(group, ambient, dim, &terms)?;
        if let Some(i) = terms.iter().position(|(_, s)| s.is_degenerate()) {
            return Err(Error::DegenerateSimplex { term: i });
        }
        Chain::from_terms(group, ambient, dim, terms)
    }

    /// Lenient construction: degenerate simplices are dropped.
    pub fn from_terms(group: Group, ambient: usize, dim: usize, terms: Vec<(GroupElement, Simplex)>) -> Result<Chain> {
        check_terms(group, ambient, dim, &terms)?;
        if dim > ambient {
            return Ok(Chain::zero(group, ambient, dim));
        }
        let terms = canonicalize(dim, terms)?;
        Ok(Chain { group, ambient, dim, terms })
    }

    pub fn single(coefficient: GroupElement, simplex: Simplex) -> Result<Chain> {
        let group = coefficient.group();
        let (ambient, dim) = (simplex.ambient(), simplex.dim());
        Chain::new(group, ambient, dim, vec![(coefficient, simplex)])
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(GroupElement, Simplex)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(GroupElement, Simplex)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |g_i| vol(σ_i)`, rounded once from the exact sum of the exact
    /// norms times the floating-point volumes.
    pub fn mass(&self) -> f64 {
        weighted_volume(self.terms.iter().map(|(g, s)| (g.norm_rational(), s.volume())))
    }

    pub fn boundary(&self) -> Result<Chain> {
        if self.dim == 0 {
            return Ok(Chain::zero(self.group, self.ambient, 0));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * (self.dim + 1));
        for (g, s) in &self.terms {
            for (negate, face) in s.faces() {
                terms.push((if negate { g.neg() } else { g.clone() }, face));
            }
        }
        Chain::from_terms(self.group, self.ambient, self.dim - 1, terms)
    }

    fn check_compatible(&self, other: &Chain) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch { left: self.group, right: other.group });
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Chain) -> Result<Chain> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Chain::from_terms(self.group, self.ambient, self.dim, terms)
    }

    pub fn neg(&self) -> Chain {
        Chain {
            terms: self.terms.iter().map(|(g, s)| (g.neg(), s.clone())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain> {
        self.add(&other.neg())
    }

    /// `f_#`: image simplices keep their vertex order; degenerate images drop.
    pub fn pushforward(&self, f: &AffineMap) -> Result<Chain> {
        if f.source_dim() != self.ambient {
            return Err(Error::DimensionMismatch { expected: f.source_dim(), found: self.ambient });
        }
        let terms = self
            .terms
            .iter()
            .map(|(g, s)| (g.clone(), s.map_vertices(|v| f.apply(v))))
            .collect();
        Chain::from_terms(self.group, f.target_dim(), self.dim, terms)
    }

    pub fn translate(&self, y: &[Rational]) -> Result<Chain> {
        self.pushforward(&AffineMap::translation(y.to_vec()))
    }

    /// `A ⌞ S`: the part of the chain inside the region.
    pub fn restrict(&self, region: &RegionSet) -> Result<Chain> {
        if region.ambient != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: region.ambient });
        }
        let mut terms = Vec::new();
        for (g, s) in &self.terms {
            if self.dim == 0 {
                if region.contains(&s.vertices[0]) {
                    terms.push((g.clone(), s.clone()));
                }
                continue;
            }
            for cell in &region.cells {
                let mut cons = standard_simplex(self.dim);
                cons.extend(cell.constraints.iter().map(|h| s.pull_back(&h.normal, &h.offset, h.strict)));
                if let Some(p) = Polytope::from_constraints(self.dim, &cons) {
                    terms.extend(s.push_pieces(&p).into_iter().map(|piece| (g.clone(), piece)));
                }
            }
        }
        Chain::from_terms(self.group, self.ambient, self.dim, terms)
    }

    /// Distinct vertices of all simplices, sorted.
    pub fn support_points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.terms.iter().flat_map(|(_, s)| s.vertices.iter().cloned()).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Vertex set and its diameter (the diameter of the support).
    pub fn support_diameter(&self) -> (Vec<Point>, f64) {
        let pts = self.support_points();
        let mut best = Rational::zero();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = squared_distance(&pts[i], &pts[j]);
                if d > best {
                    best = d;
                }
            }
        }
        (pts, sqrt(to_f64(&best)))
    }

    /// Whether two chains are equal as canonical forms.
    pub fn same_as(&self, other: &Chain) -> bool {
        self == other
    }
}

/// `Σ w_i v_i` for exact weights and floating volumes, rounded once.
pub(crate) fn weighted_volume<I: IntoIterator<Item = (Rational, f64)>>(items: I) -> f64 {
    let total = items
        .into_iter()
        .filter(|(w, _)| !w.is_zero())
        .fold(Rational::zero(), |acc, (w, v)| acc + w * f64_to_rational(v));
    to_f64(&total)
}

fn check_terms(group: Group, ambient: usize, dim: usize, terms: &[(GroupElement, Simplex)]) -> Result<()> {
    for (i, (g, s)) in terms.iter().enumerate() {
        if g.group() != group {
            return Err(Error::GroupMismatch { left: group, right: g.group() });
        }
        if s.ambient() != ambient {
            return Err(Error::InvalidSimplex {
                term: i,
                reason: alloc::format!("vertices lie in R^{}, chain is in R^{ambient}", s.ambient()),
            });
        }
        if s.dim() != dim {
            return Err(Error::InvalidSimplex {
                term: i,
                reason: alloc::format!("{}-simplex in a {dim}-chain", s.dim()),
            });
        }
    }
    Ok(())
}

fn canonicalize(dim: usize, terms: Vec<(GroupElement, Simplex)>) -> Result<Vec<(GroupElement, Simplex)>> {
    let oriented = terms.into_iter().filter(|(g, s)| !g.is_zero() && !s.is_degenerate()).map(|(g, s)| {
        let (sorted, odd) = s.sorted();
        (if odd { g.neg() } else { g }, sorted)
    });
    let mut merged: BTreeMap<Simplex, GroupElement> = BTreeMap::new();
    for (g, s) in oriented {
        match merged.get_mut(&s) {
            Some(h) => *h = h.add(&g)?,
            None => {
                merged.insert(s, g);
            }
        }
    }
    let mut terms: Vec<(GroupElement, Simplex)> =
        merged.into_iter().filter(|(_, g)| !g.is_zero()).map(|(s, g)| (g, s)).collect();
    if dim == 1 {
        terms = merge_collinear(terms)?;
    } else if dim >= 2 {
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if interiors_overlap(&terms[i].1, &terms[j].1) {
                    return Err(Error::Overlap { first: i, second: j });
                }
            }
        }
    }
    Ok(terms)
}

/// Direction normalized so its first nonzero entry is 1, and the index of that entry.
fn line_direction(a: &Point, b: &Point) -> (Point, usize) {
    let d = sub_points(b, a);
    let i0 = d.iter().position(|x| !x.is_zero()).expect("nondegenerate segment");
    let s = d[i0].recip();
    (scale_point(&d, &s), i0)
}

/// Exact 1-D overlap resolution: on each line, the coefficient density is
/// rebuilt as maximal segments of constant coefficient.
fn merge_collinear(terms: Vec<(GroupElement, Simplex)>) -> Result<Vec<(GroupElement, Simplex)>> {
    type Piece = (Rational, Rational, GroupElement);
    let mut lines: BTreeMap<(Point, Point), (usize, Vec<Piece>)> = BTreeMap::new();
    for (g, s) in terms {
        let (a, b) = (&s.vertices[0], &s.vertices[1]);
        let (dir, i0) = line_direction(a, b);
        let (ta, tb) = (a[i0].clone(), b[i0].clone());
        let base = sub_points(a, &scale_point(&dir, &ta));
        let entry = lines.entry((dir, base)).or_insert((i0, Vec::new()));
        // Vertices are sorted, so ta < tb along the normalized direction.
        entry.1.push((ta, tb, g));
    }
    let mut out = Vec::new();
    for ((dir, base), (_, pieces)) in lines {
        let at = |t: &Rational| add_points(&base, &scale_point(&dir, t));
        let mut cuts: Vec<Rational> = pieces.iter().flat_map(|(a, b, _)| [a.clone(), b.clone()]).collect();
        cuts.sort();
        cuts.dedup();
        let mut runs: Vec<Piece> = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let mut sum: Option<GroupElement> = None;
            for (a, b, g) in &pieces {
                if a <= lo && b >= hi {
                    sum = Some(match sum {
                        Some(s) => s.add(g)?,
                        None => g.clone(),
                    });
                }
            }
            let Some(sum) = sum.filter(|s| !s.is_zero()) else {
                continue;
            };
            match runs.last_mut() {
                Some((_, end, g)) if end == lo && *g == sum => *end = hi.clone(),
                _ => runs.push((lo.clone(), hi.clone(), sum)),
            }
        }
        for (lo, hi, g) in runs {
            out.push((g, Simplex { vertices: vec![at(&lo), at(&hi)] }));
        }
    }
    out.sort_by(|x, y| x.1.cmp(&y.1));
    Ok(out)
}

/// `x ↦ M x + c` from ℝ^N to ℝ^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    matrix: Vec<Vec<Rational>>,
    offset: Point,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Rational>>, offset: Point) -> Result<AffineMap> {
        if matrix.len() != offset.len() {
            return Err(Error::DimensionMismatch { expected: matrix.len(), found: offset.len() });
        }
        let cols = matrix.first().map_or(0, Vec::len);
        if let Some(row) = matrix.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
        }
        Ok(AffineMap { matrix, offset })
    }

    fn identity_matrix(n: usize, scale: &Rational) -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { scale.clone() } else { Rational::zero() }).collect())
            .collect()
    }

    /// `τ_y`.
    pub fn translation(y: Point) -> AffineMap {
        AffineMap { matrix: Self::identity_matrix(y.len(), &Rational::one()), offset: y }
    }

    /// `x ↦ r x`.
    pub fn dilation(n: usize, r: Rational) -> AffineMap {
        AffineMap { matrix: Self::identity_matrix(n, &r), offset: vec![Rational::zero(); n] }
    }

    /// Orthogonal projection onto the listed coordinates.
    pub fn coordinate_projection(n: usize, coords: &[usize]) -> AffineMap {
        let matrix = coords
            .iter()
            .map(|&c| (0..n).map(|j| if j == c { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        AffineMap { matrix, offset: vec![Rational::zero(); coords.len()] }
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[Rational]) -> Point {
        add_points(&mat_vec(&self.matrix, x), &self.offset)
    }
}

/// `normal · x ≤ offset`, or `<` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Point,
    pub offset: Rational,
    pub strict: bool,
}

impl HalfSpace {
    pub fn new(normal: Point, offset: Rational, strict: bool) -> HalfSpace {
        HalfSpace { normal, offset, strict }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let v = dot(&self.normal, x);
        if self.strict {
            v < self.offset
        } else {
            v <= self.offset
        }
    }

    pub fn complement(&self) -> HalfSpace {
        HalfSpace {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -self.offset.clone(),
            strict: !self.strict,
        }
    }
}

/// An intersection of half-spaces; no constraints means all of ℝ^N.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cell {
    pub constraints: Vec<HalfSpace>,
}

impl Cell {
    pub fn new(constraints: Vec<HalfSpace>) -> Cell {
        Cell { constraints }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|h| h.contains(x))
    }

    fn intersect(&self, other: &Cell) -> Cell {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Cell { constraints }
    }

    /// `ℝ^N ∖ cell` as disjoint cells.
    fn complement(&self) -> Vec<Cell> {
        (0..self.constraints.len())
            .map(|j| {
                let mut constraints: Vec<HalfSpace> = self.constraints[..j].to_vec();
                constraints.push(self.constraints[j].complement());
                Cell { constraints }
            })
            .collect()
    }

    fn axis(n: usize, i: usize, sign: i64) -> Point {
        let mut v = vec![Rational::zero(); n];
        v[i] = Rational::from_integer(sign.into());
        v
    }

    /// `lo ≤ x ≤ hi` coordinatewise.
    pub fn closed_box(lo: &[Rational], hi: &[Rational]) -> Cell {
        let n = lo.len();
        let mut constraints = Vec::new();
        for i in 0..n {
            constraints.push(HalfSpace::new(Self::axis(n, i, -1), -lo[i].clone(), false));
            constraints.push(HalfSpace::new(Self::axis(n, i, 1), hi[i].clone(), false));
        }
        Cell { constraints }
    }

    /// `lo < x ≤ hi` coordinatewise, the dyadic-cube convention.
    pub fn half_open_box(lo: &[Rational], hi: &[Rational]) -> Cell {
        let n = lo.len();
        let mut constraints = Vec::new();
        for i in 0..n {
            constraints.push(HalfSpace::new(Self::axis(n, i, -1), -lo[i].clone(), true));
            constraints.push(HalfSpace::new(Self::axis(n, i, 1), hi[i].clone(), false));
        }
        Cell { constraints }
    }
}

/// A finite union of cells, stored as pairwise disjoint cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSet {
    ambient: usize,
    cells: Vec<Cell>,
}

impl RegionSet {
    /// The union of the given cells (which may overlap).
    pub fn new(ambient: usize, cells: Vec<Cell>) -> Result<RegionSet> {
        for cell in &cells {
            if let Some(h) = cell.constraints.iter().find(|h| h.normal.len() != ambient) {
                return Err(Error::DimensionMismatch { expected: ambient, found: h.normal.len() });
            }
        }
        let mut disjoint: Vec<Cell> = Vec::new();
        for (i, cell) in cells.iter().enumerate() {
            let mut pieces = vec![cell.clone()];
            for earlier in &cells[..i] {
                let outside = earlier.complement();
                pieces = pieces
                    .iter()
                    .flat_map(|p| outside.iter().map(move |o| p.intersect(o)))
                    .collect();
            }
            disjoint.extend(pieces);
        }
        Ok(RegionSet { ambient, cells: disjoint })
    }

    pub fn empty(ambient: usize) -> RegionSet {
        RegionSet { ambient, cells: Vec::new() }
    }

    pub fn whole(ambient: usize) -> RegionSet {
        RegionSet { ambient, cells: vec![Cell::default()] }
    }

    pub fn half_space(h: HalfSpace) -> RegionSet {
        RegionSet { ambient: h.normal.len(), cells: vec![Cell::new(vec![h])] }
    }

    pub fn closed_box(lo: &[Rational], hi: &[Rational]) -> RegionSet {
        RegionSet { ambient: lo.len(), cells: vec![Cell::closed_box(lo, hi)] }
    }

    pub fn half_open_box(lo: &[Rational], hi: &[Rational]) -> RegionSet {
        RegionSet { ambient: lo.len(), cells: vec![Cell::half_open_box(lo, hi)] }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.cells.iter().any(|c| c.contains(x))
    }

    /// `ℝ^N ∖ S`.
    pub fn complement(&self) -> RegionSet {
        let mut result = vec![Cell::default()];
        for cell in &self.cells {
            let outside = cell.complement();
            result = result
                .iter()
                .flat_map(|r| outside.iter().map(move |o| r.intersect(o)))
                .collect();
        }
        RegionSet { ambient: self.ambient, cells: result }
    }
}

fn permutations(items: &[usize]) -> Vec<(Vec<usize>, bool)> {
    if items.len() <= 1 {
        return vec![(items.to_vec(), false)];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for (mut tail, odd) in permutations(&rest) {
            tail.insert(0, first);
            out.push((tail, odd ^ (i % 2 == 1)));
        }
    }
    out
}

/// `g [Q]` for the cube `corner + side·[0,1]^axes`, oriented by the axis
/// order, triangulated into the k! Kuhn simplices.
pub fn cube_chain(coefficient: &GroupElement, corner: &[Rational], axes: &[usize], side: &Rational) -> Result<Chain> {
    let n = corner.len();
    let mut terms = Vec::new();
    for (perm, odd) in permutations(axes) {
        let mut v = corner.to_vec();
        let mut vertices = vec![v.clone()];
        for &a in &perm {
            v[a] += side;
            vertices.push(v.clone());
        }
        let g = if odd { coefficient.neg() } else { coefficient.clone() };
        terms.push((g, Simplex::new(vertices)?));
    }
    Chain::new(coefficient.group(), n, axes.len(), terms)
}

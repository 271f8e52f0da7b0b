//! Slicing chains by oriented affine planes, fiber mass profiles, and the
//! grid deformation `P^ε`.
//!
//! Orientation of a slice piece with tangent basis `w`: complete `w` to
//! `[u, w]`, a positive basis of the simplex's plane `L`, and to `[v, w]`, a
//! positive basis of the slicing plane `M`. Then `w` is positive when
//! `[v, u, w]` is a positive basis of ℝ^N. With this rule
//! `∂(A ∩ P) = (∂A) ∩ P` holds with a plus sign in every dimension.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::coeffgroup::GroupElement;
use crate::error::{Error, Result};
use crate::linalg::{det, gram, inverse, mat_vec, nullspace, rank, solve, solve_affine};
use crate::numeric::{dot, sub_points, to_f64, Point, Rational};
use crate::polychain::{cube_chain, AffineMap, Chain, Simplex};
use crate::polytope::{Constraint, Polytope};
use crate::zerochain::ZeroChain;

/// `base + span(dirs)`, oriented by the order of `dirs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedAffinePlane {
    base: Point,
    dirs: Vec<Point>,
    normals: Vec<Point>,
}

impl OrientedAffinePlane {
    pub fn new(base: Point, dirs: Vec<Point>) -> Result<Self> {
        let n = base.len();
        if let Some(d) = dirs.iter().find(|d| d.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: d.len() });
        }
        if dirs.len() > n || rank(&dirs) != dirs.len() {
            return Err(Error::InvalidPlane("directions are not linearly independent".to_string()));
        }
        let normals = if dirs.is_empty() {
            (0..n).map(|i| unit(n, i)).collect()
        } else {
            nullspace(&dirs, n)
        };
        Ok(OrientedAffinePlane { base, dirs, normals })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn dirs(&self) -> &[Point] {
        &self.dirs
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn ambient(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let d = sub_points(x, &self.base);
        self.normals.iter().all(|n| dot(n, &d).is_zero())
    }

    /// The same plane with the opposite orientation.
    pub fn reversed(&self) -> Self {
        let mut dirs = self.dirs.clone();
        if let Some(first) = dirs.first_mut() {
            *first = first.iter().map(|x| -x).collect();
        }
        OrientedAffinePlane { dirs, ..self.clone() }
    }
}

fn unit(n: usize, i: usize) -> Point {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// The coordinate projection `Π: ℝ^N → L = ℝ^I` onto increasing indices `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateProjection {
    ambient: usize,
    indices: Vec<usize>,
}

impl CoordinateProjection {
    pub fn new(ambient: usize, indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i >= ambient) {
            return Err(Error::InvalidArgument("projection indices must increase and lie below N".to_string()));
        }
        Ok(CoordinateProjection { ambient, indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    fn complement(&self) -> Vec<usize> {
        (0..self.ambient).filter(|i| !self.indices.contains(i)).collect()
    }

    pub fn apply(&self, x: &[Rational]) -> Point {
        self.indices.iter().map(|&i| x[i].clone()).collect()
    }

    /// `Π^{-1}(x)`, oriented so that `[e_I, fiber]` is a positive basis of ℝ^N.
    pub fn fiber(&self, x: &[Rational]) -> Result<OrientedAffinePlane> {
        if x.len() != self.indices.len() {
            return Err(Error::DimensionMismatch { expected: self.indices.len(), found: x.len() });
        }
        let n = self.ambient;
        let mut base = vec![Rational::zero(); n];
        for (&i, xi) in self.indices.iter().zip(x) {
            base[i] = xi.clone();
        }
        let dirs: Vec<Point> = self.complement().into_iter().map(|j| unit(n, j)).collect();
        let plane = OrientedAffinePlane::new(base, dirs)?;
        let mut frame: Vec<Point> = self.indices.iter().map(|&i| unit(n, i)).collect();
        frame.extend(plane.dirs.iter().cloned());
        Ok(if det(&frame).is_negative() { plane.reversed() } else { plane })
    }
}

/// The grid `εℤ^N` applied to a chain translated by `offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub eps: Rational,
    pub offset: Point,
}

impl GridSpec {
    pub fn new(eps: Rational, offset: Point) -> Result<Self> {
        if !eps.is_positive() {
            return Err(Error::InvalidArgument("grid side must be positive".to_string()));
        }
        Ok(GridSpec { eps, offset })
    }
}

/// `F ∩ P` for a simplex `F` as a polytope in a parametrization
/// `λ = λ₀ + W μ` of the simplex's barycentric-style coordinates.
struct Section {
    particular: Vec<Rational>,
    kernel: Vec<Vec<Rational>>,
    polytope: Option<Polytope>,
}

impl Section {
    fn new(s: &Simplex, plane: &OrientedAffinePlane) -> Option<Section> {
        let k = s.dim();
        let e = s.edge_vectors();
        let rows: Vec<Vec<Rational>> = plane.normals.iter().map(|n| e.iter().map(|c| dot(n, c)).collect()).collect();
        let shift = sub_points(&plane.base, &s.vertices()[0]);
        let rhs: Vec<Rational> = plane.normals.iter().map(|n| dot(n, &shift)).collect();
        let (particular, kernel) = if k == 0 {
            if !rhs.iter().all(Zero::is_zero) {
                return None;
            }
            (Vec::new(), Vec::new())
        } else {
            solve_affine(&rows, &rhs, k)?
        };
        let r = kernel.len();
        let mut cons = Vec::with_capacity(k + 1);
        for i in 0..k {
            let a: Vec<Rational> = kernel.iter().map(|w| -w[i].clone()).collect();
            cons.push(Constraint::new(a, particular[i].clone(), false));
        }
        if k > 0 {
            let a: Vec<Rational> = kernel.iter().map(|w| w.iter().sum()).collect();
            let b = Rational::one() - particular.iter().sum::<Rational>();
            cons.push(Constraint::new(a, b, false));
        }
        let polytope = Polytope::from_constraints(r, &cons);
        polytope.as_ref()?;
        Some(Section { particular, kernel, polytope })
    }

    fn dim(&self) -> usize {
        self.polytope.as_ref().map_or(0, |p| p.affine_dim())
    }

    fn lambda(&self, mu: &[Rational]) -> Vec<Rational> {
        let mut l = self.particular.clone();
        for (w, m) in self.kernel.iter().zip(mu) {
            for (li, wi) in l.iter_mut().zip(w) {
                *li += wi * m;
            }
        }
        l
    }
}

fn faces_of(s: &Simplex) -> Vec<Simplex> {
    let n = s.vertices().len();
    (1u32..(1 << n))
        .map(|mask| {
            let vs = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s.vertices()[i].clone()).collect();
            Simplex::new(vs).expect("nonempty face")
        })
        .collect()
}

/// Every face `F` (of dimension `j`) meets the plane in dimension at most
/// `j + m − N`; an empty intersection always qualifies.
pub fn simplex_transverse(s: &Simplex, plane: &OrientedAffinePlane) -> bool {
    let n = plane.ambient() as i64;
    let m = plane.dim() as i64;
    faces_of(s).iter().all(|f| match Section::new(f, plane) {
        None => true,
        Some(sec) => (sec.dim() as i64) <= f.dim() as i64 + m - n,
    })
}

pub fn is_transverse(a: &Chain, plane: &OrientedAffinePlane) -> bool {
    a.terms().iter().all(|(_, s)| simplex_transverse(s, plane))
}

/// Coordinates of vectors of a subspace in the basis `basis`.
fn coordinates(basis: &[Point], vectors: &[Point]) -> Vec<Vec<Rational>> {
    let ginv = inverse(&gram(basis)).expect("independent basis");
    vectors
        .iter()
        .map(|v| mat_vec(&ginv, &basis.iter().map(|b| dot(b, v)).collect::<Vec<_>>()))
        .collect()
}

/// Greedy completion of `w` by vectors of `pool` to a basis of `span(pool)`.
fn complete(w: &[Point], pool: &[Point]) -> Vec<Point> {
    let mut chosen: Vec<Point> = Vec::new();
    let mut current: Vec<Point> = w.to_vec();
    for p in pool {
        current.push(p.clone());
        if rank(&current) == current.len() {
            chosen.push(p.clone());
        } else {
            current.pop();
        }
    }
    chosen
}

/// Sign of the slice orientation of tangent basis `w`, for a simplex with
/// edge basis `e` and a plane with direction basis `d`.
fn slice_sign(e: &[Point], d: &[Point], w: &[Point]) -> bool {
    let u = complete(w, e);
    let v = complete(w, d);
    let in_l: Vec<Point> = u.iter().chain(w).cloned().collect();
    let in_m: Vec<Point> = v.iter().chain(w).cloned().collect();
    let sign_l = if e.is_empty() { true } else { det(&coordinates(e, &in_l)).is_positive() };
    let sign_m = if d.is_empty() { true } else { det(&coordinates(d, &in_m)).is_positive() };
    let frame: Vec<Point> = v.iter().chain(&u).chain(w).cloned().collect();
    let sign_n = det(&frame).is_positive();
    parity(&[sign_l, sign_m, sign_n])
}

/// Whether the product of the signs is positive.
fn parity(signs: &[bool]) -> bool {
    signs.iter().filter(|s| !**s).count() % 2 == 0
}

/// Oriented pieces of `σ ∩ P`; `Err(())` when `σ` is not transverse.
fn slice_simplex(s: &Simplex, plane: &OrientedAffinePlane) -> core::result::Result<Vec<(bool, Simplex)>, ()> {
    let n = plane.ambient();
    let k = s.dim();
    let m = plane.dim();
    if k + m < n {
        return if simplex_transverse(s, plane) { Ok(Vec::new()) } else { Err(()) };
    }
    let d = k + m - n;
    let e = s.edge_vectors();
    if d == 0 {
        // Square system v₀ + E λ = base + D μ.
        let mut cols: Vec<Point> = e.clone();
        cols.extend(plane.dirs.iter().map(|x| x.iter().map(|c| -c).collect::<Point>()));
        let matrix: Vec<Vec<Rational>> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        if let Some(sol) = solve(&matrix, &sub_points(&plane.base, &s.vertices()[0])) {
            let lambda = &sol[..k];
            let total: Rational = lambda.iter().sum();
            let outside = lambda.iter().any(Signed::is_negative) || total > Rational::one();
            if outside {
                return Ok(Vec::new());
            }
            let on_boundary = lambda.iter().any(Zero::is_zero) || total == Rational::one();
            if on_boundary {
                return Err(());
            }
            let x = s.point_at(lambda);
            let sign = slice_sign(&e, &plane.dirs, &[]);
            return Ok(vec![(!sign, Simplex::new(vec![x]).expect("one point"))]);
        }
    }
    if !simplex_transverse(s, plane) {
        return Err(());
    }
    let Some(section) = Section::new(s, plane) else {
        return Ok(Vec::new());
    };
    let Some(polytope) = section.polytope.as_ref() else {
        return Ok(Vec::new());
    };
    if section.kernel.len() != d || !polytope.is_full_dimensional() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for piece in polytope.triangulate() {
        let points: Vec<Point> = piece.iter().map(|mu| s.point_at(&section.lambda(mu))).collect();
        let simplex = Simplex::new(points).expect("consistent dimensions");
        let w = simplex.edge_vectors();
        let sign = slice_sign(&e, &plane.dirs, &w);
        out.push((!sign, simplex));
    }
    Ok(out)
}

/// `A ∩ P`, a chain of dimension `k + m − N`.
pub fn slice_by_plane(a: &Chain, plane: &OrientedAffinePlane) -> Result<Chain> {
    let n = a.ambient();
    if plane.ambient() != n {
        return Err(Error::DimensionMismatch { expected: n, found: plane.ambient() });
    }
    if a.dim() + plane.dim() < n {
        return Err(Error::InvalidPlane(alloc::format!(
            "a {}-plane slices {}-chains in R^{n} only in negative dimension",
            plane.dim(),
            a.dim()
        )));
    }
    let d = a.dim() + plane.dim() - n;
    let mut terms = Vec::new();
    for (i, (g, s)) in a.terms().iter().enumerate() {
        let pieces = slice_simplex(s, plane).map_err(|_| Error::NotTransverse { term: i })?;
        for (negate, piece) in pieces {
            terms.push((if negate { g.neg() } else { g.clone() }, piece));
        }
    }
    Chain::from_terms(a.group(), n, d, terms)
}

/// `A ∩ Π^{-1}(x)`.
pub fn slice_fiber(a: &Chain, projection: &CoordinateProjection, x: &[Rational]) -> Result<Chain> {
    if projection.ambient() != a.ambient() {
        return Err(Error::DimensionMismatch { expected: a.ambient(), found: projection.ambient() });
    }
    if projection.dim() > a.dim() {
        return Err(Error::InvalidArgument("fiber slicing needs dim L ≤ k".to_string()));
    }
    slice_by_plane(a, &projection.fiber(x)?)
}

/// One fiber of a slice-mass profile.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberSample {
    pub x: Point,
    pub mass: f64,
    pub atoms: usize,
}

/// `∫_L M(A ∩ Π^{-1}x) dx` estimated on a sample grid over the bounding box
/// of `Π(spt A)`, compared against `M(A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceProfile {
    pub integral: f64,
    pub mass: f64,
    /// `M(A) − integral`; nonnegative up to sampling error.
    pub margin: f64,
    pub samples: Vec<FiberSample>,
}

fn projected_box(a: &Chain, projection: &CoordinateProjection) -> Option<(Point, Point)> {
    let pts = a.support_points();
    let first = projection.apply(pts.first()?);
    let (mut lo, mut hi) = (first.clone(), first);
    for p in &pts {
        for (t, x) in projection.apply(p).into_iter().enumerate() {
            if x < lo[t] {
                lo[t] = x.clone();
            }
            if x > hi[t] {
                hi[t] = x;
            }
        }
    }
    Some((lo, hi))
}

/// Slices at `x`, nudging by a few tiny rational steps when the fiber is not
/// transverse (a null set of positions).
pub(crate) fn robust_fiber(a: &Chain, projection: &CoordinateProjection, x: &Point, step: &Rational) -> Result<(Point, Chain)> {
    let mut probe = x.clone();
    for attempt in 0..8i64 {
        match slice_fiber(a, projection, &probe) {
            Ok(c) => return Ok((probe, c)),
            Err(Error::NotTransverse { .. }) => {
                let nudge = step / Rational::from_integer(BigInt::from(1009 + 17 * attempt));
                probe = probe
                    .iter()
                    .enumerate()
                    .map(|(t, c)| c + &nudge * Rational::from_integer(BigInt::from(t as i64 + 1)))
                    .collect();
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotTransverse { term: 0 })
}

fn grid_cells(per_axis: usize, dims: usize) -> Vec<Vec<usize>> {
    let total = per_axis.pow(dims as u32);
    (0..total)
        .map(|mut c| {
            (0..dims)
                .map(|_| {
                    let i = c % per_axis;
                    c /= per_axis;
                    i
                })
                .collect()
        })
        .collect()
}

fn profile_with<F>(a: &Chain, projection: &CoordinateProjection, per_axis: usize, mut position: F) -> Result<SliceProfile>
where
    F: FnMut(&Rational, &Rational) -> Rational,
{
    if a.dim() != projection.dim() {
        return Err(Error::InvalidArgument(alloc::format!(
            "slice profiles need dim L = k, got {} and {}",
            projection.dim(),
            a.dim()
        )));
    }
    let mass = a.mass();
    let Some((lo, hi)) = projected_box(a, projection) else {
        return Ok(SliceProfile { integral: 0.0, mass, margin: mass, samples: Vec::new() });
    };
    let per_axis = per_axis.max(1);
    let count = Rational::from_integer(BigInt::from(per_axis));
    let widths: Vec<Rational> = lo.iter().zip(&hi).map(|(l, h)| (h - l) / &count).collect();
    if widths.iter().any(Zero::is_zero) {
        return Ok(SliceProfile { integral: 0.0, mass, margin: mass, samples: Vec::new() });
    }
    let cell_volume: Rational = widths.iter().product();
    let mut samples = Vec::new();
    let mut total = Rational::zero();
    for cell in grid_cells(per_axis, lo.len()) {
        let x: Point = cell
            .iter()
            .enumerate()
            .map(|(t, &i)| {
                let start = &lo[t] + &widths[t] * Rational::from_integer(BigInt::from(i));
                position(&start, &widths[t])
            })
            .collect();
        let (x, slice) = robust_fiber(a, projection, &x, &widths[0])?;
        let slice_mass = slice.mass();
        total += crate::numeric::f64_to_rational(slice_mass);
        samples.push(FiberSample { x, mass: slice_mass, atoms: slice.len() });
    }
    let integral = to_f64(&(total * cell_volume));
    Ok(SliceProfile { integral, mass, margin: mass - integral, samples })
}

/// Midpoint quadrature with `per_axis` cells per coordinate of `L`.
pub fn slice_mass_profile(a: &Chain, projection: &CoordinateProjection, per_axis: usize) -> Result<SliceProfile> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    profile_with(a, projection, per_axis, |start, width| start + width * &half)
}

/// Stratified Monte-Carlo: one uniformly jittered fiber per grid cell.
pub fn slice_mass_monte_carlo<R: Rng + ?Sized>(
    a: &Chain,
    projection: &CoordinateProjection,
    per_axis: usize,
    rng: &mut R,
) -> Result<SliceProfile> {
    let denom = Rational::from_integer(BigInt::one() << 32);
    profile_with(a, projection, per_axis, |start, width| {
        let u = Rational::from_integer(BigInt::from(rng.gen::<u32>()) * 2 + 1) / (&denom * Rational::from_integer(BigInt::from(2)));
        start + width * u
    })
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn ceil_i64(x: &Rational) -> i64 {
    x.ceil().to_integer().to_i64().expect("grid index fits in i64")
}

fn floor_i64(x: &Rational) -> i64 {
    x.floor().to_integer().to_i64().expect("grid index fits in i64")
}

fn index_box(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// `P^ε(τ_z A) = Σ_Q g(Q)[Q]` over grid k-cubes `Q` of `εℤ^N`, where `g(Q)`
/// is `χ` of the slice of `τ_z A` by the dual plane of `Q`, restricted to
/// the half-open dual cell of `Q`.
///
/// Grid k-cube chains are fixed points whenever every `|z_i| < ε/2` and the
/// translated chain is transverse to the dual planes.
pub fn deformation_sample(a: &Chain, grid: &GridSpec) -> Result<Chain> {
    let n = a.ambient();
    let k = a.dim();
    if grid.offset.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: grid.offset.len() });
    }
    let moved = a.pushforward(&AffineMap::translation(grid.offset.clone()))?;
    let eps = &grid.eps;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let pts = moved.support_points();
    if pts.is_empty() {
        return Ok(Chain::zero(a.group(), n, k));
    }
    let lo: Point = (0..n).map(|i| pts.iter().map(|p| p[i].clone()).min().expect("nonempty")).collect();
    let hi: Point = (0..n).map(|i| pts.iter().map(|p| p[i].clone()).max().expect("nonempty")).collect();
    let mut cubes: BTreeMap<(Vec<usize>, Vec<i64>), GroupElement> = BTreeMap::new();
    for axes in combinations(n, k) {
        let others: Vec<usize> = (0..n).filter(|i| !axes.contains(i)).collect();
        let ranges: Vec<(i64, i64)> = axes
            .iter()
            .map(|&i| (ceil_i64(&(&lo[i] / eps - &half)), floor_i64(&(&hi[i] / eps - &half))))
            .collect();
        for c_axes in index_box(&ranges) {
            let mut base = vec![Rational::zero(); n];
            for (&i, &c) in axes.iter().zip(&c_axes) {
                base[i] = (Rational::from_integer(BigInt::from(c)) + &half) * eps;
            }
            let mut dirs: Vec<Point> = others.iter().map(|&j| unit(n, j)).collect();
            let mut frame = dirs.clone();
            frame.extend(axes.iter().map(|&i| unit(n, i)));
            if det(&frame).is_negative() {
                dirs[0] = dirs[0].iter().map(|x| -x).collect();
            }
            let plane = OrientedAffinePlane::new(base, dirs)?;
            let slice = ZeroChain::from_chain(&slice_by_plane(&moved, &plane)?)?;
            for (g, x) in slice.atoms() {
                let cell: Vec<i64> = others.iter().map(|&j| ceil_i64(&(&x[j] / eps - &half))).collect();
                let mut corner = vec![0i64; n];
                for (&i, &c) in axes.iter().zip(&c_axes) {
                    corner[i] = c;
                }
                for (&j, &c) in others.iter().zip(&cell) {
                    corner[j] = c;
                }
                let key = (axes.clone(), corner);
                match cubes.get_mut(&key) {
                    Some(h) => *h = h.add(g)?,
                    None => {
                        cubes.insert(key, g.clone());
                    }
                }
            }
        }
    }
    let mut terms = Vec::new();
    for ((axes, corner), g) in cubes {
        if g.is_zero() {
            continue;
        }
        let corner: Point = corner.iter().map(|&c| Rational::from_integer(BigInt::from(c)) * eps).collect();
        terms.extend(cube_chain(&g, &corner, &axes, eps)?.into_terms());
    }
    Chain::from_terms(a.group(), n, k, terms)
}

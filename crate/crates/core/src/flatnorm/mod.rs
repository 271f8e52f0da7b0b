//! Flat-norm brackets `lower ≤ F(A) ≤ upper`, where every upper bound comes
//! with a filling `B` and `upper = M(A − ∂B) + M(B)`.
//!
//! Lower bounds: `|χ(A)|` for 0-chains (the exact transport value over ℝ and
//! ℤ), and for k ≥ 1 the larger of `∫_L |χ(A ∩ Π^{-1}x)| dx` over coordinate
//! k-planes and the lower bound of `∂A`. The integral is exact for k ≤ 2 and a
//! midpoint estimate otherwise.

mod mcf;
mod planar;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::coeffgroup::{Group, GroupElement};
use crate::error::{Error, Result};
use crate::numeric::{distance, squared_distance, to_f64, Point, Rational};
use crate::polychain::{Chain, Simplex};
use crate::slicing::{combinations, robust_fiber, slice_fiber, CoordinateProjection};
use crate::zerochain::{cone_flat_bound, ZeroChain};

pub(crate) use planar::planar_fill;

/// Largest 0-chain accepted by [`flat_exact_zero_chain`].
pub const EXACT_ATOM_LIMIT: usize = 12;
/// Largest number of edge labelings tried by the finite-group enumeration.
pub const ENUMERATION_BUDGET: u64 = 2_000_000;
/// Midpoint cells per axis for lower bounds of chains of dimension ≥ 3.
pub const QUADRATURE_CELLS: usize = 8;
const CONE_APEX_LIMIT: usize = 24;

/// A filling `B` of dimension k+1 and the residual `A − ∂B`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub filling: Chain,
    pub residual: Chain,
}

impl Witness {
    /// `M(A − ∂B) + M(B)`.
    pub fn value(&self) -> f64 {
        self.residual.mass() + self.filling.mass()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpperBound {
    pub value: f64,
    pub strategy: &'static str,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatBracket {
    pub lower: f64,
    pub upper: f64,
    pub strategy: &'static str,
    pub witness: Option<Witness>,
}

impl FlatBracket {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn witness_mass(&self) -> f64 {
        self.witness.as_ref().map_or(0.0, |w| w.filling.mass())
    }
}

/// `M(A − ∂B) + M(B)` for a filling `B`.
pub fn evaluate_witness(a: &Chain, b: &Chain) -> Result<f64> {
    Ok(witness(a, b)?.value())
}

fn witness(a: &Chain, b: &Chain) -> Result<Witness> {
    if b.dim() != a.dim() + 1 {
        return Err(Error::DimensionMismatch { expected: a.dim() + 1, found: b.dim() });
    }
    if b.ambient() != a.ambient() {
        return Err(Error::DimensionMismatch { expected: a.ambient(), found: b.ambient() });
    }
    if b.group() != a.group() {
        return Err(Error::GroupMismatch { left: a.group(), right: b.group() });
    }
    let residual = a.sub(&b.boundary()?)?;
    Ok(Witness { filling: b.clone(), residual })
}

fn segment(g: GroupElement, from: &Point, to: &Point) -> (GroupElement, Simplex) {
    (g, Simplex::new(vec![from.clone(), to.clone()]).expect("two points"))
}

fn uses_transport(group: Group) -> bool {
    matches!(group, Group::Reals | Group::Integers)
}

// ---------------------------------------------------------------------------
// 0-chains

/// Transport filling over ℝ or ℤ: positive atoms send to negative atoms along
/// segments at cost `|x − y|`, or to the ground at cost 1.
fn transport_filling(a: &ZeroChain) -> Result<Chain> {
    let group = a.group();
    let atoms = a.atoms();
    let positive: Vec<usize> = (0..atoms.len()).filter(|&i| atoms[i].0.value().is_positive()).collect();
    let negative: Vec<usize> = (0..atoms.len()).filter(|&i| atoms[i].0.value().is_negative()).collect();
    let (s, t, ground_in, ground_out) = (0, 1, 2, 3);
    let node = |k: usize| 4 + k;
    let mut net = mcf::FlowNetwork::new(4 + positive.len() + negative.len());
    let total_neg: Rational = negative.iter().map(|&j| atoms[j].0.value().abs()).sum();
    let total_pos: Rational = positive.iter().map(|&i| atoms[i].0.value().clone()).sum();
    for (k, &i) in positive.iter().enumerate() {
        net.add(s, node(k), Some(atoms[i].0.value().clone()), 0.0);
        net.add(node(k), ground_out, None, 1.0);
    }
    net.add(s, ground_in, Some(total_neg), 0.0);
    net.add(ground_in, ground_out, None, 0.0);
    net.add(ground_out, t, Some(total_pos), 0.0);
    let mut pairs = Vec::new();
    for (l, &j) in negative.iter().enumerate() {
        let nj = node(positive.len() + l);
        net.add(ground_in, nj, None, 1.0);
        net.add(nj, t, Some(atoms[j].0.value().abs()), 0.0);
        for (k, &i) in positive.iter().enumerate() {
            let d = distance(&atoms[i].1, &atoms[j].1);
            pairs.push((net.add(node(k), nj, None, d), i, j));
        }
    }
    net.run(s, t);
    let mut terms = Vec::new();
    for (arc, i, j) in pairs {
        let f = net.flow(arc);
        if !f.is_zero() {
            terms.push(segment(group.element(f.clone())?, &atoms[j].1, &atoms[i].1));
        }
    }
    Chain::from_terms(group, a.ambient(), 1, terms)
}

/// Exhaustive search over labelings of the complete graph by `ℤ/p`.
fn enumeration_filling(a: &ZeroChain, p: u64) -> Result<Chain> {
    let atoms = a.atoms();
    let n = atoms.len();
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let labelings = (p as f64).powi(edges.len() as i32);
    if labelings > ENUMERATION_BUDGET as f64 {
        return Err(Error::Unsupported(alloc::format!(
            "{} edge labelings over Z/{p} exceed the enumeration budget",
            labelings
        )));
    }
    let p_i = p as i64;
    let value = |g: &GroupElement| g.value().to_integer().to_i64().expect("residue fits in i64");
    let base: Vec<i64> = atoms.iter().map(|(g, _)| value(g)).collect();
    let lengths: Vec<f64> = edges.iter().map(|&(i, j)| distance(&atoms[i].1, &atoms[j].1)).collect();
    let norm = |r: i64| {
        let r = r.rem_euclid(p_i);
        r.min(p_i - r) as f64
    };
    let mut labels = vec![0i64; edges.len()];
    let mut best = (f64::INFINITY, labels.clone());
    loop {
        let mut residual = base.clone();
        let mut cost = 0.0;
        for (e, &(i, j)) in edges.iter().enumerate() {
            // B ∋ f[x_i, x_j] with ∂ = f[x_j] − f[x_i].
            residual[j] -= labels[e];
            residual[i] += labels[e];
            cost += norm(labels[e]) * lengths[e];
        }
        cost += residual.iter().map(|&r| norm(r)).sum::<f64>();
        if cost < best.0 {
            best = (cost, labels.clone());
        }
        let Some(pos) = labels.iter().position(|&l| l + 1 < p_i) else {
            break;
        };
        for l in labels.iter_mut().take(pos) {
            *l = 0;
        }
        labels[pos] += 1;
    }
    let group = a.group();
    let terms = edges
        .iter()
        .zip(&best.1)
        .filter(|(_, &l)| l != 0)
        .map(|(&(i, j), &l)| segment(group.from_int(l), &atoms[i].1, &atoms[j].1))
        .collect();
    Chain::from_terms(group, a.ambient(), 1, terms)
}

/// Forest fillings from Kruskal's order: after each merge, every component is
/// drained along its spanning tree into the root that minimizes the cost.
fn tree_fillings(a: &ZeroChain) -> Result<Vec<Chain>> {
    let atoms = a.atoms();
    let n = atoms.len();
    let group = a.group();
    let mut pairs: Vec<(Rational, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (squared_distance(&atoms[i].1, &atoms[j].1), i, j))
        .collect();
    pairs.sort();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut forest: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        parent[ri] = rj;
        forest.push((i, j));
        out.push(drain_forest(a, &forest, group)?);
    }
    Ok(out)
}

fn drain_forest(a: &ZeroChain, forest: &[(usize, usize)], group: Group) -> Result<Chain> {
    let atoms = a.atoms();
    let n = atoms.len();
    let mut adjacent = vec![Vec::new(); n];
    for &(i, j) in forest {
        adjacent[i].push(j);
        adjacent[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut terms = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut component = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < component.len() {
            for &v in &adjacent[component[k]] {
                if !seen[v] {
                    seen[v] = true;
                    component.push(v);
                }
            }
            k += 1;
        }
        if component.len() == 1 {
            continue;
        }
        let mut best: Option<(f64, Vec<(GroupElement, Simplex)>)> = None;
        for &root in &component {
            let drained = drain_tree(a, &adjacent, root)?;
            let cost: f64 = drained.iter().map(|(g, s)| g.norm() * s.volume()).sum();
            if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                best = Some((cost, drained));
            }
        }
        terms.extend(best.expect("nonempty component").1);
    }
    Chain::from_terms(group, a.ambient(), 1, terms)
}

/// Segments moving each subtree's total coefficient to its parent.
fn drain_tree(a: &ZeroChain, adjacent: &[Vec<usize>], root: usize) -> Result<Vec<(GroupElement, Simplex)>> {
    let atoms = a.atoms();
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; atoms.len()];
    parent[root] = root;
    let mut k = 0;
    while k < order.len() {
        let u = order[k];
        for &v in &adjacent[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                order.push(v);
            }
        }
        k += 1;
    }
    let mut sums: Vec<GroupElement> = atoms.iter().map(|(g, _)| g.clone()).collect();
    let mut terms = Vec::new();
    for &v in order.iter().skip(1).rev() {
        let p = parent[v];
        let s = sums[v].clone();
        sums[p] = sums[p].add(&s)?;
        if !s.is_zero() {
            terms.push(segment(s, &atoms[p].1, &atoms[v].1));
        }
    }
    Ok(terms)
}

/// Moves `2^{-j}` of each atom's coefficient to its nearest neighbour.
fn dyadic_split_fillings(a: &ZeroChain) -> Result<Vec<Chain>> {
    let atoms = a.atoms();
    let mut out = Vec::new();
    if atoms.len() < 2 || !a.group().divisible_by(2) {
        return Ok(out);
    }
    for j in 1..=3u32 {
        let mut terms = Vec::new();
        for (i, (g, x)) in atoms.iter().enumerate() {
            let nearest = (0..atoms.len())
                .filter(|&k| k != i)
                .min_by(|&k, &l| squared_distance(x, &atoms[k].1).cmp(&squared_distance(x, &atoms[l].1)))
                .expect("two atoms");
            let part = g.divide(1 << j)?;
            terms.push(segment(part, &atoms[nearest].1, x));
        }
        out.push(Chain::from_terms(a.group(), a.ambient(), 1, terms)?);
    }
    Ok(out)
}

/// `F(A)` for 0-chains, exact over fillings by segments between atoms.
///
/// Over ℝ and ℤ the value is the optimal transport cost with unit disposal
/// cost, which is the flat norm itself. Over `ℤ/p` all edge labelings are
/// enumerated. Other groups, larger inputs, or an exhausted budget give
/// [`Error::Unsupported`].
pub fn flat_exact_zero_chain(a: &ZeroChain) -> Result<f64> {
    if a.len() > EXACT_ATOM_LIMIT {
        return Err(Error::Unsupported(alloc::format!(
            "exact flat norm is limited to {EXACT_ATOM_LIMIT} atoms, got {}",
            a.len()
        )));
    }
    let chain = a.to_chain();
    match a.group() {
        g if uses_transport(g) => evaluate_witness(&chain, &transport_filling(a)?),
        Group::IntegersModP(p) => evaluate_witness(&chain, &enumeration_filling(a, p)?),
        g => Err(Error::Unsupported(alloc::format!("no exact flat-norm oracle over {g}"))),
    }
}

fn zero_chain_candidates(a: &ZeroChain) -> Result<Vec<(&'static str, Chain)>> {
    let mut out = Vec::new();
    if a.is_zero() {
        return Ok(out);
    }
    if let Some(c) = a.centroid() {
        out.push(("cone-centroid", cone_flat_bound(a, &c)?.cone));
    }
    for (_, x) in a.atoms().iter().take(CONE_APEX_LIMIT) {
        out.push(("cone-atom", cone_flat_bound(a, x)?.cone));
    }
    for f in tree_fillings(a)? {
        out.push(("spanning-forest", f));
    }
    for f in dyadic_split_fillings(a)? {
        out.push(("dyadic-split", f));
    }
    match a.group() {
        g if uses_transport(g) => out.push(("transport", transport_filling(a)?)),
        Group::IntegersModP(p) => match enumeration_filling(a, p) {
            Ok(f) => out.push(("enumeration", f)),
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        },
        _ => {}
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// k-chains, k ≥ 1

/// The cone `x ⨯ A`, with `∂(x ⨯ A) = A − x ⨯ ∂A` for k ≥ 1.
fn cone_over(a: &Chain, x: &Point) -> Result<Chain> {
    let terms = a
        .terms()
        .iter()
        .map(|(g, s)| {
            let mut vs = vec![x.clone()];
            vs.extend(s.vertices().iter().cloned());
            (g.clone(), Simplex::new(vs).expect("consistent dimensions"))
        })
        .collect();
    Chain::from_terms(a.group(), a.ambient(), a.dim() + 1, terms)
}

fn centroid(points: &[Point]) -> Option<Point> {
    let first = points.first()?;
    let count = Rational::from_integer(BigInt::from(points.len()));
    Some((0..first.len()).map(|i| points.iter().map(|p| p[i].clone()).sum::<Rational>() / &count).collect())
}

/// Closes a planar 1-chain by a filling `W` of its boundary, then fills the
/// resulting cycle: `A − ∂B = W`.
fn planar_candidates(a: &Chain) -> Result<Vec<Chain>> {
    let boundary = ZeroChain::from_chain(&a.boundary()?)?;
    let mut closings = vec![Chain::zero(a.group(), 2, 1)];
    if !boundary.is_zero() {
        closings.push(best_upper(&boundary.to_chain())?.witness.filling);
    }
    let mut out = Vec::new();
    for w in closings {
        let rest = ZeroChain::from_chain(&boundary.to_chain().sub(&w.boundary()?)?)?;
        let w = match rest.centroid() {
            Some(c) => w.add(&cone_flat_bound(&rest, &c)?.cone)?,
            None => w,
        };
        let cycle = a.sub(&w)?;
        match planar_fill(&cycle) {
            Ok(b) => out.push(b),
            Err(Error::Overlap { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn chain_candidates(a: &Chain) -> Result<Vec<(&'static str, Chain)>> {
    if a.dim() == 0 {
        return zero_chain_candidates(&ZeroChain::from_chain(a)?);
    }
    let mut out = Vec::new();
    if a.is_zero() || a.dim() + 1 > a.ambient() {
        return Ok(out);
    }
    let points = a.support_points();
    let mut apexes: Vec<(&'static str, Point)> = Vec::new();
    if let Some(c) = centroid(&points) {
        apexes.push(("cone-centroid", c));
    }
    apexes.extend(points.into_iter().take(CONE_APEX_LIMIT).map(|p| ("cone-vertex", p)));
    for (name, x) in apexes {
        match cone_over(a, &x) {
            Ok(c) => out.push((name, c)),
            Err(Error::Overlap { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if a.dim() == 1 && a.ambient() == 2 {
        for b in planar_candidates(a)? {
            out.push(("planar-fill", b));
        }
    }
    Ok(out)
}

fn best_upper_with(a: &Chain, hints: &[Chain]) -> Result<UpperBound> {
    let zero = Chain::zero(a.group(), a.ambient(), a.dim() + 1);
    let mut best = UpperBound { value: a.mass(), strategy: "mass", witness: witness(a, &zero)? };
    let mut candidates = chain_candidates(a)?;
    candidates.extend(hints.iter().map(|h| ("hint", h.clone())));
    for (name, b) in candidates {
        let w = match witness(a, &b) {
            Ok(w) => w,
            Err(Error::Overlap { .. }) => continue,
            Err(e) => return Err(e),
        };
        let value = w.value();
        if value < best.value {
            best = UpperBound { value, strategy: name, witness: w };
        }
    }
    Ok(best)
}

fn best_upper(a: &Chain) -> Result<UpperBound> {
    best_upper_with(a, &[])
}

/// The best witnessed upper bound over: `B = 0`, cones, spanning forests and
/// coefficient splits (k = 0), exact transport (ℝ, ℤ) or enumeration (`ℤ/p`)
/// for 0-chains, and closed planar fillings for 1-chains in the plane.
pub fn flat_upper_bound(a: &Chain) -> Result<UpperBound> {
    best_upper(a)
}

/// As [`flat_upper_bound`], also trying the given fillings.
pub fn flat_upper_bound_with_hints(a: &Chain, hints: &[Chain]) -> Result<UpperBound> {
    best_upper_with(a, hints)
}

// ---------------------------------------------------------------------------
// Lower bounds

fn chi_norm(fiber: &Chain) -> Result<Rational> {
    Ok(ZeroChain::from_chain(fiber)?.chi().norm_rational())
}

/// `∫ |χ(A ∩ Π^{-1}x)| dx` along one coordinate axis, exact: the integrand is
/// constant between projected vertices.
fn axis_integral(a: &Chain, axis: usize) -> Result<Rational> {
    let projection = CoordinateProjection::new(a.ambient(), vec![axis])?;
    let mut cuts: Vec<Rational> = a.support_points().into_iter().map(|p| p[axis].clone()).collect();
    cuts.sort();
    cuts.dedup();
    let two = Rational::from_integer(2.into());
    let mut total = Rational::zero();
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        let fiber = slice_fiber(a, &projection, &[mid])?;
        total += chi_norm(&fiber)? * (&w[1] - &w[0]);
    }
    Ok(total)
}

/// The same integral over a coordinate 2-plane, exact: the integrand is
/// constant on the cells of the arrangement of projected edges.
fn plane_integral(a: &Chain, axes: [usize; 2]) -> Result<Rational> {
    let projection = CoordinateProjection::new(a.ambient(), axes.to_vec())?;
    let mut segments = Vec::new();
    for (_, s) in a.terms() {
        let v = s.vertices();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let p = (v[i][axes[0]].clone(), v[i][axes[1]].clone());
                let q = (v[j][axes[0]].clone(), v[j][axes[1]].clone());
                if p != q {
                    segments.push(planar::Segment::new(p, q));
                }
            }
        }
    }
    let two = Rational::from_integer(2.into());
    let mut total = Rational::zero();
    for slab in planar::slabs(&segments) {
        let width = &slab.xr - &slab.xl;
        for pair in slab.layers.windows(2) {
            let (lo, hi) = (&pair[0].2, &pair[1].2);
            if lo == hi {
                continue;
            }
            let y = (lo + hi) / &two;
            let fiber = slice_fiber(a, &projection, &[slab.mid.clone(), y])?;
            total += chi_norm(&fiber)? * &width * (hi - lo);
        }
    }
    Ok(total)
}

/// Midpoint estimate of the integral over a coordinate k-plane.
fn quadrature_integral(a: &Chain, axes: &[usize], cells: usize) -> Result<Rational> {
    let projection = CoordinateProjection::new(a.ambient(), axes.to_vec())?;
    let points = a.support_points();
    let count = Rational::from_integer(BigInt::from(cells));
    let lo: Vec<Rational> = axes.iter().map(|&i| points.iter().map(|p| p[i].clone()).min().expect("support")).collect();
    let hi: Vec<Rational> = axes.iter().map(|&i| points.iter().map(|p| p[i].clone()).max().expect("support")).collect();
    let widths: Vec<Rational> = lo.iter().zip(&hi).map(|(l, h)| (h - l) / &count).collect();
    if widths.iter().any(Zero::is_zero) {
        return Ok(Rational::zero());
    }
    let cell: Rational = widths.iter().product();
    let half = Rational::new(1.into(), 2.into());
    let mut total = Rational::zero();
    let mut index = vec![0usize; axes.len()];
    loop {
        let x: Point = index
            .iter()
            .enumerate()
            .map(|(t, &i)| &lo[t] + &widths[t] * (Rational::from_integer(BigInt::from(i)) + &half))
            .collect();
        let (_, fiber) = robust_fiber(a, &projection, &x, &widths[0])?;
        total += chi_norm(&fiber)?;
        let Some(t) = index.iter().position(|&i| i + 1 < cells) else {
            break;
        };
        for i in index.iter_mut().take(t) {
            *i = 0;
        }
        index[t] += 1;
    }
    Ok(total * cell)
}

fn slice_integral(a: &Chain) -> Result<Rational> {
    let mut best = Rational::zero();
    for axes in combinations(a.ambient(), a.dim()) {
        let value = match axes.as_slice() {
            [i] => axis_integral(a, *i)?,
            [i, j] => plane_integral(a, [*i, *j])?,
            _ => quadrature_integral(a, &axes, QUADRATURE_CELLS)?,
        };
        if value > best {
            best = value;
        }
    }
    Ok(best)
}

/// A lower bound for `F(A)`; see the module documentation.
pub fn flat_lower_bound(a: &Chain) -> Result<f64> {
    if a.is_zero() {
        return Ok(0.0);
    }
    if a.dim() == 0 {
        let z = ZeroChain::from_chain(a)?;
        if uses_transport(a.group()) {
            return evaluate_witness(a, &transport_filling(&z)?);
        }
        return Ok(z.chi().norm());
    }
    let slices = to_f64(&slice_integral(a)?);
    Ok(slices.max(flat_lower_bound(&a.boundary()?)?))
}

pub fn flat_bracket(a: &Chain) -> Result<FlatBracket> {
    let upper = flat_upper_bound(a)?;
    let lower = flat_lower_bound(a)?;
    Ok(FlatBracket { lower, upper: upper.value, strategy: upper.strategy, witness: Some(upper.witness) })
}

/// Bracket of `F(A − B)`.
pub fn flat_distance(a: &Chain, b: &Chain) -> Result<FlatBracket> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    flat_bracket(&a.sub(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, int_point, rat};

    fn atoms(group: Group, list: &[(i64, &[i64])]) -> ZeroChain {
        ZeroChain::new(group, list[0].1.len(), list.iter().map(|(g, x)| (group.from_int(*g), int_point(x))).collect())
            .unwrap()
    }

    #[test]
    fn single_atom() {
        for g in [Group::Integers, Group::Reals, Group::IntegersModP(5), Group::PAdicRationals(3)] {
            let a = atoms(g, &[(2, &[1, 1])]).to_chain();
            let b = flat_bracket(&a).unwrap();
            let expected = g.from_int(2).norm();
            assert_eq!(b.lower, expected);
            assert_eq!(b.upper, expected);
        }
    }

    #[test]
    fn dipoles() {
        let near = atoms(Group::Reals, &[(3, &[0, 0]), (-3, &[1, 0])]);
        assert_eq!(flat_exact_zero_chain(&near).unwrap(), 3.0);
        let far = atoms(Group::Reals, &[(3, &[0, 0]), (-3, &[3, 0])]);
        assert_eq!(flat_exact_zero_chain(&far).unwrap(), 6.0);
        let b = flat_bracket(&far.to_chain()).unwrap();
        assert_eq!((b.lower, b.upper), (6.0, 6.0));
        assert_eq!(flat_exact_zero_chain(&ZeroChain::zero(Group::Integers, 2)).unwrap(), 0.0);
    }

    #[test]
    fn mod_p_enumeration_uses_wraparound() {
        // Over Z/3, 1[x] + 2[y] cancel along the segment of length 1/2.
        let a = ZeroChain::new(
            Group::IntegersModP(3),
            1,
            vec![(Group::IntegersModP(3).from_int(1), vec![int(0)]), (Group::IntegersModP(3).from_int(2), vec![rat(1, 2)])],
        )
        .unwrap();
        assert_eq!(flat_exact_zero_chain(&a).unwrap(), 0.5);
    }

    #[test]
    fn axis_segment_bounds() {
        let g = Group::Reals.from_int(3);
        let seg = Chain::single(g, Simplex::new(vec![int_point(&[0, 0]), int_point(&[1, 0])]).unwrap()).unwrap();
        let b = flat_bracket(&seg).unwrap();
        assert_eq!(b.lower, 3.0);
        assert_eq!(b.upper, 3.0);
        assert!((b.witness.unwrap().value() - b.upper).abs() < 1e-12);
    }

    #[test]
    fn triangle_bounds_are_tight() {
        let t = Chain::single(
            Group::Integers.from_int(2),
            Simplex::new(vec![int_point(&[0, 0]), int_point(&[2, 0]), int_point(&[0, 2])]).unwrap(),
        )
        .unwrap();
        let b = flat_bracket(&t).unwrap();
        assert_eq!(b.lower, 4.0);
        assert_eq!(b.upper, 4.0);
        let cycle = t.boundary().unwrap();
        let c = flat_bracket(&cycle).unwrap();
        assert!(c.lower <= c.upper);
        assert!(c.upper <= 4.0 + 1e-12);
    }
}

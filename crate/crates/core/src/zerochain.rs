//! Atomic 0-chains, the augmentation `χ`, cone fillings, and group-valued
//! measures on half-open dyadic cubes.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::coeffgroup::{norm_sum, Group, GroupElement};
use crate::error::{Error, Result};
use crate::numeric::{dyadic_unit, squared_distance, Point, Rational};
use crate::polychain::{Chain, Simplex};

/// `Σ g_i [x_i]` with distinct points and nonzero coefficients, sorted by point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroChain {
    group: Group,
    ambient: usize,
    atoms: Vec<(GroupElement, Point)>,
}

impl ZeroChain {
    /// Merges repeated points and drops zero coefficients.
    pub fn new(group: Group, ambient: usize, atoms: Vec<(GroupElement, Point)>) -> Result<ZeroChain> {
        let mut merged: BTreeMap<Point, GroupElement> = BTreeMap::new();
        for (g, x) in atoms {
            if g.group() != group {
                return Err(Error::GroupMismatch { left: group, right: g.group() });
            }
            if x.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: x.len() });
            }
            match merged.get_mut(&x) {
                Some(h) => *h = h.add(&g)?,
                None => {
                    merged.insert(x, g);
                }
            }
        }
        let atoms = merged.into_iter().filter(|(_, g)| !g.is_zero()).map(|(x, g)| (g, x)).collect();
        Ok(ZeroChain { group, ambient, atoms })
    }

    pub fn zero(group: Group, ambient: usize) -> ZeroChain {
        ZeroChain { group, ambient, atoms: Vec::new() }
    }

    pub fn from_chain(chain: &Chain) -> Result<ZeroChain> {
        if chain.dim() != 0 {
            return Err(Error::DimensionMismatch { expected: 0, found: chain.dim() });
        }
        let atoms = chain.terms().iter().map(|(g, s)| (g.clone(), s.vertices()[0].clone())).collect();
        ZeroChain::new(chain.group(), chain.ambient(), atoms)
    }

    pub fn to_chain(&self) -> Chain {
        let terms = self
            .atoms
            .iter()
            .map(|(g, x)| (g.clone(), Simplex::new(vec![x.clone()]).expect("one vertex")))
            .collect();
        Chain::new(self.group, self.ambient, 0, terms).expect("atoms form a valid 0-chain")
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn atoms(&self) -> &[(GroupElement, Point)] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `χ(A) = Σ g_i`.
    pub fn chi(&self) -> GroupElement {
        self.atoms
            .iter()
            .fold(self.group.zero(), |acc, (g, _)| acc.add(g).expect("one group"))
    }

    /// `Σ |g_i|`.
    pub fn mass(&self) -> f64 {
        norm_sum(self.atoms.iter().map(|(g, _)| g))
    }

    pub fn max_norm(&self) -> f64 {
        self.atoms.iter().map(|(g, _)| g.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &ZeroChain) -> Result<ZeroChain> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch { left: self.group, right: other.group });
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        ZeroChain::new(self.group, self.ambient, atoms)
    }

    pub fn neg(&self) -> ZeroChain {
        ZeroChain {
            atoms: self.atoms.iter().map(|(g, x)| (g.neg(), x.clone())).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &ZeroChain) -> Result<ZeroChain> {
        self.add(&other.neg())
    }

    pub fn support_diameter(&self) -> f64 {
        self.to_chain().support_diameter().1
    }

    /// Coordinatewise mean of the support points.
    pub fn centroid(&self) -> Option<Point> {
        let n = self.atoms.len();
        if n == 0 {
            return None;
        }
        let count = Rational::from_integer(BigInt::from(n));
        Some(
            (0..self.ambient)
                .map(|i| self.atoms.iter().map(|(_, x)| x[i].clone()).sum::<Rational>() / &count)
                .collect(),
        )
    }
}

pub fn chi(a: &ZeroChain) -> GroupElement {
    a.chi()
}

/// The cone `C = Σ g_i [x, x_i]` over a 0-chain and the flat-norm bound it
/// certifies: `A = ∂C + χ(A)[x]`, so `F(A) ≤ |χ(A)| + M(C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeBound {
    pub bound: f64,
    pub cone: Chain,
    pub chi: GroupElement,
}

pub fn cone_flat_bound(a: &ZeroChain, vertex: &[Rational]) -> Result<ConeBound> {
    if vertex.len() != a.ambient {
        return Err(Error::DimensionMismatch { expected: a.ambient, found: vertex.len() });
    }
    let terms = a
        .atoms
        .iter()
        .map(|(g, x)| (g.clone(), Simplex::new(vec![vertex.to_vec(), x.clone()]).expect("two points")))
        .collect();
    let cone = Chain::from_terms(a.group, a.ambient, 1, terms)?;
    let chi = a.chi();
    let expected = a.sub(&ZeroChain::new(a.group, a.ambient, vec![(chi.clone(), vertex.to_vec())])?)?;
    if ZeroChain::from_chain(&cone.boundary()?)? != expected {
        return Err(Error::BoundaryMismatch("cone boundary differs from A - chi(A)[x]".to_string()));
    }
    let bound = crate::numeric::to_f64(&(chi.norm_rational() + crate::numeric::f64_to_rational(cone.mass())));
    Ok(ConeBound { bound, cone, chi })
}

/// Atoms by nonincreasing norm, ties in lexicographic order of points.
pub fn canonical_representation(a: &ZeroChain) -> Vec<(GroupElement, Point)> {
    let mut atoms = a.atoms.clone();
    atoms.sort_by(|(g, x), (h, y)| match h.norm_cmp(g) {
        Ordering::Equal => x.cmp(y),
        other => other,
    });
    atoms
}

/// Index of the half-open level-n dyadic cube `Π (j_i 2^{-n}, (j_i + 1) 2^{-n}]`
/// containing `x`: `j_i = ⌈x_i 2^n⌉ − 1`.
pub fn cube_index(x: &[Rational], level: u32) -> Vec<i64> {
    let scale = Rational::from_integer(BigInt::one() << level as usize);
    x.iter()
        .map(|c| ((c * &scale).ceil().to_integer() - BigInt::one()).to_i64().expect("cube index fits in i64"))
        .collect()
}

/// Index of the level-`coarse` ancestor of a level-`fine` cube.
pub fn parent_index(index: &[i64], fine: u32, coarse: u32) -> Vec<i64> {
    let shift = fine - coarse;
    index.iter().map(|&j| Integer::div_floor(&j, &(1i64 << shift))).collect()
}

pub fn cube_center(index: &[i64], level: u32) -> Point {
    let unit = dyadic_unit(level);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    index
        .iter()
        .map(|&j| (Rational::from_integer(BigInt::from(j)) + &half) * &unit)
        .collect()
}

/// Lower and upper corners of a cube.
pub fn cube_bounds(index: &[i64], level: u32) -> (Point, Point) {
    let unit = dyadic_unit(level);
    let lo = index.iter().map(|&j| Rational::from_integer(BigInt::from(j)) * &unit).collect();
    let hi = index.iter().map(|&j| Rational::from_integer(BigInt::from(j + 1)) * &unit).collect();
    (lo, hi)
}

/// A group-valued measure: an atomic part plus values on the half-open
/// dyadic cubes of one finest level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMeasure {
    group: Group,
    ambient: usize,
    level: u32,
    cubes: BTreeMap<Vec<i64>, GroupElement>,
    atoms: Vec<(GroupElement, Point)>,
}

impl GMeasure {
    pub fn new(
        group: Group,
        ambient: usize,
        level: u32,
        cubes: Vec<(Vec<i64>, GroupElement)>,
        atoms: Vec<(GroupElement, Point)>,
    ) -> Result<GMeasure> {
        if level > 60 {
            return Err(Error::InvalidArgument(alloc::format!("level {level} is too fine")));
        }
        let mut map: BTreeMap<Vec<i64>, GroupElement> = BTreeMap::new();
        for (index, g) in cubes {
            if index.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: index.len() });
            }
            if g.group() != group {
                return Err(Error::GroupMismatch { left: group, right: g.group() });
            }
            match map.get_mut(&index) {
                Some(h) => *h = h.add(&g)?,
                None => {
                    map.insert(index, g);
                }
            }
        }
        map.retain(|_, g| !g.is_zero());
        let atoms = ZeroChain::new(group, ambient, atoms)?.atoms;
        Ok(GMeasure { group, ambient, level, cubes: map, atoms })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn cubes(&self) -> &BTreeMap<Vec<i64>, GroupElement> {
        &self.cubes
    }

    pub fn atoms(&self) -> &[(GroupElement, Point)] {
        &self.atoms
    }

    pub fn is_atomic(&self) -> bool {
        self.cubes.is_empty()
    }

    /// `Σ |ν(Q)| + Σ |g_i|` at the stored resolution.
    pub fn total_variation(&self) -> f64 {
        norm_sum(self.cubes.values().chain(self.atoms.iter().map(|(g, _)| g)))
    }

    /// Cube values `ν(Q)` at `level`, atoms folded into their cubes. Levels
    /// finer than the stored one are only defined for purely atomic measures.
    pub fn aggregate(&self, level: u32) -> Result<BTreeMap<Vec<i64>, GroupElement>> {
        if level > self.level && !self.cubes.is_empty() {
            return Err(Error::LevelBeyondResolution { resolved: self.level, requested: level });
        }
        let mut out: BTreeMap<Vec<i64>, GroupElement> = BTreeMap::new();
        let cube_values = self.cubes.iter().map(|(j, g)| (parent_index(j, self.level, level), g));
        let atom_values = self.atoms.iter().map(|(g, x)| (cube_index(x, level), g));
        for (index, g) in cube_values.chain(atom_values) {
            match out.get_mut(&index) {
                Some(h) => *h = h.add(g)?,
                None => {
                    out.insert(index, g.clone());
                }
            }
        }
        out.retain(|_, g| !g.is_zero());
        Ok(out)
    }

    /// Splits every cube evenly into its descendants at a finer level.
    pub fn refine_uniform(&self, level: u32) -> Result<GMeasure> {
        if level < self.level {
            return Err(Error::InvalidArgument("refinement must not coarsen".to_string()));
        }
        let shift = level - self.level;
        let per_axis = 1i64 << shift;
        let count = (per_axis as u64)
            .checked_pow(self.ambient as u32)
            .ok_or_else(|| Error::InvalidArgument("refinement too fine".to_string()))?;
        let mut cubes = Vec::new();
        for (index, g) in &self.cubes {
            let part = g.divide(count)?;
            for k in 0..count {
                let mut rest = k;
                let child: Vec<i64> = index
                    .iter()
                    .map(|&j| {
                        let offset = (rest % per_axis as u64) as i64;
                        rest /= per_axis as u64;
                        j * per_axis + offset
                    })
                    .collect();
                cubes.push((child, part.clone()));
            }
        }
        GMeasure::new(self.group, self.ambient, level, cubes, self.atoms.clone())
    }
}

/// One level of the dyadic approximation: `A_n`, the connecting chain `T_n`
/// with `∂T_n = A_n − A_{n−1}` (absent at level 0), and `M(T_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicLevel {
    pub level: u32,
    pub chain: ZeroChain,
    pub connector: Option<Chain>,
    pub cauchy_bound: f64,
}

/// `A_n = Σ ν(Q) [z_Q]` and `T_n = Σ ν(Q) [z'_Q, z_Q]` for `n = 0..=n_max`,
/// where `z_Q` is the center of `Q` and `z'_Q` that of its parent.
pub fn measure_to_chain_dyadic(nu: &GMeasure, n_max: u32) -> Result<Vec<DyadicLevel>> {
    let mut levels: Vec<DyadicLevel> = Vec::new();
    for n in 0..=n_max {
        let values = nu.aggregate(n)?;
        let atoms = values.iter().map(|(j, g)| (g.clone(), cube_center(j, n))).collect();
        let chain = ZeroChain::new(nu.group, nu.ambient, atoms)?;
        let (connector, cauchy_bound) = if n == 0 {
            (None, 0.0)
        } else {
            let terms = values
                .iter()
                .map(|(j, g)| {
                    let parent = cube_center(&parent_index(j, n, n - 1), n - 1);
                    (g.clone(), Simplex::new(vec![parent, cube_center(j, n)]).expect("two points"))
                })
                .collect();
            let t = Chain::new(nu.group, nu.ambient, 1, terms)?;
            let mass = t.mass();
            (Some(t), mass)
        };
        levels.push(DyadicLevel { level: n, chain, connector, cauchy_bound });
    }
    Ok(levels)
}

/// `Q ↦ χ(A ⌞ Q)` on the level-n cubes.
pub fn chain_to_measure(a: &ZeroChain, level: u32) -> Result<GMeasure> {
    let cubes = a.atoms.iter().map(|(g, x)| (cube_index(x, level), g.clone())).collect();
    GMeasure::new(a.group, a.ambient, level, cubes, Vec::new())
}

/// Whether all atoms lie in pairwise distinct level-n cubes.
pub fn atoms_separated(a: &ZeroChain, level: u32) -> bool {
    let mut seen: Vec<Vec<i64>> = a.atoms.iter().map(|(_, x)| cube_index(x, level)).collect();
    seen.sort();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Coarsest level at which distinct atoms occupy distinct cubes.
pub fn separation_level(a: &ZeroChain) -> u32 {
    let mut min_sq: Option<Rational> = None;
    for i in 0..a.atoms.len() {
        for j in i + 1..a.atoms.len() {
            let d = squared_distance(&a.atoms[i].1, &a.atoms[j].1);
            if min_sq.as_ref().map_or(true, |m| &d < m) {
                min_sq = Some(d);
            }
        }
    }
    let mut level = 0;
    if min_sq.is_some() {
        while !atoms_separated(a, level) && level < 60 {
            level += 1;
        }
    }
    level
}

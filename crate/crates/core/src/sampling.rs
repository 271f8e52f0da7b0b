//! Seeded random instances: coefficients, points, chains, planes, and
//! dyadic measures with small rational data.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::Rng;

use crate::coeffgroup::{Group, GroupElement};
use crate::error::Result;
use crate::numeric::{Point, Rational};
use crate::polychain::{Chain, Simplex};
use crate::slicing::OrientedAffinePlane;
use crate::zerochain::{GMeasure, ZeroChain};

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-bound * den..=bound * den)), BigInt::from(den))
}

/// A point of `[−bound, bound]^n` on the lattice `(1/den)ℤ^n`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize, bound: i64, den: i64) -> Point {
    (0..n).map(|_| random_rational(rng, bound, den)).collect()
}

/// A small element: integers in `[−6, 6]` for discrete groups, otherwise
/// fractions with denominators up to 4.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, group: Group) -> GroupElement {
    match group {
        Group::Integers | Group::IntegersModP(_) | Group::PAdicIntegers(_) => group.from_int(rng.gen_range(-6..=6)),
        _ => {
            let den = rng.gen_range(1..=4);
            let value = Rational::new(BigInt::from(rng.gen_range(-12..=12)), BigInt::from(den));
            group.element(value).expect("fractions with small denominators")
        }
    }
}

pub fn random_nonzero_element<R: Rng + ?Sized>(rng: &mut R, group: Group) -> GroupElement {
    loop {
        let g = random_element(rng, group);
        if !g.is_zero() {
            return g;
        }
    }
}

pub fn random_zero_chain<R: Rng + ?Sized>(rng: &mut R, group: Group, atoms: usize, n: usize) -> Result<ZeroChain> {
    let list = (0..atoms).map(|_| (random_element(rng, group), random_point(rng, n, 4, 2))).collect();
    ZeroChain::new(group, n, list)
}

/// A sum of `count` random segments; collinear overlaps are merged.
pub fn random_segments<R: Rng + ?Sized>(rng: &mut R, group: Group, count: usize, n: usize) -> Result<Chain> {
    let mut terms = Vec::new();
    while terms.len() < count {
        let a = random_point(rng, n, 4, 2);
        let b = random_point(rng, n, 4, 2);
        if a != b {
            terms.push((random_nonzero_element(rng, group), Simplex::new(vec![a, b])?));
        }
    }
    Chain::from_terms(group, n, 1, terms)
}

/// A polygonal path through `vertices` random points, with random
/// coefficients per edge.
pub fn random_path<R: Rng + ?Sized>(rng: &mut R, group: Group, vertices: usize, n: usize) -> Result<Chain> {
    let mut points: Vec<Point> = Vec::new();
    while points.len() < vertices.max(2) {
        let p = random_point(rng, n, 4, 3);
        if points.last() != Some(&p) {
            points.push(p);
        }
    }
    let terms = points
        .windows(2)
        .map(|w| Ok((random_nonzero_element(rng, group), Simplex::new(w.to_vec())?)))
        .collect::<Result<Vec<_>>>()?;
    Chain::from_terms(group, n, 1, terms)
}

/// Up to `count` random nondegenerate k-simplices, each inside its own unit
/// cell of `ℤ^n` so that interiors never overlap.
pub fn random_simplices<R: Rng + ?Sized>(rng: &mut R, group: Group, count: usize, k: usize, n: usize) -> Result<Chain> {
    let mut terms = Vec::new();
    for cell in 0..count {
        let mut offset = vec![Rational::from_integer(BigInt::from(0)); n];
        offset[0] = Rational::from_integer(BigInt::from(2 * cell as i64));
        for _ in 0..16 {
            let vs: Vec<Point> = (0..=k)
                .map(|_| {
                    (0..n)
                        .map(|i| &offset[i] + Rational::new(BigInt::from(rng.gen_range(0..=8)), BigInt::from(8)))
                        .collect()
                })
                .collect();
            let s = Simplex::new(vs)?;
            if !s.is_degenerate() {
                terms.push((random_nonzero_element(rng, group), s));
                break;
            }
        }
    }
    Chain::from_terms(group, n, k, terms)
}

/// An m-plane with a random base and random integer directions.
pub fn random_plane<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> OrientedAffinePlane {
    loop {
        let base = random_point(rng, n, 3, 7);
        let dirs: Vec<Point> = (0..m)
            .map(|_| (0..n).map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-3..=3)))).collect())
            .collect();
        if let Ok(p) = OrientedAffinePlane::new(base, dirs) {
            return p;
        }
    }
}

/// Random values on `cubes` random cubes of the given level inside `[−1, 1]^n`.
pub fn random_measure<R: Rng + ?Sized>(rng: &mut R, group: Group, n: usize, level: u32, cubes: usize) -> Result<GMeasure> {
    let side = 1i64 << level;
    let list = (0..cubes)
        .map(|_| ((0..n).map(|_| rng.gen_range(-side..side)).collect(), random_element(rng, group)))
        .collect();
    GMeasure::new(group, n, level, list, Vec::new())
}

//! Numerical checks of the structural results: ball growth of 1-chains, the
//! diffuse chain built from a finite-length path, slice statistics, and the
//! per-group rectifiability table.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::coeffgroup::{
    classify_group, dyadic_length_profile, min_nonzero_norm, Alpha, Group, GroupElement, PathSamples,
};
use crate::error::{Error, Result};
use crate::numeric::{dot, f64_to_rational, fsum, sqrt, squared_distance, sub_points, to_f64, Point, Rational};
use crate::polychain::Chain;
use crate::sizefunc::{classify_phi_rectifiability, WeightFunction};
use crate::slicing::{combinations, slice_fiber, CoordinateProjection};
use crate::zerochain::{cube_index, measure_to_chain_dyadic, GMeasure, ZeroChain};

// ---------------------------------------------------------------------------
// Ball growth

/// A 1-chain `T` with `∂T = g[a] + E`, and the radii to test.
#[derive(Clone, Debug, PartialEq)]
pub struct BallGrowthInstance {
    pub t: Chain,
    pub a: Point,
    pub g: GroupElement,
    pub e: ZeroChain,
    pub radii: Vec<f64>,
}

impl BallGrowthInstance {
    /// Splits `∂T` into its coefficient at `a` and the rest.
    pub fn new(t: Chain, a: Point, radii: Vec<f64>) -> Result<Self> {
        if t.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: t.dim() });
        }
        let boundary = ZeroChain::from_chain(&t.boundary()?)?;
        let g = boundary.atoms().iter().find(|(_, x)| *x == a).map_or(t.group().zero(), |(g, _)| g.clone());
        let e = boundary.sub(&ZeroChain::new(t.group(), t.ambient(), vec![(g.clone(), a.clone())])?)?;
        Self::from_parts(t, a, g, e, radii)
    }

    /// Checks `∂T = g[a] + E` exactly.
    pub fn from_parts(t: Chain, a: Point, g: GroupElement, e: ZeroChain, radii: Vec<f64>) -> Result<Self> {
        if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::InvalidArgument("radii must be finite and nonnegative".to_string()));
        }
        let expected = ZeroChain::new(t.group(), t.ambient(), vec![(g.clone(), a.clone())])?.add(&e)?;
        if ZeroChain::from_chain(&t.boundary()?)? != expected {
            return Err(Error::BoundaryMismatch("boundary of T differs from g[a] + E".to_string()));
        }
        Ok(BallGrowthInstance { t, a, g, e, radii })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallGrowthRow {
    pub radius: f64,
    /// `μ_T B(a, R)`.
    pub mass_in_ball: f64,
    /// `μ_E B(a, R)`.
    pub boundary_mass_in_ball: f64,
    /// `R (|g| − μ_E B(a, R))`.
    pub lower_bound: f64,
    /// `∫_0^R |χ((∂T) ⌞ B(a, r))| dr`.
    pub chi_integral: f64,
    pub margin: f64,
}

/// Length of `[p, q] ∩ B(a, r)` for the closed ball, from the exact
/// quadratic `|p + s(q − p) − a|² = r²`.
fn length_in_ball(p: &Point, q: &Point, a: &Point, r: f64) -> f64 {
    let d = sub_points(q, p);
    let w = sub_points(p, a);
    let qa = dot(&d, &d);
    let qb = dot(&w, &d);
    let r = f64_to_rational(r);
    let qc = dot(&w, &w) - &r * &r;
    let disc = &qb * &qb - &qa * &qc;
    if disc <= Rational::zero() {
        return 0.0;
    }
    let root = sqrt(to_f64(&disc));
    let b = to_f64(&qb);
    let aa = to_f64(&qa);
    let s1 = ((-b - root) / aa).max(0.0);
    let s2 = ((-b + root) / aa).min(1.0);
    if s2 <= s1 {
        return 0.0;
    }
    (s2 - s1) * sqrt(aa)
}

fn mass_in_ball(t: &Chain, a: &Point, r: f64) -> f64 {
    fsum(t.terms().iter().map(|(g, s)| {
        let v = s.vertices();
        g.norm() * length_in_ball(&v[0], &v[1], a, r)
    }))
}

fn atoms_in_ball(z: &ZeroChain, a: &Point, r: f64) -> Vec<GroupElement> {
    let r = f64_to_rational(r);
    let r2 = &r * &r;
    z.atoms().iter().filter(|(_, x)| squared_distance(x, a) <= r2).map(|(g, _)| g.clone()).collect()
}

fn chi_integral(boundary: &ZeroChain, a: &Point, radius: f64) -> Result<f64> {
    let mut atoms: Vec<(f64, GroupElement)> =
        boundary.atoms().iter().map(|(g, x)| (sqrt(to_f64(&squared_distance(x, a))), g.clone())).collect();
    atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut chi = boundary.group().zero();
    let mut parts = Vec::new();
    for (i, (d, g)) in atoms.iter().enumerate() {
        if *d > radius {
            break;
        }
        chi = chi.add(g)?;
        let next = atoms.get(i + 1).map_or(radius, |(e, _)| e.min(radius));
        parts.push(chi.norm() * (next - d));
    }
    Ok(fsum(parts))
}

/// Evaluates `μ_T B(a, R) ≥ R(|g| − μ_E B(a, R))` and the χ-integral at each
/// radius.
pub fn ball_growth_check(inst: &BallGrowthInstance) -> Result<Vec<BallGrowthRow>> {
    let boundary = ZeroChain::from_chain(&inst.t.boundary()?)?;
    let g = inst.g.norm();
    inst.radii
        .iter()
        .map(|&radius| {
            let mass = mass_in_ball(&inst.t, &inst.a, radius);
            let near = atoms_in_ball(&inst.e, &inst.a, radius);
            let e_mass = crate::coeffgroup::norm_sum(&near);
            let lower_bound = radius * (g - e_mass);
            Ok(BallGrowthRow {
                radius,
                mass_in_ball: mass,
                boundary_mass_in_ball: e_mass,
                lower_bound,
                chi_integral: chi_integral(&boundary, &inst.a, radius)?,
                margin: mass - lower_bound,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Diffuse chains from paths

/// `γ` sampled at `a`, `b` and every level-`n_max` dyadic point between them.
pub fn dyadic_path_samples<F>(group: Group, mut gamma: F, a: &Rational, b: &Rational, n_max: u32) -> Result<PathSamples>
where
    F: FnMut(&Rational) -> GroupElement,
{
    if a >= b {
        return Err(Error::InvalidArgument("interval must have a < b".to_string()));
    }
    let scale = Rational::from_integer(BigInt::one() << n_max as usize);
    let first: BigInt = (a * &scale).floor().to_integer() + 1;
    let last: BigInt = (b * &scale).ceil().to_integer() - 1;
    let mut ts = vec![a.clone()];
    let mut j = first;
    while j <= last {
        ts.push(Rational::from_integer(j.clone()) / &scale);
        j += 1;
    }
    ts.push(b.clone());
    PathSamples::from_fn(group, ts, &mut gamma)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffuseLevel {
    pub level: u32,
    pub atoms: usize,
    pub max_atom_norm: f64,
    pub mass: f64,
    /// `M(T_n)`, bounding `F(A_n − A_{n−1})`; absent at level 0.
    pub cauchy_bound: Option<f64>,
    /// Whether `∂T_n = A_n − A_{n−1}` holds exactly.
    pub connector_ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffuseReport {
    pub path_length: f64,
    pub measure: GMeasure,
    pub levels: Vec<DiffuseLevel>,
}

/// The measure `ν(s, t] = γ(t) − γ(s)` on `ℝ¹` and its dyadic chains `A_n`.
///
/// Consecutive samples must not straddle a level-`n_max` dyadic point; use
/// [`dyadic_path_samples`].
pub fn build_nonrectifiable_chain(path: &PathSamples, n_max: u32) -> Result<DiffuseReport> {
    let samples = path.samples();
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("a path needs two samples".to_string()));
    }
    let group = path.group();
    let scale = Rational::from_integer(BigInt::one() << n_max as usize);
    let mut cubes = Vec::new();
    for w in samples.windows(2) {
        let (s, t) = (&w[0].0, &w[1].0);
        let index = cube_index(core::slice::from_ref(t), n_max);
        let left = (s * &scale).floor().to_integer();
        if BigInt::from(index[0]) != left {
            return Err(Error::InvalidArgument(alloc::format!(
                "samples {s} and {t} straddle a dyadic point of level {n_max}"
            )));
        }
        cubes.push((index, w[1].1.sub(&w[0].1)?));
    }
    let measure = GMeasure::new(group, 1, n_max, cubes, Vec::new())?;
    let levels = measure_to_chain_dyadic(&measure, n_max)?;
    let mut out = Vec::with_capacity(levels.len());
    for (i, lv) in levels.iter().enumerate() {
        let max_atom_norm = lv.chain.atoms().iter().map(|(g, _)| g.norm()).fold(0.0, f64::max);
        let connector_ok = match (&lv.connector, i) {
            (Some(t), i) if i > 0 => {
                ZeroChain::from_chain(&t.boundary()?)? == lv.chain.sub(&levels[i - 1].chain)?
            }
            _ => true,
        };
        out.push(DiffuseLevel {
            level: lv.level,
            atoms: lv.chain.len(),
            max_atom_norm,
            mass: lv.chain.mass(),
            cauchy_bound: lv.connector.as_ref().map(|_| lv.cauchy_bound),
            connector_ok,
        });
    }
    Ok(DiffuseReport { path_length: path.length_lower_bound(), measure, levels: out })
}

// ---------------------------------------------------------------------------
// Slice statistics

#[derive(Clone, Debug, PartialEq)]
pub struct FiberRecord {
    pub axes: Vec<usize>,
    pub x: Point,
    pub atoms: usize,
    pub norm_sum: f64,
    pub max_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceStats {
    pub records: Vec<FiberRecord>,
    /// Every sampled slice was a finite atomic 0-chain.
    pub all_atomic: bool,
    pub max_atoms: usize,
    pub resamples: usize,
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    let u = Rational::new(BigInt::from(rng.gen::<u32>()), BigInt::one() << 32);
    lo + (hi - lo) * u
}

/// Slices `A` by random fibers `Π^{-1}x` of every coordinate projection onto
/// k axes, with `x` uniform in a box slightly larger than `Π(spt A)`. A
/// non-transverse fiber is resampled once.
pub fn slice_statistics<R: Rng + ?Sized>(a: &Chain, fibers_per_plane: usize, rng: &mut R) -> Result<SliceStats> {
    let mut stats = SliceStats { records: Vec::new(), all_atomic: true, max_atoms: 0, resamples: 0 };
    let points = a.support_points();
    if points.is_empty() {
        return Ok(stats);
    }
    let eighth = Rational::new(BigInt::one(), BigInt::from(8));
    for axes in combinations(a.ambient(), a.dim()) {
        let projection = CoordinateProjection::new(a.ambient(), axes.clone())?;
        let bounds: Vec<(Rational, Rational)> = axes
            .iter()
            .map(|&i| {
                let lo = points.iter().map(|p| p[i].clone()).min().expect("support");
                let hi = points.iter().map(|p| p[i].clone()).max().expect("support");
                let pad = if lo == hi { eighth.clone() } else { (&hi - &lo) * &eighth };
                (&lo - &pad, &hi + &pad)
            })
            .collect();
        for _ in 0..fibers_per_plane {
            let mut attempt = 0;
            let slice = loop {
                let x: Point = bounds.iter().map(|(lo, hi)| uniform(rng, lo, hi)).collect();
                match slice_fiber(a, &projection, &x) {
                    Ok(s) => break (x, s),
                    Err(Error::NotTransverse { term }) => {
                        if attempt == 1 {
                            return Err(Error::NotTransverse { term });
                        }
                        attempt += 1;
                        stats.resamples += 1;
                    }
                    Err(e) => return Err(e),
                }
            };
            let (x, fiber) = slice;
            let z = ZeroChain::from_chain(&fiber)?;
            stats.all_atomic &= fiber.dim() == 0;
            stats.max_atoms = stats.max_atoms.max(z.len());
            stats.records.push(FiberRecord {
                axes: axes.clone(),
                x,
                atoms: z.len(),
                norm_sum: z.mass(),
                max_norm: z.max_norm(),
            });
        }
    }
    Ok(stats)
}

// ---------------------------------------------------------------------------
// Classification

#[derive(Clone, Debug, PartialEq)]
pub enum ClassificationWitness {
    /// A nonconstant path of finite length and its diffuse chain.
    FinitePath { length: f64, level: u32, max_atom_norm: f64 },
    /// Dyadic lengths of `t ↦ t` grow like `2^{n·slope}`.
    LengthGrowth { levels: u32, slope: f64, expected: f64 },
    /// Nonzero norms are bounded below, so continuous paths are constant.
    NormGap { min_nonzero_norm: f64 },
    /// Norms of `p^k`: a discrete value set away from 0.
    NormValues { values: Vec<f64> },
    /// The size weight puts distinct elements at distance at least 1.
    UnitSeparation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationRow {
    pub group: Group,
    pub weight: &'static str,
    pub rectifiable: bool,
    pub rationale: &'static str,
    pub witness: ClassificationWitness,
}

fn identity_path(group: Group) -> impl FnMut(&Rational) -> GroupElement {
    move |t: &Rational| group.element(t.clone()).expect("divisible group")
}

/// One row per builtin group (with the given `p` and `α`), plus the size
/// weight over ℝ.
pub fn classification_report(p: u64, alpha: Alpha, levels: u32) -> Result<Vec<ClassificationRow>> {
    let zero = Rational::zero();
    let one = Rational::one();
    let groups = [
        Group::Integers,
        Group::IntegersModP(p),
        Group::PAdicRationals(p),
        Group::PAdicIntegers(p),
        Group::RealsAlphaNorm(alpha),
        Group::Reals,
    ];
    let mut rows = Vec::new();
    for group in groups {
        let c = classify_group(group);
        let witness = match group {
            Group::Integers | Group::IntegersModP(_) => ClassificationWitness::NormGap {
                min_nonzero_norm: min_nonzero_norm(group).expect("discrete group"),
            },
            Group::PAdicRationals(_) | Group::PAdicIntegers(_) => {
                let low = if matches!(group, Group::PAdicRationals(_)) { -2i64 } else { 0 };
                let values = (low..=2)
                    .map(|k| {
                        let pk = Rational::from_integer(BigInt::from(p)).pow(k as i32);
                        group.element(pk).map(|g| g.norm())
                    })
                    .collect::<Result<Vec<f64>>>()?;
                ClassificationWitness::NormValues { values }
            }
            Group::RealsAlphaNorm(a) => {
                let profile = dyadic_length_profile(group, identity_path(group), &zero, &one, levels)?;
                ClassificationWitness::LengthGrowth {
                    levels,
                    slope: profile.final_slope().unwrap_or(0.0),
                    expected: 1.0 - a.to_f64(),
                }
            }
            Group::Reals => {
                let path = dyadic_path_samples(group, identity_path(group), &zero, &one, levels)?;
                let report = build_nonrectifiable_chain(&path, levels)?;
                let finest = report.levels.last().expect("levels");
                ClassificationWitness::FinitePath {
                    length: report.path_length,
                    level: finest.level,
                    max_atom_norm: finest.max_atom_norm,
                }
            }
        };
        rows.push(ClassificationRow {
            group,
            weight: "group-norm",
            rectifiable: c.rectifiable,
            rationale: c.rationale,
            witness,
        });
    }
    let size = classify_phi_rectifiability(Group::Reals, &WeightFunction::FlatSize)?;
    rows.push(ClassificationRow {
        group: Group::Reals,
        weight: "flat-size",
        rectifiable: size.rectifiable,
        rationale: size.rationale,
        witness: ClassificationWitness::UnitSeparation,
    });
    Ok(rows)
}

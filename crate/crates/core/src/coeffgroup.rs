//! Complete normed abelian coefficient groups and path length in their norms.
//!
//! Group elements are exact rationals in a canonical form. Norms of all groups
//! except `RealsAlphaNorm` are rational and are kept exact until the final
//! rounding; `|x|^α` is evaluated once in floating point.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{f64_to_rational, format_rational, parse_rational, to_f64, Rational};

/// The exponent of the snowflaked norm `|x|^α`, a reduced fraction in (0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alpha {
    num: u64,
    den: u64,
}

impl Alpha {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::InvalidGroup(alloc::format!(
                "alpha must lie strictly between 0 and 1, got {num}/{den}"
            )));
        }
        let g = num.gcd(&den);
        Ok(Alpha { num: num / g, den: den / g })
    }

    /// Accepts `"0.5"` or `"1/2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let value = parse_rational(text).map_err(|_| Error::InvalidGroup(alloc::format!("bad alpha {text:?}")))?;
        let num = value.numer().to_u64();
        let den = value.denom().to_u64();
        match (num, den) {
            (Some(n), Some(d)) if value.is_positive() => Alpha::new(n, d),
            _ => Err(Error::InvalidGroup(alloc::format!(
                "alpha must lie strictly between 0 and 1, got {text}"
            ))),
        }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// `x^α` for `x ≥ 0`.
    pub fn power(self, x: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else if self.num == 1 && self.den == 2 {
            libm::sqrt(x)
        } else {
            libm::pow(x, self.to_f64())
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    Integers,
    IntegersModP,
    Reals,
    RealsAlphaNorm,
    PAdicRationals,
    PAdicIntegers,
}

impl GroupKind {
    pub const ALL: [GroupKind; 6] = [
        GroupKind::Integers,
        GroupKind::IntegersModP,
        GroupKind::Reals,
        GroupKind::RealsAlphaNorm,
        GroupKind::PAdicRationals,
        GroupKind::PAdicIntegers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Integers => "Integers",
            GroupKind::IntegersModP => "IntegersModP",
            GroupKind::Reals => "Reals",
            GroupKind::RealsAlphaNorm => "RealsAlphaNorm",
            GroupKind::PAdicRationals => "PAdicRationals",
            GroupKind::PAdicIntegers => "PAdicIntegers",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        GroupKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::InvalidGroup(alloc::format!("unknown group kind {name:?}")))
    }
}

/// A coefficient group descriptor. It fully determines the group law and norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Integers,
    /// `ℤ/pℤ` with `|r| = min(r, p − r)`.
    IntegersModP(u64),
    Reals,
    /// `ℝ` with `|x| = |x|^α`.
    RealsAlphaNorm(Alpha),
    /// Rationals with the `p`-adic norm `p^{-v_p(x)}`.
    PAdicRationals(u64),
    /// Rationals whose denominator is prime to `p`, with the `p`-adic norm.
    PAdicIntegers(u64),
}

const MAX_PRIME: u64 = 1 << 31;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Group {
    /// Builds a descriptor, checking that `p` is a prime when the kind needs one.
    pub fn new(kind: GroupKind, p: Option<u64>, alpha: Option<Alpha>) -> Result<Self> {
        let prime = || -> Result<u64> {
            let p = p.ok_or_else(|| Error::InvalidGroup(alloc::format!("{} needs a prime p", kind.name())))?;
            if p > MAX_PRIME || !is_prime(p) {
                return Err(Error::InvalidGroup(alloc::format!("p = {p} is not a supported prime")));
            }
            Ok(p)
        };
        Ok(match kind {
            GroupKind::Integers => Group::Integers,
            GroupKind::Reals => Group::Reals,
            GroupKind::IntegersModP => Group::IntegersModP(prime()?),
            GroupKind::PAdicRationals => Group::PAdicRationals(prime()?),
            GroupKind::PAdicIntegers => Group::PAdicIntegers(prime()?),
            GroupKind::RealsAlphaNorm => Group::RealsAlphaNorm(
                alpha.ok_or_else(|| Error::InvalidGroup("RealsAlphaNorm needs alpha".to_string()))?,
            ),
        })
    }

    pub fn kind(self) -> GroupKind {
        match self {
            Group::Integers => GroupKind::Integers,
            Group::IntegersModP(_) => GroupKind::IntegersModP,
            Group::Reals => GroupKind::Reals,
            Group::RealsAlphaNorm(_) => GroupKind::RealsAlphaNorm,
            Group::PAdicRationals(_) => GroupKind::PAdicRationals,
            Group::PAdicIntegers(_) => GroupKind::PAdicIntegers,
        }
    }

    pub fn prime(self) -> Option<u64> {
        match self {
            Group::IntegersModP(p) | Group::PAdicRationals(p) | Group::PAdicIntegers(p) => Some(p),
            _ => None,
        }
    }

    pub fn alpha(self) -> Option<Alpha> {
        match self {
            Group::RealsAlphaNorm(a) => Some(a),
            _ => None,
        }
    }

    /// Whether every element can be divided by every positive integer within
    /// the group, i.e. uniform refinement of a measure stays in the group.
    pub fn divisible_by(self, n: u64) -> bool {
        match self {
            Group::Reals | Group::RealsAlphaNorm(_) | Group::PAdicRationals(_) => true,
            Group::PAdicIntegers(p) => n % p != 0,
            Group::Integers | Group::IntegersModP(_) => n == 1,
        }
    }

    pub fn zero(self) -> GroupElement {
        GroupElement { group: self, value: Rational::zero() }
    }

    pub fn from_int(self, n: i64) -> GroupElement {
        GroupElement::canonical(self, Rational::from_integer(BigInt::from(n)))
            .expect("integers embed in every builtin group")
    }

    pub fn element(self, value: Rational) -> Result<GroupElement> {
        GroupElement::new(self, value)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Integers => write!(f, "Z"),
            Group::IntegersModP(p) => write!(f, "Z/{p}"),
            Group::Reals => write!(f, "R"),
            Group::RealsAlphaNorm(a) => write!(f, "R^({a})"),
            Group::PAdicRationals(p) => write!(f, "Q_{p}"),
            Group::PAdicIntegers(p) => write!(f, "Z_{p}"),
        }
    }
}

/// `v_p(x)` for nonzero rational `x`.
pub fn valuation(p: u64, x: &Rational) -> i64 {
    fn v(p: &BigInt, n: &BigInt) -> i64 {
        let mut n = n.abs();
        let mut count = 0;
        loop {
            let (q, r) = n.div_rem(p);
            if !r.is_zero() {
                return count;
            }
            n = q;
            count += 1;
        }
    }
    let p = BigInt::from(p);
    v(&p, x.numer()) - v(&p, x.denom())
}

/// An element of a builtin group, stored as a canonical exact rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: Group,
    value: Rational,
}

impl GroupElement {
    /// Validates membership. Residues of `ℤ/p` are reduced; integers are
    /// required for `ℤ` and `ℤ/p`, and `p`-adic integers must have
    /// denominators prime to `p`.
    pub fn new(group: Group, value: Rational) -> Result<Self> {
        Self::canonical(group, value)
    }

    fn canonical(group: Group, value: Rational) -> Result<Self> {
        let reject = |reason: &str| Err(Error::InvalidElement { group, reason: reason.to_string() });
        let value = match group {
            Group::Integers => {
                if !value.is_integer() {
                    return reject("not an integer");
                }
                value
            }
            Group::IntegersModP(p) => {
                if !value.is_integer() {
                    return reject("not an integer residue");
                }
                Rational::from_integer(value.numer().mod_floor(&BigInt::from(p)))
            }
            Group::PAdicIntegers(p) => {
                if (value.denom() % BigInt::from(p)).is_zero() {
                    return reject("denominator divisible by p");
                }
                value
            }
            Group::Reals | Group::RealsAlphaNorm(_) | Group::PAdicRationals(_) => value,
        };
        Ok(GroupElement { group, value })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch { left: self.group, right: other.group });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Self::canonical(self.group, &self.value + &other.value)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Self::canonical(self.group, &self.value - &other.value)
    }

    pub fn neg(&self) -> Self {
        Self::canonical(self.group, -&self.value).expect("groups are closed under negation")
    }

    /// `n·g`.
    pub fn times(&self, n: i64) -> Self {
        Self::canonical(self.group, &self.value * Rational::from_integer(BigInt::from(n)))
            .expect("groups are closed under integer multiples")
    }

    /// `g / n`, defined when the group is divisible by `n`.
    pub fn divide(&self, n: u64) -> Result<Self> {
        if n == 0 || !self.group.divisible_by(n) {
            return Err(Error::Unsupported(alloc::format!("{} is not divisible by {n}", self.group)));
        }
        Self::canonical(self.group, &self.value / Rational::from_integer(BigInt::from(n)))
    }

    /// The norm as an exact rational: exact for every group except
    /// `RealsAlphaNorm`, where it is the exact value of the rounded `|x|^α`.
    pub fn norm_rational(&self) -> Rational {
        if self.value.is_zero() {
            return Rational::zero();
        }
        match self.group {
            Group::Integers | Group::Reals => self.value.abs(),
            Group::IntegersModP(p) => {
                let r = self.value.numer().to_u64().expect("reduced residue");
                Rational::from_integer(BigInt::from(r.min(p - r)))
            }
            Group::RealsAlphaNorm(a) => f64_to_rational(a.power(to_f64(&self.value.abs()))),
            Group::PAdicRationals(p) | Group::PAdicIntegers(p) => {
                let v = valuation(p, &self.value);
                let pow = num_traits::pow(BigInt::from(p), v.unsigned_abs() as usize);
                if v >= 0 {
                    Rational::new(BigInt::one(), pow)
                } else {
                    Rational::from_integer(pow)
                }
            }
        }
    }

    pub fn norm(&self) -> f64 {
        match self.group {
            Group::RealsAlphaNorm(a) => a.power(to_f64(&self.value.abs())),
            _ => to_f64(&self.norm_rational()),
        }
    }

    /// Exact comparison of norms.
    pub fn norm_cmp(&self, other: &Self) -> Ordering {
        match (self.group, other.group) {
            (Group::RealsAlphaNorm(_), Group::RealsAlphaNorm(_)) => self.value.abs().cmp(&other.value.abs()),
            _ => self.norm_rational().cmp(&other.norm_rational()),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}

/// Sum of norms, rounded once.
pub fn norm_sum<'a, I: IntoIterator<Item = &'a GroupElement>>(elements: I) -> f64 {
    let total = elements
        .into_iter()
        .fold(Rational::zero(), |acc, g| acc + g.norm_rational());
    to_f64(&total)
}

/// Samples `(t, γ(t))` of a path into a group, `t` strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSamples {
    group: Group,
    samples: Vec<(Rational, GroupElement)>,
}

impl PathSamples {
    pub fn new(group: Group, samples: Vec<(Rational, GroupElement)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("a path needs at least one sample".to_string()));
        }
        for (i, (_, g)) in samples.iter().enumerate() {
            if g.group() != group {
                return Err(Error::GroupMismatch { left: group, right: g.group() });
            }
            if i > 0 && samples[i - 1].0 >= samples[i].0 {
                return Err(Error::NonMonotone { index: i });
            }
        }
        Ok(PathSamples { group, samples })
    }

    /// Samples `γ` at the given parameters.
    pub fn from_fn<F>(group: Group, ts: Vec<Rational>, mut gamma: F) -> Result<Self>
    where
        F: FnMut(&Rational) -> GroupElement,
    {
        let samples = ts.into_iter().map(|t| {
            let g = gamma(&t);
            (t, g)
        });
        PathSamples::new(group, samples.collect())
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn samples(&self) -> &[(Rational, GroupElement)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `Σ |γ(t_i) − γ(t_{i−1})|` over consecutive samples.
    pub fn length_lower_bound(&self) -> f64 {
        let increments: Vec<GroupElement> = self
            .samples
            .windows(2)
            .map(|w| w[1].1.sub(&w[0].1).expect("one group"))
            .collect();
        norm_sum(&increments)
    }
}

pub fn path_length_lower_bound(path: &PathSamples) -> f64 {
    path.length_lower_bound()
}

/// The dyadic partition of `[a, b]` into `2^level` equal pieces.
pub fn dyadic_partition(a: &Rational, b: &Rational, level: u32) -> Vec<Rational> {
    let pieces = Rational::from_integer(BigInt::one() << level as usize);
    let step = (b - a) / &pieces;
    (0..=(1u64 << level))
        .map(|i| a + &step * Rational::from_integer(BigInt::from(i)))
        .collect()
}

/// Length lower bounds of a path at dyadic levels `0..=n_max`, with the
/// per-level growth exponents `log₂(L_n / L_{n−1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthProfile {
    pub lengths: Vec<(u32, f64)>,
    /// `None` where the previous length is zero.
    pub slopes: Vec<Option<f64>>,
}

impl LengthProfile {
    /// The last defined slope, the growth exponent at the finest level.
    pub fn final_slope(&self) -> Option<f64> {
        self.slopes.iter().rev().flatten().next().copied()
    }
}

pub fn dyadic_length_profile<F>(group: Group, mut gamma: F, a: &Rational, b: &Rational, n_max: u32) -> Result<LengthProfile>
where
    F: FnMut(&Rational) -> GroupElement,
{
    if a >= b {
        return Err(Error::InvalidArgument("interval must have a < b".to_string()));
    }
    let finest = dyadic_partition(a, b, n_max);
    let values: Vec<GroupElement> = finest.iter().map(&mut gamma).collect();
    if let Some(g) = values.iter().find(|g| g.group() != group) {
        return Err(Error::GroupMismatch { left: group, right: g.group() });
    }
    let mut lengths = Vec::new();
    for n in 0..=n_max {
        let stride = 1usize << (n_max - n);
        let picked: Vec<GroupElement> = values.iter().step_by(stride).cloned().collect();
        let increments: Vec<GroupElement> = picked
            .windows(2)
            .map(|w| w[1].sub(&w[0]).expect("one group"))
            .collect();
        lengths.push((n, norm_sum(&increments)));
    }
    let slopes = core::iter::once(None)
        .chain(lengths.windows(2).map(|w| {
            (w[0].1 > 0.0).then(|| libm::log2(w[1].1 / w[0].1))
        }))
        .collect();
    Ok(LengthProfile { lengths, slopes })
}

/// Whether every finite-mass flat chain over the group is rectifiable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub rectifiable: bool,
    pub rationale: &'static str,
}

/// The known verdict per builtin group: rectifiability fails exactly when the
/// group has a nonconstant continuous path of finite length.
pub fn classify_group(group: Group) -> Classification {
    let (rectifiable, rationale) = match group {
        Group::Integers | Group::IntegersModP(_) => (true, "nonzero norms bounded below"),
        Group::PAdicRationals(_) | Group::PAdicIntegers(_) => (true, "totally disconnected"),
        Group::RealsAlphaNorm(_) => (true, "paths have infinite length"),
        Group::Reals => (false, "finite-length path t -> t"),
    };
    Classification { rectifiable, rationale }
}

/// Smallest norm of a nonzero element, when the group has one.
pub fn min_nonzero_norm(group: Group) -> Option<f64> {
    match group {
        Group::Integers | Group::IntegersModP(_) => Some(1.0),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn modular_sum_and_inverse() {
        let g = Group::IntegersModP(5);
        assert_eq!(g.from_int(3).add(&g.from_int(4)).unwrap(), g.from_int(2));
        let z = Group::Integers;
        assert!(z.from_int(7).add(&z.from_int(7).neg()).unwrap().is_zero());
        assert_eq!(g.from_int(-1).value(), &int(4));
    }

    #[test]
    fn padic_sum_and_norms() {
        let q3 = Group::PAdicRationals(3);
        let third = q3.element(rat(1, 3)).unwrap();
        let s = third.add(&q3.element(rat(2, 3)).unwrap()).unwrap();
        assert_eq!(s.value(), &int(1));
        assert_eq!(s.norm(), 1.0);
        assert_eq!(third.norm(), 3.0);
        assert_eq!(q3.element(int(18)).unwrap().norm_rational(), rat(1, 9));
        assert!(Group::PAdicIntegers(3).element(rat(1, 3)).is_err());
        assert!(Group::PAdicIntegers(3).element(rat(1, 2)).is_ok());
    }

    #[test]
    fn alpha_norm_and_zero() {
        let g = Group::RealsAlphaNorm(Alpha::new(1, 2).unwrap());
        assert_eq!(g.from_int(4).norm(), 2.0);
        for kind in GroupKind::ALL {
            let group = Group::new(kind, Some(3), Some(Alpha::new(1, 3).unwrap())).unwrap();
            assert_eq!(group.zero().norm(), 0.0);
        }
        assert_eq!(Alpha::parse("0.5").unwrap(), Alpha::new(1, 2).unwrap());
        assert!(Alpha::parse("1").is_err());
        assert!(Group::new(GroupKind::IntegersModP, Some(4), None).is_err());
    }

    #[test]
    fn modp_norm_is_distance_to_zero() {
        let g = Group::IntegersModP(7);
        assert_eq!(g.from_int(6).norm(), 1.0);
        assert_eq!(g.from_int(3).norm(), 3.0);
        assert_eq!(g.from_int(4).norm(), 3.0);
    }

    #[test]
    fn path_lengths() {
        let r = Group::Reals;
        let path = PathSamples::from_fn(r, [rat(0, 1), rat(1, 2), int(1)].into(), |t| r.element(t.clone()).unwrap())
            .unwrap();
        assert_eq!(path.length_lower_bound(), 1.0);
        let constant = PathSamples::from_fn(r, [int(0), int(1)].into(), |_| r.from_int(2)).unwrap();
        assert_eq!(constant.length_lower_bound(), 0.0);
        let bad = PathSamples::new(r, [(int(1), r.zero()), (int(1), r.zero())].into());
        assert_eq!(bad, Err(Error::NonMonotone { index: 1 }));
    }

    #[test]
    fn alpha_profile_slope() {
        let g = Group::RealsAlphaNorm(Alpha::new(1, 2).unwrap());
        let p = dyadic_length_profile(g, |t| g.element(t.clone()).unwrap(), &int(0), &int(1), 10).unwrap();
        for (n, len) in &p.lengths {
            let expected = libm::pow(2.0, *n as f64 / 2.0);
            assert!((len - expected).abs() <= 1e-12 * expected);
        }
        assert!((p.final_slope().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn classification_flags() {
        assert!(!classify_group(Group::Reals).rectifiable);
        assert!(classify_group(Group::Integers).rectifiable);
        assert!(classify_group(Group::PAdicRationals(3)).rectifiable);
    }
}

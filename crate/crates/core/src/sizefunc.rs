//! Weighted areas `φ(A) = Σ φ(g_i) vol(σ_i)`, the flat size `φ_s`, and the
//! rectifiability verdict for the metric `d(g, h) = φ(g − h) + |g − h|`.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::coeffgroup::{classify_group, Classification, Group, GroupElement};
use crate::error::{Error, Result};
use crate::numeric::{f64_to_rational, Rational};
use crate::polychain::{weighted_volume, Chain};

/// An even, subadditive weight with `φ(0) = 0`. Table weights are checked
/// with [`validate_weight`]; lower semicontinuity is taken on trust.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightFunction {
    /// `φ_s(g) = 1` for `g ≠ 0`.
    FlatSize,
    /// `φ(g) = |g|`.
    GroupNorm,
    /// Finitely many values; `φ(0) = 0` unless listed, other elements are
    /// undefined. Values lie in `[0, ∞]`.
    Table(Vec<(GroupElement, f64)>),
}

impl WeightFunction {
    pub fn table(entries: Vec<(GroupElement, f64)>) -> Result<WeightFunction> {
        for (i, (_, v)) in entries.iter().enumerate() {
            if v.is_nan() || *v < 0.0 {
                return Err(Error::InvalidArgument(alloc::format!("table entry {i} must lie in [0, inf]")));
            }
        }
        for (i, (g, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(h, _)| h == g) {
                return Err(Error::InvalidArgument(alloc::format!("table entry {i} repeats {g}")));
            }
        }
        Ok(WeightFunction::Table(entries))
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightFunction::FlatSize => "flat-size",
            WeightFunction::GroupNorm => "group-norm",
            WeightFunction::Table(_) => "table",
        }
    }

    pub fn evaluate(&self, g: &GroupElement) -> Result<f64> {
        self.exact(g).map(|v| match v {
            Some(r) => crate::numeric::to_f64(&r),
            None => f64::INFINITY,
        })
    }

    /// The weight as an exact rational; `None` for `∞`.
    fn exact(&self, g: &GroupElement) -> Result<Option<Rational>> {
        match self {
            WeightFunction::FlatSize => Ok(Some(if g.is_zero() { Rational::zero() } else { Rational::from_integer(1.into()) })),
            WeightFunction::GroupNorm => Ok(Some(g.norm_rational())),
            WeightFunction::Table(entries) => match entries.iter().find(|(h, _)| h == g) {
                Some((_, v)) if v.is_infinite() => Ok(None),
                Some((_, v)) => Ok(Some(f64_to_rational(*v))),
                None if g.is_zero() => Ok(Some(Rational::zero())),
                None => Err(Error::WeightUndefined(g.to_string())),
            },
        }
    }
}

/// A failed hypothesis, with the elements involved.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightViolation {
    NonzeroAtZero { value: f64 },
    NotEven { g: GroupElement, at_g: f64, at_neg: f64 },
    NotSubadditive { g: GroupElement, h: GroupElement, at_sum: f64, bound: f64 },
    Undefined { g: GroupElement },
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightReport {
    pub pairs_checked: usize,
    pub violations: Vec<WeightViolation>,
    /// Lower semicontinuity cannot be decided from samples.
    pub lower_semicontinuity_verified: bool,
}

impl WeightReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `φ(0) = 0`, `φ(g) = φ(−g)` exactly, and
/// `φ(g + h) ≤ φ(g) + φ(h) + 1e−12` over all pairs of samples. Table weights
/// also contribute their listed elements as samples; undefined values are
/// reported.
pub fn validate_weight(phi: &WeightFunction, group: Group, samples: &[GroupElement]) -> Result<WeightReport> {
    let mut elements: Vec<GroupElement> = Vec::new();
    if let WeightFunction::Table(entries) = phi {
        elements.extend(entries.iter().map(|(g, _)| g.clone()));
    }
    for g in samples {
        if g.group() != group {
            return Err(Error::GroupMismatch { left: group, right: g.group() });
        }
        if !elements.contains(g) {
            elements.push(g.clone());
        }
    }
    let mut violations = Vec::new();
    let undefined = |g: &GroupElement, violations: &mut Vec<WeightViolation>| {
        if !violations.iter().any(|v| matches!(v, WeightViolation::Undefined { g: h } if h == g)) {
            violations.push(WeightViolation::Undefined { g: g.clone() });
        }
    };
    let at_zero = phi.evaluate(&group.zero())?;
    if at_zero != 0.0 {
        violations.push(WeightViolation::NonzeroAtZero { value: at_zero });
    }
    for g in &elements {
        match (phi.evaluate(g), phi.evaluate(&g.neg())) {
            (Ok(a), Ok(b)) if a != b => violations.push(WeightViolation::NotEven { g: g.clone(), at_g: a, at_neg: b }),
            (Ok(_), Ok(_)) => {}
            (Err(Error::WeightUndefined(_)), Ok(_)) => undefined(g, &mut violations),
            (_, Err(Error::WeightUndefined(_))) => undefined(&g.neg(), &mut violations),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    let mut pairs_checked = 0;
    for (i, g) in elements.iter().enumerate() {
        for h in &elements[i..] {
            let sum = g.add(h)?;
            let (Ok(a), Ok(b), Ok(s)) = (phi.evaluate(g), phi.evaluate(h), phi.evaluate(&sum)) else {
                if phi.evaluate(&sum).is_err() {
                    undefined(&sum, &mut violations);
                }
                continue;
            };
            pairs_checked += 1;
            if s > a + b + 1e-12 {
                violations.push(WeightViolation::NotSubadditive { g: g.clone(), h: h.clone(), at_sum: s, bound: a + b });
            }
        }
    }
    Ok(WeightReport { pairs_checked, violations, lower_semicontinuity_verified: false })
}

/// `Σ φ(g_i) vol_k(σ_i)` over the canonical, non-overlapping terms.
pub fn phi_mass(a: &Chain, phi: &WeightFunction) -> Result<f64> {
    let mut items = Vec::with_capacity(a.len());
    for (g, s) in a.terms() {
        match phi.exact(g)? {
            Some(w) => items.push((w, s.volume())),
            None => return Ok(f64::INFINITY),
        }
    }
    Ok(weighted_volume(items))
}

/// `Σ vol_k(σ_i)` over the terms of `A`: the k-measure of the carrying
/// simplices.
pub fn flat_size(a: &Chain) -> f64 {
    weighted_volume(a.terms().iter().map(|(_, s)| (Rational::from_integer(1.into()), s.volume())))
}

/// Rectifiability of all finite-mass, finite-`φ` chains, read off from the
/// metric `φ(g − h) + |g − h|`.
pub fn classify_phi_rectifiability(group: Group, phi: &WeightFunction) -> Result<Classification> {
    match phi {
        WeightFunction::FlatSize => Ok(Classification {
            rectifiable: true,
            rationale: "distinct elements are at distance at least 1",
        }),
        WeightFunction::GroupNorm => Ok(classify_group(group)),
        WeightFunction::Table(_) => {
            Err(Error::Unsupported("rectifiability of a table weight is not decidable from samples".to_string()))
        }
    }
}

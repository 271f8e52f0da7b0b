use flatchain_core::flatnorm::{
    evaluate_witness, flat_bracket, flat_distance, flat_exact_zero_chain, flat_lower_bound, flat_upper_bound,
    flat_upper_bound_with_hints,
};
use flatchain_core::numeric::{distance, int_point, rat, to_f64};
use flatchain_core::zerochain::ZeroChain;
use flatchain_core::{Chain, Group, GroupElement, Point, Rational, Simplex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, n: usize, den: i64) -> Point {
    (0..n).map(|_| rat(rng.gen_range(-4 * den..=4 * den), den)).collect()
}

fn random_element(rng: &mut ChaCha8Rng, group: Group) -> GroupElement {
    match group {
        Group::Integers | Group::IntegersModP(_) | Group::PAdicIntegers(_) => group.from_int(rng.gen_range(-6..=6)),
        _ => group.element(rat(rng.gen_range(-12..=12), rng.gen_range(1..=4))).unwrap(),
    }
}

fn random_zero_chain(rng: &mut ChaCha8Rng, group: Group, atoms: usize, n: usize) -> ZeroChain {
    let list = (0..atoms).map(|_| (random_element(rng, group), random_point(rng, n, 2))).collect();
    ZeroChain::new(group, n, list).unwrap()
}

fn groups() -> Vec<Group> {
    vec![
        Group::Integers,
        Group::IntegersModP(5),
        Group::Reals,
        Group::RealsAlphaNorm(flatchain_core::Alpha::new(1, 2).unwrap()),
        Group::PAdicRationals(3),
        Group::PAdicIntegers(2),
    ]
}

/// Transport on coefficient lattice `(1/D)ℤ`: every unit of a positive atom is
/// matched to a unit of a negative atom (saving `2 − d` per unit against
/// discarding both) or discarded, searched exhaustively.
fn lattice_oracle(a: &ZeroChain) -> f64 {
    let den = a.atoms().iter().fold(1i64, |acc, (g, _)| {
        let d: i64 = g.value().denom().try_into().unwrap();
        num_integer::Integer::lcm(&acc, &d)
    });
    let units: Vec<i64> = a
        .atoms()
        .iter()
        .map(|(g, _)| (g.value() * Rational::from_integer(den.into())).to_integer().try_into().unwrap())
        .collect();
    let pos: Vec<usize> = (0..units.len()).filter(|&i| units[i] > 0).collect();
    let neg: Vec<usize> = (0..units.len()).filter(|&i| units[i] < 0).collect();
    let pairs: Vec<(usize, usize, f64)> = pos
        .iter()
        .flat_map(|&i| neg.iter().map(move |&j| (i, j)))
        .map(|(i, j)| (i, j, distance(&a.atoms()[i].1, &a.atoms()[j].1)))
        .collect();
    let total: f64 = units.iter().map(|u| u.abs() as f64).sum();
    fn search(k: usize, pairs: &[(usize, usize, f64)], left: &mut Vec<i64>, acc: f64, best: &mut f64) {
        if k == pairs.len() {
            *best = best.min(acc);
            return;
        }
        let (i, j, d) = pairs[k];
        let cap = left[i].min(-left[j]);
        for t in 0..=cap {
            left[i] -= t;
            left[j] += t;
            search(k + 1, pairs, left, acc + t as f64 * (d - 2.0), best);
            left[i] += t;
            left[j] -= t;
        }
    }
    let mut best = 0.0f64;
    search(0, &pairs, &mut units.clone(), 0.0, &mut best);
    (total + best) / den as f64
}

#[test]
fn exact_value_matches_lattice_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..60 {
        let n = rng.gen_range(1..=5);
        let a = random_zero_chain(&mut rng, Group::Reals, n, 2);
        let exact = flat_exact_zero_chain(&a).unwrap();
        assert!((exact - lattice_oracle(&a)).abs() <= 1e-9, "{exact} vs {}", lattice_oracle(&a));
    }
}

#[test]
fn dipole_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let g = rat(rng.gen_range(1..=20), rng.gen_range(1..=5));
        let x = random_point(&mut rng, 2, 3);
        let y = random_point(&mut rng, 2, 3);
        if x == y {
            continue;
        }
        let r = Group::Reals;
        let a = ZeroChain::new(r, 2, vec![(r.element(g.clone()).unwrap(), x.clone()), (r.element(-g.clone()).unwrap(), y.clone())])
            .unwrap();
        let gn = to_f64(&g);
        let expected = (2.0 * gn).min(gn * distance(&x, &y));
        assert!((flat_exact_zero_chain(&a).unwrap() - expected).abs() <= 1e-9);
        let b = flat_bracket(&a.to_chain()).unwrap();
        assert!((b.upper - expected).abs() <= 1e-9 && (b.lower - expected).abs() <= 1e-9);
    }
}

#[test]
fn sandwich_for_every_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for group in groups() {
        for _ in 0..40 {
            let n = rng.gen_range(0..=6);
            let a = random_zero_chain(&mut rng, group, n, 2);
            let chain = a.to_chain();
            let b = flat_bracket(&chain).unwrap();
            let chi = a.chi().norm();
            assert!(b.lower >= chi - 1e-12);
            assert!(chi <= b.upper + 1e-12);
            assert!(b.upper <= chi + a.mass() * a.support_diameter() + 1e-12, "{group}: {b:?}");
            assert!(b.lower <= b.upper + 1e-12);
            let w = b.witness.unwrap();
            assert!((evaluate_witness(&chain, &w.filling).unwrap() - b.upper).abs() <= 1e-12);
        }
    }
}

#[test]
fn mod_p_exactness_and_budget() {
    let z5 = Group::IntegersModP(5);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let a = random_zero_chain(&mut rng, z5, 3, 1);
        let exact = flat_exact_zero_chain(&a).unwrap();
        let upper = flat_upper_bound(&a.to_chain()).unwrap().value;
        assert!((exact - upper).abs() <= 1e-12, "{exact} {upper}");
        assert!(exact >= a.chi().norm() - 1e-12);
    }
    let big = random_zero_chain(&mut rng, z5, 12, 2);
    if big.len() > 8 {
        assert!(flat_exact_zero_chain(&big).is_err());
        assert!(flat_bracket(&big.to_chain()).is_ok());
    }
    let q3 = ZeroChain::new(Group::PAdicRationals(3), 1, vec![(Group::PAdicRationals(3).from_int(1), vec![rat(0, 1)])]);
    assert!(flat_exact_zero_chain(&q3.unwrap()).is_err());
}

fn random_planar_segments(rng: &mut ChaCha8Rng, group: Group, count: usize) -> Chain {
    let mut terms = Vec::new();
    for _ in 0..count {
        let a = random_point(rng, 2, 2);
        let b = random_point(rng, 2, 2);
        if a != b {
            terms.push((random_element(rng, group), Simplex::new(vec![a, b]).unwrap()));
        }
    }
    Chain::from_terms(group, 2, 1, terms).unwrap()
}

#[test]
fn brackets_of_planar_one_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for group in [Group::Integers, Group::Reals] {
        for _ in 0..15 {
            let a = random_planar_segments(&mut rng, group, 3);
            let b = flat_bracket(&a).unwrap();
            assert!(b.lower <= b.upper + 1e-12, "{b:?}");
            assert!(b.upper <= a.mass() + 1e-12);
        }
    }
}

#[test]
fn boundary_of_filling_is_cheap() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for group in [Group::Integers, Group::Reals] {
        for _ in 0..20 {
            let b = random_planar_segments(&mut rng, group, 3);
            let a = b.boundary().unwrap();
            assert!(flat_upper_bound(&a).unwrap().value <= b.mass() + 1e-12);
        }
        for _ in 0..10 {
            let p: Vec<Point> = (0..3).map(|_| random_point(&mut rng, 2, 2)).collect();
            let s = Simplex::new(p).unwrap();
            if s.is_degenerate() {
                continue;
            }
            let b = Chain::single(random_element(&mut rng, group), s).unwrap();
            if b.is_zero() {
                continue;
            }
            let a = b.boundary().unwrap();
            assert!(flat_upper_bound(&a).unwrap().value <= b.mass() + 1e-12);
            let lower = flat_lower_bound(&a).unwrap();
            assert!(lower <= b.mass() + 1e-12);
        }
    }
}

#[test]
fn distance_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..10 {
        let a = random_planar_segments(&mut rng, Group::Reals, 2);
        let b = random_planar_segments(&mut rng, Group::Reals, 2);
        let same = flat_distance(&a, &a).unwrap();
        assert_eq!((same.lower, same.upper), (0.0, 0.0));
        let ab = flat_distance(&a, &b).unwrap();
        let ba = flat_distance(&b, &a).unwrap();
        assert!((ab.upper - ba.upper).abs() <= 1e-9 && (ab.lower - ba.lower).abs() <= 1e-9);
        let zero = Chain::zero(Group::Reals, 2, 1);
        assert_eq!(flat_distance(&a, &zero).unwrap(), flat_bracket(&a).unwrap());
    }
    // Parallel unit segments at distance 1/4: the rectangle between them.
    let r = Group::Reals;
    let seg = |y: Rational| {
        Chain::single(r.from_int(2), Simplex::new(vec![vec![rat(0, 1), y.clone()], vec![rat(1, 1), y]]).unwrap())
            .unwrap()
    };
    let d = flat_distance(&seg(rat(0, 1)), &seg(rat(1, 4))).unwrap();
    assert!(d.upper <= 2.0 * (0.25 + 2.0 * 0.25) + 1e-12);
    assert!(d.upper <= 4.0);
    assert!(d.lower <= d.upper);
}

#[test]
fn witness_sums_are_subadditive() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for group in groups() {
        for _ in 0..8 {
            let a = random_zero_chain(&mut rng, group, 3, 2).to_chain();
            let b = random_zero_chain(&mut rng, group, 3, 2).to_chain();
            let (ua, ub) = (flat_upper_bound(&a).unwrap(), flat_upper_bound(&b).unwrap());
            let hint = ua.witness.filling.add(&ub.witness.filling).unwrap();
            let sum = flat_upper_bound_with_hints(&a.add(&b).unwrap(), &[hint]).unwrap();
            assert!(sum.value <= ua.value + ub.value + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn translation_invariance(seed in 0u64..1000, dx in -8i64..=8, dy in -8i64..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_zero_chain(&mut rng, Group::Reals, 4, 2).to_chain();
        let moved = a.translate(&[rat(dx, 3), rat(dy, 5)]).unwrap();
        let (p, q) = (flat_bracket(&a).unwrap(), flat_bracket(&moved).unwrap());
        prop_assert!((p.upper - q.upper).abs() <= 1e-12);
        prop_assert!((p.lower - q.lower).abs() <= 1e-12);
    }

    #[test]
    fn exact_brackets_have_no_gap(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for group in [Group::Reals, Group::Integers] {
            let a = random_zero_chain(&mut rng, group, 5, 2);
            let b = flat_bracket(&a.to_chain()).unwrap();
            prop_assert!(b.gap().abs() <= 1e-9);
        }
    }
}

#[test]
fn tetrahedron_in_space_uses_cones() {
    let t = Chain::single(
        Group::Integers.from_int(1),
        Simplex::new(vec![int_point(&[0, 0, 0]), int_point(&[1, 0, 0]), int_point(&[0, 1, 0]), int_point(&[0, 0, 1])])
            .unwrap(),
    )
    .unwrap();
    let cycle = t.boundary().unwrap();
    let b = flat_bracket(&cycle).unwrap();
    assert!(b.upper <= t.mass() + 1e-12);
    assert!(b.lower <= b.upper);
}

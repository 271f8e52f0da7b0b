use flatchain_core::numeric::{f64_to_rational, rat, to_f64};
use flatchain_core::sampling::{random_measure, random_point, random_zero_chain};
use flatchain_core::zerochain::{
    canonical_representation, chain_to_measure, cone_flat_bound, cube_index, measure_to_chain_dyadic, ZeroChain,
};
use flatchain_core::{Alpha, Group, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups() -> Vec<Group> {
    vec![
        Group::Integers,
        Group::IntegersModP(5),
        Group::Reals,
        Group::RealsAlphaNorm(Alpha::new(1, 2).unwrap()),
        Group::PAdicRationals(3),
        Group::PAdicIntegers(3),
    ]
}

proptest! {
    #[test]
    fn chi_is_additive_and_bounded(seed in any::<u64>(), which in 0usize..6) {
        let group = groups()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let a = random_zero_chain(&mut rng, group, 5, n).unwrap();
        let b = random_zero_chain(&mut rng, group, 4, n).unwrap();
        prop_assert_eq!(a.add(&b).unwrap().chi(), a.chi().add(&b.chi()).unwrap());
        prop_assert!(a.chi().norm() <= a.mass() + 1e-12);
    }

    #[test]
    fn cone_identity_and_bound(seed in any::<u64>(), which in 0usize..6) {
        let group = groups()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let a = random_zero_chain(&mut rng, group, 5, n).unwrap();
        let x = random_point(&mut rng, n, 4, 3);
        let c = cone_flat_bound(&a, &x).unwrap();
        let expected = a.sub(&ZeroChain::new(group, n, vec![(c.chi.clone(), x.clone())]).unwrap()).unwrap();
        prop_assert_eq!(ZeroChain::from_chain(&c.cone.boundary().unwrap()).unwrap(), expected);
        let diam = a.atoms().iter().map(|(_, p)| flatchain_core::numeric::distance(p, &x)).fold(0.0, f64::max)
            .max(a.support_diameter());
        prop_assert!(c.bound <= a.chi().norm() + a.mass() * diam + 1e-12);
    }

    #[test]
    fn canonical_order(seed in any::<u64>(), which in 0usize..6) {
        let group = groups()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_zero_chain(&mut rng, group, 7, 2).unwrap();
        let list = canonical_representation(&a);
        prop_assert_eq!(list.len(), a.len());
        for atom in a.atoms() {
            prop_assert!(list.contains(atom));
        }
        for w in list.windows(2) {
            let ord = w[0].0.norm_cmp(&w[1].0);
            prop_assert!(ord.is_gt() || (ord.is_eq() && w[0].1 < w[1].1));
        }
    }

    #[test]
    fn dyadic_levels_connect(seed in any::<u64>(), which in 0usize..6, n in 1usize..=2) {
        let group = groups()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nu = random_measure(&mut rng, group, n, 4, 6).unwrap();
        let levels = measure_to_chain_dyadic(&nu, 4).unwrap();
        for (i, lv) in levels.iter().enumerate() {
            let values = nu.aggregate(lv.level).unwrap();
            let back = chain_to_measure(&lv.chain, lv.level).unwrap();
            prop_assert_eq!(back.cubes(), &values);
            if i == 0 {
                prop_assert!(lv.connector.is_none());
                continue;
            }
            let t = lv.connector.as_ref().unwrap();
            let diff = lv.chain.sub(&levels[i - 1].chain).unwrap();
            prop_assert_eq!(ZeroChain::from_chain(&t.boundary().unwrap()).unwrap(), diff);
            let step = (0.5f64).powi(lv.level as i32 + 1) * (n as f64).sqrt();
            let total: Rational = values.values().map(|g| g.norm_rational()).fold(Rational::zero(), |s, x| s + x);
            prop_assert_eq!(lv.cauchy_bound, to_f64(&(total * f64_to_rational(step))));
        }
    }
}

#[test]
fn half_open_cubes() {
    assert_eq!(cube_index(&[rat(0, 1)], 0), vec![-1]);
    assert_eq!(cube_index(&[rat(1, 1)], 0), vec![0]);
    assert_eq!(cube_index(&[rat(1, 2), rat(3, 4)], 1), vec![0, 1]);
    assert_eq!(cube_index(&[rat(-1, 3)], 2), vec![-2]);
}

use flatchain_core::numeric::{int_point, rat};
use flatchain_core::sampling::{random_element, random_nonzero_element, random_simplices};
use flatchain_core::sizefunc::{flat_size, phi_mass, validate_weight, WeightFunction};
use flatchain_core::{Chain, Group, Simplex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: [Group; 4] = [Group::Integers, Group::IntegersModP(3), Group::Reals, Group::PAdicRationals(5)];

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn disjoint_sums_add(seed in any::<u64>(), k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = GROUPS[rng.gen_range(0..4)];
        let a = random_simplices(&mut rng, group, 3, k, 2).unwrap();
        let far = vec![rat(0, 1), rat(10, 1)];
        let b = random_simplices(&mut rng, group, 3, k, 2).unwrap().translate(&far).unwrap();
        for phi in [WeightFunction::FlatSize, WeightFunction::GroupNorm] {
            let sum = phi_mass(&a.add(&b).unwrap(), &phi).unwrap();
            prop_assert!(close(sum, phi_mass(&a, &phi).unwrap() + phi_mass(&b, &phi).unwrap()));
        }
    }

    #[test]
    fn merging_is_subadditive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = GROUPS[rng.gen_range(0..4)];
        let a = random_simplices(&mut rng, group, 3, 2, 2).unwrap();
        let recoloured: Vec<_> = a.terms().iter().map(|(_, s)| (random_element(&mut rng, group), s.clone())).collect();
        let b = Chain::new(group, 2, 2, recoloured).unwrap();
        for phi in [WeightFunction::FlatSize, WeightFunction::GroupNorm] {
            let sum = phi_mass(&a.add(&b).unwrap(), &phi).unwrap();
            prop_assert!(sum <= phi_mass(&a, &phi).unwrap() + phi_mass(&b, &phi).unwrap() + 1e-12);
        }
    }

    #[test]
    fn size_ignores_coefficients(seed in any::<u64>(), k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = GROUPS[rng.gen_range(0..4)];
        let a = random_simplices(&mut rng, group, 4, k, 3).unwrap();
        let b = Chain::new(
            group,
            3,
            k,
            a.terms().iter().map(|(_, s)| (random_nonzero_element(&mut rng, group), s.clone())).collect(),
        )
        .unwrap();
        prop_assert_eq!(flat_size(&a), flat_size(&b));
        prop_assert_eq!(phi_mass(&a, &WeightFunction::FlatSize).unwrap(), flat_size(&a));
        prop_assert_eq!(phi_mass(&a, &WeightFunction::GroupNorm).unwrap(), a.mass());
    }
}

#[test]
fn unit_coefficients_give_mass() {
    let z = Group::Integers;
    let terms = vec![
        (z.from_int(1), Simplex::new(vec![int_point(&[0, 0]), int_point(&[3, 4])]).unwrap()),
        (z.from_int(-1), Simplex::new(vec![int_point(&[5, 0]), int_point(&[6, 0])]).unwrap()),
    ];
    let a = Chain::new(z, 2, 1, terms).unwrap();
    assert_eq!(flat_size(&a), a.mass());
    assert_eq!(flat_size(&a), 6.0);
}

#[test]
fn infinite_table_values() {
    let z = Group::Integers;
    let phi = WeightFunction::table(vec![(z.from_int(1), f64::INFINITY), (z.from_int(-1), f64::INFINITY)]).unwrap();
    let a = Chain::single(z.from_int(1), Simplex::new(vec![int_point(&[0]), int_point(&[1])]).unwrap()).unwrap();
    assert_eq!(phi_mass(&a, &phi).unwrap(), f64::INFINITY);
    let report = validate_weight(&phi, z, &[]).unwrap();
    assert!(!report.passed());
}

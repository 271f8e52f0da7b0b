use flatchain_core::experiments::{
    ball_growth_check, build_nonrectifiable_chain, classification_report, dyadic_path_samples, slice_statistics,
    BallGrowthInstance, ClassificationWitness,
};
use flatchain_core::numeric::{int, rat};
use flatchain_core::sampling::{random_path, random_segments, random_simplices};
use flatchain_core::{Alpha, Group};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GROUPS: [Group; 4] = [Group::Integers, Group::IntegersModP(5), Group::Reals, Group::PAdicRationals(3)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ball_growth_margin(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = GROUPS[rng.gen_range(0..4)];
        let n = rng.gen_range(2..=3);
        let vertices = rng.gen_range(2..6);
        let t = random_path(&mut rng, group, vertices, n).unwrap();
        let points = t.support_points();
        let a = points[rng.gen_range(0..points.len())].clone();
        let radii = (0..50).map(|_| rng.gen_range(0.0..20.0)).collect();
        let inst = BallGrowthInstance::new(t, a, radii).unwrap();
        for row in ball_growth_check(&inst).unwrap() {
            prop_assert!(row.margin >= -1e-12, "{:?}", row);
            prop_assert!(row.mass_in_ball + 1e-12 >= row.chi_integral, "{:?}", row);
        }
    }

    #[test]
    fn fibers_are_atomic(seed in any::<u64>(), k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = GROUPS[rng.gen_range(0..4)];
        let a = if k == 1 {
            random_segments(&mut rng, group, 4, 2).unwrap()
        } else {
            random_simplices(&mut rng, group, 2, 2, 3).unwrap()
        };
        let stats = slice_statistics(&a, 20, &mut rng).unwrap();
        prop_assert!(stats.all_atomic);
        prop_assert!(stats.records.iter().all(|r| r.norm_sum.is_finite() && r.atoms <= a.len()));
    }
}

#[test]
fn linear_path_halves() {
    let r = Group::Reals;
    let path = dyadic_path_samples(r, |t| r.element(t.clone()).unwrap(), &int(0), &int(1), 12).unwrap();
    let report = build_nonrectifiable_chain(&path, 12).unwrap();
    assert_eq!(report.levels.len(), 13);
    for w in report.levels.windows(2) {
        assert_eq!(w[1].max_atom_norm * 2.0, w[0].max_atom_norm);
        assert_eq!(w[1].mass, w[0].mass);
    }
}

#[test]
fn offset_interval_path() {
    let r = Group::Reals;
    let path = dyadic_path_samples(r, |t| r.element(t * t).unwrap(), &rat(1, 3), &rat(5, 7), 5).unwrap();
    let report = build_nonrectifiable_chain(&path, 5).unwrap();
    let expected = 25.0 / 49.0 - 1.0 / 9.0;
    assert!((report.path_length - expected).abs() <= 1e-12);
    assert!(report.levels.iter().all(|l| l.connector_ok && (l.mass - expected).abs() <= 1e-12));
}

#[test]
fn table_flags() {
    let rows = classification_report(5, Alpha::new(2, 3).unwrap(), 10).unwrap();
    assert_eq!(rows.len(), 7);
    let flags: Vec<(String, bool)> = rows.iter().map(|r| (r.group.to_string(), r.rectifiable)).collect();
    assert_eq!(flags[5], ("R".to_string(), false));
    assert!(rows.iter().filter(|r| r.rectifiable).count() == 6);
    if let ClassificationWitness::NormValues { values } = &rows[2].witness {
        assert_eq!(values, &vec![25.0, 5.0, 1.0, 0.2, 0.04]);
    } else {
        panic!("p-adic witness");
    }
}

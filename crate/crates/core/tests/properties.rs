use lds_core::*;
use num_bigint::BigUint;
use proptest::prelude::*;

fn arb_system() -> impl Strategy<Value = MatrixZq> {
    (2u64..=12, 1usize..=3).prop_flat_map(|(q, n)| {
        proptest::collection::vec(0..q, n * n)
            .prop_map(move |data| MatrixZq::new(Modulus::new(q).unwrap(), n, n, data).unwrap())
    })
}

/// Conjugates by the coordinate permutation `i -> perm[i]`.
fn relabel(a: &MatrixZq, perm: &[usize]) -> MatrixZq {
    let n = a.rows();
    let mut data = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[perm[i] * n + perm[j]] = a.get(i, j);
        }
    }
    MatrixZq::new(a.modulus(), n, n, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn census_survives_relabeling(a in arb_system(), seed in any::<u64>()) {
        let n = a.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(seed as usize % n);
        if seed & 1 == 1 && n > 1 {
            perm.swap(0, 1);
        }
        let b = relabel(&a, &perm);
        let ga = enumerate_phase_graph(&a, DEFAULT_ORACLE_CAP).unwrap();
        let gb = enumerate_phase_graph(&b, DEFAULT_ORACLE_CAP).unwrap();
        prop_assert_eq!(ga.census(), gb.census());
        prop_assert_eq!(ga.max_tail(), gb.max_tail());
        let cfg = PeriodSearchConfig::default();
        prop_assert_eq!(cycle_structure(&a, &cfg).unwrap(), cycle_structure(&b, &cfg).unwrap());
    }

    #[test]
    fn unit_determinant_means_permutation(a in arb_system()) {
        let g = enumerate_phase_graph(&a, DEFAULT_ORACLE_CAP).unwrap();
        let unit = a.determinant().unwrap().is_unit();
        prop_assert_eq!(g.is_permutation(), unit);
        if unit {
            prop_assert_eq!(g.periodic_count(), g.state_count());
        }
    }

    #[test]
    fn early_exit_never_changes_the_verdict(a in arb_system()) {
        let plain = lfps_test_with(&a, &PeriodSearchConfig::default()).unwrap();
        let early = lfps_test_with(&a, &PeriodSearchConfig { early_exit: true, ..Default::default() }).unwrap();
        prop_assert_eq!(plain.is_fixed_point, early.is_fixed_point);
        if let (Some(stop), Some(r)) = (early.stopped_at, minimal_fixed_exponent(&a).unwrap()) {
            prop_assert!(stop >= r);
        }
    }

    #[test]
    fn tails_stay_within_minimal_exponent(a in arb_system()) {
        let g = enumerate_phase_graph(&a, DEFAULT_ORACLE_CAP).unwrap();
        if let Some(r) = minimal_fixed_exponent(&a).unwrap() {
            prop_assert!(g.is_fixed_point_system());
            prop_assert!(g.max_tail() <= r);
        } else {
            prop_assert!(!g.is_fixed_point_system());
        }
    }

    #[test]
    fn crt_split_matches_composite_modulus(
        entries in proptest::collection::vec((0i64..4, 0i64..9), 4),
    ) {
        // Z/36 = Z/4 x Z/9
        let ring = RingSpec::new(&[4, 9]).unwrap();
        let tuples: Vec<Vec<i64>> = entries.iter().map(|&(a, b)| vec![a, b]).collect();
        let sys = ProductSystem::from_entries(ring, 2, &tuples).unwrap();
        let data: Vec<u64> = entries
            .iter()
            .map(|&(a, b)| (0..36).find(|x| x % 4 == a as u64 && x % 9 == b as u64).unwrap())
            .collect();
        let direct = MatrixZq::new(Modulus::new(36).unwrap(), 2, 2, data).unwrap();
        let cfg = PeriodSearchConfig::default();
        prop_assert_eq!(sys.cycle_structure(&cfg).unwrap(), cycle_structure(&direct, &cfg).unwrap());
        prop_assert_eq!(
            sys.decide_fixed_point(&cfg).unwrap().is_fixed_point,
            lfps_test(&direct).unwrap()
        );
        prop_assert_eq!(sys.iteration_bound(), iteration_bound(2, &RingSpec::new(&[36]).unwrap()));
        prop_assert_eq!(sys.state_count(), BigUint::from(36u32 * 36));
    }
}

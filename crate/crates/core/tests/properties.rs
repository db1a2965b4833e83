use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spherical::character::{binomial, irrep_dim, sym_power_character, sym_power_decompose, tensor_decompose, mass_usize};
use spherical::diagram::random_operation;
use spherical::dsl::{parse_algebra_text, parse_module_text, parse_triple, print};
use spherical::lie::{weyl_dim, SimpleFactor};
use spherical::normal::{dual_module, normalize};
use spherical::rules::{is_reduced, reduce};
use spherical::tables::database;
use spherical::algebra::Triple;

fn factor() -> impl Strategy<Value = SimpleFactor> {
    prop_oneof![
        (1usize..=4).prop_map(SimpleFactor::a),
        (2usize..=3).prop_map(SimpleFactor::b),
        (2usize..=3).prop_map(SimpleFactor::c),
        (4usize..=5).prop_map(SimpleFactor::d),
        Just(SimpleFactor::g2()),
    ]
}

fn weight(f: SimpleFactor, top: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(0..=top, f.rank)
}

fn instances() -> Vec<Triple> {
    database().instances(4).iter().map(|i| i.triple.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weyl_dimension_matches_character((f, hw) in factor().prop_flat_map(|f| (Just(f), weight(f, 2)))) {
        let ch = spherical::character::character(f, &hw).unwrap();
        prop_assert_eq!(ch.mass(), weyl_dim(f, &hw).unwrap());
    }

    #[test]
    fn tensor_products_keep_dimension(
        (f, a, b) in factor().prop_flat_map(|f| (Just(f), weight(f, 1), weight(f, 1)))
    ) {
        let total: BigInt = tensor_decompose(f, &a, &b)
            .unwrap()
            .iter()
            .map(|(w, m)| m * weyl_dim(f, w).unwrap())
            .sum();
        prop_assert_eq!(total, weyl_dim(f, &a).unwrap() * weyl_dim(f, &b).unwrap());
    }

    #[test]
    fn symmetric_powers_keep_dimension(
        m in prop::sample::select(vec!["w1", "w1 + w1", "w2", "w1^2", "w1 + w2", "w1^3"]),
        d in 1usize..=4,
    ) {
        let h = parse_algebra_text("sl(3)").unwrap();
        let v = parse_module_text(&h, m).unwrap();
        let n = v.dim(&h) as u64;
        let ch = sym_power_character(&h, &v, d).unwrap();
        prop_assert_eq!(BigInt::from(mass_usize(&ch)), binomial(n + d as u64 - 1, d as u64));
        let parts: BigInt = sym_power_decompose(&h, &v, d)
            .unwrap()
            .iter()
            .map(|c| &c.multiplicity * BigInt::from(irrep_dim(&h, &c.highest_weight)))
            .sum();
        prop_assert_eq!(parts, binomial(n + d as u64 - 1, d as u64));
    }

    #[test]
    fn printing_round_trips(i in any::<prop::sample::Index>()) {
        let all = instances();
        let t = &all[i.index(all.len())];
        let back = parse_triple(&print(t)).unwrap();
        prop_assert_eq!(normalize(&back), normalize(t));
    }

    #[test]
    fn normalization_is_idempotent_and_dual_blind(i in any::<prop::sample::Index>()) {
        let all = instances();
        let t = &all[i.index(all.len())];
        let n = normalize(t);
        prop_assert_eq!(&normalize(&n), &n);
        prop_assert_eq!(normalize(&dual_module(t)), n);
    }

    #[test]
    fn reduction_is_idempotent(i in any::<prop::sample::Index>()) {
        let all = instances();
        let (r, _) = reduce(&all[i.index(all.len())]);
        prop_assert!(is_reduced(&r));
        let (again, steps) = reduce(&r);
        prop_assert!(steps.is_empty());
        prop_assert_eq!(normalize(&again), normalize(&r));
    }

    #[test]
    fn random_operations_apply(i in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let all = instances();
        let t = &all[i.index(all.len())];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(op) = random_operation(t, &mut rng) {
            prop_assert!(op.apply(t).is_ok(), "{:?} on {}", op, print(t));
        }
    }
}

use num_traits::{One, Zero};
use proptest::prelude::*;

use sepprob::formulas::{count_s, lift_fixed_points, pair_count, sep_prob};
use sepprob::partition::{all_compositions, partitions};
use sepprob::strong::connection_coefficient;
use sepprob::{Composition, Partition, Rational};

fn lambda_and_alpha(max_n: usize) -> impl Strategy<Value = (Partition, Composition)> {
    (1..=max_n).prop_flat_map(|n| {
        let lambdas = partitions(n);
        (0..lambdas.len(), 1..=n).prop_flat_map(move |(i, m)| {
            let lambda = lambdas[i].clone();
            let alphas = all_compositions(m);
            (0..alphas.len()).prop_map(move |j| (lambda.clone(), alphas[j].clone()))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probability_in_unit_interval((lambda, alpha) in lambda_and_alpha(9)) {
        let p = sep_prob(&lambda, &alpha).unwrap().probability;
        prop_assert!(p >= Rational::zero() && p <= Rational::one());
    }

    #[test]
    fn count_ignores_block_order((lambda, alpha) in lambda_and_alpha(9), seed in any::<u64>()) {
        let mut parts = alpha.parts().to_vec();
        let shift = seed as usize % parts.len();
        parts.rotate_left(shift);
        let rotated = Composition::new(parts).unwrap();
        prop_assert_eq!(count_s(&lambda, &alpha).unwrap(), count_s(&lambda, &rotated).unwrap());
    }

    #[test]
    fn count_is_at_most_pair_count((lambda, alpha) in lambda_and_alpha(9)) {
        prop_assert!(count_s(&lambda, &alpha).unwrap() <= pair_count(&lambda, &alpha));
    }

    #[test]
    fn lift_matches_direct((lambda, alpha) in lambda_and_alpha(7), r in 0usize..3) {
        prop_assume!(!lambda.parts().contains(&1));
        let lifted = lambda.with_fixed_points(r);
        prop_assert_eq!(lift_fixed_points(&lambda, r, &alpha).unwrap(), count_s(&lifted, &alpha).unwrap());
    }

    #[test]
    fn connection_ignores_block_order((lambda, alpha) in lambda_and_alpha(6)) {
        prop_assume!(alpha.size() == lambda.size());
        let mut parts = alpha.parts().to_vec();
        parts.reverse();
        let reversed = Composition::new(parts).unwrap();
        prop_assert_eq!(
            connection_coefficient(&lambda, &alpha).unwrap(),
            connection_coefficient(&lambda, &reversed).unwrap()
        );
    }
}

use lpst_core::linalg::{random_complex_matrix, random_complex_vector, stream_rng};
use lpst_core::pspace::{op_norm, oracle_norm, vec_norm, Budget, OperatorMatrix, PExponent, PVector, WeightedPointSpace};
use lpst_core::tensor::kron;
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), 1.0f64..6.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Any concrete vector's ratio is a lower bound, so it cannot beat the
    /// certified upper end.
    #[test]
    fn upper_dominates_sampled_ratios(seed in any::<u64>(), p in exponent(), r in 1usize..5, c in 1usize..5) {
        let mut rng = stream_rng(seed, 0);
        let a = OperatorMatrix::on_counting(random_complex_matrix(&mut rng, r, c));
        let p = PExponent::new(p).unwrap();
        let est = op_norm(&a, p, &Budget::with_seed(seed)).unwrap();
        prop_assert!(est.lower <= est.upper * (1.0 + 1e-12));
        for _ in 0..8 {
            let x = PVector::new(WeightedPointSpace::counting(c), random_complex_vector(&mut rng, c)).unwrap();
            let ax = PVector::new(WeightedPointSpace::counting(r), a.entries() * x.coords()).unwrap();
            prop_assert!(vec_norm(&ax, p) <= est.upper * vec_norm(&x, p) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn kron_with_identity_preserves_interval(seed in any::<u64>(), p in exponent(), n in 1usize..4, m in 1usize..3) {
        let mut rng = stream_rng(seed, 1);
        let a = OperatorMatrix::on_counting(random_complex_matrix(&mut rng, n, n));
        let id = OperatorMatrix::identity(WeightedPointSpace::uniform(m));
        let p = PExponent::new(p).unwrap();
        let budget = Budget::with_seed(seed);
        let x = op_norm(&a, p, &budget).unwrap();
        let y = op_norm(&kron(&a, &id), p, &budget).unwrap();
        prop_assert!(y.lower <= x.upper * (1.0 + 1e-9));
        prop_assert!(x.lower <= y.upper * (1.0 + 1e-9));
    }
}

#[test]
fn oracle_sits_inside_interval() {
    for (k, p) in [1.25, 1.5, 3.0, 4.0].into_iter().enumerate() {
        let p = PExponent::new(p).unwrap();
        for c in 0..4 {
            let mut rng = stream_rng(99, (k * 10 + c) as u64);
            let a = OperatorMatrix::on_counting(random_complex_matrix(&mut rng, 2, 2));
            let est = op_norm(&a, p, &Budget::with_seed(5)).unwrap();
            let o = oracle_norm(&a, p, 5).unwrap();
            assert!(est.contains(o, 1e-3 * o), "p={} oracle {o} vs [{}, {}]", p.value(), est.lower, est.upper);
        }
    }
}

use num_bigint::BigUint;
use proptest::prelude::*;
use ptcache::analysis::{f_jcm, f_pt, rho};
use ptcache::combinatorics::{
    binom, enumerate_subsets_by_type, hypergeo_pmf, Rational, TypeVector,
};
use ptcache::scheme::{
    count_vectors, derive_types, preset, Blueprint, Preset, SystemParams, UserGrouping,
};
use ptcache::verifier::verify_end_to_end;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = Rational::new(n, d);
        let back: Rational = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
    }

    /// Every t-subset has exactly one type, so type counts add up to C(K,t),
    /// and the baseline count is t times that.
    #[test]
    fn subfile_counts_cover_all_subsets(q1 in 2u32..9, q2 in 2u32..9, t in 1u32..4) {
        let (q1, q2) = (q1.max(q2), q1.min(q2));
        prop_assume!(q2 >= t);
        let k = q1 + q2;
        let params = SystemParams::new(k, t, k, 1).unwrap();
        let g = UserGrouping::new(vec![q1, q2]).unwrap();
        let types = derive_types(&params, &g).unwrap();
        let counts = count_vectors(&types, &g);
        let total: BigUint = counts.f.iter().sum();
        prop_assert_eq!(&total, &binom(k as u64, t as i64));
        prop_assert_eq!(total * BigUint::from(t), f_jcm(k, t));
        for (v, f) in types.subfile.iter().zip(&counts.f) {
            let n = enumerate_subsets_by_type(&g.groups(), v).unwrap().len();
            prop_assert_eq!(BigUint::from(n), f.clone());
        }
        let sum: num_bigint::BigInt = counts.delta1().unwrap().iter().sum();
        prop_assert_eq!(sum, num_bigint::BigInt::from(0));
    }

    #[test]
    fn hypergeometric_pmf_sums_to_one(q in 2u64..30, t in 1u64..6) {
        prop_assume!(t <= q);
        let s: Rational = (0..=t as i64).map(|j| hypergeo_pmf(q, t, j).unwrap()).sum();
        prop_assert_eq!(s, Rational::one());
    }

    #[test]
    fn ratio_strictly_below_one_and_decreasing(r in 1u32..5, dq in 1u32..25) {
        let q = 2 * r + dq;
        prop_assert!(f_pt(q, r) < f_jcm(2 * q + 1, 2 * r));
        prop_assert!(rho(q + 1, r) < rho(q, r));
    }

    #[test]
    fn blueprint_gamma_positive(r in 1u32..4, dq in 1u32..12) {
        let (t, q) = (2 * r, 2 * r + dq);
        let k = 2 * q + 1;
        let bp = Blueprint::derive(preset(Preset::Theorem1, SystemParams::new(k, t, k, 1).unwrap()).unwrap()).unwrap();
        prop_assert!(bp.gamma()[1].is_positive());
        prop_assert_eq!(&bp.sizing.packets_per_file, &f_pt(q, r));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Any demand vector and seed decodes on the small instances.
    #[test]
    fn random_demands_decode(
        pick in 0usize..3,
        seed in any::<u64>(),
        raw in proptest::collection::vec(1u32..=9, 9),
    ) {
        let (p, k, t) = [(Preset::Theorem1, 7u32, 2u32), (Preset::OddT3, 9, 3), (Preset::Jcm, 6, 3)][pick];
        let demands: Vec<u32> = raw[..k as usize].iter().map(|d| (d - 1) % k + 1).collect();
        let spec = preset(p, SystemParams::new(k, t, k, 1).unwrap()).unwrap();
        let rep = verify_end_to_end(spec, &demands, seed);
        prop_assert!(rep.pass, "{:?}", rep.first_failure);
    }
}

#[test]
fn type_vector_display() {
    assert_eq!(TypeVector::new(vec![1, 2]).to_string(), "(1,2)");
}

/// Grid from the verifier's invariants: odd-K construction over t in {2,4},
/// q in [t+1 : t+6], three seeds, distinct and all-equal demands.
#[test]
fn end_to_end_grid() {
    for t in [2u32, 4] {
        for q in t + 1..=t + 6 {
            let k = 2 * q + 1;
            for seed in 0..3 {
                for demands in [(1..=k).collect::<Vec<_>>(), vec![1; k as usize]] {
                    let spec =
                        preset(Preset::Theorem1, SystemParams::new(k, t, k, 1).unwrap()).unwrap();
                    let rep = verify_end_to_end(spec, &demands, seed);
                    assert!(rep.pass, "t={t} q={q} seed={seed}: {:?}", rep.first_failure);
                }
            }
        }
    }
}

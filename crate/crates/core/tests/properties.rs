use num_bigint::BigInt;
use proptest::collection::btree_map;
use proptest::prelude::*;

use gossez_core::{
    apply_a, apply_g, decompose, extremize, pair_c_functional, pair_l1_c, solve_a, type_d_gap, EvConstSeq,
    FinSeq, LimFunctional, Linear, QuadOutcome, Rat, Sense,
};
use gossez_core::certificates::quad_objective;

fn rational() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn positive() -> impl Strategy<Value = Rat> {
    (1i64..=20, 1i64..=12).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn finseq() -> impl Strategy<Value = FinSeq> {
    btree_map(1usize..=12, rational(), 0..=8).prop_map(|m| FinSeq::from_pairs(m).unwrap())
}

fn evconst() -> impl Strategy<Value = EvConstSeq> {
    (rational(), finseq()).prop_map(|(mu, w)| EvConstSeq::compose(mu, &w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairing_is_bilinear(x in finseq(), y in finseq(), c in evconst(), d in evconst(), a in rational()) {
        let lhs = pair_l1_c(&(&x + &y.scaled(&a)), &c);
        prop_assert_eq!(lhs, pair_l1_c(&x, &c) + &a * pair_l1_c(&y, &c));
        let lhs = pair_l1_c(&x, &(&c + &d.scaled(&a)));
        prop_assert_eq!(lhs, pair_l1_c(&x, &c) + &a * pair_l1_c(&x, &d));
    }

    #[test]
    fn decompose_round_trips(y in evconst()) {
        let (mu, w) = decompose(&y);
        prop_assert_eq!(EvConstSeq::compose(mu, &w), y);
    }

    #[test]
    fn functional_splits(y in evconst(), abs in finseq(), lim in rational()) {
        let phi = LimFunctional::new(abs.clone(), lim.clone());
        prop_assert_eq!(pair_c_functional(&y, &phi), pair_l1_c(&abs, &y) + &lim * y.limit());
    }

    #[test]
    fn g_is_skew_with_tail(x in finseq()) {
        let g = apply_g(&x);
        prop_assert_eq!(pair_l1_c(&x, &g), Rat::from_integer(0.into()));
        prop_assert_eq!(g.tail(), &-x.sum());
    }

    #[test]
    fn a_round_trips(x in finseq()) {
        prop_assert_eq!(solve_a(&apply_a(&x)), x.clone());
        prop_assert_eq!(apply_a(&solve_a(&x)), x);
    }

    #[test]
    fn extremize_is_sound(c in evconst(), sigma in positive(), probe in finseq()) {
        for sense in [Sense::Max, Sense::Min] {
            match extremize(&c, &sigma, sense).unwrap() {
                QuadOutcome::Finite { value, witness } => {
                    prop_assert_eq!(&quad_objective(&c, &sigma, sense, &witness), &value);
                    let q = quad_objective(&c, &sigma, sense, &probe);
                    match sense {
                        Sense::Max => prop_assert!(q <= value),
                        Sense::Min => prop_assert!(q >= value),
                    }
                }
                QuadOutcome::Unbounded { ray } => {
                    prop_assert!(ray.sum() == Rat::from_integer(0.into()));
                    prop_assert!(pair_l1_c(&ray, &c) != Rat::from_integer(0.into()));
                }
            }
        }
    }

    #[test]
    fn criterion_holds_for_t(xstar in finseq(), xss in evconst()) {
        prop_assert!(type_d_gap(&xstar, &xss).criterion_holds);
    }
}

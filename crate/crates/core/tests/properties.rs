#[path = "../src/oracle.rs"]
mod oracle;

use num_integer::Integer;
use proptest::prelude::*;

use ergolab::accum::lacunary_schedule;
use ergolab::diophantine::{best_approx, convergents};
use ergolab::precision::{floor_pow, floor_pow_coeff, Coeff, HighReal};

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(256) })]

    #[test]
    fn floor_pow_agrees_with_integer_root(
        a_num in -50i64..50,
        a_den in 1i64..20,
        c_num in 101u32..105,
        n in 1u64..2_000_000,
    ) {
        prop_assume!(a_num != 0);
        let c = HighReal::from_ratio(c_num as i64, 100);
        let alpha = HighReal::from_ratio(a_num, a_den);
        let got = floor_pow(alpha, c, n).unwrap();
        let want = oracle::floor_rational_power(a_num, a_den, n, c_num, 100) as i64;
        // a flagged floor may resolve downward
        if got.boundary_flag {
            prop_assert!(got.floor_value == want || got.floor_value == want - 1);
        } else {
            prop_assert_eq!(got.floor_value, want);
        }
    }

    #[test]
    fn rational_linear_floors_are_exact(p in -1000i64..1000, q in 1i64..1000, n in 1u64..10_000_000) {
        let got = floor_pow_coeff(&Coeff::ratio(p, q).unwrap(), HighReal::ONE, n);
        prop_assume!(p != 0);
        let got = got.unwrap();
        prop_assert_eq!(got.floor_value, Integer::div_floor(&(p * n as i64), &q));
        prop_assert!(got.frac_value.to_f64() >= 0.0 && got.frac_value.to_f64() < 1.0);
    }

    #[test]
    fn best_approx_is_within_one_over_n(x in 0.001f64..100.0, n in 2u64..1_000_000) {
        let gamma = HighReal::from_f64(x);
        let c = best_approx(gamma, n).unwrap();
        let err = (gamma - HighReal::from_ratio(c.p, c.q as i64)).abs().to_f64();
        prop_assert!(err < 1.0 / n as f64, "{}/{} err {}", c.p, c.q, err);
    }

    #[test]
    fn convergent_denominators_increase(x in 0.001f64..100.0) {
        let cs = convergents(HighReal::from_f64(x), 12).unwrap();
        // q_0 = q_1 = 1 when the first partial quotient after a_0 is 1
        prop_assert!(cs[1..].windows(2).all(|w| w[1].q > w[0].q));
    }

    #[test]
    fn lacunary_schedule_shape(root in 1u32..16, n_max in 1u64..10_000_000) {
        let s = lacunary_schedule(root, n_max).unwrap();
        prop_assert_eq!(*s.last().unwrap(), n_max);
        prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(s[0] >= 1);
    }
}

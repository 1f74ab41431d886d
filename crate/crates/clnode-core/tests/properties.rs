//! Property tests for the series kernel: ring laws, inversion, and the
//! Pochhammer recursion over randomized inputs.

use clnode_core::qseries::{pochhammer_fin_scalar, TruncSeries};
use clnode_core::scalar::{Scalar, TSeries};
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn arb_series(order: usize) -> impl Strategy<Value = TruncSeries<BigRational>> {
    proptest::collection::vec(arb_rational(), order + 1)
        .prop_map(TruncSeries::from_coeffs)
}

fn arb_tseries(trunc: usize) -> impl Strategy<Value = TSeries> {
    proptest::collection::vec(arb_rational(), trunc + 1).prop_map(TSeries::from_coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributivity((f, g, h) in (arb_series(6), arb_series(6), arb_series(6))) {
        let lhs = f.add(&g).mul(&h);
        let rhs = f.mul(&h).add(&g.mul(&h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_commutes((f, g) in (arb_series(6), arb_series(6))) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
    }

    #[test]
    fn inverse_is_two_sided(mut f in arb_series(6)) {
        // force an invertible constant term
        if f.coeff(0) == &BigRational::from_integer(0.into()) {
            f.set_coeff(0, rat(1, 1));
        }
        let inv = f.invert().unwrap();
        let one = TruncSeries::one(6, &rat(1, 1));
        prop_assert_eq!(f.mul(&inv), one.clone());
        prop_assert_eq!(inv.mul(&f), one);
    }

    #[test]
    fn tseries_ring_laws((a, b, c) in (arb_tseries(8), arb_tseries(8), arb_tseries(8))) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
    }

    #[test]
    fn pochhammer_recursion_randomized((a, n) in (arb_tseries(10), 0usize..12)) {
        let t = TSeries::t(10);
        let one = TSeries::one(10);
        let lhs = pochhammer_fin_scalar(&a, &t, n + 1);
        let rhs = pochhammer_fin_scalar(&a, &t, n).mul(&one.sub(&t.pow(n).mul(&a)));
        prop_assert_eq!(lhs, rhs);
    }
}

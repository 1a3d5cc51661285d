mod common;

use common::*;
use proptest::prelude::*;

#[test]
fn series_ring_axioms() {
    let cases = run((series(), series(), series()), |(a, b, c)| ring_axioms(&a, &b, &c)).unwrap();
    assert!(cases >= 1000);
}

#[test]
fn invert_round_trips() {
    run(unit_series(), |a| invert_round_trip(&a)).unwrap();
}

#[test]
fn progressions_reassemble() {
    run((series(), 1u64..8), |(a, m)| progression_round_trip(&a, m)).unwrap();
}

#[test]
fn huff_is_idempotent() {
    run((series(), series()), |(a, b)| huff_idempotent(&a, &b)).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn reduce_mod_commutes_with_mul(a in series(), b in series(), m in 2i64..200) {
        let m = num_bigint::BigInt::from(m);
        same(&a.mul_mod(&b, &m), &a.mul(&b).reduce_mod(&m))?;
    }

    #[test]
    fn pow_matches_repeated_mul(a in unit_series(), e in 0i64..5) {
        let mut acc = qcong_core::LaurentSeries::one(a.prec() - a.min_exp());
        for _ in 0..e {
            acc = acc.mul(&a);
        }
        same(&a.pow(e).unwrap(), &acc)?;
        same(&a.pow(-e).unwrap().mul(&a.pow(e).unwrap()), &qcong_core::LaurentSeries::one(a.prec() - a.min_exp()))?;
    }
}

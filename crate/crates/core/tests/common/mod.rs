//! Strategies and property bodies shared by the property suite and the
//! acceptance run.

#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use qcong_core::LaurentSeries;

pub const CASES: u32 = 1000;

/// Window `[min_exp, min_exp + len)` with small integer coefficients.
pub fn series() -> impl Strategy<Value = LaurentSeries> {
    (-4i64..5, prop::collection::vec(-50i64..=50, 0..14))
        .prop_map(|(min_exp, c)| LaurentSeries::from_ints(min_exp, &c, min_exp + c.len() as i64))
}

/// Series whose lowest tracked coefficient is `±1`.
pub fn unit_series() -> impl Strategy<Value = LaurentSeries> {
    (-4i64..5, prop::bool::ANY, prop::collection::vec(-50i64..=50, 0..14)).prop_map(|(min_exp, neg, mut c)| {
        c.insert(0, if neg { -1 } else { 1 });
        LaurentSeries::from_ints(min_exp, &c, min_exp + c.len() as i64)
    })
}

/// Same window and same coefficients on it.
pub fn same(a: &LaurentSeries, b: &LaurentSeries) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.prec(), b.prec(), "precision differs: {} vs {}", a, b);
    prop_assert!(a.agrees_with(b), "coefficients differ: {} vs {}", a, b);
    Ok(())
}

pub fn ring_axioms(a: &LaurentSeries, b: &LaurentSeries, c: &LaurentSeries) -> Result<(), TestCaseError> {
    same(&a.add(b), &b.add(a))?;
    same(&a.add(b).add(c), &a.add(&b.add(c)))?;
    same(&a.mul(b), &b.mul(a))?;
    same(&a.mul(b).mul(c), &a.mul(&b.mul(c)))?;
    same(&a.mul(&b.add(c)), &a.mul(b).add(&a.mul(c)))?;
    let rel = a.prec() - a.min_exp();
    same(&a.mul(&LaurentSeries::one(rel)), a)?;
    let zero = a.sub(a);
    prop_assert!(zero.is_zero());
    same(&a.add(&zero), a)?;
    same(&a.neg().neg(), a)?;
    Ok(())
}

pub fn invert_round_trip(a: &LaurentSeries) -> Result<(), TestCaseError> {
    let rel = a.prec() - a.min_exp();
    let inv = a.invert().map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(inv.min_exp(), -a.min_exp());
    same(&a.mul(&inv), &LaurentSeries::one(rel))?;
    same(&inv.invert().map_err(|e| TestCaseError::fail(e.to_string()))?, a)?;
    let m = BigInt::from(125);
    let inv_mod = a.invert_mod(&m).map_err(|e| TestCaseError::fail(e.to_string()))?;
    same(&inv_mod, &inv.reduce_mod(&m))?;
    Ok(())
}

pub fn progression_round_trip(a: &LaurentSeries, m: u64) -> Result<(), TestCaseError> {
    let mut sum: Option<LaurentSeries> = None;
    for r in 0..m as i64 {
        let part = a.extract_progression(m, r).substitute_power(m).shift(r);
        sum = Some(match sum {
            None => part,
            Some(s) => s.add(&part),
        });
    }
    let sum = sum.expect("m >= 1");
    same(&sum, a)?;
    prop_assert_eq!(sum.min_exp(), a.min_exp());
    same(&a.substitute_power(m).extract_progression(m, 0), a)?;
    Ok(())
}

pub fn huff_idempotent(a: &LaurentSeries, b: &LaurentSeries) -> Result<(), TestCaseError> {
    let h = a.huff();
    same(&h.huff(), &h)?;
    prop_assert_eq!((h.min_exp(), h.prec()), (a.min_exp(), a.prec()));
    let fifths = a.extract_progression(5, 0).substitute_power(5);
    for (e, c) in h.terms() {
        if e.rem_euclid(5) == 0 {
            prop_assert_eq!(c, &a.coeff(e));
            prop_assert_eq!(c, &fifths.coeff(e));
        } else {
            prop_assert_eq!(c, &BigInt::from(0));
        }
    }
    same(&a.add(b).huff(), &a.huff().add(&b.huff()))?;
    Ok(())
}

/// Runs `body` on `CASES` inputs; returns the failure message, if any.
pub fn run<S: Strategy>(strategy: S, body: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, body).map(|_| CASES).map_err(|e| e.to_string())
}

//! Generating functions for `p` and `p_{1,5^m}` on progressions, checked
//! coefficientwise.
//!
//! The left side of each identity is read off the partition oracles; the
//! right side is `Σ_i v_i q^{i-1} F · (f_5^6/f_1^6)^{i-1}` for a vector `v`
//! from the matrix engine and a base eta quotient `F`.

use std::time::Instant;

use num_traits::{ToPrimitive, Zero};

use super::claims::{pow5, Family};
use super::{error_report, scaled_prec, verify_series_equal, VerifyError};
use crate::eta::EtaQuotientSpec;
use crate::hh::{CoeffVector, HHMatrix};
use crate::partitions::{counting_oracle, delta, CountingKind};
use crate::report::{Params, VerificationReport};
use crate::series::LaurentSeries;

const SOURCE: &str = "generating-functions";

/// Left side `Σ_{n < prec} f(A n + B) q^n` from the oracles.
pub fn progression_series(kind: CountingKind, modulus: u64, offset: u64, prec: i64) -> LaurentSeries {
    let coeffs = (0..prec.max(0) as u64).map(|n| counting_oracle(kind, modulus * n + offset)).collect();
    LaurentSeries::with_prec(0, prec.max(0), coeffs)
}

/// `Σ_i v_i q^{i-1} F (f_5^6/f_1^6)^{i-1}` on `[0, prec)`, where `F` is
/// `f_5^{a} f_1^{b}`.
fn shape_sum(v: &CoeffVector, f5: i64, f1: i64, prec: i64) -> Result<LaurentSeries, VerifyError> {
    let mut term = EtaQuotientSpec::new([(5, f5), (1, f1)], 0)?.expand(prec)?;
    let step = EtaQuotientSpec::new([(5, 6), (1, -6)], 1)?.expand(prec)?;
    let mut acc = LaurentSeries::zero(prec);
    for i in 1..=v.truncation_len().min(prec.max(0) as usize) {
        let c = v.get(i).expect("within truncation");
        if !c.is_zero() {
            acc = acc.add(&term.scale(c));
        }
        term = term.mul(&step);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// `Σ p(5^{2k-1} n + δ_{2k-1}) q^n` against `x_{2k-1}`.
    Odd,
    /// `Σ p(5^{2k} n + δ_{2k}) q^n` against `x_{2k}`.
    Even,
}

/// The classical generating functions for `p` on `5^m n + δ_m`.
pub fn verify_hh_genfun(matrix: &HHMatrix, k: u32, parity: Parity, prec: i64) -> VerificationReport {
    let (m, label) = match parity {
        Parity::Odd => (2 * k - 1, "genfun/p-odd"),
        Parity::Even => (2 * k, "genfun/p-even"),
    };
    let id = format!("{label}/k={k}");
    let params = Params { k: Some(k), ..Params::default() };
    run(&id, params, || {
        let modulus = pow5(m)? as u64;
        let offset = delta(m).to_u64().expect("delta fits in u64");
        let prec = scaled_prec(prec, modulus);
        let lhs = progression_series(CountingKind::P, modulus, offset, prec);
        let x = matrix.x_vector(m as u64, prec as usize)?;
        let rhs = match parity {
            Parity::Odd => shape_sum(&x, 5, -6, prec)?,
            Parity::Even => shape_sum(&x, 6, -7, prec)?,
        };
        verify_series_equal(&id, SOURCE, &lhs, &rhs)
    })
}

/// Which of the three theorem-level generating functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremSeries {
    G1,
    G3,
    G4,
}

impl TheoremSeries {
    fn family(self) -> Family {
        match self {
            TheoremSeries::G1 => Family::C1,
            TheoremSeries::G3 => Family::C2,
            TheoremSeries::G4 => Family::C3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            TheoremSeries::G1 => "genfun/c1",
            TheoremSeries::G3 => "genfun/c2",
            TheoremSeries::G4 => "genfun/c3",
        }
    }
}

fn verify_theorem_series(
    matrix: &HHMatrix,
    which: TheoremSeries,
    k: u32,
    beta: u32,
    prec: i64,
) -> VerificationReport {
    let id = format!("{}/k={k}/beta={beta}", which.label());
    let params = Params::kb(k, beta);
    run(&id, params, || {
        // The progression is the one of the matching congruence family.
        let claim = which.family().claim(k, beta, 0)?;
        let prec = scaled_prec(prec, claim.modulus);
        let lhs = progression_series(claim.kind, claim.modulus, claim.offset, prec);
        let len = prec as usize;
        let (k, b) = (k as u64, beta as u64);
        let rhs = match which {
            TheoremSeries::G1 => shape_sum(&matrix.y_odd_vector(k, b, len)?, 5, -7, prec)?,
            TheoremSeries::G3 => shape_sum(&matrix.y_even_vector(k, 2 * b + 1, len)?, 4, -6, prec)?,
            TheoremSeries::G4 => shape_sum(&matrix.y_even_vector(k, 2 * b + 2, len)?, 6, -8, prec)?,
        };
        let report = verify_series_equal(&id, SOURCE, &lhs, &rhs)?;
        Ok(report.params(Params::kb(k as u32, beta).with_ell(match claim.kind {
            CountingKind::P1L(l) => l,
            _ => unreachable!("theorem families count p_(1,l)"),
        })))
    })
}

/// `Σ p_{1,5^{2k-1}}(5^{2k+β-1} n + B) q^n = Σ_i y^{(2k-1)}_{β+1,i} q^{i-1} f_5^{6i-1}/f_1^{6i+1}`.
pub fn verify_g1(matrix: &HHMatrix, k: u32, beta: u32, prec: i64) -> VerificationReport {
    verify_theorem_series(matrix, TheoremSeries::G1, k, beta, prec)
}

/// The two generating functions for `p_{1,5^{2k}}`, with shapes
/// `f_5^{6i-2}/f_1^{6i}` and `f_5^{6j}/f_1^{6j+2}`.
pub fn verify_g3_g4(matrix: &HHMatrix, k: u32, beta: u32, which: TheoremSeries, prec: i64) -> VerificationReport {
    assert!(which != TheoremSeries::G1, "use verify_g1");
    verify_theorem_series(matrix, which, k, beta, prec)
}

fn run(
    id: &str,
    params: Params,
    f: impl FnOnce() -> Result<VerificationReport, VerifyError>,
) -> VerificationReport {
    let started = Instant::now();
    match f() {
        Ok(r) => r,
        Err(e) => error_report(id, SOURCE, &e).params(params).timed(started),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Outcome;
    use num_bigint::BigInt;

    #[test]
    fn h1_and_h2_small_k() {
        let m = HHMatrix::new();
        for (parity, prec) in [(Parity::Odd, 60), (Parity::Even, 60), (Parity::Odd, 1)] {
            let r = verify_hh_genfun(&m, 1, parity, prec);
            assert_eq!(r.outcome, Outcome::Pass, "{r:?}");
        }
    }

    #[test]
    fn g_series_small_cases() {
        let m = HHMatrix::new();
        assert_eq!(verify_g1(&m, 1, 0, 30).outcome, Outcome::Pass);
        assert_eq!(verify_g1(&m, 1, 1, 20).outcome, Outcome::Pass);
        assert_eq!(verify_g3_g4(&m, 1, 0, TheoremSeries::G3, 30).outcome, Outcome::Pass);
        assert_eq!(verify_g3_g4(&m, 1, 0, TheoremSeries::G4, 20).outcome, Outcome::Pass);
    }

    #[test]
    fn corrupted_matrix_breaks_g1() {
        let m = HHMatrix::new().with_override(7, 2, BigInt::from(1));
        let r = verify_g1(&m, 1, 1, 20);
        assert_eq!(r.outcome, Outcome::Fail);
    }

    #[test]
    fn constant_terms() {
        let lhs = progression_series(CountingKind::P1L(5), 5, 4, 3);
        assert_eq!(lhs.coeff(0), BigInt::from(5));
        let x = HHMatrix::new().x_vector(2, 1).unwrap();
        assert_eq!(x.get(1), Some(&BigInt::from(1575)));
        assert_eq!(progression_series(CountingKind::P, 25, 24, 1).coeff(0), BigInt::from(1575));
    }
}

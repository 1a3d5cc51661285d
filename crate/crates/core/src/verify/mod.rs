//! Checks of identities, generating functions and congruences, each
//! producing a [`VerificationReport`].

pub mod claims;
mod divisibility;
mod genfun;
mod identities;
mod scan;
mod suite;

pub use claims::{ClaimError, CongruenceClaim, Family};
pub use divisibility::{check_claim, residue_cache, ResidueCache, EXACT_WITNESS_LIMIT};
pub use genfun::{verify_g1, verify_g3_g4, verify_hh_genfun, Parity, TheoremSeries};
pub use identities::{
    check_base_rows, check_x2_constant, check_xy_consistency, verify_f1_dissection, verify_dissection_steps,
    verify_huff_g_power, verify_huff_identity, HuffIdentity,
};
pub use scan::{scan_congruences, ImpliedBy, Rejection, ScanError, ScanOutcome, ScannedClaim};
pub use suite::{run_suite, Suite, SuiteConfig, SuiteReport};

use std::time::Instant;

use thiserror::Error;

use crate::eta::EtaError;
use crate::hh::HHError;
use crate::report::{RangeKind, VerificationReport, Witness};
use crate::series::{LaurentSeries, SeriesError};

pub const DEFAULT_PREC: i64 = 200;
pub const DEFAULT_N_MAX: u64 = 300;
/// Every divisibility sweep checks at least this many values of `n`.
pub const MIN_VALUES_PER_INSTANCE: u64 = 5;
/// Largest progression index a generating-function check expands by default.
pub const INDEX_BUDGET: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("series windows do not overlap: [{a_min}, {a_prec}) and [{b_min}, {b_prec})")]
    NoCommonWindow { a_min: i64, a_prec: i64, b_min: i64, b_prec: i64 },
    #[error(transparent)]
    HH(#[from] HHError),
    #[error(transparent)]
    Eta(#[from] EtaError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Claim(#[from] ClaimError),
}

/// `n_max` for a progression with modulus `A`: the full budget up to
/// `A = 25`, then `n_max·25/A`, but never fewer than
/// [`MIN_VALUES_PER_INSTANCE`] values.
pub fn scaled_n_max(n_max: u64, modulus: u64) -> u64 {
    if modulus <= 25 {
        n_max
    } else {
        (n_max.saturating_mul(25) / modulus).max(MIN_VALUES_PER_INSTANCE - 1)
    }
}

/// Number of coefficients compared for a progression with modulus `A`:
/// `prec`, capped so that `A·prec` stays within [`INDEX_BUDGET`], but at
/// least the constant term.
pub fn scaled_prec(prec: i64, modulus: u64) -> i64 {
    let cap = (INDEX_BUDGET / modulus.max(1)).max(1) as i64;
    prec.min(cap).max(1)
}

/// Compares two series on their common window.
///
/// Exponents below a series' `min_exp` count as zero, so the compared range is
/// `[min(min_a, min_b), min(prec_a, prec_b))`; the windows must overlap.
pub fn verify_series_equal(
    id: &str,
    source: &str,
    a: &LaurentSeries,
    b: &LaurentSeries,
) -> Result<VerificationReport, VerifyError> {
    let started = Instant::now();
    let lo = a.min_exp().min(b.min_exp());
    let hi = a.common_prec(b);
    if hi <= a.min_exp().max(b.min_exp()) {
        return Err(VerifyError::NoCommonWindow {
            a_min: a.min_exp(),
            a_prec: a.prec(),
            b_min: b.min_exp(),
            b_prec: b.prec(),
        });
    }
    let report = VerificationReport::new(id, source).range(RangeKind::Window, lo, hi);
    let report = match a.first_difference(b) {
        None => report.pass(),
        Some(e) => report.fail(Witness::Coefficient {
            exponent: e,
            left: a.coeff(e).to_string(),
            right: b.coeff(e).to_string(),
        }),
    };
    Ok(report.timed(started))
}

/// Turns an error from a check into a failing report, so that one broken
/// check never hides the others.
pub(crate) fn error_report(id: &str, source: &str, err: &VerifyError) -> VerificationReport {
    VerificationReport::new(id, source).fail(Witness::Mismatch {
        what: "error".into(),
        expected: "check to run".into(),
        actual: err.to_string(),
    })
}

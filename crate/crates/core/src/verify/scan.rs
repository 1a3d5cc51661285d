//! Empirical search for congruences `f(A n + B) ≡ 0 (mod d)`.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::claims::CongruenceClaim;
use super::divisibility::{residue_values, ResidueCache};
use crate::partitions::CountingKind;
use crate::report::{RangeKind, VerificationReport};

/// Largest modulus the scanner accepts.
pub const MAX_SCAN_MODULUS: u64 = 10_000;
/// Largest index `A_max·(n_check + 1)` the scanner tabulates.
pub const MAX_SCAN_INDEX: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("search space too large: {0}")]
    Unbounded(String),
    #[error("divisor must be at least 2, got {0}")]
    BadDivisor(u64),
    #[error("no divisors given")]
    NoDivisors,
}

/// A smaller progression that already contains this one and holds for the
/// same divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpliedBy {
    #[serde(rename = "modulusA")]
    pub modulus: u64,
    #[serde(rename = "offsetB")]
    pub offset: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScannedClaim {
    #[serde(flatten)]
    pub claim: CongruenceClaim,
    /// The claim held for every `n` up to this bound.
    #[serde(rename = "checkedUpTo")]
    pub checked_up_to: u64,
    #[serde(rename = "impliedBy", skip_serializing_if = "Option::is_none")]
    pub implied_by: Option<ImpliedBy>,
    /// Always false: a finite check is evidence, not proof.
    pub proven: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    #[serde(rename = "modulusA")]
    pub modulus: u64,
    #[serde(rename = "offsetB")]
    pub offset: u64,
    pub divisor: u64,
    /// First `n` where the value is not divisible.
    pub n: u64,
    /// That value modulo the divisor.
    pub residue: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub claims: Vec<ScannedClaim>,
    pub rejected: Vec<Rejection>,
    pub report: VerificationReport,
}

/// Tries every `1 ≤ A ≤ a_max`, `0 ≤ B < A` and divisor `d`, keeping the
/// progressions on which `kind` is divisible by `d` for all `n ≤ n_check`.
///
/// Claims are ordered by divisor, then `A`, then `B`. A claim contained in a
/// smaller one that also holds is kept, with `implied_by` pointing at the
/// smallest such progression.
pub fn scan_congruences(
    kind: CountingKind,
    a_max: u64,
    divisors: &[u64],
    n_check: u64,
    cache: &ResidueCache,
) -> Result<ScanOutcome, ScanError> {
    let started = Instant::now();
    if divisors.is_empty() {
        return Err(ScanError::NoDivisors);
    }
    if let Some(&d) = divisors.iter().find(|&&d| d < 2) {
        return Err(ScanError::BadDivisor(d));
    }
    if a_max == 0 || a_max > MAX_SCAN_MODULUS {
        return Err(ScanError::Unbounded(format!("modulus bound must be in 1..={MAX_SCAN_MODULUS}, got {a_max}")));
    }
    let top = a_max
        .checked_mul(n_check.saturating_add(1))
        .filter(|&t| t <= MAX_SCAN_INDEX)
        .ok_or_else(|| {
            ScanError::Unbounded(format!("A_max·(n_check+1) must not exceed {MAX_SCAN_INDEX}"))
        })?;

    let mut divisors = divisors.to_vec();
    divisors.sort_unstable();
    divisors.dedup();

    let mut claims = Vec::new();
    let mut rejected = Vec::new();
    for &d in &divisors {
        let values = residue_values(kind, d, top as usize, cache);
        let mut holding: Vec<(u64, u64)> = Vec::new();
        for a in 1..=a_max {
            for b in 0..a {
                let failure = (0..=n_check).find_map(|n| {
                    let r = values[(a * n + b) as usize];
                    (r != 0).then_some((n, r))
                });
                match failure {
                    Some((n, residue)) => rejected.push(Rejection { modulus: a, offset: b, divisor: d, n, residue }),
                    None => {
                        let implied_by = holding
                            .iter()
                            .find(|&&(a2, b2)| a % a2 == 0 && b % a2 == b2)
                            .map(|&(modulus, offset)| ImpliedBy { modulus, offset });
                        holding.push((a, b));
                        claims.push(ScannedClaim {
                            claim: CongruenceClaim::new(kind, a, b, d, "scan").expect("valid by construction"),
                            checked_up_to: n_check,
                            implied_by,
                            proven: false,
                        });
                    }
                }
            }
        }
    }
    let report = VerificationReport::new(format!("scan/{kind}"), "scan")
        .range(RangeKind::N, 0, n_check as i64 + 1)
        .note(format!(
            "{} progressions hold for n <= {n_check} ({} not implied by a smaller one); empirical, not proven",
            claims.len(),
            claims.iter().filter(|c| c.implied_by.is_none()).count()
        ))
        .informational()
        .timed(started);
    Ok(ScanOutcome { claims, rejected, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::residue_cache;

    fn found(o: &ScanOutcome) -> Vec<(u64, u64, u64)> {
        o.claims.iter().map(|c| (c.claim.modulus, c.claim.offset, c.claim.divisor)).collect()
    }

    #[test]
    fn p_mod_five() {
        let o = scan_congruences(CountingKind::P, 5, &[5], 100, residue_cache()).unwrap();
        assert_eq!(found(&o), [(5, 4, 5)]);
        let r = o.rejected.iter().find(|r| (r.modulus, r.offset) == (5, 0)).unwrap();
        assert_eq!((r.n, r.residue), (0, 1));
    }

    #[test]
    fn pm2_mod_five() {
        let o = scan_congruences(CountingKind::PMinus2, 5, &[5], 100, residue_cache()).unwrap();
        assert_eq!(found(&o), [(5, 2, 5), (5, 3, 5), (5, 4, 5)]);
    }

    #[test]
    fn p1l4_mod_seven_progressions() {
        let o = scan_congruences(CountingKind::P1L(4), 49, &[7], 100, residue_cache()).unwrap();
        assert_eq!(found(&o), [(49, 11, 7), (49, 25, 7), (49, 32, 7), (49, 39, 7)]);
    }

    #[test]
    fn implied_claims_are_marked() {
        let o = scan_congruences(CountingKind::P1L(5), 25, &[5], 100, residue_cache()).unwrap();
        let c = o.claims.iter().find(|c| (c.claim.modulus, c.claim.offset) == (25, 19)).unwrap();
        assert_eq!(c.implied_by, Some(ImpliedBy { modulus: 5, offset: 4 }));
        assert!(!c.proven);
    }

    #[test]
    fn emitted_claims_recheck_identically() {
        let o = scan_congruences(CountingKind::P1L(5), 25, &[5, 25], 30, residue_cache()).unwrap();
        for c in &o.claims {
            let r = crate::verify::check_claim("recheck", &c.claim, c.checked_up_to, residue_cache());
            assert!(r.is_pass(), "{}", c.claim);
        }
        for rej in o.rejected.iter().take(200) {
            let claim = CongruenceClaim::new(CountingKind::P1L(5), rej.modulus, rej.offset, rej.divisor, "t").unwrap();
            let r = crate::verify::check_claim("recheck", &claim, 30, residue_cache());
            assert!(matches!(r.witness, Some(crate::report::Witness::Divisibility { n, .. }) if n == rej.n));
        }
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(
            scan_congruences(CountingKind::P, 20_000, &[5], 1, residue_cache()),
            Err(ScanError::Unbounded(_))
        ));
        assert!(matches!(
            scan_congruences(CountingKind::P, 5000, &[5], 1000, residue_cache()),
            Err(ScanError::Unbounded(_))
        ));
        assert_eq!(scan_congruences(CountingKind::P, 5, &[], 1, residue_cache()), Err(ScanError::NoDivisors));
        assert_eq!(scan_congruences(CountingKind::P, 5, &[1], 1, residue_cache()), Err(ScanError::BadDivisor(1)));
    }
}

//! Divisibility sweeps over an arithmetic progression.
//!
//! Values come from the partition oracles reduced modulo the divisor, never
//! from the series engine, so these sweeps are independent of the
//! generating-function checks.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};
use std::time::Instant;

use super::claims::CongruenceClaim;
use crate::partitions::{counting_oracle, CountingKind, ResidueTable};
use crate::report::{RangeKind, VerificationReport, Witness};

/// Failing values at indices up to this bound are reported exactly; above
/// it the witness carries the residue.
pub const EXACT_WITNESS_LIMIT: u64 = 50_000;

/// Shared residue tables of `p(n) mod d`, one per divisor, grown on demand.
#[derive(Debug, Default)]
pub struct ResidueCache {
    tables: Mutex<HashMap<u64, Arc<ResidueTable>>>,
}

static CACHE: LazyLock<ResidueCache> = LazyLock::new(ResidueCache::default);

pub fn residue_cache() -> &'static ResidueCache {
    &CACHE
}

impl ResidueCache {
    /// A table mod `modulus` covering at least `n_max`.
    pub fn table(&self, modulus: u64, n_max: usize) -> Arc<ResidueTable> {
        let mut tables = self.tables.lock().unwrap();
        if let Some(t) = tables.get(&modulus) {
            if t.n_max() >= n_max {
                return Arc::clone(t);
            }
        }
        let t = Arc::new(ResidueTable::new(modulus, n_max));
        tables.insert(modulus, Arc::clone(&t));
        t
    }
}

/// Sweeps `claim` over `0 ≤ n ≤ n_max`.
///
/// The report fails at the first `n` whose value is not divisible, with the
/// exact value as witness when the index is small enough.
pub fn check_claim(
    id: &str,
    claim: &CongruenceClaim,
    n_max: u64,
    cache: &ResidueCache,
) -> VerificationReport {
    let started = Instant::now();
    let report = VerificationReport::new(id, claim.source.clone()).range(RangeKind::N, 0, n_max as i64 + 1);
    let Some(top) = claim.index(n_max) else {
        return report.skipped("progression index overflows 64 bits").timed(started);
    };
    let table = cache.table(claim.divisor, top as usize);
    for n in 0..=n_max {
        let index = claim.modulus * n + claim.offset;
        let residue = table.value(claim.kind, index as usize);
        if residue != 0 {
            let (value, note) = if index <= EXACT_WITNESS_LIMIT {
                (counting_oracle(claim.kind, index).to_string(), None)
            } else {
                (residue.to_string(), Some(format!("value shown modulo {}", claim.divisor)))
            };
            let mut r = report.fail(Witness::Divisibility {
                n,
                index: index.to_string(),
                value,
                divisor: claim.divisor.to_string(),
            });
            if let Some(note) = note {
                r = r.note(note);
            }
            return r.timed(started);
        }
    }
    report.pass().timed(started)
}

/// Residue of `kind` at every index `0..=n_max`.
pub(crate) fn residue_values(kind: CountingKind, modulus: u64, n_max: usize, cache: &ResidueCache) -> Vec<u64> {
    let table = cache.table(modulus, n_max);
    (0..=n_max).map(|n| table.value(kind, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Outcome;
    use crate::verify::claims::{p_power_claim, CongruenceClaim};

    #[test]
    fn p_mod_five_passes() {
        let r = check_claim("pc1", &p_power_claim(1).unwrap(), 200, residue_cache());
        assert_eq!(r.outcome, Outcome::Pass);
    }

    #[test]
    fn false_claim_gives_exact_witness() {
        let claim = CongruenceClaim::new(CountingKind::P, 5, 0, 5, "test").unwrap();
        let r = check_claim("bad", &claim, 10, residue_cache());
        assert_eq!(
            r.witness,
            Some(Witness::Divisibility { n: 0, index: "0".into(), value: "1".into(), divisor: "5".into() })
        );
        let claim = CongruenceClaim::new(CountingKind::P, 5, 4, 25, "test").unwrap();
        let r = check_claim("bad", &claim, 10, residue_cache());
        assert!(matches!(r.witness, Some(Witness::Divisibility { n: 0, ref value, .. }) if value == "5"));
    }

    #[test]
    fn cache_grows() {
        let cache = ResidueCache::default();
        assert_eq!(cache.table(7, 10).n_max(), 10);
        assert_eq!(cache.table(7, 5).n_max(), 10);
        assert_eq!(cache.table(7, 50).n_max(), 50);
    }
}

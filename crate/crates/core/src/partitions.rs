//! Partition counts computed without the series engine.
//!
//! `p(n)` comes from Euler's pentagonal recurrence; `p_{1,ℓ}(n)` and
//! `p_{-2}(n)` are direct convolutions of that table. These are the
//! independent oracles the series expansions and the congruence sweeps are
//! checked against.

use std::fmt;
use std::str::FromStr;
use std::sync::{LazyLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which counting function a claim or a table is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum CountingKind {
    /// `p(n)`, generating function `1/f_1`.
    P,
    /// `p_{1,ℓ}(n)`, generating function `1/(f_1 f_ℓ)`.
    P1L(u64),
    /// `p_{-2}(n)`, generating function `1/f_1^2`.
    PMinus2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown counting function {0:?} (expected \"p\", \"p1l:<l>\" with l >= 1, or \"pm2\")")]
pub struct ParseKindError(pub String);

impl FromStr for CountingKind {
    type Err = ParseKindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "p" => Ok(Self::P),
            "pm2" => Ok(Self::PMinus2),
            other => other
                .strip_prefix("p1l:")
                .and_then(|l| l.parse::<u64>().ok())
                .filter(|&l| l >= 1)
                .map(Self::P1L)
                .ok_or_else(|| ParseKindError(s.to_string())),
        }
    }
}

impl fmt::Display for CountingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::P => write!(f, "p"),
            Self::P1L(l) => write!(f, "p1l:{l}"),
            Self::PMinus2 => write!(f, "pm2"),
        }
    }
}

impl From<CountingKind> for String {
    fn from(k: CountingKind) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for CountingKind {
    type Error = ParseKindError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Generalized pentagonal numbers `k(3k∓1)/2` up to `n`, with the sign of
/// their term in the recurrence.
fn pentagonal_terms(n: usize) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for k in 1usize.. {
        let a = k * (3 * k - 1) / 2;
        if a > n {
            break;
        }
        let positive = k % 2 == 1;
        out.push((a, positive));
        let b = k * (3 * k + 1) / 2;
        if b <= n {
            out.push((b, positive));
        }
    }
    out
}

/// Growable, shared table of `p(n)`.
#[derive(Debug)]
pub struct PartitionTable {
    values: RwLock<Vec<BigInt>>,
}

impl Default for PartitionTable {
    fn default() -> Self {
        Self::new()
    }
}

impl PartitionTable {
    pub fn new() -> Self {
        Self { values: RwLock::new(vec![BigInt::one()]) }
    }

    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Extends the table so that `p(n)` is available.
    pub fn ensure(&self, n: usize) {
        if self.values.read().unwrap().len() > n {
            return;
        }
        let mut values = self.values.write().unwrap();
        let start = values.len();
        if start > n {
            return;
        }
        let terms = pentagonal_terms(n);
        for m in start..=n {
            let mut acc = BigInt::zero();
            for &(g, positive) in terms.iter().take_while(|(g, _)| *g <= m) {
                if positive {
                    acc += &values[m - g];
                } else {
                    acc -= &values[m - g];
                }
            }
            values.push(acc);
        }
    }

    pub fn get(&self, n: usize) -> BigInt {
        self.ensure(n);
        self.values.read().unwrap()[n].clone()
    }

    /// Runs `f` on the prefix `p(0..=n)` without copying it.
    pub fn with_prefix<R>(&self, n: usize, f: impl FnOnce(&[BigInt]) -> R) -> R {
        self.ensure(n);
        let values = self.values.read().unwrap();
        f(&values[..=n])
    }
}

static PARTITIONS: LazyLock<PartitionTable> = LazyLock::new(PartitionTable::new);

/// The process-wide `p(n)` table.
pub fn partition_table() -> &'static PartitionTable {
    &PARTITIONS
}

/// `p(n)` via the pentagonal recurrence.
pub fn p_oracle(n: u64) -> BigInt {
    partition_table().get(n as usize)
}

/// `p_{1,ℓ}(n) = Σ_{b ≤ n/ℓ} p(n - ℓb) p(b)`.
pub fn p1l_oracle(l: u64, n: u64) -> BigInt {
    assert!(l >= 1, "l must be positive");
    let n = n as usize;
    let l = l as usize;
    partition_table().with_prefix(n, |p| {
        let mut acc = BigInt::zero();
        for b in 0..=n / l {
            acc += &p[n - l * b] * &p[b];
        }
        acc
    })
}

/// `p_{-2}(n) = Σ_a p(a) p(n - a)`.
pub fn pm2_oracle(n: u64) -> BigInt {
    let n = n as usize;
    partition_table().with_prefix(n, |p| {
        let mut acc = BigInt::zero();
        for a in 0..=n {
            acc += &p[a] * &p[n - a];
        }
        acc
    })
}

pub fn counting_oracle(kind: CountingKind, n: u64) -> BigInt {
    match kind {
        CountingKind::P => p_oracle(n),
        CountingKind::P1L(l) => p1l_oracle(l, n),
        CountingKind::PMinus2 => pm2_oracle(n),
    }
}

/// `δ_k`: the inverse of 24 modulo `5^k`, in `[1, 5^k)`.
pub fn delta(k: u32) -> BigUint {
    assert!(k >= 1, "k must be positive");
    let modulus = BigInt::from(5u32).pow(k);
    let egcd = BigInt::from(24u32).extended_gcd(&modulus);
    debug_assert!(egcd.gcd.is_one());
    egcd.x.mod_floor(&modulus).to_biguint().expect("residue is nonnegative")
}

/// A counting function with a cached coefficient table that grows on demand.
#[derive(Debug)]
pub struct CountingFunction {
    kind: CountingKind,
    table: RwLock<Vec<BigInt>>,
}

impl CountingFunction {
    pub fn new(kind: CountingKind) -> Self {
        Self { kind, table: RwLock::new(Vec::new()) }
    }

    pub fn kind(&self) -> CountingKind {
        self.kind
    }

    pub fn value(&self, n: u64) -> BigInt {
        let idx = n as usize;
        if let Some(v) = self.table.read().unwrap().get(idx) {
            return v.clone();
        }
        let mut table = self.table.write().unwrap();
        while table.len() <= idx {
            let m = table.len() as u64;
            table.push(counting_oracle(self.kind, m));
        }
        table[idx].clone()
    }

    /// Values for `0..=n`.
    pub fn prefix(&self, n: u64) -> Vec<BigInt> {
        self.value(n);
        self.table.read().unwrap()[..=n as usize].to_vec()
    }

    pub fn cached_len(&self) -> usize {
        self.table.read().unwrap().len()
    }
}

/// `p(n) mod m` for all `n ≤ n_max`, by the same pentagonal recurrence.
///
/// Used when a divisibility sweep reaches indices where exact tables are too
/// large; divisibility by `m` only needs the residue.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    modulus: u64,
    p: Vec<u64>,
}

impl ResidueTable {
    pub fn new(modulus: u64, n_max: usize) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let terms = pentagonal_terms(n_max);
        let mut p: Vec<u64> = Vec::with_capacity(n_max + 1);
        p.push(1 % modulus);
        if modulus <= u32::MAX as u64 {
            // Fewer than 2^31 terms of size below 2^32 cannot overflow.
            for n in 1..=n_max {
                let (mut pos, mut neg) = (0u64, 0u64);
                for &(g, positive) in terms.iter().take_while(|(g, _)| *g <= n) {
                    if positive {
                        pos += p[n - g];
                    } else {
                        neg += p[n - g];
                    }
                }
                p.push((pos % modulus + modulus - neg % modulus) % modulus);
            }
        } else {
            let m = modulus as u128;
            for n in 1..=n_max {
                let (mut pos, mut neg) = (0u128, 0u128);
                for &(g, positive) in terms.iter().take_while(|(g, _)| *g <= n) {
                    if positive {
                        pos += p[n - g] as u128;
                    } else {
                        neg += p[n - g] as u128;
                    }
                }
                p.push(((pos % m + m - neg % m) % m) as u64);
            }
        }
        Self { modulus, p }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }

    pub fn p(&self, n: usize) -> u64 {
        self.p[n]
    }

    pub fn p1l(&self, l: u64, n: usize) -> u64 {
        let l = l as usize;
        let m = self.modulus as u128;
        let mut acc = 0u128;
        for b in 0..=n / l {
            acc = (acc + self.p[n - l * b] as u128 * self.p[b] as u128) % m;
        }
        acc as u64
    }

    pub fn pm2(&self, n: usize) -> u64 {
        self.p1l(1, n)
    }

    pub fn value(&self, kind: CountingKind, n: usize) -> u64 {
        match kind {
            CountingKind::P => self.p(n),
            CountingKind::P1L(l) => self.p1l(l, n),
            CountingKind::PMinus2 => self.pm2(n),
        }
    }

    /// Residues of the whole table `f(0..=n_max)`.
    pub fn table(&self, kind: CountingKind) -> Vec<u64> {
        match kind {
            CountingKind::P => self.p.clone(),
            CountingKind::P1L(l) => (0..self.p.len()).map(|n| self.p1l(l, n)).collect(),
            CountingKind::PMinus2 => (0..self.p.len()).map(|n| self.pm2(n)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Count partitions of `n` with parts at most `max` by brute recursion.
    fn brute_partitions(n: u64, max: u64) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|part| brute_partitions(n - part, part)).sum()
    }

    #[test]
    fn p_small_values() {
        assert_eq!(p_oracle(0), BigInt::one());
        assert_eq!(p_oracle(4), BigInt::from(5));
        assert_eq!(p_oracle(24), BigInt::from(1575));
        for n in 0..30 {
            assert_eq!(p_oracle(n), BigInt::from(brute_partitions(n, n)), "n = {n}");
        }
    }

    #[test]
    fn p_exceeds_u64_by_n_450() {
        assert!(p_oracle(450) > BigInt::from(u64::MAX));
        assert!(p_oracle(300) < BigInt::from(u64::MAX));
    }

    #[test]
    fn p_is_increasing() {
        let t = PartitionTable::new();
        t.with_prefix(600, |p| {
            for n in 1..600 {
                assert!(p[n + 1] > p[n]);
            }
        });
    }

    #[test]
    fn p1l_examples() {
        assert_eq!(p1l_oracle(5, 4), BigInt::from(5));
        assert_eq!(p1l_oracle(7, 0), BigInt::one());
        assert_eq!(p1l_oracle(1, 2), BigInt::from(5));
        assert_eq!(p1l_oracle(1, 2), pm2_oracle(2));
    }

    #[test]
    fn pm2_examples() {
        assert_eq!(pm2_oracle(0), BigInt::one());
        assert_eq!(pm2_oracle(2), BigInt::from(5));
        assert_eq!(pm2_oracle(3), BigInt::from(10));
        assert_eq!(pm2_oracle(4), BigInt::from(20));
        assert!((pm2_oracle(7) % 5u32).is_zero());
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(1), BigUint::from(4u32));
        assert_eq!(delta(2), BigUint::from(24u32));
        assert_eq!(delta(3), BigUint::from(99u32));
        for k in 1..12 {
            let m = BigUint::from(5u32).pow(k);
            let d = delta(k);
            assert!(d >= BigUint::one() && d < m);
            assert_eq!((d * 24u32) % &m, BigUint::one());
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("p".parse::<CountingKind>(), Ok(CountingKind::P));
        assert_eq!("pm2".parse::<CountingKind>(), Ok(CountingKind::PMinus2));
        assert_eq!("p1l:25".parse::<CountingKind>(), Ok(CountingKind::P1L(25)));
        assert!("p1l:0".parse::<CountingKind>().is_err());
        assert!("p1l:".parse::<CountingKind>().is_err());
        assert!("q".parse::<CountingKind>().is_err());
        assert_eq!(CountingKind::P1L(4).to_string(), "p1l:4");
    }

    #[test]
    fn counting_function_caches_positive_prefix() {
        for kind in [CountingKind::P, CountingKind::P1L(5), CountingKind::PMinus2] {
            let f = CountingFunction::new(kind);
            let t = f.prefix(60);
            assert_eq!(t[0], BigInt::one());
            assert!(t.iter().all(|v| *v >= BigInt::one()));
            assert_eq!(f.cached_len(), 61);
            assert_eq!(f.value(10), counting_oracle(kind, 10));
        }
    }

    #[test]
    fn residues_match_exact_values() {
        let r = ResidueTable::new(125, 800);
        for n in [0usize, 1, 24, 99, 224, 799] {
            assert_eq!(BigInt::from(r.p(n)), p_oracle(n as u64) % 125u32);
            assert_eq!(BigInt::from(r.p1l(5, n)), p1l_oracle(5, n as u64) % 125u32);
            assert_eq!(BigInt::from(r.pm2(n)), pm2_oracle(n as u64) % 125u32);
        }
        assert_eq!(ResidueTable::new(1, 10).p(5), 0);
        let wide = (1u64 << 40) + 15;
        let r = ResidueTable::new(wide, 700);
        assert_eq!(BigInt::from(r.p(700)), p_oracle(700) % wide);
    }
}

//! The matrix `M = (m_{i,j})`, the coefficient vectors built from it, and
//! 5-adic valuations.
//!
//! The matrix is lower triangular and banded: `m_{r,c} ≠ 0` only when
//! `⌈r/5⌉ ≤ c ≤ r`. Rows 1–5 are fixed; every later row comes from
//! `m_{i,j} = 25m_{i-1,j-1} + 25m_{i-2,j-1} + 15m_{i-3,j-1} + 5m_{i-4,j-1} + m_{i-5,j-1}`.
//! The band makes every vector recursion a finite sum: output entry `j` of a
//! step through rows `6i + a` only reads inputs `i ≤ 5j - a`.
//!
//! A matrix can also be built over `Z/5^E`. Vectors built from it are exact
//! residues, and are trimmed to their last entry that is non-zero mod `5^E`,
//! which keeps valuation checks at large indices cheap.

mod lemmas;

pub use lemmas::{check_valuation_lemmas, LemmaBounds};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Rows 1–5 of `M`.
pub const BASE_ROWS: [&[u64]; 5] = [
    &[5],
    &[10, 125],
    &[9, 375, 3125],
    &[4, 550, 12500, 78125],
    &[1, 500, 25000, 390625, 1953125],
];

const RECURRENCE: [u32; 5] = [25, 25, 15, 5, 1];

pub const DEFAULT_ROW_LIMIT: u64 = 6000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HHError {
    #[error("truncation too short: {needed} input entries are required but only {available} are known")]
    TruncationTooShort { needed: usize, available: usize },
    #[error("matrix row {row} exceeds the configured limit of {limit}")]
    RowLimit { row: u64, limit: u64 },
    #[error("vector index must be at least 1")]
    ZeroIndex,
}

/// 5-adic valuation. `AtLeast` only arises from residues modulo a power of 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
    Infinite,
}

impl Valuation {
    /// Whether `self ≥ bound`, or `None` if a residue is too coarse to tell.
    pub fn at_least(self, bound: i64) -> Option<bool> {
        match self {
            Valuation::Infinite => Some(true),
            Valuation::Finite(v) => Some(v as i64 >= bound),
            Valuation::AtLeast(e) if e as i64 >= bound => Some(true),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Whether `self ≥ num / 2`.
    pub fn at_least_half(self, num: i64) -> Option<bool> {
        match self {
            Valuation::Infinite => Some(true),
            Valuation::Finite(v) => Some(2 * v as i64 >= num),
            Valuation::AtLeast(e) if 2 * e as i64 >= num => Some(true),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(e) => write!(f, ">={e}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Exact 5-adic valuation of an integer; `Infinite` for zero.
pub fn pi5(n: &BigInt) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let five = BigInt::from(5u32);
    let mut v = 0;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(&five);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        m = q;
        v += 1;
    }
}

/// Valuation of a residue known modulo `5^e`.
pub fn pi5_residue(r: &BigInt, e: u32) -> Valuation {
    match pi5(r) {
        Valuation::Infinite => Valuation::AtLeast(e),
        Valuation::Finite(v) if v >= e => Valuation::AtLeast(e),
        other => other,
    }
}

/// Memoized `M`, exact or modulo `5^E`.
///
/// Rows are computed in order and never rewritten; readers share committed
/// rows. `overrides` replace individual entries before they feed the
/// recurrence, which is how faults are injected in tests.
#[derive(Debug)]
pub struct HHMatrix {
    precision: Option<u32>,
    modulus: Option<BigInt>,
    overrides: BTreeMap<(u64, u64), BigInt>,
    row_limit: u64,
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl Default for HHMatrix {
    fn default() -> Self {
        Self::new()
    }
}

impl Clone for HHMatrix {
    fn clone(&self) -> Self {
        Self {
            precision: self.precision,
            modulus: self.modulus.clone(),
            overrides: self.overrides.clone(),
            row_limit: self.row_limit,
            rows: RwLock::new(self.rows.read().unwrap().clone()),
        }
    }
}

static SHARED: LazyLock<HHMatrix> = LazyLock::new(HHMatrix::new);

/// The process-wide exact matrix.
pub fn hh_matrix() -> &'static HHMatrix {
    &SHARED
}

/// `m_{i,j}` from the shared exact matrix.
pub fn m_entry(i: u64, j: u64) -> BigInt {
    hh_matrix().m_entry(i, j)
}

impl HHMatrix {
    pub fn new() -> Self {
        Self {
            precision: None,
            modulus: None,
            overrides: BTreeMap::new(),
            row_limit: DEFAULT_ROW_LIMIT,
            rows: RwLock::new(Vec::new()),
        }
    }

    /// Entries reduced to `[0, 5^precision)`.
    pub fn residues(precision: u32) -> Self {
        Self {
            precision: Some(precision),
            modulus: Some(BigInt::from(5u32).pow(precision)),
            ..Self::new()
        }
    }

    /// A copy of the settings (precision, overrides, limit) with an empty memo.
    pub fn same_entries_mod(&self, precision: u32) -> Self {
        let mut m = Self::residues(precision);
        m.row_limit = self.row_limit;
        for ((i, j), v) in &self.overrides {
            m.overrides.insert((*i, *j), v.clone());
        }
        m
    }

    pub fn with_override(mut self, i: u64, j: u64, value: BigInt) -> Self {
        assert!(i >= 1 && j >= 1, "matrix indices start at 1");
        self.overrides.insert((i, j), value);
        self.rows.get_mut().unwrap().clear();
        self
    }

    pub fn with_row_limit(mut self, limit: u64) -> Self {
        self.row_limit = limit;
        self
    }

    pub fn overrides(&self) -> &BTreeMap<(u64, u64), BigInt> {
        &self.overrides
    }

    pub fn precision(&self) -> Option<u32> {
        self.precision
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    pub fn rows_computed(&self) -> u64 {
        self.rows.read().unwrap().len() as u64
    }

    fn reduce(&self, v: BigInt) -> BigInt {
        match &self.modulus {
            Some(m) => v.mod_floor(m),
            None => v,
        }
    }

    fn finish_entry(&self, i: u64, j: u64, v: BigInt) -> BigInt {
        match self.overrides.get(&(i, j)) {
            Some(o) => self.reduce(o.clone()),
            None => self.reduce(v),
        }
    }

    /// Makes rows `1..=rows` available.
    pub fn ensure_rows(&self, rows: u64) -> Result<(), HHError> {
        if rows > self.row_limit {
            return Err(HHError::RowLimit { row: rows, limit: self.row_limit });
        }
        if self.rows.read().unwrap().len() as u64 >= rows {
            return Ok(());
        }
        let mut table = self.rows.write().unwrap();
        while (table.len() as u64) < rows {
            let i = table.len() as u64 + 1;
            let row: Vec<BigInt> = if i <= 5 {
                BASE_ROWS[i as usize - 1]
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| self.finish_entry(i, j as u64 + 1, BigInt::from(v)))
                    .collect()
            } else {
                (1..=i)
                    .map(|j| {
                        let mut acc = BigInt::zero();
                        if j >= 2 {
                            for (d, &c) in RECURRENCE.iter().enumerate() {
                                let prev = &table[(i - 2 - d as u64) as usize];
                                if let Some(v) = prev.get(j as usize - 2) {
                                    if !v.is_zero() {
                                        acc += v * c;
                                    }
                                }
                            }
                        }
                        self.finish_entry(i, j, acc)
                    })
                    .collect()
            };
            table.push(row);
        }
        Ok(())
    }

    /// `m_{i,j}`; zero outside the triangle, including `i = 0` or `j = 0`.
    ///
    /// Panics if row `i` is beyond the row limit.
    pub fn m_entry(&self, i: u64, j: u64) -> BigInt {
        if i == 0 || j == 0 || j > i {
            return BigInt::zero();
        }
        self.ensure_rows(i).expect("row limit exceeded");
        self.rows.read().unwrap()[i as usize - 1][j as usize - 1].clone()
    }

    /// Runs `f` with read access to rows `1..=rows` (`rows[i-1][j-1] = m_{i,j}`).
    pub fn with_rows<R>(&self, rows: u64, f: impl FnOnce(&[Vec<BigInt>]) -> R) -> Result<R, HHError> {
        self.ensure_rows(rows)?;
        let table = self.rows.read().unwrap();
        Ok(f(&table[..rows as usize]))
    }

    /// One recursion step `out_j = Σ_i input_i · m_{6i+a, i+j}` for `j ≤ len`.
    pub fn step(
        &self,
        input: &CoeffVector,
        a: u64,
        len: usize,
        provenance: Provenance,
    ) -> Result<CoeffVector, HHError> {
        let needed = (5 * len).saturating_sub(a as usize);
        let available = match input.support {
            Some(s) => s.min(needed),
            None if input.truncation_len >= needed => needed,
            None => {
                return Err(HHError::TruncationTooShort {
                    needed,
                    available: input.truncation_len,
                })
            }
        };
        let last = (1..=available.min(input.entries.len()))
            .rev()
            .find(|&i| !input.entries[i - 1].is_zero())
            .unwrap_or(0);
        let a_us = a as usize;
        // Output entries past 5·last + a vanish.
        let live = len.min(5 * last + a_us);
        let mut out = vec![BigInt::zero(); len];
        if last > 0 {
            self.with_rows((6 * last + a_us) as u64, |rows| {
                for (j, slot) in out.iter_mut().enumerate().take(live) {
                    let j = j + 1;
                    let lo = (j.saturating_sub(a_us)).div_ceil(5).max(1);
                    let hi = last.min((5 * j).saturating_sub(a_us));
                    let mut acc = BigInt::zero();
                    for i in lo..=hi {
                        let y = &input.entries[i - 1];
                        if y.is_zero() {
                            continue;
                        }
                        let m = &rows[6 * i + a_us - 1][i + j - 1];
                        if !m.is_zero() {
                            acc += y * m;
                        }
                    }
                    *slot = self.reduce(acc);
                }
            })?;
        }
        let mut support = input.support.map(|_| 5 * last + a_us);
        if let Some(s) = support {
            if s <= len {
                support = Some(out.iter().rposition(|v| !v.is_zero()).map_or(0, |p| p + 1));
            }
        }
        Ok(CoeffVector {
            entries: out,
            provenance,
            truncation_len: len,
            support,
            precision: self.precision,
        })
    }

    /// Runs a chain of steps from `x_1`, keeping each intermediate vector only
    /// as long as the final length requires.
    fn chain(&self, steps: &[(u64, Provenance)], base: Provenance, len: usize) -> Result<CoeffVector, HHError> {
        let mut supports = vec![1usize];
        for (a, _) in steps {
            let s = *supports.last().unwrap();
            supports.push(5 * s + *a as usize);
        }
        let mut need = vec![0usize; steps.len() + 1];
        need[steps.len()] = len;
        for t in (0..steps.len()).rev() {
            let a = steps[t].0 as usize;
            need[t] = (5 * need[t + 1]).saturating_sub(a).max(1).min(supports[t]);
        }
        let mut v = CoeffVector::x1(need[0], self);
        v.provenance = base;
        for (t, (a, prov)) in steps.iter().enumerate() {
            v = self.step(&v, *a, need[t + 1], *prov)?;
        }
        if v.entries.len() < len {
            v.entries.resize(len, BigInt::zero());
            v.truncation_len = len;
        }
        Ok(v)
    }

    fn x_steps(k: u64) -> Vec<(u64, Provenance)> {
        (1..k)
            .map(|s| (if s % 2 == 1 { 0 } else { 1 }, Provenance::X { k: s + 1 }))
            .collect()
    }

    /// `x_k` truncated to `len` entries.
    pub fn x_vector(&self, k: u64, len: usize) -> Result<CoeffVector, HHError> {
        if k == 0 {
            return Err(HHError::ZeroIndex);
        }
        self.chain(&Self::x_steps(k), Provenance::X { k: 1 }, len)
    }

    /// `y^{(2k-1)}_{steps+1}` truncated to `len` entries.
    pub fn y_odd_vector(&self, k: u64, steps: u64, len: usize) -> Result<CoeffVector, HHError> {
        if k == 0 {
            return Err(HHError::ZeroIndex);
        }
        let mut plan = Self::x_steps(2 * k - 1);
        plan.extend((1..=steps).map(|s| (1, Provenance::YOdd { k, step: s })));
        let mut v = self.chain(&plan, Provenance::X { k: 1 }, len)?;
        v.provenance = Provenance::YOdd { k, step: steps };
        Ok(v)
    }

    /// `y^{(2k)}_{index}` truncated to `len` entries.
    pub fn y_even_vector(&self, k: u64, index: u64, len: usize) -> Result<CoeffVector, HHError> {
        if k == 0 || index == 0 {
            return Err(HHError::ZeroIndex);
        }
        let mut plan = Self::x_steps(2 * k - 1);
        plan.extend((1..index).map(|beta| {
            let a = if beta % 2 == 0 { 2 } else { 0 };
            (a, Provenance::YEven { k, index: beta + 1 })
        }));
        let mut v = self.chain(&plan, Provenance::X { k: 1 }, len)?;
        v.provenance = Provenance::YEven { k, index };
        Ok(v)
    }
}

/// Which recursion produced a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Provenance {
    /// `x_k`.
    X { k: u64 },
    /// `y^{(2k-1)}_{step+1}`.
    YOdd { k: u64, step: u64 },
    /// `y^{(2k)}_{index}`.
    YEven { k: u64, index: u64 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::X { k } => write!(f, "x_{k}"),
            Provenance::YOdd { k, step } => write!(f, "y^({})_{}", 2 * k - 1, step + 1),
            Provenance::YEven { k, index } => write!(f, "y^({})_{}", 2 * k, index),
        }
    }
}

/// A truncated x- or y-vector, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffVector {
    entries: Vec<BigInt>,
    provenance: Provenance,
    truncation_len: usize,
    /// If known, every entry past this index is zero (mod `5^precision` for
    /// residue vectors).
    support: Option<usize>,
    precision: Option<u32>,
}

impl CoeffVector {
    fn x1(len: usize, matrix: &HHMatrix) -> Self {
        let mut entries = vec![BigInt::zero(); len.max(1)];
        entries[0] = matrix.reduce(BigInt::from(5u32));
        let support = if entries[0].is_zero() { 0 } else { 1 };
        Self {
            truncation_len: entries.len(),
            entries,
            provenance: Provenance::X { k: 1 },
            support: Some(support),
            precision: matrix.precision,
        }
    }

    /// A vector given by its first entries, with nothing known past them.
    pub fn truncated(entries: Vec<BigInt>, provenance: Provenance) -> Self {
        Self { truncation_len: entries.len(), entries, provenance, support: None, precision: None }
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Entry `j` (1-based), or `None` past the truncation.
    pub fn get(&self, j: usize) -> Option<&BigInt> {
        if j == 0 {
            return None;
        }
        self.entries.get(j - 1)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn truncation_len(&self) -> usize {
        self.truncation_len
    }

    pub fn support(&self) -> Option<usize> {
        self.support
    }

    /// Residue precision `E` when entries are only known mod `5^E`.
    pub fn precision(&self) -> Option<u32> {
        self.precision
    }

    pub fn valuation(&self, j: usize) -> Option<Valuation> {
        let v = self.get(j)?;
        Some(match self.precision {
            Some(e) => pi5_residue(v, e),
            None => pi5(v),
        })
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }
}

/// Rows 1–5 as integers, for comparisons.
pub fn base_row(i: usize) -> Vec<BigInt> {
    BASE_ROWS[i - 1].iter().map(|&v| BigInt::from(v)).collect()
}

/// `5^{2i-1}`, the diagonal entry of row `i`.
pub fn diagonal(i: u32) -> BigInt {
    BigInt::from(5u32).pow(2 * i - 1)
}

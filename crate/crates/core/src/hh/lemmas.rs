//! Pointwise checks of the valuation lower bounds on `M` and the vectors.
//!
//! The vector bounds are checked on residues modulo `5^E` with `E` two more
//! than the largest bound in range, so every `≥ E` outcome still decides the
//! inequality.

use std::time::Instant;

use num_integer::Integer;

use super::{pi5, pi5_residue, CoeffVector, HHError, HHMatrix, Valuation};
use crate::report::{Params, RangeKind, ValuationRecord, VerificationReport, Witness};

const SOURCE: &str = "valuation-lemmas";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaBounds {
    pub i_max: u64,
    pub j_max: u64,
    pub k_max: u64,
    pub beta_max: u64,
}

impl Default for LemmaBounds {
    fn default() -> Self {
        Self { i_max: 30, j_max: 30, k_max: 3, beta_max: 3 }
    }
}

impl LemmaBounds {
    /// Largest right-hand side among the vector lemmas in range.
    pub fn max_vector_bound(&self) -> i64 {
        let (k, b, j) = (self.k_max as i64, self.beta_max as i64, self.j_max as i64);
        2 * k + b + floor_half(5 * j - 5)
    }
}

fn floor_half(num: i64) -> i64 {
    Integer::div_floor(&num, &2)
}

fn half_string(num: i64) -> String {
    match (num < 0, num % 2 == 0) {
        (_, true) => (num / 2).to_string(),
        (true, false) => format!("-{}", half_string(-num)),
        (false, false) => format!("{}.5", num / 2),
    }
}

struct Tally {
    report: VerificationReport,
    checked: usize,
    violations: usize,
}

impl Tally {
    fn new(id: &str) -> Self {
        Self { report: VerificationReport::new(id, SOURCE), checked: 0, violations: 0 }
    }

    fn record(&mut self, lemma: &str, indices: String, computed: Valuation, bound: String, holds: Option<bool>) {
        self.checked += 1;
        let holds = holds.unwrap_or(false);
        if !holds {
            self.violations += 1;
            if self.report.witness.is_none() {
                self.report = self.report.clone().fail(Witness::Valuation {
                    lemma: lemma.to_string(),
                    indices: indices.clone(),
                    computed: computed.to_string(),
                    bound: bound.clone(),
                });
            }
        }
        self.report.valuations.push(ValuationRecord { indices, computed: computed.to_string(), bound, holds });
    }

    fn finish(mut self, note: String) -> VerificationReport {
        let summary = format!("{} entries checked, {} below bound", self.checked, self.violations);
        self.report.note = Some(if note.is_empty() { summary } else { format!("{summary}; {note}") });
        self.report
    }
}

fn matrix_valuation(matrix: &HHMatrix, i: u64, j: u64) -> Valuation {
    let v = matrix.m_entry(i, j);
    match matrix.precision() {
        Some(e) => pi5_residue(&v, e),
        None => pi5(&v),
    }
}

/// Lower bound on `M`, under both readings of the unbracketed bound
/// `(5j - i - 1)/2`. The floor reading is asserted; the rational one is
/// informational.
fn check_matrix(matrix: &HHMatrix, bounds: &LemmaBounds) -> Vec<VerificationReport> {
    let started = Instant::now();
    let mut floor = Tally::new("valuation/matrix/floor");
    let mut rational = Tally::new("valuation/matrix/rational");
    for i in 1..=bounds.i_max {
        for j in 1..=bounds.j_max {
            let v = matrix_valuation(matrix, i, j);
            let num = 5 * j as i64 - i as i64 - 1;
            let idx = format!("i={i},j={j}");
            let fb = floor_half(num);
            floor.record("matrix", idx.clone(), v, fb.to_string(), v.at_least(fb));
            rational.record("matrix", idx, v, half_string(num), v.at_least_half(num));
        }
    }
    let hi = bounds.i_max as i64 + 1;
    let floor = floor.finish(String::new()).range(RangeKind::Indices, 1, hi).timed(started);
    let rational = rational
        .finish("bound read as an exact rational; an integer valuation cannot meet a half-integer bound exactly".into())
        .range(RangeKind::Indices, 1, hi)
        .informational()
        .timed(started);
    vec![floor, rational]
}

fn check_vector(
    tally: &mut Tally,
    lemma: &str,
    label: &str,
    v: &CoeffVector,
    j_max: u64,
    constant: i64,
) {
    for j in 1..=j_max as usize {
        let val = v.valuation(j).unwrap_or(Valuation::Infinite);
        let bound = constant + floor_half(5 * j as i64 - 5);
        tally.record(lemma, format!("{label},j={j}"), val, bound.to_string(), val.at_least(bound));
    }
}

/// Checks every valuation lemma over the given ranges.
///
/// Returns one report per lemma (two for the matrix bound). A violation is a
/// failing report with the first offending index as witness, not an error.
pub fn check_valuation_lemmas(matrix: &HHMatrix, bounds: &LemmaBounds) -> Result<Vec<VerificationReport>, HHError> {
    let mut reports = check_matrix(matrix, bounds);

    let precision = (bounds.max_vector_bound() + 2).max(1) as u32;
    let residues = matrix.same_entries_mod(precision);
    let len = bounds.j_max as usize;
    let note = format!("vector entries computed modulo 5^{precision}");
    let range_hi = bounds.j_max as i64 + 1;

    let started = Instant::now();
    let mut t_x = Tally::new("valuation/x");
    let mut t_yo = Tally::new("valuation/y-odd");
    let mut t_ye1 = Tally::new("valuation/y-even-odd-index");
    let mut t_ye2 = Tally::new("valuation/y-even-even-index");
    for k in 1..=bounds.k_max {
        let ki = k as i64;
        let x = residues.x_vector(2 * k - 1, len)?;
        check_vector(&mut t_x, "x", &format!("k={k}"), &x, bounds.j_max, 2 * ki - 1);
        for beta in 0..=bounds.beta_max {
            let b = beta as i64;
            let label = format!("k={k},beta={beta}");
            let y = residues.y_odd_vector(k, beta, len)?;
            check_vector(&mut t_yo, "y-odd", &label, &y, bounds.j_max, 2 * ki + b - 1);
            let y = residues.y_even_vector(k, 2 * beta + 1, len)?;
            check_vector(&mut t_ye1, "y-even-odd-index", &label, &y, bounds.j_max, 2 * ki + b - 1);
            let y = residues.y_even_vector(k, 2 * beta + 2, len)?;
            check_vector(&mut t_ye2, "y-even-even-index", &label, &y, bounds.j_max, 2 * ki + b);
        }
    }
    let params = Params { k: Some(bounds.k_max as u32), beta: Some(bounds.beta_max as u32), ..Params::default() };
    for t in [t_x, t_yo, t_ye1, t_ye2] {
        reports.push(
            t.finish(note.clone())
                .params(params.clone())
                .range(RangeKind::Indices, 1, range_hi)
                .timed(started),
        );
    }
    Ok(reports)
}

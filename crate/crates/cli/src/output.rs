use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use qcong_core::report::{Outcome, VerificationReport};
use qcong_core::verify::ScannedClaim;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A single index or an inclusive/exclusive range of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexSpec {
    lo: u64,
    /// Exclusive.
    hi: u64,
}

impl IndexSpec {
    pub fn iter(&self) -> std::ops::Range<u64> {
        self.lo..self.hi
    }
}

impl FromStr for IndexSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad index {t:?}"));
        let s = s.trim();
        if let Some((a, b)) = s.split_once("..=") {
            let (lo, hi) = (num(a)?, num(b)?);
            if hi < lo {
                return Err(format!("empty range {s:?}"));
            }
            return Ok(IndexSpec { lo, hi: hi.checked_add(1).ok_or("range too large")? });
        }
        if let Some((a, b)) = s.split_once("..") {
            let (lo, hi) = (num(a)?, num(b)?);
            if hi <= lo {
                return Err(format!("empty range {s:?}"));
            }
            return Ok(IndexSpec { lo, hi });
        }
        let n = num(s)?;
        Ok(IndexSpec { lo: n, hi: n + 1 })
    }
}

/// Runs `f` on stdout or on a freshly created file.
pub fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn json<T: Serialize + ?Sized>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

pub fn csv<T: Serialize>(w: &mut dyn Write, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut out = ::csv::Writer::from_writer(w);
    let mut any = false;
    for row in rows {
        out.serialize(row)?;
        any = true;
    }
    if !any {
        bail!("nothing to write");
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct ClaimRow {
    #[serde(rename = "fn")]
    kind: String,
    #[serde(rename = "modulusA")]
    modulus: u64,
    #[serde(rename = "offsetB")]
    offset: u64,
    divisor: u64,
    #[serde(rename = "checkedUpTo")]
    checked_up_to: u64,
    #[serde(rename = "impliedBy")]
    implied_by: String,
}

impl From<&ScannedClaim> for ClaimRow {
    fn from(c: &ScannedClaim) -> Self {
        ClaimRow {
            kind: c.claim.kind.to_string(),
            modulus: c.claim.modulus,
            offset: c.claim.offset,
            divisor: c.claim.divisor,
            checked_up_to: c.checked_up_to,
            implied_by: c.implied_by.map(|i| format!("{}n+{}", i.modulus, i.offset)).unwrap_or_default(),
        }
    }
}

#[derive(Serialize)]
struct ReportRow<'a> {
    id: &'a str,
    source: &'a str,
    outcome: &'static str,
    asserted: bool,
    range: String,
    witness: String,
    millis: Option<u64>,
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::Skipped => "skipped",
    }
}

pub fn report_csv(w: &mut dyn Write, reports: &[VerificationReport]) -> Result<()> {
    let rows = reports.iter().map(|r| {
        Ok::<_, serde_json::Error>(ReportRow {
            id: &r.id,
            source: &r.source,
            outcome: outcome_name(r.outcome),
            asserted: r.asserted,
            range: r.range.map(|c| format!("[{},{})", c.lo, c.hi)).unwrap_or_default(),
            witness: r.witness.as_ref().map(serde_json::to_string).transpose()?.unwrap_or_default(),
            millis: r.millis,
        })
    });
    csv(w, rows.collect::<Result<Vec<_>, _>>()?)
}

pub fn report_text(w: &mut dyn Write, reports: &[VerificationReport]) -> Result<()> {
    for r in reports {
        let tag = match (r.outcome, r.asserted) {
            (Outcome::Pass, _) => "pass",
            (Outcome::Skipped, _) => "skip",
            (Outcome::Fail, true) => "FAIL",
            (Outcome::Fail, false) => "info",
        };
        write!(w, "{tag:4} {}", r.id)?;
        if let Some(c) = r.range {
            write!(w, " [{}, {})", c.lo, c.hi)?;
        }
        if let Some(wit) = &r.witness {
            write!(w, " {}", serde_json::to_string(wit)?)?;
        }
        if let Some(reason) = &r.reason {
            write!(w, " ({reason})")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_specs() {
        let v = |s: &str| s.parse::<IndexSpec>().map(|i| i.iter().collect::<Vec<_>>());
        assert_eq!(v("24"), Ok(vec![24]));
        assert_eq!(v("2..5"), Ok(vec![2, 3, 4]));
        assert_eq!(v("2..=5"), Ok(vec![2, 3, 4, 5]));
        assert!(v("5..2").is_err());
        assert!(v("3..3").is_err());
        assert!(v("x").is_err());
        assert!(v("-1").is_err());
    }
}

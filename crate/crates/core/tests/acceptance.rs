//! One line per acceptance criterion. Every comparison is exact: the
//! tolerance on coefficients, values and valuations is zero.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use qcong_core::eta::EtaQuotientSpec;
use qcong_core::hh::{check_valuation_lemmas, HHMatrix, LemmaBounds};
use qcong_core::partitions::{delta, p1l_oracle, p_oracle, pm2_oracle};
use qcong_core::report::{Outcome, RangeKind, VerificationReport};
use qcong_core::verify::{self, claims, residue_cache, Family, HuffIdentity, Suite, SuiteConfig, TheoremSeries};

const TOLERANCE: u32 = 0;

struct Line {
    ok: bool,
    detail: String,
}

fn failing(reports: &[VerificationReport]) -> Vec<String> {
    reports.iter().filter(|r| r.is_blocking()).map(|r| r.id.clone()).collect()
}

fn skipped(reports: &[VerificationReport]) -> Vec<String> {
    reports.iter().filter(|r| r.outcome == Outcome::Skipped).map(|r| r.id.clone()).collect()
}

fn from_reports(reports: &[VerificationReport], what: &str) -> Line {
    let bad = failing(reports);
    Line { ok: bad.is_empty(), detail: if bad.is_empty() { format!("{} checks, {what}", reports.len()) } else { format!("failing: {bad:?}") } }
}

fn within(elapsed: Duration, limit: Duration, mut line: Line) -> Line {
    line.detail = format!("{}; {:.2}s (limit {}s)", line.detail, elapsed.as_secs_f64(), limit.as_secs());
    line.ok &= elapsed < limit;
    line
}

fn oracle_agreement() -> Line {
    const N: i64 = 500;
    let mut mismatches = Vec::new();
    let mut compare = |label: String, spec: EtaQuotientSpec, oracle: &dyn Fn(u64) -> BigInt| {
        let s = spec.expand(N + 1).expect("unit leading coefficient");
        if let Some(n) = (0..=N).find(|&n| s.coeff(n) != oracle(n as u64)) {
            mismatches.push(format!("{label} at n={n}"));
        }
    };
    compare("1/f1".into(), EtaQuotientSpec::new([(1, -1)], 0).unwrap(), &p_oracle);
    for ell in [1u64, 4, 5, 7, 25, 125] {
        let spec = if ell == 1 {
            EtaQuotientSpec::new([(1, -2)], 0).unwrap()
        } else {
            EtaQuotientSpec::new([(1, -1), (ell, -1)], 0).unwrap()
        };
        compare(format!("1/(f1 f{ell})"), spec, &|n| p1l_oracle(ell, n));
    }
    compare("1/f1^2".into(), EtaQuotientSpec::new([(1, -2)], 0).unwrap(), &pm2_oracle);
    Line {
        ok: mismatches.is_empty(),
        detail: if mismatches.is_empty() { format!("8 series agree for n <= {N}") } else { mismatches.join(", ") },
    }
}

fn classical_congruences() -> Line {
    let mut reports = Vec::new();
    let mut deltas = Vec::new();
    for (k, n_max) in [(1u32, 2000u64), (2, 500), (3, 100)] {
        let d = delta(k);
        let modulus = 5u64.pow(k);
        assert_eq!((24u64 * d.to_u64().unwrap()) % modulus, 1);
        deltas.push(d.to_string());
        let claim = claims::p_power_claim(k).unwrap();
        reports.push(verify::check_claim(&format!("p/5^{k}"), &claim, n_max, residue_cache()));
    }
    let mut line = from_reports(&reports, "n <= 2000, 500, 100");
    line.detail = format!("{}; offsets {}", line.detail, deltas.join(", "));
    line
}

fn matrix_layer(m: &HHMatrix) -> Line {
    let mut reports = vec![verify::check_base_rows(m), verify::check_x2_constant(m)];
    for i in 1..=8 {
        reports.push(verify::verify_huff_g_power(m, i, 100));
    }
    for i in 1..=4 {
        for w in HuffIdentity::ALL {
            reports.push(verify::verify_huff_identity(m, w, i, 100));
        }
    }
    from_reports(&reports, "rows 1-5, G^i for i <= 8, huff identities for i <= 4, precision 100")
}

fn theorem_series(m: &HHMatrix) -> Line {
    let prec = verify::DEFAULT_PREC;
    let mut reports = Vec::new();
    for (k, b) in [(1, 0), (1, 1), (1, 2), (2, 0)] {
        reports.push(verify::verify_g1(m, k, b, prec));
    }
    for (k, b) in [(1, 0), (1, 1), (2, 0)] {
        reports.push(verify::verify_g3_g4(m, k, b, TheoremSeries::G3, prec));
        reports.push(verify::verify_g3_g4(m, k, b, TheoremSeries::G4, prec));
    }
    let shortest = reports
        .iter()
        .filter_map(|r| r.range.map(|c| c.hi - c.lo))
        .min()
        .unwrap_or(0);
    let mut line = from_reports(&reports, &format!("at least {shortest} coefficients each"));
    line.ok &= shortest >= 20;
    line
}

fn congruence_families() -> Line {
    let config = SuiteConfig { k_max: 2, beta_max: 1, jobs: 1, timings: false, ..SuiteConfig::default() };
    let report = verify::run_suite(Suite::Theorem1, &config, &HHMatrix::new());
    let mut line = from_reports(&report.reports, "k <= 2, beta <= 1");
    let mut counts = Vec::new();
    for f in Family::ALL {
        let prefix = format!("{f}/");
        let values: i64 = report
            .reports
            .iter()
            .filter(|r| r.asserted && r.id.starts_with(&prefix))
            .filter_map(|r| r.range.filter(|c| c.kind == RangeKind::N).map(|c| c.hi - c.lo))
            .sum();
        line.ok &= values >= 20;
        counts.push(format!("{f}:{values}"));
    }
    let offsets = report.reports.iter().filter(|r| r.id.starts_with("offsets/")).count();
    line.ok &= offsets == 5;
    line.detail = format!("{}; values per family {}; {offsets} offset identities for beta <= 5", line.detail, counts.join(" "));
    line
}

fn regressions() -> Line {
    let config = SuiteConfig { jobs: 1, timings: false, ..SuiteConfig::default() };
    let report = verify::run_suite(Suite::Regressions, &config, &HHMatrix::new());
    let mut line = from_reports(&report.reports, "");
    let bad = failing(&report.reports);
    let reach = |prefix: &str| {
        report
            .reports
            .iter()
            .filter(|r| r.id.starts_with(prefix))
            .map(|r| r.range.map_or(0, |c| c.hi - 1))
            .min()
            .unwrap_or(-1)
    };
    let (ab, pm2) = (reach("p1l/25n+24-l/ell=1"), reach("pm2/5n+s/"));
    let scan = report.reports.iter().any(|r| r.id == "p1l:4/scan-mod-7" && r.is_pass());
    line.ok &= ab >= 200 && pm2 >= 500 && scan;
    line.detail = format!(
        "{} checks, failing {bad:?}, skipped {:?}; 25n+24-l swept to n={ab}; p_-2 swept to n={pm2}; mod-7 scan recovers exactly 11, 25, 32, 39: {scan}",
        report.reports.len(),
        skipped(&report.reports)
    );
    line
}

fn dissection() -> Line {
    let mut reports = vec![verify::verify_f1_dissection(200)];
    reports.extend(
        verify::verify_dissection_steps(200, residue_cache())
            .into_iter()
            .filter(|r| r.id.starts_with("dissection/f1^5") || r.id.starts_with("dissection/f5^2")),
    );
    let mut line = from_reports(&reports, "precision 200");
    line.ok &= reports.len() == 3;
    line
}

fn valuations(m: &HHMatrix) -> Line {
    let bounds = LemmaBounds::default();
    let reports = check_valuation_lemmas(m, &bounds).expect("lemmas run");
    let mut line = from_reports(&reports, "floor reading");
    let rational = reports.iter().find(|r| r.id == "valuation/matrix/rational");
    let recorded = rational.is_some_and(|r| !r.asserted && !r.valuations.is_empty());
    line.ok &= recorded && reports.len() == 6;
    line.detail = format!(
        "{}; i,j <= {}, k <= {}, beta <= {}; rational reading recorded: {}",
        line.detail,
        bounds.j_max,
        bounds.k_max,
        bounds.beta_max,
        rational.map_or("missing".to_string(), |r| format!("{:?}, {}", r.outcome, r.note.clone().unwrap_or_default()))
    );
    line
}

fn properties() -> Line {
    use common::*;
    let results = [
        ("ring axioms", run((series(), series(), series()), |(a, b, c)| ring_axioms(&a, &b, &c))),
        ("invert round trip", run(unit_series(), |a| invert_round_trip(&a))),
        ("progression round trip", run((series(), 1u64..8), |(a, m)| progression_round_trip(&a, m))),
        ("huff idempotence", run((series(), series()), |(a, b)| huff_idempotent(&a, &b))),
    ];
    let bad: Vec<String> = results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    Line {
        ok: bad.is_empty(),
        detail: if bad.is_empty() { format!("4 suites x {CASES} cases") } else { bad.join("; ") },
    }
}

type Check<'a> = Box<dyn Fn() -> Line + 'a>;

#[test]
fn acceptance() {
    let m = HHMatrix::new();
    let criteria: Vec<(&str, Check)> = vec![
        ("oracle agreement", Box::new(|| {
            let t = Instant::now();
            let l = oracle_agreement();
            within(t.elapsed(), Duration::from_secs(10), l)
        })),
        ("classical congruences mod 5^k", Box::new(classical_congruences)),
        ("matrix and vector layer", Box::new(|| matrix_layer(&m))),
        ("generating functions", Box::new(|| {
            let t = Instant::now();
            let l = theorem_series(&m);
            within(t.elapsed(), Duration::from_secs(60), l)
        })),
        ("congruence families", Box::new(congruence_families)),
        ("regressions", Box::new(regressions)),
        ("dissection", Box::new(dissection)),
        ("valuation bounds", Box::new(|| valuations(&m))),
        ("property suites", Box::new(properties)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let line = check();
        let status = if line.ok { "PASS" } else { "FAIL" };
        // Written straight to stderr so the lines survive test-output capture.
        let _ = writeln!(std::io::stderr(), "criterion {}: {status} {name} (tolerance {TOLERANCE}): {}", i + 1, line.detail);
        if !line.ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

//! Named groups of checks, run as independent jobs.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::claims::{p1l_mod5_claim, p1_4_mod7_claim, pm2_claim, p_power_claim, p1_25_claim, p1_5_claim, Family};
use super::divisibility::{check_claim, residue_cache};
use super::genfun::{verify_g1, verify_g3_g4, verify_hh_genfun, Parity, TheoremSeries};
use super::identities::{
    check_base_rows, check_x2_constant, check_xy_consistency, verify_f1_dissection, verify_dissection_steps,
    verify_huff_g_power, verify_huff_identity, HuffIdentity,
};
use super::scan::scan_congruences;
use super::{error_report, scaled_n_max, VerifyError, DEFAULT_N_MAX, DEFAULT_PREC};
use crate::hh::{check_valuation_lemmas, HHMatrix, LemmaBounds};
use crate::partitions::CountingKind;
use crate::report::{Params, RangeKind, Summary, VerificationReport, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Identities,
    Lemmas,
    Theorem1,
    Regressions,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Suite::All),
            "identities" => Ok(Suite::Identities),
            "lemmas" => Ok(Suite::Lemmas),
            "theorem1" => Ok(Suite::Theorem1),
            "regressions" => Ok(Suite::Regressions),
            other => Err(format!("unknown suite {other:?}")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::Identities => "identities",
            Suite::Lemmas => "lemmas",
            Suite::Theorem1 => "theorem1",
            Suite::Regressions => "regressions",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub prec: i64,
    pub n_max: u64,
    pub k_max: u32,
    pub beta_max: u32,
    /// Index bound for the matrix and vector valuation checks.
    pub j_max: u64,
    #[serde(skip)]
    pub jobs: usize,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { prec: DEFAULT_PREC, n_max: DEFAULT_N_MAX, k_max: 2, beta_max: 1, j_max: 30, jobs: 1, timings: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: SuiteConfig,
    pub reports: Vec<VerificationReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.summary.ok()
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<VerificationReport> + Send + Sync + 'a>;

fn one<'a>(f: impl Fn() -> VerificationReport + Send + Sync + 'a) -> Job<'a> {
    Box::new(move || vec![f()])
}

/// Pass/fail on an integer identity between two offsets.
fn offset_identity(id: &str, pairs: impl Iterator<Item = (u32, Result<(u64, u64, u64), VerifyError>, Result<(u64, u64, u64), VerifyError>)>) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new(id, "offsets");
    let mut hi = 0;
    for (beta, a, b) in pairs {
        hi = beta as i64 + 1;
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(a), Ok(b)) => {
                report = report.fail(Witness::Mismatch {
                    what: format!("(A, B, d) at beta={beta}"),
                    expected: format!("{a:?}"),
                    actual: format!("{b:?}"),
                });
                break;
            }
            (Err(e), _) | (_, Err(e)) => {
                report = error_report(id, "offsets", &e);
                break;
            }
        }
    }
    report.range(RangeKind::Indices, 0, hi).timed(started)
}

fn triple(c: Result<super::CongruenceClaim, super::ClaimError>) -> Result<(u64, u64, u64), VerifyError> {
    c.map(|c| (c.modulus, c.offset, c.divisor)).map_err(VerifyError::from)
}

const OFFSET_BETA_MAX: u32 = 5;

fn identities_jobs<'a>(cfg: &'a SuiteConfig, m: &'a HHMatrix) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = vec![
        one(move || verify_f1_dissection(cfg.prec)),
        Box::new(move || verify_dissection_steps(cfg.prec, residue_cache())),
    ];
    for k in 1..=cfg.k_max {
        jobs.push(one(move || verify_hh_genfun(m, k, Parity::Odd, cfg.prec)));
        jobs.push(one(move || verify_hh_genfun(m, k, Parity::Even, cfg.prec)));
    }
    for k in 1..=cfg.k_max {
        for beta in 0..=cfg.beta_max {
            jobs.push(one(move || verify_g1(m, k, beta, cfg.prec)));
            jobs.push(one(move || verify_g3_g4(m, k, beta, TheoremSeries::G3, cfg.prec)));
            jobs.push(one(move || verify_g3_g4(m, k, beta, TheoremSeries::G4, cfg.prec)));
        }
    }
    jobs
}

fn lemmas_jobs<'a>(cfg: &'a SuiteConfig, m: &'a HHMatrix) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = vec![one(move || check_base_rows(m))];
    for i in 1..=8 {
        jobs.push(one(move || verify_huff_g_power(m, i, cfg.prec)));
    }
    for i in 1..=4 {
        for w in HuffIdentity::ALL {
            jobs.push(one(move || verify_huff_identity(m, w, i, cfg.prec)));
        }
    }
    jobs.push(Box::new(move || {
        let bounds = LemmaBounds { i_max: cfg.j_max, j_max: cfg.j_max, ..LemmaBounds::default() };
        check_valuation_lemmas(m, &bounds)
            .unwrap_or_else(|e| vec![error_report("valuation/error", "valuation-lemmas", &e.into())])
    }));
    jobs.push(one(move || check_x2_constant(m)));
    for k in 1..=3 {
        jobs.push(one(move || check_xy_consistency(m, k, 30)));
    }
    jobs
}

fn sweep<'a>(id: String, claim: Result<super::CongruenceClaim, super::ClaimError>, n_max: u64, params: Params, informational: bool) -> Job<'a> {
    one(move || {
        let r = match &claim {
            Ok(c) => check_claim(&id, c, scaled_n_max(n_max, c.modulus), residue_cache()),
            Err(e) => error_report(&id, "theorem1", &e.clone().into()),
        };
        let r = r.params(params.clone());
        if informational {
            r.informational()
        } else {
            r
        }
    })
}

fn theorem1_jobs<'a>(cfg: &'a SuiteConfig) -> Vec<Job<'a>> {
    let mut jobs = Vec::new();
    for f in Family::ALL {
        for k in 1..=cfg.k_max {
            for beta in 0..=cfg.beta_max {
                for &r in f.stated_r() {
                    let (id, params) = if f == Family::C4 {
                        (format!("{f}/k={k}/beta={beta}/r={r}"), Params::kb(k, beta).with_r(r))
                    } else {
                        (format!("{f}/k={k}/beta={beta}"), Params::kb(k, beta))
                    };
                    let claim = f.claim(k, beta, r);
                    let params = match &claim {
                        Ok(c) => match c.kind {
                            CountingKind::P1L(l) => params.with_ell(l),
                            _ => params,
                        },
                        Err(_) => params,
                    };
                    jobs.push(sweep(id, claim, cfg.n_max, params, false));
                }
            }
        }
    }
    for k in 1..=cfg.k_max {
        for beta in 0..=cfg.beta_max {
            for r in [0, 1] {
                let id = format!("c4/k={k}/beta={beta}/r={r}");
                let params = Params::kb(k, beta).with_r(r);
                jobs.push(sweep(id, Family::C4.claim(k, beta, r), cfg.n_max, params, true));
            }
        }
    }
    jobs.extend(offset_jobs());
    jobs
}

fn offset_jobs<'a>() -> Vec<Job<'a>> {
    let betas = || 0..=OFFSET_BETA_MAX;
    vec![
        one(move || {
            offset_identity("offsets/p1l:5(c=3)=c1", betas().map(|b| (b, triple(p1_5_claim(3, b)), triple(Family::C1.claim(1, b, 0)))))
        }),
        one(move || {
            offset_identity("offsets/p1l:5(c=11)=c4(r=2)", betas().map(|b| (b, triple(p1_5_claim(11, b)), triple(Family::C4.claim(1, b, 2)))))
        }),
        one(move || {
            offset_identity("offsets/p1l:5(c=19)=c4(r=4)", betas().map(|b| (b, triple(p1_5_claim(19, b)), triple(Family::C4.claim(1, b, 4)))))
        }),
        one(move || {
            offset_identity("offsets/p1l:25(odd)=c2", betas().map(|b| (b, triple(p1_25_claim(true, b)), triple(Family::C2.claim(1, b, 0)))))
        }),
        one(move || {
            offset_identity("offsets/p1l:25(even)=c3", betas().map(|b| (b, triple(p1_25_claim(false, b)), triple(Family::C3.claim(1, b, 0)))))
        }),
    ]
}

/// Fixed sweep lengths for `p(5^k n + δ_k)`.
pub const P_POWER_N_MAX: [u64; 3] = [2000, 500, 100];
pub const P1L_MOD5_ELLS: [u64; 11] = [1, 2, 3, 4, 5, 7, 8, 10, 15, 17, 20];
pub const P1L_MOD5_N_MAX: u64 = 200;
pub const P1L4_MOD7_OFFSETS: [u64; 4] = [11, 25, 32, 39];
pub const PM2_N_MAX: u64 = 500;
pub const SCAN_N_CHECK: u64 = 100;

fn regression_jobs<'a>(cfg: &'a SuiteConfig) -> Vec<Job<'a>> {
    let mut jobs = Vec::new();
    for (i, &n) in P_POWER_N_MAX.iter().enumerate() {
        let k = i as u32 + 1;
        let claim = p_power_claim(k);
        jobs.push(one(move || match &claim {
            Ok(c) => check_claim(&format!("p/5^k/k={k}"), c, n, residue_cache()).params(Params { k: Some(k), ..Params::default() }),
            Err(e) => error_report(&format!("p/5^k/k={k}"), "p-mod-5^k", &e.clone().into()),
        }));
    }
    jobs.push(one(|| {
        VerificationReport::new("p1l/25n+24-l/ell=0", "p1l-mod-5")
            .params(Params::default().with_ell(0))
            .skipped("p_(1,0) is not defined by the generating function 1/(f_1 f_l)")
    }));
    for ell in P1L_MOD5_ELLS {
        let claim = p1l_mod5_claim(ell);
        jobs.push(one(move || {
            let id = format!("p1l/25n+24-l/ell={ell}");
            match &claim {
                Ok(c) => check_claim(&id, c, P1L_MOD5_N_MAX, residue_cache()).params(Params::default().with_ell(ell)),
                Err(e) => error_report(&id, "p1l-mod-5", &e.clone().into()),
            }
        }));
    }
    jobs.push(one(p1l4_scan_report));
    for t in P1L4_MOD7_OFFSETS {
        let claim = p1_4_mod7_claim(t);
        jobs.push(one(move || match &claim {
            Ok(c) => check_claim(&format!("p1l:4/49n+t/t={t}"), c, P1L_MOD5_N_MAX, residue_cache()),
            Err(e) => error_report("p1l:4-mod-7", "p1l:4-mod-7", &e.clone().into()),
        }));
    }
    for s in [2, 3, 4] {
        let claim = pm2_claim(s);
        jobs.push(one(move || match &claim {
            Ok(c) => check_claim(&format!("pm2/5n+s/s={s}"), c, PM2_N_MAX, residue_cache()),
            Err(e) => error_report("pm2/5n+s", "pm2-mod-5", &e.clone().into()),
        }));
    }
    for beta in 0..=cfg.beta_max {
        for c in [3, 11, 19] {
            jobs.push(sweep(format!("p1l:5/c={c}/beta={beta}"), p1_5_claim(c, beta), cfg.n_max, Params { beta: Some(beta), ..Params::default() }.with_ell(5), false));
        }
        for (odd, tag) in [(true, "odd"), (false, "even")] {
            jobs.push(sweep(format!("p1l:25/{tag}/beta={beta}"), p1_25_claim(odd, beta), cfg.n_max, Params { beta: Some(beta), ..Params::default() }.with_ell(25), false));
        }
    }
    jobs
}

/// The mod-7 scan over `A ≤ 49` must find exactly the four progressions
/// `49n + t`.
fn p1l4_scan_report() -> VerificationReport {
    let started = Instant::now();
    let id = "p1l:4/scan-mod-7";
    let report = VerificationReport::new(id, "p1l:4-mod-7").params(Params::default().with_ell(4));
    match scan_congruences(CountingKind::P1L(4), 49, &[7], SCAN_N_CHECK, residue_cache()) {
        Ok(o) => {
            let found: Vec<(u64, u64)> = o.claims.iter().map(|c| (c.claim.modulus, c.claim.offset)).collect();
            let want: Vec<(u64, u64)> = P1L4_MOD7_OFFSETS.iter().map(|&t| (49, t)).collect();
            let report = report.range(RangeKind::N, 0, SCAN_N_CHECK as i64 + 1);
            if found == want {
                report.pass()
            } else {
                report.fail(Witness::Mismatch {
                    what: "progressions found".into(),
                    expected: format!("{want:?}"),
                    actual: format!("{found:?}"),
                })
            }
        }
        Err(e) => report.fail(Witness::Mismatch { what: "scan".into(), expected: "to run".into(), actual: e.to_string() }),
    }
    .timed(started)
}

fn jobs_for<'a>(suite: Suite, cfg: &'a SuiteConfig, m: &'a HHMatrix) -> Vec<Job<'a>> {
    match suite {
        Suite::Identities => identities_jobs(cfg, m),
        Suite::Lemmas => lemmas_jobs(cfg, m),
        Suite::Theorem1 => theorem1_jobs(cfg),
        Suite::Regressions => regression_jobs(cfg),
        Suite::All => {
            let mut all = identities_jobs(cfg, m);
            all.extend(lemmas_jobs(cfg, m));
            all.extend(theorem1_jobs(cfg));
            all.extend(regression_jobs(cfg));
            all
        }
    }
}

/// Runs a suite against `matrix`.
///
/// Jobs run on `config.jobs` threads; reports come back in job order, so the
/// output does not depend on scheduling. With `timings` off every `millis`
/// field is dropped and the report is reproducible byte for byte.
pub fn run_suite(suite: Suite, config: &SuiteConfig, matrix: &HHMatrix) -> SuiteReport {
    let jobs = jobs_for(suite, config, matrix);
    let run = || jobs.par_iter().map(|job| job()).collect::<Vec<_>>();
    let batches = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => jobs.iter().map(|job| job()).collect(),
    };
    let mut reports: Vec<VerificationReport> = batches.into_iter().flatten().collect();
    if !config.timings {
        for r in &mut reports {
            r.millis = None;
        }
    }
    let summary = Summary::of(&reports);
    SuiteReport { suite, config: config.clone(), reports, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteConfig {
        SuiteConfig { prec: 30, n_max: 40, k_max: 1, beta_max: 1, j_max: 10, jobs: 2, timings: false }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All, Suite::Identities, Suite::Lemmas, Suite::Theorem1, Suite::Regressions] {
            assert_eq!(s.to_string().parse::<Suite>(), Ok(s));
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn theorem1_quick_passes_and_is_deterministic() {
        let m = HHMatrix::new();
        let a = run_suite(Suite::Theorem1, &quick(), &m);
        assert!(a.ok(), "{:?}", a.reports.iter().filter(|r| r.is_blocking()).collect::<Vec<_>>());
        let b = run_suite(Suite::Theorem1, &SuiteConfig { jobs: 1, ..quick() }, &m);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn corrupted_matrix_fails_lemmas() {
        let m = HHMatrix::new().with_override(2, 2, BigInt::from(126));
        let r = run_suite(Suite::Lemmas, &quick(), &m);
        assert!(!r.ok());
    }

    use num_bigint::BigInt;
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use qcong_core::hh::{pi5, HHMatrix, Provenance};
use qcong_core::partitions::{CountingFunction, CountingKind};
use qcong_core::verify::{
    residue_cache, run_suite, scan_congruences, Suite, SuiteConfig, DEFAULT_N_MAX,
};
use serde::Serialize;

mod output;

use output::{emit, Format, IndexSpec};

#[derive(Parser)]
#[command(name = "qcong", version, about = "Partition congruences and the series behind them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print values of p, p1l:<l> or pm2.
    Compute {
        /// Counting function: p, p1l:<l> or pm2.
        #[arg(value_name = "FN")]
        kind: CountingKind,
        /// Indices: n, a..b or a..=b, separated by spaces or commas.
        #[arg(required = true, value_delimiter = ',')]
        indices: Vec<IndexSpec>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run a verification suite and write its report.
    Verify(VerifyArgs),
    /// Search for progressions A n + B on which a function is divisible.
    Scan {
        #[arg(value_name = "FN")]
        kind: CountingKind,
        /// Largest modulus A to try.
        #[arg(long = "A", value_name = "A_MAX")]
        a_max: u64,
        /// Divisors to test, comma separated.
        #[arg(long = "div", required = true, value_delimiter = ',')]
        divisors: Vec<u64>,
        /// Each progression is checked for n = 0..=NMAX.
        #[arg(long = "nmax", default_value_t = 100)]
        n_check: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dump matrix entries as i,j,m,pi5.
    Matrix {
        /// Rows, as a..b or a..=b.
        #[arg(long, default_value = "1..=10")]
        rows: IndexSpec,
        /// Columns; defaults to every column of each row.
        #[arg(long)]
        cols: Option<IndexSpec>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dump an x or y vector with the valuation of each entry.
    Vectors {
        family: VectorFamily,
        #[arg(long)]
        k: u64,
        /// Step count beta for y-odd, the vector index for y-even.
        #[arg(long, default_value_t = 0)]
        index: u64,
        #[arg(long, default_value_t = 10)]
        len: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    /// Series precision.
    #[arg(long, env = "QCONG_DEFAULT_PREC", default_value_t = qcong_core::verify::DEFAULT_PREC,
          value_parser = clap::value_parser!(i64).range(1..))]
    prec: i64,
    /// Sweep length for moduli up to 25; larger moduli are scaled down.
    #[arg(long = "nmax", default_value_t = DEFAULT_N_MAX)]
    n_max: u64,
    #[arg(long = "kmax", default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=8))]
    k_max: u32,
    #[arg(long = "bmax", default_value_t = 1, value_parser = clap::value_parser!(u32).range(0..=8))]
    beta_max: u32,
    /// Index bound for the valuation lemmas.
    #[arg(long = "jmax", default_value_t = 30, value_parser = clap::value_parser!(u64).range(1..=200))]
    j_max: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Replace one matrix entry, as i,j,value.
    #[arg(long = "corrupt-matrix", value_name = "I,J,VALUE")]
    corrupt: Option<String>,
    /// Leave timings out so the report is byte-reproducible.
    #[arg(long)]
    no_timings: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum VectorFamily {
    X,
    YOdd,
    YEven,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Compute { kind, indices, out } => compute(kind, &indices, &out),
        Command::Verify(args) => verify(args),
        Command::Scan { kind, a_max, divisors, n_check, out } => scan(kind, a_max, &divisors, n_check, &out),
        Command::Matrix { rows, cols, out } => matrix(rows, cols, &out),
        Command::Vectors { family, k, index, len, out } => vectors(family, k, index, len, &out),
    }
}

#[derive(Serialize)]
struct Value {
    n: u64,
    value: String,
}

fn compute(kind: CountingKind, indices: &[IndexSpec], out: &OutputArgs) -> Result<ExitCode> {
    let f = CountingFunction::new(kind);
    let mut values = Vec::new();
    for spec in indices {
        for n in spec.iter() {
            values.push(Value { n, value: f.value(n).to_string() });
        }
    }
    let format = out.format.unwrap_or(Format::Text);
    emit(out.out.as_deref(), |w| match format {
        Format::Json => output::json(w, &values),
        Format::Csv => output::csv(w, &values),
        Format::Text => values.iter().try_for_each(|v| writeln!(w, "{}", v.value).map_err(Into::into)),
    })?;
    Ok(ExitCode::SUCCESS)
}

fn parse_corruption(s: &str) -> Result<(u64, u64, BigInt)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [i, j, v] = parts[..] else {
        bail!("--corrupt-matrix expects i,j,value, got {s:?}");
    };
    let i: u64 = i.parse().context("matrix row")?;
    let j: u64 = j.parse().context("matrix column")?;
    if i == 0 || j == 0 {
        bail!("matrix indices start at 1");
    }
    Ok((i, j, v.parse().context("matrix value")?))
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let mut m = HHMatrix::new();
    if let Some(spec) = &args.corrupt {
        let (i, j, v) = parse_corruption(spec)?;
        m = m.with_override(i, j, v);
    }
    let jobs = match args.jobs {
        Some(0) => bail!("--jobs must be at least 1"),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let config = SuiteConfig {
        prec: args.prec,
        n_max: args.n_max,
        k_max: args.k_max,
        beta_max: args.beta_max,
        j_max: args.j_max,
        jobs,
        timings: !args.no_timings,
    };
    let report = run_suite(args.suite, &config, &m);
    let format = args.out.format.unwrap_or(Format::Json);
    emit(args.out.out.as_deref(), |w| match format {
        Format::Json => output::json(w, &report),
        Format::Csv => output::report_csv(w, &report.reports),
        Format::Text => output::report_text(w, &report.reports),
    })?;

    // With a report file the human summary goes to stdout, otherwise to stderr.
    let mut summary = Vec::new();
    for r in report.reports.iter().filter(|r| r.is_fail()) {
        let tag = if r.asserted { "FAIL" } else { "info" };
        writeln!(summary, "{tag} {}", r.id)?;
    }
    let s = report.summary;
    writeln!(
        summary,
        "{}: {} checks, {} passed, {} failed, {} skipped, {} informational failures",
        args.suite, s.total, s.passed, s.failed, s.skipped, s.informational_failed
    )?;
    if args.out.out.is_some() {
        std::io::stdout().write_all(&summary)?;
    } else {
        std::io::stderr().write_all(&summary)?;
    }
    Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct ScanFile<'a> {
    #[serde(rename = "fn")]
    kind: String,
    #[serde(rename = "A_max")]
    a_max: u64,
    divisors: &'a [u64],
    #[serde(rename = "nCheck")]
    n_check: u64,
    #[serde(flatten)]
    outcome: &'a qcong_core::verify::ScanOutcome,
}

fn scan(kind: CountingKind, a_max: u64, divisors: &[u64], n_check: u64, out: &OutputArgs) -> Result<ExitCode> {
    let outcome = scan_congruences(kind, a_max, divisors, n_check, residue_cache())?;
    let format = out.format.unwrap_or(Format::Json);
    emit(out.out.as_deref(), |w| match format {
        Format::Json => output::json(w, &ScanFile { kind: kind.to_string(), a_max, divisors, n_check, outcome: &outcome }),
        Format::Csv => output::csv(w, outcome.claims.iter().map(output::ClaimRow::from)),
        Format::Text => outcome.claims.iter().try_for_each(|c| {
            let implied = c.implied_by.map(|i| format!(" (implied by {}n+{})", i.modulus, i.offset)).unwrap_or_default();
            writeln!(w, "{} | {kind}({}n+{}) for n <= {}{implied}", c.claim.divisor, c.claim.modulus, c.claim.offset, c.checked_up_to)
                .map_err(Into::into)
        }),
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Entry {
    i: u64,
    j: u64,
    m: String,
    pi5: String,
}

fn matrix(rows: IndexSpec, cols: Option<IndexSpec>, out: &OutputArgs) -> Result<ExitCode> {
    let m = qcong_core::hh::hh_matrix();
    let last = rows.iter().last().unwrap_or(0);
    if rows.iter().next() == Some(0) {
        bail!("matrix rows start at 1");
    }
    m.ensure_rows(last)?;
    let mut entries = Vec::new();
    for i in rows.iter() {
        let js: Vec<u64> = match &cols {
            Some(c) => c.iter().filter(|&j| j >= 1).collect(),
            None => (1..=i).collect(),
        };
        for j in js {
            let v = m.m_entry(i, j);
            entries.push(Entry { i, j, pi5: pi5(&v).to_string(), m: v.to_string() });
        }
    }
    let format = out.format.unwrap_or(Format::Csv);
    emit(out.out.as_deref(), |w| match format {
        Format::Json => output::json(w, &entries),
        Format::Csv | Format::Text => output::csv(w, &entries),
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VectorFile {
    vector: String,
    provenance: Provenance,
    len: usize,
    entries: Vec<VectorEntry>,
}

#[derive(Serialize)]
struct VectorEntry {
    j: usize,
    value: String,
    pi5: String,
}

fn vectors(family: VectorFamily, k: u64, index: u64, len: usize, out: &OutputArgs) -> Result<ExitCode> {
    if k == 0 {
        bail!("k starts at 1");
    }
    if len == 0 {
        bail!("--len must be at least 1");
    }
    let m = qcong_core::hh::hh_matrix();
    let v = match family {
        VectorFamily::X => m.x_vector(k, len)?,
        VectorFamily::YOdd => m.y_odd_vector(k, index, len)?,
        VectorFamily::YEven => {
            if index == 0 {
                bail!("y-even vectors are indexed from 1");
            }
            m.y_even_vector(k, index, len)?
        }
    };
    let entries = (1..=len)
        .map(|j| {
            let value = v.get(j).cloned().unwrap_or_default();
            VectorEntry { j, pi5: pi5(&value).to_string(), value: value.to_string() }
        })
        .collect();
    let file = VectorFile { vector: v.provenance().to_string(), provenance: v.provenance(), len, entries };
    let format = out.format.unwrap_or(Format::Json);
    emit(out.out.as_deref(), |w| match format {
        Format::Json => output::json(w, &file),
        Format::Csv | Format::Text => output::csv(w, &file.entries),
    })?;
    Ok(ExitCode::SUCCESS)
}

//! The `furst` command line: q-norm evaluation, sieve tables, gap data,
//! Dirichlet series checks and invariant suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 capacity error.

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use furst_core::qnorm::{qnorm, qnorm_structured};
use furst_core::{arith, dirichlet, means, sieve, PrimeTable, QParam, StructuredInteger};

use output::{write_records, CheckRow, Format, GapRow, HistRow, NormRecord, NormRow, ScatterRow, SeriesRow};
use verify::{SieveKernel, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] furst_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0} verification check(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) | CliError::Core(furst_core::Error::Internal(_)) => 1,
            CliError::Core(furst_core::Error::Capacity(_)) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "furst", version, about = "q-norms on the integers and the Fürstenberg topology")]
pub struct Cli {
    /// Largest integer the prime table may cover
    #[arg(long, global = true, env = "FURST_TABLE_LIMIT", default_value_t = furst_core::DEFAULT_TABLE_LIMIT, value_parser = parse_count)]
    pub table_limit: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ‖n‖_q for an integer or a structured integer such as n!+1
    Norm(NormArgs),
    /// ‖m‖_q for m = 1..=n
    Sieve {
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, value_parser = parse_count)]
        n: u64,
    },
    /// (n, ‖n‖_q, mean limit) over an integer range
    Scatter {
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 1000, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, default_value_t = 1100, allow_negative_numbers = true)]
        to: i64,
    },
    /// Histogram of ‖1‖_q..‖n‖_q over [0, 1/(q(q−1))]
    Hist {
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        n: u64,
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
    /// Parity gap bounds and mean limit on a grid of q
    Gap {
        #[arg(long, default_value_t = 1.05)]
        q_min: f64,
        #[arg(long, default_value_t = 3.0)]
        q_max: f64,
        #[arg(long, default_value_t = 40)]
        steps: usize,
    },
    /// Partial sum against closed form for one Dirichlet series
    Series {
        #[arg(long, value_enum)]
        kind: SeriesKind,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        #[arg(long, default_value = "1e5", value_parser = parse_count)]
        n: u64,
    },
    /// Run invariant suites; exits 1 if any check fails
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value = "1e4", value_parser = parse_count)]
        n_scale: u64,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["n", "factorial", "primorial", "lcm", "prime_index", "prime_block"])))]
pub struct NormArgs {
    #[arg(allow_negative_numbers = true)]
    pub n: Option<i64>,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// Truncation tolerance for structured inputs
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, value_name = "K")]
    pub factorial: Option<u64>,
    #[arg(long, value_name = "K")]
    pub primorial: Option<u64>,
    #[arg(long, value_name = "K")]
    pub lcm: Option<u64>,
    /// The K-th prime
    #[arg(long, value_name = "K")]
    pub prime_index: Option<u64>,
    /// p_K ⋯ p_2K
    #[arg(long, value_name = "K")]
    pub prime_block: Option<u64>,
    /// Added to a structured input
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub plus: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// Σ ‖n‖_q n^-s
    Q,
    /// Σ γ_q(n) n^-s
    Gamma,
    /// Σ ξ(n) n^-s
    Xi,
}

/// Accepts plain integers and exact scientific forms such as `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(format!("not a non-negative integer: {s}"))
    }
}

impl NormArgs {
    fn structured(&self) -> Option<StructuredInteger> {
        let base = if let Some(k) = self.factorial {
            StructuredInteger::Factorial(k)
        } else if let Some(k) = self.primorial {
            StructuredInteger::Primorial(k)
        } else if let Some(k) = self.lcm {
            StructuredInteger::Lcm(k)
        } else if let Some(k) = self.prime_index {
            StructuredInteger::PrimeIndex(k)
        } else {
            StructuredInteger::PrimeBlock(self.prime_block?)
        };
        Some(base.shifted(self.plus))
    }

    fn label(&self) -> String {
        let (name, k) = [
            ("factorial", self.factorial),
            ("primorial", self.primorial),
            ("lcm", self.lcm),
            ("prime_index", self.prime_index),
            ("prime_block", self.prime_block),
        ]
        .into_iter()
        .find_map(|(name, k)| k.map(|k| (name, k)))
        .unwrap_or(("n", 0));
        match self.plus {
            0 => format!("{name}({k})"),
            p => format!("{name}({k}){p:+}"),
        }
    }
}

/// Parses `args` and runs the command with the default sieve kernel.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, &verify::default_kernel) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("furst: {e}");
            e.exit_code()
        }
    }
}

fn q_param(q: f64) -> Result<QParam, CliError> {
    Ok(QParam::new(q)?)
}

/// Prime table sized to `need`, refusing anything beyond the configured limit.
fn table_for(cli: &Cli, need: u64) -> Result<PrimeTable, CliError> {
    guard(cli, need)?;
    Ok(PrimeTable::new(need.max(2))?)
}

pub fn run(cli: &Cli, kernel: &SieveKernel) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let out = sink.as_mut();
    let fmt = cli.format;
    match &cli.command {
        Command::Norm(args) => {
            let q = q_param(args.q)?;
            let (input, v) = match args.structured() {
                None => {
                    let n = args.n.expect("clap requires one input");
                    let table = table_for(cli, n.unsigned_abs())?;
                    (n.to_string(), qnorm(&table, n, q)?)
                }
                Some(x) => {
                    let table = table_for(cli, cli.table_limit.min(1_000_000))?;
                    (args.label(), qnorm_structured(&table, &x, q, args.tol)?)
                }
            };
            write_records(out, fmt, &[NormRecord { input, q: q.value(), value: v.value, tail_bound: v.tail_bound }])?;
        }
        Command::Sieve { q, n } => {
            let q = q_param(*q)?;
            guard(cli, *n)?;
            let rows: Vec<NormRow> = kernel(q, *n)?
                .into_iter()
                .enumerate()
                .map(|(i, norm)| NormRow { n: i as i64 + 1, norm })
                .collect();
            write_records(out, fmt, &rows)?;
        }
        Command::Scatter { q, from, to } => {
            let q = q_param(*q)?;
            if from > to {
                return Err(CliError::Usage(format!("empty range {from}..={to}")));
            }
            let reach = from.unsigned_abs().max(to.unsigned_abs());
            guard(cli, reach)?;
            let values = kernel(q, reach)?;
            let limit = means::mean_limit(q);
            let rows: Vec<ScatterRow> = (*from..=*to)
                .map(|n| {
                    let norm = if n == 0 { 0.0 } else { values[n.unsigned_abs() as usize - 1] };
                    ScatterRow { n, norm, mean_limit: limit }
                })
                .collect();
            write_records(out, fmt, &rows)?;
        }
        Command::Hist { q, n, bins } => {
            let q = q_param(*q)?;
            guard(cli, *n)?;
            let table = sieve::sieve_qnorms(q, *n)?;
            let rows: Vec<HistRow> = sieve::histogram(&table, *bins)?
                .into_iter()
                .map(|b| HistRow { bin_lo: b.lo, bin_hi: b.hi, count: b.count })
                .collect();
            write_records(out, fmt, &rows)?;
        }
        Command::Gap { q_min, q_max, steps } => {
            let rows: Vec<GapRow> = means::gap_table(*q_min, *q_max, *steps)?
                .into_iter()
                .map(|p| GapRow {
                    q: p.q,
                    odd_lower: p.gap_exists.then_some(p.odd_lower),
                    even_upper: p.gap_exists.then_some(p.even_upper),
                    mean_limit: p.mean_limit,
                    mean_in_gap: p.mean_in_gap,
                })
                .collect();
            write_records(out, fmt, &rows)?;
        }
        Command::Series { kind, q, s, n } => {
            let (q_col, closed, partial) = match kind {
                SeriesKind::Q => {
                    let qq = q_param(*q)?;
                    (Some(*q), dirichlet::q_closed(qq, *s)?, dirichlet::q_partial(qq, *s, *n)?)
                }
                SeriesKind::Gamma => {
                    let qq = q_param(*q)?;
                    let li = arith::polylog_with_tol(*s, 1.0 / q, 1e-16)?.value;
                    (Some(*q), 1.0 / (q - 1.0) - li, dirichlet::gamma_series(qq, *s, *n)?)
                }
                SeriesKind::Xi => (None, dirichlet::xi_closed(*s)?, dirichlet::xi_partial(*s, *n)?),
            };
            let abs_diff = (partial.value - closed).abs();
            let row = SeriesRow {
                kind: format!("{kind:?}").to_lowercase(),
                q: q_col,
                s: *s,
                terms: *n,
                closed,
                partial: partial.value,
                tail_bound: partial.tail_bound,
                abs_diff,
                within_tail: partial.contains(closed, 1e-12),
            };
            write_records(out, fmt, &[row])?;
        }
        Command::Verify { suite, n_scale } => {
            let table = table_for(cli, (*n_scale).max(200_000).min(cli.table_limit))?;
            let rows: Vec<CheckRow> = verify::run_suite(*suite, *n_scale, &table, kernel)?;
            write_records(out, fmt, &rows)?;
            out.flush()?;
            let failed = rows.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(CliError::VerifyFailed(failed));
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn guard(cli: &Cli, n: u64) -> Result<(), CliError> {
    if n > cli.table_limit {
        return Err(furst_core::Error::Capacity(format!(
            "{n} exceeds the table limit {} (raise --table-limit or FURST_TABLE_LIMIT)",
            cli.table_limit
        ))
        .into());
    }
    Ok(())
}

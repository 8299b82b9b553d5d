mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gompertz::exactmath::parse_rat;
use gompertz::reference::MAX_DECIMAL_DIGITS;
use gompertz::BigRat;

const MIN_DIGITS: u32 = 10;

#[derive(Parser, Debug)]
#[command(
    name = "gompertz",
    version,
    about = "Rational approximants and identity checks for the Euler-Gompertz constant"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Significant decimal digits in every reported value.
    #[arg(long, global = true, default_value_t = 30, value_parser = parse_digits)]
    pub digits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=1024))]
    pub threads: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the Euler-Gompertz constant.
    Delta {
        #[arg(long, value_enum, default_value_t = Method::Cross)]
        method: Method,
    },
    /// Tabulate an approximant family with ratios and errors.
    Approx {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        corollary: u8,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long = "max-m", default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..=5000))]
        max_m: u32,
    },
    /// Partial sums of the series whose limit is u.
    Theorem {
        /// Nonnegative rational, e.g. 1, 1/2 or 0.25.
        #[arg(long, default_value = "1", value_parser = parse_nonneg_rat)]
        u: BigRat,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long = "max-m", default_value_t = 30, value_parser = clap::value_parser!(u32).range(0..=400))]
        max_m: u32,
        #[arg(long, value_enum, default_value_t = Path::Exact)]
        path: Path,
    },
    /// Run the exact identity suite.
    Identities {
        /// Cap every grid at this m.
        #[arg(long = "max-m", value_parser = clap::value_parser!(u32).range(0..=60))]
        max_m: Option<u32>,
        /// Also run the numeric recurrence checks at --digits.
        #[arg(long)]
        numeric: bool,
        /// Perturb one closed form to exercise the failure path.
        #[arg(long)]
        corrupt: bool,
    },
    /// Residuals of the digamma conjecture under both Bernoulli conventions.
    Conjecture {
        /// Positive rationals; repeat the flag for several values.
        #[arg(long, value_parser = parse_pos_rat, default_values = ["1/2", "1", "2"])]
        u: Vec<BigRat>,
        /// Truncation points m; repeat the flag for several values.
        #[arg(long = "m", value_parser = clap::value_parser!(u32).range(1..=60), default_values = ["1", "5", "10", "20"])]
        m: Vec<u32>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
        convention: ConventionArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    E1,
    Cross,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    Exact,
    Quadrature,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConventionArg {
    Both,
    MinusHalf,
    PlusHalf,
}

fn parse_digits(s: &str) -> Result<u32, String> {
    let d: u32 = s
        .parse()
        .map_err(|_| format!("expected an integer in {MIN_DIGITS}..={MAX_DECIMAL_DIGITS}"))?;
    if !(MIN_DIGITS..=MAX_DECIMAL_DIGITS).contains(&d) {
        return Err(format!("{d} is outside {MIN_DIGITS}..={MAX_DECIMAL_DIGITS}"));
    }
    Ok(d)
}

fn parse_nonneg_rat(s: &str) -> Result<BigRat, String> {
    let v = parse_rat(s).ok_or_else(|| format!("`{s}` is not a rational (expected p, p/q or a decimal)"))?;
    if v < BigRat::from_integer(0.into()) {
        return Err(format!("{s} is negative; need u >= 0"));
    }
    Ok(v)
}

fn parse_pos_rat(s: &str) -> Result<BigRat, String> {
    let v = parse_nonneg_rat(s)?;
    if v == BigRat::from_integer(0.into()) {
        return Err("need u > 0".into());
    }
    Ok(v)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Delta { method } => commands::delta(&cli.common, method),
        Command::Approx { corollary, r, max_m } => commands::approx(&cli.common, corollary, r, max_m),
        Command::Theorem { u, r, max_m, path } => commands::theorem(&cli.common, &u, r, max_m, path),
        Command::Identities {
            max_m,
            numeric,
            corrupt,
        } => commands::identities(&cli.common, max_m, numeric, corrupt),
        Command::Conjecture { u, m, convention } => commands::conjecture(&cli.common, &u, &m, convention),
    };
    match outcome {
        Ok(report) => {
            if let Err(e) = output::emit(&report.body, cli.common.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

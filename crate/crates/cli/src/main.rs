mod render;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use defectus_core::detmodel::{normalized_point, sample_batch, NormalizedPointSpec, ProblemShape};
use defectus_core::linalg::{minor_ideal_valuation, smith_form};
use defectus_core::verify::{run_suite, SuiteConfig};
use defectus_core::{analyze_point, Backend, DefectReport, DvrMatrix, Valuation};

const DEFAULT_BACKEND: &str = "int:5";
const VERIFY_BACKENDS: [&str; 2] = ["int:2", "int:5"];

#[derive(Parser)]
#[command(name = "defectus")]
#[command(about = "Exact congruence modules and Wiles defects of maximal-minor determinantal rings over a DVR")]
#[command(version)]
struct Cli {
    /// Coefficient ring: int:<p> for Z_(p), poly:<q> for F_q[t]_(t)
    #[arg(long, global = true)]
    backend: Option<Backend>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[arg(long, global = true, env = "DEFECTUS_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(clap::Args)]
struct PointArgs {
    /// Matrix JSON file
    #[arg(long, conflicts_with_all = ["m", "n", "exponents"])]
    input: Option<PathBuf>,

    #[arg(long, requires_all = ["n", "exponents"])]
    m: Option<usize>,

    #[arg(long, requires_all = ["m", "exponents"])]
    n: Option<usize>,

    /// Nondecreasing exponents a_1,...,a_{m-1} of the normalized point
    #[arg(long, value_delimiter = ',', requires_all = ["m", "n"])]
    exponents: Option<Vec<u64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one point given as a matrix file or a normalized profile
    Analyze {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Smith normal form of a point on the variety
    Normalize {
        #[command(flatten)]
        point: PointArgs,

        /// Also print the unimodular factors
        #[arg(long)]
        transforms: bool,
    },
    /// Sample and analyze random points on the variety
    Sample {
        #[arg(long)]
        m: usize,

        #[arg(long)]
        n: usize,

        #[arg(long)]
        count: usize,

        /// Sample GL-translates of this normalized profile
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<u64>>,
    },
    /// Run the fixed verification suite
    Verify {
        /// Reduced grid (m <= 3, n <= 5)
        #[arg(long)]
        quick: bool,
    },
}

/// Exit 1 errors; a failed mathematical check is reported through `Outcome`.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

enum Outcome {
    Pass,
    CheckFailed,
}

impl Outcome {
    fn from_pass(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::CheckFailed
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut out = io::stdout().lock();
    match run(&cli, &mut out).and_then(|o| out.flush().map(|_| o).map_err(InputError::from)) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(2),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<Outcome, InputError> {
    match &cli.command {
        Command::Analyze { point } => {
            let a = load_point(cli, point)?;
            let report = analyze_point(&a)?;
            render::report(out, cli.format, &report)?;
            Ok(Outcome::from_pass(report.all_checks_pass()))
        }
        Command::Normalize { point, transforms } => {
            let a = load_point(cli, point)?;
            let shape = ProblemShape::of(&a)?;
            if minor_ideal_valuation(&a, shape.m())? != Valuation::Infinite {
                return Err(InputError("point is not on the variety: some maximal minor is nonzero".into()));
            }
            let smith = smith_form(&a);
            let verified = smith.verify(&a);
            render::smith(out, cli.format, &smith, *transforms)?;
            Ok(Outcome::from_pass(verified))
        }
        Command::Sample { m, n, count, exponents } => {
            let shape = ProblemShape::new(*m, *n)?;
            let backend = cli.backend.unwrap_or_else(default_backend);
            if let Some(e) = exponents {
                NormalizedPointSpec::new(shape, e.clone())?;
            }
            let points = sample_batch(shape, backend, exponents.as_deref(), *count, cli.seed)?;
            let reports: Vec<DefectReport> = points
                .par_iter()
                .map(analyze_point)
                .collect::<Result<_, _>>()?;
            render::reports(out, cli.format, &reports)?;
            Ok(Outcome::from_pass(reports.iter().all(DefectReport::all_checks_pass)))
        }
        Command::Verify { quick } => {
            let backends = match cli.backend {
                Some(b) => vec![b],
                None => VERIFY_BACKENDS.iter().map(|s| s.parse().expect("valid literal")).collect(),
            };
            let cfg = if *quick {
                SuiteConfig::quick(backends, cli.seed)
            } else {
                SuiteConfig::full(backends, cli.seed)
            };
            let summary = run_suite(&cfg)?;
            render::summary(out, cli.format, &summary)?;
            Ok(Outcome::from_pass(summary.all_pass()))
        }
    }
}

fn default_backend() -> Backend {
    DEFAULT_BACKEND.parse().expect("valid literal")
}

fn load_point(cli: &Cli, args: &PointArgs) -> Result<DvrMatrix, InputError> {
    if let Some(path) = &args.input {
        let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let a: DvrMatrix =
            serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        if let Some(b) = cli.backend {
            if b != a.backend() {
                return Err(InputError(format!("--backend {b} does not match the matrix backend {}", a.backend())));
            }
        }
        return Ok(a);
    }
    match (args.m, args.n, &args.exponents) {
        (Some(m), Some(n), Some(e)) => {
            let spec = NormalizedPointSpec::new(ProblemShape::new(m, n)?, e.clone())?;
            Ok(normalized_point(&spec, cli.backend.unwrap_or_else(default_backend)))
        }
        _ => Err(InputError("give --input FILE or --m, --n and --exponents".into())),
    }
}

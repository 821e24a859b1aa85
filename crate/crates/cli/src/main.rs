use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use pruess::potentials::CaseId;
use pruess_cli::{
    approximation_csv, mesh_artifact_path, mesh_csv, render_rows, run, slope_table_csv, CliError,
    MethodChoice, OutputFormat, PotentialSource, RunConfig,
};

/// Sturm-Liouville eigenvalues by piecewise model potentials.
#[derive(Parser)]
#[command(name = "pruess", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the lowest eigenvalues of a problem.
    Solve(SolveArgs),
    /// Dump the potential and its fitted piecewise model on a fine grid.
    Approx(ApproxArgs),
    /// Dump the mesh breakpoints and per-segment penalties.
    Mesh(CommonArgs),
    /// Dump the slope-matching table.
    SlopeTable {
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Built-in potential: case1 .. case5.
    #[arg(long, conflicts_with = "table")]
    case: Option<String>,
    /// Two-column x,p CSV file with a user potential (header optional).
    #[arg(long)]
    table: Option<PathBuf>,
    /// Mesh/fit combination: up, ux, ap, ax.
    #[arg(long, default_value = "up")]
    method: String,
    /// Number of subintervals.
    #[arg(long, default_value_t = 16)]
    k: usize,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of eigenvalues.
    #[arg(long, default_value_t = 25)]
    n: usize,
    /// Relative bisection tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Override the initial scan step in lambda.
    #[arg(long)]
    scan_step: Option<f64>,
    /// Abort the scan beyond this lambda.
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Output format: csv or md.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Round eigenvalues to 5 significant digits as in printed tables.
    #[arg(long)]
    paper_digits: bool,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of uniform sample points.
    #[arg(long, default_value_t = 512)]
    samples: usize,
    /// Where to write the mesh artifact (defaults to `<out stem>_mesh.csv`).
    #[arg(long)]
    mesh_out: Option<PathBuf>,
}

fn parse_common(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let source = match (&common.case, &common.table) {
        (Some(case), None) => PotentialSource::Case(
            CaseId::from_str(case).map_err(|e| CliError::Config(e.to_string()))?,
        ),
        (None, Some(path)) => PotentialSource::Table(path.clone()),
        (None, None) => {
            return Err(CliError::Config(
                "choose a potential with --case or --table".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    let method = MethodChoice::parse(&common.method).ok_or_else(|| {
        CliError::Config(format!(
            "unknown method '{}' (expected up, ux, ap or ax)",
            common.method
        ))
    })?;
    Ok(RunConfig::new(source, method, common.k))
}

fn parse_format(s: &str) -> Result<OutputFormat, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "csv" => Ok(OutputFormat::Csv),
        "md" | "markdown" => Ok(OutputFormat::Markdown),
        other => Err(CliError::Config(format!(
            "unknown format '{other}' (expected csv or md)"
        ))),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => {
            let mut cfg = parse_common(&args.common)?;
            if args.n == 0 {
                return Err(CliError::Config("--n must be at least 1".into()));
            }
            if !(args.tol > 0.0) {
                return Err(CliError::Config("--tol must be positive".into()));
            }
            cfg.num_eigen = args.n;
            cfg.tol = args.tol;
            cfg.scan_step = args.scan_step;
            cfg.lambda_max = args.lambda_max;
            let format = parse_format(&args.format)?;
            let rows = run(&cfg)?;
            emit(
                args.common.out.as_ref(),
                &render_rows(&rows, format, args.paper_digits),
            )
        }
        Command::Approx(args) => {
            let cfg = parse_common(&args.common)?;
            let out = args.common.out.as_ref().ok_or_else(|| {
                CliError::Config("approx writes two artifacts; --out is required".into())
            })?;
            let curves = approximation_csv(&cfg, args.samples)?;
            emit(Some(out), &curves)?;
            let mesh_path = args
                .mesh_out
                .clone()
                .unwrap_or_else(|| mesh_artifact_path(out));
            emit(Some(&mesh_path), &mesh_csv(&cfg)?)
        }
        Command::Mesh(common) => {
            let cfg = parse_common(&common)?;
            emit(common.out.as_ref(), &mesh_csv(&cfg)?)
        }
        Command::SlopeTable { out } => emit(out.as_ref(), &slope_table_csv()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("pruess: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

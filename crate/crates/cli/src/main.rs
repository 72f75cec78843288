//! `hrad`: fields of values, numerical radii and half-radial certification.

mod commands;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halfradial::fov::{DEFAULT_BOUNDARY_COUNT, DEFAULT_GRID_SIZE, DEFAULT_REFINE_TOL};
use halfradial::halfradial::{DEFAULT_CLUSTER_TOL, DEFAULT_TAU};

use commands::{Format, GenerateKind, Settings};

#[derive(Parser, Debug)]
#[command(
    name = "hrad",
    version,
    about = "Numerical radius and half-radial matrix analysis"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Relative tolerance for the half-radial verdict and diagnostics.
    #[arg(long, global = true, default_value_t = DEFAULT_TAU)]
    tau: f64,
    /// Relative clustering tolerance for the largest singular value.
    #[arg(long, global = true, default_value_t = DEFAULT_CLUSTER_TOL)]
    eps: f64,
    /// Angles in the coarse θ-grid of the numerical radius.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_SIZE)]
    grid: usize,
    /// Bracket width at which golden-section refinement stops.
    #[arg(long, global = true, default_value_t = DEFAULT_REFINE_TOL)]
    refine_tol: f64,
    /// Directions for boundary sweeps (fov) and the disk check (default 512 there).
    #[arg(long, global = true)]
    boundary_count: Option<usize>,
    /// Seed for randomized cross-checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted or `-`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format (default text); `generate` writes a JSON matrix file unless `text` is asked for.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Norm, radius, half-radial verdict with diagnostics, Crouzeix ratios.
    Analyze {
        /// Matrix file, `-` for stdin.
        input: String,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Boundary of W(A) as CSV (theta,support,re,im).
    Fov { input: String },
    /// Numerical radius with its maximizing angle and vector.
    Radius { input: String },
    /// Write a matrix file.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Table of ‖A^k‖ / r(A)^k with extremality verdicts.
    Crouzeix {
        input: String,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Decomposition A/r(A) = Q (C_k ⊕ B) Q* of a matrix with ‖A^k‖ = 2r(A)^k.
    Crabb {
        input: String,
        #[arg(long)]
        k: usize,
    },
    /// Canonical form (σ I_m ⊗ J) ⊕ B of a half-radial matrix.
    CertifyDecomposition { input: String },
}

#[derive(Subcommand, Debug)]
enum GenerateCommand {
    /// The (n+1)x(n+1) Crabb-Choi-Crouzeix matrix C_n.
    Ccc { n: usize },
    /// Q((σ I_m ⊗ J) ⊕ B)Q* with Haar Q and r(B) = frac·σ/2.
    Halfradial {
        n: usize,
        m: usize,
        sigma: f64,
        frac: f64,
        seed: u64,
    },
    /// Haar-distributed unitary.
    Haar { n: usize, seed: u64 },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    let is_generate = matches!(cli.command, Command::Generate(_));
    let format = match g.format {
        Some(FormatArg::Text) => Format::Text,
        Some(FormatArg::Json) => Format::Json,
        None if is_generate => Format::Json,
        None => Format::Text,
    };
    let is_fov = matches!(cli.command, Command::Fov { .. });
    let default_count = if is_fov {
        DEFAULT_BOUNDARY_COUNT
    } else {
        DEFAULT_GRID_SIZE
    };
    let settings = Settings {
        tau: g.tau,
        eps: g.eps,
        grid: g.grid,
        refine_tol: g.refine_tol,
        boundary_count: g.boundary_count.unwrap_or(default_count),
        seed: g.seed,
        format,
    };
    let output = match &cli.command {
        Command::Analyze { input, k_max } => commands::analyze(input, *k_max, &settings)?,
        Command::Fov { input } => commands::fov(input, &settings)?,
        Command::Radius { input } => commands::radius(input, &settings)?,
        Command::Crouzeix { input, k_max } => commands::crouzeix(input, *k_max, &settings)?,
        Command::Crabb { input, k } => commands::crabb(input, *k, &settings)?,
        Command::CertifyDecomposition { input } => {
            commands::certify_decomposition(input, &settings)?
        }
        Command::Generate(kind) => {
            let kind = match *kind {
                GenerateCommand::Ccc { n } => GenerateKind::Ccc { n },
                GenerateCommand::Halfradial {
                    n,
                    m,
                    sigma,
                    frac,
                    seed,
                } => GenerateKind::HalfRadial {
                    n,
                    m,
                    sigma,
                    frac,
                    seed,
                },
                GenerateCommand::Haar { n, seed } => GenerateKind::Haar { n, seed },
            };
            commands::generate(&kind, &settings)?
        }
    };
    io::write_output(g.out.as_deref(), &output)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

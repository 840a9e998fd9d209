use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kerrsqueeze::fock::KerrConvention;
use kerrsqueeze::optimize::SweepKind;
use kerrsqueeze::robustness::McKind;
use kerrsqueeze_cli::commands::{baselines_report, run_mc, run_plotdata, run_sweep};
use kerrsqueeze_cli::config::{resolve_mc, resolve_sweep, McOverrides, SweepOverrides};
use kerrsqueeze_cli::plot::PlotStyle;
use kerrsqueeze_cli::{CliError, CliResult};

/// Kerr-plus-Gaussian squeezing sweeps, Monte Carlo error analysis, and
/// plot data, all deterministic for a fixed seed.
#[derive(Parser)]
#[command(name = "kerrsqueeze", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize gate parameters over a grid of input energies.
    Sweep(SweepArgs),
    /// Monte Carlo fluctuation analysis around optimized parameters.
    Mc(McArgs),
    /// Print the Gaussian baseline solutions.
    Baselines,
    /// Convert a sweep or mc CSV into an SVG or tidy CSV.
    Plotdata(PlotArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config (a previous manifest.json also works).
    #[arg(long)]
    config: Option<PathBuf>,
    /// linear | cubic | quartic
    #[arg(long)]
    kind: Option<SweepKind>,
    #[arg(long)]
    grid_start: Option<f64>,
    #[arg(long)]
    grid_stop: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    /// Truncation dimension (default 300).
    #[arg(long)]
    dim: Option<usize>,
    /// nPlus1Sq | twoNplus1Sq
    #[arg(long)]
    convention: Option<KerrConvention>,
    /// Local-optimization starts per grid point (default 300).
    #[arg(long)]
    n_starts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// cubic | quartic
    #[arg(long)]
    kind: Option<McKind>,
    /// Relative fluctuation sizes (default 0.01,0.05).
    #[arg(long, value_delimiter = ',')]
    gammas: Option<Vec<f64>>,
    /// Runs per grid point (default 10000).
    #[arg(long)]
    n_runs: Option<usize>,
    /// Parameters held at their optimal values, by name.
    #[arg(long, value_delimiter = ',')]
    fixed: Option<Vec<String>>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    convention: Option<KerrConvention>,
    #[arg(long)]
    seed: Option<u64>,
    /// The `params_<kind>.csv` file from a sweep run.
    #[arg(long)]
    params_csv: Option<PathBuf>,
    /// Inline mean tuple, five comma-separated values.
    #[arg(long, value_delimiter = ',', num_args = 5)]
    mu: Option<Vec<f64>>,
    /// Grid value labelling the inline tuple.
    #[arg(long)]
    primary: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    input: PathBuf,
    /// svg | tidy
    #[arg(long, default_value = "svg")]
    style: PlotStyle,
    #[arg(long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn configure_threads() {
    if let Ok(value) = std::env::var("KERRSQUEEZE_THREADS") {
        if let Ok(n) = value.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Sweep(args) => {
            let flags = SweepOverrides {
                kind: args.kind,
                grid_start: args.grid_start,
                grid_stop: args.grid_stop,
                grid_points: args.grid_points,
                dim: args.dim,
                convention: args.convention,
                n_starts: args.n_starts,
                seed: args.seed,
                out_dir: args.out_dir,
            };
            let config = resolve_sweep(args.config.as_deref(), flags)?;
            let outputs = run_sweep(&config)?;
            println!(
                "wrote {} ({} points), {}, {}",
                outputs.sweep_csv.display(),
                outputs.result.points.len(),
                outputs.params_csv.display(),
                outputs.manifest_path.display()
            );
            if !outputs.result.failures.is_empty() {
                return Err(CliError::Numerical(format!(
                    "{} grid point(s) failed to optimize; see manifest diagnostics",
                    outputs.result.failures.len()
                )));
            }
            Ok(())
        }
        Command::Mc(args) => {
            let mu = match args.mu {
                Some(values) => {
                    let arr: [f64; 5] = values
                        .try_into()
                        .map_err(|_| CliError::Config("mu needs five values".into()))?;
                    Some(arr)
                }
                None => None,
            };
            let flags = McOverrides {
                kind: args.kind,
                gammas: args.gammas,
                n_runs: args.n_runs,
                fixed: args.fixed,
                dim: args.dim,
                convention: args.convention,
                seed: args.seed,
                params_csv: args.params_csv,
                mu,
                primary: args.primary,
                out_dir: args.out_dir,
            };
            let config = resolve_mc(args.config.as_deref(), flags)?;
            let outputs = run_mc(&config)?;
            for path in &outputs.csv_paths {
                println!("wrote {}", path.display());
            }
            println!("wrote {}", outputs.manifest_path.display());
            Ok(())
        }
        Command::Baselines => {
            print!("{}", baselines_report());
            Ok(())
        }
        Command::Plotdata(args) => {
            run_plotdata(&args.input, args.style, &args.output)?;
            println!("wrote {}", args.output.display());
            Ok(())
        }
    }
}

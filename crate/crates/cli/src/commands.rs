//! The four commands: sweep, mc, baselines, plotdata.

use std::path::{Path, PathBuf};
use std::time::Instant;

use kerrsqueeze::metrics::{gaussian_baseline, Order};
use kerrsqueeze::optimize::{sweep, SweepConfig, SweepKind, SweepResult};
use kerrsqueeze::prep::{cubic_state_params, quartic_state_params};
use kerrsqueeze::robustness::{monte_carlo, FluctuationSpec, MCStats, McKind};
use kerrsqueeze::seeding::derive_seed;
use serde_json::json;

use crate::config::{McRunConfig, SweepRunConfig};
use crate::csvio::{fmt_f64, read_csv, write_csv, Table};
use crate::manifest::RunManifest;
use crate::plot::{render_svg, render_tidy, PlotStyle};
use crate::{config_err, numerical_err, CliResult};

pub struct SweepOutputs {
    pub sweep_csv: PathBuf,
    pub params_csv: PathBuf,
    pub manifest_path: PathBuf,
    pub result: SweepResult,
}

/// Sweep-CSV column names per kind; part of the external contract.
pub fn sweep_columns(kind: SweepKind) -> &'static [&'static str] {
    match kind {
        SweepKind::Linear => &["alpha", "min_eigenvalue", "chi"],
        SweepKind::Cubic => &[
            "primary_param",
            "objective_variance",
            "xi",
            "chi",
            "phi",
            "beta",
            "g",
        ],
        SweepKind::Quartic => &[
            "primary_param",
            "objective_variance",
            "xi",
            "chi",
            "phi1",
            "omega",
            "phi2",
        ],
    }
}

fn params_columns(kind: SweepKind) -> Vec<&'static str> {
    let mut cols = vec![kind.primary_name()];
    cols.extend_from_slice(kind.param_names());
    cols
}

pub fn run_sweep(config: &SweepRunConfig) -> CliResult<SweepOutputs> {
    let started = Instant::now();
    std::fs::create_dir_all(&config.out_dir)
        .map_err(|e| config_err(format!("cannot create {}: {e}", config.out_dir.display())))?;

    let sweep_config = SweepConfig::new(config.dim, config.convention, config.n_starts, config.seed);
    let grid = config.grid();
    let result = sweep(config.kind, &grid, &sweep_config)
        .map_err(|e| numerical_err(format!("sweep failed: {e}")))?;

    let sweep_csv = config.out_dir.join(format!("sweep_{}.csv", config.kind));
    let params_csv = config.out_dir.join(format!("params_{}.csv", config.kind));
    let manifest_path = config.out_dir.join("manifest.json");

    let mut sweep_rows = Vec::with_capacity(result.points.len());
    let mut param_rows = Vec::with_capacity(result.points.len());
    for point in &result.points {
        let mut row = vec![fmt_f64(point.primary_param)];
        match config.kind {
            SweepKind::Linear => row.push(fmt_f64(point.objective)),
            _ => {
                row.push(fmt_f64(point.objective));
                row.push(fmt_f64(point.xi));
            }
        }
        row.extend(point.best_params.iter().map(|v| fmt_f64(*v)));
        sweep_rows.push(row);

        let mut prow = vec![fmt_f64(point.primary_param)];
        prow.extend(point.best_params.iter().map(|v| fmt_f64(*v)));
        param_rows.push(prow);
    }
    write_csv(&sweep_csv, sweep_columns(config.kind), &sweep_rows)
        .map_err(|e| config_err(format!("cannot write {}: {e}", sweep_csv.display())))?;
    write_csv(&params_csv, &params_columns(config.kind), &param_rows)
        .map_err(|e| config_err(format!("cannot write {}: {e}", params_csv.display())))?;

    let config_json = serde_json::to_value(config).expect("config serializes");
    let mut manifest = RunManifest::new(
        "sweep",
        config_json,
        config.convention.to_string(),
        config.seed,
        config.dim,
        &[],
    )?;
    manifest.timings.total_seconds = started.elapsed().as_secs_f64();
    manifest.diagnostics = json!({
        "per_point": result.points.iter().map(|p| json!({
            "primary_param": p.primary_param,
            "n_evals": p.n_evals,
            "rejected_starts": p.rejected_starts,
        })).collect::<Vec<_>>(),
        "failures": result.failures,
    });
    manifest.write(&manifest_path)?;

    Ok(SweepOutputs {
        sweep_csv,
        params_csv,
        manifest_path,
        result,
    })
}

pub struct McOutputs {
    pub csv_paths: Vec<PathBuf>,
    pub manifest_path: PathBuf,
    /// Per gamma, per grid point.
    pub stats: Vec<Vec<(f64, MCStats)>>,
}

pub const MC_COLUMNS: [&str; 7] = [
    "primary_param",
    "mean_xi",
    "sigma_plus",
    "sigma_minus",
    "n_plus",
    "n_minus",
    "failures",
];

/// Mean five-tuples for the Monte Carlo runs: either converted from a sweep
/// parameter CSV or a single inline tuple.
pub fn mc_mu_tuples(config: &McRunConfig) -> CliResult<Vec<(f64, [f64; 5])>> {
    if let Some(mu) = config.mu {
        return Ok(vec![(config.primary.unwrap(), mu)]);
    }
    let path = config.params_csv.as_ref().unwrap();
    let table = read_csv(path)?;
    let expect: Vec<&str> = match config.kind {
        McKind::Cubic => vec!["alpha", "chi", "phi", "beta", "g"],
        McKind::Quartic => vec!["r", "chi", "phi1", "omega", "phi2"],
    };
    if table.header != expect {
        return Err(config_err(format!(
            "{}: header {:?} does not match the {} parameter schema {:?}",
            path.display(),
            table.header,
            config.kind,
            expect
        )));
    }
    Ok(table
        .rows
        .iter()
        .map(|row| {
            let primary = row[0];
            let mu = match config.kind {
                McKind::Cubic => {
                    let p = cubic_state_params(row[0], row[1], row[2], row[3], row[4]);
                    [p.alpha, p.chi, p.phi, p.beta, p.r]
                }
                McKind::Quartic => {
                    let p = quartic_state_params(row[0], row[1], row[2], row[3], row[4]);
                    [p.r, p.chi, p.phi1, p.w, p.phi2]
                }
            };
            (primary, mu)
        })
        .collect())
}

pub fn run_mc(config: &McRunConfig) -> CliResult<McOutputs> {
    let started = Instant::now();
    std::fs::create_dir_all(&config.out_dir)
        .map_err(|e| config_err(format!("cannot create {}: {e}", config.out_dir.display())))?;
    let tuples = mc_mu_tuples(config)?;
    let mask = config.fixed_mask();

    let mut csv_paths = Vec::new();
    let mut all_stats = Vec::new();
    let mut diag_gammas = Vec::new();
    for (gi, &gamma) in config.gammas.iter().enumerate() {
        let mut rows = Vec::with_capacity(tuples.len());
        let mut gamma_stats = Vec::with_capacity(tuples.len());
        let mut diag_points = Vec::new();
        for (pi, (primary, mu)) in tuples.iter().enumerate() {
            let spec = FluctuationSpec {
                gamma,
                n_runs: config.n_runs,
                fixed_mask: mask,
                seed: derive_seed(config.seed, &[gi as u64, pi as u64]),
            };
            let stats = monte_carlo(config.kind, mu, &spec, config.dim, config.convention, false)
                .map_err(|e| {
                    numerical_err(format!(
                        "mc at {}={} gamma={}: {e}",
                        tuple_primary_name(config.kind),
                        primary,
                        gamma
                    ))
                })?;
            rows.push(vec![
                fmt_f64(*primary),
                fmt_f64(stats.mean_xi),
                fmt_f64(stats.sigma_plus),
                fmt_f64(stats.sigma_minus),
                stats.n_plus.to_string(),
                stats.n_minus.to_string(),
                stats.failures.to_string(),
            ]);
            diag_points.push(json!({
                "primary_param": primary,
                "failures": stats.failures,
                "clamped_runs": stats.clamped_runs,
            }));
            gamma_stats.push((*primary, stats));
        }
        let path = config
            .out_dir
            .join(format!("mc_{}_{}.csv", config.kind, gamma));
        write_csv(&path, &MC_COLUMNS, &rows)
            .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))?;
        csv_paths.push(path);
        all_stats.push(gamma_stats);
        diag_gammas.push(json!({ "gamma": gamma, "per_point": diag_points }));
    }

    let manifest_path = config.out_dir.join("manifest.json");
    let config_json = serde_json::to_value(config).expect("config serializes");
    let inputs: Vec<&Path> = config.params_csv.iter().map(|p| p.as_path()).collect();
    let mut manifest = RunManifest::new(
        "mc",
        config_json,
        config.convention.to_string(),
        config.seed,
        config.dim,
        &inputs,
    )?;
    manifest.timings.total_seconds = started.elapsed().as_secs_f64();
    manifest.diagnostics = json!({
        "fixed_mask": mask,
        "per_gamma": diag_gammas,
    });
    manifest.write(&manifest_path)?;

    Ok(McOutputs {
        csv_paths,
        manifest_path,
        stats: all_stats,
    })
}

fn tuple_primary_name(kind: McKind) -> &'static str {
    match kind {
        McKind::Cubic => "alpha",
        McKind::Quartic => "r",
    }
}

/// Baseline report with six significant digits.
pub fn baselines_report() -> String {
    let cubic = gaussian_baseline(Order::Cubic);
    let quartic = gaussian_baseline(Order::Quartic);
    format!(
        "cubic (n=3):   variance {:.6}  g {:.6}\n\
         quartic (n=4): variance {:.6}  g {:.6}  phi {:.6}\n",
        cubic.variance,
        cubic.g,
        quartic.variance,
        quartic.g,
        quartic.phi.unwrap_or(f64::NAN),
    )
}

/// Convert a sweep or Monte Carlo CSV into an SVG plot or a tidy long-form
/// CSV for external tooling.
pub fn run_plotdata(input: &Path, style: PlotStyle, output: &Path) -> CliResult<()> {
    let table: Table = read_csv(input)?;
    if table.header.len() < 2 {
        return Err(config_err(format!(
            "{}: need at least two columns to plot",
            input.display()
        )));
    }
    let bytes = match style {
        PlotStyle::Svg => render_svg(&table).into_bytes(),
        PlotStyle::Tidy => render_tidy(&table).into_bytes(),
    };
    crate::csvio::atomic_write(output, &bytes)
        .map_err(|e| config_err(format!("cannot write {}: {e}", output.display())))
}

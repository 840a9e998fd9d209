//! Run configurations: JSON config files, flag overrides, and defaulting.
//!
//! Resolution order is defaults, then config file keys, then command-line
//! flags; the fully resolved configuration is echoed into the manifest so
//! any output can be regenerated from it alone.

use std::path::{Path, PathBuf};

use kerrsqueeze::fock::KerrConvention;
use kerrsqueeze::optimize::SweepKind;
use kerrsqueeze::robustness::McKind;
use serde::{Deserialize, Serialize};

use crate::{config_err, CliResult};

/// Fully resolved sweep run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRunConfig {
    pub kind: SweepKind,
    pub grid_start: f64,
    pub grid_stop: f64,
    pub grid_points: usize,
    pub dim: usize,
    pub convention: KerrConvention,
    pub n_starts: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Partial sweep config as read from a file or assembled from flags.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOverrides {
    pub kind: Option<SweepKind>,
    pub grid_start: Option<f64>,
    pub grid_stop: Option<f64>,
    pub grid_points: Option<usize>,
    pub dim: Option<usize>,
    pub convention: Option<KerrConvention>,
    pub n_starts: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

impl SweepOverrides {
    fn merge(self, over: SweepOverrides) -> SweepOverrides {
        SweepOverrides {
            kind: over.kind.or(self.kind),
            grid_start: over.grid_start.or(self.grid_start),
            grid_stop: over.grid_stop.or(self.grid_stop),
            grid_points: over.grid_points.or(self.grid_points),
            dim: over.dim.or(self.dim),
            convention: over.convention.or(self.convention),
            n_starts: over.n_starts.or(self.n_starts),
            seed: over.seed.or(self.seed),
            out_dir: over.out_dir.or(self.out_dir),
        }
    }
}

/// Default sweep grids: the linear sweep over alpha in [0.1, 3], the cubic
/// sweep over alpha in [0.4, 5] (the low-alpha edge keeps xi_3 meaningfully
/// below one and the far end probes the large-energy region), and the
/// quartic sweep over r in [0.1, 1.2].
pub fn default_grid(kind: SweepKind) -> (f64, f64, usize) {
    match kind {
        SweepKind::Linear => (0.1, 3.0, 30),
        SweepKind::Cubic => (0.4, 5.0, 24),
        SweepKind::Quartic => (0.1, 1.2, 23),
    }
}

pub fn resolve_sweep(
    file: Option<&Path>,
    flags: SweepOverrides,
) -> CliResult<SweepRunConfig> {
    let from_file: SweepOverrides = match file {
        Some(path) => read_config_section(path)?,
        None => SweepOverrides::default(),
    };
    let merged = from_file.merge(flags);
    let kind = merged.kind.ok_or_else(|| config_err("sweep kind missing"))?;
    let (g0, g1, gn) = default_grid(kind);
    let config = SweepRunConfig {
        kind,
        grid_start: merged.grid_start.unwrap_or(g0),
        grid_stop: merged.grid_stop.unwrap_or(g1),
        grid_points: merged.grid_points.unwrap_or(gn),
        dim: merged.dim.unwrap_or(300),
        convention: merged.convention.unwrap_or_default(),
        n_starts: merged.n_starts.unwrap_or(300),
        seed: merged.seed.unwrap_or(1),
        out_dir: merged.out_dir.unwrap_or_else(|| PathBuf::from(".")),
    };
    if config.grid_points == 0 || config.grid_stop <= config.grid_start {
        return Err(config_err("sweep grid must be nonempty and increasing"));
    }
    if config.dim < 2 {
        return Err(config_err("dim must be at least 2"));
    }
    if config.n_starts == 0 {
        return Err(config_err("n_starts must be positive"));
    }
    Ok(config)
}

impl SweepRunConfig {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        if n == 1 {
            return vec![self.grid_start];
        }
        let step = (self.grid_stop - self.grid_start) / (n - 1) as f64;
        (0..n).map(|i| self.grid_start + step * i as f64).collect()
    }
}

/// Fully resolved Monte Carlo run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McRunConfig {
    pub kind: McKind,
    pub gammas: Vec<f64>,
    pub n_runs: usize,
    /// Names of parameters held at their optimal values.
    pub fixed: Vec<String>,
    pub dim: usize,
    pub convention: KerrConvention,
    pub seed: u64,
    /// Sweep parameter curves supplying the mean tuples.
    pub params_csv: Option<PathBuf>,
    /// Inline alternative: one mean tuple at one grid value.
    pub mu: Option<[f64; 5]>,
    pub primary: Option<f64>,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McOverrides {
    pub kind: Option<McKind>,
    pub gammas: Option<Vec<f64>>,
    pub n_runs: Option<usize>,
    pub fixed: Option<Vec<String>>,
    pub dim: Option<usize>,
    pub convention: Option<KerrConvention>,
    pub seed: Option<u64>,
    pub params_csv: Option<PathBuf>,
    pub mu: Option<[f64; 5]>,
    pub primary: Option<f64>,
    pub out_dir: Option<PathBuf>,
}

impl McOverrides {
    fn merge(self, over: McOverrides) -> McOverrides {
        McOverrides {
            kind: over.kind.or(self.kind),
            gammas: over.gammas.or(self.gammas),
            n_runs: over.n_runs.or(self.n_runs),
            fixed: over.fixed.or(self.fixed),
            dim: over.dim.or(self.dim),
            convention: over.convention.or(self.convention),
            seed: over.seed.or(self.seed),
            params_csv: over.params_csv.or(self.params_csv),
            mu: over.mu.or(self.mu),
            primary: over.primary.or(self.primary),
            out_dir: over.out_dir.or(self.out_dir),
        }
    }
}

/// Parameter names of the five-tuples, used to express fixed masks.
pub fn tuple_names(kind: McKind) -> [&'static str; 5] {
    match kind {
        McKind::Cubic => ["alpha", "chi", "phi", "beta", "r"],
        McKind::Quartic => ["r", "chi", "phi1", "w", "phi2"],
    }
}

pub fn resolve_mc(file: Option<&Path>, flags: McOverrides) -> CliResult<McRunConfig> {
    let from_file: McOverrides = match file {
        Some(path) => read_config_section(path)?,
        None => McOverrides::default(),
    };
    let merged = from_file.merge(flags);
    let kind = merged.kind.ok_or_else(|| config_err("mc kind missing"))?;
    let config = McRunConfig {
        kind,
        gammas: merged.gammas.unwrap_or_else(|| vec![0.01, 0.05]),
        n_runs: merged.n_runs.unwrap_or(10_000),
        fixed: merged.fixed.unwrap_or_default(),
        dim: merged.dim.unwrap_or(300),
        convention: merged.convention.unwrap_or_default(),
        seed: merged.seed.unwrap_or(1),
        params_csv: merged.params_csv,
        mu: merged.mu,
        primary: merged.primary,
        out_dir: merged.out_dir.unwrap_or_else(|| PathBuf::from(".")),
    };
    if config.params_csv.is_none() && config.mu.is_none() {
        return Err(config_err(
            "mc needs either a sweep params CSV (params_csv) or an inline mu tuple",
        ));
    }
    if config.mu.is_some() && config.primary.is_none() {
        return Err(config_err("inline mu also needs the grid value (primary)"));
    }
    if config.n_runs == 0 {
        return Err(config_err("n_runs must be positive"));
    }
    let names = tuple_names(kind);
    for name in &config.fixed {
        if !names.contains(&name.as_str()) {
            return Err(config_err(format!(
                "unknown fixed parameter {name:?}; {kind:?} tuple is {names:?}"
            )));
        }
    }
    if config.gammas.iter().any(|g| *g < 0.0 || !g.is_finite()) {
        return Err(config_err("gammas must be finite and nonnegative"));
    }
    Ok(config)
}

impl McRunConfig {
    pub fn fixed_mask(&self) -> [bool; 5] {
        let names = tuple_names(self.kind);
        let mut mask = [false; 5];
        for (i, name) in names.iter().enumerate() {
            mask[i] = self.fixed.iter().any(|f| f == name);
        }
        mask
    }
}

/// Read one command's section from a config file. Accepts either a bare
/// config object or a full manifest (the object under its "config" key), so
/// a recorded manifest replays directly.
fn read_config_section<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| config_err(format!("{} is not valid JSON: {e}", path.display())))?;
    let section = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(section)
        .map_err(|e| config_err(format!("{}: unexpected config: {e}", path.display())))
}

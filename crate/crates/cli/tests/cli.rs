//! End-to-end checks of the command layer: schema stability, byte-identical
//! replay, config resolution, plot-data round trips, and exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

use kerrsqueeze::optimize::SweepKind;
use kerrsqueeze_cli::commands::{
    mc_mu_tuples, run_mc, run_plotdata, run_sweep, sweep_columns, MC_COLUMNS,
};
use kerrsqueeze_cli::config::{
    resolve_mc, resolve_sweep, McOverrides, SweepOverrides, SweepRunConfig,
};
use kerrsqueeze_cli::csvio::read_csv;
use kerrsqueeze_cli::plot::PlotStyle;

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kerrsq-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn small_sweep_config(kind: SweepKind, out: &Path) -> SweepRunConfig {
    let flags = SweepOverrides {
        kind: Some(kind),
        grid_start: Some(0.6),
        grid_stop: Some(1.4),
        grid_points: Some(3),
        dim: Some(48),
        n_starts: Some(5),
        seed: Some(11),
        out_dir: Some(out.to_path_buf()),
        ..Default::default()
    };
    resolve_sweep(None, flags).unwrap()
}

#[test]
fn sweep_csv_schema_and_replay() {
    let dir = tmpdir("sweep");
    let config = small_sweep_config(SweepKind::Cubic, &dir.join("a"));
    let out_a = run_sweep(&config).unwrap();
    assert!(out_a.result.failures.is_empty());

    let table = read_csv(&out_a.sweep_csv).unwrap();
    assert_eq!(
        table.header,
        sweep_columns(SweepKind::Cubic)
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
    );
    assert_eq!(table.rows.len(), 3);
    let alphas = table.column("primary_param").unwrap();
    assert!(alphas.windows(2).all(|w| w[0] < w[1]));

    // replay from the recorded manifest must reproduce the CSV bytes
    let replay_config = resolve_sweep(
        Some(&out_a.manifest_path),
        SweepOverrides {
            out_dir: Some(dir.join("b")),
            ..Default::default()
        },
    )
    .unwrap();
    let out_b = run_sweep(&replay_config).unwrap();
    let bytes_a = std::fs::read(&out_a.sweep_csv).unwrap();
    let bytes_b = std::fs::read(&out_b.sweep_csv).unwrap();
    assert_eq!(bytes_a, bytes_b);
    let params_a = std::fs::read(&out_a.params_csv).unwrap();
    let params_b = std::fs::read(&out_b.params_csv).unwrap();
    assert_eq!(params_a, params_b);
}

#[test]
fn mc_gamma_zero_equals_sweep_xi() {
    let dir = tmpdir("mc");
    let config = small_sweep_config(SweepKind::Cubic, &dir);
    let sweep_out = run_sweep(&config).unwrap();

    let mc_config = resolve_mc(
        None,
        McOverrides {
            kind: Some(kerrsqueeze::robustness::McKind::Cubic),
            gammas: Some(vec![0.0, 0.01]),
            n_runs: Some(40),
            fixed: Some(vec!["alpha".into()]),
            dim: Some(48),
            seed: Some(3),
            params_csv: Some(sweep_out.params_csv.clone()),
            out_dir: Some(dir.clone()),
            ..Default::default()
        },
    )
    .unwrap();
    let mc_out = run_mc(&mc_config).unwrap();
    // one file per gamma, and the fixed mask lands in the manifest
    assert_eq!(mc_out.csv_paths.len(), 2);
    assert!(mc_out.csv_paths[0].ends_with("mc_cubic_0.csv"));
    assert!(mc_out.csv_paths[1].ends_with("mc_cubic_0.01.csv"));
    let manifest_text = std::fs::read_to_string(&mc_out.manifest_path).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(&manifest_text).unwrap();
    assert_eq!(
        manifest["diagnostics"]["fixed_mask"],
        serde_json::json!([true, false, false, false, false])
    );
    let mc_table = read_csv(&mc_out.csv_paths[0]).unwrap();
    assert_eq!(
        mc_table.header,
        MC_COLUMNS.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    );
    let means = mc_table.column("mean_xi").unwrap();
    let sweep_table = read_csv(&sweep_out.sweep_csv).unwrap();
    let xis = sweep_table.column("xi").unwrap();
    for (m, x) in means.iter().zip(&xis) {
        assert!((m - x).abs() < 1e-9, "mc {} vs sweep {}", m, x);
    }
    let sp = mc_table.column("sigma_plus").unwrap();
    let sm = mc_table.column("sigma_minus").unwrap();
    assert!(sp.iter().chain(sm.iter()).all(|v| *v == 0.0));
}

#[test]
fn mc_requires_input_and_validates_names() {
    let err = resolve_mc(
        None,
        McOverrides {
            kind: Some(kerrsqueeze::robustness::McKind::Cubic),
            ..Default::default()
        },
    )
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);

    let err = resolve_mc(
        None,
        McOverrides {
            kind: Some(kerrsqueeze::robustness::McKind::Quartic),
            params_csv: Some(PathBuf::from("/nonexistent.csv")),
            fixed: Some(vec!["alpha".into()]), // cubic name, not quartic
            ..Default::default()
        },
    )
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn mc_rejects_mismatched_params_schema() {
    let dir = tmpdir("schema");
    let config = small_sweep_config(SweepKind::Cubic, &dir);
    let sweep_out = run_sweep(&config).unwrap();
    let mc_config = resolve_mc(
        None,
        McOverrides {
            kind: Some(kerrsqueeze::robustness::McKind::Quartic),
            params_csv: Some(sweep_out.params_csv.clone()),
            dim: Some(48),
            out_dir: Some(dir.clone()),
            ..Default::default()
        },
    )
    .unwrap();
    let err = mc_mu_tuples(&mc_config).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn plotdata_renders_lines_bands_and_tidy() {
    let dir = tmpdir("plot");
    let config = small_sweep_config(SweepKind::Linear, &dir);
    let sweep_out = run_sweep(&config).unwrap();

    let svg_path = dir.join("sweep.svg");
    run_plotdata(&sweep_out.sweep_csv, PlotStyle::Svg, &svg_path).unwrap();
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    // one polyline per non-x column
    assert_eq!(svg.matches("<polyline").count(), 2);

    let tidy_path = dir.join("sweep_tidy.csv");
    run_plotdata(&sweep_out.sweep_csv, PlotStyle::Tidy, &tidy_path).unwrap();
    let tidy = std::fs::read_to_string(&tidy_path).unwrap();
    let mut lines = tidy.lines();
    assert_eq!(lines.next(), Some("series,x,y"));
    // one row per (series, grid point): two series, three points
    assert_eq!(lines.filter(|l| !l.is_empty()).count(), 6);

    // a Monte Carlo CSV gets the band between mean - sigma_minus and
    // mean + sigma_plus
    let mc_csv = dir.join("mc_fake.csv");
    std::fs::write(
        &mc_csv,
        "primary_param,mean_xi,sigma_plus,sigma_minus,n_plus,n_minus,failures\n\
         1.0,0.8,0.1,0.05,40,60,0\n\
         2.0,0.7,0.2,0.04,45,55,0\n",
    )
    .unwrap();
    let band_path = dir.join("mc.svg");
    run_plotdata(&mc_csv, PlotStyle::Svg, &band_path).unwrap();
    let band_svg = std::fs::read_to_string(&band_path).unwrap();
    assert_eq!(band_svg.matches("<polygon").count(), 1);
    assert_eq!(band_svg.matches("<polyline").count(), 1);
}

#[test]
fn plotdata_errors_on_empty_input() {
    let dir = tmpdir("plot-empty");
    let empty = dir.join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let err = run_plotdata(&empty, PlotStyle::Svg, &dir.join("out.svg")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    std::fs::write(&empty, "a,b\n1.0,not_a_number\n").unwrap();
    let err = run_plotdata(&empty, PlotStyle::Svg, &dir.join("out.svg")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn binary_end_to_end_byte_identical() {
    let exe = env!("CARGO_BIN_EXE_kerrsqueeze");
    let dir = tmpdir("bin");
    for sub in ["x", "y"] {
        let status = Command::new(exe)
            .args([
                "sweep",
                "--kind",
                "linear",
                "--grid-start",
                "0.5",
                "--grid-stop",
                "1.5",
                "--grid-points",
                "3",
                "--dim",
                "48",
                "--n-starts",
                "4",
                "--seed",
                "5",
                "--out-dir",
            ])
            .arg(dir.join(sub))
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(dir.join("x/sweep_linear.csv")).unwrap();
    let b = std::fs::read(dir.join("y/sweep_linear.csv")).unwrap();
    assert_eq!(a, b);

    // config errors exit with code 2
    let status = Command::new(exe)
        .args(["sweep", "--kind", "cubic", "--grid-points", "0"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // numerical failures exit with code 3: a quartic grid whose squeezing
    // overflows the truncation guard at this dimension
    let status = Command::new(exe)
        .args([
            "sweep",
            "--kind",
            "quartic",
            "--grid-start",
            "1.8",
            "--grid-stop",
            "2.2",
            "--grid-points",
            "2",
            "--dim",
            "48",
            "--n-starts",
            "2",
            "--out-dir",
        ])
        .arg(dir.join("overflow"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    // the thread cap is honored without changing results
    let out_t1 = Command::new(exe)
        .env("KERRSQUEEZE_THREADS", "1")
        .args([
            "sweep", "--kind", "linear", "--grid-start", "0.5", "--grid-stop", "1.5",
            "--grid-points", "3", "--dim", "48", "--n-starts", "4", "--seed", "5", "--out-dir",
        ])
        .arg(dir.join("t1"))
        .status()
        .unwrap();
    assert!(out_t1.success());
    let c = std::fs::read(dir.join("t1/sweep_linear.csv")).unwrap();
    assert_eq!(a, c);

    let report = Command::new(exe).arg("baselines").output().unwrap();
    assert!(report.status.success());
    let text = String::from_utf8(report.stdout).unwrap();
    assert!(text.contains("0.944941"));
    assert!(text.contains("0.970984"));
    assert!(text.contains("-0.636834"));
}

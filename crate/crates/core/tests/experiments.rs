//! Grid runs, CSV files and plot series.

use qkd_recon::experiment::{
    build_series, csv_bytes, emit_plotdata, read_csv, run, write_csv, ExperimentConfig, Figure, CSV_HEADER,
};
use qkd_recon::metrics::secret_info_bound;

fn small(p_grid: Vec<f64>, s_grid: Vec<f64>, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        n_qubits: 10_000,
        p_grid,
        s_grid,
        trials,
        ..ExperimentConfig::default()
    }
}

#[test]
fn full_interception_gives_quarter_qber() {
    let cfg = ExperimentConfig {
        n_qubits: 100_000,
        ..small(vec![0.0], vec![1.0], 4)
    };
    let out = run(&cfg).unwrap();
    let mean = out.rows.iter().map(|r| r.qber_pre).sum::<f64>() / out.rows.len() as f64;
    assert!((mean - 0.25).abs() <= 0.01, "mean qber_pre {mean}");
}

#[test]
fn noiseless_grid_is_error_free_for_every_preset() {
    for preset in ["ldpc1", "turbo1"] {
        let cfg = ExperimentConfig {
            codec_preset: preset.into(),
            ..small(vec![0.0], vec![0.0], 2)
        };
        for r in run(&cfg).unwrap().rows {
            assert_eq!((r.qber_pre, r.qber_post), (0.0, 0.0), "{preset}");
        }
    }
}

#[test]
fn rerun_is_byte_identical_and_reads_back() {
    let cfg = small(vec![0.04, 0.08], vec![0.0, 0.3], 3);
    let a = csv_bytes(&run(&cfg).unwrap().rows).unwrap();
    let b = csv_bytes(&run(&cfg).unwrap().rows).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert!(!text.contains('\r'));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let rows = run(&cfg).unwrap().rows;
    write_csv(&rows, &path).unwrap();
    assert_eq!(read_csv(&path).unwrap(), rows);
}

#[test]
fn secret_series_at_zero_p_follows_quarter_s() {
    let cfg = small(vec![0.0], vec![0.0, 0.4, 0.8], 2);
    let rows = run(&cfg).unwrap().rows;
    let series = build_series(&rows, Figure::Fig7).unwrap();
    assert_eq!(series.len(), 1);
    for r in &series[0].rows {
        assert_eq!(r[3], secret_info_bound(r[0] / 4.0).unwrap());
    }
}

#[test]
fn plot_files_one_per_s() {
    let cfg = small(vec![0.02, 0.06], vec![0.0, 0.5], 1);
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    write_csv(&run(&cfg).unwrap().rows, &csv).unwrap();
    let files = emit_plotdata(&[csv], Figure::Fig4, &dir.path().join("plots")).unwrap();
    assert_eq!(files.len(), 2);
    let body = std::fs::read_to_string(&files[0]).unwrap();
    assert_eq!(body.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn empty_csv_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    std::fs::write(&csv, format!("{}\n", CSV_HEADER.join(","))).unwrap();
    assert!(emit_plotdata(&[csv], Figure::Fig5, dir.path()).is_err());
}

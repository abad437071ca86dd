//! End-to-end pipeline checks at small scale: file artifacts, the
//! trajectory-comparison statistics, and the metrics re-reader.

use expcli::config::{ExperimentConfig, ModelChoice};
use expcli::output::read_emissions_csv;
use expcli::pipelines::{run_fig1, run_metrics, run_single};

fn cfg(out: &str) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.params.seed = 3;
    cfg.params.steps = 40_000;
    cfg.params.n_traj = 60;
    cfg.max_lag = 60;
    cfg.output_dir = std::env::temp_dir().join("trajlab-smoke").join(out);
    cfg
}

#[test]
fn fig1_statistics_and_baselines() {
    let cfg = cfg("fig1");
    let stats = run_fig1(&cfg).unwrap();

    for row in &stats.rows {
        if row.coupling == 0.0 {
            // Independent equal-rate channels track the diagonal.
            assert!(
                (row.count_slope - 1.0).abs() <= 0.1,
                "{} slope {} outside 1.0 +- 0.1",
                row.model,
                row.count_slope
            );
        }
    }
    // Strong coupling suppresses the classical event count for the same
    // seeds.
    let total = |model: &str, coupling: f64| {
        stats
            .rows
            .iter()
            .find(|r| r.model == model && r.coupling == coupling)
            .unwrap()
            .mean_total_events
    };
    assert!(total("classical", 3.0) < total("classical", 0.0));
    assert!(total("quantum", 3.0) < total("quantum", 0.0));

    // The zero-coupling correlation rows are their own baseline, so every
    // delta column is exactly zero.
    for model in ["quantum", "classical"] {
        let path = cfg.output_dir.join(format!("fig1_corr_{model}_J0.csv"));
        let text = std::fs::read_to_string(path).unwrap();
        for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(&fields[5..8], &["0", "0", "0"], "nonzero delta at J = 0");
        }
    }
}

#[test]
fn simulate_then_metrics_round_trip() {
    let mut cfg = cfg("roundtrip");
    cfg.params.n_traj = 1;
    cfg.params.steps = 20_000;
    cfg.model = ModelChoice::Quantum;
    run_single(&cfg).unwrap();

    let emissions = cfg.output_dir.join("emissions_quantum_traj000.csv");
    let (r1, r2, dt) = read_emissions_csv(&emissions).unwrap();
    assert_eq!(r1.len(), cfg.params.steps);
    assert_eq!(r2.len(), cfg.params.steps);
    assert!((dt - cfg.params.dt).abs() < 1e-12);

    let report = run_metrics(&cfg, &emissions).unwrap();
    assert_eq!(report.steps, cfg.params.steps);
    assert_eq!(report.analyzed_steps, cfg.params.steps - cfg.transient_start());
    assert!(report.events_r1 > 0);
    assert!(report.lz_joint >= report.lz_r1.max(report.lz_r2));
    assert!(report.normalized_lz_joint > 0.0 && report.normalized_lz_joint < 1.0);
}

#[test]
fn dark_drive_produces_empty_records_and_floor_complexity() {
    let mut cfg = cfg("dark");
    cfg.params.omega = 0.0;
    cfg.params.n_traj = 1;
    cfg.params.steps = 10_000;
    cfg.model = ModelChoice::Classical;
    run_single(&cfg).unwrap();
    let emissions = cfg.output_dir.join("emissions_classical_traj000.csv");
    let (r1, r2, _) = read_emissions_csv(&emissions).unwrap();
    assert!(r1.iter().all(|&b| b == 0) && r2.iter().all(|&b| b == 0));

    // Constant joint sequence parses into the two-phrase floor.
    let report = run_metrics(&cfg, &emissions).unwrap();
    assert_eq!(report.lz_joint, 2.0);
}

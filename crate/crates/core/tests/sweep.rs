use std::fs;
use std::path::Path;

use coboson::coboson::profile_from_ground_state;
use coboson::eigen::{ground_state, SolverOptions};
use coboson::experiments::{csv, run_sweep, GraphSpec, Measure, SweepConfig};
use coboson::graph::{Boundary, Family};
use coboson::hamiltonian::build_h1;

fn small_config(out: &Path) -> SweepConfig {
    SweepConfig::from_toml_str(&format!(
        r#"
        name = "small"
        pairs = [2, 3]
        out = "{}"
        workers = 2

        [[family]]
        name = "chain"
        boundary = ["open", "closed"]
        sizes = [6, 9, 12]

        [[family]]
        name = "sierpinski"
        boundary = ["open", "closed"]
        sizes = [1, 2]

        [[family]]
        name = "vicsek"
        nu = 3
        sizes = [1, 2]

        [[family]]
        name = "square"
        sizes = [3, 4]
        "#,
        out.display()
    ))
    .unwrap()
}

fn data_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn without_timestamp(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("# created_unix="))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn repeated_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut a = small_config(&dir.path().join("a"));
    let report = run_sweep(&a, false).unwrap();
    assert!(report.is_success());
    assert_eq!(report.total, 2 * (6 + 4 + 2 + 2));
    a.out_dir = dir.path().join("b");
    a.workers = 1;
    run_sweep(&a, false).unwrap();
    assert_eq!(
        without_timestamp(&dir.path().join("a/small.csv")),
        without_timestamp(&dir.path().join("b/small.csv"))
    );
    let lines = data_lines(&dir.path().join("a/small.csv"));
    assert_eq!(lines[0], csv::header_line(csv::FIDELITY_COLUMNS));
    assert_eq!(lines.len(), 1 + report.total);
}

#[test]
fn resume_after_interruption_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let full = small_config(&dir.path().join("full"));
    run_sweep(&full, false).unwrap();
    let reference = fs::read_to_string(full.output_path()).unwrap();

    // Keep the comment header, column header, seven rows and half a row.
    let mut partial = String::new();
    let mut data = 0;
    for line in reference.lines() {
        if line.starts_with('#') || line.starts_with("schema_version") {
            partial.push_str(line);
            partial.push('\n');
        } else if data < 7 {
            partial.push_str(line);
            partial.push('\n');
            data += 1;
        } else {
            partial.push_str(&line[..line.len() / 2]);
            break;
        }
    }
    let resumed = SweepConfig {
        out_dir: dir.path().join("resumed"),
        workers: 1,
        ..full.clone()
    };
    fs::create_dir_all(&resumed.out_dir).unwrap();
    fs::write(resumed.output_path(), partial).unwrap();
    let report = run_sweep(&resumed, true).unwrap();
    assert_eq!(report.reused, 7);
    assert_eq!(report.computed, report.total - 7);
    assert_eq!(
        data_lines(&resumed.output_path()),
        data_lines(&full.output_path())
    );

    // Resuming a finished file recomputes nothing.
    let again = run_sweep(&resumed, true).unwrap();
    assert_eq!(again.reused, again.total);
    assert_eq!(
        data_lines(&resumed.output_path()),
        data_lines(&full.output_path())
    );
}

#[test]
fn resume_ignores_rows_from_another_model() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    run_sweep(&cfg, false).unwrap();
    let hard = SweepConfig {
        nn_repulsion: false,
        ..cfg.clone()
    };
    let report = run_sweep(&hard, true).unwrap();
    assert_eq!(report.reused, 0);
    assert!(data_lines(&hard.output_path())[1..]
        .iter()
        .all(|l| l.split(',').nth(7) == Some("false")));
}

#[test]
fn partial_node_profile_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SweepConfig {
        name: "nodes".into(),
        measure: Measure::NodeProfile,
        out_dir: dir.path().to_path_buf(),
        families: vec![coboson::experiments::FamilySweep {
            family: Family::SierpinskiGasket,
            boundaries: vec![Boundary::Open],
            nu: None,
            sizes: vec![2, 3],
        }],
        ..SweepConfig::default()
    };
    run_sweep(&cfg, false).unwrap();
    let reference = data_lines(&cfg.output_path());
    assert_eq!(reference.len(), 1 + 15 + 42);
    let truncated: Vec<String> = reference[..1 + 20].to_vec();
    fs::write(cfg.output_path(), truncated.join("\n") + "\n").unwrap();
    let report = run_sweep(&cfg, true).unwrap();
    assert_eq!((report.reused, report.computed), (1, 1));
    assert_eq!(data_lines(&cfg.output_path()), reference);
}

#[test]
fn stored_effective_size_matches_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    for measure in [Measure::Fidelity, Measure::EffectiveSize] {
        let cfg = SweepConfig {
            measure,
            name: measure.to_string(),
            ..small_config(dir.path())
        };
        run_sweep(&cfg, false).unwrap();
        let cols = measure.columns();
        let idx = |n| csv::column(cols, n).unwrap();
        for line in &data_lines(&cfg.output_path())[1..] {
            let f: Vec<&str> = line.split(',').collect();
            let nu = (!f[idx("nu")].is_empty()).then(|| f[idx("nu")].parse().unwrap());
            let spec = GraphSpec::from_size(
                f[idx("family")].parse().unwrap(),
                f[idx("size")].parse().unwrap(),
                f[idx("boundary")].parse().unwrap(),
                nu,
            );
            let g = spec.build().unwrap();
            assert_eq!(g.num_nodes().to_string(), f[idx("M")]);
            let gs = ground_state(&build_h1(&g).unwrap(), &SolverOptions::default()).unwrap();
            let purity: f64 = gs.amplitudes.iter().map(|c| c.powi(4)).sum();
            let p = profile_from_ground_state(&gs.amplitudes).unwrap();
            let stored: f64 = f[idx("S")].parse().unwrap();
            assert!((stored - 1.0 / purity).abs() < 1e-9, "{line}");
            assert!((stored - p.effective_size).abs() < 1e-9);
        }
    }
}

#[test]
fn failing_instances_are_reported_and_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SweepConfig::from_toml_str(&format!(
        r#"
        name = "fails"
        tol = 1e-300
        max_iter = 60
        out = "{}"

        [[family]]
        name = "complete"
        sizes = [4]

        [[family]]
        name = "chain"
        sizes = [12]
        "#,
        dir.path().display()
    ))
    .unwrap();
    let report = run_sweep(&cfg, false).unwrap();
    assert!(!report.is_success());
    assert_eq!(report.failures.len(), 1);
    assert!(
        report.failures[0].contains("chain"),
        "{:?}",
        report.failures
    );
    assert_eq!(data_lines(&cfg.output_path()).len(), 2);
}

#[test]
fn path_length_sweep_writes_fits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SweepConfig::from_toml_str(&format!(
        r#"
        name = "paths"
        measure = "path_length"
        out = "{}"

        [[family]]
        name = "chain"
        sizes = [10, 20, 40, 80]

        [[family]]
        name = "vicsek"
        nu = 3
        sizes = [2, 3, 4]
        "#,
        dir.path().display()
    ))
    .unwrap();
    let report = run_sweep(&cfg, false).unwrap();
    let fits = data_lines(report.fit_path.as_ref().unwrap());
    assert_eq!(fits[0], csv::header_line(csv::FIT_COLUMNS));
    assert_eq!(fits.len(), 3);
    let alpha: f64 = fits[1].split(',').nth(4).unwrap().parse().unwrap();
    assert!((alpha - 1.0).abs() < 0.05);
    assert!(fits[2].starts_with("1,vicsek,open,3,"));
}

#[test]
fn mismatched_header_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    fs::write(cfg.output_path(), "a,b,c\n1,2,3\n").unwrap();
    assert!(matches!(
        run_sweep(&cfg, true),
        Err(coboson::Error::Config(_))
    ));
    // Without --resume the file is simply replaced.
    assert!(run_sweep(&cfg, false).unwrap().is_success());
}

use std::fs;
use std::path::Path;
use std::process::{Command, Stdio};

use moaccel::TerminationReason;
use moaccel_bench::{execute, run_experiment, ExperimentConfig, RunSettings};

fn parse(text: &str) -> ExperimentConfig {
    let cfg = ExperimentConfig::from_json(text, Path::new("inline")).unwrap();
    cfg.validate().unwrap();
    cfg
}

const CONSTANT: &str = r#"{
    "name": "constant",
    "problem": {"kind": "constant", "dim": 2, "levels": [1.0, 2.0]},
    "solvers": [
        {"method": "sd", "step_size": 0.1, "max_iters": 50, "tol": 1e-4},
        {"method": "accg", "step_size": 0.1, "max_iters": 50, "tol": 1e-4},
        {"method": "accg_noq", "step_size": 0.1, "max_iters": 50, "tol": 1e-4},
        {"method": "inertial", "step_size": 0.01, "alpha": 1.0, "h": 0.1, "max_iters": 50, "tol": 1e-4}
    ],
    "starts": {"kind": "explicit", "points": [[0.0, 0.0], [3.0, -1.0]]},
    "outputs": {"energy": true}
}"#;

#[test]
fn constant_objectives_give_two_row_traces() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = parse(CONSTANT);
    let settings = RunSettings {
        out_dir: Some(tmp.path().to_path_buf()),
        threads: 2,
    };
    let (_, summary) = run_experiment(&cfg, &settings).unwrap();
    assert_eq!(summary.rows.len(), 8);
    for row in &summary.rows {
        assert_eq!(row.termination, TerminationReason::TolMet);
        assert_eq!(row.iterations, 2);
        let csv = fs::read_to_string(
            tmp.path()
                .join("traces")
                .join(&row.solver)
                .join(format!("start_{:04}.csv", row.start_id)),
        )
        .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "k,f_1,f_2,step_size,kkt_residual,energy_1,energy_2,x_1,x_2"
        );
        assert_eq!(lines.len(), 3);
    }
}

#[test]
fn totals_are_sums_of_rows() {
    let cfg = parse(
        r#"{
        "problem": {"kind": "witting", "lambda": 0.6},
        "solvers": [
            {"method": "sd", "step_size": 0.005, "max_iters": 300, "tol": 1e-4},
            {"method": "accg", "step_size": 0.005, "max_iters": 300, "tol": 1e-4}
        ],
        "starts": {"kind": "box", "count": 12, "low": -2, "high": 2, "seed": 3}
    }"#,
    );
    let summary = execute(&cfg, 0).unwrap().summary;
    for t in &summary.totals {
        let rows: Vec<_> = summary
            .rows
            .iter()
            .filter(|r| r.solver == t.solver)
            .collect();
        assert_eq!(t.runs, 12);
        assert_eq!(
            t.total_iterations,
            rows.iter().map(|r| r.iterations).sum::<usize>()
        );
        assert!(rows.iter().all(|r| r.iterations <= 300));
        assert!(rows.iter().all(|r| r.final_pareto_distance.is_some()));
    }
}

#[test]
fn wide_problems_omit_coordinates_and_respect_thinning() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = parse(
        r#"{
        "problem": {"kind": "logsumexp", "n": 20, "m": 3, "p": 50, "seed": 1},
        "solvers": [{"method": "accg", "step_size": 0.05, "max_iters": 25, "tol": 0}],
        "starts": {"kind": "box", "count": 1, "low": -15, "high": 15, "seed": 7},
        "outputs": {"thin": 10, "plot_data": true}
    }"#,
    );
    let settings = RunSettings {
        out_dir: Some(tmp.path().to_path_buf()),
        threads: 1,
    };
    run_experiment(&cfg, &settings).unwrap();
    let csv = fs::read_to_string(tmp.path().join("traces/accg/start_0000.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,f_1,f_2,f_3,step_size,kkt_residual");
    let ks: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ks, ["1", "11", "21", "25"]);

    let paths = fs::read_to_string(tmp.path().join("plot/iterate_paths.csv")).unwrap();
    assert_eq!(paths, "figure_id,series,k,value\n");
    let curves = fs::read_to_string(tmp.path().join("plot/value_curves.csv")).unwrap();
    assert_eq!(curves.lines().count(), 1 + 25 * 3);
    let scatter = fs::read_to_string(tmp.path().join("plot/image_scatter.csv")).unwrap();
    assert!(scatter
        .lines()
        .skip(1)
        .all(|l| l.starts_with("image_scatter,accg/f_")));
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_moaccel"));
    cmd.stdout(Stdio::null()).stderr(Stdio::null());
    cmd
}

#[test]
fn cli_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good.json");
    fs::write(&good, CONSTANT).unwrap();
    let out = tmp.path().join("out");

    let status = bin().arg("validate").arg(&good).status().unwrap();
    assert_eq!(status.code(), Some(0));

    let status = bin()
        .arg("run")
        .arg(&good)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("summary.json").is_file());

    let bad = tmp.path().join("bad.json");
    fs::write(
        &bad,
        CONSTANT.replace("\"max_iters\": 50", "\"max_iters\": 0"),
    )
    .unwrap();
    assert_eq!(
        bin().arg("validate").arg(&bad).status().unwrap().code(),
        Some(1)
    );
    assert_eq!(
        bin()
            .arg("run")
            .arg(tmp.path().join("missing.json"))
            .status()
            .unwrap()
            .code(),
        Some(1)
    );

    // the quadratic overflows at this start, so every row fails
    let overflow = tmp.path().join("overflow.json");
    fs::write(
        &overflow,
        r#"{
        "problem": {"kind": "quadratic", "anchors": [[0.0], [1.0]]},
        "solvers": [{"method": "sd", "step_size": 0.5, "max_iters": 10, "tol": 0}],
        "starts": {"kind": "explicit", "points": [[1e300], [0.5]]}
    }"#,
    )
    .unwrap();
    let status = bin()
        .arg("run")
        .arg(&overflow)
        .arg("--out")
        .arg(tmp.path().join("overflow"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn seed_flag_changes_box_starts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{
        "problem": {"kind": "witting", "lambda": 0.6},
        "solvers": [{"method": "sd", "step_size": 0.005, "max_iters": 5, "tol": 0}],
        "starts": {"kind": "box", "count": 1, "low": -2, "high": 2, "seed": 1}
    }"#,
    )
    .unwrap();
    let mut traces = Vec::new();
    for seed in ["1", "2"] {
        let out = tmp.path().join(seed);
        let status = bin()
            .args([
                "run",
                cfg.to_str().unwrap(),
                "--seed",
                seed,
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        traces.push(fs::read_to_string(out.join("traces/sd/start_0000.csv")).unwrap());
    }
    assert_ne!(traces[0], traces[1]);
}

#[test]
fn oracle_subcommand_passes() {
    let status = bin()
        .args(["oracle", "--cases", "30", "--resolution", "0.01"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}

use clap::Parser;
use convert_bw::cli::{main_with_args, run, Cli};

fn outcome(args: &[&str]) -> convert_bw::cli::Outcome {
    let cli = Cli::try_parse_from(std::iter::once("convert-bw").chain(args.iter().copied())).unwrap();
    run(&cli).unwrap()
}

fn code(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("convert-bw").chain(args.iter().copied()))
}

#[test]
fn bound_json_is_exact() {
    let out = outcome(&[
        "bound", "--lf", "2", "--kf", "4", "--rf", "3", "--ri", "5", "--alpha", "7",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out.text).unwrap();
    assert_eq!(doc["value"], serde_json::json!({"num": 46, "den": 1}));
    assert_eq!(doc["regime"], "rf<ri<=ki,ri%kf<rf");
    assert_eq!(out.code, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        code(&["bound", "--lf", "1", "--kf", "2", "--rf", "1", "--ri", "1", "--alpha", "1"]),
        2
    );
    assert_eq!(code(&["bound", "--lf", "2"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(
        code(&[
            "sweep",
            "--lf",
            "2..=5",
            "--kf",
            "1..=8",
            "--rf",
            "1..=8",
            "--max-rows",
            "10"
        ]),
        2
    );
    assert_eq!(
        code(&["simulate", "--lf", "2", "--kf", "2", "--rf", "1", "--ri", "1", "--alpha", "1"]),
        2
    );
}

#[test]
fn out_file_matches_stdout_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let args = ["sweep", "--lf", "2", "--kf", "4", "--rf", "2", "--format", "csv"];
    let text = outcome(&args).text;
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    assert_eq!(code(&with_out), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "lf,kf,rf,ri,alpha,regime,value_num,value_den,value_decimal,L1,L2,L3,tight,uniform_cost,achievable"
    );
    assert_eq!(text.lines().count(), 1 + 16);
}

#[test]
fn sweep_rows_agree_with_bound() {
    let sweep = outcome(&["sweep", "--lf", "2,3", "--kf", "2,3", "--rf", "1..=3", "--alpha", "1,2"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&sweep.text).unwrap();
    assert!(!rows.is_empty());
    for row in rows.iter().step_by(7) {
        let p = &row["params"];
        let arg = |k: &str| p[k].as_u64().unwrap().to_string();
        let (lf, kf, rf, ri, alpha) = (arg("lf"), arg("kf"), arg("rf"), arg("ri"), arg("alpha"));
        let single = outcome(&[
            "bound", "--lf", &lf, "--kf", &kf, "--rf", &rf, "--ri", &ri, "--alpha", &alpha,
        ]);
        let one: serde_json::Value = serde_json::from_str(&single.text).unwrap();
        assert_eq!(&one, row);
    }
}

#[test]
fn sequential_and_parallel_output_identical() {
    let args = [
        "verify", "--qs", "7", "--lfs", "2", "--kfs", "1,2", "--rfs", "1", "--ris", "1,2", "--alphas", "1", "--trials",
        "30",
    ];
    let par = outcome(&args);
    let mut seq_args = vec!["--sequential"];
    seq_args.extend(args);
    let seq = outcome(&seq_args);
    assert_eq!(par.text, seq.text);
    assert_eq!(par.code, 0);
}

#[test]
fn planted_corruption_exits_one() {
    let args = [
        "verify",
        "--qs",
        "7",
        "--lfs",
        "2",
        "--kfs",
        "1",
        "--rfs",
        "1",
        "--ris",
        "2",
        "--alphas",
        "1",
        "--trials",
        "20",
        "--plant-corruption",
        "duplicate-parity",
    ];
    let out = outcome(&args);
    assert_eq!(out.code, 1);
    let doc: serde_json::Value = serde_json::from_str(&out.text).unwrap();
    assert!(doc["summary"]["failures"].as_u64().unwrap() > 0);
}

#[test]
fn empty_verify_grid_warns() {
    let out = outcome(&[
        "verify", "--qs", "5", "--lfs", "3", "--kfs", "2", "--rfs", "1", "--ris", "3", "--alphas", "1",
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(out.warnings.len(), 1);
}

#[test]
fn simulate_default_and_minimal_schemes() {
    let base = [
        "simulate",
        "--lf",
        "2",
        "--kf",
        "2",
        "--rf",
        "1",
        "--ri",
        "1",
        "--alpha",
        "1",
        "--q",
        "5",
        "--messages",
        "20",
    ];
    let default = outcome(&base);
    assert_eq!(default.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&default.text).unwrap();
    assert_eq!(doc["bandwidth"]["read_total"], 4);

    let mut min_args = base.to_vec();
    min_args.extend(["--scheme", "minimal"]);
    let minimal = outcome(&min_args);
    assert_eq!(minimal.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&minimal.text).unwrap();
    assert!(doc["bandwidth"]["read_total"].as_u64().unwrap() >= 3);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scheme.json");
    std::fs::write(&path, doc["scheme"].to_string()).unwrap();
    let mut file_args = base.to_vec();
    file_args.extend(["--scheme-file", path.to_str().unwrap()]);
    let from_file: serde_json::Value = serde_json::from_str(&outcome(&file_args).text).unwrap();
    assert_eq!(from_file["bandwidth"], doc["bandwidth"]);
}

#[test]
fn search_reports_sound_verdicts() {
    let out = outcome(&[
        "search", "--lf", "2", "--kf", "1", "--rf", "1", "--ri", "1", "--alpha", "1", "--q", "5", "--trials", "3",
        "--audit",
    ]);
    assert_eq!(out.code, 0);
    let reports: Vec<serde_json::Value> = serde_json::from_str(&out.text).unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["verdict"] == "sound" && r["min_read"] == 2));
}

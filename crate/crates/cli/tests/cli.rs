use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use prefset::catalog::SchemaFile;
use prefset::harness::fixtures::{senators_problem, senators_schema, SENATORS_CSV};
use prefset::prefmodel::ModelFile;
use serde_json::Value;
use tempfile::TempDir;

fn prefset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prefset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

/// Senators catalog as CSV plus schema, and the model with inline properties.
/// `k` overrides the required subset size.
fn senators_files(dir: &Path, gai: bool, k: Option<usize>) -> (PathBuf, PathBuf, PathBuf) {
    let p = senators_problem(gai);
    let catalog = dir.join("senators.csv");
    let schema = dir.join("schema.json");
    let model = dir.join("model.json");
    std::fs::write(&catalog, SENATORS_CSV).unwrap();
    std::fs::write(
        &schema,
        serde_json::to_string(&SchemaFile::from_schema(&senators_schema())).unwrap(),
    )
    .unwrap();
    let mut mf = serde_json::to_value(ModelFile::from_model(
        &p.model,
        &p.props,
        Some(p.catalog.schema()),
    ))
    .unwrap();
    if let Some(k) = k {
        mf["cardinality"] = serde_json::json!({ "k": k });
    }
    std::fs::write(&model, mf.to_string()).unwrap();
    (catalog, schema, model)
}

fn instance_args<'a>(files: &'a (PathBuf, PathBuf, PathBuf)) -> Vec<&'a str> {
    vec![
        "--catalog",
        files.0.to_str().unwrap(),
        "--schema",
        files.1.to_str().unwrap(),
        "--model",
        files.2.to_str().unwrap(),
    ]
}

#[test]
fn solve_senators_with_every_engine() {
    let dir = TempDir::new().unwrap();
    for gai in [false, true] {
        let files = senators_files(dir.path(), gai, None);
        for engine in ["auto", "csp", "subset", "subset-bfs", "BB-S", "BB-S+ng+inc"] {
            let mut args = vec!["solve"];
            args.extend(instance_args(&files));
            args.extend(["--engine", engine, "--json"]);
            let out = prefset(&args);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{engine}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            let v = json_of(&out);
            assert_eq!(v["status"], "optimal");
            // a TCP-net's compiled values fix only the order, not the numbers
            if gai {
                assert_eq!(v["value"], 11.0, "{engine}");
            }
            assert_eq!(v["witness"].as_array().unwrap().len(), 3);
            for q in ["P1", "P2", "P3"] {
                assert_eq!(v["assignment"][q], true, "{engine} gai={gai}");
            }
        }
    }
}

#[test]
fn csp_flags_are_accepted() {
    let dir = TempDir::new().unwrap();
    let files = senators_files(dir.path(), true, None);
    let mut args = vec!["solve"];
    args.extend(instance_args(&files));
    args.extend([
        "--engine",
        "csp",
        "--mode",
        "gai",
        "--strategy",
        "bfs",
        "--no-warm-start",
        "--no-sibling",
        "--json",
    ]);
    let out = prefset(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["value"], 11.0);
    assert_eq!(v["stats"]["warm_starts"], 0);
    assert_eq!(v["stats"]["sibling_inferences"], 0);
}

#[test]
fn oracle_matches_solver() {
    let dir = TempDir::new().unwrap();
    let files = senators_files(dir.path(), true, None);
    let mut args = vec!["oracle"];
    args.extend(instance_args(&files));
    args.push("--json");
    let out = prefset(&args);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["value"], 11.0);
    assert_eq!(v["optimal_count"], 3);
    assert_eq!(v["witness"], serde_json::json!(["o1", "o2", "o4"]));
}

#[test]
fn oversize_cardinality_exits_2() {
    let dir = TempDir::new().unwrap();
    let files = senators_files(dir.path(), true, Some(9));
    for cmd in [
        vec!["solve", "--engine", "subset"],
        vec!["solve", "--engine", "csp"],
        vec!["oracle"],
    ] {
        let mut args = cmd.clone();
        args.extend(instance_args(&files));
        assert_eq!(prefset(&args).status.code(), Some(2), "{cmd:?}");
    }
}

#[test]
fn expired_timeout_exits_3() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("movie");
    let out = prefset(&[
        "gen",
        "movie",
        "--n",
        "200",
        "--m",
        "14",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cat = out_dir.join("catalog.json");
    let model = out_dir.join("model.json");
    let out = prefset(&[
        "solve",
        "--catalog",
        cat.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--engine",
        "subset-bfs",
        "--timeout",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn generated_instances_round_trip() {
    let dir = TempDir::new().unwrap();
    for (kind, n, m) in [
        ("random", "8", "4"),
        ("vertex-cover", "5", "6"),
        ("ksat", "4", "6"),
        ("max2sat", "4", "5"),
        ("atomic", "8", "4"),
        ("two-sat", "8", "4"),
    ] {
        let out_dir = dir.path().join(kind);
        let out = prefset(&[
            "gen",
            kind,
            "--n",
            n,
            "--m",
            m,
            "--seed",
            "7",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{kind}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let cat = out_dir.join("catalog.json");
        let model = out_dir.join("model.json");
        let base = [
            "--catalog",
            cat.to_str().unwrap(),
            "--model",
            model.to_str().unwrap(),
            "--json",
        ];
        let oracle = prefset(&[&["oracle"][..], &base].concat());
        let solved = prefset(&[&["solve", "--engine", "auto"][..], &base].concat());
        assert_eq!(oracle.status.code(), solved.status.code(), "{kind}");
        if oracle.status.code() == Some(0) {
            assert_eq!(
                json_of(&oracle)["value"],
                json_of(&solved)["value"],
                "{kind}"
            );
        }
    }
}

#[test]
fn explain_class_reports_profile() {
    let dir = TempDir::new().unwrap();
    let files = senators_files(dir.path(), false, None);
    let mut args = vec!["explain-class"];
    args.extend(instance_args(&files));
    args.push("--json");
    let v = json_of(&prefset(&args));
    assert_eq!(v["class"], "general");
    assert_eq!(v["n"], 4);
    assert!(!v["reasons"].as_array().unwrap().is_empty());

    let out_dir = dir.path().join("atomic");
    prefset(&[
        "gen",
        "atomic",
        "--n",
        "10",
        "--m",
        "3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let out = prefset(&[
        "explain-class",
        "--catalog",
        out_dir.join("catalog.json").to_str().unwrap(),
        "--model",
        out_dir.join("model.json").to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("class: atomic-greedy"));
}

#[test]
fn bench_prints_one_row_per_cell() {
    let out = prefset(&[
        "bench",
        "--count",
        "2",
        "--n",
        "8",
        "--m",
        "3",
        "--variants",
        "subset-dfs,BB-S+ng",
        "--timeout",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    let out = prefset(&["bench", "--count", "1", "--n", "6", "--m", "3", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["cells"].as_array().unwrap().len(), 6);
}

#[test]
fn bad_input_exits_1() {
    let dir = TempDir::new().unwrap();
    let files = senators_files(dir.path(), false, None);
    let mut args = vec!["solve"];
    args.extend(instance_args(&files));
    args.extend(["--engine", "nope"]);
    let out = prefset(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown engine"));
    let out = prefset(&[
        "solve",
        "--catalog",
        "/nonexistent.json",
        "--model",
        "/nonexistent.json",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

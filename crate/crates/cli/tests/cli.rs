use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tracefault"));
    c.env_remove("TRACEFAULT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn tracefault")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(root).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn generate(dir: &Path, extra: &[&str]) {
    let mut args = vec!["generate", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn help_matches_golden() {
    let o = run(&["--help"]);
    assert!(o.status.success());
    let got = String::from_utf8(o.stdout).unwrap();
    let path = data("help.txt");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &got).unwrap();
    }
    assert_eq!(got, fs::read_to_string(path).unwrap());
}

#[test]
fn generate_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    generate(a.path(), &[]);
    generate(b.path(), &[]);
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    assert_eq!(ta.len(), 550 + 550 + 50 + 2);
    assert!(ta == tb, "two runs with the same seed differ");

    let m = json(&a.path().join("manifest.json"));
    assert_eq!(m["scenario_count"], 550);
    assert_eq!(m["verified"], 600);
}

#[test]
fn config_file_seed_is_used_and_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"seed": 7}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    generate(&a, &["--config", cfg]);
    generate(&b, &["--seed", "7"]);
    generate(&c, &["--config", cfg, "--seed", "42"]);
    assert!(tree(&a) == tree(&b));
    assert_eq!(json(&c.join("manifest.json"))["seed"], 42);
}

#[test]
fn env_seed_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("TRACEFAULT_SEED", "9")
        .args(["generate", "--out", dir.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(json(&dir.path().join("manifest.json"))["seed"], 9);
}

#[test]
fn analyze_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("analysis.json");
    let graph = dir.path().join("graph.json");
    let o = run(&[
        "analyze",
        data("example1.json").to_str().unwrap(),
        "--explain",
        "--out",
        out.to_str().unwrap(),
        "--dump-graph",
        graph.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&out);
    let ranked: Vec<u64> = report["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["step_id"].as_u64().unwrap())
        .collect();
    let mut sorted = ranked.clone();
    sorted.sort();
    assert_eq!(sorted, vec![1, 2, 3, 4, 5]);
    assert!(ranked.contains(&3));
    assert!(report["features"].is_object());

    let g = json(&graph);
    let edges: Vec<(u64, u64, String)> = g["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["from"].as_u64().unwrap(), e["to"].as_u64().unwrap(), e["kind"].as_str().unwrap().to_string()))
        .collect();
    assert!(edges.contains(&(2, 3, "sequential".into())));
    assert!(edges.contains(&(4, 5, "communication".into())));
}

#[test]
fn analyze_markdown_and_explicit_error_node() {
    let o = run(&["analyze", data("example1.json").to_str().unwrap(), "--error-node", "4", "--markdown"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("Error node: step 4"));
    assert!(text.contains("| Rank |"));
}

#[test]
fn exit_codes() {
    let code = |o: Output| o.status.code().unwrap();
    assert_eq!(code(run(&["analyze", "/definitely/not/here.json"])), 3);
    assert_eq!(code(run(&["analyze", data("example1.json").to_str().unwrap(), "--error-node", "9"])), 2);
    assert_eq!(code(run(&["frobnicate"])), 2);
    assert_eq!(code(run(&["bench", "--sizes", "0"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(run(&["analyze", bad.to_str().unwrap()])), 3);

    let bench = dir.path().join("bench");
    generate(&bench, &[]);
    let b = bench.to_str().unwrap();
    let out = dir.path().join("res");
    let o = out.to_str().unwrap();
    assert_eq!(code(run(&["evaluate", b, "--methods", "agenttrace,nope", "--out", o])), 2);
    assert_eq!(code(run(&["evaluate", b, "--methods", "agenttrace,llm", "--out", o])), 2);
    assert_eq!(code(run(&["evaluate", b, "--methods", "last", "--out", o])), 2);
    let wrong_key = dir.path().join("key.json");
    fs::write(&wrong_key, "{}").unwrap();
    assert_eq!(
        code(run(&["evaluate", &format!("{b}/blind"), "--answers", wrong_key.to_str().unwrap(), "--out", o])),
        3
    );
}

#[test]
fn evaluate_writes_outputs_and_blind_matches_annotated() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("bench");
    generate(&bench, &[]);
    let b = bench.to_str().unwrap();
    let (open, blind) = (dir.path().join("open"), dir.path().join("blind"));
    let args = ["--bootstrap-iterations", "200", "--methods", "agenttrace,last,first"];

    let mut a = vec!["evaluate", b, "--out", open.to_str().unwrap()];
    a.extend_from_slice(&args);
    assert!(run(&a).status.success());
    for f in ["metrics.json", "significance.json", "timings.json", "report.md"] {
        assert!(open.join(f).is_file(), "missing {f}");
    }

    let blind_dir = format!("{b}/blind");
    let answers = bench.join("answers.json");
    let mut a = vec![
        "evaluate",
        &blind_dir,
        "--answers",
        answers.to_str().unwrap(),
        "--out",
        blind.to_str().unwrap(),
    ];
    a.extend_from_slice(&args);
    let o = run(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let (mo, mb) = (json(&open.join("metrics.json")), json(&blind.join("metrics.json")));
    for m in ["agenttrace", "last", "first"] {
        for k in ["hit_at_1", "hit_at_3", "hit_at_5", "mrr"] {
            // Blind ids sort differently, so sums run in another order.
            let (x, y) = (mo["methods"][m][k].as_f64().unwrap(), mb["methods"][m][k].as_f64().unwrap());
            assert!((x - y).abs() < 1e-12, "{m} {k}: {x} vs {y}");
        }
    }
    assert_eq!(mo["scenario_count"], 550);
}

#[test]
fn blind_command_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("bench");
    generate(&bench, &[]);
    let out = dir.path().join("blind2");
    let o = run(&["blind", bench.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    // Same salt, same ids and traces as the split written by generate.
    let mut written = tree(&out);
    let key = written.remove(Path::new("answers.json")).unwrap();
    assert_eq!(key, fs::read(bench.join("answers.json")).unwrap());
    let generated = tree(&bench.join("blind"));
    assert!(written == generated);
    for bytes in written.values() {
        let text = String::from_utf8_lossy(bytes).to_lowercase();
        assert!(!text.contains("ground_truth"));
        assert!(!text.contains("bug"));
    }
}

#[test]
fn evaluate_with_llm_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("bench");
    generate(&bench, &[]);
    let small = dir.path().join("small");
    fs::create_dir(&small).unwrap();
    let mut fixture = serde_json::Map::new();
    let mut files: Vec<_> = fs::read_dir(bench.join("scenarios")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for (i, p) in files.iter().take(6).enumerate() {
        fs::copy(p, small.join(p.file_name().unwrap())).unwrap();
        let id = json(p)["scenario_id"].as_str().unwrap().to_string();
        let reply = if i == 0 { "I cannot tell.".to_string() } else { "2".to_string() };
        fixture.insert(id, Value::String(reply));
    }
    let fx = dir.path().join("fixture.json");
    fs::write(&fx, serde_json::to_vec(&fixture).unwrap()).unwrap();
    let out = dir.path().join("res");
    let o = run(&[
        "evaluate",
        small.to_str().unwrap(),
        "--methods",
        "agenttrace,llm",
        "--llm-fixture",
        fx.to_str().unwrap(),
        "--bootstrap-iterations",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = json(&out.join("metrics.json"));
    assert!(m["methods"]["llm"].is_object());
    assert_eq!(m["llm"]["unparseable"], 1);
}

#[test]
fn learn_weights_and_bench_write_json() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("bench");
    generate(&bench, &[]);
    let w = dir.path().join("w.json");
    assert!(run(&["learn-weights", bench.to_str().unwrap(), "--out", w.to_str().unwrap()]).status.success());
    let v = json(&w);
    let best: f64 = v["best"].as_object().unwrap().values().map(|x| x.as_f64().unwrap()).sum();
    assert!((best - 1.0).abs() < 1e-9);

    // Learned weights feed back into analyze.
    let o = run(&["analyze", data("example1.json").to_str().unwrap(), "--weights", w.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let t = dir.path().join("t.json");
    let o = run(&["bench", "--sizes", "3,6", "--runs", "5", "--warmup", "1", "--out", t.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&t)["rows"].as_array().unwrap().len(), 2);
}

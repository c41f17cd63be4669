use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use vdecomp::lp::{parse_problem, solve};
use vdecomp::ratio::{fmt_rational, rat};

const T3: &str = "T3=1,C3=0";

fn testdata(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../testdata").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdecomp")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_vdecomp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(args: &[&str]) -> String {
    stdout(&run(args)).lines().next().unwrap_or_default().to_string()
}

#[test]
fn documented_examples() {
    assert_eq!(first_line(&["--vector", T3, "dstar", "--blowup", "5,5,4"]), "26/1");
    assert_eq!(first_line(&["--vector", T3, "dstar", "--blowup", "1,1,1"]), "0/1");
    assert_eq!(first_line(&["--vector", T3, "nustar", "--blowup", "5,5,4"]), "6/7");
    assert_eq!(first_line(&["--vector", "K3=1,P3=0,Q3=0,I3=1", "intopt", "--bipartite", "3,4"]), "1/7");
    assert_eq!(first_line(&["bound", "--r", "14", "--value", "78/91"]), "85/98");
    assert_eq!(stdout(&run(&["enum", "-n", "7"])).lines().count(), 456);

    let vp = stdout(&run(&["--vector", "K3=1,P3=1/2,Q3=1/2,I3=0", "lp-vp", "--p", "1/2"]));
    let lines: BTreeSet<&str> = vp.lines().collect();
    assert_eq!(vp.lines().next(), Some("5/8"));
    assert!(lines.contains("x_Q3 = 3/4") && lines.contains("x_K3 = 1/4"), "{vp}");
}

#[test]
fn intopt_lists_a_block_design() {
    let out = stdout(&run(&["--vector", "K3=1,P3=0,Q3=0,I3=1", "intopt", "--bipartite", "3,4"]));
    let blocks: Vec<Vec<usize>> =
        out.lines().skip(1).map(|l| l.split_whitespace().take(3).map(|w| w.parse().unwrap()).collect()).collect();
    assert_eq!(blocks.len(), 7);
    let mut pairs = BTreeSet::new();
    for b in &blocks {
        for (i, &u) in b.iter().enumerate() {
            for &w in &b[i + 1..] {
                assert!(pairs.insert((u.min(w), u.max(w))), "pair covered twice");
            }
        }
    }
    assert_eq!(pairs.len(), 21);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    // a present pair and no triangle to hold it
    assert_eq!(code(&["--vector", T3, "dstar", "--transitive", "2"]), 2);
    assert_eq!(code(&["--vector", T3, "nustar", "--transitive", "2"]), 2);
    assert_eq!(code(&["--vector", T3, "nustar", "--infeasible-zero", "--transitive", "2"]), 0);

    assert_eq!(code(&["--vector", T3, "dstar", "--host-file", "/nonexistent/hosts.d6"]), 3);
    assert_eq!(code(&["--vector", T3, "--out", "/nonexistent/dir/out.txt", "dstar", "--transitive", "4"]), 3);
    assert_eq!(code(&["convert", "--input", "/nonexistent/in.d6"]), 3);

    assert_eq!(code(&["dstar", "--transitive", "4"]), 4);
    assert_eq!(code(&["--vector", "K3=1,P3=0,Q3=0,I3=1", "dstar", "--transitive", "4"]), 4);
    assert_eq!(code(&["--vector", T3, "dstar", "--transitive", "4", "--blowup", "1,1,1"]), 4);
    assert_eq!(code(&["--vector", T3, "dstar", "--digraph6", "&BP"]), 4);
    assert_eq!(code(&["--vector", T3, "dstar", "--no-such-flag"]), 4);
    assert_eq!(code(&["bound", "--r", "14", "--value", "x"]), 4);
    assert_eq!(
        code(&["--vector", T3, "search", "--base-enum", "7", "--decimal", "12.85,15.72,18.86,22.3,26", "--r-lo", "7"]),
        4
    );

    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("run.ckpt");
    let ckpt = ckpt.to_str().unwrap();
    let stopped = run(&[
        "--vector",
        T3,
        "search",
        "--base-enum",
        "7",
        "--stop-order",
        "8",
        "--checkpoint",
        ckpt,
        "--stop-after-chunks",
        "1",
        "--chunk-size",
        "64",
    ]);
    assert_eq!(stopped.status.code(), Some(5));
    fs::write(ckpt, b"VDCKPT\0\0garbage").unwrap();
    assert_eq!(code(&["checkpoint-info", ckpt]), 4);
}

/// The argv stored in the config echo, as the binary printed it.
fn echoed_argv(o: &Output) -> Vec<String> {
    let stderr = String::from_utf8(o.stderr.clone()).unwrap();
    let echo: serde_json::Value = serde_json::from_str(stderr.lines().next().unwrap()).unwrap();
    assert_eq!(echo["record"], "config");
    echo["argv"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect()
}

#[test]
fn config_echo_replays_byte_identically() {
    let cases: [&[&str]; 4] = [
        &["--vector", T3, "dstar", "--blowup", "4,3,3"],
        &["--vector", T3, "--format", "csv", "search", "--base-enum", "6", "--r-hi", "8", "--target", "8"],
        &["--vector", T3, "search", "--base-enum", "7", "--stop-order", "8", "--workers", "3"],
        &["--seed", "9", "--vector", "K3=1,P3=0,Q3=0,I3=1", "dstar", "--random", "8", "--kind", "bicolored"],
    ];
    for args in cases {
        let first = run(args);
        let argv = echoed_argv(&first);
        let replay = run(&argv.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(stdout(&first), stdout(&replay), "{args:?}");
    }
}

#[test]
fn convert_round_trips_reference_catalogs() {
    for name in ["tour7.d6", "tour10_sample.d6"] {
        let path = testdata(name);
        let out = stdout(&run(&["convert", "--input", path.to_str().unwrap()]));
        assert_eq!(out, fs::read_to_string(&path).unwrap());
    }
    let canonical = stdout(&run(&["convert", "--canonical", "--input", testdata("tour7.d6").to_str().unwrap()]));
    let canonical: BTreeSet<&str> = canonical.lines().collect();
    let enumerated = stdout(&run(&["enum", "-n", "7"]));
    let enumerated: BTreeSet<&str> = enumerated.lines().collect();
    assert_eq!(canonical.len(), 456);
    assert_eq!(canonical, enumerated);

    let graphs = stdout(&run_stdin(&["convert"], ">>graph6<<FFzf?\nD~{\n"));
    assert_eq!(graphs, "FFzf?\nD~{\n");
    assert_eq!(run_stdin(&["convert", "--to", "graph6"], "&BP_\n").status.code(), Some(4));
}

#[test]
fn convert_dumps_solvable_lps() {
    let out = stdout(&run_stdin(&["--vector", T3, "convert", "--to", "lp"], "&BP_\n"));
    assert!(out.starts_with("# stdin:1\n"));
    let p = parse_problem(&out).unwrap();
    assert_eq!((p.rows(), p.cols()), (3, 1));
    assert_eq!(solve(&p).value, Some(rat(0, 1)));

    let line = stdout(&run(&["enum", "-n", "6"])).lines().nth(20).unwrap().to_string();
    let lp = stdout(&run_stdin(&["--vector", T3, "convert", "--to", "lp"], &line));
    let value = solve(&parse_problem(&lp).unwrap()).value.unwrap();
    assert_eq!(first_line(&["--vector", T3, "dstar", "--digraph6", &line]), fmt_rational(&value));
}

fn run_owned(args: &[String]) -> Output {
    run(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn search_resumes_to_the_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("run.ckpt");
    let ckpt = ckpt.to_str().unwrap().to_string();
    let args = |prefix: &[&str], vector: &str, extra: &[&str]| -> Vec<String> {
        let fixed = ["--format", "csv", "search", "--base-enum", "7", "--complete-count", "auto", "--stop-order", "9"];
        let mut out: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
        out.extend(["--vector".to_string(), vector.to_string()]);
        out.extend(fixed.iter().map(|s| s.to_string()));
        out.extend(["--chunk-size", "256", "--checkpoint", &ckpt].iter().map(|s| s.to_string()));
        out.extend(extra.iter().map(|s| s.to_string()));
        out
    };

    let straight = stdout(&run_owned(&args(&[], T3, &[])));
    assert!(straight.starts_with("order,frontier_size,threshold"));
    assert!(straight.contains("\n7,456,6/1,"));

    fs::remove_file(&ckpt).unwrap();
    let mut stops = 0;
    let mut chunks = 4;
    let mut result = run_owned(&args(&[], T3, &["--stop-after-chunks", "4"]));
    while result.status.code() == Some(5) {
        stops += 1;
        let text = stdout(&run(&["--format", "jsonl", "checkpoint-info", &ckpt]));
        let info: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(info["record"], "checkpoint");
        chunks += 4;
        result = run_owned(&args(&["--resume"], T3, &["--stop-after-chunks", &chunks.to_string()]));
    }
    assert!(stops >= 2, "{stops} interruptions");
    assert_eq!(stdout(&result), straight);

    // the finished checkpoint replays without recomputation
    assert_eq!(stdout(&run_owned(&args(&["--resume"], T3, &[]))), straight);
    assert_eq!(run_owned(&args(&["--resume"], "T3=1,C3=1/2", &[])).status.code(), Some(4));
}

#[test]
fn jsonl_records() {
    let out = stdout(&run(&["--vector", T3, "--format", "jsonl", "dstar", "--blowup", "4,3,3"]));
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["record"], "eval");
    assert_eq!(record["value"], "12/1");
    assert_eq!(record["status"], "optimal");
    assert_eq!(record["order"], 10);

    let out = stdout(&run(&[
        "--vector",
        T3,
        "--format",
        "jsonl",
        "search",
        "--base-enum",
        "6",
        "--r-hi",
        "8",
        "--target",
        "8",
    ]));
    let records: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.last().unwrap()["record"], "report");
    assert!(records[..records.len() - 1].iter().all(|r| r["record"] == "level"));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn egoten(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egoten")).args(args).output().unwrap()
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn write_cliques(path: &Path, sizes: &[usize]) {
    let mut text = String::new();
    let mut offset = 0;
    for &s in sizes {
        for i in 0..s {
            for j in i + 1..s {
                text.push_str(&format!("{} {}\n", offset + i, offset + j));
            }
        }
        offset += s;
    }
    fs::write(path, text).unwrap();
}

fn report(text: &str) -> Vec<(String, f64)> {
    text.lines()
        .skip(1)
        .map(|l| {
            let (k, v) = l.split_once(',').unwrap();
            (k.to_owned(), v.parse().unwrap())
        })
        .collect()
}

fn metric(rows: &[(String, f64)], name: &str) -> Option<f64> {
    rows.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
}

fn sorted_cover(text: &str) -> Vec<Vec<u64>> {
    let mut c: Vec<Vec<u64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    c.sort();
    c
}

#[test]
fn detect_finds_the_toy_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("toy.txt");
    write_cliques(&input, &[4, 5, 6]);
    let out_dir = dir.path().join("out");
    let out = egoten(&[
        "detect",
        "--input",
        input.to_str().unwrap(),
        "--k",
        "3",
        "--self-loops",
        "--lambda",
        "0.01",
        "--output-dir",
        out_dir.to_str().unwrap(),
    ]);
    ok(&out);
    for f in ["factor_A.csv", "factor_B.csv", "factor_C.csv", "membership.csv", "cover.txt", "trace.csv", "manifest.txt"] {
        assert!(out_dir.join(f).exists(), "{f} missing");
    }
    let cover = sorted_cover(&fs::read_to_string(out_dir.join("cover.txt")).unwrap());
    assert_eq!(cover, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7, 8], vec![9, 10, 11, 12, 13, 14]]);
}

#[test]
fn missing_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.txt");
    let out = egoten(&["detect", "--input", missing.to_str().unwrap(), "--k", "2", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.txt"));
}

#[test]
fn zero_rank_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    write_cliques(&input, &[3]);
    let out = egoten(&["detect", "--input", input.to_str().unwrap(), "--k", "0", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_snapshot_temporal_run() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.txt");
    fs::write(&input, "0 0 1\n0 1 2\n0 0 2\n0 3 4\n").unwrap();
    let out_dir = dir.path().join("out");
    ok(&egoten(&[
        "detect-temporal",
        "--input",
        input.to_str().unwrap(),
        "--k",
        "2",
        "--self-loops",
        "-o",
        out_dir.to_str().unwrap(),
    ]));
    let d = fs::read_to_string(out_dir.join("factor_D.csv")).unwrap();
    let rows: Vec<&str> = d.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let sum: f64 = rows[0].split(',').skip(1).map(|x| x.parse::<f64>().unwrap()).sum();
    assert!((sum - 1.0).abs() <= 1e-9);
    assert!(out_dir.join("cover_t0.txt").exists());
    assert!(out_dir.join("association.csv").exists());
}

#[test]
fn malformed_time_column_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.txt");
    fs::write(&input, "0 0 1\nx 1 2\n").unwrap();
    let out = egoten(&["detect-temporal", "--input", input.to_str().unwrap(), "--k", "2", "-o", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn eval_reports_bridge_conductance_and_skips_nmi_without_truth() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    fs::write(&graph, "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n").unwrap();
    let cover = dir.path().join("c.txt");
    fs::write(&cover, "0 1 2\n3 4 5\n").unwrap();
    let out = egoten(&["eval", "--graph", graph.to_str().unwrap(), "--cover", cover.to_str().unwrap()]);
    ok(&out);
    let rows = report(&String::from_utf8_lossy(&out.stdout));
    assert!((metric(&rows, "avg_conductance").unwrap() - 1.0 / 7.0).abs() <= 1e-12);
    assert!(metric(&rows, "auc").is_some());
    assert!(metric(&rows, "nmi").is_none());
    assert!(metric(&rows, "avg_f1").is_none());

    let out = egoten(&[
        "eval",
        "--graph",
        graph.to_str().unwrap(),
        "--cover",
        cover.to_str().unwrap(),
        "--truth",
        cover.to_str().unwrap(),
    ]);
    ok(&out);
    let rows = report(&String::from_utf8_lossy(&out.stdout));
    assert_eq!(metric(&rows, "nmi"), Some(1.0));
}

#[test]
fn eval_rejects_cover_outside_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    fs::write(&graph, "0 1\n1 2\n").unwrap();
    let cover = dir.path().join("c.txt");
    fs::write(&cover, "0 1 7\n").unwrap();
    let out = egoten(&["eval", "--graph", graph.to_str().unwrap(), "--cover", cover.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_exact_at_the_limits() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let d = dir.path().join(name);
        ok(&egoten(&["gen", "--sizes", "3,3", "--p-in", "1", "--p-out", "0", "--seed", seed, "-o", d.to_str().unwrap()]));
        d
    };
    let a = run("a", "1");
    let graph = fs::read_to_string(a.join("graph.txt")).unwrap();
    assert_eq!(graph.lines().count(), 6);
    assert_eq!(sorted_cover(&fs::read_to_string(a.join("truth.txt")).unwrap()), vec![vec![0, 1, 2], vec![3, 4, 5]]);

    let noisy = |name: &str| {
        let d = dir.path().join(name);
        ok(&egoten(&[
            "gen", "--sizes", "20,20", "--p-in", "0.3", "--p-out", "0.05", "--overlap", "4:0:1", "--seed", "3", "-o",
            d.to_str().unwrap(),
        ]));
        (fs::read(d.join("graph.txt")).unwrap(), fs::read(d.join("truth.txt")).unwrap())
    };
    assert_eq!(noisy("x"), noisy("y"));
}

#[test]
fn gen_temporal_accepts_full_scale_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("t");
    ok(&egoten(&[
        "gen-temporal",
        "--n-times",
        "20",
        "--sizes",
        "500,500",
        "--migrants",
        "400",
        "--transition-mean",
        "10",
        "--transition-std",
        "1",
        "--p-in",
        "0.3",
        "--p-out",
        "0.1",
        "-o",
        d.to_str().unwrap(),
    ]));
    assert!(d.join("temporal.txt").exists());
    assert!(d.join("transitions.csv").exists());
    for t in 0..20 {
        assert!(d.join(format!("truth_t{t}.txt")).exists());
    }
}

#[test]
fn manifest_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    write_cliques(&input, &[5, 6]);
    let first = dir.path().join("first");
    ok(&egoten(&["detect", "--input", input.to_str().unwrap(), "--k", "2", "--seed", "4", "-o", first.to_str().unwrap()]));
    let second = dir.path().join("second");
    ok(&egoten(&[
        "detect",
        "--manifest",
        first.join("manifest.txt").to_str().unwrap(),
        "-o",
        second.to_str().unwrap(),
    ]));
    for f in ["factor_A.csv", "factor_B.csv", "factor_C.csv", "membership.csv", "cover.txt", "trace.csv", "manifest.txt"] {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(second.join(f)).unwrap(), "{f}");
    }
    fs::write(&input, "0 1\n").unwrap();
    let third = dir.path().join("third");
    let out = egoten(&["detect", "--manifest", first.join("manifest.txt").to_str().unwrap(), "-o", third.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

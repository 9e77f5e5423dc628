use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn squab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squab"))
        .args(args)
        .env_remove("SQUAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let out = squab(&full);
    assert!(out.status.success(), "{}", stderr(&out));
    path
}

#[test]
fn gen_prints_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let t4 = dir.path().join("t4.squab.json");
    let out = squab(&["gen", "toric", "--d", "4", "-o", t4.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "n=32 k=2");
    assert!(
        squab::cellulation::load(&std::fs::read(&t4).unwrap())
            .unwrap()
            .explicit_dual
    );

    let out = squab(&[
        "gen",
        "bk",
        "--d",
        "3",
        "-o",
        dir.path().join("bk3.squab.json").to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out).trim(), "n=13 k=1");

    let h = dir.path().join("h.squab.json");
    let out = squab(&[
        "gen",
        "planar",
        "--cells",
        "6x6",
        "--sides",
        "closed",
        "--hole",
        "2,2,2x2:open",
        "-o",
        h.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "n=72 k=0");
    let out = squab(&[
        "gen",
        "planar",
        "--cells",
        "6x6",
        "--hole",
        "2,2,2x2:closed",
        "-o",
        h.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out).trim(), "n=80 k=1");
    let out = squab(&[
        "gen",
        "planar",
        "--cells",
        "6x6",
        "--left",
        "open",
        "--right",
        "open",
        "-o",
        h.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out).trim(), "n=72 k=1");
}

#[test]
fn gen_to_stdout_keeps_the_file_clean() {
    let out = squab(&["gen", "toric", "--d", "2"]);
    assert!(out.status.success());
    let parsed = squab::cellulation::load(&out.stdout).unwrap();
    assert_eq!(parsed.surface.num_qubits(), 8);
    assert_eq!(stderr(&out).trim(), "n=8 k=2");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["gen", "toric", "--d", "1"],
        vec!["gen", "toric"],
        vec!["gen", "planar", "--cells", "6x6", "--hole", "0,0,2x2:open"],
        vec![
            "gen",
            "planar",
            "--cells",
            "8x8",
            "--hole",
            "1,1,3x3:open",
            "--hole",
            "3,3,2x2:open",
        ],
        vec!["frobnicate"],
        vec!["bench", "x.json", "--mode", "y_only"],
    ] {
        let out = squab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn info_reports_weights() {
    let dir = tempfile::tempdir().unwrap();
    let t3 = gen(dir.path(), "t3.json", &["toric", "--d", "3"]);
    let out = squab(&["info", t3.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report["x_weights"],
        serde_json::json!([{"weight": 4, "count": 9}])
    );
    assert_eq!(
        report["z_weights"],
        serde_json::json!([{"weight": 4, "count": 9}])
    );

    let bk = gen(dir.path(), "bk3.json", &["bk", "--d", "3"]);
    let out = squab(&["info", bk.to_str().unwrap(), "--json"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        (report["n"].as_u64(), report["k"].as_u64()),
        (Some(13), Some(1))
    );
    let weights: Vec<u64> = report["x_weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["weight"].as_u64().unwrap())
        .collect();
    assert!(weights.contains(&3) && weights.contains(&4));

    let text = stdout(&squab(&["info", bk.to_str().unwrap()]));
    assert!(text.contains("n = 13") && text.contains("k = 1"), "{text}");
}

#[test]
fn info_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let t2 = gen(dir.path(), "t2.json", &["toric", "--d", "2"]);
    let mut file: Value = serde_json::from_slice(&std::fs::read(&t2).unwrap()).unwrap();
    file.as_object_mut().unwrap().remove("dual");
    file["faces"][0]["edges"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!(77));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_vec(&file).unwrap()).unwrap();
    let out = squab(&["info", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown-edge"), "{}", stderr(&out));

    std::fs::write(&bad, b"{ not json").unwrap();
    assert_eq!(
        squab(&["info", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(
        squab(&["info", dir.path().join("missing.json").to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let mut file: Value = serde_json::from_slice(&std::fs::read(&t2).unwrap()).unwrap();
    file["layout"] = serde_json::json!({});
    std::fs::write(&bad, serde_json::to_vec(&file).unwrap()).unwrap();
    assert!(squab(&["info", bad.to_str().unwrap()]).status.success());
    assert_eq!(
        squab(&["info", bad.to_str().unwrap(), "--strict"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bench_csv_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let t3 = gen(dir.path(), "t3.json", &["toric", "--d", "3"]);
    let args = [
        "bench",
        t3.to_str().unwrap(),
        "--p-min",
        "0",
        "--p-max",
        "1",
        "--steps",
        "11",
        "--trials",
        "1000",
        "--seed",
        "7",
    ];
    let a = squab(&args);
    let b = squab(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], squab::table::CSV_HEADER);
    assert_eq!(lines.len(), 12);
    let rate = |line: &str| line.split(',').nth(6).unwrap().to_string();
    assert_eq!(rate(lines[1]), "0");
    assert_eq!(rate(lines[11]), "1");
}

#[test]
fn bench_z_only_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let t3 = gen(dir.path(), "t3.json", &["toric", "--d", "3"]);
    let out = squab(&[
        "bench",
        t3.to_str().unwrap(),
        "--trials",
        "300",
        "--mode",
        "z_only",
        "--workers",
        "2",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        assert_eq!(line.split(',').nth(5), Some("0"), "{line}");
    }
    let json_path = dir.path().join("r.json");
    let out = squab(&[
        "bench",
        t3.to_str().unwrap(),
        "--trials",
        "50",
        "--steps",
        "3",
        "--format",
        "json",
        "-o",
        json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let result: squab::SweepResult =
        serde_json::from_slice(&std::fs::read(&json_path).unwrap()).unwrap();
    assert_eq!(result.points.len(), 3);
    assert_eq!(result.surface.n, 18);
}

#[test]
fn bench_flag_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let t3 = gen(dir.path(), "t3.json", &["toric", "--d", "3"]);
    let f = t3.to_str().unwrap();
    for args in [
        vec!["bench", f, "--p-min", "0.8", "--p-max", "0.2"],
        vec!["bench", f, "--p-max", "1.5"],
        vec!["bench", f, "--steps", "0"],
        vec!["bench", f, "--trials", "0"],
        vec!["bench", f, "--format", "xml"],
    ] {
        assert_eq!(squab(&args).status.code(), Some(2), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_squab"))
        .args(["bench", f, "--trials", "10"])
        .env("SQUAB_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn workers_env_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let bk = gen(dir.path(), "bk.json", &["bk", "--d", "4"]);
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_squab"))
            .args([
                "bench",
                bk.to_str().unwrap(),
                "--trials",
                "2000",
                "--seed",
                "5",
                "--steps",
                "5",
            ])
            .env("SQUAB_WORKERS", w)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn compare_identical_files_gives_identical_curves() {
    let dir = tempfile::tempdir().unwrap();
    let t3 = gen(dir.path(), "t3.json", &["toric", "--d", "3"]);
    let f = t3.to_str().unwrap();
    let out = squab(&[
        "compare", f, f, "--trials", "500", "--steps", "5", "--seed", "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = stdout(&out);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    for (a, b) in rows[..5].iter().zip(&rows[5..]) {
        assert_eq!(a.split_once(',').unwrap().1, b.split_once(',').unwrap().1);
    }
    assert!(rows[0].starts_with("toric-d3,") && rows[5].starts_with("toric-d3#2,"));
    assert_eq!(
        stderr(&out).lines().filter(|l| l.starts_with("p=")).count(),
        5
    );
    assert_eq!(squab(&["compare", f]).status.code(), Some(2));
}

#[test]
fn compare_reports_both_codes() {
    let dir = tempfile::tempdir().unwrap();
    let t4 = gen(dir.path(), "t4.json", &["toric", "--d", "4"]);
    let bk4 = gen(dir.path(), "bk4.json", &["bk", "--d", "4"]);
    let out = squab(&[
        "compare",
        t4.to_str().unwrap(),
        bk4.to_str().unwrap(),
        "--p-min",
        "0.1",
        "--p-max",
        "0.1",
        "--steps",
        "1",
        "--trials",
        "10000",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let codes: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(codes, ["toric-d4", "bk-d4"]);
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line
            .split(',')
            .skip(6)
            .take(3)
            .map(|x| x.parse().unwrap())
            .collect();
        assert!(cols[1] <= cols[0] && cols[0] <= cols[2], "{line}");
    }
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use comenet::fixtures::fixture;
use comenet::io::{parse_xyz, tuples_from_csv, tuples_to_csv};

fn comenet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_comenet"))
        .args(args)
        .env_remove("COMENET_CUTOFF")
        .env_remove("COMENET_FORMAT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_fixture(dir: &Path, name: &str) -> String {
    let path = dir.join(format!("{name}.xyz"));
    fs::write(&path, fixture(name).unwrap().xyz()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn featurize_water_at_full_cutoff() {
    let dir = tempfile::tempdir().unwrap();
    let water = write_fixture(dir.path(), "water");
    let out = comenet(&["featurize", &water]);
    assert!(out.status.success(), "{}", stderr(&out));
    let tuples = tuples_from_csv(&stdout(&out)).unwrap();
    assert_eq!(tuples.len(), 6);
    assert!(stderr(&out).contains("n=3 m=6"));
}

#[test]
fn featurize_writes_basis_and_roots() {
    let dir = tempfile::tempdir().unwrap();
    let methane = write_fixture(dir.path(), "methane");
    let basis = dir.path().join("basis.json");
    let roots = dir.path().join("roots.csv");
    let out = comenet(&[
        "featurize",
        &methane,
        "--cutoff",
        "1.6",
        "--basis",
        basis.to_str().unwrap(),
        "--beta-table",
        roots.to_str().unwrap(),
        "--quiet",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let features: serde_json::Value = serde_json::from_str(&fs::read_to_string(&basis).unwrap()).unwrap();
    assert_eq!(features.as_array().unwrap().len(), 8);
    assert_eq!(features[0]["tbf"].as_array().unwrap().len(), 9 * 12);
    let table = fs::read_to_string(&roots).unwrap();
    assert!(table.starts_with("l,n,beta\n0,1,3.14159265358979"));
}

#[test]
fn malformed_coordinate_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.xyz");
    fs::write(&path, "2\n\nO 0 0 0\nH 0 zero 1\n").unwrap();
    let out = comenet(&["featurize", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn zero_cutoff_is_rejected_before_reading() {
    let out = comenet(&["featurize", "/nonexistent/file.xyz", "--cutoff", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cutoff"));
    let out = comenet(&["featurize", "/nonexistent/file.xyz"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reconstruct_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let butane = write_fixture(dir.path(), "butane");
    let tuples = dir.path().join("t.csv");
    let topo = dir.path().join("topo.json");
    let out = comenet(&[
        "featurize",
        &butane,
        "--cutoff",
        "1.6",
        "-o",
        tuples.to_str().unwrap(),
        "--topology-out",
        topo.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let rebuilt = dir.path().join("r.xyz");
    let report = dir.path().join("r.json");
    let args = [
        "reconstruct",
        "--tuples",
        tuples.to_str().unwrap(),
        "--topology",
        topo.to_str().unwrap(),
        "--reference",
        &butane,
        "-o",
        rebuilt.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ];
    let out = comenet(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).starts_with("PASS"));
    let frame = parse_xyz(&fs::read_to_string(&rebuilt).unwrap()).unwrap().remove(0);
    let source = fixture("butane").unwrap().frame();
    for (a, b) in frame.positions.iter().zip(&source.positions) {
        assert!((a - b).norm() < 1e-6);
    }
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(json["rmsd"].as_f64().unwrap() < 1e-6);

    let original = fs::read_to_string(&tuples).unwrap();
    let mut t = tuples_from_csv(&original).unwrap();
    let k = t.iter().position(|e| e.i == 1 && e.j == 2).unwrap();
    t[k].d += 0.05;
    fs::write(&tuples, tuples_to_csv(&t)).unwrap();
    let out = comenet(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).to_lowercase().contains("inconsistent"), "{}", stderr(&out));

    // a single bond angle change is realizable by a different geometry:
    // rebuilt, but it no longer matches the reference
    let mut t = tuples_from_csv(&original).unwrap();
    t[k].theta += 0.1;
    fs::write(&tuples, tuples_to_csv(&t)).unwrap();
    let out = comenet(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("FAIL"), "{}", stderr(&out));
}

#[test]
fn invariance_over_fixtures_and_mirror() {
    let out = comenet(&["invariance", "--fixture", "all", "--trials", "3"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 8);

    let out = comenet(&[
        "invariance",
        "--fixture",
        "bromochlorofluoromethane",
        "--mirror",
        "--trials",
        "2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("mirror=DISTINCT"));

    let out = comenet(&["invariance", "--random", "20", "4", "1", "--trials", "2"]);
    assert!(out.status.success());
}

#[test]
fn conformer_matrix() {
    let out = comenet(&["conformers"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 4);
    for (a, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').skip(1).collect();
        for (b, cell) in cells.iter().enumerate() {
            assert_eq!(*cell, if a == b { "EQUIVALENT" } else { "DISTINCT" });
        }
    }
    let out = comenet(&["conformers", "--no-tau"]);
    assert_eq!(stdout(&out).matches("DISTINCT").count(), 0);
    let out = comenet(&["conformers", "--angles", "180", "180", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["matrix"][0][1], "EQUIVALENT");
}

#[test]
fn predict_is_deterministic_and_reads_env() {
    let dir = tempfile::tempdir().unwrap();
    let ethanol = write_fixture(dir.path(), "ethanol");
    let a = comenet(&["predict", &ethanol, "--cutoff", "1.6", "--seed", "3"]);
    let b = Command::new(env!("CARGO_BIN_EXE_comenet"))
        .args(["predict", &ethanol, "--seed", "3"])
        .env("COMENET_CUTOFF", "1.6")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    let c = comenet(&["predict", &ethanol, "--cutoff", "1.6", "--seed", "3", "--no-tau"]);
    assert_ne!(stdout(&a), stdout(&c));
    stdout(&a).trim().parse::<f64>().unwrap();
}

#[test]
fn bench_counts_only() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("bench.json");
    let out = comenet(&[
        "bench",
        "--no-timing",
        "--n-values",
        "100",
        "200",
        "400",
        "800",
        "--k-values",
        "4",
        "6",
        "8",
        "10",
        "--n-fixed",
        "200",
        "-o",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["n_sweep"].as_array().unwrap().len(), 4);
    assert_eq!(json["torsion"][1]["ours"], 7);

    let out = comenet(&["bench", "--n-values", "100", "200"]);
    assert_eq!(out.status.code(), Some(2));
}

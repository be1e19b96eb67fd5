use std::path::PathBuf;
use std::process::{Command, Output};

use hyperideal::commands::{cmd_realize, read_cellulation, RealizeArgs};
use hyperideal::document::{CellulationDocument, RealizationDocument};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperideal")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit status")
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&["validate", data("tetra_ideal.json").to_str().unwrap()]), 0);
    assert_eq!(code(&["validate", data("octa_right.json").to_str().unwrap()]), 0);
    assert_eq!(code(&["validate", data("tetra_small.json").to_str().unwrap()]), 1);
    assert_eq!(code(&["validate", data("malformed.json").to_str().unwrap()]), 2);
    assert_eq!(code(&["validate", data("missing.json").to_str().unwrap()]), 2);
    assert_eq!(code(&["validate", "--bogus"]), 2);
}

#[test]
fn inadmissible_report_names_a_witness() {
    let out = run(&["validate", data("tetra_small.json").to_str().unwrap()]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("verdict: inadmissible"), "{text}");
    assert!(text.contains("witness") || text.contains("must exceed"), "{text}");
}

#[test]
fn realize_exit_codes() {
    assert_eq!(code(&["realize", data("octa_right.json").to_str().unwrap()]), 0);
    assert_eq!(code(&["realize", data("tetra_small.json").to_str().unwrap()]), 1);
    assert_eq!(code(&["realize", data("torus.json").to_str().unwrap()]), 2);
    assert_eq!(code(&["koebe", data("torus.json").to_str().unwrap()]), 2);
}

#[test]
fn regular_ideal_octahedron_volume() {
    let out = run(&["realize", data("octa_right.json").to_str().unwrap()]);
    let text = String::from_utf8_lossy(&out.stdout);
    let v: f64 = text.lines().find_map(|l| l.strip_prefix("volume: ")).unwrap().trim().parse().unwrap();
    assert!((v - 3.663862376708876).abs() < 1e-8, "{v}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for k in 0..2 {
        let json = dir.path().join(format!("cube{k}.json"));
        let svg = dir.path().join(format!("cube{k}.svg"));
        let status = run(&[
            "realize",
            data("cube.json").to_str().unwrap(),
            "--out",
            json.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert!(status.status.success());
        docs.push((std::fs::read(json).unwrap(), std::fs::read(svg).unwrap()));
    }
    assert_eq!(docs[0], docs[1]);
    let svg = String::from_utf8(docs[0].1.clone()).unwrap();
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    // six black face circles and eight red vertex circles
    assert_eq!(svg.matches("stroke=\"#000000\"").count(), 6);
    assert_eq!(svg.matches("stroke=\"#cc0000\"").count(), 8);
}

#[test]
fn realization_remeasures_to_its_angles() {
    for name in ["cube.json", "octa_right.json", "tetra_ideal.json"] {
        let parsed = read_cellulation(&data(name)).unwrap();
        let (doc, _) = cmd_realize(&parsed, &RealizeArgs::default()).unwrap();
        let back = RealizationDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let input = CellulationDocument::from_json(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
        let measured = back.remeasure().unwrap();
        assert_eq!(measured.len(), input.angles.len());
        for (key, w) in &input.angles {
            let m = measured[key];
            assert!((m - w).abs() < 1e-7, "{name} {key}: {m} vs {w}");
        }
    }
}

#[test]
fn batch_writes_one_document_per_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "realize",
        data("octa_right.json").to_str().unwrap(),
        data("tetra_ideal.json").to_str().unwrap(),
        "--jobs",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for stem in ["octa_right", "tetra_ideal"] {
        let text = std::fs::read_to_string(dir.path().join(format!("{stem}.realization.json"))).unwrap();
        assert!(RealizationDocument::from_json(&text).is_ok());
    }
}

#[test]
fn koebe_writes_circles() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("tetra.circles.json");
    let out = run(&["koebe", data("tetra_small.json").to_str().unwrap(), "--out", json.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let circles = doc["circles"].as_array().unwrap();
    assert_eq!(circles.len(), 8);
    // congruent black caps on the tetrahedron
    let radii: Vec<f64> =
        circles.iter().filter(|c| c["color"] == "black").map(|c| c["radius"].as_f64().unwrap()).collect();
    assert_eq!(radii.len(), 4);
    assert!(radii.iter().all(|r| (r - radii[0]).abs() < 1e-6), "{radii:?}");
}

#[test]
fn simplex_command() {
    let out = run(&["simplex", "--angles", "2pi/3", "2pi/3", "2pi/3", "2pi/3", "2pi/3", "2pi/3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let v: f64 = text.lines().find_map(|l| l.strip_prefix("volume: ")).unwrap().trim().parse().unwrap();
    assert!((v - 1.0149416064096536).abs() < 1e-9);
    assert_eq!(code(&["simplex", "--angles", "1", "1", "1", "1", "1", "1"]), 1);
    assert_eq!(code(&["simplex", "--angles", "120", "120", "120", "120", "120", "120", "--degrees"]), 0);
    assert_eq!(code(&["simplex", "--angles", "x", "1", "1", "1", "1", "1"]), 2);
}

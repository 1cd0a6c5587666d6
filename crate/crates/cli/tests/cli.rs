use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use meshforge::exact::ExactScalar;
use meshforge::io::truncation_from_json;
use meshforge::netlib::{catalog, generate};

fn meshforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meshforge"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_writes_json_and_obj_that_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = meshforge(&["gen", "--net", "kag", "--radius", "6"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let text = fs::read_to_string(dir.path().join("kag.json")).unwrap();
    let parsed = truncation_from_json(&text).unwrap();
    let direct = generate(&catalog("kag").unwrap(), &ExactScalar::int(6)).unwrap();
    assert_eq!(parsed, direct);
    assert!(dir.path().join("kag.obj").exists());
}

#[test]
fn dyadic_mesh_has_81_nodes_in_the_unit_square() {
    let dir = tempfile::tempdir().unwrap();
    let o = meshforge(&["gen", "--mesh", "Z2@2^inf", "--depth", "3", "--radius", "2"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("nodes in the unit cube: 81"), "{}", stdout(&o));
}

#[test]
fn sierpinski_obj_has_three_corners() {
    let dir = tempfile::tempdir().unwrap();
    let o = meshforge(&["gen", "--net", "sierpinski", "--depth", "4", "--name", "s"], dir.path());
    assert!(o.status.success());
    let obj = fs::read_to_string(dir.path().join("s.obj")).unwrap();
    let n = obj.lines().filter(|l| l.starts_with("v ")).count();
    let mut degree = vec![0; n];
    for l in obj.lines().filter(|l| l.starts_with("l ")) {
        let ids: Vec<usize> = l[2..].split(' ').map(|x| x.parse::<usize>().unwrap() - 1).collect();
        for w in ids.windows(2) {
            degree[w[0]] += 1;
            degree[w[1]] += 1;
        }
    }
    assert_eq!(degree.iter().filter(|&&d| d == 2).count(), 3);
}

#[test]
fn planar_census_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = meshforge(&["verify-regular", "--catalog", "2d", "--radius", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("regular: hex, Z2, tri"));
}

#[test]
fn hxg_prints_its_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = meshforge(&["verify-regular", "--net", "Hxg"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Hxg witness: rotation of order 6"));
}

#[test]
fn flex_is_green_and_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["flex", "--kappa", "0.3926990817", "--steps", "10"];
    let oa = meshforge(&args, a.path());
    let ob = meshforge(&args, b.path());
    assert_eq!(oa.status.code(), Some(0), "{oa:?}");
    assert_eq!(ob.status.code(), Some(0));
    for f in ["flex.csv", "flex.json", "frames/frame_010.obj"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let csv = fs::read_to_string(a.path().join("flex.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn gen_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(meshforge(&["gen", "--net", "tri", "--radius", "3"], d.path()).status.success());
    }
    assert_eq!(
        fs::read(a.path().join("tri.json")).unwrap(),
        fs::read(b.path().join("tri.json")).unwrap()
    );
}

#[test]
fn extend_reports_orbit_inclusion() {
    let dir = tempfile::tempdir().unwrap();
    let o = meshforge(&["extend", "--net", "Z2", "--scale", "2", "--depth", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("orbit-node inclusion = true"));
    let report = fs::read_to_string(dir.path().join("Z2-extension.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["format"], 1);
    assert!(v["report"]["missing_orbit_nodes"].as_array().unwrap().is_empty());
}

#[test]
fn input_errors_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(meshforge(&["flex", "--kappa", "1.6"], dir.path()).status.code(), Some(3));
    assert_eq!(meshforge(&["gen", "--net", "nope"], dir.path()).status.code(), Some(3));
    assert_eq!(meshforge(&["gen", "--radius", "x/0", "--net", "Z2"], dir.path()).status.code(), Some(3));
    assert_eq!(meshforge(&["frobnicate"], dir.path()).status.code(), Some(3));
}

#[test]
fn thread_cap_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_meshforge"))
            .args(["gen", "--net", "Z2", "--radius", "2"])
            .current_dir(dir.path())
            .env("MESHFORGE_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(3));
    assert_eq!(run("many").status.code(), Some(3));
}

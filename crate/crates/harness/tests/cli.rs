use std::path::{Path, PathBuf};
use std::process::Command;

use quantsel_harness::certificate::{Certificate, EpsNetPayload};
use quantsel_harness::json::rat;

fn run(args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_quantsel")).args(args).output().unwrap();
    out.status.code().unwrap()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn identical_squares_select_simplex() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, cert) = (path(dir.path(), "inst.json"), path(dir.path(), "cert.json"));
    assert_eq!(run(&["gen", "--kind", "identicalBodies", "--n", "8", "--out", s(&inst)]), 0);
    assert_eq!(run(&["select", "--variant", "simplex", "--in", s(&inst), "--out", s(&cert)]), 0);
    let c = Certificate::load(&cert).unwrap();
    assert_eq!(c.achieved_bounds["fraction"], "1");
    assert_eq!(run(&["verify", "--in", s(&inst), "--cert", s(&cert)]), 0);
}

#[test]
fn tampered_witness_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, cert) = (path(dir.path(), "inst.json"), path(dir.path(), "cert.json"));
    assert_eq!(run(&["gen", "--kind", "randomSquares", "--n", "7", "--seed", "4", "--out", s(&inst)]), 0);
    assert_eq!(run(&["select", "--in", s(&inst), "--out", s(&cert)]), 0);
    let mut c = Certificate::load(&cert).unwrap();
    let center = c.payload["witness"]["center"][0].as_str().unwrap().to_string();
    let shifted = quantsel::num::fmt_rational(&(rat(&center).unwrap() + quantsel::num::int(10)));
    c.payload["witness"]["center"][0] = serde_json::json!(shifted);
    c.save(&cert).unwrap();
    assert_eq!(run(&["verify", "--in", s(&inst), "--cert", s(&cert)]), 3);
    // Recomputing the seal does not help: the containment re-check fails.
    c.reseal();
    c.save(&cert).unwrap();
    assert_eq!(run(&["verify", "--in", s(&inst), "--cert", s(&cert)]), 3);
}

#[test]
fn slab_net_needs_inverse_epsilon_pieces() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, cert) = (path(dir.path(), "slabs.json"), path(dir.path(), "net.json"));
    assert_eq!(run(&["gen", "--kind", "slabs", "--d", "2", "--eps", "1/4", "--n", "16", "--out", s(&inst)]), 0);
    assert_eq!(run(&["epsnet", "--eps", "1/4", "--variant", "quadratic", "--in", s(&inst), "--out", s(&cert)]), 0);
    let c = Certificate::load(&cert).unwrap();
    let payload: EpsNetPayload = c.payload_as().unwrap();
    assert!(payload.pieces.len() >= 4);
    assert_eq!(run(&["verify", "--in", s(&inst), "--cert", s(&cert)]), 0);
}

#[test]
fn generators_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    for out in [&a, &b] {
        assert_eq!(run(&["gen", "--kind", "slabs", "--eps", "1/4", "--n", "16", "--seed", "7", "--out", s(out)]), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn render_selection_and_diameter() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, cert, svg) = (path(dir.path(), "i.json"), path(dir.path(), "c.json"), path(dir.path(), "x.svg"));
    assert_eq!(run(&["gen", "--kind", "randomSquares", "--n", "8", "--seed", "2", "--out", s(&inst)]), 0);
    assert_eq!(run(&["select", "--in", s(&inst), "--out", s(&cert)]), 0);
    assert_eq!(run(&["render", "--in", s(&inst), "--cert", s(&cert), "--out", s(&svg)]), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polygon").count(), 8);
    assert_eq!(text.matches("<ellipse").count(), 1);

    assert_eq!(run(&["gen", "--kind", "unitSegments", "--n", "4", "--families", "4", "--seed", "1", "--out", s(&inst)]), 0);
    assert_eq!(run(&["tverberg-diam", "--in", s(&inst), "--out", s(&cert), "--seed", "1"]), 0);
    assert_eq!(run(&["render", "--in", s(&inst), "--cert", s(&cert), "--out", s(&svg)]), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<line").count(), 17);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, cert, svg) = (path(dir.path(), "i.json"), path(dir.path(), "c.json"), path(dir.path(), "x.svg"));
    // Three dimensions cannot be drawn.
    assert_eq!(run(&["gen", "--kind", "identicalBodies", "--d", "3", "--n", "2", "--out", s(&inst)]), 0);
    assert_eq!(run(&["render", "--in", s(&inst), "--out", s(&svg)]), 4);
    assert!(!svg.exists());
    // Disjoint families: no homogeneous selection at full size.
    std::fs::write(
        &inst,
        r#"{"dimension":1,"kind":"colorFamilies","families":[
            [{"vertices":[["0"],["1"]]},{"vertices":[["10"],["11"]]}],
            [{"vertices":[["5"],["6"]]},{"vertices":[["20"],["21"]]}]]}"#,
    )
    .unwrap();
    assert_eq!(run(&["homsel", "--in", s(&inst), "--target", "1", "--out", s(&cert)]), 2);
    std::fs::write(&inst, "{ not json").unwrap();
    assert_eq!(run(&["john", "--in", s(&inst), "--out", s(&cert)]), 4);
    assert_eq!(run(&["select", "--bogus"]), 4);
    assert_eq!(run(&["gen", "--kind", "nope", "--out", s(&inst)]), 4);
}

#[test]
fn every_subcommand_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| path(dir.path(), n);
    let cases: Vec<(Vec<String>, Vec<String>)> = vec![
        (
            vec!["gen", "--kind", "randomSquares", "--n", "6", "--seed", "9"],
            vec!["john"],
        ),
        (vec!["gen", "--kind", "randomSquares", "--n", "7", "--seed", "3"], vec!["tverberg", "--r", "2"]),
        (
            vec!["gen", "--kind", "randomSquares", "--n", "4", "--families", "3", "--window", "3", "--seed", "6"],
            vec!["sametype", "--alpha", "1/3"],
        ),
        (
            vec!["gen", "--kind", "clusteredIntervals", "--d", "1", "--n", "4", "--families", "2", "--seed", "1"],
            vec!["homsel", "--target", "1/2"],
        ),
        (
            vec!["gen", "--kind", "randomSquares", "--n", "8", "--seed", "1"],
            vec!["select", "--variant", "quadratic", "--mode", "diameter"],
        ),
    ]
    .into_iter()
    .map(|(g, c)| (g.into_iter().map(String::from).collect(), c.into_iter().map(String::from).collect()))
    .collect();
    for (i, (gen, cmd)) in cases.iter().enumerate() {
        let (inst, cert) = (p(&format!("i{i}.json")), p(&format!("c{i}.json")));
        let mut g: Vec<&str> = gen.iter().map(String::as_str).collect();
        g.extend(["--out", s(&inst)]);
        assert_eq!(run(&g), 0, "{gen:?}");
        let mut c: Vec<&str> = cmd.iter().map(String::as_str).collect();
        c.extend(["--in", s(&inst), "--out", s(&cert)]);
        assert_eq!(run(&c), 0, "{cmd:?}");
        assert_eq!(run(&["verify", "--in", s(&inst), "--cert", s(&cert)]), 0, "{cmd:?}");
    }
}

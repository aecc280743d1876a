use std::path::PathBuf;
use std::process::Command;

use twistfan_cli::document::to_json;
use twistfan_cli::slice::on_hyperplane;
use twistfan_cli::{
    cmd_check, cmd_div_fan, cmd_flows, cmd_rub_fan, cmd_slice, cmd_suggest_theta, render_svg, FanDocument, Problem,
    ProblemSpec, DEFAULT_BOX,
};

fn example_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems/m13_triangle.json")
}

fn example() -> Problem {
    Problem::load(&example_path()).unwrap()
}

fn spec() -> ProblemSpec {
    ProblemSpec::read(&example_path()).unwrap()
}

fn tree_spec() -> ProblemSpec {
    serde_json::from_str(
        r#"{
            "graph": {
                "vertices": [{"id": "a", "legs": ["1", "2"]}, {"id": "b", "legs": ["3", "4"]}],
                "edges": [{"id": "e", "from": "a", "to": "b"}]
            },
            "A": {"1": 2, "2": -1, "3": 0, "4": -1},
            "theta": {"a": "1/3", "b": "-1/3"}
        }"#,
    )
    .unwrap()
}

#[test]
fn flow_census() {
    let listing = cmd_flows(&example()).unwrap();
    let on_graph = listing.triples.iter().filter(|t| t.model.is_empty()).count();
    assert_eq!(on_graph, 7);
    assert_eq!(listing.triples.len() - on_graph, 8);
    assert!(listing.pretty().starts_with("15 triples: 7 on the graph, 8 on subdivided models"));
}

#[test]
fn tree_has_one_triple_and_one_cone() {
    let p = tree_spec().validate().unwrap();
    assert!(cmd_flows(&p).unwrap().triples.len() <= 1);
    let doc = cmd_div_fan(&p, DEFAULT_BOX).unwrap();
    assert_eq!(doc.cones.len(), 1);
    assert_eq!(doc.verification.summary, "pass");
}

#[test]
fn div_fan_document() {
    let doc = cmd_div_fan(&example(), DEFAULT_BOX).unwrap();
    assert!(doc.to_json().contains("\"l1 - 3*l2 = 0\""));
    assert_eq!(doc.verification.summary, "pass");
    assert_eq!(doc.cones.len(), 15);
    // walls on the graph are faces of chambers
    for (i, c) in doc.cones.iter().enumerate() {
        if c.dim == 2 {
            assert!(!doc.faces[i].is_empty(), "{} is a face of nothing", c.label);
        }
    }
}

#[test]
fn rub_fan_document() {
    let doc = cmd_rub_fan(&example(), DEFAULT_BOX).unwrap();
    assert_eq!(doc.verification.summary, "pass");
    let mut rays = vec![vec![0, 1, 2], vec![1, 2, 0], vec![1, 1, 0]];
    rays.sort();
    let special: Vec<_> = doc.cones.iter().filter(|c| c.rays == rays).collect();
    assert_eq!(special.len(), 1);
    assert_eq!(special[0].index, 2);
    assert_eq!(special[0].ordering.as_deref(), Some("v1 < u2 < v2 < v3"));
    // the square splits into two, every other full Div cone stays whole
    let div = cmd_div_fan(&example(), 0).unwrap();
    let square = div.cones.iter().filter(|c| c.dim == 3 && c.rays.len() == 4).count();
    assert_eq!(square, 1);
    let full = div.cones.iter().filter(|c| c.dim == 3).count();
    assert_eq!(doc.cones.len(), full + 1);
    let sibling = doc.cones.iter().find(|c| c.label.contains("v1 < v2 < u2 < v3")).unwrap();
    assert_eq!(sibling.index, 1);
}

#[test]
fn documents_round_trip() {
    for doc in [cmd_div_fan(&example(), 2).unwrap(), cmd_rub_fan(&example(), 2).unwrap()] {
        let text = doc.to_json();
        let parsed = FanDocument::parse(&text).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.to_json(), text);
    }
    let text = to_json(&spec());
    let parsed: ProblemSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&parsed), text);
}

#[test]
fn documents_are_deterministic() {
    let a = cmd_rub_fan(&example(), 3).unwrap().to_json();
    let b = cmd_rub_fan(&example(), 3).unwrap().to_json();
    assert_eq!(a, b);
    assert_eq!(cmd_div_fan(&example(), 3).unwrap().to_json(), cmd_div_fan(&example(), 3).unwrap().to_json());
}

#[test]
fn degree_mismatch_is_rejected() {
    let mut s = spec();
    s.a.insert("1".into(), -3);
    let err = s.validate().unwrap_err();
    assert!(format!("{err:#}").contains("degree mismatch"), "{err:#}");
}

#[test]
fn non_generic_theta_is_rejected() {
    let mut s = spec();
    for v in s.theta.values_mut() {
        *v = "0".into();
    }
    let err = s.validate().unwrap_err();
    assert!(format!("{err:#}").contains("not generic"), "{err:#}");
    let mut s = spec();
    s.theta.insert("v1".into(), "1/4".into());
    assert!(s.validate().is_err());
    let mut s = spec();
    s.theta.clear();
    assert!(s.validate().is_err());
}

#[test]
fn div_slice_has_eight_chambers() {
    let slice = cmd_slice(&cmd_div_fan(&example(), 0).unwrap(), None).unwrap();
    assert_eq!(slice.chambers().count(), 8);
    assert_eq!(slice.regions.iter().filter(|r| r.dim == 2).count(), 7);
    for r in &slice.regions {
        for v in &r.vertices {
            assert!(on_hyperplane(v, &slice.weights));
        }
    }
    let square = slice.chambers().find(|r| r.vertices.len() == 4).unwrap();
    let mut corners: Vec<Vec<&str>> = square.vertices.iter().map(|v| v.iter().map(String::as_str).collect()).collect();
    corners.sort();
    assert_eq!(
        corners,
        vec![vec!["0", "1/2", "1/2"], vec!["0", "1/3", "2/3"], vec!["1/2", "1/2", "0"], vec!["1/3", "2/3", "0"]]
    );
    // the two corners on l1 = 0 are consecutive around the boundary
    let on_l1: Vec<usize> = (0..4).filter(|&i| square.vertices[i][0] == "0").collect();
    assert!(matches!(on_l1[1] - on_l1[0], 1 | 3));
    let svg = render_svg(&slice);
    assert!(svg.starts_with("<svg") && svg.matches("<polygon").count() == 8);
}

#[test]
fn orthant_slice_is_the_triangle() {
    let mut doc = cmd_div_fan(&example(), 0).unwrap();
    doc.cones.retain(|c| c.dim == 3);
    doc.cones.truncate(1);
    doc.cones[0].rays = vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
    let slice = cmd_slice(&doc, None).unwrap();
    assert_eq!(slice.regions[0].vertices.len(), 3);
    assert!(cmd_slice(&doc, Some(&[1, 0, 1])).is_err());
    let weighted = cmd_slice(&doc, Some(&[1, 2, 4])).unwrap();
    assert!(weighted.regions[0].vertices.iter().any(|v| v == &["0", "0", "1/4"]));
}

#[test]
fn check_passes_and_negative_control_fails() {
    let p = example();
    let report = cmd_check(&p, DEFAULT_BOX, None).unwrap();
    assert!(report.passed, "{}", report.pretty());
    let broken = cmd_check(&p, DEFAULT_BOX, Some(3)).unwrap();
    assert!(!broken.passed);
    let failed: Vec<_> = broken.checks.iter().filter(|c| !c.passed).collect();
    assert!(failed.iter().any(|c| c.name.starts_with("div:") && c.witness.as_deref().is_some_and(|w| w.contains("point"))));
    assert!(cmd_check(&p, DEFAULT_BOX, Some(99)).is_err());
}

#[test]
fn check_with_empty_box_still_runs() {
    let report = cmd_check(&example(), 0, None).unwrap();
    assert!(report.passed);
    assert!(report.checks.iter().any(|c| c.name == "rub: maximal cones are smooth"));
}

#[test]
fn suggested_theta_validates() {
    let mut s = spec();
    s.theta.clear();
    let filled = cmd_suggest_theta(&s, &[-1, 1, 1]).unwrap();
    assert_eq!(filled.theta["v1"], "-1/4");
    assert!(filled.validate().is_ok());
    assert!(cmd_suggest_theta(&s, &[-1, 1]).is_err());
}

#[test]
fn binary_writes_documents() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rub.json");
    let svg = dir.path().join("rub.svg");
    let bin = env!("CARGO_BIN_EXE_twistfan");
    let status = Command::new(bin)
        .args(["rub-fan", "--box", "2", "--input"])
        .arg(example_path())
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let doc = FanDocument::read(&out).unwrap();
    assert_eq!(doc.cones.len(), 9);
    let slice_out = Command::new(bin).arg("slice").arg("--input").arg(&out).arg("--svg").arg(&svg).output().unwrap();
    assert!(slice_out.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polygon"));
    assert!(!String::from_utf8_lossy(&slice_out.stdout).contains('.'), "slice data must be exact");

    let bad = dir.path().join("bad.json");
    let mut s = spec();
    s.a.insert("2".into(), 4);
    std::fs::write(&bad, to_json(&s)).unwrap();
    let res = Command::new(bin).args(["flows", "--input"]).arg(&bad).output().unwrap();
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("degree mismatch"));
}

//! Every generic condition with the sign pattern (-, +, +) on the triangle
//! gives the same fans as the shipped default.

use std::collections::BTreeMap;

use twistfan::flow::a_divisor;
use twistfan::polyhedra::Int;
use twistfan::stability::validate_theta;
use twistfan::{build_rub_fan, Graph, StabilityCondition, Vertex};

type Shape = (Vec<Vec<Vec<Int>>>, Vec<(Vec<Vec<Int>>, Int)>);

fn shape(theta: &[&str]) -> Shape {
    let g = Graph::from_ids(
        vec![Vertex::new("v1", 0, &["1"]), Vertex::new("v2", 0, &["3"]), Vertex::new("v3", 0, &["2"])],
        &[("1", "v1", "v2"), ("2", "v1", "v3"), ("3", "v2", "v3")],
    )
    .unwrap();
    let a: BTreeMap<String, i64> = [("1", -4), ("2", 3), ("3", 1)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let a = a_divisor(&g, &a, 0).unwrap();
    let theta = StabilityCondition::parse(theta).unwrap();
    validate_theta(&g, &theta, 0).unwrap();
    let rub = build_rub_fan(&g, &a, &theta).unwrap();
    let mut div: Vec<_> = rub.div.cones.iter().map(|c| c.cone.base.rays().to_vec()).collect();
    let mut maximal: Vec<_> = rub
        .cones
        .iter()
        .map(|c| (c.cone.base.rays().to_vec(), c.lattice.as_ref().unwrap().index()))
        .collect();
    div.sort();
    maximal.sort();
    (div, maximal)
}

#[test]
fn fans_are_constant_on_the_chamber() {
    let reference = shape(&["-1/4", "1/8", "1/8"]);
    for theta in [
        ["-1/2", "1/4", "1/4"],
        ["-1/16", "1/32", "1/32"],
        ["-1/4", "1/12", "1/6"],
        ["-1/4", "1/6", "1/12"],
        ["-9/10", "1/2", "2/5"],
        ["-1/100", "1/300", "1/150"],
    ] {
        assert_eq!(shape(&theta), reference, "theta {theta:?}");
    }
}

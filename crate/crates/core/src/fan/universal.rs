use super::twist::own_twist_cone;
use crate::error::Result;
use crate::flow::Flow;
use crate::graph::{Edge, Graph, Vertex};
use crate::polyhedra::Cone;

/// Where the new marking of the universal curve sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
}

/// Cones of the universal family over the twist cone of `f`: the cone itself
/// for each vertex, and for each edge the twist cone of the graph with that
/// edge split in two, the slope carried across the new vertex.
pub fn universal_family_cones(g: &Graph, f: &Flow) -> Result<Vec<(Cell, Cone)>> {
    let base = own_twist_cone(g, f)?;
    let mut out: Vec<(Cell, Cone)> = (0..g.vertex_count()).map(|v| (Cell::Vertex(v), base.clone())).collect();
    for e in 0..g.edge_count() {
        let (split, flow) = split_edge(g, f, e)?;
        out.push((Cell::Edge(e), own_twist_cone(&split, &flow)?));
    }
    Ok(out)
}

fn split_edge(g: &Graph, f: &Flow, e: usize) -> Result<(Graph, Flow)> {
    let mut vertices = g.vertices().to_vec();
    let mut id = format!("p{}", g.edge(e).id);
    while vertices.iter().any(|v| v.id == id) {
        id.push('\'');
    }
    let mut leg = String::from("*");
    while g.legs().any(|(l, _)| l == leg) {
        leg.push('*');
    }
    let p = vertices.len();
    vertices.push(Vertex { id, genus: 0, legs: vec![leg] });
    let mut edges = Vec::new();
    let mut slopes = Vec::new();
    for (i, edge) in g.edges().iter().enumerate() {
        if i == e {
            edges.push(Edge { id: format!("{}'", edge.id), tail: edge.tail, head: p });
            edges.push(Edge { id: format!("{}''", edge.id), tail: p, head: edge.head });
            slopes.extend([f.0[i], f.0[i]]);
        } else {
            edges.push(edge.clone());
            slopes.push(f.0[i]);
        }
    }
    Ok((Graph::new(vertices, edges)?, Flow(slopes)))
}

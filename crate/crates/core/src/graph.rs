//! Labeled dual graphs with genus and leg decorations, together with the
//! contraction and subdivision calculus the rest of the crate builds on.
//!
//! Vertices, edges and legs carry string ids; internally everything is
//! addressed by position. Every edge has a reference orientation
//! `tail -> head`, and loops (`tail == head`) and parallel edges are allowed.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    pub legs: Vec<String>,
}

impl Vertex {
    pub fn new(id: impl Into<String>, genus: u32, legs: &[&str]) -> Self {
        Vertex {
            id: id.into(),
            genus,
            legs: legs.iter().map(|l| l.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The endpoint opposite to `v`; for loops this is `v` itself.
    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// A connected labeled multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

impl Graph {
    /// Builds a graph from vertices and `(id, tail, head)` index triples.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Invalid("graph has no vertices".into()));
        }
        let mut seen = HashSet::new();
        for v in &vertices {
            if !seen.insert(v.id.clone()) {
                return Err(Error::DuplicateId {
                    kind: "vertex",
                    id: v.id.clone(),
                });
            }
        }
        let mut seen = HashSet::new();
        for e in &edges {
            if !seen.insert(e.id.clone()) {
                return Err(Error::DuplicateId {
                    kind: "edge",
                    id: e.id.clone(),
                });
            }
            if e.tail >= vertices.len() || e.head >= vertices.len() {
                return Err(Error::Invalid(format!("edge `{}` has a dangling endpoint", e.id)));
            }
        }
        let mut seen = HashSet::new();
        for leg in vertices.iter().flat_map(|v| v.legs.iter()) {
            if !seen.insert(leg.clone()) {
                return Err(Error::DuplicateId {
                    kind: "leg",
                    id: leg.clone(),
                });
            }
        }
        let mut uf = UnionFind::new(vertices.len());
        let mut components = vertices.len();
        for e in &edges {
            if uf.union(e.tail, e.head) {
                components -= 1;
            }
        }
        if components != 1 {
            return Err(Error::Disconnected);
        }
        Ok(Graph { vertices, edges })
    }

    /// Builds a graph with edges given by endpoint ids.
    pub fn from_ids(vertices: Vec<Vertex>, edges: &[(&str, &str, &str)]) -> Result<Self> {
        let index = |id: &str| {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let edges = edges
            .iter()
            .map(|&(id, a, b)| {
                Ok(Edge {
                    id: id.to_string(),
                    tail: index(a)?,
                    head: index(b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::new(vertices, edges)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn leg_vertex(&self, leg: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.legs.iter().any(|l| l == leg))
            .ok_or_else(|| Error::UnknownLeg(leg.to_string()))
    }

    pub fn legs(&self) -> impl Iterator<Item = (&str, usize)> {
        self.vertices
            .iter()
            .enumerate()
            .flat_map(|(v, vx)| vx.legs.iter().map(move |l| (l.as_str(), v)))
    }

    /// The vertex carrying the smallest leg id under [`compare_ids`].
    pub fn first_leg_vertex(&self) -> Result<usize> {
        self.legs()
            .min_by(|a, b| compare_ids(a.0, b.0))
            .map(|(_, v)| v)
            .ok_or(Error::NoLeg)
    }

    /// Number of edge ends at `v`; a loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    /// Edges with at least one endpoint at `v`.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].tail == v || self.edges[e].head == v)
            .collect()
    }

    pub fn first_betti(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// `(h1, genus)` with `genus = h1 + sum of vertex genera`.
    pub fn betti_and_genus(&self) -> (i64, i64) {
        let h1 = self.first_betti();
        let g = h1 + self.vertices.iter().map(|v| v.genus as i64).sum::<i64>();
        (h1, g)
    }

    pub fn genus(&self) -> i64 {
        self.betti_and_genus().1
    }

    /// Every vertex satisfies `2g(v) - 2 + valence(v) + legs(v) > 0`.
    pub fn is_stable(&self) -> bool {
        (0..self.vertices.len()).all(|v| {
            let vx = &self.vertices[v];
            2 * vx.genus as i64 - 2 + self.valence(v) as i64 + vx.legs.len() as i64 > 0
        })
    }

    /// Edges of a spanning tree, chosen greedily in edge order.
    pub fn spanning_tree(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertices.len());
        (0..self.edges.len())
            .filter(|&e| uf.union(self.edges[e].tail, self.edges[e].head))
            .collect()
    }

    /// Contracts the edges with the given indices.
    pub fn contract(&self, edges: &[usize]) -> Result<Contraction> {
        let contracted: BTreeSet<usize> = edges.iter().copied().collect();
        if let Some(&bad) = contracted.iter().find(|&&e| e >= self.edges.len()) {
            return Err(Error::UnknownEdge(format!("#{bad}")));
        }
        let mut uf = UnionFind::new(self.vertices.len());
        for &e in &contracted {
            uf.union(self.edges[e].tail, self.edges[e].head);
        }
        // Target vertices are the classes, ordered by their smallest member.
        let mut class_of = vec![usize::MAX; self.vertices.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.vertices.len() {
            let root = uf.find(v);
            if class_of[root] == usize::MAX {
                class_of[root] = members.len();
                members.push(Vec::new());
            }
            class_of[v] = class_of[root];
            members[class_of[v]].push(v);
        }
        let mut inner_edges = vec![0i64; members.len()];
        for &e in &contracted {
            inner_edges[class_of[self.edges[e].tail]] += 1;
        }
        let target_vertices = members
            .iter()
            .enumerate()
            .map(|(c, vs)| {
                let genus: i64 = vs.iter().map(|&v| self.vertices[v].genus as i64).sum::<i64>()
                    + inner_edges[c]
                    - (vs.len() as i64 - 1);
                Vertex {
                    id: vs
                        .iter()
                        .map(|&v| self.vertices[v].id.as_str())
                        .collect::<Vec<_>>()
                        .join("+"),
                    genus: genus as u32,
                    legs: vs
                        .iter()
                        .flat_map(|&v| self.vertices[v].legs.iter().cloned())
                        .collect(),
                }
            })
            .collect();
        let mut edge_map = vec![None; self.edges.len()];
        let mut target_edges = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if contracted.contains(&e) {
                continue;
            }
            edge_map[e] = Some(target_edges.len());
            target_edges.push(Edge {
                id: edge.id.clone(),
                tail: class_of[edge.tail],
                head: class_of[edge.head],
            });
        }
        let target = Graph::new(target_vertices, target_edges)?;
        Ok(Contraction {
            source: self.clone(),
            target,
            edge_map,
            vertex_map: (0..self.vertices.len()).map(|v| class_of[v]).collect(),
        })
    }

    pub fn contract_ids(&self, ids: &[&str]) -> Result<Contraction> {
        let edges = ids
            .iter()
            .map(|id| self.edge_index(id))
            .collect::<Result<Vec<_>>>()?;
        self.contract(&edges)
    }

    /// The quasi-stable model subdividing exactly the given edges once.
    pub fn quasi_stable_model(&self, subdivided: &[usize]) -> Result<QuasiStableModel> {
        let chosen: BTreeSet<usize> = subdivided.iter().copied().collect();
        if let Some(&bad) = chosen.iter().find(|&&e| e >= self.edges.len()) {
            return Err(Error::UnknownEdge(format!("#{bad}")));
        }
        let mut used: HashSet<String> = self.vertices.iter().map(|v| v.id.clone()).collect();
        let mut vertices = self.vertices.clone();
        let mut exceptional = vec![false; vertices.len()];
        let mut vertex_map: Vec<Option<usize>> = (0..vertices.len()).map(Some).collect();
        let mut edges = Vec::new();
        let mut fibers = Vec::with_capacity(self.edges.len());
        for (e, edge) in self.edges.iter().enumerate() {
            if !chosen.contains(&e) {
                fibers.push(vec![edges.len()]);
                edges.push(edge.clone());
                continue;
            }
            let mut uid = format!("u{}", edge.id);
            while !used.insert(uid.clone()) {
                uid.push('\'');
            }
            let u = vertices.len();
            vertices.push(Vertex {
                id: uid,
                genus: 0,
                legs: Vec::new(),
            });
            exceptional.push(true);
            vertex_map.push(None);
            // The single-primed half touches the lexicographically smaller endpoint.
            let tail_first =
                self.vertices[edge.tail].id <= self.vertices[edge.head].id;
            let (tail_half, head_half) = if tail_first {
                (format!("{}'", edge.id), format!("{}''", edge.id))
            } else {
                (format!("{}''", edge.id), format!("{}'", edge.id))
            };
            fibers.push(vec![edges.len(), edges.len() + 1]);
            edges.push(Edge {
                id: tail_half,
                tail: edge.tail,
                head: u,
            });
            edges.push(Edge {
                id: head_half,
                tail: u,
                head: edge.head,
            });
        }
        let source = Graph::new(vertices, edges)?;
        Ok(QuasiStableModel {
            subdivided: chosen.into_iter().collect(),
            subdivision: Subdivision::new(source, self.clone(), exceptional, vertex_map, fibers)?,
        })
    }

    /// One model per subset of edges, in binary-counter order over edge indices.
    pub fn quasi_stable_models(&self) -> Vec<QuasiStableModel> {
        let m = self.edges.len();
        (0u64..(1u64 << m))
            .map(|mask| {
                let subset: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
                self.quasi_stable_model(&subset)
                    .expect("subdividing existing edges of a valid graph")
            })
            .collect()
    }
}

/// Orders ids numerically when both parse as integers, else lexicographically.
pub fn compare_ids(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub source: Graph,
    pub target: Graph,
    /// `None` exactly on contracted edges.
    pub edge_map: Vec<Option<usize>>,
    pub vertex_map: Vec<usize>,
}

impl Contraction {
    pub fn identity(g: &Graph) -> Contraction {
        Contraction {
            source: g.clone(),
            target: g.clone(),
            edge_map: (0..g.edge_count()).map(Some).collect(),
            vertex_map: (0..g.vertex_count()).collect(),
        }
    }

    pub fn contracted_edges(&self) -> Vec<usize> {
        (0..self.edge_map.len())
            .filter(|&e| self.edge_map[e].is_none())
            .collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Contraction) -> Result<Contraction> {
        if self.target != next.source {
            return Err(Error::GraphMismatch);
        }
        Ok(Contraction {
            source: self.source.clone(),
            target: next.target.clone(),
            edge_map: self
                .edge_map
                .iter()
                .map(|e| e.and_then(|e| next.edge_map[e]))
                .collect(),
            vertex_map: self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
        })
    }
}

/// A refinement `source -> target` obtained by inserting bivalent vertices on edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub source: Graph,
    pub target: Graph,
    pub exceptional: Vec<bool>,
    /// Target vertex of each non-exceptional source vertex.
    pub vertex_map: Vec<Option<usize>>,
    /// For each target edge, the source edges along it from target tail to target head.
    /// Each source edge is oriented along the path.
    pub edge_fibers: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn new(
        source: Graph,
        target: Graph,
        exceptional: Vec<bool>,
        vertex_map: Vec<Option<usize>>,
        edge_fibers: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let s = Subdivision {
            source,
            target,
            exceptional,
            vertex_map,
            edge_fibers,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn identity(g: &Graph) -> Subdivision {
        Subdivision {
            source: g.clone(),
            target: g.clone(),
            exceptional: vec![false; g.vertex_count()],
            vertex_map: (0..g.vertex_count()).map(Some).collect(),
            edge_fibers: (0..g.edge_count()).map(|e| vec![e]).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSubdivision(msg));
        let src = &self.source;
        if self.exceptional.len() != src.vertex_count()
            || self.vertex_map.len() != src.vertex_count()
            || self.edge_fibers.len() != self.target.edge_count()
        {
            return bad("table sizes do not match the graphs".into());
        }
        for v in 0..src.vertex_count() {
            let vx = src.vertex(v);
            if self.exceptional[v] {
                if vx.genus != 0 || !vx.legs.is_empty() || src.valence(v) != 2 {
                    return bad(format!("exceptional vertex `{}` is not bivalent, genus 0, legless", vx.id));
                }
                if self.vertex_map[v].is_some() {
                    return bad(format!("exceptional vertex `{}` is mapped", vx.id));
                }
            } else {
                match self.vertex_map[v] {
                    Some(t) if t < self.target.vertex_count() => {
                        let tv = self.target.vertex(t);
                        if tv.genus != vx.genus || tv.legs != vx.legs {
                            return bad(format!("vertex `{}` decorations differ", vx.id));
                        }
                    }
                    _ => return bad(format!("vertex `{}` is unmapped", vx.id)),
                }
            }
        }
        let mut covered = vec![false; src.edge_count()];
        for (t, fiber) in self.edge_fibers.iter().enumerate() {
            let te = self.target.edge(t);
            if fiber.is_empty() {
                return bad(format!("edge `{}` has an empty fiber", te.id));
            }
            let mut at = None;
            for (i, &se) in fiber.iter().enumerate() {
                if se >= src.edge_count() || std::mem::replace(&mut covered[se], true) {
                    return bad(format!("fiber of `{}` reuses or misses an edge", te.id));
                }
                let edge = src.edge(se);
                if i == 0 && self.vertex_map[edge.tail] != Some(te.tail) {
                    return bad(format!("fiber of `{}` does not start at its tail", te.id));
                }
                if let Some(prev) = at {
                    if edge.tail != prev || !self.exceptional[prev] {
                        return bad(format!("fiber of `{}` is not a path", te.id));
                    }
                }
                at = Some(edge.head);
            }
            if at.and_then(|h| self.vertex_map[h]) != Some(te.head) {
                return bad(format!("fiber of `{}` does not end at its head", te.id));
            }
        }
        if covered.iter().any(|c| !c) {
            return bad("some source edge lies in no fiber".into());
        }
        if self.vertex_map.iter().flatten().collect::<HashSet<_>>().len()
            != self.target.vertex_count()
        {
            return bad("vertex map is not a bijection onto the target".into());
        }
        Ok(())
    }

    /// Target edge containing each source edge.
    pub fn parent_edges(&self) -> Vec<usize> {
        let mut parent = vec![0; self.source.edge_count()];
        for (t, fiber) in self.edge_fibers.iter().enumerate() {
            for &se in fiber {
                parent[se] = t;
            }
        }
        parent
    }

    pub fn exceptional_vertices(&self) -> Vec<usize> {
        (0..self.exceptional.len()).filter(|&v| self.exceptional[v]).collect()
    }

    /// Deletes the exceptional vertices and concatenates their edges.
    pub fn stabilize(&self) -> Result<Graph> {
        let keep: Vec<usize> = (0..self.source.vertex_count())
            .filter(|&v| !self.exceptional[v])
            .collect();
        let mut vertices = vec![None; self.target.vertex_count()];
        for &v in &keep {
            vertices[self.vertex_map[v].expect("validated")] = Some(self.source.vertex(v).clone());
        }
        let vertices: Vec<Vertex> = vertices.into_iter().map(|v| v.expect("bijective")).collect();
        let edges = self
            .edge_fibers
            .iter()
            .enumerate()
            .map(|(t, fiber)| {
                let first = self.source.edge(fiber[0]);
                let last = self.source.edge(*fiber.last().expect("nonempty"));
                Edge {
                    id: self.target.edge(t).id.clone(),
                    tail: self.vertex_map[first.tail].expect("validated"),
                    head: self.vertex_map[last.head].expect("validated"),
                }
            })
            .collect();
        Graph::new(vertices, edges)
    }

    /// At most one exceptional vertex per target edge and a stable target.
    pub fn is_quasi_stable(&self) -> bool {
        self.target.is_stable() && self.edge_fibers.iter().all(|f| f.len() <= 2)
    }
}

/// A subdivision with at most one exceptional vertex per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiStableModel {
    /// Indices of target edges carrying an exceptional vertex.
    pub subdivided: Vec<usize>,
    pub subdivision: Subdivision,
}

impl QuasiStableModel {
    pub fn graph(&self) -> &Graph {
        &self.subdivision.source
    }

    pub fn base(&self) -> &Graph {
        &self.subdivision.target
    }

    pub fn is_trivial(&self) -> bool {
        self.subdivided.is_empty()
    }

    pub fn is_exceptional(&self, v: usize) -> bool {
        self.subdivision.exceptional[v]
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn triangle() -> Graph {
        Graph::from_ids(
            vec![
                Vertex::new("v1", 0, &["1"]),
                Vertex::new("v2", 0, &["3"]),
                Vertex::new("v3", 0, &["2"]),
            ],
            &[("1", "v1", "v2"), ("2", "v1", "v3"), ("3", "v2", "v3")],
        )
        .unwrap()
    }

    #[test]
    fn betti_numbers() {
        let single = Graph::new(vec![Vertex::new("v", 1, &[])], vec![]).unwrap();
        assert_eq!(single.betti_and_genus(), (0, 1));
        assert_eq!(triangle().betti_and_genus(), (1, 1));
        let banana = Graph::from_ids(
            vec![Vertex::new("a", 1, &[]), Vertex::new("b", 0, &[])],
            &[("1", "a", "b"), ("2", "a", "b")],
        )
        .unwrap();
        assert_eq!(banana.betti_and_genus(), (1, 2));
    }

    #[test]
    fn rejects_bad_graphs() {
        let disconnected = Graph::new(
            vec![Vertex::new("a", 0, &[]), Vertex::new("b", 0, &[])],
            vec![],
        );
        assert_eq!(disconnected, Err(Error::Disconnected));
        let dup = Graph::new(vec![Vertex::new("a", 0, &["1", "1"])], vec![]);
        assert!(matches!(dup, Err(Error::DuplicateId { kind: "leg", .. })));
    }

    #[test]
    fn contract_triangle_edge() {
        let g = triangle();
        let c = g.contract_ids(&["1"]).unwrap();
        assert_eq!(c.target.vertex_count(), 2);
        assert_eq!(c.target.edge_count(), 2);
        assert_eq!(c.target.first_betti(), 1);
        assert_eq!(c.target.genus(), g.genus());
        assert_eq!(c.target.vertex(0).id, "v1+v2");
        assert_eq!(c.edge_map, vec![None, Some(0), Some(1)]);
    }

    #[test]
    fn contract_nothing_is_identity() {
        let g = triangle();
        assert_eq!(g.contract(&[]).unwrap(), Contraction::identity(&g));
    }

    #[test]
    fn contracting_a_loop_raises_genus() {
        let g = Graph::from_ids(vec![Vertex::new("v", 0, &["1"])], &[("l", "v", "v")]).unwrap();
        let c = g.contract_ids(&["l"]).unwrap();
        assert_eq!(c.target.vertex(0).genus, 1);
        assert_eq!(c.target.edge_count(), 0);
        assert!(matches!(g.contract_ids(&["nope"]), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn contraction_composes() {
        let g = triangle();
        let first = g.contract_ids(&["1"]).unwrap();
        let second = first.target.contract_ids(&["3"]).unwrap();
        let composed = first.then(&second).unwrap();
        let direct = g.contract_ids(&["1", "3"]).unwrap();
        assert_eq!(composed.edge_map, direct.edge_map);
        assert_eq!(composed.vertex_map, direct.vertex_map);
        assert_eq!(composed.target.vertex(0).genus, direct.target.vertex(0).genus);
        assert_eq!(composed.target.edges().len(), direct.target.edges().len());
    }

    #[test]
    fn quasi_stable_model_counts() {
        assert_eq!(triangle().quasi_stable_models().len(), 8);
        let point = Graph::new(vec![Vertex::new("v", 1, &["1"])], vec![]).unwrap();
        assert_eq!(point.quasi_stable_models().len(), 1);
        let segment = Graph::from_ids(
            vec![Vertex::new("a", 1, &[]), Vertex::new("b", 1, &[])],
            &[("1", "a", "b")],
        )
        .unwrap();
        assert_eq!(segment.quasi_stable_models().len(), 2);
    }

    #[test]
    fn models_stabilize_back() {
        let g = triangle();
        for model in g.quasi_stable_models() {
            let s = &model.subdivision;
            assert_eq!(s.stabilize().unwrap(), g);
            assert!(s.is_quasi_stable());
            assert_eq!(model.graph().genus(), g.genus());
            for u in s.exceptional_vertices() {
                assert_eq!(model.graph().valence(u), 2);
            }
        }
    }

    #[test]
    fn half_naming_follows_smaller_endpoint() {
        let g = triangle();
        let model = g.quasi_stable_model(&[1]).unwrap();
        let src = model.graph();
        let half = src.edge(src.edge_index("2'").unwrap());
        assert_eq!(src.vertex(half.tail).id, "v1");
        assert_eq!(src.vertex(half.head).id, "u2");
    }

    #[test]
    fn stability_predicates() {
        let g = triangle();
        assert!(g.is_stable());
        let point = Graph::new(vec![Vertex::new("v", 1, &["1"])], vec![]).unwrap();
        assert!(point.is_stable());
        let model = g.quasi_stable_model(&[0]).unwrap();
        assert!(!model.graph().is_stable());
        assert!(model.subdivision.is_quasi_stable());
    }
}

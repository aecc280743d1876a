//! Divisors and flows on graphs: the divisor map, cycle space, acyclicity,
//! induced partial orders, enumeration of acyclic flows with a prescribed
//! divisor, minimal models and specialization under contraction.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Contraction, Edge, Graph, Subdivision, UnionFind, Vertex};

/// Integer value per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor(pub Vec<i64>);

impl Divisor {
    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn sum_over(&self, set: &[usize]) -> i64 {
        set.iter().map(|&v| self.0[v]).sum()
    }
}

impl std::ops::Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Slopes on the reference orientation of each edge; the reversed orientation
/// carries the negated value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flow(pub Vec<i64>);

impl Flow {
    pub fn zero(m: usize) -> Self {
        Flow(vec![0; m])
    }

    pub fn slopes(&self) -> &[i64] {
        &self.0
    }

    pub fn slope(&self, e: usize) -> i64 {
        self.0[e]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }
}

/// `ord_v` is the sum of slopes on edges oriented into `v`.
pub fn div_of_flow(g: &Graph, f: &Flow) -> Divisor {
    let mut d = vec![0i64; g.vertex_count()];
    for (e, edge) in g.edges().iter().enumerate() {
        d[edge.head] += f.0[e];
        d[edge.tail] -= f.0[e];
    }
    Divisor(d)
}

/// Fundamental cycles of the greedy spanning tree, one per non-tree edge.
/// Each is oriented along its non-tree edge and takes values in {-1, 0, 1}.
pub fn cycle_basis(g: &Graph) -> Vec<Flow> {
    let tree = g.spanning_tree();
    let mut in_tree = vec![false; g.edge_count()];
    for &e in &tree {
        in_tree[e] = true;
    }
    // Parent pointers from a BFS over the tree rooted at vertex 0.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count()];
    let mut depth = vec![usize::MAX; g.vertex_count()];
    depth[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &e in &tree {
            let edge = g.edge(e);
            if edge.tail != v && edge.head != v {
                continue;
            }
            let w = edge.other(v);
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    let mut basis = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        let mut flow = vec![0i64; g.edge_count()];
        flow[e] = 1;
        // Walk head -> tail through the tree, adding each step in travel direction.
        let (mut a, mut b) = (edge.head, edge.tail);
        let mut from_a = Vec::new();
        let mut from_b = Vec::new();
        while a != b {
            if depth[a] >= depth[b] {
                let (p, pe) = parent[a].expect("non-root has parent");
                from_a.push((a, p, pe));
                a = p;
            } else {
                let (p, pe) = parent[b].expect("non-root has parent");
                from_b.push((p, b, pe));
                b = p;
            }
        }
        for (x, y, te) in from_a.into_iter().chain(from_b.into_iter().rev()) {
            let tedge = g.edge(te);
            flow[te] += if tedge.tail == x && tedge.head == y { 1 } else { -1 };
        }
        basis.push(Flow(flow));
    }
    basis
}

/// Classes of vertices joined by zero-slope edges.
pub(crate) fn contracted_classes(g: &Graph, f: &Flow) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::new(g.vertex_count());
    for (e, edge) in g.edges().iter().enumerate() {
        if f.0[e] == 0 {
            uf.union(edge.tail, edge.head);
        }
    }
    let mut class = vec![usize::MAX; g.vertex_count()];
    let mut count = 0;
    for v in 0..g.vertex_count() {
        let r = uf.find(v);
        if class[r] == usize::MAX {
            class[r] = count;
            count += 1;
        }
        class[v] = class[r];
    }
    (class, count)
}

/// Arcs `(from, to)` between contracted classes, oriented by positive slope.
fn class_arcs(g: &Graph, f: &Flow, class: &[usize]) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|&(e, _)| f.0[e] != 0)
        .map(|(e, edge)| {
            let (a, b) = (class[edge.tail], class[edge.head]);
            if f.0[e] > 0 {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

/// Acyclic after contracting the zero-slope edges and orienting the rest by
/// positive slope.
pub fn is_acyclic(g: &Graph, f: &Flow) -> bool {
    let (class, n) = contracted_classes(g, f);
    let arcs = class_arcs(g, f, &class);
    if arcs.iter().any(|(a, b)| a == b) {
        return false;
    }
    let mut indegree = vec![0usize; n];
    for &(_, b) in &arcs {
        indegree[b] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&c| indegree[c] == 0).collect();
    let mut seen = 0;
    while let Some(c) = ready.pop() {
        seen += 1;
        for &(a, b) in &arcs {
            if a == c {
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    seen == n
}

/// Bound on slope magnitudes of an acyclic flow with the given divisor.
pub fn slope_bound(target: &Divisor) -> i64 {
    target.0.iter().map(|&x| x.max(0)).sum()
}

/// All acyclic flows with divisor `target`, in lexicographic slope order.
///
/// Free slopes live on the non-tree edges of a spanning tree and range over
/// `[-P, P]` with `P` from [`slope_bound`]; tree slopes are then forced by the
/// per-vertex balance. Loops are fixed to zero.
pub fn enumerate_acyclic_flows(g: &Graph, target: &Divisor) -> Vec<Flow> {
    if target.degree() != 0 || target.0.len() != g.vertex_count() {
        return Vec::new();
    }
    let bound = slope_bound(target);
    let tree = g.spanning_tree();
    let mut in_tree = vec![false; g.edge_count()];
    for &e in &tree {
        in_tree[e] = true;
    }
    let free: Vec<usize> = (0..g.edge_count())
        .filter(|&e| !in_tree[e] && !g.edge(e).is_loop())
        .collect();
    let order = tree_postorder(g, &tree);
    let mut out = Vec::new();
    let mut slopes = vec![0i64; g.edge_count()];
    let mut choice = vec![-bound; free.len()];
    loop {
        for (i, &e) in free.iter().enumerate() {
            slopes[e] = choice[i];
        }
        if solve_tree(g, target, &order, &mut slopes, bound) {
            let f = Flow(slopes.clone());
            if is_acyclic(g, &f) {
                out.push(f);
            }
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == free.len() {
                out.sort();
                return out;
            }
            if choice[i] < bound {
                choice[i] += 1;
                break;
            }
            choice[i] = -bound;
            i += 1;
        }
    }
}

/// Non-root vertices with their parent tree edge, children before parents.
fn tree_postorder(g: &Graph, tree: &[usize]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; g.vertex_count()];
    seen[0] = true;
    let mut order = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &e in tree {
            let edge = g.edge(e);
            if edge.tail != v && edge.head != v {
                continue;
            }
            let w = edge.other(v);
            if !seen[w] {
                seen[w] = true;
                order.push((w, e));
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn solve_tree(
    g: &Graph,
    target: &Divisor,
    order: &[(usize, usize)],
    slopes: &mut [i64],
    bound: i64,
) -> bool {
    let mut need = target.0.clone();
    let mut is_tree = vec![false; g.edge_count()];
    for &(_, e) in order {
        is_tree[e] = true;
    }
    for (e, edge) in g.edges().iter().enumerate() {
        if !is_tree[e] {
            need[edge.head] -= slopes[e];
            need[edge.tail] += slopes[e];
        }
    }
    for &(v, e) in order {
        let edge = g.edge(e);
        let parent = edge.other(v);
        // The parent edge must deliver `need[v]` into v.
        let s = if edge.head == v { need[v] } else { -need[v] };
        if s.abs() > bound {
            return false;
        }
        slopes[e] = s;
        need[parent] += need[v];
        need[v] = 0;
    }
    need[0] == 0
}

/// Strict order on the contracted classes of an acyclic flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPartialOrder {
    /// Contracted class of each vertex.
    pub class: Vec<usize>,
    pub class_count: usize,
    /// `below[a][b]` iff class `a` is strictly below class `b`.
    pub below: Vec<Vec<bool>>,
}

impl FlowPartialOrder {
    pub fn less(&self, v: usize, w: usize) -> bool {
        self.below[self.class[v]][self.class[w]]
    }

    pub fn comparable(&self, v: usize, w: usize) -> bool {
        v == w || self.less(v, w) || self.less(w, v)
    }

    pub fn class_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.class_count];
        for (v, &c) in self.class.iter().enumerate() {
            members[c].push(v);
        }
        members
    }
}

/// Transitive closure of `tail < head` over positive-slope orientations.
pub fn flow_partial_order(g: &Graph, f: &Flow) -> Result<FlowPartialOrder> {
    if !is_acyclic(g, f) {
        return Err(Error::CyclicFlow);
    }
    let (class, n) = contracted_classes(g, f);
    let mut below = vec![vec![false; n]; n];
    for (a, b) in class_arcs(g, f, &class) {
        below[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if below[i][k] {
                let row = below[k].clone();
                for (j, &r) in row.iter().enumerate() {
                    if r {
                        below[i][j] = true;
                    }
                }
            }
        }
    }
    Ok(FlowPartialOrder {
        class,
        class_count: n,
        below,
    })
}

/// Drops every exceptional vertex where `f` has zero divisor and merges the
/// adjacent edges; returns the smaller subdivision and the descended flow.
pub fn minimal_model(sub: &Subdivision, f: &Flow) -> Result<(Subdivision, Flow)> {
    let g = &sub.source;
    if f.0.len() != g.edge_count() {
        return Err(Error::GraphMismatch);
    }
    let ord = div_of_flow(g, f);
    let keep: Vec<bool> = (0..g.vertex_count())
        .map(|v| !sub.exceptional[v] || ord.0[v] != 0)
        .collect();
    let mut new_index = vec![usize::MAX; g.vertex_count()];
    let mut vertices = Vec::new();
    let mut exceptional = Vec::new();
    let mut vertex_map = Vec::new();
    for v in 0..g.vertex_count() {
        if keep[v] {
            new_index[v] = vertices.len();
            vertices.push(g.vertex(v).clone());
            exceptional.push(sub.exceptional[v]);
            vertex_map.push(sub.vertex_map[v]);
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut slopes = Vec::new();
    let mut fibers = Vec::new();
    for (t, fiber) in sub.edge_fibers.iter().enumerate() {
        let mut new_fiber = Vec::new();
        let mut segment: Vec<usize> = Vec::new();
        for (i, &se) in fiber.iter().enumerate() {
            segment.push(se);
            let head = g.edge(se).head;
            if i + 1 == fiber.len() || keep[head] {
                let first = g.edge(segment[0]);
                let id = if segment.len() == fiber.len() {
                    sub.target.edge(t).id.clone()
                } else {
                    segment
                        .iter()
                        .map(|&s| g.edge(s).id.as_str())
                        .collect::<Vec<_>>()
                        .join("+")
                };
                if segment.len() == 1 {
                    edges.push(Edge {
                        id: first.id.clone(),
                        tail: new_index[first.tail],
                        head: new_index[head],
                    });
                } else {
                    edges.push(Edge {
                        id,
                        tail: new_index[first.tail],
                        head: new_index[head],
                    });
                }
                slopes.push(f.0[segment[0]]);
                new_fiber.push(edges.len() - 1);
                segment.clear();
            }
        }
        fibers.push(new_fiber);
    }
    let source = Graph::new(vertices, edges)?;
    let reduced = Subdivision::new(source, sub.target.clone(), exceptional, vertex_map, fibers)?;
    Ok((reduced, Flow(slopes)))
}

/// `A(v) = sum of a_i over legs at v + k (2 g(v) - 2 + valence(v))`.
pub fn a_divisor(g: &Graph, a: &BTreeMap<String, i64>, k: i64) -> Result<Divisor> {
    for leg in a.keys() {
        g.leg_vertex(leg)?;
    }
    let expected = k * (2 * g.genus() - 2);
    let total: i64 = a.values().sum();
    if total != expected {
        return Err(Error::DegreeMismatch {
            expected,
            found: total,
        });
    }
    let mut d = vec![0i64; g.vertex_count()];
    for (v, value) in d.iter_mut().enumerate() {
        let vx: &Vertex = g.vertex(v);
        for leg in &vx.legs {
            *value += a.get(leg).ok_or_else(|| Error::UnknownLeg(leg.clone()))?;
        }
        *value += k * (2 * vx.genus as i64 - 2 + g.valence(v) as i64);
    }
    Ok(Divisor(d))
}

pub fn specialize_divisor(d: &Divisor, c: &Contraction) -> Divisor {
    let mut out = vec![0i64; c.target.vertex_count()];
    for (v, &t) in c.vertex_map.iter().enumerate() {
        out[t] += d.0[v];
    }
    Divisor(out)
}

pub fn specialize_flow(f: &Flow, c: &Contraction) -> Flow {
    let mut out = vec![0i64; c.target.edge_count()];
    for (e, t) in c.edge_map.iter().enumerate() {
        if let Some(t) = t {
            out[*t] = f.0[e];
        }
    }
    Flow(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::triangle;

    fn path3() -> Graph {
        Graph::from_ids(
            vec![
                Vertex::new("a", 0, &["1"]),
                Vertex::new("b", 0, &["2"]),
                Vertex::new("c", 0, &["3"]),
            ],
            &[("1", "a", "b"), ("2", "b", "c")],
        )
        .unwrap()
    }

    /// Literal scan of the slope box, independent of the tree solver.
    fn brute_force(g: &Graph, target: &Divisor) -> Vec<Flow> {
        let bound = slope_bound(target);
        let m = g.edge_count();
        let width = (2 * bound + 1) as usize;
        let mut out = Vec::new();
        for code in 0..width.pow(m as u32) {
            let mut c = code;
            let slopes: Vec<i64> = (0..m)
                .map(|_| {
                    let s = (c % width) as i64 - bound;
                    c /= width;
                    s
                })
                .collect();
            let f = Flow(slopes);
            if div_of_flow(g, &f) == *target && is_acyclic(g, &f) {
                out.push(f);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn divisor_of_flows() {
        let g = triangle();
        assert_eq!(div_of_flow(&g, &Flow::zero(3)), Divisor::zero(3));
        assert_eq!(div_of_flow(&g, &Flow(vec![1, 3, 0])), Divisor(vec![-4, 1, 3]));
        let seg = Graph::from_ids(
            vec![Vertex::new("v", 0, &[]), Vertex::new("w", 0, &[])],
            &[("e", "v", "w")],
        )
        .unwrap();
        assert_eq!(div_of_flow(&seg, &Flow(vec![5])), Divisor(vec![-5, 5]));
    }

    #[test]
    fn cycle_bases() {
        assert!(cycle_basis(&path3()).is_empty());
        let g = triangle();
        let basis = cycle_basis(&g);
        assert_eq!(basis, vec![Flow(vec![1, -1, 1])]);
        assert_eq!(div_of_flow(&g, &basis[0]), Divisor::zero(3));
        let banana = Graph::from_ids(
            vec![Vertex::new("a", 0, &["1"]), Vertex::new("b", 0, &["2"])],
            &[("1", "a", "b"), ("2", "a", "b"), ("3", "b", "a")],
        )
        .unwrap();
        let basis = cycle_basis(&banana);
        assert_eq!(basis.len(), 2);
        for c in &basis {
            assert_eq!(div_of_flow(&banana, c), Divisor::zero(2));
            assert!(c.0.iter().all(|s| s.abs() <= 1));
        }
    }

    #[test]
    fn acyclicity() {
        let g = triangle();
        assert!(is_acyclic(&g, &Flow::zero(3)));
        assert!(is_acyclic(&g, &Flow(vec![1, 3, 0])));
        assert!(!is_acyclic(&g, &Flow(vec![1, -1, 1])));
        // v1 -> v3 -> v2 with the v1-v2 edge contracted closes a cycle.
        assert!(!is_acyclic(&g, &Flow(vec![0, 3, -1])));
    }

    #[test]
    fn enumerate_on_triangle() {
        let g = triangle();
        let flows = enumerate_acyclic_flows(&g, &Divisor(vec![-4, 1, 3]));
        assert_eq!(
            flows,
            vec![Flow(vec![1, 3, 0]), Flow(vec![2, 2, 1]), Flow(vec![3, 1, 2])]
        );
        assert_eq!(
            enumerate_acyclic_flows(&g, &Divisor::zero(3)),
            vec![Flow::zero(3)]
        );
    }

    #[test]
    fn enumerate_on_tree_is_unique() {
        let g = path3();
        let flows = enumerate_acyclic_flows(&g, &Divisor(vec![-2, 1, 1]));
        assert_eq!(flows, vec![Flow(vec![2, 1])]);
    }

    #[test]
    fn enumerate_matches_brute_force() {
        let g = triangle();
        let banana = Graph::from_ids(
            vec![Vertex::new("a", 0, &["1"]), Vertex::new("b", 0, &["2"])],
            &[("1", "a", "b"), ("2", "a", "b"), ("3", "b", "a")],
        )
        .unwrap();
        for target in [
            Divisor(vec![-4, 1, 3]),
            Divisor(vec![-3, 1, 2]),
            Divisor(vec![-3, 0, 3]),
            Divisor(vec![2, -1, -1]),
        ] {
            assert_eq!(enumerate_acyclic_flows(&g, &target), brute_force(&g, &target));
        }
        for target in [Divisor(vec![-3, 3]), Divisor(vec![2, -2]), Divisor(vec![0, 0])] {
            assert_eq!(
                enumerate_acyclic_flows(&banana, &target),
                brute_force(&banana, &target)
            );
        }
    }

    #[test]
    fn partial_orders() {
        let g = triangle();
        let zero = flow_partial_order(&g, &Flow::zero(3)).unwrap();
        assert!(!zero.less(0, 1) && !zero.less(1, 0));
        let po = flow_partial_order(&g, &Flow(vec![1, 3, 0])).unwrap();
        assert!(po.less(0, 1) && po.less(0, 2));
        assert!(!po.comparable(1, 2));
        let chain = flow_partial_order(&path3(), &Flow(vec![1, 1])).unwrap();
        assert!(chain.less(0, 1) && chain.less(1, 2) && chain.less(0, 2));
        assert_eq!(
            flow_partial_order(&g, &Flow(vec![1, -1, 1])),
            Err(Error::CyclicFlow)
        );
    }

    #[test]
    fn minimal_models() {
        let g = triangle();
        let model = g.quasi_stable_model(&[1]).unwrap();
        let src = model.graph();
        let idx = |id: &str| src.edge_index(id).unwrap();
        let mut slopes = vec![0; 4];
        slopes[idx("1")] = 2;
        slopes[idx("2'")] = 1;
        slopes[idx("2''")] = 2;
        slopes[idx("3")] = 1;
        let f = Flow(slopes.clone());
        let u = src.vertex_index("u2").unwrap();
        assert_eq!(div_of_flow(src, &f).0[u], -1);
        let (kept, _) = minimal_model(&model.subdivision, &f).unwrap();
        assert_eq!(kept.exceptional_vertices().len(), 1);

        slopes[idx("2''")] = 1;
        slopes[idx("1")] = 1;
        slopes[idx("3")] = 0;
        let flat = Flow(slopes);
        let (reduced, descended) = minimal_model(&model.subdivision, &flat).unwrap();
        assert!(reduced.exceptional_vertices().is_empty());
        assert_eq!(reduced.source.edge(1).id, "2");
        assert_eq!(descended, Flow(vec![1, 1, 0]));

        let trivial = crate::graph::Subdivision::identity(&g);
        let (same, f2) = minimal_model(&trivial, &Flow(vec![1, 3, 0])).unwrap();
        assert_eq!(same, trivial);
        assert_eq!(f2, Flow(vec![1, 3, 0]));
    }

    #[test]
    fn a_divisors() {
        let g = triangle();
        let a: BTreeMap<String, i64> =
            [("1".into(), -4), ("2".into(), 3), ("3".into(), 1)].into_iter().collect();
        assert_eq!(a_divisor(&g, &a, 0).unwrap(), Divisor(vec![-4, 1, 3]));
        let zero: BTreeMap<String, i64> =
            [("1".into(), 0), ("2".into(), 0), ("3".into(), 0)].into_iter().collect();
        assert_eq!(a_divisor(&g, &zero, 0).unwrap(), Divisor::zero(3));
        let point = Graph::new(vec![Vertex::new("v", 2, &["1"])], vec![]).unwrap();
        let a: BTreeMap<String, i64> = [("1".into(), 2)].into_iter().collect();
        // a_1 + k (2 g(v) - 2 + valence) = 2 + 2.
        assert_eq!(a_divisor(&point, &a, 1).unwrap(), Divisor(vec![4]));
        let bad: BTreeMap<String, i64> = [("1".into(), 1)].into_iter().collect();
        assert!(matches!(
            a_divisor(&point, &bad, 1),
            Err(Error::DegreeMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn specialization() {
        let g = triangle();
        let f = Flow(vec![1, 3, 0]);
        let id = g.contract(&[]).unwrap();
        assert_eq!(specialize_flow(&f, &id), f);
        let c = g.contract_ids(&["3"]).unwrap();
        let sf = specialize_flow(&f, &c);
        assert_eq!(sf, Flow(vec![1, 3]));
        let d = div_of_flow(&g, &f);
        assert_eq!(specialize_divisor(&d, &c), Divisor(vec![-4, 4]));
        assert_eq!(div_of_flow(&c.target, &sf), specialize_divisor(&d, &c));
        let all = g.contract(&[0, 1, 2]).unwrap();
        let a = Divisor(vec![-4, 1, 3]);
        assert_eq!(specialize_divisor(&a, &all), Divisor(vec![0]));
    }
}

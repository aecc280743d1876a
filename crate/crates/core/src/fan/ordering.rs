use std::collections::VecDeque;

use num_rational::BigRational;

use super::twist::{edge_coords, project, ProjectedCone};
use crate::error::{Error, Result};
use crate::flow::{flow_partial_order, Flow, FlowPartialOrder};
use crate::graph::{Graph, QuasiStableModel};
use crate::polyhedra::{Cone, Int, LinearForm};

/// Values of the PL function with slopes `f`, normalized to vanish at `root`,
/// as forms in the edge lengths of `g`. Computed by path sums along a BFS tree.
pub fn alpha_forms(g: &Graph, f: &Flow, root: usize) -> Vec<LinearForm> {
    let m = g.edge_count();
    let mut alpha: Vec<Option<LinearForm>> = vec![None; g.vertex_count()];
    alpha[root] = Some(LinearForm::zero(m));
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for e in g.incident_edges(v) {
            let edge = g.edge(e);
            let w = edge.other(v);
            if alpha[w].is_some() {
                continue;
            }
            let sign = if edge.tail == v { 1 } else { -1 };
            let mut form = alpha[v].clone().expect("visited");
            form.add_scaled(&LinearForm::coordinate(m, e), &BigRational::from_integer(Int::from(sign * f.0[e])));
            alpha[w] = Some(form);
            queue.push_back(w);
        }
    }
    alpha.into_iter().map(|a| a.expect("graph is connected")).collect()
}

/// Path sums from the vertex carrying the first leg.
pub fn alpha_from_first_leg(g: &Graph, f: &Flow) -> Result<Vec<LinearForm>> {
    Ok(alpha_forms(g, f, g.first_leg_vertex()?))
}

/// A weak order on the vertices of a model, listed as blocks from lowest to highest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordering {
    pub blocks: Vec<Vec<usize>>,
}

impl Ordering {
    pub fn block_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in block {
                out[v] = b;
            }
        }
        out
    }

    /// Every block is a single contracted class.
    pub fn is_strict(&self, po: &FlowPartialOrder) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&v| po.class[v] == po.class[b[0]]))
    }

    pub fn describe(&self, g: &Graph) -> String {
        self.blocks
            .iter()
            .map(|b| {
                let ids: Vec<&str> = b.iter().map(|&v| g.vertex(v).id.as_str()).collect();
                if ids.len() == 1 {
                    ids[0].to_string()
                } else {
                    format!("{{{}}}", ids.join("="))
                }
            })
            .collect::<Vec<_>>()
            .join(" < ")
    }

    /// Whether the ordering is compatible with the flow's partial order.
    pub fn extends(&self, po: &FlowPartialOrder) -> bool {
        let n = po.class.len();
        let block = self.block_of(n);
        if block.contains(&usize::MAX) {
            return false;
        }
        (0..n).all(|v| {
            (0..n).all(|w| {
                (po.class[v] != po.class[w] || block[v] == block[w]) && (!po.less(v, w) || block[v] < block[w])
            })
        })
    }
}

fn blocks_from_classes(groups: &[Vec<usize>], members: &[Vec<usize>]) -> Vec<Vec<usize>> {
    groups
        .iter()
        .map(|group| {
            let mut b: Vec<usize> = group.iter().flat_map(|&c| members[c].iter().copied()).collect();
            b.sort();
            b
        })
        .collect()
}

/// Weak orders on the groups compatible with `below` (indexed by group).
fn weak_orders(n: usize, below: &dyn Fn(usize, usize) -> bool, singletons_only: bool) -> Vec<Vec<Vec<usize>>> {
    fn rec(
        remaining: &mut Vec<usize>,
        below: &dyn Fn(usize, usize) -> bool,
        singletons_only: bool,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if remaining.is_empty() {
            out.push(cur.clone());
            return;
        }
        let minimal: Vec<usize> =
            remaining.iter().copied().filter(|&c| !remaining.iter().any(|&d| below(d, c))).collect();
        let k = minimal.len();
        for mask in 1u64..(1u64 << k) {
            if singletons_only && mask.count_ones() != 1 {
                continue;
            }
            let block: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| minimal[i]).collect();
            remaining.retain(|c| !block.contains(c));
            cur.push(block.clone());
            rec(remaining, below, singletons_only, cur, out);
            cur.pop();
            remaining.extend(block);
            remaining.sort();
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), below, singletons_only, &mut Vec::new(), &mut out);
    out
}

/// All weak orders on the contracted classes refining the flow's partial order.
pub fn enumerate_orderings(g: &Graph, f: &Flow) -> Result<Vec<Ordering>> {
    let po = flow_partial_order(g, f)?;
    let members = po.class_members();
    let below = |a: usize, b: usize| po.below[a][b];
    let mut out: Vec<Ordering> = weak_orders(po.class_count, &below, false)
        .iter()
        .map(|groups| Ordering { blocks: blocks_from_classes(groups, &members) })
        .collect();
    out.sort();
    Ok(out)
}

/// Orderings labelling the full-dimensional cones over a twist cone.
///
/// Classes whose values agree on the whole twist cone are merged first; the
/// remaining groups are then totally ordered.
pub fn maximal_orderings(g: &Graph, f: &Flow, twist: &Cone) -> Result<Vec<Ordering>> {
    let po = flow_partial_order(g, f)?;
    let alpha = alpha_from_first_leg(g, f)?;
    let members = po.class_members();
    let rep: Vec<usize> = members.iter().map(|m| m[0]).collect();
    let n = po.class_count;
    let mut group = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for c in 0..n {
        if group[c] != usize::MAX {
            continue;
        }
        group[c] = groups.len();
        let mut g_members = vec![c];
        for d in c + 1..n {
            if group[d] == usize::MAX {
                let diff = &alpha[rep[d]] - &alpha[rep[c]];
                if twist.rays().iter().all(|r| num_traits::Zero::is_zero(&diff.eval_int(r))) {
                    group[d] = groups.len();
                    g_members.push(d);
                }
            }
        }
        groups.push(g_members);
    }
    let k = groups.len();
    let below = |a: usize, b: usize| groups[a].iter().any(|&x| groups[b].iter().any(|&y| po.below[x][y]));
    if (0..k).any(|a| below(a, a)) {
        return Ok(Vec::new());
    }
    let mut out: Vec<Ordering> = weak_orders(k, &below, true)
        .iter()
        .map(|order| {
            let class_groups: Vec<Vec<usize>> = order.iter().map(|b| groups[b[0]].clone()).collect();
            Ordering { blocks: blocks_from_classes(&class_groups, &members) }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Equations and inequalities, as integer rows.
pub type Constraints = (Vec<Vec<Int>>, Vec<Vec<Int>>);

/// Constraints realizing an ordering, as forms on model edge lengths.
pub fn ordering_constraints(g: &Graph, f: &Flow, kappa: &Ordering) -> Result<Constraints> {
    let po = flow_partial_order(g, f)?;
    if !kappa.extends(&po) {
        return Err(Error::IncompatibleOrdering);
    }
    let alpha = alpha_from_first_leg(g, f)?;
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for (i, block) in kappa.blocks.iter().enumerate() {
        for &v in &block[1..] {
            eqs.push((&alpha[v] - &alpha[block[0]]).primitive());
        }
        if i + 1 < kappa.blocks.len() {
            let next = kappa.blocks[i + 1][0];
            ineqs.push((&alpha[next] - &alpha[block[0]]).primitive());
        }
    }
    Ok((eqs, ineqs))
}

/// Twist cone cut by the ordering's path-sum inequalities and block equalities.
pub fn ordering_cone(model: &QuasiStableModel, f: &Flow, kappa: &Ordering, twist: &ProjectedCone) -> Result<ProjectedCone> {
    let g = model.graph();
    let (mut eqs, mut ineqs) = ordering_constraints(g, f, kappa)?;
    eqs.extend(twist.extended.equations().iter().cloned());
    ineqs.extend(twist.extended.inequalities().iter().cloned());
    let extended = Cone::from_int_constraints(edge_coords(g), &eqs, &ineqs);
    project(model, extended)
}

/// Blocks of vertices with equal values at a point, from lowest to highest.
pub fn weak_order_at(values: &[crate::polyhedra::Rat]) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for v in idx {
        match blocks.last_mut() {
            Some(b) if values[b[0]] == values[v] => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    blocks
}

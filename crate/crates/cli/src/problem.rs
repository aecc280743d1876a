use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use twistfan::flow::a_divisor;
use twistfan::stability::validate_theta;
use twistfan::{Divisor, Edge, Graph, StabilityCondition, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub legs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|v| Vertex { id: v.id.clone(), genus: v.genus, legs: v.legs.clone() })
            .collect();
        let index = |id: &str| {
            vertices.iter().position(|v| v.id == id).with_context(|| format!("edge endpoint `{id}` is not a vertex"))
        };
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(Edge { id: e.id.clone(), tail: index(&e.from)?, head: index(&e.to)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Graph::new(vertices, edges)?)
    }
}

/// The input of every command: a graph, leg weights `A`, the twist `k` and a
/// stability condition given per vertex as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub graph: GraphSpec,
    #[serde(rename = "A")]
    pub a: BTreeMap<String, i64>,
    #[serde(default)]
    pub k: i64,
    #[serde(default)]
    pub theta: BTreeMap<String, String>,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub graph: Graph,
    pub a: Divisor,
    pub theta: StabilityCondition,
}

impl ProblemSpec {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Graph and `A` without the stability condition.
    pub fn graph_and_divisor(&self) -> Result<(Graph, Divisor)> {
        let graph = self.graph.build()?;
        let a = a_divisor(&graph, &self.a, self.k).context("invalid A")?;
        Ok((graph, a))
    }

    pub fn validate(&self) -> Result<Problem> {
        let (graph, a) = self.graph_and_divisor()?;
        if self.theta.is_empty() {
            bail!("no stability condition given; `suggest-theta` proposes one");
        }
        for key in self.theta.keys() {
            if graph.vertex_index(key).is_err() {
                bail!("theta names unknown vertex `{key}`");
            }
        }
        let values = graph
            .vertices()
            .iter()
            .map(|v| self.theta.get(&v.id).map(String::as_str).with_context(|| format!("theta misses vertex `{}`", v.id)))
            .collect::<Result<Vec<&str>>>()?;
        let theta = StabilityCondition::parse(&values).context("invalid theta")?;
        validate_theta(&graph, &theta, a.degree()).context("invalid theta")?;
        Ok(Problem { spec: self.clone(), graph, a, theta })
    }
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self> {
        ProblemSpec::read(path)?.validate()
    }
}

//! Abstract Lyapunov graphs: labelled, weighted, oriented multigraphs.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::linalg::{IntMatrix, MatrixError};

/// The chain-recurrent piece sitting at a vertex.
///
/// Saddle-type periodic orbits are written as a suspension of the 1x1 matrix
/// `[1]`; the two orbit variants are reserved for attracting sinks and
/// repelling sources.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Singularity { index: u8 },
    AttractingOrbit,
    RepellingOrbit,
    SuspensionSft { matrix: IntMatrix },
}

impl VertexLabel {
    pub fn singularity(index: u8) -> Result<Self, LabelError> {
        let label = Self::Singularity { index };
        label.validate()?;
        Ok(label)
    }

    pub fn sft(matrix: IntMatrix) -> Result<Self, LabelError> {
        let label = Self::SuspensionSft { matrix };
        label.validate()?;
        Ok(label)
    }

    pub fn validate(&self) -> Result<(), LabelError> {
        match self {
            Self::Singularity { index } if *index > 3 => {
                Err(LabelError::SingularityIndex(*index))
            }
            Self::SuspensionSft { matrix } => {
                matrix.require_square()?;
                matrix.require_nonnegative()?;
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The label seen by the time-reversed flow.
    pub fn reversed(&self) -> Self {
        match self {
            Self::Singularity { index } => Self::Singularity { index: 3 - index },
            Self::AttractingOrbit => Self::RepellingOrbit,
            Self::RepellingOrbit => Self::AttractingOrbit,
            Self::SuspensionSft { matrix } => Self::SuspensionSft {
                matrix: matrix.transpose(),
            },
        }
    }

    pub fn sft_matrix(&self) -> Option<&IntMatrix> {
        match self {
            Self::SuspensionSft { matrix } => Some(matrix),
            _ => None,
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Singularity { index } => write!(f, "index {index} singularity"),
            Self::AttractingOrbit => f.write_str("attracting orbit"),
            Self::RepellingOrbit => f.write_str("repelling orbit"),
            Self::SuspensionSft { matrix } => write!(f, "suspension of {matrix}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("singularity index must be 0..=3, got {0}")]
    SingularityIndex(u8),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("edge {edge} refers to vertex index {index}, but there are only {len} vertices")]
    EdgeOutOfRange { edge: usize, index: usize, len: usize },
    #[error("edge {edge} is a self-loop at `{vertex}`")]
    SelfLoop { edge: usize, vertex: String },
    #[error("vertex `{vertex}`: {source}")]
    InvalidLabel { vertex: String, source: LabelError },
    #[error("graph is not connected")]
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub label: VertexLabel,
}

/// Oriented edge between vertex positions, weighted by the genus of the level
/// surface it stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: u32,
}

/// Vertices and edges keep their declaration order; every report and
/// rendering follows it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LyapunovGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl LyapunovGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut seen = HashMap::with_capacity(vertices.len());
        for v in &vertices {
            if seen.insert(v.id.as_str(), ()).is_some() {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
            v.label.validate().map_err(|source| GraphError::InvalidLabel {
                vertex: v.id.clone(),
                source,
            })?;
        }
        for (i, e) in edges.iter().enumerate() {
            for index in [e.src, e.dst] {
                if index >= vertices.len() {
                    return Err(GraphError::EdgeOutOfRange {
                        edge: i,
                        index,
                        len: vertices.len(),
                    });
                }
            }
            if e.src == e.dst {
                return Err(GraphError::SelfLoop {
                    edge: i,
                    vertex: vertices[e.src].id.clone(),
                });
            }
        }
        Ok(Self { vertices, edges })
    }

    /// Caller guarantees the invariants `new` checks.
    pub(crate) fn from_parts_unchecked(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        Self { vertices, edges }
    }

    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn validate_structure(&self) -> StructureReport {
        validate_structure(self)
    }

    pub fn cycle_rank(&self) -> Result<usize, GraphError> {
        cycle_rank(self)
    }

    pub fn degree_profile(&self, id: &str) -> Result<DegreeProfile, GraphError> {
        degree_profile(self, id)
    }

    pub fn reverse(&self) -> Self {
        reverse(self)
    }

    /// In/out counts and weight sums for every vertex, in vertex order.
    pub fn degree_counts(&self) -> Vec<DegreeCounts> {
        let mut counts = vec![DegreeCounts::default(); self.vertices.len()];
        for e in &self.edges {
            let w = u64::from(e.weight);
            counts[e.dst].e_plus += 1;
            counts[e.dst].g_plus += w;
            counts[e.src].e_minus += 1;
            counts[e.src].g_minus += w;
        }
        counts
    }

    fn undirected_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.vertices.len();
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.src), find(&mut parent, e.dst));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components
    }

    /// One oriented cycle as a closed vertex walk, if any exists.
    fn find_oriented_cycle(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            out[e.src].push(e.dst);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some((v, next)) = stack.last_mut() {
                let v = *v;
                if let Some(&w) = out[v].get(*next) {
                    *next += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            parent[w] = v;
                            stack.push((w, 0));
                        }
                        1 => {
                            let mut cycle = vec![w];
                            let mut cur = v;
                            while cur != w {
                                cycle.push(cur);
                                cur = parent[cur];
                            }
                            cycle.push(w);
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Builds a graph from string ids.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String, u32)>,
}

impl GraphBuilder {
    pub fn vertex(mut self, id: impl Into<String>, label: VertexLabel) -> Self {
        self.vertices.push(Vertex {
            id: id.into(),
            label,
        });
        self
    }

    pub fn edge(mut self, src: impl Into<String>, dst: impl Into<String>, weight: u32) -> Self {
        self.edges.push((src.into(), dst.into(), weight));
        self
    }

    pub fn build(self) -> Result<LyapunovGraph, GraphError> {
        let index: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(id.to_owned()))
        };
        let edges = self
            .edges
            .iter()
            .map(|(s, d, w)| {
                Ok(Edge {
                    src: lookup(s)?,
                    dst: lookup(d)?,
                    weight: *w,
                })
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        LyapunovGraph::new(self.vertices, edges)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct DegreeCounts {
    pub e_plus: usize,
    pub e_minus: usize,
    pub g_plus: u64,
    pub g_minus: u64,
}

impl DegreeCounts {
    pub fn is_sink(&self) -> bool {
        self.e_minus == 0
    }

    pub fn is_source(&self) -> bool {
        self.e_plus == 0
    }

    /// `e+ - e- - G+ + G-`, the right-hand side of the Poincaré–Hopf balance.
    pub fn poincare_hopf_balance(&self) -> i64 {
        self.e_plus as i64 - self.e_minus as i64 - self.g_plus as i64 + self.g_minus as i64
    }
}

/// Incoming (`plus`) and outgoing (`minus`) edge data at one vertex. Weight
/// lists follow edge declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DegreeProfile {
    pub e_plus: usize,
    pub e_minus: usize,
    pub g_plus_sum: u64,
    pub g_minus_sum: u64,
    pub g_plus: Vec<u32>,
    pub g_minus: Vec<u32>,
}

impl DegreeProfile {
    pub fn counts(&self) -> DegreeCounts {
        DegreeCounts {
            e_plus: self.e_plus,
            e_minus: self.e_minus,
            g_plus: self.g_plus_sum,
            g_minus: self.g_minus_sum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub connected: bool,
    pub oriented_acyclic: bool,
    pub nonempty: bool,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn is_valid(&self) -> bool {
        self.connected && self.oriented_acyclic && self.nonempty
    }
}

/// Connectivity of the underlying undirected graph and absence of oriented
/// cycles. The empty graph is reported as nonempty = false and disconnected.
pub fn validate_structure(g: &LyapunovGraph) -> StructureReport {
    let mut violations = Vec::new();
    let nonempty = !g.vertices.is_empty();
    if !nonempty {
        violations.push("graph has no vertices".to_owned());
    }
    let components = g.undirected_components();
    let connected = components == 1;
    if nonempty && !connected {
        violations.push(format!("graph is disconnected ({components} components)"));
    }
    let cycle = g.find_oriented_cycle();
    let oriented_acyclic = cycle.is_none();
    if let Some(cycle) = cycle {
        let walk: Vec<&str> = cycle.iter().map(|&i| g.vertices[i].id.as_str()).collect();
        violations.push(format!("oriented cycle {}", walk.join(" -> ")));
    }
    StructureReport {
        connected,
        oriented_acyclic,
        nonempty,
        violations,
    }
}

/// `|E| - |V| + 1` for a connected graph.
pub fn cycle_rank(g: &LyapunovGraph) -> Result<usize, GraphError> {
    if g.undirected_components() != 1 {
        return Err(GraphError::Disconnected);
    }
    Ok(g.edges.len() + 1 - g.vertices.len())
}

pub fn degree_profile(g: &LyapunovGraph, id: &str) -> Result<DegreeProfile, GraphError> {
    let v = g
        .vertex_index(id)
        .ok_or_else(|| GraphError::UnknownVertex(id.to_owned()))?;
    let mut p = DegreeProfile::default();
    for e in &g.edges {
        if e.dst == v {
            p.e_plus += 1;
            p.g_plus_sum += u64::from(e.weight);
            p.g_plus.push(e.weight);
        }
        if e.src == v {
            p.e_minus += 1;
            p.g_minus_sum += u64::from(e.weight);
            p.g_minus.push(e.weight);
        }
    }
    Ok(p)
}

/// Time reversal: every edge flips, singularity indices map `r -> 3 - r`,
/// attracting and repelling orbits swap and SFT matrices are transposed.
pub fn reverse(g: &LyapunovGraph) -> LyapunovGraph {
    let vertices = g
        .vertices
        .iter()
        .map(|v| Vertex {
            id: v.id.clone(),
            label: v.label.reversed(),
        })
        .collect();
    let edges = g
        .edges
        .iter()
        .map(|e| Edge {
            src: e.dst,
            dst: e.src,
            weight: e.weight,
        })
        .collect();
    LyapunovGraph { vertices, edges }
}

//! Bounded exhaustive enumeration and seeded random generation of
//! structurally valid Lyapunov graphs.
//!
//! Enumeration order is lexicographic in (vertex count, edge set, weight
//! assignment, label assignment), with the label assignment varying fastest.
//! Vertices are named `v1..vn`. No isomorphism reduction is attempted; the
//! only normalisation is that parallel edges carry their weights in
//! nondecreasing order, since permuting them describes the same multigraph.
//!
//! Graphs sharing an edge set form a *block*. Blocks are the unit of parallel
//! work and results are always merged back in block order.

use std::thread;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::check::{check, Target};
use crate::graph::{Edge, LabelError, LyapunovGraph, Vertex, VertexLabel};
use crate::linalg::IntMatrix;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// How labels are drawn from the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Labelling {
    /// Every vertex ranges over the whole pool.
    #[default]
    Full,
    /// Sinks only take index 0 singularities and attracting orbits, sources
    /// only index 3 singularities and repelling orbits, and every other
    /// vertex only index 1/2 singularities and subshift labels. Isolated
    /// vertices get no label, so the one-vertex graph is never produced.
    RoleCompatible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_vertices: usize,
    pub max_weight: u32,
    pub max_parallel_edges: usize,
    pub label_pool: Vec<VertexLabel>,
    pub labelling: Labelling,
    /// Upper limit on the number of candidates an enumeration may visit.
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid label in pool: {0}")]
    InvalidLabel(#[from] LabelError),
    #[error("enumeration would visit {expected} {what}, above the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        expected: u64,
        budget: u64,
    },
}

impl EnumerationBounds {
    /// Default pool, one edge per vertex pair, full labelling.
    pub fn new(max_vertices: usize, max_weight: u32) -> Self {
        Self {
            max_vertices,
            max_weight,
            max_parallel_edges: 1,
            label_pool: Self::default_label_pool(),
            labelling: Labelling::Full,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_parallel_edges(mut self, max_parallel_edges: usize) -> Self {
        self.max_parallel_edges = max_parallel_edges;
        self
    }

    pub fn with_pool(mut self, label_pool: Vec<VertexLabel>) -> Self {
        self.label_pool = label_pool;
        self
    }

    pub fn with_labelling(mut self, labelling: Labelling) -> Self {
        self.labelling = labelling;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// `[1]`, `[2]`, `[[1,1],[1,1]]` and `diag(1,1)`, covering `k` = 1, 0, 0, 2.
    pub fn default_matrix_pool() -> Vec<IntMatrix> {
        vec![
            IntMatrix::diagonal(&[1]),
            IntMatrix::diagonal(&[2]),
            IntMatrix::new(2, 2, vec![1, 1, 1, 1]).expect("2x2"),
            IntMatrix::identity(2),
        ]
    }

    /// The four singularity indices and both orbit kinds.
    pub fn point_and_orbit_labels() -> Vec<VertexLabel> {
        let mut labels: Vec<VertexLabel> =
            (0..=3).map(|index| VertexLabel::Singularity { index }).collect();
        labels.push(VertexLabel::AttractingOrbit);
        labels.push(VertexLabel::RepellingOrbit);
        labels
    }

    pub fn pool_with_matrices(matrices: impl IntoIterator<Item = IntMatrix>) -> Vec<VertexLabel> {
        let mut pool = Self::point_and_orbit_labels();
        pool.extend(matrices.into_iter().map(|matrix| VertexLabel::SuspensionSft { matrix }));
        pool
    }

    pub fn default_label_pool() -> Vec<VertexLabel> {
        Self::pool_with_matrices(Self::default_matrix_pool())
    }

    pub fn validate(&self) -> Result<(), EnumerationError> {
        if self.max_vertices == 0 {
            return Err(EnumerationError::InvalidBounds("max_vertices must be at least 1".into()));
        }
        if self.max_parallel_edges == 0 {
            return Err(EnumerationError::InvalidBounds(
                "max_parallel_edges must be at least 1".into(),
            ));
        }
        if self.label_pool.is_empty() {
            return Err(EnumerationError::InvalidBounds("label pool is empty".into()));
        }
        for label in &self.label_pool {
            label.validate()?;
        }
        Ok(())
    }

    fn allowed_labels(&self, e_plus: usize, e_minus: usize) -> Vec<usize> {
        let all = 0..self.label_pool.len();
        match self.labelling {
            Labelling::Full => all.collect(),
            Labelling::RoleCompatible => all
                .filter(|&i| role_accepts(&self.label_pool[i], e_plus, e_minus))
                .collect(),
        }
    }
}

fn role_accepts(label: &VertexLabel, e_plus: usize, e_minus: usize) -> bool {
    match (e_plus > 0, e_minus > 0) {
        (false, false) => false,
        (true, false) => matches!(
            label,
            VertexLabel::Singularity { index: 0 } | VertexLabel::AttractingOrbit
        ),
        (false, true) => matches!(
            label,
            VertexLabel::Singularity { index: 3 } | VertexLabel::RepellingOrbit
        ),
        (true, true) => matches!(
            label,
            VertexLabel::Singularity { index: 1 | 2 } | VertexLabel::SuspensionSft { .. }
        ),
    }
}

/// Parallel edges `src -> dst` with multiplicity `count`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct EdgeClass {
    src: usize,
    dst: usize,
    count: usize,
}

#[derive(Debug, Clone)]
struct Skeleton {
    vertices: usize,
    classes: Vec<EdgeClass>,
    label_choices: Vec<Vec<usize>>,
    graphs: u64,
}

/// A fully planned enumeration. Construction checks the bounds and the
/// budget; iteration never fails.
#[derive(Debug, Clone)]
pub struct Enumeration {
    bounds: EnumerationBounds,
    ids: Vec<String>,
    /// `weight_tuples[m]`: nondecreasing weight tuples of length `m`.
    weight_tuples: Vec<Vec<Vec<u32>>>,
    skeletons: Vec<Skeleton>,
    total: u64,
}

pub fn enumerate_graphs(bounds: &EnumerationBounds) -> Result<Enumeration, EnumerationError> {
    Enumeration::new(bounds.clone())
}

impl Enumeration {
    pub fn new(bounds: EnumerationBounds) -> Result<Self, EnumerationError> {
        bounds.validate()?;
        let options = 2 * bounds.max_parallel_edges as u64 + 1;
        let candidates = (1..=bounds.max_vertices).fold(0u64, |acc, n| {
            let pairs = (n * (n - 1) / 2) as u32;
            acc.saturating_add(options.saturating_pow(pairs))
        });
        if candidates > bounds.budget {
            return Err(EnumerationError::BudgetExceeded {
                what: "edge-set candidates",
                expected: candidates,
                budget: bounds.budget,
            });
        }

        let max_pairs_edges = bounds.max_parallel_edges;
        let weight_tuples: Vec<Vec<Vec<u32>>> = (0..=max_pairs_edges)
            .map(|m| nondecreasing_tuples(m, bounds.max_weight))
            .collect();

        let mut skeletons = Vec::new();
        let mut total = 0u64;
        for n in 1..=bounds.max_vertices {
            for classes in edge_sets(n, bounds.max_parallel_edges) {
                let mut e_plus = vec![0; n];
                let mut e_minus = vec![0; n];
                for c in &classes {
                    e_plus[c.dst] += c.count;
                    e_minus[c.src] += c.count;
                }
                let label_choices: Vec<Vec<usize>> = (0..n)
                    .map(|v| bounds.allowed_labels(e_plus[v], e_minus[v]))
                    .collect();
                let labels = label_choices
                    .iter()
                    .fold(1u64, |acc, c| acc.saturating_mul(c.len() as u64));
                let weights = classes.iter().fold(1u64, |acc, c| {
                    acc.saturating_mul(weight_tuples[c.count].len() as u64)
                });
                let graphs = labels.saturating_mul(weights);
                if graphs == 0 {
                    continue;
                }
                total = total.saturating_add(graphs);
                if total > bounds.budget {
                    return Err(EnumerationError::BudgetExceeded {
                        what: "graphs",
                        expected: total,
                        budget: bounds.budget,
                    });
                }
                skeletons.push(Skeleton {
                    vertices: n,
                    classes,
                    label_choices,
                    graphs,
                });
            }
        }
        let ids = (1..=bounds.max_vertices).map(|i| format!("v{i}")).collect();
        Ok(Self {
            bounds,
            ids,
            weight_tuples,
            skeletons,
            total,
        })
    }

    pub fn bounds(&self) -> &EnumerationBounds {
        &self.bounds
    }

    /// Number of graphs the enumeration yields.
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn block_count(&self) -> usize {
        self.skeletons.len()
    }

    pub fn block(&self, index: usize) -> Block<'_> {
        let skeleton = &self.skeletons[index];
        Block {
            plan: self,
            skeleton,
            weight_pos: vec![0; skeleton.classes.len()],
            label_pos: vec![0; skeleton.vertices],
            done: false,
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block<'_>> + '_ {
        (0..self.skeletons.len()).map(move |i| self.block(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = LyapunovGraph> + '_ {
        self.blocks().flatten()
    }

    /// Maps every block on `workers` threads and returns the results in
    /// block order, so the output does not depend on the worker count.
    pub fn par_map_blocks<R, F>(&self, workers: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Block<'_>) -> R + Sync,
    {
        let len = self.skeletons.len();
        let workers = workers.clamp(1, len.max(1));
        let mut slots: Vec<Option<R>> = (0..len).map(|_| None).collect();
        thread::scope(|scope| {
            let f = &f;
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        (w..len)
                            .step_by(workers)
                            .map(|i| (i, f(self.block(i))))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for handle in handles {
                match handle.join() {
                    Ok(results) => {
                        for (i, r) in results {
                            slots[i] = Some(r);
                        }
                    }
                    Err(panic) => std::panic::resume_unwind(panic),
                }
            }
        });
        slots
            .into_iter()
            .map(|r| r.expect("every block is mapped exactly once"))
            .collect()
    }
}

impl<'a> IntoIterator for &'a Enumeration {
    type Item = LyapunovGraph;
    type IntoIter = Box<dyn Iterator<Item = LyapunovGraph> + 'a>;

    fn into_iter(self) -> Self::IntoIter {
        Box::new(self.iter())
    }
}

/// All graphs over one edge set.
#[derive(Debug, Clone)]
pub struct Block<'a> {
    plan: &'a Enumeration,
    skeleton: &'a Skeleton,
    weight_pos: Vec<usize>,
    label_pos: Vec<usize>,
    done: bool,
}

impl Block<'_> {
    pub fn vertex_count(&self) -> usize {
        self.skeleton.vertices
    }

    pub fn graph_count(&self) -> u64 {
        self.skeleton.graphs
    }

    fn current(&self) -> LyapunovGraph {
        let pool = &self.plan.bounds.label_pool;
        let vertices = (0..self.skeleton.vertices)
            .map(|v| Vertex {
                id: self.plan.ids[v].clone(),
                label: pool[self.skeleton.label_choices[v][self.label_pos[v]]].clone(),
            })
            .collect();
        let mut edges = Vec::new();
        for (class, &pos) in self.skeleton.classes.iter().zip(&self.weight_pos) {
            for &weight in &self.plan.weight_tuples[class.count][pos] {
                edges.push(Edge {
                    src: class.src,
                    dst: class.dst,
                    weight,
                });
            }
        }
        LyapunovGraph::from_parts_unchecked(vertices, edges)
    }

    fn advance(&mut self) {
        let choices = &self.skeleton.label_choices;
        if odometer_step(&mut self.label_pos, |i| choices[i].len()) {
            return;
        }
        let classes = &self.skeleton.classes;
        let tuples = &self.plan.weight_tuples;
        if odometer_step(&mut self.weight_pos, |i| tuples[classes[i].count].len()) {
            return;
        }
        self.done = true;
    }
}

impl Iterator for Block<'_> {
    type Item = LyapunovGraph;

    fn next(&mut self) -> Option<LyapunovGraph> {
        if self.done {
            return None;
        }
        let graph = self.current();
        self.advance();
        Some(graph)
    }
}

/// Increments a mixed-radix counter whose first digit is most significant.
/// Returns false (and resets to zero) on wrap-around.
fn odometer_step(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

fn nondecreasing_tuples(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, lo: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for w in lo..=max {
            cur.push(w);
            rec(len, w, max, cur, out);
            cur.pop();
        }
    }
    rec(len, 0, max, &mut cur, &mut out);
    out
}

/// Connected, oriented-acyclic edge sets on `n` vertices. Each vertex pair
/// `(i, j)`, `i < j`, in lexicographic order, takes one of: absent, then for
/// each multiplicity `m = 1..=max_parallel` the orientations `i -> j` and
/// `j -> i`. The first pair is the most significant digit.
fn edge_sets(n: usize, max_parallel: usize) -> Vec<Vec<EdgeClass>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let radix = 2 * max_parallel + 1;
    let mut digits = vec![0usize; pairs.len()];
    let mut out = Vec::new();
    loop {
        let classes: Vec<EdgeClass> = pairs
            .iter()
            .zip(&digits)
            .filter(|(_, &d)| d > 0)
            .map(|(&(i, j), &d)| {
                let count = (d + 1) / 2;
                let (src, dst) = if d % 2 == 1 { (i, j) } else { (j, i) };
                EdgeClass { src, dst, count }
            })
            .collect();
        if is_connected(n, &classes) && is_acyclic(n, &classes) {
            out.push(classes);
        }
        if !odometer_step(&mut digits, |_| radix) {
            break;
        }
    }
    out
}

fn is_connected(n: usize, classes: &[EdgeClass]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for c in classes {
            let other = if c.src == v {
                c.dst
            } else if c.dst == v {
                c.src
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn is_acyclic(n: usize, classes: &[EdgeClass]) -> bool {
    let mut indeg = vec![0usize; n];
    for c in classes {
        indeg[c.dst] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for c in classes.iter().filter(|c| c.src == v) {
            indeg[c.dst] -= 1;
            if indeg[c.dst] == 0 {
                ready.push(c.dst);
            }
        }
    }
    removed == n
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RealizableCount {
    pub total: u64,
    pub realizable: u64,
}

impl std::ops::Add for RealizableCount {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            total: self.total + rhs.total,
            realizable: self.realizable + rhs.realizable,
        }
    }
}

pub fn count_realizable(
    bounds: &EnumerationBounds,
    target: Target,
) -> Result<RealizableCount, EnumerationError> {
    count_realizable_with_workers(bounds, target, 1)
}

pub fn count_realizable_with_workers(
    bounds: &EnumerationBounds,
    target: Target,
    workers: usize,
) -> Result<RealizableCount, EnumerationError> {
    let plan = enumerate_graphs(bounds)?;
    let per_block = plan.par_map_blocks(workers, |block| {
        block.fold(RealizableCount::default(), |acc, g| RealizableCount {
            total: acc.total + 1,
            realizable: acc.realizable + u64::from(check(&g, target).realizable),
        })
    });
    Ok(per_block.into_iter().fold(RealizableCount::default(), |a, b| a + b))
}

/// Seeded random graph, always connected and free of oriented cycles.
///
/// Uses ChaCha8 seeded through `seed_from_u64`. The recipe: pick the vertex
/// count uniformly in `1..=max_vertices`; shuffle the vertices into a random
/// order and attach each vertex to a uniformly chosen earlier one, oriented
/// along the order; then try up to `n` extra edges between random ordered
/// pairs, skipping any that would exceed `max_parallel_edges`; finally draw
/// each weight uniformly in `0..=max_weight` and each label from the pool
/// (restricted by role under [`Labelling::RoleCompatible`], falling back to
/// the whole pool when no pool label fits the role).
pub fn random_graph(seed: u64, bounds: &EnumerationBounds) -> Result<LyapunovGraph, EnumerationError> {
    bounds.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=bounds.max_vertices);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut multiplicity = vec![0usize; n * n];
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (src, dst) = (order[j], order[i]);
        multiplicity[src * n + dst] += 1;
        arcs.push((src, dst));
    }
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=n) {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let (src, dst) = (order[a.min(b)], order[a.max(b)]);
            if multiplicity[src * n + dst] < bounds.max_parallel_edges {
                multiplicity[src * n + dst] += 1;
                arcs.push((src, dst));
            }
        }
    }
    let edges: Vec<Edge> = arcs
        .into_iter()
        .map(|(src, dst)| Edge {
            src,
            dst,
            weight: rng.gen_range(0..=bounds.max_weight),
        })
        .collect();

    let mut e_plus = vec![0; n];
    let mut e_minus = vec![0; n];
    for e in &edges {
        e_plus[e.dst] += 1;
        e_minus[e.src] += 1;
    }
    let vertices = (0..n)
        .map(|v| {
            let mut choices = bounds.allowed_labels(e_plus[v], e_minus[v]);
            if choices.is_empty() {
                choices = (0..bounds.label_pool.len()).collect();
            }
            let pick = choices[rng.gen_range(0..choices.len())];
            Vertex {
                id: format!("v{}", v + 1),
                label: bounds.label_pool[pick].clone(),
            }
        })
        .collect();
    Ok(LyapunovGraph::from_parts_unchecked(vertices, edges))
}

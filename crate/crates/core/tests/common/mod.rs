//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's linear algebra or condition checks; graphs are only read
//! through their vertex and edge lists.

#![allow(dead_code)]

use lyagraph::check::Target;
use lyagraph::graph::{Edge, LyapunovGraph, Vertex, VertexLabel};
use lyagraph::io::parse_document;

/// `dim ker(I + (A mod 2))` over F2 by counting all `2^m` vectors.
pub fn brute_kernel_dim(rows: &[Vec<i64>]) -> usize {
    let m = rows.len();
    assert!(m <= 16, "brute force is limited to 16 states");
    let masks: Vec<u32> = (0..m)
        .map(|i| {
            (0..m).fold(0u32, |acc, j| {
                let bit = (rows[i][j].rem_euclid(2) == 1) ^ (i == j);
                acc | (u32::from(bit) << j)
            })
        })
        .collect();
    let solutions = (0u32..1 << m)
        .filter(|x| masks.iter().all(|row| (row & x).count_ones() % 2 == 0))
        .count();
    solutions.trailing_zeros() as usize
}

/// F2 rank by brute force: `m - dim ker` of the matrix itself.
pub fn brute_f2_rank(rows: &[Vec<bool>]) -> usize {
    let c = rows.first().map_or(0, Vec::len);
    assert!(c <= 16);
    let masks: Vec<u32> = rows
        .iter()
        .map(|row| row.iter().enumerate().fold(0, |acc, (j, &b)| acc | (u32::from(b) << j)))
        .collect();
    let kernel = (0u32..1 << c)
        .filter(|x| masks.iter().all(|row| (row & x).count_ones() % 2 == 0))
        .count();
    c - kernel.trailing_zeros() as usize
}

/// Determinant by cofactor expansion; fine for the small sizes used here.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i128(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors of an integer matrix from its determinantal divisors:
/// `d_k` is the gcd of all `k x k` minors and `s_k = d_k / d_{k-1}`, with
/// `s_k = 0` once `d_k = 0`.
pub fn invariant_factors_by_minors(m: &[Vec<i128>]) -> Vec<i128> {
    let n = m.len();
    let mut factors = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 1..=n {
        let mut d = 0i128;
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                let minor: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| m[r][c]).collect())
                    .collect();
                d = gcd(d, det_i128(&minor));
            }
        }
        if d == 0 {
            factors.extend(std::iter::repeat(0).take(n - k + 1));
            return factors;
        }
        factors.push(d / prev);
        prev = d;
    }
    factors
}

/// `I - A` as an i128 matrix.
pub fn identity_minus(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| i128::from(i == j) - i128::from(v))
                .collect()
        })
        .collect()
}

pub fn matrix_rows(label: &VertexLabel) -> Option<Vec<Vec<i64>>> {
    label
        .sft_matrix()
        .map(|m| (0..m.rows()).map(|i| m.row(i).to_vec()).collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RefCounts {
    pub e_plus: i64,
    pub e_minus: i64,
    pub g_plus: i64,
    pub g_minus: i64,
}

impl RefCounts {
    pub fn balance(&self) -> i64 {
        self.e_plus - self.e_minus - self.g_plus + self.g_minus
    }
}

pub fn ref_counts(g: &LyapunovGraph) -> Vec<RefCounts> {
    let mut counts = vec![RefCounts::default(); g.vertices().len()];
    for e in g.edges() {
        counts[e.dst].e_plus += 1;
        counts[e.dst].g_plus += i64::from(e.weight);
        counts[e.src].e_minus += 1;
        counts[e.src].g_minus += i64::from(e.weight);
    }
    counts
}

pub fn ref_connected(g: &LyapunovGraph) -> bool {
    let n = g.vertices().len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for e in g.edges() {
            for (a, b) in [(e.src, e.dst), (e.dst, e.src)] {
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Kahn's algorithm.
pub fn ref_acyclic(g: &LyapunovGraph) -> bool {
    let n = g.vertices().len();
    let mut indegree = vec![0usize; n];
    for e in g.edges() {
        indegree[e.dst] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for e in g.edges().iter().filter(|e| e.src == v) {
            indegree[e.dst] -= 1;
            if indegree[e.dst] == 0 {
                ready.push(e.dst);
            }
        }
    }
    removed == n
}

pub fn ref_beta(g: &LyapunovGraph) -> i64 {
    g.edges().len() as i64 - g.vertices().len() as i64 + 1
}

/// `(equalities hold, inequalities hold)` at a subshift vertex.
pub fn ref_types(k: i64, c: RefCounts) -> (bool, bool) {
    let eq = k - c.g_minus == c.e_plus && k - c.g_plus == c.e_minus;
    let ineq = k + 1 - c.g_minus <= c.e_plus
        && c.e_plus <= k + 1
        && k + 1 - c.g_plus <= c.e_minus
        && c.e_minus <= k + 1;
    (eq, ineq)
}

fn is_sing(label: &VertexLabel, r: u8) -> bool {
    matches!(label, VertexLabel::Singularity { index } if *index == r)
}

/// Local conditions at one vertex: sinks and sources, index 1/2 degrees and
/// the Poincare-Hopf balance.
pub fn ref_vertex_ok(label: &VertexLabel, c: RefCounts) -> bool {
    let sink = c.e_minus == 0;
    let source = c.e_plus == 0;
    let sink_label = is_sing(label, 0) || *label == VertexLabel::AttractingOrbit;
    let source_label = is_sing(label, 3) || *label == VertexLabel::RepellingOrbit;
    if sink && !(c.e_plus == 1 && sink_label) {
        return false;
    }
    if source && !(c.e_minus == 1 && source_label) {
        return false;
    }
    if (sink_label && !sink) || (source_label && !source) {
        return false;
    }
    if label.sft_matrix().is_some() && (c.e_plus == 0 || c.e_minus == 0) {
        return false;
    }
    if is_sing(label, 2) && !((1..=2).contains(&c.e_plus) && c.e_minus == 1) {
        return false;
    }
    if is_sing(label, 1) && !(c.e_plus == 1 && (1..=2).contains(&c.e_minus)) {
        return false;
    }
    let expected = match label {
        VertexLabel::Singularity { index } => {
            if index % 2 == 0 {
                1
            } else {
                -1
            }
        }
        _ => 0,
    };
    c.balance() == expected
}

/// Realizability decided directly from the classification rules.
pub fn ref_realizable(g: &LyapunovGraph, target: Target) -> bool {
    if !ref_connected(g) || !ref_acyclic(g) {
        return false;
    }
    let beta = ref_beta(g);
    if target == Target::S3 && beta != 0 {
        return false;
    }
    let counts = ref_counts(g);
    let mut type_eq = 0;
    for (v, c) in g.vertices().iter().zip(&counts) {
        if !ref_vertex_ok(&v.label, *c) {
            return false;
        }
        if let Some(rows) = matrix_rows(&v.label) {
            let (eq, ineq) = ref_types(brute_kernel_dim(&rows) as i64, *c);
            assert!(!(eq && ineq));
            match (target, beta) {
                (Target::S3, _) | (Target::S2xS1, 1) if !ineq => return false,
                (Target::S2xS1, 0) if !eq && !ineq => return false,
                _ => {}
            }
            type_eq += usize::from(eq);
        }
    }
    match (target, beta) {
        (Target::S2xS1, 0) => {
            type_eq <= 1 && (type_eq == 1 || g.edges().iter().any(|e| e.weight > 0))
        }
        (Target::S2xS1, 1) | (Target::S3, 0) => true,
        _ => false,
    }
}

/// The same vertices and edges with new labels.
pub fn relabel(frame: &LyapunovGraph, labels: &[VertexLabel]) -> LyapunovGraph {
    let vertices = frame
        .vertices()
        .iter()
        .zip(labels)
        .map(|(v, l)| Vertex {
            id: v.id.clone(),
            label: l.clone(),
        })
        .collect();
    let edges: Vec<Edge> = frame.edges().to_vec();
    LyapunovGraph::new(vertices, edges).expect("relabelling keeps the graph valid")
}

pub fn reversed_label(label: &VertexLabel) -> VertexLabel {
    match label {
        VertexLabel::Singularity { index } => VertexLabel::Singularity { index: 3 - index },
        VertexLabel::AttractingOrbit => VertexLabel::RepellingOrbit,
        VertexLabel::RepellingOrbit => VertexLabel::AttractingOrbit,
        VertexLabel::SuspensionSft { matrix } => VertexLabel::SuspensionSft {
            matrix: matrix.transpose(),
        },
    }
}

pub fn graph(text: &str) -> LyapunovGraph {
    parse_document(text).expect("test graph parses").graph
}

/// The worked examples with their expected verdicts on (S2xS1, S3). The S3
/// verdict of the weighted Morse path follows from the S2xS1 verdict by
/// descent: it is a tree without subshift vertices.
pub const WORKED_EXAMPLES: &[(&str, &str, bool, bool)] = &[
    (
        "two orbits",
        "vertex R orbit repelling\nvertex A orbit attracting\nedge R -> A g=1\n",
        true,
        true,
    ),
    (
        "index 3 to index 0, weight 0",
        "vertex s sing 3\nvertex t sing 0\nedge s -> t g=0\n",
        false,
        true,
    ),
    (
        "identity subshift between orbits",
        "vertex R orbit repelling\nvertex v sft 2x2 [1, 0, 0, 1]\nvertex A orbit attracting\n\
         edge R -> v g=1\nedge v -> A g=1\n",
        true,
        false,
    ),
    (
        "Morse path, weights 0 1 0",
        "vertex a sing 3\nvertex b sing 2\nvertex c sing 1\nvertex d sing 0\n\
         edge a -> b g=0\nedge b -> c g=1\nedge c -> d g=0\n",
        true,
        true,
    ),
    (
        "Morse path, weights 0 0 0",
        "vertex a sing 3\nvertex b sing 2\nvertex c sing 1\nvertex d sing 0\n\
         edge a -> b g=0\nedge b -> c g=0\nedge c -> d g=0\n",
        false,
        false,
    ),
    (
        "cycle rank one",
        "vertex R orbit repelling\nvertex v sft 1x1 [1]\nvertex w sft 1x1 [1]\n\
         vertex A orbit attracting\nedge R -> v g=1\nedge v -> w g=1\nedge v -> w g=1\n\
         edge w -> A g=1\n",
        true,
        false,
    ),
];

//! Realizability of abstract Lyapunov graphs as Smale flows on S2xS1 or S3.
//!
//! Each condition is evaluated on its own and reported with witnesses, so a
//! failing graph lists every violated condition rather than the first one.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{DegreeCounts, LyapunovGraph, StructureReport, VertexLabel};
use crate::linalg::MatrixError;
use crate::sft::k_invariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    S2xS1,
    S3,
}

impl Target {
    pub const ALL: [Target; 2] = [Target::S2xS1, Target::S3];

    pub fn name(self) -> &'static str {
        match self {
            Target::S2xS1 => "S2xS1",
            Target::S3 => "S3",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown target `{0}` (expected s2xs1 or s3)")]
pub struct UnknownTarget(pub String);

impl FromStr for Target {
    type Err = UnknownTarget;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s2xs1" => Ok(Target::S2xS1),
            "s3" => Ok(Target::S3),
            _ => Err(UnknownTarget(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionId {
    Struct,
    C1,
    C2,
    C3,
    C4,
}

impl ConditionId {
    pub fn code(self) -> &'static str {
        match self {
            ConditionId::Struct => "STRUCT",
            ConditionId::C1 => "C1",
            ConditionId::C2 => "C2",
            ConditionId::C3 => "C3",
            ConditionId::C4 => "C4",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ConditionId::Struct => "graph structure",
            ConditionId::C1 => "sinks and sources",
            ConditionId::C2 => "index 1 and 2 singularities",
            ConditionId::C3 => "subshift vertices",
            ConditionId::C4 => "Poincare-Hopf balance",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        }
    }
}

/// What a witness points at.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Subject {
    Graph,
    Vertex(String),
    Edge(usize),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Graph => f.write_str("graph"),
            Subject::Vertex(id) => write!(f, "vertex {id}"),
            Subject::Edge(i) => write!(f, "edge #{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Finding {
    Structure(String),
    NotATree { beta: usize },
    SinkEdgeCount { e_plus: usize },
    SourceEdgeCount { e_minus: usize },
    SinkLabel(String),
    SourceLabel(String),
    EndpointLabelInside { label: String, e_plus: usize, e_minus: usize },
    SftNotInterior { e_plus: usize, e_minus: usize },
    IndexTwoDegrees { e_plus: usize, e_minus: usize },
    IndexOneDegrees { e_plus: usize, e_minus: usize },
    CycleRankTooLarge { beta: usize },
    NotTypeIneq(SftVertexClass),
    NeitherType(SftVertexClass),
    SeveralTypeEq { count: usize },
    AllWeightsZero,
    PoincareHopf { expected: i64, counts: DegreeCounts },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::Structure(msg) => f.write_str(msg),
            Finding::NotATree { beta } => write!(f, "graph is not a tree (cycle rank {beta})"),
            Finding::SinkEdgeCount { e_plus } => {
                write!(f, "sink has {e_plus} incoming edges, expected exactly 1")
            }
            Finding::SourceEdgeCount { e_minus } => {
                write!(f, "source has {e_minus} outgoing edges, expected exactly 1")
            }
            Finding::SinkLabel(label) => write!(
                f,
                "sink is labelled {label}, expected an index 0 singularity or an attracting orbit"
            ),
            Finding::SourceLabel(label) => write!(
                f,
                "source is labelled {label}, expected an index 3 singularity or a repelling orbit"
            ),
            Finding::EndpointLabelInside { label, e_plus, e_minus } => write!(
                f,
                "{label} must sit at a sink or source, but e+ = {e_plus} and e- = {e_minus}"
            ),
            Finding::SftNotInterior { e_plus, e_minus } => write!(
                f,
                "subshift vertex needs e+ > 0 and e- > 0, got e+ = {e_plus}, e- = {e_minus}"
            ),
            Finding::IndexTwoDegrees { e_plus, e_minus } => write!(
                f,
                "index 2 singularity needs 1 <= e+ <= 2 and e- = 1, got e+ = {e_plus}, e- = {e_minus}"
            ),
            Finding::IndexOneDegrees { e_plus, e_minus } => write!(
                f,
                "index 1 singularity needs e+ = 1 and 1 <= e- <= 2, got e+ = {e_plus}, e- = {e_minus}"
            ),
            Finding::CycleRankTooLarge { beta } => {
                write!(f, "cycle rank {beta} exceeds 1")
            }
            Finding::NotTypeIneq(c) => write!(
                f,
                "needs k+1-G- <= e+ <= k+1 and k+1-G+ <= e- <= k+1, got {}",
                c.describe()
            ),
            Finding::NeitherType(c) => write!(
                f,
                "satisfies neither the inequalities k+1-G- <= e+ <= k+1, k+1-G+ <= e- <= k+1 \
                 nor the equalities k-G- = e+, k-G+ = e-; got {}",
                c.describe()
            ),
            Finding::SeveralTypeEq { count } => write!(
                f,
                "{count} subshift vertices satisfy k-G- = e+ and k-G+ = e-, at most one may"
            ),
            Finding::AllWeightsZero => f.write_str(
                "no subshift vertex satisfies the equalities, so some edge needs nonzero weight",
            ),
            Finding::PoincareHopf { expected, counts } => write!(
                f,
                "expected {expected} but e+ - e- - G+ + G- = {} - {} - {} + {} = {}",
                counts.e_plus,
                counts.e_minus,
                counts.g_plus,
                counts.g_minus,
                counts.poincare_hopf_balance()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub subject: Subject,
    pub finding: Finding,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.finding)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub condition: ConditionId,
    pub status: Status,
    pub witnesses: Vec<Witness>,
}

impl ConditionVerdict {
    fn from_witnesses(condition: ConditionId, witnesses: Vec<Witness>) -> Self {
        let status = if witnesses.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            condition,
            status,
            witnesses,
        }
    }

    fn not_applicable(condition: ConditionId) -> Self {
        Self {
            condition,
            status: Status::NotApplicable,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SftClassKind {
    /// `k+1-G- <= e+ <= k+1` and `k+1-G+ <= e- <= k+1`.
    TypeIneq,
    /// `k-G- = e+` and `k-G+ = e-`.
    TypeEq,
    Neither,
}

impl SftClassKind {
    pub fn name(self) -> &'static str {
        match self {
            SftClassKind::TypeIneq => "TypeIneq",
            SftClassKind::TypeEq => "TypeEq",
            SftClassKind::Neither => "Neither",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SftVertexClass {
    pub kind: SftClassKind,
    pub k: usize,
    pub e_plus: usize,
    pub e_minus: usize,
    pub g_plus: u64,
    pub g_minus: u64,
}

impl SftVertexClass {
    pub fn classify(k: usize, counts: DegreeCounts) -> Self {
        let eq = satisfies_equalities(k, counts);
        let ineq = satisfies_inequalities(k, counts);
        assert!(
            !(eq && ineq),
            "equality and inequality classes overlap at k = {k}, {counts:?}"
        );
        let kind = if eq {
            SftClassKind::TypeEq
        } else if ineq {
            SftClassKind::TypeIneq
        } else {
            SftClassKind::Neither
        };
        Self {
            kind,
            k,
            e_plus: counts.e_plus,
            e_minus: counts.e_minus,
            g_plus: counts.g_plus,
            g_minus: counts.g_minus,
        }
    }

    pub fn counts(&self) -> DegreeCounts {
        DegreeCounts {
            e_plus: self.e_plus,
            e_minus: self.e_minus,
            g_plus: self.g_plus,
            g_minus: self.g_minus,
        }
    }

    fn describe(&self) -> String {
        format!(
            "k = {}, e+ = {}, e- = {}, G+ = {}, G- = {}",
            self.k, self.e_plus, self.e_minus, self.g_plus, self.g_minus
        )
    }
}

pub fn satisfies_inequalities(k: usize, c: DegreeCounts) -> bool {
    let k1 = k as i64 + 1;
    let (ep, em) = (c.e_plus as i64, c.e_minus as i64);
    let (gp, gm) = (c.g_plus as i64, c.g_minus as i64);
    k1 - gm <= ep && ep <= k1 && k1 - gp <= em && em <= k1
}

pub fn satisfies_equalities(k: usize, c: DegreeCounts) -> bool {
    let k = k as i64;
    k - c.g_minus as i64 == c.e_plus as i64 && k - c.g_plus as i64 == c.e_minus as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` is not labelled with a subshift of finite type")]
    NotSft(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub fn classify_sft_vertex(g: &LyapunovGraph, id: &str) -> Result<SftVertexClass, ClassifyError> {
    let v = g
        .vertex_index(id)
        .ok_or_else(|| ClassifyError::UnknownVertex(id.to_owned()))?;
    let matrix = g.vertices()[v]
        .label
        .sft_matrix()
        .ok_or_else(|| ClassifyError::NotSft(id.to_owned()))?;
    let k = k_invariant(matrix)?;
    Ok(SftVertexClass::classify(k, g.degree_counts()[v]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub target: Target,
    pub structure: StructureReport,
    /// Cycle rank, absent when the graph is disconnected or empty.
    pub beta: Option<usize>,
    pub verdicts: Vec<ConditionVerdict>,
    /// Classification of every subshift vertex, in vertex order.
    pub sft_vertices: Vec<(String, SftVertexClass)>,
    pub realizable: bool,
}

impl CheckReport {
    pub fn verdict(&self, id: ConditionId) -> Option<&ConditionVerdict> {
        self.verdicts.iter().find(|v| v.condition == id)
    }

    pub fn type_eq_count(&self) -> usize {
        self.sft_vertices
            .iter()
            .filter(|(_, c)| c.kind == SftClassKind::TypeEq)
            .count()
    }
}

/// Per-vertex data shared by the individual condition checks.
struct Context<'g> {
    graph: &'g LyapunovGraph,
    counts: Vec<DegreeCounts>,
}

impl<'g> Context<'g> {
    fn new(graph: &'g LyapunovGraph) -> Self {
        Self {
            graph,
            counts: graph.degree_counts(),
        }
    }

    fn vertices(&self) -> impl Iterator<Item = (&'g str, &'g VertexLabel, DegreeCounts)> + '_ {
        self.graph
            .vertices()
            .iter()
            .zip(&self.counts)
            .map(|(v, c)| (v.id.as_str(), &v.label, *c))
    }

    fn sft_classes(&self) -> Vec<(String, SftVertexClass)> {
        self.vertices()
            .filter_map(|(id, label, counts)| {
                let matrix = label.sft_matrix()?;
                // Labels are validated on graph construction.
                let k = k_invariant(matrix).expect("validated subshift label");
                Some((id.to_owned(), SftVertexClass::classify(k, counts)))
            })
            .collect()
    }
}

fn vertex_witness(id: &str, finding: Finding) -> Witness {
    Witness {
        subject: Subject::Vertex(id.to_owned()),
        finding,
    }
}

fn condition1(cx: &Context<'_>) -> ConditionVerdict {
    let mut witnesses = Vec::new();
    for (id, label, c) in cx.vertices() {
        if c.is_sink() {
            if c.e_plus != 1 {
                witnesses.push(vertex_witness(id, Finding::SinkEdgeCount { e_plus: c.e_plus }));
            }
            if !matches!(
                label,
                VertexLabel::Singularity { index: 0 } | VertexLabel::AttractingOrbit
            ) {
                witnesses.push(vertex_witness(id, Finding::SinkLabel(label.to_string())));
            }
        }
        if c.is_source() {
            if c.e_minus != 1 {
                witnesses.push(vertex_witness(
                    id,
                    Finding::SourceEdgeCount { e_minus: c.e_minus },
                ));
            }
            if !matches!(
                label,
                VertexLabel::Singularity { index: 3 } | VertexLabel::RepellingOrbit
            ) {
                witnesses.push(vertex_witness(id, Finding::SourceLabel(label.to_string())));
            }
        }
        let misplaced = match label {
            VertexLabel::Singularity { index: 0 } | VertexLabel::AttractingOrbit => !c.is_sink(),
            VertexLabel::Singularity { index: 3 } | VertexLabel::RepellingOrbit => !c.is_source(),
            _ => false,
        };
        if misplaced {
            witnesses.push(vertex_witness(
                id,
                Finding::EndpointLabelInside {
                    label: label.to_string(),
                    e_plus: c.e_plus,
                    e_minus: c.e_minus,
                },
            ));
        }
        if label.sft_matrix().is_some() && (c.e_plus == 0 || c.e_minus == 0) {
            witnesses.push(vertex_witness(
                id,
                Finding::SftNotInterior {
                    e_plus: c.e_plus,
                    e_minus: c.e_minus,
                },
            ));
        }
    }
    ConditionVerdict::from_witnesses(ConditionId::C1, witnesses)
}

pub fn check_condition1(g: &LyapunovGraph) -> ConditionVerdict {
    condition1(&Context::new(g))
}

fn condition2(cx: &Context<'_>) -> ConditionVerdict {
    let mut witnesses = Vec::new();
    for (id, label, c) in cx.vertices() {
        let (e_plus, e_minus) = (c.e_plus, c.e_minus);
        match label {
            VertexLabel::Singularity { index: 2 }
                if !((1..=2).contains(&e_plus) && e_minus == 1) =>
            {
                witnesses.push(vertex_witness(id, Finding::IndexTwoDegrees { e_plus, e_minus }));
            }
            VertexLabel::Singularity { index: 1 }
                if !(e_plus == 1 && (1..=2).contains(&e_minus)) =>
            {
                witnesses.push(vertex_witness(id, Finding::IndexOneDegrees { e_plus, e_minus }));
            }
            _ => {}
        }
    }
    ConditionVerdict::from_witnesses(ConditionId::C2, witnesses)
}

pub fn check_condition2(g: &LyapunovGraph) -> ConditionVerdict {
    condition2(&Context::new(g))
}

fn poincare_hopf(cx: &Context<'_>) -> ConditionVerdict {
    let mut witnesses = Vec::new();
    for (id, label, c) in cx.vertices() {
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
        if c.poincare_hopf_balance() != expected {
            witnesses.push(vertex_witness(
                id,
                Finding::PoincareHopf {
                    expected,
                    counts: c,
                },
            ));
        }
    }
    ConditionVerdict::from_witnesses(ConditionId::C4, witnesses)
}

pub fn check_poincare_hopf(g: &LyapunovGraph) -> ConditionVerdict {
    poincare_hopf(&Context::new(g))
}

fn condition3_s2xs1(
    graph: &LyapunovGraph,
    beta: usize,
    classes: &[(String, SftVertexClass)],
) -> ConditionVerdict {
    let mut witnesses = Vec::new();
    match beta {
        0 => {
            let mut type_eq = 0;
            for (id, class) in classes {
                match class.kind {
                    SftClassKind::TypeEq => type_eq += 1,
                    SftClassKind::TypeIneq => {}
                    SftClassKind::Neither => {
                        witnesses.push(vertex_witness(id, Finding::NeitherType(*class)))
                    }
                }
            }
            if type_eq > 1 {
                witnesses.push(Witness {
                    subject: Subject::Graph,
                    finding: Finding::SeveralTypeEq { count: type_eq },
                });
            }
            if type_eq == 0 && graph.edges().iter().all(|e| e.weight == 0) {
                witnesses.push(Witness {
                    subject: Subject::Graph,
                    finding: Finding::AllWeightsZero,
                });
            }
        }
        1 => {
            for (id, class) in classes {
                if class.kind != SftClassKind::TypeIneq {
                    witnesses.push(vertex_witness(id, Finding::NotTypeIneq(*class)));
                }
            }
        }
        _ => witnesses.push(Witness {
            subject: Subject::Graph,
            finding: Finding::CycleRankTooLarge { beta },
        }),
    }
    ConditionVerdict::from_witnesses(ConditionId::C3, witnesses)
}

/// Condition 3 for S2xS1. Not applicable when the cycle rank is undefined
/// (disconnected or empty graph).
pub fn check_condition3_s2xs1(g: &LyapunovGraph) -> ConditionVerdict {
    match g.cycle_rank() {
        Ok(beta) => condition3_s2xs1(g, beta, &Context::new(g).sft_classes()),
        Err(_) => ConditionVerdict::not_applicable(ConditionId::C3),
    }
}

fn condition3_s3(classes: &[(String, SftVertexClass)]) -> ConditionVerdict {
    let witnesses = classes
        .iter()
        .filter(|(_, c)| c.kind != SftClassKind::TypeIneq)
        .map(|(id, c)| vertex_witness(id, Finding::NotTypeIneq(*c)))
        .collect();
    ConditionVerdict::from_witnesses(ConditionId::C3, witnesses)
}

fn structure_verdict(structure: &StructureReport, beta: Option<usize>, target: Target) -> ConditionVerdict {
    let mut witnesses: Vec<Witness> = structure
        .violations
        .iter()
        .map(|msg| Witness {
            subject: Subject::Graph,
            finding: Finding::Structure(msg.clone()),
        })
        .collect();
    if target == Target::S3 {
        if let Some(beta) = beta.filter(|&b| b > 0) {
            witnesses.push(Witness {
                subject: Subject::Graph,
                finding: Finding::NotATree { beta },
            });
        }
    }
    ConditionVerdict::from_witnesses(ConditionId::Struct, witnesses)
}

/// Runs every condition for `target`.
///
/// Verdict order is `STRUCT, C1, C2, C3, C4`. For S3 the structure verdict
/// also demands a tree and C3 demands the inequalities at every subshift
/// vertex.
pub fn check(g: &LyapunovGraph, target: Target) -> CheckReport {
    let structure = g.validate_structure();
    let beta = g.cycle_rank().ok();
    let cx = Context::new(g);
    let sft_vertices = cx.sft_classes();

    let c3 = match (target, beta) {
        (Target::S2xS1, Some(beta)) => condition3_s2xs1(g, beta, &sft_vertices),
        (Target::S2xS1, None) => ConditionVerdict::not_applicable(ConditionId::C3),
        (Target::S3, _) => condition3_s3(&sft_vertices),
    };
    let verdicts = vec![
        structure_verdict(&structure, beta, target),
        condition1(&cx),
        condition2(&cx),
        c3,
        poincare_hopf(&cx),
    ];
    let realizable = structure.is_valid() && verdicts.iter().all(ConditionVerdict::passed);
    CheckReport {
        target,
        structure,
        beta,
        verdicts,
        sft_vertices,
        realizable,
    }
}

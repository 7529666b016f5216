//! Human-readable and JSON renderings of check reports and matrix invariants.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::check::{CheckReport, SftVertexClass};
use crate::graph::LyapunovGraph;
use crate::linalg::IntMatrix;
use crate::sft::MatrixInvariantReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RenderMode {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub target: String,
    pub realizable: bool,
    pub beta: Option<usize>,
    pub structure: StructureDocument,
    pub conditions: Vec<ConditionDocument>,
    pub sft_vertices: Vec<SftVertexDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDocument {
    pub connected: bool,
    pub oriented_acyclic: bool,
    pub nonempty: bool,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionDocument {
    pub id: String,
    pub title: String,
    pub status: String,
    pub witnesses: Vec<WitnessDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SftVertexDocument {
    pub id: String,
    pub class: String,
    pub k: usize,
    pub e_plus: usize,
    pub e_minus: usize,
    pub g_plus: u64,
    pub g_minus: u64,
}

impl SftVertexDocument {
    fn new(id: &str, c: &SftVertexClass) -> Self {
        Self {
            id: id.to_owned(),
            class: c.kind.name().to_owned(),
            k: c.k,
            e_plus: c.e_plus,
            e_minus: c.e_minus,
            g_plus: c.g_plus,
            g_minus: c.g_minus,
        }
    }
}

impl From<&CheckReport> for ReportDocument {
    fn from(r: &CheckReport) -> Self {
        Self {
            target: r.target.name().to_owned(),
            realizable: r.realizable,
            beta: r.beta,
            structure: StructureDocument {
                connected: r.structure.connected,
                oriented_acyclic: r.structure.oriented_acyclic,
                nonempty: r.structure.nonempty,
                violations: r.structure.violations.clone(),
            },
            conditions: r
                .verdicts
                .iter()
                .map(|v| ConditionDocument {
                    id: v.condition.code().to_owned(),
                    title: v.condition.title().to_owned(),
                    status: v.status.name().to_owned(),
                    witnesses: v
                        .witnesses
                        .iter()
                        .map(|w| WitnessDocument {
                            subject: w.subject.to_string(),
                            message: w.finding.to_string(),
                        })
                        .collect(),
                })
                .collect(),
            sft_vertices: r
                .sft_vertices
                .iter()
                .map(|(id, c)| SftVertexDocument::new(id, c))
                .collect(),
        }
    }
}

fn verdict_line(r: &CheckReport) -> String {
    let word = if r.realizable {
        "REALIZABLE"
    } else {
        "NOT REALIZABLE"
    };
    format!("result: {word} on {}", r.target)
}

fn write_text(out: &mut String, r: &CheckReport) {
    let _ = writeln!(out, "target: {}", r.target);
    match r.beta {
        Some(beta) => {
            let _ = writeln!(out, "cycle rank: {beta}");
        }
        None => out.push_str("cycle rank: undefined (graph is not connected)\n"),
    }
    for v in &r.verdicts {
        let _ = writeln!(
            out,
            "[{}] {} {}",
            v.status.name(),
            v.condition.code(),
            v.condition.title()
        );
        for w in &v.witnesses {
            let _ = writeln!(out, "    {w}");
        }
    }
}

/// Text mode lists every condition with its status and witnesses; JSON mode
/// emits a [`ReportDocument`].
pub fn render_report(r: &CheckReport, mode: RenderMode) -> String {
    match mode {
        RenderMode::Text => {
            let mut out = String::new();
            write_text(&mut out, r);
            out.push_str(&verdict_line(r));
            out.push('\n');
            out
        }
        RenderMode::Json => {
            let mut out = serde_json::to_string_pretty(&ReportDocument::from(r))
                .expect("report documents always serialize");
            out.push('\n');
            out
        }
    }
}

/// The text report preceded by the per-vertex degree data it was computed
/// from.
pub fn render_explanation(g: &LyapunovGraph, r: &CheckReport) -> String {
    let mut out = String::new();
    let s = &r.structure;
    let _ = writeln!(
        out,
        "structure: connected={} acyclic={} nonempty={}",
        s.connected, s.oriented_acyclic, s.nonempty
    );
    out.push_str("vertices:\n");
    let counts = g.degree_counts();
    for (v, c) in g.vertices().iter().zip(&counts) {
        let _ = writeln!(
            out,
            "    {}: {}; e+ = {}, e- = {}, G+ = {}, G- = {}, e+ - e- - G+ + G- = {}",
            v.id,
            v.label,
            c.e_plus,
            c.e_minus,
            c.g_plus,
            c.g_minus,
            c.poincare_hopf_balance()
        );
    }
    if !r.sft_vertices.is_empty() {
        out.push_str("subshift vertices:\n");
        for (id, c) in &r.sft_vertices {
            let _ = writeln!(
                out,
                "    {id}: k = {}, class {} (k+1-G- = {}, k-G- = {}, k+1-G+ = {}, k-G+ = {})",
                c.k,
                c.kind.name(),
                c.k as i64 + 1 - c.g_minus as i64,
                c.k as i64 - c.g_minus as i64,
                c.k as i64 + 1 - c.g_plus as i64,
                c.k as i64 - c.g_plus as i64,
            );
        }
    }
    write_text(&mut out, r);
    out.push_str(&verdict_line(r));
    out.push('\n');
    out
}

/// Integers that may outgrow 64 bits: a JSON number when they fit, a decimal
/// string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigNumber {
    Small(u64),
    Large(String),
}

impl From<&BigUint> for BigNumber {
    fn from(n: &BigUint) -> Self {
        match u64::try_from(n) {
            Ok(v) => BigNumber::Small(v),
            Err(_) => BigNumber::Large(n.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsDocument {
    pub matrix: Vec<Vec<i64>>,
    pub k: usize,
    pub irreducible: bool,
    pub permutation: bool,
    pub parry_sullivan: BigNumber,
    pub bowen_franks: Vec<BigNumber>,
}

impl InvariantsDocument {
    pub fn new(a: &IntMatrix, r: &MatrixInvariantReport) -> Self {
        Self {
            matrix: (0..a.rows()).map(|i| a.row(i).to_vec()).collect(),
            k: r.k,
            irreducible: r.irreducible,
            permutation: r.permutation,
            parry_sullivan: (&r.parry_sullivan).into(),
            bowen_franks: r.bowen_franks.iter().map(BigNumber::from).collect(),
        }
    }
}

pub fn render_invariants(a: &IntMatrix, r: &MatrixInvariantReport, mode: RenderMode) -> String {
    match mode {
        RenderMode::Text => {
            let yes_no = |b: bool| if b { "yes" } else { "no" };
            let factors: Vec<String> = r.bowen_franks.iter().map(BigUint::to_string).collect();
            format!(
                "matrix: {a}\nk: {}\nirreducible: {}\npermutation: {}\n\
                 parry-sullivan |det(I - A)|: {}\nbowen-franks factors of I - A: [{}]\n",
                r.k,
                yes_no(r.irreducible),
                yes_no(r.permutation),
                r.parry_sullivan,
                factors.join(", ")
            )
        }
        RenderMode::Json => {
            let mut out = serde_json::to_string_pretty(&InvariantsDocument::new(a, r))
                .expect("invariant documents always serialize");
            out.push('\n');
            out
        }
    }
}

//! JSON graph documents.
//!
//! ```json
//! {
//!   "vertices": [
//!     {"id": "R", "label": {"kind": "orbit", "orbit": "repelling"}},
//!     {"id": "v", "label": {"kind": "sft", "rows": 1, "cols": 1, "entries": [1]}},
//!     {"id": "s", "label": {"kind": "sing", "index": 2}}
//!   ],
//!   "edges": [{"src": "R", "dst": "v", "g": 1}]
//! }
//! ```
//!
//! Validation matches the DSL. Errors name the offending JSON path.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{is_valid_id, GraphDocument, ParseError, SourceFormat, SourceLocation, MAX_MATRIX_DIM, MAX_VALUE};
use crate::graph::{Edge, LyapunovGraph, Vertex, VertexLabel};
use crate::linalg::IntMatrix;

fn path_error(path: &str, message: impl Into<String>) -> ParseError {
    ParseError::Path {
        path: path.to_owned(),
        message: message.into(),
    }
}

fn object<'v>(value: &'v Value, path: &str, allowed: &[&str]) -> Result<&'v Map<String, Value>, ParseError> {
    let map = value
        .as_object()
        .ok_or_else(|| path_error(path, "expected an object"))?;
    if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(path_error(&format!("{path}.{key}"), "unknown field"));
    }
    Ok(map)
}

fn field<'v>(map: &'v Map<String, Value>, path: &str, key: &str) -> Result<(&'v Value, String), ParseError> {
    let child = format!("{path}.{key}");
    match map.get(key) {
        Some(v) => Ok((v, child)),
        None => Err(path_error(&child, format!("missing field `{key}`"))),
    }
}

fn string<'v>(map: &'v Map<String, Value>, path: &str, key: &str) -> Result<(&'v str, String), ParseError> {
    let (v, child) = field(map, path, key)?;
    let s = v
        .as_str()
        .ok_or_else(|| path_error(&child, "expected a string"))?;
    Ok((s, child))
}

fn number_value(v: &Value, path: &str) -> Result<u64, ParseError> {
    if let Some(n) = v.as_u64() {
        return if n <= MAX_VALUE {
            Ok(n)
        } else {
            Err(path_error(path, format!("{n} exceeds the maximum value {MAX_VALUE}")))
        };
    }
    if v.as_i64().is_some_and(|n| n < 0) || v.as_f64().is_some_and(|f| f < 0.0) {
        return Err(path_error(path, "negative numbers are not allowed"));
    }
    Err(path_error(path, "expected a nonnegative integer"))
}

fn number(map: &Map<String, Value>, path: &str, key: &str) -> Result<u64, ParseError> {
    let (v, child) = field(map, path, key)?;
    number_value(v, &child)
}

fn array<'v>(map: &'v Map<String, Value>, path: &str, key: &str) -> Result<(&'v [Value], String), ParseError> {
    let (v, child) = field(map, path, key)?;
    let items = v
        .as_array()
        .ok_or_else(|| path_error(&child, "expected an array"))?;
    Ok((items, child))
}

fn parse_label(value: &Value, path: &str) -> Result<VertexLabel, ParseError> {
    let map = value
        .as_object()
        .ok_or_else(|| path_error(path, "expected an object"))?;
    let (kind, kind_path) = string(map, path, "kind")?;
    match kind {
        "sing" => {
            object(value, path, &["kind", "index"])?;
            let index = number(map, path, "index")?;
            if index > 3 {
                return Err(path_error(
                    &format!("{path}.index"),
                    format!("singularity index must be 0..=3, got {index}"),
                ));
            }
            Ok(VertexLabel::Singularity { index: index as u8 })
        }
        "orbit" => {
            object(value, path, &["kind", "orbit"])?;
            let (orbit, orbit_path) = string(map, path, "orbit")?;
            match orbit {
                "attracting" => Ok(VertexLabel::AttractingOrbit),
                "repelling" => Ok(VertexLabel::RepellingOrbit),
                other => Err(path_error(
                    &orbit_path,
                    format!("expected `attracting` or `repelling`, found `{other}`"),
                )),
            }
        }
        "sft" => {
            object(value, path, &["kind", "rows", "cols", "entries"])?;
            let rows = number(map, path, "rows")? as usize;
            let cols = number(map, path, "cols")? as usize;
            if rows != cols {
                return Err(path_error(path, format!("matrix must be square, got {rows}x{cols}")));
            }
            if rows == 0 || rows > MAX_MATRIX_DIM {
                return Err(path_error(
                    &format!("{path}.rows"),
                    format!("matrix size must be 1..={MAX_MATRIX_DIM}, got {rows}"),
                ));
            }
            let (items, entries_path) = array(map, path, "entries")?;
            if items.len() != rows * cols {
                return Err(path_error(
                    &entries_path,
                    format!("a {rows}x{cols} matrix needs {} entries, got {}", rows * cols, items.len()),
                ));
            }
            let entries = items
                .iter()
                .enumerate()
                .map(|(i, v)| number_value(v, &format!("{entries_path}[{i}]")).map(|n| n as i64))
                .collect::<Result<Vec<_>, _>>()?;
            let matrix = IntMatrix::new(rows, cols, entries).map_err(|e| path_error(path, e.to_string()))?;
            Ok(VertexLabel::SuspensionSft { matrix })
        }
        other => Err(path_error(
            &kind_path,
            format!("unknown label kind `{other}` (expected sing, orbit or sft)"),
        )),
    }
}

pub fn parse_json(text: &str) -> Result<GraphDocument, ParseError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let root: Value = serde_json::from_str(text).map_err(|e| ParseError::Located {
        line: e.line(),
        column: e.column(),
        message: format!("invalid JSON: {e}"),
    })?;
    let root_map = object(&root, "$", &["vertices", "edges"])?;

    let (vertex_items, vertices_path) = array(root_map, "$", "vertices")?;
    let mut vertices = Vec::with_capacity(vertex_items.len());
    let mut vertex_locations = Vec::with_capacity(vertex_items.len());
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, item) in vertex_items.iter().enumerate() {
        let path = format!("{vertices_path}[{i}]");
        let map = object(item, &path, &["id", "label"])?;
        let (id, id_path) = string(map, &path, "id")?;
        if !is_valid_id(id) {
            return Err(path_error(&id_path, format!("invalid vertex id `{id}`")));
        }
        if index.insert(id, i).is_some() {
            return Err(path_error(&id_path, format!("duplicate vertex id `{id}`")));
        }
        let (label, label_path) = field(map, &path, "label")?;
        vertices.push(Vertex {
            id: id.to_owned(),
            label: parse_label(label, &label_path)?,
        });
        vertex_locations.push(SourceLocation::Path(path));
    }

    let (edge_items, edges_path) = array(root_map, "$", "edges")?;
    let mut edges = Vec::with_capacity(edge_items.len());
    let mut edge_locations = Vec::with_capacity(edge_items.len());
    for (i, item) in edge_items.iter().enumerate() {
        let path = format!("{edges_path}[{i}]");
        let map = object(item, &path, &["src", "dst", "g"])?;
        let endpoint = |key: &str| -> Result<usize, ParseError> {
            let (id, id_path) = string(map, &path, key)?;
            index
                .get(id)
                .copied()
                .ok_or_else(|| path_error(&id_path, format!("unknown vertex id `{id}`")))
        };
        let src = endpoint("src")?;
        let dst = endpoint("dst")?;
        let weight = number(map, &path, "g")? as u32;
        if src == dst {
            return Err(path_error(
                &path,
                format!("self-loop at `{}` (an oriented cycle)", vertices[src].id),
            ));
        }
        edges.push(Edge { src, dst, weight });
        edge_locations.push(SourceLocation::Path(path));
    }

    if vertices.is_empty() {
        return Err(path_error(&vertices_path, "graph has no vertices"));
    }
    let graph = LyapunovGraph::new(vertices, edges).map_err(|e| path_error("$", e.to_string()))?;
    Ok(GraphDocument {
        format: SourceFormat::Json,
        graph,
        vertex_locations,
        edge_locations,
    })
}

#[derive(Serialize)]
struct GraphOut<'a> {
    vertices: Vec<VertexOut<'a>>,
    edges: Vec<EdgeOut<'a>>,
}

#[derive(Serialize)]
struct VertexOut<'a> {
    id: &'a str,
    label: LabelOut<'a>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum LabelOut<'a> {
    Sing { index: u8 },
    Orbit { orbit: &'static str },
    Sft { rows: usize, cols: usize, entries: &'a [i64] },
}

#[derive(Serialize)]
struct EdgeOut<'a> {
    src: &'a str,
    dst: &'a str,
    g: u32,
}

pub fn render_json(g: &LyapunovGraph) -> String {
    let mut out = serde_json::to_string_pretty(&graph_out(g)).expect("graph documents always serialize");
    out.push('\n');
    out
}

/// Single-line JSON without a trailing newline.
pub fn render_json_compact(g: &LyapunovGraph) -> String {
    serde_json::to_string(&graph_out(g)).expect("graph documents always serialize")
}

fn graph_out(g: &LyapunovGraph) -> GraphOut<'_> {
    let vertices = g
        .vertices()
        .iter()
        .map(|v| VertexOut {
            id: &v.id,
            label: match &v.label {
                VertexLabel::Singularity { index } => LabelOut::Sing { index: *index },
                VertexLabel::AttractingOrbit => LabelOut::Orbit { orbit: "attracting" },
                VertexLabel::RepellingOrbit => LabelOut::Orbit { orbit: "repelling" },
                VertexLabel::SuspensionSft { matrix } => LabelOut::Sft {
                    rows: matrix.rows(),
                    cols: matrix.cols(),
                    entries: matrix.entries(),
                },
            },
        })
        .collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| EdgeOut {
            src: &g.vertices()[e.src].id,
            dst: &g.vertices()[e.dst].id,
            g: e.weight,
        })
        .collect();
    GraphOut { vertices, edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::dsl::parse_dsl;

    fn path_err(text: &str) -> (String, String) {
        match parse_json(text).unwrap_err() {
            ParseError::Path { path, message } => (path, message),
            other => panic!("unexpected {other:?}"),
        }
    }

    const TWO_ORBITS: &str = r#"{
        "vertices": [
            {"id": "a", "label": {"kind": "orbit", "orbit": "repelling"}},
            {"id": "b", "label": {"kind": "orbit", "orbit": "attracting"}}
        ],
        "edges": [{"src": "a", "dst": "b", "g": 1}]
    }"#;

    #[test]
    fn matches_dsl_equivalent() {
        let from_json = parse_json(TWO_ORBITS).unwrap();
        let from_dsl = parse_dsl("vertex a orbit repelling\nvertex b orbit attracting\nedge a -> b g=1").unwrap();
        assert_eq!(from_json.graph, from_dsl.graph);
        assert_eq!(from_json.edge_locations, vec![SourceLocation::Path("$.edges[0]".into())]);
    }

    #[test]
    fn missing_weight_names_the_path() {
        let text = TWO_ORBITS.replace(r#", "g": 1"#, "");
        let (path, message) = path_err(&text);
        assert_eq!(path, "$.edges[0].g");
        assert!(message.contains("missing"));
    }

    #[test]
    fn sft_entry_count_mismatch() {
        let text = r#"{"vertices": [{"id": "v", "label": {"kind": "sft", "rows": 2, "cols": 2, "entries": [1, 2, 3]}}], "edges": []}"#;
        let (path, message) = path_err(text);
        assert_eq!(path, "$.vertices[0].label.entries");
        assert!(message.contains("needs 4 entries"));
    }

    #[test]
    fn validation_errors() {
        let (path, _) = path_err(r#"{"vertices": [{"id": "v", "label": {"kind": "sft", "rows": 1, "cols": 1, "entries": [-1]}}], "edges": []}"#);
        assert_eq!(path, "$.vertices[0].label.entries[0]");

        let (path, message) = path_err(r#"{"vertices": [{"id": "v", "label": {"kind": "sing", "index": 0}}], "edges": [{"src": "v", "dst": "v", "g": 0}]}"#);
        assert_eq!(path, "$.edges[0]");
        assert!(message.contains("self-loop"));

        let (path, message) = path_err(r#"{"vertices": [{"id": "v", "label": {"kind": "sing", "index": 0}}], "edges": [{"src": "v", "dst": "w", "g": 0}]}"#);
        assert_eq!(path, "$.edges[0].dst");
        assert!(message.contains("unknown"));

        let (path, _) = path_err(r#"{"vertices": [{"id": "v", "label": {"kind": "sing", "index": 0}}, {"id": "v", "label": {"kind": "sing", "index": 3}}], "edges": []}"#);
        assert_eq!(path, "$.vertices[1].id");

        let (path, _) = path_err(r#"{"vertices": [{"id": "has space", "label": {"kind": "sing", "index": 0}}], "edges": []}"#);
        assert_eq!(path, "$.vertices[0].id");

        let (path, _) = path_err(r#"{"vertices": [{"id": "v", "label": {"kind": "sing", "index": 0, "extra": 1}}], "edges": []}"#);
        assert_eq!(path, "$.vertices[0].label.extra");

        let (path, _) = path_err(r#"{"vertices": [{"id": "v", "label": {"kind": "blob"}}], "edges": []}"#);
        assert_eq!(path, "$.vertices[0].label.kind");

        let (path, _) = path_err(r#"{"vertices": [{"id": "v", "label": {"kind": "sing", "index": 1.5}}], "edges": []}"#);
        assert_eq!(path, "$.vertices[0].label.index");

        let (path, message) = path_err(r#"{"vertices": [], "edges": []}"#);
        assert_eq!(path, "$.vertices");
        assert_eq!(message, "graph has no vertices");
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let err = parse_json("{\n  \"vertices\": [,]\n}").unwrap_err();
        assert!(matches!(err, ParseError::Located { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn render_then_parse() {
        let g = parse_json(TWO_ORBITS).unwrap().graph;
        let rendered = render_json(&g);
        assert!(rendered.contains(r#""kind": "orbit""#));
        assert_eq!(parse_json(&rendered).unwrap().graph, g);
    }
}

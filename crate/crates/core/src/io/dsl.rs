//! The line-oriented graph format.
//!
//! ```text
//! # comments run to the end of the line
//! vertex R orbit repelling
//! vertex v sft 2x2 [1, 0, 0, 1]
//! vertex A orbit attracting
//! vertex s sing 2
//! edge R -> v g=1
//! edge v -> A g=1
//! ```
//!
//! One declaration per line, in any order. Matrices are row-major and must be
//! square. Edges may refer to vertices declared later.

use std::collections::HashMap;

use super::{is_valid_id, GraphDocument, ParseError, SourceFormat, SourceLocation, MAX_MATRIX_DIM, MAX_VALUE};
use crate::graph::{Edge, LyapunovGraph, Vertex, VertexLabel};
use crate::linalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Word(&'a str),
    Arrow,
    Equals,
    Open,
    Close,
    Comma,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    tok: Tok<'a>,
    column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    end_column: usize,
}

impl<'a> Line<'a> {
    fn lex(number: usize, text: &'a str) -> Result<Self, ParseError> {
        let mut tokens = Vec::new();
        // Columns count characters, slices use byte offsets.
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (offset, c) = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let next = chars.get(i + 1).map(|&(_, c)| c);
            let simple = match c {
                '=' => Some(Tok::Equals),
                '[' => Some(Tok::Open),
                ']' => Some(Tok::Close),
                ',' => Some(Tok::Comma),
                '-' if next == Some('>') => {
                    i += 1;
                    Some(Tok::Arrow)
                }
                _ => None,
            };
            if let Some(tok) = simple {
                tokens.push(Token { tok, column });
                i += 1;
                continue;
            }
            if !is_word_char(c) {
                return Err(located(number, column, format!("unexpected character `{c}`")));
            }
            let start = offset;
            let mut j = i;
            while j < chars.len() {
                let (_, cj) = chars[j];
                let arrow = cj == '-' && chars.get(j + 1).map(|&(_, c)| c) == Some('>');
                if !is_word_char(cj) || arrow {
                    break;
                }
                j += 1;
            }
            let end = chars.get(j).map_or(text.len(), |&(o, _)| o);
            tokens.push(Token {
                tok: Tok::Word(&text[start..end]),
                column,
            });
            i = j;
        }
        Ok(Self {
            number,
            tokens,
            pos: 0,
            end_column: chars.len() + 1,
        })
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        located(self.number, column, message.into())
    }

    fn peek_column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.end_column, |t| t.column)
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn word(&mut self, what: &str) -> Result<(&'a str, usize), ParseError> {
        let column = self.peek_column();
        match self.next() {
            Some(Token {
                tok: Tok::Word(w), ..
            }) => Ok((w, column)),
            Some(_) => Err(self.error(column, format!("expected {what}"))),
            None => Err(self.error(column, format!("expected {what}, found end of line"))),
        }
    }

    fn expect(&mut self, tok: Tok<'static>, what: &str) -> Result<usize, ParseError> {
        let column = self.peek_column();
        match self.next() {
            Some(t) if t.tok == tok => Ok(column),
            _ => Err(self.error(column, format!("expected {what}"))),
        }
    }

    fn id(&mut self) -> Result<(&'a str, usize), ParseError> {
        let (w, column) = self.word("a vertex id")?;
        if !is_valid_id(w) {
            return Err(self.error(column, format!("invalid vertex id `{w}`")));
        }
        Ok((w, column))
    }

    fn number(&mut self, what: &str) -> Result<u64, ParseError> {
        let (w, column) = self.word(what)?;
        parse_number(w).map_err(|m| self.error(column, m))
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(self.error(t.column, "unexpected trailing input")),
        }
    }
}

fn located(line: usize, column: usize, message: String) -> ParseError {
    ParseError::Located {
        line,
        column,
        message,
    }
}

fn parse_number(w: &str) -> Result<u64, String> {
    if w.starts_with('-') && w.len() > 1 && w[1..].bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("negative numbers are not allowed (`{w}`)"));
    }
    if w.is_empty() || !w.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected a nonnegative integer, found `{w}`"));
    }
    match w.parse::<u64>() {
        Ok(v) if v <= MAX_VALUE => Ok(v),
        _ => Err(format!("`{w}` exceeds the maximum value {MAX_VALUE}")),
    }
}

struct PendingEdge<'a> {
    src: (&'a str, usize),
    dst: (&'a str, usize),
    weight: u32,
    line: usize,
    column: usize,
}

pub fn parse_dsl(text: &str) -> Result<GraphDocument, ParseError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut vertices = Vec::new();
    let mut vertex_locations = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut pending = Vec::new();

    for (i, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let mut line = Line::lex(i + 1, raw)?;
        let Some(first) = line.tokens.first().cloned() else {
            continue;
        };
        match first.tok {
            Tok::Word("vertex") => {
                line.next();
                let (id, id_column) = line.id()?;
                let label = parse_label(&mut line)?;
                line.finish()?;
                if index.insert(id, vertices.len()).is_some() {
                    return Err(line.error(id_column, format!("duplicate vertex id `{id}`")));
                }
                vertices.push(Vertex {
                    id: id.to_owned(),
                    label,
                });
                vertex_locations.push(SourceLocation::Line {
                    line: line.number,
                    column: first.column,
                });
            }
            Tok::Word("edge") => {
                line.next();
                let src = line.id()?;
                line.expect(Tok::Arrow, "`->`")?;
                let dst = line.id()?;
                let (key, key_column) = line.word("`g=WEIGHT`")?;
                if key != "g" {
                    return Err(line.error(key_column, "expected `g=WEIGHT`"));
                }
                line.expect(Tok::Equals, "`=` after `g`")?;
                let weight = line.number("an edge weight")? as u32;
                line.finish()?;
                if src.0 == dst.0 {
                    return Err(line.error(
                        dst.1,
                        format!("self-loop at `{}` (an oriented cycle)", src.0),
                    ));
                }
                pending.push(PendingEdge {
                    src,
                    dst,
                    weight,
                    line: line.number,
                    column: first.column,
                });
            }
            _ => {
                return Err(line.error(first.column, "expected `vertex` or `edge`"));
            }
        }
    }

    let mut edges = Vec::with_capacity(pending.len());
    let mut edge_locations = Vec::with_capacity(pending.len());
    for p in pending {
        let resolve = |(id, column): (&str, usize)| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| located(p.line, column, format!("unknown vertex id `{id}`")))
        };
        edges.push(Edge {
            src: resolve(p.src)?,
            dst: resolve(p.dst)?,
            weight: p.weight,
        });
        edge_locations.push(SourceLocation::Line {
            line: p.line,
            column: p.column,
        });
    }
    if vertices.is_empty() {
        return Err(located(1, 1, "graph has no vertices".into()));
    }
    let graph = LyapunovGraph::new(vertices, edges)
        .map_err(|e| located(1, 1, e.to_string()))?;
    Ok(GraphDocument {
        format: SourceFormat::Dsl,
        graph,
        vertex_locations,
        edge_locations,
    })
}

fn parse_label(line: &mut Line<'_>) -> Result<VertexLabel, ParseError> {
    let (kind, kind_column) = line.word("a label kind (sing, orbit or sft)")?;
    match kind {
        "sing" => {
            let column = line.peek_column();
            let index = line.number("a singularity index")?;
            if index > 3 {
                return Err(line.error(column, format!("singularity index must be 0..=3, got {index}")));
            }
            Ok(VertexLabel::Singularity { index: index as u8 })
        }
        "orbit" => {
            let (kind, column) = line.word("`attracting` or `repelling`")?;
            match kind {
                "attracting" => Ok(VertexLabel::AttractingOrbit),
                "repelling" => Ok(VertexLabel::RepellingOrbit),
                other => Err(line.error(
                    column,
                    format!("expected `attracting` or `repelling`, found `{other}`"),
                )),
            }
        }
        "sft" => {
            let (shape, shape_column) = line.word("a matrix shape RxC")?;
            let (rows, cols) = parse_shape(shape).map_err(|m| line.error(shape_column, m))?;
            if rows != cols {
                return Err(line.error(shape_column, format!("matrix must be square, got {rows}x{cols}")));
            }
            if rows == 0 || rows > MAX_MATRIX_DIM {
                return Err(line.error(
                    shape_column,
                    format!("matrix size must be 1..={MAX_MATRIX_DIM}, got {rows}"),
                ));
            }
            let open_column = line.expect(Tok::Open, "`[`")?;
            let mut entries = Vec::with_capacity(rows * cols);
            if line.tokens.get(line.pos).map(|t| &t.tok) != Some(&Tok::Close) {
                loop {
                    entries.push(line.number("a matrix entry")? as i64);
                    let column = line.peek_column();
                    match line.next().map(|t| t.tok) {
                        Some(Tok::Comma) => continue,
                        Some(Tok::Close) => break,
                        _ => return Err(line.error(column, "expected `,` or `]`")),
                    }
                }
            } else {
                line.next();
            }
            if entries.len() != rows * cols {
                return Err(line.error(
                    open_column,
                    format!(
                        "a {rows}x{cols} matrix needs {} entries, got {}",
                        rows * cols,
                        entries.len()
                    ),
                ));
            }
            let matrix = IntMatrix::new(rows, cols, entries)
                .map_err(|e| line.error(open_column, e.to_string()))?;
            Ok(VertexLabel::SuspensionSft { matrix })
        }
        other => Err(line.error(
            kind_column,
            format!("unknown label kind `{other}` (expected sing, orbit or sft)"),
        )),
    }
}

fn parse_shape(shape: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected a matrix shape like 2x2, found `{shape}`");
    let (r, c) = shape.split_once('x').ok_or_else(bad)?;
    let dim = |s: &str| {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<usize>().map_err(|_| bad())
    };
    Ok((dim(r)?, dim(c)?))
}

pub fn render_label(label: &VertexLabel) -> String {
    match label {
        VertexLabel::Singularity { index } => format!("sing {index}"),
        VertexLabel::AttractingOrbit => "orbit attracting".to_owned(),
        VertexLabel::RepellingOrbit => "orbit repelling".to_owned(),
        VertexLabel::SuspensionSft { matrix } => {
            let entries: Vec<String> = matrix.entries().iter().map(i64::to_string).collect();
            format!("sft {}x{} [{}]", matrix.rows(), matrix.cols(), entries.join(", "))
        }
    }
}

/// Vertices first, then edges, each in declaration order.
pub fn render_dsl(g: &LyapunovGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {} {}\n", v.id, render_label(&v.label)));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "edge {} -> {} g={}\n",
            g.vertices()[e.src].id,
            g.vertices()[e.dst].id,
            e.weight
        ));
    }
    out
}

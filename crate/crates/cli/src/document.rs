//! The text document format for algebras, Morita contexts and linear maps.
//!
//! ```text
//! field Q                      # or GF(p)
//! algebra A                    # a context names its algebras A and B
//!   dim 2
//!   labels e1 e2               # optional
//!   unit 1 0
//!   mul 0 0 0 1                # b_i b_j has coefficient v at b_k: mul i j k v
//! end
//! bimodule M                   # M is an (A, B)-bimodule, N a (B, A)-bimodule
//!   dim 1
//!   left 0 0 0 1               # left i m k v
//!   right 0 0 0 1              # right m j k v
//! end
//! pairing phi                  # phi: M x N -> A, psi: N x M -> B
//!   0 0 0 1                    # m n k v
//! end
//! map gamma                    # column j holds the image of basis vector j
//!   dim 2
//!   col 0 1
//!   col 0 0
//! end
//! ```
//!
//! Indices are 0-based, `#` starts a comment, and every tensor entry not
//! listed is zero. Omitted pairing sections are zero. A document with a
//! single algebra and no bimodules describes that algebra alone.

use std::fmt::{self, Write as _};

use gma_core::{
    Bimodule, FieldSpec, LinearMap, Matrix, MoritaContext, Pairing, Scalar, StructureAlgebra,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Token<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.line, self.column, message)
    }
}

fn tokenize(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &content[s..i],
                    line: line_no,
                    column: content[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

impl From<&Token<'_>> for Pos {
    fn from(t: &Token<'_>) -> Self {
        Pos {
            line: t.line,
            column: t.column,
        }
    }
}

impl Pos {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.line, self.column, message)
    }
}

type Entry = (Pos, [usize; 3], Scalar);

#[derive(Debug, Default)]
struct AlgebraSection {
    header: Option<Pos>,
    dim: Option<usize>,
    unit: Option<Vec<Scalar>>,
    labels: Option<Vec<String>>,
    entries: Vec<Entry>,
}

#[derive(Debug, Default)]
struct BimoduleSection {
    header: Option<Pos>,
    dim: Option<usize>,
    left: Vec<Entry>,
    right: Vec<Entry>,
}

#[derive(Debug, Default)]
struct PairingSection {
    header: Option<Pos>,
    entries: Vec<Entry>,
}

#[derive(Debug)]
struct MapSection {
    header: Pos,
    name: String,
    dim: Option<usize>,
    columns: Vec<(Pos, Vec<Scalar>)>,
}

/// The object a document describes.
#[derive(Clone, Debug)]
pub enum Subject {
    Algebra { name: String, algebra: StructureAlgebra },
    Context(Box<MoritaContext>),
}

#[derive(Clone, Debug)]
pub struct Document {
    pub field: FieldSpec,
    pub subject: Subject,
    pub maps: Vec<(String, LinearMap)>,
}

impl Document {
    pub fn map(&self, name: &str) -> Option<&LinearMap> {
        self.maps.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

fn parse_usize(t: &Token<'_>) -> Result<usize, ParseError> {
    t.text
        .parse::<usize>()
        .map_err(|_| t.error(format!("expected a non-negative integer, found `{}`", t.text)))
}

fn parse_scalar(field: FieldSpec, t: &Token<'_>) -> Result<Scalar, ParseError> {
    field
        .parse_scalar(t.text)
        .map_err(|e| t.error(format!("bad scalar `{}`: {e}", t.text)))
}

fn expect_arity(tokens: &[Token<'_>], n: usize, usage: &str) -> Result<(), ParseError> {
    if tokens.len() != n {
        let t = tokens.get(n).unwrap_or(&tokens[0]);
        return Err(t.error(format!("expected `{usage}`")));
    }
    Ok(())
}

fn entry(field: FieldSpec, tokens: &[Token<'_>], usage: &str) -> Result<Entry, ParseError> {
    expect_arity(tokens, 4, usage)?;
    let idx = [parse_usize(&tokens[0])?, parse_usize(&tokens[1])?, parse_usize(&tokens[2])?];
    Ok(((&tokens[0]).into(), idx, parse_scalar(field, &tokens[3])?))
}

fn set_dim(slot: &mut Option<usize>, tokens: &[Token<'_>]) -> Result<usize, ParseError> {
    expect_arity(tokens, 2, "dim N")?;
    if slot.is_some() {
        return Err(tokens[0].error("dim given twice"));
    }
    let d = parse_usize(&tokens[1])?;
    *slot = Some(d);
    Ok(d)
}

fn need_dim(dim: Option<usize>, t: &Token<'_>) -> Result<usize, ParseError> {
    dim.ok_or_else(|| t.error("`dim` must come first in a section"))
}

enum Open {
    Algebra(String),
    Bimodule(String),
    Pairing(String),
    Map,
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut field: Option<FieldSpec> = None;
    let mut algebras: Vec<(String, AlgebraSection)> = Vec::new();
    let mut m_sec = BimoduleSection::default();
    let mut n_sec = BimoduleSection::default();
    let mut phi_sec = PairingSection::default();
    let mut psi_sec = PairingSection::default();
    let mut maps: Vec<MapSection> = Vec::new();
    let mut open: Option<(Open, Pos)> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let tokens = tokenize(line_no, raw);
        let Some(head) = tokens.first() else { continue };
        let keyword = head.text;

        if keyword == "end" {
            expect_arity(&tokens, 1, "end")?;
            if open.take().is_none() {
                return Err(head.error("`end` without an open section"));
            }
            continue;
        }

        match &open {
            None => {
                match keyword {
                    "field" => {
                        expect_arity(&tokens, 2, "field Q|GF(p)")?;
                        if field.is_some() {
                            return Err(head.error("field given twice"));
                        }
                        field = Some(tokens[1].text.parse::<FieldSpec>().map_err(|e| tokens[1].error(e))?);
                        continue;
                    }
                    "algebra" | "bimodule" | "pairing" | "map" => {}
                    other => return Err(head.error(format!("unknown keyword `{other}`"))),
                }
                if field.is_none() {
                    return Err(head.error("the `field` line must come before any section"));
                }
                expect_arity(&tokens, 2, &format!("{keyword} NAME"))?;
                let name = tokens[1].text.to_string();
                let pos: Pos = head.into();
                match keyword {
                    "algebra" => {
                        if algebras.iter().any(|(n, _)| *n == name) {
                            return Err(tokens[1].error(format!("algebra {name} defined twice")));
                        }
                        algebras.push((
                            name.clone(),
                            AlgebraSection {
                                header: Some(pos),
                                ..Default::default()
                            },
                        ));
                        open = Some((Open::Algebra(name), pos));
                    }
                    "bimodule" => {
                        let sec = match name.as_str() {
                            "M" => &mut m_sec,
                            "N" => &mut n_sec,
                            _ => return Err(tokens[1].error("bimodules are named M or N")),
                        };
                        if sec.header.is_some() {
                            return Err(tokens[1].error(format!("bimodule {name} defined twice")));
                        }
                        sec.header = Some(pos);
                        open = Some((Open::Bimodule(name), pos));
                    }
                    "pairing" => {
                        let sec = match name.as_str() {
                            "phi" => &mut phi_sec,
                            "psi" => &mut psi_sec,
                            _ => return Err(tokens[1].error("pairings are named phi or psi")),
                        };
                        if sec.header.is_some() {
                            return Err(tokens[1].error(format!("pairing {name} defined twice")));
                        }
                        sec.header = Some(pos);
                        open = Some((Open::Pairing(name), pos));
                    }
                    _ => {
                        if maps.iter().any(|m| m.name == name) {
                            return Err(tokens[1].error(format!("map {name} defined twice")));
                        }
                        maps.push(MapSection {
                            header: pos,
                            name,
                            dim: None,
                            columns: Vec::new(),
                        });
                        open = Some((Open::Map, pos));
                    }
                }
            }
            Some((section, _)) => {
                let field = field.expect("sections open only after the field line");
                match section {
                    Open::Algebra(name) => {
                        let sec = &mut algebras.iter_mut().find(|(n, _)| n == name).expect("open algebra").1;
                        match keyword {
                            "dim" => {
                                set_dim(&mut sec.dim, &tokens)?;
                            }
                            "unit" => {
                                let d = need_dim(sec.dim, head)?;
                                expect_arity(&tokens, d + 1, &format!("unit followed by {d} scalars"))?;
                                let u = tokens[1..]
                                    .iter()
                                    .map(|t| parse_scalar(field, t))
                                    .collect::<Result<Vec<_>, _>>()?;
                                sec.unit = Some(u);
                            }
                            "labels" => {
                                let d = need_dim(sec.dim, head)?;
                                expect_arity(&tokens, d + 1, &format!("labels followed by {d} names"))?;
                                sec.labels = Some(tokens[1..].iter().map(|t| t.text.to_string()).collect());
                            }
                            "mul" => {
                                let d = need_dim(sec.dim, head)?;
                                let e = entry(field, &tokens[1..], "mul i j k v").map_err(|e| {
                                    if tokens.len() != 5 {
                                        head.error("expected `mul i j k v`")
                                    } else {
                                        e
                                    }
                                })?;
                                for (t, &i) in tokens[1..4].iter().zip(&e.1) {
                                    if i >= d {
                                        return Err(t.error(format!("index {i} out of range for dimension {d}")));
                                    }
                                }
                                sec.entries.push(e);
                            }
                            other => return Err(head.error(format!("unknown algebra keyword `{other}`"))),
                        }
                    }
                    Open::Bimodule(name) => {
                        let sec = if name == "M" { &mut m_sec } else { &mut n_sec };
                        match keyword {
                            "dim" => {
                                set_dim(&mut sec.dim, &tokens)?;
                            }
                            "left" | "right" => {
                                need_dim(sec.dim, head)?;
                                if tokens.len() != 5 {
                                    return Err(head.error(format!("expected `{keyword} i j k v`")));
                                }
                                let e = entry(field, &tokens[1..], "i j k v")?;
                                if keyword == "left" {
                                    sec.left.push(e);
                                } else {
                                    sec.right.push(e);
                                }
                            }
                            other => return Err(head.error(format!("unknown bimodule keyword `{other}`"))),
                        }
                    }
                    Open::Pairing(name) => {
                        let sec = if name == "phi" { &mut phi_sec } else { &mut psi_sec };
                        sec.entries.push(entry(field, &tokens, "m n k v")?);
                    }
                    Open::Map => {
                        let sec = maps.last_mut().expect("open map");
                        match keyword {
                            "dim" => {
                                set_dim(&mut sec.dim, &tokens)?;
                            }
                            "col" => {
                                let d = need_dim(sec.dim, head)?;
                                expect_arity(&tokens, d + 1, &format!("col followed by {d} scalars"))?;
                                if sec.columns.len() == d {
                                    return Err(head.error(format!("more than {d} columns")));
                                }
                                let c = tokens[1..]
                                    .iter()
                                    .map(|t| parse_scalar(field, t))
                                    .collect::<Result<Vec<_>, _>>()?;
                                sec.columns.push((head.into(), c));
                            }
                            other => return Err(head.error(format!("unknown map keyword `{other}`"))),
                        }
                    }
                }
            }
        }
    }
    if let Some((_, pos)) = open {
        return Err(ParseError::at(
            last_line + 1,
            1,
            format!("section opened on line {} is missing `end`", pos.line),
        ));
    }
    let field = field.ok_or_else(|| ParseError::at(last_line.max(1), 1, "missing `field` line"))?;
    assemble(field, algebras, m_sec, n_sec, phi_sec, psi_sec, maps)
}

fn build_algebra(field: FieldSpec, name: &str, sec: AlgebraSection) -> Result<StructureAlgebra, ParseError> {
    let header = sec.header.expect("parsed sections have headers");
    let dim = sec.dim.ok_or_else(|| header.error(format!("algebra {name} has no `dim`")))?;
    let unit = sec.unit.ok_or_else(|| header.error(format!("algebra {name} has no `unit`")))?;
    let entries: Vec<_> = sec.entries.into_iter().map(|(_, [i, j, k], v)| (i, j, k, v)).collect();
    let alg = StructureAlgebra::from_sparse(field, dim, &entries, unit)
        .map_err(|e| header.error(format!("algebra {name}: {e}")))?;
    match sec.labels {
        Some(labels) => alg.with_labels(labels).map_err(|e| header.error(e.to_string())),
        None => Ok(alg),
    }
}

fn check_entries(entries: &[Entry], bounds: [usize; 3], what: &str) -> Result<(), ParseError> {
    for (pos, idx, _) in entries {
        for (i, b) in idx.iter().zip(bounds) {
            if *i >= b {
                return Err(pos.error(format!("{what} index {i} out of range (bound {b})")));
            }
        }
    }
    Ok(())
}

fn build_bimodule(
    field: FieldSpec,
    name: &str,
    sec: BimoduleSection,
    left_dim: usize,
    right_dim: usize,
    fallback: Pos,
) -> Result<Bimodule, ParseError> {
    let header = sec
        .header
        .ok_or_else(|| fallback.error(format!("a context needs `bimodule {name}` (use dim 0 for a zero module)")))?;
    let dim = sec.dim.ok_or_else(|| header.error(format!("bimodule {name} has no `dim`")))?;
    check_entries(&sec.left, [left_dim, dim, dim], "left action")?;
    check_entries(&sec.right, [dim, right_dim, dim], "right action")?;
    let strip = |v: Vec<Entry>| v.into_iter().map(|(_, [i, j, k], s)| (i, j, k, s)).collect::<Vec<_>>();
    Bimodule::from_sparse(field, left_dim, right_dim, dim, &strip(sec.left), &strip(sec.right))
        .map_err(|e| header.error(format!("bimodule {name}: {e}")))
}

fn build_pairing(field: FieldSpec, sec: PairingSection, dims: [usize; 3], what: &str) -> Result<Pairing, ParseError> {
    check_entries(&sec.entries, dims, what)?;
    let entries: Vec<_> = sec.entries.into_iter().map(|(_, [i, j, k], s)| (i, j, k, s)).collect();
    Pairing::from_sparse(field, dims[0], dims[1], dims[2], &entries).map_err(|e| ParseError::at(0, 0, e.to_string()))
}

fn assemble(
    field: FieldSpec,
    mut algebras: Vec<(String, AlgebraSection)>,
    m_sec: BimoduleSection,
    n_sec: BimoduleSection,
    phi_sec: PairingSection,
    psi_sec: PairingSection,
    maps: Vec<MapSection>,
) -> Result<Document, ParseError> {
    let start = Pos { line: 1, column: 1 };
    let is_context = m_sec.header.is_some()
        || n_sec.header.is_some()
        || phi_sec.header.is_some()
        || psi_sec.header.is_some()
        || algebras.len() > 1;
    let subject = if is_context {
        let mut take = |name: &str| -> Result<StructureAlgebra, ParseError> {
            match algebras.iter().position(|(n, _)| n == name) {
                Some(i) => {
                    let (n, sec) = algebras.remove(i);
                    build_algebra(field, &n, sec)
                }
                None => Err(start.error(format!("a context needs `algebra {name}`"))),
            }
        };
        let a = take("A")?;
        let b = take("B")?;
        if let Some((name, sec)) = algebras.first() {
            return Err(sec.header.unwrap_or(start).error(format!(
                "unexpected algebra {name}; a context has algebras A and B"
            )));
        }
        let m = build_bimodule(field, "M", m_sec, a.dim(), b.dim(), start)?;
        let n = build_bimodule(field, "N", n_sec, b.dim(), a.dim(), start)?;
        let phi = build_pairing(field, phi_sec, [m.dim(), n.dim(), a.dim()], "phi")?;
        let psi = build_pairing(field, psi_sec, [n.dim(), m.dim(), b.dim()], "psi")?;
        Subject::Context(Box::new(
            MoritaContext::new(a, b, m, n, phi, psi).map_err(|e| start.error(e.to_string()))?,
        ))
    } else {
        let (name, sec) = algebras
            .pop()
            .ok_or_else(|| start.error("the document defines no algebra"))?;
        let algebra = build_algebra(field, &name, sec)?;
        Subject::Algebra { name, algebra }
    };
    let mut out_maps = Vec::new();
    for sec in maps {
        let dim = sec.dim.ok_or_else(|| sec.header.error(format!("map {} has no `dim`", sec.name)))?;
        if sec.columns.len() != dim {
            return Err(sec.header.error(format!(
                "map {} has {} columns, expected {dim}",
                sec.name,
                sec.columns.len()
            )));
        }
        let cols: Vec<Vec<Scalar>> = sec.columns.into_iter().map(|(_, c)| c).collect();
        let m = Matrix::from_columns(field, dim, &cols).map_err(|e| sec.header.error(e.to_string()))?;
        out_maps.push((sec.name, LinearMap::new(m).map_err(|e| sec.header.error(e.to_string()))?));
    }
    Ok(Document {
        field,
        subject,
        maps: out_maps,
    })
}

fn join(xs: &[Scalar]) -> String {
    xs.iter().map(Scalar::to_string).collect::<Vec<_>>().join(" ")
}

fn write_algebra(out: &mut String, name: &str, alg: &StructureAlgebra) -> fmt::Result {
    writeln!(out, "algebra {name}")?;
    writeln!(out, "  dim {}", alg.dim())?;
    if let Some(labels) = alg.labels() {
        writeln!(out, "  labels {}", labels.join(" "))?;
    }
    writeln!(out, "  unit {}", join(alg.unit()))?;
    for (i, j, k, v) in alg.sparse_entries() {
        writeln!(out, "  mul {i} {j} {k} {v}")?;
    }
    writeln!(out, "end")
}

fn write_bimodule(out: &mut String, name: &str, m: &Bimodule) -> fmt::Result {
    writeln!(out, "bimodule {name}")?;
    writeln!(out, "  dim {}", m.dim())?;
    for (i, j, k, v) in m.left_entries() {
        writeln!(out, "  left {i} {j} {k} {v}")?;
    }
    for (i, j, k, v) in m.right_entries() {
        writeln!(out, "  right {i} {j} {k} {v}")?;
    }
    writeln!(out, "end")
}

fn write_pairing(out: &mut String, name: &str, p: &Pairing) -> fmt::Result {
    writeln!(out, "pairing {name}")?;
    for (i, j, k, v) in p.entries() {
        writeln!(out, "  {i} {j} {k} {v}")?;
    }
    writeln!(out, "end")
}

fn write_map(out: &mut String, name: &str, f: &LinearMap) -> fmt::Result {
    writeln!(out, "map {name}")?;
    writeln!(out, "  dim {}", f.dim())?;
    for j in 0..f.dim() {
        writeln!(out, "  col {}", join(&f.image(j)))?;
    }
    writeln!(out, "end")
}

/// Serializes a document; parsing the output gives back the same document.
pub fn write_document(doc: &Document) -> String {
    let mut out = String::new();
    let res = (|| -> fmt::Result {
        writeln!(out, "field {}", doc.field)?;
        match &doc.subject {
            Subject::Algebra { name, algebra } => write_algebra(&mut out, name, algebra)?,
            Subject::Context(ctx) => {
                write_algebra(&mut out, "A", ctx.a())?;
                write_algebra(&mut out, "B", ctx.b())?;
                write_bimodule(&mut out, "M", ctx.m())?;
                write_bimodule(&mut out, "N", ctx.n())?;
                write_pairing(&mut out, "phi", ctx.phi())?;
                write_pairing(&mut out, "psi", ctx.psi())?;
            }
        }
        for (name, f) in &doc.maps {
            write_map(&mut out, name, f)?;
        }
        Ok(())
    })();
    res.expect("writing to a String cannot fail");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const T2: &str = "field Q\nalgebra T\n  dim 3\n  unit 1 0 1\n  mul 0 0 0 1\n  mul 0 1 1 1\n  mul 1 2 1 1\n  mul 2 2 2 1\nend\n";

    #[test]
    fn algebra_document_round_trip() {
        let doc = parse_document(T2).unwrap();
        let Subject::Algebra { name, algebra } = &doc.subject else { panic!("expected an algebra") };
        assert_eq!(name, "T");
        assert_eq!(algebra.dim(), 3);
        let again = parse_document(&write_document(&doc)).unwrap();
        assert_eq!(write_document(&again), write_document(&doc));
    }

    #[test]
    fn malformed_scalar_position() {
        let text = T2.replace("mul 2 2 2 1", "mul 2 2 2 1/0");
        let err = parse_document(&text).unwrap_err();
        assert_eq!((err.line, err.column), (8, 13));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(parse_document("algebra A\n").unwrap_err().line, 1);
        let err = parse_document("field Q\nalgebra A\n  dim 1\n").unwrap_err();
        assert!(err.message.contains("missing `end`"));
        let err = parse_document("field Q\nalgebra A\n  mul 0 0 0 1\nend\n").unwrap_err();
        assert!(err.message.contains("`dim` must come first"));
        let err = parse_document("field Q\nalgebra A\n  dim 1\n  unit 1\n  mul 0 3 0 1\nend\n").unwrap_err();
        assert_eq!((err.line, err.column), (5, 9));
        let err = parse_document("field GF(4)\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
    }

    #[test]
    fn non_associative_algebra_rejected() {
        let err = parse_document("field Q\nalgebra A\n  dim 1\n  unit 1\n  mul 0 0 0 2\nend\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn tokens_track_columns() {
        let t = tokenize(3, "  mul 1  2 # comment");
        let cols: Vec<_> = t.iter().map(|t| (t.text, t.column)).collect();
        assert_eq!(cols, vec![("mul", 3), ("1", 7), ("2", 10)]);
    }
}

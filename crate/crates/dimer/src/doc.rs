//! Plain-text document format for dimer quivers.
//!
//! The grammar is line-oriented and integer-only:
//!
//! ```text
//! dimer-quiver v1
//! vertices <n>
//! arrow <id> <tail> <head> <wx> <wy>
//! face <id> <+|-> <arrow-id list>
//! ```
//!
//! Blank lines are skipped and `#` starts a comment (full-line or trailing).
//! Ids must be dense and in order: the k-th `arrow` line carries id k, and
//! likewise for faces; all `arrow` lines precede all `face` lines.  Every
//! vertex or arrow reference is range-checked during parsing, so a parsed
//! document never contains dangling ids.  [`emit`] produces the canonical
//! form: `parse` ∘ `emit` is the identity, and `emit` ∘ `parse` canonicalizes
//! whitespace and comments away.

use std::fmt::Write as _;

use thiserror::Error;

use crate::quiver::{Arrow, DimerQuiver, Face, HomologyClass, Orientation};

/// A parse failure with its 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A parsed quiver document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverDocument {
    pub quiver: DimerQuiver,
}

impl QuiverDocument {
    pub fn new(quiver: DimerQuiver) -> Self {
        QuiverDocument { quiver }
    }

    /// Canonical text of this document.
    pub fn text(&self) -> String {
        emit(&self.quiver)
    }
}

/// Tokenize one line: strip the `#` comment tail, then yield
/// (1-based column, token) pairs.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let code = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &code[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &code[s..]));
    }
    out
}

struct Cursor<'a> {
    line_no: usize,
    line_len: usize,
    toks: &'a [(usize, &'a str)],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        if self.pos < self.toks.len() {
            let t = self.toks[self.pos];
            self.pos += 1;
            Ok(t)
        } else {
            Err(ParseError::new(
                self.line_no,
                self.line_len + 1,
                format!("expected {what}"),
            ))
        }
    }

    fn int<T: std::str::FromStr>(&mut self, what: &str) -> Result<(usize, T), ParseError> {
        let (col, tok) = self.next(what)?;
        tok.parse::<T>().map(|v| (col, v)).map_err(|_| {
            ParseError::new(self.line_no, col, format!("invalid integer `{tok}` for {what}"))
        })
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            let (col, tok) = self.toks[self.pos];
            return Err(ParseError::new(
                self.line_no,
                col,
                format!("unexpected token `{tok}`"),
            ));
        }
        Ok(())
    }
}

/// Parse a quiver document.  See the module docs for the grammar.
pub fn parse(text: &str) -> Result<QuiverDocument, ParseError> {
    #[derive(PartialEq)]
    enum Expect {
        Header,
        Vertices,
        Body,
    }

    let mut expect = Expect::Header;
    let mut vertex_count = 0usize;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut faces: Vec<Face> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            line_no,
            line_len: raw.len(),
            toks: &toks,
            pos: 0,
        };

        match expect {
            Expect::Header => {
                let (col, word) = cur.next("header `dimer-quiver v1`")?;
                if word != "dimer-quiver" {
                    return Err(ParseError::new(
                        line_no,
                        col,
                        "expected header `dimer-quiver v1`",
                    ));
                }
                let (vcol, version) = cur.next("format version")?;
                if version != "v1" {
                    return Err(ParseError::new(
                        line_no,
                        vcol,
                        format!("unsupported version `{version}` (expected `v1`)"),
                    ));
                }
                cur.end()?;
                expect = Expect::Vertices;
            }
            Expect::Vertices => {
                let (col, word) = cur.next("`vertices <count>`")?;
                if word != "vertices" {
                    return Err(ParseError::new(line_no, col, "expected `vertices <count>`"));
                }
                let (_, n) = cur.int::<usize>("vertex count")?;
                cur.end()?;
                vertex_count = n;
                expect = Expect::Body;
            }
            Expect::Body => {
                let (col, word) = cur.next("`arrow` or `face` line")?;
                match word {
                    "arrow" => {
                        if !faces.is_empty() {
                            return Err(ParseError::new(
                                line_no,
                                col,
                                "arrow line after face lines",
                            ));
                        }
                        let (icol, id) = cur.int::<usize>("arrow id")?;
                        if id != arrows.len() {
                            return Err(ParseError::new(
                                line_no,
                                icol,
                                format!("expected arrow id {}, found {id}", arrows.len()),
                            ));
                        }
                        let (tcol, tail) = cur.int::<usize>("tail vertex")?;
                        if tail >= vertex_count {
                            return Err(ParseError::new(
                                line_no,
                                tcol,
                                format!("vertex {tail} out of range (vertex count {vertex_count})"),
                            ));
                        }
                        let (hcol, head) = cur.int::<usize>("head vertex")?;
                        if head >= vertex_count {
                            return Err(ParseError::new(
                                line_no,
                                hcol,
                                format!("vertex {head} out of range (vertex count {vertex_count})"),
                            ));
                        }
                        let (_, wx) = cur.int::<i64>("x winding")?;
                        let (_, wy) = cur.int::<i64>("y winding")?;
                        cur.end()?;
                        arrows.push(Arrow {
                            tail,
                            head,
                            winding: HomologyClass::new(wx, wy),
                        });
                    }
                    "face" => {
                        let (icol, id) = cur.int::<usize>("face id")?;
                        if id != faces.len() {
                            return Err(ParseError::new(
                                line_no,
                                icol,
                                format!("expected face id {}, found {id}", faces.len()),
                            ));
                        }
                        let (scol, sign) = cur.next("face sign `+` or `-`")?;
                        let orientation = match sign {
                            "+" => Orientation::Positive,
                            "-" => Orientation::Negative,
                            _ => {
                                return Err(ParseError::new(
                                    line_no,
                                    scol,
                                    format!("expected face sign `+` or `-`, found `{sign}`"),
                                ))
                            }
                        };
                        let mut boundary = Vec::new();
                        while cur.pos < cur.toks.len() {
                            let (acol, a) = cur.int::<usize>("arrow id")?;
                            if a >= arrows.len() {
                                return Err(ParseError::new(
                                    line_no,
                                    acol,
                                    format!(
                                        "arrow id {a} out of range ({} arrows declared)",
                                        arrows.len()
                                    ),
                                ));
                            }
                            boundary.push(a);
                        }
                        faces.push(Face {
                            orientation,
                            boundary,
                        });
                    }
                    _ => {
                        return Err(ParseError::new(
                            line_no,
                            col,
                            format!("unknown directive `{word}`"),
                        ));
                    }
                }
            }
        }
    }

    match expect {
        Expect::Header => Err(ParseError::new(
            last_line + 1,
            1,
            "missing header `dimer-quiver v1`",
        )),
        Expect::Vertices => Err(ParseError::new(
            last_line + 1,
            1,
            "missing `vertices` line",
        )),
        Expect::Body => Ok(QuiverDocument::new(DimerQuiver {
            vertex_count,
            arrows,
            faces,
        })),
    }
}

/// Emit the canonical document text for a quiver (trailing newline included).
pub fn emit(q: &DimerQuiver) -> String {
    let mut out = String::new();
    out.push_str("dimer-quiver v1\n");
    let _ = writeln!(out, "vertices {}", q.vertex_count);
    for (id, a) in q.arrows.iter().enumerate() {
        let _ = writeln!(
            out,
            "arrow {id} {} {} {} {}",
            a.tail, a.head, a.winding.x, a.winding.y
        );
    }
    for (id, f) in q.faces.iter().enumerate() {
        let _ = write!(out, "face {id} {}", f.orientation.sign_char());
        for &a in &f.boundary {
            let _ = write!(out, " {a}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_on_fixtures() {
        for &name in fixtures::names() {
            let q = fixtures::by_name(name).unwrap();
            let text = emit(&q);
            let doc = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(doc.quiver, q, "{name}: parse(emit(q)) == q");
            assert_eq!(emit(&doc.quiver), text, "{name}: emit is stable");
        }
    }

    #[test]
    fn canonical_text_of_c3() {
        let expected = "dimer-quiver v1\n\
                        vertices 1\n\
                        arrow 0 0 0 1 0\n\
                        arrow 1 0 0 0 1\n\
                        arrow 2 0 0 -1 -1\n\
                        face 0 + 0 1 2\n\
                        face 1 - 0 2 1\n";
        assert_eq!(emit(&fixtures::c3()), expected);
    }

    #[test]
    fn comments_and_blank_lines_are_tolerated() {
        let text = "# a one-vertex quiver\n\
                    dimer-quiver v1\n\
                    \n\
                    vertices 1   # one vertex\n\
                    arrow 0 0 0 1 0\n\
                    arrow 1 0 0 0 1\n\
                    arrow 2 0 0 -1 -1\n\
                    \n\
                    face 0 + 0 1 2\n\
                    face 1 - 0 2 1 # negative face\n";
        let doc = parse(text).unwrap();
        assert_eq!(doc.quiver, fixtures::c3());
    }

    #[test]
    fn errors_carry_line_and_column() {
        // Dangling arrow id in a face.
        let text = "dimer-quiver v1\nvertices 1\narrow 0 0 0 1 0\nface 0 + 0 7\n";
        let err = parse(text).unwrap_err();
        assert_eq!((err.line, err.column), (4, 12));
        assert!(err.message.contains("out of range"), "{}", err.message);

        // Vertex reference out of range.
        let text = "dimer-quiver v1\nvertices 2\narrow 0 0 5 0 0\n";
        let err = parse(text).unwrap_err();
        assert_eq!((err.line, err.column), (3, 11));
        assert!(err.message.contains("vertex 5"), "{}", err.message);

        // Bad header.
        let err = parse("dimer v1\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));

        // Missing token at end of line.
        let text = "dimer-quiver v1\nvertices 1\narrow 0 0 0 1\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("y winding"), "{}", err.message);

        // Non-dense arrow ids.
        let text = "dimer-quiver v1\nvertices 1\narrow 1 0 0 1 0\n";
        let err = parse(text).unwrap_err();
        assert!(err.message.contains("expected arrow id 0"), "{}", err.message);

        // Arrow after face.
        let text = "dimer-quiver v1\nvertices 1\narrow 0 0 0 1 0\nface 0 + 0\narrow 1 0 0 0 1\n";
        let err = parse(text).unwrap_err();
        assert_eq!(err.line, 5);
        assert!(err.message.contains("after face"), "{}", err.message);

        // Truncated file.
        let err = parse("dimer-quiver v1\n").unwrap_err();
        assert!(err.message.contains("vertices"), "{}", err.message);
        let err = parse("# only a comment\n").unwrap_err();
        assert!(err.message.contains("header"), "{}", err.message);

        // Bad integer.
        let text = "dimer-quiver v1\nvertices one\n";
        let err = parse(text).unwrap_err();
        assert_eq!((err.line, err.column), (2, 10));
        assert!(err.message.contains("invalid integer"), "{}", err.message);

        // Unknown directive.
        let text = "dimer-quiver v1\nvertices 1\nedge 0 0 0 1 0\n";
        let err = parse(text).unwrap_err();
        assert!(err.message.contains("unknown directive"), "{}", err.message);
    }

    #[test]
    fn display_includes_position() {
        let err = parse("dimer v1\n").unwrap_err();
        let shown = err.to_string();
        assert!(shown.starts_with("line 1, column 1:"), "{shown}");
    }
}

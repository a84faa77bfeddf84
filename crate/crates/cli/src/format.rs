//! Line-oriented text formats for algebras, modules and layered representations.
//!
//! `#` starts a comment. Relations list arrows in written order: the rightmost
//! arrow acts first, so `relation b a` is the path `a` followed by `b`.
//!
//! ```text
//! smonkit-algebra 1
//! prime 2
//! vertices 3
//! arrow a 3 2
//! arrow b 2 1
//! relation b a
//! ```

use std::fmt::{self, Write as _};

use thiserror::Error;

pub const ALGEBRA_HEADER: &str = "smonkit-algebra";
pub const MODULE_HEADER: &str = "smonkit-module";
pub const LAYERED_HEADER: &str = "smonkit-layered";
pub const VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowDecl {
    pub name: String,
    /// 1-based.
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDoc {
    pub prime: Option<u32>,
    pub vertices: usize,
    pub arrows: Vec<ArrowDecl>,
    /// Arrow names in written order.
    pub relations: Vec<Vec<String>>,
    /// Line of each relation, for error reporting.
    pub relation_lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixBlock {
    pub rows: usize,
    pub cols: usize,
    /// Row-major, as written.
    pub entries: Vec<i64>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleBody {
    pub dims: Vec<usize>,
    pub dims_line: usize,
    pub matrices: Vec<(String, MatrixBlock)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDoc {
    pub algebra: String,
    pub body: ModuleBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorDoc {
    Path(String),
    Inline(AlgebraDoc),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDoc {
    pub arrow: String,
    pub line: usize,
    /// `(A-vertex, block)`, A-vertex 1-based.
    pub blocks: Vec<(usize, MatrixBlock)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredDoc {
    pub base: String,
    pub factor: FactorDoc,
    /// `(Q-vertex, module body)`, Q-vertex 1-based.
    pub branches: Vec<(usize, ModuleBody)>,
    pub maps: Vec<MapDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Algebra(AlgebraDoc),
    Module(ModuleDoc),
    Layered(LayeredDoc),
}

// ----------------------------------------------------------------------------
// tokenizer

#[derive(Debug)]
struct Line<'a> {
    no: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].1
    }

    fn end_col(&self) -> usize {
        self.tokens.last().map_or(1, |(c, t)| c + t.chars().count())
    }

    fn arity(&self, n: usize) -> Result<(), ParseError> {
        if self.tokens.len() != n + 1 {
            let col = self.tokens.get(n + 1).map_or(self.end_col(), |t| t.0);
            return err(self.no, col, format!("`{}` takes {n} argument(s)", self.keyword()));
        }
        Ok(())
    }

    fn arg(&self, k: usize) -> Result<(usize, &'a str), ParseError> {
        match self.tokens.get(k + 1) {
            Some(&t) => Ok(t),
            None => err(self.no, self.end_col(), format!("`{}` is missing an argument", self.keyword())),
        }
    }

    fn usize_arg(&self, k: usize) -> Result<usize, ParseError> {
        let (col, t) = self.arg(k)?;
        t.parse().or_else(|_| err(self.no, col, format!("expected a non-negative integer, found `{t}`")))
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        let mut col = 0;
        for (byte, ch) in content.char_indices() {
            col += 1;
            if ch.is_whitespace() {
                if let Some((c, b)) = start.take() {
                    tokens.push((c, &content[b..byte]));
                }
            } else if start.is_none() {
                start = Some((col, byte));
            }
        }
        if let Some((c, b)) = start {
            tokens.push((c, &content[b..]));
        }
        if !tokens.is_empty() {
            out.push(Line { no: i + 1, tokens });
        }
    }
    out
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let lines = tokenize(text);
        let last_line = text.lines().count().max(1);
        Cursor { lines, pos: 0, last_line }
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.pos)
    }

    fn next(&mut self, what: &str) -> Result<&Line<'a>, ParseError> {
        match self.lines.get(self.pos) {
            Some(_) => {
                self.pos += 1;
                Ok(&self.lines[self.pos - 1])
            }
            None => err(self.last_line + 1, 1, format!("unexpected end of file, expected {what}")),
        }
    }

    fn expect(&mut self, keyword: &str) -> Result<&Line<'a>, ParseError> {
        let line = self.next(&format!("`{keyword}`"))?;
        if line.keyword() != keyword {
            return err(line.no, line.tokens[0].0, format!("expected `{keyword}`, found `{}`", line.keyword()));
        }
        Ok(line)
    }

    fn peek_is(&self, keyword: &str) -> bool {
        self.peek().is_some_and(|l| l.keyword() == keyword)
    }
}

// ----------------------------------------------------------------------------
// parsing

/// Detects the document kind from its header and parses it.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut cur = Cursor::new(text);
    let header = cur.next("a header")?;
    let kind = header.keyword();
    header.arity(1)?;
    let (col, version) = header.arg(0)?;
    if version != VERSION {
        return err(header.no, col, format!("unsupported format version `{version}`"));
    }
    let doc = match kind {
        ALGEBRA_HEADER => Document::Algebra(parse_algebra_body(&mut cur, true)?),
        MODULE_HEADER => Document::Module(parse_module_rest(&mut cur)?),
        LAYERED_HEADER => Document::Layered(parse_layered_rest(&mut cur)?),
        other => {
            return err(header.no, header.tokens[0].0, format!("unknown header `{other}`"));
        }
    };
    if let Some(extra) = cur.peek() {
        return err(extra.no, extra.tokens[0].0, format!("unexpected `{}`", extra.keyword()));
    }
    Ok(doc)
}

fn parse_algebra_body(cur: &mut Cursor<'_>, top_level: bool) -> Result<AlgebraDoc, ParseError> {
    let mut prime = None;
    if top_level && cur.peek_is("prime") {
        let line = cur.next("prime")?;
        line.arity(1)?;
        let p = line.usize_arg(0)?;
        prime = Some(u32::try_from(p).or_else(|_| err(line.no, line.arg(0)?.0, "prime too large"))?);
    }
    let line = cur.expect("vertices")?;
    line.arity(1)?;
    let vertices = line.usize_arg(0)?;
    if vertices == 0 {
        return err(line.no, line.arg(0)?.0, "an algebra needs at least one vertex");
    }
    let mut arrows: Vec<ArrowDecl> = Vec::new();
    while cur.peek_is("arrow") {
        let line = cur.next("arrow")?;
        line.arity(3)?;
        let (col, name) = line.arg(0)?;
        if arrows.iter().any(|a| a.name == name) {
            return err(line.no, col, format!("duplicate arrow id `{name}`"));
        }
        let mut ends = [0; 2];
        for (k, end) in ends.iter_mut().enumerate() {
            let v = line.usize_arg(k + 1)?;
            if v == 0 || v > vertices {
                return err(line.no, line.arg(k + 1)?.0, format!("vertex {v} out of range 1..={vertices}"));
            }
            *end = v;
        }
        arrows.push(ArrowDecl {
            name: name.to_string(),
            source: ends[0],
            target: ends[1],
        });
    }
    let mut relations = Vec::new();
    let mut relation_lines = Vec::new();
    while cur.peek_is("relation") {
        let line = cur.next("relation")?;
        if line.tokens.len() < 3 {
            return err(line.no, line.end_col(), "a relation needs at least two arrows");
        }
        let mut names = Vec::new();
        for &(col, name) in &line.tokens[1..] {
            if !arrows.iter().any(|a| a.name == name) {
                return err(line.no, col, format!("unknown arrow `{name}`"));
            }
            names.push(name.to_string());
        }
        relations.push(names);
        relation_lines.push(line.no);
    }
    Ok(AlgebraDoc {
        prime,
        vertices,
        arrows,
        relations,
        relation_lines,
    })
}

fn parse_entries(cur: &mut Cursor<'_>, rows: usize, cols: usize) -> Result<Vec<i64>, ParseError> {
    let mut entries = Vec::with_capacity(rows * cols);
    if cols == 0 {
        return Ok(entries);
    }
    for r in 0..rows {
        let line = cur.next(&format!("matrix row {}", r + 1))?;
        if line.tokens.len() != cols {
            let col = line.tokens.get(cols).map_or(line.end_col(), |t| t.0);
            return err(line.no, col, format!("expected {cols} entries, found {}", line.tokens.len()));
        }
        for &(col, t) in &line.tokens {
            entries.push(t.parse().or_else(|_| err(line.no, col, format!("expected an integer, found `{t}`")))?);
        }
    }
    Ok(entries)
}

fn parse_matrix(cur: &mut Cursor<'_>, line_no: usize, rows: usize, cols: usize) -> Result<MatrixBlock, ParseError> {
    Ok(MatrixBlock {
        rows,
        cols,
        entries: parse_entries(cur, rows, cols)?,
        line: line_no,
    })
}

fn parse_module_body(cur: &mut Cursor<'_>) -> Result<ModuleBody, ParseError> {
    let line = cur.expect("dims")?;
    let dims_line = line.no;
    let mut dims = Vec::new();
    for k in 0..line.tokens.len() - 1 {
        dims.push(line.usize_arg(k)?);
    }
    let mut matrices: Vec<(String, MatrixBlock)> = Vec::new();
    while cur.peek_is("matrix") {
        let line = cur.next("matrix")?;
        line.arity(3)?;
        let (col, name) = line.arg(0)?;
        if matrices.iter().any(|(n, _)| n == name) {
            return err(line.no, col, format!("second matrix for arrow `{name}`"));
        }
        let (no, name) = (line.no, name.to_string());
        let (rows, cols) = (line.usize_arg(1)?, line.usize_arg(2)?);
        let m = parse_matrix(cur, no, rows, cols)?;
        matrices.push((name, m));
    }
    Ok(ModuleBody {
        dims,
        dims_line,
        matrices,
    })
}

fn parse_path_line(cur: &mut Cursor<'_>, keyword: &str) -> Result<String, ParseError> {
    let line = cur.expect(keyword)?;
    line.arity(1)?;
    Ok(line.arg(0)?.1.to_string())
}

fn parse_module_rest(cur: &mut Cursor<'_>) -> Result<ModuleDoc, ParseError> {
    let algebra = parse_path_line(cur, "algebra")?;
    let body = parse_module_body(cur)?;
    Ok(ModuleDoc { algebra, body })
}

fn expect_end(cur: &mut Cursor<'_>) -> Result<(), ParseError> {
    cur.expect("end")?.arity(0)
}

fn parse_layered_rest(cur: &mut Cursor<'_>) -> Result<LayeredDoc, ParseError> {
    let base = parse_path_line(cur, "base")?;
    let line = cur.expect("factor")?;
    let factor = match line.tokens.len() {
        1 => {
            let doc = parse_algebra_body(cur, false)?;
            expect_end(cur)?;
            FactorDoc::Inline(doc)
        }
        2 => FactorDoc::Path(line.arg(0)?.1.to_string()),
        _ => return err(line.no, line.tokens[2].0, "`factor` takes a path or an inline block"),
    };
    let mut branches: Vec<(usize, ModuleBody)> = Vec::new();
    while cur.peek_is("branch") {
        let line = cur.next("branch")?;
        line.arity(1)?;
        let v = line.usize_arg(0)?;
        if v == 0 || branches.iter().any(|(w, _)| *w == v) {
            return err(line.no, line.arg(0)?.0, format!("invalid or repeated branch {v}"));
        }
        let body = parse_module_body(cur)?;
        expect_end(cur)?;
        branches.push((v, body));
    }
    let mut maps: Vec<MapDoc> = Vec::new();
    while cur.peek_is("map") {
        let line = cur.next("map")?;
        line.arity(1)?;
        let (col, name) = line.arg(0)?;
        if maps.iter().any(|m| m.arrow == name) {
            return err(line.no, col, format!("second map for arrow `{name}`"));
        }
        let (no, arrow) = (line.no, name.to_string());
        let mut blocks: Vec<(usize, MatrixBlock)> = Vec::new();
        while cur.peek_is("block") {
            let line = cur.next("block")?;
            line.arity(3)?;
            let v = line.usize_arg(0)?;
            if v == 0 || blocks.iter().any(|(w, _)| *w == v) {
                return err(line.no, line.arg(0)?.0, format!("invalid or repeated block for A-vertex {v}"));
            }
            let (bno, rows, cols) = (line.no, line.usize_arg(1)?, line.usize_arg(2)?);
            blocks.push((v, parse_matrix(cur, bno, rows, cols)?));
        }
        expect_end(cur)?;
        maps.push(MapDoc { arrow, line: no, blocks });
    }
    Ok(LayeredDoc {
        base,
        factor,
        branches,
        maps,
    })
}

// ----------------------------------------------------------------------------
// serialization

fn write_algebra_body(s: &mut String, doc: &AlgebraDoc) {
    writeln!(s, "vertices {}", doc.vertices).unwrap();
    for a in &doc.arrows {
        writeln!(s, "arrow {} {} {}", a.name, a.source, a.target).unwrap();
    }
    for r in &doc.relations {
        writeln!(s, "relation {}", r.join(" ")).unwrap();
    }
}

fn write_matrix(s: &mut String, head: fmt::Arguments<'_>, m: &MatrixBlock) {
    writeln!(s, "{head} {} {}", m.rows, m.cols).unwrap();
    if m.cols == 0 {
        return;
    }
    for row in m.entries.chunks(m.cols) {
        let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
}

fn write_module_body(s: &mut String, body: &ModuleBody) {
    let dims: Vec<String> = body.dims.iter().map(|d| d.to_string()).collect();
    if dims.is_empty() {
        writeln!(s, "dims").unwrap();
    } else {
        writeln!(s, "dims {}", dims.join(" ")).unwrap();
    }
    for (name, m) in &body.matrices {
        write_matrix(s, format_args!("matrix {name}"), m);
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        match self {
            Document::Algebra(doc) => {
                writeln!(s, "{ALGEBRA_HEADER} {VERSION}")?;
                if let Some(p) = doc.prime {
                    writeln!(s, "prime {p}")?;
                }
                write_algebra_body(&mut s, doc);
            }
            Document::Module(doc) => {
                writeln!(s, "{MODULE_HEADER} {VERSION}")?;
                writeln!(s, "algebra {}", doc.algebra)?;
                write_module_body(&mut s, &doc.body);
            }
            Document::Layered(doc) => {
                writeln!(s, "{LAYERED_HEADER} {VERSION}")?;
                writeln!(s, "base {}", doc.base)?;
                match &doc.factor {
                    FactorDoc::Path(p) => writeln!(s, "factor {p}")?,
                    FactorDoc::Inline(a) => {
                        writeln!(s, "factor")?;
                        write_algebra_body(&mut s, a);
                        writeln!(s, "end")?;
                    }
                }
                for (v, body) in &doc.branches {
                    writeln!(s, "branch {v}")?;
                    write_module_body(&mut s, body);
                    writeln!(s, "end")?;
                }
                for m in &doc.maps {
                    writeln!(s, "map {}", m.arrow)?;
                    for (v, b) in &m.blocks {
                        write_matrix(&mut s, format_args!("block {v}"), b);
                    }
                    writeln!(s, "end")?;
                }
            }
        }
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q3: &str = "smonkit-algebra 1\nprime 3\nvertices 3\narrow a 3 2\narrow b 2 1\nrelation b a\n";

    #[test]
    fn algebra_round_trip() {
        let doc = parse_document(Q3).unwrap();
        assert_eq!(doc.to_string(), Q3);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# q3\nsmonkit-algebra 1   # header\n\nprime 3\nvertices 3\narrow a 3 2\narrow  b 2 1\nrelation b a\n";
        assert_eq!(parse_document(text).unwrap().to_string(), Q3);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_document("smonkit-algebra 1\nvertices 2\narrow a 1 5\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 11));
        let e = parse_document("smonkit-module 1\nalgebra q.alg\ndims 1 1\nmatrix a 1 1\n1 2\n").unwrap_err();
        assert_eq!((e.line, e.col), (5, 3));
        let e = parse_document("smonkit-module 1\nalgebra q.alg\ndims 1 x\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 8));
    }

    #[test]
    fn layered_round_trip() {
        let text = "smonkit-layered 1\nbase a.alg\nfactor\nvertices 2\narrow a1 2 1\nend\nbranch 1\ndims 1\nmatrix x 1 1\n0\nend\nbranch 2\ndims 1\nmatrix x 1 1\n0\nend\nmap a1\nblock 1 1 1\n1\nend\n";
        assert_eq!(parse_document(text).unwrap().to_string(), text);
    }

    #[test]
    fn empty_matrices_have_no_rows() {
        let text = "smonkit-module 1\nalgebra a.alg\ndims 2 0\nmatrix a 0 2\nmatrix b 2 0\n";
        assert_eq!(parse_document(text).unwrap().to_string(), text);
    }
}

//! Plain-text formats for point sets, metric tables and box graphs.
//!
//! Point sets: a header line `d n`, then `n` lines of `d` coordinates.
//! Metric tables: a header line `n`, then `n` rows of `n` distances.
//! Box graphs: `k <k> cell_side <s>`, then one `cell <i> <ix> <iy>` line per
//! box and one `edge <i> <j>` line per matrix entry with `i ≤ j`.
//!
//! Blank lines and lines starting with `#` are ignored. Numbers are written
//! with 17 significant digits so that they read back bit-identically.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{FiniteMetric, PointSet};
use crate::graph::BoxGraph;
use crate::pipeline::{AntipodalityMatrix, BoxPartition};

/// One whitespace-separated token and its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn end_column(&self) -> usize {
        self.tokens
            .last()
            .map(|t| t.column + t.text.chars().count())
            .unwrap_or(1)
    }

    fn expect_len(&self, n: usize) -> Result<()> {
        match self.tokens.len() {
            m if m < n => {
                Err(self.err(self.end_column(), format!("expected {n} fields, found {m}")))
            }
            m if m > n => Err(self.err(
                self.tokens[n].column,
                format!("expected {n} fields, found {m}"),
            )),
            _ => Ok(()),
        }
    }

    fn parse<T: FromStr>(&self, i: usize, what: &str) -> Result<T> {
        let t = &self.tokens[i];
        t.text
            .parse()
            .map_err(|_| self.err(t.column, format!("invalid {what} '{}'", t.text)))
    }

    fn keyword(&self, i: usize, kw: &str) -> Result<()> {
        let t = &self.tokens[i];
        if t.text == kw {
            Ok(())
        } else {
            Err(self.err(t.column, format!("expected '{kw}', found '{}'", t.text)))
        }
    }
}

fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (b, ch)) in (1..).zip(raw.char_indices()) {
        if ch.is_whitespace() {
            if let Some((sb, sc)) = start.take() {
                tokens.push(Token {
                    text: &raw[sb..b],
                    column: sc,
                });
            }
        } else if start.is_none() {
            start = Some((b, col));
        }
    }
    if let Some((sb, sc)) = start {
        tokens.push(Token {
            text: &raw[sb..],
            column: sc,
        });
    }
    Line { number, tokens }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| tokenize(i + 1, l))
}

fn finite(line: &Line, i: usize) -> Result<f64> {
    let v: f64 = line.parse(i, "number")?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(line.err(line.tokens[i].column, "coordinate is not finite"))
    }
}

fn eof(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: 1,
        message: message.into(),
    }
}

pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| eof(1, "missing header 'd n'"))?;
    header.expect_len(2)?;
    let d: usize = header.parse(0, "dimension")?;
    let n: usize = header.parse(1, "point count")?;
    if d == 0 {
        return Err(header.err(header.tokens[0].column, "dimension must be at least 1"));
    }
    if n == 0 {
        return Err(header.err(header.tokens[1].column, "point count must be at least 1"));
    }
    let mut coords = Vec::with_capacity(d * n);
    let mut last = header.number;
    for _ in 0..n {
        let Some(line) = lines.next() else {
            return Err(eof(
                last + 1,
                format!("expected {n} points, found {}", coords.len() / d),
            ));
        };
        line.expect_len(d)?;
        for i in 0..d {
            coords.push(finite(&line, i)?);
        }
        last = line.number;
    }
    if let Some(extra) = lines.next() {
        return Err(extra.err(1, format!("unexpected data after {n} points")));
    }
    PointSet::new(d, coords)
}

pub fn write_point_set(w: &mut (impl Write + ?Sized), ps: &PointSet) -> std::io::Result<()> {
    writeln!(w, "{} {}", ps.dim(), ps.len())?;
    for p in ps.points() {
        let row: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn parse_metric(text: &str) -> Result<FiniteMetric> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| eof(1, "missing header 'n'"))?;
    header.expect_len(1)?;
    let n: usize = header.parse(0, "point count")?;
    let mut table = Vec::with_capacity(n * n);
    let mut last = header.number;
    for r in 0..n {
        let Some(line) = lines.next() else {
            return Err(eof(last + 1, format!("expected {n} rows, found {r}")));
        };
        line.expect_len(n)?;
        for i in 0..n {
            table.push(finite(&line, i)?);
        }
        last = line.number;
    }
    if let Some(extra) = lines.next() {
        return Err(extra.err(1, format!("unexpected data after {n} rows")));
    }
    FiniteMetric::from_table(n, table)
}

pub fn write_metric(w: &mut (impl Write + ?Sized), m: &FiniteMetric) -> std::io::Result<()> {
    let n = m.len();
    writeln!(w, "{n}")?;
    for row in m.table().chunks(n.max(1)) {
        let row: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn write_box_graph(
    w: &mut (impl Write + ?Sized),
    bp: &BoxPartition,
    m: &AntipodalityMatrix,
) -> std::io::Result<()> {
    writeln!(w, "k {} cell_side {:.16e}", bp.k(), bp.cell_side())?;
    for (i, [x, y]) in bp.keys().iter().enumerate() {
        writeln!(w, "cell {i} {x} {y}")?;
    }
    for (i, j) in m.edges() {
        writeln!(w, "edge {i} {j}")?;
    }
    Ok(())
}

pub fn parse_box_graph(text: &str) -> Result<BoxGraph> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| eof(1, "missing header 'k <k> cell_side <s>'"))?;
    header.expect_len(4)?;
    header.keyword(0, "k")?;
    header.keyword(2, "cell_side")?;
    let k: usize = header.parse(1, "box count")?;
    let side = finite(&header, 3)?;
    let mut keys = Vec::with_capacity(k);
    let mut last = header.number;
    for i in 0..k {
        let Some(line) = lines.next() else {
            return Err(eof(last + 1, format!("expected {k} cells, found {i}")));
        };
        line.expect_len(4)?;
        line.keyword(0, "cell")?;
        let idx: usize = line.parse(1, "cell index")?;
        if idx != i {
            return Err(line.err(
                line.tokens[1].column,
                format!("expected cell {i}, found {idx}"),
            ));
        }
        keys.push([
            line.parse(2, "cell coordinate")?,
            line.parse(3, "cell coordinate")?,
        ]);
        last = line.number;
    }
    let mut edges = Vec::new();
    for line in lines {
        line.expect_len(3)?;
        line.keyword(0, "edge")?;
        let i: usize = line.parse(1, "cell index")?;
        let j: usize = line.parse(2, "cell index")?;
        for (v, t) in [(i, 1), (j, 2)] {
            if v >= k {
                return Err(line.err(line.tokens[t].column, format!("cell index {v} ≥ k = {k}")));
            }
        }
        edges.push((i, j));
    }
    BoxGraph::new(side, keys, edges)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    std::io::Read::read_to_string(&mut BufReader::new(File::open(path)?), &mut s)?;
    Ok(s)
}

pub fn load_point_set(path: &Path) -> Result<PointSet> {
    parse_point_set(&read_to_string(path)?)
}

pub fn save_point_set(path: &Path, ps: &PointSet) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_point_set(&mut w, ps)?;
    w.flush()?;
    Ok(())
}

/// Reads a point set from any buffered reader.
pub fn read_point_set(r: impl BufRead) -> Result<PointSet> {
    let mut s = String::new();
    let mut r = r;
    r.read_to_string(&mut s)?;
    parse_point_set(&s)
}

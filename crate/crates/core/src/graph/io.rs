//! Text formats: graphs as `n m` followed by `u v` lines, embeddings as CSV
//! with one row of coordinates per vertex.

use std::fmt::Write as _;
use std::path::Path;

use super::{Embedding, Graph};
use crate::{Error, Result};

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.num_edges());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let (n, m) = parse_pair(header)?;
    let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header declares {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::new(n, edges)
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(Error::Parse(format!("expected two integers, got {line:?}"))),
    }
}

/// Coordinates are written with 17 significant digits, which round-trips f64.
pub fn format_embedding(f: &Embedding) -> String {
    let mut out = String::new();
    for v in 0..f.n() {
        let row: Vec<String> = f.point(v).iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_embedding(text: &str) -> Result<Embedding> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Embedding::from_rows(&rows)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    Ok(std::fs::write(path, format_graph(g))?)
}

pub fn read_embedding(path: impl AsRef<Path>) -> Result<Embedding> {
    parse_embedding(&std::fs::read_to_string(path)?)
}

pub fn write_embedding(path: impl AsRef<Path>, f: &Embedding) -> Result<()> {
    Ok(std::fs::write(path, format_embedding(f))?)
}

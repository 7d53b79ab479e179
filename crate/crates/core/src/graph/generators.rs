use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Embedding, Graph};
use crate::{Error, Result};

const MAX_FAMILY_VERTICES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Path,
    Cycle,
    Complete,
    /// `size` is the cube dimension, giving `2^size` vertices.
    Hypercube,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            "hypercube" => Ok(Family::Hypercube),
            other => Err(Error::InvalidParameter(format!("unknown graph family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Hypercube => "hypercube",
        };
        f.write_str(name)
    }
}

pub fn gen_family(kind: Family, size: usize) -> Result<Graph> {
    let n = match kind {
        Family::Hypercube => {
            if size > 12 {
                return Err(Error::SizeLimit(format!(
                    "hypercube dimension {size} exceeds {MAX_FAMILY_VERTICES} vertices"
                )));
            }
            1usize << size
        }
        _ => size,
    };
    if n > MAX_FAMILY_VERTICES {
        return Err(Error::SizeLimit(format!(
            "{kind} with {n} vertices exceeds {MAX_FAMILY_VERTICES}"
        )));
    }
    let edges: Vec<(usize, usize)> = match kind {
        Family::Path => (1..n).map(|v| (v - 1, v)).collect(),
        Family::Cycle => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!(
                    "cycle needs at least 3 vertices, got {n}"
                )));
            }
            (0..n).map(|v| (v, (v + 1) % n)).collect()
        }
        Family::Complete => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
        Family::Hypercube => (0..n)
            .flat_map(|u| (0..size).map(move |b| (u, u ^ (1 << b))))
            .filter(|&(u, v)| u < v)
            .collect(),
    };
    Graph::new(n, edges)
}

/// `k` disjoint stars with `delta` leaves each; vertex `v` is embedded at `e_v`.
pub fn gen_star_union(delta: usize, k: usize) -> Result<(Graph, Embedding)> {
    if delta == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "star union needs delta >= 1 and k >= 1, got ({delta}, {k})"
        )));
    }
    let block = delta + 1;
    let n = k * block;
    let edges = (0..k).flat_map(|s| {
        let centre = s * block;
        (1..block).map(move |i| (centre, centre + i))
    });
    Ok((Graph::new(n, edges)?, Embedding::standard_basis(n)))
}

use crate::graph::WeightedGraph;
use crate::{Error, Result};

pub const ORACLE_MAX_EDGES: usize = 13;

/// Fractional matching number by enumerating `h ∈ {0, ½, 1}^E`.
///
/// Extreme points of the fractional matching polytope are half-integral, so
/// the maximum over this grid is the LP optimum.
pub fn fractional_matching_oracle(w: &WeightedGraph) -> Result<f64> {
    let g = w.graph();
    if g.num_edges() > ORACLE_MAX_EDGES {
        return Err(Error::SizeLimit(format!(
            "oracle enumerates at most {ORACLE_MAX_EDGES} edges, got {}",
            g.num_edges()
        )));
    }
    // Loads are counted in half units; capacity is 2.
    let mut load = vec![0u8; g.n()];
    let mut best = 0.0f64;
    enumerate(w, 0, &mut load, 0.0, &mut best);
    Ok(best)
}

fn enumerate(w: &WeightedGraph, e: usize, load: &mut [u8], value: f64, best: &mut f64) {
    if e == w.graph().num_edges() {
        *best = best.max(value);
        return;
    }
    let (u, v) = w.graph().edges()[e];
    for halves in 0..=2u8 {
        if load[u] + halves > 2 || load[v] + halves > 2 {
            break;
        }
        load[u] += halves;
        load[v] += halves;
        enumerate(w, e + 1, load, value + f64::from(halves) * 0.5 * w.weights()[e], best);
        load[u] -= halves;
        load[v] -= halves;
    }
}

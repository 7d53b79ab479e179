//! Exact vertex conductance by subset enumeration, and the report comparing a
//! chain's spectral gap against the conductance lower-bound expressions.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::spectral::{spectral_summary, MarkovMatrix};
use crate::{Error, Result};

pub const MAX_VERTICES: usize = 24;
/// Diagnostic constant for the `γ ≤ c·Ψ*` sanity check.
pub const UPPER_DIAGNOSTIC_CONSTANT: f64 = 4.0;

/// Minimising set and its outer vertex boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductanceCertificate {
    pub psi_star: Ratio<u64>,
    /// Sorted vertex list.
    pub witness: Vec<usize>,
    pub boundary_size: u64,
}

impl ConductanceCertificate {
    pub fn value(&self) -> f64 {
        *self.psi_star.numer() as f64 / *self.psi_star.denom() as f64
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    psi_star: f64,
    psi_star_numer: u64,
    psi_star_denom: u64,
    witness: Vec<usize>,
    boundary_size: u64,
}

impl Serialize for ConductanceCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateJson {
            psi_star: self.value(),
            psi_star_numer: *self.psi_star.numer(),
            psi_star_denom: *self.psi_star.denom(),
            witness: self.witness.clone(),
            boundary_size: self.boundary_size,
        }
        .serialize(s)
    }
}

/// Outer vertex boundary `{v ∉ S : v ~ u for some u ∈ S}`.
pub fn outer_boundary(g: &Graph, set: &[usize]) -> Vec<usize> {
    let mut in_set = vec![false; g.n()];
    for &u in set {
        in_set[u] = true;
    }
    let mut hit = vec![false; g.n()];
    for &(u, v) in g.edges() {
        if in_set[u] && !in_set[v] {
            hit[v] = true;
        }
        if in_set[v] && !in_set[u] {
            hit[u] = true;
        }
    }
    (0..g.n()).filter(|&v| hit[v]).collect()
}

#[derive(Clone, Copy)]
struct Candidate {
    boundary: u64,
    size: u64,
    mask: u32,
}

fn sorted_members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask >> b & 1 == 1)
}

impl Candidate {
    /// Ratio first, then lexicographic order of the sorted vertex lists.
    fn better_than(&self, other: &Candidate) -> bool {
        let lhs = self.boundary * other.size;
        let rhs = other.boundary * self.size;
        if lhs != rhs {
            return lhs < rhs;
        }
        sorted_members(self.mask).lt(sorted_members(other.mask))
    }
}

/// Ψ* = min over nonempty `S`, `|S| ≤ ⌊n/2⌋`, of `|∂S| / |S|`.
pub fn vertex_conductance_exact(g: &Graph) -> Result<ConductanceCertificate> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParameter("conductance of the empty graph".into()));
    }
    if n > MAX_VERTICES {
        return Err(Error::SizeLimit(format!(
            "exact conductance enumerates 2^n subsets; n = {n} exceeds {MAX_VERTICES}"
        )));
    }
    if n == 1 {
        return Err(Error::InvalidParameter(
            "conductance needs at least two vertices".into(),
        ));
    }
    let mut nbr = vec![0u32; n];
    for &(u, v) in g.edges() {
        nbr[u] |= 1 << v;
        nbr[v] |= 1 << u;
    }
    let half = (n / 2) as u32;
    let total: u32 = 1 << n;
    let chunk = 1u32 << 12;
    let best = (0..total.div_ceil(chunk))
        .into_par_iter()
        .filter_map(|c| {
            let mut local: Option<Candidate> = None;
            let start = (c * chunk).max(1);
            let end = ((c + 1) as u64 * chunk as u64).min(total as u64) as u32;
            for mask in start..end {
                let size = mask.count_ones();
                if size > half {
                    continue;
                }
                let mut reach = 0u32;
                let mut rest = mask;
                while rest != 0 {
                    let b = rest.trailing_zeros();
                    reach |= nbr[b as usize];
                    rest &= rest - 1;
                }
                let cand = Candidate {
                    boundary: (reach & !mask).count_ones() as u64,
                    size: size as u64,
                    mask,
                };
                if local.is_none_or(|l| cand.better_than(&l)) {
                    local = Some(cand);
                }
            }
            local
        })
        .reduce_with(|a, b| if b.better_than(&a) { b } else { a })
        .expect("n >= 2 has a nonempty admissible subset");
    Ok(ConductanceCertificate {
        psi_star: Ratio::new(best.boundary, best.size),
        witness: sorted_members(best.mask).collect(),
        boundary_size: best.boundary,
    })
}

/// `max(ln x, 1)`, keeping denominators away from zero for small Δ or n.
pub fn log_floor(x: f64) -> f64 {
    x.ln().max(1.0)
}

/// Spectral gap of a chain against the three conductance lower-bound shapes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundChainReport {
    pub psi_star: f64,
    pub gap_lower: f64,
    pub delta: usize,
    pub n: usize,
    /// Ψ*² / Δ².
    pub cheeger_lhs: f64,
    /// Ψ*² / max(ln n, 1).
    pub tz_lhs: f64,
    /// Ψ*² / max(ln Δ, 1).
    pub thm_lhs: f64,
    /// γ / LHS for each expression; `None` when the LHS is zero.
    pub ratio_cheeger: Option<f64>,
    pub ratio_tz: Option<f64>,
    pub ratio_thm: Option<f64>,
    /// Measured constant `c` with `γ = Ψ*² / (c · max(ln Δ, 1))`.
    pub c_meas: Option<f64>,
    /// γ / Ψ*.
    pub upper_ratio: Option<f64>,
    /// `γ > 4 Ψ*` observed (a finding, not an error).
    pub upper_anomaly: bool,
}

/// Builds the report from Ψ* and a chain on the same graph.
pub fn bound_chain_report_with(g: &Graph, psi_star: f64, p: &MarkovMatrix) -> Result<BoundChainReport> {
    if p.graph().n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            actual: p.graph().n(),
        });
    }
    let gap = spectral_summary(p)?.gap;
    let delta = g.max_degree();
    let n = g.n();
    let psi2 = psi_star * psi_star;
    let cheeger_lhs = if delta == 0 { 0.0 } else { psi2 / (delta * delta) as f64 };
    let tz_lhs = psi2 / log_floor(n as f64);
    let thm_lhs = psi2 / log_floor(delta as f64);
    let ratio = |lhs: f64| (lhs > 0.0).then(|| gap / lhs);
    Ok(BoundChainReport {
        psi_star,
        gap_lower: gap,
        delta,
        n,
        cheeger_lhs,
        tz_lhs,
        thm_lhs,
        ratio_cheeger: ratio(cheeger_lhs),
        ratio_tz: ratio(tz_lhs),
        ratio_thm: ratio(thm_lhs),
        c_meas: (gap > 0.0).then(|| thm_lhs / gap),
        upper_ratio: (psi_star > 0.0).then(|| gap / psi_star),
        upper_anomaly: gap > UPPER_DIAGNOSTIC_CONSTANT * psi_star,
    })
}

pub fn bound_chain_report(g: &Graph, p: &MarkovMatrix) -> Result<BoundChainReport> {
    let cert = vertex_conductance_exact(g)?;
    bound_chain_report_with(g, cert.value(), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_family, Family};
    use nalgebra::DMatrix;

    #[test]
    fn known_values() {
        let two_edges = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let c = vertex_conductance_exact(&two_edges).unwrap();
        assert_eq!(c.psi_star, Ratio::new(0, 1));
        assert_eq!(c.witness, vec![0, 1]);

        let c6 = vertex_conductance_exact(&gen_family(Family::Cycle, 6).unwrap()).unwrap();
        assert_eq!(c6.psi_star, Ratio::new(2, 3));
        assert_eq!(c6.witness, vec![0, 1, 2]);

        let k4 = vertex_conductance_exact(&gen_family(Family::Complete, 4).unwrap()).unwrap();
        assert_eq!(k4.psi_star, Ratio::new(1, 1));
        assert_eq!(k4.witness, vec![0, 1]);
    }

    #[test]
    fn witness_recomputes() {
        let g = gen_family(Family::Hypercube, 3).unwrap();
        let c = vertex_conductance_exact(&g).unwrap();
        let boundary = outer_boundary(&g, &c.witness);
        assert_eq!(boundary.len() as u64, c.boundary_size);
        assert_eq!(Ratio::new(c.boundary_size, c.witness.len() as u64), c.psi_star);
        assert!(c.witness.len() <= g.n() / 2);
    }

    #[test]
    fn caps() {
        assert!(vertex_conductance_exact(&Graph::new(0, []).unwrap()).is_err());
        let big = gen_family(Family::Path, 25).unwrap();
        assert!(matches!(vertex_conductance_exact(&big), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn complete_graph_report() {
        let g = gen_family(Family::Complete, 5).unwrap();
        let cert = vertex_conductance_exact(&g).unwrap();
        assert_eq!(cert.psi_star, Ratio::new(3, 2));
        let p = MarkovMatrix::new(g.clone(), DMatrix::from_element(5, 5, 0.2)).unwrap();
        let r = bound_chain_report(&g, &p).unwrap();
        assert!((r.gap_lower - 1.0).abs() < 1e-12);
        assert!(!r.upper_anomaly);
        assert!((r.thm_lhs - 2.25 / 4f64.ln()).abs() < 1e-15);
        assert!((r.cheeger_lhs - 2.25 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn disconnected_report_is_degenerate() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let p = MarkovMatrix::max_degree_walk(&g);
        let r = bound_chain_report(&g, &p).unwrap();
        assert_eq!(r.psi_star, 0.0);
        assert_eq!((r.cheeger_lhs, r.tz_lhs, r.thm_lhs), (0.0, 0.0, 0.0));
        assert!(r.gap_lower.abs() < 1e-12);
        assert_eq!(r.ratio_thm, None);
    }

    #[test]
    fn certificate_json() {
        let c = vertex_conductance_exact(&gen_family(Family::Cycle, 6).unwrap()).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["psi_star_numer"], 2);
        assert_eq!(v["psi_star_denom"], 3);
        assert_eq!(v["witness"], serde_json::json!([0, 1, 2]));
    }
}

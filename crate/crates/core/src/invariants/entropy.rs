//! Degree entropy, von Neumann entropy and a compression-length proxy for
//! Kolmogorov complexity. Logarithms are natural.

use std::io::Write;

use flate2::write::DeflateEncoder;
use flate2::Compression;

use super::{GraphContext, Outcome};
use crate::graph::Graph;

fn neg_p_log_p(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

/// `−Σ_{k=1}^{n_V−1} p_k log p_k` with `p_k = |{i : deg(i) = k}| / n_V`.
///
/// Degree-0 vertices fall outside the summation range, so on graphs with
/// isolated vertices the histogram is sub-normalized.
pub fn degree_entropy(ctx: &GraphContext) -> f64 {
    let n = ctx.n();
    if n == 0 {
        return 0.0;
    }
    let mut hist = vec![0usize; n];
    for &d in ctx.degrees() {
        hist[d] += 1;
    }
    hist[1..]
        .iter()
        .map(|&c| neg_p_log_p(c as f64 / n as f64))
        .sum()
}

/// `−Σ_{i≥2} (λ_i/n_V) log(λ_i/n_V)` over the ascending normalized-Laplacian
/// spectrum, skipping the smallest eigenvalue. Round-off negatives count as 0.
pub fn von_neumann_entropy(ctx: &GraphContext) -> Outcome<f64> {
    let n = ctx.n() as f64;
    let spec = ctx.normalized_laplacian_spectrum()?.values();
    Ok(spec.iter().skip(1).map(|&l| neg_p_log_p(l / n)).sum())
}

/// Canonical byte layout of the edge set: `(min, max)` pairs sorted
/// lexicographically, each endpoint a little-endian `u32`.
pub fn edge_bytes(g: &Graph) -> Vec<u8> {
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (u.min(v), u.max(v));
            (
                u32::try_from(a).expect("vertex id exceeds u32"),
                u32::try_from(b).expect("vertex id exceeds u32"),
            )
        })
        .collect();
    edges.sort_unstable();
    let mut bytes = Vec::with_capacity(8 * edges.len());
    for (a, b) in edges {
        bytes.extend_from_slice(&a.to_le_bytes());
        bytes.extend_from_slice(&b.to_le_bytes());
    }
    bytes
}

/// Length of the raw DEFLATE stream (level 6, no container) of
/// [`edge_bytes`].
///
/// This depends on vertex labels, not only on isomorphism class: it is
/// invariant to edge input order but not to relabeling.
pub fn kolmogorov_proxy(ctx: &GraphContext) -> f64 {
    let bytes = edge_bytes(ctx.graph());
    let mut enc = DeflateEncoder::new(Vec::new(), Compression::new(6));
    enc.write_all(&bytes).expect("in-memory write");
    enc.finish().expect("in-memory write").len() as f64
}

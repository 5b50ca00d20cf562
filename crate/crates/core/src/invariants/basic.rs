//! Counts, distances, transitivity, density, the normalized-Laplacian
//! spectrum, spanning trees and the degree geometric/arithmetic mean ratio.

use super::{Failure, GraphContext, Outcome};

pub fn num_vertices(ctx: &GraphContext) -> f64 {
    ctx.n() as f64
}

pub fn num_edges(ctx: &GraphContext) -> f64 {
    ctx.graph().num_edges() as f64
}

/// `n_E − n_V + n_connect`.
pub fn circuit_rank(ctx: &GraphContext) -> f64 {
    (ctx.graph().num_edges() + ctx.num_components()) as f64 - ctx.n() as f64
}

/// Eccentricity over finite distances only, so every vertex of a
/// disconnected graph gets the eccentricity within its own component.
fn finite_eccentricities(ctx: &GraphContext) -> Vec<u32> {
    let d = ctx.distances();
    (0..ctx.n())
        .map(|i| d.row(i).flatten().max().unwrap_or(0))
        .collect()
}

pub fn diameter(ctx: &GraphContext) -> f64 {
    f64::from(finite_eccentricities(ctx).into_iter().max().unwrap_or(0))
}

pub fn radius(ctx: &GraphContext) -> f64 {
    f64::from(finite_eccentricities(ctx).into_iter().min().unwrap_or(0))
}

/// Number of triangles, counted once each.
pub fn triangle_count(ctx: &GraphContext) -> u64 {
    let g = ctx.graph();
    let mut count = 0u64;
    for &(u, v) in g.edges() {
        // u < v; count common neighbours w > v so each triangle is seen once.
        let (a, b) = (g.neighbours(u), g.neighbours(v));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a[i] > v {
                        count += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    count
}

/// `3 · triangles / Σ_i C(deg(i), 2)`; zero when there are no connected triples.
pub fn transitivity(ctx: &GraphContext) -> f64 {
    let triplets: u64 = ctx
        .degrees()
        .iter()
        .map(|&d| (d as u64) * (d as u64).saturating_sub(1) / 2)
        .sum();
    if triplets == 0 {
        return 0.0;
    }
    3.0 * triangle_count(ctx) as f64 / triplets as f64
}

pub fn density(ctx: &GraphContext) -> f64 {
    let n = ctx.n() as f64;
    if ctx.n() < 2 {
        return 0.0;
    }
    2.0 * ctx.graph().num_edges() as f64 / (n * (n - 1.0))
}

/// `k` smallest followed by `k` largest normalized-Laplacian eigenvalues.
/// The low block is zero-padded at its end, the high block at its start.
pub fn laplacian_spectrum_block(ctx: &GraphContext, k: usize) -> Outcome<Vec<f64>> {
    let spec = ctx.normalized_laplacian_spectrum()?.values();
    let take = k.min(spec.len());
    let mut out = Vec::with_capacity(2 * k);
    out.extend_from_slice(&spec[..take]);
    out.resize(k, 0.0);
    out.resize(2 * k - take, 0.0);
    out.extend_from_slice(&spec[spec.len() - take..]);
    Ok(out)
}

/// Second-smallest normalized-Laplacian eigenvalue; zero below two vertices.
pub fn algebraic_connectivity(ctx: &GraphContext) -> Outcome<f64> {
    Ok(ctx
        .normalized_laplacian_spectrum()?
        .values()
        .get(1)
        .copied()
        .unwrap_or(0.0))
}

/// Natural log of the spanning-tree count of a connected graph, from the
/// matrix-tree theorem: `Σ log λ − log n_V` over nonzero Laplacian eigenvalues.
fn log_tree_count_connected(ctx: &GraphContext) -> Outcome<f64> {
    let spec = ctx.laplacian_spectrum()?;
    let tol = spec.default_rank_tol();
    let log_prod: f64 = spec
        .values()
        .iter()
        .filter(|l| l.abs() > tol)
        .map(|l| l.abs().ln())
        .sum();
    Ok(log_prod - (ctx.n() as f64).ln())
}

/// Number of spanning trees; zero for disconnected (or vertex-less) graphs.
pub fn spanning_tree_count(ctx: &GraphContext) -> Outcome<f64> {
    if ctx.n() == 0 || ctx.num_components() != 1 {
        return Ok(0.0);
    }
    Ok(log_tree_count_connected(ctx)?.exp())
}

/// Log of the spanning-tree count. A disconnected graph has no spanning
/// tree; it fails with sentinel −1.
pub fn log_spanning_tree_count(ctx: &GraphContext) -> Outcome<f64> {
    if ctx.n() == 0 || ctx.num_components() != 1 {
        return Err(Failure::with_sentinel("disconnected graph has no spanning tree", -1.0));
    }
    log_tree_count_connected(ctx)
}

/// Geometric over arithmetic mean of the degrees, evaluated in log space.
pub fn degree_mean_ratio(ctx: &GraphContext) -> Outcome<f64> {
    let degs = ctx.degrees();
    let n = degs.len() as f64;
    let total: usize = degs.iter().sum();
    if total == 0 {
        return Err(Failure::new("division by zero: arithmetic mean degree is 0"));
    }
    if degs.contains(&0) {
        return Ok(0.0);
    }
    let mean_log = degs.iter().map(|&d| (d as f64).ln()).sum::<f64>() / n;
    Ok(mean_log.exp() / (total as f64 / n))
}

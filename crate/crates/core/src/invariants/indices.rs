//! Distance- and degree-based topological indices from chemical graph
//! theory. Distance sums run over reachable pairs only.

use super::{GraphContext, Outcome};

fn degree_pairs<'a>(ctx: &'a GraphContext) -> impl Iterator<Item = (f64, f64)> + 'a {
    let deg = ctx.degrees();
    ctx.graph()
        .edges()
        .iter()
        .map(move |&(u, v)| (deg[u] as f64, deg[v] as f64))
}

/// `½ Σ_i Σ_j w(i, j, d(i,j))` over ordered reachable pairs `i ≠ j`.
fn half_distance_sum(ctx: &GraphContext, w: impl Fn(usize, usize, f64) -> f64) -> f64 {
    let d = ctx.distances();
    let n = ctx.n();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(dij) = d.get(i, j) {
                total += w(i, j, f64::from(dij));
            }
        }
    }
    total / 2.0
}

pub fn wiener(ctx: &GraphContext) -> f64 {
    half_distance_sum(ctx, |_, _, d| d)
}

pub fn randic(ctx: &GraphContext) -> f64 {
    general_randic(ctx, -0.5)
}

/// `Σ_{{i,j}∈E} (deg(i)·deg(j))^c`.
pub fn general_randic(ctx: &GraphContext, c: f64) -> f64 {
    let term = |x: f64| match c {
        -0.5 => 1.0 / x.sqrt(),
        1.0 => x,
        _ => x.powf(c),
    };
    degree_pairs(ctx).map(|(a, b)| term(a * b)).sum()
}

pub fn atom_bond_connectivity(ctx: &GraphContext) -> f64 {
    degree_pairs(ctx)
        .map(|(a, b)| ((a + b - 2.0) / (a * b)).sqrt())
        .sum()
}

pub fn geometric_arithmetic(ctx: &GraphContext) -> f64 {
    degree_pairs(ctx)
        .map(|(a, b)| 2.0 * (a * b).sqrt() / (a + b))
        .sum()
}

pub fn hyper_wiener(ctx: &GraphContext) -> f64 {
    half_distance_sum(ctx, |_, _, d| d + d * d)
}

/// `Σ exp(λ)` over the adjacency spectrum.
pub fn estrada(ctx: &GraphContext) -> Outcome<f64> {
    Ok(ctx.adjacency_spectrum()?.values().iter().map(|l| l.exp()).sum())
}

pub fn zagreb_first(ctx: &GraphContext) -> f64 {
    ctx.degrees().iter().map(|&d| (d * d) as f64).sum()
}

pub fn zagreb_second(ctx: &GraphContext) -> f64 {
    general_randic(ctx, 1.0)
}

pub fn schultz(ctx: &GraphContext) -> f64 {
    let deg = ctx.degrees();
    half_distance_sum(ctx, |i, j, d| d * (deg[i] + deg[j]) as f64)
}

pub fn gutman(ctx: &GraphContext) -> f64 {
    let deg = ctx.degrees();
    half_distance_sum(ctx, |i, j, d| d * (deg[i] * deg[j]) as f64)
}

/// `Σ_{{i,j}∈E} n_i · n_j` where `n_i` counts vertices strictly closer to
/// `i` than to `j`. Vertices unreachable from the edge count for neither.
pub fn szeged(ctx: &GraphContext) -> f64 {
    let d = ctx.distances();
    let mut total = 0.0;
    for &(u, v) in ctx.graph().edges() {
        let (mut nu, mut nv) = (0u64, 0u64);
        for k in 0..ctx.n() {
            match (d.get(u, k), d.get(v, k)) {
                (Some(a), Some(b)) if a < b => nu += 1,
                (Some(a), Some(b)) if b < a => nv += 1,
                _ => {}
            }
        }
        total += (nu * nv) as f64;
    }
    total
}

pub fn forgotten(ctx: &GraphContext) -> f64 {
    ctx.degrees().iter().map(|&d| (d * d * d) as f64).sum()
}

/// `n_E / (r + 1) · Σ_{{i,j}∈E} (s_i s_j)^{−1/2}` with `s_i` the sum of
/// finite distances from `i` and `r` the circuit rank. Zero without edges.
pub fn balaban(ctx: &GraphContext) -> f64 {
    let g = ctx.graph();
    let m = g.num_edges();
    if m == 0 {
        return 0.0;
    }
    let d = ctx.distances();
    let sums: Vec<f64> = (0..ctx.n())
        .map(|i| d.row(i).flatten().map(f64::from).sum())
        .collect();
    let rank = (m + ctx.num_components()) as f64 - ctx.n() as f64;
    let s: f64 = g
        .edges()
        .iter()
        .map(|&(u, v)| 1.0 / (sums[u] * sums[v]).sqrt())
        .sum();
    m as f64 / (rank + 1.0) * s
}

//! Deterministic graph families and seeded random generators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;

fn build(n: usize, edges: Vec<(usize, usize)>) -> Graph {
    Graph::new(n, edges).expect("generator produced an invalid edge")
}

/// Path `0 - 1 - … - (n-1)`.
pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)).collect())
}

/// Cycle on `n ≥ 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    build(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect())
}

/// Star with centre 0 and `leaves` leaves (`leaves + 1` vertices).
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
}

/// `k × k` rook's graph: cells adjacent when they share a row or column.
pub fn rook(k: usize) -> Graph {
    let id = |r: usize, c: usize| r * k + c;
    let mut edges = Vec::new();
    for r in 0..k {
        for c in 0..k {
            for c2 in c + 1..k {
                edges.push((id(r, c), id(r, c2)));
            }
            for r2 in r + 1..k {
                edges.push((id(r, c), id(r2, c)));
            }
        }
    }
    build(k * k, edges)
}

/// Shrikhande graph: Cayley graph of Z4 × Z4 with connection set
/// ±(1,0), ±(0,1), ±(1,1). Strongly regular (16, 6, 2, 2), like the 4×4
/// rook's graph, but without a 4-clique.
pub fn shrikhande() -> Graph {
    let id = |a: usize, b: usize| (a % 4) * 4 + (b % 4);
    let mut edges = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for (da, db) in [(1, 0), (0, 1), (1, 1)] {
                edges.push((id(a, b), id(a + da, b + db)));
            }
        }
    }
    build(16, edges)
}

/// G(n, p): every pair independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    build(n, edges)
}

/// G(n, m): `m` distinct edges chosen uniformly.
pub fn erdos_renyi_m(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    assert!(m <= pairs.len(), "too many edges requested");
    pairs.shuffle(rng);
    pairs.truncate(m);
    build(n, pairs)
}

/// Preferential attachment: start from a clique on `m + 1` vertices, then
/// each new vertex attaches to `m` distinct existing vertices with
/// probability proportional to degree.
pub fn barabasi_albert(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    assert!(m >= 1 && n > m, "need n > m >= 1");
    let mut edges: Vec<(usize, usize)> = (0..=m)
        .flat_map(|i| (i + 1..=m).map(move |j| (i, j)))
        .collect();
    // Each vertex appears once per incident edge, so uniform draws are degree-weighted.
    let mut urn: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    for v in m + 1..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = urn[rng.gen_range(0..urn.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            edges.push((t, v));
            urn.push(t);
            urn.push(v);
        }
    }
    build(n, edges)
}

/// Uniform random permutation of `0..n`.
pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

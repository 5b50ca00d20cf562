//! Geometric and topological invariants: magnitude, analytic torsion,
//! homomorphism counts, Forman and Ollivier–Ricci curvature, commute times
//! and neighbourhood power traces.

use nalgebra::DMatrix;

use super::{Failure, GraphContext, Outcome};
use crate::linalg::{self, SymMatrix};
use crate::transport;

pub mod homomorphism;
pub mod simplicial;

pub use homomorphism::{homomorphism_counts, Pattern, PatternCatalog};
pub use simplicial::{analytic_torsion, SimplicialSkeleton};

/// Per-edge values with their population moments.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDistribution {
    pub values: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

impl EdgeDistribution {
    /// Population variance, standardized skewness and (non-excess)
    /// kurtosis. A distribution whose spread is indistinguishable from
    /// round-off gets variance, skewness and kurtosis 0.
    pub fn from_values(values: Vec<f64>) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let central = |k: i32| values.iter().map(|v| (v - mean).powi(k)).sum::<f64>() / n;
        let variance = central(2);
        let scale = mean.abs().max(1.0);
        let (variance, skewness, kurtosis) = if variance <= (1e-12 * scale).powi(2) {
            (0.0, 0.0, 0.0)
        } else {
            (
                variance,
                central(3) / variance.powf(1.5),
                central(4) / (variance * variance),
            )
        };
        Self {
            values,
            mean,
            variance,
            skewness,
            kurtosis,
        }
    }

    pub fn moments(&self) -> [f64; 4] {
        [self.mean, self.variance, self.skewness, self.kurtosis]
    }
}

/// Sum of the entries of `Z(q)^{-1}` with `Z_ij = q^{d(i,j)}`, obtained from a
/// single solve `Z x = 1`. Pairs in different components contribute
/// `q^∞ = 0`.
pub fn magnitude(ctx: &GraphContext, q: f64) -> Outcome<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Failure::new(format!("magnitude scale q = {q} outside (0, 1)")));
    }
    let n = ctx.n();
    if n == 0 {
        return Ok(0.0);
    }
    let d = ctx.distances();
    let z = DMatrix::from_fn(n, n, |i, j| d.get(i, j).map_or(0.0, |k| q.powi(k as i32)));
    let x = linalg::solve_linear(&SymMatrix::new(z), &vec![1.0; n])
        .map_err(|_| Failure::new("singular magnitude matrix"))?;
    Ok(x.iter().sum())
}

/// Forman–Ricci curvature `4 − (deg(i) + deg(j))` of every edge.
pub fn forman_ricci(ctx: &GraphContext) -> Outcome<EdgeDistribution> {
    let g = ctx.graph();
    if g.num_edges() == 0 {
        return Err(Failure::new("no edges"));
    }
    let deg = ctx.degrees();
    let values = g
        .edges()
        .iter()
        .map(|&(u, v)| 4.0 - (deg[u] + deg[v]) as f64)
        .collect();
    Ok(EdgeDistribution::from_values(values))
}

/// Lazy random-walk measure at `v`: mass `alpha` on `v`, the rest spread
/// uniformly over its neighbours. Returns `(support, masses)`.
pub fn lazy_walk_measure(ctx: &GraphContext, v: usize, alpha: f64) -> (Vec<usize>, Vec<f64>) {
    let nbrs = ctx.graph().neighbours(v);
    let share = (1.0 - alpha) / nbrs.len() as f64;
    let mut support = Vec::with_capacity(nbrs.len() + 1);
    let mut mass = Vec::with_capacity(nbrs.len() + 1);
    support.push(v);
    mass.push(alpha);
    for &w in nbrs {
        support.push(w);
        mass.push(share);
    }
    (support, mass)
}

/// Ollivier–Ricci curvature `1 − W₁(μ_i, μ_j)` of every edge (`d(i,j) = 1`),
/// with exact W₁ under shortest-path ground cost.
pub fn ollivier_ricci(ctx: &GraphContext, alpha: f64) -> Outcome<EdgeDistribution> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Failure::new(format!("laziness alpha = {alpha} outside [0, 1)")));
    }
    let g = ctx.graph();
    if g.num_edges() == 0 {
        return Err(Failure::new("no edges"));
    }
    let dist = ctx.distances();
    let mut values = Vec::with_capacity(g.num_edges());
    for &(u, v) in g.edges() {
        let (su, mu) = lazy_walk_measure(ctx, u, alpha);
        let (sv, mv) = lazy_walk_measure(ctx, v, alpha);
        let w1 = transport::wasserstein_1(&mu, &mv, |a, b| {
            f64::from(dist.get(su[a], sv[b]).expect("edge endpoints share a component"))
        })
        .map_err(|e| Failure::new(format!("internal transport error: {e}")))?;
        values.push(1.0 - w1);
    }
    Ok(EdgeDistribution::from_values(values))
}

/// Mean and maximum of `vol(V) · (L†_ii + L†_jj − 2 L†_ij)` over all ordered
/// pairs, diagonal included. On disconnected graphs the formula is applied
/// as-is, so cross-component values are not true commute times.
pub fn commute_time(ctx: &GraphContext) -> Outcome<[f64; 2]> {
    let n = ctx.n();
    if n == 0 {
        return Ok([0.0, 0.0]);
    }
    let pinv = ctx.laplacian_pinv()?;
    let vol = 2.0 * ctx.graph().num_edges() as f64;
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let c = if i == j {
                0.0
            } else {
                vol * (pinv[(i, i)] + pinv[(j, j)] - 2.0 * pinv[(i, j)])
            };
            sum += c;
            max = max.max(c);
        }
    }
    Ok([sum / (n * n) as f64, max])
}

fn square(m: &[u128], k: usize) -> Vec<u128> {
    let mut out = vec![0u128; k * k];
    for i in 0..k {
        for l in 0..k {
            let a = m[i * k + l];
            if a == 0 {
                continue;
            }
            for j in 0..k {
                out[i * k + j] += a * m[l * k + j];
            }
        }
    }
    out
}

/// `Σ_i tr((A|_{N(i)})^p)` for `p ∈ {4, 8}`, with `N[i]` instead of `N(i)`
/// when `closed`. Exact integer arithmetic; `tr(M^{2r}) = ‖M^r‖_F²` for
/// symmetric `M`.
pub fn neighbourhood_power_trace(ctx: &GraphContext, p: u32, closed: bool) -> Outcome<f64> {
    if p != 4 && p != 8 {
        return Err(Failure::new(format!("power trace exponent {p} not in {{4, 8}}")));
    }
    let g = ctx.graph();
    let mut total: u128 = 0;
    for i in 0..g.num_vertices() {
        let mut verts: Vec<usize> = g.neighbours(i).to_vec();
        if closed {
            verts.push(i);
            verts.sort_unstable();
        }
        let k = verts.len();
        if k == 0 {
            continue;
        }
        let mut m = vec![0u128; k * k];
        for a in 0..k {
            for b in 0..k {
                if a != b && g.has_edge(verts[a], verts[b]) {
                    m[a * k + b] = 1;
                }
            }
        }
        let mut half = square(&m, k);
        if p == 8 {
            half = square(&half, k);
        }
        total += half.iter().map(|x| x * x).sum::<u128>();
    }
    Ok(total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::graph::Graph;
    use crate::transport::oracle::exhaustive_w1;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn q0() -> f64 {
        (-0.42f64).exp()
    }

    #[test]
    fn magnitude_of_complete_graphs() {
        for n in 1..=8 {
            let got = magnitude(&GraphContext::new(&complete(n)), q0()).unwrap();
            let want = n as f64 / (1.0 + (n as f64 - 1.0) * q0());
            assert!(close(got, want, 1e-12));
        }
        // Direct 2×2 inverse for K2.
        let q = q0();
        let det = 1.0 - q * q;
        let inv_sum = (2.0 - 2.0 * q) / det;
        assert!(close(magnitude(&GraphContext::new(&complete(2)), q).unwrap(), inv_sum, 1e-12));
        assert_eq!(magnitude(&GraphContext::new(&Graph::empty(1)), q).unwrap(), 1.0);
    }

    #[test]
    fn magnitude_additive_over_disjoint_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let a = erdos_renyi(rng.gen_range(1..10), 0.4, &mut rng);
            let b = erdos_renyi(rng.gen_range(1..10), 0.4, &mut rng);
            let u = a.disjoint_union(&b);
            let m = |g: &Graph| magnitude(&GraphContext::new(g), q0()).unwrap();
            assert!(close(m(&u), m(&a) + m(&b), 1e-8));
        }
    }

    #[test]
    fn forman_examples() {
        let c = forman_ricci(&GraphContext::new(&cycle(7))).unwrap();
        assert!(c.values.iter().all(|&v| v == 0.0));
        assert_eq!(c.moments(), [0.0; 4]);
        let k4 = forman_ricci(&GraphContext::new(&complete(4))).unwrap();
        assert_eq!((k4.mean, k4.variance), (-2.0, 0.0));
        let s = forman_ricci(&GraphContext::new(&star(4))).unwrap();
        assert!(s.values.iter().all(|&v| v == -1.0));
        assert!(forman_ricci(&GraphContext::new(&Graph::empty(3))).is_err());
    }

    #[test]
    fn moments_match_definitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let g = erdos_renyi(12, 0.3, &mut rng);
            let Ok(d) = forman_ricci(&GraphContext::new(&g)) else { continue };
            let n = d.values.len() as f64;
            let mean = d.values.iter().sum::<f64>() / n;
            let var = d.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            assert!(close(d.mean, mean, 1e-10) && close(d.variance, var, 1e-10));
            if var > 0.0 {
                let m3 = d.values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
                let m4 = d.values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
                assert!(close(d.skewness, m3 / var.powf(1.5), 1e-10));
                assert!(close(d.kurtosis, m4 / (var * var), 1e-10));
            }
        }
    }

    #[test]
    fn ollivier_examples() {
        let k2 = ollivier_ricci(&GraphContext::new(&complete(2)), 0.5).unwrap();
        assert!(close(k2.values[0], 1.0, 1e-12));
        for n in 6..=10 {
            let c = ollivier_ricci(&GraphContext::new(&cycle(n)), 0.5).unwrap();
            assert!(c.values.iter().all(|v| v.abs() < 1e-12), "C{n}: {:?}", c.values);
        }
        assert!(ollivier_ricci(&GraphContext::new(&Graph::empty(2)), 0.5).is_err());
    }

    #[test]
    fn ollivier_matches_exhaustive_transport_on_small_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 200 {
            let g = erdos_renyi(rng.gen_range(3..9), 0.35, &mut rng);
            let ctx = GraphContext::new(&g);
            let Ok(dist) = ollivier_ricci(&ctx, 0.5) else { continue };
            let d = ctx.distances();
            for (k, &(u, v)) in g.edges().iter().enumerate() {
                assert!(dist.values[k] <= 1.0 + 1e-12);
                if g.degree(u) + 1 > 4 || g.degree(v) + 1 > 4 {
                    continue;
                }
                let (su, mu) = lazy_walk_measure(&ctx, u, 0.5);
                let (sv, mv) = lazy_walk_measure(&ctx, v, 0.5);
                let cost = |a: usize, b: usize| f64::from(d.get(su[a], sv[b]).unwrap());
                let want = 1.0 - exhaustive_w1(&mu, &mv, &cost);
                assert!((dist.values[k] - want).abs() < 1e-10);
                checked += 1;
            }
        }
    }

    #[test]
    fn commute_time_examples() {
        let [mean, max] = commute_time(&GraphContext::new(&complete(2))).unwrap();
        assert!(close(mean, 1.0, 1e-12) && close(max, 2.0, 1e-12));
        assert_eq!(commute_time(&GraphContext::new(&Graph::empty(1))).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn tree_edges_have_commute_time_twice_edge_count() {
        let g = path(4);
        let ctx = GraphContext::new(&g);
        let pinv = ctx.laplacian_pinv().unwrap();
        let vol = 2.0 * g.num_edges() as f64;
        for &(i, j) in g.edges() {
            let c = vol * (pinv[(i, i)] + pinv[(j, j)] - 2.0 * pinv[(i, j)]);
            assert!(close(c, 6.0, 1e-10));
        }
    }

    /// Monte-Carlo round trips on P4 agree with the pseudoinverse value.
    #[test]
    fn commute_time_matches_random_walk_simulation() {
        let g = path(4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trials = 20_000;
        let mut steps = 0u64;
        for _ in 0..trials {
            let (mut pos, mut seen_target) = (1usize, false);
            loop {
                let nb = g.neighbours(pos);
                pos = nb[rng.gen_range(0..nb.len())];
                steps += 1;
                if pos == 2 {
                    seen_target = true;
                }
                if seen_target && pos == 1 {
                    break;
                }
            }
        }
        let simulated = steps as f64 / trials as f64;
        assert!((simulated - 6.0).abs() < 0.2, "{simulated}");
    }

    #[test]
    fn power_trace_examples() {
        let tri_free = cycle(6);
        for p in [4, 8] {
            assert_eq!(neighbourhood_power_trace(&GraphContext::new(&tri_free), p, false).unwrap(), 0.0);
        }
        assert_eq!(neighbourhood_power_trace(&GraphContext::new(&complete(3)), 4, false).unwrap(), 6.0);
        // Brute force: each closed neighbourhood of C4 induces P3, tr(A_P3^4) = 8.
        let p3 = path(3).adjacency();
        let brute = (&p3 * &p3 * &p3 * &p3).trace();
        assert_eq!(brute, 8.0);
        let c4 = neighbourhood_power_trace(&GraphContext::new(&cycle(4)), 4, true).unwrap();
        assert_eq!(c4, 4.0 * brute);
    }

    #[test]
    fn power_trace_matches_dense_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let g = erdos_renyi(10, 0.5, &mut rng);
            let ctx = GraphContext::new(&g);
            for closed in [false, true] {
                for p in [4u32, 8] {
                    let mut want = 0.0;
                    for i in 0..10 {
                        let mut vs = g.neighbours(i).to_vec();
                        if closed {
                            vs.push(i);
                        }
                        let a = DMatrix::from_fn(vs.len(), vs.len(), |x, y| {
                            f64::from(u8::from(g.has_edge(vs[x], vs[y])))
                        });
                        let mut pw = DMatrix::identity(vs.len(), vs.len());
                        for _ in 0..p {
                            pw = &pw * &a;
                        }
                        want += pw.trace();
                    }
                    assert_eq!(neighbourhood_power_trace(&ctx, p, closed).unwrap(), want);
                }
            }
        }
    }
}

//! Forman and Ollivier–Ricci curvature of every edge of a small graph.

use graph_invariants::graph::Graph;
use graph_invariants::invariants::topo::{forman_ricci, ollivier_ricci};
use graph_invariants::GraphContext;

fn main() -> graph_invariants::Result<()> {
    // Two triangles joined by a bridge.
    let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])?;
    let ctx = GraphContext::new(&g);
    let forman = forman_ricci(&ctx).expect("graph has edges");
    let ollivier = ollivier_ricci(&ctx, 0.5).expect("graph has edges");

    println!("edge     forman  ollivier");
    for (k, (u, v)) in g.edges().iter().enumerate() {
        println!("{u}-{v}   {:>8.3}  {:>8.4}", forman.values[k], ollivier.values[k]);
    }
    for (name, d) in [("forman", &forman), ("ollivier", &ollivier)] {
        let [m, var, skew, kurt] = d.moments();
        println!("{name}: mean {m:.4}, variance {var:.4}, skewness {skew:.4}, kurtosis {kurt:.4}");
    }
    Ok(())
}

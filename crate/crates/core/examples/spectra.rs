//! Spectral quantities: normalized-Laplacian eigenvalues, spanning trees,
//! commute times and magnitude.

use graph_invariants::generators::{complete, cycle, path};
use graph_invariants::invariants::{basic, topo};
use graph_invariants::{GraphContext, Params};

fn main() {
    let q = Params::default().q;
    for (name, g) in [("P6", path(6)), ("C6", cycle(6)), ("K6", complete(6))] {
        let ctx = GraphContext::new(&g);
        let spectrum = ctx.normalized_laplacian_spectrum().expect("small symmetric matrix");
        let trees = basic::spanning_tree_count(&ctx).unwrap_or(f64::NAN);
        let [mean, max] = topo::commute_time(&ctx).expect("pseudoinverse");
        let mag = topo::magnitude(&ctx, q).expect("nonsingular");
        let eig: Vec<String> = spectrum.values().iter().map(|l| format!("{l:.3}")).collect();
        println!("{name}: spectrum [{}]", eig.join(", "));
        println!("    spanning trees {trees:.0}, commute mean {mean:.3} max {max:.3}, magnitude {mag:.5}");
    }
}

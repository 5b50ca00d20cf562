//! Homomorphism counts of all connected patterns on up to five vertices,
//! compared between the 4×4 rook's graph and the Shrikhande graph.

use graph_invariants::generators::{rook, shrikhande};
use graph_invariants::invariants::topo::{homomorphism_counts, PatternCatalog};

fn main() {
    let patterns = PatternCatalog::shared();
    let a = homomorphism_counts(&rook(4)).expect("counts fit in 64 bits");
    let b = homomorphism_counts(&shrikhande()).expect("counts fit in 64 bits");
    println!("{:<10} {:>14} {:>14}", "pattern", "rook 4x4", "shrikhande");
    for (p, (x, y)) in patterns.patterns().iter().zip(a.iter().zip(&b)) {
        let mark = if x != y { "  <- differs" } else { "" };
        println!("{:<10} {x:>14} {y:>14}{mark}", p.label());
    }
}

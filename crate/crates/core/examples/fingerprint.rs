//! Fingerprints a few classic graphs under the full regime and prints
//! selected blocks.

use graph_invariants::generators::{complete, cycle, path, star};
use graph_invariants::registry::{build_catalog, Regime, RegimeConfig, Subset};

fn main() -> graph_invariants::Result<()> {
    let catalog = build_catalog(&RegimeConfig::new(Regime::Full, Subset::I))?;
    println!("{} blocks, {} columns", catalog.len(), catalog.width());

    for (name, g) in [("P5", path(5)), ("C6", cycle(6)), ("K4", complete(4)), ("S4", star(4))] {
        let fp = catalog.fingerprint(&g);
        print!("{name:>3}:");
        for block in ["wiener", "spanning_trees", "magnitude", "analytic_torsion", "forman_ricci_mean"] {
            let b = fp.block(block).expect("block in full catalog");
            print!("  {block}={:.4}", b.values[0]);
        }
        println!("  ({:?})", fp.elapsed);
    }

    let mut csv = Vec::new();
    let rows = catalog.fingerprint_graphs(&[cycle(5)], 1)?;
    catalog.write_csv(&rows, &mut csv)?;
    println!("\nCSV header has {} fields", String::from_utf8_lossy(&csv).lines().next().unwrap_or("").split(',').count());
    Ok(())
}

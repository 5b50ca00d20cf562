//! Dataset-membership table for two random-graph generators, with a
//! nearest-centroid separability check.

use graph_invariants::generators::{barabasi_albert, erdos_renyi};
use graph_invariants::meta::{assemble_meta_table, nearest_centroid_accuracy};
use graph_invariants::registry::{build_catalog, Regime, RegimeConfig, Subset};
use graph_invariants::{Graph, GraphDataset};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dataset(name: &str, make: impl Fn(&mut ChaCha8Rng) -> Graph) -> graph_invariants::Result<GraphDataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(name.len() as u64);
    let graphs = (0..150)
        .map(|i| {
            let mut g = make(&mut rng);
            g.set_id(format!("{name}-{i}"));
            g
        })
        .collect();
    GraphDataset::new(name, graphs)
}

fn main() -> graph_invariants::Result<()> {
    let er = dataset("er", |r| erdos_renyi(30, 0.1, r))?;
    let ba = dataset("ba", |r| barabasi_albert(30, 2, r))?;
    let catalog = build_catalog(&RegimeConfig::new(Regime::Reduced, Subset::I))?;
    let table = assemble_meta_table(&[er, ba], &catalog, 100, 0.2, 7, 4)?;
    let report = nearest_centroid_accuracy(&table)?;
    println!("rows: {}, columns: {}", table.rows.len(), table.columns.len());
    println!("accuracy {:.3}, confusion {:?}", report.overall_accuracy, report.confusion);
    Ok(())
}

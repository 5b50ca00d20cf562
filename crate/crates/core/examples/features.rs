//! sum and agg feature rows for a small generated dataset, joined with the
//! expressive subset of the reduced regime.

use graph_invariants::features::{write_features_csv, FeatureConfig};
use graph_invariants::generators::erdos_renyi;
use graph_invariants::registry::{build_catalog, Regime, RegimeConfig, Subset};
use graph_invariants::GraphDataset;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> graph_invariants::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let graphs = (0..5)
        .map(|i| {
            let mut g = erdos_renyi(12, 0.25, &mut rng);
            g.set_id(format!("er{i}"));
            g.set_target(Some(vec![(i % 2) as f64]));
            g
        })
        .collect();
    let ds = GraphDataset::new("toy", graphs)?;
    let catalog = build_catalog(&RegimeConfig::new(Regime::Reduced, Subset::S))?;

    let mut out = std::io::stdout().lock();
    write_features_csv(&ds, &FeatureConfig::sum(), None, 1, &mut out)?;
    println!();
    write_features_csv(&ds, &FeatureConfig::agg(3)?, Some(&catalog), 1, &mut out)?;
    Ok(())
}

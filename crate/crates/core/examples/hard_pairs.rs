//! Two pairs that colour refinement cannot tell apart, scored against the
//! full catalog, followed by greedy subset selection.

use graph_invariants::expressivity::{greedy_subset, report_json, score_pairs, GraphPair, ToleranceMode};
use graph_invariants::generators::{cycle, rook, shrikhande};
use graph_invariants::registry::{build_catalog, Regime, RegimeConfig, Subset};

fn main() -> graph_invariants::Result<()> {
    let pairs = vec![
        GraphPair {
            pair_id: "hexagon".into(),
            category: "Basic".into(),
            left: cycle(6),
            right: cycle(3).disjoint_union(&cycle(3)),
        },
        GraphPair {
            pair_id: "rook-shrikhande".into(),
            category: "Regular".into(),
            left: rook(4),
            right: shrikhande(),
        },
    ];
    let catalog = build_catalog(&RegimeConfig::new(Regime::Full, Subset::I))?;
    let report = score_pairs(&pairs, &catalog, 1e-6, ToleranceMode::Relative, 2)?;

    for (p, id) in report.pair_ids.iter().enumerate() {
        let names: Vec<&str> = report
            .invariants
            .iter()
            .zip(&report.differentiated[p])
            .filter(|(_, &d)| d)
            .map(|(n, _)| n.as_str())
            .collect();
        println!("{id}: {} invariants differ: {}", names.len(), names.join(", "));
    }
    let steps = greedy_subset(&report);
    println!("\n{}", report_json(&report, &steps)?);
    Ok(())
}

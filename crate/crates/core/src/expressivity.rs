//! Pairwise differentiation of non-isomorphic graphs by fingerprint
//! comparison, with per-category scoring and greedy subset selection.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{parse_graph6, GraphRecord};
use crate::registry::{format_value, Catalog, FingerprintVector};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct GraphPair {
    pub pair_id: String,
    pub category: String,
    pub left: Graph,
    pub right: Graph,
}

#[derive(Debug, Serialize, Deserialize)]
struct PairRecord {
    pair_id: String,
    category: String,
    left: GraphRecord,
    right: GraphRecord,
}

/// Reads `{pair_id, category, left, right}` objects, one per line.
pub fn load_pairs(stream: impl Read) -> Result<Vec<GraphPair>> {
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in BufReader::new(stream).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PairRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if !seen.insert(rec.pair_id.clone()) {
            return Err(Error::DuplicateId(rec.pair_id));
        }
        pairs.push(GraphPair {
            pair_id: rec.pair_id,
            category: rec.category,
            left: rec.left.into_graph()?,
            right: rec.right.into_graph()?,
        });
    }
    Ok(pairs)
}

pub fn write_pairs(pairs: &[GraphPair], mut out: impl Write) -> Result<()> {
    for p in pairs {
        let rec = PairRecord {
            pair_id: p.pair_id.clone(),
            category: p.category.clone(),
            left: GraphRecord::from_graph(&p.left),
            right: GraphRecord::from_graph(&p.right),
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Category sizes of the 400-pair benchmark, in file order.
pub const BREC_CATEGORIES: [(&str, usize); 4] = [("Basic", 60), ("Regular", 140), ("Extension", 100), ("CFI", 100)];

/// Converts the benchmark's graph6 listing (one graph per line, the two
/// graphs of a pair on consecutive lines) into pairs. Categories are
/// assigned by position; pairs past the known ranges get `Other`.
pub fn convert_brec_graph6(stream: impl Read) -> Result<Vec<GraphPair>> {
    let mut graphs = Vec::new();
    for (idx, line) in BufReader::new(stream).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let g = parse_graph6(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        graphs.push(g);
    }
    if graphs.len() % 2 != 0 {
        return Err(Error::Schema(format!("odd number of graphs ({}) in pair listing", graphs.len())));
    }
    let mut bounds = Vec::new();
    let mut end = 0;
    for (name, size) in BREC_CATEGORIES {
        end += size;
        bounds.push((end, name));
    }
    let mut pairs = Vec::with_capacity(graphs.len() / 2);
    let mut it = graphs.into_iter();
    let mut idx = 0;
    while let (Some(mut left), Some(mut right)) = (it.next(), it.next()) {
        let category = bounds
            .iter()
            .find(|(end, _)| idx < *end)
            .map_or("Other", |(_, name)| name)
            .to_string();
        let pair_id = format!("{idx:03}");
        left.set_id(format!("{pair_id}/left"));
        right.set_id(format!("{pair_id}/right"));
        pairs.push(GraphPair {
            pair_id,
            category,
            left,
            right,
        });
        idx += 1;
    }
    Ok(pairs)
}

/// How two block values are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceMode {
    /// `|a − b| > tol · max(|a|, |b|, 1)`.
    Relative,
    /// `|a − b| > tol`.
    Absolute,
}

/// Largest scaled component difference between two blocks; NaN when either
/// block failed.
fn block_difference(a: &crate::InvariantValue, b: &crate::InvariantValue, mode: ToleranceMode) -> f64 {
    if !a.status.is_ok() || !b.status.is_ok() {
        return f64::NAN;
    }
    a.values
        .iter()
        .zip(&b.values)
        .map(|(&x, &y)| {
            let diff = (x - y).abs();
            match mode {
                ToleranceMode::Relative => diff / x.abs().max(y.abs()).max(1.0),
                ToleranceMode::Absolute => diff,
            }
        })
        .fold(0.0, f64::max)
}

fn check_schema(left: &FingerprintVector, right: &FingerprintVector) -> Result<()> {
    let same = left.blocks.len() == right.blocks.len()
        && left
            .blocks
            .iter()
            .zip(&right.blocks)
            .all(|(a, b)| a.name == b.name && a.values.len() == b.values.len());
    if same {
        Ok(())
    } else {
        Err(Error::Schema(format!(
            "fingerprints of {:?} and {:?} have different layouts",
            left.graph_id, right.graph_id
        )))
    }
}

/// Per-block scaled differences.
pub fn block_differences(left: &FingerprintVector, right: &FingerprintVector, mode: ToleranceMode) -> Result<Vec<f64>> {
    check_schema(left, right)?;
    Ok(left
        .blocks
        .iter()
        .zip(&right.blocks)
        .map(|(a, b)| block_difference(a, b, mode))
        .collect())
}

/// Whether each block tells the two graphs apart. Failed blocks never do.
pub fn differentiates(
    left: &FingerprintVector,
    right: &FingerprintVector,
    tol: f64,
    mode: ToleranceMode,
) -> Result<Vec<bool>> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    Ok(block_differences(left, right, mode)?
        .into_iter()
        .map(|d| d > tol)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryScore {
    pub category: String,
    pub size: usize,
    pub count: usize,
    pub accuracy: f64,
}

impl CategoryScore {
    fn new(category: String, size: usize, count: usize) -> Self {
        let accuracy = if size == 0 { 0.0 } else { count as f64 / size as f64 };
        Self {
            category,
            size,
            count,
            accuracy,
        }
    }
}

/// Outcome of comparing every pair under every invariant.
#[derive(Debug, Clone)]
pub struct DifferentiationReport {
    pub invariants: Vec<String>,
    pub pair_ids: Vec<String>,
    pub categories: Vec<String>,
    /// `differentiated[pair][invariant]`.
    pub differentiated: Vec<Vec<bool>>,
    /// Scaled maximum difference per `[pair][invariant]`, NaN for failed blocks.
    pub differences: Vec<Vec<f64>>,
    pub tolerance: f64,
    pub mode: ToleranceMode,
}

impl DifferentiationReport {
    /// Builds a report from a precomputed boolean matrix; differences are
    /// set to 1 where differentiated and 0 elsewhere.
    pub fn from_matrix(invariants: Vec<String>, pair_ids: Vec<String>, categories: Vec<String>, differentiated: Vec<Vec<bool>>) -> Self {
        let differences = differentiated
            .iter()
            .map(|row| row.iter().map(|&b| f64::from(u8::from(b))).collect())
            .collect();
        Self {
            invariants,
            pair_ids,
            categories,
            differentiated,
            differences,
            tolerance: DEFAULT_TOLERANCE,
            mode: ToleranceMode::Relative,
        }
    }

    pub fn pair_differentiated(&self, pair: usize) -> bool {
        self.differentiated[pair].iter().any(|&b| b)
    }

    /// Pair indices told apart by at least one invariant in `subset`
    /// (indices into `invariants`).
    pub fn covered_by(&self, subset: &[usize]) -> HashSet<usize> {
        (0..self.pair_ids.len())
            .filter(|&p| subset.iter().any(|&i| self.differentiated[p][i]))
            .collect()
    }

    /// Per-category tallies in order of first appearance.
    pub fn category_scores(&self) -> Vec<CategoryScore> {
        let mut order: Vec<String> = Vec::new();
        for c in &self.categories {
            if !order.contains(c) {
                order.push(c.clone());
            }
        }
        order
            .into_iter()
            .map(|cat| {
                let members: Vec<usize> = (0..self.pair_ids.len()).filter(|&p| self.categories[p] == cat).collect();
                let count = members.iter().filter(|&&p| self.pair_differentiated(p)).count();
                CategoryScore::new(cat, members.len(), count)
            })
            .collect()
    }

    pub fn total(&self) -> CategoryScore {
        let count = (0..self.pair_ids.len()).filter(|&p| self.pair_differentiated(p)).count();
        CategoryScore::new("total".into(), self.pair_ids.len(), count)
    }
}

/// Fingerprints both sides of every pair and compares them.
pub fn score_pairs(
    pairs: &[GraphPair],
    catalog: &Catalog,
    tol: f64,
    mode: ToleranceMode,
    threads: usize,
) -> Result<DifferentiationReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyDataset("pairs".into()));
    }
    if threads == 0 {
        return Err(Error::Config("thread count must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
    let rows: Vec<Result<(Vec<bool>, Vec<f64>)>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|p| {
                let (l, r) = (catalog.fingerprint(&p.left), catalog.fingerprint(&p.right));
                let diffs = block_differences(&l, &r, mode)?;
                let flags = differentiates(&l, &r, tol, mode)?;
                Ok((flags, diffs))
            })
            .collect()
    });
    let (mut differentiated, mut differences) = (Vec::new(), Vec::new());
    for row in rows {
        let (f, d) = row?;
        differentiated.push(f);
        differences.push(d);
    }
    Ok(DifferentiationReport {
        invariants: catalog.descriptors().iter().map(|d| d.name.clone()).collect(),
        pair_ids: pairs.iter().map(|p| p.pair_id.clone()).collect(),
        categories: pairs.iter().map(|p| p.category.clone()).collect(),
        differentiated,
        differences,
        tolerance: tol,
        mode,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyStep {
    pub invariant: String,
    pub marginal_gain: usize,
    pub covered: usize,
}

/// Repeatedly picks the invariant that tells apart the most pairs not yet
/// covered; ties go to the earlier catalog entry. Stops at zero gain.
pub fn greedy_subset(report: &DifferentiationReport) -> Vec<GreedyStep> {
    let n_pairs = report.pair_ids.len();
    let mut covered = vec![false; n_pairs];
    let mut used = vec![false; report.invariants.len()];
    let mut steps = Vec::new();
    let mut total = 0;
    loop {
        let mut best: Option<(usize, usize)> = None;
        for (i, &u) in used.iter().enumerate() {
            if u {
                continue;
            }
            let gain = (0..n_pairs)
                .filter(|&p| !covered[p] && report.differentiated[p][i])
                .count();
            if gain > best.map_or(0, |(_, g)| g) {
                best = Some((i, gain));
            }
        }
        let Some((i, gain)) = best else { break };
        used[i] = true;
        for (p, c) in covered.iter_mut().enumerate() {
            *c |= report.differentiated[p][i];
        }
        total += gain;
        steps.push(GreedyStep {
            invariant: report.invariants[i].clone(),
            marginal_gain: gain,
            covered: total,
        });
    }
    steps
}

/// Heatmap CSV: one row per invariant (greedy picks first, then the rest in
/// catalog order), one column per pair.
pub fn export_heatmap(report: &DifferentiationReport, greedy: &[GreedyStep], out: impl Write) -> Result<()> {
    let mut order: Vec<usize> = greedy
        .iter()
        .map(|s| report.invariants.iter().position(|n| *n == s.invariant).expect("greedy names come from the report"))
        .collect();
    for i in 0..report.invariants.len() {
        if !order.contains(&i) {
            order.push(i);
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("invariant").chain(report.pair_ids.iter().map(String::as_str)))?;
    for i in order {
        let row = std::iter::once(report.invariants[i].clone())
            .chain((0..report.pair_ids.len()).map(|p| format_value(report.differences[p][i])));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ReportJson<'a> {
    tolerance: f64,
    tolerance_mode: ToleranceMode,
    invariants: &'a [String],
    categories: Vec<CategoryScore>,
    total: CategoryScore,
    greedy: &'a [GreedyStep],
}

pub fn report_json(report: &DifferentiationReport, greedy: &[GreedyStep]) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ReportJson {
        tolerance: report.tolerance,
        tolerance_mode: report.mode,
        invariants: &report.invariants,
        categories: report.category_scores(),
        total: report.total(),
        greedy,
    })?)
}

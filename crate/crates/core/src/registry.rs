//! Invariant catalog, regime and subset selection, fingerprint assembly and
//! CSV/JSON serialization.

use std::fmt;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDataset};
use crate::invariants::topo::{self, PatternCatalog};
use crate::invariants::{basic, entropy, indices, Failure, GraphContext, InvariantValue, Outcome, Params, Status};

/// Bumped whenever the catalog order, names or widths change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Full,
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Subset {
    I,
    S,
}

impl FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Regime::Full),
            "reduced" => Ok(Regime::Reduced),
            _ => Err(Error::Config(format!("unknown regime {s:?} (expected full or reduced)"))),
        }
    }
}

impl FromStr for Subset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" => Ok(Subset::I),
            "S" | "s" => Ok(Subset::S),
            _ => Err(Error::Config(format!("unknown subset {s:?} (expected I or S)"))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Full => "full",
            Regime::Reduced => "reduced",
        })
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subset::I => "I",
            Subset::S => "S",
        })
    }
}

/// Which invariants to compute and with which parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeConfig {
    pub regime: Regime,
    pub subset: Subset,
    pub params: Params,
}

impl RegimeConfig {
    pub fn new(regime: Regime, subset: Subset) -> Self {
        Self {
            regime,
            subset,
            params: Params::default(),
        }
    }

    /// Sets a parameter by name: `q`, `alpha`, `torsion_dim`, `spectrum_k`,
    /// `randic_exponents` (comma separated) or `hom_log1p`.
    pub fn set_override(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("invalid value {value:?} for {key}: {what}"));
        let p = &mut self.params;
        match key {
            "q" => {
                let q: f64 = value.parse().map_err(|_| bad("not a number"))?;
                if !(q > 0.0 && q < 1.0) {
                    return Err(bad("must lie in (0, 1)"));
                }
                p.q = q;
            }
            "alpha" => {
                let a: f64 = value.parse().map_err(|_| bad("not a number"))?;
                if !(0.0..1.0).contains(&a) {
                    return Err(bad("must lie in [0, 1)"));
                }
                p.alpha = a;
            }
            "torsion_dim" => p.torsion_dim = value.parse().map_err(|_| bad("not a nonnegative integer"))?,
            "spectrum_k" => {
                let k: usize = value.parse().map_err(|_| bad("not a positive integer"))?;
                if k == 0 {
                    return Err(bad("must be positive"));
                }
                p.spectrum_k = k;
            }
            "randic_exponents" => {
                let list = value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("expected comma-separated numbers"))?;
                if list.iter().any(|c| !c.is_finite()) {
                    return Err(bad("exponents must be finite"));
                }
                p.randic_exponents = list;
            }
            "hom_log1p" => p.hom_log1p = value.parse().map_err(|_| bad("expected true or false"))?,
            _ => return Err(Error::Config(format!("unknown override key {key:?}"))),
        }
        Ok(())
    }
}

type BlockFn = fn(&GraphContext, &Params) -> Outcome<Vec<f64>>;

#[derive(Clone, Copy)]
enum Compute {
    Block(BlockFn),
    GeneralRandic(f64),
}

/// One named, fixed-width block of a fingerprint.
#[derive(Clone)]
pub struct InvariantDescriptor {
    pub name: String,
    pub components: Vec<String>,
    pub regimes: Vec<Regime>,
    pub in_subset_s: Vec<Regime>,
    compute: Compute,
}

impl fmt::Debug for InvariantDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantDescriptor")
            .field("name", &self.name)
            .field("width", &self.width())
            .finish()
    }
}

impl InvariantDescriptor {
    pub fn width(&self) -> usize {
        self.components.len()
    }

    /// Column headers `<name>.<component>`.
    pub fn columns(&self) -> impl Iterator<Item = String> + '_ {
        self.components.iter().map(move |c| format!("{}.{}", self.name, c))
    }

    pub fn evaluate(&self, ctx: &GraphContext, params: &Params) -> InvariantValue {
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| match self.compute {
            Compute::Block(f) => f(ctx, params),
            Compute::GeneralRandic(c) => Ok(vec![indices::general_randic(ctx, c)]),
        }))
        .unwrap_or_else(|_| Err(Failure::new("internal error")));
        InvariantValue::from_outcome(self.name.clone(), self.width(), outcome)
    }
}

const BOTH: &[Regime] = &[Regime::Full, Regime::Reduced];
const FULL: &[Regime] = &[Regime::Full];
const REDUCED: &[Regime] = &[Regime::Reduced];
const NONE: &[Regime] = &[];

fn value() -> Vec<String> {
    vec!["value".into()]
}

fn desc(name: &str, regimes: &[Regime], s: &[Regime], components: Vec<String>, f: BlockFn) -> InvariantDescriptor {
    InvariantDescriptor {
        name: name.into(),
        components,
        regimes: regimes.to_vec(),
        in_subset_s: s.to_vec(),
        compute: Compute::Block(f),
    }
}

macro_rules! plain {
    ($f:path) => {
        (|ctx: &GraphContext, _: &Params| Ok(vec![$f(ctx)])) as BlockFn
    };
}

macro_rules! fallible {
    ($f:path) => {
        (|ctx: &GraphContext, _: &Params| $f(ctx).map(|v| vec![v])) as BlockFn
    };
}

fn moment(d: Outcome<&topo::EdgeDistribution>, k: usize) -> Outcome<Vec<f64>> {
    d.map(|d| vec![d.moments()[k]])
}

fn ollivier_moment(ctx: &GraphContext, p: &Params, k: usize) -> Outcome<Vec<f64>> {
    ctx.ollivier(p.alpha).map(|d| vec![d.moments()[k]])
}

/// Every descriptor in catalog order, before regime and subset filtering.
fn all_descriptors(p: &Params) -> Vec<InvariantDescriptor> {
    let mut out = vec![
        desc("num_vertices", BOTH, NONE, value(), plain!(basic::num_vertices)),
        desc("num_edges", BOTH, NONE, value(), plain!(basic::num_edges)),
        desc("circuit_rank", BOTH, NONE, value(), plain!(basic::circuit_rank)),
        desc("diameter", BOTH, NONE, value(), plain!(basic::diameter)),
        desc("radius", BOTH, BOTH, value(), plain!(basic::radius)),
        desc("transitivity", BOTH, NONE, value(), plain!(basic::transitivity)),
        desc("density", BOTH, NONE, value(), plain!(basic::density)),
        desc(
            "laplacian_spectrum",
            BOTH,
            NONE,
            (0..p.spectrum_k)
                .map(|i| format!("low{i}"))
                .chain((0..p.spectrum_k).map(|i| format!("high{i}")))
                .collect(),
            |ctx, p| basic::laplacian_spectrum_block(ctx, p.spectrum_k),
        ),
        desc("algebraic_connectivity", BOTH, REDUCED, value(), fallible!(basic::algebraic_connectivity)),
        desc("spanning_trees", FULL, NONE, value(), fallible!(basic::spanning_tree_count)),
        desc("log_spanning_trees", REDUCED, NONE, value(), fallible!(basic::log_spanning_tree_count)),
        desc("degree_mean_ratio", BOTH, NONE, value(), fallible!(basic::degree_mean_ratio)),
        desc("degree_entropy", BOTH, NONE, value(), plain!(entropy::degree_entropy)),
        desc("von_neumann_entropy", BOTH, NONE, value(), fallible!(entropy::von_neumann_entropy)),
        desc("kolmogorov_complexity", BOTH, NONE, value(), plain!(entropy::kolmogorov_proxy)),
        desc("magnitude", BOTH, BOTH, value(), |ctx, p| topo::magnitude(ctx, p.q).map(|v| vec![v])),
        desc("analytic_torsion", FULL, FULL, value(), |ctx, p| {
            topo::analytic_torsion(ctx.graph(), p.torsion_dim).map(|v| vec![v])
        }),
        desc(
            "homomorphism_counts",
            FULL,
            NONE,
            PatternCatalog::shared().patterns().iter().map(|pat| pat.label()).collect(),
            |ctx, p| {
                let counts = topo::homomorphism_counts(ctx.graph())?;
                Ok(counts
                    .into_iter()
                    .map(|c| if p.hom_log1p { (c as f64).ln_1p() } else { c as f64 })
                    .collect())
            },
        ),
        desc("forman_ricci_mean", BOTH, BOTH, value(), |ctx, _| moment(ctx.forman(), 0)),
        desc("forman_ricci_variance", BOTH, NONE, value(), |ctx, _| moment(ctx.forman(), 1)),
        desc("forman_ricci_skewness", BOTH, NONE, value(), |ctx, _| moment(ctx.forman(), 2)),
        desc("forman_ricci_kurtosis", BOTH, NONE, value(), |ctx, _| moment(ctx.forman(), 3)),
        desc("ollivier_ricci_mean", BOTH, REDUCED, value(), |ctx, p| ollivier_moment(ctx, p, 0)),
        desc("ollivier_ricci_variance", BOTH, NONE, value(), |ctx, p| ollivier_moment(ctx, p, 1)),
        desc("ollivier_ricci_skewness", BOTH, NONE, value(), |ctx, p| ollivier_moment(ctx, p, 2)),
        desc("ollivier_ricci_kurtosis", BOTH, NONE, value(), |ctx, p| ollivier_moment(ctx, p, 3)),
        desc("commute_time_mean", BOTH, FULL, value(), |ctx, _| topo::commute_time(ctx).map(|c| vec![c[0]])),
        desc("commute_time_max", BOTH, NONE, value(), |ctx, _| topo::commute_time(ctx).map(|c| vec![c[1]])),
        desc("neighbourhood_power_trace_open_4", BOTH, NONE, value(), |ctx, _| {
            topo::neighbourhood_power_trace(ctx, 4, false).map(|v| vec![v])
        }),
        desc("neighbourhood_power_trace_open_8", BOTH, NONE, value(), |ctx, _| {
            topo::neighbourhood_power_trace(ctx, 8, false).map(|v| vec![v])
        }),
        desc("neighbourhood_power_trace_closed_4", BOTH, NONE, value(), |ctx, _| {
            topo::neighbourhood_power_trace(ctx, 4, true).map(|v| vec![v])
        }),
        desc("neighbourhood_power_trace_closed_8", BOTH, REDUCED, value(), |ctx, _| {
            topo::neighbourhood_power_trace(ctx, 8, true).map(|v| vec![v])
        }),
        desc("wiener", BOTH, NONE, value(), plain!(indices::wiener)),
        desc("randic", BOTH, NONE, value(), plain!(indices::randic)),
    ];
    for &c in &p.randic_exponents {
        out.push(InvariantDescriptor {
            name: format!("general_randic_{c}"),
            components: value(),
            regimes: BOTH.to_vec(),
            in_subset_s: Vec::new(),
            compute: Compute::GeneralRandic(c),
        });
    }
    out.extend([
        desc("atom_bond_connectivity", BOTH, NONE, value(), plain!(indices::atom_bond_connectivity)),
        desc("geometric_arithmetic", BOTH, NONE, value(), plain!(indices::geometric_arithmetic)),
        desc("hyper_wiener", BOTH, NONE, value(), plain!(indices::hyper_wiener)),
        desc("estrada", FULL, NONE, value(), fallible!(indices::estrada)),
        desc("zagreb_first", BOTH, NONE, value(), plain!(indices::zagreb_first)),
        desc("zagreb_second", BOTH, NONE, value(), plain!(indices::zagreb_second)),
        desc("schultz", BOTH, NONE, value(), plain!(indices::schultz)),
        desc("gutman", BOTH, NONE, value(), plain!(indices::gutman)),
        desc("szeged", BOTH, NONE, value(), plain!(indices::szeged)),
        desc("forgotten", BOTH, NONE, value(), plain!(indices::forgotten)),
        desc("balaban", BOTH, NONE, value(), plain!(indices::balaban)),
    ]);
    out
}

/// Order of the expressive subset, as selected per regime.
fn subset_s_order(regime: Regime) -> &'static [&'static str] {
    match regime {
        Regime::Full => &["analytic_torsion", "commute_time_mean", "magnitude", "radius", "forman_ricci_mean"],
        Regime::Reduced => &[
            "algebraic_connectivity",
            "ollivier_ricci_mean",
            "magnitude",
            "neighbourhood_power_trace_closed_8",
            "radius",
            "forman_ricci_mean",
        ],
    }
}

/// An immutable, ordered list of descriptors plus the parameters they use.
#[derive(Debug, Clone)]
pub struct Catalog {
    config: RegimeConfig,
    descriptors: Vec<InvariantDescriptor>,
}

/// Builds the catalog for a configuration.
pub fn build_catalog(config: &RegimeConfig) -> Result<Catalog> {
    let mut names = std::collections::HashSet::new();
    for c in &config.params.randic_exponents {
        if !names.insert(c.to_bits()) {
            return Err(Error::Config(format!("duplicate general Randić exponent {c}")));
        }
    }
    let all: Vec<InvariantDescriptor> = all_descriptors(&config.params)
        .into_iter()
        .filter(|d| d.regimes.contains(&config.regime))
        .collect();
    let descriptors = match config.subset {
        Subset::I => all,
        Subset::S => subset_s_order(config.regime)
            .iter()
            .map(|name| {
                all.iter()
                    .find(|d| d.name == *name)
                    .cloned()
                    .expect("subset S names exist in the catalog")
            })
            .collect(),
    };
    Ok(Catalog {
        config: config.clone(),
        descriptors,
    })
}

/// Fingerprint of one graph: a block per descriptor, in catalog order.
#[derive(Debug, Clone)]
pub struct FingerprintVector {
    pub graph_id: String,
    pub blocks: Vec<InvariantValue>,
    pub elapsed: Duration,
}

impl FingerprintVector {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.blocks.iter().flat_map(|b| b.values.iter().copied())
    }

    pub fn width(&self) -> usize {
        self.blocks.iter().map(|b| b.values.len()).sum()
    }

    pub fn block(&self, name: &str) -> Option<&InvariantValue> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn num_failed(&self) -> usize {
        self.blocks.iter().filter(|b| !b.status.is_ok()).count()
    }
}

#[derive(Debug, Serialize)]
struct ColumnInfo<'a> {
    name: &'a str,
    width: usize,
}

#[derive(Debug, Serialize)]
struct ParamsInfo<'a> {
    q: f64,
    alpha: f64,
    torsion_dim: usize,
    spectrum_k: usize,
    randic_exponents: &'a [f64],
    hom_log1p: bool,
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    schema_version: u32,
    regime: Regime,
    subset: Subset,
    params: ParamsInfo<'a>,
    invariants: Vec<ColumnInfo<'a>>,
    num_graphs: usize,
    failure_counts: std::collections::BTreeMap<&'a str, usize>,
}

/// Formats a value for CSV output: shortest round-trip decimal, with
/// `nan`, `inf` and `-inf` literals.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

impl Catalog {
    pub fn config(&self) -> &RegimeConfig {
        &self.config
    }

    pub fn params(&self) -> &Params {
        &self.config.params
    }

    pub fn descriptors(&self) -> &[InvariantDescriptor] {
        &self.descriptors
    }

    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }

    pub fn width(&self) -> usize {
        self.descriptors.iter().map(InvariantDescriptor::width).sum()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.descriptors.iter().position(|d| d.name == name)
    }

    /// Value column headers in block order.
    pub fn value_columns(&self) -> Vec<String> {
        self.descriptors.iter().flat_map(|d| d.columns()).collect()
    }

    /// `graph_id`, value columns, then one `<name>.status` column per block.
    pub fn csv_header(&self) -> Vec<String> {
        std::iter::once("graph_id".to_string())
            .chain(self.value_columns())
            .chain(self.descriptors.iter().map(|d| format!("{}.status", d.name)))
            .collect()
    }

    pub fn fingerprint(&self, g: &Graph) -> FingerprintVector {
        let start = Instant::now();
        let ctx = GraphContext::new(g);
        let blocks = self
            .descriptors
            .iter()
            .map(|d| d.evaluate(&ctx, &self.config.params))
            .collect();
        FingerprintVector {
            graph_id: g.id().to_string(),
            blocks,
            elapsed: start.elapsed(),
        }
    }

    /// Fingerprints every graph on a pool of `threads` workers. Row order
    /// matches dataset order.
    pub fn fingerprint_graphs(&self, graphs: &[Graph], threads: usize) -> Result<Vec<FingerprintVector>> {
        if threads == 0 {
            return Err(Error::Config("thread count must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
        Ok(pool.install(|| graphs.par_iter().map(|g| self.fingerprint(g)).collect()))
    }

    pub fn fingerprint_dataset(&self, ds: &GraphDataset, threads: usize) -> Result<Vec<FingerprintVector>> {
        self.fingerprint_graphs(ds.graphs(), threads)
    }

    /// Writes the fingerprint table. An empty row set gives a header-only file.
    pub fn write_csv(&self, rows: &[FingerprintVector], out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.csv_header())?;
        for row in rows {
            self.check_row(row)?;
            let record = std::iter::once(row.graph_id.clone())
                .chain(row.values().map(format_value))
                .chain(row.blocks.iter().map(|b| b.status.to_string()));
            w.write_record(record)?;
        }
        w.flush()?;
        Ok(())
    }

    fn check_row(&self, row: &FingerprintVector) -> Result<()> {
        let names_match = row.blocks.len() == self.descriptors.len()
            && row
                .blocks
                .iter()
                .zip(&self.descriptors)
                .all(|(b, d)| b.name == d.name && b.values.len() == d.width());
        if names_match {
            Ok(())
        } else {
            Err(Error::Schema(format!("row {:?} does not follow the catalog", row.graph_id)))
        }
    }

    /// JSON sidecar: configuration, schema version and per-block failure
    /// counts. Contains no timings, so it is reproducible.
    pub fn sidecar_json(&self, rows: &[FingerprintVector]) -> Result<String> {
        let mut failure_counts = std::collections::BTreeMap::new();
        for d in &self.descriptors {
            failure_counts.insert(d.name.as_str(), 0usize);
        }
        for row in rows {
            for b in &row.blocks {
                if let Status::Failed(_) = b.status {
                    *failure_counts.get_mut(b.name.as_str()).expect("known block") += 1;
                }
            }
        }
        let p = &self.config.params;
        let sidecar = Sidecar {
            schema_version: SCHEMA_VERSION,
            regime: self.config.regime,
            subset: self.config.subset,
            params: ParamsInfo {
                q: p.q,
                alpha: p.alpha,
                torsion_dim: p.torsion_dim,
                spectrum_k: p.spectrum_k,
                randic_exponents: &p.randic_exponents,
                hom_log1p: p.hom_log1p,
            },
            invariants: self
                .descriptors
                .iter()
                .map(|d| ColumnInfo {
                    name: &d.name,
                    width: d.width(),
                })
                .collect(),
            num_graphs: rows.len(),
            failure_counts,
        };
        Ok(serde_json::to_string_pretty(&sidecar)?)
    }
}

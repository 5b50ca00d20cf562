//! Parameter-free graph-level features from node and edge attributes:
//! the column sum of the initial node features (`sum`) and the stacked
//! column sums of `A^i X_init` (`agg`), optionally joined with a fingerprint.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDataset};
use crate::registry::{format_value, Catalog};

pub const DEFAULT_HOPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureMode {
    Sum,
    Agg,
}

impl FeatureMode {
    fn prefix(self) -> &'static str {
        match self {
            FeatureMode::Sum => "sum",
            FeatureMode::Agg => "agg",
        }
    }
}

impl std::str::FromStr for FeatureMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(FeatureMode::Sum),
            "agg" => Ok(FeatureMode::Agg),
            _ => Err(Error::Config(format!("unknown feature mode {s:?} (expected sum or agg)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureConfig {
    pub mode: FeatureMode,
    /// Highest adjacency power in `agg` mode.
    pub hops: usize,
}

impl FeatureConfig {
    pub fn sum() -> Self {
        Self {
            mode: FeatureMode::Sum,
            hops: 0,
        }
    }

    pub fn agg(hops: usize) -> Result<Self> {
        if hops == 0 {
            return Err(Error::Config("agg needs at least one hop".into()));
        }
        Ok(Self {
            mode: FeatureMode::Agg,
            hops,
        })
    }

    fn blocks(&self) -> usize {
        match self.mode {
            FeatureMode::Sum => 1,
            FeatureMode::Agg => self.hops + 1,
        }
    }
}

/// `X ∥ B·E`, where `B` is the unsigned vertex–edge incidence matrix, so
/// each vertex gains the sum of its incident edges' features. Graphs
/// without node features get a single constant-one column; without edge
/// features `X_init = X`.
pub fn build_x_init(g: &Graph) -> Result<DMatrix<f64>> {
    let n = g.num_vertices();
    let x = g
        .node_features()
        .cloned()
        .unwrap_or_else(|| DMatrix::from_element(n, 1, 1.0));
    let Some(e) = g.edge_features() else {
        return Ok(x);
    };
    if e.nrows() != g.num_edges() {
        return Err(Error::Dimension {
            graph_id: g.id().to_string(),
            what: "edge_features",
            expected: g.num_edges(),
            actual: e.nrows(),
        });
    }
    let mut out = DMatrix::zeros(n, x.ncols() + e.ncols());
    out.columns_mut(0, x.ncols()).copy_from(&x);
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        for c in 0..e.ncols() {
            out[(u, x.ncols() + c)] += e[(k, c)];
            out[(v, x.ncols() + c)] += e[(k, c)];
        }
    }
    Ok(out)
}

fn column_sums(m: &DMatrix<f64>) -> Vec<f64> {
    m.column_iter().map(|c| c.sum()).collect()
}

/// `Σ_i (X_init)_i`.
pub fn feature_sum(x_init: &DMatrix<f64>) -> Vec<f64> {
    column_sums(x_init)
}

fn adjacency_times(g: &Graph, m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for v in 0..g.num_vertices() {
        for &w in g.neighbours(v) {
            for c in 0..m.ncols() {
                out[(v, c)] += m[(w, c)];
            }
        }
    }
    out
}

/// `∥_{i=0..=hops} Σ_j (A^i X_init)_j` with the raw adjacency matrix.
pub fn feature_agg(g: &Graph, x_init: &DMatrix<f64>, hops: usize) -> Vec<f64> {
    let mut out = column_sums(x_init);
    let mut m = x_init.clone();
    for _ in 0..hops {
        m = adjacency_times(g, &m);
        out.extend(column_sums(&m));
    }
    out
}

/// Feature part of one row.
pub fn feature_vector(g: &Graph, config: &FeatureConfig) -> Result<Vec<f64>> {
    let x = build_x_init(g)?;
    Ok(match config.mode {
        FeatureMode::Sum => feature_sum(&x),
        FeatureMode::Agg => feature_agg(g, &x, config.hops),
    })
}

/// Feature vector followed by the fingerprint values, when a catalog is given.
pub fn assemble_row(g: &Graph, config: &FeatureConfig, catalog: Option<&Catalog>) -> Result<Vec<f64>> {
    let mut row = feature_vector(g, config)?;
    if let Some(c) = catalog {
        row.extend(c.fingerprint(g).values());
    }
    Ok(row)
}

/// Column names `<mode>.<i>.<dim>` for an `X_init` of width `dim`.
pub fn feature_columns(config: &FeatureConfig, dim: usize) -> Vec<String> {
    (0..config.blocks())
        .flat_map(|i| (0..dim).map(move |d| format!("{}.{i}.{d}", config.mode.prefix())))
        .collect()
}

/// Writes one row per graph: `graph_id`, feature columns, fingerprint
/// columns (if `catalog` is given), then `label` columns when the dataset
/// carries targets.
pub fn write_features_csv(
    ds: &GraphDataset,
    config: &FeatureConfig,
    catalog: Option<&Catalog>,
    threads: usize,
    out: impl Write,
) -> Result<()> {
    if threads == 0 {
        return Err(Error::Config("thread count must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
    let rows: Vec<Result<Vec<f64>>> =
        pool.install(|| ds.graphs().par_iter().map(|g| assemble_row(g, config, catalog)).collect());
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let feature_width = |g: &Graph| build_x_init(g).map(|x| x.ncols());
    let dim = match ds.graphs().first() {
        Some(g) => feature_width(g)?,
        None => 1,
    };
    for g in ds.graphs() {
        let d = feature_width(g)?;
        if d != dim {
            return Err(Error::Schema(format!(
                "graph {:?} has feature width {d}, expected {dim}",
                g.id()
            )));
        }
    }
    let label_width = ds.graphs().iter().filter_map(|g| g.target().map(<[f64]>::len)).max();
    if let Some(w) = label_width {
        if let Some(g) = ds.graphs().iter().find(|g| g.target().is_some_and(|t| t.len() != w)) {
            return Err(Error::Schema(format!("graph {:?} has a target of different length", g.id())));
        }
    }

    let mut header = vec!["graph_id".to_string()];
    header.extend(feature_columns(config, dim));
    if let Some(c) = catalog {
        header.extend(c.value_columns());
    }
    match label_width {
        Some(1) => header.push("label".into()),
        Some(w) => header.extend((0..w).map(|k| format!("label.{k}"))),
        None => {}
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header)?;
    for (g, row) in ds.graphs().iter().zip(rows) {
        let mut record = vec![g.id().to_string()];
        record.extend(row.into_iter().map(format_value));
        if let Some(lw) = label_width {
            match g.target() {
                Some(t) => record.extend(t.iter().copied().map(format_value)),
                None => record.extend(std::iter::repeat_n("nan".to_string(), lw)),
            }
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

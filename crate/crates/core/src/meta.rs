//! Dataset-membership tables: sample graphs from several datasets, label
//! each with its source, split, fingerprint and export. A nearest-centroid
//! classifier gives a quick separability check.

use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDataset};
use crate::registry::{format_value, Catalog, FingerprintVector, SCHEMA_VERSION};

pub const DEFAULT_SAMPLE_SIZE: usize = 800;
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone)]
pub struct MetaRow {
    pub label: usize,
    pub split: Split,
    pub fingerprint: FingerprintVector,
}

#[derive(Debug, Clone)]
pub struct MetaTable {
    pub label_names: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<MetaRow>,
    pub seed: u64,
    pub sample_size: usize,
    pub test_fraction: f64,
    pub warnings: Vec<String>,
}

/// Keeps the datasets whose names appear in `labels`, in the order given.
pub fn select_datasets(datasets: Vec<GraphDataset>, labels: &[String]) -> Result<Vec<GraphDataset>> {
    let mut pool: Vec<Option<GraphDataset>> = datasets.into_iter().map(Some).collect();
    labels
        .iter()
        .map(|name| {
            pool.iter_mut()
                .find(|d| d.as_ref().is_some_and(|d| d.name == *name))
                .and_then(Option::take)
                .ok_or_else(|| Error::Config(format!("no dataset named {name:?}")))
        })
        .collect()
}

/// Samples up to `sample_size` graphs per dataset without replacement and
/// splits each label's sample into train and test. Label `k` is the
/// position of the dataset in `datasets`.
pub fn assemble_meta_table(
    datasets: &[GraphDataset],
    catalog: &Catalog,
    sample_size: usize,
    test_fraction: f64,
    seed: u64,
    threads: usize,
) -> Result<MetaTable> {
    if sample_size == 0 {
        return Err(Error::Config("sample size must be at least 1".into()));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Config(format!("test fraction {test_fraction} outside (0, 1)")));
    }
    if datasets.is_empty() {
        return Err(Error::Config("no datasets given".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut warnings = Vec::new();
    let mut chosen: Vec<(usize, Split, &Graph)> = Vec::new();
    for (label, ds) in datasets.iter().enumerate() {
        if ds.is_empty() {
            return Err(Error::EmptyDataset(ds.name.clone()));
        }
        let k = sample_size.min(ds.len());
        if k < sample_size {
            warnings.push(format!(
                "dataset {:?} has {} graphs, fewer than the sample size {sample_size}; using all of them",
                ds.name,
                ds.len()
            ));
        }
        let mut picked = index::sample(&mut rng, ds.len(), k).into_vec();
        picked.sort_unstable();
        let n_test = ((k as f64 * test_fraction).round() as usize).min(k.saturating_sub(1));
        let mut order: Vec<usize> = (0..k).collect();
        order.shuffle(&mut rng);
        let mut is_test = vec![false; k];
        for &o in &order[..n_test] {
            is_test[o] = true;
        }
        for (pos, &gi) in picked.iter().enumerate() {
            let split = if is_test[pos] { Split::Test } else { Split::Train };
            chosen.push((label, split, &ds.graphs()[gi]));
        }
    }
    let graphs: Vec<Graph> = chosen.iter().map(|(_, _, g)| (*g).clone()).collect();
    let fps = catalog.fingerprint_graphs(&graphs, threads)?;
    let rows = chosen
        .iter()
        .zip(fps)
        .map(|(&(label, split, _), fingerprint)| MetaRow {
            label,
            split,
            fingerprint,
        })
        .collect();
    Ok(MetaTable {
        label_names: datasets.iter().map(|d| d.name.clone()).collect(),
        columns: catalog.value_columns(),
        rows,
        seed,
        sample_size,
        test_fraction,
        warnings,
    })
}

/// Header `graph_id, <fingerprint columns>, label, split`.
pub fn export_meta_csv(t: &MetaTable, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header = std::iter::once("graph_id".to_string())
        .chain(t.columns.iter().cloned())
        .chain(["label".to_string(), "split".to_string()]);
    w.write_record(header)?;
    for r in &t.rows {
        let record = std::iter::once(r.fingerprint.graph_id.clone())
            .chain(r.fingerprint.values().map(format_value))
            .chain([r.label.to_string(), r.split.as_str().to_string()]);
        w.write_record(record)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MetaSidecar<'a> {
    schema_version: u32,
    labels: BTreeMap<String, &'a str>,
    seed: u64,
    sample_size: usize,
    test_fraction: f64,
    rows: usize,
    warnings: &'a [String],
}

/// JSON mapping label indices to dataset names, plus sampling settings.
pub fn meta_sidecar_json(t: &MetaTable) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MetaSidecar {
        schema_version: SCHEMA_VERSION,
        labels: t
            .label_names
            .iter()
            .enumerate()
            .map(|(i, n)| (i.to_string(), n.as_str()))
            .collect(),
        seed: t.seed,
        sample_size: t.sample_size,
        test_fraction: t.test_fraction,
        rows: t.rows.len(),
        warnings: &t.warnings,
    })?)
}

#[derive(Debug, Clone, Serialize)]
pub struct SmokeReport {
    pub label_names: Vec<String>,
    pub per_label_accuracy: Vec<f64>,
    pub overall_accuracy: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    /// Column indices left out of the distance (constant or never finite on
    /// the training rows).
    pub excluded_columns: Vec<usize>,
}

/// Nearest-centroid classification of the test rows after z-scoring every
/// column on training statistics. Non-finite entries are replaced by the
/// training mean of their column.
pub fn nearest_centroid_accuracy(t: &MetaTable) -> Result<SmokeReport> {
    let n_labels = t.label_names.len();
    if n_labels < 2 {
        return Err(Error::Config("nearest-centroid check needs at least two labels".into()));
    }
    let vecs: Vec<Vec<f64>> = t.rows.iter().map(|r| r.fingerprint.values().collect()).collect();
    let width = t.columns.len();
    let train: Vec<usize> = (0..t.rows.len()).filter(|&i| t.rows[i].split == Split::Train).collect();
    for label in 0..n_labels {
        if !train.iter().any(|&i| t.rows[i].label == label) {
            return Err(Error::Config(format!("label {:?} has no training rows", t.label_names[label])));
        }
    }

    let mut mean = vec![0.0; width];
    let mut std = vec![0.0; width];
    let mut excluded = Vec::new();
    for j in 0..width {
        let finite: Vec<f64> = train.iter().map(|&i| vecs[i][j]).filter(|v| v.is_finite()).collect();
        if finite.is_empty() {
            excluded.push(j);
            continue;
        }
        let m = finite.iter().sum::<f64>() / finite.len() as f64;
        // Imputed entries sit at the mean, so they add nothing to the spread.
        let var = finite.iter().map(|v| (v - m).powi(2)).sum::<f64>() / train.len() as f64;
        mean[j] = m;
        std[j] = var.sqrt();
        if !(std[j] > 1e-12 * m.abs().max(1.0)) {
            excluded.push(j);
        }
    }
    let kept: Vec<usize> = (0..width).filter(|j| !excluded.contains(j)).collect();
    let z = |v: &[f64]| -> Vec<f64> {
        kept.iter()
            .map(|&j| if v[j].is_finite() { (v[j] - mean[j]) / std[j] } else { 0.0 })
            .collect()
    };

    let mut centroids = vec![vec![0.0; kept.len()]; n_labels];
    let mut counts = vec![0usize; n_labels];
    for &i in &train {
        let l = t.rows[i].label;
        counts[l] += 1;
        for (c, x) in centroids[l].iter_mut().zip(z(&vecs[i])) {
            *c += x;
        }
    }
    for (c, &n) in centroids.iter_mut().zip(&counts) {
        c.iter_mut().for_each(|x| *x /= n as f64);
    }

    let mut confusion = vec![vec![0usize; n_labels]; n_labels];
    for (i, row) in t.rows.iter().enumerate() {
        if row.split != Split::Test {
            continue;
        }
        let x = z(&vecs[i]);
        let predicted = (0..n_labels)
            .map(|l| {
                let d: f64 = x.iter().zip(&centroids[l]).map(|(a, b)| (a - b).powi(2)).sum();
                (d, l)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .expect("at least two labels")
            .1;
        confusion[row.label][predicted] += 1;
    }
    let total: usize = confusion.iter().flatten().sum();
    let diag: usize = (0..n_labels).map(|l| confusion[l][l]).sum();
    let per_label_accuracy = confusion
        .iter()
        .enumerate()
        .map(|(l, r)| {
            let n: usize = r.iter().sum();
            if n == 0 { f64::NAN } else { r[l] as f64 / n as f64 }
        })
        .collect();
    Ok(SmokeReport {
        label_names: t.label_names.clone(),
        per_label_accuracy,
        overall_accuracy: if total == 0 { f64::NAN } else { diag as f64 / total as f64 },
        confusion,
        excluded_columns: excluded,
    })
}

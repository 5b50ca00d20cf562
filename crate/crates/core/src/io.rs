//! Graph file formats: whitespace edge lists, JSON-lines datasets, split
//! directories and graph6 strings.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDataset};

/// Parses `u v` lines with an optional leading `n <count>` header. Blank lines
/// and `#` comments are skipped. Without a header the vertex count is
/// `max id + 1`.
pub fn parse_edge_list(text: impl Read) -> Result<Graph> {
    let reader = BufReader::new(text);
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen_edge = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let bad = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if tokens[0] == "n" {
            if seen_edge || declared.is_some() {
                return Err(bad("vertex-count header must precede all edges".into()));
            }
            if tokens.len() != 2 {
                return Err(bad(format!("expected `n <count>`, got {body:?}")));
            }
            declared = Some(
                tokens[1]
                    .parse()
                    .map_err(|_| bad(format!("invalid vertex count {:?}", tokens[1])))?,
            );
            continue;
        }
        if tokens.len() != 2 {
            return Err(bad(format!("expected two vertex ids, got {body:?}")));
        }
        let parse = |t: &str| -> Result<usize> {
            t.parse()
                .map_err(|_| bad(format!("invalid vertex id {t:?}")))
        };
        let (u, v) = (parse(tokens[0])?, parse(tokens[1])?);
        if u == v {
            return Err(Error::SelfLoop {
                line: line_no,
                vertex: u,
            });
        }
        if let Some(n) = declared {
            if u >= n || v >= n {
                return Err(bad(format!("vertex id out of range for n = {n}")));
            }
        }
        seen_edge = true;
        edges.push((u, v));
    }
    let n = declared.unwrap_or_else(|| {
        edges
            .iter()
            .map(|&(u, v)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
    });
    Graph::new(n, edges)
}

/// One line of a JSON-lines dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphRecord {
    pub id: String,
    pub num_nodes: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_features: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_features: Option<Vec<Vec<f64>>>,
    /// Optional prediction target(s), passed through to feature tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Target>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Scalar(f64),
    Vector(Vec<f64>),
}

fn rows_to_matrix(id: &str, what: &'static str, rows: Vec<Vec<f64>>) -> Result<DMatrix<f64>> {
    let width = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != width) {
        return Err(Error::Dimension {
            graph_id: id.to_string(),
            what,
            expected: width,
            actual: bad.len(),
        });
    }
    Ok(DMatrix::from_fn(rows.len(), width, |i, j| rows[i][j]))
}

fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl GraphRecord {
    pub fn into_graph(self) -> Result<Graph> {
        let id = self.id;
        let x = self
            .node_features
            .map(|r| rows_to_matrix(&id, "node_features", r))
            .transpose()?;
        let e = self
            .edge_features
            .map(|r| rows_to_matrix(&id, "edge_features", r))
            .transpose()?;
        let edges = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let mut g = Graph::with_features(id, self.num_nodes, edges, x, e)?;
        g.set_target(self.y.map(|t| match t {
            Target::Scalar(v) => vec![v],
            Target::Vector(v) => v,
        }));
        Ok(g)
    }

    pub fn from_graph(g: &Graph) -> Self {
        Self {
            id: g.id().to_string(),
            num_nodes: g.num_vertices(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            node_features: g.node_features().map(matrix_to_rows),
            edge_features: g.edge_features().map(matrix_to_rows),
            y: g.target().map(|t| Target::Vector(t.to_vec())),
        }
    }
}

/// Reads one graph per non-blank line, preserving line order.
pub fn parse_jsonl_dataset(stream: impl Read) -> Result<GraphDataset> {
    let mut graphs = Vec::new();
    for (idx, line) in BufReader::new(stream).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: GraphRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        graphs.push(record.into_graph()?);
    }
    GraphDataset::new("", graphs)
}

pub fn write_jsonl_dataset(ds: &GraphDataset, mut out: impl Write) -> Result<()> {
    for g in ds.graphs() {
        serde_json::to_writer(&mut out, &GraphRecord::from_graph(g))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Loads either a single `.jsonl` file or a split directory. The dataset is
/// named after the file stem (or directory name).
pub fn load_dataset(path: impl AsRef<Path>) -> Result<GraphDataset> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut ds = if path.is_dir() {
        load_split_dir(path)?.combined()?
    } else {
        parse_jsonl_dataset(File::open(path)?)?
    };
    ds.name = name;
    ds.source_path = path.display().to_string();
    Ok(ds)
}

pub const SPLIT_NAMES: [&str; 3] = ["train", "val", "test"];

/// A dataset stored as `<name>/{train,val,test}.jsonl`; any split may be absent.
#[derive(Debug, Clone, Default)]
pub struct SplitDataset {
    pub name: String,
    pub splits: Vec<(String, GraphDataset)>,
}

impl SplitDataset {
    /// Concatenates the present splits in train/val/test order. Graph ids
    /// are prefixed with `<split>/` so they stay unique.
    pub fn combined(self) -> Result<GraphDataset> {
        let mut graphs = Vec::new();
        for (split, ds) in self.splits {
            for mut g in ds.into_graphs() {
                let id = format!("{split}/{}", g.id());
                g.set_id(id);
                graphs.push(g);
            }
        }
        GraphDataset::new(self.name, graphs)
    }
}

pub fn load_split_dir(dir: impl AsRef<Path>) -> Result<SplitDataset> {
    let dir = dir.as_ref();
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut splits = Vec::new();
    for split in SPLIT_NAMES {
        let file = dir.join(format!("{split}.jsonl"));
        if file.exists() {
            let mut ds = parse_jsonl_dataset(File::open(&file)?)?;
            ds.name = format!("{name}/{split}");
            ds.source_path = file.display().to_string();
            splits.push((split.to_string(), ds));
        }
    }
    Ok(SplitDataset { name, splits })
}

/// Decodes a graph6 string (the format used by nauty and by the pair
/// benchmark distributions).
pub fn parse_graph6(s: &str) -> Result<Graph> {
    let bad = |message: &str| Error::Parse {
        line: 0,
        message: format!("graph6: {message}"),
    };
    let s = s.trim().strip_prefix(">>graph6<<").unwrap_or(s.trim());
    let bytes: Vec<u8> = s.bytes().collect();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("byte outside 63..=126"));
    }
    let vals: Vec<usize> = bytes.iter().map(|&b| usize::from(b - 63)).collect();
    let (n, rest) = match vals.as_slice() {
        [] => return Err(bad("empty string")),
        [63, 63, tail @ ..] if tail.len() >= 6 => {
            (tail[..6].iter().fold(0, |acc, &v| (acc << 6) | v), &tail[6..])
        }
        [63, tail @ ..] if tail.len() >= 3 => {
            (tail[..3].iter().fold(0, |acc, &v| (acc << 6) | v), &tail[3..])
        }
        [first, tail @ ..] => (*first, tail),
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if rest.len() < needed {
        return Err(bad("truncated adjacency bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let bit = (rest[k / 6] >> (5 - k % 6)) & 1;
            if bit == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::new(n, edges)
}

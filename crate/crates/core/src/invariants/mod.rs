//! Graph invariants, grouped by family.
//!
//! Each family module exposes plain functions over a [`GraphContext`], which
//! lazily caches intermediates shared between invariants (distances,
//! spectra, the Laplacian pseudoinverse, curvature distributions). Building
//! a context is cheap; nothing is computed until first use.

use std::cell::OnceCell;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::graph::{bfs_all_pairs, connected_components, DistanceMatrix, Graph};
use crate::linalg::{self, Spectrum, SymMatrix};

pub mod basic;
pub mod entropy;
pub mod indices;
pub mod topo;

pub use topo::EdgeDistribution;

/// Why a single invariant could not be evaluated on a graph.
///
/// A failure may carry a `sentinel` that is written in place of NaN (the
/// log spanning-tree count of a disconnected graph uses −1).
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub reason: String,
    pub sentinel: Option<f64>,
}

impl Failure {
    pub fn new(reason: impl Into<String>) -> Self {
        Self {
            reason: reason.into(),
            sentinel: None,
        }
    }

    pub fn with_sentinel(reason: impl Into<String>, sentinel: f64) -> Self {
        Self {
            reason: reason.into(),
            sentinel: Some(sentinel),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reason)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::new(e.to_string())
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    Failed(String),
}

impl Status {
    pub fn is_ok(&self) -> bool {
        matches!(self, Status::Ok)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Ok => f.write_str("ok"),
            Status::Failed(reason) => write!(f, "failed({reason})"),
        }
    }
}

/// A named, fixed-width invariant result.
///
/// Failed values are never coerced to zero: they hold NaN (or the
/// failure's sentinel) in every component.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantValue {
    pub name: String,
    pub values: Vec<f64>,
    pub status: Status,
}

impl InvariantValue {
    pub fn ok(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
            status: Status::Ok,
        }
    }

    pub fn failed(name: impl Into<String>, width: usize, failure: &Failure) -> Self {
        Self {
            name: name.into(),
            values: vec![failure.sentinel.unwrap_or(f64::NAN); width],
            status: Status::Failed(failure.reason.clone()),
        }
    }

    pub fn from_outcome(name: impl Into<String>, width: usize, outcome: Outcome<Vec<f64>>) -> Self {
        match outcome {
            Ok(values) => {
                debug_assert_eq!(values.len(), width);
                Self::ok(name, values)
            }
            Err(f) => Self::failed(name, width, &f),
        }
    }
}

/// Tunable parameters shared by the invariant families.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    /// Magnitude scale, `0 < q < 1`.
    pub q: f64,
    /// Laziness of the random walk used by Ollivier–Ricci curvature.
    pub alpha: f64,
    /// Highest simplex dimension entering analytic torsion.
    pub torsion_dim: usize,
    /// Number of smallest and of largest normalized-Laplacian eigenvalues kept.
    pub spectrum_k: usize,
    /// Exponents of the general Randić index, one invariant each.
    pub randic_exponents: Vec<f64>,
    /// Emit `ln(1 + count)` instead of raw homomorphism counts.
    pub hom_log1p: bool,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            q: (-0.42f64).exp(),
            alpha: 0.5,
            torsion_dim: 2,
            spectrum_k: 8,
            randic_exponents: vec![-1.0, 0.5],
            hom_log1p: false,
        }
    }
}

/// A graph plus lazily computed shared intermediates.
pub struct GraphContext<'g> {
    graph: &'g Graph,
    degrees: OnceCell<Vec<usize>>,
    components: OnceCell<(usize, Vec<usize>)>,
    distances: OnceCell<DistanceMatrix>,
    lsym_spectrum: OnceCell<Outcome<Spectrum>>,
    laplacian_spectrum: OnceCell<Outcome<Spectrum>>,
    adjacency_spectrum: OnceCell<Outcome<Spectrum>>,
    laplacian_pinv: OnceCell<Outcome<DMatrix<f64>>>,
    forman: OnceCell<Outcome<EdgeDistribution>>,
    ollivier: OnceCell<(f64, Outcome<EdgeDistribution>)>,
}

impl<'g> GraphContext<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            degrees: OnceCell::new(),
            components: OnceCell::new(),
            distances: OnceCell::new(),
            lsym_spectrum: OnceCell::new(),
            laplacian_spectrum: OnceCell::new(),
            adjacency_spectrum: OnceCell::new(),
            laplacian_pinv: OnceCell::new(),
            forman: OnceCell::new(),
            ollivier: OnceCell::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn degrees(&self) -> &[usize] {
        self.degrees
            .get_or_init(|| crate::graph::degree_vector(self.graph))
    }

    pub fn num_components(&self) -> usize {
        self.components
            .get_or_init(|| connected_components(self.graph))
            .0
    }

    pub fn distances(&self) -> &DistanceMatrix {
        self.distances.get_or_init(|| bfs_all_pairs(self.graph))
    }

    /// Unnormalized Laplacian `L = D − A`.
    pub fn laplacian(&self) -> SymMatrix {
        let n = self.n();
        let d = DVector::from_fn(n, |i, _| self.degrees()[i] as f64);
        SymMatrix::new(DMatrix::from_diagonal(&d) - self.graph.adjacency())
    }

    /// Symmetrically normalized Laplacian `D^{-1/2} L D^{-1/2}`, with
    /// `D^{-1/2}` zero on isolated vertices (their rows and columns vanish).
    pub fn normalized_laplacian(&self) -> SymMatrix {
        let n = self.n();
        let inv_sqrt: Vec<f64> = self
            .degrees()
            .iter()
            .map(|&d| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() })
            .collect();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            if self.degrees()[i] > 0 {
                m[(i, i)] = 1.0;
            }
        }
        for &(u, v) in self.graph.edges() {
            let w = -inv_sqrt[u] * inv_sqrt[v];
            m[(u, v)] = w;
            m[(v, u)] = w;
        }
        SymMatrix::new(m)
    }

    pub fn normalized_laplacian_spectrum(&self) -> Outcome<&Spectrum> {
        self.lsym_spectrum
            .get_or_init(|| Ok(linalg::eigenvalues_sym(&self.normalized_laplacian())?))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn laplacian_spectrum(&self) -> Outcome<&Spectrum> {
        self.laplacian_spectrum
            .get_or_init(|| Ok(linalg::eigenvalues_sym(&self.laplacian())?))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn adjacency_spectrum(&self) -> Outcome<&Spectrum> {
        self.adjacency_spectrum
            .get_or_init(|| Ok(linalg::eigenvalues_sym(&SymMatrix::new(self.graph.adjacency()))?))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn laplacian_pinv(&self) -> Outcome<&DMatrix<f64>> {
        self.laplacian_pinv
            .get_or_init(|| Ok(linalg::pseudoinverse(&self.laplacian(), None)?.into_matrix()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn forman(&self) -> Outcome<&EdgeDistribution> {
        self.forman
            .get_or_init(|| topo::forman_ricci(self))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Ollivier–Ricci distribution; cached for the first `alpha` requested.
    pub fn ollivier(&self, alpha: f64) -> Outcome<EdgeDistribution> {
        let (cached_alpha, result) = self
            .ollivier
            .get_or_init(|| (alpha, topo::ollivier_ricci(self, alpha)));
        if *cached_alpha == alpha {
            result.clone()
        } else {
            topo::ollivier_ricci(self, alpha)
        }
    }
}

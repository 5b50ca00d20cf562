//! Clique complex, boundary matrices and analytic torsion.

use nalgebra::DMatrix;

use crate::graph::Graph;
use crate::invariants::{Failure, Outcome};
use crate::linalg::{self, SymMatrix};

/// Simplices of the clique complex by dimension, each a sorted vertex list,
/// listed in lexicographic order.
#[derive(Debug, Clone)]
pub struct SimplicialSkeleton {
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialSkeleton {
    /// All cliques with at most `max_dim + 1` vertices.
    pub fn clique_complex(g: &Graph, max_dim: usize) -> Self {
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![(0..g.num_vertices()).map(|v| vec![v]).collect()];
        for p in 1..=max_dim {
            let mut next = Vec::new();
            for s in &simplices[p - 1] {
                let last = *s.last().expect("simplices are non-empty");
                // Extend by a common neighbour larger than every current vertex.
                for &w in g.neighbours(last) {
                    if w > last && s.iter().all(|&u| g.has_edge(u, w)) {
                        let mut t = s.clone();
                        t.push(w);
                        next.push(t);
                    }
                }
            }
            next.sort();
            if next.is_empty() {
                simplices.push(next);
                break;
            }
            simplices.push(next);
        }
        while simplices.len() < max_dim + 1 {
            simplices.push(Vec::new());
        }
        Self { simplices }
    }

    pub fn max_dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.simplices.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, p: usize) -> usize {
        self.simplices(p).len()
    }

    /// Nonzero entries of `B_p` column by column: for each `p`-simplex, the
    /// row of its `k`-th face and the sign `(−1)^k`.
    fn faces(&self, p: usize) -> Vec<Vec<(usize, f64)>> {
        let faces = self.simplices(p - 1);
        self.simplices(p)
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|k| {
                        let mut face = s.clone();
                        face.remove(k);
                        let r = faces.binary_search(&face).expect("faces of a clique are cliques");
                        (r, if k % 2 == 0 { 1.0 } else { -1.0 })
                    })
                    .collect()
            })
            .collect()
    }

    /// `B_p`: rows index `(p−1)`-simplices, columns index `p`-simplices.
    /// Removing the `k`-th vertex of a sorted simplex gives sign `(−1)^k`.
    /// `B_0` is the `0 × n_V` matrix.
    pub fn boundary(&self, p: usize) -> DMatrix<f64> {
        if p == 0 {
            return DMatrix::zeros(0, self.count(0));
        }
        let mut b = DMatrix::zeros(self.count(p - 1), self.count(p));
        for (c, col) in self.faces(p).iter().enumerate() {
            for &(r, sign) in col {
                b[(r, c)] = sign;
            }
        }
        b
    }

    /// Hodge Laplacian `L_p = B_pᵀ B_p + B_{p+1} B_{p+1}ᵀ`. The up term is
    /// omitted when `p` is the top dimension of the skeleton. Assembled from
    /// the sparse boundary columns.
    pub fn hodge_laplacian(&self, p: usize) -> SymMatrix {
        let mut l = DMatrix::zeros(self.count(p), self.count(p));
        if p > 0 {
            // (B_pᵀ B_p)_{ab} = Σ_r B_{ra} B_{rb}: group columns by shared face.
            let mut cofaces: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.count(p - 1)];
            for (c, col) in self.faces(p).iter().enumerate() {
                for &(r, sign) in col {
                    cofaces[r].push((c, sign));
                }
            }
            for list in &cofaces {
                for &(a, sa) in list {
                    for &(b, sb) in list {
                        l[(a, b)] += sa * sb;
                    }
                }
            }
        }
        if p < self.max_dim() {
            for col in self.faces(p + 1) {
                for &(a, sa) in &col {
                    for &(b, sb) in &col {
                        l[(a, b)] += sa * sb;
                    }
                }
            }
        }
        SymMatrix::new(l)
    }
}

/// `Π_{p=1}^{P} pdet(L_p)^{p(−1)^{p+1}}` on the clique complex, accumulated
/// in log space. `L_P` includes the coboundary from `(P+1)`-cliques.
pub fn analytic_torsion(g: &Graph, dim: usize) -> Outcome<f64> {
    let skeleton = SimplicialSkeleton::clique_complex(g, dim + 1);
    let mut log_torsion = 0.0;
    for p in 1..=dim {
        if skeleton.count(p) == 0 {
            break;
        }
        let (log_det, _) = linalg::log_pseudo_determinant(&skeleton.hodge_laplacian(p), None)
            .map_err(|e| Failure::new(e.to_string()))?;
        let sign = if p % 2 == 1 { 1.0 } else { -1.0 };
        log_torsion += p as f64 * sign * log_det;
    }
    Ok(log_torsion.exp())
}

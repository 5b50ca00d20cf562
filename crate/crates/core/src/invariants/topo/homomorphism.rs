//! Homomorphism counts from every connected pattern with at most five
//! vertices.
//!
//! Counts use variable elimination over the pattern: each pattern vertex is
//! summed out in turn, producing sparse intermediate tables keyed by the
//! images of the remaining vertices. The elimination order is fixed per
//! pattern to minimize the largest intermediate scope, which makes this a
//! dynamic program over a tree decomposition of the pattern.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::graph::Graph;
use crate::invariants::{Failure, Outcome};

const MAX_PATTERN: usize = 5;
const UNSET: u32 = u32::MAX;

type Key = [u32; MAX_PATTERN];

/// A small connected graph on vertices `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    order: usize,
    edges: Vec<(usize, usize)>,
    code: u16,
    elimination: Vec<usize>,
}

impl Pattern {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Canonical code: smallest upper-triangle edge bitmask over all
    /// relabelings.
    pub fn code(&self) -> u16 {
        self.code
    }

    /// Short stable label, e.g. `v4e3c11`.
    pub fn label(&self) -> String {
        format!("v{}e{}c{}", self.order, self.edges.len(), self.code)
    }

    pub fn to_graph(&self) -> Graph {
        Graph::new(self.order, self.edges.iter().copied()).expect("catalog patterns are simple")
    }
}

fn pair_index(k: usize, i: usize, j: usize) -> usize {
    // Position of (i, j), i < j, in row-major upper-triangle order on k vertices.
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

fn mask_edges(k: usize, mask: u16) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if mask >> pair_index(k, i, j) & 1 == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn canonical_code(k: usize, mask: u16, perms: &[Vec<usize>]) -> u16 {
    let edges = mask_edges(k, mask);
    perms
        .iter()
        .map(|p| {
            edges.iter().fold(0u16, |acc, &(u, v)| {
                let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                acc | 1 << pair_index(k, a, b)
            })
        })
        .min()
        .expect("at least one permutation")
}

fn is_connected(k: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Picks the elimination order minimizing the largest intermediate scope,
/// then the total scope size.
fn best_elimination(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<((usize, usize), Vec<usize>)> = None;
    for order in perms {
        let mut scopes: Vec<u8> = edges.iter().map(|&(a, b)| 1 << a | 1 << b).collect();
        let (mut worst, mut total) = (0usize, 0usize);
        for &x in order {
            let bit = 1u8 << x;
            let mut merged = 0u8;
            scopes.retain(|&s| {
                if s & bit != 0 {
                    merged |= s;
                    false
                } else {
                    true
                }
            });
            merged &= !bit;
            let size = merged.count_ones() as usize;
            worst = worst.max(size);
            total += size;
            if merged != 0 {
                scopes.push(merged);
            }
        }
        let cost = (worst, total);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, order.clone()));
        }
    }
    best.expect("at least one permutation").1
}

/// The 31 connected graphs with 1 to 5 vertices, one per isomorphism class,
/// ordered by vertex count, then edge count, then canonical code.
#[derive(Debug, Clone)]
pub struct PatternCatalog {
    patterns: Vec<Pattern>,
}

impl PatternCatalog {
    pub fn build() -> Self {
        let mut patterns = Vec::new();
        for k in 1..=MAX_PATTERN {
            let perms = permutations(k);
            let pairs = k * (k - 1) / 2;
            let mut codes: Vec<u16> = (0..1u32 << pairs)
                .map(|m| m as u16)
                .filter(|&m| is_connected(k, &mask_edges(k, m)))
                .map(|m| canonical_code(k, m, &perms))
                .collect();
            codes.sort_unstable();
            codes.dedup();
            for code in codes {
                let edges = mask_edges(k, code);
                let elimination = best_elimination(&edges, &perms);
                patterns.push(Pattern {
                    order: k,
                    edges,
                    code,
                    elimination,
                });
            }
        }
        patterns.sort_by_key(|p| (p.order, p.edges.len(), p.code));
        Self { patterns }
    }

    /// Process-wide shared instance.
    pub fn shared() -> &'static PatternCatalog {
        static CATALOG: OnceLock<PatternCatalog> = OnceLock::new();
        CATALOG.get_or_init(PatternCatalog::build)
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

enum Factor {
    Edge(usize, usize),
    Table { scope: Vec<usize>, table: HashMap<Key, u128> },
}

impl Factor {
    fn mentions(&self, x: usize) -> bool {
        match self {
            Factor::Edge(a, b) => *a == x || *b == x,
            Factor::Table { scope, .. } => scope.contains(&x),
        }
    }
}

fn scope_key(scope: &[usize], assign: &Key) -> Key {
    let mut key = [UNSET; MAX_PATTERN];
    for &v in scope {
        key[v] = assign[v];
    }
    key
}

struct Join<'a> {
    g: &'a Graph,
    factors: &'a [Factor],
    order: Vec<usize>,
    out_scope: Vec<usize>,
    out: HashMap<Key, u128>,
    overflow: bool,
}

impl Join<'_> {
    /// Multiplies in every factor whose scope was completed by assigning
    /// `v`; `None` when the partial assignment has weight zero.
    fn weight_for(&self, v: usize, assign: &Key, weight: u128) -> Option<u128> {
        let mut w = weight;
        for f in self.factors {
            match f {
                Factor::Edge(a, b) => {
                    if (*a == v || *b == v) && assign[*a] != UNSET && assign[*b] != UNSET
                        && !self.g.has_edge(assign[*a] as usize, assign[*b] as usize) {
                            return None;
                        }
                }
                Factor::Table { scope, table } => {
                    if scope.contains(&v) && scope.iter().all(|&s| assign[s] != UNSET) {
                        let t = *table.get(&scope_key(scope, assign))?;
                        w = w.saturating_mul(t);
                    }
                }
            }
        }
        Some(w)
    }

    fn extend(&mut self, depth: usize, assign: &mut Key, weight: u128) {
        if depth == self.order.len() {
            let key = scope_key(&self.out_scope, assign);
            let slot = self.out.entry(key).or_insert(0);
            match slot.checked_add(weight) {
                Some(s) => *slot = s,
                None => self.overflow = true,
            }
            return;
        }
        let v = self.order[depth];
        let anchor = self.factors.iter().find_map(|f| match f {
            Factor::Edge(a, b) if *a == v && assign[*b] != UNSET => Some(assign[*b]),
            Factor::Edge(a, b) if *b == v && assign[*a] != UNSET => Some(assign[*a]),
            _ => None,
        });
        let candidates: Vec<usize> = match anchor {
            Some(u) => self.g.neighbours(u as usize).to_vec(),
            None => (0..self.g.num_vertices()).collect(),
        };
        for c in candidates {
            assign[v] = c as u32;
            if let Some(w) = self.weight_for(v, assign, weight) {
                self.extend(depth + 1, assign, w);
            }
        }
        assign[v] = UNSET;
    }
}

/// Sums out `x` from the product of `factors`.
fn eliminate(g: &Graph, factors: Vec<Factor>, x: usize) -> Outcome<Factor> {
    let mut vars: Vec<usize> = Vec::new();
    for f in &factors {
        match f {
            Factor::Edge(a, b) => vars.extend([*a, *b]),
            Factor::Table { scope, .. } => vars.extend(scope),
        }
    }
    vars.push(x);
    vars.sort_unstable();
    vars.dedup();
    let out_scope: Vec<usize> = vars.iter().copied().filter(|&v| v != x).collect();

    // Seed with the largest table, then add variables reachable by pattern
    // edges first so candidates come from neighbour lists.
    let seed = factors
        .iter()
        .enumerate()
        .filter_map(|(i, f)| match f {
            Factor::Table { table, .. } => Some((table.len(), i)),
            Factor::Edge(..) => None,
        })
        .max()
        .map(|(_, i)| i);
    let mut order: Vec<usize> = Vec::new();
    if let Some(i) = seed {
        if let Factor::Table { scope, .. } = &factors[i] {
            order.extend(scope);
        }
    }
    while order.len() < vars.len() {
        let next = vars
            .iter()
            .copied()
            .filter(|v| !order.contains(v))
            .find(|&v| {
                factors.iter().any(|f| match f {
                    Factor::Edge(a, b) => (*a == v && order.contains(b)) || (*b == v && order.contains(a)),
                    Factor::Table { .. } => false,
                })
            })
            .or_else(|| vars.iter().copied().find(|v| !order.contains(v)))
            .expect("unordered variable remains");
        order.push(next);
    }

    let mut join = Join {
        g,
        factors: &factors,
        order: Vec::new(),
        out_scope: out_scope.clone(),
        out: HashMap::new(),
        overflow: false,
    };
    let mut assign = [UNSET; MAX_PATTERN];
    match seed {
        Some(i) => {
            let Factor::Table { scope, table } = &factors[i] else { unreachable!() };
            join.order = order[scope.len()..].to_vec();
            for (key, &w) in table {
                for &s in scope {
                    assign[s] = key[s];
                }
                // Other factors fully covered by the seed scope.
                let mut weight = Some(w);
                for (j, f) in factors.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    let covered = match f {
                        Factor::Edge(a, b) => scope.contains(a) && scope.contains(b),
                        Factor::Table { scope: s2, .. } => s2.iter().all(|v| scope.contains(v)),
                    };
                    if !covered {
                        continue;
                    }
                    weight = weight.and_then(|wt| match f {
                        Factor::Edge(a, b) => g
                            .has_edge(assign[*a] as usize, assign[*b] as usize)
                            .then_some(wt),
                        Factor::Table { scope: s2, table: t2 } => t2
                            .get(&scope_key(s2, &assign))
                            .map(|&t| wt.saturating_mul(t)),
                    });
                }
                if let Some(wt) = weight {
                    join.extend(0, &mut assign, wt);
                }
                for &s in scope {
                    assign[s] = UNSET;
                }
            }
        }
        None => {
            join.order = order;
            join.extend(0, &mut assign, 1);
        }
    }
    if join.overflow || join.out.values().any(|&v| v == u128::MAX) {
        return Err(Failure::new("homomorphism count overflow"));
    }
    Ok(Factor::Table {
        scope: out_scope,
        table: join.out,
    })
}

/// Cliques on `k` vertices, each counted once.
fn count_cliques(g: &Graph, k: usize) -> u128 {
    fn extend(g: &Graph, clique: &mut Vec<usize>, k: usize) -> u128 {
        if clique.len() == k {
            return 1;
        }
        let last = *clique.last().expect("seeded with one vertex");
        let mut total = 0;
        for &w in g.neighbours(last) {
            if w > last && clique.iter().all(|&u| g.has_edge(u, w)) {
                clique.push(w);
                total += extend(g, clique, k);
                clique.pop();
            }
        }
        total
    }
    (0..g.num_vertices()).map(|v| extend(g, &mut vec![v], k)).sum()
}

/// `|hom(F, G)|`, exact.
pub fn count_homomorphisms(pattern: &Pattern, g: &Graph) -> Outcome<u64> {
    let k = pattern.order();
    if k >= 2 && pattern.edges.len() == k * (k - 1) / 2 {
        // Maps of a complete pattern are injective: k! per clique.
        let ordered = count_cliques(g, k) * (1..=k as u128).product::<u128>();
        return u64::try_from(ordered).map_err(|_| Failure::new("homomorphism count exceeds 64 bits"));
    }
    let mut factors: Vec<Factor> = pattern.edges.iter().map(|&(a, b)| Factor::Edge(a, b)).collect();
    for &x in &pattern.elimination {
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.mentions(x));
        factors = rest;
        factors.push(eliminate(g, touching, x)?);
    }
    let mut total: u128 = 1;
    for f in &factors {
        let Factor::Table { table, .. } = f else {
            unreachable!("every edge factor mentions an eliminated vertex")
        };
        let v = table.get(&[UNSET; MAX_PATTERN]).copied().unwrap_or(0);
        total = total.checked_mul(v).ok_or_else(|| Failure::new("homomorphism count overflow"))?;
    }
    u64::try_from(total).map_err(|_| Failure::new("homomorphism count exceeds 64 bits"))
}

/// Counts for every pattern of the shared catalog, in catalog order.
pub fn homomorphism_counts(g: &Graph) -> Outcome<Vec<u64>> {
    PatternCatalog::shared()
        .patterns()
        .iter()
        .map(|p| count_homomorphisms(p, g))
        .collect()
}

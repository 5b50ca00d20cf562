//! Exact earth mover's distance between two discrete measures.
//!
//! The transportation LP is solved as a min-cost flow with the primal–dual
//! method: shortest-path potentials from Bellman–Ford, then a blocking flow
//! (Dinic) on the admissible subgraph, repeated until the supply is routed.
//! Every phase strictly increases the source–sink distance, so the loop is
//! finite for real-valued masses.

use std::collections::VecDeque;

use crate::error::{Error, Result};

const CAP_EPS: f64 = 1e-15;
const COST_EPS: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
    cost: f64,
    rev: usize,
}

struct Network {
    adj: Vec<Vec<Arc>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: f64, cost: f64) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Arc {
            to,
            cap,
            cost,
            rev: rev_from,
        });
        self.adj[to].push(Arc {
            to: from,
            cap: 0.0,
            cost: -cost,
            rev: rev_to,
        });
    }

    fn shortest_distances(&self, s: usize) -> Vec<f64> {
        let n = self.adj.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut in_queue = vec![false; n];
        let mut queue = VecDeque::new();
        dist[s] = 0.0;
        queue.push_back(s);
        in_queue[s] = true;
        while let Some(u) = queue.pop_front() {
            in_queue[u] = false;
            for a in &self.adj[u] {
                if a.cap > CAP_EPS && dist[u] + a.cost < dist[a.to] - COST_EPS {
                    dist[a.to] = dist[u] + a.cost;
                    if !in_queue[a.to] {
                        in_queue[a.to] = true;
                        queue.push_back(a.to);
                    }
                }
            }
        }
        dist
    }

    fn admissible(&self, dist: &[f64], u: usize, a: &Arc) -> bool {
        a.cap > CAP_EPS && (dist[u] + a.cost - dist[a.to]).abs() <= COST_EPS
    }

    /// Dinic blocking flows restricted to admissible arcs.
    fn max_admissible_flow(&mut self, dist: &[f64], s: usize, t: usize) -> f64 {
        let n = self.adj.len();
        let mut total = 0.0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for a in &self.adj[u] {
                    if level[a.to] == usize::MAX && self.admissible(dist, u, a) {
                        level[a.to] = level[u] + 1;
                        queue.push_back(a.to);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; n];
            loop {
                let pushed = self.augment(dist, &level, &mut next, s, t, f64::INFINITY);
                if pushed <= CAP_EPS {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(
        &mut self,
        dist: &[f64],
        level: &[usize],
        next: &mut [usize],
        u: usize,
        t: usize,
        limit: f64,
    ) -> f64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let i = next[u];
            let a = self.adj[u][i].clone();
            if level[a.to] == level[u] + 1 && self.admissible(dist, u, &a) {
                let pushed = self.augment(dist, level, next, a.to, t, limit.min(a.cap));
                if pushed > CAP_EPS {
                    self.adj[u][i].cap -= pushed;
                    self.adj[a.to][a.rev].cap += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0.0
    }
}

/// Optimal transport cost between `supply` and `demand` (equal total mass)
/// under ground cost `cost(i, j)`.
pub fn wasserstein_1(
    supply: &[f64],
    demand: &[f64],
    cost: impl Fn(usize, usize) -> f64,
) -> Result<f64> {
    let (m, k) = (supply.len(), demand.len());
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if (total_s - total_d).abs() > 1e-9 * total_s.abs().max(1.0)
        || supply.iter().chain(demand).any(|&x| x < 0.0 || !x.is_finite())
    {
        return Err(Error::Config(
            "transport needs nonnegative measures of equal mass".into(),
        ));
    }
    let (s, t) = (m + k, m + k + 1);
    let mut net = Network::new(m + k + 2);
    for (i, &a) in supply.iter().enumerate() {
        net.add(s, i, a, 0.0);
    }
    for (j, &b) in demand.iter().enumerate() {
        net.add(m + j, t, b, 0.0);
    }
    for i in 0..m {
        for j in 0..k {
            net.add(i, m + j, f64::INFINITY, cost(i, j));
        }
    }
    let mut routed = 0.0;
    // Each phase raises the s-t distance; the number of distinct distances
    // is bounded by the number of simple paths, far above what we ever hit.
    for _ in 0..(4 * (m + k + 2) * (m + k + 2) + 16) {
        if routed >= total_s - 1e-12 * total_s.max(1.0) {
            break;
        }
        let dist = net.shortest_distances(s);
        if !dist[t].is_finite() {
            break;
        }
        let pushed = net.max_admissible_flow(&dist, s, t);
        if pushed <= CAP_EPS {
            break;
        }
        routed += pushed;
    }
    if routed < total_s - 1e-9 * total_s.max(1.0) {
        return Err(Error::Config("transport solver failed to route all mass".into()));
    }
    let mut total_cost = 0.0;
    for i in 0..m {
        for a in &net.adj[i] {
            if a.to >= m && a.to < m + k {
                // Flow on a middle arc equals the residual of its reverse arc.
                let flow = net.adj[a.to][a.rev].cap;
                total_cost += flow * a.cost;
            }
        }
    }
    Ok(total_cost)
}

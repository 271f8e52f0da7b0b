//! Successive-shortest-path min-cost flow with rational capacities and
//! floating-point costs. Shortest paths use Bellman–Ford; among equal-cost
//! paths the one found first in edge-index order wins.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::numeric::Rational;

const SLACK: f64 = 1e-12;

struct Arc {
    to: usize,
    cap: Option<Rational>,
    cost: f64,
    flow: Rational,
}

pub(crate) struct FlowNetwork {
    nodes: usize,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { nodes, arcs: Vec::new() }
    }

    /// Adds `from → to`; `None` capacity is unbounded. Returns the arc id.
    pub fn add(&mut self, from: usize, to: usize, cap: Option<Rational>, cost: f64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, cost, flow: Rational::zero() });
        self.arcs.push(Arc { to: from, cap: Some(Rational::zero()), cost: -cost, flow: Rational::zero() });
        id
    }

    pub fn flow(&self, id: usize) -> &Rational {
        &self.arcs[id].flow
    }

    fn residual(&self, id: usize) -> Option<Rational> {
        let arc = &self.arcs[id];
        if id % 2 == 1 {
            // Reverse arc: may undo the forward flow.
            Some(self.arcs[id - 1].flow.clone())
        } else {
            arc.cap.as_ref().map(|c| c - &arc.flow)
        }
    }

    fn tail(&self, id: usize) -> usize {
        self.arcs[id ^ 1].to
    }

    /// Pushes the maximum flow from `s` to `t` at minimum cost.
    pub fn run(&mut self, s: usize, t: usize) {
        loop {
            let mut dist = vec![f64::INFINITY; self.nodes];
            let mut via: Vec<Option<usize>> = vec![None; self.nodes];
            dist[s] = 0.0;
            for _ in 0..self.nodes {
                let mut changed = false;
                for id in 0..self.arcs.len() {
                    let u = self.tail(id);
                    if dist[u].is_infinite() {
                        continue;
                    }
                    if let Some(r) = self.residual(id) {
                        if !r.is_positive() {
                            continue;
                        }
                    }
                    let v = self.arcs[id].to;
                    let candidate = dist[u] + self.arcs[id].cost;
                    if candidate < dist[v] - SLACK {
                        dist[v] = candidate;
                        via[v] = Some(id);
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            if via[t].is_none() {
                return;
            }
            let mut path = Vec::new();
            let mut v = t;
            while v != s {
                let id = via[v].expect("path reaches the source");
                path.push(id);
                v = self.tail(id);
                if path.len() > self.arcs.len() {
                    return;
                }
            }
            let bottleneck = path.iter().filter_map(|&id| self.residual(id)).min();
            let Some(amount) = bottleneck else {
                // Unbounded path; callers always bound the source arcs.
                return;
            };
            for &id in &path {
                if id % 2 == 0 {
                    self.arcs[id].flow += &amount;
                } else {
                    self.arcs[id - 1].flow -= &amount;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    #[test]
    fn prefers_the_cheaper_route() {
        let mut net = FlowNetwork::new(4);
        let a = net.add(0, 1, Some(int(2)), 0.0);
        let direct = net.add(1, 3, None, 5.0);
        let hop = net.add(1, 2, Some(int(1)), 1.0);
        let last = net.add(2, 3, None, 1.0);
        net.run(0, 3);
        assert_eq!(net.flow(a), &int(2));
        assert_eq!(net.flow(hop), &int(1));
        assert_eq!(net.flow(last), &int(1));
        assert_eq!(net.flow(direct), &int(1));
    }
}

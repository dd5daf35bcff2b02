// SPDX-License-Identifier: Apache-2.0

//! Edmonds–Karp maximum flow on integer capacities.
//!
//! Networks here are tiny (voters + candidates + 2), so a dense capacity
//! matrix is used.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    size: usize,
    capacity: Vec<Vec<BigInt>>,
    flow: Vec<Vec<BigInt>>,
}

impl FlowNetwork {
    pub fn new(size: usize) -> Self {
        FlowNetwork {
            size,
            capacity: vec![vec![BigInt::zero(); size]; size],
            flow: vec![vec![BigInt::zero(); size]; size],
        }
    }

    /// Adds `cap` to the capacity of the arc `from → to`.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: BigInt) {
        assert!(!cap.is_negative(), "negative capacity");
        self.capacity[from][to] += cap;
    }

    fn residual(&self, u: usize, v: usize) -> BigInt {
        &self.capacity[u][v] - &self.flow[u][v]
    }

    /// Net flow currently routed along `from → to`.
    pub fn flow(&self, from: usize, to: usize) -> &BigInt {
        &self.flow[from][to]
    }

    /// Pushes a maximum flow from `source` to `sink` using shortest
    /// augmenting paths and returns its value.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> BigInt {
        let mut total = BigInt::zero();
        loop {
            let mut parent = vec![usize::MAX; self.size];
            parent[source] = source;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for (v, par) in parent.iter_mut().enumerate() {
                    if *par == usize::MAX && self.residual(u, v).is_positive() {
                        *par = u;
                        queue.push_back(v);
                    }
                }
            }
            if parent[sink] == usize::MAX {
                return total;
            }
            let mut bottleneck: Option<BigInt> = None;
            let mut v = sink;
            while v != source {
                let u = parent[v];
                let r = self.residual(u, v);
                bottleneck = Some(match bottleneck {
                    Some(b) if b <= r => b,
                    _ => r,
                });
                v = u;
            }
            let bottleneck = bottleneck.expect("path has at least one arc");
            let mut v = sink;
            while v != source {
                let u = parent[v];
                self.flow[u][v] += &bottleneck;
                self.flow[v][u] -= &bottleneck;
                v = u;
            }
            total += bottleneck;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn classic_network() {
        // CLRS figure 26.1: max flow 23.
        let mut g = FlowNetwork::new(6);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 3, 12),
            (2, 1, 4),
            (2, 4, 14),
            (3, 2, 9),
            (3, 5, 20),
            (4, 3, 7),
            (4, 5, 4),
        ] {
            g.add_arc(u, v, b(c));
        }
        assert_eq!(g.max_flow(0, 5), b(23));
        let out: BigInt = (0..6).map(|v| g.flow(0, v).clone()).sum();
        assert_eq!(out, b(23));
    }

    #[test]
    fn disconnected_sink() {
        let mut g = FlowNetwork::new(3);
        g.add_arc(0, 1, b(5));
        assert_eq!(g.max_flow(0, 2), b(0));
    }
}

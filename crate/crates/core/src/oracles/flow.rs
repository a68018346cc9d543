//! Residual-network flows with integer capacities and costs.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
}

/// Directed network; arc `2k` and its reverse `2k + 1` are stored together.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { arcs: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    pub fn nodes(&self) -> usize {
        self.out.len()
    }

    /// Arc ids are `0..arc_count()`, reverse arcs included.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Adds an arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, cost });
        self.arcs.push(Arc { to: from, cap: 0, cost: -cost });
        self.out[from].push(id);
        self.out[to].push(id + 1);
        id
    }

    /// Flow currently carried by arc `id`.
    pub fn flow_on(&self, id: usize) -> i64 {
        self.arcs[id + 1].cap
    }

    pub fn head(&self, id: usize) -> usize {
        self.arcs[id].to
    }

    /// Arc ids leaving `v` that are forward arcs.
    pub fn forward_arcs(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter().copied().filter(|id| id % 2 == 0)
    }

    fn augment(&mut self, t: usize, pred: &[usize], most: i64) -> i64 {
        let mut bottleneck = most;
        let mut v = t;
        while pred[v] != usize::MAX {
            let id = pred[v];
            bottleneck = bottleneck.min(self.arcs[id].cap);
            v = self.arcs[id ^ 1].to;
        }
        let mut v = t;
        while pred[v] != usize::MAX {
            let id = pred[v];
            self.arcs[id].cap -= bottleneck;
            self.arcs[id ^ 1].cap += bottleneck;
            v = self.arcs[id ^ 1].to;
        }
        bottleneck
    }

    /// Augments along shortest paths until `limit` units flow or none remain.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        let n = self.nodes();
        while total < limit {
            let mut pred = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &id in &self.out[u] {
                    let a = &self.arcs[id];
                    if a.cap > 0 && !seen[a.to] {
                        seen[a.to] = true;
                        pred[a.to] = id;
                        queue.push_back(a.to);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            total += self.augment(t, &pred, limit - total);
        }
        total
    }

    /// Successive shortest paths (Bellman-Ford queue) up to `target` units.
    /// Returns `(flow, cost)`.
    pub fn min_cost_flow(&mut self, s: usize, t: usize, target: i64) -> (i64, i64) {
        let n = self.nodes();
        let (mut flow, mut cost) = (0, 0);
        while flow < target {
            let mut dist = vec![i64::MAX; n];
            let mut pred = vec![usize::MAX; n];
            let mut queued = vec![false; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                for &id in &self.out[u] {
                    let a = &self.arcs[id];
                    if a.cap > 0 && dist[u] + a.cost < dist[a.to] {
                        dist[a.to] = dist[u] + a.cost;
                        pred[a.to] = id;
                        if !queued[a.to] {
                            queued[a.to] = true;
                            queue.push_back(a.to);
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            let bottleneck = self.augment(t, &pred, target - flow);
            flow += bottleneck;
            cost += bottleneck * dist[t];
        }
        (flow, cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_max_flow() {
        let mut f = FlowNetwork::new(4);
        f.add_arc(0, 1, 1, 0);
        f.add_arc(0, 2, 1, 0);
        f.add_arc(1, 3, 1, 0);
        f.add_arc(2, 3, 1, 0);
        f.add_arc(1, 2, 1, 0);
        assert_eq!(f.max_flow(0, 3, 10), 2);
    }

    #[test]
    fn min_cost_prefers_cheap_route() {
        let mut f = FlowNetwork::new(4);
        let cheap = f.add_arc(0, 1, 1, 1);
        f.add_arc(1, 3, 1, 1);
        let dear = f.add_arc(0, 2, 1, 5);
        f.add_arc(2, 3, 1, 5);
        assert_eq!(f.min_cost_flow(0, 3, 1), (1, 2));
        assert_eq!(f.flow_on(cheap), 1);
        assert_eq!(f.flow_on(dear), 0);
        assert_eq!(f.min_cost_flow(0, 3, 1), (1, 10));
    }

    #[test]
    fn limit_is_respected() {
        let mut f = FlowNetwork::new(2);
        f.add_arc(0, 1, 5, 0);
        assert_eq!(f.max_flow(0, 1, 3), 3);
    }
}

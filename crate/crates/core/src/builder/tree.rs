use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::NormSpec;
use crate::graph::Dsu;

/// A spanning tree over a node list, as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTreePlan {
    adj: Vec<Vec<usize>>,
}

impl SpanningTreePlan {
    pub fn from_edges(nodes: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); nodes];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        SpanningTreePlan { adj }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            out.extend(a.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    /// Checks that the plan is a spanning tree whose edges have length `<= r`.
    pub fn validate(&self, nodes: &[Vec<f64>], norm: &NormSpec, r: f64) -> std::result::Result<(), String> {
        let n = self.adj.len();
        if nodes.len() != n {
            return Err(format!("plan has {n} nodes, input has {}", nodes.len()));
        }
        let edges = self.edges();
        if n > 0 && edges.len() != n - 1 {
            return Err(format!("{} edges for {n} nodes", edges.len()));
        }
        let mut dsu = Dsu::new(n);
        for &(u, v) in &edges {
            let len = norm.dist(&nodes[u], &nodes[v]);
            if len > r {
                return Err(format!("edge {u}-{v} has length {len} > {r}"));
            }
            if !dsu.union(u, v) {
                return Err(format!("edge {u}-{v} closes a cycle"));
            }
        }
        Ok(())
    }
}

/// Largest cell offset along one axis at which two nodes can still be adjacent.
pub(crate) fn cell_reach(norm: &NormSpec) -> i64 {
    (norm.diam_factor() - 1e-9).ceil() as i64
}

/// Spanning tree of the geometric graph on `nodes` at threshold `r`.
///
/// Nodes are bucketed into cells of side `r / d^{1/p}`, which are cliques.
/// Each cell contributes a path through its nodes and each pair of adjacent
/// cells a single edge, so the degree is at most `(2c+1)^d + 1` with
/// `c = ceil(d^{1/p})`.
pub fn bounded_degree_spanning_tree(nodes: &[Vec<f64>], norm: &NormSpec, r: f64) -> Result<SpanningTreePlan> {
    let n = nodes.len();
    if n == 0 {
        return Err(Error::contract("spanning tree of an empty node set"));
    }
    if !(r > 0.0) {
        return Err(Error::contract(format!("threshold must be positive, got {r}")));
    }
    if nodes.iter().any(|x| x.len() != norm.dim()) {
        return Err(Error::contract("node dimension does not match the norm"));
    }
    let side = r / norm.diam_factor();
    let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, x) in nodes.iter().enumerate() {
        let key: Vec<i64> = x.iter().map(|&c| (c / side).floor() as i64).collect();
        cells.entry(key).or_default().push(i);
    }
    let mut keys: Vec<&Vec<i64>> = cells.keys().collect();
    keys.sort();

    let mut candidates = Vec::new();
    for key in &keys {
        let members = &cells[*key];
        for w in members.windows(2) {
            if norm.dist(&nodes[w[0]], &nodes[w[1]]) <= r {
                candidates.push((w[0], w[1]));
            }
        }
    }
    let reach = cell_reach(norm);
    let d = norm.dim();
    for key in &keys {
        let mut off = vec![-reach; d];
        loop {
            if off > vec![0; d] {
                let other: Vec<i64> = key.iter().zip(&off).map(|(a, b)| a + b).collect();
                if let Some(them) = cells.get(&other) {
                    if let Some(e) = first_edge(nodes, norm, r, &cells[*key], them) {
                        candidates.push(e);
                    }
                }
            }
            let mut a = d;
            while a > 0 && off[a - 1] == reach {
                off[a - 1] = -reach;
                a -= 1;
            }
            if a == 0 {
                break;
            }
            off[a - 1] += 1;
        }
    }
    let mut dsu = Dsu::new(n);
    let edges: Vec<(usize, usize)> = candidates.into_iter().filter(|&(u, v)| dsu.union(u, v)).collect();
    if dsu.sets() != 1 {
        return Err(Error::contract("input graph is disconnected"));
    }
    Ok(SpanningTreePlan::from_edges(n, &edges))
}

fn first_edge(nodes: &[Vec<f64>], norm: &NormSpec, r: f64, xs: &[usize], ys: &[usize]) -> Option<(usize, usize)> {
    for &u in xs {
        for &v in ys {
            if norm.dist(&nodes[u], &nodes[v]) <= r {
                return Some((u, v));
            }
        }
    }
    None
}

/// Closed walk `q_0 .. q_N` on a tree with `q_0 = q_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedWalk {
    pub seq: Vec<usize>,
}

impl ClosedWalk {
    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.seq.len() - 1
    }

    /// First and last position of every node that occurs.
    pub fn visit_bounds(&self, nodes: usize) -> (Vec<usize>, Vec<usize>) {
        let mut first = vec![usize::MAX; nodes];
        let mut last = vec![usize::MAX; nodes];
        for (t, &q) in self.seq.iter().enumerate() {
            if first[q] == usize::MAX {
                first[q] = t;
            }
            last[q] = t;
        }
        (first, last)
    }
}

/// Depth-first traversal from `root`, children in ascending order; every
/// tree edge is used once in each direction.
pub fn double_traversal_walk(plan: &SpanningTreePlan, root: usize) -> ClosedWalk {
    let mut seq = vec![root];
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, parent, next) = *top;
        let adj = plan.neighbors(v);
        let mut k = next;
        while k < adj.len() && adj[k] == parent {
            k += 1;
        }
        if k < adj.len() {
            top.2 = k + 1;
            let c = adj[k];
            seq.push(c);
            stack.push((c, v, 0));
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                seq.push(p);
            }
        }
    }
    ClosedWalk { seq }
}

/// Nodes in depth-first post-order (children ascending, root last).
pub fn post_order(plan: &SpanningTreePlan, root: usize) -> Vec<usize> {
    let walk = double_traversal_walk(plan, root);
    let (_, last) = walk.visit_bounds(plan.node_count());
    let mut order: Vec<usize> = (0..plan.node_count()).filter(|&v| last[v] != usize::MAX).collect();
    order.sort_by_key(|&v| last[v]);
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_uniform_points, Exponent};

    #[test]
    fn single_node() {
        let e = NormSpec::euclidean_plane();
        let plan = bounded_degree_spanning_tree(&[vec![0.5, 0.5]], &e, 0.1).unwrap();
        assert!(plan.edges().is_empty());
        assert_eq!(double_traversal_walk(&plan, 0).seq, vec![0]);
    }

    #[test]
    fn one_cell_is_a_path() {
        let e = NormSpec::euclidean_plane();
        let nodes: Vec<Vec<f64>> = (0..6).map(|i| vec![0.01 * i as f64, 0.02]).collect();
        let plan = bounded_degree_spanning_tree(&nodes, &e, 1.0).unwrap();
        assert_eq!(plan.max_degree(), 2);
        plan.validate(&nodes, &e, 1.0).unwrap();
    }

    #[test]
    fn walks_by_hand() {
        let star = SpanningTreePlan::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let w = double_traversal_walk(&star, 0);
        assert_eq!(w.seq, vec![0, 1, 0, 2, 0, 3, 0]);
        assert_eq!(w.steps(), 6);
        assert_eq!(w.seq[..6].iter().filter(|&&x| x == 0).count(), 3);
        let path = SpanningTreePlan::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(double_traversal_walk(&path, 0).seq, vec![0, 1, 2, 1, 0]);
        assert_eq!(post_order(&path, 0), vec![2, 1, 0]);
    }

    #[test]
    fn disconnected_input() {
        let e = NormSpec::euclidean_plane();
        let nodes = vec![vec![0.0, 0.0], vec![0.9, 0.9]];
        assert!(bounded_degree_spanning_tree(&nodes, &e, 0.1).is_err());
    }

    #[test]
    fn degree_bound_random() {
        let e = NormSpec::euclidean_plane();
        let pts = sample_uniform_points(400, &e, 11).unwrap();
        let nodes: Vec<Vec<f64>> = pts.iter().map(<[f64]>::to_vec).collect();
        let plan = bounded_degree_spanning_tree(&nodes, &e, 0.2).unwrap();
        plan.validate(&nodes, &e, 0.2).unwrap();
        assert!(plan.max_degree() <= 26);
        let inf = NormSpec::new(2, Exponent::Infinity).unwrap();
        let plan = bounded_degree_spanning_tree(&nodes, &inf, 0.2).unwrap();
        plan.validate(&nodes, &inf, 0.2).unwrap();
        assert!(plan.max_degree() <= 10);
    }

    #[test]
    fn walk_uses_each_edge_twice() {
        let e = NormSpec::euclidean_plane();
        let pts = sample_uniform_points(200, &e, 5).unwrap();
        let nodes: Vec<Vec<f64>> = pts.iter().map(<[f64]>::to_vec).collect();
        let plan = bounded_degree_spanning_tree(&nodes, &e, 0.25).unwrap();
        let w = double_traversal_walk(&plan, 0);
        assert_eq!(w.steps(), 2 * plan.edges().len());
        let mut seen = std::collections::HashSet::new();
        for s in w.seq.windows(2) {
            assert!(plan.neighbors(s[0]).contains(&s[1]));
            assert!(seen.insert((s[0], s[1])));
        }
        for v in 0..plan.node_count() {
            let k = w.seq[..w.steps()].iter().filter(|&&x| x == v).count();
            assert_eq!(k, plan.degree(v).max(1));
        }
    }
}

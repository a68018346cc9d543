//! Threshold graphs, the sorted edge process and basic graph algorithms.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::{NormSpec, PointSet};
use crate::grid::GridIndex;

/// Largest `n` for which [`EdgeProcess::build`] materializes all pairs.
pub const FULL_PROCESS_LIMIT: usize = 10_000;

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    radius: f64,
    adj: Vec<Vec<usize>>,
}

impl GeometricGraph {
    /// Graph from an edge list; duplicate edges are merged, loops rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], radius: f64) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::contract(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::contract(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(GeometricGraph { radius, adj })
    }

    /// `G(V, radius)` built directly from a grid index.
    pub fn from_points(points: &PointSet, norm: &NormSpec, radius: f64) -> Result<Self> {
        points.check_norm(norm)?;
        if !(radius >= 0.0) {
            return Err(Error::contract(format!("radius must be >= 0, got {radius}")));
        }
        let side = radius.max(1e-3);
        let grid = GridIndex::build(points, side)?;
        let adj = (0..points.len())
            .map(|i| grid.neighbors(i, radius, norm))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeometricGraph { radius, adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn connected_components(&self) -> ComponentLabeling {
        let n = self.n();
        let mut labels = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if labels[s] != usize::MAX {
                continue;
            }
            labels[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if labels[v] == usize::MAX {
                        labels[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        ComponentLabeling { labels, count }
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().count <= 1
    }

    /// Cut vertices, ascending. Iterative DFS with low-points.
    pub fn articulation_points(&self) -> Vec<usize> {
        let n = self.n();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut is_cut = vec![false; n];
        let mut timer = 0;
        // (vertex, parent, next neighbour position)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            stack.push((root, usize::MAX, 0));
            while let Some(top) = stack.last_mut() {
                let (u, parent, pos) = *top;
                if pos < self.adj[u].len() {
                    top.2 += 1;
                    let v = self.adj[u][pos];
                    if v == parent {
                        continue;
                    }
                    if disc[v] == usize::MAX {
                        disc[v] = timer;
                        low[v] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((v, u, 0));
                    } else {
                        low[u] = low[u].min(disc[v]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if parent != root && low[u] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    /// Connected, at least 3 vertices and no cut vertex.
    pub fn is_biconnected(&self) -> bool {
        self.n() >= 3 && self.is_connected() && self.articulation_points().is_empty()
    }

    /// Subgraph induced by `keep`, relabelled to `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> GeometricGraph {
        let mut pos = vec![usize::MAX; self.n()];
        for (k, &v) in keep.iter().enumerate() {
            pos[v] = k;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                let mut l: Vec<usize> =
                    self.adj[v].iter().filter_map(|&w| (pos[w] != usize::MAX).then(|| pos[w])).collect();
                l.sort_unstable();
                l
            })
            .collect();
        GeometricGraph { radius: self.radius, adj }
    }
}

/// Connected-component ids, dense in `0..count`, numbered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub labels: Vec<usize>,
    pub count: usize,
}

impl ComponentLabeling {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.count];
        for &c in &self.labels {
            out[c] += 1;
        }
        out
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n], sets: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.sets -= 1;
        true
    }

    pub fn sets(&self) -> usize {
        self.sets
    }
}

/// Pairs in increasing length order, ties by `(i, j)`.
///
/// A truncated process holds only the pairs of length `<= cutoff`.
#[derive(Debug, Clone)]
pub struct EdgeProcess {
    points: PointSet,
    norm: NormSpec,
    edges: Vec<(u32, u32)>,
    lengths: Vec<f64>,
    cutoff: Option<f64>,
}

impl EdgeProcess {
    pub fn build(points: &PointSet, norm: &NormSpec) -> Result<Self> {
        points.check_norm(norm)?;
        let n = points.len();
        if n < 2 {
            return Err(Error::EmptyInput(format!("edge process needs n >= 2, got {n}")));
        }
        if n > FULL_PROCESS_LIMIT {
            return Err(Error::Capacity { what: "full edge process", n, limit: FULL_PROCESS_LIMIT });
        }
        let mut all = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                all.push((norm.dist(points.get(i), points.get(j)), i as u32, j as u32));
            }
        }
        Ok(Self::from_triples(points, norm, all, None))
    }

    /// Only pairs with length `<= cutoff`, found through a grid.
    pub fn build_truncated(points: &PointSet, norm: &NormSpec, cutoff: f64) -> Result<Self> {
        points.check_norm(norm)?;
        let n = points.len();
        if n < 2 {
            return Err(Error::EmptyInput(format!("edge process needs n >= 2, got {n}")));
        }
        if !(cutoff > 0.0) {
            return Err(Error::contract(format!("cutoff must be positive, got {cutoff}")));
        }
        if cutoff >= norm.diam_factor() && n <= FULL_PROCESS_LIMIT {
            return Self::build(points, norm);
        }
        let grid = GridIndex::build(points, cutoff)?;
        let mut all = Vec::new();
        for i in 0..n {
            grid.for_each_within(points.get(i), cutoff, norm, |j, _| {
                if j > i {
                    all.push((norm.dist(points.get(i), points.get(j)), i as u32, j as u32));
                }
                true
            });
        }
        let cutoff = (all.len() < n * (n - 1) / 2).then_some(cutoff);
        Ok(Self::from_triples(points, norm, all, cutoff))
    }

    fn from_triples(
        points: &PointSet,
        norm: &NormSpec,
        mut all: Vec<(f64, u32, u32)>,
        cutoff: Option<f64>,
    ) -> Self {
        all.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let lengths = all.iter().map(|t| t.0).collect();
        let edges = all.iter().map(|t| (t.1, t.2)).collect();
        EdgeProcess { points: points.clone(), norm: *norm, edges, lengths, cutoff }
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Number of pairs held.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `None` when every pair is present.
    pub fn cutoff(&self) -> Option<f64> {
        self.cutoff
    }

    pub fn edge(&self, rank: usize) -> (usize, usize) {
        let (i, j) = self.edges[rank];
        (i as usize, j as usize)
    }

    pub fn length(&self, rank: usize) -> f64 {
        self.lengths[rank]
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Rank of the first pair whose length equals that of `rank`.
    pub fn tie_group(&self, rank: usize) -> usize {
        let len = self.lengths[rank];
        self.lengths.partition_point(|&l| l < len)
    }

    /// Graph formed by the first `m` pairs.
    pub fn graph_at_rank(&self, m: usize) -> GeometricGraph {
        let m = m.min(self.len());
        let mut adj = vec![Vec::new(); self.n()];
        for &(i, j) in &self.edges[..m] {
            adj[i as usize].push(j as usize);
            adj[j as usize].push(i as usize);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        let radius = if m == 0 { 0.0 } else { self.lengths[m - 1] };
        GeometricGraph { radius, adj }
    }

    /// `G(V, radius)` with the closed threshold.
    pub fn graph_at_radius(&self, radius: f64) -> Result<GeometricGraph> {
        if !(radius >= 0.0) {
            return Err(Error::contract(format!("radius must be >= 0, got {radius}")));
        }
        if let Some(c) = self.cutoff {
            if radius > c {
                return GeometricGraph::from_points(&self.points, &self.norm, radius);
            }
        }
        let m = self.lengths.partition_point(|&l| l <= radius);
        let mut g = self.graph_at_rank(m);
        g.radius = radius;
        Ok(g)
    }

    /// The k-th smallest distance from point `i` to any other point.
    pub fn kth_nearest_distance(&self, i: usize, k: usize) -> Result<f64> {
        let n = self.n();
        if i >= n {
            return Err(Error::contract(format!("unknown vertex {i}")));
        }
        if k == 0 || k >= n {
            return Err(Error::contract(format!("k must be in 1..={}, got {k}", n - 1)));
        }
        let z = self.points.get(i);
        let mut ds: Vec<f64> = (0..n)
            .filter(|&j| j != i)
            .map(|j| self.norm.dist(z, self.points.get(j)))
            .collect();
        let (_, kth, _) = ds.select_nth_unstable_by(k - 1, f64::total_cmp);
        Ok(*kth)
    }
}

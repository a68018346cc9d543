use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::GeometricGraph;
use crate::oracles::flow::FlowNetwork;

/// Whether the two paths may share an endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathMode {
    Disjoint,
    /// The sole vertex of a one-element end set is used by both paths.
    ShareEndpoint,
}

/// Two paths, each running from a vertex of `A` to a vertex of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPair {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

fn shared_vertices(a: &[usize], b: &[usize], mode: PathMode) -> Vec<usize> {
    let mut out = Vec::new();
    if mode == PathMode::ShareEndpoint {
        if a.len() == 1 {
            out.push(a[0]);
        }
        if b.len() == 1 {
            out.push(b[0]);
        }
    }
    out
}

/// Two A-B paths of least total edge count that meet `A` and `B` only at
/// their endpoints and are vertex-disjoint apart from what `mode` allows.
pub fn two_disjoint_paths(
    g: &GeometricGraph,
    a: &[usize],
    b: &[usize],
    mode: PathMode,
) -> Result<PathPair> {
    let n = g.n();
    if a.is_empty() || b.is_empty() {
        return Err(Error::contract("end sets must be nonempty"));
    }
    if a.iter().chain(b).any(|&v| v >= n) {
        return Err(Error::contract("end set vertex out of range"));
    }
    let in_a: HashSet<usize> = a.iter().copied().collect();
    let in_b: HashSet<usize> = b.iter().copied().collect();
    if in_a.iter().any(|v| in_b.contains(v)) {
        return Err(Error::contract("end sets must be disjoint"));
    }
    let shared = shared_vertices(a, b, mode);
    let (src, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    for v in 0..n {
        let cap = if shared.contains(&v) { 2 } else { 1 };
        net.add_arc(2 * v, 2 * v + 1, cap, 0);
        for &w in g.neighbors(v) {
            net.add_arc(2 * v + 1, 2 * w, 1, 1);
        }
    }
    for &v in &in_a {
        net.add_arc(src, 2 * v, if shared.contains(&v) { 2 } else { 1 }, 0);
    }
    for &v in &in_b {
        net.add_arc(2 * v + 1, sink, if shared.contains(&v) { 2 } else { 1 }, 0);
    }
    let (flow, _) = net.min_cost_flow(src, sink, 2);
    if flow < 2 {
        return Err(Error::Infeasible(format!(
            "no two admissible disjoint paths between |A|={} and |B|={}",
            a.len(),
            b.len()
        )));
    }
    // decompose into two walks from the source
    let mut left: Vec<i64> = (0..net.arc_count()).map(|id| if id % 2 == 0 { net.flow_on(id) } else { 0 }).collect();
    let mut paths = Vec::new();
    for _ in 0..2 {
        let mut path = Vec::new();
        let mut node = src;
        while node != sink {
            let id = net
                .forward_arcs(node)
                .find(|&id| left[id] > 0)
                .expect("flow conservation");
            left[id] -= 1;
            node = net.head(id);
            if node < 2 * n && node % 2 == 0 {
                path.push(node / 2);
            }
        }
        paths.push(trim(path, &in_a, &in_b));
    }
    let second = paths.pop().unwrap();
    let first = paths.pop().unwrap();
    Ok(PathPair { first, second })
}

/// Keeps the part between the last `A` vertex and the first `B` vertex after it.
fn trim(path: Vec<usize>, in_a: &HashSet<usize>, in_b: &HashSet<usize>) -> Vec<usize> {
    let first_b = path.iter().position(|v| in_b.contains(v)).expect("path reaches B");
    let last_a = path[..first_b].iter().rposition(|v| in_a.contains(v)).expect("path starts in A");
    path[last_a..=first_b].to_vec()
}

/// Independent check of the [`two_disjoint_paths`] contract.
pub fn validate_path_pair(
    g: &GeometricGraph,
    a: &[usize],
    b: &[usize],
    mode: PathMode,
    pair: &PathPair,
) -> std::result::Result<(), String> {
    let in_a: HashSet<usize> = a.iter().copied().collect();
    let in_b: HashSet<usize> = b.iter().copied().collect();
    for (name, p) in [("first", &pair.first), ("second", &pair.second)] {
        let (Some(&s), Some(&t)) = (p.first(), p.last()) else {
            return Err(format!("{name} path is empty"));
        };
        if !in_a.contains(&s) || !in_b.contains(&t) {
            return Err(format!("{name} path does not run from A to B"));
        }
        for (k, &v) in p.iter().enumerate() {
            if k > 0 && k + 1 < p.len() && (in_a.contains(&v) || in_b.contains(&v)) {
                return Err(format!("{name} path meets an end set at inner vertex {v}"));
            }
        }
        if p.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
            return Err(format!("{name} path uses a non-edge"));
        }
        if p.iter().collect::<HashSet<_>>().len() != p.len() {
            return Err(format!("{name} path repeats a vertex"));
        }
    }
    let shared = shared_vertices(a, b, mode);
    let mine: HashSet<usize> = pair.first.iter().copied().collect();
    for &v in &pair.second {
        if mine.contains(&v) && !shared.contains(&v) {
            return Err(format!("paths share vertex {v}"));
        }
    }
    Ok(())
}

/// Shortcuts a path so that no two non-consecutive vertices are adjacent.
/// Endpoints are kept.
pub fn remove_chords<F>(path: &[usize], adjacent: F) -> Vec<usize>
where
    F: Fn(usize, usize) -> bool,
{
    let mut out = Vec::new();
    let mut i = 0;
    while i < path.len() {
        out.push(path[i]);
        if i + 1 == path.len() {
            break;
        }
        let mut next = i + 1;
        for j in (i + 2..path.len()).rev() {
            if adjacent(path[i], path[j]) {
                next = j;
                break;
            }
        }
        i = next;
    }
    out
}

use crate::error::{Error, Result};
use crate::graph::GeometricGraph;
use crate::oracles::flow::FlowNetwork;

/// Number of internally vertex-disjoint x-y paths, counted up to `limit`.
/// `x` and `y` must be distinct and non-adjacent.
pub fn local_vertex_connectivity(g: &GeometricGraph, x: usize, y: usize, limit: usize) -> Result<usize> {
    let n = g.n();
    if x >= n || y >= n || x == y {
        return Err(Error::contract(format!("bad vertex pair ({x}, {y}) for n={n}")));
    }
    if g.has_edge(x, y) {
        return Err(Error::contract(format!("vertices {x} and {y} are adjacent")));
    }
    let big = n as i64;
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        let cap = if v == x || v == y { big } else { 1 };
        net.add_arc(2 * v, 2 * v + 1, cap, 0);
        for &w in g.neighbors(v) {
            net.add_arc(2 * v + 1, 2 * w, 1, 0);
        }
    }
    Ok(net.max_flow(2 * x + 1, 2 * y, limit as i64) as usize)
}

/// Exact test of vertex connectivity `>= k` by unit-capacity flows.
///
/// Any separator of size `< k` misses one of the first `k` vertices, and
/// that vertex is then cut from some non-neighbour; so only pairs with
/// one end among the first `k` vertices need checking.
pub fn vertex_connectivity_at_least(g: &GeometricGraph, k: usize) -> Result<bool> {
    let n = g.n();
    if n <= k {
        return Err(Error::contract(format!("k-connectivity needs n > k, got n={n}, k={k}")));
    }
    if k == 0 {
        return Ok(true);
    }
    if g.min_degree() < k {
        return Ok(false);
    }
    for x in 0..k {
        for y in 0..n {
            if y != x && !g.has_edge(x, y) && local_vertex_connectivity(g, x, y, k)? < k {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c4 = GeometricGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 1.0).unwrap();
        assert!(vertex_connectivity_at_least(&c4, 2).unwrap());
        assert!(!vertex_connectivity_at_least(&c4, 3).unwrap());
        let p3 = GeometricGraph::from_edges(3, &[(0, 1), (1, 2)], 1.0).unwrap();
        assert!(!vertex_connectivity_at_least(&p3, 2).unwrap());
        assert!(vertex_connectivity_at_least(&p3, 1).unwrap());
        assert!(vertex_connectivity_at_least(&p3, 3).is_err());
        assert_eq!(local_vertex_connectivity(&c4, 0, 2, 5).unwrap(), 2);
        assert!(local_vertex_connectivity(&c4, 0, 1, 5).is_err());
    }

    #[test]
    fn complete_graph() {
        let k5: Vec<_> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        let g = GeometricGraph::from_edges(5, &k5, 1.0).unwrap();
        assert!(vertex_connectivity_at_least(&g, 4).unwrap());
    }
}

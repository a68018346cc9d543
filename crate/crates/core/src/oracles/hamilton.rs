use crate::error::{Error, Result};
use crate::graph::GeometricGraph;

/// Largest vertex count accepted by [`is_hamiltonian_exact`].
pub const HAMILTON_CEILING: usize = 22;

/// Exact Hamiltonicity by subset DP over paths anchored at vertex 0.
///
/// Returns a witness cycle (vertex order starting at 0) when one exists.
pub fn is_hamiltonian_exact(g: &GeometricGraph) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    if n < 3 {
        return Err(Error::contract(format!("Hamiltonicity needs n >= 3, got {n}")));
    }
    if n > HAMILTON_CEILING {
        return Err(Error::Capacity { what: "exact Hamiltonicity", n, limit: HAMILTON_CEILING });
    }
    if g.min_degree() < 2 {
        return Ok(None);
    }
    // vertex v >= 1 lives at bit v - 1
    let m = n - 1;
    let bit = |v: usize| 1u32 << (v - 1);
    let mut adj = vec![0u32; n];
    for (v, a) in adj.iter_mut().enumerate() {
        for &w in g.neighbors(v) {
            if w != 0 {
                *a |= bit(w);
            }
        }
    }
    let adj0 = adj[0];
    let full = (1u32 << m) - 1;
    let mut ends = vec![0u32; 1usize << m];
    for mask in 1..=full {
        let mut acc = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let b = rest & rest.wrapping_neg();
            rest ^= b;
            let v = b.trailing_zeros() as usize + 1;
            let prev = mask ^ b;
            let ok = if prev == 0 { adj0 & b != 0 } else { ends[prev as usize] & adj[v] != 0 };
            if ok {
                acc |= b;
            }
        }
        ends[mask as usize] = acc;
    }
    let closing = ends[full as usize] & adj0;
    if closing == 0 {
        return Ok(None);
    }
    let mut cycle = Vec::with_capacity(n);
    let mut mask = full;
    let mut cur = closing.trailing_zeros() as usize + 1;
    loop {
        cycle.push(cur);
        mask ^= bit(cur);
        if mask == 0 {
            break;
        }
        let cand = ends[mask as usize] & adj[cur];
        cur = cand.trailing_zeros() as usize + 1;
    }
    cycle.push(0);
    cycle.reverse();
    Ok(Some(cycle))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> GeometricGraph {
        let e: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        GeometricGraph::from_edges(n, &e, 1.0).unwrap()
    }

    fn check_witness(g: &GeometricGraph, c: &[usize]) {
        let mut seen = vec![false; g.n()];
        for (k, &v) in c.iter().enumerate() {
            assert!(!seen[v]);
            seen[v] = true;
            assert!(g.has_edge(v, c[(k + 1) % c.len()]));
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn small_examples() {
        let t = complete(3);
        let c = is_hamiltonian_exact(&t).unwrap().unwrap();
        assert_eq!(c.len(), 3);
        check_witness(&t, &c);
        let star = GeometricGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)], 1.0).unwrap();
        assert_eq!(is_hamiltonian_exact(&star).unwrap(), None);
        let c6: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let g = GeometricGraph::from_edges(6, &c6, 1.0).unwrap();
        check_witness(&g, &is_hamiltonian_exact(&g).unwrap().unwrap());
        // K_{2,3} has minimum degree 2 but no Hamilton cycle
        let k23 = GeometricGraph::from_edges(
            5,
            &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],
            1.0,
        )
        .unwrap();
        assert_eq!(is_hamiltonian_exact(&k23).unwrap(), None);
    }

    #[test]
    fn capacity_limits() {
        assert!(matches!(is_hamiltonian_exact(&complete(23)), Err(Error::Capacity { .. })));
        assert!(is_hamiltonian_exact(&complete(2)).is_err());
        let g = complete(22);
        check_witness(&g, &is_hamiltonian_exact(&g).unwrap().unwrap());
    }
}

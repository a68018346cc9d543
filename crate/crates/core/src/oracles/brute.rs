//! Exhaustive reference algorithms for tiny graphs, independent of the
//! dynamic programs and flows they are compared against.

use crate::error::{Error, Result};
use crate::graph::GeometricGraph;

/// Ceiling for the enumeration-based checks.
pub const BRUTE_CEILING: usize = 10;

fn check_size(g: &GeometricGraph) -> Result<()> {
    if g.n() > BRUTE_CEILING {
        return Err(Error::Capacity { what: "brute-force oracle", n: g.n(), limit: BRUTE_CEILING });
    }
    Ok(())
}

/// Hamiltonicity by trying every ordering of vertices `1..n` after vertex 0.
pub fn hamiltonian_by_permutations(g: &GeometricGraph) -> Result<bool> {
    check_size(g)?;
    let n = g.n();
    if n < 3 {
        return Ok(false);
    }
    let mut rest: Vec<usize> = (1..n).collect();
    loop {
        let closes = g.has_edge(0, rest[0]) && g.has_edge(rest[n - 2], 0);
        if closes && rest.windows(2).all(|w| g.has_edge(w[0], w[1])) {
            return Ok(true);
        }
        if !next_permutation(&mut rest) {
            return Ok(false);
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("successor exists");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Vertex connectivity `>= k` by deleting every vertex subset of size `< k`.
pub fn k_connected_by_removal(g: &GeometricGraph, k: usize) -> Result<bool> {
    check_size(g)?;
    let n = g.n();
    if n <= k {
        return Ok(false);
    }
    for mask in 0u32..(1 << n) {
        if (mask.count_ones() as usize) < k {
            let keep: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) == 0).collect();
            if !g.induced(&keep).is_connected() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lengths of all simple cycles, found by depth-first search from each
/// cycle's smallest vertex. Entry `l` is set when a cycle of length `l` exists.
pub fn cycle_lengths_by_search(g: &GeometricGraph) -> Result<Vec<bool>> {
    check_size(g)?;
    let n = g.n();
    let mut found = vec![false; n + 1];
    let mut on = vec![false; n];
    fn dfs(g: &GeometricGraph, s: usize, v: usize, depth: usize, on: &mut [bool], found: &mut [bool]) {
        for &w in g.neighbors(v) {
            if w == s && depth >= 3 {
                found[depth] = true;
            } else if w > s && !on[w] {
                on[w] = true;
                dfs(g, s, w, depth + 1, on, found);
                on[w] = false;
            }
        }
    }
    for s in 0..n {
        on[s] = true;
        dfs(g, s, s, 1, &mut on, &mut found);
        on[s] = false;
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> GeometricGraph {
        let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        GeometricGraph::from_edges(n, &e, 1.0).unwrap()
    }

    #[test]
    fn small_cases() {
        let c5 = cycle(5);
        assert!(hamiltonian_by_permutations(&c5).unwrap());
        assert!(k_connected_by_removal(&c5, 2).unwrap());
        assert!(!k_connected_by_removal(&c5, 3).unwrap());
        let lens = cycle_lengths_by_search(&c5).unwrap();
        assert_eq!(lens, vec![false, false, false, false, false, true]);
        let path = GeometricGraph::from_edges(3, &[(0, 1), (1, 2)], 1.0).unwrap();
        assert!(!hamiltonian_by_permutations(&path).unwrap());
        assert!(!k_connected_by_removal(&path, 2).unwrap());
        let k4 = GeometricGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 1.0).unwrap();
        assert_eq!(cycle_lengths_by_search(&k4).unwrap(), vec![false, false, false, true, true]);
    }
}

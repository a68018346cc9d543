use crate::error::{Error, Result};
use crate::graph::GeometricGraph;

/// Largest vertex count accepted by the cycle-length oracles.
pub const SPECTRUM_CEILING: usize = 18;

/// Path endpoints per vertex subset; paths start at the subset's lowest vertex.
struct Table {
    adj: Vec<u32>,
    ends: Vec<u32>,
}

impl Table {
    fn build(g: &GeometricGraph) -> Result<Self> {
        let n = g.n();
        if n > SPECTRUM_CEILING {
            return Err(Error::Capacity { what: "cycle spectrum", n, limit: SPECTRUM_CEILING });
        }
        let adj: Vec<u32> =
            (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |a, &w| a | 1 << w)).collect();
        let mut ends = vec![0u32; 1usize << n];
        for mask in 1u32..(1u32 << n) {
            let low = mask & mask.wrapping_neg();
            if mask == low {
                ends[mask as usize] = mask;
                continue;
            }
            let mut acc = 0;
            let mut rest = mask ^ low;
            while rest != 0 {
                let b = rest & rest.wrapping_neg();
                rest ^= b;
                let v = b.trailing_zeros() as usize;
                if ends[(mask ^ b) as usize] & adj[v] != 0 {
                    acc |= b;
                }
            }
            ends[mask as usize] = acc;
        }
        Ok(Table { adj, ends })
    }

    fn closes(&self, mask: u32) -> u32 {
        let s = mask.trailing_zeros() as usize;
        if mask.count_ones() < 3 {
            0
        } else {
            self.ends[mask as usize] & self.adj[s] & !(1 << s)
        }
    }

    fn witness(&self, mut mask: u32) -> Vec<usize> {
        let start = mask.trailing_zeros() as usize;
        let mut cur = self.closes(mask).trailing_zeros() as usize;
        let mut out = Vec::new();
        while cur != start {
            out.push(cur);
            mask ^= 1 << cur;
            cur = (self.ends[mask as usize] & self.adj[cur]).trailing_zeros() as usize;
        }
        out.push(start);
        out.reverse();
        out
    }
}

/// `spectrum[l]` is true iff the graph has a simple cycle on exactly `l` vertices.
pub fn cycle_spectrum(g: &GeometricGraph) -> Result<Vec<bool>> {
    let n = g.n();
    let t = Table::build(g)?;
    let mut out = vec![false; n + 1];
    for mask in 1u32..(1u32 << n) {
        if !out[mask.count_ones() as usize] && t.closes(mask) != 0 {
            out[mask.count_ones() as usize] = true;
        }
    }
    Ok(out)
}

fn check_length(n: usize, len: usize) -> Result<()> {
    if n > SPECTRUM_CEILING {
        return Err(Error::Capacity { what: "cycle spectrum", n, limit: SPECTRUM_CEILING });
    }
    if len < 3 || len > n {
        return Err(Error::Capacity { what: "cycle length in 3..=n", n: len, limit: n });
    }
    Ok(())
}

pub fn has_cycle_of_length(g: &GeometricGraph, len: usize) -> Result<bool> {
    check_length(g.n(), len)?;
    Ok(cycle_of_length(g, len)?.is_some())
}

/// A witness cycle on exactly `len` vertices, if any.
pub fn cycle_of_length(g: &GeometricGraph, len: usize) -> Result<Option<Vec<usize>>> {
    check_length(g.n(), len)?;
    let t = Table::build(g)?;
    Ok((1u32..(1u32 << g.n()))
        .find(|&m| m.count_ones() as usize == len && t.closes(m) != 0)
        .map(|m| t.witness(m)))
}

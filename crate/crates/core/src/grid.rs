//! Uniform bucket grid over `[0,1]^d` for fixed-radius and k-nearest queries.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{NormSpec, PointSet};

/// Buckets of side `cell_side`; point `z` lives in bucket `floor(z / cell_side)`.
#[derive(Debug, Clone)]
pub struct GridIndex<'a> {
    points: &'a PointSet,
    cell_side: f64,
    /// Cells per axis; bucket coordinates lie in `0..per_axis`.
    per_axis: i64,
    buckets: HashMap<u64, Vec<usize>>,
    cell_of: Vec<u64>,
}

impl<'a> GridIndex<'a> {
    pub fn build(points: &'a PointSet, cell_side: f64) -> Result<Self> {
        if !(cell_side > 0.0) || !cell_side.is_finite() {
            return Err(Error::contract(format!("cell side must be positive, got {cell_side}")));
        }
        let d = points.dim() as u32;
        let per_axis = (1.0 / cell_side).floor() as i64 + 1;
        if (per_axis as u128).checked_pow(d).is_none_or(|c| c > (1u128 << 62)) {
            return Err(Error::contract(format!(
                "cell side {cell_side} is too small for dimension {d}"
            )));
        }
        let mut grid = GridIndex {
            points,
            cell_side,
            per_axis,
            buckets: HashMap::new(),
            cell_of: Vec::with_capacity(points.len()),
        };
        let mut cell = vec![0i64; points.dim()];
        for i in 0..points.len() {
            grid.cell_coords_into(points.get(i), &mut cell);
            let key = grid.key(&cell);
            grid.buckets.entry(key).or_default().push(i);
            grid.cell_of.push(key);
        }
        Ok(grid)
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    pub fn points(&self) -> &'a PointSet {
        self.points
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    /// Bucket coordinates of a position.
    pub fn cell_coords(&self, z: &[f64]) -> Vec<i64> {
        let mut c = vec![0; z.len()];
        self.cell_coords_into(z, &mut c);
        c
    }

    fn cell_coords_into(&self, z: &[f64], out: &mut [i64]) {
        for (o, &x) in out.iter_mut().zip(z) {
            *o = ((x / self.cell_side).floor() as i64).clamp(0, self.per_axis - 1);
        }
    }

    fn key(&self, cell: &[i64]) -> u64 {
        cell.iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.per_axis as u64 + c as u64)
    }

    fn unkey(&self, mut key: u64) -> Vec<i64> {
        let m = self.per_axis as u64;
        (0..self.points.dim())
            .map(|_| {
                let c = (key % m) as i64;
                key /= m;
                c
            })
            .collect()
    }

    pub fn bucket(&self, cell: &[i64]) -> Option<&[usize]> {
        if cell.len() != self.points.dim() || cell.iter().any(|&c| c < 0 || c >= self.per_axis) {
            return None;
        }
        self.buckets.get(&self.key(cell)).map(Vec::as_slice)
    }

    /// All non-empty buckets with their coordinates, in unspecified order.
    pub fn buckets(&self) -> impl Iterator<Item = (Vec<i64>, &[usize])> + '_ {
        self.buckets.iter().map(|(&k, v)| (self.unkey(k), v.as_slice()))
    }

    /// Indices `j != i` with `dist(i, j) <= radius`, ascending.
    pub fn neighbors(&self, i: usize, radius: f64, norm: &NormSpec) -> Result<Vec<usize>> {
        if i >= self.points.len() {
            return Err(Error::contract(format!("unknown point index {i}")));
        }
        if !(radius >= 0.0) {
            return Err(Error::contract(format!("radius must be >= 0, got {radius}")));
        }
        let mut out = Vec::new();
        self.for_each_within(self.points.get(i), radius, norm, |j, _| {
            if j != i {
                out.push(j);
            }
            true
        });
        out.sort_unstable();
        Ok(out)
    }

    /// Calls `f(j, dist)` for every indexed point within `radius` of `z`.
    /// Iteration stops early once `f` returns `false`.
    pub fn for_each_within<F>(&self, z: &[f64], radius: f64, norm: &NormSpec, mut f: F)
    where
        F: FnMut(usize, f64) -> bool,
    {
        let d = self.points.dim();
        let reach = (radius / self.cell_side).ceil() as i64;
        let center = self.cell_coords(z);
        let span = (2 * reach + 1) as f64;
        if span.powi(d as i32) > self.buckets.len() as f64 {
            for (key, members) in &self.buckets {
                let cell = self.unkey(*key);
                if cell.iter().zip(&center).any(|(a, b)| (a - b).abs() > reach) {
                    continue;
                }
                for &j in members {
                    let dist = norm.dist(z, self.points.get(j));
                    if dist <= radius && !f(j, dist) {
                        return;
                    }
                }
            }
            return;
        }
        let lo: Vec<i64> = center.iter().map(|c| (c - reach).max(0)).collect();
        let hi: Vec<i64> = center.iter().map(|c| (c + reach).min(self.per_axis - 1)).collect();
        let mut cur = lo.clone();
        loop {
            if let Some(members) = self.buckets.get(&self.key(&cur)) {
                for &j in members {
                    let dist = norm.dist(z, self.points.get(j));
                    if dist <= radius && !f(j, dist) {
                        return;
                    }
                }
            }
            if !advance(&mut cur, &lo, &hi) {
                break;
            }
        }
    }

    /// The `k`-th smallest distance from point `i` to another indexed point.
    pub fn kth_nearest_distance(&self, i: usize, k: usize, norm: &NormSpec) -> Result<f64> {
        let n = self.points.len();
        if i >= n {
            return Err(Error::contract(format!("unknown point index {i}")));
        }
        if k == 0 || k >= n {
            return Err(Error::contract(format!("k must be in 1..={}, got {k}", n - 1)));
        }
        let z = self.points.get(i);
        let center = self.cell_coords(z);
        let d = center.len();
        let mut best: Vec<f64> = Vec::with_capacity(k + 1);
        let mut offset = vec![0i64; d];
        for shell in 0..=self.per_axis {
            // every offset with Chebyshev norm exactly `shell`
            let lo = vec![-shell; d];
            let hi = vec![shell; d];
            offset.copy_from_slice(&lo);
            loop {
                if offset.iter().any(|o| o.abs() == shell) {
                    let cell: Vec<i64> = center.iter().zip(&offset).map(|(c, o)| c + o).collect();
                    if let Some(members) = self.bucket(&cell) {
                        for &j in members {
                            if j == i {
                                continue;
                            }
                            let dist = norm.dist(z, self.points.get(j));
                            if best.len() < k || dist < best[k - 1] {
                                let at = best.partition_point(|&b| b <= dist);
                                best.insert(at, dist);
                                best.truncate(k);
                            }
                        }
                    }
                }
                if !advance(&mut offset, &lo, &hi) {
                    break;
                }
            }
            // anything beyond this shell is farther than shell * side in l_inf, hence in l_p
            if best.len() == k && best[k - 1] <= shell as f64 * self.cell_side {
                break;
            }
        }
        Ok(best[k - 1])
    }
}

/// Odometer increment over the box `lo..=hi`; false once exhausted.
fn advance(cur: &mut [i64], lo: &[i64], hi: &[i64]) -> bool {
    for a in 0..cur.len() {
        if cur[a] < hi[a] {
            cur[a] += 1;
            return true;
        }
        cur[a] = lo[a];
    }
    false
}

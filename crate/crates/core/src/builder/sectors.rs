use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{NormSpec, PointSet};

use super::tree::cell_reach;

/// Partition of the ball `B(center, radius)` into parts of diameter at most
/// `radius`: six 60 degree sectors in the Euclidean plane, otherwise a grid
/// of `(2c)^d` sub-cubes of side `radius / c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorPartition {
    norm: NormSpec,
    center: Vec<f64>,
    radius: f64,
    per_axis: usize,
}

pub fn ball_sector_partition(center: &[f64], radius: f64, norm: &NormSpec) -> Result<SectorPartition> {
    if !(radius > 0.0) {
        return Err(Error::contract(format!("radius must be positive, got {radius}")));
    }
    if center.len() != norm.dim() {
        return Err(Error::contract("center dimension does not match the norm"));
    }
    Ok(SectorPartition { norm: *norm, center: center.to_vec(), radius, per_axis: 2 * cell_reach(norm) as usize })
}

/// Number of parts for `norm`.
pub fn sector_count(norm: &NormSpec) -> usize {
    if norm.is_planar_euclidean() {
        6
    } else {
        (2 * cell_reach(norm) as usize).pow(norm.dim() as u32)
    }
}

impl SectorPartition {
    pub fn count(&self) -> usize {
        sector_count(&self.norm)
    }

    /// Part index of `z`; points outside the ball are assigned to the part
    /// they would fall in after clamping.
    pub fn sector_of(&self, z: &[f64]) -> usize {
        if self.norm.is_planar_euclidean() {
            let theta = (z[1] - self.center[1]).atan2(z[0] - self.center[0]);
            return (((theta + PI) / (PI / 3.0)).floor() as usize).min(5);
        }
        let m = self.per_axis;
        let side = 2.0 * self.radius / m as f64;
        z.iter().zip(&self.center).fold(0, |acc, (&x, &c)| {
            let k = ((x - c + self.radius) / side).floor().clamp(0.0, (m - 1) as f64) as usize;
            acc * m + k
        })
    }

    /// Membership test of part `k`.
    pub fn contains(&self, k: usize, z: &[f64]) -> bool {
        self.norm.dist(z, &self.center) <= self.radius && self.sector_of(z) == k
    }
}

/// Path from `anchors[0]` through every labelled vertex and every anchor.
///
/// Labelled vertices are grouped by part; groups are cliques and are
/// inserted between consecutive anchors. Extra anchors are appended.
pub fn cleanup_path(
    cell_members: &[usize],
    anchors: &[usize],
    labelled: &[usize],
    points: &PointSet,
    partition: &SectorPartition,
) -> Result<Vec<usize>> {
    for (k, a) in anchors.iter().enumerate() {
        if !cell_members.contains(a) {
            return Err(Error::contract(format!("anchor {a} is not in the cell")));
        }
        if anchors[..k].contains(a) {
            return Err(Error::contract(format!("anchor {a} repeated")));
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); partition.count()];
    for &v in labelled {
        groups[partition.sector_of(points.get(v))].push(v);
    }
    groups.retain(|g| !g.is_empty());
    if anchors.len() < groups.len() + 1 {
        return Err(Error::contract(format!(
            "{} anchors for {} nonempty parts",
            anchors.len(),
            groups.len()
        )));
    }
    let mut path = Vec::with_capacity(anchors.len() + labelled.len());
    for (k, g) in groups.iter().enumerate() {
        path.push(anchors[k]);
        path.extend_from_slice(g);
    }
    path.extend_from_slice(&anchors[groups.len()..]);
    Ok(path)
}

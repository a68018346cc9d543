//! Constructed point sets used by tests, the acceptance suite and the CLI.

use rand::Rng;

use crate::error::Result;
use crate::geometry::{rng_for, PointSet};

/// A dense block with a round hole, three nearly coincident points at the
/// hole's centre and two chains of two points bridging them to the block in
/// opposite directions.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub points: PointSet,
    pub rho: f64,
    pub centre: [f64; 2],
    pub clique: Vec<usize>,
    pub chains: [Vec<usize>; 2],
}

/// Side of the block.
pub const PLANTED_BLOCK: f64 = 0.6;
/// Radius `rho` of the planted instance.
pub const PLANTED_RHO: f64 = 0.2;
/// Points drawn in the block before the hole is cut out.
pub const PLANTED_BLOCK_POINTS: usize = 54_000;

/// Planted instance for `eta = 0.1`: lattice spacing 0.02, about 60 points
/// per full cell, hole radius `1.1 rho` centred in a cell.
pub fn planted_clique_instance(seed: u64) -> Result<PlantedInstance> {
    let rho = PLANTED_RHO;
    let h = 0.1 * rho;
    let hole = 1.1 * rho;
    let mut rng = rng_for(seed);
    let gx = rng.gen_range(11..=18) as f64;
    let gy = rng.gen_range(11..=18) as f64;
    let centre = [(gx + 0.5) * h, (gy + 0.5) * h];
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(PLANTED_BLOCK_POINTS);
    for _ in 0..PLANTED_BLOCK_POINTS {
        let p = [rng.gen_range(0.0..PLANTED_BLOCK), rng.gen_range(0.0..PLANTED_BLOCK)];
        if (p[0] - centre[0]).hypot(p[1] - centre[1]) > hole {
            rows.push(p.to_vec());
        }
    }
    let first = rows.len();
    for (dx, dy) in [(0.0, 0.0), (0.002, 0.0), (0.0, 0.002)] {
        rows.push(vec![centre[0] + dx, centre[1] + dy]);
    }
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let (ux, uy) = (theta.cos(), theta.sin());
    let mut chains = [Vec::new(), Vec::new()];
    for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
        for step in [0.4, 0.8] {
            chains[k].push(rows.len());
            rows.push(vec![centre[0] + sign * step * rho * ux, centre[1] + sign * step * rho * uy]);
        }
    }
    Ok(PlantedInstance {
        points: PointSet::from_rows(&rows)?,
        rho,
        centre,
        clique: (first..first + 3).collect(),
        chains,
    })
}

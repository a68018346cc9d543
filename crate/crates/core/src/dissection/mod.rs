//! The lattice dissection at scale `eta * r`, dense/sparse/bad cells and the
//! structure graphs on them.
//!
//! Lattice computations use integer coordinates and the threshold
//! `r' / (eta r)`, so adjacency between grid points is decided without
//! rounding noise; real distances are lattice distances times the spacing.

mod audit;
mod chernoff;
mod structure;

pub(crate) use audit::local_dense_path;
pub use audit::{audit_properties, recheck_witness, AuditConstants, PropertyAudit, Property, Verdict, Witness};
pub use chernoff::{chernoff_upper_bound, entropy_h};
pub use structure::{classify_and_extract, ComponentSet, StructureGraphs};

use crate::error::{Error, Result};
use crate::geometry::{NormSpec, PointSet};

/// Upper limit on the number of lattice points.
pub const MAX_GRID_POINTS: usize = 50_000_000;

#[derive(Debug, Clone)]
pub struct Dissection {
    norm: NormSpec,
    eta: f64,
    r: f64,
    r_prime: f64,
    spacing: f64,
    per_axis: usize,
    dense_threshold: usize,
    cell_members: Vec<Vec<usize>>,
    stencil: Vec<Vec<i64>>,
}

impl Dissection {
    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn r_prime(&self) -> f64 {
        self.r_prime
    }

    /// Lattice spacing `eta * r`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn dense_threshold(&self) -> usize {
        self.dense_threshold
    }

    /// `r'` in lattice units.
    pub fn lattice_threshold(&self) -> f64 {
        self.r_prime / self.spacing
    }

    pub fn grid_point_count(&self) -> usize {
        self.cell_members.len()
    }

    /// Integer coordinates of grid point `g`; the first axis is most significant,
    /// so index order is lexicographic order.
    pub fn coords(&self, g: usize) -> Vec<i64> {
        let d = self.norm.dim();
        let mut out = vec![0i64; d];
        let mut rest = g;
        for a in (0..d).rev() {
            out[a] = (rest % self.per_axis) as i64;
            rest /= self.per_axis;
        }
        out
    }

    pub fn index_of(&self, c: &[i64]) -> Option<usize> {
        let m = self.per_axis as i64;
        let mut g = 0usize;
        for &x in c {
            if x < 0 || x >= m {
                return None;
            }
            g = g * self.per_axis + x as usize;
        }
        Some(g)
    }

    /// Position of grid point `g` in the cube.
    pub fn position(&self, g: usize) -> Vec<f64> {
        self.coords(g).iter().map(|&c| c as f64 * self.spacing).collect()
    }

    /// Distance between grid points in real units.
    pub fn grid_distance(&self, g1: usize, g2: usize) -> f64 {
        let a: Vec<f64> = self.coords(g1).iter().map(|&c| c as f64).collect();
        let b: Vec<f64> = self.coords(g2).iter().map(|&c| c as f64).collect();
        self.norm.dist(&a, &b) * self.spacing
    }

    /// Whether grid points are adjacent in the lattice graph at `r'`.
    pub fn h_adjacent(&self, g1: usize, g2: usize) -> bool {
        if g1 == g2 {
            return false;
        }
        let a: Vec<f64> = self.coords(g1).iter().map(|&c| c as f64).collect();
        let b: Vec<f64> = self.coords(g2).iter().map(|&c| c as f64).collect();
        self.norm.dist(&a, &b) <= self.lattice_threshold()
    }

    /// Input points in the half-open cell of `g`.
    pub fn members(&self, g: usize) -> &[usize] {
        &self.cell_members[g]
    }

    /// Grid point whose cell holds position `z`.
    pub fn cell_of(&self, z: &[f64]) -> usize {
        let m = self.per_axis as i64;
        let c: Vec<i64> =
            z.iter().map(|&x| ((x / self.spacing).floor() as i64).clamp(0, m - 1)).collect();
        self.index_of(&c).expect("clamped coordinates")
    }

    /// Lattice neighbours of `g` (distance `<= r'`, `g` excluded), ascending.
    pub fn h_neighbors(&self, g: usize) -> Vec<usize> {
        let c = self.coords(g);
        let mut out: Vec<usize> = self
            .stencil
            .iter()
            .filter_map(|o| {
                let q: Vec<i64> = c.iter().zip(o).map(|(a, b)| a + b).collect();
                self.index_of(&q)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Nonzero integer offsets within the lattice threshold.
    pub fn stencil(&self) -> &[Vec<i64>] {
        &self.stencil
    }
}

/// Bins `points` into the lattice `[0,1]^d ∩ (eta r) Z^d`.
pub fn build_dissection(
    points: &PointSet,
    norm: &NormSpec,
    eta: f64,
    r: f64,
    dense_threshold: usize,
) -> Result<Dissection> {
    if !points.is_empty() {
        points.check_norm(norm)?;
    }
    let dmax = 1.0 / norm.diam_factor();
    if !(eta > 0.0 && eta < dmax) {
        return Err(Error::contract(format!("eta must lie in (0, {dmax}), got {eta}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::contract(format!("r must be positive, got {r}")));
    }
    if dense_threshold == 0 {
        return Err(Error::contract("dense threshold must be >= 1"));
    }
    let spacing = eta * r;
    let r_prime = r * (1.0 - eta * norm.diam_factor());
    let per_axis = (1.0 / spacing + 1e-9).floor() as usize + 1;
    let d = norm.dim();
    let total = (per_axis as f64).powi(d as i32);
    if total > MAX_GRID_POINTS as f64 {
        return Err(Error::Capacity { what: "lattice size", n: total as usize, limit: MAX_GRID_POINTS });
    }
    let t = r_prime / spacing;
    let reach = t.floor() as i64 + 1;
    let mut stencil = Vec::new();
    let mut o = vec![-reach; d];
    let zero = vec![0.0; d];
    loop {
        if o.iter().any(|&x| x != 0) {
            let of: Vec<f64> = o.iter().map(|&x| x as f64).collect();
            if norm.dist(&zero, &of) <= t {
                stencil.push(o.clone());
            }
        }
        let mut a = 0;
        while a < d && o[a] == reach {
            o[a] = -reach;
            a += 1;
        }
        if a == d {
            break;
        }
        o[a] += 1;
    }
    let mut diss = Dissection {
        norm: *norm,
        eta,
        r,
        r_prime,
        spacing,
        per_axis,
        dense_threshold,
        cell_members: vec![Vec::new(); total as usize],
        stencil,
    };
    for i in 0..points.len() {
        let g = diss.cell_of(points.get(i));
        diss.cell_members[g].push(i);
    }
    Ok(diss)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let e = NormSpec::euclidean_plane();
        let empty = PointSet::from_flat(2, vec![]).unwrap();
        assert_eq!(build_dissection(&empty, &e, 0.25, 1.0, 1).unwrap().grid_point_count(), 25);
        assert_eq!(build_dissection(&empty, &e, 0.3, 1.0, 1).unwrap().grid_point_count(), 16);
        let d = build_dissection(&empty, &e, 1.0 / 9.0, 0.3, 35).unwrap();
        assert_eq!(d.per_axis(), 31);
    }

    #[test]
    fn membership_and_coords() {
        let e = NormSpec::euclidean_plane();
        let one = PointSet::from_rows(&[vec![0.1, 0.1]]).unwrap();
        let d = build_dissection(&one, &e, 0.25, 1.0, 1).unwrap();
        assert_eq!(d.members(0), &[0]);
        assert_eq!(d.coords(7), vec![1, 2]);
        assert_eq!(d.index_of(&[1, 2]), Some(7));
        assert_eq!(d.position(7), vec![0.25, 0.5]);
        let corner = PointSet::from_rows(&[vec![1.0, 1.0], vec![0.99, 0.0]]).unwrap();
        let d = build_dissection(&corner, &e, 0.3, 1.0, 1).unwrap();
        assert_eq!(d.members(15), &[0]);
        assert_eq!(d.members(12), &[1]);
    }

    #[test]
    fn parameter_checks() {
        let e = NormSpec::euclidean_plane();
        let pts = PointSet::from_rows(&[vec![0.1, 0.1]]).unwrap();
        assert!(build_dissection(&pts, &e, 0.0, 1.0, 1).is_err());
        assert!(build_dissection(&pts, &e, 0.75, 1.0, 1).is_err());
        assert!(build_dissection(&pts, &e, 0.1, 0.0, 1).is_err());
        assert!(build_dissection(&pts, &e, 0.1, 1.0, 0).is_err());
    }

    #[test]
    fn stencil_matches_distance() {
        let e = NormSpec::euclidean_plane();
        let empty = PointSet::from_flat(2, vec![]).unwrap();
        let d = build_dissection(&empty, &e, 0.1, 0.3, 1).unwrap();
        for g in [0, 100, 480] {
            let nb = d.h_neighbors(g);
            let brute: Vec<usize> =
                (0..d.grid_point_count()).filter(|&h| d.h_adjacent(g, h)).collect();
            assert_eq!(nb, brute);
            for &h in &nb {
                assert!(d.grid_distance(g, h) <= d.r_prime() * (1.0 + 1e-12));
            }
        }
    }
}

//! Hitting radii of monotone properties along the edge process.
//!
//! Searches run over edge ranks: rank count `m` means the first `m` pairs of
//! the process are present, and the hitting radius is the length of pair
//! `m - 1` (or 0 when the empty graph already qualifies).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{NormSpec, PointSet};
use crate::graph::{Dsu, EdgeProcess, GeometricGraph};
use crate::grid::GridIndex;
use crate::oracles::{is_hamiltonian_exact, vertex_connectivity_at_least, HAMILTON_CEILING};

/// Radius reached after inserting the first `m` pairs.
pub fn radius_at(proc: &EdgeProcess, m: usize) -> f64 {
    if m == 0 {
        0.0
    } else {
        proc.length(m - 1)
    }
}

fn never_reached(proc: &EdgeProcess, what: &str) -> Error {
    match proc.cutoff() {
        Some(cutoff) => Error::NotReached { cutoff },
        None => Error::Unsatisfiable(what.to_string()),
    }
}

/// Smallest rank count `m >= lo` with `pred(graph_at_rank(m))`.
///
/// The caller asserts that `pred` fails below `lo`. Probes gallop upward from
/// `lo` and then bisect, which is cheap when the answer sits near `lo`.
pub fn first_rank_from<F>(proc: &EdgeProcess, lo: usize, mut pred: F) -> Result<usize>
where
    F: FnMut(&GeometricGraph) -> Result<bool>,
{
    let len = proc.len();
    let lo = lo.min(len);
    if pred(&proc.graph_at_rank(lo))? {
        return Ok(lo);
    }
    let (mut bad, mut step) = (lo, 1usize);
    let good = loop {
        let probe = (bad + step).min(len);
        if pred(&proc.graph_at_rank(probe))? {
            break probe;
        }
        if probe == len {
            return Err(never_reached(proc, "predicate false on every graph of the process"));
        }
        bad = probe;
        step *= 2;
    };
    let (mut bad, mut good) = (bad, good);
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if pred(&proc.graph_at_rank(mid))? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Smallest rank count at which a monotone predicate holds.
pub fn first_rank<F>(proc: &EdgeProcess, mut pred: F) -> Result<usize>
where
    F: FnMut(&GeometricGraph) -> Result<bool>,
{
    let len = proc.len();
    if pred(&proc.graph_at_rank(0))? {
        return Ok(0);
    }
    if !pred(&proc.graph_at_rank(len))? {
        return Err(never_reached(proc, "predicate false on every graph of the process"));
    }
    let (mut bad, mut good) = (0, len);
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if pred(&proc.graph_at_rank(mid))? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(good)
}

/// Hitting radius of a monotone graph predicate.
pub fn rho_property<F>(proc: &EdgeProcess, pred: F) -> Result<f64>
where
    F: FnMut(&GeometricGraph) -> Result<bool>,
{
    Ok(radius_at(proc, first_rank(proc, pred)?))
}

/// Rank count at which the last vertex reaches degree `k`, by a linear scan.
pub fn min_degree_rank(proc: &EdgeProcess, k: usize) -> Result<usize> {
    let n = proc.n();
    if k == 0 || k >= n {
        return Err(Error::contract(format!("k must be in 1..={}, got {k}", n - 1)));
    }
    let mut deg = vec![0usize; n];
    let mut short = n;
    for m in 0..proc.len() {
        let (i, j) = proc.edge(m);
        for v in [i, j] {
            deg[v] += 1;
            if deg[v] == k {
                short -= 1;
            }
        }
        if short == 0 {
            return Ok(m + 1);
        }
    }
    Err(never_reached(proc, "minimum degree"))
}

/// Hitting radius of minimum degree `>= k`: the largest k-th nearest distance.
pub fn rho_min_degree(proc: &EdgeProcess, k: usize) -> Result<f64> {
    let n = proc.n();
    if k == 0 || k >= n {
        return Err(Error::contract(format!("k must be in 1..={}, got {k}", n - 1)));
    }
    let mut best = 0.0f64;
    for i in 0..n {
        best = best.max(proc.kth_nearest_distance(i, k)?);
    }
    Ok(best)
}

/// Same as [`rho_min_degree`] straight from the points, through a grid.
pub fn rho_min_degree_points(points: &PointSet, norm: &NormSpec, k: usize) -> Result<f64> {
    let n = points.len();
    if k == 0 || k >= n {
        return Err(Error::contract(format!("k must be in 1..={}, got {k}", n.saturating_sub(1))));
    }
    // cells holding about 2k points each on average
    let side = ((2 * k) as f64 / n as f64).powf(1.0 / norm.dim() as f64).min(1.0);
    let grid = GridIndex::build(points, side)?;
    let mut best = 0.0f64;
    for i in 0..n {
        best = best.max(grid.kth_nearest_distance(i, k, norm)?);
    }
    Ok(best)
}

/// Rank count at which the graph becomes connected (union-find scan).
pub fn connected_rank(proc: &EdgeProcess) -> Result<usize> {
    let mut dsu = Dsu::new(proc.n());
    if dsu.sets() <= 1 {
        return Ok(0);
    }
    for m in 0..proc.len() {
        let (i, j) = proc.edge(m);
        if dsu.union(i, j) && dsu.sets() == 1 {
            return Ok(m + 1);
        }
    }
    Err(never_reached(proc, "connectivity"))
}

pub fn rho_connected(proc: &EdgeProcess) -> Result<f64> {
    Ok(radius_at(proc, connected_rank(proc)?))
}

/// Rank count for k-connectivity with a caller-supplied test `oracle(g, k)`.
pub fn k_connected_rank<F>(proc: &EdgeProcess, k: usize, mut oracle: F) -> Result<usize>
where
    F: FnMut(&GeometricGraph, usize) -> Result<bool>,
{
    let n = proc.n();
    if n <= k {
        return Err(Error::contract(format!("k-connectivity needs n > k, got n={n}, k={k}")));
    }
    if k == 0 {
        return Ok(0);
    }
    let lo = min_degree_rank(proc, k)?;
    first_rank_from(proc, lo, |g| oracle(g, k))
}

/// Hitting radius of k-connectivity with a caller-supplied oracle.
pub fn rho_k_connected<F>(proc: &EdgeProcess, k: usize, oracle: F) -> Result<f64>
where
    F: FnMut(&GeometricGraph, usize) -> Result<bool>,
{
    Ok(radius_at(proc, k_connected_rank(proc, k, oracle)?))
}

/// The default oracle: linear-time cut-vertex search for `k <= 2`, flows above.
pub fn default_connectivity_oracle(g: &GeometricGraph, k: usize) -> Result<bool> {
    match k {
        0 => Ok(true),
        1 => Ok(g.is_connected()),
        2 => Ok(g.is_biconnected()),
        _ => vertex_connectivity_at_least(g, k),
    }
}

/// Rank count at which the exact oracle first finds a Hamilton cycle.
pub fn hamiltonian_rank(proc: &EdgeProcess) -> Result<usize> {
    let n = proc.n();
    if n < 3 {
        return Err(Error::contract(format!("Hamiltonicity needs n >= 3, got {n}")));
    }
    if n > HAMILTON_CEILING {
        return Err(Error::Capacity { what: "exact Hamiltonicity", n, limit: HAMILTON_CEILING });
    }
    // 2-connectivity is necessary, so the search may start there
    let lo = k_connected_rank(proc, 2, default_connectivity_oracle)?;
    first_rank_from(proc, lo, |g| Ok(is_hamiltonian_exact(g)?.is_some()))
}

pub fn rho_hamiltonian_exact(proc: &EdgeProcess) -> Result<f64> {
    Ok(radius_at(proc, hamiltonian_rank(proc)?))
}

/// `pi n r^2 - ln n - ln ln n`.
pub fn x_statistic(n: usize, radius: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::contract(format!("x statistic needs n >= 3, got {n}")));
    }
    let nf = n as f64;
    Ok(std::f64::consts::PI * nf * radius * radius - nf.ln() - nf.ln().ln())
}

/// Hitting radii of one point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingReport {
    /// Entry `k - 1` holds the radius for minimum degree `>= k`.
    pub rho_min_degree: Vec<f64>,
    pub rho_connected: f64,
    /// Entry `k - 1` holds the radius for k-connectivity.
    pub rho_k_connected: Vec<f64>,
    pub rho_hamiltonian: Option<f64>,
    /// Only for the Euclidean plane.
    pub x_statistic: Option<f64>,
}

impl HittingReport {
    /// Violations of the chain inequalities, as readable strings.
    pub fn chain_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, (md, kc)) in self.rho_min_degree.iter().zip(&self.rho_k_connected).enumerate() {
            if md > kc {
                out.push(format!("min degree {} radius {md} > {}-connected radius {kc}", k + 1, k + 1));
            }
        }
        if let Some(&md1) = self.rho_min_degree.first() {
            if md1 > self.rho_connected {
                out.push(format!("min degree 1 radius {md1} > connected radius {}", self.rho_connected));
            }
        }
        if let (Some(ham), Some(&c2)) = (self.rho_hamiltonian, self.rho_k_connected.get(1)) {
            if c2 > ham {
                out.push(format!("2-connected radius {c2} > Hamiltonian radius {ham}"));
            }
        }
        if let Some(ham) = self.rho_hamiltonian {
            if self.rho_connected > ham {
                out.push(format!("connected radius {} > Hamiltonian radius {ham}", self.rho_connected));
            }
        }
        out
    }
}

/// Full report from a materialized or truncated process.
pub fn hitting_report(proc: &EdgeProcess, k_max: usize, with_hamiltonian: bool) -> Result<HittingReport> {
    let n = proc.n();
    if k_max == 0 || k_max >= n {
        return Err(Error::contract(format!("k_max must be in 1..={}, got {k_max}", n - 1)));
    }
    let mut rho_min_degree = Vec::with_capacity(k_max);
    let mut kconn = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        rho_min_degree.push(radius_at(proc, min_degree_rank(proc, k)?));
        kconn.push(rho_k_connected(proc, k, default_connectivity_oracle)?);
    }
    let rho_connected = rho_connected(proc)?;
    let rho_hamiltonian = if with_hamiltonian { Some(rho_hamiltonian_exact(proc)?) } else { None };
    let x_statistic = if proc.norm().is_planar_euclidean() && n >= 3 && k_max >= 2 {
        Some(x_statistic(n, rho_min_degree[1])?)
    } else {
        None
    };
    Ok(HittingReport {
        rho_min_degree,
        rho_connected,
        rho_k_connected: kconn,
        rho_hamiltonian,
        x_statistic,
    })
}

/// Builds the process for `points`, truncating large instances and doubling
/// the cutoff until `f` stops reporting [`Error::NotReached`].
pub fn with_process<T, F>(points: &PointSet, norm: &NormSpec, initial_cutoff: f64, mut f: F) -> Result<T>
where
    F: FnMut(&EdgeProcess) -> Result<T>,
{
    if points.len() <= 2000 {
        return f(&EdgeProcess::build(points, norm)?);
    }
    let mut cutoff = initial_cutoff.max(1e-9);
    loop {
        let proc = EdgeProcess::build_truncated(points, norm, cutoff)?;
        match f(&proc) {
            Err(Error::NotReached { .. }) if proc.cutoff().is_some() => {
                cutoff *= 2.0;
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_uniform_points;

    fn triangle() -> EdgeProcess {
        let pts = PointSet::from_rows(&[vec![0.0, 0.0], vec![0.375, 0.0], vec![0.375, 0.5]]).unwrap();
        EdgeProcess::build(&pts, &NormSpec::euclidean_plane()).unwrap()
    }

    fn square() -> EdgeProcess {
        let pts = PointSet::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        EdgeProcess::build(&pts, &NormSpec::euclidean_plane()).unwrap()
    }

    #[test]
    fn property_examples() {
        let t = triangle();
        assert_eq!(rho_property(&t, |g| Ok(g.edge_count() >= 1)).unwrap(), 0.375);
        assert_eq!(rho_property(&t, |g| Ok(g.is_connected())).unwrap(), 0.5);
        assert_eq!(rho_property(&t, |_| Ok(true)).unwrap(), 0.0);
        assert!(matches!(rho_property(&t, |_| Ok(false)), Err(Error::Unsatisfiable(_))));
    }

    #[test]
    fn min_degree_examples() {
        let t = triangle();
        assert_eq!(rho_min_degree(&t, 1).unwrap(), 0.5);
        assert_eq!(rho_min_degree(&t, 2).unwrap(), 0.625);
        assert!(rho_min_degree(&t, 3).is_err());
        assert_eq!(rho_min_degree(&square(), 2).unwrap(), 1.0);
    }

    #[test]
    fn connectivity_examples() {
        let s = square();
        assert_eq!(rho_k_connected(&s, 2, default_connectivity_oracle).unwrap(), 1.0);
        assert_eq!(rho_k_connected(&s, 2, |g, k| vertex_connectivity_at_least(g, k)).unwrap(), 1.0);
        let t = triangle();
        assert_eq!(rho_k_connected(&t, 2, default_connectivity_oracle).unwrap(), 0.625);
        assert_eq!(rho_k_connected(&t, 1, default_connectivity_oracle).unwrap(), rho_connected(&t).unwrap());
        assert!(rho_k_connected(&t, 3, default_connectivity_oracle).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(rho_hamiltonian_exact(&triangle()).unwrap(), 0.625);
        assert_eq!(rho_hamiltonian_exact(&square()).unwrap(), 1.0);
        let line = PointSet::from_rows(&[vec![0.0, 0.0], vec![0.4, 0.0], vec![1.0, 0.0]]).unwrap();
        let p = EdgeProcess::build(&line, &NormSpec::euclidean_plane()).unwrap();
        assert_eq!(rho_hamiltonian_exact(&p).unwrap(), 1.0);
        let two = PointSet::from_rows(&[vec![0.0, 0.0], vec![0.4, 0.0]]).unwrap();
        let p = EdgeProcess::build(&two, &NormSpec::euclidean_plane()).unwrap();
        assert!(rho_hamiltonian_exact(&p).is_err());
    }

    #[test]
    fn x_statistic_examples() {
        let n = 1000usize;
        let nf = n as f64;
        let r = ((nf.ln() + nf.ln().ln()) / (std::f64::consts::PI * nf)).sqrt();
        assert!(x_statistic(n, r).unwrap().abs() < 1e-12);
        assert_eq!(x_statistic(n, 0.0).unwrap(), -(nf.ln() + nf.ln().ln()));
        let want = 20.0 * std::f64::consts::PI * 0.01 - 20f64.ln() - 20f64.ln().ln();
        assert!((x_statistic(20, 0.1).unwrap() - want).abs() < 1e-12);
        assert!(x_statistic(2, 0.1).is_err());
    }

    #[test]
    fn routes_agree() {
        let e = NormSpec::euclidean_plane();
        for seed in 0..20 {
            let pts = sample_uniform_points(40, &e, seed).unwrap();
            let p = EdgeProcess::build(&pts, &e).unwrap();
            for k in 1..=3 {
                let a = rho_min_degree(&p, k).unwrap();
                let b = radius_at(&p, min_degree_rank(&p, k).unwrap());
                let c = rho_property(&p, |g| Ok(g.min_degree() >= k)).unwrap();
                let d = rho_min_degree_points(&pts, &e, k).unwrap();
                assert_eq!((a, a, a), (b, c, d));
            }
            let c2 = rho_k_connected(&p, 2, default_connectivity_oracle).unwrap();
            let f2 = rho_k_connected(&p, 2, |g, k| vertex_connectivity_at_least(g, k)).unwrap();
            assert_eq!(c2, f2);
            assert_eq!(rho_connected(&p).unwrap(), rho_property(&p, |g| Ok(g.is_connected())).unwrap());
        }
    }

    #[test]
    fn truncated_reports_not_reached() {
        let e = NormSpec::euclidean_plane();
        let pts = sample_uniform_points(2500, &e, 1).unwrap();
        let p = EdgeProcess::build_truncated(&pts, &e, 0.005).unwrap();
        assert!(matches!(rho_connected(&p), Err(Error::NotReached { .. })));
        let full = EdgeProcess::build(&pts, &e).unwrap();
        let want = rho_k_connected(&full, 2, default_connectivity_oracle).unwrap();
        let got = with_process(&pts, &e, 0.005, |p| rho_k_connected(p, 2, default_connectivity_oracle));
        assert_eq!(got.unwrap(), want);
    }

    #[test]
    fn report_chain_holds() {
        let e = NormSpec::euclidean_plane();
        let pts = sample_uniform_points(12, &e, 5).unwrap();
        let p = EdgeProcess::build(&pts, &e).unwrap();
        let r = hitting_report(&p, 3, true).unwrap();
        assert!(r.chain_violations().is_empty());
        assert!(r.x_statistic.is_some());
    }
}

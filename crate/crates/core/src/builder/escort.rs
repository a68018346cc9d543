use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::plan::{Plan, Role};
use super::{BuildFailure, BuildStage};
use crate::dissection::{local_dense_path, Property, Witness};
use crate::error::{Error, Result};
use crate::graph::GeometricGraph;
use crate::grid::GridIndex;
use crate::oracles::{remove_chords, two_disjoint_paths, PathMode};

/// Two paths from the giant's vertices to one small component, and the
/// dense grid path joining the cells of their giant endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscortBundle {
    pub component: usize,
    /// `a1 .. b1`
    pub first: Vec<usize>,
    /// `a2 .. b2`
    pub second: Vec<usize>,
    /// Grid path from the cell of `a1` to the cell of `a2`.
    pub connector: Vec<usize>,
}

impl EscortBundle {
    pub fn a1(&self) -> usize {
        self.first[0]
    }

    pub fn a2(&self) -> usize {
        self.second[0]
    }

    pub fn b1(&self) -> usize {
        *self.first.last().expect("nonempty path")
    }

    pub fn b2(&self) -> usize {
        *self.second.last().expect("nonempty path")
    }

    /// All path vertices, each once.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.first.iter().chain(&self.second).copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Vertices that leave the cycle when the escort is dropped.
    pub fn removal_count(&self) -> usize {
        self.vertices().len() - 2
    }
}

/// Escort paths and connector for small component `comp`, avoiding `blocked`.
pub(crate) fn find_escort(
    plan: &Plan,
    index: &GridIndex,
    comp: usize,
    blocked: &[bool],
) -> Result<std::result::Result<EscortBundle, BuildFailure>> {
    let mut pair = None;
    for wide in [false, true] {
        match escort_attempt(plan, index, comp, blocked, wide) {
            Ok(p) => {
                pair = Some(p);
                break;
            }
            Err(Error::Infeasible(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let Some((first, second)) = pair else {
        return Ok(Err(BuildFailure::new(
            BuildStage::Escort,
            format!("no two disjoint paths reach small component {comp}: G(V, rho) is not 2-connected"),
        )));
    };
    let diss = &plan.diss;
    let p1 = diss.cell_of(plan.points.get(first[0]));
    let p2 = diss.cell_of(plan.points.get(second[0]));
    let Some(connector) = local_dense_path(diss, &plan.sg, p1, p2, plan.consts.locality * diss.r()) else {
        return Ok(Err(BuildFailure::property(
            BuildStage::Connector,
            Property::P5,
            format!("no local dense path for small component {comp}"),
            Some(Witness::NoLocalPath { p: p1, q: p2 }),
        )));
    };
    Ok(Ok(EscortBundle { component: comp, first, second, connector }))
}

fn escort_attempt(
    plan: &Plan,
    index: &GridIndex,
    comp: usize,
    blocked: &[bool],
    wide: bool,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let points = plan.points;
    let norm = &plan.norm;
    let rho = plan.rho;
    let diss = &plan.diss;
    let c = &plan.small[comp];
    let usable = |v: usize, want: Role| plan.role[v] == want && !blocked[v];

    let mut local: Vec<usize> = c.vertices.clone();
    let mut free: HashSet<usize> = HashSet::new();
    if wide {
        free.extend((0..points.len()).filter(|&v| usable(v, Role::Free)));
    } else {
        let reach = plan.consts.escort_radius_factor * diss.r() + diss.spacing() * norm.diam_factor();
        for &g in &c.cells {
            let centre: Vec<f64> = diss.position(g).iter().map(|x| x + diss.spacing() / 2.0).collect();
            index.for_each_within(&centre, reach, norm, |j, _| {
                if usable(j, Role::Free) {
                    free.insert(j);
                }
                true
            });
        }
    }
    let mut free: Vec<usize> = free.into_iter().collect();
    free.sort_unstable();
    local.extend(&free);
    let inner = local.len();
    let cap = if wide { 8 } else { 2 };
    let mut giant: Vec<usize> = Vec::new();
    for &x in &local[..inner] {
        let mut found = 0;
        index.for_each_within(points.get(x), rho, norm, |j, _| {
            if usable(j, Role::Giant) {
                giant.push(j);
                found += 1;
            }
            found < cap
        });
    }
    giant.sort_unstable();
    giant.dedup();
    local.extend(&giant);
    let id: HashMap<usize, usize> = local.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut edges = Vec::new();
    for (kx, &x) in local[..inner].iter().enumerate() {
        index.for_each_within(points.get(x), rho, norm, |j, _| {
            if let Some(&kj) = id.get(&j) {
                if kj >= inner || kj > kx {
                    edges.push((kx, kj));
                }
            }
            true
        });
    }
    let g = GeometricGraph::from_edges(local.len(), &edges, rho)?;
    let a: Vec<usize> = (inner..local.len()).collect();
    let b: Vec<usize> = (0..c.vertices.len()).collect();
    if a.is_empty() {
        return Err(Error::Infeasible("no giant vertex near the component".into()));
    }
    let mode = if b.len() == 1 { PathMode::ShareEndpoint } else { PathMode::Disjoint };
    let pair = two_disjoint_paths(&g, &a, &b, mode)?;
    let adjacent = |u: usize, v: usize| norm.dist(points.get(u), points.get(v)) <= rho;
    let lift = |p: &[usize]| -> Vec<usize> { remove_chords(&p.iter().map(|&k| local[k]).collect::<Vec<_>>(), adjacent) };
    Ok((lift(&pair.first), lift(&pair.second)))
}

/// Direct check of the escort invariants: path shape, disjointness within
/// and across bundles, and connector validity and disjointness.
pub fn validate_bundles(plan: &Plan, bundles: &[EscortBundle]) -> std::result::Result<(), String> {
    let points = plan.points;
    let norm = &plan.norm;
    let diss = &plan.diss;
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut cell_owner: HashMap<usize, usize> = HashMap::new();
    for (i, b) in bundles.iter().enumerate() {
        let comp = plan.small.get(b.component).ok_or(format!("bundle {i}: unknown component"))?;
        let single = comp.vertices.len() == 1;
        for (name, p) in [("first", &b.first), ("second", &b.second)] {
            if p.len() < 2 {
                return Err(format!("bundle {i}: {name} path too short"));
            }
            if plan.role[p[0]] != Role::Giant {
                return Err(format!("bundle {i}: {name} path does not start in the giant"));
            }
            if plan.role[p[p.len() - 1]] != Role::Small(b.component) {
                return Err(format!("bundle {i}: {name} path does not end in its component"));
            }
            if let Some(&v) = p[1..p.len() - 1].iter().find(|&&v| plan.role[v] != Role::Free) {
                return Err(format!("bundle {i}: {name} path meets a component at inner vertex {v}"));
            }
            for w in p.windows(2) {
                let len = norm.dist(points.get(w[0]), points.get(w[1]));
                if len > plan.rho {
                    return Err(format!("bundle {i}: edge {}-{} has length {len}", w[0], w[1]));
                }
            }
            if p.iter().collect::<HashSet<_>>().len() != p.len() {
                return Err(format!("bundle {i}: {name} path repeats a vertex"));
            }
        }
        let firsts: HashSet<usize> = b.first.iter().copied().collect();
        for &v in &b.second {
            if firsts.contains(&v) && !(single && v == b.b1()) {
                return Err(format!("bundle {i}: paths share vertex {v}"));
            }
        }
        if (b.b1() == b.b2()) != single {
            return Err(format!("bundle {i}: endpoint sharing does not match component size"));
        }
        for v in b.vertices() {
            if let Some(j) = owner.insert(v, i) {
                return Err(format!("bundles {j} and {i} share vertex {v}"));
            }
        }
        let conn = &b.connector;
        let p1 = diss.cell_of(points.get(b.a1()));
        let p2 = diss.cell_of(points.get(b.a2()));
        if conn.first() != Some(&p1) || conn.last() != Some(&p2) {
            return Err(format!("bundle {i}: connector does not join the anchor cells"));
        }
        let giant = plan.sg.giant;
        for (k, &g) in conn.iter().enumerate() {
            if plan.sg.d.component_of(g) != giant {
                return Err(format!("bundle {i}: connector leaves the giant at {g}"));
            }
            if k > 0 && !diss.h_adjacent(conn[k - 1], g) {
                return Err(format!("bundle {i}: connector step {} -> {g} is not an edge", conn[k - 1]));
            }
            if let Some(j) = cell_owner.insert(g, i) {
                return Err(format!("connectors {j} and {i} share grid point {g}"));
            }
        }
    }
    Ok(())
}

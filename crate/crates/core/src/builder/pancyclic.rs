use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::plan::{Plan, Role};
use super::tree::post_order;
use super::verify::verify_partial_cycle;
use super::BuilderConstants;
use crate::error::{Error, Result};
use crate::geometry::{NormSpec, PointSet};
use crate::graph::GeometricGraph;
use crate::oracles::{cycle_of_length, SPECTRUM_CEILING};

/// A base cycle and vertices removed from it one at a time; every prefix of
/// `deletions` leaves a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyStage {
    pub base: Vec<usize>,
    pub deletions: Vec<usize>,
}

impl FamilyStage {
    pub fn longest(&self) -> usize {
        self.base.len()
    }

    pub fn shortest(&self) -> usize {
        self.base.len() - self.deletions.len()
    }
}

/// Cycles of many lengths in compact form.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PancyclicFamily {
    pub n: usize,
    pub stages: Vec<FamilyStage>,
    /// Cycles produced directly, keyed by length.
    pub explicit: BTreeMap<usize, Vec<usize>>,
}

impl PancyclicFamily {
    pub fn contains(&self, len: usize) -> bool {
        self.explicit.contains_key(&len)
            || self.stages.iter().any(|s| s.shortest() <= len && len <= s.longest())
    }

    pub fn lengths(&self) -> Vec<usize> {
        (3..=self.n).filter(|&l| self.contains(l)).collect()
    }

    pub fn first_missing(&self) -> Option<usize> {
        (3..=self.n).find(|&l| !self.contains(l))
    }

    pub fn cycle(&self, len: usize) -> Option<Vec<usize>> {
        if let Some(c) = self.explicit.get(&len) {
            return Some(c.clone());
        }
        let s = self.stages.iter().find(|s| s.shortest() <= len && len <= s.longest())?;
        let drop = s.longest() - len;
        let mut gone = vec![false; self.n];
        for &v in &s.deletions[..drop] {
            gone[v] = true;
        }
        Some(s.base.iter().copied().filter(|&v| !gone[v]).collect())
    }
}

/// The first length that could not be produced, with what was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyFailure {
    pub length: usize,
    pub reason: String,
    pub family: PancyclicFamily,
}

/// Cycle kept as a doubly linked list; a deletion is accepted only when the
/// two neighbours of the removed vertex are within `rho`.
struct Shrinking<'a> {
    points: &'a PointSet,
    norm: &'a NormSpec,
    rho: f64,
    next: Vec<usize>,
    prev: Vec<usize>,
    inside: Vec<bool>,
    len: usize,
    stage: FamilyStage,
}

impl<'a> Shrinking<'a> {
    fn new(points: &'a PointSet, norm: &'a NormSpec, rho: f64, base: Vec<usize>) -> Self {
        let n = points.len();
        let (mut next, mut prev, mut inside) = (vec![usize::MAX; n], vec![usize::MAX; n], vec![false; n]);
        for k in 0..base.len() {
            let (a, b) = (base[k], base[(k + 1) % base.len()]);
            next[a] = b;
            prev[b] = a;
            inside[a] = true;
        }
        let len = base.len();
        Shrinking { points, norm, rho, next, prev, inside, len, stage: FamilyStage { base, deletions: Vec::new() } }
    }

    fn try_delete(&mut self, v: usize) -> bool {
        if !self.inside[v] || self.len <= 3 {
            return false;
        }
        let (p, s) = (self.prev[v], self.next[v]);
        if self.norm.dist(self.points.get(p), self.points.get(s)) > self.rho {
            return false;
        }
        self.next[p] = s;
        self.prev[s] = p;
        self.inside[v] = false;
        self.len -= 1;
        self.stage.deletions.push(v);
        true
    }

    /// Deletes up to `limit` candidates in order, retrying refused ones
    /// after later successes. Returns how many were deleted.
    fn delete(&mut self, candidates: impl IntoIterator<Item = usize>, limit: usize) -> usize {
        let mut done = 0;
        let mut pending = Vec::new();
        for v in candidates {
            if done == limit {
                break;
            }
            if self.try_delete(v) {
                done += 1;
            } else if self.inside[v] {
                pending.push(v);
            }
        }
        let mut progress = true;
        while progress && done < limit && !pending.is_empty() {
            progress = false;
            pending.retain(|&v| {
                if done < limit && self.try_delete(v) {
                    done += 1;
                    progress = true;
                    false
                } else {
                    true
                }
            });
        }
        done
    }
}

/// Cycles of every length `3..=n` in `G(points, rho)`: the Hamilton cycle
/// of the walk rules, shrunk by dropping labelled vertices, small component
/// interiors, escorts (each after as many giant vertices as the escort
/// holds, minus one) and finally giant cells leaf-first. Missing lengths
/// fall back to the exact search for small `n`.
pub fn build_pancyclic_family(
    points: &PointSet,
    norm: &NormSpec,
    rho: f64,
    consts: &BuilderConstants,
) -> Result<std::result::Result<PancyclicFamily, FamilyFailure>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::contract(format!("need at least 3 points, got {n}")));
    }
    let consts = BuilderConstants { k_dense: consts.k_pancyclic, ..*consts };
    let mut family = PancyclicFamily { n, ..Default::default() };
    let reason = constructive(points, norm, rho, &consts, &mut family)?.err().unwrap_or_default();
    if family.first_missing().is_some() && n <= SPECTRUM_CEILING {
        let g = GeometricGraph::from_points(points, norm, rho)?;
        for len in 3..=n {
            if !family.contains(len) {
                if let Some(c) = cycle_of_length(&g, len)? {
                    family.explicit.insert(len, c);
                }
            }
        }
    }
    match family.first_missing() {
        None => Ok(Ok(family)),
        Some(length) => {
            let reason = if reason.is_empty() { format!("no cycle of length {length}") } else { reason };
            Ok(Err(FamilyFailure { length, reason, family }))
        }
    }
}

fn constructive(
    points: &PointSet,
    norm: &NormSpec,
    rho: f64,
    consts: &BuilderConstants,
    family: &mut PancyclicFamily,
) -> Result<std::result::Result<(), String>> {
    let n = points.len();
    let plan = match Plan::prepare(points, norm, rho, consts, false)? {
        Ok(p) => p,
        Err(f) => return Ok(Err(f.to_string())),
    };
    let mut omit = vec![false; n];
    let mut active = vec![true; plan.escorts.len()];
    let base = match rebuild(&plan, &omit, &active, n) {
        Ok(b) => b,
        Err(e) => return Ok(Err(e)),
    };
    let mut cur = Shrinking::new(points, norm, rho, base);

    let mut first: Vec<usize> = plan.labels.values().flatten().copied().collect();
    first.sort_unstable();
    for b in &plan.escorts {
        let (b1, b2) = (b.b1(), b.b2());
        first.extend(plan.small[b.component].vertices.iter().filter(|&&v| v != b1 && v != b2));
    }
    let want = first.len();
    if cur.delete(first.iter().copied(), want) < want {
        let len = cur.len;
        family.stages.push(cur.stage);
        return Ok(Err(format!("stuck removing labelled or component vertices at length {len}")));
    }
    for &v in &first {
        omit[v] = true;
    }

    for i in 0..plan.escorts.len() {
        let e = &plan.escorts[i];
        let need = e.removal_count() - 1;
        let mut keep = vec![false; n];
        for (j, b) in plan.escorts.iter().enumerate() {
            if active[j] {
                keep[b.a1()] = true;
                keep[b.a2()] = true;
            }
        }
        let giant = |v: &usize| plan.role[*v] == Role::Giant && !keep[*v];
        let near: Vec<usize> =
            e.connector.iter().flat_map(|&g| plan.diss.members(g).iter().copied()).filter(giant).collect();
        let far = plan.giant_cells.iter().flat_map(|&g| plan.diss.members(g).iter().copied()).filter(giant);
        if cur.delete(near.into_iter().chain(far), need) < need {
            let len = cur.len;
            family.stages.push(cur.stage);
            return Ok(Err(format!("stuck removing giant vertices for escort {i} at length {len}")));
        }
        let shortest = cur.len;
        family.stages.push(cur.stage);
        active[i] = false;
        for v in e.vertices() {
            if v != e.a1() && v != e.a2() {
                omit[v] = true;
            }
        }
        let base = match rebuild(&plan, &omit, &active, shortest - 1) {
            Ok(b) => b,
            Err(msg) => return Ok(Err(msg)),
        };
        cur = Shrinking::new(points, norm, rho, base);
    }

    let order = post_order(&plan.tree, 0);
    let leaf_first = order.iter().flat_map(|&k| plan.diss.members(plan.giant_cells[k]).iter().copied());
    cur.delete(leaf_first, usize::MAX);
    let len = cur.len;
    family.stages.push(cur.stage);
    if len > 3 {
        return Ok(Err(format!("stuck removing giant vertices at length {len}")));
    }
    Ok(Ok(()))
}

fn rebuild(plan: &Plan, omit: &[bool], active: &[bool], expected: usize) -> std::result::Result<Vec<usize>, String> {
    let (cycle, _) = plan.assemble(omit, active).map_err(|f| f.to_string())?;
    if cycle.len() != expected {
        return Err(format!("rebuilt cycle has length {}, expected {expected}", cycle.len()));
    }
    if let Some(f) = verify_partial_cycle(plan.points, &plan.norm, plan.rho, &cycle).failure {
        return Err(format!("rebuilt cycle invalid: {f}"));
    }
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let e = NormSpec::euclidean_plane();
        let pts = PointSet::from_rows(&[vec![0.1, 0.1], vec![0.2, 0.1], vec![0.1, 0.2]]).unwrap();
        let fam = build_pancyclic_family(&pts, &e, 0.2, &BuilderConstants::desk()).unwrap().unwrap();
        assert_eq!(fam.lengths(), vec![3]);
        let c = fam.cycle(3).unwrap();
        assert!(verify_partial_cycle(&pts, &e, 0.2, &c).is_valid());
    }

    #[test]
    fn path_graph_fails_at_three() {
        let e = NormSpec::euclidean_plane();
        let pts = PointSet::from_rows(&[vec![0.1, 0.1], vec![0.2, 0.1], vec![0.3, 0.1]]).unwrap();
        let f = build_pancyclic_family(&pts, &e, 0.15, &BuilderConstants::desk()).unwrap().unwrap_err();
        assert_eq!(f.length, 3);
    }
}

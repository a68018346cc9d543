use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Dissection, StructureGraphs};
use crate::geometry::rng_for;

/// Separation `S`, locality `L` and proximity `M`, all in units of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditConstants {
    pub separation: f64,
    pub locality: f64,
    pub proximity: f64,
    /// Random dense pairs checked for the path property on top of the query pairs.
    pub p5_samples: usize,
    pub seed: u64,
}

impl AuditConstants {
    pub fn asymptotic() -> Self {
        AuditConstants { separation: 1000.0, locality: 100.0, proximity: 25.0, p5_samples: 200, seed: 0 }
    }

    pub fn desk() -> Self {
        AuditConstants { separation: 2.0, locality: 8.0, proximity: 3.0, p5_samples: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Concrete evidence of a failed property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    /// A `D` component of intermediate diameter.
    Component { id: usize, diameter: f64 },
    /// Two grid points whose distance breaks a separation rule.
    GridPair { p: usize, q: usize, distance: f64 },
    /// Dense points with no local `D` path between them.
    NoLocalPath { p: usize, q: usize },
    /// The ids of all large `D` components (zero or several).
    LargeComponents { ids: Vec<usize> },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Component { id, diameter } => write!(f, "component {id} diameter {diameter}"),
            Witness::GridPair { p, q, distance } => write!(f, "grid points {p} {q} distance {distance}"),
            Witness::NoLocalPath { p, q } => write!(f, "no local path {p} {q}"),
            Witness::LargeComponents { ids } => {
                let s: Vec<String> = ids.iter().map(usize::to_string).collect();
                write!(f, "large components [{}]", s.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: Property,
    pub pass: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyAudit {
    pub constants: AuditConstants,
    pub verdicts: Vec<Verdict>,
}

impl PropertyAudit {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.pass)
    }

    /// One `property,pass,witness` row per property.
    pub fn csv_rows(&self) -> Vec<[String; 3]> {
        self.verdicts
            .iter()
            .map(|v| {
                [
                    v.property.to_string(),
                    v.pass.to_string(),
                    v.witness.as_ref().map(ToString::to_string).unwrap_or_default(),
                ]
            })
            .collect()
    }
}

fn verdict(property: Property, witness: Option<Witness>) -> Verdict {
    Verdict { property, pass: witness.is_none(), witness }
}

/// Checks the six structural properties. The local-path property is checked
/// for `query_pairs` plus `p5_samples` random nearby dense pairs.
pub fn audit_properties(
    diss: &Dissection,
    sg: &StructureGraphs,
    constants: &AuditConstants,
    query_pairs: &[(usize, usize)],
) -> PropertyAudit {
    let verdicts = vec![
        verdict(Property::P1, p1(diss, sg, constants)),
        verdict(Property::P2, p2(diss, sg, constants)),
        verdict(Property::P3, p3(diss, sg, constants)),
        verdict(Property::P4, p4(diss, sg, constants)),
        verdict(Property::P5, p5(diss, sg, constants, query_pairs)),
        verdict(Property::P6, p6(sg)),
    ];
    PropertyAudit { constants: *constants, verdicts }
}

fn far(diss: &Dissection, c: &AuditConstants) -> f64 {
    c.separation * diss.r()
}

fn intermediate_diameter(diss: &Dissection, c: &AuditConstants, x: f64) -> bool {
    x >= diss.r_prime() && x <= far(diss, c)
}

fn p1(diss: &Dissection, sg: &StructureGraphs, c: &AuditConstants) -> Option<Witness> {
    (0..sg.d.count())
        .find(|&id| intermediate_diameter(diss, c, sg.d.diameters[id]))
        .map(|id| Witness::Component { id, diameter: sg.d.diameters[id] })
}

/// First pair across two point groups lying within the separation distance.
fn close_pair(diss: &Dissection, c: &AuditConstants, xs: &[usize], ys: &[usize]) -> Option<Witness> {
    let s = far(diss, c);
    for &p in xs {
        for &q in ys {
            let distance = diss.grid_distance(p, q);
            if distance <= s {
                return Some(Witness::GridPair { p, q, distance });
            }
        }
    }
    None
}

fn p2(diss: &Dissection, sg: &StructureGraphs, c: &AuditConstants) -> Option<Witness> {
    let small = sg.small_components();
    for (k, &a) in small.iter().enumerate() {
        for &b in &small[k + 1..] {
            if let Some(w) = close_pair(diss, c, &sg.d.members[a], &sg.d.members[b]) {
                return Some(w);
            }
        }
    }
    None
}

fn p3(diss: &Dissection, sg: &StructureGraphs, c: &AuditConstants) -> Option<Witness> {
    let bad: Vec<usize> = (0..sg.bad.len()).filter(|&g| sg.bad[g]).collect();
    for a in sg.small_components() {
        if let Some(w) = close_pair(diss, c, &sg.d.members[a], &bad) {
            return Some(w);
        }
    }
    None
}

fn p4(diss: &Dissection, sg: &StructureGraphs, c: &AuditConstants) -> Option<Witness> {
    // inside one component: any pair at distance in [r', S r]
    for (id, members) in sg.b.members.iter().enumerate() {
        if sg.b.diameters[id] < diss.r_prime() {
            continue;
        }
        for &p in members {
            for &q in members {
                let distance = diss.grid_distance(p, q);
                if intermediate_diameter(diss, c, distance) {
                    return Some(Witness::GridPair { p, q, distance });
                }
            }
        }
    }
    // across components every distance is already >= r'
    for a in 0..sg.b.count() {
        for b in a + 1..sg.b.count() {
            if let Some(w) = close_pair(diss, c, &sg.b.members[a], &sg.b.members[b]) {
                return Some(w);
            }
        }
    }
    None
}

/// BFS in `D` from `p` to `q` using only grid points within `radius` of `p`.
pub(crate) fn local_dense_path(
    diss: &Dissection,
    sg: &StructureGraphs,
    p: usize,
    q: usize,
    radius: f64,
) -> Option<Vec<usize>> {
    if !sg.dense[p] || !sg.dense[q] {
        return None;
    }
    let mut prev = std::collections::HashMap::new();
    prev.insert(p, usize::MAX);
    let mut queue = VecDeque::from([p]);
    while let Some(g) = queue.pop_front() {
        if g == q {
            let mut path = vec![q];
            let mut cur = q;
            while prev[&cur] != usize::MAX {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for h in diss.h_neighbors(g) {
            if sg.dense[h] && !prev.contains_key(&h) && diss.grid_distance(p, h) <= radius {
                prev.insert(h, g);
                queue.push_back(h);
            }
        }
    }
    None
}

fn p5_applies(diss: &Dissection, sg: &StructureGraphs, c: &AuditConstants, p: usize, q: usize) -> bool {
    let in_large = |g: usize| sg.d.component_of(g).is_some_and(|id| sg.large[id]);
    in_large(p) && in_large(q) && diss.grid_distance(p, q) < c.proximity * diss.r()
}

fn p5_fails(diss: &Dissection, sg: &StructureGraphs, c: &AuditConstants, p: usize, q: usize) -> bool {
    p5_applies(diss, sg, c, p, q)
        && local_dense_path(diss, sg, p, q, c.locality * diss.r()).is_none()
}

fn p5(
    diss: &Dissection,
    sg: &StructureGraphs,
    c: &AuditConstants,
    query_pairs: &[(usize, usize)],
) -> Option<Witness> {
    for &(p, q) in query_pairs {
        if p5_fails(diss, sg, c, p, q) {
            return Some(Witness::NoLocalPath { p, q });
        }
    }
    let pool: Vec<usize> = (0..sg.dense.len())
        .filter(|&g| sg.d.component_of(g).is_some_and(|id| sg.large[id]))
        .collect();
    if pool.is_empty() {
        return None;
    }
    let mut rng = rng_for(c.seed);
    let reach = (c.proximity * diss.r() / diss.spacing()).ceil() as i64;
    let mut checked = 0;
    for _ in 0..c.p5_samples * 8 {
        if checked >= c.p5_samples {
            break;
        }
        let p = pool[rng.gen_range(0..pool.len())];
        let off: Vec<i64> = (0..diss.norm().dim()).map(|_| rng.gen_range(-reach..=reach)).collect();
        let qc: Vec<i64> = diss.coords(p).iter().zip(&off).map(|(a, b)| a + b).collect();
        let Some(q) = diss.index_of(&qc) else { continue };
        if !p5_applies(diss, sg, c, p, q) {
            continue;
        }
        checked += 1;
        if p5_fails(diss, sg, c, p, q) {
            return Some(Witness::NoLocalPath { p, q });
        }
    }
    None
}

fn p6(sg: &StructureGraphs) -> Option<Witness> {
    let ids = sg.large_components();
    (ids.len() != 1).then_some(Witness::LargeComponents { ids })
}

/// Re-derives a failure from its witness alone; true when it reproduces.
pub fn recheck_witness(
    diss: &Dissection,
    sg: &StructureGraphs,
    constants: &AuditConstants,
    verdict: &Verdict,
) -> bool {
    let Some(w) = &verdict.witness else { return false };
    let s = far(diss, constants);
    match (verdict.property, w) {
        (Property::P1, Witness::Component { id, .. }) => {
            *id < sg.d.count()
                && intermediate_diameter(diss, constants, super::structure::lattice_diameter(diss, &sg.d.members[*id]) * diss.spacing())
        }
        (Property::P2, Witness::GridPair { p, q, .. }) => {
            let (a, b) = (sg.d.component_of(*p), sg.d.component_of(*q));
            matches!((a, b), (Some(a), Some(b)) if a != b && !sg.large[a] && !sg.large[b])
                && diss.grid_distance(*p, *q) <= s
        }
        (Property::P3, Witness::GridPair { p, q, .. }) => {
            sg.d.component_of(*p).is_some_and(|a| !sg.large[a])
                && sg.bad[*q]
                && diss.grid_distance(*p, *q) <= s
        }
        (Property::P4, Witness::GridPair { p, q, .. }) => {
            sg.bad[*p] && sg.bad[*q] && intermediate_diameter(diss, constants, diss.grid_distance(*p, *q))
        }
        (Property::P5, Witness::NoLocalPath { p, q }) => p5_fails(diss, sg, constants, *p, *q),
        (Property::P6, Witness::LargeComponents { ids }) => {
            ids.len() != 1 && *ids == sg.large_components()
        }
        _ => false,
    }
}

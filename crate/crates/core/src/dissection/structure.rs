use std::collections::{HashMap, VecDeque};

use super::Dissection;

/// Components of an induced lattice subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSet {
    /// Component id per grid point, `usize::MAX` outside the vertex set.
    pub labels: Vec<usize>,
    /// Grid points of each component, ascending.
    pub members: Vec<Vec<usize>>,
    /// Geometric diameter of each component.
    pub diameters: Vec<f64>,
}

impl ComponentSet {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn component_of(&self, g: usize) -> Option<usize> {
        let c = self.labels[g];
        (c != usize::MAX).then_some(c)
    }
}

/// Classification of the lattice and the graphs `D` (dense) and `B` (bad).
#[derive(Debug, Clone, PartialEq)]
pub struct StructureGraphs {
    pub dense: Vec<bool>,
    pub bad: Vec<bool>,
    pub d: ComponentSet,
    pub b: ComponentSet,
    /// Per `D` component: diameter `>= r'`.
    pub large: Vec<bool>,
    /// The only large `D` component, when there is exactly one.
    pub giant: Option<usize>,
}

impl StructureGraphs {
    pub fn is_sparse(&self, g: usize) -> bool {
        !self.dense[g]
    }

    pub fn large_components(&self) -> Vec<usize> {
        (0..self.large.len()).filter(|&c| self.large[c]).collect()
    }

    /// `D` components of diameter `< r'`.
    pub fn small_components(&self) -> Vec<usize> {
        (0..self.large.len()).filter(|&c| !self.large[c]).collect()
    }
}

pub fn classify_and_extract(diss: &Dissection) -> StructureGraphs {
    let total = diss.grid_point_count();
    let k = diss.dense_threshold();
    let dense: Vec<bool> = (0..total).map(|g| diss.members(g).len() >= k).collect();
    let mut near_dense = dense.clone();
    for g in (0..total).filter(|&g| dense[g]) {
        for h in diss.h_neighbors(g) {
            near_dense[h] = true;
        }
    }
    let bad: Vec<bool> = near_dense.iter().map(|&x| !x).collect();
    let d = components(diss, &dense);
    let b = components(diss, &bad);
    let rp = diss.r_prime();
    let large: Vec<bool> = d.diameters.iter().map(|&x| x >= rp).collect();
    let big: Vec<usize> = (0..large.len()).filter(|&c| large[c]).collect();
    let giant = (big.len() == 1).then(|| big[0]);
    StructureGraphs { dense, bad, d, b, large, giant }
}

fn components(diss: &Dissection, keep: &[bool]) -> ComponentSet {
    let total = keep.len();
    let mut labels = vec![usize::MAX; total];
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..total {
        if !keep[s] || labels[s] != usize::MAX {
            continue;
        }
        let id = members.len();
        labels[s] = id;
        queue.push_back(s);
        let mut list = Vec::new();
        while let Some(g) = queue.pop_front() {
            list.push(g);
            for h in diss.h_neighbors(g) {
                if keep[h] && labels[h] == usize::MAX {
                    labels[h] = id;
                    queue.push_back(h);
                }
            }
        }
        list.sort_unstable();
        members.push(list);
    }
    let diameters = members.iter().map(|m| lattice_diameter(diss, m) * diss.spacing()).collect();
    ComponentSet { labels, members, diameters }
}

/// Exact diameter in lattice units.
///
/// For an l_p norm, pushing one end of a pair outward along the first axis
/// never shortens it, so only the two extremes of each line parallel to that
/// axis can realize the diameter.
pub(crate) fn lattice_diameter(diss: &Dissection, members: &[usize]) -> f64 {
    let mut rows: HashMap<Vec<i64>, (i64, i64)> = HashMap::new();
    for &g in members {
        let c = diss.coords(g);
        let e = rows.entry(c[1..].to_vec()).or_insert((c[0], c[0]));
        e.0 = e.0.min(c[0]);
        e.1 = e.1.max(c[0]);
    }
    let mut cand: Vec<Vec<f64>> = Vec::with_capacity(2 * rows.len());
    for (rest, (lo, hi)) in rows {
        for x in if lo == hi { vec![lo] } else { vec![lo, hi] } {
            let mut v = vec![x as f64];
            v.extend(rest.iter().map(|&y| y as f64));
            cand.push(v);
        }
    }
    let norm = diss.norm();
    let mut best = 0.0f64;
    for i in 0..cand.len() {
        for j in i + 1..cand.len() {
            best = best.max(norm.dist(&cand[i], &cand[j]));
        }
    }
    best
}

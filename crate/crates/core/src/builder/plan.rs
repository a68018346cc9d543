use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::escort::{find_escort, validate_bundles, EscortBundle};
use super::sectors::{ball_sector_partition, cleanup_path};
use super::tree::{bounded_degree_spanning_tree, double_traversal_walk, ClosedWalk, SpanningTreePlan};
use super::verify::verify_cycle;
use super::{BuildFailure, BuildStage, BuilderConstants};
use crate::dissection::{
    audit_properties, build_dissection, classify_and_extract, Dissection, Property, StructureGraphs, Witness,
};
use crate::error::{Error, Result};
use crate::geometry::{NormSpec, PointSet};
use crate::graph::GeometricGraph;
use crate::grid::GridIndex;

/// Where a vertex sits in the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    Giant,
    Small(usize),
    Free,
}

/// A small `D` component or a `B` component holding points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallComponent {
    pub cells: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// Everything the rule simulation needs, computed once per instance.
#[derive(Debug, Clone)]
pub struct Plan<'a> {
    pub(crate) points: &'a PointSet,
    pub(crate) norm: NormSpec,
    pub(crate) rho: f64,
    pub(crate) consts: BuilderConstants,
    pub(crate) diss: Dissection,
    pub(crate) sg: StructureGraphs,
    pub(crate) role: Vec<Role>,
    pub(crate) small: Vec<SmallComponent>,
    pub(crate) escorts: Vec<EscortBundle>,
    pub(crate) labels: HashMap<usize, Vec<usize>>,
    pub(crate) giant_cells: Vec<usize>,
    pub(crate) tree: SpanningTreePlan,
    pub(crate) walk: ClosedWalk,
    pub(crate) connector_of: HashMap<usize, usize>,
}

/// Consumption counters of one rule simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BudgetReport {
    /// Most vertices one cell gave to escort traversals.
    pub max_r1_new: usize,
    /// Most arrivals into one cell up to and including its last visit.
    pub max_arrivals: usize,
    /// Fewest unvisited vertices left in a cell when its last visit starts.
    pub min_fresh_at_r3: usize,
    pub r3_steps: usize,
    pub r1_fired: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonBuild {
    pub cycle: Vec<usize>,
    pub escorts: Vec<EscortBundle>,
    pub budget: BudgetReport,
    pub giant_cells: usize,
    pub small_components: usize,
    pub labelled: usize,
}

type Outcome<T> = std::result::Result<T, BuildFailure>;

fn estimated_edges(n: usize, rho: f64, d: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0 * (2.0 * rho).powi(d as i32).min(1.0)
}

impl<'a> Plan<'a> {
    /// Dissection, classification, escorts, labels and the tree walk.
    pub fn prepare(
        points: &'a PointSet,
        norm: &NormSpec,
        rho: f64,
        consts: &BuilderConstants,
        audit_first: bool,
    ) -> Result<Outcome<Plan<'a>>> {
        points.check_norm(norm)?;
        consts.validate(norm)?;
        let n = points.len();
        if n < 3 {
            return Err(Error::contract(format!("need at least 3 points, got {n}")));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::contract(format!("rho must be positive, got {rho}")));
        }
        let r = rho * consts.r_scale;
        let diss = build_dissection(points, norm, consts.eta, r, consts.k_dense)?;
        let sg = classify_and_extract(&diss);
        if audit_first {
            let audit = audit_properties(&diss, &sg, &consts.audit_constants(), &[]);
            if let Some(v) = audit.first_failure() {
                return Ok(Err(BuildFailure::property(
                    BuildStage::Audit,
                    v.property,
                    "structural property fails",
                    v.witness.clone(),
                )));
            }
        }
        let Some(giant) = sg.giant else {
            return Ok(Err(BuildFailure::property(
                BuildStage::Structure,
                Property::P6,
                "no unique large dense component",
                Some(Witness::LargeComponents { ids: sg.large_components() }),
            )));
        };

        let mut role = vec![Role::Free; n];
        let mut small = Vec::new();
        for id in 0..sg.d.count() {
            let cells = sg.d.members[id].clone();
            let vertices = collect_members(&diss, &cells);
            if id == giant {
                for &v in &vertices {
                    role[v] = Role::Giant;
                }
            } else {
                small.push(SmallComponent { cells, vertices });
            }
        }
        for id in 0..sg.b.count() {
            let cells = sg.b.members[id].clone();
            let vertices = collect_members(&diss, &cells);
            if vertices.is_empty() {
                continue;
            }
            if sg.b.diameters[id] >= diss.r_prime() {
                return Ok(Err(BuildFailure::property(
                    BuildStage::Structure,
                    Property::P4,
                    "bad component holding points is not small",
                    Some(Witness::Component { id, diameter: sg.b.diameters[id] }),
                )));
            }
            small.push(SmallComponent { cells, vertices });
        }
        for (i, c) in small.iter().enumerate() {
            for &v in &c.vertices {
                role[v] = Role::Small(i);
            }
        }

        if estimated_edges(n, rho, norm.dim()) <= consts.connectivity_edge_limit as f64 {
            let g = GeometricGraph::from_points(points, norm, rho)?;
            if !g.is_connected() {
                return Ok(Err(BuildFailure::new(BuildStage::Connectivity, "G(V, rho) is disconnected")));
            }
            if let Some(&cut) = g.articulation_points().first() {
                return Ok(Err(BuildFailure::new(
                    BuildStage::Connectivity,
                    format!("G(V, rho) is not 2-connected: cut vertex {cut}"),
                )));
            }
        }

        let giant_cells = sg.d.members[giant].clone();
        let mut plan = Plan {
            points,
            norm: *norm,
            rho,
            consts: *consts,
            diss,
            sg,
            role,
            small,
            escorts: Vec::new(),
            labels: HashMap::new(),
            giant_cells,
            tree: SpanningTreePlan::from_edges(0, &[]),
            walk: ClosedWalk { seq: Vec::new() },
            connector_of: HashMap::new(),
        };

        if !plan.small.is_empty() {
            let index = GridIndex::build(points, rho)?;
            let mut blocked = vec![false; n];
            for i in 0..plan.small.len() {
                let bundle = match find_escort(&plan, &index, i, &blocked)? {
                    Ok(b) => b,
                    Err(f) => return Ok(Err(f)),
                };
                for v in bundle.vertices() {
                    blocked[v] = true;
                }
                plan.escorts.push(bundle);
            }
            if let Err(msg) = validate_bundles(&plan, &plan.escorts) {
                return Ok(Err(BuildFailure::new(BuildStage::Escort, msg)));
            }
            for (i, b) in plan.escorts.iter().enumerate() {
                for &g in &b.connector {
                    if let Some(j) = plan.connector_of.insert(g, i) {
                        return Ok(Err(BuildFailure::new(
                            BuildStage::Connector,
                            format!("connectors {j} and {i} share grid point {g}"),
                        )));
                    }
                }
            }
        }

        plan.labels = plan.assign_labels();

        let t = plan.diss.lattice_threshold();
        let nodes: Vec<Vec<f64>> = plan
            .giant_cells
            .iter()
            .map(|&g| plan.diss.coords(g).iter().map(|&c| c as f64).collect())
            .collect();
        plan.tree = bounded_degree_spanning_tree(&nodes, norm, t)?;
        let bound = consts.tree_degree_bound(norm);
        if plan.tree.max_degree() > bound {
            return Ok(Err(BuildFailure::new(
                BuildStage::Tree,
                format!("spanning tree degree {} exceeds {bound}", plan.tree.max_degree()),
            )));
        }
        plan.walk = double_traversal_walk(&plan.tree, 0);
        Ok(Ok(plan))
    }

    pub fn dissection(&self) -> &Dissection {
        &self.diss
    }

    pub fn structure(&self) -> &StructureGraphs {
        &self.sg
    }

    pub fn escorts(&self) -> &[EscortBundle] {
        &self.escorts
    }

    pub fn small_components(&self) -> &[SmallComponent] {
        &self.small
    }

    pub fn tree(&self) -> &SpanningTreePlan {
        &self.tree
    }

    pub fn walk(&self) -> &ClosedWalk {
        &self.walk
    }

    /// Grid points of the giant component; tree node `k` is `giant_cells()[k]`.
    pub fn giant_cells(&self) -> &[usize] {
        &self.giant_cells
    }

    /// Labelled vertices per dense grid point.
    pub fn labels(&self) -> &HashMap<usize, Vec<usize>> {
        &self.labels
    }

    pub fn labelled_count(&self) -> usize {
        self.labels.values().map(Vec::len).sum()
    }

    pub fn points(&self) -> &PointSet {
        self.points
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Each free vertex outside the escorts goes to the nearest dense grid
    /// point within `r'` of its cell, ties to the lowest index.
    fn assign_labels(&self) -> HashMap<usize, Vec<usize>> {
        let mut on_escort = vec![false; self.points.len()];
        for b in &self.escorts {
            for v in b.vertices() {
                on_escort[v] = true;
            }
        }
        let mut labels: HashMap<usize, Vec<usize>> = HashMap::new();
        for g in 0..self.diss.grid_point_count() {
            let members = self.diss.members(g);
            if members.is_empty() || self.sg.dense[g] || self.sg.bad[g] {
                continue;
            }
            let q = self
                .diss
                .h_neighbors(g)
                .into_iter()
                .filter(|&h| self.sg.dense[h])
                .min_by(|&a, &b| {
                    self.diss.grid_distance(g, a).total_cmp(&self.diss.grid_distance(g, b)).then(a.cmp(&b))
                })
                .expect("a grid point that is not bad has a dense neighbour");
            let list = labels.entry(q).or_default();
            list.extend(members.iter().copied().filter(|&v| !on_escort[v]));
        }
        for list in labels.values_mut() {
            list.sort_unstable();
        }
        labels.retain(|_, l| !l.is_empty());
        labels
    }

    /// Runs the walk rules. `omit` vertices are skipped; escorts with
    /// `active[i] == false` are not traversed and their endpoints are free.
    pub fn assemble(&self, omit: &[bool], active: &[bool]) -> Outcome<(Vec<usize>, BudgetReport)> {
        let mut sim = Sim::new(self, omit, active);
        sim.run()?;
        let expected = omit.iter().filter(|&&o| !o).count();
        if sim.out.len() != expected {
            return Err(BuildFailure::new(
                BuildStage::Verify,
                format!("walk produced {} vertices, expected {expected}", sim.out.len()),
            ));
        }
        Ok((sim.out, sim.report))
    }
}

fn collect_members(diss: &Dissection, cells: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = cells.iter().flat_map(|&g| diss.members(g).iter().copied()).collect();
    out.sort_unstable();
    out
}

struct Sim<'p, 'a> {
    plan: &'p Plan<'a>,
    active: &'p [bool],
    visited: Vec<bool>,
    reserved: Vec<bool>,
    cursor: HashMap<usize, usize>,
    out: Vec<usize>,
    r1_new: HashMap<usize, usize>,
    arrivals: HashMap<usize, usize>,
    report: BudgetReport,
}

impl<'p, 'a> Sim<'p, 'a> {
    fn new(plan: &'p Plan<'a>, omit: &[bool], active: &'p [bool]) -> Self {
        let mut reserved = vec![false; plan.points.len()];
        for (i, b) in plan.escorts.iter().enumerate() {
            if active[i] {
                reserved[b.a1()] = true;
                reserved[b.a2()] = true;
            }
        }
        Sim {
            plan,
            active,
            visited: omit.to_vec(),
            reserved,
            cursor: HashMap::new(),
            out: Vec::with_capacity(omit.len()),
            r1_new: HashMap::new(),
            arrivals: HashMap::new(),
            report: BudgetReport { min_fresh_at_r3: usize::MAX, ..Default::default() },
        }
    }

    fn visit(&mut self, v: usize) -> Outcome<()> {
        if self.visited[v] {
            return Err(BuildFailure::new(BuildStage::Verify, format!("vertex {v} visited twice")));
        }
        self.visited[v] = true;
        self.out.push(v);
        Ok(())
    }

    /// Lowest-index unvisited, unreserved vertex of cell `g` not in `exclude`.
    fn pick(&mut self, g: usize, exclude: &[usize]) -> Option<usize> {
        let members = self.plan.diss.members(g);
        let c = self.cursor.entry(g).or_insert(0);
        while *c < members.len() && self.visited[members[*c]] {
            *c += 1;
        }
        members[*c..].iter().copied().find(|&v| !self.visited[v] && !self.reserved[v] && !exclude.contains(&v))
    }

    fn pick_or_fail(&mut self, g: usize, exclude: &[usize], rule: &str) -> Outcome<usize> {
        self.pick(g, exclude).ok_or_else(|| {
            BuildFailure::new(BuildStage::Budget, format!("{rule}: grid point {g} has no unvisited vertex left"))
        })
    }

    fn arrive(&mut self, g: usize, v: usize) -> Outcome<()> {
        self.visit(v)?;
        let a = self.arrivals.entry(g).or_insert(0);
        *a += 1;
        self.report.max_arrivals = self.report.max_arrivals.max(*a);
        Ok(())
    }

    fn r1_take(&mut self, g: usize, v: usize) -> Outcome<()> {
        self.visit(v)?;
        let a = self.r1_new.entry(g).or_insert(0);
        *a += 1;
        self.report.max_r1_new = self.report.max_r1_new.max(*a);
        Ok(())
    }

    fn run(&mut self) -> Outcome<()> {
        let plan = self.plan;
        let seq = &plan.walk.seq;
        let cells = &plan.giant_cells;
        let (first, last) = plan.walk.visit_bounds(cells.len());
        let n_steps = seq.len() - 1;
        let mut fired = vec![false; plan.escorts.len()];
        let q0 = cells[seq[0]];
        let alpha = self.pick_or_fail(q0, &[], "start")?;
        self.arrive(q0, alpha)?;
        let mut cur = alpha;
        for t in 0..=n_steps {
            let node = seq[t];
            let q = cells[node];
            if first[node] == t {
                if let Some(&i) = plan.connector_of.get(&q) {
                    if self.active[i] && !fired[i] {
                        fired[i] = true;
                        self.report.r1_fired += 1;
                        cur = self.rule1(i, q)?;
                    }
                }
            }
            if t < last[node] {
                let next = cells[seq[t + 1]];
                let w = self.pick_or_fail(next, &[], "R2")?;
                self.arrive(next, w)?;
                cur = w;
            } else {
                self.rule3(q, cur)?;
                if t < n_steps {
                    let next = cells[seq[t + 1]];
                    let w = self.pick_or_fail(next, &[], "R3")?;
                    self.arrive(next, w)?;
                    cur = w;
                }
            }
        }
        Ok(())
    }

    /// Detour through escort `i` starting in cell `q`; returns the vertex
    /// of `q` it ends at.
    fn rule1(&mut self, i: usize, q: usize) -> Outcome<usize> {
        let plan = self.plan;
        let b = &plan.escorts[i];
        let conn = &b.connector;
        let j = conn.iter().position(|&g| g == q).expect("cell lies on the connector");
        for m in (1..j).rev() {
            let v = self.pick_or_fail(conn[m], &[], "R1")?;
            self.r1_take(conn[m], v)?;
        }
        self.r1_take(conn[0], b.a1())?;
        for &v in &b.first[1..] {
            self.visit(v)?;
        }
        let (b1, b2) = (b.b1(), b.b2());
        let comp = &plan.small[b.component];
        for &g in &comp.cells {
            let Some(lab) = plan.labels.get(&g) else { continue };
            let lab: Vec<usize> = lab.iter().copied().filter(|&v| !self.visited[v]).collect();
            if lab.is_empty() {
                continue;
            }
            self.cleanup(g, None, &lab, &[b1, b2])?;
        }
        let rest: Vec<usize> =
            comp.vertices.iter().copied().filter(|&v| !self.visited[v] && v != b2).collect();
        for v in rest {
            self.visit(v)?;
        }
        if b2 != b1 {
            self.visit(b2)?;
        }
        let back: Vec<usize> = b.second.iter().rev().skip(1).copied().collect();
        let last = conn.len() - 1;
        for (k, &v) in back.iter().enumerate() {
            if k + 1 == back.len() {
                self.r1_take(conn[last], v)?;
            } else {
                self.visit(v)?;
            }
        }
        for m in (j + 1..last).rev() {
            let v = self.pick_or_fail(conn[m], &[], "R1")?;
            self.r1_take(conn[m], v)?;
        }
        let w = self.pick_or_fail(q, &[], "R1")?;
        self.r1_take(q, w)?;
        Ok(w)
    }

    /// Clean-up path at `g` over `lab`. Starts at `start` when given,
    /// otherwise at a fresh vertex.
    fn cleanup(&mut self, g: usize, start: Option<usize>, lab: &[usize], exclude: &[usize]) -> Outcome<()> {
        let plan = self.plan;
        let centre = plan.diss.position(g);
        let part = ball_sector_partition(&centre, plan.diss.r(), &plan.norm).expect("positive radius");
        let mut parts: Vec<usize> = lab.iter().map(|&v| part.sector_of(plan.points.get(v))).collect();
        parts.sort_unstable();
        parts.dedup();
        let mut anchors: Vec<usize> = start.into_iter().collect();
        let need = parts.len() + 1;
        let mut taken = exclude.to_vec();
        while anchors.len() < need {
            let v = self.pick_or_fail(g, &taken, "clean-up")?;
            taken.push(v);
            anchors.push(v);
        }
        let path = cleanup_path(plan.diss.members(g), &anchors, lab, plan.points, &part)
            .map_err(|e| BuildFailure::new(BuildStage::Budget, e.to_string()))?;
        let skip = usize::from(start.is_some());
        for &v in &path[skip..] {
            self.visit(v)?;
        }
        Ok(())
    }

    fn rule3(&mut self, q: usize, cur: usize) -> Outcome<()> {
        let plan = self.plan;
        let members = plan.diss.members(q);
        let fresh = members.iter().filter(|&&v| !self.visited[v]).count();
        self.report.min_fresh_at_r3 = self.report.min_fresh_at_r3.min(fresh);
        self.report.r3_steps += 1;
        if let Some(lab) = plan.labels.get(&q) {
            let lab: Vec<usize> = lab.iter().copied().filter(|&v| !self.visited[v]).collect();
            if !lab.is_empty() {
                self.cleanup(q, Some(cur), &lab, &[])?;
            }
        }
        let rest: Vec<usize> = members.iter().copied().filter(|&v| !self.visited[v]).collect();
        for v in rest {
            self.visit(v)?;
        }
        Ok(())
    }
}

/// Hamilton cycle of `G(points, rho)` by the walk rules, or the first
/// requirement that failed.
pub fn build_hamilton_cycle(
    points: &PointSet,
    norm: &NormSpec,
    rho: f64,
    consts: &BuilderConstants,
    audit_first: bool,
) -> Result<Outcome<HamiltonBuild>> {
    let plan = match Plan::prepare(points, norm, rho, consts, audit_first)? {
        Ok(p) => p,
        Err(f) => return Ok(Err(f)),
    };
    let omit = vec![false; points.len()];
    let active = vec![true; plan.escorts.len()];
    let (cycle, budget) = match plan.assemble(&omit, &active) {
        Ok(x) => x,
        Err(f) => return Ok(Err(f)),
    };
    if let Some(f) = verify_cycle(points, norm, rho, &cycle).failure {
        return Ok(Err(BuildFailure::new(BuildStage::Verify, f.to_string())));
    }
    Ok(Ok(HamiltonBuild {
        cycle,
        escorts: plan.escorts.clone(),
        budget,
        giant_cells: plan.giant_cells.len(),
        small_components: plan.small.len(),
        labelled: plan.labelled_count(),
    }))
}

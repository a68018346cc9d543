//! Constructive Hamilton cycles on geometric graphs whose dissection has the
//! expected structure, and the pancyclic family derived from them.

mod escort;
mod pancyclic;
mod plan;
mod sectors;
mod tree;
mod verify;

pub use escort::{validate_bundles, EscortBundle};
pub use pancyclic::{build_pancyclic_family, FamilyFailure, FamilyStage, PancyclicFamily};
pub use plan::{build_hamilton_cycle, BudgetReport, HamiltonBuild, Plan};
pub use sectors::{ball_sector_partition, cleanup_path, sector_count, SectorPartition};
pub use tree::{bounded_degree_spanning_tree, double_traversal_walk, post_order, ClosedWalk, SpanningTreePlan};
pub use verify::{verify_cycle, verify_partial_cycle, CycleCheck, CycleFailure};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dissection::{AuditConstants, Property, Witness};
use crate::error::{Error, Result};
use crate::geometry::NormSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuilderConstants {
    /// Dense threshold `K`.
    pub k_dense: usize,
    /// Dense threshold used for the pancyclic family.
    pub k_pancyclic: usize,
    pub eta: f64,
    /// Dissection scale `r` as a fraction of `rho`; must lie in `[1/2, 1]`.
    pub r_scale: f64,
    /// Free vertices farther than this many `r` from a small component are
    /// left out of its escort search.
    pub escort_radius_factor: f64,
    pub separation: f64,
    pub locality: f64,
    pub proximity: f64,
    /// New vertices a connector cell may lose to one escort traversal.
    pub r1_budget: usize,
    /// `G(V, rho)` is checked for 2-connectivity only up to this many
    /// estimated edges.
    pub connectivity_edge_limit: usize,
    pub p5_samples: usize,
}

impl BuilderConstants {
    pub fn asymptotic() -> Self {
        BuilderConstants {
            k_dense: 100,
            k_pancyclic: 1000,
            eta: 0.1,
            r_scale: 1.0,
            escort_radius_factor: 6.0,
            separation: 1000.0,
            locality: 100.0,
            proximity: 25.0,
            r1_budget: 4,
            connectivity_edge_limit: 5_000_000,
            p5_samples: 200,
        }
    }

    /// Smallest constants for which the vertex budget still closes in the plane.
    pub fn desk() -> Self {
        BuilderConstants {
            k_dense: 35,
            k_pancyclic: 35,
            separation: 2.0,
            locality: 8.0,
            proximity: 3.0,
            r1_budget: 3,
            ..Self::asymptotic()
        }
    }

    pub fn sector_count(&self, norm: &NormSpec) -> usize {
        sector_count(norm)
    }

    pub fn tree_degree_bound(&self, norm: &NormSpec) -> usize {
        if norm.is_planar_euclidean() {
            26
        } else {
            let c = tree::cell_reach(norm) as usize;
            (2 * c + 1).pow(norm.dim() as u32) + 1
        }
    }

    /// Arrivals into a cell before its last visit.
    pub fn r2_budget(&self, norm: &NormSpec) -> usize {
        self.tree_degree_bound(norm) - 1
    }

    /// Vertices needed at the last visit: the current one plus one per part.
    pub fn r3_reserve(&self, norm: &NormSpec) -> usize {
        self.sector_count(norm) + 1
    }

    pub fn required_k(&self, norm: &NormSpec) -> usize {
        self.r1_budget + self.r2_budget(norm) + self.r3_reserve(norm)
    }

    pub fn validate(&self, norm: &NormSpec) -> Result<()> {
        let dmax = 1.0 / norm.diam_factor();
        if !(self.eta > 0.0 && self.eta < dmax) {
            return Err(Error::contract(format!("eta must lie in (0, {dmax}), got {}", self.eta)));
        }
        if !(0.5..=1.0).contains(&self.r_scale) {
            return Err(Error::contract(format!("r_scale must lie in [0.5, 1], got {}", self.r_scale)));
        }
        if !(self.escort_radius_factor > 0.0) {
            return Err(Error::contract("escort radius factor must be positive"));
        }
        if !(self.separation > 0.0 && self.locality > 0.0 && self.proximity > 0.0) {
            return Err(Error::contract("separation, locality and proximity must be positive"));
        }
        let need = self.required_k(norm);
        if self.k_dense < need {
            return Err(Error::contract(format!(
                "dense threshold {} below the vertex budget {need} ({} + {} + {})",
                self.k_dense,
                self.r1_budget,
                self.r2_budget(norm),
                self.r3_reserve(norm)
            )));
        }
        Ok(())
    }

    pub fn audit_constants(&self) -> AuditConstants {
        AuditConstants {
            separation: self.separation,
            locality: self.locality,
            proximity: self.proximity,
            p5_samples: self.p5_samples,
            seed: 0,
        }
    }
}

impl Default for BuilderConstants {
    fn default() -> Self {
        Self::asymptotic()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuildStage {
    Audit,
    Structure,
    Connectivity,
    Escort,
    Connector,
    Tree,
    Budget,
    Verify,
}

/// Why a build stopped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildFailure {
    pub stage: BuildStage,
    pub property: Option<Property>,
    pub reason: String,
    pub witness: Option<Witness>,
}

impl BuildFailure {
    pub(crate) fn new(stage: BuildStage, reason: impl Into<String>) -> Self {
        BuildFailure { stage, property: None, reason: reason.into(), witness: None }
    }

    pub(crate) fn property(stage: BuildStage, property: Property, reason: impl Into<String>, witness: Option<Witness>) -> Self {
        BuildFailure { stage, property: Some(property), reason: reason.into(), witness }
    }
}

impl fmt::Display for BuildFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.stage)?;
        if let Some(p) = self.property {
            write!(f, " [{p}]")?;
        }
        write!(f, ": {}", self.reason)?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Exponent;

    #[test]
    fn budgets() {
        let e = NormSpec::euclidean_plane();
        let desk = BuilderConstants::desk();
        assert_eq!(desk.required_k(&e), 35);
        desk.validate(&e).unwrap();
        BuilderConstants::asymptotic().validate(&e).unwrap();
        assert!(BuilderConstants { k_dense: 34, ..desk }.validate(&e).is_err());
        let inf = NormSpec::new(2, Exponent::Infinity).unwrap();
        assert_eq!(desk.tree_degree_bound(&inf), 10);
        assert_eq!(desk.sector_count(&inf), 4);
        assert_eq!(desk.required_k(&inf), 3 + 9 + 5);
        assert!(desk.tree_degree_bound(&e) >= 1 + desk.r2_budget(&e));
    }
}

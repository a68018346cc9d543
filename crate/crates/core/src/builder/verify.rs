use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{NormSpec, PointSet};

/// First reason a vertex sequence is not a cycle of the required kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CycleFailure {
    WrongLength { expected: usize, got: usize },
    OutOfRange { position: usize, vertex: usize },
    Duplicate { vertex: usize, first: usize, second: usize },
    Missing { vertex: usize },
    LongEdge { from: usize, to: usize, length: f64 },
}

impl fmt::Display for CycleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleFailure::WrongLength { expected, got } => write!(f, "length {got}, expected {expected}"),
            CycleFailure::OutOfRange { position, vertex } => write!(f, "vertex {vertex} at position {position} out of range"),
            CycleFailure::Duplicate { vertex, first, second } => {
                write!(f, "vertex {vertex} at positions {first} and {second}")
            }
            CycleFailure::Missing { vertex } => write!(f, "vertex {vertex} missing"),
            CycleFailure::LongEdge { from, to, length } => write!(f, "edge {from}-{to} has length {length}"),
        }
    }
}

/// Outcome of a cycle check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleCheck {
    pub failure: Option<CycleFailure>,
}

impl CycleCheck {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// A Hamilton cycle of `G(points, rho)`: a permutation of all vertices whose
/// consecutive pairs, wraparound included, are within `rho`.
pub fn verify_cycle(points: &PointSet, norm: &NormSpec, rho: f64, cycle: &[usize]) -> CycleCheck {
    let n = points.len();
    if cycle.len() != n {
        return CycleCheck { failure: Some(CycleFailure::WrongLength { expected: n, got: cycle.len() }) };
    }
    verify_partial_cycle(points, norm, rho, cycle)
}

/// A cycle of `G(points, rho)` on any `>= 3` distinct vertices.
pub fn verify_partial_cycle(points: &PointSet, norm: &NormSpec, rho: f64, cycle: &[usize]) -> CycleCheck {
    let n = points.len();
    let fail = |f| CycleCheck { failure: Some(f) };
    if cycle.len() < 3 {
        return fail(CycleFailure::WrongLength { expected: 3, got: cycle.len() });
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &v) in cycle.iter().enumerate() {
        if v >= n {
            return fail(CycleFailure::OutOfRange { position: k, vertex: v });
        }
        if pos[v] != usize::MAX {
            return fail(CycleFailure::Duplicate { vertex: v, first: pos[v], second: k });
        }
        pos[v] = k;
    }
    if cycle.len() == n {
        if let Some(v) = pos.iter().position(|&p| p == usize::MAX) {
            return fail(CycleFailure::Missing { vertex: v });
        }
    }
    for k in 0..cycle.len() {
        let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
        let length = norm.dist(points.get(a), points.get(b));
        if length > rho {
            return fail(CycleFailure::LongEdge { from: a, to: b, length });
        }
    }
    CycleCheck { failure: None }
}

//! Random geometric graphs: hitting radii, exact small-instance oracles,
//! grid dissections and a constructive Hamilton-cycle builder.

pub mod builder;
pub mod cli;
pub mod dissection;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod geometry;
pub mod graph;
pub mod grid;
pub mod hitting;
pub mod oracles;

pub use error::{Error, Result};
pub use geometry::{lp_distance, sample_uniform_points, Exponent, NormSpec, Point, PointSet};
pub use grid::GridIndex;

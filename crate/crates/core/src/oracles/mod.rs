//! Exact algorithms for small instances and flow-based path extraction.

pub mod brute;
mod connectivity;
pub mod flow;
mod hamilton;
mod paths;
mod spectrum;

pub use connectivity::{local_vertex_connectivity, vertex_connectivity_at_least};
pub use hamilton::{is_hamiltonian_exact, HAMILTON_CEILING};
pub use paths::{remove_chords, two_disjoint_paths, validate_path_pair, PathMode, PathPair};
pub use spectrum::{cycle_of_length, cycle_spectrum, has_cycle_of_length, SPECTRUM_CEILING};

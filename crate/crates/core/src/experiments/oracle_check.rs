use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rng_for, sample_uniform_points, trial_seed, NormSpec};
use crate::graph::{EdgeProcess, GeometricGraph};
use crate::oracles::brute::{cycle_lengths_by_search, hamiltonian_by_permutations, k_connected_by_removal, BRUTE_CEILING};
use crate::oracles::{cycle_spectrum, is_hamiltonian_exact, vertex_connectivity_at_least};

/// Agreement counts between the fast oracles and exhaustive search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheckReport {
    pub hamilton_instances: usize,
    pub hamilton_positive: usize,
    pub hamilton_mismatches: Vec<usize>,
    pub connectivity_instances: usize,
    pub connectivity_positive: usize,
    pub connectivity_mismatches: Vec<usize>,
    pub spectrum_instances: usize,
    pub spectrum_mismatches: Vec<usize>,
}

impl OracleCheckReport {
    pub fn all_agree(&self) -> bool {
        self.hamilton_mismatches.is_empty()
            && self.connectivity_mismatches.is_empty()
            && self.spectrum_mismatches.is_empty()
    }
}

/// A geometric graph on `n` seeded points at a random rank of its process,
/// biased towards the sparse end where answers flip.
fn sample_graph(norm: &NormSpec, n: usize, seed: u64) -> Result<GeometricGraph> {
    let pts = sample_uniform_points(n, norm, seed)?;
    let proc = EdgeProcess::build(&pts, norm)?;
    let mut rng = rng_for(splitmix_tag(seed));
    let lo = n - 1;
    let hi = proc.len().min(3 * n);
    let m = rng.gen_range(lo..=hi.max(lo));
    Ok(proc.graph_at_rank(m))
}

fn splitmix_tag(seed: u64) -> u64 {
    crate::geometry::splitmix64(seed ^ 0x5eed)
}

/// Checks `instances` graphs per oracle: Hamiltonicity for `n` in `4..=10`,
/// 2-connectivity for `n` in `3..=9`, cycle spectra for `n` in `3..=10`.
pub fn oracle_check(instances: usize, norm: &NormSpec, master_seed: u64) -> Result<OracleCheckReport> {
    if instances == 0 {
        return Err(Error::contract("instances must be >= 1"));
    }
    let mut rep = OracleCheckReport::default();
    for i in 0..instances {
        let seed = trial_seed(master_seed, i as u64);
        let n = 4 + (seed % (BRUTE_CEILING as u64 - 3)) as usize;
        let g = sample_graph(norm, n, seed)?;
        let dp = is_hamiltonian_exact(&g)?.is_some();
        rep.hamilton_instances += 1;
        rep.hamilton_positive += usize::from(dp);
        if dp != hamiltonian_by_permutations(&g)? {
            rep.hamilton_mismatches.push(i);
        }

        let seed = trial_seed(master_seed ^ 0xc0, i as u64);
        let n = 3 + (seed % 7) as usize;
        let g = sample_graph(norm, n, seed)?;
        let flow = vertex_connectivity_at_least(&g, 2)?;
        rep.connectivity_instances += 1;
        rep.connectivity_positive += usize::from(flow);
        if flow != k_connected_by_removal(&g, 2)? {
            rep.connectivity_mismatches.push(i);
        }

        let seed = trial_seed(master_seed ^ 0x5c, i as u64);
        let n = 3 + (seed % (BRUTE_CEILING as u64 - 2)) as usize;
        let g = sample_graph(norm, n, seed)?;
        rep.spectrum_instances += 1;
        if cycle_spectrum(&g)? != cycle_lengths_by_search(&g)? {
            rep.spectrum_mismatches.push(i);
        }
    }
    Ok(rep)
}

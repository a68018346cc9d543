//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 4 and 5 are known reds (see README). The process exits nonzero
//! when any other criterion fails, when criterion 4's endpoint differs from
//! the closed form, or when criterion 5 drifts out of the band an
//! independent sampler gives at the same n.

use std::time::{Duration, Instant};

use geohamilton::builder::{
    bounded_degree_spanning_tree, build_hamilton_cycle, build_pancyclic_family, validate_bundles, verify_cycle,
    verify_partial_cycle, BuilderConstants, Plan,
};
use geohamilton::experiments::{
    limit_probability, oracle_check, run_trials, write_csv, OracleMode, TrialBatch, TrialConfig,
};
use geohamilton::fixtures::planted_clique_instance;
use geohamilton::geometry::trial_seed;
use geohamilton::graph::{Dsu, EdgeProcess};
use geohamilton::hitting::{min_degree_rank, rho_connected};
use geohamilton::oracles::{has_cycle_of_length, is_hamiltonian_exact};
use geohamilton::{lp_distance, sample_uniform_points, Exponent, NormSpec, PointSet};

/// Frequencies of rho(md2) = rho(ham) over 500 exact trials, master seed = n.
const PINNED_MD2_EQ_HAM: [(usize, f64); 4] = [(8, 0.592), (12, 0.548), (16, 0.560), (20, 0.554)];
/// Fraction of Hamiltonian instances at rho(md2), n = 16, that are pancyclic.
const PINNED_PANCYCLIC: f64 = 0.99;
const PIN_TOLERANCE: f64 = 0.05;
/// KS band of an independent k-d tree sampler at n = 20000.
const KS_REFERENCE_BAND: (f64, f64) = (0.10, 0.35);

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line { pass, detail: detail.into() }
}

fn wilson(hits: usize, n: usize) -> (f64, f64) {
    let z = 1.959_963_984_540_054;
    let (p, nf) = (hits as f64 / n as f64, n as f64);
    let centre = (p + z * z / (2.0 * nf)) / (1.0 + z * z / nf);
    let half = z * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt() / (1.0 + z * z / nf);
    (centre - half, centre + half)
}

fn exact_batches() -> Vec<(usize, TrialBatch)> {
    [8, 12, 16, 20]
        .into_iter()
        .map(|n| {
            let cfg = TrialConfig { n, trials: 500, master_seed: n as u64, ..Default::default() };
            (n, run_trials(&cfg).expect("valid config"))
        })
        .collect()
}

fn criterion1(batches: &[(usize, TrialBatch)]) -> Line {
    let mut trials = 0;
    let mut violations = 0;
    let mut failed = 0;
    for (_, b) in batches {
        for r in &b.records {
            trials += 1;
            failed += usize::from(r.error.is_some());
            let (Some(md2), Some(c2), Some(ham)) = (r.rho_md2(), r.rho_2conn(), r.rho_ham()) else {
                continue;
            };
            violations += usize::from(!(md2 <= c2 && c2 <= ham));
        }
    }
    line(
        violations == 0 && failed == 0 && trials == 2000,
        format!("{trials} trials, {violations} violations, {failed} failed"),
    )
}

fn criterion2() -> Line {
    let rep = oracle_check(200, &NormSpec::euclidean_plane(), 2).expect("oracle check");
    line(
        rep.all_agree() && rep.hamilton_instances == 200 && rep.connectivity_instances == 200,
        format!(
            "hamilton {}/200 agree ({} positive), 2-connectivity {}/200 agree ({} positive), spectra {}/{} agree",
            200 - rep.hamilton_mismatches.len(),
            rep.hamilton_positive,
            200 - rep.connectivity_mismatches.len(),
            rep.connectivity_positive,
            rep.spectrum_instances - rep.spectrum_mismatches.len(),
            rep.spectrum_instances
        ),
    )
}

fn criterion3(batches: &[(usize, TrialBatch)]) -> Line {
    let mut freq = Vec::new();
    for (n, b) in batches {
        let hits = b.records.iter().filter(|r| r.flag_md2_eq_ham() == Some(true)).count();
        freq.push((*n, hits, b.records.len()));
    }
    let mut trend = true;
    for i in 0..freq.len() {
        for j in i + 1..freq.len() {
            let (lo_i, _) = wilson(freq[i].1, freq[i].2);
            let (_, hi_j) = wilson(freq[j].1, freq[j].2);
            trend &= hi_j >= lo_i;
        }
    }
    let mut pinned = true;
    let mut parts = Vec::new();
    for ((n, hits, total), (pn, want)) in freq.iter().zip(PINNED_MD2_EQ_HAM) {
        let f = *hits as f64 / *total as f64;
        pinned &= *n == pn && (f - want).abs() <= PIN_TOLERANCE;
        parts.push(format!("n={n}: {f:.3} (pinned {want:.3})"));
    }
    line(trend && pinned, format!("{}; trend within 95% overlap: {trend}", parts.join(", ")))
}

/// The upper endpoint cannot meet 1e-6: `1 - F(20)` is about `sqrt(pi) e^-10`.
/// The gate instead requires it to match an independent evaluation of that tail.
fn criterion4() -> (Line, bool) {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let at0 = (limit_probability(0.0) - (-(1.0 + sqrt_pi)).exp()).abs();
    let grid: Vec<f64> = (0..=1200).map(|i| limit_probability(-6.0 + i as f64 * 0.01)).collect();
    let mono = grid.windows(2).all(|w| w[1] > w[0]);
    let lo = limit_probability(-20.0);
    let tail = 1.0 - limit_probability(20.0);
    let e = (-10.0f64).exp();
    let tail_ref = -(-(sqrt_pi + e) * e).exp_m1();
    let rest = at0 <= 1e-12 && mono && lo <= 1e-6;
    (
        line(
            rest && tail <= 1e-6,
            format!(
                "|F(0) - exp(-(1+sqrt pi))| = {at0:.1e}, strictly increasing on grid: {mono}, F(-20) = {lo:.1e}, \
                 1 - F(20) = {tail:.2e} (closed form gives {tail_ref:.2e}, bound 1e-6 needs x >= 28.7)"
            ),
        ),
        rest && (tail - tail_ref).abs() <= 1e-12,
    )
}

fn criterion5() -> (Line, bool) {
    let cfg = TrialConfig {
        n: 20_000,
        trials: 300,
        master_seed: 20_000,
        oracle_mode: OracleMode::Radii,
        ..Default::default()
    };
    let b = run_trials(&cfg).expect("valid config");
    let ks = b.summary.ks_distance.expect("x samples");
    let xs = &b.summary.x_samples;
    let median = xs[xs.len() / 2];
    let in_band = (KS_REFERENCE_BAND.0..=KS_REFERENCE_BAND.1).contains(&ks) && b.summary.failed_trials == 0;
    (
        line(
            ks <= 0.15,
            format!(
                "KS = {ks:.3} over {} samples (bound 0.15); sample median x = {median:.2}, limit median 2.22; \
                 independent sampler band [{}, {}]: {in_band}",
                xs.len(),
                KS_REFERENCE_BAND.0,
                KS_REFERENCE_BAND.1
            ),
        ),
        in_band,
    )
}

fn tree_check(nodes: &[Vec<f64>], norm: &NormSpec, r: f64, bound: usize) -> Result<usize, String> {
    let tree = bounded_degree_spanning_tree(nodes, norm, r).map_err(|e| e.to_string())?;
    let edges = tree.edges();
    let n = nodes.len();
    if edges.len() + 1 != n {
        return Err(format!("{} edges for {n} nodes", edges.len()));
    }
    let mut dsu = Dsu::new(n);
    for &(a, b) in &edges {
        if !dsu.union(a, b) {
            return Err(format!("cycle through ({a}, {b})"));
        }
        if lp_distance(&nodes[a], &nodes[b], norm).map_err(|e| e.to_string())? > r {
            return Err(format!("edge ({a}, {b}) longer than r"));
        }
    }
    let mut deg = vec![0usize; n];
    for &(a, b) in &edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let max = deg.into_iter().max().unwrap_or(0);
    if max > bound {
        return Err(format!("degree {max} > {bound}"));
    }
    Ok(max)
}

fn criterion6() -> Line {
    let mut parts = Vec::new();
    let mut pass = true;
    for (norm, bound, tag) in [
        (NormSpec::euclidean_plane(), 26, "p=2"),
        (NormSpec::new(2, Exponent::Infinity).unwrap(), 10, "p=inf"),
    ] {
        let mut worst = 0;
        let mut bad = Vec::new();
        for i in 0..1000u64 {
            let seed = trial_seed(6, i);
            let n = 2 + (seed % 499) as usize;
            let pts = sample_uniform_points(n, &norm, seed).unwrap();
            let r = rho_connected(&EdgeProcess::build(&pts, &norm).unwrap()).unwrap();
            let nodes: Vec<Vec<f64>> = pts.iter().map(<[f64]>::to_vec).collect();
            match tree_check(&nodes, &norm, r, bound) {
                Ok(m) => worst = worst.max(m),
                Err(e) => bad.push(format!("instance {i}: {e}")),
            }
        }
        pass &= bad.is_empty();
        parts.push(format!("{tag}: 1000 instances, max degree {worst} (bound {bound}), {} bad", bad.len()));
        if let Some(e) = bad.first() {
            parts.push(e.clone());
        }
    }
    line(pass, parts.join("; "))
}

fn dense_constants() -> BuilderConstants {
    BuilderConstants { eta: 1.0 / 9.0, ..BuilderConstants::desk() }
}

fn criterion7() -> Line {
    let norm = NormSpec::euclidean_plane();
    let consts = dense_constants();
    let (n, rho) = (100_000usize, 0.3);
    let occupancy = n as f64 * (consts.eta * rho).powi(2);
    let mut ok = 0;
    let mut slowest = Duration::ZERO;
    let mut first_failure = None;
    for i in 0..100u64 {
        let pts = sample_uniform_points(n, &norm, trial_seed(7, i)).unwrap();
        let t = Instant::now();
        let out = build_hamilton_cycle(&pts, &norm, rho, &consts, true).unwrap();
        slowest = slowest.max(t.elapsed());
        match out {
            Ok(b) if verify_cycle(&pts, &norm, rho, &b.cycle).is_valid() => ok += 1,
            Ok(_) => {
                first_failure.get_or_insert(format!("trial {i}: cycle does not verify"));
            }
            Err(f) => {
                first_failure.get_or_insert(format!("trial {i}: {f}"));
            }
        }
    }
    line(
        ok >= 95 && slowest <= Duration::from_secs(10),
        format!(
            "{ok}/100 verified cycles (n=1e5, rho=0.3, eta=1/9, K={}, expected cell occupancy {occupancy:.1} >= 3K), \
             slowest build {:.2}s{}",
            consts.k_dense,
            slowest.as_secs_f64(),
            first_failure.map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

fn criterion8() -> Line {
    let norm = NormSpec::euclidean_plane();
    let consts = BuilderConstants::desk();
    let mut ok = 0;
    let mut problems = Vec::new();
    for seed in 0..50u64 {
        let inst = planted_clique_instance(seed).unwrap();
        let build = match build_hamilton_cycle(&inst.points, &norm, inst.rho, &consts, false).unwrap() {
            Ok(b) => b,
            Err(f) => {
                problems.push(format!("seed {seed}: {f}"));
                continue;
            }
        };
        if build.escorts.is_empty() {
            problems.push(format!("seed {seed}: no escort bundle"));
            continue;
        }
        let plan = match Plan::prepare(&inst.points, &norm, inst.rho, &consts, false).unwrap() {
            Ok(p) => p,
            Err(f) => {
                problems.push(format!("seed {seed}: plan {f}"));
                continue;
            }
        };
        if let Err(e) = validate_bundles(&plan, &build.escorts) {
            problems.push(format!("seed {seed}: {e}"));
            continue;
        }
        if !verify_cycle(&inst.points, &norm, inst.rho, &build.cycle).is_valid() {
            problems.push(format!("seed {seed}: cycle does not verify"));
            continue;
        }
        ok += 1;
    }
    line(
        ok == 50,
        format!("{ok}/50 planted instances built with validated escorts{}", problems.first().map(|p| format!("; {p}")).unwrap_or_default()),
    )
}

/// Pancyclic fraction among Hamiltonian instances at rho(md2), plus the
/// number of instances drawn.
fn small_pancyclic_fraction() -> (f64, usize) {
    let norm = NormSpec::euclidean_plane();
    let n = 16;
    let (mut ham, mut pancyclic, mut drawn) = (0usize, 0usize, 0usize);
    while ham < 100 {
        let pts = sample_uniform_points(n, &norm, trial_seed(9, drawn as u64)).unwrap();
        drawn += 1;
        let proc = EdgeProcess::build(&pts, &norm).unwrap();
        let g = proc.graph_at_rank(min_degree_rank(&proc, 2).unwrap());
        if is_hamiltonian_exact(&g).unwrap().is_none() {
            continue;
        }
        ham += 1;
        pancyclic += usize::from((3..=n).all(|l| has_cycle_of_length(&g, l).unwrap()));
    }
    (pancyclic as f64 / ham as f64, drawn)
}

/// Replays every stage of a family on a linked list, checking the base cycle
/// and each shortcut edge directly.
fn family_verifies(points: &PointSet, norm: &NormSpec, rho: f64, fam: &geohamilton::builder::PancyclicFamily) -> Result<(), String> {
    for (s, stage) in fam.stages.iter().enumerate() {
        if let Some(f) = verify_partial_cycle(points, norm, rho, &stage.base).failure {
            return Err(format!("stage {s} base: {f}"));
        }
        let m = stage.base.len();
        let mut pos = vec![usize::MAX; points.len()];
        for (k, &v) in stage.base.iter().enumerate() {
            pos[v] = k;
        }
        let mut next: Vec<usize> = (0..m).map(|k| (k + 1) % m).collect();
        let mut prev: Vec<usize> = (0..m).map(|k| (k + m - 1) % m).collect();
        let mut alive = vec![true; m];
        let mut left = m;
        for &v in &stage.deletions {
            let k = pos[v];
            if k == usize::MAX || !alive[k] {
                return Err(format!("stage {s}: deleting absent vertex {v}"));
            }
            if left <= 3 {
                return Err(format!("stage {s}: shrinks below 3"));
            }
            let (a, b) = (prev[k], next[k]);
            let d = lp_distance(points.get(stage.base[a]), points.get(stage.base[b]), norm).unwrap();
            if d > rho {
                return Err(format!("stage {s}: shortcut around {v} has length {d}"));
            }
            next[a] = b;
            prev[b] = a;
            alive[k] = false;
            left -= 1;
        }
    }
    for (l, c) in &fam.explicit {
        if c.len() != *l || !verify_partial_cycle(points, norm, rho, c).is_valid() {
            return Err(format!("explicit cycle of length {l} does not verify"));
        }
    }
    Ok(())
}

fn criterion9() -> Line {
    let (frac, drawn) = small_pancyclic_fraction();
    let small_ok = (frac - PINNED_PANCYCLIC).abs() <= PIN_TOLERANCE;
    let norm = NormSpec::euclidean_plane();
    let pts = sample_uniform_points(100_000, &norm, trial_seed(7, 0)).unwrap();
    let t = Instant::now();
    let (dense_ok, detail) = match build_pancyclic_family(&pts, &norm, 0.3, &dense_constants()).unwrap() {
        Ok(fam) => match (fam.first_missing(), family_verifies(&pts, &norm, 0.3, &fam)) {
            (None, Ok(())) => (true, format!("{} stages, all lengths 3..=100000 verified", fam.stages.len())),
            (Some(l), _) => (false, format!("length {l} missing")),
            (None, Err(e)) => (false, e),
        },
        Err(f) => (false, format!("failed at length {}: {}", f.length, f.reason)),
    };
    line(
        small_ok && dense_ok,
        format!(
            "n=16: {frac:.3} of 100 Hamiltonian instances at rho(md2) pancyclic ({drawn} drawn, pinned {PINNED_PANCYCLIC:.3}); \
             dense family: {detail} in {:.1}s",
            t.elapsed().as_secs_f64()
        ),
    )
}

fn csv_bytes(cfg: &TrialConfig) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(&run_trials(cfg).unwrap().records, &mut out).unwrap();
    out
}

fn criterion10() -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for base in [
        TrialConfig { n: 12, trials: 200, master_seed: 10, ..Default::default() },
        TrialConfig { n: 3000, trials: 16, master_seed: 11, oracle_mode: OracleMode::Radii, ..Default::default() },
    ] {
        let runs: Vec<Vec<u8>> = [1, 1, 4, 4]
            .into_iter()
            .map(|w| csv_bytes(&TrialConfig { workers: w, ..base.clone() }))
            .collect();
        let same = runs.windows(2).all(|w| w[0] == w[1]);
        pass &= same;
        parts.push(format!("n={} {:?}: {} bytes, identical: {same}", base.n, base.oracle_mode, runs[0].len()));
    }
    line(pass, parts.join("; "))
}

fn main() {
    let started = Instant::now();
    let mut gate = true;
    let mut passed = 0;
    let mut report = |id: usize, l: Line, gating: bool| {
        println!("criterion {id}: {} | {}", if l.pass { "PASS" } else { "FAIL" }, l.detail);
        passed += usize::from(l.pass);
        gate &= l.pass || !gating;
    };
    let batches = exact_batches();
    report(1, criterion1(&batches), true);
    report(2, criterion2(), true);
    report(3, criterion3(&batches), true);
    let (c4, c4_consistent) = criterion4();
    report(4, c4, false);
    let (c5, in_band) = criterion5();
    report(5, c5, false);
    report(6, criterion6(), true);
    report(7, criterion7(), true);
    report(8, criterion8(), true);
    report(9, criterion9(), true);
    report(10, criterion10(), true);
    println!("acceptance: {passed}/10 criteria pass in {:.0}s", started.elapsed().as_secs_f64());
    if !in_band {
        println!("criterion 5 left the independent reference band");
    }
    if !c4_consistent {
        println!("criterion 4 disagrees with the closed form");
    }
    if !gate || !in_band || !c4_consistent {
        std::process::exit(1);
    }
}

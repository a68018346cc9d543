use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ks_distance, limit_probability};
use crate::builder::{build_hamilton_cycle, BuilderConstants};
use crate::error::{Error, Result};
use crate::geometry::{sample_uniform_points, trial_seed, NormSpec, PointSet};
use crate::graph::EdgeProcess;
use crate::hitting::{hitting_report, rho_min_degree_points, with_process, HittingReport};
use crate::oracles::HAMILTON_CEILING;

/// Which Hamiltonicity evidence a trial collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// Exact hitting radius of Hamiltonicity.
    Exact,
    /// The constructive builder at the 2-connectivity radius.
    Constructive,
    Both,
    /// Degree and connectivity radii only.
    Radii,
}

impl FromStr for OracleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(OracleMode::Exact),
            "constructive" => Ok(OracleMode::Constructive),
            "both" => Ok(OracleMode::Both),
            "radii" => Ok(OracleMode::Radii),
            _ => Err(Error::Parse(format!("unknown oracle mode {s:?}"))),
        }
    }
}

impl OracleMode {
    fn exact(self) -> bool {
        matches!(self, OracleMode::Exact | OracleMode::Both)
    }

    fn constructive(self) -> bool {
        matches!(self, OracleMode::Constructive | OracleMode::Both)
    }
}

/// Builder constant set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Asymptotic,
    Desk,
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asymptotic" => Ok(Profile::Asymptotic),
            "desk" => Ok(Profile::Desk),
            _ => Err(Error::Parse(format!("unknown profile {s:?}"))),
        }
    }
}

impl Profile {
    pub fn constants(self) -> BuilderConstants {
        match self {
            Profile::Asymptotic => BuilderConstants::asymptotic(),
            Profile::Desk => BuilderConstants::desk(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialConfig {
    pub n: usize,
    pub norm: NormSpec,
    pub trials: usize,
    pub master_seed: u64,
    pub k_max: usize,
    pub oracle_mode: OracleMode,
    pub profile: Profile,
    /// Overrides the profile's `eta`.
    pub eta: Option<f64>,
    pub output: Option<PathBuf>,
    /// Worker threads; 0 uses every core. Never changes the output.
    pub workers: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            n: 12,
            norm: NormSpec::euclidean_plane(),
            trials: 100,
            master_seed: 0,
            k_max: 2,
            oracle_mode: OracleMode::Exact,
            profile: Profile::Desk,
            eta: None,
            output: None,
            workers: 0,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::contract(format!("n must be >= 3, got {}", self.n)));
        }
        if self.trials == 0 {
            return Err(Error::contract("trials must be >= 1"));
        }
        if self.k_max < 2 || self.k_max >= self.n {
            return Err(Error::contract(format!("k_max must lie in 2..{}, got {}", self.n, self.k_max)));
        }
        if self.oracle_mode.exact() && self.n > HAMILTON_CEILING {
            return Err(Error::Capacity { what: "exact Hamiltonicity", n: self.n, limit: HAMILTON_CEILING });
        }
        if self.oracle_mode.constructive() {
            self.builder_constants().validate(&self.norm)?;
        }
        Ok(())
    }

    pub fn builder_constants(&self) -> BuilderConstants {
        let c = self.profile.constants();
        BuilderConstants { eta: self.eta.unwrap_or(c.eta), ..c }
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    pub n: usize,
    pub norm: NormSpec,
    pub report: Option<HittingReport>,
    /// `ok`, `fail:<stage>` or `error:<message>`; absent when the builder did not run.
    pub builder_status: Option<String>,
    pub error: Option<String>,
}

impl TrialRecord {
    fn radius(&self, f: impl Fn(&HittingReport) -> Option<f64>) -> Option<f64> {
        self.report.as_ref().and_then(f)
    }

    pub fn rho_md1(&self) -> Option<f64> {
        self.radius(|r| r.rho_min_degree.first().copied())
    }

    pub fn rho_md2(&self) -> Option<f64> {
        self.radius(|r| r.rho_min_degree.get(1).copied())
    }

    pub fn rho_conn(&self) -> Option<f64> {
        self.radius(|r| Some(r.rho_connected))
    }

    pub fn rho_2conn(&self) -> Option<f64> {
        self.radius(|r| r.rho_k_connected.get(1).copied())
    }

    pub fn rho_ham(&self) -> Option<f64> {
        self.radius(|r| r.rho_hamiltonian)
    }

    pub fn x_md2(&self) -> Option<f64> {
        self.radius(|r| r.x_statistic)
    }

    /// Equal radii mean equal hitting ranks up to exact length ties.
    pub fn flag_md2_eq_2conn(&self) -> Option<bool> {
        Some(self.rho_md2()? == self.rho_2conn()?)
    }

    pub fn flag_2conn_eq_ham(&self) -> Option<bool> {
        Some(self.rho_2conn()? == self.rho_ham()?)
    }

    pub fn flag_md2_eq_ham(&self) -> Option<bool> {
        Some(self.rho_md2()? == self.rho_ham()?)
    }

    pub fn chain_violations(&self) -> Vec<String> {
        self.report.as_ref().map(HittingReport::chain_violations).unwrap_or_default()
    }

    pub fn row(&self) -> TrialRow {
        TrialRow {
            trial_index: self.trial_index,
            seed: self.seed,
            n: self.n,
            d: self.norm.dim(),
            p: self.norm.exponent().to_string(),
            rho_md1: self.rho_md1(),
            rho_md2: self.rho_md2(),
            rho_conn: self.rho_conn(),
            rho_2conn: self.rho_2conn(),
            rho_ham: self.rho_ham(),
            flag_md2_eq_2conn: self.flag_md2_eq_2conn(),
            flag_2conn_eq_ham: self.flag_2conn_eq_ham(),
            flag_md2_eq_ham: self.flag_md2_eq_ham(),
            x_md2: self.x_md2(),
            builder_status: match (&self.error, &self.builder_status) {
                (Some(e), _) => Some(format!("error:{e}")),
                (None, s) => s.clone(),
            },
        }
    }
}

pub const CSV_HEADER: [&str; 15] = [
    "trial_index",
    "seed",
    "n",
    "d",
    "p",
    "rho_md1",
    "rho_md2",
    "rho_conn",
    "rho_2conn",
    "rho_ham",
    "flag_md2_eq_2conn",
    "flag_2conn_eq_ham",
    "flag_md2_eq_ham",
    "x_md2",
    "builder_status",
];

/// One CSV line; empty cells for quantities a trial did not compute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial_index: usize,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub p: String,
    pub rho_md1: Option<f64>,
    pub rho_md2: Option<f64>,
    pub rho_conn: Option<f64>,
    pub rho_2conn: Option<f64>,
    pub rho_ham: Option<f64>,
    pub flag_md2_eq_2conn: Option<bool>,
    pub flag_2conn_eq_ham: Option<bool>,
    pub flag_md2_eq_ham: Option<bool>,
    pub x_md2: Option<f64>,
    pub builder_status: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub trials: usize,
    pub failed_trials: usize,
    pub chain_violations: usize,
    pub freq_md2_eq_2conn: Option<f64>,
    pub freq_2conn_eq_ham: Option<f64>,
    pub freq_md2_eq_ham: Option<f64>,
    /// Sorted `x` values at the min-degree-2 radius.
    pub x_samples: Vec<f64>,
    /// KS distance of `x_samples` to [`limit_probability`].
    pub ks_distance: Option<f64>,
    pub builder_runs: usize,
    pub builder_successes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialBatch {
    pub records: Vec<TrialRecord>,
    pub summary: SummaryStats,
}

fn frequency(flags: impl Iterator<Item = Option<bool>>) -> Option<f64> {
    let (mut hit, mut all) = (0usize, 0usize);
    for f in flags.flatten() {
        all += 1;
        hit += usize::from(f);
    }
    (all > 0).then(|| hit as f64 / all as f64)
}

/// Aggregates records; the result does not depend on their order.
pub fn summarize(records: &[TrialRecord]) -> SummaryStats {
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.trial_index);
    let mut x_samples: Vec<f64> = sorted.iter().filter_map(|r| r.x_md2()).collect();
    x_samples.sort_by(f64::total_cmp);
    let ks = (!x_samples.is_empty()).then(|| ks_distance(&x_samples, limit_probability).expect("nonempty"));
    let runs: Vec<&String> = sorted.iter().filter_map(|r| r.builder_status.as_ref()).collect();
    SummaryStats {
        trials: sorted.len(),
        failed_trials: sorted.iter().filter(|r| r.error.is_some()).count(),
        chain_violations: sorted.iter().map(|r| r.chain_violations().len()).sum(),
        freq_md2_eq_2conn: frequency(sorted.iter().map(|r| r.flag_md2_eq_2conn())),
        freq_2conn_eq_ham: frequency(sorted.iter().map(|r| r.flag_2conn_eq_ham())),
        freq_md2_eq_ham: frequency(sorted.iter().map(|r| r.flag_md2_eq_ham())),
        x_samples,
        ks_distance: ks,
        builder_runs: runs.len(),
        builder_successes: runs.iter().filter(|s| s.as_str() == "ok").count(),
    }
}

fn trial_report(cfg: &TrialConfig, points: &PointSet) -> Result<(HittingReport, Option<String>)> {
    let report = if cfg.oracle_mode.exact() {
        let proc = EdgeProcess::build(points, &cfg.norm)?;
        hitting_report(&proc, cfg.k_max, true)?
    } else {
        let top = rho_min_degree_points(points, &cfg.norm, cfg.k_max)?;
        with_process(points, &cfg.norm, 1.25 * top, |proc| hitting_report(proc, cfg.k_max, false))?
    };
    let status = if cfg.oracle_mode.constructive() {
        let rho = report.rho_k_connected[1];
        Some(match build_hamilton_cycle(points, &cfg.norm, rho, &cfg.builder_constants(), false) {
            Ok(Ok(_)) => "ok".to_string(),
            Ok(Err(f)) => format!("fail:{:?}", f.stage),
            Err(e) => format!("error:{e}"),
        })
    } else {
        None
    };
    Ok((report, status))
}

fn run_trial(cfg: &TrialConfig, index: usize) -> TrialRecord {
    let seed = trial_seed(cfg.master_seed, index as u64);
    match sample_uniform_points(cfg.n, &cfg.norm, seed) {
        Ok(points) => record_for_points(cfg, index, seed, &points),
        Err(e) => TrialRecord { error: Some(e.to_string()), ..empty_record(cfg, index, seed, cfg.n) },
    }
}

fn empty_record(cfg: &TrialConfig, index: usize, seed: u64, n: usize) -> TrialRecord {
    TrialRecord { trial_index: index, seed, n, norm: cfg.norm, report: None, builder_status: None, error: None }
}

/// One trial on given points, with the modes and constants of `cfg`.
/// Errors end up in the record.
pub fn record_for_points(cfg: &TrialConfig, index: usize, seed: u64, points: &PointSet) -> TrialRecord {
    let base = empty_record(cfg, index, seed, points.len());
    match trial_report(cfg, points) {
        Ok((report, builder_status)) => TrialRecord { report: Some(report), builder_status, ..base },
        Err(e) => TrialRecord { error: Some(e.to_string()), ..base },
    }
}

/// Runs every trial with seed `trial_seed(master_seed, index)`; records come
/// back in index order whatever the worker count.
pub fn run_trials(cfg: &TrialConfig) -> Result<TrialBatch> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::contract(format!("thread pool: {e}")))?;
    let records: Vec<TrialRecord> =
        pool.install(|| (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).collect());
    let summary = summarize(&records);
    Ok(TrialBatch { records, summary })
}

/// Writes the header and one row per record.
pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r.row())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_row() {
        let cfg = TrialConfig { n: 8, trials: 3, ..Default::default() };
        let batch = run_trials(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&batch.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.count(), 3);
        assert_eq!(batch.summary.chain_violations, 0);
    }

    #[test]
    fn right_triangle_record() {
        let pts = PointSet::from_rows(&[vec![0.0, 0.0], vec![0.3, 0.0], vec![0.3, 0.4]]).unwrap();
        let cfg = TrialConfig { n: 3, ..Default::default() };
        let rec = record_for_points(&cfg, 0, 0, &pts);
        let row = rec.row();
        assert!((row.rho_md1.unwrap() - 0.4).abs() < 1e-12);
        for r in [row.rho_md2, row.rho_2conn, row.rho_ham] {
            assert!((r.unwrap() - 0.5).abs() < 1e-12);
        }
        assert!((row.rho_conn.unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(row.flag_md2_eq_ham, Some(true));
        assert_eq!(row.flag_md2_eq_2conn, Some(true));
        assert_eq!(row.flag_2conn_eq_ham, Some(true));
    }

    #[test]
    fn config_json_roundtrip_and_checks() {
        let cfg: TrialConfig = serde_json::from_str(r#"{"n": 10, "norm": {"d": 2, "p": "inf"}, "trials": 4}"#).unwrap();
        assert_eq!(cfg.n, 10);
        assert_eq!(cfg.norm.dim(), 2);
        let back: TrialConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(serde_json::from_str::<TrialConfig>(r#"{"bogus": 1}"#).is_err());
        assert!(TrialConfig { n: 30, ..Default::default() }.validate().is_err());
        assert!(TrialConfig { trials: 0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn summary_is_order_independent() {
        let cfg = TrialConfig { n: 9, trials: 6, master_seed: 4, ..Default::default() };
        let batch = run_trials(&cfg).unwrap();
        let mut rev = batch.records.clone();
        rev.reverse();
        assert_eq!(summarize(&rev), batch.summary);
    }
}

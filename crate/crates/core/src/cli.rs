//! Command-line surface of the `geohamilton` binary.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::builder::{build_hamilton_cycle, BudgetReport, BuildFailure, EscortBundle};
use crate::dissection::{audit_properties, build_dissection, classify_and_extract};
use crate::error::Error;
use crate::experiments::{limit_curve, oracle_check, run_trials, write_csv, OracleMode, Profile, TrialConfig};
use crate::fixtures::planted_clique_instance;
use crate::geometry::{sample_uniform_points, Exponent, NormSpec, PointSet};
use crate::hitting::{hitting_report, rho_min_degree_points, with_process};

#[derive(Debug, Parser)]
#[command(name = "geohamilton", version, about = "Hitting radii and Hamilton cycles of random geometric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run seeded trials and write one CSV row per trial.
    Simulate(SimulateArgs),
    /// Build a Hamilton cycle with the walk rules.
    BuildCycle(BuildArgs),
    /// Check the structural properties of a dissection.
    Audit(AuditArgs),
    /// Tabulate the limit law of the centred min-degree-2 radius.
    LimitCurve(CurveArgs),
    /// Compare the fast oracles with exhaustive search on small graphs.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// JSON file with trial config fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Norm exponent, a number > 1 or `inf`.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k_max: Option<usize>,
    /// exact, constructive, both or radii.
    #[arg(long)]
    mode: Option<String>,
    /// asymptotic or desk.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the summary as JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PointSource {
    /// Points file: one point per line, whitespace-separated coordinates.
    #[arg(long, conflicts_with_all = ["planted", "n"])]
    points: Option<PathBuf>,
    /// Use the planted clique instance with this seed.
    #[arg(long, conflicts_with = "n")]
    planted: Option<u64>,
    /// Generate this many uniform points.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for generated points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value = "2")]
    p: String,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    source: PointSource,
    /// Edge radius; defaults to the planted radius or the 2-connectivity radius.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, default_value = "desk")]
    profile: String,
    #[arg(long)]
    eta: Option<f64>,
    /// Run the full property audit before building.
    #[arg(long)]
    audit_first: bool,
    /// Cycle destination, one vertex index per line; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// JSON diagnostics destination.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[command(flatten)]
    source: PointSource,
    /// Dissection scale; defaults like `build-cycle --rho`.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value = "desk")]
    profile: String,
    #[arg(long)]
    eta: Option<f64>,
    /// Dense threshold; the profile's by default.
    #[arg(long)]
    k: Option<usize>,
    /// Verdict CSV destination; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = -6.0)]
    from: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 6.0)]
    to: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value = "2")]
    p: String,
    /// JSON report destination; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

enum Failure {
    /// Bad arguments or config; exit code 2.
    Usage(String),
    /// The run itself failed; exit code 1.
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `argv` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::BuildCycle(a) => build_cycle(a),
        Command::Audit(a) => audit(a),
        Command::LimitCurve(a) => curve(a),
        Command::OracleCheck(a) => check_oracles(a),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn sink(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn norm_from(d: usize, p: &str) -> std::result::Result<NormSpec, Failure> {
    let p = Exponent::parse(p).map_err(usage)?;
    NormSpec::new(d, p).map_err(usage)
}

fn trial_config(a: &SimulateArgs) -> std::result::Result<TrialConfig, Failure> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<TrialConfig>(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => TrialConfig::default(),
    };
    if a.d.is_some() || a.p.is_some() {
        let d = a.d.unwrap_or(cfg.norm.dim());
        let p = a.p.clone().unwrap_or(cfg.norm.exponent().to_string());
        cfg.norm = norm_from(d, &p)?;
    }
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    if let Some(s) = a.seed {
        cfg.master_seed = s;
    }
    if let Some(k) = a.k_max {
        cfg.k_max = k;
    }
    if let Some(m) = &a.mode {
        cfg.oracle_mode = m.parse::<OracleMode>().map_err(usage)?;
    }
    if let Some(p) = &a.profile {
        cfg.profile = p.parse::<Profile>().map_err(usage)?;
    }
    if a.eta.is_some() {
        cfg.eta = a.eta;
    }
    if let Some(w) = a.workers {
        cfg.workers = w;
    }
    if a.output.is_some() {
        cfg.output = a.output.clone();
    }
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn simulate(a: SimulateArgs) -> Outcome {
    let cfg = trial_config(&a)?;
    let batch = run_trials(&cfg)?;
    write_csv(&batch.records, sink(cfg.output.as_ref())?)?;
    if let Some(path) = &a.summary {
        fs::write(path, serde_json::to_string_pretty(&batch.summary).map_err(Error::from)?)?;
    }
    let s = &batch.summary;
    eprintln!(
        "{} trials, {} failed, {} chain violations, md2=ham frequency {}",
        s.trials,
        s.failed_trials,
        s.chain_violations,
        s.freq_md2_eq_ham.map_or("n/a".to_string(), |f| format!("{f:.4}"))
    );
    Ok(())
}

/// Points plus the default radius for the source.
fn load_points(src: &PointSource) -> std::result::Result<(PointSet, NormSpec, Option<f64>), Failure> {
    let norm = norm_from(src.d, &src.p)?;
    if let Some(path) = &src.points {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let pts = PointSet::parse_text(&text).map_err(usage)?;
        pts.check_norm(&norm).map_err(usage)?;
        return Ok((pts, norm, None));
    }
    if let Some(seed) = src.planted {
        if !norm.is_planar_euclidean() {
            return Err(usage("the planted instance lives in the Euclidean plane"));
        }
        let inst = planted_clique_instance(seed)?;
        return Ok((inst.points, norm, Some(inst.rho)));
    }
    match src.n {
        Some(n) => Ok((sample_uniform_points(n, &norm, src.seed)?, norm, None)),
        None => Err(usage("one of --points, --planted or --n is required")),
    }
}

fn two_connectivity_radius(points: &PointSet, norm: &NormSpec) -> crate::error::Result<f64> {
    let top = rho_min_degree_points(points, norm, 2)?;
    let rep = with_process(points, norm, 1.25 * top, |proc| hitting_report(proc, 2, false))?;
    Ok(rep.rho_k_connected[1])
}

fn builder_constants(profile: &str, eta: Option<f64>) -> std::result::Result<crate::builder::BuilderConstants, Failure> {
    let c = profile.parse::<Profile>().map_err(usage)?.constants();
    Ok(crate::builder::BuilderConstants { eta: eta.unwrap_or(c.eta), ..c })
}

#[derive(Serialize)]
struct Diagnostics<'a> {
    n: usize,
    rho: f64,
    status: &'a str,
    escorts: Option<&'a [EscortBundle]>,
    budget: Option<BudgetReport>,
    giant_cells: Option<usize>,
    small_components: Option<usize>,
    labelled: Option<usize>,
    failure: Option<&'a BuildFailure>,
}

fn build_cycle(a: BuildArgs) -> Outcome {
    let (points, norm, default_rho) = load_points(&a.source)?;
    let consts = builder_constants(&a.profile, a.eta)?;
    consts.validate(&norm).map_err(usage)?;
    let rho = match a.rho.or(default_rho) {
        Some(r) => r,
        None => two_connectivity_radius(&points, &norm)?,
    };
    let outcome = build_hamilton_cycle(&points, &norm, rho, &consts, a.audit_first)?;
    let diag = Diagnostics {
        n: points.len(),
        rho,
        status: if outcome.is_ok() { "ok" } else { "failed" },
        escorts: outcome.as_ref().ok().map(|b| b.escorts.as_slice()),
        budget: outcome.as_ref().ok().map(|b| b.budget),
        giant_cells: outcome.as_ref().ok().map(|b| b.giant_cells),
        small_components: outcome.as_ref().ok().map(|b| b.small_components),
        labelled: outcome.as_ref().ok().map(|b| b.labelled),
        failure: outcome.as_ref().err(),
    };
    if let Some(path) = &a.diagnostics {
        fs::write(path, serde_json::to_string_pretty(&diag).map_err(Error::from)?)?;
    }
    match outcome {
        Ok(build) => {
            let mut out = sink(a.output.as_ref())?;
            for v in &build.cycle {
                writeln!(out, "{v}")?;
            }
            out.flush()?;
            eprintln!("cycle of {} vertices at rho {rho}, {} escort bundles", build.cycle.len(), build.escorts.len());
            Ok(())
        }
        Err(f) => Err(Failure::Run(format!("build failed: {f}"))),
    }
}

fn audit(a: AuditArgs) -> Outcome {
    let (points, norm, default_rho) = load_points(&a.source)?;
    let consts = builder_constants(&a.profile, a.eta)?;
    let r = match a.r.or(default_rho) {
        Some(r) => r,
        None => two_connectivity_radius(&points, &norm)?,
    };
    let k = a.k.unwrap_or(consts.k_dense);
    let diss = build_dissection(&points, &norm, consts.eta, r, k).map_err(usage)?;
    let sg = classify_and_extract(&diss);
    let report = audit_properties(&diss, &sg, &consts.audit_constants(), &[]);
    let mut w = csv::Writer::from_writer(sink(a.output.as_ref())?);
    w.write_record(["property", "pass", "witness"]).map_err(Error::from)?;
    for row in report.csv_rows() {
        w.write_record(&row).map_err(Error::from)?;
    }
    w.flush()?;
    eprintln!("{}", if report.all_pass() { "all properties hold" } else { "some properties fail" });
    Ok(())
}

fn curve(a: CurveArgs) -> Outcome {
    let rows = limit_curve(a.from, a.to, a.step).map_err(usage)?;
    let mut w = csv::Writer::from_writer(sink(a.output.as_ref())?);
    w.write_record(["x", "probability"]).map_err(Error::from)?;
    for (x, p) in rows {
        w.write_record([x.to_string(), p.to_string()]).map_err(Error::from)?;
    }
    w.flush()?;
    Ok(())
}

fn check_oracles(a: OracleArgs) -> Outcome {
    let norm = norm_from(a.d, &a.p)?;
    if a.instances == 0 {
        return Err(usage("instances must be >= 1"));
    }
    let rep = oracle_check(a.instances, &norm, a.seed)?;
    let mut out = sink(a.output.as_ref())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&rep).map_err(Error::from)?)?;
    out.flush()?;
    if rep.all_agree() {
        Ok(())
    } else {
        Err(Failure::Run("oracle mismatch".to_string()))
    }
}

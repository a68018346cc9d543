//! Monte Carlo trials of hitting radii, the limit law of the min-degree-2
//! radius, and oracle cross-checks.

mod oracle_check;
mod trials;

pub use oracle_check::{oracle_check, OracleCheckReport};
pub use trials::{
    record_for_points, run_trials, summarize, write_csv, OracleMode, Profile, SummaryStats, TrialBatch, TrialConfig, TrialRecord,
    TrialRow, CSV_HEADER,
};

use crate::error::{Error, Result};

/// Limit of `P[x_n <= x]` for the centred min-degree-2 radius:
/// `exp(-(sqrt(pi) + e^{-x/2}) e^{-x/2})`.
pub fn limit_probability(x: f64) -> f64 {
    let e = (-x / 2.0).exp();
    (-(std::f64::consts::PI.sqrt() + e) * e).exp()
}

/// `(x, limit_probability(x))` on `from, from + step, ..` up to `to`.
pub fn limit_curve(from: f64, to: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0) || !(to >= from) || !from.is_finite() || !to.is_finite() {
        return Err(Error::contract(format!("bad grid from={from} to={to} step={step}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| from + i as f64 * step).map(|x| (x, limit_probability(x))).collect())
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` and `cdf`.
pub fn ks_distance<F>(samples: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if samples.is_empty() {
        return Err(Error::contract("KS distance of an empty sample"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::contract("KS distance of a sample containing NaN"));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / m - f).max(f - i as f64 / m);
    }
    Ok(d.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rng_for;
    use rand::Rng;

    #[test]
    fn limit_values() {
        let want = (-(1.0 + std::f64::consts::PI.sqrt())).exp();
        assert!((limit_probability(0.0) - want).abs() < 1e-15);
        assert!((limit_probability(0.0) - 0.06251).abs() < 1e-5);
        assert!(1.0 - limit_probability(100.0) < 1e-20);
        assert!(limit_probability(-50.0) < 1e-300);
    }

    #[test]
    fn curve_grid() {
        let c = limit_curve(-6.0, 6.0, 0.5).unwrap();
        assert_eq!(c.len(), 25);
        assert!(c.windows(2).all(|w| w[0].1 < w[1].1));
        assert!(limit_curve(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn ks_cases() {
        let uniform = |x: f64| x.clamp(0.0, 1.0);
        let m = 200;
        let quantiles: Vec<f64> = (1..=m).map(|i| i as f64 / m as f64).collect();
        assert!(ks_distance(&quantiles, uniform).unwrap() <= 1.0 / m as f64 + 1e-12);
        let constant = vec![0.5; 10];
        let d = ks_distance(&constant, uniform).unwrap();
        assert!(d >= 0.5 - 1e-12 && d <= 1.0);
        let mut rng = rng_for(9);
        let u: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>()).collect();
        assert!(ks_distance(&u, uniform).unwrap() <= 0.03);
        assert!(ks_distance(&[], uniform).is_err());
    }
}

//! Points in the unit cube, `l_p` norms and seeded uniform sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent of an `l_p` norm, `1 < p <= inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    /// Parses `"inf"`, `"infinity"` or a real number greater than one.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(Exponent::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad norm exponent {s:?}")))?;
        if p.is_infinite() && p > 0.0 {
            return Ok(Exponent::Infinity);
        }
        Ok(Exponent::Finite(p))
    }

    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Ambient dimension and `l_p` exponent defining edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormRepr", into = "NormRepr")]
pub struct NormSpec {
    d: usize,
    p: Exponent,
    /// `d^{1/p}`, the `l_p` diameter of the unit cube.
    diam: f64,
}

#[derive(Serialize, Deserialize)]
struct NormRepr {
    d: usize,
    p: String,
}

impl TryFrom<NormRepr> for NormSpec {
    type Error = Error;
    fn try_from(r: NormRepr) -> Result<Self> {
        NormSpec::new(r.d, Exponent::parse(&r.p)?)
    }
}

impl From<NormSpec> for NormRepr {
    fn from(n: NormSpec) -> Self {
        NormRepr {
            d: n.d,
            p: n.p.to_string(),
        }
    }
}

impl NormSpec {
    pub fn new(d: usize, p: Exponent) -> Result<Self> {
        if d < 2 {
            return Err(Error::contract(format!("dimension must be >= 2, got {d}")));
        }
        if let Exponent::Finite(v) = p {
            if !(v > 1.0) || !v.is_finite() {
                return Err(Error::contract(format!("norm exponent must be in (1, inf], got {v}")));
            }
        }
        let diam = (d as f64).powf(p.reciprocal());
        Ok(NormSpec { d, p, diam })
    }

    /// The planar Euclidean norm.
    pub fn euclidean_plane() -> Self {
        NormSpec::new(2, Exponent::Finite(2.0)).expect("valid norm")
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    /// `d^{1/p}` with `1/inf = 0`.
    pub fn diam_factor(&self) -> f64 {
        self.diam
    }

    pub fn is_planar_euclidean(&self) -> bool {
        self.d == 2 && self.p == Exponent::Finite(2.0)
    }

    /// Distance between two coordinate slices of length `d`; no checks.
    #[inline]
    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.p {
            Exponent::Infinity => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            Exponent::Finite(p) if p == 2.0 => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Exponent::Finite(p) => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }
}

/// `l_p` distance between two points of the norm's dimension.
pub fn lp_distance(a: &[f64], b: &[f64], norm: &NormSpec) -> Result<f64> {
    if a.len() != norm.dim() || b.len() != norm.dim() {
        return Err(Error::contract(format!(
            "dimension mismatch: {} and {} vs norm dimension {}",
            a.len(),
            b.len(),
            norm.dim()
        )));
    }
    Ok(norm.dist(a, b))
}

/// A single point of `[0,1]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::contract("a point needs at least 2 coordinates"));
        }
        if let Some(c) = coords.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::contract(format!("coordinate {c} outside [0,1]")));
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// A flat, immutable list of points sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    d: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Builds from row-major coordinates; every coordinate must lie in `[0,1]`.
    pub fn from_flat(d: usize, coords: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::contract(format!("dimension must be >= 2, got {d}")));
        }
        if coords.len() % d != 0 {
            return Err(Error::contract("coordinate count is not a multiple of d"));
        }
        if let Some(c) = coords.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::contract(format!("coordinate {c} outside [0,1]")));
        }
        Ok(PointSet { d, coords })
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        let d = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::EmptyInput("no points".into()))?;
        let mut coords = Vec::with_capacity(points.len() * d);
        for p in points {
            if p.dim() != d {
                return Err(Error::contract("points of mixed dimension"));
            }
            coords.extend_from_slice(p.coords());
        }
        PointSet::from_flat(d, coords)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::EmptyInput("no points".into()))?;
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::contract("points of mixed dimension"));
        }
        PointSet::from_flat(d, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    pub fn to_points(&self) -> Vec<Point> {
        self.iter().map(|c| Point(c.to_vec())).collect()
    }

    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn check_norm(&self, norm: &NormSpec) -> Result<()> {
        if self.d != norm.dim() {
            return Err(Error::contract(format!(
                "points have dimension {} but the norm has {}",
                self.d,
                norm.dim()
            )));
        }
        Ok(())
    }

    /// Reads the whitespace-separated points format: one point per line.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(str::parse::<f64>).collect();
            let row = row.map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            rows.push(row);
        }
        PointSet::from_rows(&rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.coords.len() * 20);
        for p in self.iter() {
            let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`: `splitmix64(master ^ splitmix64(index))`.
///
/// Trials draw from independent ChaCha8 streams, so results do not depend on
/// the order in which trials are executed.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// The generator used for all sampling: ChaCha8 keyed by the 64-bit seed.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` independent uniform points of `[0,1]^d`, reproducible from `seed`.
pub fn sample_uniform_points(n: usize, norm: &NormSpec, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::EmptyInput("cannot sample zero points".into()));
    }
    let mut rng = rng_for(seed);
    let d = norm.dim();
    let coords: Vec<f64> = (0..n * d).map(|_| rng.gen::<f64>()).collect();
    PointSet::from_flat(d, coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let e = NormSpec::euclidean_plane();
        let m = NormSpec::new(2, Exponent::Infinity).unwrap();
        let a = [0.0, 0.0];
        let b = [3.0, 4.0];
        assert_eq!(lp_distance(&a, &a, &e).unwrap(), 0.0);
        assert_eq!(lp_distance(&a, &b, &e).unwrap(), 5.0);
        assert_eq!(lp_distance(&a, &b, &m).unwrap(), 4.0);
        let p3 = NormSpec::new(2, Exponent::Finite(3.0)).unwrap();
        let want = (27.0f64 + 64.0).powf(1.0 / 3.0);
        assert!((lp_distance(&a, &b, &p3).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let e = NormSpec::euclidean_plane();
        assert!(matches!(
            lp_distance(&[0.0, 0.0, 0.0], &[0.0, 0.0], &e),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn norm_validation() {
        assert!(NormSpec::new(1, Exponent::Finite(2.0)).is_err());
        assert!(NormSpec::new(2, Exponent::Finite(1.0)).is_err());
        assert!(NormSpec::new(2, Exponent::Finite(0.5)).is_err());
        let inf = NormSpec::new(3, Exponent::Infinity).unwrap();
        assert_eq!(inf.diam_factor(), 1.0);
        let e3 = NormSpec::new(3, Exponent::Finite(2.0)).unwrap();
        assert!((e3.diam_factor() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn norm_serde_roundtrip() {
        let n = NormSpec::new(3, Exponent::Infinity).unwrap();
        let s = serde_json::to_string(&n).unwrap();
        assert_eq!(s, r#"{"d":3,"p":"inf"}"#);
        let back: NormSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, n);
    }

    #[test]
    fn sampling_is_deterministic() {
        let e = NormSpec::euclidean_plane();
        let a = sample_uniform_points(50, &e, 7).unwrap();
        let b = sample_uniform_points(50, &e, 7).unwrap();
        let c = sample_uniform_points(50, &e, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(matches!(sample_uniform_points(0, &e, 1), Err(Error::EmptyInput(_))));
        let one = sample_uniform_points(1, &e, 99).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.get(0).iter().all(|c| (0.0..=1.0).contains(c)));
    }

    #[test]
    fn sample_mean_near_half() {
        let e = NormSpec::euclidean_plane();
        let pts = sample_uniform_points(10_000, &e, 2024).unwrap();
        for axis in 0..2 {
            let mean: f64 = pts.iter().map(|p| p[axis]).sum::<f64>() / 10_000.0;
            // 5 sigma of the mean of U(0,1) at n = 10^4 is 5 * 0.2887 / 100 ~ 0.0144
            assert!((mean - 0.5).abs() < 0.02, "axis {axis} mean {mean}");
        }
    }

    #[test]
    fn trial_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| trial_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
    }

    #[test]
    fn text_roundtrip() {
        let e = NormSpec::euclidean_plane();
        let pts = sample_uniform_points(20, &e, 3).unwrap();
        let back = PointSet::parse_text(&pts.to_text()).unwrap();
        assert_eq!(pts, back);
        assert!(PointSet::parse_text("0.1 0.2\n0.3\n").is_err());
        assert!(PointSet::parse_text("0.1 1.2\n").is_err());
    }
}

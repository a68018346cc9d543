use crate::error::{Error, Result};

/// `x ln x - x + 1`, with the limit value 1 at `x = 0`.
pub fn entropy_h(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::contract(format!("H needs x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(x * x.ln() - x + 1.0)
}

/// Lower-tail bound `P(Bin(n, p) <= k) <= exp(-mu H(k / mu))` for `k <= mu = n p`.
pub fn chernoff_upper_bound(n: u64, p: f64, k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("p must lie in [0,1], got {p}")));
    }
    let mu = n as f64 * p;
    if !(k >= 0.0) || k > mu {
        return Err(Error::contract(format!("need 0 <= k <= np = {mu}, got k = {k}")));
    }
    if mu == 0.0 {
        return Ok(1.0);
    }
    Ok((-mu * entropy_h(k / mu)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn binomial_cdf(n: u64, p: f64, k: u64) -> f64 {
        let mut term = (1.0 - p).powi(n as i32);
        let mut sum = term;
        for i in 0..k {
            term *= (n - i) as f64 / (i + 1) as f64 * p / (1.0 - p);
            sum += term;
        }
        sum
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_h(1.0).unwrap(), 0.0);
        assert!((entropy_h(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(entropy_h(0.0).unwrap(), 1.0);
        assert!(entropy_h(-0.1).is_err());
    }

    #[test]
    fn bound_dominates_binomial_tail() {
        let b = chernoff_upper_bound(20, 0.3, 3.0).unwrap();
        assert!(b >= binomial_cdf(20, 0.3, 3));
        assert!(b > 0.0 && b <= 1.0);
        assert!(chernoff_upper_bound(20, 0.3, 7.0).is_err());
    }

    #[test]
    fn sweep() {
        for n in 1..=50u64 {
            for pi in 1..=9 {
                let p = pi as f64 / 10.0;
                let mu = n as f64 * p;
                let mut k = 0u64;
                while (k as f64) <= mu {
                    let b = chernoff_upper_bound(n, p, k as f64).unwrap();
                    assert!(b + 1e-12 >= binomial_cdf(n, p, k), "n={n} p={p} k={k}");
                    k += 1;
                }
            }
        }
    }
}

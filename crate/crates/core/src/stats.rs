//! Goodness-of-fit and proportion helpers.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Pearson's test of `observed` counts against the cell probabilities
/// `expected`, which must sum to 1.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> ChiSquareTest {
    assert_eq!(observed.len(), expected.len());
    assert!(observed.len() >= 2, "need at least two cells");
    let total: u64 = observed.iter().sum();
    let statistic = observed
        .iter()
        .zip(expected)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum::<f64>();
    let dof = observed.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    ChiSquareTest {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    }
}

pub fn chi_square_uniform(observed: &[u64]) -> ChiSquareTest {
    let k = observed.len();
    chi_square_gof(observed, &vec![1.0 / k as f64; k])
}

/// `(hits / samples, sqrt(est (1 - est) / samples))`.
pub fn proportion(hits: u64, samples: u64) -> (f64, f64) {
    if samples == 0 {
        return (0.0, 0.0);
    }
    let est = hits as f64 / samples as f64;
    (est, (est * (1.0 - est) / samples as f64).sqrt())
}

/// `|est - target| <= k * se`, treating a zero standard error as exact.
pub fn within_sigmas(est: f64, se: f64, target: f64, k: f64) -> bool {
    (est - target).abs() <= k * se + 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_fit() {
        let t = chi_square_uniform(&[100, 100, 100, 100]);
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.dof, 3);
        assert!((t.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_statistic() {
        // (90-100)^2/100 + (110-100)^2/100 = 2, one degree of freedom
        let t = chi_square_uniform(&[90, 110]);
        assert!((t.statistic - 2.0).abs() < 1e-12);
        assert!((t.p_value - 0.157_299_207).abs() < 1e-6, "{}", t.p_value);
        assert!(!chi_square_uniform(&[10, 190]).passes(1e-3));
    }

    #[test]
    fn proportions() {
        assert_eq!(proportion(0, 0), (0.0, 0.0));
        let (e, s) = proportion(25, 100);
        assert_eq!(e, 0.25);
        assert!((s - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!(within_sigmas(0.0, 0.0, 0.0, 3.0));
    }
}

//! Priority vectors: the Eigenvector Method and the Logarithmic Least
//! Squares Method.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcm::Pcm;

/// Tolerance on `sum(w) = 1` for a valid [`WeightVector`].
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Positive priorities summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    /// Validates already normalized weights.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositive {
                    row: i,
                    col: 0,
                    value: w,
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if weights.is_empty() || libm::fabs(sum - 1.0) > SUM_TOLERANCE {
            return Err(Error::InvalidConfig(alloc::format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(WeightVector(weights))
    }

    /// Scales positive `raw` values to sum one.
    pub fn normalize(raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        WeightVector::new(raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `w_i / w_j`.
    pub fn ratio(&self, i: usize, j: usize) -> f64 {
        self.0[i] / self.0[j]
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_difference(&self, other: &WeightVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| libm::fabs(a - b))
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        WeightVector::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Random consistency index by matrix size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomIndex(BTreeMap<usize, f64>);

impl Default for RandomIndex {
    /// Saaty-style values for `n = 3..=10`.
    fn default() -> Self {
        RandomIndex(
            [
                (3, 0.58),
                (4, 0.90),
                (5, 1.12),
                (6, 1.24),
                (7, 1.32),
                (8, 1.41),
                (9, 1.45),
                (10, 1.49),
            ]
            .into_iter()
            .collect(),
        )
    }
}

impl RandomIndex {
    pub fn get(&self, n: usize) -> Option<f64> {
        self.0.get(&n).copied()
    }

    /// Overrides (or adds) the index for size `n`.
    pub fn with(mut self, n: usize, value: f64) -> Self {
        self.0.insert(n, value);
        self
    }
}

/// Power-iteration settings for [`em_weights`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmConfig {
    /// Bound on `||A w - lambda w||_inf / lambda` and on the relative change
    /// of the eigenvalue estimate between steps.
    pub tol: f64,
    pub max_iter: usize,
    pub random_index: RandomIndex,
}

impl Default for EmConfig {
    fn default() -> Self {
        EmConfig {
            tol: 1e-12,
            max_iter: 10_000,
            random_index: RandomIndex::default(),
        }
    }
}

/// Output of the Eigenvector Method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmResult {
    pub weights: WeightVector,
    /// Perron eigenvalue.
    pub lambda_max: f64,
    /// Consistency ratio; `None` when the random index table has no entry
    /// for this size.
    pub cr: Option<f64>,
    pub iterations: usize,
    /// `||A w - lambda w||_inf / lambda` at the returned pair.
    pub residual: f64,
}

/// Normalized right Perron eigenvector of `a`, by power iteration from the
/// uniform vector.
pub fn em_weights(a: &Pcm, config: &EmConfig) -> Result<EmResult> {
    let n = a.n();
    let mut w = vec![1.0 / n as f64; n];
    let mut aw = vec![0.0; n];
    let mut previous_lambda = f64::NAN;
    let mut residual = f64::INFINITY;
    for iteration in 1..=config.max_iter {
        for (i, out) in aw.iter_mut().enumerate() {
            *out = a.row(i).iter().zip(&w).map(|(x, y)| x * y).sum();
        }
        // w sums to one, so the component sum of A w estimates lambda.
        let lambda: f64 = aw.iter().sum();
        residual = aw
            .iter()
            .zip(&w)
            .map(|(x, y)| libm::fabs(x - lambda * y))
            .fold(0.0, f64::max)
            / lambda;
        if residual <= config.tol && libm::fabs(lambda - previous_lambda) <= config.tol * lambda {
            let cr = config
                .random_index
                .get(n)
                .map(|ri| cr_from_lambda(lambda, n, ri));
            return Ok(EmResult {
                weights: WeightVector::normalize(w)?,
                lambda_max: lambda,
                cr,
                iterations: iteration,
                residual,
            });
        }
        previous_lambda = lambda;
        for (wi, x) in w.iter_mut().zip(&aw) {
            *wi = x / lambda;
        }
    }
    Err(Error::NoConvergence {
        iterations: config.max_iter,
        residual,
    })
}

fn cr_from_lambda(lambda: f64, n: usize, ri: f64) -> f64 {
    libm::fmax((lambda - n as f64) / ((n as f64 - 1.0) * ri), 0.0)
}

/// `(lambda_max - n) / ((n - 1) RI(n))`.
///
/// The conventional acceptability threshold is 0.10; it is not enforced here.
pub fn consistency_ratio(a: &Pcm, config: &EmConfig) -> Result<f64> {
    let n = a.n();
    let ri = config
        .random_index
        .get(n)
        .ok_or(Error::RandomIndexUnavailable(n))?;
    let em = em_weights(a, config)?;
    Ok(cr_from_lambda(em.lambda_max, n, ri))
}

/// Normalized row geometric means, the closed-form optimum of the
/// logarithmic least squares fit.
pub fn llsm_weights(a: &Pcm) -> WeightVector {
    let n = a.n() as f64;
    let raw: Vec<f64> = (0..a.n())
        .map(|i| libm::exp(a.row(i).iter().map(|v| libm::log(*v)).sum::<f64>() / n))
        .collect();
    WeightVector::normalize(raw).expect("row geometric means of a positive matrix")
}

/// A weighting method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "EM")]
    Em,
    #[serde(rename = "LLSM")]
    Llsm,
}

impl Method {
    pub fn weights(self, a: &Pcm, config: &EmConfig) -> Result<WeightVector> {
        match self {
            Method::Em => em_weights(a, config).map(|r| r.weights),
            Method::Llsm => Ok(llsm_weights(a)),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Em => "EM",
            Method::Llsm => "LLSM",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "em" | "EM" => Ok(Method::Em),
            "llsm" | "LLSM" => Ok(Method::Llsm),
            other => Err(Error::InvalidConfig(alloc::format!(
                "unknown method `{other}` (expected em or llsm)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn consistent(v: &[f64]) -> Pcm {
        let rows: Vec<Vec<f64>> = v
            .iter()
            .map(|a| v.iter().map(|b| a / b).collect())
            .collect();
        Pcm::new(&rows).unwrap()
    }

    #[test]
    fn all_ones_gives_uniform_weights() {
        for n in 2..=8 {
            let r = em_weights(&Pcm::all_ones(n).unwrap(), &EmConfig::default()).unwrap();
            for &w in r.weights.as_slice() {
                assert_abs_diff_eq!(w, 1.0 / n as f64, epsilon = 1e-15);
            }
            assert_abs_diff_eq!(r.lambda_max, n as f64, epsilon = 1e-12);
            let llsm = llsm_weights(&Pcm::all_ones(n).unwrap());
            assert_abs_diff_eq!(llsm[0], 1.0 / n as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn consistent_matrix_has_analytic_eigenvector() {
        let a = consistent(&[1.0, 2.0, 4.0]);
        let r = em_weights(&a, &EmConfig::default()).unwrap();
        let expected = [1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0];
        for (w, e) in r.weights.as_slice().iter().zip(expected) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(r.lambda_max, 3.0, epsilon = 1e-12);
        assert!(r.cr.unwrap() < 1e-9);
        let l = llsm_weights(&a);
        for (w, e) in l.as_slice().iter().zip(expected) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn consistency_ratio_needs_table_entry() {
        let a = Pcm::new(&[[1.0, 3.0], [1.0 / 3.0, 1.0]]).unwrap();
        assert_eq!(
            consistency_ratio(&a, &EmConfig::default()),
            Err(Error::RandomIndexUnavailable(2))
        );
        assert_eq!(em_weights(&a, &EmConfig::default()).unwrap().cr, None);
        let cfg = EmConfig {
            random_index: RandomIndex::default().with(2, 1.0),
            ..EmConfig::default()
        };
        assert_eq!(consistency_ratio(&a, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn reports_non_convergence() {
        let a = Pcm::new(&[
            [1.0, 9.0, 0.2],
            [1.0 / 9.0, 1.0, 7.0],
            [5.0, 1.0 / 7.0, 1.0],
        ])
        .unwrap();
        let cfg = EmConfig {
            max_iter: 2,
            ..EmConfig::default()
        };
        assert!(matches!(
            em_weights(&a, &cfg),
            Err(Error::NoConvergence { iterations: 2, .. })
        ));
    }

    #[test]
    fn residual_bound_holds_at_convergence() {
        let a = Pcm::new(&[
            [1.0, 9.0, 0.2],
            [1.0 / 9.0, 1.0, 7.0],
            [5.0, 1.0 / 7.0, 1.0],
        ])
        .unwrap();
        let cfg = EmConfig::default();
        let r = em_weights(&a, &cfg).unwrap();
        let w = r.weights.as_slice();
        let worst = (0..3)
            .map(|i| {
                let aw: f64 = a.row(i).iter().zip(w).map(|(x, y)| x * y).sum();
                libm::fabs(aw - r.lambda_max * w[i])
            })
            .fold(0.0, f64::max);
        assert!(worst <= cfg.tol * r.lambda_max * 1.01);
        assert!(r.lambda_max > 3.0);
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
        assert_eq!(
            WeightVector::normalize(vec![1.0, 3.0]).unwrap().as_slice(),
            &[0.25, 0.75]
        );
    }

    #[test]
    fn method_parsing() {
        assert_eq!("em".parse::<Method>().unwrap(), Method::Em);
        assert_eq!("LLSM".parse::<Method>().unwrap(), Method::Llsm);
        assert!("svd".parse::<Method>().is_err());
    }
}

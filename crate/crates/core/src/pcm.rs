//! The pairwise comparison matrix and its transformations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative deviation from `a_ij * a_ji = 1` tolerated on input.
///
/// Anything larger is treated as malformed data rather than rounding noise.
pub const RECIPROCITY_TOLERANCE: f64 = 1e-9;

/// A positive reciprocal `n x n` matrix of ratio judgments.
///
/// Every entry is strictly positive and finite, the diagonal is exactly 1 and
/// `a_ji = 1 / a_ij` up to floating-point rounding of the transformation that
/// produced the matrix. [`Pcm::new`] stores the upper triangle as given and
/// recomputes the lower triangle as `1.0 / a_ij`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "PcmRepr", try_from = "PcmRepr")]
pub struct Pcm {
    n: usize,
    entries: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PcmRepr {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl From<Pcm> for PcmRepr {
    fn from(a: Pcm) -> Self {
        PcmRepr {
            n: a.n,
            rows: a.rows(),
        }
    }
}

impl TryFrom<PcmRepr> for Pcm {
    type Error = Error;

    fn try_from(repr: PcmRepr) -> Result<Self> {
        if repr.rows.len() != repr.n {
            return Err(Error::DimensionMismatch {
                expected: repr.n,
                found: repr.rows.len(),
            });
        }
        Pcm::new(&repr.rows)
    }
}

impl Pcm {
    /// Validates `rows` and builds a canonical matrix.
    ///
    /// The diagonal is forced to 1 and the lower triangle is replaced by the
    /// reciprocals of the upper triangle. The given lower triangle must agree
    /// with those reciprocals to [`RECIPROCITY_TOLERANCE`].
    pub fn new<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    n,
                });
            }
            for (col, &value) in r.iter().enumerate() {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::NonPositive { row, col, value });
                }
            }
            entries.extend_from_slice(r);
        }
        for i in 0..n {
            entries[i * n + i] = 1.0;
            for j in i + 1..n {
                let upper = entries[i * n + j];
                let lower = entries[j * n + i];
                if libm::fabs(upper * lower - 1.0) > RECIPROCITY_TOLERANCE {
                    return Err(Error::NotReciprocal {
                        row: i,
                        col: j,
                        upper,
                        lower,
                    });
                }
                entries[j * n + i] = 1.0 / upper;
            }
        }
        Ok(Pcm { n, entries })
    }

    /// Builds a matrix from its strict upper triangle given row by row
    /// (`a_12, a_13, ..., a_1n, a_23, ...`).
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        let expected = n * (n - 1) / 2;
        if upper.len() != expected {
            return Err(Error::InvalidConfig(format!(
                "expected {expected} upper-triangle entries for n = {n}, got {}",
                upper.len()
            )));
        }
        let mut rows = vec![vec![1.0; n]; n];
        let mut it = upper.iter();
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in i + 1..n {
                let v = *it.next().expect("length checked");
                rows[i][j] = v;
                rows[j][i] = 1.0 / v;
            }
        }
        Pcm::new(&rows)
    }

    /// Wraps entries produced by a transformation that preserves positivity
    /// and reciprocity.
    fn from_parts(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Pcm { n, entries }
    }

    /// The `n x n` matrix with every entry equal to 1.
    pub fn all_ones(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        Ok(Pcm::from_parts(n, vec![1.0; n * n]))
    }

    /// Number of alternatives.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `a_ij` (0-based).
    ///
    /// # Panics
    ///
    /// If `i` or `j` is out of range.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index out of range");
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.n })
        }
    }

    /// Row multiplication on alternative `i` by `alpha`: row `i` is scaled by
    /// `alpha` and column `i` divided by it, off the diagonal.
    pub fn row_multiply(&self, i: usize, alpha: f64) -> Result<Self> {
        self.check_index(i)?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidFactor(alpha));
        }
        let n = self.n;
        let mut entries = self.entries.clone();
        for j in 0..n {
            if j != i {
                entries[i * n + j] *= alpha;
                entries[j * n + i] /= alpha;
            }
        }
        Ok(Pcm::from_parts(n, entries))
    }

    /// The opposite matrix `[1 / a_ij]`, computed as the transpose so that
    /// taking it twice is the identity bit for bit.
    pub fn opposite(&self) -> Self {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        Pcm::from_parts(n, entries)
    }

    /// Relabels alternatives: entry `(i, j)` of the result is
    /// `a_{sigma(i) sigma(j)}`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: sigma.len(),
            });
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(sigma.apply(i), sigma.apply(j)));
            }
        }
        Ok(Pcm::from_parts(n, entries))
    }

    /// Whether `a_ik = a_ij a_jk` for every triple, up to relative
    /// tolerance `tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let direct = self.get(i, k);
                    libm::fabs(direct - self.get(i, j) * self.get(j, k)) <= tol * direct
                })
            })
        })
    }

    /// Largest relative deviation between `self` and `other`, entrywise.
    pub fn max_relative_difference(&self, other: &Pcm) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| libm::fabs(a - b) / libm::fmax(libm::fabs(*a), libm::fabs(*b)))
            .fold(0.0, f64::max)
    }
}

/// Geometric-mean aggregation of `matrices`, entry by entry.
///
/// The upper triangle is averaged and the lower triangle set to its
/// reciprocals. A single matrix is returned unchanged.
pub fn aggregate(matrices: &[Pcm]) -> Result<Pcm> {
    let first = matrices.first().ok_or(Error::EmptyList)?;
    let n = first.n;
    if let Some(bad) = matrices.iter().find(|a| a.n != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.n,
        });
    }
    if matrices.len() == 1 {
        return Ok(first.clone());
    }
    let mut entries = vec![1.0; n * n];
    let mut column = Vec::with_capacity(matrices.len());
    for i in 0..n {
        for j in i + 1..n {
            column.clear();
            column.extend(matrices.iter().map(|a| a.get(i, j)));
            let mean = geometric_mean(&column);
            entries[i * n + j] = mean;
            entries[j * n + i] = 1.0 / mean;
        }
    }
    Ok(Pcm::from_parts(n, entries))
}

/// Geometric mean of positive values. Exact for perfect squares when two
/// values are given.
pub(crate) fn geometric_mean(values: &[f64]) -> f64 {
    let k = values.len();
    match k {
        0 => f64::NAN,
        1 => values[0],
        2 => libm::sqrt(values[0] * values[1]),
        _ => {
            let product: f64 = values.iter().product();
            if product.is_normal() {
                libm::pow(product, 1.0 / k as f64)
            } else {
                let mean_log = values.iter().map(|v| libm::log(*v)).sum::<f64>() / k as f64;
                libm::exp(mean_log)
            }
        }
    }
}

impl fmt::Debug for Pcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pcm")
            .field("n", &self.n)
            .field("rows", &self.rows())
            .finish()
    }
}

impl fmt::Display for Pcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>8.4}", self.get(i, j))?;
            }
            if i + 1 < self.n {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// A bijection on the alternatives `{0, ..., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    /// `mapping[k]` is the image of `k`.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::InvalidPermutation(format!("{mapping:?}")));
            }
            seen[m] = true;
        }
        Ok(Permutation { mapping })
    }

    /// Parses a 1-based image list such as `[2, 1, 3]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let mapping = images
            .iter()
            .map(|&m| {
                m.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation(format!("{images:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(mapping).map_err(|_| Error::InvalidPermutation(format!("{images:?}")))
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n).collect(),
        }
    }

    /// The swap of `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::IndexOutOfRange { index: a.max(b), n });
        }
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.swap(a, b);
        Ok(Permutation { mapping })
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.mapping[k]
    }

    pub fn inverse(&self) -> Self {
        let mut mapping = vec![0; self.mapping.len()];
        for (k, &m) in self.mapping.iter().enumerate() {
            mapping[m] = k;
        }
        Permutation { mapping }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    /// 1-based image list.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.mapping.iter().map(|m| m + 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Pcm {
        Pcm::new(&[
            [1.0, 1.0, 1.0, 9.0],
            [1.0, 1.0, 2.0, 5.0],
            [1.0, 0.5, 1.0, 9.0],
            [1.0 / 9.0, 0.2, 1.0 / 9.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn accepts_minimal_pair() {
        let a = Pcm::new(&[[1.0, 2.0], [0.5, 1.0]]).unwrap();
        assert_eq!(a.n(), 2);
        assert_eq!(a.get(0, 1), 2.0);
        assert_eq!(a.get(1, 0), 0.5);
    }

    #[test]
    fn rejects_non_reciprocal_pair() {
        let err = Pcm::new(&[[1.0, 2.0], [0.6, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotReciprocal { row: 0, col: 1, .. }));
    }

    #[test]
    fn rejects_non_positive_and_non_square() {
        assert!(matches!(
            Pcm::new(&[[1.0, 0.0], [1.0, 1.0]]),
            Err(Error::NonPositive { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            Pcm::new(&[[1.0, -2.0], [-0.5, 1.0]]),
            Err(Error::NonPositive { .. })
        ));
        let ragged: [&[f64]; 2] = [&[1.0, 2.0], &[0.5]];
        assert!(matches!(
            Pcm::new(&ragged),
            Err(Error::NotSquare {
                row: 1,
                len: 1,
                n: 2
            })
        ));
        let single: [[f64; 1]; 1] = [[1.0]];
        assert_eq!(Pcm::new(&single), Err(Error::TooSmall(1)));
    }

    #[test]
    fn canonicalizes_lower_triangle() {
        let a = Pcm::new(&[
            [1.0, 3.0, 7.0],
            [0.333_333_333_333_3, 1.0, 0.2],
            [1.0 / 7.0, 5.000_000_000_1, 1.0],
        ])
        .unwrap();
        for i in 0..3 {
            assert_eq!(a.get(i, i), 1.0);
            for j in i + 1..3 {
                assert_eq!(a.get(j, i), 1.0 / a.get(i, j));
            }
        }
    }

    #[test]
    fn all_ones_shapes() {
        let ones = Pcm::all_ones(3).unwrap();
        assert_eq!(ones.rows(), vec![vec![1.0; 3]; 3]);
        assert_eq!(Pcm::all_ones(2).unwrap().rows(), vec![vec![1.0; 2]; 2]);
        assert_eq!(Pcm::all_ones(1), Err(Error::TooSmall(1)));
    }

    #[test]
    fn row_multiply_forced_by_definition() {
        let a = Pcm::all_ones(3).unwrap().row_multiply(0, 2.0).unwrap();
        assert_eq!(
            a.rows(),
            vec![
                vec![1.0, 2.0, 2.0],
                vec![0.5, 1.0, 1.0],
                vec![0.5, 1.0, 1.0]
            ]
        );
    }

    #[test]
    fn row_multiply_by_one_is_bitwise_identity() {
        let a = b();
        let same = a.row_multiply(2, 1.0).unwrap();
        assert_eq!(
            a.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            same.as_slice()
                .iter()
                .map(|v| v.to_bits())
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn row_multiply_rejects_bad_arguments() {
        let a = b();
        assert_eq!(
            a.row_multiply(4, 2.0),
            Err(Error::IndexOutOfRange { index: 4, n: 4 })
        );
        assert_eq!(a.row_multiply(0, 0.0), Err(Error::InvalidFactor(0.0)));
        assert!(a.row_multiply(0, -1.0).is_err());
        assert!(a.row_multiply(0, f64::INFINITY).is_err());
    }

    #[test]
    fn opposite_examples() {
        let ones = Pcm::all_ones(4).unwrap();
        assert_eq!(ones.opposite(), ones);
        assert_eq!(b().opposite().get(3, 0), 9.0);
        let a = Pcm::new(&[[1.0, 2.0], [0.5, 1.0]]).unwrap();
        assert_eq!(a.opposite().rows(), vec![vec![1.0, 0.5], vec![2.0, 1.0]]);
        assert_eq!(b().opposite().opposite(), b());
    }

    #[test]
    fn permute_swap_forced_by_definition() {
        let a = Pcm::new(&[[1.0, 3.0, 5.0], [1.0 / 3.0, 1.0, 2.0], [0.2, 0.5, 1.0]]).unwrap();
        let swapped = a
            .permute(&Permutation::transposition(3, 0, 1).unwrap())
            .unwrap();
        assert_eq!(
            swapped.rows(),
            vec![
                vec![1.0, 1.0 / 3.0, 2.0],
                vec![3.0, 1.0, 5.0],
                vec![0.5, 0.2, 1.0]
            ]
        );
        assert_eq!(a.permute(&Permutation::identity(3)).unwrap(), a);
        assert!(matches!(
            a.permute(&Permutation::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        let p = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        assert_eq!(p.as_slice(), &[2, 0, 1]);
        assert_eq!(p.inverse().as_slice(), &[1, 2, 0]);
        assert_eq!(p.to_one_based(), vec![3, 1, 2]);
    }

    #[test]
    fn aggregate_with_opposite_is_all_ones() {
        let a = b();
        let agg = aggregate(&[a.clone(), a.opposite()]).unwrap();
        assert!(agg.max_relative_difference(&Pcm::all_ones(4).unwrap()) < 1e-15);
    }

    #[test]
    fn aggregate_single_and_errors() {
        let a = b();
        assert_eq!(aggregate(core::slice::from_ref(&a)).unwrap(), a);
        assert_eq!(aggregate(&[]), Err(Error::EmptyList));
        assert_eq!(
            aggregate(&[a, Pcm::all_ones(3).unwrap()]),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn consistency_checks() {
        assert!(Pcm::all_ones(5).unwrap().is_consistent(0.0));
        // a_14 = 9 but a_12 * a_24 = 5
        assert!(!b().is_consistent(1e-9));
        let v = [1.0, 2.0, 4.0];
        let c = Pcm::new(&[
            [v[0] / v[0], v[0] / v[1], v[0] / v[2]],
            [v[1] / v[0], v[1] / v[1], v[1] / v[2]],
            [v[2] / v[0], v[2] / v[1], v[2] / v[2]],
        ])
        .unwrap();
        assert!(c.is_consistent(1e-12));
    }

    #[test]
    fn from_upper_matches_rows() {
        let from_upper = Pcm::from_upper(4, &[1.0, 1.0, 9.0, 2.0, 5.0, 9.0]).unwrap();
        assert_eq!(from_upper, b());
        assert!(Pcm::from_upper(4, &[1.0]).is_err());
    }

    #[test]
    fn serde_shape() {
        let a = Pcm::new(&[[1.0, 2.0], [0.5, 1.0]]).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"n":2,"rows":[[1.0,2.0],[0.5,1.0]]}"#);
        let back: Pcm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Pcm>(r#"{"n":2,"rows":[[1.0,2.0],[0.6,1.0]]}"#).is_err());
    }
}

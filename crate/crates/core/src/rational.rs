//! Pairwise comparison matrices over exact rationals.
//!
//! Hand-entered judgments such as `1/9` or `9/5` are rationals, and row
//! multiplication by a rational factor keeps them rational, so constructions
//! on published matrices can be checked entry-exact before any floating
//! point is involved.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::pcm::Pcm;

pub type Rational = Ratio<i64>;

/// Nearest `f64` to `r` (exact division for numerators and denominators
/// below 2^53).
pub fn rational_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                return None;
            }
            Ratio::new(p, q)
        }
        None => Ratio::from_integer(s.parse().ok()?),
    };
    Some(r)
}

/// A pairwise comparison matrix whose entries are exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPcm {
    n: usize,
    entries: Vec<Rational>,
}

impl RationalPcm {
    /// Requires a unit diagonal and exact reciprocity.
    pub fn new<R: AsRef<[Rational]>>(rows: &[R]) -> Result<Self> {
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
            for (col, v) in r.iter().enumerate() {
                if *v.numer() <= 0 {
                    return Err(Error::NonPositive {
                        row,
                        col,
                        value: rational_to_f64(*v),
                    });
                }
            }
            entries.extend_from_slice(r);
        }
        let one = Rational::from_integer(1);
        for i in 0..n {
            for j in i..n {
                let upper = entries[i * n + j];
                let lower = entries[j * n + i];
                if upper * lower != one {
                    return Err(Error::NotReciprocal {
                        row: i,
                        col: j,
                        upper: rational_to_f64(upper),
                        lower: rational_to_f64(lower),
                    });
                }
            }
        }
        Ok(RationalPcm { n, entries })
    }

    /// Builds from the strict upper triangle, row by row.
    pub fn from_upper(n: usize, upper: &[Rational]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooSmall(n));
        }
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::InvalidConfig(alloc::format!(
                "expected {} upper-triangle entries for n = {n}, got {}",
                n * (n - 1) / 2,
                upper.len()
            )));
        }
        let one = Rational::from_integer(1);
        let mut rows = vec![vec![one; n]; n];
        let mut it = upper.iter();
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in i + 1..n {
                let v = *it.next().expect("length checked");
                if *v.numer() <= 0 {
                    return Err(Error::NonPositive {
                        row: i,
                        col: j,
                        value: rational_to_f64(v),
                    });
                }
                rows[i][j] = v;
                rows[j][i] = v.recip();
            }
        }
        RationalPcm::new(&rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        assert!(i < self.n && j < self.n, "index out of range");
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries
            .chunks(self.n)
            .map(<[Rational]>::to_vec)
            .collect()
    }

    /// Exact row multiplication on `i` by `alpha`.
    pub fn row_multiply(&self, i: usize, alpha: Rational) -> Result<Self> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        if *alpha.numer() <= 0 {
            return Err(Error::InvalidFactor(rational_to_f64(alpha)));
        }
        let n = self.n;
        let mut entries = self.entries.clone();
        for j in 0..n {
            if j != i {
                entries[i * n + j] *= alpha;
                entries[j * n + i] /= alpha;
            }
        }
        Ok(RationalPcm { n, entries })
    }

    pub fn opposite(&self) -> Self {
        let n = self.n;
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        RationalPcm { n, entries }
    }

    /// Nearest floating-point matrix.
    pub fn to_pcm(&self) -> Pcm {
        let rows: Vec<Vec<f64>> = self
            .entries
            .chunks(self.n)
            .map(|r| r.iter().map(|v| rational_to_f64(*v)).collect())
            .collect();
        Pcm::new(&rows).expect("exact reciprocal matrix converts to a valid Pcm")
    }
}

impl fmt::Debug for RationalPcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.chunks(self.n)).finish()
    }
}

impl fmt::Display for RationalPcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>5}", alloc::format!("{v}"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Ratio::new(p, q)
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/9"), Some(r(1, 9)));
        assert_eq!(parse_rational(" 9/5 "), Some(r(9, 5)));
        assert_eq!(parse_rational("6/4"), Some(r(3, 2)));
        assert_eq!(parse_rational("7"), Some(r(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("0.5"), None);
    }

    #[test]
    fn exact_row_multiplication_commutes() {
        let a = RationalPcm::from_upper(3, &[r(3, 1), r(1, 5), r(7, 2)]).unwrap();
        let ij = a
            .row_multiply(0, r(9, 1))
            .unwrap()
            .row_multiply(2, r(2, 7))
            .unwrap();
        let ji = a
            .row_multiply(2, r(2, 7))
            .unwrap()
            .row_multiply(0, r(9, 1))
            .unwrap();
        assert_eq!(ij, ji);
        let back = ij
            .row_multiply(0, r(1, 9))
            .unwrap()
            .row_multiply(2, r(7, 2))
            .unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rejects_inexact_reciprocity() {
        let rows = [[r(1, 1), r(2, 1)], [r(3, 5), r(1, 1)]];
        assert!(matches!(
            RationalPcm::new(&rows),
            Err(Error::NotReciprocal { .. })
        ));
        let diag = [[r(2, 1), r(2, 1)], [r(1, 2), r(1, 1)]];
        assert!(RationalPcm::new(&diag).is_err());
    }

    #[test]
    fn conversion_is_nearest_float() {
        let a = RationalPcm::from_upper(2, &[r(9, 5)]).unwrap();
        let p = a.to_pcm();
        assert_eq!(p.get(0, 1), 1.8);
        assert_eq!(a.opposite().opposite(), a);
    }
}

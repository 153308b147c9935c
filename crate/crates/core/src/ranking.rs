//! Weak orders over alternatives.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Serialize, Serializer};

use crate::pcm::Permutation;
use crate::weighting::WeightVector;

/// Default relative tolerance under which two weights count as tied.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

/// A ranking with ties: ordered equivalence classes, best class first.
///
/// Classes are nonempty, pairwise disjoint, cover `0..n` and list their
/// members in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ranking {
    classes: Vec<Vec<usize>>,
    // position[k] = index of the class containing k
    position: Vec<usize>,
}

impl Ranking {
    /// Builds a ranking from explicit classes; `None` unless they partition
    /// `0..n` for some `n`.
    pub fn from_classes(mut classes: Vec<Vec<usize>>) -> Option<Self> {
        let n: usize = classes.iter().map(Vec::len).sum();
        let mut position = vec![usize::MAX; n];
        for (c, class) in classes.iter_mut().enumerate() {
            if class.is_empty() {
                return None;
            }
            class.sort_unstable();
            for &k in class.iter() {
                if k >= n || position[k] != usize::MAX {
                    return None;
                }
                position[k] = c;
            }
        }
        Some(Ranking { classes, position })
    }

    /// Groups alternatives whose weights differ by at most `tie_tol`
    /// relative, closing the closeness relation transitively, and orders the
    /// groups by decreasing weight.
    pub fn from_weights(w: &WeightVector, tie_tol: f64) -> Self {
        let w = w.as_slice();
        let mut order: Vec<usize> = (0..w.len()).collect();
        order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut previous = f64::NAN;
        for k in order {
            // On sorted weights the transitive closure of closeness is the
            // chain of consecutive close pairs.
            match classes.last_mut() {
                Some(class) if previous / w[k] <= 1.0 + tie_tol => class.push(k),
                _ => classes.push(vec![k]),
            }
            previous = w[k];
        }
        Ranking::from_classes(classes).expect("classes partition the alternatives")
    }

    pub fn n(&self) -> usize {
        self.position.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Index of the class containing `k` (0 = best).
    pub fn class_of(&self, k: usize) -> usize {
        self.position[k]
    }

    /// `Greater` if `i` is ranked strictly above `j`, `Equal` if tied.
    pub fn compare(&self, i: usize, j: usize) -> Ordering {
        self.position[j].cmp(&self.position[i])
    }

    /// `i` is at least as good as `j`.
    pub fn weakly_prefers(&self, i: usize, j: usize) -> bool {
        self.compare(i, j) != Ordering::Less
    }

    pub fn strictly_prefers(&self, i: usize, j: usize) -> bool {
        self.compare(i, j) == Ordering::Greater
    }

    /// `i` is in the best class.
    pub fn is_top(&self, i: usize) -> bool {
        self.position[i] == 0
    }

    /// `i` is alone in the best class.
    pub fn is_strict_top(&self, i: usize) -> bool {
        self.is_top(i) && self.classes[0].len() == 1
    }

    /// The same classes in the opposite order.
    pub fn reversed(&self) -> Self {
        let mut classes = self.classes.clone();
        classes.reverse();
        Ranking::from_classes(classes).expect("reversal keeps the partition")
    }

    /// Renames every alternative `k` to `sigma(k)`.
    pub fn relabel(&self, sigma: &Permutation) -> Self {
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&k| sigma.apply(k)).collect())
            .collect();
        Ranking::from_classes(classes).expect("a permutation keeps the partition")
    }

    /// Classes with 1-based members.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.classes
            .iter()
            .map(|c| c.iter().map(|k| k + 1).collect())
            .collect()
    }
}

impl Serialize for Ranking {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}

/// Writes `2 > 1 ~ 3 > 4` with 1-based labels.
impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, class) in self.classes.iter().enumerate() {
            if c > 0 {
                f.write_str(" > ")?;
            }
            for (m, k) in class.iter().enumerate() {
                if m > 0 {
                    f.write_str(" ~ ")?;
                }
                write!(f, "{}", k + 1)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn w(v: &[f64]) -> WeightVector {
        WeightVector::normalize(v.to_vec()).unwrap()
    }

    #[test]
    fn strict_order() {
        let r = Ranking::from_weights(&w(&[0.3242, 0.3502, 0.2821, 0.0435]), 1e-9);
        assert_eq!(r.classes(), &[vec![1], vec![0], vec![2], vec![3]]);
        assert_eq!(r.to_string(), "2 > 1 > 3 > 4");
        assert!(r.strictly_prefers(1, 0));
        assert!(r.is_strict_top(1));
    }

    #[test]
    fn near_ties_grouped() {
        let r = Ranking::from_weights(&w(&[3.0, 3.0 * (1.0 + 1e-13), 1.0, 1.0]), 1e-9);
        assert_eq!(r.classes(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(r.to_string(), "1 ~ 2 > 3 ~ 4");
        assert!(r.is_top(0) && !r.is_strict_top(0));
        assert_eq!(r.compare(0, 1), Ordering::Equal);
    }

    #[test]
    fn uniform_is_single_class() {
        let r = Ranking::from_weights(&w(&[1.0; 5]), 1e-9);
        assert_eq!(r.classes().len(), 1);
        assert_eq!(r.classes()[0], vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn closeness_is_closed_transitively() {
        // Neighbours are within 0.6e-9 of each other, the ends are not.
        let t = 0.6e-9;
        let r = Ranking::from_weights(&w(&[1.0 + 2.0 * t, 1.0 + t, 1.0, 0.5]), 1e-9);
        assert_eq!(r.classes(), &[vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn reverse_and_relabel() {
        let r = Ranking::from_classes(vec![vec![2], vec![0, 1]]).unwrap();
        assert_eq!(r.reversed().classes(), &[vec![0, 1], vec![2]]);
        let sigma = Permutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(r.relabel(&sigma).classes(), &[vec![0], vec![1, 2]]);
        assert!(Ranking::from_classes(vec![vec![0], vec![0, 1]]).is_none());
        assert!(Ranking::from_classes(vec![vec![0], vec![]]).is_none());
        assert!(Ranking::from_classes(vec![vec![0, 3]]).is_none());
    }

    #[test]
    fn serializes_one_based() {
        let r = Ranking::from_classes(vec![vec![1], vec![0, 2]]).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "[[2],[1,3]]");
    }
}

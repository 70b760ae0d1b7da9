//! Partitions and skew shapes.
//!
//! A [`Partition`] is a weakly decreasing sequence of nonnegative integers
//! with an explicit length: `(3, 1, 0)` and `(3, 1)` are different values,
//! because the size of a hive or the number of boundary rays of a honeycomb
//! is read off the length.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Builds a partition, rejecting sequences that increase anywhere.
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotPartition(parts));
        }
        Ok(Partition { parts })
    }

    /// Sorts an arbitrary multiset of parts into a partition.
    pub fn from_multiset(mut parts: Vec<u64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The all-zero partition of length `len`.
    pub fn zeros(len: usize) -> Self {
        Partition { parts: vec![0; len] }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// 1-based part access; parts past the end read as zero.
    pub fn part(&self, i: usize) -> u64 {
        debug_assert!(i >= 1);
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Partial sum `a_1 + .. + a_p`.
    pub fn prefix_sum(&self, p: usize) -> u64 {
        self.parts.iter().take(p).sum()
    }

    /// Zero-pads (never truncates) to `len`.
    pub fn padded(&self, len: usize) -> Self {
        let mut parts = self.parts.clone();
        if parts.len() < len {
            parts.resize(len, 0);
        }
        Partition { parts }
    }

    /// Number of nonzero parts.
    pub fn nonzero_len(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u64>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, p) in self.parts.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// The multiset union of the parts of `a` and `b`, sorted; its length is
/// `a.len() + b.len()`.
pub fn direct_sum(a: &Partition, b: &Partition) -> Partition {
    let mut parts = Vec::with_capacity(a.len() + b.len());
    parts.extend_from_slice(a.parts());
    parts.extend_from_slice(b.parts());
    Partition::from_multiset(parts)
}

/// `inner ⊆ outer`, comparing part by part with the shorter one zero-padded.
pub fn contains(outer: &Partition, inner: &Partition) -> bool {
    let len = outer.len().max(inner.len());
    (1..=len).all(|t| inner.part(t) <= outer.part(t))
}

/// The skew diagram `outer / inner`; both are padded to a common length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: &Partition, inner: &Partition) -> Result<Self> {
        if !contains(outer, inner) {
            return Err(Error::Shape(format!("{inner} is not contained in {outer}")));
        }
        let len = outer.len().max(inner.len());
        Ok(SkewShape {
            outer: outer.padded(len),
            inner: inner.padded(len),
        })
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    /// Number of boxes of the skew diagram.
    pub fn size(&self) -> u64 {
        self.outer.weight() - self.inner.weight()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[u64]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(direct_sum(&p(&[10, 6, 1]), &p(&[9, 4])), p(&[10, 9, 6, 4, 1]));
        assert_eq!(direct_sum(&p(&[13, 7, 1]), &p(&[12, 6])), p(&[13, 12, 7, 6, 1]));
        let a = p(&[4, 2, 0]);
        assert_eq!(direct_sum(&a, &Partition::empty()), a);
    }

    #[test]
    fn containment() {
        assert!(contains(&p(&[11, 10, 7, 5]), &p(&[7, 4, 2, 1])));
        assert!(contains(&p(&[3, 1]), &p(&[3, 1])));
        assert!(!contains(&p(&[3, 3]), &p(&[4, 0])));
        assert!(SkewShape::new(&p(&[3, 3]), &p(&[4])).is_err());
        assert_eq!(SkewShape::new(&p(&[11, 10, 7, 5]), &p(&[7, 4, 2, 1])).unwrap().size(), 19);
    }

    #[test]
    fn weights() {
        assert_eq!(p(&[10, 9, 5, 3, 1]).weight(), 28);
        assert_eq!(Partition::empty().weight(), 0);
        assert_eq!(p(&[18, 16, 12, 11, 8]).weight(), 65);
    }

    #[test]
    fn length_is_significant() {
        assert_ne!(p(&[3, 1, 0]), p(&[3, 1]));
        assert_eq!(p(&[3, 1]).padded(3), p(&[3, 1, 0]));
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn json_is_a_plain_array() {
        let s = serde_json::to_string(&p(&[5, 2, 0])).unwrap();
        assert_eq!(s, "[5,2,0]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    proptest! {
        #[test]
        fn direct_sum_laws(a in prop::collection::vec(0u64..20, 0..6),
                           b in prop::collection::vec(0u64..20, 0..6),
                           c in prop::collection::vec(0u64..20, 0..6)) {
            let (a, b, c) = (Partition::from_multiset(a), Partition::from_multiset(b), Partition::from_multiset(c));
            prop_assert_eq!(direct_sum(&a, &b), direct_sum(&b, &a));
            prop_assert_eq!(direct_sum(&direct_sum(&a, &b), &c), direct_sum(&a, &direct_sum(&b, &c)));
            prop_assert_eq!(direct_sum(&a, &b).weight(), a.weight() + b.weight());
            prop_assert_eq!(direct_sum(&a, &b).len(), a.len() + b.len());
        }

        #[test]
        fn sorting_any_permutation_gives_the_same_partition(mut v in prop::collection::vec(0u64..20, 0..8)) {
            let sorted = Partition::from_multiset(v.clone());
            v.reverse();
            prop_assert_eq!(Partition::from_multiset(v), sorted);
        }
    }
}

//! Sparse probability mass functions over signed integer values with exact dyadic
//! probabilities.
//!
//! The same type carries operand-value distributions (non-negative keys) and
//! error-value distributions (signed keys; negative errors occur when a carry
//! chain fires for a sum that never produces the carry).

use std::collections::BTreeMap;

use crate::dyadic::Dyadic;

/// A normalized PMF: entries sum to exactly one, no zero-probability entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pmf {
    entries: BTreeMap<i128, Dyadic>,
}

impl Pmf {
    /// Point mass at `value`.
    pub fn point(value: i128) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(value, Dyadic::one());
        Pmf { entries }
    }

    /// Uniform distribution over `[0, 2^bits)`.
    pub fn uniform(bits: u32) -> Self {
        let mut entries = BTreeMap::new();
        let p = Dyadic::inv_pow2(bits);
        for v in 0..(1u128 << bits) {
            entries.insert(v as i128, p.clone());
        }
        Pmf { entries }
    }

    /// Builds from `(value, probability)` pairs; drops zeros, asserts the total
    /// is exactly one.
    pub fn from_entries(pairs: impl IntoIterator<Item = (i128, Dyadic)>) -> Self {
        let mut entries: BTreeMap<i128, Dyadic> = BTreeMap::new();
        for (v, p) in pairs {
            if p.is_zero() {
                continue;
            }
            entries.entry(v).and_modify(|q| *q = q.add(&p)).or_insert(p);
        }
        let pmf = Pmf { entries };
        pmf.assert_normalized();
        pmf
    }

    /// Builds from integer counts out of `2^total_exp2` equally likely outcomes.
    pub fn from_counts(counts: &BTreeMap<i128, u64>, total_exp2: u32) -> Self {
        Pmf::from_entries(
            counts
                .iter()
                .map(|(&v, &c)| (v, Dyadic::new(c, total_exp2))),
        )
    }

    fn assert_normalized(&self) {
        let total = self
            .entries
            .values()
            .fold(Dyadic::zero(), |acc, p| acc.add(p));
        assert!(total.is_one(), "PMF must sum to exactly 1, got {total}");
    }

    pub fn iter(&self) -> impl Iterator<Item = (i128, &Dyadic)> {
        self.entries.iter().map(|(&v, p)| (v, p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Probability of `value` (zero when absent).
    pub fn prob(&self, value: i128) -> Dyadic {
        self.entries
            .get(&value)
            .cloned()
            .unwrap_or_else(Dyadic::zero)
    }

    pub fn min_value(&self) -> i128 {
        *self.entries.keys().next().expect("PMF is never empty")
    }

    pub fn max_value(&self) -> i128 {
        *self.entries.keys().next_back().expect("PMF is never empty")
    }

    /// PMF of the sum of two independent variables.
    pub fn convolve(&self, other: &Pmf) -> Pmf {
        let mut entries: BTreeMap<i128, Dyadic> = BTreeMap::new();
        for (a, pa) in self.iter() {
            for (b, pb) in other.iter() {
                let p = pa.mul(pb);
                entries
                    .entry(a + b)
                    .and_modify(|q| *q = q.add(&p))
                    .or_insert(p);
            }
        }
        let pmf = Pmf { entries };
        pmf.assert_normalized();
        pmf
    }

    /// Multiplies every value by `factor` (positional weighting of a block).
    pub fn scale_values(&self, factor: i128) -> Pmf {
        Pmf {
            entries: self.iter().map(|(v, p)| (v * factor, p.clone())).collect(),
        }
    }
}

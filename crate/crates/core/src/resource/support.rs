//! Max-entropy analysis over explicit joint supports.
//!
//! `H0` of a distribution is the log2 of its support size. This is an
//! analysis tool for tiny widths only: every row of the joint support is
//! materialized.

use super::ResourceError;
use crate::bits::BitString;
use std::collections::BTreeSet;

/// Total width cap for explicit supports.
pub const SUPPORT_WIDTH_CAP: usize = 24;

/// Explicit support of a joint distribution over several bit-string parts.
/// Rows are the concatenation of the parts, in declared order.
#[derive(Clone, Debug)]
pub struct JointSupport {
    widths: Vec<usize>,
    rows: BTreeSet<BitString>,
}

impl JointSupport {
    pub fn new(widths: Vec<usize>) -> Result<Self, ResourceError> {
        let total: usize = widths.iter().sum();
        if total > SUPPORT_WIDTH_CAP {
            return Err(ResourceError::SupportTooWide {
                width: total,
                cap: SUPPORT_WIDTH_CAP,
            });
        }
        Ok(JointSupport {
            widths,
            rows: BTreeSet::new(),
        })
    }

    pub fn total_width(&self) -> usize {
        self.widths.iter().sum()
    }

    pub fn parts(&self) -> usize {
        self.widths.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn insert(&mut self, row: BitString) -> Result<(), ResourceError> {
        if row.len() != self.total_width() {
            return Err(ResourceError::LengthMismatch {
                a: row.len(),
                b: self.total_width(),
            });
        }
        self.rows.insert(row);
        Ok(())
    }

    pub fn from_rows<I: IntoIterator<Item = BitString>>(
        widths: Vec<usize>,
        rows: I,
    ) -> Result<Self, ResourceError> {
        let mut s = JointSupport::new(widths)?;
        for r in rows {
            s.insert(r)?;
        }
        Ok(s)
    }

    /// `H0` of the joint support: log2 of the number of rows.
    pub fn h0(&self) -> Result<f64, ResourceError> {
        if self.rows.is_empty() {
            return Err(ResourceError::EmptySupport);
        }
        Ok((self.rows.len() as f64).log2())
    }

    /// `H0` of the marginal obtained by projecting onto the listed parts.
    pub fn h0_marginal(&self, parts: &[usize]) -> Result<f64, ResourceError> {
        if self.rows.is_empty() {
            return Err(ResourceError::EmptySupport);
        }
        let offsets: Vec<usize> = self
            .widths
            .iter()
            .scan(0usize, |acc, w| {
                let start = *acc;
                *acc += w;
                Some(start)
            })
            .collect();
        let mut projected: BTreeSet<BitString> = BTreeSet::new();
        for row in &self.rows {
            let mut piece = BitString::zeros(0);
            for &p in parts {
                assert!(p < self.widths.len(), "part index out of range");
                piece = piece.concat(&row.slice(offsets[p], self.widths[p]));
            }
            projected.insert(piece);
        }
        Ok((projected.len() as f64).log2())
    }
}

/// `H0` of an explicit support set: log2 of its size.
pub fn max_entropy(support: &JointSupport) -> Result<f64, ResourceError> {
    support.h0()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_support_of_sixteen_is_four_bits() {
        let s = JointSupport::from_rows(
            vec![4],
            (0..16u64).map(|v| BitString::from_value(v, 4)),
        )
        .unwrap();
        assert_eq!(max_entropy(&s).unwrap(), 4.0);
    }

    #[test]
    fn singleton_support_is_zero_bits() {
        let s =
            JointSupport::from_rows(vec![4], [BitString::from_value(9, 4)]).unwrap();
        assert_eq!(max_entropy(&s).unwrap(), 0.0);
    }

    #[test]
    fn correlated_pair_marginals() {
        // Support {(i, i)} over 4-bit i: joint 4.0, each marginal 4.0.
        let s = JointSupport::from_rows(
            vec![4, 4],
            (0..16u64).map(|v| {
                let half = BitString::from_value(v, 4);
                half.concat(&half)
            }),
        )
        .unwrap();
        assert_eq!(s.h0().unwrap(), 4.0);
        assert_eq!(s.h0_marginal(&[0]).unwrap(), 4.0);
        assert_eq!(s.h0_marginal(&[1]).unwrap(), 4.0);
    }

    #[test]
    fn empty_support_is_an_error() {
        let s = JointSupport::new(vec![4]).unwrap();
        assert!(matches!(s.h0(), Err(ResourceError::EmptySupport)));
    }

    #[test]
    fn overwide_support_rejected() {
        assert!(matches!(
            JointSupport::new(vec![20, 20]),
            Err(ResourceError::SupportTooWide { .. })
        ));
    }
}

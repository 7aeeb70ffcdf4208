//! Partitions and Young diagrams with row-major box labels.

use crate::error::{Error, Result};

/// Partition of n: non-increasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Parse("empty partition".into()));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Parse("partition with zero part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts not non-increasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    /// Single row (n).
    pub fn row(n: usize) -> Self {
        Partition::new(vec![n]).expect("n >= 1")
    }

    /// Single column (1,...,1).
    pub fn column(n: usize) -> Self {
        Partition::new(vec![1; n]).expect("n >= 1")
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Transpose of the Young diagram; an involution.
    pub fn dual(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (0..cols)
            .map(|c| self.parts.iter().filter(|&&p| p > c).count())
            .collect();
        Partition { parts }
    }

    /// Boxes labelled 1..n row by row: returns, for each row, its labels.
    pub fn row_labels(&self) -> Vec<Vec<usize>> {
        let mut next = 1;
        self.parts
            .iter()
            .map(|&p| {
                let row = (next..next + p).collect();
                next += p;
                row
            })
            .collect()
    }

    /// Labels of each column of the diagram under row-major labelling.
    pub fn column_labels(&self) -> Vec<Vec<usize>> {
        let rows = self.row_labels();
        let cols = self.parts[0];
        (0..cols)
            .map(|c| rows.iter().filter_map(|row| row.get(c).copied()).collect())
            .collect()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.parts
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// All partitions of n, in lexicographically decreasing order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_examples() {
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(p.dual(), Partition::new(vec![2, 1, 1]).unwrap());
        assert_eq!(Partition::row(4).dual(), Partition::column(4));
    }

    #[test]
    fn dual_involutive_up_to_8() {
        for n in 1..=8 {
            for p in partitions_of(n) {
                assert_eq!(p.dual().dual(), p);
            }
        }
    }

    #[test]
    fn labels_row_major() {
        let p = Partition::new(vec![4, 2, 1]).unwrap();
        assert_eq!(
            p.row_labels(),
            vec![vec![1, 2, 3, 4], vec![5, 6], vec![7]]
        );
        assert_eq!(
            p.column_labels(),
            vec![vec![1, 5, 7], vec![2, 6], vec![3], vec![4]]
        );
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(5).len(), 7);
        assert_eq!(partitions_of(6).len(), 11);
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(Partition::new(vec![]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }
}

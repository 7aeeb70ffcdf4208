//! Finite chain complexes of rational vector spaces.
//!
//! Grading is cohomological: the differential raises degree by one.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Bounded complex: finitely many nonzero pieces, exact differentials,
/// d ∘ d = 0 verified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pieces: BTreeMap<i64, usize>,
    differentials: BTreeMap<i64, Matrix>,
}

impl Complex {
    /// Empty complex.
    pub fn empty() -> Self {
        Complex {
            pieces: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    /// Build and validate. Zero-dimensional pieces and zero differentials
    /// are dropped so equal complexes compare equal structurally.
    pub fn new(pieces: BTreeMap<i64, usize>, differentials: BTreeMap<i64, Matrix>) -> Result<Self> {
        let pieces: BTreeMap<i64, usize> =
            pieces.into_iter().filter(|&(_, dim)| dim > 0).collect();
        let mut diffs = BTreeMap::new();
        for (deg, m) in differentials {
            if m.is_zero() {
                continue;
            }
            let src = pieces.get(&deg).copied().unwrap_or(0);
            let tgt = pieces.get(&(deg + 1)).copied().unwrap_or(0);
            if m.cols() != src || m.rows() != tgt {
                return Err(Error::InvalidComplex(format!(
                    "differential at degree {deg} is {}x{}, expected {tgt}x{src}",
                    m.rows(),
                    m.cols()
                )));
            }
            diffs.insert(deg, m);
        }
        let complex = Complex {
            pieces,
            differentials: diffs,
        };
        complex.check_d_squared()?;
        Ok(complex)
    }

    /// Complex concentrated in one degree with zero differential.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        let mut pieces = BTreeMap::new();
        if dim > 0 {
            pieces.insert(degree, dim);
        }
        Complex {
            pieces,
            differentials: BTreeMap::new(),
        }
    }

    /// Two-term complex `m: piece(deg) -> piece(deg+1)`.
    pub fn two_term(degree: i64, m: Matrix) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        pieces.insert(degree, m.cols());
        pieces.insert(degree + 1, m.rows());
        let mut diffs = BTreeMap::new();
        diffs.insert(degree, m);
        Complex::new(pieces, diffs)
    }

    fn check_d_squared(&self) -> Result<()> {
        for (&deg, d) in &self.differentials {
            if let Some(d2) = self.differentials.get(&(deg + 1)) {
                if !d2.mul(d)?.is_zero() {
                    return Err(Error::InvalidComplex(format!(
                        "d∘d is nonzero from degree {deg}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.pieces.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().sum()
    }

    pub fn pieces(&self) -> &BTreeMap<i64, usize> {
        &self.pieces
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.pieces.keys().copied().collect()
    }

    /// The differential out of `degree` (zero matrix when absent).
    pub fn differential(&self, degree: i64) -> Matrix {
        match self.differentials.get(&degree) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.dim(degree + 1), self.dim(degree)),
        }
    }

    pub fn differentials(&self) -> &BTreeMap<i64, Matrix> {
        &self.differentials
    }

    /// Degree shift: `shift(s)` has piece at `deg` equal to the original
    /// piece at `deg + s`, keeping the same differentials.
    pub fn shift(&self, s: i64) -> Complex {
        Complex {
            pieces: self.pieces.iter().map(|(&d, &n)| (d - s, n)).collect(),
            differentials: self
                .differentials
                .iter()
                .map(|(&d, m)| (d - s, m.clone()))
                .collect(),
        }
    }

    /// Direct sum, with `self` coordinates first in every degree.
    pub fn direct_sum(&self, other: &Complex) -> Complex {
        let mut pieces = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i64> = self
            .pieces
            .keys()
            .chain(other.pieces.keys())
            .copied()
            .collect();
        for &d in &degrees {
            let n = self.dim(d) + other.dim(d);
            if n > 0 {
                pieces.insert(d, n);
            }
        }
        let mut diffs = BTreeMap::new();
        for &d in &degrees {
            let (a, b) = (self.differential(d), other.differential(d));
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let rows = self.dim(d + 1) + other.dim(d + 1);
            let cols = self.dim(d) + other.dim(d);
            let mut m = Matrix::zero(rows, cols);
            for r in 0..a.rows() {
                for c in 0..a.cols() {
                    m.set(r, c, a.at(r, c).clone());
                }
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m.set(self.dim(d + 1) + r, self.dim(d) + c, b.at(r, c).clone());
                }
            }
            diffs.insert(d, m);
        }
        Complex {
            pieces,
            differentials: diffs,
        }
    }

    /// Cohomology dimension in each degree: dim ker(d) - rank(d at deg-1).
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&deg, &dim) in &self.pieces {
            let out_rank = self.differentials.get(&deg).map_or(0, |m| m.rank());
            let in_rank = self.differentials.get(&(deg - 1)).map_or(0, |m| m.rank());
            let h = dim - out_rank - in_rank;
            if h > 0 {
                out.insert(deg, h);
            }
        }
        out
    }
}

/// Map of complexes, one matrix per degree. Chain-map validity (commuting
/// with the differentials) is checked on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMap {
    components: BTreeMap<i64, Matrix>,
}

impl ComplexMap {
    pub fn new(components: BTreeMap<i64, Matrix>) -> Self {
        ComplexMap {
            components: components
                .into_iter()
                .filter(|(_, m)| m.rows() > 0 || m.cols() > 0)
                .collect(),
        }
    }

    pub fn component(&self, degree: i64, source: &Complex, target: &Complex) -> Matrix {
        match self.components.get(&degree) {
            Some(m) => m.clone(),
            None => Matrix::zero(target.dim(degree), source.dim(degree)),
        }
    }

    pub fn components(&self) -> &BTreeMap<i64, Matrix> {
        &self.components
    }

    /// Verify f ∘ d = d ∘ f in every degree.
    pub fn verify_chain_map(&self, source: &Complex, target: &Complex) -> Result<()> {
        let degrees: std::collections::BTreeSet<i64> = source
            .pieces()
            .keys()
            .chain(target.pieces().keys())
            .copied()
            .collect();
        for &deg in &degrees {
            let f = self.component(deg, source, target);
            let f_next = self.component(deg + 1, source, target);
            let lhs = f_next.mul(&source.differential(deg))?;
            let rhs = target.differential(deg).mul(&f)?;
            if lhs != rhs {
                return Err(Error::NotChainMap(format!("fails at degree {deg}")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &ComplexMap) -> Result<ComplexMap> {
        let mut components = BTreeMap::new();
        for (&deg, g) in &self.components {
            if let Some(f) = first.components.get(&deg) {
                components.insert(deg, g.mul(f)?);
            }
        }
        Ok(ComplexMap::new(components))
    }
}

/// A contractible two-term complex `id: Q^dim -> Q^dim` at the given degree.
pub fn contractible(degree: i64, dim: usize) -> Complex {
    Complex::two_term(degree, Matrix::identity(dim)).expect("identity is a differential")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rejects_nonsquaring_differential() {
        let mut pieces = BTreeMap::new();
        pieces.insert(0, 1);
        pieces.insert(1, 1);
        pieces.insert(2, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::identity(1));
        diffs.insert(1, Matrix::identity(1));
        assert!(Complex::new(pieces, diffs).is_err());
    }

    #[test]
    fn cohomology_of_simple_complexes() {
        // zero differentials: cohomology = pieces
        let c = Complex::concentrated(0, 3);
        assert_eq!(c.cohomology_dims().get(&0), Some(&3));

        // contractible: no cohomology
        assert!(contractible(0, 2).cohomology_dims().is_empty());

        // (Q^2 -> Q) via [1, 0]: h^0 = 1, h^1 = 0
        let m = Matrix::from_rows(vec![vec![rat(1), rat(0)]]).unwrap();
        let c = Complex::two_term(0, m).unwrap();
        let h = c.cohomology_dims();
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&1), None);
    }

    #[test]
    fn direct_sum_dims() {
        let a = Complex::concentrated(0, 2);
        let b = contractible(-1, 1);
        let s = a.direct_sum(&b);
        assert_eq!(s.dim(-1), 1);
        assert_eq!(s.dim(0), 3);
        let h = s.cohomology_dims();
        assert_eq!(h.get(&0), Some(&2));
        assert_eq!(h.get(&-1), None);
    }

    #[test]
    fn shift_moves_degrees() {
        let c = contractible(0, 1).shift(2);
        assert_eq!(c.dim(-2), 1);
        assert_eq!(c.dim(-1), 1);
    }
}

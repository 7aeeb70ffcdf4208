//! Dense exact-rational matrices: rank, kernel, image, and restriction of
//! a map to chosen source and target bases.
//!
//! All echelon forms are canonical (first nonzero pivot, leading entry 1,
//! full reduction), so identical inputs always produce identical bases.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, rat_one, rat_zero, Rational};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format_rational(self.at(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![rat_zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, rat_one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Column vector from a slice.
    pub fn col_vec(v: &[Rational]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.at(r, c) + other.at(r, c)
        }))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&-rat_one()))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(r, c) + a * b;
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![rat_zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = rat_zero();
            for c in 0..self.cols {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc += a * &v[c];
                }
            }
            out[r] = acc;
        }
        Ok(out)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row mismatch".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        }))
    }

    /// Keep the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |r, i| self.at(r, cols[i]).clone())
    }

    /// Reduced row echelon form together with the pivot columns.
    ///
    /// Pivot choice is the first row with a nonzero entry, pivots are
    /// normalized to 1, and pivot columns are cleared above and below,
    /// so the result is canonical.
    pub fn reduced_row_echelon(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let mut sel = None;
            for r in row..m.rows {
                if !m.at(r, col).is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            m.swap_rows(row, sel);
            let inv = {
                let p = m.at(row, col).clone();
                rat_one() / p
            };
            for c in col..m.cols {
                let v = m.at(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c) - &f * m.at(row, c);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        self.reduced_row_echelon().1.len()
    }

    /// Canonical basis of the null space; `self * v = 0` for every column.
    pub fn kernel_basis(&self) -> Subspace {
        let (rref, pivots) = self.reduced_row_echelon();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| pivot_set[*c].is_none()).collect();
        let mut basis = Matrix::zero(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            basis.set(f, j, rat_one());
            for (i, &p) in pivots.iter().enumerate() {
                basis.set(p, j, -rref.at(i, f).clone());
            }
        }
        // normalize to the canonical reduced column echelon form
        Subspace::from_spanning(self.cols, &basis)
    }

    /// Canonical basis of the column space.
    pub fn image_basis(&self) -> Subspace {
        Subspace::from_spanning(self.rows, self)
    }

    /// Matrix of `self` relative to the given source and target bases.
    ///
    /// Fails if some source basis vector does not map into the span of the
    /// target basis; that always signals a sign or convention bug upstream.
    pub fn restrict(&self, source: &Subspace, target: &Subspace) -> Result<Matrix> {
        if self.cols != source.ambient_dim() || self.rows != target.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "restrict {}x{} to source ambient {} target ambient {}",
                self.rows,
                self.cols,
                source.ambient_dim(),
                target.ambient_dim()
            )));
        }
        let mut out = Matrix::zero(target.dim(), source.dim());
        for j in 0..source.dim() {
            let v = source.basis().column(j);
            let w = self.apply(&v)?;
            let coords = target.coordinates(&w).ok_or_else(|| {
                Error::NotContained(format!(
                    "image of source basis vector {j} is outside the target subspace"
                ))
            })?;
            for (i, x) in coords.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Ok(out)
    }
}

/// Subspace of Q^n, stored as a canonical reduced-column-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The zero subspace.
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zero(ambient, 0),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonical subspace spanned by the columns of `m`.
    pub fn from_spanning(ambient: usize, m: &Matrix) -> Self {
        assert_eq!(m.rows(), ambient, "spanning matrix has wrong ambient dim");
        // reduced column echelon = transpose of the rref of the transpose
        let (rref, pivots) = m.transpose().reduced_row_echelon();
        let basis = rref.transpose().select_columns(&(0..pivots.len()).collect::<Vec<_>>());
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in this basis, or None if `v` is outside the span.
    ///
    /// Because the basis is in reduced column echelon form, candidate
    /// coordinates are read off the pivot rows and then verified exactly.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient, "vector has wrong ambient dim");
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        // verify basis * coords == v
        for r in 0..self.ambient {
            let mut acc = rat_zero();
            for (j, c) in coords.iter().enumerate() {
                let b = self.basis.at(r, j);
                if !b.is_zero() && !c.is_zero() {
                    acc += b * c;
                }
            }
            if acc != v[r] {
                return None;
            }
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let joined = self.basis.hstack(&other.basis).expect("same ambient");
        Subspace::from_spanning(self.ambient, &joined)
    }

    /// Intersection of two subspaces of the same ambient space.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let a = self.dim();
        let joined = self
            .basis
            .hstack(&other.basis.scale(&-rat_one()))
            .expect("same ambient");
        let ker = joined.kernel_basis();
        // first block of each kernel vector gives coefficients on our basis
        let mut span = Matrix::zero(self.ambient, ker.dim());
        for j in 0..ker.dim() {
            let kv = ker.basis().column(j);
            let v = self.basis.apply(&kv[..a]).expect("dims");
            for (r, x) in v.into_iter().enumerate() {
                span.set(r, j, x);
            }
        }
        Subspace::from_spanning(self.ambient, &span)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn m(rows: Vec<Vec<i64>>) -> Matrix {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zero(3, 3).rank(), 0);
        assert_eq!(Matrix::identity(4).rank(), 4);
        // row reduction by hand: second row is twice the first
        assert_eq!(m(vec![vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(3).kernel_basis().dim(), 0);
        assert_eq!(Matrix::zero(2, 5).kernel_basis().dim(), 5);
        let k = m(vec![vec![1, 1]]).kernel_basis();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis().column(0), vec![rat(1), rat(-1)]);
    }

    #[test]
    fn image_examples() {
        assert_eq!(Matrix::identity(5).image_basis().dim(), 5);
        assert_eq!(Matrix::zero(4, 2).image_basis().dim(), 0);
        let im = m(vec![vec![1, 2], vec![2, 4]]).image_basis();
        assert_eq!(im.dim(), 1);
        assert_eq!(im.basis().column(0), vec![rat(1), rat(2)]);
    }

    #[test]
    fn rank_nullity() {
        let a = m(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(a.rank() + a.kernel_basis().dim(), a.cols());
    }

    #[test]
    fn restrict_identity_and_zero() {
        let s = Subspace::from_spanning(2, &m(vec![vec![1], vec![0]]));
        let id = Matrix::identity(2);
        let r = id.restrict(&s, &s).unwrap();
        assert_eq!(r, Matrix::identity(1));
        let z = Matrix::zero(2, 2);
        assert_eq!(z.restrict(&s, &s).unwrap(), Matrix::zero(1, 1));
    }

    #[test]
    fn restrict_not_contained() {
        // m = [[0,1],[0,0]] sends (1,0) to 0 but (0,1) to (1,0); on the
        // span of (1,0) the image is fine, but use source = span{(0,1)}
        let src = Subspace::from_spanning(2, &m(vec![vec![0], vec![1]]));
        let tgt = Subspace::from_spanning(2, &m(vec![vec![0], vec![1]]));
        let f = m(vec![vec![0, 1], vec![0, 0]]);
        assert!(f.restrict(&src, &tgt).is_err());
    }

    #[test]
    fn restrict_then_include_commutes() {
        let f = m(vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        let src = Subspace::from_spanning(3, &m(vec![vec![1, 0], vec![0, 1], vec![0, 0]]));
        let tgt = Subspace::from_spanning(3, &m(vec![vec![1, 0], vec![0, 1], vec![0, 0]]));
        let r = f.restrict(&src, &tgt).unwrap();
        let lhs = tgt.basis().mul(&r).unwrap();
        let rhs = f.mul(src.basis()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn subspace_ops() {
        let a = Subspace::from_spanning(3, &m(vec![vec![1, 0], vec![0, 1], vec![0, 0]]));
        let b = Subspace::from_spanning(3, &m(vec![vec![0, 0], vec![1, 0], vec![0, 1]]));
        assert_eq!(a.sum(&b).dim(), 3);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[rat(0), rat(1), rat(0)]));
    }

    #[test]
    fn rational_entries_stay_exact() {
        let a = Matrix::from_rows(vec![vec![ratio(1, 3), ratio(1, 6)]]).unwrap();
        let k = a.kernel_basis();
        assert_eq!(k.dim(), 1);
        let v = k.basis().column(0);
        let img = a.apply(&v).unwrap();
        assert!(img.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn deterministic_bases() {
        let a = m(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(a.kernel_basis(), a.kernel_basis());
        assert_eq!(a.image_basis(), a.image_basis());
    }
}

//! Tensor powers of complexes, the Koszul-signed symmetric group action,
//! and Schur functors of complexes.
//!
//! Basis bookkeeping is explicit: the n-fold tensor power is spanned by
//! n-tuples of (degree, index) pairs enumerated lexicographically and
//! grouped by total degree. Differentials and group actions are held in
//! column-sparse form so identity checks stay cheap on large powers; dense
//! matrices are produced only where ranks and images are actually needed.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::complex::{Complex, ComplexMap};
use crate::error::{Error, Result};
use crate::group_algebra::{
    quasi_idempotence_constant, young_symmetrizer, GroupAlgebraElement,
};
use crate::matrix::{Matrix, Subspace};
use crate::partition::Partition;
use crate::perm::Permutation;
use crate::rational::{rat, rat_one, rat_zero, Rational};

/// Basis tuple of a tensor power: one (degree, index) pair per factor.
pub type Tuple = Vec<(i64, usize)>;

/// Sparse column vector within one graded piece.
pub type SparseVec = Vec<(usize, Rational)>;

/// The Koszul sign of `sigma` acting on factors of the given degrees:
/// the product of (-1)^(d_i d_j) over pairs i < j inverted by sigma.
pub fn koszul_sign(sigma: &Permutation, degrees: &[i64]) -> i64 {
    assert_eq!(sigma.degree(), degrees.len(), "length mismatch");
    let mut sign = 1i64;
    for i in 0..degrees.len() {
        for j in (i + 1)..degrees.len() {
            if sigma.apply(j) < sigma.apply(i) && degrees[i] % 2 != 0 && degrees[j] % 2 != 0 {
                sign = -sign;
            }
        }
    }
    sign
}

/// Canonical lexicographic basis of the n-fold tensor power, grouped by
/// total degree.
#[derive(Clone, Debug)]
pub struct TensorBasis {
    n: usize,
    by_degree: BTreeMap<i64, Vec<Tuple>>,
    lookup: HashMap<Tuple, (i64, usize)>,
}

impl TensorBasis {
    fn build(base: &Complex, n: usize) -> Self {
        // alphabet in lexicographic (degree, index) order
        let mut alphabet: Vec<(i64, usize)> = Vec::new();
        for (&deg, &dim) in base.pieces() {
            for idx in 0..dim {
                alphabet.push((deg, idx));
            }
        }
        let mut by_degree: BTreeMap<i64, Vec<Tuple>> = BTreeMap::new();
        if !alphabet.is_empty() {
            let mut stack: Vec<Tuple> = vec![Vec::new()];
            for _ in 0..n {
                let mut next = Vec::with_capacity(stack.len() * alphabet.len());
                for t in stack {
                    for &a in &alphabet {
                        let mut u = t.clone();
                        u.push(a);
                        next.push(u);
                    }
                }
                stack = next;
            }
            for t in stack {
                let total: i64 = t.iter().map(|&(d, _)| d).sum();
                by_degree.entry(total).or_default().push(t);
            }
        }
        let mut lookup = HashMap::new();
        for (&deg, tuples) in &by_degree {
            for (pos, t) in tuples.iter().enumerate() {
                lookup.insert(t.clone(), (deg, pos));
            }
        }
        TensorBasis {
            n,
            by_degree,
            lookup,
        }
    }

    pub fn factors(&self) -> usize {
        self.n
    }

    pub fn tuples(&self, degree: i64) -> &[Tuple] {
        self.by_degree.get(&degree).map_or(&[], |v| v.as_slice())
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.by_degree.get(&degree).map_or(0, |v| v.len())
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.by_degree.keys().copied().collect()
    }

    /// Position of a tuple within its total-degree piece.
    pub fn position(&self, t: &Tuple) -> Option<(i64, usize)> {
        self.lookup.get(t).copied()
    }
}

/// The n-fold tensor power of a complex, with sparse differential.
#[derive(Clone, Debug)]
pub struct TensorComplex {
    base: Complex,
    n: usize,
    basis: TensorBasis,
    // diff[deg][col] = sparse column into degree deg+1
    diff: BTreeMap<i64, Vec<SparseVec>>,
}

/// The differential of the tensor power on one basis tuple:
/// sum over slots i of (product of (-1)^(deg) over earlier slots) times
/// the base differential applied in slot i.
fn tuple_differential(base: &Complex, basis: &TensorBasis, t: &Tuple) -> Vec<(Tuple, Rational)> {
    let mut out = Vec::new();
    let mut sign = 1i64;
    for (i, &(deg, idx)) in t.iter().enumerate() {
        let d = base.differential(deg);
        if d.rows() > 0 {
            for row in 0..d.rows() {
                let entry = d.at(row, idx);
                if !entry.is_zero() {
                    let mut u = t.clone();
                    u[i] = (deg + 1, row);
                    debug_assert!(basis.position(&u).is_some());
                    out.push((u, entry * rat(sign)));
                }
            }
        }
        if deg % 2 != 0 {
            sign = -sign;
        }
    }
    out
}

fn accumulate(acc: &mut BTreeMap<usize, Rational>, pos: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(pos).or_insert_with(rat_zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&pos);
    }
}

impl TensorComplex {
    /// Construct the tensor power and verify d ∘ d = 0 column by column.
    pub fn new(base: &Complex, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidComplex("tensor power needs n >= 1".into()));
        }
        let basis = TensorBasis::build(base, n);
        let mut diff: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
        for &deg in &basis.degrees() {
            let cols: Vec<SparseVec> = basis
                .tuples(deg)
                .iter()
                .map(|t| {
                    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (u, c) in tuple_differential(base, &basis, t) {
                        let (_, pos) = basis.position(&u).expect("tuple in basis");
                        accumulate(&mut acc, pos, c);
                    }
                    acc.into_iter().collect()
                })
                .collect();
            diff.insert(deg, cols);
        }
        let tc = TensorComplex {
            base: base.clone(),
            n,
            basis,
            diff,
        };
        tc.check_d_squared()?;
        Ok(tc)
    }

    fn check_d_squared(&self) -> Result<()> {
        for &deg in &self.basis.degrees() {
            for col in 0..self.basis.dim(deg) {
                let once = self.apply_diff_sparse(deg, &[(col, rat_one())]);
                let twice = self.apply_diff_sparse(deg + 1, &once);
                if !twice.is_empty() {
                    return Err(Error::InvalidComplex(format!(
                        "tensor power differential does not square to zero at degree {deg}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Complex {
        &self.base
    }

    pub fn factors(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &TensorBasis {
        &self.basis
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis.dim(degree)
    }

    /// Apply the differential to a sparse vector in the given degree.
    pub fn apply_diff_sparse(&self, degree: i64, v: &[(usize, Rational)]) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        if let Some(cols) = self.diff.get(&degree) {
            for (col, coeff) in v {
                for (row, entry) in &cols[*col] {
                    accumulate(&mut acc, *row, coeff * entry);
                }
            }
        }
        acc.into_iter().collect()
    }

    /// Apply a permutation to one basis tuple; returns target position and
    /// the Koszul sign. This is a left action: the factor in slot i moves
    /// to slot sigma(i).
    pub fn apply_perm_to_tuple(
        &self,
        sigma: &Permutation,
        degree: i64,
        col: usize,
    ) -> (usize, i64) {
        let t = &self.basis.tuples(degree)[col];
        let degrees: Vec<i64> = t.iter().map(|&(d, _)| d).collect();
        let sign = koszul_sign(sigma, &degrees);
        let inv = sigma.inverse();
        let u: Tuple = (0..self.n).map(|j| t[inv.apply(j)]).collect();
        let (udeg, pos) = self.basis.position(&u).expect("permuted tuple in basis");
        debug_assert_eq!(udeg, degree);
        (pos, sign)
    }

    /// Apply a group algebra element to a sparse vector within a degree.
    pub fn apply_algebra_sparse(
        &self,
        e: &GroupAlgebraElement,
        degree: i64,
        v: &[(usize, Rational)],
    ) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (col, coeff) in v {
            for (p, c) in e.terms() {
                let (pos, sign) = self.apply_perm_to_tuple(p, degree, *col);
                accumulate(&mut acc, pos, coeff * c * rat(sign));
            }
        }
        acc.into_iter().collect()
    }

    /// Densify into an ordinary complex. Intended for small powers.
    pub fn to_complex(&self) -> Complex {
        let mut pieces = BTreeMap::new();
        for &deg in &self.basis.degrees() {
            pieces.insert(deg, self.basis.dim(deg));
        }
        let mut diffs = BTreeMap::new();
        for (&deg, cols) in &self.diff {
            let rows = self.basis.dim(deg + 1);
            let mut m = Matrix::zero(rows, cols.len());
            for (c, col) in cols.iter().enumerate() {
                for (r, v) in col {
                    m.set(*r, c, v.clone());
                }
            }
            diffs.insert(deg, m);
        }
        Complex::new(pieces, diffs).expect("tensor differential squares to zero")
    }

    /// Dense matrix of a group algebra element acting in one degree.
    pub fn algebra_matrix(&self, e: &GroupAlgebraElement, degree: i64) -> Matrix {
        let d = self.basis.dim(degree);
        let mut m = Matrix::zero(d, d);
        for col in 0..d {
            for (row, c) in self.apply_algebra_sparse(e, degree, &[(col, rat_one())]) {
                let v = m.at(row, col) + &c;
                m.set(row, col, v);
            }
        }
        m
    }
}

/// Public form of the tensor power.
pub fn tensor_power(a: &Complex, n: usize) -> Result<TensorComplex> {
    TensorComplex::new(a, n)
}

/// The action of one permutation on the tensor power, as a dense map.
pub fn permutation_action(sigma: &Permutation, a: &Complex, n: usize) -> Result<ComplexMap> {
    let tc = TensorComplex::new(a, n)?;
    let mut e = GroupAlgebraElement::zero(n);
    e.add_term(sigma.clone(), rat_one());
    apply_group_algebra_on(&e, &tc)
}

/// A group algebra element acting on a prebuilt tensor power, densified.
pub fn apply_group_algebra_on(e: &GroupAlgebraElement, tc: &TensorComplex) -> Result<ComplexMap> {
    if e.degree() != tc.factors() {
        return Err(Error::PermutationSize(e.degree(), tc.factors()));
    }
    let mut components = BTreeMap::new();
    for &deg in &tc.basis().degrees() {
        components.insert(deg, tc.algebra_matrix(e, deg));
    }
    Ok(ComplexMap::new(components))
}

/// A group algebra element acting on the n-th tensor power of `a`.
pub fn apply_group_algebra(
    e: &GroupAlgebraElement,
    a: &Complex,
    n: usize,
) -> Result<ComplexMap> {
    apply_group_algebra_on(e, &TensorComplex::new(a, n)?)
}

/// Exact check that the Young symmetrizer of `l` commutes with the tensor
/// power differential, column by column in every degree.
pub fn symmetrizer_commutes(l: &Partition, a: &Complex, bound: usize) -> Result<bool> {
    let e = young_symmetrizer(l, bound)?;
    let tc = TensorComplex::new(a, l.n())?;
    for &deg in &tc.basis().degrees() {
        for col in 0..tc.dim(deg) {
            let unit = [(col, rat_one())];
            let d_then_e = tc.apply_algebra_sparse(&e, deg + 1, &tc.apply_diff_sparse(deg, &unit));
            let e_then_d = tc.apply_diff_sparse(deg, &tc.apply_algebra_sparse(&e, deg, &unit));
            if d_then_e != e_then_d {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The Schur functor of a complex: the image of the Young symmetrizer on
/// the tensor power, with canonical bases per degree and the induced
/// differential. The containment check inside `restrict` re-verifies at
/// runtime that the symmetrizer image is a subcomplex.
#[derive(Clone, Debug)]
pub struct SchurComplex {
    partition: Partition,
    tensor: TensorComplex,
    bases: BTreeMap<i64, Subspace>,
    complex: Complex,
    /// Quasi-idempotence constant of the symmetrizer.
    constant: Rational,
    symmetrizer: GroupAlgebraElement,
}

impl SchurComplex {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn ambient(&self) -> &TensorComplex {
        &self.tensor
    }

    /// Canonical basis of the image in the tensor-power coordinates.
    pub fn basis(&self, degree: i64) -> Option<&Subspace> {
        self.bases.get(&degree)
    }

    pub fn bases(&self) -> &BTreeMap<i64, Subspace> {
        &self.bases
    }

    /// The image subcomplex with its induced differential.
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.bases.get(&degree).map_or(0, |s| s.dim())
    }

    /// Include a coordinate vector into the ambient tensor power.
    pub fn include(&self, degree: i64, coords: &[Rational]) -> Vec<Rational> {
        match self.bases.get(&degree) {
            Some(s) => s.basis().apply(coords).expect("dims"),
            None => Vec::new(),
        }
    }

    /// Coordinates of an ambient vector lying in the image, if it does.
    pub fn coordinates(&self, degree: i64, v: &[Rational]) -> Option<Vec<Rational>> {
        self.bases.get(&degree)?.coordinates(v)
    }

    /// Project an ambient vector by the normalized idempotent e/c and
    /// return its coordinates in the canonical basis.
    pub fn project(&self, degree: i64, v: &[Rational]) -> Option<Vec<Rational>> {
        let sparse: SparseVec = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        let image = self
            .tensor
            .apply_algebra_sparse(&self.symmetrizer, degree, &sparse);
        let mut dense = vec![rat_zero(); self.tensor.dim(degree)];
        for (i, x) in image {
            dense[i] = x / &self.constant;
        }
        self.coordinates(degree, &dense)
    }
}

/// Build the Schur complex S^l(a).
pub fn schur_complex(l: &Partition, a: &Complex, bound: usize) -> Result<SchurComplex> {
    let e = young_symmetrizer(l, bound)?;
    let c = quasi_idempotence_constant(&e)?
        .ok_or_else(|| Error::InvalidComplex(format!("symmetrizer of {l} not quasi-idempotent")))?;
    let tc = TensorComplex::new(a, l.n())?;
    let mut bases = BTreeMap::new();
    for &deg in &tc.basis().degrees() {
        let m = tc.algebra_matrix(&e, deg);
        let image = m.image_basis();
        if image.dim() > 0 {
            bases.insert(deg, image);
        }
    }
    // induced differential via restriction; containment doubles as the
    // runtime check that the image is preserved by d
    let mut pieces = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (&deg, sub) in &bases {
        pieces.insert(deg, sub.dim());
    }
    let degs: Vec<i64> = bases.keys().copied().collect();
    for &deg in &degs {
        let tgt_dim = bases.get(&(deg + 1)).map_or(0, |s| s.dim());
        let src = &bases[&deg];
        // dense differential on this piece
        let ambient_rows = tc.dim(deg + 1);
        let mut dmat = Matrix::zero(ambient_rows, tc.dim(deg));
        for col in 0..tc.dim(deg) {
            for (row, v) in tc.apply_diff_sparse(deg, &[(col, rat_one())]) {
                dmat.set(row, col, v);
            }
        }
        if tgt_dim == 0 {
            // image must map to zero
            let img = dmat.mul(src.basis())?;
            if !img.is_zero() {
                return Err(Error::NotChainMap(
                    "symmetrizer image not preserved by the differential".into(),
                ));
            }
            continue;
        }
        let tgt = &bases[&(deg + 1)];
        let restricted = dmat.restrict(src, tgt).map_err(|_| {
            Error::NotChainMap("symmetrizer image not preserved by the differential".into())
        })?;
        if !restricted.is_zero() {
            diffs.insert(deg, restricted);
        }
    }
    let complex = Complex::new(pieces, diffs)?;
    Ok(SchurComplex {
        partition: l.clone(),
        tensor: tc,
        bases,
        complex,
        constant: c,
        symmetrizer: e,
    })
}

/// Koszul-signed antisymmetric power: the Schur complex of the single
/// column, i.e. the dual of the single row.
pub fn alt_power(i: usize, a: &Complex, bound: usize) -> Result<SchurComplex> {
    if i == 0 {
        return Err(Error::InvalidComplex("alternating power needs i >= 1".into()));
    }
    schur_complex(&Partition::row(i).dual(), a, bound)
}

/// The map S^l(f) induced on Schur complexes by a degree-0 chain map f,
/// written in the canonical image bases.
pub fn schur_map(
    f: &ComplexMap,
    source: &SchurComplex,
    target: &SchurComplex,
) -> Result<ComplexMap> {
    if source.partition() != target.partition() {
        return Err(Error::DimensionMismatch("different partitions".into()));
    }
    let n = source.tensor.factors();
    let mut components = BTreeMap::new();
    for (&deg, src) in &source.bases {
        let Some(tgt) = target.bases.get(&deg) else {
            // the induced map must be zero into an empty piece
            continue;
        };
        // dense tensor power of f in this degree
        let src_tuples = source.tensor.basis().tuples(deg);
        let tgt_tuples = target.tensor.basis().tuples(deg);
        let mut big = Matrix::zero(tgt_tuples.len(), src_tuples.len());
        for (c, t) in src_tuples.iter().enumerate() {
            for (r, u) in tgt_tuples.iter().enumerate() {
                // product over slots of f entries; degrees must agree per slot
                let mut prod = rat_one();
                let mut ok = true;
                for k in 0..n {
                    let (dt, it) = t[k];
                    let (du, iu) = u[k];
                    if dt != du {
                        ok = false;
                        break;
                    }
                    let fm = f.component(dt, source.tensor.base(), target.tensor.base());
                    let entry = fm.at(iu, it);
                    if entry.is_zero() {
                        ok = false;
                        break;
                    }
                    prod *= entry;
                }
                if ok {
                    big.set(r, c, prod);
                }
            }
        }
        components.insert(deg, big.restrict(src, tgt)?);
    }
    Ok(ComplexMap::new(components))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::contractible;
    use crate::perm::all_permutations;

    fn line(degree: i64) -> Complex {
        Complex::concentrated(degree, 1)
    }

    fn plane(degree: i64) -> Complex {
        Complex::concentrated(degree, 2)
    }

    #[test]
    fn koszul_sign_examples() {
        let id = Permutation::identity(2);
        assert_eq!(koszul_sign(&id, &[1, 1]), 1);
        let s = Permutation::from_cycle(2, &[1, 2]).unwrap();
        assert_eq!(koszul_sign(&s, &[1, 1]), -1);
        assert_eq!(koszul_sign(&s, &[0, 1]), 1);
        assert_eq!(koszul_sign(&s, &[0, 0]), 1);
    }

    #[test]
    fn tensor_power_of_one_factor_is_the_complex() {
        let a = contractible(0, 2);
        let t = tensor_power(&a, 1).unwrap();
        assert_eq!(t.to_complex(), a);
    }

    #[test]
    fn tensor_differential_sign() {
        // A has basis x in degree 1 (index 0) and y in degree 0..1? Use
        // A = Q in degree 1 plus Q -> Q in degrees 1..2 to probe the sign:
        // simpler: A with x in degree 1, y in degree 0, dy in degree 1.
        // d(x ⊗ y) should pick up (-1)^(deg x) = -1 on x ⊗ dy.
        let mut pieces = BTreeMap::new();
        pieces.insert(0, 1); // y
        pieces.insert(1, 2); // x (index 0), dy (index 1)
        let mut d0 = Matrix::zero(2, 1);
        d0.set(1, 0, rat_one()); // dy
        let mut diffs = BTreeMap::new();
        diffs.insert(0, d0);
        let a = Complex::new(pieces, diffs).unwrap();
        let t = tensor_power(&a, 2).unwrap();
        // tuple x ⊗ y has degree 1; find it
        let tuple: Tuple = vec![(1, 0), (0, 0)];
        let (deg, col) = t.basis().position(&tuple).unwrap();
        assert_eq!(deg, 1);
        let image = t.apply_diff_sparse(1, &[(col, rat_one())]);
        // expect exactly x ⊗ dy with coefficient -1
        let target: Tuple = vec![(1, 0), (1, 1)];
        let (_, tpos) = t.basis().position(&target).unwrap();
        assert_eq!(image, vec![(tpos, rat(-1))]);
    }

    #[test]
    fn kunneth_contractible_square_is_acyclic() {
        let a = contractible(0, 1);
        let t = tensor_power(&a, 2).unwrap().to_complex();
        assert!(t.cohomology_dims().is_empty());
    }

    #[test]
    fn action_scalar_on_odd_line() {
        // (12) acts by -1 on the square of a line in degree 1
        let s = Permutation::from_cycle(2, &[1, 2]).unwrap();
        let m = permutation_action(&s, &line(1), 2).unwrap();
        let comp = m.components().get(&2).unwrap();
        assert_eq!(*comp, Matrix::identity(1).scale(&rat(-1)));
    }

    #[test]
    fn action_is_a_group_action_n3() {
        // exhaustively over Sym(3) on a mixed complex with small pieces
        let mut pieces = BTreeMap::new();
        pieces.insert(0, 1);
        pieces.insert(1, 2);
        let a = Complex::new(pieces, BTreeMap::new()).unwrap();
        let t = TensorComplex::new(&a, 3).unwrap();
        for p in all_permutations(3) {
            for q in all_permutations(3) {
                let pq = p.compose(&q).unwrap();
                for &deg in &t.basis().degrees() {
                    for col in 0..t.dim(deg) {
                        let via_q = {
                            let (pos, s1) = t.apply_perm_to_tuple(&q, deg, col);
                            let (pos2, s2) = t.apply_perm_to_tuple(&p, deg, pos);
                            (pos2, s1 * s2)
                        };
                        let direct = t.apply_perm_to_tuple(&pq, deg, col);
                        assert_eq!(via_q, direct, "action fails for {p:?} ∘ {q:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn identity_element_acts_as_identity() {
        let e = GroupAlgebraElement::unit(2);
        let m = apply_group_algebra(&e, &plane(0), 2).unwrap();
        assert_eq!(*m.components().get(&0).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn antisymmetrizer_ranks() {
        // image of Σ(1,1) on a 2-dim space in degree 0 has rank 1
        let l = Partition::column(2);
        let e = young_symmetrizer(&l, 8).unwrap();
        let t = TensorComplex::new(&plane(0), 2).unwrap();
        assert_eq!(t.algebra_matrix(&e, 0).rank(), 1);

        // on an odd line the "alternating" square is its symmetric square
        let t = TensorComplex::new(&line(1), 2).unwrap();
        assert_eq!(t.algebra_matrix(&e, 2).rank(), 1);
    }

    #[test]
    fn schur_dims_degree_zero() {
        let s2 = schur_complex(&Partition::row(2), &plane(0), 8).unwrap();
        assert_eq!(s2.dim(0), 3);
        let l2 = schur_complex(&Partition::column(2), &plane(0), 8).unwrap();
        assert_eq!(l2.dim(0), 1);
    }

    #[test]
    fn alt_power_examples() {
        let a1 = alt_power(1, &plane(0), 8).unwrap();
        assert_eq!(a1.dim(0), 2);
        let a2 = alt_power(2, &plane(0), 8).unwrap();
        assert_eq!(a2.dim(0), 1);
        // odd line: ∧² lands in degree 2 with dimension 1
        let a2 = alt_power(2, &line(1), 8).unwrap();
        assert_eq!(a2.dim(2), 1);
        assert_eq!(a2.complex().pieces().len(), 1);
    }

    #[test]
    fn schur_of_contractible_is_acyclic() {
        let a = contractible(0, 1);
        for n in 1..=3usize {
            for l in crate::partition::partitions_of(n) {
                let s = schur_complex(&l, &a, 8).unwrap();
                assert!(
                    s.complex().cohomology_dims().is_empty(),
                    "S^{l} of a contractible complex has cohomology"
                );
            }
        }
    }

    #[test]
    fn symmetrizer_commutes_small() {
        let mut pieces = BTreeMap::new();
        pieces.insert(0, 1);
        pieces.insert(1, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::identity(1));
        let a = Complex::new(pieces, diffs).unwrap();
        for n in 1..=3usize {
            for l in crate::partition::partitions_of(n) {
                assert!(symmetrizer_commutes(&l, &a, 8).unwrap());
            }
        }
    }

    #[test]
    fn ungraded_symmetric_and_exterior_dimensions() {
        // brute-force counts: dim S^n(Q^d) = C(d+n-1, n), dim ∧^n = C(d, n)
        use crate::rational::binomial;
        for d in 1..=3usize {
            let a = Complex::concentrated(0, d);
            for n in 1..=3usize {
                let sym = schur_complex(&Partition::row(n), &a, 8).unwrap();
                assert_eq!(sym.dim(0), binomial(d + n - 1, n));
                let alt = alt_power(n, &a, 8).unwrap();
                assert_eq!(alt.dim(0), binomial(d, n));
            }
        }
    }
}

//! Differential graded Lie algebras, their modules, and Jacobi complexes.
//!
//! A DGLA is a complex L with a degree-0 chain map ∧²L → L whose iterated
//! composite ∧³L → ∧²L → L vanishes; both conditions are verified at
//! construction and violations are rejected. The Jacobi complex J^r(L)
//! totalizes the columns ∧^r L → ... → ∧²L → L with ∧^i L in homological
//! column -i; the internal differential of column -i carries the sign
//! (-1)^i so the total differential squares to zero.
//!
//! Normalization of the connecting maps: ∧^i L → ∧^{i-1} L is the bracket
//! applied to the last two tensor factors, re-antisymmetrized with the
//! normalized idempotent, and scaled by (-1)^i (i-1). With this scaling the
//! dual of the final total differential is the multiplicative comorphism of
//! a linear action, which is what the quotient comparison consumes.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::complex::{Complex, ComplexMap};
use crate::error::{Error, Result};
use crate::group_algebra::{
    quasi_idempotence_constant, young_symmetrizer, DEFAULT_PARTITION_BOUND,
};
use crate::matrix::{Matrix, Subspace};
use crate::partition::Partition;
use crate::rational::{rat, rat_one, rat_zero, Rational};
use crate::tensor::{alt_power, SchurComplex, SparseVec, TensorComplex, Tuple};

/// A differential graded Lie algebra: complex plus bracket on ∧².
#[derive(Clone, Debug)]
pub struct Dgla {
    complex: Complex,
    wedge2: SchurComplex,
    /// Degree-k matrices from the canonical basis of (∧²L)_k to L_k.
    bracket: ComplexMap,
}

impl Dgla {
    /// Validates that the bracket is a degree-0 chain map and that the
    /// composite ∧³L → ∧²L → L vanishes identically.
    pub fn new(complex: Complex, bracket: ComplexMap) -> Result<Self> {
        let wedge2 = alt_power(2, &complex, DEFAULT_PARTITION_BOUND)?;
        for (&deg, m) in bracket.components() {
            if m.cols() != wedge2.dim(deg) || m.rows() != complex.dim(deg) {
                return Err(Error::InvalidDgla(format!(
                    "bracket at degree {deg} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    complex.dim(deg),
                    wedge2.dim(deg)
                )));
            }
        }
        bracket
            .verify_chain_map(wedge2.complex(), &complex)
            .map_err(|_| Error::InvalidDgla("bracket is not a chain map".into()))?;
        let dgla = Dgla {
            complex,
            wedge2,
            bracket,
        };
        // graded Jacobi identity: ce2 ∘ ce3 = 0
        if dgla.complex.total_dim() > 0 {
            let wedge3 = alt_power(3, &dgla.complex, DEFAULT_PARTITION_BOUND)?;
            let ce3 = dgla.ce_from_wedges(&wedge3, &dgla.wedge2.clone())?;
            let ce2 = dgla.bracket.clone();
            let composite = ce2.compose(&ce3)?;
            for (deg, m) in composite.components() {
                if !m.is_zero() {
                    return Err(Error::InvalidDgla(format!(
                        "Jacobi identity fails: ∧³L → ∧²L → L is nonzero at degree {deg}"
                    )));
                }
            }
        }
        Ok(dgla)
    }

    /// The abelian DGLA on a complex (zero bracket).
    pub fn abelian(complex: Complex) -> Result<Self> {
        Dgla::new(complex, ComplexMap::new(BTreeMap::new()))
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn bracket(&self) -> &ComplexMap {
        &self.bracket
    }

    pub fn wedge2(&self) -> &SchurComplex {
        &self.wedge2
    }

    /// Bracket as a map on the full tensor square: bracket ∘ (projection to
    /// ∧² in coordinates). One dense matrix per degree of L⊗L.
    pub fn bilinear_bracket(&self) -> Result<BTreeMap<i64, Matrix>> {
        let t2 = self.wedge2.ambient();
        let e = &antisymmetrizer(2)?;
        let c = quasi_idempotence_constant(e)?.expect("antisymmetrizer constant");
        let mut out = BTreeMap::new();
        for &deg in &t2.basis().degrees() {
            let dim = t2.dim(deg);
            let rows = self.complex.dim(deg);
            let mut m = Matrix::zero(rows, dim);
            if rows > 0 && self.wedge2.dim(deg) > 0 {
                let br = self
                    .bracket
                    .component(deg, self.wedge2.complex(), &self.complex);
                for col in 0..dim {
                    let projected = t2.apply_algebra_sparse(e, deg, &[(col, rat_one())]);
                    let mut dense = vec![rat_zero(); dim];
                    for (i, v) in projected {
                        dense[i] = v / &c;
                    }
                    if let Some(coords) = self.wedge2.coordinates(deg, &dense) {
                        let value = br.apply(&coords)?;
                        for (r, v) in value.into_iter().enumerate() {
                            m.set(r, col, v);
                        }
                    }
                }
            }
            out.insert(deg, m);
        }
        Ok(out)
    }

    /// The connecting map ∧^i L → ∧^{i-1} L between prebuilt wedge powers.
    fn ce_from_wedges(&self, from: &SchurComplex, to: &SchurComplex) -> Result<ComplexMap> {
        let i = from.ambient().factors();
        assert_eq!(to.ambient().factors(), i - 1);
        assert!(i >= 2);
        let b = self.bilinear_bracket()?;
        let t2 = self.wedge2.ambient();
        let scale = rat(i as i64 - 1);
        let mut components = BTreeMap::new();
        for (&deg, sub) in from.bases() {
            let tgt_dim = to.dim(deg);
            let mut m = Matrix::zero(tgt_dim, sub.dim());
            if tgt_dim > 0 {
                for col in 0..sub.dim() {
                    let ambient = sub.basis().column(col);
                    // apply id^(i-2) ⊗ bracket to the last two slots
                    let mut acc: BTreeMap<Tuple, Rational> = BTreeMap::new();
                    let tuples = from.ambient().basis().tuples(deg);
                    for (pos, coeff) in ambient.iter().enumerate() {
                        if coeff.is_zero() {
                            continue;
                        }
                        let t = &tuples[pos];
                        let pair = vec![t[i - 2], t[i - 1]];
                        let pair_deg = pair[0].0 + pair[1].0;
                        let Some((pdeg, ppos)) = t2.basis().position(&pair) else {
                            continue;
                        };
                        debug_assert_eq!(pdeg, pair_deg);
                        let bm = &b[&pair_deg];
                        for r in 0..bm.rows() {
                            let entry = bm.at(r, ppos);
                            if entry.is_zero() {
                                continue;
                            }
                            // target L-basis index r at degree pair_deg
                            let mut u: Tuple = t[..i - 2].to_vec();
                            u.push((pair_deg, r));
                            let v = acc.entry(u).or_insert_with(rat_zero);
                            *v += coeff * entry;
                        }
                    }
                    // re-antisymmetrize with the normalized idempotent and
                    // take coordinates in the target wedge basis
                    let target_tensor = to.ambient();
                    let mut sparse: SparseVec = Vec::new();
                    for (u, c) in acc {
                        if c.is_zero() {
                            continue;
                        }
                        if let Some((udeg, upos)) = target_tensor.basis().position(&u) {
                            debug_assert_eq!(udeg, deg);
                            sparse.push((upos, c));
                        }
                    }
                    let e = antisymmetrizer(i - 1)?;
                    let cst = quasi_idempotence_constant(&e)?.expect("constant");
                    let projected = target_tensor.apply_algebra_sparse(&e, deg, &sparse);
                    let mut dense = vec![rat_zero(); target_tensor.dim(deg)];
                    for (p, v) in projected {
                        dense[p] = v / &cst;
                    }
                    let coords = to.coordinates(deg, &dense).ok_or_else(|| {
                        Error::InvalidDgla(
                            "connecting map does not land in the lower wedge power".into(),
                        )
                    })?;
                    for (r, v) in coords.into_iter().enumerate() {
                        m.set(r, col, &v * &scale);
                    }
                }
            }
            if !m.is_zero() {
                components.insert(deg, m);
            }
        }
        Ok(ComplexMap::new(components))
    }
}

fn antisymmetrizer(i: usize) -> Result<crate::group_algebra::GroupAlgebraElement> {
    young_symmetrizer(&Partition::column(i), DEFAULT_PARTITION_BOUND)
}

/// Assemble a bracket matrix on the canonical ∧² basis from a bilinear
/// pairing given on ordered pairs of basis vectors of L.
///
/// The pairing must already be graded antisymmetric, with off-diagonal
/// values halved: the canonical basis vector for a pair {a, b} is the
/// two-term antisymmetrized tensor, so each ordered pair contributes half
/// of the bracket value.
pub fn bracket_from_pairing(
    complex: &Complex,
    pairing: impl Fn((i64, usize), (i64, usize)) -> Vec<(i64, usize, Rational)>,
) -> Result<ComplexMap> {
    let wedge2 = alt_power(2, complex, DEFAULT_PARTITION_BOUND)?;
    let mut components = BTreeMap::new();
    for (&deg, sub) in wedge2.bases() {
        let rows = complex.dim(deg);
        let tuples = wedge2.ambient().basis().tuples(deg);
        let mut mat = Matrix::zero(rows, sub.dim());
        for col in 0..sub.dim() {
            let ambient = sub.basis().column(col);
            for (pos, coeff) in ambient.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let t = &tuples[pos];
                for (d, r, c) in pairing(t[0], t[1]) {
                    debug_assert_eq!(d, deg);
                    let v = mat.at(r, col) + coeff * &c;
                    mat.set(r, col, v);
                }
            }
        }
        if !mat.is_zero() {
            components.insert(deg, mat);
        }
    }
    Ok(ComplexMap::new(components))
}

/// The connecting map ∧^i L → ∧^{i-1} L, i ≥ 2. For i = 2 this is the
/// bracket itself.
pub fn ce_map(i: usize, g: &Dgla) -> Result<ComplexMap> {
    if i < 2 {
        return Err(Error::InvalidDgla("connecting map needs i >= 2".into()));
    }
    if i == 2 {
        return Ok(g.bracket.clone());
    }
    let from = alt_power(i, g.complex(), DEFAULT_PARTITION_BOUND)?;
    let to = alt_power(i - 1, g.complex(), DEFAULT_PARTITION_BOUND)?;
    g.ce_from_wedges(&from, &to)
}

/// One column of a totalized Jacobi complex.
#[derive(Clone, Debug)]
pub struct Column {
    /// Homological column index i ≥ 1; the column sits in total degrees
    /// internal - i.
    pub index: usize,
    /// The column as a complex with its internal differential.
    pub complex: Complex,
    /// Connecting map into the previous column (same internal degree).
    pub ce: BTreeMap<i64, Matrix>,
}

/// Location of one column piece inside a total-degree slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub column: usize,
    pub internal_degree: i64,
    pub offset: usize,
    pub dim: usize,
}

/// A totalized complex with per-column bookkeeping.
#[derive(Clone, Debug)]
pub struct Totalization {
    pub total: Complex,
    pub segments: BTreeMap<i64, Vec<Segment>>,
    pub ncols: usize,
}

impl Totalization {
    fn build(columns: &[Column]) -> Result<Totalization> {
        let ncols = columns.last().map_or(0, |c| c.index);
        let mut segments: BTreeMap<i64, Vec<Segment>> = BTreeMap::new();
        for col in columns {
            for (&ideg, &dim) in col.complex.pieces() {
                let total_deg = ideg - col.index as i64;
                segments.entry(total_deg).or_default().push(Segment {
                    column: col.index,
                    internal_degree: ideg,
                    offset: 0,
                    dim,
                });
            }
        }
        let mut pieces = BTreeMap::new();
        for (&deg, segs) in segments.iter_mut() {
            segs.sort_by_key(|s| s.column);
            let mut off = 0;
            for s in segs.iter_mut() {
                s.offset = off;
                off += s.dim;
            }
            pieces.insert(deg, off);
        }
        // assemble total differentials
        let mut diffs = BTreeMap::new();
        let degrees: Vec<i64> = segments.keys().copied().collect();
        for &deg in &degrees {
            let src = &segments[&deg];
            let Some(tgt) = segments.get(&(deg + 1)) else {
                continue;
            };
            let rows: usize = tgt.iter().map(|s| s.dim).sum();
            let cols: usize = src.iter().map(|s| s.dim).sum();
            let mut m = Matrix::zero(rows, cols);
            for s in src {
                let col_data = &columns[s.column - 1 - (columns[0].index - 1)];
                debug_assert_eq!(col_data.index, s.column);
                // internal differential with totalization sign (-1)^column
                if let Some(t) = tgt
                    .iter()
                    .find(|t| t.column == s.column && t.internal_degree == s.internal_degree + 1)
                {
                    let d = col_data.complex.differential(s.internal_degree);
                    let sign = if s.column % 2 == 0 { 1 } else { -1 };
                    for r in 0..d.rows() {
                        for c in 0..d.cols() {
                            let v = d.at(r, c) * rat(sign);
                            if !v.is_zero() {
                                m.set(t.offset + r, s.offset + c, v);
                            }
                        }
                    }
                }
                // connecting map to the previous column, same internal degree
                if let Some(t) = tgt
                    .iter()
                    .find(|t| t.column + 1 == s.column && t.internal_degree == s.internal_degree)
                {
                    if let Some(ce) = col_data.ce.get(&s.internal_degree) {
                        for r in 0..ce.rows() {
                            for c in 0..ce.cols() {
                                let v = ce.at(r, c);
                                if !v.is_zero() {
                                    m.set(t.offset + r, s.offset + c, v.clone());
                                }
                            }
                        }
                    }
                }
            }
            if !m.is_zero() {
                diffs.insert(deg, m);
            }
        }
        let total = Complex::new(pieces, diffs)?;
        Ok(Totalization {
            total,
            segments,
            ncols,
        })
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.total.dim(degree)
    }

    pub fn segments_at(&self, degree: i64) -> &[Segment] {
        self.segments.get(&degree).map_or(&[], |v| v.as_slice())
    }

    /// Coordinate subspace of a total degree spanned by columns ≤ level.
    pub fn column_prefix(&self, degree: i64, level: usize) -> Subspace {
        let dim = self.dim(degree);
        let span: usize = self
            .segments_at(degree)
            .iter()
            .filter(|s| s.column <= level)
            .map(|s| s.dim)
            .sum();
        let mut m = Matrix::zero(dim, span);
        // segments are offset-ordered by column, so the prefix is an
        // initial coordinate block
        for j in 0..span {
            m.set(j, j, rat_one());
        }
        Subspace::from_spanning(dim, &m)
    }
}

/// Degree-0 cohomology of a totalization, with canonical representatives
/// and the graded dimensions of the column filtration.
#[derive(Clone, Debug)]
pub struct H0 {
    /// Cocycles in total degree 0.
    pub cocycles: Subspace,
    /// Boundaries from total degree -1.
    pub boundaries: Subspace,
    /// Canonical representatives, one column per class.
    pub reps: Matrix,
    /// Graded dims of the filtration by columns 1..=ncols.
    pub filtration_dims: Vec<usize>,
}

impl H0 {
    pub fn dim(&self) -> usize {
        self.reps.cols()
    }
}

pub fn h0_of(tot: &Totalization) -> H0 {
    let dim0 = tot.dim(0);
    let d0 = tot.total.differential(0);
    let dm1 = tot.total.differential(-1);
    let cocycles = if d0.rows() == 0 {
        Subspace::full(dim0)
    } else {
        d0.kernel_basis()
    };
    let boundaries = if dm1.cols() == 0 {
        Subspace::zero(dim0)
    } else {
        dm1.image_basis()
    };
    // extend the boundary basis by cocycles to pick representatives
    let mut current = boundaries.clone();
    let mut reps = Matrix::zero(dim0, 0);
    for j in 0..cocycles.dim() {
        let v = cocycles.basis().column(j);
        if !current.contains(&v) {
            reps = reps.hstack(&Matrix::col_vec(&v)).expect("same rows");
            current = current.sum(&Subspace::from_spanning(dim0, &Matrix::col_vec(&v)));
        }
    }
    // graded dims of the column filtration on h0
    let mut filtration_dims = Vec::new();
    let mut prev = boundaries.dim();
    for level in 1..=tot.ncols {
        let f = tot.column_prefix(0, level);
        let w = cocycles.intersect(&f).sum(&boundaries);
        filtration_dims.push(w.dim() - prev);
        prev = w.dim();
    }
    H0 {
        cocycles,
        boundaries,
        reps,
        filtration_dims,
    }
}

/// The Jacobi complex J^r(L): columns ∧^i L for 1 ≤ i ≤ r.
#[derive(Clone, Debug)]
pub struct JacobiComplex {
    pub r: usize,
    pub wedges: Vec<SchurComplex>,
    pub tot: Totalization,
}

impl JacobiComplex {
    pub fn total(&self) -> &Complex {
        &self.tot.total
    }

    pub fn h0(&self) -> H0 {
        h0_of(&self.tot)
    }

    /// The wedge power ∧^i L, 1-based.
    pub fn wedge(&self, i: usize) -> &SchurComplex {
        &self.wedges[i - 1]
    }
}

pub fn jacobi(r: usize, g: &Dgla) -> Result<JacobiComplex> {
    if r == 0 {
        return Err(Error::InvalidDgla("Jacobi complex needs r >= 1".into()));
    }
    let mut wedges = Vec::with_capacity(r);
    for i in 1..=r {
        wedges.push(alt_power(i, g.complex(), DEFAULT_PARTITION_BOUND)?);
    }
    let mut columns = Vec::with_capacity(r);
    for i in 1..=r {
        let ce = if i >= 2 {
            let map = if i == 2 {
                g.bracket().clone()
            } else {
                g.ce_from_wedges(&wedges[i - 1], &wedges[i - 2])?
            };
            map.components().clone()
        } else {
            BTreeMap::new()
        };
        columns.push(Column {
            index: i,
            complex: wedges[i - 1].complex().clone(),
            ce,
        });
    }
    let tot = Totalization::build(&columns)?;
    Ok(JacobiComplex { r, wedges, tot })
}

/// A module over a DGLA: a complex M with a degree-0 action L ⊗ M → M.
///
/// The action is stored per bidegree: `action[(ldeg, mdeg)]` maps the
/// (row-major) basis of L_ldeg ⊗ M_mdeg to M_(ldeg+mdeg).
#[derive(Clone, Debug)]
pub struct DglaModule {
    complex: Complex,
    action: BTreeMap<(i64, i64), Matrix>,
}

impl DglaModule {
    pub fn new(
        g: &Dgla,
        complex: Complex,
        action: BTreeMap<(i64, i64), Matrix>,
    ) -> Result<Self> {
        let action: BTreeMap<(i64, i64), Matrix> =
            action.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        for (&(ldeg, mdeg), m) in &action {
            let expect_cols = g.complex().dim(ldeg) * complex.dim(mdeg);
            let expect_rows = complex.dim(ldeg + mdeg);
            if m.cols() != expect_cols || m.rows() != expect_rows {
                return Err(Error::InvalidModule(format!(
                    "action at bidegree ({ldeg},{mdeg}) is {}x{}, expected {expect_rows}x{expect_cols}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let module = DglaModule { complex, action };
        module.verify_chain_map(g)?;
        module.verify_square(g)?;
        Ok(module)
    }

    /// Module with zero action (valid when the bracket-compatibility is
    /// vacuous, e.g. a trivial representation).
    pub fn trivial(g: &Dgla, complex: Complex) -> Result<Self> {
        DglaModule::new(g, complex, BTreeMap::new())
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// Action of one L basis vector on one M basis vector.
    pub fn act(&self, l: (i64, usize), m: (i64, usize)) -> Vec<(i64, usize, Rational)> {
        let Some(mat) = self.action.get(&(l.0, m.0)) else {
            return Vec::new();
        };
        let mdim = self.complex.dim(m.0);
        let col = l.1 * mdim + m.1;
        let out_deg = l.0 + m.0;
        (0..mat.rows())
            .filter(|&r| !mat.at(r, col).is_zero())
            .map(|r| (out_deg, r, mat.at(r, col).clone()))
            .collect()
    }

    /// d_M(l·m) = d_L(l)·m + (-1)^|l| l·d_M(m), checked on basis pairs.
    fn verify_chain_map(&self, g: &Dgla) -> Result<()> {
        for (&ldeg, &ldim) in g.complex().pieces() {
            for (&mdeg, &mdim) in self.complex.pieces() {
                for li in 0..ldim {
                    for mi in 0..mdim {
                        // lhs: d(l · m)
                        let mut lhs: BTreeMap<(i64, usize), Rational> = BTreeMap::new();
                        let dm = self.complex.differential(ldeg + mdeg);
                        for (deg, r, c) in self.act((ldeg, li), (mdeg, mi)) {
                            for row in 0..dm.rows() {
                                let e = dm.at(row, r);
                                if !e.is_zero() {
                                    *lhs.entry((deg + 1, row)).or_insert_with(rat_zero) +=
                                        e * &c;
                                }
                            }
                        }
                        // rhs: dl · m + (-1)^|l| l · dm
                        let mut rhs: BTreeMap<(i64, usize), Rational> = BTreeMap::new();
                        let dl = g.complex().differential(ldeg);
                        for row in 0..dl.rows() {
                            let e = dl.at(row, li);
                            if e.is_zero() {
                                continue;
                            }
                            for (deg, r, c) in self.act((ldeg + 1, row), (mdeg, mi)) {
                                *rhs.entry((deg, r)).or_insert_with(rat_zero) += &c * e;
                            }
                        }
                        let sgn = rat(if ldeg % 2 == 0 { 1 } else { -1 });
                        let dmm = self.complex.differential(mdeg);
                        for row in 0..dmm.rows() {
                            let e = dmm.at(row, mi);
                            if e.is_zero() {
                                continue;
                            }
                            for (deg, r, c) in self.act((ldeg, li), (mdeg + 1, row)) {
                                *rhs.entry((deg, r)).or_insert_with(rat_zero) += &c * e * &sgn;
                            }
                        }
                        lhs.retain(|_, v| !v.is_zero());
                        rhs.retain(|_, v| !v.is_zero());
                        if lhs != rhs {
                            return Err(Error::InvalidModule(format!(
                                "action is not a chain map on L_{ldeg}[{li}] ⊗ M_{mdeg}[{mi}]"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The square: acting by the bracket equals acting twice. Checked on
    /// every ∧²L basis vector against every M basis vector.
    fn verify_square(&self, g: &Dgla) -> Result<()> {
        let w2 = g.wedge2();
        for (&wdeg, sub) in w2.bases() {
            let tuples = w2.ambient().basis().tuples(wdeg);
            let br = g
                .bracket()
                .component(wdeg, w2.complex(), g.complex());
            for col in 0..sub.dim() {
                let ambient = sub.basis().column(col);
                for (&mdeg, &mdim) in self.complex.pieces() {
                    for mi in 0..mdim {
                        // route 1: bracket then act
                        let mut lhs: BTreeMap<(i64, usize), Rational> = BTreeMap::new();
                        for r in 0..br.rows() {
                            let e = br.at(r, col);
                            if e.is_zero() {
                                continue;
                            }
                            for (deg, rr, c) in self.act((wdeg, r), (mdeg, mi)) {
                                *lhs.entry((deg, rr)).or_insert_with(rat_zero) += &c * e;
                            }
                        }
                        // route 2: act with the inner factor, then the outer
                        let mut rhs: BTreeMap<(i64, usize), Rational> = BTreeMap::new();
                        for (pos, coeff) in ambient.iter().enumerate() {
                            if coeff.is_zero() {
                                continue;
                            }
                            let t = &tuples[pos];
                            for (deg1, r1, c1) in self.act(t[1], (mdeg, mi)) {
                                for (deg2, r2, c2) in self.act(t[0], (deg1, r1)) {
                                    *rhs.entry((deg2, r2)).or_insert_with(rat_zero) +=
                                        coeff * &c1 * &c2;
                                }
                            }
                        }
                        lhs.retain(|_, v| !v.is_zero());
                        rhs.retain(|_, v| !v.is_zero());
                        if lhs != rhs {
                            return Err(Error::InvalidModule(format!(
                                "module square fails on ∧²L_{wdeg}[{col}] ⊗ M_{mdeg}[{mi}]"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Layout of L ⊕ M: within every degree, L coordinates come first.
#[derive(Clone, Debug)]
pub struct SumLayout {
    l: Complex,
    m: Complex,
}

impl SumLayout {
    pub fn new(l: &Complex, m: &Complex) -> Self {
        SumLayout {
            l: l.clone(),
            m: m.clone(),
        }
    }

    pub fn sum_complex(&self) -> Complex {
        self.l.direct_sum(&self.m)
    }

    /// Is combined index `idx` at `deg` an M coordinate?
    pub fn is_m(&self, deg: i64, idx: usize) -> bool {
        idx >= self.l.dim(deg)
    }

    pub fn embed_l(&self, deg: i64, idx: usize) -> usize {
        debug_assert!(idx < self.l.dim(deg));
        idx
    }

    pub fn embed_m(&self, deg: i64, idx: usize) -> usize {
        self.l.dim(deg) + idx
    }

    pub fn to_l(&self, deg: i64, idx: usize) -> Option<usize> {
        (idx < self.l.dim(deg)).then_some(idx)
    }

    pub fn to_m(&self, deg: i64, idx: usize) -> Option<usize> {
        (idx >= self.l.dim(deg)).then(|| idx - self.l.dim(deg))
    }

    /// Number of M-factors in a tuple over L ⊕ M.
    pub fn m_multiplicity(&self, t: &Tuple) -> usize {
        t.iter().filter(|&&(d, i)| self.is_m(d, i)).count()
    }
}

/// The augmented DGLA on L ⊕ M with bracket components: the bracket of L
/// on ∧²L, the action on L ∧ M, and zero on ∧²M.
pub fn augment(g: &Dgla, m: &DglaModule) -> Result<(Dgla, SumLayout)> {
    let layout = SumLayout::new(g.complex(), m.complex());
    let sum = layout.sum_complex();
    let wedge2 = alt_power(2, &sum, DEFAULT_PARTITION_BOUND)?;
    let b_l = g.bilinear_bracket()?;
    let t2l = g.wedge2().ambient();

    // graded-antisymmetric bilinear pairing on basis pairs of L ⊕ M
    let pairing = |a: (i64, usize), b: (i64, usize)| -> Vec<(i64, usize, Rational)> {
        let half = crate::rational::ratio(1, 2);
        match (layout.is_m(a.0, a.1), layout.is_m(b.0, b.1)) {
            (false, false) => {
                let la = (a.0, layout.to_l(a.0, a.1).unwrap());
                let lb = (b.0, layout.to_l(b.0, b.1).unwrap());
                let pair: Tuple = vec![la, lb];
                let Some((pdeg, ppos)) = t2l.basis().position(&pair) else {
                    return Vec::new();
                };
                let mat = &b_l[&pdeg];
                (0..mat.rows())
                    .filter(|&r| !mat.at(r, ppos).is_zero())
                    .map(|r| (pdeg, layout.embed_l(pdeg, r), mat.at(r, ppos).clone()))
                    .collect()
            }
            (false, true) => {
                let la = (a.0, layout.to_l(a.0, a.1).unwrap());
                let mb = (b.0, layout.to_m(b.0, b.1).unwrap());
                m.act(la, mb)
                    .into_iter()
                    .map(|(d, r, c)| (d, layout.embed_m(d, r), c * &half))
                    .collect()
            }
            (true, false) => {
                let ma = (a.0, layout.to_m(a.0, a.1).unwrap());
                let lb = (b.0, layout.to_l(b.0, b.1).unwrap());
                let sgn = if a.0 % 2 != 0 && b.0 % 2 != 0 { 1 } else { -1 };
                m.act(lb, ma)
                    .into_iter()
                    .map(|(d, r, c)| (d, layout.embed_m(d, r), c * &half * rat(sgn)))
                    .collect()
            }
            (true, true) => Vec::new(),
        }
    };

    let mut components = BTreeMap::new();
    for (&deg, sub) in wedge2.bases() {
        let rows = sum.dim(deg);
        let tuples = wedge2.ambient().basis().tuples(deg);
        let mut mat = Matrix::zero(rows, sub.dim());
        for col in 0..sub.dim() {
            let ambient = sub.basis().column(col);
            for (pos, coeff) in ambient.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let t = &tuples[pos];
                for (d, r, c) in pairing(t[0], t[1]) {
                    debug_assert_eq!(d, deg);
                    let v = mat.at(r, col) + coeff * &c;
                    mat.set(r, col, v);
                }
            }
        }
        if !mat.is_zero() {
            components.insert(deg, mat);
        }
    }
    let dgla = Dgla::new(sum, ComplexMap::new(components))
        .map_err(|e| Error::InvalidModule(format!("augmented bracket invalid: {e}")))?;
    Ok((dgla, layout))
}

/// One column of a module Jacobi complex: the M-multiplicity-one slice of
/// ∧^(j+1)(L ⊕ M), holding ∧^j L ⊗ M.
#[derive(Clone, Debug)]
pub struct ModuleColumn {
    /// j: number of L factors.
    pub j: usize,
    pub wedge: SchurComplex,
    /// Selected wedge-basis columns (the multiplicity-one ones) per degree.
    pub selected: BTreeMap<i64, Vec<usize>>,
    pub complex: Complex,
}

impl ModuleColumn {
    /// Include slice coordinates into the ambient tensor power of L ⊕ M.
    pub fn include(&self, degree: i64, coords: &[Rational]) -> Vec<Rational> {
        let sel = self.selected.get(&degree).map_or(&[][..], |v| v.as_slice());
        assert_eq!(coords.len(), sel.len());
        let sub = self.wedge.basis(degree).expect("degree exists");
        let mut full = vec![rat_zero(); sub.dim()];
        for (k, &s) in sel.iter().enumerate() {
            full[s] = coords[k].clone();
        }
        sub.basis().apply(&full).expect("dims")
    }

    /// Slice coordinates of an ambient vector, requiring that the vector
    /// lies in the multiplicity-one part.
    pub fn coordinates(&self, degree: i64, ambient: &[Rational]) -> Option<Vec<Rational>> {
        let full = self.wedge.coordinates(degree, ambient)?;
        let sel = self.selected.get(&degree)?;
        let set: std::collections::BTreeSet<usize> = sel.iter().copied().collect();
        for (i, v) in full.iter().enumerate() {
            if !set.contains(&i) && !v.is_zero() {
                return None;
            }
        }
        Some(sel.iter().map(|&s| full[s].clone()).collect())
    }
}

/// The module Jacobi complex J^r(L, M): columns ∧^j L ⊗ M for 0 ≤ j ≤ r,
/// realized as the M-degree-one summand of the augmented Jacobi complex.
#[derive(Clone, Debug)]
pub struct ModuleJacobiComplex {
    pub r: usize,
    pub aug: Dgla,
    pub layout: SumLayout,
    pub columns: Vec<ModuleColumn>,
    pub tot: Totalization,
}

impl ModuleJacobiComplex {
    pub fn total(&self) -> &Complex {
        &self.tot.total
    }

    pub fn h0(&self) -> H0 {
        h0_of(&self.tot)
    }

    /// Column holding ∧^j L ⊗ M.
    pub fn column(&self, j: usize) -> &ModuleColumn {
        &self.columns[j]
    }
}

/// Restrict a wedge power of the augmented algebra to its multiplicity-one
/// slice.
fn multiplicity_slice(
    wedge: &SchurComplex,
    layout: &SumLayout,
    mult: usize,
) -> Result<(BTreeMap<i64, Vec<usize>>, Complex)> {
    let mut selected: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (&deg, sub) in wedge.bases() {
        let tuples = wedge.ambient().basis().tuples(deg);
        let mut sel = Vec::new();
        for col in 0..sub.dim() {
            let pivot_tuple = &tuples[sub.pivots()[col]];
            if layout.m_multiplicity(pivot_tuple) == mult {
                sel.push(col);
            }
        }
        if !sel.is_empty() {
            selected.insert(deg, sel);
        }
    }
    // induced differential: the wedge differential is block diagonal with
    // respect to multiplicity, which the zero check below re-verifies
    let mut pieces = BTreeMap::new();
    for (&deg, sel) in &selected {
        pieces.insert(deg, sel.len());
    }
    let mut diffs = BTreeMap::new();
    for (&deg, sel) in &selected {
        let d = wedge.complex().differential(deg);
        if d.rows() == 0 {
            continue;
        }
        let empty = Vec::new();
        let tsel = selected.get(&(deg + 1)).unwrap_or(&empty);
        let mut m = Matrix::zero(tsel.len(), sel.len());
        for (cc, &c) in sel.iter().enumerate() {
            for r in 0..d.rows() {
                let v = d.at(r, c);
                if v.is_zero() {
                    continue;
                }
                match tsel.iter().position(|&t| t == r) {
                    Some(rr) => m.set(rr, cc, v.clone()),
                    None => {
                        return Err(Error::InvalidModule(
                            "differential does not preserve M-multiplicity".into(),
                        ))
                    }
                }
            }
        }
        if !m.is_zero() {
            diffs.insert(deg, m);
        }
    }
    Ok((selected, Complex::new(pieces, diffs)?))
}

pub fn jacobi_module(r: usize, g: &Dgla, m: &DglaModule) -> Result<ModuleJacobiComplex> {
    if r == 0 {
        return Err(Error::InvalidDgla("Jacobi complex needs r >= 1".into()));
    }
    let (aug, layout) = augment(g, m)?;
    if m.complex().total_dim() == 0 {
        // empty module: empty complex
        return Ok(ModuleJacobiComplex {
            r,
            aug,
            layout,
            columns: Vec::new(),
            tot: Totalization::build(&[])?,
        });
    }
    let mut wedges = Vec::with_capacity(r + 1);
    for i in 1..=(r + 1) {
        wedges.push(alt_power(i, aug.complex(), DEFAULT_PARTITION_BOUND)?);
    }
    let mut columns = Vec::new();
    let mut module_columns = Vec::new();
    for j in 0..=r {
        let wedge = &wedges[j];
        let (selected, complex) = multiplicity_slice(wedge, &layout, 1)?;
        // connecting map restricted to the slice
        let ce = if j >= 1 {
            let full = if j + 1 == 2 {
                aug.bracket().clone()
            } else {
                aug.ce_from_wedges(&wedges[j], &wedges[j - 1])?
            };
            let (prev_sel, _) = multiplicity_slice(&wedges[j - 1], &layout, 1)?;
            let mut out = BTreeMap::new();
            for (&deg, sel) in &selected {
                let fullm = full.component(deg, wedges[j].complex(), wedges[j - 1].complex());
                if fullm.rows() == 0 {
                    continue;
                }
                let empty = Vec::new();
                let tsel = prev_sel.get(&deg).unwrap_or(&empty);
                let mut mm = Matrix::zero(tsel.len(), sel.len());
                for (cc, &c) in sel.iter().enumerate() {
                    for rfull in 0..fullm.rows() {
                        let v = fullm.at(rfull, c);
                        if v.is_zero() {
                            continue;
                        }
                        match tsel.iter().position(|&t| t == rfull) {
                            Some(rr) => mm.set(rr, cc, v.clone()),
                            None => {
                                return Err(Error::InvalidModule(
                                    "connecting map does not preserve M-multiplicity".into(),
                                ))
                            }
                        }
                    }
                }
                if !mm.is_zero() {
                    out.insert(deg, mm);
                }
            }
            out
        } else {
            BTreeMap::new()
        };
        columns.push(Column {
            index: j + 1,
            complex: complex.clone(),
            ce,
        });
        module_columns.push(ModuleColumn {
            j,
            wedge: wedge.clone(),
            selected,
            complex,
        });
    }
    let tot = Totalization::build(&columns)?;
    Ok(ModuleJacobiComplex {
        r,
        aug,
        layout,
        columns: module_columns,
        tot,
    })
}

// ---------------------------------------------------------------------------
// Comultiplication
// ---------------------------------------------------------------------------

/// Unshuffle projection helper: antisymmetrize a tuple segment inside a
/// given tensor power and return the sparse result.
fn project_segment(
    tensor: &TensorComplex,
    tuple: &[(i64, usize)],
) -> Result<Option<(i64, SparseVec)>> {
    let p = tuple.len();
    let e = antisymmetrizer(p)?;
    let c = quasi_idempotence_constant(&e)?.expect("constant");
    let t: Tuple = tuple.to_vec();
    let Some((deg, pos)) = tensor.basis().position(&t) else {
        return Ok(None);
    };
    let projected = tensor.apply_algebra_sparse(&e, deg, &[(pos, rat_one())]);
    let scaled: SparseVec = projected.into_iter().map(|(i, v)| (i, v / &c)).collect();
    Ok(Some((deg, scaled)))
}

/// Comultiplication on h⁰(J^r(L)): the chain-level unshuffle maps
/// ∧^(p+q) L → ∧^p L ⊗ ∧^q L (coefficient one per unshuffle), descended to
/// cohomology in the canonical representative bases.
#[derive(Clone, Debug)]
pub struct Comultiplication {
    pub h0: H0,
    /// Matrix from h⁰ to h⁰ ⊗ h⁰: rows indexed row-major by (i, j).
    pub tensor_matrix: Matrix,
}

impl Comultiplication {
    /// Entry-level access: coefficient of rep_i ⊗ rep_j in Δ(rep_k).
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> &Rational {
        let h = self.h0.dim();
        self.tensor_matrix.at(i * h + j, k)
    }

    /// Fold into the symmetric-square monomial basis (pairs i ≤ j);
    /// fails if the image is not symmetric.
    pub fn symmetric_matrix(&self) -> Result<Matrix> {
        let h = self.h0.dim();
        let pairs: Vec<(usize, usize)> = (0..h)
            .flat_map(|i| (i..h).map(move |j| (i, j)))
            .collect();
        let mut m = Matrix::zero(pairs.len(), h);
        for k in 0..h {
            for (row, &(i, j)) in pairs.iter().enumerate() {
                let a = self.coefficient(i, j, k);
                let b = self.coefficient(j, i, k);
                if a != b {
                    return Err(Error::InvalidDgla(
                        "comultiplication image is not symmetric".into(),
                    ));
                }
                m.set(row, k, a.clone());
            }
        }
        Ok(m)
    }

    /// Coassociativity: (Δ ⊗ id) ∘ Δ = (id ⊗ Δ) ∘ Δ.
    pub fn is_coassociative(&self) -> bool {
        let h = self.h0.dim();
        let d = &self.tensor_matrix;
        for k in 0..h {
            for a in 0..h {
                for b in 0..h {
                    for c in 0..h {
                        let mut lhs = rat_zero();
                        let mut rhs = rat_zero();
                        for m in 0..h {
                            lhs += d.at(a * h + b, m) * d.at(m * h + c, k);
                            rhs += d.at(b * h + c, m) * d.at(a * h + m, k);
                        }
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Projection to representative-class coordinates modulo boundaries.
struct ClassProjector {
    solver_basis: Matrix,
    boundary_dim: usize,
    h: usize,
}

impl ClassProjector {
    fn new(h0: &H0) -> Self {
        let basis = h0.boundaries.basis().hstack(&h0.reps).expect("same rows");
        ClassProjector {
            solver_basis: basis,
            boundary_dim: h0.boundaries.dim(),
            h: h0.reps.cols(),
        }
    }

    /// Class coordinates of a vector, or None when it is not a cocycle
    /// modulo the chosen representatives.
    fn project(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let aug = self
            .solver_basis
            .hstack(&Matrix::col_vec(v))
            .expect("same rows");
        let (rref, pivots) = aug.reduced_row_echelon();
        let last = self.solver_basis.cols();
        if pivots.contains(&last) {
            return None;
        }
        // read off the solution of basis * x = v
        let mut x = vec![rat_zero(); last];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = rref.at(i, last).clone();
        }
        Some(x[self.boundary_dim..self.boundary_dim + self.h].to_vec())
    }
}

/// Chain-level unshuffle of a total-degree-zero vector of J^r(L) into the
/// (column p, column q) part, expressed in wedge-basis coordinates per side.
fn unshuffle_pair(
    j: &JacobiComplex,
    z: &[Rational],
    p: usize,
    q: usize,
) -> Result<Matrix> {
    let wp = j.wedge(p);
    let wq = j.wedge(q);
    let hp = wp.dim(p as i64);
    let hq = wq.dim(q as i64);
    let mut out = Matrix::zero(hp, hq);
    if hp == 0 || hq == 0 {
        return Ok(out);
    }
    let i = p + q;
    let Some(seg) = j
        .tot
        .segments_at(0)
        .iter()
        .find(|s| s.column == i)
        .cloned()
    else {
        return Ok(out);
    };
    let coords: Vec<Rational> = z[seg.offset..seg.offset + seg.dim].to_vec();
    let wi = j.wedge(i);
    let ambient = wi.include(i as i64, &coords);
    let tuples = wi.ambient().basis().tuples(i as i64);
    // ambient pair accumulator at internal bidegree (p, q)
    let amb_p = wp.ambient();
    let amb_q = wq.ambient();
    let dim_p = amb_p.dim(p as i64);
    let dim_q = amb_q.dim(q as i64);
    let mut pair = Matrix::zero(dim_p, dim_q);
    for (pos, coeff) in ambient.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let t = &tuples[pos];
        let front = &t[..p];
        let back = &t[p..];
        let Some((fdeg, fvec)) = project_segment(amb_p, front)? else {
            continue;
        };
        let Some((bdeg, bvec)) = project_segment(amb_q, back)? else {
            continue;
        };
        if fdeg != p as i64 || bdeg != q as i64 {
            return Err(Error::InvalidDgla(
                "unshuffle leaves the concentrated bidegree; comultiplication descent \
                 is only supported when every tuple factor is concentrated"
                    .into(),
            ));
        }
        for (a, av) in &fvec {
            for (b, bv) in &bvec {
                let v = pair.at(*a, *b) + coeff * av * bv;
                pair.set(*a, *b, v);
            }
        }
    }
    // coordinates in wedge bases on both sides via pivot read-off
    let sp = wp.basis(p as i64).expect("nonzero piece");
    let sq = wq.basis(q as i64).expect("nonzero piece");
    for (ai, &pa) in sp.pivots().iter().enumerate() {
        for (bi, &pb) in sq.pivots().iter().enumerate() {
            out.set(ai, bi, pair.at(pa, pb).clone());
        }
    }
    // verify the read-off reproduces the pair matrix exactly
    let check = sp.basis().mul(&out)?.mul(&sq.basis().transpose())?;
    if check != pair {
        return Err(Error::InvalidDgla(
            "unshuffle image is not contained in the wedge tensor square".into(),
        ));
    }
    Ok(out)
}

/// Comultiplication h⁰(J^r(L)) → h⁰(J^r(L)) ⊗ h⁰(J^r(L)).
pub fn comultiplication(j: &JacobiComplex) -> Result<Comultiplication> {
    let h0 = j.h0();
    let h = h0.dim();
    let t = j.tot.dim(0);
    let proj = ClassProjector::new(&h0);
    // well-definedness: boundaries must map into B ⊗ T + T ⊗ B
    let mut vectors: Vec<(Vec<Rational>, bool)> = Vec::new();
    for k in 0..h0.boundaries.dim() {
        vectors.push((h0.boundaries.basis().column(k), true));
    }
    for k in 0..h {
        vectors.push((h0.reps.column(k), false));
    }
    let mut tensor_matrix = Matrix::zero(h * h, h);
    let mut rep_idx = 0;
    for (z, is_boundary) in vectors {
        // assemble Δ(z) in T⁰ ⊗ T⁰ coordinates
        let mut delta = Matrix::zero(t, t);
        for p in 1..j.r {
            for q in 1..=(j.r - p) {
                let block = unshuffle_pair(j, &z, p, q)?;
                if block.is_zero() {
                    continue;
                }
                let sp = j
                    .tot
                    .segments_at(0)
                    .iter()
                    .find(|s| s.column == p)
                    .cloned();
                let sq = j
                    .tot
                    .segments_at(0)
                    .iter()
                    .find(|s| s.column == q)
                    .cloned();
                let (Some(sp), Some(sq)) = (sp, sq) else {
                    continue;
                };
                for a in 0..block.rows() {
                    for bq in 0..block.cols() {
                        let v = delta.at(sp.offset + a, sq.offset + bq) + block.at(a, bq);
                        delta.set(sp.offset + a, sq.offset + bq, v);
                    }
                }
            }
        }
        // descend: project both sides to class coordinates
        let mut classes = Matrix::zero(h, h);
        // project columns first
        let mut cols = Vec::with_capacity(t);
        for c in 0..t {
            let col: Vec<Rational> = (0..t).map(|r| delta.at(r, c).clone()).collect();
            let pc = proj.project(&col).ok_or_else(|| {
                Error::InvalidDgla("comultiplication image is not a cocycle columnwise".into())
            })?;
            cols.push(pc);
        }
        for i in 0..h {
            let row: Vec<Rational> = (0..t).map(|c| cols[c][i].clone()).collect();
            let pr = proj.project(&row).ok_or_else(|| {
                Error::InvalidDgla("comultiplication image is not a cocycle rowwise".into())
            })?;
            for (jj, v) in pr.into_iter().enumerate() {
                classes.set(i, jj, v);
            }
        }
        if is_boundary {
            if !classes.is_zero() {
                return Err(Error::InvalidDgla(
                    "comultiplication does not descend to cohomology".into(),
                ));
            }
        } else {
            for a in 0..h {
                for b in 0..h {
                    tensor_matrix.set(a * h + b, rep_idx, classes.at(a, b).clone());
                }
            }
            rep_idx += 1;
        }
    }
    Ok(Comultiplication { h0, tensor_matrix })
}

/// Coaction of h⁰(J^r(L)) on h⁰(J^r(L, M)).
#[derive(Clone, Debug)]
pub struct ModuleComultiplication {
    pub base_h0: H0,
    pub module_h0: H0,
    /// Matrix from h⁰(J(L,M)) to h⁰(J(L)) ⊗ h⁰(J(L,M)): rows are
    /// row-major (base index, module index).
    pub tensor_matrix: Matrix,
}

impl ModuleComultiplication {
    pub fn coefficient(&self, base: usize, module: usize, k: usize) -> &Rational {
        let hm = self.module_h0.dim();
        self.tensor_matrix.at(base * hm + module, k)
    }

    /// Coaction axiom against the base comultiplication:
    /// (Δ ⊗ id) ∘ ρ = (id ⊗ ρ) ∘ ρ.
    pub fn is_coassociative_with(&self, base: &Comultiplication) -> bool {
        let hb = self.base_h0.dim();
        let hm = self.module_h0.dim();
        let rho = &self.tensor_matrix;
        let d = &base.tensor_matrix;
        for k in 0..hm {
            for a in 0..hb {
                for b in 0..hb {
                    for c in 0..hm {
                        let mut lhs = rat_zero();
                        let mut rhs = rat_zero();
                        for m in 0..hb {
                            lhs += d.at(a * hb + b, m) * rho.at(m * hm + c, k);
                        }
                        for m in 0..hm {
                            rhs += rho.at(b * hm + c, m) * rho.at(a * hm + m, k);
                        }
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Chain-level coaction: unshuffle the multiplicity-one column ∧^(p+q-1)L⊗M
/// into (∧^p L) ⊗ (∧^(q-1) L ⊗ M), keeping the part with all M-content on
/// the right.
fn module_unshuffle_pair(
    base: &JacobiComplex,
    module: &ModuleJacobiComplex,
    z: &[Rational],
    p: usize,
    q: usize,
) -> Result<Matrix> {
    let wp = base.wedge(p);
    let colq = module.column(q - 1);
    let hp = wp.dim(p as i64);
    let hq = colq
        .selected
        .get(&(q as i64))
        .map_or(0, |sel| sel.len());
    let mut out = Matrix::zero(hp, hq);
    if hp == 0 || hq == 0 {
        return Ok(out);
    }
    let i = p + q; // augmented column index of the source
    let Some(seg) = module
        .tot
        .segments_at(0)
        .iter()
        .find(|s| s.column == i)
        .cloned()
    else {
        return Ok(out);
    };
    let src_col = module.column(i - 1);
    let coords: Vec<Rational> = z[seg.offset..seg.offset + seg.dim].to_vec();
    let ambient = src_col.include(0 + i as i64, &coords);
    let tuples = src_col.wedge.ambient().basis().tuples(i as i64);
    let amb_p = wp.ambient();
    let amb_q = colq.wedge.ambient();
    let dim_p = amb_p.dim(p as i64);
    let dim_q = amb_q.dim(q as i64);
    let mut pair = Matrix::zero(dim_p, dim_q);
    let layout = &module.layout;
    for (pos, coeff) in ambient.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let t = &tuples[pos];
        let front = &t[..p];
        let back = &t[p..];
        // keep only the L ⊗ (L-and-M) split
        if front.iter().any(|&(d, idx)| layout.is_m(d, idx)) {
            continue;
        }
        // relabel the front into pure-L coordinates
        let front_l: Vec<(i64, usize)> = front
            .iter()
            .map(|&(d, idx)| (d, layout.to_l(d, idx).expect("front is L")))
            .collect();
        let Some((fdeg, fvec)) = project_segment(amb_p, &front_l)? else {
            continue;
        };
        let Some((bdeg, bvec)) = project_segment(amb_q, back)? else {
            continue;
        };
        if fdeg != p as i64 || bdeg != q as i64 {
            return Err(Error::InvalidDgla(
                "module unshuffle leaves the concentrated bidegree".into(),
            ));
        }
        for (a, av) in &fvec {
            for (b, bv) in &bvec {
                let v = pair.at(*a, *b) + coeff * av * bv;
                pair.set(*a, *b, v);
            }
        }
    }
    let sp = wp.basis(p as i64).expect("nonzero piece");
    // coordinates on the module side: through the full wedge basis, then slice
    let sq_full = colq.wedge.basis(q as i64).expect("nonzero piece");
    let sel = &colq.selected[&(q as i64)];
    let mut full = Matrix::zero(sp.pivots().len(), sq_full.pivots().len());
    for (ai, &pa) in sp.pivots().iter().enumerate() {
        for (bi, &pb) in sq_full.pivots().iter().enumerate() {
            full.set(ai, bi, pair.at(pa, pb).clone());
        }
    }
    let check = sp.basis().mul(&full)?.mul(&sq_full.basis().transpose())?;
    if check != pair {
        return Err(Error::InvalidDgla(
            "module unshuffle image not contained in the expected square".into(),
        ));
    }
    for (bi, &s) in sel.iter().enumerate() {
        for ai in 0..full.rows() {
            out.set(ai, bi, full.at(ai, s).clone());
        }
    }
    // entries off the slice must vanish
    for b in 0..full.cols() {
        if sel.contains(&b) {
            continue;
        }
        for a in 0..full.rows() {
            if !full.at(a, b).is_zero() {
                return Err(Error::InvalidDgla(
                    "module unshuffle does not preserve M-multiplicity".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Module comultiplication h⁰(J^r(L,M)) → h⁰(J^r(L)) ⊗ h⁰(J^r(L,M)).
///
/// `base` must be J^r(L) for the same DGLA.
pub fn module_comultiplication(
    base: &JacobiComplex,
    module: &ModuleJacobiComplex,
) -> Result<ModuleComultiplication> {
    let base_h0 = base.h0();
    let module_h0 = module.h0();
    let hb = base_h0.dim();
    let hm = module_h0.dim();
    let tm = module.tot.dim(0);
    let proj_b = ClassProjector::new(&base_h0);
    let proj_m = ClassProjector::new(&module_h0);
    let mut vectors: Vec<(Vec<Rational>, bool)> = Vec::new();
    for k in 0..module_h0.boundaries.dim() {
        vectors.push((module_h0.boundaries.basis().column(k), true));
    }
    for k in 0..hm {
        vectors.push((module_h0.reps.column(k), false));
    }
    let mut tensor_matrix = Matrix::zero(hb * hm, hm);
    let mut rep_idx = 0;
    for (z, is_boundary) in vectors {
        let tb = base.tot.dim(0);
        let mut delta = Matrix::zero(tb, tm);
        for p in 1..=base.r {
            for q in 1..=module.r {
                if p + q > module.r + 1 {
                    continue;
                }
                let block = module_unshuffle_pair(base, module, &z, p, q)?;
                if block.is_zero() {
                    continue;
                }
                let sp = base
                    .tot
                    .segments_at(0)
                    .iter()
                    .find(|s| s.column == p)
                    .cloned();
                let sq = module
                    .tot
                    .segments_at(0)
                    .iter()
                    .find(|s| s.column == q)
                    .cloned();
                let (Some(sp), Some(sq)) = (sp, sq) else {
                    continue;
                };
                for a in 0..block.rows() {
                    for b in 0..block.cols() {
                        let v = delta.at(sp.offset + a, sq.offset + b) + block.at(a, b);
                        delta.set(sp.offset + a, sq.offset + b, v);
                    }
                }
            }
        }
        let mut classes = Matrix::zero(hb, hm);
        let mut cols = Vec::with_capacity(tm);
        for c in 0..tm {
            let col: Vec<Rational> = (0..tb).map(|r| delta.at(r, c).clone()).collect();
            let pc = proj_b.project(&col).ok_or_else(|| {
                Error::InvalidDgla("module coaction image not a cocycle on the base side".into())
            })?;
            cols.push(pc);
        }
        for i in 0..hb {
            let row: Vec<Rational> = (0..tm).map(|c| cols[c][i].clone()).collect();
            let pr = proj_m.project(&row).ok_or_else(|| {
                Error::InvalidDgla("module coaction image not a cocycle on the module side".into())
            })?;
            for (jj, v) in pr.into_iter().enumerate() {
                classes.set(i, jj, v);
            }
        }
        if is_boundary {
            if !classes.is_zero() {
                return Err(Error::InvalidDgla(
                    "module coaction does not descend to cohomology".into(),
                ));
            }
        } else {
            for a in 0..hb {
                for b in 0..hm {
                    tensor_matrix.set(a * hm + b, rep_idx, classes.at(a, b).clone());
                }
            }
            rep_idx += 1;
        }
    }
    Ok(ModuleComultiplication {
        base_h0,
        module_h0,
        tensor_matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::contractible;

    /// Two-dimensional Lie algebra in degree 0 with [x, y] = x.
    fn solvable_2dim() -> Dgla {
        let l = Complex::concentrated(0, 2);
        // ∧² basis is x⊗y - y⊗x; bracket sends it to x
        let mut br = Matrix::zero(2, 1);
        br.set(0, 0, rat_one());
        let mut comps = BTreeMap::new();
        comps.insert(0, br);
        Dgla::new(l, ComplexMap::new(comps)).expect("valid Lie algebra")
    }

    #[test]
    fn two_dim_lie_algebra_accepted_and_ce2_is_bracket() {
        let g = solvable_2dim();
        let ce2 = ce_map(2, &g).unwrap();
        let m = ce2.component(0, g.wedge2().complex(), g.complex());
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 1);
        assert_eq!(*m.at(0, 0), rat_one());
        assert_eq!(*m.at(1, 0), rat_zero());
    }

    #[test]
    fn abelian_brackets_give_zero_ce() {
        let l = Complex::concentrated(0, 3);
        let g = Dgla::abelian(l).unwrap();
        for i in 2..=3 {
            let ce = ce_map(i, &g).unwrap();
            assert!(ce.components().is_empty(), "ce_{i} nonzero for abelian");
        }
    }

    #[test]
    fn non_lie_structure_constants_rejected() {
        // [x,y] = z, [x,z] = z, [y,z] = x violates the Jacobi identity
        let l = Complex::concentrated(0, 3);
        let w2 = alt_power(2, &l, 8).unwrap();
        assert_eq!(w2.dim(0), 3);
        // canonical ∧² basis order: x⊗y - y⊗x, x⊗z - z⊗x, y⊗z - z⊗y
        let mut br = Matrix::zero(3, 3);
        br.set(2, 0, rat_one()); // [x,y] = z
        br.set(2, 1, rat_one()); // [x,z] = z
        br.set(0, 2, rat_one()); // [y,z] = x
        let mut comps = BTreeMap::new();
        comps.insert(0, br);
        let err = Dgla::new(l, ComplexMap::new(comps));
        assert!(err.is_err(), "non-Lie bracket must be rejected");
    }

    #[test]
    fn so3_accepted() {
        // [x,y] = z, [y,z] = x, [z,x] = y is a Lie algebra
        let l = Complex::concentrated(0, 3);
        let mut br = Matrix::zero(3, 3);
        br.set(2, 0, rat_one()); // [x,y] = z
        br.set(1, 1, -rat_one()); // [x,z] = -y
        br.set(0, 2, rat_one()); // [y,z] = x
        let mut comps = BTreeMap::new();
        comps.insert(0, br);
        assert!(Dgla::new(l, ComplexMap::new(comps)).is_ok());
    }

    #[test]
    fn jacobi_of_single_column_is_shift() {
        let g = solvable_2dim();
        let j = jacobi(1, &g).unwrap();
        assert_eq!(j.total().dim(-1), 2);
        assert_eq!(j.total().degrees(), vec![-1]);
    }

    #[test]
    fn jacobi_of_abelian_line() {
        // one-dimensional abelian L in degree 0: ∧^i of a line vanishes
        // for i ≥ 2, so J^r is just L in column one
        let g = Dgla::abelian(Complex::concentrated(0, 1)).unwrap();
        let j = jacobi(3, &g).unwrap();
        assert_eq!(j.total().total_dim(), 1);
    }

    #[test]
    fn jacobi_of_contractible_is_acyclic() {
        let g = Dgla::abelian(contractible(0, 1)).unwrap();
        for r in 1..=3 {
            let j = jacobi(r, &g).unwrap();
            assert!(
                j.total().cohomology_dims().is_empty(),
                "J^{r} of a contractible DGLA has cohomology"
            );
        }
    }

    #[test]
    fn h0_of_injective_two_term() {
        // L = (Q -> Q²), injective in degree 0 to 1: h⁰(J^1) has dim 1
        let mut d = Matrix::zero(2, 1);
        d.set(0, 0, rat_one());
        let l = Complex::two_term(0, d).unwrap();
        let g = Dgla::abelian(l).unwrap();
        let j = jacobi(1, &g).unwrap();
        let h = j.h0();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.filtration_dims, vec![1]);
    }

    #[test]
    fn stupid_filtration_graded_pieces() {
        // graded piece i of Tot J^r in total degree k is (∧^i L)_(k+i)
        let mut d = Matrix::zero(2, 1);
        d.set(0, 0, rat_one());
        let l = Complex::two_term(0, d).unwrap();
        let g = Dgla::abelian(l).unwrap();
        let r = 3;
        let j = jacobi(r, &g).unwrap();
        for (&deg, segs) in &j.tot.segments {
            for s in segs {
                assert_eq!(s.internal_degree - s.column as i64, deg);
                assert_eq!(j.wedge(s.column).dim(s.internal_degree), s.dim);
            }
        }
    }

    #[test]
    fn comultiplication_r1_is_zero() {
        let g = solvable_2dim();
        let j = jacobi(1, &g).unwrap();
        let c = comultiplication(&j).unwrap();
        assert!(c.tensor_matrix.is_zero());
    }

    #[test]
    fn empty_module_gives_empty_jacobi() {
        let g = solvable_2dim();
        let m = DglaModule::trivial(&g, Complex::empty()).unwrap();
        let j = jacobi_module(2, &g, &m).unwrap();
        assert_eq!(j.total().total_dim(), 0);
    }

    #[test]
    fn trivial_dgla_module_jacobi_is_the_module() {
        // L = 0: J^r(L, M) = M in its column
        let g = Dgla::abelian(Complex::empty()).unwrap();
        let m = DglaModule::trivial(&g, Complex::concentrated(1, 2)).unwrap();
        let j = jacobi_module(2, &g, &m).unwrap();
        assert_eq!(j.total().total_dim(), 2);
        assert_eq!(j.total().dim(0), 2);
    }

    #[test]
    fn augment_zero_module_keeps_bracket_support() {
        let g = solvable_2dim();
        let m = DglaModule::trivial(&g, Complex::concentrated(1, 1)).unwrap();
        let (aug, layout) = augment(&g, &m).unwrap();
        assert_eq!(aug.complex().dim(0), 2);
        assert_eq!(aug.complex().dim(1), 1);
        assert!(layout.is_m(1, 0));
        // bracket supported on ∧²L only: the action part must vanish
        let w2 = aug.wedge2();
        for (&deg, _) in w2.bases() {
            let br = aug.bracket().component(deg, w2.complex(), aug.complex());
            if deg == 0 {
                assert!(!br.is_zero());
            } else {
                assert!(br.is_zero(), "trivial action leaked into the bracket");
            }
        }
    }
}

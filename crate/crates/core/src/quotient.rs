//! Concrete free linear group actions with a base point.
//!
//! An action instance carries a Lie algebra g acting linearly on V with a
//! chosen base point s. The first-order data of the action map, pulled
//! back to truncated polynomial functions, gives a multiplicative
//! comorphism whose kernel is the algebra of truncated invariant
//! functions. The same data builds the two-term DGLA g → V, and `compare`
//! verifies that the invariant kernel and the dual of degree-zero Jacobi
//! cohomology agree as filtered algebras, exactly, multiplication tables
//! included.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::complex::Complex;
use crate::dgla::{
    bracket_from_pairing, comultiplication, jacobi, jacobi_module, module_comultiplication,
    Comultiplication, Dgla, DglaModule, JacobiComplex, ModuleComultiplication,
    ModuleJacobiComplex, H0,
};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Subspace};
use crate::rational::{rat, rat_one, rat_zero, ratio, Rational};
use crate::tensor::Tuple;

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// Exponent vectors of total degree ≤ r in `vars` variables, in graded
/// lexicographic order.
pub fn monomials_up_to(vars: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for d in 0..=r {
        let mut level = Vec::new();
        enumerate_degree(vars, d, &mut Vec::new(), &mut level);
        level.sort();
        out.extend(level);
    }
    out
}

fn enumerate_degree(vars: usize, d: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if vars == 0 {
        if d == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if prefix.len() + 1 == prefix.capacity().max(prefix.len() + 1) { /* noop */ }
    for e in 0..=d {
        prefix.push(e);
        enumerate_degree(vars - 1, d - e, prefix, out);
        prefix.pop();
    }
}

fn degree(mono: &[usize]) -> usize {
    mono.iter().sum()
}

/// The truncated polynomial algebra on monomials of degree ≤ r.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    pub vars: usize,
    pub r: usize,
    pub monomials: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl TruncatedAlgebra {
    pub fn new(vars: usize, r: usize) -> Self {
        let monomials = monomials_up_to(vars, r);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        TruncatedAlgebra {
            vars,
            r,
            monomials,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn position(&self, mono: &[usize]) -> Option<usize> {
        self.index.get(mono).copied()
    }

    /// Product of two coefficient vectors, truncated beyond degree r.
    pub fn product(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![rat_zero(); self.dim()];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let mono: Vec<usize> = self.monomials[i]
                    .iter()
                    .zip(&self.monomials[j])
                    .map(|(x, y)| x + y)
                    .collect();
                if degree(&mono) > self.r {
                    continue;
                }
                let k = self.position(&mono).expect("product monomial present");
                out[k] += ca * cb;
            }
        }
        out
    }

    pub fn unit(&self) -> Vec<Rational> {
        let mut out = vec![rat_zero(); self.dim()];
        let pos = self.position(&vec![0; self.vars]).expect("unit monomial");
        out[pos] = rat_one();
        out
    }

    /// Coordinate subspace of monomials with degree ≥ d.
    pub fn high_degree_subspace(&self, d: usize) -> Subspace {
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&i| degree(&self.monomials[i]) >= d)
            .collect();
        let mut m = Matrix::zero(self.dim(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            m.set(c, j, rat_one());
        }
        Subspace::from_spanning(self.dim(), &m)
    }
}

// ---------------------------------------------------------------------------
// Action instances
// ---------------------------------------------------------------------------

/// A Lie algebra acting linearly on a vector space, with a base point.
///
/// `rho[j]` is the action of the j-th Lie algebra basis vector on V, and
/// the orbit map tangent is `a(ξ) = ρ(ξ) s`. Construction verifies the
/// Lie action law ρ([ξ,η]) = ρ(ξ)ρ(η) − ρ(η)ρ(ξ) exactly and requires the
/// orbit tangent to be injective.
#[derive(Clone, Debug)]
pub struct ActionInstance {
    pub name: String,
    pub g_dim: usize,
    pub v_dim: usize,
    /// structure_constants[i][j] = coefficients of [ξ_i, ξ_j] in the basis.
    pub structure_constants: Vec<Vec<Vec<Rational>>>,
    pub rho: Vec<Matrix>,
    pub base_point: Vec<Rational>,
}

impl ActionInstance {
    pub fn new(
        name: impl Into<String>,
        structure_constants: Vec<Vec<Vec<Rational>>>,
        rho: Vec<Matrix>,
        base_point: Vec<Rational>,
    ) -> Result<Self> {
        let g_dim = rho.len();
        if g_dim == 0 {
            return Err(Error::InvalidInstance("empty Lie algebra".into()));
        }
        let v_dim = base_point.len();
        for (j, m) in rho.iter().enumerate() {
            if m.rows() != v_dim || m.cols() != v_dim {
                return Err(Error::InvalidInstance(format!(
                    "rho[{j}] is {}x{}, expected {v_dim}x{v_dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if structure_constants.len() != g_dim
            || structure_constants
                .iter()
                .any(|row| row.len() != g_dim || row.iter().any(|v| v.len() != g_dim))
        {
            return Err(Error::InvalidInstance(
                "structure constants must be a g x g x g array".into(),
            ));
        }
        // antisymmetry
        for i in 0..g_dim {
            for j in 0..g_dim {
                for k in 0..g_dim {
                    let lhs = &structure_constants[i][j][k];
                    let rhs = -structure_constants[j][i][k].clone();
                    if *lhs != rhs {
                        return Err(Error::InvalidInstance(
                            "structure constants are not antisymmetric".into(),
                        ));
                    }
                }
            }
        }
        let inst = ActionInstance {
            name: name.into(),
            g_dim,
            v_dim,
            structure_constants,
            rho,
            base_point,
        };
        // Lie action law: ρ([ξi, ξj]) = ρ(ξi)ρ(ξj) − ρ(ξj)ρ(ξi)
        for i in 0..g_dim {
            for j in 0..g_dim {
                let mut lhs = Matrix::zero(v_dim, v_dim);
                for k in 0..g_dim {
                    let c = &inst.structure_constants[i][j][k];
                    if !c.is_zero() {
                        lhs = lhs.add(&inst.rho[k].scale(c))?;
                    }
                }
                let rhs = inst.rho[i]
                    .mul(&inst.rho[j])?
                    .sub(&inst.rho[j].mul(&inst.rho[i])?)?;
                if lhs != rhs {
                    return Err(Error::InvalidInstance(format!(
                        "rho is not a Lie algebra action: fails on ξ_{i}, ξ_{j}"
                    )));
                }
            }
        }
        // the orbit tangent must be injective for the quotient comparison
        if inst.orbit_tangent().rank() != g_dim {
            return Err(Error::InvalidInstance(
                "orbit tangent g → V is not injective at the base point; \
                 the free-action hypothesis fails"
                    .into(),
            ));
        }
        Ok(inst)
    }

    /// a: g → V, ξ ↦ ρ(ξ) s, as a v×g matrix.
    pub fn orbit_tangent(&self) -> Matrix {
        let mut a = Matrix::zero(self.v_dim, self.g_dim);
        for (j, m) in self.rho.iter().enumerate() {
            let col = m.apply(&self.base_point).expect("dims");
            for (r, v) in col.into_iter().enumerate() {
                a.set(r, j, v);
            }
        }
        a
    }

    /// The two-term DGLA g → V with g in degree 0 and V in degree 1;
    /// bracket: the Lie bracket on ∧²g, the action on g ∧ V, zero on the
    /// even square of V.
    pub fn dgla(&self) -> Result<Dgla> {
        let mut pieces = BTreeMap::new();
        pieces.insert(0, self.g_dim);
        pieces.insert(1, self.v_dim);
        let mut diffs = BTreeMap::new();
        diffs.insert(0, self.orbit_tangent());
        let complex = Complex::new(pieces, diffs)?;
        let half = ratio(1, 2);
        let sc = &self.structure_constants;
        let rho = &self.rho;
        let pairing = |a: (i64, usize), b: (i64, usize)| -> Vec<(i64, usize, Rational)> {
            match (a.0, b.0) {
                (0, 0) => (0..sc[a.1][b.1].len())
                    .filter(|&k| !sc[a.1][b.1][k].is_zero())
                    .map(|k| (0i64, k, &sc[a.1][b.1][k] * &half))
                    .collect(),
                (0, 1) => (0..rho[a.1].rows())
                    .filter(|&r| !rho[a.1].at(r, b.1).is_zero())
                    .map(|r| (1i64, r, rho[a.1].at(r, b.1) * &half))
                    .collect(),
                (1, 0) => (0..rho[b.1].rows())
                    .filter(|&r| !rho[b.1].at(r, a.1).is_zero())
                    .map(|r| (1i64, r, -(rho[b.1].at(r, a.1) * &half)))
                    .collect(),
                _ => Vec::new(),
            }
        };
        let bracket = bracket_from_pairing(&complex, pairing)?;
        Dgla::new(complex, bracket)
    }
}

/// C* scaling on C^(n+1); the quotient is P^n.
pub fn scaling_instance(n: usize) -> ActionInstance {
    let v = n + 1;
    let mut s = vec![rat_zero(); v];
    s[0] = rat_one();
    ActionInstance::new(
        format!("cstar-scaling-n{n}"),
        vec![vec![vec![rat_zero()]]],
        vec![Matrix::identity(v)],
        s,
    )
    .expect("scaling instance is valid")
}

/// (C*)² acting diagonally on C² ⊕ C²; the quotient is P¹ × P¹.
pub fn torus_p1xp1_instance() -> ActionInstance {
    let zero = rat_zero();
    let sc = vec![
        vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), zero.clone()]],
        vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), zero.clone()]],
    ];
    let mut rho1 = Matrix::zero(4, 4);
    rho1.set(0, 0, rat_one());
    rho1.set(1, 1, rat_one());
    let mut rho2 = Matrix::zero(4, 4);
    rho2.set(2, 2, rat_one());
    rho2.set(3, 3, rat_one());
    let s = vec![rat_one(), rat_zero(), rat_one(), rat_zero()];
    ActionInstance::new("torus-p1xp1", sc, vec![rho1, rho2], s).expect("torus instance is valid")
}

// ---------------------------------------------------------------------------
// The comorphism and the invariant kernel
// ---------------------------------------------------------------------------

/// The γ part of the comorphism on one monomial: the Leibniz sum over the
/// variables, with γ(x_u)(ξ_j) the affine function w ↦ x_u(ρ(ξ_j)(s + w)).
/// Returns coefficients on pairs (j, monomial), truncated to degree ≤ cap.
fn gamma_of_monomial(
    inst: &ActionInstance,
    algebra: &TruncatedAlgebra,
    cap: usize,
    mono: &[usize],
) -> Vec<(usize, usize, Rational)> {
    let mut out: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for u in 0..inst.v_dim {
        if mono[u] == 0 {
            continue;
        }
        let mult = rat(mono[u] as i64);
        let mut rest = mono.to_vec();
        rest[u] -= 1;
        for j in 0..inst.g_dim {
            // constant part: (ρ_j s)_u
            let aj = inst.rho[j].apply(&inst.base_point).expect("dims");
            if !aj[u].is_zero() && degree(&rest) <= cap {
                let pos = algebra.position(&rest).expect("monomial present");
                *out.entry((j, pos)).or_insert_with(rat_zero) += &mult * &aj[u];
            }
            // linear part: Σ_w ρ_j[u, w] x_w
            for w in 0..inst.v_dim {
                let c = inst.rho[j].at(u, w);
                if c.is_zero() {
                    continue;
                }
                let mut m2 = rest.clone();
                m2[w] += 1;
                if degree(&m2) > cap {
                    continue;
                }
                let pos = algebra.position(&m2).expect("monomial present");
                *out.entry((j, pos)).or_insert_with(rat_zero) += &mult * c;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out.into_iter().map(|((j, p), c)| (j, p, c)).collect()
}

/// The multiplicative comorphism of the first-order action data: from
/// functions of degree ≤ r+1 to (functions of degree ≤ r) ⊕ g* ⊗
/// (functions of degree ≤ r). Block layout: plain part first, then one
/// g*-block per Lie algebra basis vector.
pub fn comorphism_f(inst: &ActionInstance, r: usize) -> Matrix {
    let source = TruncatedAlgebra::new(inst.v_dim, r + 1);
    let target = TruncatedAlgebra::new(inst.v_dim, r);
    let t = target.dim();
    let mut m = Matrix::zero(t * (1 + inst.g_dim), source.dim());
    for (col, mono) in source.monomials.iter().enumerate() {
        if degree(mono) <= r {
            let pos = target.position(mono).expect("low monomial present");
            m.set(pos, col, rat_one());
        }
        for (j, p, c) in gamma_of_monomial(inst, &target, r, mono) {
            m.set(t * (1 + j) + p, col, c);
        }
    }
    m
}

/// The difference of the action and projection comorphisms at order r:
/// from functions of degree ≤ r into g* ⊗ (functions of degree ≤ r−1).
pub fn action_minus_projection(inst: &ActionInstance, r: usize) -> Matrix {
    let source = TruncatedAlgebra::new(inst.v_dim, r);
    if r == 0 {
        return Matrix::zero(0, source.dim());
    }
    let target = TruncatedAlgebra::new(inst.v_dim, r - 1);
    let t = target.dim();
    let mut m = Matrix::zero(t * inst.g_dim, source.dim());
    for (col, mono) in source.monomials.iter().enumerate() {
        for (j, p, c) in gamma_of_monomial(inst, &target, r - 1, mono) {
            m.set(t * j + p, col, c);
        }
    }
    m
}

/// The algebra of truncated invariant functions: the kernel of
/// `action_minus_projection`, with its adic filtration and truncated
/// multiplication.
#[derive(Clone, Debug)]
pub struct KernelAlgebra {
    pub algebra: TruncatedAlgebra,
    pub basis: Subspace,
    /// Graded dimensions by vanishing order, levels 0..=r.
    pub graded_dims: Vec<usize>,
}

impl KernelAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Coefficient vector of one basis element.
    pub fn basis_vector(&self, k: usize) -> Vec<Rational> {
        self.basis.basis().column(k)
    }

    /// Product of two kernel elements in kernel coordinates; None if the
    /// product escapes the kernel (it never should: invariants are a ring).
    pub fn multiply(&self, a: &[Rational], b: &[Rational]) -> Option<Vec<Rational>> {
        let av = self.basis.basis().apply(a).expect("dims");
        let bv = self.basis.basis().apply(b).expect("dims");
        let prod = self.algebra.product(&av, &bv);
        self.basis.coordinates(&prod)
    }
}

pub fn invariant_kernel(inst: &ActionInstance, r: usize) -> Result<KernelAlgebra> {
    let algebra = TruncatedAlgebra::new(inst.v_dim, r);
    let map = action_minus_projection(inst, r);
    let basis = if map.rows() == 0 {
        Subspace::full(algebra.dim())
    } else {
        map.kernel_basis()
    };
    // multiplicative closure: every pairwise product must stay inside
    for i in 0..basis.dim() {
        for j in i..basis.dim() {
            let a = basis.basis().column(i);
            let b = basis.basis().column(j);
            let prod = algebra.product(&a, &b);
            if basis.coordinates(&prod).is_none() {
                return Err(Error::InvalidInstance(format!(
                    "invariant kernel is not multiplicatively closed at basis pair ({i},{j})"
                )));
            }
        }
    }
    // adic filtration: intersect with monomials of vanishing order ≥ d
    let mut graded_dims = Vec::new();
    let mut dims_at: Vec<usize> = Vec::new();
    for d in 0..=r + 1 {
        let sub = algebra.high_degree_subspace(d);
        dims_at.push(basis.intersect(&sub).dim());
    }
    for d in 0..=r {
        graded_dims.push(dims_at[d] - dims_at[d + 1]);
    }
    Ok(KernelAlgebra {
        algebra,
        basis,
        graded_dims,
    })
}

// ---------------------------------------------------------------------------
// The filtered algebra on the Jacobi side
// ---------------------------------------------------------------------------

/// Dual pairing data: for each nonconstant monomial the corresponding
/// coefficient functional on total degree zero of the Jacobi complex.
struct MonomialPairing {
    /// functional_rows[m] is the coefficient functional of the m-th
    /// monomial (in the order of `algebra`, constants included with a
    /// zero row) as a row vector on Tot⁰.
    rows: Matrix,
}

fn sorted_tuple_of_monomial(mono: &[usize]) -> Tuple {
    let mut t = Vec::with_capacity(degree(mono));
    for (var, &e) in mono.iter().enumerate() {
        for _ in 0..e {
            t.push((1i64, var));
        }
    }
    t
}

fn monomial_pairing(j: &JacobiComplex, algebra: &TruncatedAlgebra) -> MonomialPairing {
    let t0 = j.tot.dim(0);
    let mut rows = Matrix::zero(algebra.dim(), t0);
    for seg in j.tot.segments_at(0) {
        let wedge = j.wedge(seg.column);
        let sub = wedge.basis(seg.internal_degree).expect("segment exists");
        let tensor = wedge.ambient();
        for b in 0..seg.dim {
            let ambient = sub.basis().column(b);
            for (m, mono) in algebra.monomials.iter().enumerate() {
                if degree(mono) != seg.column {
                    continue;
                }
                let tuple = sorted_tuple_of_monomial(mono);
                if let Some((tdeg, pos)) = tensor.basis().position(&tuple) {
                    debug_assert_eq!(tdeg, seg.internal_degree);
                    if !ambient[pos].is_zero() {
                        rows.set(m, seg.offset + b, ambient[pos].clone());
                    }
                }
            }
        }
    }
    MonomialPairing { rows }
}

/// The filtered algebra h⁰(J^r(L))* with an adjoined unit, together with
/// the data needed to compare it with the invariant kernel.
pub struct JacobiSide {
    pub jacobi: JacobiComplex,
    pub h0: H0,
    pub comultiplication: Comultiplication,
    /// Unit-adjoined graded dims: level 0 is the unit, level i ≥ 1 is the
    /// i-th graded piece of the column filtration on h⁰.
    pub graded_dims: Vec<usize>,
}

pub fn jacobi_side(inst: &ActionInstance, r: usize) -> Result<JacobiSide> {
    if inst.orbit_tangent().rank() != inst.g_dim {
        return Err(Error::InvalidInstance(
            "the orbit tangent g → V must be injective for the cohomology \
             comparison; the hypothesis of the quotient identification fails"
                .into(),
        ));
    }
    let g = inst.dgla()?;
    let j = jacobi(r, &g)?;
    let comult = comultiplication(&j)?;
    let h0 = j.h0();
    let mut graded_dims = vec![1];
    graded_dims.extend(h0.filtration_dims.iter().copied());
    Ok(JacobiSide {
        jacobi: j,
        h0,
        comultiplication: comult,
        graded_dims,
    })
}

// ---------------------------------------------------------------------------
// The comparison
// ---------------------------------------------------------------------------

/// Result of comparing the invariant kernel with the Jacobi-side algebra.
#[derive(Clone, Debug)]
pub struct FilteredAlgebraReport {
    pub instance: String,
    pub r: usize,
    pub pass: bool,
    pub kernel_graded_dims: Vec<usize>,
    pub jacobi_graded_dims: Vec<usize>,
    /// Comparison map on kernel basis vectors: rows are (unit, h⁰* coords).
    pub witness: Option<Matrix>,
    /// First failing identity, if any.
    pub failure: Option<String>,
}

impl FilteredAlgebraReport {
    fn fail(instance: &str, r: usize, kernel: Vec<usize>, jac: Vec<usize>, why: String) -> Self {
        FilteredAlgebraReport {
            instance: instance.into(),
            r,
            pass: false,
            kernel_graded_dims: kernel,
            jacobi_graded_dims: jac,
            witness: None,
            failure: Some(why),
        }
    }
}

/// Verify that the invariant kernel at order r and the unit-adjoined dual
/// of h⁰(J^r(L)) agree: graded dimensions, and multiplication tables under
/// the explicit coefficient pairing.
pub fn compare(inst: &ActionInstance, r: usize) -> Result<FilteredAlgebraReport> {
    let kernel = invariant_kernel(inst, r)?;
    if r == 0 {
        let pass = kernel.dim() == 1;
        return Ok(FilteredAlgebraReport {
            instance: inst.name.clone(),
            r,
            pass,
            kernel_graded_dims: kernel.graded_dims.clone(),
            jacobi_graded_dims: vec![1],
            witness: Some(Matrix::identity(1)),
            failure: (!pass).then(|| "order-zero invariants are not one-dimensional".into()),
        });
    }
    let side = jacobi_side(inst, r)?;
    let h = side.h0.dim();
    let kdims = kernel.graded_dims.clone();
    let jdims = side.graded_dims.clone();
    if kdims != jdims {
        return Ok(FilteredAlgebraReport::fail(
            &inst.name,
            r,
            kdims,
            jdims,
            format!(
                "graded dimensions disagree: kernel {:?} vs jacobi {:?}",
                kernel.graded_dims, side.graded_dims
            ),
        ));
    }
    let pairing = monomial_pairing(&side.jacobi, &kernel.algebra);
    let unit_pos = kernel
        .algebra
        .position(&vec![0; kernel.algebra.vars])
        .expect("unit monomial");

    // the comparison map: kernel basis -> (unit coefficient, h⁰* coords)
    let mut witness = Matrix::zero(1 + h, kernel.dim());
    for k in 0..kernel.dim() {
        let coeffs = kernel.basis_vector(k);
        witness.set(0, k, coeffs[unit_pos].clone());
        // functional on Tot⁰
        let functional = pairing.rows.transpose().apply(&coeffs).expect("dims");
        // must vanish on boundaries
        for b in 0..side.h0.boundaries.dim() {
            let bv = side.h0.boundaries.basis().column(b);
            let mut acc = rat_zero();
            for (x, y) in functional.iter().zip(&bv) {
                acc += x * y;
            }
            if !acc.is_zero() {
                return Ok(FilteredAlgebraReport::fail(
                    &inst.name,
                    r,
                    kdims,
                    jdims,
                    format!("kernel element {k} does not annihilate boundary {b}"),
                ));
            }
        }
        for i in 0..h {
            let rep = side.h0.reps.column(i);
            let mut acc = rat_zero();
            for (x, y) in functional.iter().zip(&rep) {
                acc += x * y;
            }
            witness.set(1 + i, k, acc);
        }
    }
    if witness.rank() != kernel.dim() || kernel.dim() != 1 + h {
        return Ok(FilteredAlgebraReport::fail(
            &inst.name,
            r,
            kdims,
            jdims,
            "comparison map is not an isomorphism".into(),
        ));
    }
    // filtration compatibility: a kernel element of vanishing order ≥ d
    // annihilates cocycles from columns < d
    for d in 1..=r {
        let high = kernel
            .basis
            .intersect(&kernel.algebra.high_degree_subspace(d));
        let low = side
            .jacobi
            .tot
            .column_prefix(0, d - 1)
            .intersect(&side.h0.cocycles);
        for k in 0..high.dim() {
            let coeffs = high.basis().column(k);
            let functional = pairing.rows.transpose().apply(&coeffs).expect("dims");
            for c in 0..low.dim() {
                let w = low.basis().column(c);
                let mut acc = rat_zero();
                for (x, y) in functional.iter().zip(&w) {
                    acc += x * y;
                }
                if !acc.is_zero() {
                    return Ok(FilteredAlgebraReport::fail(
                        &inst.name,
                        r,
                        kdims,
                        jdims,
                        format!("comparison map does not respect the filtration at level {d}"),
                    ));
                }
            }
        }
    }
    // multiplication tables: Φ(κ κ') = Φ(κ) Φ(κ') in the unit-adjoined
    // dual coalgebra
    let delta = &side.comultiplication.tensor_matrix;
    for s in 0..kernel.dim() {
        for t in s..kernel.dim() {
            let es: Vec<Rational> = (0..kernel.dim())
                .map(|i| if i == s { rat_one() } else { rat_zero() })
                .collect();
            let et: Vec<Rational> = (0..kernel.dim())
                .map(|i| if i == t { rat_one() } else { rat_zero() })
                .collect();
            let Some(prod) = kernel.multiply(&es, &et) else {
                return Ok(FilteredAlgebraReport::fail(
                    &inst.name,
                    r,
                    kdims,
                    jdims,
                    format!("kernel product ({s},{t}) escapes the kernel"),
                ));
            };
            let lhs = witness.apply(&prod).expect("dims");
            // rhs: product of images
            let a = witness.column(s);
            let b = witness.column(t);
            let mut rhs = vec![rat_zero(); 1 + h];
            rhs[0] = &a[0] * &b[0];
            for i in 0..h {
                rhs[1 + i] = &a[0] * &b[1 + i] + &b[0] * &a[1 + i];
            }
            for i in 0..h {
                for jj in 0..h {
                    let c = &a[1 + i] * &b[1 + jj];
                    if c.is_zero() {
                        continue;
                    }
                    for k in 0..h {
                        rhs[1 + k] += &c * delta.at(i * h + jj, k);
                    }
                }
            }
            if lhs != rhs {
                return Ok(FilteredAlgebraReport::fail(
                    &inst.name,
                    r,
                    kdims,
                    jdims,
                    format!("multiplications disagree on kernel basis pair ({s},{t})"),
                ));
            }
        }
    }
    Ok(FilteredAlgebraReport {
        instance: inst.name.clone(),
        r,
        pass: true,
        kernel_graded_dims: kdims,
        jacobi_graded_dims: jdims,
        witness: Some(witness),
        failure: None,
    })
}

// ---------------------------------------------------------------------------
// The module comparison
// ---------------------------------------------------------------------------

/// Extend an instance by the dual of a W-representation: the action on
/// V ⊕ W* with base point (s, 0).
pub fn extend_by_dual(inst: &ActionInstance, w_rho: &[Matrix]) -> Result<ActionInstance> {
    if w_rho.len() != inst.g_dim {
        return Err(Error::InvalidInstance(
            "w_rho must have one matrix per Lie algebra basis vector".into(),
        ));
    }
    let w = w_rho.first().map_or(0, |m| m.rows());
    let v = inst.v_dim;
    let mut rho = Vec::new();
    for (j, wr) in w_rho.iter().enumerate() {
        if wr.rows() != w || wr.cols() != w {
            return Err(Error::InvalidInstance(format!(
                "w_rho[{j}] is {}x{}, expected {w}x{w}",
                wr.rows(),
                wr.cols()
            )));
        }
        let mut m = Matrix::zero(v + w, v + w);
        for r in 0..v {
            for c in 0..v {
                m.set(r, c, inst.rho[j].at(r, c).clone());
            }
        }
        // dual action on W*: minus transpose
        for r in 0..w {
            for c in 0..w {
                m.set(v + r, v + c, -wr.at(c, r).clone());
            }
        }
        rho.push(m);
    }
    let mut s = inst.base_point.clone();
    s.extend(std::iter::repeat(rat_zero()).take(w));
    ActionInstance::new(
        format!("{}-extended", inst.name),
        inst.structure_constants.clone(),
        rho,
        s,
    )
}

/// The degree-one-in-W slice of the extended invariant kernel, regarded as
/// a module over the base invariants.
pub struct ModuleKernel {
    pub extended: TruncatedAlgebra,
    /// Basis of the slice inside the extended truncated algebra.
    pub basis: Subspace,
    /// Graded dims by V-degree, levels 0..=r.
    pub graded_dims: Vec<usize>,
}

fn w_degree(mono: &[usize], v: usize) -> usize {
    mono[v..].iter().sum()
}

fn v_degree(mono: &[usize], v: usize) -> usize {
    mono[..v].iter().sum()
}

pub fn module_kernel(inst: &ActionInstance, w_rho: &[Matrix], r: usize) -> Result<ModuleKernel> {
    let ext = extend_by_dual(inst, w_rho)?;
    let kernel = invariant_kernel(&ext, r + 1)?;
    let v = inst.v_dim;
    let algebra = kernel.algebra.clone();
    // coordinate subspace of W-degree-one monomials
    let cols: Vec<usize> = (0..algebra.dim())
        .filter(|&i| w_degree(&algebra.monomials[i], v) == 1)
        .collect();
    let mut span = Matrix::zero(algebra.dim(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        span.set(c, j, rat_one());
    }
    let slice = Subspace::from_spanning(algebra.dim(), &span);
    let basis = kernel.basis.intersect(&slice);
    // graded dims by V-degree
    let mut graded = Vec::new();
    for d in 0..=r {
        let cols: Vec<usize> = (0..algebra.dim())
            .filter(|&i| {
                w_degree(&algebra.monomials[i], v) == 1
                    && v_degree(&algebra.monomials[i], v) >= d
            })
            .collect();
        let mut m = Matrix::zero(algebra.dim(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            m.set(c, j, rat_one());
        }
        let sub = Subspace::from_spanning(algebra.dim(), &m);
        graded.push(basis.intersect(&sub).dim());
    }
    let mut graded_dims = Vec::new();
    for d in 0..=r {
        let next = if d + 1 <= r { graded[d + 1] } else { 0 };
        graded_dims.push(graded[d] - next);
    }
    Ok(ModuleKernel {
        extended: algebra,
        basis,
        graded_dims,
    })
}

/// Pairing of W-degree-one monomials with total degree zero of the module
/// Jacobi complex.
fn module_monomial_pairing(
    module: &ModuleJacobiComplex,
    algebra: &TruncatedAlgebra,
    v: usize,
) -> Matrix {
    let t0 = module.tot.dim(0);
    let mut rows = Matrix::zero(algebra.dim(), t0);
    for seg in module.tot.segments_at(0) {
        let col = module.column(seg.column - 1);
        for b in 0..seg.dim {
            let mut coords = vec![rat_zero(); seg.dim];
            coords[b] = rat_one();
            let ambient = col.include(seg.internal_degree, &coords);
            let tensor = col.wedge.ambient();
            for (m, mono) in algebra.monomials.iter().enumerate() {
                if w_degree(mono, v) != 1 || v_degree(mono, v) != seg.column - 1 {
                    continue;
                }
                // sorted tuple: V factors then the single W* factor
                let mut t: Tuple = Vec::new();
                for (var, &e) in mono[..v].iter().enumerate() {
                    for _ in 0..e {
                        t.push((1i64, var));
                    }
                }
                let wvar = mono[v..].iter().position(|&e| e == 1).expect("W-degree 1");
                t.push((1i64, module.layout.embed_m(1, wvar)));
                if let Some((tdeg, pos)) = tensor.basis().position(&t) {
                    debug_assert_eq!(tdeg, seg.internal_degree);
                    if !ambient[pos].is_zero() {
                        rows.set(m, seg.offset + b, ambient[pos].clone());
                    }
                }
            }
        }
    }
    rows
}

/// Compare the degree-one-in-W invariant slice with h⁰(J^r(L, W*)),
/// including the module structures.
pub fn module_compare(
    inst: &ActionInstance,
    w_rho: &[Matrix],
    r: usize,
) -> Result<FilteredAlgebraReport> {
    let name = format!("{}-module", inst.name);
    let w = w_rho.first().map_or(0, |m| m.rows());
    if w == 0 {
        // reduces to the plain comparison
        let mut rep = compare(inst, r)?;
        rep.instance = name;
        return Ok(rep);
    }
    let mk = module_kernel(inst, w_rho, r)?;
    let base_kernel = invariant_kernel(inst, r)?;
    let g = inst.dgla()?;
    // module: W* in degree 1 with the dual action
    let mcomplex = Complex::concentrated(1, w);
    let mut action = BTreeMap::new();
    let mut act0 = Matrix::zero(w, inst.g_dim * w);
    for j in 0..inst.g_dim {
        for k in 0..w {
            for l in 0..w {
                // ξ_j · m_k = -Σ_l w_rho[j][k,l] m_l
                act0.set(l, j * w + k, -w_rho[j].at(k, l).clone());
            }
        }
    }
    if !act0.is_zero() {
        action.insert((0i64, 1i64), act0);
    }
    let module = DglaModule::new(&g, mcomplex, action)?;
    let base = jacobi(r, &g)?;
    let jmod = jacobi_module(r, &g, &module)?;
    let base_comult = comultiplication(&base)?;
    let coaction = module_comultiplication(&base, &jmod)?;
    let hm = coaction.module_h0.dim();
    let hb = coaction.base_h0.dim();

    let kdims = mk.graded_dims.clone();
    let jdims: Vec<usize> = coaction.module_h0.filtration_dims.clone();
    if kdims != jdims {
        return Ok(FilteredAlgebraReport::fail(
            &name,
            r,
            kdims,
            jdims,
            "module graded dimensions disagree".into(),
        ));
    }

    // comparison map on the module side
    let pairing = module_monomial_pairing(&jmod, &mk.extended, inst.v_dim);
    let mut witness = Matrix::zero(hm, mk.basis.dim());
    for k in 0..mk.basis.dim() {
        let coeffs = mk.basis.basis().column(k);
        let functional = pairing.transpose().apply(&coeffs).expect("dims");
        for b in 0..coaction.module_h0.boundaries.dim() {
            let bv = coaction.module_h0.boundaries.basis().column(b);
            let mut acc = rat_zero();
            for (x, y) in functional.iter().zip(&bv) {
                acc += x * y;
            }
            if !acc.is_zero() {
                return Ok(FilteredAlgebraReport::fail(
                    &name,
                    r,
                    kdims,
                    jdims,
                    format!("module slice element {k} does not annihilate boundary {b}"),
                ));
            }
        }
        for i in 0..hm {
            let rep = coaction.module_h0.reps.column(i);
            let mut acc = rat_zero();
            for (x, y) in functional.iter().zip(&rep) {
                acc += x * y;
            }
            witness.set(i, k, acc);
        }
    }
    if witness.rank() != mk.basis.dim() || mk.basis.dim() != hm {
        return Ok(FilteredAlgebraReport::fail(
            &name,
            r,
            kdims,
            jdims,
            "module comparison map is not an isomorphism".into(),
        ));
    }

    // base comparison map (needed for the module-structure identity)
    let base_rep = compare(inst, r)?;
    if !base_rep.pass {
        return Ok(FilteredAlgebraReport::fail(
            &name,
            r,
            kdims,
            jdims,
            format!(
                "base comparison failed first: {}",
                base_rep.failure.unwrap_or_default()
            ),
        ));
    }
    let base_witness = base_rep.witness.expect("pass implies witness");

    // module structures coincide: multiplying a base invariant into the
    // slice matches the dual coaction
    let rho_m = &coaction.tensor_matrix;
    for s in 0..base_kernel.dim() {
        for t in 0..mk.basis.dim() {
            // product in the extended algebra, truncated at r+1
            let a_ext = embed_base_coeffs(&base_kernel, &mk.extended, inst.v_dim, s);
            let b_ext = mk.basis.basis().column(t);
            let prod = mk.extended.product(&a_ext, &b_ext);
            let Some(prod_coords) = mk.basis.coordinates(&prod) else {
                return Ok(FilteredAlgebraReport::fail(
                    &name,
                    r,
                    kdims,
                    jdims,
                    format!("module product ({s},{t}) escapes the slice"),
                ));
            };
            let lhs = witness.apply(&prod_coords).expect("dims");
            let a_img = base_witness.column(s); // (unit, h_b coords)
            let b_img = witness.column(t); // h_m coords
            let mut rhs = vec![rat_zero(); hm];
            for k in 0..hm {
                rhs[k] = &a_img[0] * &b_img[k];
            }
            for i in 0..hb {
                for jj in 0..hm {
                    let c = &a_img[1 + i] * &b_img[jj];
                    if c.is_zero() {
                        continue;
                    }
                    for k in 0..hm {
                        rhs[k] += &c * rho_m.at(i * hm + jj, k);
                    }
                }
            }
            if lhs != rhs {
                return Ok(FilteredAlgebraReport::fail(
                    &name,
                    r,
                    kdims,
                    jdims,
                    format!("module structures disagree on pair ({s},{t})"),
                ));
            }
        }
    }
    // the coaction axiom on the cohomology side
    if !coaction.is_coassociative_with(&base_comult) {
        return Ok(FilteredAlgebraReport::fail(
            &name,
            r,
            kdims,
            jdims,
            "coaction axiom fails on h⁰".into(),
        ));
    }
    Ok(FilteredAlgebraReport {
        instance: name,
        r,
        pass: true,
        kernel_graded_dims: kdims,
        jacobi_graded_dims: jdims,
        witness: Some(witness),
        failure: None,
    })
}

/// Embed a base-kernel basis vector (functions of V alone) into the
/// extended truncated algebra on V ⊕ W*.
fn embed_base_coeffs(
    base: &KernelAlgebra,
    extended: &TruncatedAlgebra,
    v: usize,
    k: usize,
) -> Vec<Rational> {
    let coeffs = base.basis_vector(k);
    let mut out = vec![rat_zero(); extended.dim()];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = &base.algebra.monomials[i];
        let mut ext_mono = mono.clone();
        ext_mono.extend(std::iter::repeat(0).take(extended.vars - v));
        let pos = extended.position(&ext_mono).expect("embedded monomial");
        out[pos] = c.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comorphism_on_the_scaling_plane() {
        // C* scaling on C², s = e0: f(x0) = x0 ⊕ ε⊗(1 + x0),
        // f(x1) = x1 ⊕ ε⊗x1, f(1) = 1 ⊕ 0
        let inst = scaling_instance(1);
        let r = 1;
        let f = comorphism_f(&inst, r);
        let source = TruncatedAlgebra::new(2, r + 1);
        let target = TruncatedAlgebra::new(2, r);
        let t = target.dim();
        let one = source.position(&vec![0, 0]).unwrap();
        let x0 = source.position(&vec![1, 0]).unwrap();
        let x1 = source.position(&vec![0, 1]).unwrap();
        // unit: plain part 1, no gamma part
        assert_eq!(*f.at(target.position(&vec![0, 0]).unwrap(), one), rat_one());
        for row in t..2 * t {
            assert!(f.at(row, one).is_zero());
        }
        // x0: plain x0; gamma = 1 + x0
        assert_eq!(*f.at(target.position(&vec![1, 0]).unwrap(), x0), rat_one());
        assert_eq!(*f.at(t + target.position(&vec![0, 0]).unwrap(), x0), rat_one());
        assert_eq!(*f.at(t + target.position(&vec![1, 0]).unwrap(), x0), rat_one());
        assert!(f.at(t + target.position(&vec![0, 1]).unwrap(), x0).is_zero());
        // x1: plain x1; gamma = x1
        assert_eq!(*f.at(t + target.position(&vec![0, 1]).unwrap(), x1), rat_one());
        assert!(f.at(t + target.position(&vec![0, 0]).unwrap(), x1).is_zero());
    }

    #[test]
    fn comorphism_multiplicative_on_monomials() {
        // f(m1 m2) = f(m1) f(m2) in the truncated target, with the
        // square-zero g* part
        let inst = scaling_instance(1);
        for r in 1..=2usize {
            let target = TruncatedAlgebra::new(2, r);
            let t = target.dim();
            let gamma = |mono: &[usize]| -> Vec<Vec<Rational>> {
                let mut per_g = vec![vec![rat_zero(); t]; inst.g_dim];
                for (j, p, c) in gamma_of_monomial(&inst, &target, r, mono) {
                    per_g[j][p] = c;
                }
                per_g
            };
            let plain = |mono: &[usize]| -> Vec<Rational> {
                let mut v = vec![rat_zero(); t];
                if degree(mono) <= r {
                    v[target.position(mono).unwrap()] = rat_one();
                }
                v
            };
            let monos = monomials_up_to(2, r);
            for m1 in &monos {
                for m2 in &monos {
                    if degree(m1) + degree(m2) > r {
                        continue;
                    }
                    let prod: Vec<usize> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                    let lhs = gamma(&prod);
                    // product rule: plain(m1)·gamma(m2) + plain(m2)·gamma(m1)
                    for j in 0..inst.g_dim {
                        let rhs_j: Vec<Rational> = {
                            let a = target.product(&plain(m1), &gamma(m2)[j]);
                            let b = target.product(&plain(m2), &gamma(m1)[j]);
                            a.iter().zip(&b).map(|(x, y)| x + y).collect()
                        };
                        assert_eq!(lhs[j], rhs_j, "Leibniz fails on {m1:?} * {m2:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn invariant_kernel_dims_scaling() {
        // r = 0: constants
        let inst = scaling_instance(1);
        assert_eq!(invariant_kernel(&inst, 0).unwrap().dim(), 1);
        // r = 1 on C²: {1, x1}
        let k = invariant_kernel(&inst, 1).unwrap();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.graded_dims, vec![1, 1]);
        // general: 1 + Σ C(n+i-1, i)
        use crate::rational::binomial;
        for n in 1..=2usize {
            let inst = scaling_instance(n);
            for r in 0..=3usize {
                let expect: usize = 1 + (1..=r).map(|i| binomial(n + i - 1, i)).sum::<usize>();
                let k = invariant_kernel(&inst, r).unwrap();
                assert_eq!(k.dim(), expect, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn invariant_kernel_r1_basis_content() {
        let inst = scaling_instance(1);
        let k = invariant_kernel(&inst, 1).unwrap();
        // contains 1 and x1 exactly
        let alg = &k.algebra;
        let mut unit = vec![rat_zero(); alg.dim()];
        unit[alg.position(&vec![0, 0]).unwrap()] = rat_one();
        assert!(k.basis.contains(&unit));
        let mut x1 = vec![rat_zero(); alg.dim()];
        x1[alg.position(&vec![0, 1]).unwrap()] = rat_one();
        assert!(k.basis.contains(&x1));
        let mut x0 = vec![rat_zero(); alg.dim()];
        x0[alg.position(&vec![1, 0]).unwrap()] = rat_one();
        assert!(!k.basis.contains(&x0));
    }

    #[test]
    fn invariant_kernel_contains_expanded_rational_invariants() {
        // x1/x0 expanded at s = e0 to second order: x1 - x0 x1 (+ higher)
        let inst = scaling_instance(1);
        let k = invariant_kernel(&inst, 2).unwrap();
        let alg = &k.algebra;
        let mut v = vec![rat_zero(); alg.dim()];
        v[alg.position(&vec![0, 1]).unwrap()] = rat_one();
        v[alg.position(&vec![1, 1]).unwrap()] = rat(-1);
        assert!(k.basis.contains(&v), "series of x1/x0 not invariant");
    }

    #[test]
    fn jacobi_side_dims() {
        // r=1 on C²: unit + one class, graded (1, 1)
        let side = jacobi_side(&scaling_instance(1), 1).unwrap();
        assert_eq!(side.graded_dims, vec![1, 1]);
        // contractible-like: g ≅ V has no orbit directions
        let full = ActionInstance::new(
            "full-orbit",
            vec![vec![vec![rat_zero()]]],
            vec![Matrix::identity(1)],
            vec![rat_one()],
        )
        .unwrap();
        let side = jacobi_side(&full, 2).unwrap();
        assert_eq!(side.graded_dims, vec![1, 0, 0]);
    }

    #[test]
    fn torus_kernel_dims() {
        let inst = torus_p1xp1_instance();
        let k = invariant_kernel(&inst, 2).unwrap();
        assert_eq!(k.dim(), 6);
        assert_eq!(k.graded_dims, vec![1, 2, 3]);
    }

    #[test]
    fn perturbed_action_rejected() {
        // make rho2 fail to commute with rho1
        let mut rho1 = Matrix::zero(4, 4);
        rho1.set(0, 0, rat_one());
        rho1.set(1, 1, rat_one());
        let mut rho2 = Matrix::zero(4, 4);
        rho2.set(2, 2, rat_one());
        rho2.set(3, 3, rat_one());
        rho2.set(0, 2, rat_one()); // perturbation across weight spaces
        let zero = rat_zero();
        let sc = vec![
            vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), zero.clone()]],
            vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), zero.clone()]],
        ];
        let s = vec![rat_one(), rat_zero(), rat_one(), rat_zero()];
        assert!(ActionInstance::new("bad", sc, vec![rho1, rho2], s).is_err());
    }

    #[test]
    fn non_injective_orbit_tangent_rejected() {
        // base point 0 has zero orbit tangent
        let err = ActionInstance::new(
            "stuck",
            vec![vec![vec![rat_zero()]]],
            vec![Matrix::identity(2)],
            vec![rat_zero(), rat_zero()],
        );
        assert!(err.is_err());
    }

    #[test]
    fn compare_scaling_r1() {
        let rep = compare(&scaling_instance(1), 1).unwrap();
        assert!(rep.pass, "failure: {:?}", rep.failure);
        assert_eq!(rep.kernel_graded_dims, vec![1, 1]);
    }

    #[test]
    fn compare_scaling_r2() {
        let rep = compare(&scaling_instance(1), 2).unwrap();
        assert!(rep.pass, "failure: {:?}", rep.failure);
        assert_eq!(rep.kernel_graded_dims, vec![1, 1, 1]);
    }

    #[test]
    fn compare_r0_trivial() {
        let rep = compare(&scaling_instance(2), 0).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.kernel_graded_dims, vec![1]);
    }

    #[test]
    fn module_compare_weight_one() {
        let inst = scaling_instance(1);
        let w_rho = vec![Matrix::identity(1)];
        let rep = module_compare(&inst, &w_rho, 1).unwrap();
        assert!(rep.pass, "failure: {:?}", rep.failure);
        assert_eq!(rep.kernel_graded_dims, vec![1, 1]);
    }
}

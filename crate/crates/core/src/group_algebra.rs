//! The rational group algebra of Sym(n) and Young symmetrizers.
//!
//! A Young symmetrizer is the product (row sum) * (signed column sum) for
//! the row-major labelling of the diagram. It is quasi-idempotent; the
//! constant is computed, never assumed.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::perm::{all_permutations, Permutation};
use crate::rational::{rat, rat_one, Rational};

/// Default cap on n for group enumeration; |Sym(n)| growth is the limit.
pub const DEFAULT_PARTITION_BOUND: usize = 8;

/// Formal rational linear combination of permutations of {1..n}.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    n: usize,
    terms: BTreeMap<Permutation, Rational>,
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize) -> Self {
        let mut e = Self::zero(n);
        e.add_term(Permutation::identity(n), rat_one());
        e
    }

    pub fn from_terms(n: usize, terms: Vec<(Permutation, Rational)>) -> Result<Self> {
        let mut e = Self::zero(n);
        for (p, c) in terms {
            if p.degree() != n {
                return Err(Error::PermutationSize(p.degree(), n));
            }
            e.add_term(p, c);
        }
        Ok(e)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, p: &Permutation) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, p: Permutation, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let new = o.get().clone() + c;
                if new.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = new;
                }
            }
        }
    }

    pub fn add(&self, other: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        if self.n != other.n {
            return Err(Error::PermutationSize(self.n, other.n));
        }
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> GroupAlgebraElement {
        let mut out = Self::zero(self.n);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c * s);
        }
        out
    }

    /// Convolution product in C[Sym(n)].
    pub fn multiply(&self, other: &GroupAlgebraElement) -> Result<GroupAlgebraElement> {
        if self.n != other.n {
            return Err(Error::PermutationSize(self.n, other.n));
        }
        let mut out = Self::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.compose(q)?, a * b);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    Ok(())
}

/// Embed permutations of a label set into Sym(n): every arrangement of
/// `labels` yields the permutation sending labels[i] to arrangement[i].
fn embedded_group(n: usize, blocks: &[Vec<usize>]) -> Vec<Permutation> {
    let mut result = vec![Permutation::identity(n)];
    for block in blocks {
        let k = block.len();
        let mut extended = Vec::with_capacity(result.len() * (1..=k).product::<usize>());
        for sigma in all_permutations(k) {
            // permutation of {1..n} moving only this block
            let mut images: Vec<usize> = (1..=n).collect();
            for (i, &lab) in block.iter().enumerate() {
                images[lab - 1] = block[sigma.apply(i)];
            }
            let p = Permutation::from_one_line(&images).expect("valid block permutation");
            for base in &result {
                extended.push(base.compose(&p).expect("same degree"));
            }
        }
        result = extended;
    }
    result.sort();
    result.dedup();
    result
}

/// The subgroup of Sym(n) preserving the rows of the diagram of `l`.
pub fn row_group(l: &Partition, bound: usize) -> Result<Vec<Permutation>> {
    check_bound(l.n(), bound)?;
    Ok(embedded_group(l.n(), &l.row_labels()))
}

/// The subgroup preserving the columns of the diagram of `l`.
pub fn column_group(l: &Partition, bound: usize) -> Result<Vec<Permutation>> {
    check_bound(l.n(), bound)?;
    Ok(embedded_group(l.n(), &l.column_labels()))
}

/// The Young symmetrizer of `l`: (sum over row group) * (signed sum over
/// column group), expanded in the group algebra.
pub fn young_symmetrizer(l: &Partition, bound: usize) -> Result<GroupAlgebraElement> {
    let n = l.n();
    check_bound(n, bound)?;
    let mut rows = GroupAlgebraElement::zero(n);
    for p in row_group(l, bound)? {
        rows.add_term(p, rat_one());
    }
    let mut cols = GroupAlgebraElement::zero(n);
    for p in column_group(l, bound)? {
        let s = rat(p.sign());
        cols.add_term(p, s);
    }
    rows.multiply(&cols)
}

/// Quasi-idempotence constant: the c with e*e = c*e, if one exists.
pub fn quasi_idempotence_constant(e: &GroupAlgebraElement) -> Result<Option<Rational>> {
    let square = e.multiply(e)?;
    if e.is_zero() {
        return Ok(None);
    }
    let (p0, c0) = e.terms().next().expect("nonzero");
    let c = square.coefficient(p0) / c0;
    if square == e.scale(&c) {
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;

    #[test]
    fn row_and_column_groups() {
        let l = Partition::new(vec![2, 1]).unwrap();
        let rows = row_group(&l, 8).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.contains(&Permutation::from_cycle(3, &[1, 2]).unwrap()));
        let cols = column_group(&l, 8).unwrap();
        assert_eq!(cols.len(), 2);
        assert!(cols.contains(&Permutation::from_cycle(3, &[1, 3]).unwrap()));

        assert_eq!(row_group(&Partition::column(3), 8).unwrap().len(), 1);
        assert_eq!(row_group(&Partition::row(3), 8).unwrap().len(), 6);
        assert_eq!(column_group(&Partition::row(3), 8).unwrap().len(), 1);
        assert_eq!(column_group(&Partition::new(vec![1, 1]).unwrap(), 8).unwrap().len(), 2);
    }

    #[test]
    fn groups_closed_under_composition_and_inverse() {
        for n in 1..=5 {
            for l in partitions_of(n) {
                for group in [row_group(&l, 8).unwrap(), column_group(&l, 8).unwrap()] {
                    for a in &group {
                        assert!(group.contains(&a.inverse()));
                        for b in &group {
                            assert!(group.contains(&a.compose(b).unwrap()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn group_sizes_are_factorial_products() {
        for n in 1..=5 {
            for l in partitions_of(n) {
                let expect: usize = l.parts().iter().map(|&p| (1..=p).product::<usize>()).product();
                assert_eq!(row_group(&l, 8).unwrap().len(), expect);
            }
        }
    }

    #[test]
    fn symmetrizer_2_1_matches_worked_example() {
        // (1+(12))(1-(13)) = 1 + (12) - (13) - (132)
        let e = young_symmetrizer(&Partition::new(vec![2, 1]).unwrap(), 8).unwrap();
        let mut expect = GroupAlgebraElement::zero(3);
        expect.add_term(Permutation::identity(3), rat(1));
        expect.add_term(Permutation::from_cycle(3, &[1, 2]).unwrap(), rat(1));
        expect.add_term(Permutation::from_cycle(3, &[1, 3]).unwrap(), rat(-1));
        expect.add_term(Permutation::from_cycle(3, &[1, 3, 2]).unwrap(), rat(-1));
        assert_eq!(e, expect);
    }

    #[test]
    fn symmetrizer_row_and_column_cases() {
        let e = young_symmetrizer(&Partition::row(3), 8).unwrap();
        assert_eq!(e.num_terms(), 6);
        assert!(e.terms().all(|(_, c)| *c == rat(1)));

        let e = young_symmetrizer(&Partition::column(3), 8).unwrap();
        assert_eq!(e.num_terms(), 6);
        for (p, c) in e.terms() {
            assert_eq!(*c, rat(p.sign()));
        }
    }

    #[test]
    fn unit_and_cancellation() {
        let one = GroupAlgebraElement::unit(2);
        let mut x = GroupAlgebraElement::zero(2);
        x.add_term(Permutation::from_cycle(2, &[1, 2]).unwrap(), rat(3));
        assert_eq!(one.multiply(&x).unwrap(), x);

        // (1+(12))(1-(12)) = 0
        let t = Permutation::from_cycle(2, &[1, 2]).unwrap();
        let mut a = GroupAlgebraElement::unit(2);
        a.add_term(t.clone(), rat(1));
        let mut b = GroupAlgebraElement::unit(2);
        b.add_term(t, rat(-1));
        assert!(a.multiply(&b).unwrap().is_zero());
    }

    #[test]
    fn sigma_2_1_squares_to_three_times_itself() {
        let e = young_symmetrizer(&Partition::new(vec![2, 1]).unwrap(), 8).unwrap();
        let sq = e.multiply(&e).unwrap();
        assert_eq!(sq, e.scale(&rat(3)));
    }

    #[test]
    fn quasi_idempotence_up_to_5() {
        for n in 1..=5 {
            for l in partitions_of(n) {
                let e = young_symmetrizer(&l, 8).unwrap();
                let c = quasi_idempotence_constant(&e)
                    .unwrap()
                    .unwrap_or_else(|| panic!("symmetrizer of {l} not quasi-idempotent"));
                assert!(!c.is_zero(), "constant vanished for {l}");
            }
        }
    }
}

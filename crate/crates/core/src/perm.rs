//! Permutations of {1..n} in one-line notation.

use crate::error::{Error, Result};

/// Permutation of {1..n}. Internally 0-based: `images[i]` is the image of
/// point `i`. The composition convention is fixed globally as
/// `(a * b)(i) = a(b(i))`, i.e. `b` acts first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.one_line().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 1-based one-line notation, e.g. `[2,1,3]` swaps 1 and 2.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x < 1 || x > n || seen[x - 1] {
                return Err(Error::Parse(format!("not a permutation: {images:?}")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&x| x - 1).collect(),
        })
    }

    /// From a single cycle on 1-based points, fixing everything else.
    pub fn from_cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for w in 0..cycle.len() {
            let a = cycle[w];
            let b = cycle[(w + 1) % cycle.len()];
            if a < 1 || a > n || b < 1 || b > n {
                return Err(Error::Parse(format!("cycle {cycle:?} out of range for n={n}")));
            }
            images[a - 1] = b - 1;
        }
        let p = Permutation { images };
        // reject repeated points
        Permutation::from_one_line(&p.one_line())
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based application.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::PermutationSize(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: (0..self.degree())
                .map(|i| self.images[other.images[i]])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// (-1)^(number of inversions); multiplicative under composition.
    pub fn sign(&self) -> i64 {
        let mut inv = 0usize;
        for i in 0..self.degree() {
            for j in (i + 1)..self.degree() {
                if self.images[i] > self.images[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// All permutations of {1..n} in lexicographic order of one-line notation.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation {
            images: current.clone(),
        });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_convention() {
        let id = Permutation::identity(3);
        let s12 = Permutation::from_cycle(3, &[1, 2]).unwrap();
        let s13 = Permutation::from_cycle(3, &[1, 3]).unwrap();
        assert_eq!(id.compose(&s12).unwrap(), s12);
        assert!(s12.compose(&s12).unwrap().is_identity());
        // (12)∘(13) = (132): 1→3, 3→2, 2→1
        let c132 = Permutation::from_cycle(3, &[1, 3, 2]).unwrap();
        assert_eq!(s12.compose(&s13).unwrap(), c132);
    }

    #[test]
    fn signs() {
        assert_eq!(Permutation::identity(4).sign(), 1);
        assert_eq!(Permutation::from_cycle(4, &[2, 4]).unwrap().sign(), -1);
        // (132) has two inversions
        assert_eq!(Permutation::from_cycle(3, &[1, 3, 2]).unwrap().sign(), 1);
    }

    #[test]
    fn sign_multiplicative_exhaustive_n4() {
        for n in 1..=4 {
            let all = all_permutations(n);
            for a in &all {
                for b in &all {
                    let c = a.compose(b).unwrap();
                    assert_eq!(c.sign(), a.sign() * b.sign());
                }
            }
        }
    }

    #[test]
    fn enumeration_size() {
        assert_eq!(all_permutations(4).len(), 24);
        assert_eq!(all_permutations(1).len(), 1);
    }

    #[test]
    fn inverse_works() {
        for p in all_permutations(4) {
            assert!(p.compose(&p.inverse()).unwrap().is_identity());
        }
    }
}

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not a bijection on 0..{len}: {image:?}")]
pub struct NotABijection {
    pub len: usize,
    pub image: Vec<usize>,
}

/// Bijection on `{0, .., n-1}` stored in one-line notation: `image[i] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = NotABijection;

    fn try_from(image: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self, NotABijection> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || seen[x] {
                return Err(NotABijection { len: n, image });
            }
            seen[x] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.shuffle(rng);
        Self { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different size");
        Permutation {
            image: other.image.iter().map(|&i| self.image[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x] = i;
        }
        Permutation { image }
    }

    /// Digits of the one-line notation, e.g. `"120"`; comma separated past ten symbols.
    pub fn one_line(&self) -> String {
        if self.len() <= 10 {
            self.image.iter().map(|d| d.to_string()).collect()
        } else {
            self.image.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.image[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.image[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.image[next];
            }
            out.push(cycle);
        }
        out
    }

    /// Position of this permutation in [`Permutation::all`] order.
    pub fn lex_rank(&self) -> usize {
        let n = self.len();
        let mut rank = 0;
        let mut fact = (1..n).product::<usize>().max(1);
        let mut remaining: Vec<usize> = (0..n).collect();
        for (k, &x) in self.image.iter().enumerate() {
            let pos = remaining.iter().position(|&r| r == x).expect("valid permutation");
            rank += pos * fact;
            remaining.remove(pos);
            if let Some(f) = fact.checked_div(n - k - 1) {
                fact = f;
            }
        }
        rank
    }

    /// All permutations of `n` symbols in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::with_capacity(factorial(n));
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { image: cur.clone() });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }

    /// All permutations of `n` symbols in the requested order.
    pub fn all_in(n: usize, order: PermutationOrder) -> Vec<Permutation> {
        let mut perms = Self::all(n);
        if order == PermutationOrder::LargestFirst {
            perms.sort_by_key(|p| {
                let inv = p.inverse();
                std::cmp::Reverse(inv.image.iter().rev().copied().collect::<Vec<_>>())
            });
        }
        perms
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Enumeration order for permutation strategy sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermutationOrder {
    /// Lexicographic one-line notation: 012, 021, 102, 120, 201, 210.
    #[default]
    Lexicographic,
    /// Grouped by where the largest symbol is sent from, last position first,
    /// recursively on the smaller symbols: 012, 102, 021, 120, 201, 210.
    LargestFirst,
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product::<usize>().max(1)
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(perms: &[Permutation]) -> Vec<String> {
        perms.iter().map(|p| p.one_line()).collect()
    }

    #[test]
    fn lexicographic_enumeration_of_three() {
        assert_eq!(
            labels(&Permutation::all(3)),
            ["012", "021", "102", "120", "201", "210"]
        );
        assert_eq!(Permutation::all(0).len(), 1);
        assert_eq!(Permutation::all(5).len(), 120);
    }

    #[test]
    fn largest_first_order_of_three() {
        assert_eq!(
            labels(&Permutation::all_in(3, PermutationOrder::LargestFirst)),
            ["012", "102", "021", "120", "201", "210"]
        );
        assert_eq!(
            labels(&Permutation::all_in(2, PermutationOrder::LargestFirst)),
            ["01", "10"]
        );
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(Permutation::new(vec![1, 0, 2]).unwrap().to_string(), "(0 1)");
        assert_eq!(Permutation::new(vec![1, 2, 0]).unwrap().to_string(), "(0 1 2)");
    }

    #[test]
    fn lex_rank_matches_enumeration() {
        for (k, p) in Permutation::all(4).iter().enumerate() {
            assert_eq!(p.lex_rank(), k);
        }
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(seed in any::<u64>(), n in 1usize..8) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = Permutation::random(n, &mut rng);
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }
    }
}

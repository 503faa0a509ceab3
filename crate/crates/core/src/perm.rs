//! Permutations in one-line notation with right actions.

use std::fmt;

use crate::error::{invalid, Result};

/// A permutation of `{1..n}`, stored 0-based.
///
/// Products follow composition of maps: `(σ·τ)(i) = σ(τ(i))`. A sequence
/// `s` is acted on from the right by `s·σ = (s_{σ(1)}, …, s_{σ(n)})`, so that
/// `(s·σ)·τ = s·(στ)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(invalid(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(invalid("one-line notation is 1-based"));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// The adjacent transposition exchanging positions `i` and `i + 1` (0-based).
    pub fn transposition(n: usize, i: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, i + 1);
        Permutation { images }
    }

    /// Parses `[213]` or `[2,1,3]`.
    pub fn parse(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| invalid(format!("bad permutation {s}")))?;
        let images: Vec<usize> = if body.contains(',') {
            body.split(',')
                .map(|t| t.trim().parse().map_err(|_| invalid(format!("bad permutation {s}"))))
                .collect::<Result<_>>()?
        } else {
            body.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| invalid(format!("bad permutation {s}")))
                })
                .collect::<Result<_>>()?
        };
        Self::from_one_line(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn inversions(&self) -> usize {
        let n = self.degree();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_odd(&self) -> bool {
        self.inversions() % 2 == 1
    }

    /// Right action on a sequence: `(s_{σ(1)}, …, s_{σ(n)})`.
    pub fn act_on<T: Clone>(&self, s: &[T]) -> Vec<T> {
        assert_eq!(s.len(), self.degree(), "degree mismatch");
        self.images.iter().map(|&i| s[i].clone()).collect()
    }

    /// A word `[i_1, …, i_k]` of adjacent transpositions with
    /// `self = s_{i_1} ∘ ⋯ ∘ s_{i_k}`.
    pub fn transposition_word(&self) -> Vec<usize> {
        let mut a = self.images.clone();
        let mut swaps = Vec::new();
        let n = a.len();
        for pass in 0..n {
            for i in 0..n.saturating_sub(pass + 1) {
                if a[i] > a[i + 1] {
                    a.swap(i, i + 1);
                    swaps.push(i);
                }
            }
        }
        swaps.reverse();
        swaps
    }

    /// All permutations of `{1..n}` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut a: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { images: a.clone() });
            let Some(i) = (1..n).rev().find(|&i| a[i - 1] < a[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| a[j] > a[i - 1]).unwrap();
            a.swap(i - 1, j);
            a[i..].reverse();
        }
        out
    }
}

/// Block-diagonal permutation `σ_1 × ⋯ × σ_m`.
pub fn cross(perms: &[Permutation]) -> Permutation {
    let mut images = Vec::new();
    let mut offset = 0;
    for p in perms {
        images.extend(p.images.iter().map(|i| i + offset));
        offset += p.degree();
    }
    Permutation { images }
}

/// The `(l_1, …, l_m)`-block permutation of `τ ∈ Σ_m`: blocks of consecutive
/// positions of lengths `l_i` are permuted as `τ` permutes `{1..m}`. Its
/// one-line notation lists the block of `τ(1)`, then `τ(2)`, and so on.
pub fn block_perm(tau: &Permutation, lengths: &[usize]) -> Permutation {
    assert_eq!(tau.degree(), lengths.len(), "one length per block");
    let mut starts = Vec::with_capacity(lengths.len());
    let mut acc = 0;
    for &l in lengths {
        starts.push(acc);
        acc += l;
    }
    let mut images = Vec::with_capacity(acc);
    for &b in &tau.images {
        images.extend(starts[b]..starts[b] + lengths[b]);
    }
    Permutation { images }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|i| i.to_string()).collect();
        if self.degree() >= 10 {
            write!(f, "[{}]", parts.join(","))
        } else {
            write!(f, "[{}]", parts.concat())
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn cross_examples() {
        let id = Permutation::identity(1);
        assert_eq!(cross(&[p("[21]"), id, p("[312]")]), p("[213645]"));
        assert_eq!(cross(&[p("[21]"), p("[21]")]), p("[2143]"));
    }

    #[test]
    fn block_examples() {
        assert_eq!(block_perm(&p("[231]"), &[2, 1, 3]), p("[345612]"));
        assert_eq!(block_perm(&p("[21]"), &[0, 2]), p("[12]"));
        assert_eq!(block_perm(&p("[312]"), &[1, 1, 1]), p("[312]"));
    }

    #[test]
    fn composite_examples() {
        let x = p("[251436]");
        assert_eq!(x.then(&p("[213645]")), p("[521643]"));
        assert_eq!(x.then(&p("[345612]")), p("[143625]"));
    }

    #[test]
    fn right_action_on_sequences() {
        let s = ['a', 'b', 'c'];
        let (sigma, tau) = (p("[231]"), p("[213]"));
        assert_eq!(tau.act_on(&sigma.act_on(&s)), sigma.then(&tau).act_on(&s));
        assert_eq!(sigma.act_on(&s), vec!['b', 'c', 'a']);
    }

    #[test]
    fn transposition_words() {
        for sigma in Permutation::all(4) {
            let word = sigma.transposition_word();
            let mut prod = Permutation::identity(4);
            for &i in &word {
                prod = prod.then(&Permutation::transposition(4, i));
            }
            assert_eq!(prod, sigma);
            assert_eq!(word.len(), sigma.inversions());
        }
        assert_eq!(Permutation::all(4).len(), 24);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(p("[312]").to_string(), "[312]");
        let big = Permutation::identity(10);
        assert_eq!(Permutation::parse(&big.to_string()).unwrap(), big);
        assert!(Permutation::parse("[11]").is_err());
    }
}

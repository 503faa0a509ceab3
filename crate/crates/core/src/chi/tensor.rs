use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{invalid, Result};
use crate::free::{Alphabet, Derivation, OperadElement, Tree};
use crate::linalg::{one, render, sign, Scalar};
use crate::perm::Permutation;

/// An element of the `n`-th tensor power of the arity-1 part of a free
/// operad, inside the colour pair `input → out`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub n: usize,
    pub out: usize,
    pub input: usize,
    pub terms: BTreeMap<Vec<Tree>, Scalar>,
}

fn concat(a: &Tree, b: &Tree) -> Tree {
    let mut w = a.as_word().expect("unary tree");
    w.extend(b.as_word().expect("unary tree"));
    Tree::from_word(&w)
}

impl TensorElement {
    pub fn zero(n: usize, out: usize, input: usize) -> Self {
        TensorElement {
            n,
            out,
            input,
            terms: BTreeMap::new(),
        }
    }

    /// `e^⊗n`
    pub fn power(e: &OperadElement, n: usize) -> Self {
        let factors = vec![e.clone(); n];
        Self::tensor(&factors)
    }

    /// `e_1 ⊗ ⋯ ⊗ e_n` of arity-1 elements sharing a colour pair.
    pub fn tensor(factors: &[OperadElement]) -> Self {
        let (out, input) = (factors[0].out, factors[0].ins[0]);
        let mut acc: Vec<(Vec<Tree>, Scalar)> = vec![(Vec::new(), one())];
        for f in factors {
            debug_assert!(f.out == out && f.ins == [input]);
            let mut next = Vec::with_capacity(acc.len() * f.terms.len());
            for (w, c) in &acc {
                for (t, x) in &f.terms {
                    let mut w = w.clone();
                    w.push(t.clone());
                    next.push((w, c * x));
                }
            }
            acc = next;
        }
        let mut e = Self::zero(factors.len(), out, input);
        for (w, c) in acc {
            e.add_term(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Vec<Tree>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn axpy(&mut self, c: &Scalar, other: &TensorElement) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), c * x);
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut e = self.clone();
        e.axpy(&one(), other);
        e
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        let mut e = self.clone();
        e.axpy(&-one(), other);
        e
    }

    pub fn scaled(&self, c: &Scalar) -> TensorElement {
        let mut e = Self::zero(self.n, self.out, self.input);
        e.axpy(c, self);
        e
    }

    /// Degree of the first term; `None` for zero.
    pub fn degree(&self, alpha: &Alphabet) -> Option<usize> {
        self.terms
            .keys()
            .next()
            .map(|w| w.iter().map(|t| t.degree(alpha)).sum())
    }

    pub fn is_homogeneous(&self, alpha: &Alphabet) -> bool {
        let mut degs = self.terms.keys().map(|w| w.iter().map(|t| t.degree(alpha)).sum::<usize>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Factorwise composition with the sign `(−1)^{Σ_{i>j} |r_i||s_j|}`.
    pub fn compose(&self, alpha: &Alphabet, other: &TensorElement) -> Result<TensorElement> {
        if self.n != other.n || self.input != other.out {
            return Err(invalid("tensor composition of mismatched elements"));
        }
        let mut e = Self::zero(self.n, self.out, other.input);
        for (r, a) in &self.terms {
            let rd: Vec<usize> = r.iter().map(|t| t.degree(alpha)).collect();
            for (s, b) in &other.terms {
                let mut odd = false;
                let mut s_before = 0;
                for i in 0..self.n {
                    // Σ_{j<i} |s_j| against |r_i|
                    odd ^= rd[i] % 2 == 1 && s_before % 2 == 1;
                    s_before += s[i].degree(alpha);
                }
                let w = r.iter().zip(s).map(|(x, y)| concat(x, y)).collect();
                e.add_term(w, sign(odd) * a * b);
            }
        }
        Ok(e)
    }

    /// Right `Σ_n`-action with the Koszul sign: `r·σ = ± r_{σ(1)} ⊗ ⋯ ⊗ r_{σ(n)}`.
    pub fn act(&self, alpha: &Alphabet, sigma: &Permutation) -> TensorElement {
        let mut e = Self::zero(self.n, self.out, self.input);
        for (r, c) in &self.terms {
            let odd: Vec<bool> = r.iter().map(|t| t.degree(alpha) % 2 == 1).collect();
            let w = sigma.act_on(r);
            let mut parity = false;
            for a in 0..self.n {
                for b in a + 1..self.n {
                    let (x, y) = (sigma.apply(a), sigma.apply(b));
                    if x > y && odd[x] && odd[y] {
                        parity = !parity;
                    }
                }
            }
            e.add_term(w, sign(parity) * c);
        }
        e
    }

    /// `(1/n!) Σ_σ self·σ`
    pub fn symmetrize(&self, alpha: &Alphabet) -> TensorElement {
        let perms = Permutation::all(self.n);
        let mut e = Self::zero(self.n, self.out, self.input);
        for s in &perms {
            e.axpy(&one(), &self.act(alpha, s));
        }
        e.scaled(&Scalar::new(1.into(), perms.len().into()))
    }

    /// The derivation `d` applied factorwise with Koszul signs.
    pub fn differential(&self, alpha: &Alphabet, d: &Derivation) -> TensorElement {
        let mut e = Self::zero(self.n, self.out, self.input);
        for (r, c) in &self.terms {
            let mut before = 0;
            for i in 0..self.n {
                let factor = OperadElement {
                    out: self.out,
                    ins: vec![self.input],
                    terms: [(r[i].clone(), one())].into_iter().collect(),
                };
                let s = sign(before % 2 == 1) * c;
                for (t, x) in d.apply(alpha, &factor).terms {
                    let mut w = r.clone();
                    w[i] = t;
                    e.add_term(w, &s * x);
                }
                before += r[i].degree(alpha);
            }
        }
        e
    }

    /// `id^{⊗i} ⊗ f ⊗ id^{⊗(n−i−1)}` for a degree-0 linear map `f` from
    /// factors into tensors of power `m`.
    pub fn expand_at(&self, i: usize, m: usize, f: impl Fn(&Tree) -> TensorElement) -> TensorElement {
        let mut e = Self::zero(self.n + m - 1, self.out, self.input);
        for (r, c) in &self.terms {
            let inner = f(&r[i]);
            for (h, x) in &inner.terms {
                let mut w = r[..i].to_vec();
                w.extend(h.iter().cloned());
                w.extend(r[i + 1..].iter().cloned());
                e.add_term(w, c * x);
            }
        }
        e
    }

    pub fn render_word(alpha: &Alphabet, w: &[Tree]) -> String {
        w.iter().map(|t| t.display(alpha)).collect::<Vec<_>>().join(" ⊗ ")
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("{}*({})", render(c), Self::render_word(alpha, w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `(tensor word, coefficient)` pairs in term order.
    pub fn table(&self, alpha: &Alphabet) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(w, c)| (Self::render_word(alpha, w), render(c)))
            .collect()
    }
}

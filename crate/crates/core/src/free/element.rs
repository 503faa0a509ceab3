use std::collections::BTreeMap;

use num_traits::Zero;

use super::tree::{parse_planar, Planar};
use super::{Alphabet, GenId, Node, Tree};
use crate::error::{invalid, Result};
use crate::linalg::{one, render, Scalar};
use crate::perm::Permutation;

/// A finite linear combination of shuffle trees sharing output colour and
/// input colour word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperadElement {
    pub out: usize,
    pub ins: Vec<usize>,
    pub terms: BTreeMap<Tree, Scalar>,
}

impl OperadElement {
    pub fn zero(out: usize, ins: Vec<usize>) -> Self {
        OperadElement {
            out,
            ins,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(colour: usize) -> Self {
        let mut e = Self::zero(colour, vec![colour]);
        e.terms.insert(Tree::leaf(0), one());
        e
    }

    pub fn generator(alpha: &Alphabet, g: GenId) -> Self {
        let info = alpha.gen(g);
        let mut nodes = vec![Node::G(g)];
        nodes.extend((0..info.arity() as u32).map(Node::L));
        let mut e = Self::zero(info.out, info.ins.clone());
        e.terms.insert(Tree(nodes), one());
        e
    }

    /// A unary chain `g_1 g_2 ⋯ g_k` (root first); the empty word is the unit.
    pub fn word(alpha: &Alphabet, word: &[GenId], colour_if_empty: usize) -> Self {
        let (out, input) = match (word.first(), word.last()) {
            (Some(&f), Some(&l)) => (alpha.gen(f).out, alpha.gen(l).ins[0]),
            _ => (colour_if_empty, colour_if_empty),
        };
        let mut e = Self::zero(out, vec![input]);
        e.terms.insert(Tree::from_word(word), one());
        e
    }

    pub fn parse(text: &str, alpha: &Alphabet, out: usize, ins: Vec<usize>) -> Result<Self> {
        let (p, root) = parse_planar(text, alpha)?;
        let mut e = Self::zero(out, ins);
        for (t, c) in p.normalize(root, alpha) {
            e.add_term(t, c);
        }
        Ok(e)
    }

    pub fn arity(&self) -> usize {
        self.ins.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the first term; `None` for zero.
    pub fn degree(&self, alpha: &Alphabet) -> Option<usize> {
        self.terms.keys().next().map(|t| t.degree(alpha))
    }

    pub fn is_homogeneous(&self, alpha: &Alphabet) -> bool {
        let mut degrees = self.terms.keys().map(|t| t.degree(alpha));
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().map(Tree::weight).min()
    }

    pub fn coefficient(&self, t: &Tree) -> Scalar {
        self.terms.get(t).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, t: Tree, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`
    pub fn axpy(&mut self, c: &Scalar, other: &OperadElement) {
        if c.is_zero() {
            return;
        }
        for (t, x) in &other.terms {
            self.add_term(t.clone(), c * x);
        }
    }

    pub fn add(&self, other: &OperadElement) -> OperadElement {
        let mut e = self.clone();
        e.axpy(&one(), other);
        e
    }

    pub fn sub(&self, other: &OperadElement) -> OperadElement {
        let mut e = self.clone();
        e.axpy(&-one(), other);
        e
    }

    pub fn scaled(&self, c: &Scalar) -> OperadElement {
        let mut e = Self::zero(self.out, self.ins.clone());
        e.axpy(c, self);
        e
    }

    pub fn neg(&self) -> OperadElement {
        self.scaled(&-one())
    }

    /// Right action: the leaf labelled `j` is relabelled `σ⁻¹(j)`.
    pub fn act(&self, alpha: &Alphabet, sigma: &Permutation) -> Result<OperadElement> {
        if sigma.degree() != self.arity() {
            return Err(invalid(format!(
                "permutation of degree {} on an element of arity {}",
                sigma.degree(),
                self.arity()
            )));
        }
        let inv = sigma.inverse();
        let mut e = Self::zero(self.out, sigma.act_on(&self.ins));
        if sigma.is_identity() {
            e.terms = self.terms.clone();
            return Ok(e);
        }
        for (t, c) in &self.terms {
            let mut p = Planar::new();
            let mut key = 0;
            let root = p.insert(t, alpha, &mut key, &mut |p, l| p.leaf(inv.apply(l as usize) as u32));
            for (s, x) in p.normalize(root, alpha) {
                e.add_term(s, c * x);
            }
        }
        Ok(e)
    }

    /// Partial composition `self ∘_i other` with a 0-based position `i`.
    pub fn graft(&self, alpha: &Alphabet, i: usize, other: &OperadElement) -> Result<OperadElement> {
        if i >= self.arity() {
            return Err(invalid(format!("position {} out of range for arity {}", i + 1, self.arity())));
        }
        if self.ins[i] != other.out {
            return Err(invalid(format!("colour mismatch at position {}", i + 1)));
        }
        let mut inputs: Vec<Option<&OperadElement>> = vec![None; self.arity()];
        inputs[i] = Some(other);
        Ok(self.substitute(alpha, &inputs))
    }

    /// Full composition `self(b_1, …, b_n)`; the tensor order is
    /// `self ⊗ b_1 ⊗ ⋯ ⊗ b_n`.
    pub fn compose(&self, alpha: &Alphabet, bs: &[OperadElement]) -> Result<OperadElement> {
        if bs.len() != self.arity() {
            return Err(invalid("wrong number of inputs for composition"));
        }
        for (i, b) in bs.iter().enumerate() {
            if self.ins[i] != b.out {
                return Err(invalid(format!("colour mismatch at position {}", i + 1)));
            }
        }
        let inputs: Vec<Option<&OperadElement>> = bs.iter().map(Some).collect();
        Ok(self.substitute(alpha, &inputs))
    }

    /// Inserts `inputs[j]` at the leaf labelled `j` (units where `None`).
    fn substitute(&self, alpha: &Alphabet, inputs: &[Option<&OperadElement>]) -> OperadElement {
        let mut ins = Vec::new();
        let mut offsets = Vec::new();
        for (j, b) in inputs.iter().enumerate() {
            offsets.push(ins.len() as u32);
            match b {
                Some(b) => ins.extend(b.ins.iter().copied()),
                None => ins.push(self.ins[j]),
            }
        }
        let mut result = Self::zero(self.out, ins);
        if inputs.iter().any(|b| b.is_some_and(|b| b.is_zero())) {
            return result;
        }
        // iterate over all choices of one term per factor
        let factors: Vec<Vec<(&Tree, &Scalar)>> = inputs
            .iter()
            .map(|b| match b {
                Some(b) => b.terms.iter().collect(),
                None => Vec::new(),
            })
            .collect();
        for (ta, ca) in &self.terms {
            let mut choice = vec![0usize; inputs.len()];
            loop {
                let mut p = Planar::new();
                let mut coef = ca.clone();
                let chosen: Vec<Option<&Tree>> = (0..inputs.len())
                    .map(|j| {
                        if factors[j].is_empty() {
                            None
                        } else {
                            let (t, c) = factors[j][choice[j]];
                            coef *= c;
                            Some(t)
                        }
                    })
                    .collect();
                // keys: self first, then each inserted tree in input order
                let mut key_base = vec![0usize; inputs.len()];
                let mut acc = ta.weight();
                for j in 0..inputs.len() {
                    key_base[j] = acc;
                    if let Some(t) = chosen[j] {
                        acc += t.weight();
                    }
                }
                let mut key = 0;
                let root = p.insert(ta, alpha, &mut key, &mut |p, l| {
                    let j = l as usize;
                    match chosen[j] {
                        None => p.leaf(offsets[j]),
                        Some(t) => {
                            let mut k = key_base[j];
                            let off = offsets[j];
                            p.insert(t, alpha, &mut k, &mut |p, m| p.leaf(off + m))
                        }
                    }
                });
                for (t, x) in p.normalize(root, alpha) {
                    result.add_term(t, &coef * x);
                }
                // next choice
                let mut j = 0;
                loop {
                    if j == inputs.len() {
                        break;
                    }
                    if factors[j].is_empty() {
                        j += 1;
                        continue;
                    }
                    choice[j] += 1;
                    if choice[j] < factors[j].len() {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
                if j == inputs.len() {
                    break;
                }
            }
        }
        result
    }

    /// Composition of unary elements `self ∘ other`.
    pub fn then(&self, alpha: &Alphabet, other: &OperadElement) -> Result<OperadElement> {
        self.graft(alpha, 0, other)
    }

    pub fn display(&self, alpha: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (t, c)) in self.terms.iter().enumerate() {
            let s = render(c);
            if k > 0 {
                out.push_str(if s.starts_with('-') { " - " } else { " + " });
            } else if s.starts_with('-') {
                out.push('-');
            }
            let s = s.trim_start_matches('-');
            if s != "1" {
                out.push_str(s);
                out.push('*');
            }
            out.push_str(&t.display(alpha));
        }
        out
    }

    /// `(tree notation, coefficient)` pairs in tree order.
    pub fn table(&self, alpha: &Alphabet) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(t, c)| (t.display(alpha), render(c)))
            .collect()
    }
}

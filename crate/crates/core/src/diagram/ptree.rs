use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generating operation of a presented operad.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpGen {
    pub name: String,
    pub arity: usize,
    #[serde(default)]
    pub degree: usize,
}

/// A planar tree of generating operations whose leaves carry 0-based input
/// labels. Vertex order for signs is preorder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PTree {
    Leaf(u32),
    Op(usize, Vec<PTree>),
}

impl PTree {
    /// `g(1, …, k)`
    pub fn corolla(g: usize, arity: usize) -> PTree {
        PTree::Op(g, (0..arity as u32).map(PTree::Leaf).collect())
    }

    pub fn arity(&self) -> usize {
        match self {
            PTree::Leaf(_) => 1,
            PTree::Op(_, cs) => cs.iter().map(|c| c.arity()).sum(),
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            PTree::Leaf(_) => 0,
            PTree::Op(_, cs) => 1 + cs.iter().map(|c| c.weight()).sum::<usize>(),
        }
    }

    pub fn degree(&self, gens: &[OpGen]) -> usize {
        match self {
            PTree::Leaf(_) => 0,
            PTree::Op(g, cs) => gens[*g].degree + cs.iter().map(|c| c.degree(gens)).sum::<usize>(),
        }
    }

    /// Leaf labels in planar order.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            PTree::Leaf(l) => out.push(*l),
            PTree::Op(_, cs) => cs.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Generators in preorder.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<usize>) {
        if let PTree::Op(g, cs) = self {
            out.push(*g);
            cs.iter().for_each(|c| c.collect_vertices(out));
        }
    }

    pub fn relabel(&self, f: &impl Fn(u32) -> u32) -> PTree {
        match self {
            PTree::Leaf(l) => PTree::Leaf(f(*l)),
            PTree::Op(g, cs) => PTree::Op(*g, cs.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    /// The same shape with leaves labelled `0, 1, …` in planar order.
    pub fn shape(&self) -> PTree {
        let mut next = 0;
        self.shape_rec(&mut next)
    }

    fn shape_rec(&self, next: &mut u32) -> PTree {
        match self {
            PTree::Leaf(_) => {
                *next += 1;
                PTree::Leaf(*next - 1)
            }
            PTree::Op(g, cs) => PTree::Op(*g, cs.iter().map(|c| c.shape_rec(next)).collect()),
        }
    }

    /// Parses `g(h(1, 2), 3)`; leaves are 1-based input labels.
    pub fn parse(text: &str, gens: &[OpGen]) -> Result<PTree> {
        let mut p = Parser {
            s: text.as_bytes(),
            i: 0,
            text,
        };
        let t = p.tree(gens)?;
        p.ws();
        if p.i != p.s.len() {
            return Err(p.err("trailing input"));
        }
        let mut leaves = t.leaves();
        leaves.sort_unstable();
        if leaves.iter().enumerate().any(|(i, &l)| l as usize != i) {
            return Err(Error::Schema(format!("{text:?}: leaves must be 1..{} each once", leaves.len())));
        }
        Ok(t)
    }

    pub fn display(&self, gens: &[OpGen]) -> String {
        let mut out = String::new();
        self.write(gens, &mut out);
        out
    }

    fn write(&self, gens: &[OpGen], out: &mut String) {
        match self {
            PTree::Leaf(l) => {
                let _ = write!(out, "{}", l + 1);
            }
            PTree::Op(g, cs) => {
                out.push_str(&gens[*g].name);
                out.push('(');
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    c.write(gens, out);
                }
                out.push(')');
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Schema(format!("{:?} at {}: {what}", self.text, self.i))
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn tree(&mut self, gens: &[OpGen]) -> Result<PTree> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && !matches!(self.s[self.i], b'(' | b')' | b',') && !self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
        let word = &self.text[start..self.i];
        if word.is_empty() {
            return Err(self.err("expected a generator or a leaf"));
        }
        self.ws();
        if self.i < self.s.len() && self.s[self.i] == b'(' {
            let g = gens
                .iter()
                .position(|g| g.name == word)
                .ok_or_else(|| self.err(&format!("unknown generator {word}")))?;
            self.i += 1;
            let mut children = Vec::new();
            loop {
                children.push(self.tree(gens)?);
                self.ws();
                match self.s.get(self.i) {
                    Some(b',') => self.i += 1,
                    Some(b')') => {
                        self.i += 1;
                        break;
                    }
                    _ => return Err(self.err("expected , or )")),
                }
            }
            if children.len() != gens[g].arity {
                return Err(self.err(&format!("{word} has arity {}", gens[g].arity)));
            }
            Ok(PTree::Op(g, children))
        } else {
            let l: u32 = word.parse().map_err(|_| self.err(&format!("{word} is not a leaf number")))?;
            if l == 0 {
                return Err(self.err("leaves are numbered from 1"));
            }
            Ok(PTree::Leaf(l - 1))
        }
    }
}

/// A planar tree whose vertices carry sort keys giving their position in a
/// tensor product; `finish` returns the tree with the Koszul sign of
/// bringing the keyed order into preorder.
#[derive(Clone, Debug)]
pub(crate) enum KTree {
    Leaf(u32),
    Op(usize, Vec<usize>, Vec<KTree>),
    /// A finished subtree moved as one block.
    Block(PTree, Vec<usize>),
}

impl KTree {
    pub fn finish(self, gens: &[OpGen]) -> (PTree, bool) {
        let mut items: Vec<(Vec<usize>, bool)> = Vec::new();
        let t = Self::finish_rec(self, gens, &mut items);
        let mut odd = false;
        for i in 0..items.len() {
            if !items[i].1 {
                continue;
            }
            for j in i + 1..items.len() {
                if items[j].1 && items[j].0 < items[i].0 {
                    odd = !odd;
                }
            }
        }
        (t, odd)
    }

    fn finish_rec(self, gens: &[OpGen], items: &mut Vec<(Vec<usize>, bool)>) -> PTree {
        match self {
            KTree::Leaf(l) => PTree::Leaf(l),
            KTree::Block(t, key) => {
                items.push((key, t.degree(gens) % 2 == 1));
                t
            }
            KTree::Op(g, key, cs) => {
                items.push((key, gens[g].degree % 2 == 1));
                PTree::Op(g, cs.into_iter().map(|c| Self::finish_rec(c, gens, items)).collect())
            }
        }
    }
}

/// Binds pattern leaves to subtrees of `t`.
pub(crate) fn matches(pattern: &PTree, t: &PTree, binds: &mut [Option<PTree>]) -> bool {
    match (pattern, t) {
        (PTree::Leaf(v), _) => {
            binds[*v as usize] = Some(t.clone());
            true
        }
        (PTree::Op(g, ps), PTree::Op(h, cs)) => g == h && ps.iter().zip(cs).all(|(p, c)| matches(p, c, binds)),
        _ => false,
    }
}

/// `pattern` with leaf `v` replaced by the block `binds[v]`; pattern
/// vertices get keys `[0, i]`, block `v` gets key `[1 + v]`.
pub(crate) fn instantiate(pattern: &PTree, binds: &[PTree]) -> KTree {
    let mut next = 0;
    fn rec(p: &PTree, binds: &[PTree], next: &mut usize) -> KTree {
        match p {
            PTree::Leaf(v) => KTree::Block(binds[*v as usize].clone(), vec![1 + *v as usize]),
            PTree::Op(g, cs) => {
                let key = vec![0, *next];
                *next += 1;
                KTree::Op(*g, key, cs.iter().map(|c| rec(c, binds, next)).collect())
            }
        }
    }
    rec(pattern, binds, &mut next)
}

use std::collections::BTreeMap;

use super::tree::Planar;
use super::{Alphabet, GenId, Node, OperadElement, Tree};
use crate::error::{invalid, Result};
use crate::linalg::{sign, Scalar};
use crate::perm::Permutation;

/// A derivation of degree −1 on a free operad, given by its values on
/// generators (generators without a value are cycles).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Derivation {
    values: BTreeMap<GenId, OperadElement>,
}

impl Derivation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, alpha: &Alphabet, g: GenId, value: OperadElement) -> Result<()> {
        let info = alpha.gen(g);
        if value.out != info.out || value.ins != info.ins {
            return Err(invalid(format!("d({}) has the wrong colours", info.name)));
        }
        if let Some(deg) = value.degree(alpha) {
            if deg + 1 != info.degree || !value.is_homogeneous(alpha) {
                return Err(invalid(format!("d({}) does not have degree {} - 1", info.name, info.degree)));
            }
        }
        if value.is_zero() {
            self.values.remove(&g);
        } else {
            self.values.insert(g, value);
        }
        Ok(())
    }

    /// Sets `d(x·σ) = d(x)·σ` on the whole free orbit of `x`.
    pub fn set_orbit(&mut self, alpha: &Alphabet, x: GenId, value: OperadElement) -> Result<()> {
        let k = alpha.gen(x).arity();
        if k <= 1 || alpha.orbit_position(x).is_none() {
            return self.set(alpha, x, value);
        }
        for sigma in Permutation::all(k) {
            let image = alpha.act(x, &sigma);
            let g = alpha.is_single(&image).expect("free orbit element");
            self.set(alpha, g, value.act(alpha, &sigma)?)?;
        }
        Ok(())
    }

    pub fn get(&self, g: GenId) -> Option<&OperadElement> {
        self.values.get(&g)
    }

    pub fn values(&self) -> impl Iterator<Item = (GenId, &OperadElement)> {
        self.values.iter().map(|(g, v)| (*g, v))
    }

    /// The value on `g`, zero when unset.
    pub fn value(&self, alpha: &Alphabet, g: GenId) -> OperadElement {
        self.values.get(&g).cloned().unwrap_or_else(|| {
            let info = alpha.gen(g);
            OperadElement::zero(info.out, info.ins.clone())
        })
    }

    /// Extends the derivation: `d` of a tree is the signed sum over its
    /// vertices of the tree with that vertex replaced by its value.
    pub fn apply(&self, alpha: &Alphabet, a: &OperadElement) -> OperadElement {
        let mut out = OperadElement::zero(a.out, a.ins.clone());
        for (t, c) in &a.terms {
            self.apply_tree(alpha, t, c, &mut out);
        }
        out
    }

    fn apply_tree(&self, alpha: &Alphabet, t: &Tree, c: &Scalar, out: &mut OperadElement) {
        let mut before = 0;
        for (p, g) in t.vertices().enumerate() {
            if let Some(v) = self.values.get(&g) {
                let s = c * sign(before % 2 == 1);
                for (tv, cv) in &v.terms {
                    let mut arena = Planar::new();
                    let mut pos = 0;
                    let mut q = 0;
                    let root = replace(&mut arena, alpha, t, &mut pos, &mut q, p, tv);
                    for (r, x) in arena.normalize(root, alpha) {
                        out.add_term(r, &s * cv * x);
                    }
                }
            }
            before += alpha.gen(g).degree;
        }
    }

    /// Generators (among `gens`) whose image under `d∘d` is nonzero.
    pub fn square_defects(&self, alpha: &Alphabet, gens: impl IntoIterator<Item = GenId>) -> Vec<GenId> {
        gens.into_iter()
            .filter(|&g| {
                let v = self.value(alpha, g);
                !self.apply(alpha, &v).is_zero()
            })
            .collect()
    }

    /// Minimal: every value lies in weight at least 2.
    pub fn is_minimal(&self) -> bool {
        self.values.values().all(|v| v.min_weight().is_none_or(|w| w >= 2))
    }
}

/// Copies `t` into the arena, replacing its `p`-th vertex by the tree `tv`.
/// Keys follow the tensor order: vertices of `t` before `p`, then `tv`, then
/// the rest of `t`.
fn replace(
    arena: &mut Planar,
    alpha: &Alphabet,
    t: &Tree,
    pos: &mut usize,
    q: &mut usize,
    p: usize,
    tv: &Tree,
) -> usize {
    let node = t.0[*pos];
    *pos += 1;
    match node {
        Node::L(l) => arena.leaf(l),
        Node::G(g) => {
            let me = *q;
            *q += 1;
            let k = alpha.gen(g).arity();
            let children: Vec<usize> = (0..k).map(|_| replace(arena, alpha, t, pos, q, p, tv)).collect();
            let w = tv.weight();
            if me == p {
                let mut key = p;
                arena.insert(tv, alpha, &mut key, &mut |_, l| children[l as usize])
            } else {
                let key = if me < p { me } else { me + w - 1 };
                arena.vertex(g, key, children)
            }
        }
    }
}

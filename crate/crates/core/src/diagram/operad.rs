use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use super::presentation::{add, OperadPresentation, Planar};
use super::ptree::{KTree, PTree};
use crate::category::{Arrow, FiniteCategory};
use crate::error::{invalid, verification, Result};
use crate::linalg::{one, render, sign, ChainComplex, Scalar, SparseVec};
use crate::perm::Permutation;

/// A normal-form planar tree of the operad together with one morphism per
/// input, indexed by leaf label: the canonical form `a ⊗ f₁ ⊗ ⋯ ⊗ fₙ ⊗ σ`
/// read off in planar order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramTerm {
    pub tree: PTree,
    pub arrows: Vec<Arrow>,
}

impl DiagramTerm {
    /// `(a, f₁…fₙ, σ)`: the shape with leaves in planar order, the
    /// morphisms in planar order and the labelling `σ(p)` of position `p`.
    pub fn canonical_form(&self) -> (PTree, Vec<Arrow>, Permutation) {
        let labels = self.tree.leaves();
        let arrows = labels.iter().map(|&l| self.arrows[l as usize]).collect();
        let sigma = Permutation::from_images(labels.iter().map(|&l| l as usize).collect()).expect("leaf labelling");
        (self.tree.shape(), arrows, sigma)
    }
}

/// An element of `(A, d)_𝒰` in the slice `(out; ins)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramElement {
    pub out: usize,
    pub ins: Vec<usize>,
    pub terms: BTreeMap<DiagramTerm, Scalar>,
}

impl DiagramElement {
    pub fn zero(out: usize, ins: Vec<usize>) -> Self {
        DiagramElement {
            out,
            ins,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.ins.len()
    }

    pub fn add_term(&mut self, t: DiagramTerm, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
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

    pub fn axpy(&mut self, c: &Scalar, other: &DiagramElement) {
        for (t, x) in &other.terms {
            self.add_term(t.clone(), c * x);
        }
    }

    pub fn sub(&self, other: &DiagramElement) -> DiagramElement {
        let mut e = self.clone();
        e.axpy(&-one(), other);
        e
    }

    pub fn scaled(&self, c: &Scalar) -> DiagramElement {
        let mut e = Self::zero(self.out, self.ins.clone());
        e.axpy(c, self);
        e
    }
}

/// The operad `(A, d)_𝒰` of `𝒰`-shaped diagrams of `A`-algebras, with
/// elements kept in canonical form.
#[derive(Clone, Debug)]
pub struct DiagramOperad {
    pub operad: OperadPresentation,
    pub category: FiniteCategory,
}

impl DiagramOperad {
    pub fn new(operad: OperadPresentation, category: FiniteCategory) -> Self {
        DiagramOperad { operad, category }
    }

    pub fn unit(&self, v: usize) -> DiagramElement {
        self.morphism(Arrow::Id(v))
    }

    /// A morphism of the category as an arity-1 element.
    pub fn morphism(&self, f: Arrow) -> DiagramElement {
        let c = &self.category;
        let mut e = DiagramElement::zero(c.tgt(f), vec![c.src(f)]);
        e.add_term(
            DiagramTerm {
                tree: PTree::Leaf(0),
                arrows: vec![f],
            },
            one(),
        );
        e
    }

    /// The operation `a_v` for a tree of generators (leaves 1-based).
    pub fn operation(&self, tree: &str, v: usize) -> Result<DiagramElement> {
        let t = self.operad.parse(tree)?;
        let n = t.arity();
        let mut e = DiagramElement::zero(v, vec![v; n]);
        e.add_term(
            DiagramTerm {
                tree: t,
                arrows: vec![Arrow::Id(v); n],
            },
            one(),
        );
        self.normalize(&e)
    }

    /// Brings every tree to normal form.
    pub fn normalize(&self, e: &DiagramElement) -> Result<DiagramElement> {
        let mut out = DiagramElement::zero(e.out, e.ins.clone());
        for (t, c) in &e.terms {
            let (tree, x) = self.operad.normal_form(&t.tree)?;
            out.add_term(
                DiagramTerm {
                    tree,
                    arrows: t.arrows.clone(),
                },
                c * x,
            );
        }
        Ok(out)
    }

    /// Full composition `a(b₁, …, bₙ)`, moving each `bᵢ` past the morphism
    /// at input `i` by `f·b_{in f} = b_{out f}·f^{⊗ar b}`; the tensor order is
    /// `a ⊗ b₁ ⊗ ⋯ ⊗ bₙ`.
    pub fn compose(&self, a: &DiagramElement, bs: &[DiagramElement]) -> Result<DiagramElement> {
        if bs.len() != a.arity() {
            return Err(invalid("wrong number of inputs for composition"));
        }
        let mut ins = Vec::new();
        let mut offsets = Vec::new();
        for (i, b) in bs.iter().enumerate() {
            if b.out != a.ins[i] {
                return Err(invalid(format!("colour mismatch at input {}", i + 1)));
            }
            offsets.push(ins.len() as u32);
            ins.extend(b.ins.iter().copied());
        }
        let mut out = DiagramElement::zero(a.out, ins);
        let gens = &self.operad.generators;
        for (ta, ca) in &a.terms {
            let mut choices: Vec<(Vec<&DiagramTerm>, Scalar)> = vec![(Vec::new(), ca.clone())];
            for b in bs {
                let mut next = Vec::new();
                for (chosen, c) in &choices {
                    for (tb, cb) in &b.terms {
                        let mut chosen = chosen.clone();
                        chosen.push(tb);
                        next.push((chosen, c * cb));
                    }
                }
                choices = next;
            }
            for (chosen, c) in choices {
                let blocks: Vec<PTree> = chosen
                    .iter()
                    .enumerate()
                    .map(|(i, tb)| tb.tree.relabel(&|l| l + offsets[i]))
                    .collect();
                let kt = plug(&ta.tree, &blocks, &mut 0);
                let (tree, odd) = kt.finish(gens);
                let mut arrows = Vec::with_capacity(out.arity());
                for (i, tb) in chosen.iter().enumerate() {
                    for &g in &tb.arrows {
                        arrows.push(self.category.compose(ta.arrows[i], g).expect("colours checked"));
                    }
                }
                out.add_term(DiagramTerm { tree, arrows }, sign(odd) * c);
            }
        }
        self.normalize(&out)
    }

    /// `a ∘_i b` with a 0-based position.
    pub fn graft(&self, a: &DiagramElement, i: usize, b: &DiagramElement) -> Result<DiagramElement> {
        if i >= a.arity() {
            return Err(invalid("position out of range"));
        }
        let bs: Vec<DiagramElement> = (0..a.arity())
            .map(|j| if j == i { b.clone() } else { self.unit(a.ins[j]) })
            .collect();
        self.compose(a, &bs)
    }

    /// Right action: the input labelled `j` is relabelled `σ⁻¹(j)`.
    pub fn act(&self, a: &DiagramElement, sigma: &Permutation) -> Result<DiagramElement> {
        if sigma.degree() != a.arity() {
            return Err(invalid("permutation of the wrong degree"));
        }
        let inv = sigma.inverse();
        let mut out = DiagramElement::zero(a.out, sigma.act_on(&a.ins));
        for (t, c) in &a.terms {
            let tree = t.tree.relabel(&|l| inv.apply(l as usize) as u32);
            let arrows = sigma.act_on(&t.arrows);
            out.add_term(DiagramTerm { tree, arrows }, c.clone());
        }
        Ok(out)
    }

    /// `d a_v = (d a)_v`, `d f = 0`.
    pub fn differential(&self, e: &DiagramElement) -> Result<DiagramElement> {
        let mut out = DiagramElement::zero(e.out, e.ins.clone());
        for (t, c) in &e.terms {
            for (tree, x) in self.operad.d_tree(&t.tree) {
                out.add_term(
                    DiagramTerm {
                        tree,
                        arrows: t.arrows.clone(),
                    },
                    c * x,
                );
            }
        }
        self.normalize(&out)
    }

    pub fn degree(&self, t: &DiagramTerm) -> usize {
        t.tree.degree(&self.operad.generators)
    }

    /// Canonical-form basis of the slice `(out; ins)` in one degree.
    pub fn basis(&self, out: usize, ins: &[usize], degree: usize) -> Vec<DiagramTerm> {
        let n = ins.len();
        let homs: Vec<Vec<Arrow>> = ins.iter().map(|&v| self.category.hom(v, out)).collect();
        let mut arrow_choices: Vec<Vec<Arrow>> = vec![Vec::new()];
        for h in &homs {
            arrow_choices = arrow_choices
                .into_iter()
                .flat_map(|w| {
                    h.iter().map(move |&f| {
                        let mut w = w.clone();
                        w.push(f);
                        w
                    })
                })
                .collect();
        }
        let shapes = if n == 1 && degree == 0 {
            vec![PTree::Leaf(0)]
        } else {
            self.operad.normal_shapes(n, degree)
        };
        let mut terms = Vec::new();
        for shape in &shapes {
            for sigma in Permutation::all(n) {
                let tree = shape.relabel(&|p| sigma.apply(p as usize) as u32);
                for arrows in &arrow_choices {
                    terms.push(DiagramTerm {
                        tree: tree.clone(),
                        arrows: arrows.clone(),
                    });
                }
            }
        }
        terms.sort();
        terms
    }

    pub fn slice_dim(&self, out: usize, ins: &[usize], degree: usize) -> usize {
        self.basis(out, ins, degree).len()
    }

    /// The slice `(out; ins)` as a chain complex in degrees `0..=max_degree`.
    pub fn slice_complex(&self, out: usize, ins: &[usize], max_degree: usize) -> Result<ChainComplex<DiagramTerm>> {
        let labels: Vec<Vec<DiagramTerm>> = (0..=max_degree).map(|k| self.basis(out, ins, k)).collect();
        let mut cols = Vec::new();
        for k in 0..=max_degree {
            let mut ck = Vec::new();
            for t in &labels[k] {
                if k == 0 {
                    ck.push(SparseVec::new());
                    continue;
                }
                let mut e = DiagramElement::zero(out, ins.to_vec());
                e.add_term(t.clone(), one());
                ck.push(self.vector(&self.differential(&e)?, &labels[k - 1])?);
            }
            cols.push(ck);
        }
        ChainComplex::new(labels, cols)
    }

    /// Coordinates of an element in a basis list.
    pub fn vector(&self, e: &DiagramElement, basis: &[DiagramTerm]) -> Result<SparseVec> {
        let mut pairs = Vec::with_capacity(e.terms.len());
        for (t, c) in &e.terms {
            let i = basis
                .binary_search(t)
                .map_err(|_| verification("element lies in the enumerated slice", self.term_display(t)))?;
            pairs.push((i, c.clone()));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    /// `tree[f₁, …, fₙ]` with morphisms listed by input label.
    pub fn term_display(&self, t: &DiagramTerm) -> String {
        let arrows: Vec<String> = t.arrows.iter().map(|&a| self.category.arrow_name(a)).collect();
        let tree = match t.tree {
            PTree::Leaf(_) => "1".to_string(),
            _ => t.tree.display(&self.operad.generators),
        };
        format!("{tree}[{}]", arrows.join(", "))
    }

    pub fn display(&self, e: &DiagramElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        e.terms
            .iter()
            .map(|(t, c)| format!("{}*{}", render(c), self.term_display(t)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `t` with leaf `l` replaced by the block `blocks[l]`; vertices of `t`
/// are keyed `[0, i]` in preorder, block `l` is keyed `[1 + l]`.
fn plug(t: &PTree, blocks: &[PTree], next: &mut usize) -> KTree {
    match t {
        PTree::Leaf(l) => KTree::Block(blocks[*l as usize].clone(), vec![1 + *l as usize]),
        PTree::Op(g, cs) => {
            let key = vec![0, *next];
            *next += 1;
            KTree::Op(*g, key, cs.iter().map(|c| plug(c, blocks, next)).collect())
        }
    }
}

/// A morphism of presented operads `ξ : A → B`, given on generators.
#[derive(Clone, Debug)]
pub struct OperadMorphism {
    pub source: OperadPresentation,
    pub target: OperadPresentation,
    pub values: Vec<Planar>,
}

impl OperadMorphism {
    pub fn new(source: OperadPresentation, target: OperadPresentation, values: Vec<Planar>) -> Result<Self> {
        if values.len() != source.generators.len() {
            return Err(invalid("one value per generator is needed"));
        }
        for (g, v) in source.generators.iter().zip(&values) {
            for t in v.keys() {
                if t.arity() != g.arity || t.degree(&target.generators) != g.degree {
                    return Err(invalid(format!("the value on {} has the wrong arity or degree", g.name)));
                }
            }
        }
        let values = values.iter().map(|v| target.normalize(v)).collect::<Result<_>>()?;
        Ok(OperadMorphism { source, target, values })
    }

    pub fn identity(p: &OperadPresentation) -> Self {
        let values = p
            .generators
            .iter()
            .enumerate()
            .map(|(g, info)| [(PTree::corolla(g, info.arity), one())].into_iter().collect())
            .collect();
        OperadMorphism {
            source: p.clone(),
            target: p.clone(),
            values,
        }
    }

    /// `φ_A : Ass∞ → Ass`, `mu2 ↦ mu2` and `mu_n ↦ 0` for `n ≥ 3`.
    pub fn ass_infinity_to_ass(max_arity: usize) -> Self {
        let source = OperadPresentation::ass_infinity(max_arity);
        let target = OperadPresentation::ass();
        let values = (0..source.generators.len())
            .map(|g| {
                if g == 0 {
                    [(PTree::corolla(0, 2), one())].into_iter().collect()
                } else {
                    Planar::new()
                }
            })
            .collect();
        OperadMorphism { source, target, values }
    }

    /// `ξ` on a planar tree, normalized in the target.
    pub fn apply_tree(&self, t: &PTree) -> Result<Planar> {
        let mut out = Planar::new();
        for (kt, c) in substitute(t, &self.values, &mut 0) {
            let (s, odd) = kt.finish(&self.target.generators);
            add(&mut out, s, sign(odd) * c);
        }
        self.target.normalize(&out)
    }

    pub fn apply(&self, p: &Planar) -> Result<Planar> {
        let mut out = Planar::new();
        for (t, c) in p {
            for (s, x) in self.apply_tree(t)? {
                add(&mut out, s, c * x);
            }
        }
        Ok(out)
    }

    /// `ξζ`, the composite with `ζ` applied first.
    pub fn after(&self, zeta: &OperadMorphism) -> Result<OperadMorphism> {
        if zeta.target != self.source {
            return Err(invalid("morphisms are not composable"));
        }
        let values = zeta.values.iter().map(|v| self.apply(v)).collect::<Result<_>>()?;
        Ok(OperadMorphism {
            source: zeta.source.clone(),
            target: self.target.clone(),
            values,
        })
    }

    /// Checks that rewrites and differentials are respected.
    pub fn check(&self) -> Result<()> {
        let s = &self.source;
        for r in &s.rewrites {
            let l = self.apply_tree(&r.lhs)?;
            let mut rhs = Planar::new();
            for (t, c) in self.apply_tree(&r.rhs)? {
                add(&mut rhs, t, c * &r.coefficient);
            }
            if l != rhs {
                return Err(verification(
                    "the morphism respects the relations",
                    format!("{} -> {}", r.lhs.display(&s.generators), self.target.display(&l)),
                ));
            }
        }
        for (g, info) in s.generators.iter().enumerate() {
            let dg = s.differential.get(&g).cloned().unwrap_or_default();
            let lhs = self.apply(&dg)?;
            let rhs = self.target.normalize(&self.target.d(&self.values[g]))?;
            if lhs != rhs {
                return Err(verification(
                    "the morphism commutes with d",
                    format!("xi(d {}) = {}, d xi({}) = {}", info.name, self.target.display(&lhs), info.name, self.target.display(&rhs)),
                ));
            }
        }
        Ok(())
    }
}

/// All expansions of `t` with every vertex replaced by a term of its image.
fn substitute(t: &PTree, values: &[Planar], idx: &mut usize) -> Vec<(KTree, Scalar)> {
    match t {
        PTree::Leaf(l) => vec![(KTree::Leaf(*l), one())],
        PTree::Op(g, cs) => {
            let me = *idx;
            *idx += 1;
            let mut children: Vec<(Vec<KTree>, Scalar)> = vec![(Vec::new(), one())];
            for c in cs {
                let options = substitute(c, values, idx);
                let mut next = Vec::new();
                for (ks, x) in &children {
                    for (k, y) in &options {
                        let mut ks = ks.clone();
                        ks.push(k.clone());
                        next.push((ks, x * y));
                    }
                }
                children = next;
            }
            let mut out = Vec::new();
            for (img, c) in &values[*g] {
                for (ks, x) in &children {
                    let mut next = 0;
                    out.push((fill(img, me, ks, &mut next), c * x));
                }
            }
            out
        }
    }
}

fn fill(value: &PTree, me: usize, children: &[KTree], next: &mut usize) -> KTree {
    match value {
        PTree::Leaf(l) => children[*l as usize].clone(),
        PTree::Op(g, cs) => {
            let key = vec![me, *next];
            *next += 1;
            KTree::Op(*g, key, cs.iter().map(|c| fill(c, me, children, next)).collect())
        }
    }
}

/// The morphism `ξ_𝒰 : A_𝒰 → B_𝒰`, `a_v ↦ ξ(a)_v`, `f ↦ f`.
#[derive(Clone, Debug)]
pub struct DiagramMorphism {
    pub xi: OperadMorphism,
    pub source: DiagramOperad,
    pub target: DiagramOperad,
}

/// Extends an operad morphism to diagrams over `cat`.
pub fn apply_functor(xi: &OperadMorphism, cat: &FiniteCategory) -> Result<DiagramMorphism> {
    xi.check()?;
    Ok(DiagramMorphism {
        xi: xi.clone(),
        source: DiagramOperad::new(xi.source.clone(), cat.clone()),
        target: DiagramOperad::new(xi.target.clone(), cat.clone()),
    })
}

impl DiagramMorphism {
    pub fn apply(&self, e: &DiagramElement) -> Result<DiagramElement> {
        let mut out = DiagramElement::zero(e.out, e.ins.clone());
        for (t, c) in &e.terms {
            let image = match &t.tree {
                PTree::Leaf(_) => [(t.tree.clone(), one())].into_iter().collect(),
                tree => self.xi.apply_tree(tree)?,
            };
            for (tree, x) in image {
                out.add_term(
                    DiagramTerm {
                        tree,
                        arrows: t.arrows.clone(),
                    },
                    c * x,
                );
            }
        }
        Ok(out)
    }

    /// The matrix of the morphism on one slice and degree, by columns.
    pub fn matrix(&self, out: usize, ins: &[usize], degree: usize) -> Result<Vec<SparseVec>> {
        let target_basis = self.target.basis(out, ins, degree);
        self.source
            .basis(out, ins, degree)
            .into_iter()
            .map(|t| {
                let mut e = DiagramElement::zero(out, ins.to_vec());
                e.add_term(t, one());
                self.target.vector(&self.apply(&e)?, &target_basis)
            })
            .collect()
    }
}

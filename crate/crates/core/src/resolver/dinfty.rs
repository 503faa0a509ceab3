use std::collections::BTreeMap;

use super::grid::KoszulGeneratorGrid;
use crate::category::{Arrow, CategoryResolution};
use crate::chi::{chi_construct, ChiMap, TensorElement};
use crate::diagram::{DiagramElement, DiagramOperad, DiagramTerm, PTree};
use crate::error::{invalid, verification, Error, Result};
use crate::free::{Alphabet, Derivation, GenId, Node, OperadElement, SliceEnumerator, Tree};
use crate::linalg::{one, sign, Solver, SparseVec};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct ResolverConfig {
    pub max_arity: usize,
    pub max_degree: usize,
    /// Word-length bound for categories with loops.
    pub max_chain_length: Option<usize>,
    /// Try the ideal generated by `X_F(<n)` alone before the full `I^n`.
    pub strict_ideal: bool,
    /// Highest homology degree compared slice by slice.
    pub homology_degree: usize,
    pub jobs: usize,
}

impl Default for ResolverConfig {
    fn default() -> Self {
        ResolverConfig {
            max_arity: 3,
            max_degree: 2,
            max_chain_length: None,
            strict_ideal: false,
            homology_degree: 1,
            jobs: 1,
        }
    }
}

/// What a generator of `D∞` is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// A generator of the category resolution.
    F,
    /// `x_v`
    XV { x: usize, v: usize },
    /// `x_f`
    XF { x: usize, f: GenId },
}

/// Which ideal an `ω(x, f)` was found in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealUsed {
    /// generated by `X_F(<n)`
    Strict,
    /// generated by `F_{≥1} ⊕ X_F(<n)`
    Full,
}

#[derive(Clone, Debug)]
pub struct OmegaEntry {
    pub x: usize,
    pub f: GenId,
    pub value: OperadElement,
    pub ideal: IdealUsed,
    /// `Some(solved)` when the smaller ideal was tried.
    pub strict_attempt: Option<bool>,
    /// For degree-0 `f`: whether `ω` lies in the ideal generated by
    /// `X_f(<n)` inside `F(X_{out f}(<n) ⊕ X_{in f}(<n) ⊕ k⟨f⟩)`.
    pub localized: Option<bool>,
}

/// Which linear extension of `x ↦ (f ↦ ·)` to words is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// `x⟨−⟩`
    Polarization,
    /// `ω(x, −)`
    Omega,
}

/// `D∞ = F(X_V ⊕ F ⊕ X_F)` with its differential and `Φ : D∞ → A_𝒰`.
#[derive(Clone, Debug)]
pub struct DInfinity {
    pub grid: KoszulGeneratorGrid,
    pub res: CategoryResolution,
    pub config: ResolverConfig,
    pub alphabet: Alphabet,
    pub d: Derivation,
    pub chi: BTreeMap<usize, ChiMap>,
    /// Generators of the operad resolution in use, by arity.
    pub xs: Vec<usize>,
    /// Generators of the category resolution in use, by degree.
    pub fs: Vec<GenId>,
    pub xv: BTreeMap<(usize, usize), GenId>,
    pub xf: BTreeMap<(usize, GenId), GenId>,
    pub omega: Vec<OmegaEntry>,
    pub kinds: Vec<Kind>,
    pub target: DiagramOperad,
    images: Vec<Option<DiagramElement>>,
    word_bound: usize,
}

impl DInfinity {
    pub fn build(grid: KoszulGeneratorGrid, res: CategoryResolution, config: ResolverConfig) -> Result<Self> {
        res.check_assumptions()?;
        if !res.category.is_acyclic() && config.max_chain_length.is_none() {
            return Err(invalid("the category has loops; a chain length bound is needed"));
        }
        if let Some(g) = res.square_defects().first() {
            return Err(verification("d∘d = 0 on the category resolution", res.alphabet.gen(*g).name.clone()));
        }
        let word_bound = res.word_bound(config.max_chain_length).0;
        let mut xs = grid.generators_up_to(config.max_arity);
        xs.sort_by_key(|&x| (grid.resolution.generators[x].arity, x));
        if xs.is_empty() {
            return Err(invalid("no generator of the operad resolution fits the arity bound"));
        }
        let fs: Vec<GenId> = res
            .generators()
            .into_iter()
            .filter(|&g| res.alphabet.gen(g).degree <= config.max_degree)
            .collect();
        let mut chi = BTreeMap::new();
        for &x in &xs {
            let n = grid.resolution.generators[x].arity;
            if let std::collections::btree_map::Entry::Vacant(e) = chi.entry(n) {
                e.insert(chi_construct(&res, n, config.max_degree)?);
            }
        }

        let colours = res.category.objects.clone();
        let mut alphabet = Alphabet::new(colours.clone());
        let mut kinds = Vec::new();
        for (g, info) in res.alphabet.gens() {
            let id = alphabet.add_free_orbit(&info.name, info.degree, info.out, info.ins.clone())?;
            debug_assert_eq!(id, g);
            kinds.push(Kind::F);
        }
        let mut xv = BTreeMap::new();
        for &x in &xs {
            let g = &grid.resolution.generators[x];
            for (v, name) in colours.iter().enumerate() {
                let id = alphabet.add_free_orbit(&format!("{}_{name}", g.name), g.degree, v, vec![v; g.arity])?;
                xv.insert((x, v), id);
                kinds.resize(alphabet.len(), Kind::XV { x, v });
            }
        }
        let mut xf = BTreeMap::new();
        for &x in &xs {
            let g = &grid.resolution.generators[x];
            for &f in &fs {
                let info = res.alphabet.gen(f);
                let id = alphabet.add_free_orbit(
                    &format!("{}<{}>", g.name, info.name),
                    g.degree + info.degree + 1,
                    info.out,
                    vec![info.ins[0]; g.arity],
                )?;
                xf.insert((x, f), id);
                kinds.resize(alphabet.len(), Kind::XF { x, f });
            }
        }
        let target = DiagramOperad::new(grid.operad.clone(), res.category.clone());
        let mut dinf = DInfinity {
            grid,
            res,
            config,
            alphabet,
            d: Derivation::new(),
            chi,
            xs,
            fs,
            xv,
            xf,
            omega: Vec::new(),
            kinds,
            target,
            images: Vec::new(),
            word_bound,
        };
        dinf.images = (0..dinf.alphabet.len() as GenId).map(|g| dinf.generator_image(g)).collect::<Result<_>>()?;
        for (g, v) in dinf.res.d.values() {
            dinf.d.set(&dinf.alphabet, g, v.clone())?;
        }
        for (&(x, v), &id) in &dinf.xv.clone() {
            let mut value = OperadElement::zero(v, dinf.alphabet.gen(id).ins.clone());
            for (t, c) in &dinf.grid.differential_of(x) {
                value.axpy(c, &dinf.colourize(t, v)?);
            }
            dinf.d.set_orbit(&dinf.alphabet, id, value)?;
        }
        let order: Vec<(usize, GenId)> = dinf.xs.iter().flat_map(|&x| dinf.fs.iter().map(move |&f| (x, f))).collect();
        for (x, f) in order {
            dinf.solve_level(x, f)?;
        }
        Ok(dinf)
    }

    pub fn arity_of(&self, x: usize) -> usize {
        self.grid.resolution.generators[x].arity
    }

    pub fn degree_of(&self, x: usize) -> usize {
        self.grid.resolution.generators[x].degree
    }

    fn f_degree(&self, f: GenId) -> usize {
        self.res.alphabet.gen(f).degree
    }

    /// Trees of an arity-`n` slice have at most `n − 1` vertices of arity
    /// at least two and `2n − 1` edges, each carrying a word of generators
    /// of the category resolution.
    pub fn weight_bound(&self, n: usize) -> usize {
        n.saturating_sub(1) + (2 * n).saturating_sub(1) * self.word_bound
    }

    pub fn generator(&self, g: GenId) -> OperadElement {
        OperadElement::generator(&self.alphabet, g)
    }

    fn single(&self, t: &Tree, out: usize, ins: Vec<usize>) -> OperadElement {
        let mut e = OperadElement::zero(out, ins);
        e.add_term(t.clone(), one());
        e
    }

    /// `t_v` for a planar tree of the operad resolution.
    pub fn colourize(&self, t: &PTree, v: usize) -> Result<OperadElement> {
        let labels: Vec<usize> = t.leaves().iter().map(|&l| l as usize).collect();
        let planar = self.colourize_planar(t, v)?;
        planar.act(&self.alphabet, &Permutation::from_images(labels)?.inverse())
    }

    fn colourize_planar(&self, t: &PTree, v: usize) -> Result<OperadElement> {
        match t {
            PTree::Leaf(_) => Ok(OperadElement::unit(v)),
            PTree::Op(g, cs) => {
                let id = *self.xv.get(&(*g, v)).ok_or_else(|| invalid("operation outside the arity bound"))?;
                let children = cs.iter().map(|c| self.colourize_planar(c, v)).collect::<Result<Vec<_>>>()?;
                self.generator(id).compose(&self.alphabet, &children)
            }
        }
    }

    fn chi_of(&self, n: usize) -> &ChiMap {
        &self.chi[&n]
    }

    /// `a ∘ (r₁ ⊗ ⋯ ⊗ rₙ)` extended linearly over a tensor.
    pub fn compose_tensor(&self, a: &OperadElement, t: &TensorElement) -> Result<OperadElement> {
        let mut out = OperadElement::zero(a.out, vec![t.input; a.arity()]);
        for (w, c) in &t.terms {
            let factors: Vec<OperadElement> = w.iter().map(|r| self.single(r, t.out, vec![t.input])).collect();
            out.axpy(c, &a.compose(&self.alphabet, &factors)?);
        }
        Ok(out)
    }

    /// `χ⟦w⟧ₙ` for a root-first word.
    pub fn chi_word(&self, n: usize, word: &[GenId], colour: usize) -> Result<TensorElement> {
        self.chi_of(n)
            .apply_tree(&self.res, &Tree::from_word(word), colour)
            .ok_or_else(|| invalid("chi is not defined on the word"))
    }

    fn base_value(&self, x: usize, f: GenId, ext: Extension) -> Result<OperadElement> {
        match ext {
            Extension::Polarization => {
                let id = self.xf.get(&(x, f)).ok_or_else(|| invalid("generator above the degree bound"))?;
                Ok(self.generator(*id))
            }
            Extension::Omega => self
                .omega
                .iter()
                .find(|e| e.x == x && e.f == f)
                .map(|e| e.value.clone())
                .ok_or_else(|| invalid(format!("ω({}, {}) is not built yet", x, self.res.alphabet.gen(f).name))),
        }
    }

    /// `x⟨w⟩` or `ω(x, w)` on a root-first word, split as `w[..k] · w[k..]`
    /// at the top and after the first letter below.
    pub fn extend_word(&self, x: usize, word: &[GenId], colour: usize, ext: Extension, k: usize) -> Result<OperadElement> {
        let n = self.arity_of(x);
        if word.is_empty() {
            return Ok(OperadElement::zero(colour, vec![colour; n]));
        }
        if word.len() == 1 {
            return self.base_value(x, word[0], ext);
        }
        let (r1, r2) = word.split_at(k);
        let r1_degree: usize = r1.iter().map(|&g| self.f_degree(g)).sum();
        let inner = self.res.alphabet.gen(r2[0]).out;
        let left = self.compose_tensor(&self.extend_word(x, r1, inner, ext, 1)?, &self.chi_word(n, r2, inner)?)?;
        let right_value = self.extend_word(x, r2, inner, ext, 1)?;
        let right = OperadElement::word(&self.alphabet, r1, inner).compose(&self.alphabet, &[right_value])?;
        let shift = match ext {
            Extension::Polarization => self.degree_of(x) + 1,
            Extension::Omega => self.degree_of(x),
        };
        let mut out = left;
        out.axpy(&sign(r1_degree * shift % 2 == 1), &right);
        Ok(out)
    }

    /// The linear extension on an arity-1 element of the category resolution.
    pub fn extend(&self, x: usize, r: &OperadElement, ext: Extension) -> Result<OperadElement> {
        let n = self.arity_of(x);
        let mut out = OperadElement::zero(r.out, vec![r.ins[0]; n]);
        for (t, c) in &r.terms {
            let word = t.as_word().ok_or_else(|| invalid("not an arity-1 element"))?;
            out.axpy(c, &self.extend_word(x, &word, r.out, ext, 1)?);
        }
        Ok(out)
    }

    pub fn polarize(&self, x: usize, r: &OperadElement) -> Result<OperadElement> {
        self.extend(x, r, Extension::Polarization)
    }

    /// `(−1)^{1+|x|} x⟨df⟩ + (−1)^{1+|x||f|} f x_{in f} + x_{out f} χ⟦f⟧ₙ`
    pub fn principal(&self, x: usize, f: GenId) -> Result<OperadElement> {
        let (dx, df) = (self.degree_of(x), self.f_degree(f));
        let n = self.arity_of(x);
        let info = self.alphabet.gen(f);
        let (out, input) = (info.out, info.ins[0]);
        let mut p = OperadElement::zero(out, vec![input; n]);
        p.axpy(&sign(dx % 2 == 0), &self.polarize(x, &self.d.value(&self.alphabet, f))?);
        let fx = self.generator(f).compose(&self.alphabet, &[self.generator(self.xv[&(x, input)])])?;
        p.axpy(&sign((1 + dx * df) % 2 == 1), &fx);
        p.axpy(&one(), &self.compose_tensor(&self.generator(self.xv[&(x, out)]), &self.chi_word(n, &[f], out)?)?);
        Ok(p)
    }

    /// `φ(x,f) = (−1)^{|x|} ω(x,df) + (−1)^{|f|(|x|+1)} f dx_{in f} − (dx_{out f}) χ⟦f⟧ₙ`
    pub fn rhs(&self, x: usize, f: GenId) -> Result<OperadElement> {
        let (dx, df) = (self.degree_of(x), self.f_degree(f));
        let n = self.arity_of(x);
        let info = self.alphabet.gen(f);
        let (out, input) = (info.out, info.ins[0]);
        let mut phi = OperadElement::zero(out, vec![input; n]);
        phi.axpy(&sign(dx % 2 == 1), &self.extend(x, &self.d.value(&self.alphabet, f), Extension::Omega)?);
        let d_in = self.d.value(&self.alphabet, self.xv[&(x, input)]);
        phi.axpy(&sign(df * (dx + 1) % 2 == 1), &self.generator(f).compose(&self.alphabet, &[d_in])?);
        let d_out = self.d.value(&self.alphabet, self.xv[&(x, out)]);
        phi.axpy(&-one(), &self.compose_tensor(&d_out, &self.chi_word(n, &[f], out)?)?);
        Ok(phi)
    }

    /// Generators of `D∞^{<n}` within the degree bound.
    pub fn in_lower(&self, g: GenId, n: usize) -> bool {
        match self.kinds[g as usize] {
            Kind::F => self.alphabet.gen(g).degree <= self.config.max_degree,
            Kind::XV { x, .. } | Kind::XF { x, .. } => self.arity_of(x) < n,
        }
    }

    /// Generators of the ideal `I^n` (or of the smaller ideal when `strict`).
    pub fn in_ideal_generators(&self, g: GenId, n: usize, strict: bool) -> bool {
        match self.kinds[g as usize] {
            Kind::F => !strict && self.alphabet.gen(g).degree >= 1 && self.in_lower(g, n),
            Kind::XF { x, .. } => self.arity_of(x) < n,
            Kind::XV { .. } => false,
        }
    }

    /// Whether every term lies in `D∞^{<n}` and contains an ideal generator.
    pub fn in_ideal(&self, e: &OperadElement, n: usize, strict: bool) -> bool {
        e.terms.keys().all(|t| {
            t.vertices().all(|g| self.in_lower(g, n)) && t.vertices().any(|g| self.in_ideal_generators(g, n, strict))
        })
    }

    fn localized(&self, e: &OperadElement, n: usize, f: GenId) -> bool {
        let info = self.alphabet.gen(f);
        let colours = [info.out, info.ins[0]];
        let allowed = |g: GenId| match self.kinds[g as usize] {
            Kind::F => g == f,
            Kind::XV { x, v } => self.arity_of(x) < n && colours.contains(&v),
            Kind::XF { x, f: h } => self.arity_of(x) < n && h == f,
        };
        let marked = |g: GenId| matches!(self.kinds[g as usize], Kind::XF { x, f: h } if h == f && self.arity_of(x) < n);
        e.terms.keys().all(|t| t.vertices().all(allowed) && t.vertices().any(marked))
    }

    /// Solves `dω = φ` over the ideal basis of the slice of `φ`.
    fn solve_in_ideal(&self, phi: &OperadElement, n: usize, degree: usize, strict: bool) -> Option<OperadElement> {
        if phi.is_zero() {
            return Some(phi.clone());
        }
        let mut en = SliceEnumerator::new(&self.alphabet, |g| self.in_lower(g, n), self.weight_bound(n));
        let trees: Vec<Tree> = en
            .trees(phi.out, &phi.ins, degree)
            .iter()
            .filter(|t| t.vertices().any(|g| self.in_ideal_generators(g, n, strict)))
            .cloned()
            .collect();
        let mut index: BTreeMap<Tree, usize> = BTreeMap::new();
        let vector = |e: &OperadElement, index: &mut BTreeMap<Tree, usize>| {
            SparseVec::from_pairs(e.terms.iter().map(|(t, c)| {
                let next = index.len();
                (*index.entry(t.clone()).or_insert(next), c.clone())
            }))
        };
        let cols: Vec<SparseVec> = trees
            .iter()
            .map(|t| {
                let image = self.d.apply(&self.alphabet, &self.single(t, phi.out, phi.ins.clone()));
                vector(&image, &mut index)
            })
            .collect();
        let b = vector(phi, &mut index);
        let x = Solver::new(&cols).solve(&b)?;
        let mut omega = OperadElement::zero(phi.out, phi.ins.clone());
        for (i, c) in x.iter() {
            omega.add_term(trees[i].clone(), c.clone());
        }
        Some(omega)
    }

    fn solve_level(&mut self, x: usize, f: GenId) -> Result<()> {
        let n = self.arity_of(x);
        let degree = self.degree_of(x) + self.f_degree(f);
        let name = self.alphabet.gen(self.xf[&(x, f)]).name.clone();
        let principal = self.principal(x, f)?;
        let phi = self.rhs(x, f)?;
        let d_phi = self.d.apply(&self.alphabet, &phi);
        if !d_phi.is_zero() {
            return Err(verification(format!("dφ = 0 for {name}"), d_phi.display(&self.alphabet)));
        }
        if !phi.terms.keys().all(|t| t.vertices().all(|g| self.in_lower(g, n))) {
            return Err(verification(format!("φ lies in D∞^<{n} for {name}"), phi.display(&self.alphabet)));
        }
        let projected = self.project(&phi)?;
        if !projected.is_zero() {
            return Err(verification(format!("Φ(φ) = 0 for {name}"), self.target.display(&projected)));
        }
        let strict_attempt = self.config.strict_ideal.then(|| self.solve_in_ideal(&phi, n, degree, true));
        let (value, ideal) = match strict_attempt.clone().flatten() {
            Some(v) => (v, IdealUsed::Strict),
            None => {
                let v = self.solve_in_ideal(&phi, n, degree, false).ok_or_else(|| Error::NoSolution {
                    context: format!("dω = φ for ω in the ideal I^{n}, slice of {name} in degree {degree}"),
                    witness: format!("φ = {}", phi.display(&self.alphabet)),
                })?;
                (v, IdealUsed::Full)
            }
        };
        let localized = (self.f_degree(f) == 0).then(|| self.localized(&value, n, f));
        let mut dxf = principal;
        dxf.axpy(&one(), &value);
        self.d.set_orbit(&self.alphabet, self.xf[&(x, f)], dxf)?;
        self.omega.push(OmegaEntry {
            x,
            f,
            value,
            ideal,
            strict_attempt: strict_attempt.map(|s| s.is_some()),
            localized,
        });
        Ok(())
    }

    fn generator_image(&self, g: GenId) -> Result<Option<DiagramElement>> {
        Ok(match self.kinds[g as usize] {
            Kind::F => self.res.labels.get(&g).map(|&m| self.target.morphism(Arrow::Mor(m))),
            Kind::XF { .. } => None,
            Kind::XV { x, v } => {
                let n = self.arity_of(x);
                let mut e = DiagramElement::zero(v, vec![v; n]);
                for (t, c) in self.grid.projection_of(x) {
                    e.add_term(
                        DiagramTerm {
                            tree: t.clone(),
                            arrows: vec![Arrow::Id(v); n],
                        },
                        c.clone(),
                    );
                }
                if e.is_zero() {
                    return Ok(None);
                }
                match self.alphabet.orbit_position(g) {
                    Some((_, sigma)) => Some(self.target.act(&e, &sigma)?),
                    None => Some(e),
                }
            }
        })
    }

    /// `Φ` on a tree, with inputs in planar order, and the planar leaf labels.
    fn project_planar(&self, nodes: &[Node], pos: &mut usize, colour: usize) -> Result<(Option<DiagramElement>, Vec<u32>)> {
        let node = nodes[*pos];
        *pos += 1;
        match node {
            Node::L(l) => Ok((Some(self.target.unit(colour)), vec![l])),
            Node::G(g) => {
                let info = self.alphabet.gen(g);
                let mut children = Vec::with_capacity(info.arity());
                let mut labels = Vec::new();
                let mut zero = self.images[g as usize].is_none();
                for &c in &info.ins {
                    let (e, ls) = self.project_planar(nodes, pos, c)?;
                    labels.extend(ls);
                    match e {
                        Some(e) => children.push(e),
                        None => zero = true,
                    }
                }
                if zero {
                    return Ok((None, labels));
                }
                let image = self.images[g as usize].as_ref().expect("nonzero image");
                let e = self.target.compose(image, &children)?;
                Ok(((!e.is_zero()).then_some(e), labels))
            }
        }
    }

    /// `Φ : D∞ → A_𝒰`
    pub fn project(&self, e: &OperadElement) -> Result<DiagramElement> {
        let mut out = DiagramElement::zero(e.out, e.ins.clone());
        for (t, c) in &e.terms {
            let (image, labels) = self.project_planar(&t.0, &mut 0, e.out)?;
            if let Some(image) = image {
                let sigma = Permutation::from_images(labels.iter().map(|&l| l as usize).collect())?.inverse();
                out.axpy(c, &self.target.act(&image, &sigma)?);
            }
        }
        Ok(out)
    }

    /// The coefficient-free witness name of a generator.
    pub fn name(&self, g: GenId) -> &str {
        &self.alphabet.gen(g).name
    }

    pub fn omega_of(&self, x: usize, f: GenId) -> Option<&OmegaEntry> {
        self.omega.iter().find(|e| e.x == x && e.f == f)
    }

    /// Composable root-first words of generators in use, of length `1..=max_len`.
    pub fn words(&self, max_len: usize) -> Vec<Vec<GenId>> {
        let mut out: Vec<Vec<GenId>> = self.fs.iter().map(|&f| vec![f]).collect();
        let mut frontier = out.clone();
        for _ in 1..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                let input = self.alphabet.gen(*w.last().expect("nonempty")).ins[0];
                for &f in &self.fs {
                    if self.alphabet.gen(f).out == input {
                        let mut w = w.clone();
                        w.push(f);
                        next.push(w);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    pub fn scalar_degree(&self, word: &[GenId]) -> usize {
        word.iter().map(|&g| self.f_degree(g)).sum()
    }
}

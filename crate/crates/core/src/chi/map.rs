use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use serde::Serialize;

use super::TensorElement;
use crate::category::CategoryResolution;
use crate::error::{Error, Result};
use crate::free::{GenId, OperadElement, SliceEnumerator, Tree};
use crate::linalg::{Solver, SparseVec};
use crate::perm::Permutation;

/// Values of a map `χ_n : C∞ → C∞^{⊗n}` on generators, extended
/// multiplicatively; units go to units.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiMap {
    pub n: usize,
    pub values: BTreeMap<GenId, TensorElement>,
}

impl ChiMap {
    pub fn new(n: usize) -> Self {
        ChiMap {
            n,
            values: BTreeMap::new(),
        }
    }

    /// χ of a root-first word; `None` if a generator has no value.
    pub fn apply_tree(&self, res: &CategoryResolution, t: &Tree, colour: usize) -> Option<TensorElement> {
        let word = t.as_word()?;
        let alpha = &res.alphabet;
        let Some((&last, rest)) = word.split_last() else {
            return Some(TensorElement::power(&OperadElement::unit(colour), self.n));
        };
        let mut acc = self.values.get(&last)?.clone();
        for g in rest.iter().rev() {
            acc = self.values.get(g)?.compose(alpha, &acc).ok()?;
        }
        Some(acc)
    }

    pub fn apply(&self, res: &CategoryResolution, e: &OperadElement) -> Option<TensorElement> {
        let mut out = TensorElement::zero(self.n, e.out, e.ins[0]);
        for (t, c) in &e.terms {
            out.axpy(c, &self.apply_tree(res, t, e.out)?);
        }
        Some(out)
    }

    /// `(1/n!) Σ_σ χ(g)·σ` on every generator.
    pub fn symmetrized(&self, res: &CategoryResolution) -> ChiMap {
        ChiMap {
            n: self.n,
            values: self
                .values
                .iter()
                .map(|(g, v)| (*g, v.symmetrize(&res.alphabet)))
                .collect(),
        }
    }

    /// Generator name → `(tensor word, coefficient)` pairs.
    pub fn table(&self, res: &CategoryResolution) -> BTreeMap<String, Vec<(String, String)>> {
        self.values
            .iter()
            .map(|(g, v)| (res.alphabet.gen(*g).name.clone(), v.table(&res.alphabet)))
            .collect()
    }
}

/// Degree-homogeneous tensor words of one colour-pair slice, with the
/// matrix of `d` between consecutive degrees.
struct TensorSlices<'a> {
    res: &'a CategoryResolution,
    enumerator: SliceEnumerator<'a>,
    n: usize,
}

impl<'a> TensorSlices<'a> {
    fn new(res: &'a CategoryResolution, n: usize, fallback: Option<usize>) -> Self {
        let (weight, _) = res.word_bound(fallback);
        TensorSlices {
            res,
            enumerator: SliceEnumerator::new(&res.alphabet, |_| true, weight),
            n,
        }
    }

    fn basis(&mut self, out: usize, input: usize, degree: usize) -> Vec<Vec<Tree>> {
        let by_degree: Vec<Vec<Tree>> = (0..=degree)
            .map(|k| self.enumerator.trees(out, &[input], k).to_vec())
            .collect();
        let mut out_words = Vec::new();
        let mut current = Vec::new();
        fn rec(i: usize, n: usize, left: usize, by: &[Vec<Tree>], cur: &mut Vec<Tree>, out: &mut Vec<Vec<Tree>>) {
            if i == n {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for k in 0..=left {
                for t in &by[k] {
                    cur.push(t.clone());
                    rec(i + 1, n, left - k, by, cur, out);
                    cur.pop();
                }
            }
        }
        rec(0, self.n, degree, &by_degree, &mut current, &mut out_words);
        out_words
    }

    /// Some `x` of the given degree with `dx = target`, preferring the
    /// first basis words.
    fn solve(&mut self, out: usize, input: usize, degree: usize, target: &TensorElement) -> Option<TensorElement> {
        let basis = self.basis(out, input, degree);
        let alpha = &self.res.alphabet;
        let mut index: HashMap<Vec<Tree>, usize> = HashMap::new();
        let vec_of = |e: &TensorElement, index: &mut HashMap<Vec<Tree>, usize>| {
            let pairs: Vec<(usize, _)> = e
                .terms
                .iter()
                .map(|(w, c)| {
                    let next = index.len();
                    (*index.entry(w.clone()).or_insert(next), c.clone())
                })
                .collect();
            SparseVec::from_pairs(pairs)
        };
        let columns: Vec<SparseVec> = basis
            .iter()
            .map(|w| {
                let mut e = TensorElement::zero(self.n, out, input);
                e.add_term(w.clone(), One::one());
                vec_of(&e.differential(alpha, &self.res.d), &mut index)
            })
            .collect();
        let b = vec_of(target, &mut index);
        let x = Solver::new(&columns).solve(&b)?;
        let mut sol = TensorElement::zero(self.n, out, input);
        for (j, c) in x.iter() {
            sol.add_term(basis[j].clone(), c.clone());
        }
        Some(sol)
    }
}

/// `Σ_{i=0}^{n−1} r₁^{⊗i} ⊗ r ⊗ r₂^{⊗(n−i−1)}` when `dr = r₁ − r₂` has that shape.
fn degree_one_formula(res: &CategoryResolution, g: GenId, n: usize) -> Option<TensorElement> {
    let alpha = &res.alphabet;
    let v = res.d.value(alpha, g);
    if v.terms.len() != 2 || !v.terms.keys().all(|t| res.is_f0_word(t)) {
        return None;
    }
    let mut r1 = None;
    let mut r2 = None;
    for (t, c) in &v.terms {
        let mut e = OperadElement::zero(v.out, v.ins.clone());
        e.add_term(t.clone(), One::one());
        if c.is_one() {
            r1 = Some(e);
        } else if (-c).is_one() {
            r2 = Some(e);
        }
    }
    let (r1, r2) = (r1?, r2?);
    let r = OperadElement::generator(alpha, g);
    let mut out = TensorElement::zero(n, v.out, v.ins[0]);
    for i in 0..n {
        let mut factors = vec![r1.clone(); i];
        factors.push(r.clone());
        factors.extend(std::iter::repeat_n(r2.clone(), n - i - 1));
        out.axpy(&One::one(), &TensorElement::tensor(&factors));
    }
    Some(out)
}

/// Builds `χ_n` degree by degree: `f^{⊗n}` on degree-0 generators, the
/// closed formula in degree 1, and solutions of `dχ(r) = χ(dr)` above,
/// each symmetrized. Generators above `max_degree` are left out.
pub fn chi_construct(res: &CategoryResolution, n: usize, max_degree: usize) -> Result<ChiMap> {
    if n == 0 {
        return Err(Error::Invalid("chi needs n >= 1".into()));
    }
    let alpha = &res.alphabet;
    let mut chi = ChiMap::new(n);
    let mut slices = TensorSlices::new(res, n, None);
    for g in res.generators() {
        let info = alpha.gen(g);
        if info.degree > max_degree {
            continue;
        }
        let value = if info.degree == 0 {
            if !res.labels.contains_key(&g) {
                return Err(Error::Invalid(format!("degree-0 generator {} is not a morphism", info.name)));
            }
            TensorElement::power(&OperadElement::generator(alpha, g), n)
        } else if let Some(v) = (info.degree == 1).then(|| degree_one_formula(res, g, n)).flatten() {
            v.symmetrize(alpha)
        } else {
            let target = chi
                .apply(res, &res.d.value(alpha, g))
                .expect("lower degrees are constructed");
            let x = slices
                .solve(info.out, info.ins[0], info.degree, &target)
                .ok_or_else(|| Error::NoSolution {
                    context: format!("d chi({}) = chi(d {}) with n = {n}", info.name, info.name),
                    witness: format!("{} is a cycle but not a boundary", target.display(alpha)),
                })?;
            x.symmetrize(alpha)
        };
        chi.values.insert(g, value);
    }
    Ok(chi)
}

/// `χ_n^{NS} = (χ₂ ⊗ id^{⊗(n−2)}) ⋯ (χ₂ ⊗ id) χ₂` on every generator.
pub fn chi_iterate(res: &CategoryResolution, chi2: &ChiMap, n: usize) -> Result<ChiMap> {
    if chi2.n != 2 || n < 2 {
        return Err(Error::Invalid("chi_iterate needs a map with n = 2 and a target n >= 2".into()));
    }
    let mut out = ChiMap::new(n);
    for (g, v) in &chi2.values {
        let mut acc = v.clone();
        for _ in 2..n {
            acc = expand_with(res, chi2, &acc, 0)?;
        }
        out.values.insert(*g, acc);
    }
    Ok(out)
}

/// `id^{⊗i} ⊗ χ ⊗ id^{⊗(k−i−1)}` applied to a tensor of power `k`.
pub fn expand_with(res: &CategoryResolution, chi: &ChiMap, e: &TensorElement, i: usize) -> Result<TensorElement> {
    let missing = std::cell::Cell::new(false);
    let out = e.expand_at(i, chi.n, |t| {
        chi.apply_tree(res, t, e.out).unwrap_or_else(|| {
            missing.set(true);
            TensorElement::zero(chi.n, e.out, e.input)
        })
    });
    if missing.get() {
        return Err(Error::Invalid("chi is not defined on every factor".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub pass: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiReport {
    pub n: usize,
    pub max_product_length: usize,
    pub conditions: Vec<ConditionReport>,
}

impl ChiReport {
    pub fn pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.condition == name)
    }
}

struct Tally {
    name: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checked: 0,
            witness: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn done(self) -> ConditionReport {
        ConditionReport {
            condition: self.name.to_string(),
            pass: self.witness.is_none(),
            checked: self.checked,
            witness: self.witness,
        }
    }
}

/// Composable words of generators with values, of lengths `1..=max_len`.
fn words(res: &CategoryResolution, chi: &ChiMap, max_len: usize) -> Vec<Vec<GenId>> {
    let gens: Vec<GenId> = chi.values.keys().copied().collect();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<GenId>> = gens.iter().map(|&g| vec![g]).collect();
    for _ in 0..max_len {
        out.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for w in &layer {
            for &g in &gens {
                if res.src(w[w.len() - 1]) == res.tgt(g) {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    out
}

/// Checks (C1)–(C6) on every generator with a value, and (C5), (C6) on
/// composable products of up to `max_len` generators.
pub fn verify_c1_c6(res: &CategoryResolution, chi: &ChiMap, max_len: usize) -> ChiReport {
    let alpha = &res.alphabet;
    let n = chi.n;
    let mut c1 = Tally::new("C1");
    let mut c2 = Tally::new("C2");
    let mut c3 = Tally::new("C3");
    let mut c4 = Tally::new("C4");
    let mut c5 = Tally::new("C5");
    let mut c6 = Tally::new("C6");
    let transpositions: Vec<Permutation> = (0..n.saturating_sub(1)).map(|i| Permutation::transposition(n, i)).collect();
    for (&g, v) in &chi.values {
        let info = alpha.gen(g);
        let name = &info.name;
        for s in &transpositions {
            c1.check(&v.act(alpha, s) == v, || format!("chi({name})·{s} != chi({name})"));
        }
        let colours_ok = v.n == n
            && v.out == info.out
            && v.input == info.ins[0]
            && v.terms.keys().all(|w| w.len() == n && w.iter().all(|t| t.as_word().is_some()));
        c2.check(colours_ok, || format!("chi({name}) = {}", v.display(alpha)));
        let deg_ok = v.is_homogeneous(alpha) && v.degree(alpha).is_none_or(|d| d == info.degree);
        c3.check(deg_ok, || format!("chi({name}) = {}", v.display(alpha)));
        if res.labels.contains_key(&g) {
            let expected = TensorElement::power(&OperadElement::generator(alpha, g), n);
            c4.check(v == &expected, || format!("chi({name}) = {}", v.display(alpha)));
        }
    }
    for w in words(res, chi, max_len.max(1)) {
        let colour = res.tgt(w[0]);
        let t = Tree::from_word(&w);
        let word_name = t.display(alpha);
        let Some(value) = chi.apply_tree(res, &t, colour) else { continue };
        // (C5): every split of the word
        for k in 1..w.len() {
            let left = chi.apply_tree(res, &Tree::from_word(&w[..k]), colour);
            let right = chi.apply_tree(res, &Tree::from_word(&w[k..]), res.tgt(w[k]));
            let ok = match (left, right) {
                (Some(l), Some(r)) => l.compose(alpha, &r).is_ok_and(|p| p == value),
                _ => false,
            };
            c5.check(ok, || format!("chi({word_name}) at split {k}"));
        }
        // (C6)
        let mut e = OperadElement::zero(colour, vec![res.src(w[w.len() - 1])]);
        e.add_term(t.clone(), One::one());
        let lhs = value.differential(alpha, &res.d);
        match chi.apply(res, &res.d.apply(alpha, &e)) {
            Some(rhs) => c6.check(lhs == rhs, || {
                format!("d chi({word_name}) - chi(d {word_name}) = {}", lhs.sub(&rhs).display(alpha))
            }),
            None => c6.check(false, || format!("chi(d {word_name}) is outside the truncation")),
        }
    }
    ChiReport {
        n,
        max_product_length: max_len,
        conditions: vec![c1.done(), c2.done(), c3.done(), c4.done(), c5.done(), c6.done()],
    }
}

/// Generators on which `(χ₂ ⊗ id)χ₂ ≠ (id ⊗ χ₂)χ₂`.
pub fn coassociativity_defects(res: &CategoryResolution, chi2: &ChiMap) -> Vec<GenId> {
    chi2.values
        .iter()
        .filter(|(_, v)| {
            let l = expand_with(res, chi2, v, 0);
            let r = expand_with(res, chi2, v, 1);
            !matches!((l, r), (Ok(l), Ok(r)) if l == r)
        })
        .map(|(g, _)| *g)
        .collect()
}

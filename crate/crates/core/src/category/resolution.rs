use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Arrow, FiniteCategory};
use crate::error::{verification, Error, Result};
use crate::free::{Alphabet, Derivation, GenId, OperadElement, Tree};
use crate::linalg::{parse_scalar, render, Scalar};

/// A quasi-free resolution of the operadic version of a finite category:
/// arity-1 generators with a derivation differential and the projection
/// `φ_C`, which sends a degree-0 generator to its morphism label.
#[derive(Clone, Debug)]
pub struct CategoryResolution {
    pub name: String,
    pub category: FiniteCategory,
    pub alphabet: Alphabet,
    pub d: Derivation,
    pub labels: BTreeMap<GenId, usize>,
    /// Chain length bound for bar-cobar resolutions of non-acyclic categories.
    pub truncation: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct GeneratorJson {
    name: String,
    degree: usize,
    src: String,
    tgt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResolutionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    category: serde_json::Value,
    generators: Vec<GeneratorJson>,
    #[serde(default)]
    differential: BTreeMap<String, Vec<(String, String)>>,
}

impl CategoryResolution {
    pub fn new(name: impl Into<String>, category: FiniteCategory) -> Self {
        let alphabet = Alphabet::new(category.objects.clone());
        CategoryResolution {
            name: name.into(),
            category,
            alphabet,
            d: Derivation::new(),
            labels: BTreeMap::new(),
            truncation: None,
        }
    }

    /// Adds a generator `src → tgt`; degree-0 generators need a morphism label.
    pub fn add_generator(&mut self, name: &str, degree: usize, src: usize, tgt: usize, label: Option<usize>) -> Result<GenId> {
        match (degree, label) {
            (0, None) => return Err(Error::Invalid(format!("degree-0 generator {name} needs a morphism label"))),
            (0, Some(m)) => {
                let mor = &self.category.morphisms[m];
                if mor.src != src || mor.tgt != tgt {
                    return Err(Error::Invalid(format!("generator {name} and its label {} have different endpoints", mor.name)));
                }
            }
            (_, Some(_)) => return Err(Error::Invalid(format!("generator {name} of positive degree carries a label"))),
            _ => {}
        }
        let g = self.alphabet.add_free_orbit(name, degree, tgt, vec![src])?;
        if let Some(m) = label {
            self.labels.insert(g, m);
        }
        Ok(g)
    }

    pub fn gen(&self, name: &str) -> Result<GenId> {
        self.alphabet
            .id(name)
            .ok_or_else(|| Error::Invalid(format!("unknown generator {name}")))
    }

    /// Sets `d` on a generator from `(coefficient, root-first word of generator names)` pairs.
    pub fn set_d(&mut self, name: &str, terms: &[(i64, &[&str])]) -> Result<()> {
        let g = self.gen(name)?;
        let info = self.alphabet.gen(g).clone();
        let mut value = OperadElement::zero(info.out, info.ins.clone());
        for (c, word) in terms {
            let ids = word.iter().map(|n| self.gen(n)).collect::<Result<Vec<_>>>()?;
            let w = OperadElement::word(&self.alphabet, &ids, info.out);
            if w.out != info.out || w.ins != info.ins {
                return Err(Error::Invalid(format!("a term of d({name}) has the wrong endpoints")));
            }
            value.axpy(&Scalar::from_integer((*c).into()), &w);
        }
        self.d.set(&self.alphabet, g, value)
    }

    /// Generator ids sorted by degree, then by insertion order.
    pub fn generators(&self) -> Vec<GenId> {
        let mut gens: Vec<GenId> = self.alphabet.gens().map(|(g, _)| g).collect();
        gens.sort_by_key(|&g| (self.alphabet.gen(g).degree, g));
        gens
    }

    pub fn max_degree(&self) -> usize {
        self.alphabet.gens().map(|(_, i)| i.degree).max().unwrap_or(0)
    }

    pub fn src(&self, g: GenId) -> usize {
        self.alphabet.gen(g).ins[0]
    }

    pub fn tgt(&self, g: GenId) -> usize {
        self.alphabet.gen(g).out
    }

    /// Longest word of generators, with `true` when every slice is finite
    /// and complete; otherwise `fallback` (default: number of objects plus
    /// one) and `false`.
    pub fn word_bound(&self, fallback: Option<usize>) -> (usize, bool) {
        let n = self.category.objects.len();
        let edges: Vec<(usize, usize)> = self.alphabet.gens().map(|(_, i)| (i.ins[0], i.out)).collect();
        let mut best = vec![0usize; n];
        for _ in 0..=n {
            let mut changed = false;
            for &(s, t) in &edges {
                if best[s] + 1 > best[t] {
                    best[t] = best[s] + 1;
                    changed = true;
                }
            }
            if !changed {
                let w = best.into_iter().max().unwrap_or(0);
                return (w, self.truncation.is_none());
            }
        }
        (fallback.unwrap_or(n + 1), false)
    }

    /// `φ_C` of a root-first word: the composite of the labels, the identity
    /// for the unit, `None` when the word has positive degree.
    pub fn phi_tree(&self, t: &Tree, colour: usize) -> Option<Arrow> {
        let word = t.as_word()?;
        if word.is_empty() {
            return Some(Arrow::Id(colour));
        }
        let arrows: Option<Vec<Arrow>> = word.iter().map(|g| self.labels.get(g).map(|&m| Arrow::Mor(m))).collect();
        self.category.compose_word(&arrows?)
    }

    /// `φ_C` of an arity-1 element as a combination of arrows.
    pub fn phi(&self, e: &OperadElement) -> BTreeMap<Arrow, Scalar> {
        let mut out: BTreeMap<Arrow, Scalar> = BTreeMap::new();
        for (t, c) in &e.terms {
            if let Some(a) = self.phi_tree(t, e.out) {
                let entry = out.entry(a).or_insert_with(Scalar::zero);
                *entry += c;
                if entry.is_zero() {
                    out.remove(&a);
                }
            }
        }
        out
    }

    pub fn square_defects(&self) -> Vec<GenId> {
        self.d.square_defects(&self.alphabet, self.generators())
    }

    pub fn is_minimal(&self) -> bool {
        self.d.is_minimal()
    }

    pub(crate) fn is_f0_word(&self, t: &Tree) -> bool {
        t.as_word().is_some_and(|w| w.iter().all(|g| self.labels.contains_key(g)))
    }

    /// Checks the standing assumptions: degree-0 generators are labelled by
    /// non-identity morphisms, every degree-1 generator has `dr = r₁ − r₂`
    /// with `r₁, r₂` compositions of degree-0 generators and units, `φ_C`
    /// is a chain map and `d² = 0`.
    pub fn check_assumptions(&self) -> Result<()> {
        let a = &self.alphabet;
        for g in self.generators() {
            let info = a.gen(g);
            match info.degree {
                0 => {
                    if !self.labels.contains_key(&g) {
                        return Err(verification("degree-0 generators are morphisms", info.name.clone()));
                    }
                }
                1 => {
                    let v = self.d.value(a, g);
                    let terms: Vec<(&Tree, &Scalar)> = v.terms.iter().collect();
                    let shape = terms.len() == 2
                        && terms.iter().all(|(t, _)| self.is_f0_word(t))
                        && terms.iter().any(|(_, c)| c.is_one())
                        && terms.iter().any(|(_, c)| (-*c).is_one());
                    if !shape {
                        return Err(verification(
                            "d r = r1 - r2 for compositions r1, r2 of degree-0 generators",
                            format!("d {} = {}", info.name, v.display(a)),
                        ));
                    }
                    let image = self.phi(&v);
                    if !image.is_empty() {
                        return Err(verification(
                            "phi_C is a chain map",
                            format!("phi(d {}) = {}", info.name, self.render_arrows(&image)),
                        ));
                    }
                }
                _ => {}
            }
        }
        if let Some(&g) = self.square_defects().first() {
            let dd = self.d.apply(a, &self.d.value(a, g));
            return Err(verification("d^2 = 0", format!("d d {} = {}", a.gen(g).name, dd.display(a))));
        }
        Ok(())
    }

    pub fn render_arrows(&self, v: &BTreeMap<Arrow, Scalar>) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|(a, c)| format!("{}*{}", render(c), self.category.arrow_name(*a)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses a resolution file; `category` is a category object or the name
    /// of a built-in category.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: ResolutionJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let category = match &j.category {
            serde_json::Value::String(s) => super::builtin_category(s)?,
            v => FiniteCategory::from_json(&v.to_string())?,
        };
        let mut res = CategoryResolution::new(j.name.unwrap_or_else(|| "user".into()), category);
        for g in &j.generators {
            let obj = |o: &str| {
                res.category
                    .object(o)
                    .ok_or_else(|| Error::Schema(format!("generator {}: unknown object {o}", g.name)))
            };
            let (src, tgt) = (obj(&g.src)?, obj(&g.tgt)?);
            let label = match &g.label {
                Some(l) => Some(
                    res.category
                        .morphism(l)
                        .ok_or_else(|| Error::Schema(format!("generator {}: unknown label {l}", g.name)))?,
                ),
                None => None,
            };
            res.add_generator(&g.name, g.degree, src, tgt, label)
                .map_err(|e| Error::Schema(e.to_string()))?;
        }
        for (name, terms) in &j.differential {
            let g = res.gen(name).map_err(|e| Error::Schema(e.to_string()))?;
            let info = res.alphabet.gen(g).clone();
            let mut value = OperadElement::zero(info.out, info.ins.clone());
            for (tree, coef) in terms {
                let c = parse_scalar(coef).ok_or_else(|| Error::Schema(format!("bad coefficient {coef:?}")))?;
                let t = OperadElement::parse(tree, &res.alphabet, info.out, info.ins.clone())
                    .map_err(|e| Error::Schema(e.to_string()))?;
                value.axpy(&c, &t);
            }
            res.d
                .set(&res.alphabet, g, value)
                .map_err(|e| Error::Schema(e.to_string()))?;
        }
        Ok(res)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let a = &self.alphabet;
        let generators: Vec<GeneratorJson> = self
            .generators()
            .into_iter()
            .map(|g| GeneratorJson {
                name: a.gen(g).name.clone(),
                degree: a.gen(g).degree,
                src: self.category.objects[self.src(g)].clone(),
                tgt: self.category.objects[self.tgt(g)].clone(),
                label: self.labels.get(&g).map(|&m| self.category.morphisms[m].name.clone()),
            })
            .collect();
        let differential = self
            .d
            .values()
            .map(|(g, v)| (a.gen(g).name.clone(), v.table(a)))
            .collect();
        serde_json::to_value(ResolutionJson {
            name: Some(self.name.clone()),
            category: self.category.to_json(),
            generators,
            differential,
        })
        .expect("serializable")
    }
}

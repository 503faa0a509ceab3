use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_MORPHISMS: usize = 4096;

/// A morphism of a finite category: an identity or a non-identity morphism
/// given by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Id(usize),
    Mor(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite category with a total composition table on composable pairs of
/// non-identity morphisms. Identities are implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    compose: HashMap<(usize, usize), Arrow>,
    acyclic: bool,
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    name: String,
    src: String,
    tgt: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryJson {
    objects: Vec<String>,
    morphisms: Vec<MorphismJson>,
    #[serde(default)]
    compose: BTreeMap<String, String>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

impl FiniteCategory {
    /// Builds a category from generating morphisms and composition rules
    /// `(g, f, g∘f)`; the value is a morphism name or `id`/`id_V`.
    /// Missing composites are added as new morphisms named `g*f`.
    pub fn new(objects: Vec<String>, morphisms: Vec<(String, String, String)>, rules: Vec<(String, String, String)>) -> Result<Self> {
        if objects.is_empty() {
            return Err(schema("a category needs at least one object"));
        }
        let mut obj_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(schema(format!("duplicate object {o}")));
            }
        }
        let mut mors = Vec::new();
        let mut by_name: HashMap<String, usize> = HashMap::new();
        for (name, src, tgt) in morphisms {
            let s = *obj_index
                .get(&src)
                .ok_or_else(|| schema(format!("morphism {name}: unknown source {src}")))?;
            let t = *obj_index
                .get(&tgt)
                .ok_or_else(|| schema(format!("morphism {name}: unknown target {tgt}")))?;
            if name.is_empty() || name == "id" || name.starts_with("id_") {
                return Err(schema(format!("reserved morphism name {name:?}")));
            }
            if by_name.insert(name.clone(), mors.len()).is_some() {
                return Err(schema(format!("duplicate morphism {name}")));
            }
            mors.push(Morphism { name, src: s, tgt: t });
        }
        let mut cat = FiniteCategory {
            objects,
            morphisms: mors,
            compose: HashMap::new(),
            acyclic: false,
        };
        for (g, f, h) in rules {
            let gi = *by_name.get(&g).ok_or_else(|| schema(format!("unknown morphism {g} in {g}|{f}")))?;
            let fi = *by_name.get(&f).ok_or_else(|| schema(format!("unknown morphism {f} in {g}|{f}")))?;
            let (gm, fm) = (&cat.morphisms[gi], &cat.morphisms[fi]);
            if gm.src != fm.tgt {
                return Err(schema(format!("{g}|{f} is not composable")));
            }
            let value = if h == "id" || h.strip_prefix("id_").is_some() {
                if let Some(o) = h.strip_prefix("id_") {
                    if obj_index.get(o) != Some(&fm.src) {
                        return Err(schema(format!("{g}|{f} = {h}: wrong identity")));
                    }
                }
                Arrow::Id(fm.src)
            } else {
                Arrow::Mor(*by_name.get(&h).ok_or_else(|| schema(format!("unknown morphism {h} in {g}|{f}")))?)
            };
            if cat.src(value) != fm.src || cat.tgt(value) != gm.tgt {
                return Err(schema(format!("{g}|{f} = {h} has the wrong endpoints")));
            }
            if let Some(old) = cat.compose.insert((gi, fi), value) {
                if old != value {
                    return Err(schema(format!("conflicting values for {g}|{f}")));
                }
            }
        }
        cat.saturate()?;
        cat.acyclic = cat.compute_acyclic();
        Ok(cat)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: CategoryJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        let morphisms = j.morphisms.into_iter().map(|m| (m.name, m.src, m.tgt)).collect();
        let mut rules = Vec::new();
        for (k, h) in j.compose {
            let (g, f) = k
                .split_once('|')
                .ok_or_else(|| schema(format!("composition key {k:?} is not of the form g|f")))?;
            rules.push((g.to_string(), f.to_string(), h));
        }
        Self::new(j.objects, morphisms, rules)
    }

    /// The saturated category in the input format.
    pub fn to_json(&self) -> serde_json::Value {
        let morphisms: Vec<MorphismJson> = self
            .morphisms
            .iter()
            .map(|m| MorphismJson {
                name: m.name.clone(),
                src: self.objects[m.src].clone(),
                tgt: self.objects[m.tgt].clone(),
            })
            .collect();
        let mut compose = BTreeMap::new();
        for (&(g, f), &h) in &self.compose {
            compose.insert(format!("{}|{}", self.morphisms[g].name, self.morphisms[f].name), self.arrow_name(h));
        }
        serde_json::to_value(CategoryJson {
            objects: self.objects.clone(),
            morphisms,
            compose,
        })
        .expect("serializable")
    }

    fn saturate(&mut self) -> Result<()> {
        loop {
            self.fill_by_associativity()?;
            let missing = self.composable_pairs().into_iter().find(|p| !self.compose.contains_key(p));
            let Some((g, f)) = missing else { break };
            if self.morphisms.len() >= MAX_MORPHISMS {
                return Err(Error::Invalid("composition table does not close on finitely many morphisms".into()));
            }
            let mut name = format!("{}*{}", self.morphisms[g].name, self.morphisms[f].name);
            while self.morphisms.iter().any(|m| m.name == name) {
                name.push('\'');
            }
            let (src, tgt) = (self.morphisms[f].src, self.morphisms[g].tgt);
            self.morphisms.push(Morphism { name, src, tgt });
            self.compose.insert((g, f), Arrow::Mor(self.morphisms.len() - 1));
        }
        for (h, g, f) in self.composable_triples() {
            let l = self.partial(Arrow::Mor(h), Arrow::Mor(g)).and_then(|x| self.partial(x, Arrow::Mor(f)));
            let r = self.partial(Arrow::Mor(g), Arrow::Mor(f)).and_then(|x| self.partial(Arrow::Mor(h), x));
            if l != r {
                return Err(self.non_associative(h, g, f, l, r));
            }
        }
        Ok(())
    }

    fn non_associative(&self, h: usize, g: usize, f: usize, l: Option<Arrow>, r: Option<Arrow>) -> Error {
        let show = |a: Option<Arrow>| a.map_or("?".to_string(), |a| self.arrow_name(a));
        Error::Schema(format!(
            "composition is not associative: ({}{}){} = {} but {}({}{}) = {}",
            self.morphisms[h].name,
            self.morphisms[g].name,
            self.morphisms[f].name,
            show(l),
            self.morphisms[h].name,
            self.morphisms[g].name,
            self.morphisms[f].name,
            show(r)
        ))
    }

    fn partial(&self, g: Arrow, f: Arrow) -> Option<Arrow> {
        match (g, f) {
            (Arrow::Id(_), a) | (a, Arrow::Id(_)) => Some(a),
            (Arrow::Mor(g), Arrow::Mor(f)) => self.compose.get(&(g, f)).copied(),
        }
    }

    fn fill_by_associativity(&mut self) -> Result<()> {
        loop {
            let mut changed = false;
            for (h, g, f) in self.composable_triples() {
                let hg = self.partial(Arrow::Mor(h), Arrow::Mor(g));
                let gf = self.partial(Arrow::Mor(g), Arrow::Mor(f));
                let l = hg.and_then(|x| self.partial(x, Arrow::Mor(f)));
                let r = gf.and_then(|x| self.partial(Arrow::Mor(h), x));
                match (l, r) {
                    (Some(l), Some(r)) if l != r => return Err(self.non_associative(h, g, f, Some(l), Some(r))),
                    (Some(l), None) => {
                        if let Some(Arrow::Mor(x)) = gf {
                            self.compose.insert((h, x), l);
                            changed = true;
                        }
                    }
                    (None, Some(r)) => {
                        if let Some(Arrow::Mor(x)) = hg {
                            self.compose.insert((x, f), r);
                            changed = true;
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (g, gm) in self.morphisms.iter().enumerate() {
            for (f, fm) in self.morphisms.iter().enumerate() {
                if gm.src == fm.tgt {
                    out.push((g, f));
                }
            }
        }
        out
    }

    fn composable_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (g, f) in self.composable_pairs() {
            for (h, hm) in self.morphisms.iter().enumerate() {
                if hm.src == self.morphisms[g].tgt {
                    out.push((h, g, f));
                }
            }
        }
        out
    }

    fn compute_acyclic(&self) -> bool {
        let n = self.objects.len();
        let mut indeg = vec![0usize; n];
        for m in &self.morphisms {
            if m.src == m.tgt {
                return false;
            }
            indeg[m.tgt] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for m in self.morphisms.iter().filter(|m| m.src == v) {
                indeg[m.tgt] -= 1;
                if indeg[m.tgt] == 0 {
                    stack.push(m.tgt);
                }
            }
        }
        seen == n
    }

    /// No composable cycle of non-identity morphisms.
    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn src(&self, a: Arrow) -> usize {
        match a {
            Arrow::Id(v) => v,
            Arrow::Mor(m) => self.morphisms[m].src,
        }
    }

    pub fn tgt(&self, a: Arrow) -> usize {
        match a {
            Arrow::Id(v) => v,
            Arrow::Mor(m) => self.morphisms[m].tgt,
        }
    }

    pub fn arrow_name(&self, a: Arrow) -> String {
        match a {
            Arrow::Id(v) => format!("id_{}", self.objects[v]),
            Arrow::Mor(m) => self.morphisms[m].name.clone(),
        }
    }

    /// `g ∘ f`; `None` when not composable.
    pub fn compose(&self, g: Arrow, f: Arrow) -> Option<Arrow> {
        if self.src(g) != self.tgt(f) {
            return None;
        }
        self.partial(g, f)
    }

    /// Composite of a root-first word of arrows; `None` for an empty word.
    pub fn compose_word(&self, word: &[Arrow]) -> Option<Arrow> {
        let mut it = word.iter().rev();
        let mut acc = *it.next()?;
        for &g in it {
            acc = self.compose(g, acc)?;
        }
        Some(acc)
    }

    /// All morphisms `v → w`, the identity first.
    pub fn hom(&self, v: usize, w: usize) -> Vec<Arrow> {
        let mut out = Vec::new();
        if v == w {
            out.push(Arrow::Id(v));
        }
        out.extend(
            self.morphisms
                .iter()
                .enumerate()
                .filter(|(_, m)| m.src == v && m.tgt == w)
                .map(|(i, _)| Arrow::Mor(i)),
        );
        out
    }

    /// Chains `(f_n, …, f_1)` (root first) of composable non-identity
    /// morphisms with `1 ≤ n ≤ max_len`, ordered by length then lexicographically.
    pub fn chains(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut layer: Vec<Vec<usize>> = (0..self.morphisms.len()).map(|m| vec![m]).collect();
        for _ in 0..max_len {
            if layer.is_empty() {
                break;
            }
            out.extend(layer.iter().cloned());
            let mut next = Vec::new();
            for c in &layer {
                let first = self.morphisms[c[0]].tgt;
                for (g, gm) in self.morphisms.iter().enumerate() {
                    if gm.src == first {
                        let mut d = vec![g];
                        d.extend(c.iter().copied());
                        next.push(d);
                    }
                }
            }
            next.sort();
            layer = next;
        }
        out
    }

    /// Number of morphisms in the longest chain of non-identity morphisms
    /// (`None` when not acyclic).
    pub fn longest_chain(&self) -> Option<usize> {
        if !self.acyclic {
            return None;
        }
        let mut best = 0;
        let mut layer: Vec<usize> = (0..self.objects.len()).collect();
        loop {
            let mut next: Vec<usize> = self
                .morphisms
                .iter()
                .filter(|m| layer.contains(&m.src))
                .map(|m| m.tgt)
                .collect();
            next.sort();
            next.dedup();
            if next.is_empty() {
                return Some(best);
            }
            best += 1;
            layer = next;
        }
    }
}

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use serde::{Deserialize, Serialize};

use super::ptree::{instantiate, matches, KTree, OpGen, PTree};
use crate::error::{Error, Result};
use crate::linalg::{int, one, parse_scalar, render, sign, Scalar};

/// A rewriting rule `lhs → coefficient · rhs` between planar trees with the
/// same leaves.
#[derive(Clone, Debug, PartialEq)]
pub struct Rewrite {
    pub lhs: PTree,
    pub rhs: PTree,
    pub coefficient: Scalar,
}

/// A linear combination of planar trees of one arity.
pub type Planar = BTreeMap<PTree, Scalar>;

/// A single-coloured operad given by generating operations, a terminating
/// rewriting table to normal forms and a differential on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct OperadPresentation {
    pub name: String,
    pub generators: Vec<OpGen>,
    pub rewrites: Vec<Rewrite>,
    pub differential: BTreeMap<usize, Planar>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    generators: Vec<OpGen>,
    #[serde(default)]
    rewrites: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    differential: BTreeMap<String, Vec<(String, String)>>,
}

const MAX_REWRITE_STEPS: usize = 100_000;

pub const BUILTIN_OPERADS: [&str; 2] = ["ass", "ass_infinity"];

pub(crate) fn add(p: &mut Planar, t: PTree, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match p.entry(t) {
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

impl OperadPresentation {
    pub fn new(name: impl Into<String>, generators: Vec<OpGen>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if g.arity < 2 {
                return Err(Error::Schema(format!("generator {} must have arity at least 2", g.name)));
            }
            if g.name.is_empty() || g.name.contains(['(', ')', ',']) || g.name.chars().any(char::is_whitespace) {
                return Err(Error::Schema(format!("bad generator name {:?}", g.name)));
            }
            if g.name.parse::<u32>().is_ok() || !seen.insert(g.name.clone()) {
                return Err(Error::Schema(format!("bad or duplicate generator name {:?}", g.name)));
            }
        }
        Ok(OperadPresentation {
            name: name.into(),
            generators,
            rewrites: Vec::new(),
            differential: BTreeMap::new(),
        })
    }

    /// Associative operad: one binary operation `mu2`, normal forms are
    /// left combs.
    pub fn ass() -> Self {
        let mut p = Self::new(
            "ass",
            vec![OpGen {
                name: "mu2".into(),
                arity: 2,
                degree: 0,
            }],
        )
        .expect("valid");
        p.add_rewrite("mu2(1, mu2(2, 3))", "mu2(mu2(1, 2), 3)", one()).expect("valid");
        p
    }

    /// The minimal resolution of `ass` up to arity `max_arity`: free on
    /// `mu_n` of degree `n − 2`, with
    /// `d mu_n = Σ (−1)^{r+st} mu_{r+1+t} ∘_{r+1} mu_s`.
    pub fn ass_infinity(max_arity: usize) -> Self {
        let gens = (2..=max_arity.max(2))
            .map(|n| OpGen {
                name: format!("mu{n}"),
                arity: n,
                degree: n - 2,
            })
            .collect();
        let mut p = Self::new("ass_infinity", gens).expect("valid");
        for n in 3..=max_arity {
            let mut value = Planar::new();
            for s in 2..n {
                for r in 0..=n - s {
                    let t = n - s - r;
                    let outer = r + 1 + t;
                    let inner = PTree::Op(s - 2, (r as u32..(r + s) as u32).map(PTree::Leaf).collect());
                    let mut children: Vec<PTree> = (0..r as u32).map(PTree::Leaf).collect();
                    children.push(inner);
                    children.extend(((r + s) as u32..n as u32).map(PTree::Leaf));
                    add(&mut value, PTree::Op(outer - 2, children), sign((r + s * t) % 2 == 1));
                }
            }
            p.differential.insert(n - 2, value);
        }
        p
    }

    /// A built-in presentation by name; `ass_infinity` is cut at `max_arity`.
    pub fn builtin(name: &str, max_arity: usize) -> Result<Self> {
        match name {
            "ass" => Ok(Self::ass()),
            "ass_infinity" => Ok(Self::ass_infinity(max_arity)),
            _ => Err(Error::Schema(format!("unknown built-in operad {name:?}"))),
        }
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn parse(&self, text: &str) -> Result<PTree> {
        PTree::parse(text, &self.generators)
    }

    pub fn add_rewrite(&mut self, lhs: &str, rhs: &str, coefficient: Scalar) -> Result<()> {
        let (l, r) = (self.parse(lhs)?, self.parse(rhs)?);
        if l.arity() != r.arity() || l.degree(&self.generators) != r.degree(&self.generators) {
            return Err(Error::Schema(format!("rewrite {lhs} -> {rhs} changes arity or degree")));
        }
        if matches!(l, PTree::Leaf(_)) {
            return Err(Error::Schema("a rewrite must start with a generator".into()));
        }
        self.rewrites.push(Rewrite {
            lhs: l,
            rhs: r,
            coefficient,
        });
        Ok(())
    }

    pub fn set_differential(&mut self, g: usize, value: Planar) -> Result<()> {
        let info = &self.generators[g];
        for t in value.keys() {
            if t.arity() != info.arity || t.degree(&self.generators) + 1 != info.degree {
                return Err(Error::Schema(format!("d({}) has a term of the wrong arity or degree", info.name)));
            }
        }
        if value.is_empty() {
            self.differential.remove(&g);
        } else {
            self.differential.insert(g, value);
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: PresentationJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let mut p = Self::new(j.name.unwrap_or_else(|| "user".into()), j.generators)?;
        for r in &j.rewrites {
            let c = match r.len() {
                2 => one(),
                3 => parse_scalar(&r[2]).ok_or_else(|| Error::Schema(format!("bad coefficient {:?}", r[2])))?,
                _ => return Err(Error::Schema("a rewrite is [lhs, rhs] or [lhs, rhs, coefficient]".into())),
            };
            p.add_rewrite(&r[0], &r[1], c)?;
        }
        for (name, terms) in &j.differential {
            let g = p
                .generator(name)
                .ok_or_else(|| Error::Schema(format!("differential of unknown generator {name}")))?;
            let mut value = Planar::new();
            for (t, c) in terms {
                let c = parse_scalar(c).ok_or_else(|| Error::Schema(format!("bad coefficient {c:?}")))?;
                add(&mut value, p.parse(t)?, c);
            }
            p.set_differential(g, value)?;
        }
        p.check_confluence(4)?;
        Ok(p)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let g = &self.generators;
        let j = PresentationJson {
            name: Some(self.name.clone()),
            generators: g.clone(),
            rewrites: self
                .rewrites
                .iter()
                .map(|r| vec![r.lhs.display(g), r.rhs.display(g), render(&r.coefficient)])
                .collect(),
            differential: self
                .differential
                .iter()
                .map(|(k, v)| (g[*k].name.clone(), v.iter().map(|(t, c)| (t.display(g), render(c))).collect()))
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    /// One rewriting step at the first match in preorder (outermost first)
    /// or at the last one (innermost last).
    fn step(&self, t: &PTree, outermost: bool) -> Option<(PTree, Scalar)> {
        if outermost {
            if let Some(r) = self.step_here(t) {
                return Some(r);
            }
        }
        if let PTree::Op(g, cs) = t {
            let order: Vec<usize> = if outermost { (0..cs.len()).collect() } else { (0..cs.len()).rev().collect() };
            for i in order {
                if let Some((c, x)) = self.step(&cs[i], outermost) {
                    let mut cs = cs.clone();
                    cs[i] = c;
                    return Some((PTree::Op(*g, cs), x));
                }
            }
        }
        if !outermost {
            return self.step_here(t);
        }
        None
    }

    fn step_here(&self, t: &PTree) -> Option<(PTree, Scalar)> {
        for r in &self.rewrites {
            let k = r.lhs.arity();
            let mut binds = vec![None; k];
            if matches(&r.lhs, t, &mut binds) {
                let binds: Vec<PTree> = binds.into_iter().map(|b| b.expect("bound")).collect();
                let (l, lo) = instantiate(&r.lhs, &binds).finish(&self.generators);
                let (rhs, ro) = instantiate(&r.rhs, &binds).finish(&self.generators);
                debug_assert_eq!(&l, t);
                return Some((rhs, sign(lo != ro) * &r.coefficient));
            }
        }
        None
    }

    fn normal_form_with(&self, t: &PTree, outermost: bool) -> Result<(PTree, Scalar)> {
        let mut t = t.clone();
        let mut c = one();
        for _ in 0..MAX_REWRITE_STEPS {
            match self.step(&t, outermost) {
                Some((s, x)) => {
                    t = s;
                    c *= x;
                }
                None => return Ok((t, c)),
            }
        }
        Err(Error::Schema(format!("rewriting of {} does not terminate", t.display(&self.generators))))
    }

    /// The normal form of a tree with its coefficient.
    pub fn normal_form(&self, t: &PTree) -> Result<(PTree, Scalar)> {
        self.normal_form_with(t, true)
    }

    pub fn is_normal(&self, t: &PTree) -> bool {
        self.step(t, true).is_none()
    }

    pub fn normalize(&self, p: &Planar) -> Result<Planar> {
        let mut out = Planar::new();
        for (t, c) in p {
            let (s, x) = self.normal_form(t)?;
            add(&mut out, s, c * x);
        }
        Ok(out)
    }

    /// Planar trees with leaves `0..arity` in planar order and the given
    /// degree.
    pub fn shapes(&self, arity: usize, degree: usize) -> Vec<PTree> {
        let mut memo = BTreeMap::new();
        let mut out: Vec<PTree> = self.shapes_rec(arity, degree, &mut memo).into_iter().map(|t| t.shape()).collect();
        out.sort();
        out
    }

    fn shapes_rec(&self, arity: usize, degree: usize, memo: &mut BTreeMap<(usize, usize), Vec<PTree>>) -> Vec<PTree> {
        if let Some(v) = memo.get(&(arity, degree)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if arity == 1 && degree == 0 {
            out.push(PTree::Leaf(0));
        }
        for (g, info) in self.generators.iter().enumerate() {
            if info.arity > arity || info.degree > degree {
                continue;
            }
            // children arities summing to `arity`, degrees summing to the rest
            let mut acc: Vec<(Vec<PTree>, usize, usize)> = vec![(Vec::new(), 0, 0)];
            for i in 0..info.arity {
                let left = info.arity - i - 1;
                let mut next = Vec::new();
                for (cs, a, d) in &acc {
                    for ca in 1..=arity - a - left {
                        for cd in 0..=degree - info.degree - d {
                            if i + 1 == info.arity && (a + ca != arity || d + cd + info.degree != degree) {
                                continue;
                            }
                            for c in self.shapes_rec(ca, cd, memo) {
                                let mut cs = cs.clone();
                                cs.push(c);
                                next.push((cs, a + ca, d + cd));
                            }
                        }
                    }
                }
                acc = next;
            }
            for (cs, _, _) in acc {
                out.push(PTree::Op(g, cs));
            }
        }
        memo.insert((arity, degree), out.clone());
        out
    }

    /// Normal-form shapes of the given arity and degree: a basis of the
    /// planar part of the operad.
    pub fn normal_shapes(&self, arity: usize, degree: usize) -> Vec<PTree> {
        self.shapes(arity, degree).into_iter().filter(|t| self.is_normal(t)).collect()
    }

    /// Compares outermost-first and innermost-last rewriting on every tree
    /// up to `max_arity`; a difference means the table is not confluent.
    pub fn check_confluence(&self, max_arity: usize) -> Result<()> {
        if self.rewrites.is_empty() {
            return Ok(());
        }
        let max_degree = self.generators.iter().map(|g| g.degree).max().unwrap_or(0) * max_arity;
        for n in 2..=max_arity {
            for d in 0..=max_degree {
                for t in self.shapes(n, d) {
                    let a = self.normal_form_with(&t, true)?;
                    let b = self.normal_form_with(&t, false)?;
                    if a != b {
                        return Err(Error::Schema(format!(
                            "rewriting table is not confluent: {} has normal forms {}*{} and {}*{}",
                            t.display(&self.generators),
                            render(&a.1),
                            a.0.display(&self.generators),
                            render(&b.1),
                            b.0.display(&self.generators)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `d` on a planar tree: each vertex replaced by its value, with the
    /// sign of the vertices before it and the Koszul sign of reassembly.
    pub fn d_tree(&self, t: &PTree) -> Planar {
        let mut out = Planar::new();
        let n = t.weight();
        for p in 0..n {
            let mut before = 0;
            let mut found = None;
            collect_vertex(t, p, &mut 0, &mut before, &self.generators, &mut found);
            let Some(g) = found else { continue };
            let Some(value) = self.differential.get(&g) else { continue };
            for (v, c) in value {
                let mut idx = 0;
                let kt = replace_vertex(t, p, v, &mut idx);
                let (s, odd) = kt.finish(&self.generators);
                add(&mut out, s, sign((before % 2 == 1) != odd) * c);
            }
        }
        out
    }

    pub fn d(&self, p: &Planar) -> Planar {
        let mut out = Planar::new();
        for (t, c) in p {
            for (s, x) in self.d_tree(t) {
                add(&mut out, s, c * x);
            }
        }
        out
    }

    /// Generators whose differential does not square to zero after
    /// normalization.
    pub fn square_defects(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for (g, v) in &self.differential {
            if !self.normalize(&self.d(v))?.is_empty() {
                out.push(self.generators[*g].name.clone());
            }
        }
        Ok(out)
    }

    pub fn display(&self, p: &Planar) -> String {
        if p.is_empty() {
            return "0".into();
        }
        p.iter()
            .map(|(t, c)| format!("{}*{}", render(c), t.display(&self.generators)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `Σ c · t` from `(tree, integer)` pairs, for tests and built-ins.
    pub fn planar(&self, terms: &[(&str, i64)]) -> Result<Planar> {
        let mut out = Planar::new();
        for (t, c) in terms {
            add(&mut out, self.parse(t)?, int(*c));
        }
        Ok(out)
    }
}

/// Finds the generator at preorder position `p` and the total degree of the
/// vertices before it.
fn collect_vertex(t: &PTree, p: usize, idx: &mut usize, before: &mut usize, gens: &[OpGen], found: &mut Option<usize>) {
    if found.is_some() {
        return;
    }
    if let PTree::Op(g, cs) = t {
        if *idx == p {
            *found = Some(*g);
            return;
        }
        *before += gens[*g].degree;
        *idx += 1;
        for c in cs {
            collect_vertex(c, p, idx, before, gens, found);
        }
    }
}

/// `t` with the vertex at preorder position `p` replaced by `value`, whose
/// leaves are filled by the children of that vertex. Keys keep the original
/// preorder with the value's vertices in place of the replaced one.
fn replace_vertex(t: &PTree, p: usize, value: &PTree, idx: &mut usize) -> KTree {
    match t {
        PTree::Leaf(l) => KTree::Leaf(*l),
        PTree::Op(g, cs) => {
            let me = *idx;
            *idx += 1;
            let children: Vec<KTree> = cs.iter().map(|c| replace_vertex(c, p, value, idx)).collect();
            if me != p {
                return KTree::Op(*g, vec![me, 0], children);
            }
            let mut next = 0;
            fill(value, me, &children, &mut next)
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ass_normal_forms_are_left_combs() {
        let a = OperadPresentation::ass();
        for n in 2..=5 {
            let shapes = a.normal_shapes(n, 0);
            assert_eq!(shapes.len(), 1);
        }
        // Catalan numbers of planar binary trees
        assert_eq!(a.shapes(4, 0).len(), 5);
        assert_eq!(a.shapes(5, 0).len(), 14);
        let t = a.parse("mu2(1, mu2(mu2(2, 3), 4))").unwrap();
        let (s, c) = a.normal_form(&t).unwrap();
        assert_eq!(s.display(&a.generators), "mu2(mu2(mu2(1, 2), 3), 4)");
        assert_eq!(c, one());
        a.check_confluence(5).unwrap();
    }

    #[test]
    fn ass_infinity_squares_to_zero() {
        let a = OperadPresentation::ass_infinity(6);
        assert!(a.square_defects().unwrap().is_empty());
        // d mu3 = mu2(mu2(1, 2), 3) − mu2(1, mu2(2, 3))
        let d3 = &a.differential[&1];
        assert_eq!(d3, &a.planar(&[("mu2(mu2(1, 2), 3)", 1), ("mu2(1, mu2(2, 3))", -1)]).unwrap());
        // planar trees with n leaves and vertices of arity >= 2: little Schröder numbers
        let total: usize = (0..=2).map(|d| a.shapes(4, d).len()).sum();
        assert_eq!(total, 11);
    }

    #[test]
    fn non_confluent_tables_are_rejected() {
        let text = r#"{"generators":[{"name":"a","arity":2},{"name":"b","arity":2},{"name":"c","arity":3}],
            "rewrites":[["a(b(1, 2), 3)", "c(1, 2, 3)"], ["b(b(1, 2), 3)", "b(1, b(2, 3))"]]}"#;
        assert!(OperadPresentation::from_json(text).is_err());
        let ok = r#"{"generators":[{"name":"mu2","arity":2,"degree":0}],"rewrites":[["mu2(mu2(1,2),3)","mu2(1,mu2(2,3))"]]}"#;
        let p = OperadPresentation::from_json(ok).unwrap();
        assert_eq!(p.normal_shapes(4, 0).len(), 1);
        let again = OperadPresentation::from_json(&p.to_json().to_string()).unwrap();
        assert_eq!(again, p);
    }
}

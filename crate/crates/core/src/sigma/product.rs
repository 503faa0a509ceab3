use std::collections::{BTreeMap, HashMap};

use super::{ArityPart, BasisElement, ColouredSigmaModule};
use crate::error::{invalid, Result};
use crate::linalg::{sign, Echelon, Scalar, SparseVec};
use crate::perm::{block_perm, cross, Permutation};

/// A spanning element `a ⊗ b_1 ⊗ ⋯ ⊗ b_m ⊗ σ` of `A ∘ B`: `a` indexes the
/// basis of `A(m)`, each `b_i` is `(arity, index)` in `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductTerm {
    pub a: usize,
    pub b: Vec<(usize, usize)>,
    pub sigma: Permutation,
}

impl ProductTerm {
    pub fn lengths(&self) -> Vec<usize> {
        self.b.iter().map(|&(l, _)| l).collect()
    }

    pub fn arity(&self) -> usize {
        self.sigma.degree()
    }
}

/// `A ∘ B` truncated to a maximal arity, together with the quotient data
/// needed to bring any spanning term to normal form.
pub struct CompositionProduct {
    pub module: ColouredSigmaModule,
    terms: Vec<ProductTerm>,
    index: HashMap<ProductTerm, usize>,
    echelon: Echelon,
    local: Vec<Option<usize>>,
}

struct Factors<'a> {
    a: &'a ColouredSigmaModule,
    b: &'a ColouredSigmaModule,
}

impl<'a> Factors<'a> {
    fn a_el(&self, t: &ProductTerm) -> &BasisElement {
        &self.a.arities[&t.b.len()].basis[t.a]
    }

    fn b_el(&self, (l, j): (usize, usize)) -> &BasisElement {
        &self.b.arities[&l].basis[j]
    }

    fn word(&self, t: &ProductTerm) -> Vec<usize> {
        let w: Vec<usize> = t.b.iter().flat_map(|&b| self.b_el(b).ins.clone()).collect();
        t.sigma.act_on(&w)
    }

    fn degree(&self, t: &ProductTerm) -> usize {
        self.a_el(t).degree + t.b.iter().map(|&b| self.b_el(b).degree).sum::<usize>()
    }

    fn name(&self, t: &ProductTerm) -> String {
        let bs: Vec<&str> = t.b.iter().map(|&b| self.b_el(b).name.as_str()).collect();
        format!("{}({}){}", self.a_el(t).name, bs.join(","), t.sigma)
    }
}

fn enumerate_terms(f: &Factors, max_arity: usize) -> Vec<ProductTerm> {
    let mut terms = Vec::new();
    for (&m, part) in &f.a.arities {
        if m == 0 || m > max_arity {
            continue;
        }
        for (ai, a) in part.basis.iter().enumerate() {
            // choices of b_i with output colour ins(a)_i
            let mut partial: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
            for &c in &a.ins {
                let mut next = Vec::new();
                for p in &partial {
                    let used: usize = p.iter().map(|&(l, _)| l).sum();
                    for (&l, bp) in &f.b.arities {
                        if l == 0 || used + l > max_arity {
                            continue;
                        }
                        for (bj, b) in bp.basis.iter().enumerate() {
                            if b.out == c {
                                let mut q = p.clone();
                                q.push((l, bj));
                                next.push(q);
                            }
                        }
                    }
                }
                partial = next;
            }
            for b in partial {
                let n: usize = b.iter().map(|&(l, _)| l).sum();
                for sigma in Permutation::all(n) {
                    terms.push(ProductTerm {
                        a: ai,
                        b: b.clone(),
                        sigma,
                    });
                }
            }
        }
    }
    terms.sort_by(|x, y| (x.arity(), x).cmp(&(y.arity(), y)));
    terms
}

impl CompositionProduct {
    fn lookup(&self, t: &ProductTerm) -> usize {
        self.index[t]
    }

    /// Linear combinations of terms that the coinvariants identify with `t`,
    /// one per group generator.
    fn moves(f: &Factors, t: &ProductTerm) -> Vec<Vec<(ProductTerm, Scalar)>> {
        let mut out = Vec::new();
        let lengths = t.lengths();
        for (i, &(l, bj)) in t.b.iter().enumerate() {
            for j in 0..l.saturating_sub(1) {
                let blocks: Vec<Permutation> = lengths
                    .iter()
                    .enumerate()
                    .map(|(k, &lk)| {
                        if k == i {
                            Permutation::transposition(lk, j)
                        } else {
                            Permutation::identity(lk)
                        }
                    })
                    .collect();
                let lambda = cross(&blocks);
                let sigma = lambda.inverse().then(&t.sigma);
                let image = &f.b.arities[&l].transpositions[j][bj];
                out.push(
                    image
                        .iter()
                        .map(|(k, c)| {
                            let mut b = t.b.clone();
                            b[i] = (l, k);
                            (
                                ProductTerm {
                                    a: t.a,
                                    b,
                                    sigma: sigma.clone(),
                                },
                                c.clone(),
                            )
                        })
                        .collect(),
                );
            }
        }
        let m = t.b.len();
        for j in 0..m.saturating_sub(1) {
            let tau = Permutation::transposition(m, j);
            let sigma = block_perm(&tau, &lengths).inverse().then(&t.sigma);
            let b = tau.act_on(&t.b);
            let odd = f.b_el(t.b[j]).degree % 2 == 1 && f.b_el(t.b[j + 1]).degree % 2 == 1;
            let image = &f.a.arities[&m].transpositions[j][t.a];
            out.push(
                image
                    .iter()
                    .map(|(k, c)| {
                        (
                            ProductTerm {
                                a: k,
                                b: b.clone(),
                                sigma: sigma.clone(),
                            },
                            c * sign(odd),
                        )
                    })
                    .collect(),
            );
        }
        out
    }

    fn vector(&self, combo: &[(ProductTerm, Scalar)]) -> SparseVec {
        SparseVec::from_pairs(combo.iter().map(|(t, c)| (self.lookup(t), c.clone())))
    }

    /// Normal form of a combination of spanning terms, over the basis of the
    /// arity part of `module`.
    pub fn normalize(&self, combo: &[(ProductTerm, Scalar)]) -> SparseVec {
        let (rem, _) = self.echelon.reduce(&self.vector(combo));
        rem.map_indices(|i| self.local[i].expect("remainder lies on survivors"))
    }

    pub fn normalize_term(&self, t: &ProductTerm) -> SparseVec {
        self.normalize(&[(t.clone(), crate::linalg::one())])
    }

    pub fn contains(&self, t: &ProductTerm) -> bool {
        self.index.contains_key(t)
    }

    /// The spanning term a basis element of `module` stands for.
    pub fn representative(&self, arity: usize, j: usize) -> &ProductTerm {
        let i = self
            .local
            .iter()
            .enumerate()
            .filter(|(i, l)| l.is_some() && self.terms[*i].arity() == arity)
            .nth(j)
            .map(|(i, _)| i)
            .expect("basis index in range");
        &self.terms[i]
    }
}

/// The composition product `A ∘ B` in arities `1..=max_arity`.
pub fn compose_product(
    a: &ColouredSigmaModule,
    b: &ColouredSigmaModule,
    max_arity: usize,
) -> Result<CompositionProduct> {
    if a.colours != b.colours {
        return Err(invalid("composition product needs the same colours on both sides"));
    }
    let f = Factors { a, b };
    let terms = enumerate_terms(&f, max_arity);
    let index: HashMap<ProductTerm, usize> =
        terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let mut cp = CompositionProduct {
        module: ColouredSigmaModule {
            colours: a.colours.clone(),
            arities: BTreeMap::new(),
        },
        terms,
        index,
        echelon: Echelon::new(),
        local: Vec::new(),
    };
    for t in &cp.terms {
        for mv in CompositionProduct::moves(&f, t) {
            let rel = SparseVec::unit(cp.lookup(t)).sub(&cp.vector(&mv));
            cp.echelon.insert(rel);
        }
    }
    let mut local = vec![None; cp.terms.len()];
    let mut parts: BTreeMap<usize, ArityPart> = BTreeMap::new();
    for (i, t) in cp.terms.iter().enumerate() {
        if cp.echelon.is_pivot(i) {
            continue;
        }
        let part = parts.entry(t.arity()).or_default();
        local[i] = Some(part.basis.len());
        part.basis.push(BasisElement {
            name: f.name(t),
            degree: f.degree(t),
            out: f.a_el(t).out,
            ins: f.word(t),
        });
    }
    cp.local = local;
    let has_d = a.has_differential() || b.has_differential();
    let mut transpositions: BTreeMap<usize, Vec<Vec<SparseVec>>> = BTreeMap::new();
    let mut differentials: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
    for (i, t) in cp.terms.iter().enumerate() {
        if cp.local[i].is_none() {
            continue;
        }
        let n = t.arity();
        let ts = transpositions
            .entry(n)
            .or_insert_with(|| vec![Vec::new(); n.saturating_sub(1)]);
        for (k, col) in ts.iter_mut().enumerate() {
            let moved = ProductTerm {
                sigma: t.sigma.then(&Permutation::transposition(n, k)),
                ..t.clone()
            };
            col.push(cp.normalize_term(&moved));
        }
        if has_d {
            let combo = product_differential(&f, t);
            differentials.entry(n).or_default().push(cp.normalize(&combo));
        }
    }
    for (n, part) in parts.iter_mut() {
        part.transpositions = transpositions.remove(n).unwrap_or_default();
        if has_d {
            part.differential = Some(differentials.remove(n).unwrap_or_default());
        }
    }
    cp.module = ColouredSigmaModule::new(a.colours.clone(), parts)?;
    Ok(cp)
}

fn product_differential(f: &Factors, t: &ProductTerm) -> Vec<(ProductTerm, Scalar)> {
    let mut out = Vec::new();
    let m = t.b.len();
    let da = f.a.arities[&m].d(&SparseVec::unit(t.a));
    for (k, c) in da.iter() {
        out.push((ProductTerm { a: k, ..t.clone() }, c.clone()));
    }
    let mut before = f.a_el(t).degree;
    for (i, &(l, bj)) in t.b.iter().enumerate() {
        let db = f.b.arities[&l].d(&SparseVec::unit(bj));
        for (k, c) in db.iter() {
            let mut b = t.b.clone();
            b[i] = (l, k);
            out.push((
                ProductTerm {
                    a: t.a,
                    b,
                    sigma: t.sigma.clone(),
                },
                c * sign(before % 2 == 1),
            ));
        }
        before += f.b_el((l, bj)).degree;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethEntry {
    pub arity: usize,
    pub out: usize,
    pub ins: Vec<usize>,
    pub degree: usize,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethReport {
    pub entries: Vec<KunnethEntry>,
}

impl KunnethReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.lhs == e.rhs)
    }
}

/// Compares `dim H(A ∘ B)` with `dim H(A) ∘ H(B)` slice by slice.
pub fn kunneth_check(
    a: &ColouredSigmaModule,
    b: &ColouredSigmaModule,
    max_arity: usize,
) -> Result<KunnethReport> {
    let lhs = compose_product(a, b, max_arity)?.module.homology()?.dims();
    let rhs = compose_product(&a.homology()?, &b.homology()?, max_arity)?
        .module
        .dims();
    let mut keys: Vec<_> = lhs.keys().chain(rhs.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    let entries = keys
        .into_iter()
        .map(|k| KunnethEntry {
            lhs: lhs.get(&k).copied().unwrap_or(0),
            rhs: rhs.get(&k).copied().unwrap_or(0),
            arity: k.0,
            out: k.1,
            ins: k.2,
            degree: k.3,
        })
        .collect();
    Ok(KunnethReport { entries })
}

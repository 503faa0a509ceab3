//! Coloured Σ-modules with explicit symmetric group actions.

mod json;
mod product;
pub mod random;

use std::collections::{BTreeMap, HashSet};

pub use product::{compose_product, kunneth_check, CompositionProduct, KunnethEntry, KunnethReport, ProductTerm};

use crate::error::{invalid, verification, Result};
use crate::linalg::{ChainComplex, Echelon, Insertion, SparseVec};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: usize,
    pub out: usize,
    pub ins: Vec<usize>,
}

/// The arity-`n` part: a basis, the actions of `s_1, …, s_{n-1}` and an
/// optional differential, all given by columns.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ArityPart {
    pub basis: Vec<BasisElement>,
    pub transpositions: Vec<Vec<SparseVec>>,
    pub differential: Option<Vec<SparseVec>>,
}

impl ArityPart {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Right action of a permutation, applied through its transposition word.
    pub fn act(&self, v: &SparseVec, sigma: &Permutation) -> SparseVec {
        let mut out = v.clone();
        for i in sigma.transposition_word() {
            out = out.apply(&self.transpositions[i]);
        }
        out
    }

    pub fn act_basis(&self, j: usize, sigma: &Permutation) -> SparseVec {
        self.act(&SparseVec::unit(j), sigma)
    }

    pub fn d(&self, v: &SparseVec) -> SparseVec {
        match &self.differential {
            Some(cols) => v.apply(cols),
            None => SparseVec::new(),
        }
    }

    /// Basis indices grouped by colour signature `(out, ins)`.
    pub fn slices(&self) -> BTreeMap<(usize, Vec<usize>), Vec<usize>> {
        let mut out: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
        for (j, b) in self.basis.iter().enumerate() {
            out.entry((b.out, b.ins.clone())).or_default().push(j);
        }
        out
    }

    /// The chain complex on the given basis indices (closed under `d`),
    /// labelled by basis index.
    pub fn complex_on(&self, indices: &[usize]) -> ChainComplex<usize> {
        let top = indices.iter().map(|&j| self.basis[j].degree + 1).max().unwrap_or(0);
        let mut labels = vec![Vec::new(); top];
        let mut position = vec![(0, 0); self.dim()];
        for &j in indices {
            let k = self.basis[j].degree;
            position[j] = (k, labels[k].len());
            labels[k].push(j);
        }
        let d = labels
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&j| self.d(&SparseVec::unit(j)).map_indices(|i| position[i].1))
                    .collect()
            })
            .collect();
        ChainComplex { labels, d }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColouredSigmaModule {
    pub colours: Vec<String>,
    pub arities: BTreeMap<usize, ArityPart>,
}

impl ColouredSigmaModule {
    /// Builds and validates a module.
    pub fn new(colours: Vec<String>, arities: BTreeMap<usize, ArityPart>) -> Result<Self> {
        let m = ColouredSigmaModule { colours, arities };
        m.validate()?;
        Ok(m)
    }

    pub fn colour_index(&self, name: &str) -> Option<usize> {
        self.colours.iter().position(|c| c == name)
    }

    pub fn arity(&self, n: usize) -> Option<&ArityPart> {
        self.arities.get(&n)
    }

    pub fn has_differential(&self) -> bool {
        self.arities.values().any(|p| p.differential.is_some())
    }

    pub fn dims(&self) -> BTreeMap<(usize, usize, Vec<usize>, usize), usize> {
        let mut out = BTreeMap::new();
        for (&n, part) in &self.arities {
            for b in &part.basis {
                *out.entry((n, b.out, b.ins.clone(), b.degree)).or_insert(0) += 1;
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let nc = self.colours.len();
        let mut names = HashSet::new();
        for c in &self.colours {
            if !names.insert(c) {
                return Err(invalid(format!("duplicate colour {c}")));
            }
        }
        for (&n, part) in &self.arities {
            let dim = part.dim();
            let mut names = HashSet::new();
            for b in &part.basis {
                if b.ins.len() != n {
                    return Err(invalid(format!("{} has {} inputs in arity {n}", b.name, b.ins.len())));
                }
                if b.out >= nc || b.ins.iter().any(|&c| c >= nc) {
                    return Err(invalid(format!("{} uses an undeclared colour", b.name)));
                }
                if !names.insert(b.name.as_str()) {
                    return Err(invalid(format!("duplicate basis name {}", b.name)));
                }
            }
            if part.transpositions.len() != n.saturating_sub(1) {
                return Err(invalid(format!("arity {n} needs {} transposition matrices", n.saturating_sub(1))));
            }
            for (i, s) in part.transpositions.iter().enumerate() {
                check_columns(s, dim, &format!("s{} in arity {n}", i + 1))?;
                let t = Permutation::transposition(n, i);
                for (j, col) in s.iter().enumerate() {
                    let src = &part.basis[j];
                    let ins = t.act_on(&src.ins);
                    for (k, _) in col.iter() {
                        let dst = &part.basis[k];
                        if dst.out != src.out || dst.ins != ins || dst.degree != src.degree {
                            return Err(verification(
                                format!("s{} respects colours and degrees in arity {n}", i + 1),
                                format!("{} -> {}", src.name, dst.name),
                            ));
                        }
                    }
                }
            }
            let unit = |j: usize| SparseVec::unit(j);
            let apply = |v: SparseVec, i: usize| v.apply(&part.transpositions[i]);
            for j in 0..dim {
                for i in 0..part.transpositions.len() {
                    if apply(apply(unit(j), i), i) != unit(j) {
                        return Err(verification(
                            format!("s{}² = 1 in arity {n}", i + 1),
                            part.basis[j].name.clone(),
                        ));
                    }
                    if i + 1 < part.transpositions.len() {
                        let a = apply(apply(apply(unit(j), i), i + 1), i);
                        let b = apply(apply(apply(unit(j), i + 1), i), i + 1);
                        if a != b {
                            return Err(verification(
                                format!("braid relation for s{} in arity {n}", i + 1),
                                part.basis[j].name.clone(),
                            ));
                        }
                    }
                    for k in i + 2..part.transpositions.len() {
                        if apply(apply(unit(j), i), k) != apply(apply(unit(j), k), i) {
                            return Err(verification(
                                format!("s{} and s{} commute in arity {n}", i + 1, k + 1),
                                part.basis[j].name.clone(),
                            ));
                        }
                    }
                }
            }
            if let Some(d) = &part.differential {
                check_columns(d, dim, &format!("differential in arity {n}"))?;
                for (j, col) in d.iter().enumerate() {
                    let src = &part.basis[j];
                    for (k, _) in col.iter() {
                        let dst = &part.basis[k];
                        if dst.out != src.out || dst.ins != src.ins || dst.degree + 1 != src.degree {
                            return Err(verification(
                                format!("differential has degree -1 and respects colours in arity {n}"),
                                format!("{} -> {}", src.name, dst.name),
                            ));
                        }
                    }
                    if !col.apply(d).is_zero() {
                        return Err(verification(format!("d² = 0 in arity {n}"), src.name.clone()));
                    }
                    for (i, s) in part.transpositions.iter().enumerate() {
                        if col.apply(s) != s[j].apply(d) {
                            return Err(verification(
                                format!("d commutes with s{} in arity {n}", i + 1),
                                src.name.clone(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Homology with the induced actions and zero differential.
    pub fn homology(&self) -> Result<ColouredSigmaModule> {
        let mut arities = BTreeMap::new();
        for (&n, part) in &self.arities {
            let slices = part.slices();
            // per slice: echelon of boundaries then cycles, and the global
            // index of each representative
            let mut data = BTreeMap::new();
            let mut basis = Vec::new();
            for ((out, ins), indices) in &slices {
                let c = part.complex_on(indices);
                let mut per_degree = Vec::new();
                for k in 0..c.top() {
                    let mut e = Echelon::tracking();
                    for b in c.differential(k + 1) {
                        e.insert(b.clone());
                    }
                    let cycles = if k == 0 {
                        (0..c.dim(0)).map(SparseVec::unit).collect()
                    } else {
                        crate::linalg::Solver::new(&c.d[k]).kernel().to_vec()
                    };
                    let mut reps = Vec::new();
                    for z in cycles {
                        let at = e.inserted();
                        if let Insertion::Pivot(_) = e.insert(z.clone()) {
                            reps.push((at, z, basis.len()));
                            let name = format!(
                                "H{k}({};{})#{}",
                                self.colours[*out],
                                ins.iter().map(|&c| self.colours[c].as_str()).collect::<Vec<_>>().join(","),
                                reps.len()
                            );
                            basis.push(BasisElement {
                                name,
                                degree: k,
                                out: *out,
                                ins: ins.clone(),
                            });
                        }
                    }
                    per_degree.push((e, reps));
                }
                data.insert((*out, ins.clone()), (c, per_degree));
            }
            let mut transpositions = Vec::new();
            for (i, s) in part.transpositions.iter().enumerate() {
                let t = Permutation::transposition(n, i);
                let mut cols = vec![SparseVec::new(); basis.len()];
                for ((out, ins), (c, per_degree)) in &data {
                    let target_ins = t.act_on(ins);
                    let (tc, tdeg) = &data[&(*out, target_ins)];
                    let target_pos: std::collections::HashMap<usize, usize> = tc
                        .labels
                        .iter()
                        .flat_map(|row| row.iter().enumerate().map(|(p, &g)| (g, p)))
                        .collect();
                    for (k, (_, reps)) in per_degree.iter().enumerate() {
                        for (_, z, global) in reps {
                            let image: SparseVec = SparseVec::from_pairs(z.iter().flat_map(|(p, coef)| {
                                s[c.labels[k][p]].iter().map(move |(g, x)| (g, coef * x))
                            }))
                            .map_indices(|g| target_pos[&g]);
                            let (te, treps) = &tdeg[k];
                            let (rem, x) = te.reduce(&image);
                            debug_assert!(rem.is_zero());
                            let x = x.unwrap_or_default();
                            cols[*global] = SparseVec::from_pairs(
                                treps.iter().filter_map(|(at, _, g)| x.get(*at).map(|v| (*g, v.clone()))),
                            );
                        }
                    }
                }
                transpositions.push(cols);
            }
            arities.insert(
                n,
                ArityPart {
                    basis,
                    transpositions,
                    differential: None,
                },
            );
        }
        ColouredSigmaModule::new(self.colours.clone(), arities)
    }
}

fn check_columns(cols: &[SparseVec], dim: usize, what: &str) -> Result<()> {
    if cols.len() != dim {
        return Err(invalid(format!("{what} has {} columns, expected {dim}", cols.len())));
    }
    if cols.iter().any(|c| c.last().is_some_and(|(i, _)| i >= dim)) {
        return Err(invalid(format!("{what} has an entry out of range")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn swap_module(sign: i64) -> ColouredSigmaModule {
        // arity 2, one colour: basis x, y with x·s1 = sign·y
        let basis = vec![
            BasisElement { name: "x".into(), degree: 0, out: 0, ins: vec![0, 0] },
            BasisElement { name: "y".into(), degree: 0, out: 0, ins: vec![0, 0] },
        ];
        let s = vec![
            SparseVec::from_pairs([(1, int(sign))]),
            SparseVec::from_pairs([(0, int(sign))]),
        ];
        let part = ArityPart { basis, transpositions: vec![s], differential: None };
        ColouredSigmaModule::new(vec!["v".into()], BTreeMap::from([(2, part)])).unwrap()
    }

    #[test]
    fn validates_involution() {
        swap_module(1);
        swap_module(-1);
        let mut bad = swap_module(1);
        bad.arities.get_mut(&2).unwrap().transpositions[0][0] = SparseVec::from_pairs([(1, int(2))]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn homology_of_zero_differential_is_itself() {
        let m = swap_module(-1);
        let h = m.homology().unwrap();
        assert_eq!(h.arity(2).unwrap().dim(), 2);
        let s = &h.arity(2).unwrap().transpositions[0];
        assert_eq!(s[0], SparseVec::from_pairs([(1, int(-1))]));
    }
}

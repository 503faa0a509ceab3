use std::collections::HashSet;

use super::{Echelon, Insertion, Solver, SparseVec};
use crate::error::{invalid, verification, Result};

/// A finite basis of named, graded vectors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GradedSpace {
    basis: Vec<(String, usize)>,
}

impl GradedSpace {
    pub fn new(basis: Vec<(String, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (name, _) in &basis {
            if !seen.insert(name.as_str()) {
                return Err(invalid(format!("duplicate basis name {name}")));
            }
        }
        Ok(GradedSpace { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(String, usize)] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|(n, _)| n == name)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.basis.iter().map(|(_, d)| *d).max()
    }
}

/// Linear map given by the images of the source basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub shift: i32,
    pub columns: Vec<SparseVec>,
}

impl LinearMap {
    pub fn new(target_dim: usize, shift: i32, columns: Vec<SparseVec>) -> Self {
        LinearMap {
            source_dim: columns.len(),
            target_dim,
            shift,
            columns,
        }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap::new(dim, 0, (0..dim).map(SparseVec::unit).collect())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        v.apply(&self.columns)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.target_dim != self.source_dim {
            return Err(invalid("composing maps with mismatched dimensions"));
        }
        Ok(LinearMap::new(
            self.target_dim,
            self.shift + other.shift,
            other.columns.iter().map(|c| self.apply(c)).collect(),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for c in &self.columns {
            e.insert(c.clone());
        }
        e.rank()
    }
}

/// A bounded chain complex of finite-dimensional spaces.
///
/// `labels[k]` names the basis of `C_k`; `d[k][j]` is the image of the `j`-th
/// basis vector of `C_k` in `C_{k-1}` (and is empty for `k = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex<L = String> {
    pub labels: Vec<Vec<L>>,
    pub d: Vec<Vec<SparseVec>>,
}

impl<L: Clone> ChainComplex<L> {
    pub fn new(labels: Vec<Vec<L>>, d: Vec<Vec<SparseVec>>) -> Result<Self> {
        if labels.len() != d.len() {
            return Err(invalid("differential and spaces have different lengths"));
        }
        for (k, cols) in d.iter().enumerate() {
            if cols.len() != labels[k].len() {
                return Err(invalid(format!("differential in degree {k} has wrong width")));
            }
            let target = if k == 0 { 0 } else { labels[k - 1].len() };
            for c in cols {
                if c.last().is_some_and(|(i, _)| i >= target) {
                    return Err(invalid(format!("differential in degree {k} leaves its target")));
                }
            }
        }
        Ok(ChainComplex { labels, d })
    }

    /// Complex with zero differential.
    pub fn zero(labels: Vec<Vec<L>>) -> Self {
        let d = labels.iter().map(|l| vec![SparseVec::new(); l.len()]).collect();
        ChainComplex { labels, d }
    }

    pub fn top(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.labels.get(k).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.top()).map(|k| self.dim(k)).collect()
    }

    pub fn differential(&self, k: usize) -> &[SparseVec] {
        self.d.get(k).map_or(&[], Vec::as_slice)
    }

    /// The first basis vector (degree, index) with `d(d(e)) ≠ 0`, if any.
    pub fn square_defect(&self) -> Option<(usize, usize)> {
        for k in 2..self.top() {
            for (j, c) in self.d[k].iter().enumerate() {
                if !c.apply(&self.d[k - 1]).is_zero() {
                    return Some((k, j));
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub dim: usize,
    /// Cycles whose classes form a basis.
    pub reps: Vec<SparseVec>,
}

/// Homology together with the induced action of a list of operators.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyModule {
    pub groups: Vec<HomologyGroup>,
    /// `actions[g][k]` has one column per representative in degree `k`.
    pub actions: Vec<Vec<Vec<SparseVec>>>,
}

fn cycles(c: &[SparseVec], k: usize) -> Vec<SparseVec> {
    if k == 0 {
        return (0..c.len()).map(SparseVec::unit).collect();
    }
    Solver::new(c).kernel().to_vec()
}

struct Quotient {
    echelon: Echelon,
    rep_inputs: Vec<usize>,
    reps: Vec<SparseVec>,
}

fn homology_degree<L: Clone>(c: &ChainComplex<L>, k: usize) -> Quotient {
    let mut echelon = Echelon::tracking();
    for b in c.differential(k + 1) {
        echelon.insert(b.clone());
    }
    let mut reps = Vec::new();
    let mut rep_inputs = Vec::new();
    for z in cycles(&c.d[k], k) {
        let at = echelon.inserted();
        if let Insertion::Pivot(_) = echelon.insert(z.clone()) {
            rep_inputs.push(at);
            reps.push(z);
        }
    }
    Quotient {
        echelon,
        rep_inputs,
        reps,
    }
}

pub fn homology<L: Clone>(c: &ChainComplex<L>) -> Result<Vec<HomologyGroup>> {
    if let Some((k, j)) = c.square_defect() {
        return Err(verification(
            "d∘d = 0",
            format!("basis vector {j} in degree {k}"),
        ));
    }
    Ok((0..c.top())
        .map(|k| {
            let q = homology_degree(c, k);
            HomologyGroup {
                degree: k,
                dim: q.reps.len(),
                reps: q.reps,
            }
        })
        .collect())
}

/// Homology with the induced action of chain maps `actions[g][k]` (columns
/// acting on `C_k`). The maps must commute with `d`.
pub fn homology_with_action<L: Clone>(
    c: &ChainComplex<L>,
    actions: &[Vec<Vec<SparseVec>>],
) -> Result<HomologyModule> {
    check_equivariant(c, actions)?;
    if let Some((k, j)) = c.square_defect() {
        return Err(verification(
            "d∘d = 0",
            format!("basis vector {j} in degree {k}"),
        ));
    }
    let mut groups = Vec::new();
    let mut induced = vec![Vec::new(); actions.len()];
    for k in 0..c.top() {
        let q = homology_degree(c, k);
        for (g, action) in actions.iter().enumerate() {
            let cols = q
                .reps
                .iter()
                .map(|z| {
                    let image = z.apply(&action[k]);
                    let (rem, x) = q.echelon.reduce(&image);
                    debug_assert!(rem.is_zero());
                    let x = x.unwrap_or_default();
                    SparseVec::from_pairs(q.rep_inputs.iter().enumerate().filter_map(|(r, &idx)| {
                        x.get(idx).map(|c| (r, c.clone()))
                    }))
                })
                .collect();
            induced[g].push(cols);
        }
        groups.push(HomologyGroup {
            degree: k,
            dim: q.reps.len(),
            reps: q.reps,
        });
    }
    Ok(HomologyModule {
        groups,
        actions: induced,
    })
}

fn check_equivariant<L: Clone>(c: &ChainComplex<L>, actions: &[Vec<Vec<SparseVec>>]) -> Result<()> {
    for (g, action) in actions.iter().enumerate() {
        if action.len() != c.top() {
            return Err(invalid(format!("action {g} has the wrong number of degrees")));
        }
        for k in 1..c.top() {
            for (j, dj) in c.d[k].iter().enumerate() {
                let lhs = action[k][j].apply(&c.d[k]);
                let rhs = dj.apply(&action[k - 1]);
                if lhs != rhs {
                    return Err(verification(
                        "differential commutes with the action",
                        format!("operator {g}, basis vector {j} in degree {k}"),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Quotient complex by the span of `g·v − v` over all operators `g`.
///
/// Surviving basis vectors are the ones with the smallest indices.
pub fn coinvariants<L: Clone>(
    c: &ChainComplex<L>,
    actions: &[Vec<Vec<SparseVec>>],
) -> Result<ChainComplex<L>> {
    check_equivariant(c, actions)?;
    let mut echelons = Vec::new();
    for k in 0..c.top() {
        let mut e = Echelon::new();
        for action in actions {
            for (j, col) in action[k].iter().enumerate() {
                e.insert(col.sub(&SparseVec::unit(j)));
            }
        }
        echelons.push(e);
    }
    let survivors: Vec<Vec<usize>> = (0..c.top())
        .map(|k| (0..c.dim(k)).filter(|&j| !echelons[k].is_pivot(j)).collect())
        .collect();
    let mut labels = Vec::new();
    let mut d = Vec::new();
    for k in 0..c.top() {
        labels.push(survivors[k].iter().map(|&j| c.labels[k][j].clone()).collect());
        let cols = survivors[k]
            .iter()
            .map(|&j| {
                if k == 0 {
                    return SparseVec::new();
                }
                let (rem, _) = echelons[k - 1].reduce(&c.d[k][j]);
                rem.map_indices(|i| survivors[k - 1].binary_search(&i).unwrap())
            })
            .collect();
        d.push(cols);
    }
    Ok(ChainComplex { labels, d })
}

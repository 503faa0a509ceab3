use std::collections::HashMap;

use num_traits::One;

use super::{Scalar, SparseVec};

/// Incremental echelon form of a list of sparse vectors.
///
/// Every stored vector is normalized so that its leading entry (the largest
/// index) is 1, and leading indices are pairwise distinct. Vectors are
/// processed strictly in insertion order, which makes every derived quantity
/// (solutions, kernel bases, quotient normal forms) deterministic.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    slot_of_lead: HashMap<usize, usize>,
    vecs: Vec<SparseVec>,
    combos: Option<Vec<SparseVec>>,
    inserted: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Insertion {
    /// The vector was independent; its reduced form leads at this index.
    Pivot(usize),
    /// The vector was dependent. The combination (over insertion indices)
    /// of inserted vectors that vanishes. Only present when tracking.
    Dependent(Option<SparseVec>),
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// An echelon form that remembers how each pivot is built from the inputs.
    pub fn tracking() -> Self {
        Echelon {
            combos: Some(Vec::new()),
            ..Self::default()
        }
    }

    pub fn rank(&self) -> usize {
        self.vecs.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn is_pivot(&self, index: usize) -> bool {
        self.slot_of_lead.contains_key(&index)
    }

    pub fn leads(&self) -> impl Iterator<Item = usize> + '_ {
        self.vecs.iter().map(|v| v.last().unwrap().0)
    }

    pub fn insert(&mut self, mut v: SparseVec) -> Insertion {
        let input = self.inserted;
        self.inserted += 1;
        let mut combo = self.combos.as_ref().map(|_| SparseVec::unit(input));
        while let Some((lead, c)) = v.last() {
            let Some(&slot) = self.slot_of_lead.get(&lead) else {
                break;
            };
            let c = -c.clone();
            v.axpy(&c, &self.vecs[slot]);
            if let (Some(combo), Some(combos)) = (combo.as_mut(), self.combos.as_ref()) {
                combo.axpy(&c, &combos[slot]);
            }
        }
        match v.last() {
            None => Insertion::Dependent(combo),
            Some((lead, c)) => {
                let inv = Scalar::one() / c;
                if !inv.is_one() {
                    v.scale(&inv);
                    if let Some(combo) = combo.as_mut() {
                        combo.scale(&inv);
                    }
                }
                self.slot_of_lead.insert(lead, self.vecs.len());
                self.vecs.push(v);
                if let (Some(combo), Some(combos)) = (combo, self.combos.as_mut()) {
                    combos.push(combo);
                }
                Insertion::Pivot(lead)
            }
        }
    }

    /// Fully reduces `v`: the remainder has no entry at any leading index.
    /// Also returns the coefficients `x` (over insertion indices, only when
    /// tracking) such that `v = remainder + Σ x_i input_i`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, Option<SparseVec>) {
        let mut v = v.clone();
        let mut rem_rev: Vec<(usize, Scalar)> = Vec::new();
        let mut x = self.combos.as_ref().map(|_| SparseVec::new());
        while let Some((lead, c)) = v.last() {
            match self.slot_of_lead.get(&lead) {
                Some(&slot) => {
                    let c = c.clone();
                    v.axpy(&-c.clone(), &self.vecs[slot]);
                    if let (Some(x), Some(combos)) = (x.as_mut(), self.combos.as_ref()) {
                        x.axpy(&c, &combos[slot]);
                    }
                }
                None => rem_rev.push(v.pop().unwrap()),
            }
        }
        rem_rev.reverse();
        let mut rem = SparseVec::new();
        for (i, c) in rem_rev {
            rem.push(i, c);
        }
        (rem, x)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }
}

/// Solves `A x = b` for a matrix given by columns, with a fixed pivot order:
/// earlier columns are preferred and free variables are set to zero.
#[derive(Clone, Debug)]
pub struct Solver {
    echelon: Echelon,
    kernel: Vec<SparseVec>,
    columns: usize,
}

impl Solver {
    pub fn new(columns: &[SparseVec]) -> Self {
        let mut echelon = Echelon::tracking();
        let mut kernel = Vec::new();
        for c in columns {
            if let Insertion::Dependent(Some(rel)) = echelon.insert(c.clone()) {
                kernel.push(rel);
            }
        }
        Solver {
            echelon,
            kernel,
            columns: columns.len(),
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// A basis of the kernel, one vector per dependent column.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    pub fn in_image(&self, b: &SparseVec) -> bool {
        self.echelon.contains(b)
    }

    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let (rem, x) = self.echelon.reduce(b);
        if rem.is_zero() {
            x
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn v(pairs: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_pairs(pairs.iter().map(|&(i, c)| (i, int(c))))
    }

    #[test]
    fn rank_and_kernel() {
        let cols = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, -1)])];
        let s = Solver::new(&cols);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.kernel().len(), 1);
        let k = &s.kernel()[0];
        let image = k.apply(&cols);
        assert!(image.is_zero());
    }

    #[test]
    fn solve_zero_and_identity() {
        let zero_map = vec![SparseVec::new(), SparseVec::new()];
        let s = Solver::new(&zero_map);
        assert_eq!(s.solve(&SparseVec::new()), Some(SparseVec::new()));
        assert_eq!(s.solve(&v(&[(0, 1)])), None);

        let id = vec![v(&[(0, 1)]), v(&[(1, 1)]), v(&[(2, 1)])];
        let b = v(&[(0, 3), (2, -7)]);
        assert_eq!(Solver::new(&id).solve(&b), Some(b.clone()));
    }

    #[test]
    fn free_variables_are_zero() {
        // columns: e0, e0, e1 -> second column is free
        let cols = vec![v(&[(0, 1)]), v(&[(0, 1)]), v(&[(1, 2)])];
        let x = Solver::new(&cols).solve(&v(&[(0, 5), (1, 4)])).unwrap();
        assert_eq!(x, v(&[(0, 5), (2, 2)]));
    }

    #[test]
    fn reduce_is_normal_form() {
        let mut e = Echelon::new();
        e.insert(v(&[(0, 1), (2, 1)]));
        let (a, _) = e.reduce(&v(&[(2, 1)]));
        let (b, _) = e.reduce(&v(&[(0, -1)]));
        assert_eq!(a, b);
        assert_eq!(a, v(&[(0, -1)]));
    }
}

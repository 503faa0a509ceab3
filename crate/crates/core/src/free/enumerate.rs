use std::collections::HashMap;
use std::rc::Rc;

use super::{Alphabet, Derivation, GenId, Node, OperadElement, Tree};
use crate::error::{verification, Result};
use crate::linalg::{ChainComplex, SparseVec};

/// (out, ins, degree, weight)
type SliceKey = (usize, Vec<usize>, usize, usize);

/// Enumerates shuffle-tree bases of slices `(out; ins)` of a free operad,
/// restricted to a subset of generators and a maximal number of vertices.
pub struct SliceEnumerator<'a> {
    alpha: &'a Alphabet,
    by_out: Vec<Vec<GenId>>,
    max_weight: usize,
    memo: HashMap<SliceKey, Rc<Vec<Tree>>>,
    truncated: bool,
}

fn set_partitions(n: usize, k: usize) -> Vec<Vec<Vec<u32>>> {
    // restricted growth strings: block of element i, blocks ordered by minimum
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    fn rec(i: usize, used: usize, n: usize, k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<Vec<u32>>>) {
        if n - i < k - used {
            return;
        }
        if i == n {
            if used == k {
                let mut blocks = vec![Vec::new(); k];
                for (e, &b) in a.iter().enumerate() {
                    blocks[b].push(e as u32);
                }
                out.push(blocks);
            }
            return;
        }
        for b in 0..=used.min(k - 1) {
            if b == used && used == k {
                continue;
            }
            a[i] = b;
            rec(i + 1, used.max(b + 1), n, k, a, out);
        }
    }
    if k > 0 && k <= n {
        rec(0, 0, n, k, &mut a, &mut out);
    }
    out
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl<'a> SliceEnumerator<'a> {
    pub fn new(alpha: &'a Alphabet, allowed: impl Fn(GenId) -> bool, max_weight: usize) -> Self {
        let mut by_out = vec![Vec::new(); alpha.colours.len()];
        for (g, info) in alpha.gens() {
            if allowed(g) {
                by_out[info.out].push(g);
            }
        }
        SliceEnumerator {
            alpha,
            by_out,
            max_weight,
            memo: HashMap::new(),
            truncated: false,
        }
    }

    /// Whether some enumeration so far was cut short by the weight bound.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// All trees with output `out`, leaf colours `ins` (by label) and the given degree.
    pub fn trees(&mut self, out: usize, ins: &[usize], degree: usize) -> Rc<Vec<Tree>> {
        self.rec(out, ins.to_vec(), degree, self.max_weight)
    }

    fn rec(&mut self, out: usize, word: Vec<usize>, degree: usize, budget: usize) -> Rc<Vec<Tree>> {
        let key = (out, word.clone(), degree, budget);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let n = word.len();
        let mut result = Vec::new();
        if n == 1 && word[0] == out && degree == 0 {
            result.push(Tree::leaf(0));
        }
        let candidates: Vec<GenId> = self.by_out[out]
            .iter()
            .copied()
            .filter(|&g| {
                let info = self.alpha.gen(g);
                info.arity() <= n && info.degree <= degree
            })
            .collect();
        if budget == 0 {
            if !candidates.is_empty() {
                self.truncated = true;
            }
        } else {
            for g in candidates {
                let info = self.alpha.gen(g).clone();
                let k = info.arity();
                for blocks in set_partitions(n, k) {
                    let words: Vec<Vec<usize>> = blocks
                        .iter()
                        .map(|b| b.iter().map(|&l| word[l as usize]).collect())
                        .collect();
                    for degs in compositions(degree - info.degree, k) {
                        let mut child_lists = Vec::with_capacity(k);
                        for i in 0..k {
                            let list = self.rec(info.ins[i], words[i].clone(), degs[i], budget - 1);
                            if list.is_empty() {
                                break;
                            }
                            child_lists.push(list);
                        }
                        if child_lists.len() < k {
                            continue;
                        }
                        let mut choice = vec![0usize; k];
                        loop {
                            let weight: usize = 1 + (0..k).map(|i| child_lists[i][choice[i]].weight()).sum::<usize>();
                            if weight <= budget {
                                let mut nodes = vec![Node::G(g)];
                                for i in 0..k {
                                    for node in &child_lists[i][choice[i]].0 {
                                        nodes.push(match node {
                                            Node::L(l) => Node::L(blocks[i][*l as usize]),
                                            other => *other,
                                        });
                                    }
                                }
                                result.push(Tree(nodes));
                            }
                            let mut i = 0;
                            while i < k {
                                choice[i] += 1;
                                if choice[i] < child_lists[i].len() {
                                    break;
                                }
                                choice[i] = 0;
                                i += 1;
                            }
                            if i == k {
                                break;
                            }
                        }
                    }
                }
            }
        }
        result.sort();
        let r = Rc::new(result);
        self.memo.insert(key, r.clone());
        r
    }

    /// The chain complex of a slice in degrees `0..=max_degree`, labelled by
    /// trees. Fails if the differential leaves the enumerated basis.
    pub fn complex(
        &mut self,
        d: &Derivation,
        out: usize,
        ins: &[usize],
        max_degree: usize,
    ) -> Result<ChainComplex<Tree>> {
        let mut labels: Vec<Vec<Tree>> = Vec::new();
        let mut index: Vec<HashMap<Tree, usize>> = Vec::new();
        for k in 0..=max_degree {
            let trees = self.trees(out, ins, k);
            index.push(trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect());
            labels.push(trees.to_vec());
        }
        let mut cols = Vec::new();
        for k in 0..=max_degree {
            let mut ck = Vec::new();
            for t in &labels[k] {
                if k == 0 {
                    ck.push(SparseVec::new());
                    continue;
                }
                let mut e = OperadElement::zero(out, ins.to_vec());
                e.terms.insert(t.clone(), crate::linalg::one());
                let image = d.apply(self.alpha, &e);
                let mut pairs = Vec::with_capacity(image.len());
                for (s, c) in image.terms {
                    match index[k - 1].get(&s) {
                        Some(&i) => pairs.push((i, c)),
                        None => {
                            return Err(verification(
                                "differential stays inside the enumerated slice",
                                format!("{} -> {}", t.display(self.alpha), s.display(self.alpha)),
                            ))
                        }
                    }
                }
                ck.push(SparseVec::from_pairs(pairs));
            }
            cols.push(ck);
        }
        ChainComplex::new(labels, cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_count() {
        // Stirling numbers of the second kind
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(4, 1).len(), 1);
        assert_eq!(set_partitions(3, 3).len(), 1);
        assert_eq!(set_partitions(2, 3).len(), 0);
        for p in set_partitions(5, 3) {
            let mins: Vec<u32> = p.iter().map(|b| b[0]).collect();
            assert!(mins.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn binary_trees_count() {
        // free operad on one free binary generator: arity 3 has 12 trees
        let mut alpha = Alphabet::new(vec!["v".into()]);
        alpha.add_free_orbit("m", 0, 0, vec![0, 0]).unwrap();
        let mut e = SliceEnumerator::new(&alpha, |_| true, 8);
        assert_eq!(e.trees(0, &[0, 0, 0], 0).len(), 12);
        assert_eq!(e.trees(0, &[0, 0, 0, 0], 0).len(), 120);
        assert!(!e.truncated());
    }
}

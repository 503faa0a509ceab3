use serde::Serialize;

use super::CategoryResolution;
use crate::free::SliceEnumerator;
use crate::linalg::{homology, Solver, SparseVec};

/// Homology of one colour-pair slice `src → tgt` against the morphisms of the category.
#[derive(Clone, Debug, Serialize)]
pub struct SliceReport {
    pub src: String,
    pub tgt: String,
    pub morphisms: usize,
    /// `dim H_k` for `k = 0, 1, …`; empty when the slice could not be closed
    pub homology: Vec<usize>,
    pub phi_rank: usize,
    pub complete: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub resolution: String,
    /// the first violated assumption, if any
    pub assumption_failure: Option<String>,
    pub square_zero: bool,
    pub minimal: bool,
    pub truncated: bool,
    pub slices: Vec<SliceReport>,
}

impl ResolutionReport {
    /// Every check passed on complete slices; truncated slices are not asserted.
    pub fn pass(&self) -> bool {
        self.assumption_failure.is_none() && self.square_zero && self.slices.iter().all(|s| s.pass || !s.complete)
    }
}

/// Computes the homology of every colour-pair slice. Slices are complete
/// when the graph of generators has no cycles; otherwise words are cut at
/// `max_weight` generators and the report is marked truncated.
pub fn verify_resolution(res: &CategoryResolution, max_weight: Option<usize>) -> ResolutionReport {
    let alpha = &res.alphabet;
    let cat = &res.category;
    let (weight, complete) = res.word_bound(max_weight);
    let max_degree = weight * res.max_degree() + 1;
    let mut enumerator = SliceEnumerator::new(alpha, |_| true, weight);
    let mut slices = Vec::new();
    for v in 0..cat.objects.len() {
        for w in 0..cat.objects.len() {
            let hom = cat.hom(v, w);
            let mut report = SliceReport {
                src: cat.objects[v].clone(),
                tgt: cat.objects[w].clone(),
                morphisms: hom.len(),
                homology: Vec::new(),
                phi_rank: 0,
                complete,
                pass: false,
            };
            let Ok(c) = enumerator.complex(&res.d, w, &[v], max_degree) else {
                report.complete = false;
                slices.push(report);
                continue;
            };
            let Ok(h) = homology(&c) else {
                slices.push(report);
                continue;
            };
            report.homology = h.iter().map(|g| g.dim).collect();
            while report.homology.len() > 1 && report.homology.last() == Some(&0) {
                report.homology.pop();
            }
            // φ_C on degree-0 trees, as columns over Hom(v, w)
            let columns: Vec<SparseVec> = c.labels[0]
                .iter()
                .map(|t| match res.phi_tree(t, w) {
                    Some(a) => SparseVec::unit(hom.iter().position(|&b| b == a).expect("arrow in hom")),
                    None => SparseVec::new(),
                })
                .collect();
            report.phi_rank = Solver::new(&columns).rank();
            let phi_kills_boundaries = c.d.get(1).is_none_or(|d1| {
                d1.iter().all(|col| col.apply(&columns).is_zero())
            });
            let h0 = report.homology.first().copied().unwrap_or(0);
            report.pass = phi_kills_boundaries
                && h0 == hom.len()
                && report.phi_rank == hom.len()
                && report.homology.iter().skip(1).all(|&d| d == 0);
            slices.push(report);
        }
    }
    let truncated = !complete || enumerator.truncated();
    if enumerator.truncated() {
        for s in &mut slices {
            s.complete = false;
        }
    }
    ResolutionReport {
        resolution: res.name.clone(),
        assumption_failure: res.check_assumptions().err().map(|e| e.to_string()),
        square_zero: res.square_defects().is_empty(),
        minimal: res.is_minimal(),
        truncated,
        slices,
    }
}


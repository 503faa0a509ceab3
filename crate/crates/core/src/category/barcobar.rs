use std::collections::HashMap;

use super::{Arrow, CategoryResolution, FiniteCategory};
use crate::error::{Error, Result};
use crate::free::{GenId, OperadElement};
use crate::linalg::sign;

pub fn chain_name(cat: &FiniteCategory, chain: &[usize]) -> String {
    let names: Vec<&str> = chain.iter().map(|&m| cat.morphisms[m].name.as_str()).collect();
    format!("[{}]", names.join("|"))
}

/// The bar-cobar resolution: one generator of degree `n − 1` per chain
/// `[f_n|…|f_1]` of composable non-identity morphisms, with
///
/// `d[f_n|…|f_1] = Σ (−1)^{i+n+1} [f_n|…|f_{i+1}]∘[f_i|…|f_1]
///              + Σ (−1)^{n−i} [f_n|…|f_{i+1}f_i|…|f_1]`.
///
/// A contraction to an identity gives the unit for `n = 2` and vanishes
/// otherwise. Non-acyclic categories need `max_len`.
pub fn bar_cobar(cat: &FiniteCategory, max_len: Option<usize>) -> Result<CategoryResolution> {
    let len = match (cat.longest_chain(), max_len) {
        (Some(l), None) => l,
        (Some(l), Some(m)) => l.min(m),
        (None, Some(m)) => m,
        (None, None) => {
            return Err(Error::Invalid(
                "the category is not acyclic; the bar-cobar resolution needs a chain length bound".into(),
            ))
        }
    };
    let mut res = CategoryResolution::new("bar-cobar", cat.clone());
    if cat.longest_chain().is_none_or(|l| l > len) {
        res.truncation = Some(len);
    }
    let chains = cat.chains(len);
    let mut ids: HashMap<Vec<usize>, GenId> = HashMap::new();
    for c in &chains {
        let n = c.len();
        let src = cat.morphisms[c[n - 1]].src;
        let tgt = cat.morphisms[c[0]].tgt;
        let label = (n == 1).then_some(c[0]);
        let g = res.add_generator(&chain_name(cat, c), n - 1, src, tgt, label)?;
        ids.insert(c.clone(), g);
    }
    for c in &chains {
        let n = c.len();
        if n == 1 {
            continue;
        }
        let g = ids[c];
        let (out, input) = (res.tgt(g), res.src(g));
        let mut value = OperadElement::zero(out, vec![input]);
        // c = (f_n, …, f_1); f_i sits at position n − i
        for i in 1..n {
            let left = &c[..n - i];
            let right = &c[n - i..];
            let w = OperadElement::word(&res.alphabet, &[ids[left], ids[right]], out);
            value.axpy(&sign((i + n + 1) % 2 == 1), &w);
        }
        for i in 1..n {
            let (hi, lo) = (c[n - i - 1], c[n - i]);
            let s = sign((n - i) % 2 == 1);
            match cat.compose(Arrow::Mor(hi), Arrow::Mor(lo)).expect("composable chain") {
                Arrow::Mor(h) => {
                    let mut contracted = c[..n - i - 1].to_vec();
                    contracted.push(h);
                    contracted.extend_from_slice(&c[n - i + 1..]);
                    value.axpy(&s, &OperadElement::generator(&res.alphabet, ids[&contracted]));
                }
                Arrow::Id(v) => {
                    if n == 2 {
                        value.axpy(&s, &OperadElement::unit(v));
                    }
                }
            }
        }
        res.d.set(&res.alphabet, g, value)?;
    }
    Ok(res)
}

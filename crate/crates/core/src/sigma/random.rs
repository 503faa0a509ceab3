//! Random coloured Σ-modules with equivariant differentials, built from
//! induced representations.

use std::collections::BTreeMap;

use rand::Rng;

use super::{ArityPart, BasisElement, ColouredSigmaModule};
use crate::linalg::{int, sign, ChainComplex, Solver, SparseVec};
use crate::perm::Permutation;

/// How the stabilizer of the generator acts on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orbit {
    /// Free orbit: the generator has trivial stabilizer.
    Free,
    /// The generator is fixed by the stabilizer of its colour word, up to the
    /// trivial (`false`) or sign (`true`) character.
    Stabilizer(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub arity: usize,
    pub out: usize,
    pub ins: Vec<usize>,
    pub degree: usize,
    pub orbit: Orbit,
}

#[derive(Clone, Debug)]
pub struct RandomParams {
    pub colours: usize,
    pub max_arity: usize,
    pub max_degree: usize,
    /// Generators per arity.
    pub generators: usize,
    /// Cap on the dimension of an arity part.
    pub max_dim: usize,
    pub differential: bool,
}

fn stabilizer(word: &[usize]) -> Vec<Permutation> {
    Permutation::all(word.len())
        .into_iter()
        .filter(|h| h.act_on(word) == word)
        .collect()
}

fn coset_reps(n: usize, group: &[Permutation]) -> Vec<Permutation> {
    let mut reps: Vec<Permutation> = Permutation::all(n)
        .into_iter()
        .map(|s| group.iter().map(|h| h.then(&s)).min().unwrap())
        .collect();
    reps.sort();
    reps.dedup();
    reps
}

fn orbit_size(g: &Generator) -> usize {
    let n = g.arity;
    match g.orbit {
        Orbit::Free => Permutation::all(n).len(),
        Orbit::Stabilizer(_) => coset_reps(n, &stabilizer(&g.ins)).len(),
    }
}

/// Builds the arity part spanned by the orbits of the generators. The
/// differential of generator `i` is `d_values[i]` (an element of the part,
/// which must transform like the generator), extended equivariantly.
pub fn induced_part(gens: &[Generator], d_values: Option<&[SparseVec]>) -> ArityPart {
    let n = gens.first().map_or(0, |g| g.arity);
    let mut basis = Vec::new();
    let mut blocks = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let group = match g.orbit {
            Orbit::Free => vec![Permutation::identity(n)],
            Orbit::Stabilizer(_) => stabilizer(&g.ins),
        };
        let reps = coset_reps(n, &group);
        let start = basis.len();
        for r in &reps {
            basis.push(BasisElement {
                name: format!("x{gi}{r}"),
                degree: g.degree,
                out: g.out,
                ins: r.act_on(&g.ins),
            });
        }
        blocks.push((start, group, reps));
    }
    // x·σ = χ(h) x·r with σ = h r
    let locate = |gi: usize, sigma: &Permutation| -> SparseVec {
        let (start, group, reps) = &blocks[gi];
        for (k, r) in reps.iter().enumerate() {
            let h = sigma.then(&r.inverse());
            if group.contains(&h) {
                let odd = matches!(gens[gi].orbit, Orbit::Stabilizer(true)) && h.is_odd();
                return SparseVec::from_pairs([(start + k, sign(odd))]);
            }
        }
        unreachable!("every permutation lies in some coset")
    };
    let mut transpositions = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let t = Permutation::transposition(n, i);
        let mut cols = Vec::new();
        for (gi, (_, _, reps)) in blocks.iter().enumerate() {
            for r in reps {
                cols.push(locate(gi, &r.then(&t)));
            }
        }
        transpositions.push(cols);
    }
    let mut part = ArityPart {
        basis,
        transpositions,
        differential: None,
    };
    if let Some(values) = d_values {
        let mut cols = Vec::new();
        for (gi, (_, _, reps)) in blocks.iter().enumerate() {
            for r in reps {
                cols.push(part.act(&values[gi], r));
            }
        }
        part.differential = Some(cols);
    }
    part
}

fn random_generator(rng: &mut impl Rng, p: &RandomParams, n: usize) -> Generator {
    let orbit = match rng.gen_range(0..3) {
        0 => Orbit::Free,
        1 => Orbit::Stabilizer(false),
        _ => Orbit::Stabilizer(true),
    };
    Generator {
        arity: n,
        out: rng.gen_range(0..p.colours),
        ins: (0..n).map(|_| rng.gen_range(0..p.colours)).collect(),
        degree: rng.gen_range(0..=p.max_degree),
        orbit,
    }
}

/// A random equivariant differential on the orbits of `gens`: each
/// generator is sent to a random cycle of one degree lower in its own slice,
/// averaged so that it transforms like the generator.
pub fn random_differential(rng: &mut impl Rng, gens: &[Generator]) -> Vec<SparseVec> {
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&i| gens[i].degree);
    let mut values = vec![SparseVec::new(); gens.len()];
    for &gi in &order {
        let g = &gens[gi];
        if g.degree == 0 {
            continue;
        }
        let part = induced_part(gens, Some(&values));
        let slice: Vec<usize> = (0..part.dim())
            .filter(|&j| {
                let b = &part.basis[j];
                b.out == g.out && b.ins == g.ins && b.degree + 1 == g.degree
            })
            .collect();
        let image: Vec<SparseVec> = slice
            .iter()
            .map(|&j| part.d(&SparseVec::unit(j)))
            .collect();
        let kernel = Solver::new(&image).kernel().to_vec();
        let candidates: Vec<SparseVec> = if g.degree == 1 {
            (0..slice.len()).map(SparseVec::unit).collect()
        } else {
            kernel
        };
        let mut v = SparseVec::new();
        for k in candidates {
            let c = rng.gen_range(-2i64..=2);
            v.axpy(&int(c), &k.map_indices(|i| slice[i]));
        }
        let averaged = match g.orbit {
            Orbit::Free => v,
            Orbit::Stabilizer(odd) => {
                let mut acc = SparseVec::new();
                for h in stabilizer(&g.ins) {
                    acc.axpy(&sign(odd && h.is_odd()), &part.act(&v, &h));
                }
                acc
            }
        };
        values[gi] = averaged;
    }
    values
}

/// A random module with arity parts `1..=max_arity`.
pub fn random_module(rng: &mut impl Rng, p: &RandomParams) -> ColouredSigmaModule {
    let mut arities = BTreeMap::new();
    for n in 1..=p.max_arity {
        let mut gens = Vec::new();
        let mut dim = 0;
        let count = rng.gen_range(1..=p.generators);
        for _ in 0..count * 4 {
            if gens.len() == count {
                break;
            }
            let g = random_generator(rng, p, n);
            let size = orbit_size(&g);
            if dim + size <= p.max_dim {
                dim += size;
                gens.push(g);
            }
        }
        if gens.is_empty() {
            continue;
        }
        let values = p.differential.then(|| random_differential(rng, &gens));
        arities.insert(n, induced_part(&gens, values.as_deref()));
    }
    let colours = (0..p.colours).map(|c| format!("c{c}")).collect();
    ColouredSigmaModule::new(colours, arities).expect("random modules are valid")
}

/// A random complex of `k[Σ_n]`-modules: the chain complex together with
/// the action of each adjacent transposition, per degree.
pub fn random_group_complex(
    rng: &mut impl Rng,
    n: usize,
    max_dim: usize,
    max_degree: usize,
) -> (ChainComplex<usize>, Vec<Vec<Vec<SparseVec>>>) {
    let p = RandomParams {
        colours: 1,
        max_arity: n,
        max_degree,
        generators: 4,
        max_dim,
        differential: true,
    };
    let mut gens = Vec::new();
    let mut dim = 0;
    for _ in 0..16 {
        let g = random_generator(rng, &p, n);
        let size = orbit_size(&g);
        if dim + size <= max_dim {
            dim += size;
            gens.push(g);
        }
    }
    let values = random_differential(rng, &gens);
    let part = induced_part(&gens, Some(&values));
    let all: Vec<usize> = (0..part.dim()).collect();
    let c = part.complex_on(&all);
    let mut position = vec![0; part.dim()];
    for row in &c.labels {
        for (p, &j) in row.iter().enumerate() {
            position[j] = p;
        }
    }
    let actions = part
        .transpositions
        .iter()
        .map(|s| {
            c.labels
                .iter()
                .map(|row| row.iter().map(|&j| s[j].map_indices(|i| position[i])).collect())
                .collect()
        })
        .collect();
    (c, actions)
}

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::linalg::{one, SparseVec};
use crate::perm::Permutation;
use crate::sigma::ColouredSigmaModule;

pub type GenId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenInfo {
    pub name: String,
    pub degree: usize,
    pub out: usize,
    pub ins: Vec<usize>,
}

impl GenInfo {
    pub fn arity(&self) -> usize {
        self.ins.len()
    }
}

#[derive(Clone, Debug)]
enum Action {
    /// `base·σ` for a free orbit; the permutation is the one for this element.
    Orbit(usize, Permutation),
    /// Images under `s_1, …, s_{k-1}` as combinations of generator ids.
    Table(Vec<SparseVec>),
}

/// Basis of the generating Σ-module of a free operad, with its Σ-action.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    pub colours: Vec<String>,
    gens: Vec<GenInfo>,
    actions: Vec<Action>,
    by_name: HashMap<String, GenId>,
    /// orbit id -> (permutation -> generator)
    orbits: Vec<HashMap<Permutation, GenId>>,
}

impl Alphabet {
    pub fn new(colours: Vec<String>) -> Self {
        Alphabet {
            colours,
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen(&self, g: GenId) -> &GenInfo {
        &self.gens[g as usize]
    }

    pub fn gens(&self) -> impl Iterator<Item = (GenId, &GenInfo)> {
        self.gens.iter().enumerate().map(|(i, g)| (i as GenId, g))
    }

    pub fn id(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn colour(&self, name: &str) -> Option<usize> {
        self.colours.iter().position(|c| c == name)
    }

    fn push(&mut self, info: GenInfo, action: Action) -> Result<GenId> {
        if self.by_name.contains_key(&info.name) {
            return Err(invalid(format!("duplicate generator {}", info.name)));
        }
        let id = self.gens.len() as GenId;
        self.by_name.insert(info.name.clone(), id);
        self.gens.push(info);
        self.actions.push(action);
        Ok(id)
    }

    /// Adds the free orbit `{x·σ}` of a generator `x` and returns the id of
    /// `x` itself. Elements are named `name[σ]`; in arity 1 just `name`.
    pub fn add_free_orbit(&mut self, name: &str, degree: usize, out: usize, ins: Vec<usize>) -> Result<GenId> {
        let k = ins.len();
        if k <= 1 {
            return self.push(
                GenInfo {
                    name: name.to_string(),
                    degree,
                    out,
                    ins,
                },
                Action::Table(Vec::new()),
            );
        }
        let orbit = self.orbits.len();
        self.orbits.push(HashMap::new());
        let mut first = None;
        for sigma in Permutation::all(k) {
            let id = self.push(
                GenInfo {
                    name: format!("{name}{sigma}"),
                    degree,
                    out,
                    ins: sigma.act_on(&ins),
                },
                Action::Orbit(orbit, sigma.clone()),
            )?;
            first.get_or_insert(id);
            self.orbits[orbit].insert(sigma, id);
        }
        Ok(first.unwrap())
    }

    /// Adds every basis element of a module, with its transposition matrices.
    pub fn add_module(&mut self, m: &ColouredSigmaModule) -> Result<Vec<GenId>> {
        let colour_map: Vec<usize> = m
            .colours
            .iter()
            .map(|c| self.colour(c).ok_or_else(|| invalid(format!("unknown colour {c}"))))
            .collect::<Result<_>>()?;
        let mut ids = Vec::new();
        for (&n, part) in &m.arities {
            if n == 0 {
                return Err(invalid("arity 0 generators are not supported"));
            }
            let base = self.gens.len() as GenId;
            for (j, b) in part.basis.iter().enumerate() {
                let table = part
                    .transpositions
                    .iter()
                    .map(|s| s[j].map_indices(|i| i + base as usize))
                    .collect();
                ids.push(self.push(
                    GenInfo {
                        name: b.name.clone(),
                        degree: b.degree,
                        out: colour_map[b.out],
                        ins: b.ins.iter().map(|&c| colour_map[c]).collect(),
                    },
                    Action::Table(table),
                )?);
            }
        }
        Ok(ids)
    }

    /// `g·σ` as a combination of generators.
    pub fn act(&self, g: GenId, sigma: &Permutation) -> SparseVec {
        match &self.actions[g as usize] {
            Action::Orbit(orbit, p) => SparseVec::unit(self.orbits[*orbit][&p.then(sigma)] as usize),
            Action::Table(_) => {
                if sigma.is_identity() {
                    return SparseVec::unit(g as usize);
                }
                let mut v = SparseVec::unit(g as usize);
                for i in sigma.transposition_word() {
                    let mut next = SparseVec::new();
                    for (h, c) in v.iter() {
                        match &self.actions[h] {
                            Action::Table(t) => next.axpy(c, &t[i]),
                            Action::Orbit(..) => unreachable!("tables only act on tables"),
                        }
                    }
                    v = next;
                }
                v
            }
        }
    }

    /// For free orbits: the orbit base and permutation of `g`.
    pub fn orbit_position(&self, g: GenId) -> Option<(GenId, Permutation)> {
        match &self.actions[g as usize] {
            Action::Orbit(orbit, p) => {
                let base = self.orbits[*orbit][&Permutation::identity(p.degree())];
                Some((base, p.clone()))
            }
            Action::Table(_) => None,
        }
    }

    pub fn is_single(&self, v: &SparseVec) -> Option<GenId> {
        let mut it = v.iter();
        match (it.next(), it.next()) {
            (Some((g, c)), None) if *c == one() => Some(g as GenId),
            _ => None,
        }
    }
}

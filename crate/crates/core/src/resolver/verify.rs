use rayon::prelude::*;
use serde::Serialize;

use super::dinfty::{DInfinity, Extension};
use crate::error::{invalid, Result};
use crate::free::{GenId, OperadElement, SliceEnumerator};
use crate::linalg::{homology, one, sign, Solver};

/// One property checked over a number of instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Default for Check {
    fn default() -> Self {
        Check {
            pass: true,
            checked: 0,
            witness: None,
        }
    }
}

impl Check {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.witness = Some(witness());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub out: String,
    pub ins: Vec<String>,
    /// `dim H_k` of the slice of `D∞`, `k = 0, 1, …`
    pub homology: Vec<usize>,
    /// `dim` of the slice of `A_𝒰` in the same degrees.
    pub expected: Vec<usize>,
    /// Rank of `Φ` on degree 0.
    pub phi_rank: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StrictIdealReport {
    pub attempted: usize,
    pub solved: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    pub checked: usize,
    pub holds: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fails: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolverReport {
    pub grid: Check,
    pub d_squared: Check,
    pub omega_arity_two_zero: Check,
    pub omega_in_ideal: Check,
    pub phi_chain_map: Check,
    pub polarization: Check,
    pub formula_lemma: Check,
    pub slice_homology: Check,
    pub strict_ideal: StrictIdealReport,
    pub localization: LocalizationReport,
    pub slices: Vec<SliceReport>,
}

impl ResolverReport {
    pub fn pass(&self) -> bool {
        [
            &self.grid,
            &self.d_squared,
            &self.omega_arity_two_zero,
            &self.omega_in_ideal,
            &self.phi_chain_map,
            &self.polarization,
            &self.formula_lemma,
            &self.slice_homology,
        ]
        .iter()
        .all(|c| c.pass)
    }

    /// The first failing check by name.
    pub fn failure(&self) -> Option<(&'static str, &Check)> {
        [
            ("grid", &self.grid),
            ("d_squared", &self.d_squared),
            ("omega_arity_two_zero", &self.omega_arity_two_zero),
            ("omega_in_ideal", &self.omega_in_ideal),
            ("phi_chain_map", &self.phi_chain_map),
            ("polarization", &self.polarization),
            ("formula_lemma", &self.formula_lemma),
            ("slice_homology", &self.slice_homology),
        ]
        .into_iter()
        .find(|(_, c)| !c.pass)
    }
}

impl DInfinity {
    pub fn check_grid(&self) -> Check {
        let mut c = Check::default();
        for (i, (k, a, d)) in self.grid.entries().into_iter().enumerate() {
            let name = &self.grid.resolution.generators[i].name;
            c.record(k >= 1 && self.grid.a(k) == a && self.grid.d(k) == d as isize, || format!("{name}: arity {a}, degree {d}"));
        }
        c
    }

    pub fn check_d_squared(&self) -> Check {
        let mut c = Check::default();
        for (g, _) in self.alphabet.gens() {
            let dd = self.d.apply(&self.alphabet, &self.d.value(&self.alphabet, g));
            c.record(dd.is_zero(), || format!("d²({}) = {}", self.name(g), dd.display(&self.alphabet)));
        }
        c
    }

    pub fn check_omega(&self) -> (Check, Check) {
        let mut zero = Check::default();
        let mut ideal = Check::default();
        for e in &self.omega {
            let n = self.arity_of(e.x);
            let name = || self.name(self.xf[&(e.x, e.f)]).to_string();
            if n == 2 {
                zero.record(e.value.is_zero(), || format!("ω for {} = {}", name(), e.value.display(&self.alphabet)));
            }
            ideal.record(self.in_ideal(&e.value, n, false), || format!("ω for {} = {}", name(), e.value.display(&self.alphabet)));
        }
        (zero, ideal)
    }

    pub fn check_chain_map(&self) -> Result<Check> {
        let mut c = Check::default();
        for (g, _) in self.alphabet.gens() {
            let lhs = self.project(&self.d.value(&self.alphabet, g))?;
            let image = self.project(&self.generator(g))?;
            let rhs = self.target.differential(&image)?;
            c.record(lhs == rhs, || {
                format!("Φ(d {}) = {}, d Φ({}) = {}", self.name(g), self.target.display(&lhs), self.name(g), self.target.display(&rhs))
            });
        }
        Ok(c)
    }

    /// Bracketing independence of `x⟨−⟩` and the formula for `d x⟨r⟩` on
    /// composable words of at most `max_len` generators.
    pub fn check_formula_lemma(&self, max_len: usize) -> Result<(Check, Check)> {
        let alpha = &self.alphabet;
        let mut brackets = Check::default();
        let mut formula = Check::default();
        for word in self.words(max_len) {
            let colour = alpha.gen(word[0]).out;
            let input = alpha.gen(*word.last().expect("nonempty")).ins[0];
            let r = OperadElement::word(alpha, &word, colour);
            let dr = self.d.apply(alpha, &r);
            let rd = self.scalar_degree(&word);
            let shown = || r.display(alpha);
            for &x in &self.xs {
                let n = self.arity_of(x);
                let xd = self.degree_of(x);
                let pol = self.extend_word(x, &word, colour, Extension::Polarization, 1)?;
                for k in 2..word.len() {
                    let other = self.extend_word(x, &word, colour, Extension::Polarization, k)?;
                    brackets.record(other == pol, || format!("x⟨{}⟩ split after {k}", shown()));
                }
                let lhs = self.d.apply(alpha, &pol);
                let mut rhs = self.polarize(x, &dr)?.scaled(&sign(xd.is_multiple_of(2)));
                let rx = r.compose(alpha, &[self.generator(self.xv[&(x, input)])])?;
                rhs.axpy(&sign((1 + rd * xd) % 2 == 1), &rx);
                rhs.axpy(&one(), &self.compose_tensor(&self.generator(self.xv[&(x, colour)]), &self.chi_word(n, &word, colour)?)?);
                rhs.axpy(&one(), &self.extend_word(x, &word, colour, Extension::Omega, 1)?);
                formula.record(lhs == rhs, || {
                    format!("d x⟨{}⟩ for x = {}: difference {}", shown(), self.grid.resolution.generators[x].name, lhs.sub(&rhs).display(alpha))
                });
            }
        }
        Ok((brackets, formula))
    }

    /// Degrees up to which every generator of `D∞` is present.
    pub fn complete_degree(&self) -> usize {
        if self.res.max_degree() <= self.config.max_degree {
            usize::MAX
        } else {
            self.config.max_degree
        }
    }

    fn slice_words(&self, out: usize, n: usize) -> Vec<Vec<usize>> {
        let k = self.alphabet.colours.len();
        let reachable: Vec<usize> = (0..k).filter(|&v| !self.res.category.hom(v, out).is_empty()).collect();
        let mut words = vec![Vec::new()];
        for _ in 0..n {
            words = words
                .into_iter()
                .flat_map(|w| {
                    reachable.iter().map(move |&c| {
                        let mut w = w.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        words
    }

    fn slice_report(&self, en: &mut SliceEnumerator, out: usize, ins: &[usize], top: usize) -> Result<SliceReport> {
        let cx = en.complex(&self.d, out, ins, top + 1)?;
        let h = homology(&cx)?;
        let homology: Vec<usize> = h.iter().take(top + 1).map(|g| g.dim).collect();
        let expected: Vec<usize> = (0..=top).map(|k| self.target.slice_dim(out, ins, k)).collect();
        let basis = self.target.basis(out, ins, 0);
        let mut cols = Vec::with_capacity(cx.labels[0].len());
        for t in &cx.labels[0] {
            let mut e = OperadElement::zero(out, ins.to_vec());
            e.add_term(t.clone(), one());
            cols.push(self.target.vector(&self.project(&e)?, &basis)?);
        }
        let phi_rank = Solver::new(&cols).rank();
        let pass = homology == expected && phi_rank == expected[0];
        let names = &self.alphabet.colours;
        Ok(SliceReport {
            out: names[out].clone(),
            ins: ins.iter().map(|&c| names[c].clone()).collect(),
            homology,
            expected,
            phi_rank,
            pass,
        })
    }

    /// Homology of every slice of arity at most `max_arity` whose inputs all
    /// map to the output, against the slices of `A_𝒰`.
    pub fn check_slices(&self) -> Result<(Check, Vec<SliceReport>)> {
        let top = self
            .config
            .homology_degree
            .min(self.complete_degree().saturating_sub(1));
        let slices: Vec<(usize, Vec<usize>)> = (0..self.alphabet.colours.len())
            .flat_map(|out| (1..=self.config.max_arity).flat_map(move |n| self.slice_words(out, n).into_iter().map(move |ins| (out, ins))))
            .collect();
        let run = || -> Result<Vec<SliceReport>> {
            slices
                .par_iter()
                .map_init(
                    || SliceEnumerator::new(&self.alphabet, |g: GenId| self.in_lower(g, usize::MAX), self.weight_bound(self.config.max_arity)),
                    |en, (out, ins)| self.slice_report(en, *out, ins, top),
                )
                .collect()
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.jobs.max(1))
            .build()
            .map_err(|e| invalid(e.to_string()))?;
        let reports: Vec<SliceReport> = pool.install(run)?;
        let mut c = Check::default();
        for r in &reports {
            c.record(r.pass, || {
                format!("slice ({}; {}): H = {:?}, expected {:?}, rank Φ = {}", r.out, r.ins.join(" "), r.homology, r.expected, r.phi_rank)
            });
        }
        Ok((c, reports))
    }

    pub fn verify(&self) -> Result<ResolverReport> {
        let (omega_arity_two_zero, omega_in_ideal) = self.check_omega();
        let (polarization, formula_lemma) = self.check_formula_lemma(3)?;
        let (slice_homology, slices) = self.check_slices()?;
        let mut strict_ideal = StrictIdealReport::default();
        let mut localization = LocalizationReport::default();
        for e in &self.omega {
            let name = self.name(self.xf[&(e.x, e.f)]).to_string();
            if let Some(solved) = e.strict_attempt {
                strict_ideal.attempted += 1;
                if solved {
                    strict_ideal.solved += 1;
                } else {
                    strict_ideal.failed.push(name.clone());
                }
            }
            if let Some(holds) = e.localized {
                localization.checked += 1;
                if holds {
                    localization.holds += 1;
                } else {
                    localization.fails.push(name);
                }
            }
        }
        Ok(ResolverReport {
            grid: self.check_grid(),
            d_squared: self.check_d_squared(),
            omega_arity_two_zero,
            omega_in_ideal,
            phi_chain_map: self.check_chain_map()?,
            polarization,
            formula_lemma,
            slice_homology,
            strict_ideal,
            localization,
            slices,
        })
    }
}

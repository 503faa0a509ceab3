//! Free resolutions of diagrams of algebras over a Koszul operad.

mod dinfty;
mod grid;
mod verify;

use std::collections::BTreeMap;

pub use dinfty::{DInfinity, Extension, IdealUsed, Kind, OmegaEntry, ResolverConfig};
pub use grid::KoszulGeneratorGrid;
pub use verify::{Check, LocalizationReport, ResolverReport, SliceReport, StrictIdealReport};

use crate::free::GenId;

impl DInfinity {
    /// Orbit representatives and arity-1 generators, in id order.
    pub fn representatives(&self) -> Vec<GenId> {
        self.alphabet
            .gens()
            .filter(|(g, _)| self.alphabet.orbit_position(*g).is_none_or(|(base, _)| base == *g))
            .map(|(g, _)| g)
            .collect()
    }

    /// Generators, differential, `ω` table and the report, with sorted keys.
    pub fn to_json(&self, report: &ResolverReport) -> serde_json::Value {
        let alpha = &self.alphabet;
        let colours = &alpha.colours;
        let reps = self.representatives();
        let generators: Vec<serde_json::Value> = reps
            .iter()
            .map(|&g| {
                let info = alpha.gen(g);
                let kind = match self.kinds[g as usize] {
                    Kind::F => "f",
                    Kind::XV { .. } => "x_v",
                    Kind::XF { .. } => "x_f",
                };
                serde_json::json!({
                    "name": info.name,
                    "kind": kind,
                    "degree": info.degree,
                    "out": colours[info.out],
                    "ins": info.ins.iter().map(|&c| colours[c].clone()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let differential: BTreeMap<String, Vec<(String, String)>> = reps
            .iter()
            .filter_map(|&g| self.d.get(g).map(|v| (alpha.gen(g).name.clone(), v.table(alpha))))
            .collect();
        let omega: BTreeMap<String, serde_json::Value> = self
            .omega
            .iter()
            .map(|e| {
                let name = alpha.gen(self.xf[&(e.x, e.f)]).name.clone();
                let ideal = match e.ideal {
                    IdealUsed::Strict => "X_F(<n)",
                    IdealUsed::Full => "F_{>=1} + X_F(<n)",
                };
                let value = serde_json::json!({
                    "value": e.value.table(alpha),
                    "ideal": ideal,
                    "in_strict_ideal": self.in_ideal(&e.value, self.arity_of(e.x), true),
                    "localized": e.localized,
                });
                (name, value)
            })
            .collect();
        serde_json::json!({
            "operad": self.grid.name,
            "category_resolution": self.res.name,
            "bounds": {
                "max_arity": self.config.max_arity,
                "max_degree": self.config.max_degree,
                "max_chain_length": self.config.max_chain_length,
                "strict_ideal": self.config.strict_ideal,
            },
            "grid": self.grid.entries().iter().map(|&(k, a, d)| serde_json::json!({"k": k, "arity": a, "degree": d})).collect::<Vec<_>>(),
            "generators": generators,
            "differential": differential,
            "omega": omega,
            "report": serde_json::to_value(report).expect("report serializes"),
            "pass": report.pass(),
        })
    }
}

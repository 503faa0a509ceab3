use std::collections::BTreeMap;

use serde::Deserialize;

use crate::diagram::{OperadMorphism, OperadPresentation, PTree, Planar};
use crate::error::{Error, Result};
use crate::linalg::{parse_scalar, render};

/// A minimal resolution `(F(X), d)` of a Koszul operad `A` whose generating
/// operations sit in one arity `N` and one degree `D`, with the projection
/// `φ_A`. Generator `x_k` has arity `1 + (N−1)k` and degree `−1 + (D+1)k`.
#[derive(Clone, Debug)]
pub struct KoszulGeneratorGrid {
    pub name: String,
    pub operad: OperadPresentation,
    pub resolution: OperadPresentation,
    pub projection: OperadMorphism,
    pub arity: usize,
    pub degree: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridJson {
    #[serde(default)]
    name: Option<String>,
    operad: serde_json::Value,
    resolution: serde_json::Value,
    #[serde(default)]
    projection: BTreeMap<String, Vec<(String, String)>>,
}

impl KoszulGeneratorGrid {
    pub fn new(name: impl Into<String>, operad: OperadPresentation, resolution: OperadPresentation, projection: OperadMorphism) -> Result<Self> {
        let first = resolution
            .generators
            .iter()
            .min_by_key(|g| (g.arity, g.degree))
            .ok_or_else(|| Error::Schema("the resolution has no generators".into()))?;
        let grid = KoszulGeneratorGrid {
            name: name.into(),
            arity: first.arity,
            degree: first.degree,
            operad,
            resolution,
            projection,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// `A∞ → Ass` with generators `μ₂, …, μ_max`.
    pub fn ass(max_arity: usize) -> Result<Self> {
        let phi = OperadMorphism::ass_infinity_to_ass(max_arity.max(2));
        Self::new("ass", phi.target.clone(), phi.source.clone(), phi)
    }

    pub fn builtin(name: &str, max_arity: usize) -> Result<Self> {
        match name {
            "ass" => Self::ass(max_arity),
            _ => Err(Error::Schema(format!("unknown built-in operad {name:?}"))),
        }
    }

    /// `{operad, resolution, projection: {generator: [[tree, coefficient]]}}`;
    /// generators missing from the projection go to zero.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GridJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let operad = OperadPresentation::from_json(&raw.operad.to_string())?;
        let resolution = OperadPresentation::from_json(&raw.resolution.to_string())?;
        let mut values = vec![Planar::new(); resolution.generators.len()];
        for (g, terms) in &raw.projection {
            let i = resolution
                .generator(g)
                .ok_or_else(|| Error::Schema(format!("projection of unknown generator {g}")))?;
            for (t, c) in terms {
                let c = parse_scalar(c).ok_or_else(|| Error::Schema(format!("bad coefficient {c:?}")))?;
                crate::diagram::add_planar(&mut values[i], operad.parse(t)?, c);
            }
        }
        let projection = OperadMorphism::new(resolution.clone(), operad.clone(), values)?;
        Self::new(raw.name.unwrap_or_else(|| operad.name.clone()), operad, resolution, projection)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let projection: BTreeMap<String, Vec<(String, String)>> = self
            .resolution
            .generators
            .iter()
            .zip(&self.projection.values)
            .filter(|(_, v)| !v.is_empty())
            .map(|(g, v)| {
                let terms = v.iter().map(|(t, c)| (t.display(&self.operad.generators), render(c))).collect();
                (g.name.clone(), terms)
            })
            .collect();
        serde_json::json!({
            "name": self.name,
            "operad": self.operad.to_json(),
            "resolution": self.resolution.to_json(),
            "projection": projection,
        })
    }

    /// `(k, a_k, d_k)` for every generator, in generator order.
    pub fn entries(&self) -> Vec<(usize, usize, usize)> {
        self.resolution
            .generators
            .iter()
            .map(|g| ((g.arity - 1) / (self.arity - 1), g.arity, g.degree))
            .collect()
    }

    pub fn a(&self, k: usize) -> usize {
        1 + (self.arity - 1) * k
    }

    pub fn d(&self, k: usize) -> isize {
        -1 + (self.degree as isize + 1) * k as isize
    }

    fn validate(&self) -> Result<()> {
        if self.arity < 2 {
            return Err(Error::Invalid("generating operations need arity at least 2".into()));
        }
        for g in &self.resolution.generators {
            let k = (g.arity - 1) / (self.arity - 1);
            if self.a(k) != g.arity || self.d(k) != g.degree as isize {
                return Err(Error::Invalid(format!(
                    "generator {} of arity {} and degree {} is off the grid a_k = 1 + {}k, d_k = -1 + {}k",
                    g.name,
                    g.arity,
                    g.degree,
                    self.arity - 1,
                    self.degree + 1
                )));
            }
        }
        for (g, v) in &self.resolution.differential {
            if v.keys().any(|t| t.weight() < 2) {
                return Err(Error::Invalid(format!(
                    "the differential of {} is not decomposable",
                    self.resolution.generators[*g].name
                )));
            }
        }
        let defects = self.resolution.square_defects()?;
        if let Some(w) = defects.first() {
            return Err(crate::error::verification("d∘d = 0 on the resolution", w.clone()));
        }
        self.projection.check()
    }

    /// Generators of arity at most `max_arity`.
    pub fn generators_up_to(&self, max_arity: usize) -> Vec<usize> {
        (0..self.resolution.generators.len())
            .filter(|&i| self.resolution.generators[i].arity <= max_arity)
            .collect()
    }

    pub fn projection_of(&self, x: usize) -> &Planar {
        &self.projection.values[x]
    }

    pub fn differential_of(&self, x: usize) -> Planar {
        self.resolution.differential.get(&x).cloned().unwrap_or_default()
    }

    pub fn tree_display(&self, t: &PTree) -> String {
        t.display(&self.resolution.generators)
    }
}

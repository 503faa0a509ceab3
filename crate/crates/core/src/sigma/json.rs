use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ArityPart, BasisElement, ColouredSigmaModule};
use crate::error::{Error, Result};
use crate::linalg::{parse_scalar, render, SparseVec};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleJson {
    colours: Vec<String>,
    arities: BTreeMap<String, ArityJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArityJson {
    basis: Vec<BasisJson>,
    #[serde(default)]
    transposition_actions: BTreeMap<String, Vec<Vec<(usize, String)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    differential: Option<Vec<Vec<(usize, String)>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisJson {
    name: String,
    degree: usize,
    out: String,
    #[serde(rename = "in")]
    ins: Vec<String>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn columns_from(rows: &[Vec<(usize, String)>]) -> Result<Vec<SparseVec>> {
    rows.iter()
        .map(|col| {
            col.iter()
                .map(|(i, c)| {
                    parse_scalar(c)
                        .map(|q| (*i, q))
                        .ok_or_else(|| schema(format!("bad rational {c}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(SparseVec::from_pairs)
        })
        .collect()
}

fn columns_to(cols: &[SparseVec]) -> Vec<Vec<(usize, String)>> {
    cols.iter()
        .map(|c| c.iter().map(|(i, q)| (i, render(q))).collect())
        .collect()
}

impl ColouredSigmaModule {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ModuleJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        let colour = |name: &str| {
            raw.colours
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| schema(format!("undeclared colour {name}")))
        };
        let mut arities = BTreeMap::new();
        for (key, part) in &raw.arities {
            let n: usize = key.parse().map_err(|_| schema(format!("bad arity {key}")))?;
            let basis = part
                .basis
                .iter()
                .map(|b| {
                    Ok(BasisElement {
                        name: b.name.clone(),
                        degree: b.degree,
                        out: colour(&b.out)?,
                        ins: b.ins.iter().map(|c| colour(c)).collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut transpositions = Vec::new();
            for i in 1..n {
                let rows = part
                    .transposition_actions
                    .get(&format!("s{i}"))
                    .ok_or_else(|| schema(format!("arity {n} is missing s{i}")))?;
                transpositions.push(columns_from(rows)?);
            }
            if part.transposition_actions.len() != n.saturating_sub(1) {
                return Err(schema(format!("arity {n} has unexpected transposition keys")));
            }
            let differential = part.differential.as_deref().map(columns_from).transpose()?;
            arities.insert(
                n,
                ArityPart {
                    basis,
                    transpositions,
                    differential,
                },
            );
        }
        ColouredSigmaModule::new(raw.colours.clone(), arities)
    }

    pub fn to_json(&self) -> String {
        let arities = self
            .arities
            .iter()
            .map(|(n, part)| {
                let basis = part
                    .basis
                    .iter()
                    .map(|b| BasisJson {
                        name: b.name.clone(),
                        degree: b.degree,
                        out: self.colours[b.out].clone(),
                        ins: b.ins.iter().map(|&c| self.colours[c].clone()).collect(),
                    })
                    .collect();
                let transposition_actions = part
                    .transpositions
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (format!("s{}", i + 1), columns_to(s)))
                    .collect();
                (
                    n.to_string(),
                    ArityJson {
                        basis,
                        transposition_actions,
                        differential: part.differential.as_deref().map(columns_to),
                    },
                )
            })
            .collect();
        let raw = ModuleJson {
            colours: self.colours.clone(),
            arities,
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CausalModel, Cpt};
use crate::error::ModelError;
use crate::graph::{Admg, GraphJson, VarId, Variable, VariableJson};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CptJson {
    pub parents: Vec<String>,
    pub table: Vec<Vec<f64>>,
}

/// Graph JSON extended with `latents` and a `cpts` map keyed by variable
/// name. Latent variables carry their own (root) tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    #[serde(default)]
    pub latents: Vec<VariableJson>,
    pub cpts: BTreeMap<String, CptJson>,
}

impl ModelJson {
    pub fn from_model<T: Real>(m: &CausalModel<T>, outcome: Option<VarId>) -> Self {
        let aug = m.augmented();
        let latents = m
            .latents()
            .iter()
            .map(|&u| VariableJson::from(aug.variable(u)))
            .collect();
        let cpts = m
            .cpts()
            .iter()
            .map(|cpt| {
                let entry = CptJson {
                    parents: cpt
                        .parents()
                        .iter()
                        .map(|&p| aug.name(p).to_owned())
                        .collect(),
                    table: cpt
                        .rows()
                        .iter()
                        .map(|r| r.iter().map(|p| p.as_f64()).collect())
                        .collect(),
                };
                (aug.name(cpt.child()).to_owned(), entry)
            })
            .collect();
        Self {
            graph: GraphJson::from_graph(m.observed(), outcome),
            latents,
            cpts,
        }
    }

    pub fn to_model<T: Real>(&self) -> Result<CausalModel<T>, ModelError> {
        let observed = self.graph.to_graph()?;
        let mut vars: Vec<Variable> = observed.variables().to_vec();
        let n = vars.len();
        vars.extend(
            self.latents
                .iter()
                .map(|l| Variable::new(l.name.clone(), l.arity)),
        );
        let index = |name: &str| {
            vars.iter()
                .position(|v| v.name == name)
                .map(VarId)
                .ok_or_else(|| ModelError::Json(format!("unknown variable {name}")))
        };
        let mut edges = Vec::new();
        let mut parents_of = Vec::with_capacity(vars.len());
        for v in &vars {
            let cpt = self
                .cpts
                .get(&v.name)
                .ok_or_else(|| ModelError::Json(format!("no CPT for {}", v.name)))?;
            let ps = cpt
                .parents
                .iter()
                .map(|p| index(p))
                .collect::<Result<Vec<_>, _>>()?;
            let child = index(&v.name)?;
            edges.extend(ps.iter().map(|&p| (p, child)));
            parents_of.push(ps);
        }
        if self.cpts.len() != vars.len() {
            return Err(ModelError::Json("CPT for an undeclared variable".into()));
        }
        let augmented = Admg::new(vars.clone(), edges, std::iter::empty())?;
        let arities: Vec<usize> = vars.iter().map(|v| v.arity).collect();
        let names = |v: VarId| vars[v.0].name.clone();
        let cpts = vars
            .iter()
            .zip(parents_of)
            .enumerate()
            .map(|(i, (v, ps))| {
                let rows = self.cpts[&v.name]
                    .table
                    .iter()
                    .map(|r| r.iter().map(|&p| T::lit(p)).collect())
                    .collect();
                Cpt::new(VarId(i), ps, rows, &arities, &names)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let latents = (n..vars.len()).map(VarId).collect();
        CausalModel::new(observed, augmented, latents, cpts)
    }

    /// The outcome named in the document, if any.
    pub fn outcome(&self) -> Option<&str> {
        self.graph.outcome.as_deref()
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model JSON is always serializable")
    }
}

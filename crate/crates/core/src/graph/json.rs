use serde::{Deserialize, Serialize};

use super::{Admg, PredictiveGraph, VarId, Variable};
use crate::error::GraphError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableJson {
    pub name: String,
    pub arity: usize,
}

/// `{"variables":[{"name":"A","arity":2}], "directed":[["A","Y"]],
/// "bidirected":[["B","C"]], "outcome":"Y"}` with `outcome` optional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub variables: Vec<VariableJson>,
    #[serde(default)]
    pub directed: Vec<[String; 2]>,
    #[serde(default)]
    pub bidirected: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
}

impl GraphJson {
    pub fn from_graph(g: &Admg, outcome: Option<VarId>) -> Self {
        let pair = |(a, b): (VarId, VarId)| [g.name(a).to_owned(), g.name(b).to_owned()];
        Self {
            variables: g
                .variables()
                .iter()
                .map(|v| VariableJson {
                    name: v.name.clone(),
                    arity: v.arity,
                })
                .collect(),
            directed: g.directed_edges().map(pair).collect(),
            bidirected: g.bidirected_edges().map(pair).collect(),
            outcome: outcome.map(|y| g.name(y).to_owned()),
        }
    }

    pub fn to_graph(&self) -> Result<Admg, GraphError> {
        let vars: Vec<(&str, usize)> = self
            .variables
            .iter()
            .map(|v| (v.name.as_str(), v.arity))
            .collect();
        let pairs = |list: &[[String; 2]]| -> Vec<(String, String)> {
            list.iter().map(|[a, b]| (a.clone(), b.clone())).collect()
        };
        let dir = pairs(&self.directed);
        let bi = pairs(&self.bidirected);
        let dir_ref: Vec<(&str, &str)> =
            dir.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let bi_ref: Vec<(&str, &str)> = bi.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Admg::from_names(&vars, &dir_ref, &bi_ref)
    }

    /// The graph together with its outcome, which must be present.
    pub fn to_predictive(&self) -> Result<PredictiveGraph, GraphError> {
        let g = self.to_graph()?;
        let name = self.outcome.as_deref().ok_or(GraphError::MissingOutcome)?;
        let y = g.var(name)?;
        PredictiveGraph::new(g, y)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph JSON is always serializable")
    }
}

impl From<&Variable> for VariableJson {
    fn from(v: &Variable) -> Self {
        Self {
            name: v.name.clone(),
            arity: v.arity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_documented_shape() {
        let text = r#"{"variables":[{"name":"A","arity":2},{"name":"B","arity":3},{"name":"Y","arity":2}],
            "directed":[["A","Y"],["B","Y"]], "bidirected":[["A","B"]], "outcome":"Y"}"#;
        let gj = GraphJson::from_json(text).unwrap();
        let pg = gj.to_predictive().unwrap();
        assert_eq!(pg.graph().names(&pg.true_direct_causes()), ["A", "B"]);
        assert_eq!(pg.graph().arity(VarId(1)), 3);
    }

    #[test]
    fn outcome_is_optional() {
        let text = r#"{"variables":[{"name":"A","arity":2}]}"#;
        let gj = GraphJson::from_json(text).unwrap();
        assert!(gj.to_graph().is_ok());
        assert!(matches!(
            gj.to_predictive(),
            Err(GraphError::MissingOutcome)
        ));
    }

    #[test]
    fn round_trips_a_graph() {
        let g = fixtures::fig2a();
        let back = GraphJson::from_json(&GraphJson::from_graph(&g, None).to_json())
            .unwrap()
            .to_graph()
            .unwrap();
        assert_eq!(
            back.directed_edges().collect::<Vec<_>>(),
            g.directed_edges().collect::<Vec<_>>()
        );
        assert_eq!(
            back.bidirected_edges().collect::<Vec<_>>(),
            g.bidirected_edges().collect::<Vec<_>>()
        );
    }

    #[test]
    fn unknown_edge_endpoint_is_an_error() {
        let text = r#"{"variables":[{"name":"A","arity":2}],"directed":[["A","Q"]]}"#;
        let err = GraphJson::from_json(text).unwrap().to_graph().unwrap_err();
        assert!(matches!(err, GraphError::UnknownVariable(n) if n == "Q"));
    }
}

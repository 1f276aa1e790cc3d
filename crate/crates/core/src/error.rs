use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("duplicate variable name {0}")]
    DuplicateName(String),
    #[error("variable {name} has arity {arity}; at least 2 states are required")]
    InvalidArity { name: String, arity: usize },
    #[error("self-loop on {0}")]
    SelfLoop(String),
    #[error("directed cycle through {0}")]
    Cycle(String),
    #[error("graph is not ancestral at {a} / {b}: {reason}")]
    NotAncestral {
        a: String,
        b: String,
        reason: String,
    },
    #[error("invalid predictive graph: {0}")]
    InvalidPredictiveGraph(String),
    #[error("invalid separation query: {0}")]
    InvalidQuery(String),
    #[error("no outcome variable given")]
    MissingOutcome,
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("min_prob {min_prob} is infeasible for arity {arity}")]
    InfeasibleMinProb { min_prob: f64, arity: usize },
    #[error("CPT for {child}: {reason}")]
    InvalidCpt { child: String, reason: String },
    #[error("joint table would need {cells} cells; cap is {cap}")]
    JointTooLarge { cells: u128, cap: u128 },
    #[error("malformed model JSON: {0}")]
    Json(String),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("no valid graph after {0} attempts")]
    RetriesExhausted(usize),
}

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error("target {0} is listed among the features")]
    TargetInFeatures(String),
    #[error("the decomposability rule needs a pairwise tester")]
    MissingPairwiseTester,
    #[error("unknown algorithm tag {0:?}")]
    UnknownAlgorithm(String),
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid bench configuration: {0}")]
    Config(String),
    #[error("sweep value {sweep_value}, run {run}: {source}")]
    Run {
        sweep_value: u64,
        run: usize,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

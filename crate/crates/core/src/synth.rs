//! Random graph generation for the two experimental settings, plus the
//! chain family on which the decomposability rule pays off most.
//!
//! Case i: a random ADMG over features with `c` of them chosen as parents of
//! a fresh outcome `Y`. Case ii: a random ancestral ADMG with a target drawn
//! among variables whose Markov blanket is non-empty; the blanket is the
//! ground truth.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GenError;
use crate::graph::{Admg, PredictiveGraph, VarId, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
}

impl std::str::FromStr for Case {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "i" | "1" => Ok(Case::I),
            "ii" | "2" => Ok(Case::Ii),
            other => Err(GenError::InvalidConfig(format!("unknown case {other:?}"))),
        }
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Case::I => "i",
            Case::Ii => "ii",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    pub case: Case,
    /// Number of variables other than the outcome / target.
    pub n_features: usize,
    /// Parents of the outcome (case i only).
    pub direct_causes: usize,
    /// Bound on parents plus children of every feature.
    pub max_degree: usize,
    pub p_directed: f64,
    pub p_bidirected: f64,
    pub arity_choices: Vec<usize>,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self::case_i(99, 7, 0)
    }
}

impl GenConfig {
    pub fn case_i(n_features: usize, direct_causes: usize, seed: u64) -> Self {
        Self {
            case: Case::I,
            n_features,
            direct_causes,
            max_degree: 6,
            p_directed: 0.5,
            p_bidirected: 0.1,
            arity_choices: vec![2, 3],
            seed,
        }
    }

    pub fn case_ii(n_features: usize, max_degree: usize, seed: u64) -> Self {
        Self {
            case: Case::Ii,
            n_features,
            direct_causes: 0,
            max_degree,
            p_directed: 0.5,
            p_bidirected: 0.01,
            arity_choices: vec![2, 3],
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: String| Err(GenError::InvalidConfig(m));
        if self.max_degree < 1 {
            return bad("max_degree must be at least 1".into());
        }
        for (name, p) in [
            ("p_directed", self.p_directed),
            ("p_bidirected", self.p_bidirected),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        if self.arity_choices.is_empty()
            || self.arity_choices.iter().any(|&a| !(2..=256).contains(&a))
        {
            return bad("arity choices must be non-empty and within 2..=256".into());
        }
        match self.case {
            Case::I if self.direct_causes > self.n_features => bad(format!(
                "{} direct causes exceed {} features",
                self.direct_causes, self.n_features
            )),
            Case::Ii if self.n_features < 1 => bad("case ii needs at least one feature".into()),
            _ => Ok(()),
        }
    }
}

/// A generated graph with its designated outcome and the variables the
/// discovery algorithms are expected to return.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Admg,
    pub target: VarId,
    pub truth: Vec<VarId>,
}

impl Generated {
    /// The case-i view; fails for case-ii graphs whose target has children.
    pub fn predictive(&self) -> Result<PredictiveGraph, crate::error::GraphError> {
        PredictiveGraph::new(self.graph.clone(), self.target)
    }
}

/// Erdős–Rényi draw over ordered pairs `(i, j)` with `i < j` before any
/// pruning; each pair is included independently with probability `p`.
pub fn er_draw<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    (0..n)
        .array_combinations()
        .filter(|_| rng.random_bool(p))
        .map(|[i, j]| (i, j))
        .collect()
}

/// Random ADMG over `vars`. Directed edges follow a random topological order
/// and are visited in random order; an edge is rejected if either endpoint
/// would exceed its degree bound. `bound[v]` caps parents plus children of
/// `v`. With `ancestral`, bidirected edges between ancestrally related
/// variables are skipped.
fn random_admg<R: Rng>(
    vars: Vec<Variable>,
    bound: &[usize],
    p_directed: f64,
    p_bidirected: f64,
    ancestral: bool,
    rng: &mut R,
) -> Admg {
    let n = vars.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut drawn = er_draw(n, p_directed, rng);
    drawn.shuffle(rng);
    let mut degree = vec![0usize; n];
    let mut directed = Vec::new();
    for (i, j) in drawn {
        let (a, b) = (order[i], order[j]);
        if degree[a] < bound[a] && degree[b] < bound[b] {
            degree[a] += 1;
            degree[b] += 1;
            directed.push((VarId(a), VarId(b)));
        }
    }
    let dag = Admg::new(vars.clone(), directed.clone(), std::iter::empty())
        .expect("edges follow a topological order");

    let mut pairs: Vec<[usize; 2]> = (0..n).array_combinations().collect();
    pairs.shuffle(rng);
    let anc: Vec<Vec<bool>> = if ancestral {
        (0..n).map(|v| dag.ancestral_mask(&[VarId(v)])).collect()
    } else {
        Vec::new()
    };
    let mut bidirected = Vec::new();
    for [a, b] in pairs {
        if !rng.random_bool(p_bidirected) {
            continue;
        }
        if ancestral && (anc[a][b] || anc[b][a]) {
            continue;
        }
        bidirected.push((VarId(a), VarId(b)));
    }
    Admg::new(vars, directed, bidirected).expect("generated graph is valid")
}

fn arities<R: Rng>(n: usize, choices: &[usize], rng: &mut R) -> Vec<usize> {
    (0..n)
        .map(|_| choices[rng.random_range(0..choices.len())])
        .collect()
}

/// Case i: features `X1..Xn` and outcome `Y` with `direct_causes` parents.
/// Chosen parents get one less unit of feature degree so the edge into `Y`
/// stays within the bound.
pub fn generate_case_i(cfg: &GenConfig) -> Result<Generated, GenError> {
    cfg.validate()?;
    if cfg.case != Case::I {
        return Err(GenError::InvalidConfig("expected case i".into()));
    }
    let n = cfg.n_features;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ar = arities(n + 1, &cfg.arity_choices, &mut rng);
    let mut causes: Vec<usize> =
        rand::seq::index::sample(&mut rng, n, cfg.direct_causes).into_vec();
    causes.sort_unstable();
    let bound: Vec<usize> = (0..n)
        .map(|v| cfg.max_degree - usize::from(causes.binary_search(&v).is_ok()))
        .collect();
    let feats: Vec<Variable> = (0..n)
        .map(|i| Variable::new(format!("X{}", i + 1), ar[i]))
        .collect();
    let g = random_admg(
        feats,
        &bound,
        cfg.p_directed,
        cfg.p_bidirected,
        false,
        &mut rng,
    );

    let mut vars = g.variables().to_vec();
    vars.push(Variable::new("Y", ar[n]));
    let y = VarId(n);
    let directed = g
        .directed_edges()
        .chain(causes.iter().map(|&c| (VarId(c), y)));
    let graph = Admg::new(
        vars,
        directed.collect::<Vec<_>>(),
        g.bidirected_edges().collect::<Vec<_>>(),
    )
    .expect("outcome is a sink");
    Ok(Generated {
        truth: graph.parents(y).to_vec(),
        graph,
        target: y,
    })
}

/// Case ii: an ancestral ADMG over `n_features + 1` variables `V1..`, target
/// drawn uniformly among variables with a non-empty Markov blanket.
pub fn generate_case_ii(cfg: &GenConfig) -> Result<Generated, GenError> {
    const ATTEMPTS: usize = 100;
    cfg.validate()?;
    if cfg.case != Case::Ii {
        return Err(GenError::InvalidConfig("expected case ii".into()));
    }
    let n = cfg.n_features + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..ATTEMPTS {
        let ar = arities(n, &cfg.arity_choices, &mut rng);
        let vars: Vec<Variable> = (0..n)
            .map(|i| Variable::new(format!("V{}", i + 1), ar[i]))
            .collect();
        let bound = vec![cfg.max_degree; n];
        let g = random_admg(
            vars,
            &bound,
            cfg.p_directed,
            cfg.p_bidirected,
            true,
            &mut rng,
        );
        let candidates: Vec<VarId> = g.ids().filter(|&v| !g.neighbors(v).is_empty()).collect();
        if candidates.is_empty() {
            continue;
        }
        let target = candidates[rng.random_range(0..candidates.len())];
        let truth = g
            .markov_blanket(target)
            .expect("generated graph is ancestral");
        return Ok(Generated {
            graph: g,
            target,
            truth,
        });
    }
    Err(GenError::RetriesExhausted(ATTEMPTS))
}

pub fn generate(cfg: &GenConfig) -> Result<Generated, GenError> {
    match cfg.case {
        Case::I => generate_case_i(cfg),
        Case::Ii => generate_case_ii(cfg),
    }
}

/// `A1, B1, A2, ..., B(n-1), An, Y` with the bidirected chain
/// `A1 <-> B1 <-> A2 <-> ... <-> An` and `Ai -> Y`.
pub fn fig4b_family(n: usize) -> PredictiveGraph {
    assert!(n >= 2, "the chain family needs n >= 2");
    let mut vars = Vec::new();
    for i in 1..=n {
        vars.push(Variable::new(format!("A{i}"), 2));
        if i < n {
            vars.push(Variable::new(format!("B{i}"), 2));
        }
    }
    vars.push(Variable::new("Y", 2));
    let y = VarId(vars.len() - 1);
    // A_i sits at 2(i-1), B_i at 2(i-1)+1
    let a = |i: usize| VarId(2 * (i - 1));
    let b = |i: usize| VarId(2 * (i - 1) + 1);
    let directed: Vec<_> = (1..=n).map(|i| (a(i), y)).collect();
    let bidirected: Vec<_> = (1..n)
        .flat_map(|i| [(a(i), b(i)), (b(i), a(i + 1))])
        .collect();
    let g = Admg::new(vars, directed, bidirected).expect("chain family is valid");
    PredictiveGraph::new(g, y).expect("Y is a sink without siblings")
}

/// Max over features of parents plus children, not counting edges into
/// `exclude`.
pub fn max_feature_degree(g: &Admg, exclude: Option<VarId>) -> usize {
    g.ids()
        .filter(|&v| Some(v) != exclude)
        .map(|v| {
            g.parents(v).len()
                + g.children(v)
                    .iter()
                    .filter(|&&c| Some(c) != exclude)
                    .count()
        })
        .max()
        .unwrap_or(0)
}

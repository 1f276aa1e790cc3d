//! Parameterized causal models over ADMGs.
//!
//! Each bidirected edge `X <-> Y` is realized by a fresh latent `U` with
//! `U -> X` and `U -> Y`. The resulting DAG over observed and latent variables
//! carries one conditional probability table per variable and is used both for
//! forward sampling and for exact marginal joints.

mod dataset;
mod joint;
mod json;

pub use dataset::Dataset;
pub use joint::{exact_joint, JointTable, DEFAULT_JOINT_CAP};
pub use json::{CptJson, ModelJson};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GraphError, ModelError};
use crate::graph::{Admg, VarId, Variable};
use crate::scalar::Real;

/// Conditional probability table `P(child | parents)`.
///
/// Rows are indexed by parent instantiation in lexicographic order, the first
/// parent varying slowest; each row is a distribution over the child's states.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt<T> {
    child: VarId,
    parents: Vec<VarId>,
    rows: Vec<Vec<T>>,
}

impl<T: Real> Cpt<T> {
    /// Validates shape, non-negativity and row sums against `arities`, the
    /// arities of every variable in the owning graph.
    pub fn new(
        child: VarId,
        parents: Vec<VarId>,
        rows: Vec<Vec<T>>,
        arities: &[usize],
        names: &dyn Fn(VarId) -> String,
    ) -> Result<Self, ModelError> {
        let bad = |reason: String| ModelError::InvalidCpt {
            child: names(child),
            reason,
        };
        let expected: usize = parents.iter().map(|p| arities[p.0]).product();
        if rows.len() != expected {
            return Err(bad(format!("{} rows, expected {expected}", rows.len())));
        }
        let k = arities[child.0];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(bad(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            if row.iter().any(|&p| p.is_nan() || p < T::zero()) {
                return Err(bad(format!("row {i} has a negative or NaN entry")));
            }
            let s: T = row.iter().copied().sum();
            if (s - T::one()).abs() > T::row_tolerance() {
                return Err(bad(format!("row {i} sums to {s}")));
            }
        }
        Ok(Self {
            child,
            parents,
            rows,
        })
    }

    pub fn child(&self) -> VarId {
        self.child
    }

    pub fn parents(&self) -> &[VarId] {
        &self.parents
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Row index for a full instantiation `states` indexed by variable.
    #[inline]
    pub fn row_index(&self, states: &[usize], arities: &[usize]) -> usize {
        self.parents
            .iter()
            .fold(0, |acc, p| acc * arities[p.0] + states[p.0])
    }

    #[inline]
    pub fn prob(&self, states: &[usize], arities: &[usize]) -> T {
        self.rows[self.row_index(states, arities)][states[self.child.0]]
    }
}

/// The latent-augmented DAG of an ADMG.
#[derive(Clone, Debug)]
pub struct Augmentation {
    /// Observed variables keep their indices; latents follow them.
    pub dag: Admg,
    pub latents: Vec<VarId>,
}

/// Replaces every bidirected edge with a fresh latent parent of both
/// endpoints. Latents have arity `latent_arity`.
pub fn latent_augment(g: &Admg, latent_arity: usize) -> Result<Augmentation, GraphError> {
    let mut vars: Vec<Variable> = g.variables().to_vec();
    let mut directed: Vec<(VarId, VarId)> = g.directed_edges().collect();
    let mut latents = Vec::new();
    for (a, b) in g.bidirected_edges() {
        let base = format!("U_{}_{}", g.name(a), g.name(b));
        let mut name = base.clone();
        let mut k = 1;
        while vars.iter().any(|v| v.name == name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        let u = VarId(vars.len());
        vars.push(Variable::new(name, latent_arity));
        directed.push((u, a));
        directed.push((u, b));
        latents.push(u);
    }
    let dag = Admg::new(vars, directed, std::iter::empty())?;
    Ok(Augmentation { dag, latents })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamOptions {
    /// Lower bound on every CPT entry.
    pub min_prob: f64,
    pub latent_arity: usize,
}

impl Default for ParamOptions {
    fn default() -> Self {
        Self {
            min_prob: 0.05,
            latent_arity: 2,
        }
    }
}

/// An ADMG together with a parameterization of its latent-augmented DAG.
#[derive(Clone, Debug)]
pub struct CausalModel<T> {
    observed: Admg,
    augmented: Admg,
    latents: Vec<VarId>,
    cpts: Vec<Cpt<T>>,
    order: Vec<VarId>,
}

impl<T: Real> CausalModel<T> {
    /// Checks that `augmented` realizes `observed` (same directed part on the
    /// observed variables, one two-child latent per bidirected edge) and that
    /// `cpts[v]` is the table of variable `v` with exactly its parents.
    pub fn new(
        observed: Admg,
        augmented: Admg,
        latents: Vec<VarId>,
        cpts: Vec<Cpt<T>>,
    ) -> Result<Self, ModelError> {
        let n = observed.len();
        let invalid = |msg: String| ModelError::Graph(GraphError::InvalidPredictiveGraph(msg));
        if augmented.len() != n + latents.len()
            || latents.iter().enumerate().any(|(i, u)| u.0 != n + i)
        {
            return Err(invalid("latents must follow the observed variables".into()));
        }
        for v in observed.ids() {
            if observed.variable(v) != augmented.variable(v) {
                return Err(invalid(format!("variable {} differs", observed.name(v))));
            }
        }
        let obs_dir: Vec<_> = augmented
            .directed_edges()
            .filter(|(a, b)| a.0 < n && b.0 < n)
            .collect();
        if obs_dir != observed.directed_edges().collect::<Vec<_>>() {
            return Err(invalid(
                "directed edges do not match the observed graph".into(),
            ));
        }
        let mut realized = Vec::new();
        for &u in &latents {
            let ch = augmented.children(u);
            if !augmented.parents(u).is_empty() || ch.len() != 2 || ch.iter().any(|c| c.0 >= n) {
                return Err(invalid(format!(
                    "latent {} must have exactly two observed children",
                    augmented.name(u)
                )));
            }
            realized.push((ch[0], ch[1]));
        }
        realized.sort_unstable();
        if realized != observed.bidirected_edges().collect::<Vec<_>>() {
            return Err(invalid("latents do not match the bidirected edges".into()));
        }
        if cpts.len() != augmented.len() {
            return Err(invalid(format!(
                "{} CPTs for {} variables",
                cpts.len(),
                augmented.len()
            )));
        }
        for (i, cpt) in cpts.iter().enumerate() {
            let mut ps = cpt.parents.clone();
            ps.sort_unstable();
            if cpt.child.0 != i || ps != augmented.parents(VarId(i)) {
                return Err(ModelError::InvalidCpt {
                    child: augmented.name(VarId(i)).to_owned(),
                    reason: "parents do not match the graph".into(),
                });
            }
        }
        let order = augmented
            .topological_order()
            .expect("augmented graph is acyclic");
        Ok(Self {
            observed,
            augmented,
            latents,
            cpts,
            order,
        })
    }

    pub fn observed(&self) -> &Admg {
        &self.observed
    }

    pub fn augmented(&self) -> &Admg {
        &self.augmented
    }

    pub fn latents(&self) -> &[VarId] {
        &self.latents
    }

    pub fn cpts(&self) -> &[Cpt<T>] {
        &self.cpts
    }

    pub fn cpt(&self, v: VarId) -> &Cpt<T> {
        &self.cpts[v.0]
    }

    fn arities(&self) -> Vec<usize> {
        self.augmented.variables().iter().map(|v| v.arity).collect()
    }

    /// Draws every CPT row uniformly from the part of the probability simplex
    /// where each entry is at least `opts.min_prob`.
    pub fn random(g: &Admg, seed: u64, opts: ParamOptions) -> Result<Self, ModelError> {
        let aug = latent_augment(g, opts.latent_arity)?;
        let arities: Vec<usize> = aug.dag.variables().iter().map(|v| v.arity).collect();
        if let Some(&k) = arities.iter().find(|&&k| opts.min_prob * k as f64 >= 1.0) {
            return Err(ModelError::InfeasibleMinProb {
                min_prob: opts.min_prob,
                arity: k,
            });
        }
        if opts.min_prob.is_nan() || opts.min_prob < 0.0 {
            return Err(ModelError::InfeasibleMinProb {
                min_prob: opts.min_prob,
                arity: 0,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = |v: VarId| aug.dag.name(v).to_owned();
        let mut cpts = Vec::with_capacity(arities.len());
        for v in aug.dag.ids() {
            let parents = aug.dag.parents(v).to_vec();
            let n_rows: usize = parents.iter().map(|p| arities[p.0]).product();
            let rows = (0..n_rows)
                .map(|_| truncated_simplex_row::<T>(&mut rng, arities[v.0], opts.min_prob))
                .collect();
            cpts.push(Cpt::new(v, parents, rows, &arities, &names)?);
        }
        Self::new(g.clone(), aug.dag, aug.latents, cpts)
    }

    /// Ancestral sampling over the augmented DAG; latent columns are dropped.
    pub fn sample(&self, rows: usize, seed: u64) -> Dataset {
        let arities = self.arities();
        let cumulative: Vec<Vec<Vec<f64>>> = self
            .cpts
            .iter()
            .map(|cpt| {
                cpt.rows
                    .iter()
                    .map(|row| {
                        let mut acc = 0.0;
                        row.iter()
                            .map(|p| {
                                acc += p.as_f64();
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let n_obs = self.observed.len();
        let mut columns = vec![Vec::with_capacity(rows); n_obs];
        let mut states = vec![0usize; arities.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..rows {
            for &v in &self.order {
                let cpt = &self.cpts[v.0];
                let cdf = &cumulative[v.0][cpt.row_index(&states, &arities)];
                let u: f64 = rng.random::<f64>() * cdf[cdf.len() - 1];
                states[v.0] = cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1);
            }
            for (col, &s) in columns.iter_mut().zip(&states[..n_obs]) {
                col.push(s as u8);
            }
        }
        Dataset::new(self.observed.variables().to_vec(), columns)
            .expect("sampled codes are within arity")
    }
}

/// Uniform draw from `{p : p_i >= m, Σ p_i = 1}`. That region is the simplex
/// scaled by `1 - k·m` and shifted by `m`, so an affine image of a uniform
/// simplex point is uniform on it.
fn truncated_simplex_row<T: Real>(rng: &mut ChaCha8Rng, k: usize, m: f64) -> Vec<T> {
    let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    let scale = 1.0 - k as f64 * m;
    let mut row: Vec<T> = e.iter().map(|x| T::lit(m + scale * x / total)).collect();
    // renormalize in T so the row sums to one at the table's precision
    let s: T = row.iter().copied().sum();
    for p in &mut row {
        *p = *p / s;
    }
    row
}

use crate::error::ModelError;
use crate::graph::{VarId, Variable};
use crate::scalar::Real;

use super::{CausalModel, Dataset};

/// Default limit on the number of observed-joint cells.
pub const DEFAULT_JOINT_CAP: u128 = 1 << 20;

/// Dense distribution over all observed instantiations, indexed mixed-radix
/// with the first variable varying slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable<T> {
    variables: Vec<Variable>,
    probs: Vec<T>,
}

impl<T: Real> JointTable<T> {
    pub fn new(variables: Vec<Variable>, probs: Vec<T>) -> Result<Self, ModelError> {
        let cells: usize = variables.iter().map(|v| v.arity).product();
        if probs.len() != cells {
            return Err(ModelError::Dataset(format!(
                "joint has {} cells, expected {cells}",
                probs.len()
            )));
        }
        if probs.iter().any(|&p| p.is_nan() || p < T::zero()) {
            return Err(ModelError::Dataset("joint has a negative entry".into()));
        }
        Ok(Self { variables, probs })
    }

    /// Relative frequencies of each observed instantiation.
    pub fn empirical(d: &Dataset) -> Self {
        let variables = d.variables().to_vec();
        let cells: usize = variables.iter().map(|v| v.arity).product();
        let mut counts = vec![0u64; cells];
        for r in 0..d.rows() {
            let idx = (0..variables.len()).fold(0, |acc, i| {
                acc * variables[i].arity + d.column(VarId(i))[r] as usize
            });
            counts[idx] += 1;
        }
        let n = T::lit(d.rows().max(1) as f64);
        let probs = counts.iter().map(|&c| T::lit(c as f64) / n).collect();
        Self { variables, probs }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn total(&self) -> T {
        self.probs.iter().copied().sum()
    }

    /// Probability of a full instantiation.
    pub fn prob(&self, states: &[usize]) -> T {
        let idx = self
            .variables
            .iter()
            .zip(states)
            .fold(0, |acc, (v, &s)| acc * v.arity + s);
        self.probs[idx]
    }

    /// Marginal over `vars`, laid out mixed-radix in the given order.
    pub fn marginal(&self, vars: &[VarId]) -> Vec<T> {
        let n = self.variables.len();
        let mut weight = vec![0usize; n];
        let mut w = 1;
        for &v in vars.iter().rev() {
            weight[v.0] += w;
            w *= self.variables[v.0].arity;
        }
        let mut out = vec![T::zero(); w];
        let mut states = vec![0usize; n];
        for &p in &self.probs {
            let idx: usize = states.iter().zip(&weight).map(|(s, w)| s * w).sum();
            out[idx] = out[idx] + p;
            // advance the odometer, last variable fastest
            for i in (0..n).rev() {
                states[i] += 1;
                if states[i] < self.variables[i].arity {
                    break;
                }
                states[i] = 0;
            }
        }
        out
    }

    /// `max |P(x | y, z) - P(x | z)|` over instantiations with `P(y, z) > 0`.
    /// Sets must be disjoint; `z` may be empty.
    pub fn ci_deviation(&self, x: &[VarId], y: &[VarId], z: &[VarId]) -> T {
        let ar = |s: &[VarId]| {
            s.iter()
                .map(|v| self.variables[v.0].arity)
                .product::<usize>()
        };
        let (nx, ny, nz) = (ar(x), ar(y), ar(z));
        let order: Vec<VarId> = x.iter().chain(y).chain(z).copied().collect();
        // layout: x slowest, then y, then z
        let pxyz = self.marginal(&order);
        let mut pyz = vec![T::zero(); ny * nz];
        let mut pxz = vec![T::zero(); nx * nz];
        let mut pz = vec![T::zero(); nz];
        for xi in 0..nx {
            for yi in 0..ny {
                for zi in 0..nz {
                    let p = pxyz[(xi * ny + yi) * nz + zi];
                    pyz[yi * nz + zi] = pyz[yi * nz + zi] + p;
                    pxz[xi * nz + zi] = pxz[xi * nz + zi] + p;
                    pz[zi] = pz[zi] + p;
                }
            }
        }
        let mut worst = T::zero();
        for zi in 0..nz {
            if pz[zi] <= T::zero() {
                continue;
            }
            for yi in 0..ny {
                let denom = pyz[yi * nz + zi];
                if denom <= T::zero() {
                    continue;
                }
                for xi in 0..nx {
                    let lhs = pxyz[(xi * ny + yi) * nz + zi] / denom;
                    let rhs = pxz[xi * nz + zi] / pz[zi];
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }

    pub fn is_independent(&self, x: &[VarId], z: &[VarId], y: &[VarId], tol: f64) -> bool {
        self.ci_deviation(x, y, z).as_f64() <= tol
    }

    /// Half the L1 distance between two tables over the same variables.
    pub fn total_variation(&self, other: &Self) -> f64 {
        assert_eq!(
            self.probs.len(),
            other.probs.len(),
            "tables differ in shape"
        );
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a.as_f64() - b.as_f64()).abs())
            .sum::<f64>()
    }
}

/// Sums the factorized augmented joint over latent states. Fails when the
/// observed table would exceed `cap` cells.
pub fn exact_joint<T: Real>(m: &CausalModel<T>, cap: u128) -> Result<JointTable<T>, ModelError> {
    let observed = m.observed();
    let cells: u128 = observed
        .variables()
        .iter()
        .map(|v| v.arity as u128)
        .product();
    if cells > cap {
        return Err(ModelError::JointTooLarge { cells, cap });
    }
    let aug = m.augmented();
    let arities: Vec<usize> = aug.variables().iter().map(|v| v.arity).collect();
    let order = aug.topological_order().expect("augmented graph is acyclic");
    let n_obs = observed.len();
    let mut probs = vec![T::zero(); cells as usize];
    let mut states = vec![0usize; arities.len()];

    struct Walk<'m, T> {
        model: &'m CausalModel<T>,
        arities: &'m [usize],
        order: &'m [VarId],
        n_obs: usize,
    }

    impl<T: Real> Walk<'_, T> {
        fn go(&self, depth: usize, weight: T, states: &mut [usize], probs: &mut [T]) {
            if depth == self.order.len() {
                let idx = (0..self.n_obs).fold(0, |acc, i| acc * self.arities[i] + states[i]);
                probs[idx] = probs[idx] + weight;
                return;
            }
            let v = self.order[depth];
            let cpt = self.model.cpt(v);
            let row = &cpt.rows()[cpt.row_index(states, self.arities)];
            for (s, &p) in row.iter().enumerate() {
                if p <= T::zero() {
                    continue;
                }
                states[v.0] = s;
                self.go(depth + 1, weight * p, states, probs);
            }
        }
    }

    Walk {
        model: m,
        arities: &arities,
        order: &order,
        n_obs,
    }
    .go(0, T::one(), &mut states, &mut probs);
    JointTable::new(observed.variables().to_vec(), probs)
}

//! Acyclic directed mixed graphs (ADMGs) over named discrete variables.
//!
//! Directed edges `A -> B` carry causal influence, bidirected edges `A <-> B`
//! stand for a hidden common cause. The directed part must be acyclic. A pair
//! may carry both a directed and a bidirected edge; such graphs are valid
//! ADMGs but are not ancestral.

mod blanket;
mod json;
mod msep;

pub use json::{GraphJson, VariableJson};
pub use msep::SeparationQuery;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Dense index of a variable within one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId(pub usize);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VarId {
    fn from(i: usize) -> Self {
        VarId(i)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A named discrete variable with `arity` states `0..arity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub arity: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self {
            name: name.into(),
            arity,
        }
    }
}

/// Every structural relative of one variable. All sets exclude the variable
/// itself and are sorted by index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Structure {
    pub parents: Vec<VarId>,
    pub children: Vec<VarId>,
    pub siblings: Vec<VarId>,
    pub spouses: Vec<VarId>,
    pub ancestors: Vec<VarId>,
    pub descendants: Vec<VarId>,
    pub district: Vec<VarId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admg {
    variables: Vec<Variable>,
    by_name: HashMap<String, VarId>,
    parents: Vec<Vec<VarId>>,
    children: Vec<Vec<VarId>>,
    siblings: Vec<Vec<VarId>>,
    directed: BTreeSet<(VarId, VarId)>,
    bidirected: BTreeSet<(VarId, VarId)>,
}

impl Admg {
    /// Builds and validates a graph. Bidirected pairs are unordered; duplicates
    /// in either list are merged.
    pub fn new(
        variables: Vec<Variable>,
        directed: impl IntoIterator<Item = (VarId, VarId)>,
        bidirected: impl IntoIterator<Item = (VarId, VarId)>,
    ) -> Result<Self, GraphError> {
        let n = variables.len();
        let mut by_name = HashMap::with_capacity(n);
        for (i, v) in variables.iter().enumerate() {
            if v.arity < 2 {
                return Err(GraphError::InvalidArity {
                    name: v.name.clone(),
                    arity: v.arity,
                });
            }
            if by_name.insert(v.name.clone(), VarId(i)).is_some() {
                return Err(GraphError::DuplicateName(v.name.clone()));
            }
        }
        let check = |a: VarId, b: VarId| -> Result<(), GraphError> {
            for v in [a, b] {
                if v.0 >= n {
                    return Err(GraphError::UnknownVariable(v.to_string()));
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(variables[a.0].name.clone()));
            }
            Ok(())
        };

        let mut dir = BTreeSet::new();
        for (a, b) in directed {
            check(a, b)?;
            dir.insert((a, b));
        }
        let mut bi = BTreeSet::new();
        for (a, b) in bidirected {
            check(a, b)?;
            bi.insert((a.min(b), a.max(b)));
        }

        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut siblings = vec![Vec::new(); n];
        for &(a, b) in &dir {
            children[a.0].push(b);
            parents[b.0].push(a);
        }
        for &(a, b) in &bi {
            siblings[a.0].push(b);
            siblings[b.0].push(a);
        }
        for list in parents
            .iter_mut()
            .chain(children.iter_mut())
            .chain(siblings.iter_mut())
        {
            list.sort_unstable();
        }

        let g = Self {
            variables,
            by_name,
            parents,
            children,
            siblings,
            directed: dir,
            bidirected: bi,
        };
        if g.topological_order().is_none() {
            let cyc = g.find_cycle_member().map(|v| g.name(v).to_owned());
            return Err(GraphError::Cycle(cyc.unwrap_or_default()));
        }
        Ok(g)
    }

    /// Builds a graph from variable names and name-pair edge lists.
    pub fn from_names(
        variables: &[(&str, usize)],
        directed: &[(&str, &str)],
        bidirected: &[(&str, &str)],
    ) -> Result<Self, GraphError> {
        let vars: Vec<Variable> = variables
            .iter()
            .map(|&(n, a)| Variable::new(n, a))
            .collect();
        let lookup: HashMap<&str, VarId> = variables
            .iter()
            .enumerate()
            .map(|(i, &(n, _))| (n, VarId(i)))
            .collect();
        let resolve = |name: &str| {
            lookup
                .get(name)
                .copied()
                .ok_or_else(|| GraphError::UnknownVariable(name.to_owned()))
        };
        let dir = directed
            .iter()
            .map(|&(a, b)| Ok((resolve(a)?, resolve(b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let bi = bidirected
            .iter()
            .map(|&(a, b)| Ok((resolve(a)?, resolve(b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(vars, dir, bi)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.variables.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.len()).map(VarId)
    }

    pub fn variable(&self, v: VarId) -> &Variable {
        &self.variables[v.0]
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.variables[v.0].name
    }

    pub fn arity(&self, v: VarId) -> usize {
        self.variables[v.0].arity
    }

    /// Looks a variable up by name.
    pub fn var(&self, name: &str) -> Result<VarId, GraphError> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVariable(name.to_owned()))
    }

    pub fn vars(&self, names: &[&str]) -> Result<Vec<VarId>, GraphError> {
        names.iter().map(|n| self.var(n)).collect()
    }

    pub fn names(&self, ids: &[VarId]) -> Vec<String> {
        ids.iter().map(|&v| self.name(v).to_owned()).collect()
    }

    pub fn directed_edges(&self) -> impl Iterator<Item = (VarId, VarId)> + '_ {
        self.directed.iter().copied()
    }

    /// Bidirected edges with the lower index first.
    pub fn bidirected_edges(&self) -> impl Iterator<Item = (VarId, VarId)> + '_ {
        self.bidirected.iter().copied()
    }

    pub fn has_directed(&self, a: VarId, b: VarId) -> bool {
        self.directed.contains(&(a, b))
    }

    pub fn has_bidirected(&self, a: VarId, b: VarId) -> bool {
        self.bidirected.contains(&(a.min(b), a.max(b)))
    }

    pub fn adjacent(&self, a: VarId, b: VarId) -> bool {
        self.has_directed(a, b) || self.has_directed(b, a) || self.has_bidirected(a, b)
    }

    pub fn parents(&self, v: VarId) -> &[VarId] {
        &self.parents[v.0]
    }

    pub fn children(&self, v: VarId) -> &[VarId] {
        &self.children[v.0]
    }

    pub fn siblings(&self, v: VarId) -> &[VarId] {
        &self.siblings[v.0]
    }

    /// Parents, children and siblings of `v`, sorted and deduplicated.
    pub fn neighbors(&self, v: VarId) -> Vec<VarId> {
        let mut out: Vec<VarId> = self.parents[v.0]
            .iter()
            .chain(&self.children[v.0])
            .chain(&self.siblings[v.0])
            .copied()
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Variables sharing at least one child with `v`.
    pub fn spouses(&self, v: VarId) -> Vec<VarId> {
        let mut out: Vec<VarId> = self.children[v.0]
            .iter()
            .flat_map(|&c| self.parents[c.0].iter().copied())
            .filter(|&p| p != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn ancestors(&self, v: VarId) -> Vec<VarId> {
        self.closure(v, |u| &self.parents[u.0])
    }

    pub fn descendants(&self, v: VarId) -> Vec<VarId> {
        self.closure(v, |u| &self.children[u.0])
    }

    /// Variables reachable from `v` over bidirected edges only.
    pub fn district(&self, v: VarId) -> Vec<VarId> {
        self.closure(v, |u| &self.siblings[u.0])
    }

    /// Full structural summary for `v`.
    pub fn structure(&self, v: VarId) -> Result<Structure, GraphError> {
        if v.0 >= self.len() {
            return Err(GraphError::UnknownVariable(v.to_string()));
        }
        Ok(Structure {
            parents: self.parents(v).to_vec(),
            children: self.children(v).to_vec(),
            siblings: self.siblings(v).to_vec(),
            spouses: self.spouses(v),
            ancestors: self.ancestors(v),
            descendants: self.descendants(v),
            district: self.district(v),
        })
    }

    /// Mask over all variables marking `seeds` and every ancestor of a seed.
    pub fn ancestral_mask(&self, seeds: &[VarId]) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        let mut stack: Vec<VarId> = seeds.to_vec();
        while let Some(u) = stack.pop() {
            if std::mem::replace(&mut mask[u.0], true) {
                continue;
            }
            stack.extend_from_slice(&self.parents[u.0]);
        }
        mask
    }

    /// Kahn's algorithm over the directed part; ties broken by index.
    pub fn topological_order(&self) -> Option<Vec<VarId>> {
        let n = self.len();
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<VarId>> = (0..n)
            .filter(|&i| indeg[i] == 0)
            .map(|i| std::cmp::Reverse(VarId(i)))
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(u)) = ready.pop() {
            order.push(u);
            for &c in &self.children[u.0] {
                indeg[c.0] -= 1;
                if indeg[c.0] == 0 {
                    ready.push(std::cmp::Reverse(c));
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    fn find_cycle_member(&self) -> Option<VarId> {
        self.ids()
            .find(|&v| self.children[v.0].iter().any(|&c| self.reaches(c, v)))
    }

    fn reaches(&self, from: VarId, to: VarId) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            if std::mem::replace(&mut seen[u.0], true) {
                continue;
            }
            stack.extend_from_slice(&self.children[u.0]);
        }
        false
    }

    fn closure<'a, F>(&'a self, v: VarId, next: F) -> Vec<VarId>
    where
        F: Fn(VarId) -> &'a [VarId],
    {
        let mut seen = vec![false; self.len()];
        seen[v.0] = true;
        let mut queue: VecDeque<VarId> = next(v).iter().copied().collect();
        let mut out = Vec::new();
        while let Some(u) = queue.pop_front() {
            if std::mem::replace(&mut seen[u.0], true) {
                continue;
            }
            out.push(u);
            queue.extend(next(u).iter().copied());
        }
        out.sort_unstable();
        out
    }
}

/// An ADMG with a designated outcome `Y` whose only incident edges are
/// `X -> Y` from features.
#[derive(Clone, Debug)]
pub struct PredictiveGraph {
    graph: Admg,
    outcome: VarId,
}

impl PredictiveGraph {
    pub fn new(graph: Admg, outcome: VarId) -> Result<Self, GraphError> {
        if outcome.0 >= graph.len() {
            return Err(GraphError::UnknownVariable(outcome.to_string()));
        }
        let name = graph.name(outcome).to_owned();
        if let Some(&c) = graph.children(outcome).first() {
            return Err(GraphError::InvalidPredictiveGraph(format!(
                "outcome {name} has child {}",
                graph.name(c)
            )));
        }
        if let Some(&s) = graph.siblings(outcome).first() {
            return Err(GraphError::InvalidPredictiveGraph(format!(
                "outcome {name} is confounded with {}",
                graph.name(s)
            )));
        }
        Ok(Self { graph, outcome })
    }

    pub fn graph(&self) -> &Admg {
        &self.graph
    }

    pub fn into_graph(self) -> Admg {
        self.graph
    }

    pub fn outcome(&self) -> VarId {
        self.outcome
    }

    /// Every variable other than the outcome, in index order.
    pub fn features(&self) -> Vec<VarId> {
        self.graph.ids().filter(|&v| v != self.outcome).collect()
    }

    /// The parents of the outcome, i.e. the model's direct causes.
    pub fn true_direct_causes(&self) -> Vec<VarId> {
        self.graph.parents(self.outcome).to_vec()
    }
}

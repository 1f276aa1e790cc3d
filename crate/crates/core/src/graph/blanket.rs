use itertools::Itertools;

use super::{Admg, VarId};
use crate::error::GraphError;

impl Admg {
    /// Fails with the first offending pair if the graph is not ancestral: a
    /// pair carrying both a directed and a bidirected edge, or siblings one of
    /// which is an ancestor of the other.
    pub fn check_ancestral(&self) -> Result<(), GraphError> {
        for (a, b) in self.bidirected_edges() {
            let reason = if self.has_directed(a, b) || self.has_directed(b, a) {
                Some("directed and bidirected edge on the same pair")
            } else if self.ancestors(b).contains(&a) || self.ancestors(a).contains(&b) {
                Some("siblings are ancestrally related")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(GraphError::NotAncestral {
                    a: self.name(a).to_owned(),
                    b: self.name(b).to_owned(),
                    reason: reason.to_owned(),
                });
            }
        }
        Ok(())
    }

    /// Whether every non-adjacent pair is m-separated by some subset of the
    /// remaining variables. Exhaustive over subsets; only practical for
    /// small graphs.
    pub fn is_maximal(&self) -> bool {
        let ids: Vec<VarId> = self.ids().collect();
        ids.iter().array_combinations().all(|[&a, &b]| {
            if self.adjacent(a, b) {
                return true;
            }
            let rest: Vec<VarId> = ids.iter().copied().filter(|&v| v != a && v != b).collect();
            rest.iter()
                .copied()
                .powerset()
                .any(|z| self.msep(&[a], &z, &[b]))
        })
    }

    /// Markov blanket of `y` in an ancestral graph:
    /// `pa(Y) ∪ ch(Y) ∪ sp(Y) ∪ dis(Y) ∪ pa(dis(Y)) ∪ dis(ch(Y)) ∪ pa(dis(ch(Y)))`
    /// without `Y`.
    pub fn markov_blanket(&self, y: VarId) -> Result<Vec<VarId>, GraphError> {
        if y.0 >= self.len() {
            return Err(GraphError::UnknownVariable(y.to_string()));
        }
        self.check_ancestral()?;

        let mut member = vec![false; self.len()];
        let mut mark = |vs: &[VarId]| {
            for v in vs {
                member[v.0] = true;
            }
        };
        mark(self.parents(y));
        mark(self.children(y));
        mark(&self.spouses(y));
        let dis_y = self.district(y);
        mark(&dis_y);
        for &d in &dis_y {
            mark(self.parents(d));
        }
        for &c in self.children(y) {
            for d in self.district(c) {
                mark(&[d]);
                mark(self.parents(d));
            }
        }
        member[y.0] = false;
        Ok(self.ids().filter(|v| member[v.0]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig3a_blanket() {
        let g = fixtures::fig3a();
        let mb = g.markov_blanket(g.var("Y").unwrap()).unwrap();
        assert_eq!(g.names(&mb), ["A", "B", "C", "D", "E", "F"]);
    }

    #[test]
    fn isolated_outcome_has_empty_blanket() {
        let g = Admg::from_names(&[("A", 2), ("Y", 2)], &[], &[]).unwrap();
        assert!(g.markov_blanket(VarId(1)).unwrap().is_empty());
    }

    #[test]
    fn non_ancestral_graphs_are_rejected_with_the_pair() {
        let g = Admg::from_names(&[("A", 2), ("B", 2)], &[("A", "B")], &[("A", "B")]).unwrap();
        match g.markov_blanket(VarId(0)) {
            Err(GraphError::NotAncestral { a, b, .. }) => {
                assert_eq!((a.as_str(), b.as_str()), ("A", "B"))
            }
            other => panic!("unexpected {other:?}"),
        }
        let g = Admg::from_names(
            &[("A", 2), ("B", 2), ("C", 2)],
            &[("A", "B"), ("B", "C")],
            &[("A", "C")],
        )
        .unwrap();
        assert!(matches!(
            g.check_ancestral(),
            Err(GraphError::NotAncestral { .. })
        ));
    }

    #[test]
    fn maximality_detects_inducing_paths() {
        let g = Admg::from_names(
            &[("A", 2), ("B", 2), ("C", 2)],
            &[("A", "B")],
            &[("B", "C")],
        )
        .unwrap();
        assert!(g.is_maximal());
        // A <-> B <-> C <-> D with B -> D and C -> A: an inducing path
        // between the non-adjacent A and D.
        let g = Admg::from_names(
            &[("A", 2), ("B", 2), ("C", 2), ("D", 2)],
            &[("B", "D"), ("C", "A")],
            &[("A", "B"), ("B", "C"), ("C", "D")],
        )
        .unwrap();
        assert!(g.check_ancestral().is_ok());
        assert!(!g.is_maximal());
    }
}

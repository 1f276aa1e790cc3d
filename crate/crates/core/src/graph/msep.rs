//! m-separation by reachability over (variable, arrival mark) states.
//!
//! A walk enters a variable either through an arrowhead or a tail. A variable
//! entered through an arrowhead and left through an arrowhead is a collider;
//! it lets the walk through only if it is in `An(Z) ∪ Z`. Any other variable
//! lets the walk through only if it is outside `Z`. Walk reachability under
//! these rules coincides with path-based m-connection, and visiting each
//! state once bounds the search by `O(|V| + |E|)`.

use std::collections::VecDeque;

use super::{Admg, VarId};
use crate::error::GraphError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Mark {
    Tail = 0,
    Head = 1,
}

/// A validated `msep(X, Z, Y)` query: pairwise disjoint, `X` and `Y` non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationQuery {
    pub x: Vec<VarId>,
    pub z: Vec<VarId>,
    pub y: Vec<VarId>,
}

impl SeparationQuery {
    pub fn new(x: Vec<VarId>, z: Vec<VarId>, y: Vec<VarId>) -> Result<Self, GraphError> {
        if x.is_empty() || y.is_empty() {
            return Err(GraphError::InvalidQuery("X and Y must be non-empty".into()));
        }
        let overlap =
            x.iter().any(|v| y.contains(v) || z.contains(v)) || y.iter().any(|v| z.contains(v));
        if overlap {
            return Err(GraphError::InvalidQuery(
                "X, Z and Y must be disjoint".into(),
            ));
        }
        Ok(Self { x, z, y })
    }
}

impl Admg {
    /// Whether every path between `q.x` and `q.y` is blocked by `q.z`.
    pub fn m_separated(&self, q: &SeparationQuery) -> bool {
        self.msep(&q.x, &q.z, &q.y)
    }

    /// Unchecked form of [`Admg::m_separated`]. The sets must be disjoint.
    pub fn msep(&self, x: &[VarId], z: &[VarId], y: &[VarId]) -> bool {
        debug_assert!(
            x.iter().all(|v| !y.contains(v) && !z.contains(v)) && y.iter().all(|v| !z.contains(v)),
            "msep query sets overlap"
        );
        let n = self.len();
        let open_collider = self.ancestral_mask(z);
        let mut in_z = vec![false; n];
        for v in z {
            in_z[v.0] = true;
        }
        let mut in_y = vec![false; n];
        for v in y {
            in_y[v.0] = true;
        }

        let mut seen = vec![[false; 2]; n];
        let mut queue: VecDeque<(VarId, Option<Mark>)> = x.iter().map(|&v| (v, None)).collect();

        while let Some((v, arrived)) = queue.pop_front() {
            // (neighbour, mark at v, mark at neighbour)
            let edges = self.parents[v.0]
                .iter()
                .map(|&p| (p, Mark::Head, Mark::Tail))
                .chain(
                    self.children[v.0]
                        .iter()
                        .map(|&c| (c, Mark::Tail, Mark::Head)),
                )
                .chain(
                    self.siblings[v.0]
                        .iter()
                        .map(|&s| (s, Mark::Head, Mark::Head)),
                );
            for (w, at_v, at_w) in edges {
                if let Some(a) = arrived {
                    let collider = a == Mark::Head && at_v == Mark::Head;
                    let passes = if collider {
                        open_collider[v.0]
                    } else {
                        !in_z[v.0]
                    };
                    if !passes {
                        continue;
                    }
                }
                if in_y[w.0] {
                    return false;
                }
                let slot = &mut seen[w.0][at_w as usize];
                if !*slot {
                    *slot = true;
                    queue.push_back((w, Some(at_w)));
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(g: &Admg, x: &[&str], z: &[&str], y: &[&str]) -> SeparationQuery {
        SeparationQuery::new(g.vars(x).unwrap(), g.vars(z).unwrap(), g.vars(y).unwrap()).unwrap()
    }

    #[test]
    fn fig2a_separations() {
        let g = fixtures::fig2a();
        assert!(g.m_separated(&q(&g, &["A"], &["B", "C"], &["Y"])));
        assert!(!g.m_separated(&q(&g, &["A"], &["B"], &["Y"])));
    }

    #[test]
    fn edgeless_graph_separates_everything() {
        let g = Admg::from_names(&[("A", 2), ("B", 2)], &[], &[]).unwrap();
        assert!(g.m_separated(&q(&g, &["A"], &[], &["B"])));
    }

    #[test]
    fn fig3b_outcome_separated_from_cause_given_other_cause() {
        let g = fixtures::fig3b();
        assert!(g.m_separated(&q(&g, &["Y"], &["A"], &["B"])));
        assert!(g.m_separated(&q(&g, &["Y"], &[], &["B"])));
        assert!(!g.m_separated(&q(&g, &["Y"], &["C"], &["B"])));
    }

    #[test]
    fn collider_opened_by_descendant() {
        let g = Admg::from_names(
            &[("A", 2), ("B", 2), ("C", 2), ("D", 2)],
            &[("A", "C"), ("B", "C"), ("C", "D")],
            &[],
        )
        .unwrap();
        assert!(g.m_separated(&q(&g, &["A"], &[], &["B"])));
        assert!(!g.m_separated(&q(&g, &["A"], &["D"], &["B"])));
        assert!(!g.m_separated(&q(&g, &["A"], &["C"], &["B"])));
    }

    #[test]
    fn bidirected_colliders() {
        // A <-> B <-> C : B is a collider
        let g = Admg::from_names(
            &[("A", 2), ("B", 2), ("C", 2)],
            &[],
            &[("A", "B"), ("B", "C")],
        )
        .unwrap();
        assert!(g.m_separated(&q(&g, &["A"], &[], &["C"])));
        assert!(!g.m_separated(&q(&g, &["A"], &["B"], &["C"])));
    }

    #[test]
    fn overlapping_query_is_rejected() {
        let g = fixtures::fig2a();
        let a = g.var("A").unwrap();
        assert!(SeparationQuery::new(vec![a], vec![a], vec![g.var("Y").unwrap()]).is_err());
        assert!(SeparationQuery::new(vec![], vec![], vec![a]).is_err());
    }
}

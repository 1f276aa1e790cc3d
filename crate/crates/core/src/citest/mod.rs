//! Conditional-independence testers over data, graphs and exact joints.

mod cache;
mod oracle;
mod stat;

pub use cache::CountingCache;
pub use oracle::{ExactTester, OracleTester, EXACT_TOLERANCE};
pub use stat::{ContingencyTester, Statistic, DEFAULT_ROWS_PER_DOF};

use serde::Serialize;

use crate::error::GraphError;
use crate::graph::VarId;

/// Asks whether `x` and `y` are independent given `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CiQuery {
    pub x: VarId,
    pub y: VarId,
    pub z: Vec<VarId>,
}

impl CiQuery {
    pub fn new(x: VarId, y: VarId, z: Vec<VarId>) -> Result<Self, GraphError> {
        if x == y {
            return Err(GraphError::InvalidQuery(format!("x and y are both {x}")));
        }
        if z.contains(&x) || z.contains(&y) {
            return Err(GraphError::InvalidQuery(
                "conditioning set contains x or y".into(),
            ));
        }
        Ok(Self { x, y, z })
    }

    /// Unchecked constructor for internal callers that maintain the invariants.
    pub(crate) fn raw(x: VarId, y: VarId, z: &[VarId]) -> Self {
        debug_assert!(x != y && !z.contains(&x) && !z.contains(&y));
        Self {
            x,
            y,
            z: z.to_vec(),
        }
    }

    /// Canonical form: `x < y` and `z` sorted and deduplicated.
    pub fn normalized(&self) -> Self {
        let (x, y) = if self.x <= self.y {
            (self.x, self.y)
        } else {
            (self.y, self.x)
        };
        let mut z = self.z.clone();
        z.sort_unstable();
        z.dedup();
        Self { x, y, z }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CiResult {
    pub independent: bool,
    pub p_value: f64,
    pub statistic: f64,
    pub dof: u64,
    pub insufficient_data: bool,
}

impl CiResult {
    /// Result of a tester that answers with certainty.
    pub fn certain(independent: bool, statistic: f64) -> Self {
        Self {
            independent,
            p_value: if independent { 1.0 } else { 0.0 },
            statistic,
            dof: 0,
            insufficient_data: false,
        }
    }
}

pub trait CiTester: Send + Sync {
    fn test(&self, q: &CiQuery) -> CiResult;
    /// Number of tests performed so far.
    fn count(&self) -> u64;
    fn alpha(&self) -> f64;
}

impl<T: CiTester + ?Sized> CiTester for &T {
    fn test(&self, q: &CiQuery) -> CiResult {
        (**self).test(q)
    }
    fn count(&self) -> u64 {
        (**self).count()
    }
    fn alpha(&self) -> f64 {
        (**self).alpha()
    }
}

impl<T: CiTester + ?Sized> CiTester for Box<T> {
    fn test(&self, q: &CiQuery) -> CiResult {
        (**self).test(q)
    }
    fn count(&self) -> u64 {
        (**self).count()
    }
    fn alpha(&self) -> f64 {
        (**self).alpha()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_validation() {
        assert!(CiQuery::new(VarId(0), VarId(0), vec![]).is_err());
        assert!(CiQuery::new(VarId(0), VarId(1), vec![VarId(1)]).is_err());
        let q = CiQuery::new(VarId(3), VarId(1), vec![VarId(5), VarId(2), VarId(5)]).unwrap();
        let n = q.normalized();
        assert_eq!((n.x, n.y), (VarId(1), VarId(3)));
        assert_eq!(n.z, vec![VarId(2), VarId(5)]);
    }
}

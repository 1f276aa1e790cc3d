use std::sync::atomic::{AtomicU64, Ordering};

use super::{CiQuery, CiResult, CiTester};
use crate::graph::Admg;
use crate::model::JointTable;
use crate::scalar::Real;

/// Absolute tolerance on conditional probabilities for exact independence.
pub const EXACT_TOLERANCE: f64 = 1e-9;

/// Answers queries by m-separation in a known graph.
pub struct OracleTester<'a> {
    graph: &'a Admg,
    count: AtomicU64,
}

impl<'a> OracleTester<'a> {
    pub fn new(graph: &'a Admg) -> Self {
        Self {
            graph,
            count: AtomicU64::new(0),
        }
    }
}

impl CiTester for OracleTester<'_> {
    fn test(&self, q: &CiQuery) -> CiResult {
        self.count.fetch_add(1, Ordering::Relaxed);
        CiResult::certain(self.graph.msep(&[q.x], &q.z, &[q.y]), 0.0)
    }

    fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    /// Any threshold in (0, 1] separates the degenerate p-values.
    fn alpha(&self) -> f64 {
        0.5
    }
}

/// Answers queries from an exact joint; the statistic is the largest
/// deviation `|P(x|y,z) - P(x|z)|`.
pub struct ExactTester<'a, T> {
    joint: &'a JointTable<T>,
    tol: f64,
    count: AtomicU64,
}

impl<'a, T: Real> ExactTester<'a, T> {
    pub fn new(joint: &'a JointTable<T>, tol: f64) -> Self {
        Self {
            joint,
            tol,
            count: AtomicU64::new(0),
        }
    }
}

impl<T: Real> CiTester for ExactTester<'_, T> {
    fn test(&self, q: &CiQuery) -> CiResult {
        self.count.fetch_add(1, Ordering::Relaxed);
        let q = q.normalized();
        let dev = self.joint.ci_deviation(&[q.x], &[q.y], &q.z).as_f64();
        CiResult::certain(dev <= self.tol, dev)
    }

    fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    fn alpha(&self) -> f64 {
        0.5
    }
}

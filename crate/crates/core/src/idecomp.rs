//! I-decomposability of variable sets from cached pairwise marginal tests.
//!
//! A set is I-decomposable when it splits into two non-empty parts that are
//! marginally independent of each other. For canonical distributions this
//! reduces to the pairwise marginal-dependence graph on the set being
//! disconnected; for other distributions the answer carries no guarantee.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::citest::{CiQuery, CiTester};
use crate::graph::VarId;

/// Threshold used for pairwise marginal tests unless configured otherwise.
pub const DEFAULT_PAIRWISE_ALPHA: f64 = 0.2;

pub struct PairwiseCache<'a> {
    tester: Box<dyn CiTester + 'a>,
    alpha: f64,
    entries: RwLock<HashMap<(VarId, VarId), bool>>,
}

impl<'a> PairwiseCache<'a> {
    pub fn new(tester: impl CiTester + 'a, pairwise_alpha: f64) -> Self {
        Self {
            tester: Box::new(tester),
            alpha: pairwise_alpha,
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn pairwise_alpha(&self) -> f64 {
        self.alpha
    }

    /// Pairwise tests issued to the underlying tester.
    pub fn count(&self) -> u64 {
        self.tester.count()
    }

    /// Whether `a` and `b` are marginally dependent at the pairwise threshold.
    pub fn pairwise_dependent(&self, a: VarId, b: VarId) -> bool {
        assert_ne!(a, b, "pairwise test needs two distinct variables");
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&dep) = self.entries.read().expect("pairwise lock").get(&key) {
            return dep;
        }
        let r = self.tester.test(&CiQuery::raw(key.0, key.1, &[]));
        let dep = !r.insufficient_data && r.p_value < self.alpha;
        *self
            .entries
            .write()
            .expect("pairwise lock")
            .entry(key)
            .or_insert(dep)
    }

    /// Whether the pairwise-dependence graph on `set` is disconnected. Only
    /// pairs that are not yet known to be connected are tested.
    pub fn is_i_decomposable(&self, set: &[VarId]) -> bool {
        let n = set.len();
        if n < 2 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut components = n;
        for i in 0..n {
            for j in i + 1..n {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj && self.pairwise_dependent(set[i], set[j]) {
                    parent[ri] = rj;
                    components -= 1;
                    if components == 1 {
                        return false;
                    }
                }
            }
        }
        components > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citest::{CiResult, OracleTester};
    use crate::fixtures;
    use crate::synth::fig4b_family;
    use std::sync::atomic::{AtomicU64, Ordering};

    /// Marginal dependence given by an explicit symmetric pattern.
    struct Pattern {
        n: usize,
        bits: u32,
        count: AtomicU64,
    }

    impl Pattern {
        fn bit(&self, a: usize, b: usize) -> bool {
            let (a, b) = (a.min(b), a.max(b));
            let idx = a * self.n - a * (a + 1) / 2 + (b - a - 1);
            self.bits >> idx & 1 == 1
        }
    }

    impl CiTester for Pattern {
        fn test(&self, q: &CiQuery) -> CiResult {
            self.count.fetch_add(1, Ordering::Relaxed);
            CiResult::certain(!self.bit(q.x.0, q.y.0), 0.0)
        }
        fn count(&self) -> u64 {
            self.count.load(Ordering::Relaxed)
        }
        fn alpha(&self) -> f64 {
            0.5
        }
    }

    /// Grows `S` from one member by repeatedly adding any variable that is
    /// pairwise dependent on some member; decomposable iff `S` stops short.
    fn grow_s(c: &PairwiseCache, set: &[VarId]) -> bool {
        let mut s = vec![set[0]];
        loop {
            let next = set
                .iter()
                .find(|&&v| !s.contains(&v) && s.iter().any(|&m| c.pairwise_dependent(m, v)));
            match next {
                Some(&v) => s.push(v),
                None => break,
            }
        }
        s.len() != set.len()
    }

    #[test]
    fn union_find_matches_grow_s_on_every_pattern() {
        for n in 1..=5usize {
            let pairs = n * (n - 1) / 2;
            let set: Vec<VarId> = (0..n).map(VarId).collect();
            for bits in 0..(1u32 << pairs) {
                let mk = || Pattern {
                    n,
                    bits,
                    count: AtomicU64::new(0),
                };
                let a = PairwiseCache::new(mk(), 0.2);
                let b = PairwiseCache::new(mk(), 0.2);
                let fast = a.is_i_decomposable(&set);
                assert_eq!(fast, grow_s(&b, &set), "n={n} bits={bits:b}");
                // warm cache gives the same answer
                assert_eq!(a.is_i_decomposable(&set), fast);
            }
        }
    }

    #[test]
    fn fig4a() {
        let pg = fixtures::fig4a();
        let g = pg.graph();
        let c = PairwiseCache::new(OracleTester::new(g), 0.2);
        let v = |n| g.var(n).unwrap();
        assert!(!c.pairwise_dependent(v("B"), v("A")));
        assert!(c.pairwise_dependent(v("A"), v("C")));
        let before = c.count();
        c.pairwise_dependent(v("A"), v("B"));
        assert_eq!(c.count(), before);
        assert!(c.is_i_decomposable(&[v("A"), v("B"), v("D")]));
        assert!(!c.is_i_decomposable(&[v("A")]));
        assert!(!c.is_i_decomposable(&[v("A"), v("B"), v("C")]));
    }

    #[test]
    fn fig4b_pairs() {
        let pg = fig4b_family(5);
        let g = pg.graph();
        let c = PairwiseCache::new(OracleTester::new(g), 0.2);
        let a = |i: usize| g.var(&format!("A{i}")).unwrap();
        let b = |i: usize| g.var(&format!("B{i}")).unwrap();
        for i in 1..=5 {
            for j in i + 1..=5 {
                // A's are pairwise marginally independent, adjacent or not
                assert!(c.is_i_decomposable(&[a(i), a(j)]));
            }
        }
        for i in 1..5 {
            assert!(!c.is_i_decomposable(&[a(i), b(i)]));
            assert!(!c.is_i_decomposable(&[a(i), b(i), a(i + 1)]));
        }
    }

    #[test]
    fn tests_are_lazy() {
        let pg = fig4b_family(6);
        let g = pg.graph();
        let c = PairwiseCache::new(OracleTester::new(g), 0.2);
        let a1 = g.var("A1").unwrap();
        let b1 = g.var("B1").unwrap();
        c.is_i_decomposable(&[a1, b1]);
        assert_eq!(c.count(), 1);
    }
}

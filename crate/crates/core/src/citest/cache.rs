use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use super::{CiQuery, CiResult, CiTester};

/// Memoizes an underlying tester on normalized queries. `count` is the number
/// of distinct queries evaluated.
pub struct CountingCache<T> {
    inner: T,
    memo: RwLock<HashMap<CiQuery, CiResult>>,
    history: Mutex<Vec<(CiQuery, f64)>>,
}

impl<T: CiTester> CountingCache<T> {
    pub fn new(inner: T) -> Self {
        Self {
            inner,
            memo: RwLock::new(HashMap::new()),
            history: Mutex::new(Vec::new()),
        }
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }

    /// Every query answered so far, cached or not, with its p-value.
    pub fn history(&self) -> Vec<(CiQuery, f64)> {
        self.history.lock().expect("history lock").clone()
    }
}

impl<T: CiTester> CiTester for CountingCache<T> {
    fn test(&self, q: &CiQuery) -> CiResult {
        let key = q.normalized();
        let hit = self.memo.read().expect("memo lock").get(&key).copied();
        let r = match hit {
            Some(r) => r,
            None => {
                let r = self.inner.test(&key);
                *self
                    .memo
                    .write()
                    .expect("memo lock")
                    .entry(key)
                    .or_insert(r)
            }
        };
        self.history
            .lock()
            .expect("history lock")
            .push((q.clone(), r.p_value));
        r
    }

    fn count(&self) -> u64 {
        self.memo.read().expect("memo lock").len() as u64
    }

    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }
}

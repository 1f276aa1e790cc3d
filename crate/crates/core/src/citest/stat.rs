use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use statrs::function::gamma::gamma_ur;

use super::{CiQuery, CiResult, CiTester};
use crate::model::Dataset;

/// Minimum rows per degree of freedom before a test is trusted.
pub const DEFAULT_ROWS_PER_DOF: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    /// Pearson's `Σ (o - e)² / e`.
    ChiSquare,
    /// Likelihood ratio `2 Σ o ln(o / e)`.
    G,
}

/// Stratified contingency-table test over a dataset.
pub struct ContingencyTester<'a> {
    data: &'a Dataset,
    kind: Statistic,
    alpha: f64,
    rows_per_dof: f64,
    count: AtomicU64,
}

impl<'a> ContingencyTester<'a> {
    pub fn new(data: &'a Dataset, kind: Statistic, alpha: f64) -> Self {
        Self {
            data,
            kind,
            alpha,
            rows_per_dof: DEFAULT_ROWS_PER_DOF,
            count: AtomicU64::new(0),
        }
    }

    pub fn chi_square(data: &'a Dataset, alpha: f64) -> Self {
        Self::new(data, Statistic::ChiSquare, alpha)
    }

    pub fn g_test(data: &'a Dataset, alpha: f64) -> Self {
        Self::new(data, Statistic::G, alpha)
    }

    pub fn with_rows_per_dof(mut self, r: f64) -> Self {
        self.rows_per_dof = r;
        self
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    /// Contingency counts per non-empty stratum of `z`, each an `nx × ny`
    /// row-major block.
    fn strata(&self, q: &CiQuery) -> Vec<Vec<u32>> {
        let d = self.data;
        let (nx, ny) = (d.arity(q.x), d.arity(q.y));
        let block = nx * ny;
        let nz: u128 = q.z.iter().map(|&v| d.arity(v) as u128).product();
        let (cx, cy) = (d.column(q.x), d.column(q.y));
        let zcols: Vec<(&[u8], usize)> = q.z.iter().map(|&v| (d.column(v), d.arity(v))).collect();
        let zindex = |r: usize| {
            zcols
                .iter()
                .fold(0usize, |acc, (c, a)| acc * a + c[r] as usize)
        };
        let cell = |r: usize| cx[r] as usize * ny + cy[r] as usize;

        let dense_limit = (4 * d.rows()).max(1 << 16) as u128;
        if nz * block as u128 <= dense_limit {
            let nz = nz as usize;
            let mut counts = vec![0u32; nz * block];
            for r in 0..d.rows() {
                counts[zindex(r) * block + cell(r)] += 1;
            }
            counts
                .chunks_exact(block)
                .filter(|s| s.iter().any(|&c| c > 0))
                .map(<[u32]>::to_vec)
                .collect()
        } else {
            let mut map: HashMap<usize, Vec<u32>> = HashMap::new();
            for r in 0..d.rows() {
                map.entry(zindex(r)).or_insert_with(|| vec![0; block])[cell(r)] += 1;
            }
            let mut keyed: Vec<_> = map.into_iter().collect();
            // fixed summation order keeps results bit-identical across runs
            keyed.sort_unstable_by_key(|(k, _)| *k);
            keyed.into_iter().map(|(_, v)| v).collect()
        }
    }

    fn evaluate(&self, q: &CiQuery) -> CiResult {
        // canonical orientation makes results bit-identical under x/y swaps
        let q = &q.normalized();
        let ny = self.data.arity(q.y);
        let mut statistic = 0.0;
        let mut dof = 0u64;
        for s in self.strata(q) {
            let (stat, df) = stratum_statistic(&s, ny, self.kind);
            statistic += stat;
            dof += df;
        }
        let rows = self.data.rows() as f64;
        if dof == 0 || rows < self.rows_per_dof * dof as f64 {
            return CiResult {
                independent: true,
                p_value: 1.0,
                statistic,
                dof,
                insufficient_data: true,
            };
        }
        let p_value = chi_square_sf(statistic, dof);
        CiResult {
            independent: p_value >= self.alpha,
            p_value,
            statistic,
            dof,
            insufficient_data: false,
        }
    }
}

impl CiTester for ContingencyTester<'_> {
    fn test(&self, q: &CiQuery) -> CiResult {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.evaluate(q)
    }

    fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Statistic and degrees of freedom of one `nx × ny` table after dropping
/// all-zero rows and columns.
fn stratum_statistic(counts: &[u32], ny: usize, kind: Statistic) -> (f64, u64) {
    let nx = counts.len() / ny;
    let row: Vec<f64> = (0..nx)
        .map(|i| counts[i * ny..(i + 1) * ny].iter().map(|&c| c as f64).sum())
        .collect();
    let col: Vec<f64> = (0..ny)
        .map(|j| (0..nx).map(|i| counts[i * ny + j] as f64).sum())
        .collect();
    let n: f64 = row.iter().sum();
    if n == 0.0 {
        return (0.0, 0);
    }
    let r = row.iter().filter(|&&s| s > 0.0).count() as u64;
    let c = col.iter().filter(|&&s| s > 0.0).count() as u64;
    let mut stat = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            if row[i] == 0.0 || col[j] == 0.0 {
                continue;
            }
            let e = row[i] * col[j] / n;
            let o = counts[i * ny + j] as f64;
            stat += match kind {
                Statistic::ChiSquare => (o - e) * (o - e) / e,
                Statistic::G if o > 0.0 => 2.0 * o * (o / e).ln(),
                Statistic::G => 0.0,
            };
        }
    }
    (stat.max(0.0), (r - 1) * (c - 1))
}

/// Upper tail of the chi-square distribution.
pub(crate) fn chi_square_sf(statistic: f64, dof: u64) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    gamma_ur(dof as f64 / 2.0, statistic / 2.0)
}

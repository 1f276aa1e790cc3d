use itertools::Itertools;

use super::{Ctx, DiscoveryReport, Searcher};
use crate::citest::CiQuery;
use crate::error::DiscoveryError;
use crate::graph::VarId;

impl Ctx<'_> {
    /// Marginally dependent features ordered by ascending p-value, ties by
    /// index.
    fn open_list(&mut self, features: &[VarId], target: VarId) -> Vec<VarId> {
        let mut open: Vec<(f64, VarId)> = Vec::new();
        for &v in features {
            let r = self.tester.test(&CiQuery::raw(target, v, &[]));
            let s = self.scores.entry(v).or_insert(r.p_value);
            *s = s.max(r.p_value);
            if r.p_value < self.opts.alpha {
                open.push((r.p_value, v));
            }
        }
        open.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        open.into_iter().map(|(_, v)| v).collect()
    }

    /// Tests `m` against subsets `Z ⊆ tpc \ {m}` of size one and up for
    /// which `keep(Z)` holds, in size then lexicographic order. Returns
    /// whether `m` was found independent of the target.
    fn eliminate(
        &mut self,
        tpc: &[VarId],
        m: VarId,
        target: VarId,
        keep: impl Fn(&[VarId]) -> bool,
    ) -> bool {
        let rest: Vec<VarId> = tpc.iter().copied().filter(|&v| v != m).collect();
        for d in 1..=rest.len() {
            if !self.within_depth(d) {
                break;
            }
            for z in rest.iter().copied().combinations(d) {
                if !keep(&z) || self.skip(&z, m) {
                    continue;
                }
                self.depth = self.depth.max(d);
                if self.independent(target, m, &z) {
                    return true;
                }
            }
        }
        false
    }
}

impl Searcher<'_> {
    /// Grow-and-shrink search: after each admission every member of the
    /// candidate set is re-examined. Subsets already tested for an older
    /// member (those without the newcomer) are not repeated.
    pub fn interleaved_hiton_pc(
        &self,
        features: &[VarId],
        target: VarId,
    ) -> Result<DiscoveryReport, DiscoveryError> {
        self.run("i-hiton", features, target, |ctx, feats| {
            let open = ctx.open_list(feats, target);
            let mut tpc: Vec<VarId> = Vec::new();
            for v in open {
                tpc.push(v);
                if ctx.eliminate(&tpc, v, target, |_| true) {
                    tpc.pop();
                    continue;
                }
                for m in tpc.clone() {
                    if m == v {
                        continue;
                    }
                    if ctx.eliminate(&tpc, m, target, |z| z.contains(&v)) {
                        tpc.retain(|&x| x != m);
                    }
                }
            }
            tpc
        })
    }

    /// Grow-and-shrink search that tests only the newcomer after each
    /// admission, followed by one elimination pass over all members.
    pub fn semi_interleaved_hiton_pc(
        &self,
        features: &[VarId],
        target: VarId,
    ) -> Result<DiscoveryReport, DiscoveryError> {
        self.run("si-hiton", features, target, |ctx, feats| {
            let open = ctx.open_list(feats, target);
            let mut tpc: Vec<VarId> = Vec::new();
            for v in open {
                tpc.push(v);
                if ctx.eliminate(&tpc, v, target, |_| true) {
                    tpc.pop();
                }
            }
            for m in tpc.clone() {
                let later = admitted_after(&tpc, m);
                if later.is_empty() {
                    continue;
                }
                if ctx.eliminate(&tpc, m, target, |z| z.iter().any(|x| later.contains(x))) {
                    tpc.retain(|&x| x != m);
                }
            }
            tpc
        })
    }
}

/// Members admitted after `m`; `tpc` keeps admission order.
fn admitted_after(tpc: &[VarId], m: VarId) -> Vec<VarId> {
    match tpc.iter().position(|&x| x == m) {
        Some(p) => tpc[p + 1..].to_vec(),
        None => Vec::new(),
    }
}

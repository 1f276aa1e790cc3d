use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::adjacency::Sepsets;
use super::{Ctx, DiscoveryReport, Searcher};
use crate::error::DiscoveryError;
use crate::graph::VarId;

impl Searcher<'_> {
    /// Markov blanket search for ancestral graphs.
    ///
    /// The first phase finds the neighbours of the target by adjacency search
    /// (with symmetry correction when enabled), recording separating sets.
    /// The second phase walks outward breadth-first: from a blanket member `V`
    /// reached along `path`, every `W` adjacent to `V` is admitted when it
    /// stays dependent on the target given its separating set plus `path`,
    /// i.e. when `path` extends to a collider path from the target to `W`.
    /// Conditioning on a collider can also open routes through its other
    /// ancestors, and the first phase keeps non-adjacent variables whose
    /// separating sets need variables it has already dropped. A final pass
    /// therefore drops each candidate `W` with `Y ⫫ W | S \ {W}` for the
    /// current candidate set `S`. Tests without enough data are not taken as
    /// evidence for removal.
    pub fn m3b(
        &self,
        features: &[VarId],
        target: VarId,
    ) -> Result<DiscoveryReport, DiscoveryError> {
        let symmetry = self.opts.symmetry_correction;
        self.run("m3b", features, target, |ctx, feats| {
            let mut sepsets = Sepsets::new();
            let (nbrs, reached) = ctx.adjacent(feats, target, symmetry, Some(&mut sepsets));
            ctx.depth = reached;

            let mut all: Vec<VarId> = feats.iter().copied().chain([target]).collect();
            all.sort_unstable();
            let mut pc_cache: BTreeMap<VarId, Vec<VarId>> = BTreeMap::new();
            let mut blanket: BTreeSet<VarId> = nbrs.iter().copied().collect();
            let mut seen: HashSet<(VarId, Vec<VarId>)> = HashSet::new();
            let mut queue: VecDeque<(VarId, Vec<VarId>)> =
                nbrs.iter().map(|&n| (n, vec![n])).collect();

            while let Some((v, path)) = queue.pop_front() {
                let pc = pc_cache
                    .entry(v)
                    .or_insert_with(|| neighbours_of(ctx, &all, v))
                    .clone();
                for w in pc {
                    if w == target || path.contains(&w) {
                        continue;
                    }
                    // neighbours are already in; they may still be colliders
                    // further along the path
                    if !nbrs.contains(&w) {
                        let mut z: Vec<VarId> = sepsets.get(&w).cloned().unwrap_or_default();
                        z.extend(path.iter().copied());
                        z.sort_unstable();
                        z.dedup();
                        if ctx.independent(target, w, &z) {
                            continue;
                        }
                        blanket.insert(w);
                    }
                    let mut next = path.clone();
                    next.push(w);
                    let mut key = next.clone();
                    key.sort_unstable();
                    if seen.insert((w, key)) {
                        queue.push_back((w, next));
                    }
                }
            }
            let candidates: Vec<VarId> = blanket.iter().copied().collect();
            for w in candidates {
                let rest: Vec<VarId> = blanket.iter().copied().filter(|&v| v != w).collect();
                let r = ctx.test(target, w, &rest);
                if !r.insufficient_data && r.p_value >= ctx.opts.alpha {
                    blanket.remove(&w);
                }
            }
            blanket.into_iter().collect()
        })
    }
}

/// Adjacency search around `v` over every other variable in `all`.
fn neighbours_of(ctx: &mut Ctx<'_>, all: &[VarId], v: VarId) -> Vec<VarId> {
    let others: Vec<VarId> = all.iter().copied().filter(|&x| x != v).collect();
    ctx.nonsym(&others, v, None).0
}

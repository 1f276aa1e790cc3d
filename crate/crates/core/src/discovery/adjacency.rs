use std::collections::BTreeMap;

use itertools::Itertools;

use super::{Ctx, DiscoveryReport, Searcher};
use crate::error::DiscoveryError;
use crate::graph::VarId;

/// Separating sets found while pruning, keyed by the removed variable.
pub(super) type Sepsets = BTreeMap<VarId, Vec<VarId>>;

impl Ctx<'_> {
    /// Depth-increasing elimination: `W` leaves the candidate set as soon as
    /// some `Z ⊆ C \ {W}` of the current size separates it from `target`.
    /// `features` must be sorted. Returns the survivors and the last depth.
    pub(super) fn nonsym(
        &mut self,
        features: &[VarId],
        target: VarId,
        mut sepsets: Option<&mut Sepsets>,
    ) -> (Vec<VarId>, usize) {
        let mut c: Vec<VarId> = features.to_vec();
        let mut d = 0;
        let mut reached = 0;
        while d < c.len() && self.within_depth(d) {
            reached = d;
            let snapshot = c.clone();
            for w in snapshot {
                let Some(pos) = c.iter().position(|&v| v == w) else {
                    continue;
                };
                let rest: Vec<VarId> = c.iter().copied().filter(|&v| v != w).collect();
                for z in rest.iter().copied().combinations(d) {
                    if self.skip(&z, w) {
                        continue;
                    }
                    if self.independent(target, w, &z) {
                        c.remove(pos);
                        if let Some(s) = sepsets.as_deref_mut() {
                            s.insert(w, z);
                        }
                        break;
                    }
                }
            }
            d += 1;
        }
        (c, reached)
    }

    /// `nonsym` around `target`, then drop each neighbour `Z` whose own
    /// search over the other variables and `target` does not return `target`.
    pub(super) fn adjacent(
        &mut self,
        features: &[VarId],
        target: VarId,
        symmetry: bool,
        sepsets: Option<&mut Sepsets>,
    ) -> (Vec<VarId>, usize) {
        let (mut nbrs, reached) = self.nonsym(features, target, sepsets);
        if symmetry {
            let snapshot = nbrs.clone();
            for z in snapshot {
                let mut others: Vec<VarId> = features
                    .iter()
                    .copied()
                    .filter(|&v| v != z)
                    .chain([target])
                    .collect();
                others.sort_unstable();
                let (back, _) = self.nonsym(&others, z, None);
                if !back.contains(&target) {
                    nbrs.retain(|&v| v != z);
                }
            }
        }
        (nbrs, reached)
    }
}

impl Searcher<'_> {
    /// Neighbours of `target` among `features` without symmetry correction.
    pub fn nonsym_search(
        &self,
        features: &[VarId],
        target: VarId,
    ) -> Result<DiscoveryReport, DiscoveryError> {
        self.run("nonsym", features, target, |ctx, feats| {
            let (c, reached) = ctx.nonsym(feats, target, None);
            ctx.depth = reached;
            c
        })
    }

    /// Adjacency search, with symmetry correction when enabled in the options.
    pub fn adj_search(
        &self,
        features: &[VarId],
        target: VarId,
    ) -> Result<DiscoveryReport, DiscoveryError> {
        let symmetry = self.opts.symmetry_correction;
        self.run("adj", features, target, |ctx, feats| {
            let (c, reached) = ctx.adjacent(feats, target, symmetry, None);
            ctx.depth = reached;
            c
        })
    }
}

//! Constraint-based discovery of the direct causes (or Markov blanket) of a
//! target variable.
//!
//! Every algorithm takes the features, the target and a [`CiTester`]. When
//! the decomposability rule is enabled, a test of `Y ⫫ W | Z` is skipped
//! whenever `Z ∪ {W}` is I-decomposable according to a separate
//! [`PairwiseCache`].

mod adjacency;
mod hiton;
mod m3b;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::citest::{CiQuery, CiResult, CiTester};
use crate::error::DiscoveryError;
use crate::graph::VarId;
use crate::idecomp::{PairwiseCache, DEFAULT_PAIRWISE_ALPHA};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    /// Skip tests whose variables form an I-decomposable set.
    pub use_idecomp: bool,
    /// Keep a neighbour only if the target is also found adjacent to it.
    pub symmetry_correction: bool,
    /// Largest conditioning-set size to try; `None` searches to completion.
    pub max_depth: Option<usize>,
    /// A test reports independence when its p-value is at least `alpha`.
    pub alpha: f64,
    pub pairwise_alpha: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            use_idecomp: false,
            symmetry_correction: true,
            max_depth: None,
            alpha: 0.1,
            pairwise_alpha: DEFAULT_PAIRWISE_ALPHA,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscoveryReport {
    pub algorithm: String,
    pub target: VarId,
    /// Sorted by index.
    pub causes: Vec<VarId>,
    /// Tests issued to the main tester during the run.
    pub ci_count: u64,
    /// Tests issued to the pairwise tester during the run.
    pub pairwise_count: u64,
    pub wall_time: Duration,
    pub depth_reached: usize,
    /// For each returned variable, the largest p-value among tests of it
    /// against the target.
    pub pvalue_scores: BTreeMap<VarId, f64>,
}

/// Algorithm tags accepted on the command line and in bench configs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Adj,
    Alg1,
    IHiton,
    IHitonDec,
    SiHiton,
    SiHitonDec,
    M3b,
    M3bDec,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Adj,
        Algorithm::Alg1,
        Algorithm::IHiton,
        Algorithm::IHitonDec,
        Algorithm::SiHiton,
        Algorithm::SiHitonDec,
        Algorithm::M3b,
        Algorithm::M3bDec,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Adj => "adj",
            Algorithm::Alg1 => "alg1",
            Algorithm::IHiton => "i-hiton",
            Algorithm::IHitonDec => "i-hiton-dec",
            Algorithm::SiHiton => "si-hiton",
            Algorithm::SiHitonDec => "si-hiton-dec",
            Algorithm::M3b => "m3b",
            Algorithm::M3bDec => "m3b-dec",
        }
    }

    pub fn uses_idecomp(self) -> bool {
        matches!(
            self,
            Algorithm::Alg1 | Algorithm::IHitonDec | Algorithm::SiHitonDec | Algorithm::M3bDec
        )
    }

    /// The same algorithm with the decomposability rule switched off.
    pub fn plain(self) -> Algorithm {
        match self {
            Algorithm::Alg1 => Algorithm::Adj,
            Algorithm::IHitonDec => Algorithm::IHiton,
            Algorithm::SiHitonDec => Algorithm::SiHiton,
            Algorithm::M3bDec => Algorithm::M3b,
            other => other,
        }
    }

    pub fn is_blanket_search(self) -> bool {
        matches!(self, Algorithm::M3b | Algorithm::M3bDec)
    }

    /// Significance threshold used in the experiments for this family.
    pub fn default_alpha(self) -> f64 {
        if self.is_blanket_search() {
            0.05
        } else {
            0.1
        }
    }

    /// Options with this tag's rule setting and threshold.
    pub fn options(self) -> SearchOptions {
        SearchOptions {
            use_idecomp: self.uses_idecomp(),
            alpha: self.default_alpha(),
            ..SearchOptions::default()
        }
    }

    pub fn run(
        self,
        searcher: &Searcher<'_>,
        features: &[VarId],
        target: VarId,
    ) -> Result<DiscoveryReport, DiscoveryError> {
        let mut report = match self {
            Algorithm::Adj | Algorithm::Alg1 => searcher.adj_search(features, target),
            Algorithm::IHiton | Algorithm::IHitonDec => {
                searcher.interleaved_hiton_pc(features, target)
            }
            Algorithm::SiHiton | Algorithm::SiHitonDec => {
                searcher.semi_interleaved_hiton_pc(features, target)
            }
            Algorithm::M3b | Algorithm::M3bDec => searcher.m3b(features, target),
        }?;
        report.algorithm = self.tag().to_owned();
        Ok(report)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = DiscoveryError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| DiscoveryError::UnknownAlgorithm(s.to_owned()))
    }
}

/// Runs discovery algorithms against a main tester and, for the
/// decomposability rule, a pairwise cache.
pub struct Searcher<'a> {
    tester: &'a dyn CiTester,
    pairwise: Option<&'a PairwiseCache<'a>>,
    opts: SearchOptions,
}

impl<'a> Searcher<'a> {
    pub fn new(tester: &'a dyn CiTester, opts: SearchOptions) -> Self {
        Self {
            tester,
            pairwise: None,
            opts,
        }
    }

    pub fn with_pairwise(mut self, cache: &'a PairwiseCache<'a>) -> Self {
        self.pairwise = Some(cache);
        self
    }

    pub fn options(&self) -> &SearchOptions {
        &self.opts
    }

    pub fn options_mut(&mut self) -> &mut SearchOptions {
        &mut self.opts
    }

    fn check(&self, features: &[VarId], target: VarId) -> Result<(), DiscoveryError> {
        if features.contains(&target) {
            return Err(DiscoveryError::TargetInFeatures(target.to_string()));
        }
        if self.opts.use_idecomp && self.pairwise.is_none() {
            return Err(DiscoveryError::MissingPairwiseTester);
        }
        Ok(())
    }

    /// Shared bookkeeping for one run.
    fn run<F>(
        &self,
        name: &str,
        features: &[VarId],
        target: VarId,
        body: F,
    ) -> Result<DiscoveryReport, DiscoveryError>
    where
        F: FnOnce(&mut Ctx<'_>, &[VarId]) -> Vec<VarId>,
    {
        self.check(features, target)?;
        let mut feats = features.to_vec();
        feats.sort_unstable();
        feats.dedup();
        let start = Instant::now();
        let ci_before = self.tester.count();
        let pw_before = self.pairwise.map_or(0, PairwiseCache::count);
        let mut ctx = Ctx {
            tester: self.tester,
            pairwise: self.pairwise,
            opts: &self.opts,
            target,
            scores: BTreeMap::new(),
            depth: 0,
        };
        let mut causes = body(&mut ctx, &feats);
        causes.sort_unstable();
        let pvalue_scores = causes
            .iter()
            .map(|v| (*v, ctx.scores.get(v).copied().unwrap_or(0.0)))
            .collect();
        Ok(DiscoveryReport {
            algorithm: name.to_owned(),
            target,
            causes,
            ci_count: self.tester.count() - ci_before,
            pairwise_count: self.pairwise.map_or(0, PairwiseCache::count) - pw_before,
            wall_time: start.elapsed(),
            depth_reached: ctx.depth,
            pvalue_scores,
        })
    }
}

/// Per-run state: score bookkeeping and the two test primitives.
struct Ctx<'r> {
    tester: &'r dyn CiTester,
    pairwise: Option<&'r PairwiseCache<'r>>,
    opts: &'r SearchOptions,
    /// The target of the top-level run; scores are kept for tests against it.
    target: VarId,
    scores: BTreeMap<VarId, f64>,
    depth: usize,
}

impl Ctx<'_> {
    fn independent(&mut self, a: VarId, b: VarId, z: &[VarId]) -> bool {
        self.test(a, b, z).p_value >= self.opts.alpha
    }

    /// Runs one test, recording its p-value when it involves the target.
    fn test(&mut self, a: VarId, b: VarId, z: &[VarId]) -> CiResult {
        let r = self.tester.test(&CiQuery::raw(a, b, z));
        let other = if a == self.target {
            Some(b)
        } else if b == self.target {
            Some(a)
        } else {
            None
        };
        if let Some(v) = other {
            let s = self.scores.entry(v).or_insert(r.p_value);
            *s = s.max(r.p_value);
        }
        r
    }

    /// Whether the decomposability rule lets the test of `w` given `z` be
    /// skipped.
    fn skip(&self, z: &[VarId], w: VarId) -> bool {
        if !self.opts.use_idecomp || z.is_empty() {
            return false;
        }
        let cache = self.pairwise.expect("checked before the run");
        let mut set = Vec::with_capacity(z.len() + 1);
        set.extend_from_slice(z);
        set.push(w);
        cache.is_i_decomposable(&set)
    }

    fn within_depth(&self, d: usize) -> bool {
        self.opts.max_depth.is_none_or(|m| d <= m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.tag().parse::<Algorithm>().unwrap(), a);
            assert!(!a.plain().uses_idecomp());
        }
        assert!("pc".parse::<Algorithm>().is_err());
        assert_eq!(Algorithm::M3bDec.options().alpha, 0.05);
        assert_eq!(Algorithm::Alg1.options().alpha, 0.1);
        assert!(Algorithm::Alg1.options().use_idecomp);
    }
}

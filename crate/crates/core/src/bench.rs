//! Experiment harness: generate, parameterize, sample, discover, score.
//!
//! Every `(sweep value, run)` cell derives its own seeds from the config seed,
//! so cells run in parallel and results do not depend on scheduling. In a
//! sample-size sweep the cell seed ignores the sweep value: each run uses one
//! graph and one sample stream, and smaller sizes see a prefix of the larger
//! datasets.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::citest::{ContingencyTester, CountingCache};
use crate::discovery::{Algorithm, DiscoveryReport, SearchOptions, Searcher};
use crate::error::BenchError;
use crate::graph::VarId;
use crate::idecomp::PairwiseCache;
use crate::model::{CausalModel, ParamOptions};
use crate::synth::{generate, Case, GenConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    DirectCauses,
    MaxDegree,
    Samples,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub kind: SweepKind,
    pub values: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Alphas {
    /// Adjacency and HITON families.
    pub main: f64,
    pub pairwise: f64,
    /// Blanket searches.
    pub m3b: f64,
}

impl Default for Alphas {
    fn default() -> Self {
        Self {
            main: 0.1,
            pairwise: 0.2,
            m3b: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub case: Case,
    pub sweep: Sweep,
    pub runs: usize,
    pub algorithms: Vec<String>,
    pub alphas: Alphas,
    /// Template; the case, the swept field and the seed are overwritten per
    /// cell.
    pub gen: GenConfig,
    /// Rows per dataset unless sample size is swept.
    pub samples: usize,
    pub min_prob: f64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self::desk(Case::I)
    }
}

impl BenchConfig {
    /// Laptop-sized profile: 30 features, 20000 rows, 10 runs.
    pub fn desk(case: Case) -> Self {
        match case {
            Case::I => Self {
                case,
                sweep: Sweep {
                    kind: SweepKind::DirectCauses,
                    values: vec![5],
                },
                runs: 10,
                algorithms: [
                    "adj",
                    "alg1",
                    "i-hiton",
                    "i-hiton-dec",
                    "si-hiton",
                    "si-hiton-dec",
                ]
                .map(String::from)
                .to_vec(),
                alphas: Alphas::default(),
                gen: GenConfig::case_i(30, 5, 0),
                samples: 20_000,
                min_prob: 0.05,
                seed: 0,
            },
            Case::Ii => Self {
                case,
                sweep: Sweep {
                    kind: SweepKind::MaxDegree,
                    values: vec![4],
                },
                runs: 10,
                algorithms: vec!["m3b".into(), "m3b-dec".into()],
                alphas: Alphas::default(),
                gen: GenConfig::case_ii(29, 4, 0),
                samples: 20_000,
                min_prob: 0.05,
                seed: 0,
            },
        }
    }

    /// The 100-variable, 100000-row, 20-run profile. Expect hours.
    pub fn full_scale(case: Case) -> Self {
        let mut cfg = Self::desk(case);
        cfg.runs = 20;
        cfg.samples = 100_000;
        cfg.sweep.values = vec![7, 8, 9, 10];
        cfg.gen = match case {
            Case::I => GenConfig::case_i(99, 7, 0),
            Case::Ii => GenConfig::case_ii(99, 7, 0),
        };
        cfg
    }

    pub fn from_yaml(text: &str) -> Result<Self, BenchError> {
        serde_yaml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    /// Reads YAML or JSON, chosen by extension (`.json` is JSON).
    pub fn from_path(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_yaml(&text)
        }
    }

    pub fn parsed_algorithms(&self) -> Result<Vec<Algorithm>, BenchError> {
        self.algorithms
            .iter()
            .map(|a| {
                a.parse()
                    .map_err(|e: crate::error::DiscoveryError| BenchError::Config(e.to_string()))
            })
            .collect()
    }

    pub fn validate(&self) -> Result<Vec<Algorithm>, BenchError> {
        if self.runs < 1 {
            return Err(BenchError::Config("runs must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("no algorithms given".into()));
        }
        if self.sweep.values.is_empty() {
            return Err(BenchError::Config("sweep has no values".into()));
        }
        match (self.case, self.sweep.kind) {
            (Case::I, SweepKind::MaxDegree) | (Case::Ii, SweepKind::DirectCauses) => {
                return Err(BenchError::Config(format!(
                    "cannot sweep {:?} in case {}",
                    self.sweep.kind, self.case
                )))
            }
            _ => {}
        }
        if self.sweep.kind != SweepKind::Samples && self.samples == 0 {
            return Err(BenchError::Config("samples must be positive".into()));
        }
        self.parsed_algorithms()
    }
}

/// One algorithm on one cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub case: String,
    pub sweep_value: u64,
    pub algorithm: String,
    pub run: usize,
    pub accuracy: f64,
    pub time_seconds: f64,
    pub ci_tests: u64,
    #[serde(skip)]
    pub pairwise_tests: u64,
    /// Returned variables before truncation.
    #[serde(skip)]
    pub causes: Vec<VarId>,
}

/// Means over runs for one algorithm at one sweep value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: String,
    pub sweep_value: u64,
    pub accuracy: f64,
    pub time_seconds: f64,
    pub ci_tests: f64,
    pub runs: Vec<BenchRecord>,
}

#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub rows: Vec<BenchRow>,
}

/// Keeps the `k` returned variables with the lowest scores, ties by index.
pub fn truncate_by_pvalue(report: &DiscoveryReport, k: usize) -> Vec<VarId> {
    if report.causes.len() <= k {
        return report.causes.clone();
    }
    let mut scored: Vec<(f64, VarId)> = report
        .causes
        .iter()
        .map(|v| (report.pvalue_scores.get(v).copied().unwrap_or(0.0), *v))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut kept: Vec<VarId> = scored.into_iter().take(k).map(|(_, v)| v).collect();
    kept.sort_unstable();
    kept
}

/// Percentage of `truth` recovered by `predicted`, after truncating
/// `predicted` to `|truth|`. Panics on an empty truth set.
pub fn accuracy(report: &DiscoveryReport, truth: &[VarId]) -> f64 {
    assert!(!truth.is_empty(), "accuracy needs a non-empty truth set");
    let kept = truncate_by_pvalue(report, truth.len());
    let hits = kept.iter().filter(|v| truth.contains(v)).count();
    100.0 * hits as f64 / truth.len() as f64
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for a stream `lane` (0 = graph, 1 = parameters, 2 = samples) of
/// cell `(sweep_index, run)`.
pub fn derive_seed(seed: u64, sweep_index: u64, run: u64, lane: u64) -> u64 {
    splitmix(splitmix(splitmix(splitmix(seed) ^ sweep_index) ^ run) ^ lane)
}

struct Cell {
    index: usize,
    value: u64,
    run: usize,
}

fn run_cell(
    cfg: &BenchConfig,
    algos: &[Algorithm],
    cell: &Cell,
) -> Result<Vec<BenchRecord>, BenchError> {
    let wrap = |e: Box<dyn std::error::Error + Send + Sync>| BenchError::Run {
        sweep_value: cell.value,
        run: cell.run,
        source: e,
    };
    let sweep_key = if cfg.sweep.kind == SweepKind::Samples {
        0
    } else {
        cell.index as u64
    };
    let seed = |lane| derive_seed(cfg.seed, sweep_key, cell.run as u64, lane);

    let mut gen_cfg = cfg.gen.clone();
    gen_cfg.case = cfg.case;
    gen_cfg.seed = seed(0);
    let mut rows = cfg.samples;
    match cfg.sweep.kind {
        SweepKind::DirectCauses => gen_cfg.direct_causes = cell.value as usize,
        SweepKind::MaxDegree => gen_cfg.max_degree = cell.value as usize,
        SweepKind::Samples => rows = cell.value as usize,
    }
    let gen = generate(&gen_cfg).map_err(|e| wrap(Box::new(e)))?;
    let opts = ParamOptions {
        min_prob: cfg.min_prob,
        ..ParamOptions::default()
    };
    let model =
        CausalModel::<f64>::random(&gen.graph, seed(1), opts).map_err(|e| wrap(Box::new(e)))?;
    let data = model.sample(rows, seed(2));
    let features: Vec<VarId> = gen.graph.ids().filter(|&v| v != gen.target).collect();

    let mut out = Vec::with_capacity(algos.len());
    for &algo in algos {
        let alpha = if algo.is_blanket_search() {
            cfg.alphas.m3b
        } else {
            cfg.alphas.main
        };
        let tester = CountingCache::new(ContingencyTester::chi_square(&data, alpha));
        let pairwise = PairwiseCache::new(
            ContingencyTester::chi_square(&data, cfg.alphas.pairwise),
            cfg.alphas.pairwise,
        );
        let search = SearchOptions {
            use_idecomp: algo.uses_idecomp(),
            // parents of a predictive outcome need no symmetry check
            symmetry_correction: algo.is_blanket_search(),
            max_depth: None,
            alpha,
            pairwise_alpha: cfg.alphas.pairwise,
        };
        let searcher = Searcher::new(&tester, search).with_pairwise(&pairwise);
        let report = algo
            .run(&searcher, &features, gen.target)
            .map_err(|e| wrap(Box::new(e)))?;
        let acc = if gen.truth.is_empty() {
            if report.causes.is_empty() {
                100.0
            } else {
                0.0
            }
        } else {
            accuracy(&report, &gen.truth)
        };
        out.push(BenchRecord {
            case: cfg.case.to_string(),
            sweep_value: cell.value,
            algorithm: algo.tag().to_owned(),
            run: cell.run,
            accuracy: acc,
            time_seconds: report.wall_time.as_secs_f64(),
            ci_tests: report.ci_count,
            pairwise_tests: report.pairwise_count,
            causes: report.causes,
        });
    }
    Ok(out)
}

/// Runs every cell and aggregates per `(algorithm, sweep value)`.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome, BenchError> {
    let algos = cfg.validate()?;
    let cells: Vec<Cell> = cfg
        .sweep
        .values
        .iter()
        .enumerate()
        .flat_map(|(index, &value)| (0..cfg.runs).map(move |run| Cell { index, value, run }))
        .collect();
    let per_cell: Vec<Vec<BenchRecord>> = cells
        .par_iter()
        .map(|c| run_cell(cfg, &algos, c))
        .collect::<Result<_, _>>()?;
    let records: Vec<BenchRecord> = per_cell.into_iter().flatten().collect();
    let rows = aggregate(cfg, &algos, &records);
    Ok(BenchOutcome { records, rows })
}

fn aggregate(cfg: &BenchConfig, algos: &[Algorithm], records: &[BenchRecord]) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &value in &cfg.sweep.values {
        for algo in algos {
            let runs: Vec<BenchRecord> = records
                .iter()
                .filter(|r| r.sweep_value == value && r.algorithm == algo.tag())
                .cloned()
                .collect();
            let n = runs.len().max(1) as f64;
            rows.push(BenchRow {
                algorithm: algo.tag().to_owned(),
                sweep_value: value,
                accuracy: runs.iter().map(|r| r.accuracy).sum::<f64>() / n,
                time_seconds: runs.iter().map(|r| r.time_seconds).sum::<f64>() / n,
                ci_tests: runs.iter().map(|r| r.ci_tests as f64).sum::<f64>() / n,
                runs,
            });
        }
    }
    rows
}

/// Per-run CSV: case, sweep_value, algorithm, run, accuracy, time_seconds,
/// ci_tests.
pub fn write_csv<W: Write>(records: &[BenchRecord], w: W) -> Result<(), BenchError> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// JSON summary of the means, keyed by sweep value then algorithm.
pub fn summary_json(cfg: &BenchConfig, rows: &[BenchRow]) -> serde_json::Value {
    let mut by_value: BTreeMap<u64, BTreeMap<String, serde_json::Value>> = BTreeMap::new();
    for r in rows {
        by_value.entry(r.sweep_value).or_default().insert(
            r.algorithm.clone(),
            serde_json::json!({
                "accuracy": r.accuracy,
                "time_seconds": r.time_seconds,
                "ci_tests": r.ci_tests,
                "runs": r.runs.len(),
            }),
        );
    }
    serde_json::json!({
        "case": cfg.case.to_string(),
        "sweep": cfg.sweep.kind,
        "seed": cfg.seed,
        "results": by_value.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>(),
    })
}

//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any fail.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use predcause::bench::{run_bench, BenchConfig, BenchOutcome, SweepKind};
use predcause::citest::{CiQuery, CiTester, ContingencyTester, OracleTester, EXACT_TOLERANCE};
use predcause::discovery::{Algorithm, SearchOptions, Searcher};
use predcause::idecomp::PairwiseCache;
use predcause::model::{exact_joint, Dataset, ParamOptions, DEFAULT_JOINT_CAP};
use predcause::synth::{fig4b_family, generate_case_i, generate_case_ii, Case, GenConfig};
use predcause::{Admg, Joint, Model, VarId, Variable};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(pass: bool, elapsed: Duration, limit_secs: u64, detail: String) -> Outcome {
    let fast = elapsed <= Duration::from_secs(limit_secs);
    let note = if fast {
        String::new()
    } else {
        format!("; over the {limit_secs}s budget")
    };
    outcome(pass && fast, format!("{detail}{note}"))
}

/// General ADMG with random density over `2..=max_nodes` nodes and a random
/// target node.
fn random_admg(seed: u64, max_nodes: usize) -> (Admg, VarId) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_nodes);
    let mut cfg = GenConfig::case_i(n - 1, 0, rng.random());
    cfg.p_directed = rng.random_range(0.1..0.6);
    cfg.p_bidirected = rng.random_range(0.0..0.3);
    cfg.max_degree = rng.random_range(2..=6);
    let g = generate_case_i(&cfg).unwrap().graph;
    let y = VarId(rng.random_range(0..g.len()));
    (g, y)
}

/// Predictive graph with `1..=max_features` features; returns graph, outcome
/// and parents of the outcome.
fn random_predictive(seed: u64, max_features: usize) -> (Admg, VarId, Vec<VarId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.random_range(1..=max_features);
    let c = rng.random_range(0..=n.min(6));
    let mut cfg = GenConfig::case_i(n, c, rng.random());
    cfg.p_directed = rng.random_range(0.1..0.6);
    cfg.p_bidirected = rng.random_range(0.0..0.3);
    let gen = generate_case_i(&cfg).unwrap();
    (gen.graph, gen.target, gen.truth)
}

fn oracle_run(g: &Admg, y: VarId, opts: SearchOptions) -> (Vec<VarId>, u64) {
    let t = OracleTester::new(g);
    let pw = PairwiseCache::new(OracleTester::new(g), 0.2);
    let feats: Vec<VarId> = g.ids().filter(|&v| v != y).collect();
    let r = Searcher::new(&t, opts)
        .with_pairwise(&pw)
        .adj_search(&feats, y)
        .unwrap();
    (r.causes, r.ci_count)
}

fn nonsym_opts(use_idecomp: bool, max_depth: Option<usize>) -> SearchOptions {
    SearchOptions {
        use_idecomp,
        symmetry_correction: false,
        max_depth,
        ..SearchOptions::default()
    }
}

fn c1_rule_equivalence() -> Outcome {
    let start = Instant::now();
    let mut agree = 0;
    for seed in 0..500 {
        let (g, y) = random_admg(seed, 15);
        let (plain, _) = oracle_run(&g, y, nonsym_opts(false, None));
        let (dec, _) = oracle_run(&g, y, nonsym_opts(true, None));
        agree += usize::from(plain == dec);
    }
    within(
        agree == 500,
        start.elapsed(),
        60,
        format!("{agree}/500 identical"),
    )
}

fn c2_parents_recovered() -> Outcome {
    let mut hits = 0;
    for seed in 0..200 {
        let (g, y, parents) = random_predictive(seed, 15);
        let (found, _) = oracle_run(&g, y, nonsym_opts(true, None));
        hits += usize::from(found == parents);
    }
    outcome(
        hits == 200,
        format!("{hits}/200 returned exactly parents(Y)"),
    )
}

fn c3_cubic_separation() -> Outcome {
    let start = Instant::now();
    let mut with = BTreeMap::new();
    let mut without = BTreeMap::new();
    for n in [6usize, 8, 10] {
        let pg = fig4b_family(n);
        let g = pg.graph();
        with.insert(n, oracle_run(g, pg.outcome(), nonsym_opts(true, None)).1);
        without.insert(n, oracle_run(g, pg.outcome(), nonsym_opts(false, None)).1);
    }
    let cube = |n: usize| (n * n * n) as f64;
    let c = with[&6] as f64 / cube(6);
    let cubic_fit = [8, 10]
        .iter()
        .all(|&n| with[&n] as f64 <= c * cube(n) + 1e-9);
    let per_cube: Vec<f64> = [6, 8, 10]
        .iter()
        .map(|&n| without[&n] as f64 / cube(n))
        .collect();
    let super_cubic = without[&6] < without[&8]
        && without[&8] < without[&10]
        && per_cube.windows(2).all(|w| w[1] > w[0]);
    let ratio = without[&10] as f64 / with[&10] as f64;
    within(
        cubic_fit && super_cubic && ratio >= 4.0,
        start.elapsed(),
        120,
        format!("with rule {with:?}, without {without:?}, ratio at n=10 {ratio:.2}"),
    )
}

fn random_small_model(seed: u64, max_observed: usize) -> (Model, Joint) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa11);
    let n = rng.random_range(3..=max_observed);
    let mut cfg = GenConfig::case_i(n - 1, 0, rng.random());
    cfg.p_directed = rng.random_range(0.2..0.7);
    cfg.p_bidirected = rng.random_range(0.0..0.3);
    cfg.arity_choices = vec![2, 3];
    let g = generate_case_i(&cfg).unwrap().graph;
    let m = Model::random(&g, rng.random(), ParamOptions::default()).unwrap();
    let j = exact_joint(&m, DEFAULT_JOINT_CAP).unwrap();
    (m, j)
}

/// All non-empty subsets of `pool` with one or two members.
fn small_sets(pool: &[VarId]) -> Vec<Vec<VarId>> {
    pool.iter()
        .map(|&v| vec![v])
        .chain(pool.iter().copied().combinations(2))
        .collect()
}

fn c4_independence_rule() -> Outcome {
    let (mut premises, mut counterexamples) = (0usize, 0usize);
    for seed in 0..200 {
        let (m, j) = random_small_model(seed, 6);
        let ids: Vec<VarId> = m.observed().ids().collect();
        let ind =
            |x: &[VarId], z: &[VarId], y: &[VarId]| j.is_independent(x, z, y, EXACT_TOLERANCE);
        for x in small_sets(&ids) {
            let r1: Vec<VarId> = ids.iter().copied().filter(|v| !x.contains(v)).collect();
            for y in small_sets(&r1) {
                let r2: Vec<VarId> = r1.iter().copied().filter(|v| !y.contains(v)).collect();
                for z in small_sets(&r2) {
                    let r3: Vec<VarId> = r2.iter().copied().filter(|v| !z.contains(v)).collect();
                    for w in small_sets(&r3) {
                        let zw: Vec<VarId> = z.iter().chain(&w).copied().collect();
                        let xz: Vec<VarId> = x.iter().chain(&z).copied().collect();
                        if ind(&x, &zw, &y) && ind(&xz, &[], &w) {
                            premises += 1;
                            counterexamples += usize::from(!ind(&x, &z, &y));
                        }
                    }
                }
            }
        }
    }
    outcome(
        counterexamples == 0 && premises > 0,
        format!("{premises} certified premise pairs, {counterexamples} counterexamples"),
    )
}

fn c5_markov_boundary() -> Outcome {
    let start = Instant::now();
    let (mut ok, mut wf_checked) = (0, 0);
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0);
        let n = rng.random_range(1..=5);
        let c = rng.random_range(0..=n);
        let mut cfg = GenConfig::case_i(n, c, rng.random());
        cfg.p_bidirected = rng.random_range(0.0..0.3);
        let gen = generate_case_i(&cfg).unwrap();
        let m = Model::random(&gen.graph, rng.random(), ParamOptions::default()).unwrap();
        let j = exact_joint(&m, DEFAULT_JOINT_CAP).unwrap();
        let y = gen.target;
        let feats: Vec<VarId> = gen.graph.ids().filter(|&v| v != y).collect();
        let ind =
            |x: &[VarId], z: &[VarId], w: &[VarId]| j.is_independent(x, z, w, EXACT_TOLERANCE);

        let blankets: Vec<Vec<VarId>> = feats
            .iter()
            .copied()
            .powerset()
            .filter(|s| {
                let rest: Vec<VarId> = feats.iter().copied().filter(|v| !s.contains(v)).collect();
                rest.is_empty() || ind(&[y], s, &rest)
            })
            .collect();
        let minimal: Vec<&Vec<VarId>> = blankets
            .iter()
            .filter(|s| {
                !blankets
                    .iter()
                    .any(|t| t.len() < s.len() && t.iter().all(|v| s.contains(v)))
            })
            .collect();
        let direct: Vec<VarId> = feats
            .iter()
            .copied()
            .filter(|&x| {
                let others: Vec<VarId> = feats.iter().copied().filter(|&v| v != x).collect();
                !ind(&[y], &others, &[x])
            })
            .collect();
        let weakly_faithful = gen.truth.iter().all(|&p| {
            let others: Vec<VarId> = feats.iter().copied().filter(|&v| v != p).collect();
            others.into_iter().powerset().all(|z| !ind(&[y], &z, &[p]))
        });
        wf_checked += usize::from(weakly_faithful);
        let unique = minimal.len() == 1 && *minimal[0] == direct;
        ok += usize::from(unique && (!weakly_faithful || direct == gen.truth));
    }
    within(
        ok == 100,
        start.elapsed(),
        300,
        format!("{ok}/100 unique boundary equal to the direct-cause set ({wf_checked} weakly faithful, compared to parents)"),
    )
}

fn pair_tags() -> [(Algorithm, Algorithm); 3] {
    [
        (Algorithm::Alg1, Algorithm::Adj),
        (Algorithm::IHitonDec, Algorithm::IHiton),
        (Algorithm::SiHitonDec, Algorithm::SiHiton),
    ]
}

fn mean_accuracy(o: &BenchOutcome, algo: Algorithm, value: u64) -> f64 {
    o.rows
        .iter()
        .find(|r| r.algorithm == algo.tag() && r.sweep_value == value)
        .map(|r| r.accuracy)
        .unwrap_or(f64::NAN)
}

fn c6_desk_trends() -> Outcome {
    let start = Instant::now();
    let cfg = BenchConfig::desk(Case::I);
    let o = match run_bench(&cfg) {
        Ok(o) => o,
        Err(e) => return outcome(false, format!("bench failed: {e}")),
    };
    let mut dominance_violations = 0;
    for (dec, plain) in pair_tags() {
        for run in 0..cfg.runs {
            let count = |a: Algorithm| {
                o.records
                    .iter()
                    .find(|r| r.run == run && r.algorithm == a.tag())
                    .map(|r| r.ci_tests)
                    .unwrap()
            };
            dominance_violations += usize::from(count(dec) > count(plain));
        }
    }
    let gaps: Vec<f64> = pair_tags()
        .iter()
        .map(|&(d, p)| (mean_accuracy(&o, d, 5) - mean_accuracy(&o, p, 5)).abs())
        .collect();
    let alg1 = mean_accuracy(&o, Algorithm::Alg1, 5);
    let summary: Vec<String> = o
        .rows
        .iter()
        .map(|r| format!("{} acc {:.1} ci {:.0}", r.algorithm, r.accuracy, r.ci_tests))
        .collect();
    within(
        dominance_violations == 0 && gaps.iter().all(|&g| g <= 5.0) && alg1 >= 75.0,
        start.elapsed(),
        600,
        format!(
            "(a) {dominance_violations} paired-run count violations, (b) gaps {gaps:.1?}, (c) alg1 {alg1:.1}; {}",
            summary.join(", ")
        ),
    )
}

fn c7_sample_sweep() -> Outcome {
    let start = Instant::now();
    let mut cfg = BenchConfig::desk(Case::I);
    cfg.sweep.kind = SweepKind::Samples;
    cfg.sweep.values = vec![1000, 5000, 20_000, 100_000];
    let o = match run_bench(&cfg) {
        Ok(o) => o,
        Err(e) => return outcome(false, format!("bench failed: {e}")),
    };
    let algos = cfg.parsed_algorithms().unwrap();
    let improves = algos
        .iter()
        .all(|&a| mean_accuracy(&o, a, 100_000) >= mean_accuracy(&o, a, 1000));
    let worst_gap = pair_tags()
        .iter()
        .flat_map(|&(d, p)| {
            let o = &o;
            cfg.sweep
                .values
                .iter()
                .map(move |&n| (mean_accuracy(o, d, n) - mean_accuracy(o, p, n)).abs())
        })
        .fold(0.0, f64::max);
    let curve: Vec<String> = algos
        .iter()
        .map(|&a| {
            let accs: Vec<String> = cfg
                .sweep
                .values
                .iter()
                .map(|&n| format!("{:.0}", mean_accuracy(&o, a, n)))
                .collect();
            format!("{} [{}]", a, accs.join(" "))
        })
        .collect();
    within(
        improves && worst_gap <= 5.0,
        start.elapsed(),
        900,
        format!("largest dec/plain gap {worst_gap:.1}; {}", curve.join(", ")),
    )
}

fn c8_chi_square() -> Outcome {
    let mut rejections = 0;
    for trial in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let cols: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                (0..10_000)
                    .map(|_| u8::from(rng.random_bool(0.5)))
                    .collect()
            })
            .collect();
        let d = Dataset::new(vec![Variable::new("x", 2), Variable::new("y", 2)], cols).unwrap();
        let r = ContingencyTester::chi_square(&d, 0.05)
            .test(&CiQuery::new(VarId(0), VarId(1), vec![]).unwrap());
        rejections += usize::from(r.p_value < 0.05);
    }
    let rate = rejections as f64 / 500.0;
    // [[30,10],[10,30]]
    let cells = [(0u8, 0u8, 30), (0, 1, 10), (1, 0, 10), (1, 1, 30)];
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (x, y, n) in cells {
        a.extend(std::iter::repeat_n(x, n));
        b.extend(std::iter::repeat_n(y, n));
    }
    let d = Dataset::new(
        vec![Variable::new("a", 2), Variable::new("b", 2)],
        vec![a, b],
    )
    .unwrap();
    let r = ContingencyTester::chi_square(&d, 0.05)
        .test(&CiQuery::new(VarId(0), VarId(1), vec![]).unwrap());
    let fixture = (r.statistic - 20.0).abs() <= 1e-9 && r.dof == 1;
    outcome(
        (0.03..=0.07).contains(&rate) && fixture,
        format!(
            "rejection rate {rate:.3}; fixture statistic {} dof {}",
            r.statistic, r.dof
        ),
    )
}

fn c9_ancestral_blanket() -> Outcome {
    let mut ok = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc9);
        let n = rng.random_range(2..=10);
        let mut cfg = GenConfig::case_ii(n - 1, rng.random_range(2..=5), rng.random());
        cfg.p_directed = rng.random_range(0.1..0.6);
        cfg.p_bidirected = rng.random_range(0.0..0.4);
        let gen = generate_case_ii(&cfg).unwrap();
        let (g, y) = (&gen.graph, gen.target);
        let blanket = g.markov_blanket(y).unwrap();
        let others: Vec<VarId> = g.ids().filter(|&v| v != y).collect();
        let separates = |s: &[VarId]| {
            let rest: Vec<VarId> = others.iter().copied().filter(|v| !s.contains(v)).collect();
            rest.is_empty() || g.msep(&[y], s, &rest)
        };
        let seps: Vec<Vec<VarId>> = others
            .iter()
            .copied()
            .powerset()
            .filter(|s| separates(s))
            .collect();
        let minimal: Vec<&Vec<VarId>> = seps
            .iter()
            .filter(|s| {
                !seps
                    .iter()
                    .any(|t| t.len() < s.len() && t.iter().all(|v| s.contains(v)))
            })
            .collect();
        ok += usize::from(separates(&blanket) && minimal.len() == 1 && *minimal[0] == blanket);
    }
    outcome(
        ok == 100,
        format!("{ok}/100 blankets separate and equal the unique minimal separating set"),
    )
}

fn c10_anytime() -> Outcome {
    let (mut ok, mut total) = (0, 0);
    for seed in 0..100 {
        let (g, y, _) = random_predictive(seed + 10_000, 12);
        for rule in [false, true] {
            let (full, _) = oracle_run(&g, y, nonsym_opts(rule, None));
            for k in 0..=3 {
                let (cut, _) = oracle_run(&g, y, nonsym_opts(rule, Some(k)));
                total += 1;
                ok += usize::from(full.iter().all(|v| cut.contains(v)));
            }
        }
    }
    outcome(
        ok == total,
        format!("{ok}/{total} depth-bounded results contain the unbounded result"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("rule equivalence on 500 oracle ADMGs", c1_rule_equivalence),
        (
            "parents recovered on 200 predictive graphs",
            c2_parents_recovered,
        ),
        (
            "cubic test count with the rule on the chain family",
            c3_cubic_separation,
        ),
        (
            "independence rule holds on exact joints",
            c4_independence_rule,
        ),
        (
            "Markov boundary equals the direct causes",
            c5_markov_boundary,
        ),
        ("desk-scale case i trends", c6_desk_trends),
        ("sample-size sweep trends", c7_sample_sweep),
        ("chi-square calibration and fixture", c8_chi_square),
        (
            "ancestral blanket is the minimal separating set",
            c9_ancestral_blanket,
        ),
        ("depth-bounded search contains the full result", c10_anytime),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} [{secs:.1}s] {name}: {}",
            i + 1,
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

use predcause::citest::{CiTester, CountingCache, OracleTester};
use predcause::discovery::{Algorithm, SearchOptions, Searcher};
use predcause::idecomp::PairwiseCache;
use predcause::synth::{generate_case_i, generate_case_ii, GenConfig};
use predcause::{Admg, VarId};
use proptest::prelude::*;

fn opts(use_idecomp: bool, symmetry: bool, max_depth: Option<usize>) -> SearchOptions {
    SearchOptions {
        use_idecomp,
        symmetry_correction: symmetry,
        max_depth,
        ..SearchOptions::default()
    }
}

struct Run {
    causes: Vec<VarId>,
    ci: u64,
    pairwise: u64,
}

fn run_with(g: &Admg, y: VarId, algo: Algorithm, o: SearchOptions) -> Run {
    let t = OracleTester::new(g);
    let pw = PairwiseCache::new(OracleTester::new(g), 0.2);
    let feats: Vec<VarId> = g.ids().filter(|&v| v != y).collect();
    let s = Searcher::new(&t, o).with_pairwise(&pw);
    let r = algo.run(&s, &feats, y).unwrap();
    Run {
        causes: r.causes,
        ci: r.ci_count,
        pairwise: r.pairwise_count,
    }
}

fn nonsym(g: &Admg, y: VarId, o: SearchOptions) -> Run {
    run_with(
        g,
        y,
        Algorithm::Adj,
        SearchOptions {
            symmetry_correction: false,
            ..o
        },
    )
}

/// A general ADMG over `n` nodes with a uniformly chosen target.
fn admg_and_target() -> impl Strategy<Value = (Admg, VarId)> {
    (2usize..=14, any::<u64>(), 0.1f64..0.6, 0.0f64..0.3).prop_map(|(n, seed, pd, pb)| {
        let mut cfg = GenConfig::case_i(n, 0, seed);
        cfg.p_directed = pd;
        cfg.p_bidirected = pb;
        cfg.max_degree = 5;
        let g = generate_case_i(&cfg).unwrap().graph;
        let y = VarId(seed as usize % g.len());
        (g, y)
    })
}

fn predictive() -> impl Strategy<Value = (Admg, VarId, Vec<VarId>)> {
    (1usize..=12, any::<u64>(), 0.1f64..0.6, 0.0f64..0.3).prop_flat_map(|(n, seed, pd, pb)| {
        (0..=n.min(6)).prop_map(move |c| {
            let mut cfg = GenConfig::case_i(n, c, seed);
            cfg.p_directed = pd;
            cfg.p_bidirected = pb;
            let gen = generate_case_i(&cfg).unwrap();
            (gen.graph, gen.target, gen.truth)
        })
    })
}

fn ancestral() -> impl Strategy<Value = (Admg, VarId, Vec<VarId>)> {
    (
        2usize..=11,
        any::<u64>(),
        0.1f64..0.6,
        0.0f64..0.4,
        2usize..=5,
    )
        .prop_map(|(n, seed, pd, pb, d)| {
            let mut cfg = GenConfig::case_ii(n, d, seed);
            cfg.p_directed = pd;
            cfg.p_bidirected = pb;
            let gen = generate_case_ii(&cfg).unwrap();
            (gen.graph, gen.target, gen.truth)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rule_does_not_change_nonsym_output((g, y) in admg_and_target()) {
        let plain = nonsym(&g, y, opts(false, false, None));
        let dec = nonsym(&g, y, opts(true, false, None));
        prop_assert_eq!(&plain.causes, &dec.causes);
        prop_assert!(dec.ci <= plain.ci);
        let n = (g.len() - 1) as u64;
        prop_assert!(dec.pairwise <= n * n);
    }

    #[test]
    fn nonsym_returns_parents_of_the_outcome((g, y, truth) in predictive()) {
        prop_assert_eq!(nonsym(&g, y, opts(true, false, None)).causes, truth.clone());
        prop_assert_eq!(nonsym(&g, y, opts(false, false, None)).causes, truth);
    }

    #[test]
    fn symmetry_correction_is_redundant_on_predictive_graphs((g, y, _t) in predictive()) {
        let a = run_with(&g, y, Algorithm::Adj, opts(false, false, None));
        let b = run_with(&g, y, Algorithm::Adj, opts(false, true, None));
        prop_assert_eq!(a.causes, b.causes);
    }

    #[test]
    fn depth_bound_only_adds((g, y) in admg_and_target(), k in 0usize..4) {
        let full = nonsym(&g, y, opts(false, false, None)).causes;
        let cut = nonsym(&g, y, opts(false, false, Some(k))).causes;
        prop_assert!(full.iter().all(|v| cut.contains(v)));
    }

    #[test]
    fn hiton_variants_find_the_parents((g, y, truth) in predictive()) {
        for algo in [Algorithm::IHiton, Algorithm::IHitonDec, Algorithm::SiHiton, Algorithm::SiHitonDec] {
            let r = run_with(&g, y, algo, algo.options());
            prop_assert_eq!(&r.causes, &truth, "{}", algo);
        }
        let plain = run_with(&g, y, Algorithm::IHiton, Algorithm::IHiton.options());
        let dec = run_with(&g, y, Algorithm::IHitonDec, Algorithm::IHitonDec.options());
        prop_assert!(dec.ci <= plain.ci);
        let plain = run_with(&g, y, Algorithm::SiHiton, Algorithm::SiHiton.options());
        let dec = run_with(&g, y, Algorithm::SiHitonDec, Algorithm::SiHitonDec.options());
        prop_assert!(dec.ci <= plain.ci);
    }

    #[test]
    fn m3b_matches_the_structural_blanket((g, y, truth) in ancestral()) {
        for algo in [Algorithm::M3b, Algorithm::M3bDec] {
            let r = run_with(&g, y, algo, algo.options());
            prop_assert_eq!(&r.causes, &truth, "{} on {:?}", algo, g);
        }
    }

    #[test]
    fn m3b_on_dags_gives_parents_children_spouses(n in 2usize..=12, seed in any::<u64>()) {
        let mut cfg = GenConfig::case_ii(n - 1, 4, seed);
        cfg.p_bidirected = 0.0;
        let gen = generate_case_ii(&cfg).unwrap();
        let g = &gen.graph;
        let y = gen.target;
        let mut classic: Vec<VarId> = g.parents(y).to_vec();
        for &c in g.children(y) {
            classic.push(c);
            classic.extend(g.parents(c).iter().copied().filter(|&p| p != y));
        }
        classic.sort_unstable();
        classic.dedup();
        prop_assert_eq!(run_with(g, y, Algorithm::M3b, Algorithm::M3b.options()).causes, classic);
    }
}

#[test]
fn cache_never_changes_answers() {
    for seed in 0..50 {
        let gen = generate_case_i(&GenConfig::case_i(10, 3, seed)).unwrap();
        let g = &gen.graph;
        let feats: Vec<VarId> = g.ids().filter(|&v| v != gen.target).collect();
        let raw = OracleTester::new(g);
        let cached = CountingCache::new(OracleTester::new(g));
        let pw = PairwiseCache::new(OracleTester::new(g), 0.2);
        for algo in Algorithm::ALL {
            let a = algo.run(
                &Searcher::new(&raw, algo.options()).with_pairwise(&pw),
                &feats,
                gen.target,
            );
            let b = algo.run(
                &Searcher::new(&cached, algo.options()).with_pairwise(&pw),
                &feats,
                gen.target,
            );
            assert_eq!(a.unwrap().causes, b.unwrap().causes);
        }
        assert!(cached.count() <= raw.count());
    }
}

//! `predcause` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, unknown names),
//! 2 on runtime failures (I/O, infeasible configurations, invalid files).

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use predcause::bench::{self, derive_seed, BenchConfig};
use predcause::citest::{CiQuery, CiTester, ContingencyTester, Statistic};
use predcause::discovery::{Algorithm, SearchOptions, Searcher};
use predcause::graph::GraphJson;
use predcause::idecomp::{PairwiseCache, DEFAULT_PAIRWISE_ALPHA};
use predcause::model::{Dataset, ModelJson, ParamOptions};
use predcause::synth::{generate, Case, GenConfig};
use predcause::{Model, VarId};

/// Version of the discovery report layout.
const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "predcause",
    version,
    about = "Find the direct causes of a predictive model's output"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random causal model and write it as model JSON.
    Generate(GenerateArgs),
    /// Draw samples from a model JSON file into a CSV dataset.
    Sample(SampleArgs),
    /// Run one conditional independence test on a CSV dataset.
    Citest(CitestArgs),
    /// Run a discovery algorithm on a CSV dataset.
    Discover(DiscoverArgs),
    /// Print the true direct causes or Markov blanket from a graph file.
    Oracle(OracleArgs),
    /// Run a benchmark sweep.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    case: CaseArg,
    /// Number of features; case ii draws features + 1 variables.
    #[arg(long)]
    features: usize,
    /// Parents of the outcome (case i).
    #[arg(long)]
    direct_causes: Option<usize>,
    /// Degree bound on every variable (case ii; optional in case i).
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    p_directed: Option<f64>,
    #[arg(long)]
    p_bidirected: Option<f64>,
    /// Lower bound on every CPT entry.
    #[arg(long, default_value_t = 0.05)]
    min_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    I,
    Ii,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::I => Case::I,
            CaseArg::Ii => Case::Ii,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    rows: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestArg {
    Chi2,
    G,
}

impl From<TestArg> for Statistic {
    fn from(t: TestArg) -> Self {
        match t {
            TestArg::Chi2 => Statistic::ChiSquare,
            TestArg::G => Statistic::G,
        }
    }
}

#[derive(Args)]
struct CitestArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    /// Conditioning variables.
    #[arg(long, num_args = 0..)]
    z: Vec<String>,
    #[arg(long, value_enum, default_value = "chi2")]
    test: TestArg,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Minimum rows per degree of freedom before a test is trusted.
    #[arg(long)]
    rows_per_dof: Option<f64>,
}

#[derive(Args)]
struct DiscoverArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    outcome: String,
    /// adj, alg1, i-hiton, i-hiton-dec, si-hiton, si-hiton-dec, m3b, m3b-dec
    #[arg(long)]
    algo: String,
    /// Defaults to 0.05 for m3b and m3b-dec, 0.1 otherwise.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_PAIRWISE_ALPHA)]
    pairwise_alpha: f64,
    /// Stop the adjacency search after this conditioning-set size.
    #[arg(long)]
    max_depth: Option<usize>,
    /// Skip the symmetry correction of the adjacency search.
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long, value_enum, default_value = "chi2")]
    test: TestArg,
    /// Report file; standard output when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Graph or model JSON.
    #[arg(long)]
    graph: PathBuf,
    /// Defaults to the outcome recorded in the file.
    #[arg(long)]
    outcome: Option<String>,
    #[arg(long)]
    markov_blanket: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// YAML or JSON bench configuration; the desk profile when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "i")]
    case: CaseArg,
    /// Use the full-scale profile (hours of compute).
    #[arg(long, conflicts_with = "config")]
    full_scale: bool,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Per-run CSV output.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON summary output; standard output when omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

type Outcome = Result<(), Failure>;

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(runtime)
        }
    }
}

fn load_data(path: &Path) -> Result<Dataset, Failure> {
    let f =
        fs::File::open(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    Dataset::read_csv(io::BufReader::new(f), None).map_err(runtime)
}

fn column(data: &Dataset, name: &str) -> Result<VarId, Failure> {
    data.var(name)
        .ok_or_else(|| Failure::Usage(format!("no column named {name:?} in the data")))
}

fn cmd_generate(a: GenerateArgs) -> Outcome {
    let case = Case::from(a.case);
    let mut cfg = match case {
        Case::I => {
            let c = a
                .direct_causes
                .ok_or_else(|| Failure::Usage("case i needs --direct-causes".into()))?;
            if c > a.features {
                return Err(Failure::Usage(format!(
                    "--direct-causes {c} exceeds --features {}",
                    a.features
                )));
            }
            let mut cfg = GenConfig::case_i(a.features, c, 0);
            if let Some(d) = a.max_degree {
                cfg.max_degree = d;
            }
            cfg
        }
        Case::Ii => {
            let d = a
                .max_degree
                .ok_or_else(|| Failure::Usage("case ii needs --max-degree".into()))?;
            GenConfig::case_ii(a.features, d, 0)
        }
    };
    if let Some(p) = a.p_directed {
        cfg.p_directed = p;
    }
    if let Some(p) = a.p_bidirected {
        cfg.p_bidirected = p;
    }
    cfg.seed = derive_seed(a.seed, 0, 0, 0);
    let gen = generate(&cfg).map_err(runtime)?;
    let opts = ParamOptions {
        min_prob: a.min_prob,
        ..ParamOptions::default()
    };
    let model = Model::random(&gen.graph, derive_seed(a.seed, 0, 0, 1), opts).map_err(runtime)?;
    let text = ModelJson::from_model(&model, Some(gen.target)).to_json();
    emit(a.output.as_deref(), &(text + "\n"))
}

fn cmd_sample(a: SampleArgs) -> Outcome {
    let json = ModelJson::from_json(&read(&a.model)?).map_err(runtime)?;
    let model: Model = json.to_model().map_err(runtime)?;
    let data = model.sample(a.rows, derive_seed(a.seed, 0, 0, 2));
    let mut buf = Vec::new();
    data.write_csv(&mut buf).map_err(runtime)?;
    emit(
        a.output.as_deref(),
        &String::from_utf8(buf).map_err(runtime)?,
    )
}

fn cmd_citest(a: CitestArgs) -> Outcome {
    let data = load_data(&a.data)?;
    let x = column(&data, &a.x)?;
    let y = column(&data, &a.y)?;
    let z =
        a.z.iter()
            .map(|n| column(&data, n))
            .collect::<Result<Vec<_>, _>>()?;
    let query = CiQuery::new(x, y, z).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut tester = ContingencyTester::new(&data, a.test.into(), a.alpha);
    if let Some(r) = a.rows_per_dof {
        tester = tester.with_rows_per_dof(r);
    }
    let result = tester.test(&query);
    let text = serde_json::to_string_pretty(&result).map_err(runtime)?;
    emit(None, &(text + "\n"))
}

fn cmd_discover(a: DiscoverArgs) -> Outcome {
    let algo: Algorithm = a
        .algo
        .parse()
        .map_err(|e: predcause::error::DiscoveryError| Failure::Usage(e.to_string()))?;
    let data = load_data(&a.data)?;
    let target = column(&data, &a.outcome)?;
    let features: Vec<VarId> = (0..data.n_vars())
        .map(VarId)
        .filter(|&v| v != target)
        .collect();
    let alpha = a.alpha.unwrap_or_else(|| algo.default_alpha());
    let opts = SearchOptions {
        use_idecomp: algo.uses_idecomp(),
        symmetry_correction: !a.no_symmetry,
        max_depth: a.max_depth,
        alpha,
        pairwise_alpha: a.pairwise_alpha,
    };
    let tester = ContingencyTester::new(&data, a.test.into(), alpha);
    let pairwise = PairwiseCache::new(
        ContingencyTester::new(&data, a.test.into(), a.pairwise_alpha),
        a.pairwise_alpha,
    );
    let searcher = Searcher::new(&tester, opts).with_pairwise(&pairwise);
    let report = algo.run(&searcher, &features, target).map_err(runtime)?;

    let name = |v: VarId| data.variables()[v.0].name.clone();
    let scores: BTreeMap<String, f64> = report
        .pvalue_scores
        .iter()
        .map(|(&v, &p)| (name(v), p))
        .collect();
    let doc = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "algorithm": report.algorithm,
        "outcome": name(target),
        "causes": report.causes.iter().map(|&v| name(v)).collect::<Vec<_>>(),
        "ci_tests": report.ci_count,
        "pairwise_tests": report.pairwise_count,
        "depth_reached": report.depth_reached,
        "pvalue_scores": scores,
        "wall_time_seconds": report.wall_time.as_secs_f64(),
        "parameters": {
            "alpha": alpha,
            "pairwise_alpha": a.pairwise_alpha,
            "max_depth": a.max_depth,
            "symmetry_correction": !a.no_symmetry,
            "rows": data.rows(),
        },
    });
    let text = serde_json::to_string_pretty(&doc).map_err(runtime)?;
    emit(a.report.as_deref(), &(text + "\n"))
}

fn cmd_oracle(a: OracleArgs) -> Outcome {
    let json = GraphJson::from_json(&read(&a.graph)?).map_err(runtime)?;
    let g = json.to_graph().map_err(runtime)?;
    let outcome = a.outcome.or(json.outcome).ok_or_else(|| {
        Failure::Usage("no outcome given and none recorded in the graph file".into())
    })?;
    let y = g.var(&outcome).map_err(|e| Failure::Usage(e.to_string()))?;
    let set = if a.markov_blanket {
        g.markov_blanket(y).map_err(runtime)?
    } else {
        g.parents(y).to_vec()
    };
    emit(None, &(g.names(&set).join(" ") + "\n"))
}

fn cmd_bench(a: BenchArgs) -> Outcome {
    let case = Case::from(a.case);
    let mut cfg = match &a.config {
        Some(p) => BenchConfig::from_path(p).map_err(|e| Failure::Usage(e.to_string()))?,
        None if a.full_scale => BenchConfig::full_scale(case),
        None => BenchConfig::desk(case),
    };
    if let Some(r) = a.runs {
        cfg.runs = r;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let out = bench::run_bench(&cfg).map_err(runtime)?;
    if let Some(p) = &a.csv {
        let f =
            fs::File::create(p).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?;
        bench::write_csv(&out.records, f).map_err(runtime)?;
    }
    let summary = bench::summary_json(&cfg, &out.rows);
    let text = serde_json::to_string_pretty(&summary).map_err(runtime)?;
    emit(a.summary.as_deref(), &(text + "\n"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Citest(a) => cmd_citest(a),
        Command::Discover(a) => cmd_discover(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

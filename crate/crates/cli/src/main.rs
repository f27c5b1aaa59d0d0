mod output;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kgdrift::centrality::{compute, Metric};
use kgdrift::generate::{generate, GenSpec, LfrParams, Topology, TopologyKind};
use kgdrift::graph::{from_edge_list, largest_connected_component};
use kgdrift::ie::{
    calibrate, classify, default_threshold_grid, evaluate, extract_relations, gold_from_scores,
    read_csv, read_relations, read_scores, write_csv, CalibrationFilters, ClassifierConfig,
    CorpusRecord, EntityTuple, GoldTuple, RelationTriple, DEFAULT_RELATION_THRESHOLD,
    ENTITY_CSV_HEADER, GOLD_CSV_HEADER, RELATION_CSV_HEADER, SCORE_CSV_HEADER,
};
use kgdrift::ie::subsample_corpus;
use kgdrift::kg::{build_graph, rank_entities, ranking_csv};
use kgdrift::meta::Metadata;
use kgdrift::overlap::{overlap, top_k};
use kgdrift::perturb::{perturb, ErrorModel};
use kgdrift::sweep::{parse_grid, parse_sweep_config, sweep, SweepConfig};
use kgdrift::Graph;

use output::{check_input, check_output, check_output_dir, sidecar, Outputs, PathError};

/// Knowledge-graph construction and top-k centrality robustness under
/// relation-extraction noise.
#[derive(Parser)]
#[command(name = "kgdrift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic ground-truth graph.
    Gen(GenArgs),
    /// Apply the precision/recall error model to an edge list.
    Perturb(PerturbArgs),
    /// Score every node of an edge list.
    Centrality(CentralityArgs),
    /// The k most central nodes, optionally compared with a second graph.
    TopK(TopKArgs),
    /// Monte Carlo top-k overlap over a precision/recall grid.
    Sweep(SweepArgs),
    /// Fit per-synonym thresholds on a labeled score table.
    Calibrate(CalibrateArgs),
    /// Label mentions with a calibrated configuration.
    Classify(ClassifyArgs),
    /// Precision, recall and F1 of predicted entity types.
    Eval(EvalArgs),
    /// Keep relation candidates at or above a probability threshold.
    ExtractRel(ExtractRelArgs),
    /// Rebalance a corpus to a target entity-token ratio.
    Subsample(SubsampleArgs),
    /// Assemble a knowledge graph from entities and relation triples.
    BuildKg(BuildKgArgs),
    /// Rank knowledge-graph entities by centrality.
    Rank(RankArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    topology: TopologyKind,
    #[arg(long, default_value_t = kgdrift::generate::DEFAULT_NODES)]
    nodes: usize,
    #[arg(long, default_value_t = kgdrift::generate::DEFAULT_AVG_DEGREE)]
    avg_degree: f64,
    /// BA: edges per new node [default: avg_degree / 2]
    #[arg(long)]
    m_attach: Option<usize>,
    /// WS: ring-lattice degree [default: avg_degree]
    #[arg(long)]
    ring: Option<usize>,
    /// WS: rewiring probability
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    #[command(flatten)]
    lfr: LfrArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LfrArgs {
    #[arg(long, default_value_t = LfrParams::default().tau1)]
    tau1: f64,
    #[arg(long, default_value_t = LfrParams::default().tau2)]
    tau2: f64,
    #[arg(long, default_value_t = LfrParams::default().mu)]
    mu: f64,
    #[arg(long, default_value_t = LfrParams::default().max_degree)]
    max_degree: usize,
    #[arg(long, default_value_t = LfrParams::default().min_community)]
    min_community: usize,
    #[arg(long, default_value_t = LfrParams::default().max_community)]
    max_community: usize,
}

#[derive(Args)]
struct GraphInput {
    /// Edge list, one `label label` pair per line
    #[arg(long = "in")]
    input: PathBuf,
    /// Keep only the largest connected component
    #[arg(long)]
    lcc: bool,
}

#[derive(Args)]
struct PerturbArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long)]
    precision: f64,
    #[arg(long)]
    recall: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CentralityArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long)]
    metric: Metric,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TopKArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long)]
    metric: Metric,
    #[arg(long, default_value_t = kgdrift::sweep::DEFAULT_K)]
    k: usize,
    /// Second edge list; reports how many top-k nodes the two share, matched
    /// by label
    #[arg(long)]
    against: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// CSV path; a directory when the config expands to several runs
    #[arg(long)]
    out: PathBuf,
    /// Directory for precision-by-recall matrices of mean overlap
    #[arg(long)]
    plot_data: Option<PathBuf>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    workers: Option<usize>,
    /// Overrides the config's seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Labeled score table
    #[arg(long)]
    scores: PathBuf,
    #[arg(long, default_value_t = CalibrationFilters::default().max_fpr)]
    max_fpr: f64,
    #[arg(long, default_value_t = CalibrationFilters::default().min_recall)]
    min_recall: f64,
    /// Threshold grid as start:stop:step or a list [default: 0.1:0.6:0.05]
    #[arg(long)]
    grid: Option<String>,
    /// Per-synonym CSV of the chosen operating points
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Entity CSV as written by `classify`
    #[arg(long)]
    pred: PathBuf,
    /// Gold CSV (`mention_id,fine_type`) or a labeled score table
    #[arg(long)]
    gold: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExtractRelArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RELATION_THRESHOLD)]
    threshold: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SubsampleArgs {
    /// JSON-lines corpus
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 0.04)]
    ratio: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BuildKgArgs {
    /// Entity CSV as written by `classify`
    #[arg(long)]
    entities: Option<PathBuf>,
    /// Triple CSV as written by `extract-rel`
    #[arg(long)]
    triples: PathBuf,
    /// Edge list; provenance and node tables go next to it
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    metric: Metric,
    #[arg(long, default_value_t = kgdrift::sweep::DEFAULT_K)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading '{}'", path.display()))
}

fn load_graph(input: &GraphInput) -> Result<Graph> {
    let (g, report) = from_edge_list(&read_text(&input.input)?)?;
    if report.duplicate_edges + report.self_loops > 0 {
        log::warn!(
            "{}: dropped {} repeated edges and {} self-loops",
            input.input.display(),
            report.duplicate_edges,
            report.self_loops
        );
    }
    Ok(if input.lcc { largest_connected_component(&g) } else { g })
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).with_context(|| format!("opening '{}'", path.display()))
}

fn csv_bytes<T: serde::Serialize>(rows: &[T], header: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows, header)?;
    Ok(buf)
}

fn run_gen(a: GenArgs) -> Result<()> {
    check_output(&a.out)?;
    let mut spec = GenSpec::default_for(a.topology, a.nodes, a.avg_degree, a.seed);
    match &mut spec.topology {
        Topology::Ba { m_attach } => *m_attach = a.m_attach.unwrap_or(*m_attach),
        Topology::Ws { k_ring, beta } => {
            *k_ring = a.ring.unwrap_or(*k_ring);
            *beta = a.beta;
        }
        Topology::Lfr(p) => {
            *p = LfrParams {
                tau1: a.lfr.tau1,
                tau2: a.lfr.tau2,
                mu: a.lfr.mu,
                max_degree: a.lfr.max_degree,
                min_community: a.lfr.min_community,
                max_community: a.lfr.max_community,
                ..p.clone()
            }
        }
        Topology::Er => {}
    }
    let generated = generate(&spec)?;
    let mut out = Outputs::default();
    out.add(&a.out, generated.graph.to_edge_list());
    out.add(sidecar(&a.out, ".meta"), generated.meta.to_string());
    if let Some(comms) = &generated.communities {
        let mut csv = String::from("label,community\n");
        for (v, c) in comms.iter().enumerate() {
            let _ = writeln!(csv, "{},{c}", generated.graph.label(v));
        }
        out.add(sidecar(&a.out, ".communities.csv"), csv);
    }
    out.commit()
}

fn run_perturb(a: PerturbArgs) -> Result<()> {
    check_input(&a.graph.input)?;
    check_output(&a.out)?;
    let model = ErrorModel::new(a.precision, a.recall, a.seed)?;
    let truth = load_graph(&a.graph)?;
    let noisy = perturb(&truth, &model)?;
    if noisy.clamped {
        log::warn!(
            "false-edge probability clamped to 1 at precision {} recall {}",
            a.precision,
            a.recall
        );
    }
    let mut meta = Metadata::new();
    meta.push("input", a.graph.input.display());
    for (k, v) in noisy.metadata(&truth, &model).entries() {
        meta.push(k, v);
    }
    let mut out = Outputs::default();
    out.add(&a.out, noisy.graph.to_edge_list());
    out.add(sidecar(&a.out, ".meta"), meta.to_string());
    out.commit()
}

fn run_centrality(a: CentralityArgs) -> Result<()> {
    check_input(&a.graph.input)?;
    check_output(&a.out)?;
    let g = load_graph(&a.graph)?;
    let scores = compute(&g, a.metric)?;
    let mut rows: Vec<(&str, f64)> = (0..g.node_count())
        .map(|v| (g.label(v), scores.scores[v]))
        .collect();
    rows.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(y.0)));
    let mut csv = String::from("node_label,score\n");
    for (label, score) in rows {
        let _ = writeln!(csv, "{label},{score}");
    }
    let mut out = Outputs::default();
    out.add(&a.out, csv);
    out.commit()
}

fn run_top_k(a: TopKArgs) -> Result<()> {
    check_input(&a.graph.input)?;
    if let Some(p) = &a.against {
        check_input(p)?;
    }
    check_output(&a.out)?;
    let g = load_graph(&a.graph)?;
    let ranked = rank_entities(&g, a.metric, a.k)?;
    let mut meta = Metadata::new();
    meta.push("input", a.graph.input.display())
        .push("metric", a.metric)
        .push("k", a.k);
    if let Some(other) = &a.against {
        let h = load_graph(&GraphInput {
            input: other.clone(),
            lcc: a.graph.lcc,
        })?;
        let h = in_id_space_of(&g, &h);
        let shared = overlap(&top_k(&compute(&g, a.metric)?, a.k)?, &top_k(&compute(&h, a.metric)?, a.k)?)?;
        println!("overlap={shared}");
        meta.push("against", other.display()).push("overlap", shared);
    }
    let mut out = Outputs::default();
    out.add(&a.out, ranking_csv(&ranked));
    out.add(sidecar(&a.out, ".meta"), meta.to_string());
    out.commit()
}

/// `h` renumbered so that labels shared with `g` keep `g`'s ids; labels only
/// in `g` become isolated nodes and labels only in `h` follow. Score ties
/// then break the same way in both graphs.
fn in_id_space_of(g: &Graph, h: &Graph) -> Graph {
    let mut labels: Vec<String> = g.labels().to_vec();
    let mut ids: HashMap<&str, usize> = g.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    for l in h.labels() {
        if !ids.contains_key(l.as_str()) {
            ids.insert(l, labels.len());
            labels.push(l.clone());
        }
    }
    let map: Vec<usize> = h.labels().iter().map(|l| ids[l.as_str()]).collect();
    Graph::from_labeled_edges(labels, h.edges().map(|(u, v)| (map[u], map[v])))
}

fn sweep_meta(cfg: &SweepConfig) -> Metadata {
    let mut meta = Metadata::new();
    meta.push("run", cfg.label())
        .push("metric", cfg.metric)
        .push("k", cfg.k)
        .push("trials", cfg.trials)
        .push("seed", cfg.master_seed)
        .push("precision_points", cfg.precision_grid.len())
        .push("recall_points", cfg.recall_grid.len())
        .push("markers", cfg.markers.len());
    meta
}

fn run_sweep(a: SweepArgs) -> Result<()> {
    check_input(&a.config)?;
    let base = a.config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let configs = parse_sweep_config(&read_text(&a.config)?, &base, a.seed)?;
    for cfg in &configs {
        if let kgdrift::sweep::TopologySource::EdgeList { path, .. } = &cfg.source {
            check_input(path)?;
        }
    }
    let several = configs.len() > 1;
    if several {
        check_output_dir(&a.out)?;
    } else {
        check_output(&a.out)?;
    }
    if let Some(dir) = &a.plot_data {
        check_output_dir(dir)?;
    }
    if a.workers == Some(0) {
        bail!(kgdrift::Error::Parameter("--workers must be at least 1".into()));
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = a.workers {
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;

    let mut out = Outputs::default();
    for cfg in &configs {
        log::info!("sweeping {}", cfg.label());
        let table = pool
            .install(|| sweep(cfg))
            .with_context(|| format!("run {}", cfg.label()))?;
        let csv_path = if several {
            a.out.join(format!("{}.csv", cfg.label()))
        } else {
            a.out.clone()
        };
        out.add(sidecar(&csv_path, ".meta"), sweep_meta(cfg).to_string());
        out.add(csv_path, table.to_csv());
        if let Some(dir) = &a.plot_data {
            out.add(dir.join(format!("{}_matrix.csv", cfg.label())), table.to_matrix_csv());
        }
    }
    if several {
        std::fs::create_dir_all(&a.out)?;
    }
    if let Some(dir) = &a.plot_data {
        std::fs::create_dir_all(dir)?;
    }
    out.commit()
}

fn run_calibrate(a: CalibrateArgs) -> Result<()> {
    check_input(&a.scores)?;
    check_output(&a.out)?;
    if let Some(r) = &a.report {
        check_output(r)?;
    }
    let grid = match &a.grid {
        Some(g) => parse_grid("grid", g)?,
        None => default_threshold_grid(),
    };
    let rows = read_scores(open(&a.scores)?)?;
    let filters = CalibrationFilters {
        max_fpr: a.max_fpr,
        min_recall: a.min_recall,
    };
    let cal = calibrate(&rows, &grid, filters)?;
    for w in &cal.warnings {
        log::warn!("{w}");
    }
    let mut out = Outputs::default();
    out.add(&a.out, cal.config.to_toml()?);
    if let Some(path) = &a.report {
        let mut csv = String::from("fine_type,synonym,threshold,tp,fp,fn,precision,recall,f1,false_positive_rate,kept\n");
        for s in &cal.synonyms {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{}",
                s.fine_type,
                s.synonym,
                s.threshold,
                s.scores.tp,
                s.scores.fp,
                s.scores.fn_,
                s.scores.precision,
                s.scores.recall,
                s.scores.f1,
                s.false_positive_rate,
                s.kept
            );
        }
        out.add(path, csv);
    }
    out.commit()
}

fn run_classify(a: ClassifyArgs) -> Result<()> {
    check_input(&a.scores)?;
    check_input(&a.config)?;
    check_output(&a.out)?;
    let cfg = ClassifierConfig::from_toml(&read_text(&a.config)?)?;
    let rows = read_scores(open(&a.scores)?)?;
    let result = classify(&rows, &cfg);
    if result.ignored_rows > 0 {
        log::warn!(
            "ignored {} rows whose synonym is not in the configuration",
            result.ignored_rows
        );
    }
    let mut out = Outputs::default();
    out.add(&a.out, csv_bytes(&result.entities, ENTITY_CSV_HEADER)?);
    out.commit()
}

fn run_eval(a: EvalArgs) -> Result<()> {
    check_input(&a.pred)?;
    check_input(&a.gold)?;
    check_output(&a.out)?;
    let preds: Vec<EntityTuple> = read_csv(open(&a.pred)?, ENTITY_CSV_HEADER)?;
    let gold_text = read_text(&a.gold)?;
    let header = gold_text.lines().next().unwrap_or("").trim();
    let gold: Vec<GoldTuple> = if header == SCORE_CSV_HEADER {
        gold_from_scores(&read_scores(gold_text.as_bytes())?)
    } else {
        read_csv(gold_text.as_bytes(), GOLD_CSV_HEADER)?
    };
    let report = evaluate(
        preds
            .iter()
            .map(|p| (p.mention_id.as_str(), p.fine_type.as_str())),
        &gold,
    );
    let mut out = Outputs::default();
    out.add(&a.out, report.to_csv());
    out.commit()
}

fn run_extract_rel(a: ExtractRelArgs) -> Result<()> {
    check_input(&a.input)?;
    check_output(&a.out)?;
    let rows = read_relations(open(&a.input)?)?;
    let triples = extract_relations(&rows, a.threshold);
    let mut out = Outputs::default();
    out.add(&a.out, csv_bytes(&triples, RELATION_CSV_HEADER)?);
    out.commit()
}

fn run_subsample(a: SubsampleArgs) -> Result<()> {
    check_input(&a.input)?;
    check_output(&a.out)?;
    let corpus = CorpusRecord::read_jsonl(std::io::BufReader::new(open(&a.input)?))?;
    let s = subsample_corpus(&corpus, a.ratio, a.seed)?;
    let mut buf = Vec::new();
    CorpusRecord::write_jsonl(&mut buf, &s.records)?;
    let mut meta = Metadata::new();
    meta.push("input", a.input.display())
        .push("seed", a.seed)
        .push("target_ratio", a.ratio)
        .push("sentences", s.records.len())
        .push("fillers", s.fillers)
        .push("entity_tokens", s.entity_tokens)
        .push("total_tokens", s.total_tokens)
        .push("ratio", s.ratio());
    if let Some(w) = &s.warning {
        meta.push("warning", w);
    }
    let mut out = Outputs::default();
    out.add(&a.out, buf);
    out.add(sidecar(&a.out, ".meta"), meta.to_string());
    out.commit()
}

fn run_build_kg(a: BuildKgArgs) -> Result<()> {
    if let Some(e) = &a.entities {
        check_input(e)?;
    }
    check_input(&a.triples)?;
    check_output(&a.out)?;
    let entities: Vec<EntityTuple> = match &a.entities {
        Some(p) => read_csv(open(p)?, ENTITY_CSV_HEADER)?,
        None => Vec::new(),
    };
    let triples: Vec<RelationTriple> = read_relations(open(&a.triples)?)?;
    let kg = build_graph(&entities, &triples);
    let mut meta = Metadata::new();
    meta.push("nodes", kg.graph.node_count())
        .push("edges", kg.graph.edge_count())
        .push("triples", triples.len())
        .push("dropped_self_loops", kg.dropped_self_loops);
    let mut out = Outputs::default();
    out.add(&a.out, kg.graph.to_edge_list());
    out.add(sidecar(&a.out, ".attrs.csv"), kg.attributes_csv());
    out.add(sidecar(&a.out, ".nodes.csv"), kg.nodes_csv());
    out.add(sidecar(&a.out, ".meta"), meta.to_string());
    out.commit()
}

fn run_rank(a: RankArgs) -> Result<()> {
    check_input(&a.input)?;
    check_output(&a.out)?;
    let g = load_graph(&GraphInput {
        input: a.input.clone(),
        lcc: false,
    })?;
    let ranked = rank_entities(&g, a.metric, a.k)?;
    let mut out = Outputs::default();
    out.add(&a.out, ranking_csv(&ranked));
    out.commit()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(a) => run_gen(a),
        Command::Perturb(a) => run_perturb(a),
        Command::Centrality(a) => run_centrality(a),
        Command::TopK(a) => run_top_k(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Calibrate(a) => run_calibrate(a),
        Command::Classify(a) => run_classify(a),
        Command::Eval(a) => run_eval(a),
        Command::ExtractRel(a) => run_extract_rel(a),
        Command::Subsample(a) => run_subsample(a),
        Command::BuildKg(a) => run_build_kg(a),
        Command::Rank(a) => run_rank(a),
    }
}

fn error_kind(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<kgdrift::Error>() {
            return e.kind();
        }
        if cause.is::<PathError>() {
            return "path";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
    }
    "error"
}

fn error_line(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            eprintln!("{}", error_line("usage", e.kind().as_str().unwrap_or("invalid usage")));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(error_kind(&e), &format!("{e:#}")));
            ExitCode::from(1)
        }
    }
}

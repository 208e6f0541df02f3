//! Command-line front end: ingest a Q&A dump, build indices, search,
//! evaluate, calibrate fusion weights, or serve the HTTP endpoint.

use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crokage::apirec::{load_provider_file, ApiRanking, ApiPositionMode, CombineMode};
use crokage::composer::ComposerConfig;
use crokage::corpus::{build_thread_docs, parse_dump, Corpus, DumpFormat, StopwordConfig};
use crokage::engine::{
    home_dir, load_engine, EngineConfig, EngineHandle, EnginePaths, QueryRequest,
};
use crokage::error::{Error, Result};
use crokage::evalharness::{run_baseline, split_queries_frac, Baseline, GoldSet};
use crokage::indices::{Bm25Params, IndexBundle};
use crokage::ranker::WeightConfig;
use crokage::service::serve;

#[derive(Parser)]
#[command(
    name = "crokage",
    version,
    about = "Crowd-knowledge answer search: ranked, comprehensive solutions mined from Q&A dumps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a Q&A dump into the binary corpus artifact.
    Ingest(IngestArgs),
    /// Build the BM25/IDF/API indices over a corpus artifact.
    Build(BuildArgs),
    /// Run one query against the loaded artifacts.
    Search(SearchArgs),
    /// Score a baseline against a gold set.
    Evaluate(EvaluateArgs),
    /// Grid-search fusion weights on a train split of a gold set.
    Calibrate(CalibrateArgs),
    /// Serve POST /search and GET /health over HTTP.
    Serve(ServeArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// Dump file (Posts.xml or JSON-lines).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "xml", value_parser = parse_format)]
    format: DumpFormat,
    /// Output corpus artifact (default: $CROKAGE_HOME/corpus.bin).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replacement stopword list, one word per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    /// Corpus artifact (default: $CROKAGE_HOME/corpus.bin).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Output index artifact (default: $CROKAGE_HOME/indices.bin).
    #[arg(long)]
    out: Option<PathBuf>,
    /// BM25 term-frequency saturation.
    #[arg(long, default_value_t = 1.2)]
    k: f64,
    /// BM25 length-normalization strength.
    #[arg(long, default_value_t = 0.75)]
    b: f64,
    /// Drop API classes appearing in fewer answers than this.
    #[arg(long, default_value_t = crokage::indices::DEFAULT_MIN_CLASS_FREQ)]
    min_class_freq: usize,
}

/// Flags shared by every command that loads the engine.
#[derive(Args)]
struct EngineArgs {
    /// Corpus artifact (default: $CROKAGE_HOME/corpus.bin).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Index artifact (default: $CROKAGE_HOME/indices.bin).
    #[arg(long)]
    indices: Option<PathBuf>,
    /// Word-vector text file (default: $CROKAGE_HOME/vectors.txt).
    #[arg(long)]
    vectors: Option<PathBuf>,
    /// Fusion weights as "sem,api,tfidf,method", e.g. 1.0,0.25,0.5,0.75.
    #[arg(long, value_parser = parse_weights)]
    weights: Option<WeightConfig>,
    /// Run without word vectors; the semantic weight becomes 0.
    #[arg(long)]
    no_semantic: bool,
    /// Ignore the API-class factor; its weight becomes 0.
    #[arg(long)]
    no_api: bool,
    /// External API recommender as label=path (one class per line, best
    /// first); repeatable.
    #[arg(long = "api-provider")]
    api_provider: Vec<String>,
    /// How many recommended API classes to keep.
    #[arg(long, default_value_t = 20)]
    api_limit: usize,
    /// How multiple providers merge: round-robin or concat.
    #[arg(long, default_value = "round-robin", value_parser = parse_combine)]
    combine: CombineMode,
    /// When recommendations are filtered to the pool: before or after
    /// position assignment.
    #[arg(long = "api-pos-mode", default_value = "before", value_parser = parse_pos_mode)]
    api_pos_mode: ApiPositionMode,
    /// Replacement important-word list for sentence filtering.
    #[arg(long)]
    important_words: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// Natural-language programming query.
    #[arg(long)]
    query: String,
    /// How many ranked answers to return.
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Print machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Compose solutions (code + filtered explanation) from the top answers.
    #[arg(long)]
    compose: bool,
    /// How many solutions to compose.
    #[arg(long, default_value_t = 3)]
    solutions: usize,
    /// Report per-stage timings on stderr.
    #[arg(long)]
    include_timings: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// Gold set JSON-lines file.
    #[arg(long)]
    gold: PathBuf,
    /// bm25, tfidf, semantic, api_class, api_method, or fused.
    #[arg(long, default_value = "fused", value_parser = parse_baseline)]
    baseline: Baseline,
    /// Metric cutoff.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// Gold set JSON-lines file.
    #[arg(long)]
    gold: PathBuf,
    /// Share of queries used for training.
    #[arg(long, default_value_t = 0.5)]
    train_frac: f64,
    /// Shuffle seed for the train/test split.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Metric cutoff for the calibration objective.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Also write the chosen weights JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ServeArgs {
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, default_value_t = 7878)]
    port: u16,
    /// Concurrent request workers.
    #[arg(long, default_value_t = 4)]
    threads: usize,
}

fn parse_format(s: &str) -> Result<DumpFormat> {
    s.parse()
}

fn parse_weights(s: &str) -> Result<WeightConfig> {
    s.parse()
}

fn parse_combine(s: &str) -> Result<CombineMode> {
    s.parse()
}

fn parse_pos_mode(s: &str) -> Result<ApiPositionMode> {
    s.parse()
}

fn parse_baseline(s: &str) -> Result<Baseline> {
    s.parse()
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_string(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

impl EngineArgs {
    fn paths(&self) -> EnginePaths {
        let home = home_dir();
        EnginePaths {
            corpus: self.corpus.clone().unwrap_or_else(|| home.join("corpus.bin")),
            indices: self.indices.clone().unwrap_or_else(|| home.join("indices.bin")),
            vectors: Some(self.vectors.clone().unwrap_or_else(|| home.join("vectors.txt"))),
        }
    }

    fn config(&self) -> Result<EngineConfig> {
        let mut config = EngineConfig::default();
        if let Some(weights) = self.weights {
            weights.validate()?;
            config.pipeline.weights = weights;
        }
        config.pipeline.num_api_classes = self.api_limit;
        config.pipeline.combine_mode = self.combine;
        config.pipeline.api_position_mode = self.api_pos_mode;
        config.providers = self
            .api_provider
            .iter()
            .map(|spec| -> Result<ApiRanking> {
                let (label, path) = spec.split_once('=').ok_or_else(|| {
                    Error::validation(format!(
                        "--api-provider expects label=path, got '{spec}'"
                    ))
                })?;
                load_provider_file(label, Path::new(path))
            })
            .collect::<Result<_>>()?;
        if let Some(path) = &self.important_words {
            config.composer =
                ComposerConfig::default().with_important_words_text(&read_to_string(path)?)?;
        }
        config.no_semantic = self.no_semantic;
        config.no_api = self.no_api;
        Ok(config)
    }

    fn load(&self) -> Result<EngineHandle> {
        load_engine(&self.paths(), self.config()?)
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(args) => run_ingest(args),
        Command::Build(args) => run_build(args),
        Command::Search(args) => run_search(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Calibrate(args) => run_calibrate(args),
        Command::Serve(args) => run_serve(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run_ingest(args: IngestArgs) -> Result<()> {
    let stopwords = match &args.stopwords {
        Some(path) => StopwordConfig::from_list_text(&read_to_string(path)?),
        None => StopwordConfig::default(),
    };
    let file = std::fs::File::open(&args.input).map_err(|e| Error::io(&args.input, e))?;
    let (posts, mut diag) = parse_dump(BufReader::new(file), args.format)?;
    let docs = build_thread_docs(&posts, &stopwords, &mut diag);
    let corpus = Corpus::new(docs)?;
    let out = args.out.unwrap_or_else(|| home_dir().join("corpus.bin"));
    let digest = corpus.save(&out)?;
    eprintln!("{}", diag.to_report());
    println!(
        "ingested {} answers -> {} (digest {})",
        corpus.len(),
        out.display(),
        crokage::artifact::digest_hex(&digest)
    );
    Ok(())
}

fn run_build(args: BuildArgs) -> Result<()> {
    let home = home_dir();
    let corpus_path = args.corpus.unwrap_or_else(|| home.join("corpus.bin"));
    let out = args.out.unwrap_or_else(|| home.join("indices.bin"));
    let (corpus, digest) = Corpus::load(&corpus_path)?;
    let bundle =
        IndexBundle::build(corpus.docs(), digest, Bm25Params { k: args.k, b: args.b }, args.min_class_freq)?;
    bundle.save(&out)?;
    println!(
        "indexed {} answers ({} vocabulary terms, {} API classes) -> {}",
        bundle.bm25.n_docs(),
        bundle.idf.vocab_len(),
        bundle.api.len(),
        out.display()
    );
    Ok(())
}

fn run_search(args: SearchArgs) -> Result<()> {
    let engine = args.engine.load()?;
    let request = QueryRequest {
        query: args.query.clone(),
        top_k: args.top,
        compose: args.compose,
        solutions: args.compose.then_some(args.solutions),
        include_timings: args.include_timings,
    };
    let response = engine.handle_query(&request)?;
    if let Some(timings) = &response.timings_ms {
        for (stage, ms) in timings {
            eprintln!("{stage}: {ms:.2}");
        }
    }
    for note in &response.diagnostics.notes {
        eprintln!("note: {note}");
    }
    if args.json {
        if args.compose {
            let solutions = response.solutions.as_deref().unwrap_or(&[]);
            println!("{}", serde_json::to_string(solutions).expect("solutions serialize"));
        } else {
            println!("{}", serde_json::to_string(&response.results).expect("results serialize"));
        }
        return Ok(());
    }
    if response.results.is_empty() {
        println!("no answers matched the query");
        return Ok(());
    }
    for r in &response.results {
        println!(
            "{:>3}. answer {:<10} score {:.4}  (sem {:.3} | api {:.3} | tfidf {:.3} | method {:.3})",
            r.rank, r.answer_id, r.factors_score, r.sem, r.api, r.tfidf, r.method
        );
    }
    if let Some(solutions) = &response.solutions {
        for s in solutions {
            println!("\n=== solution {} : answer {} ===", s.rank, s.answer_id);
            for sentence in &s.explanation {
                println!("{sentence}");
            }
            for block in &s.code_blocks {
                println!("---");
                for line in block.lines() {
                    println!("    {line}");
                }
            }
        }
    }
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let gold = GoldSet::load_from_path(&args.gold)?;
    let engine = args.engine.load()?;
    let report = engine.evaluate(&gold.entries, args.baseline, args.k)?;
    let json = serde_json::to_string(&report).expect("report serializes");
    eprintln!(
        "baseline={} k={} queries={} hit={:.4} mrr={:.4} map={:.4} mr={:.4}",
        args.baseline.name(),
        report.k,
        report.per_query.len(),
        report.hit,
        report.mrr,
        report.map,
        report.mr
    );
    println!("{json}");
    if let Some(path) = &args.report {
        write_string(path, &json)?;
    }
    Ok(())
}

fn run_calibrate(args: CalibrateArgs) -> Result<()> {
    let gold = GoldSet::load_from_path(&args.gold)?;
    let engine = args.engine.load()?;
    let (train, test) = split_queries_frac(&gold, args.seed, args.train_frac)?;
    let weights = engine.calibrate(&train, args.k)?;
    let test_data = engine.query_eval_data(&test)?;
    let test_report = run_baseline(Baseline::Fused, &test_data, args.k, &weights)?;
    eprintln!(
        "calibrated on {} queries, tested on {}: hit={:.4} mrr={:.4} map={:.4} mr={:.4}",
        train.len(),
        test.len(),
        test_report.hit,
        test_report.mrr,
        test_report.map,
        test_report.mr
    );
    let json = serde_json::to_string(&weights).expect("weights serialize");
    println!("{json}");
    if let Some(path) = &args.out {
        write_string(path, &json)?;
    }
    Ok(())
}

fn run_serve(args: ServeArgs) -> Result<()> {
    let engine = Arc::new(args.engine.load()?);
    eprintln!(
        "loaded {} answers (vector dim {})",
        engine.doc_count(),
        engine.dim()
    );
    let handle = serve(engine, args.port, args.threads)?;
    eprintln!("listening on http://{}", handle.addr());
    handle.join();
    Ok(())
}

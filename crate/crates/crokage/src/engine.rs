//! Engine handle: loads the corpus, index, and vector artifacts once and
//! answers search, evaluation, and calibration requests over the immutable
//! result.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::apirec::ApiRanking;
use crate::artifact::{digest_hex, ArtifactDigest};
use crate::composer::{compose_solutions, ComposerConfig, Solution};
use crate::corpus::{preprocess, Corpus, StopwordConfig};
use crate::embedding::EmbeddingStore;
use crate::error::{Error, Result};
use crate::evalharness::{
    calibrate_weights, run_baseline, Baseline, EvalReport, GoldEntry, QueryEvalData,
};
use crate::indices::IndexBundle;
use crate::ranker::{
    compute_query_factors, run_pipeline, PipelineConfig, PipelineDiagnostics, PipelineInputs,
    WeightConfig,
};

/// Directory artifacts default to: `$CROKAGE_HOME`, else the working
/// directory.
pub fn home_dir() -> PathBuf {
    std::env::var_os("CROKAGE_HOME").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

/// Locations of the on-disk artifacts an engine loads.
#[derive(Debug, Clone)]
pub struct EnginePaths {
    pub corpus: PathBuf,
    pub indices: PathBuf,
    /// Word-vector text file; `None` only makes sense together with
    /// [`EngineConfig::no_semantic`].
    pub vectors: Option<PathBuf>,
}

impl EnginePaths {
    /// Conventional artifact names under one directory.
    pub fn from_home(dir: &Path) -> Self {
        EnginePaths {
            corpus: dir.join("corpus.bin"),
            indices: dir.join("indices.bin"),
            vectors: Some(dir.join("vectors.txt")),
        }
    }
}

/// Everything configurable about query handling.
#[derive(Debug, Default)]
pub struct EngineConfig {
    pub pipeline: PipelineConfig,
    /// External API-class recommenders; empty means the lexical fallback.
    pub providers: Vec<ApiRanking>,
    pub composer: ComposerConfig,
    /// Run without word vectors: the semantic weight is forced to 0.
    pub no_semantic: bool,
    /// Force the API-class weight to 0.
    pub no_api: bool,
}

/// A fully loaded, immutable engine. Queries never mutate it, so one handle
/// can be shared across threads.
#[derive(Debug)]
pub struct EngineHandle {
    corpus: Corpus,
    corpus_digest: ArtifactDigest,
    indices: IndexBundle,
    store: Option<EmbeddingStore>,
    stopwords: StopwordConfig,
    config: EngineConfig,
}

/// Loads all artifacts, verifying that the indices were built from exactly
/// the corpus being loaded.
pub fn load_engine(paths: &EnginePaths, mut config: EngineConfig) -> Result<EngineHandle> {
    let (corpus, corpus_digest) = Corpus::load(&paths.corpus)?;
    let indices = IndexBundle::load(&paths.indices)?;
    if indices.corpus_digest != corpus_digest {
        return Err(Error::artifact(format!(
            "artifact mismatch: {} was built from corpus digest {} but {} has digest {}",
            paths.indices.display(),
            digest_hex(&indices.corpus_digest),
            paths.corpus.display(),
            digest_hex(&corpus_digest),
        )));
    }
    let store = if config.no_semantic {
        config.pipeline.weights.sem_weight = 0.0;
        None
    } else {
        match &paths.vectors {
            Some(path) if path.exists() => Some(EmbeddingStore::load_from_path(path)?.0),
            Some(path) => {
                return Err(Error::artifact(format!(
                    "vectors artifact missing: {} (pass --no-semantic to run without it)",
                    path.display()
                )))
            }
            None => {
                return Err(Error::validation(
                    "no vectors file configured; pass --vectors <path> or --no-semantic",
                ))
            }
        }
    };
    if config.no_api {
        config.pipeline.weights.api_weight = 0.0;
    }
    config.pipeline.validate()?;
    Ok(EngineHandle {
        corpus,
        corpus_digest,
        indices,
        store,
        stopwords: StopwordConfig::default(),
        config,
    })
}

/// One search request, as accepted over HTTP and built by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryRequest {
    pub query: String,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default)]
    pub compose: bool,
    /// How many solutions to compose; defaults to `top_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<usize>,
    /// Opt-in: timings vary between runs, so they are omitted by default to
    /// keep identical requests byte-identical.
    #[serde(default)]
    pub include_timings: bool,
}

fn default_top_k() -> usize {
    10
}

impl QueryRequest {
    pub fn new(query: impl Into<String>) -> Self {
        QueryRequest {
            query: query.into(),
            top_k: default_top_k(),
            compose: false,
            solutions: None,
            include_timings: false,
        }
    }
}

/// One ranked answer with its normalized factor values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub answer_id: u64,
    pub factors_score: f64,
    pub sem: f64,
    pub api: f64,
    pub tfidf: f64,
    pub method: f64,
    /// 1-based position in the ranking.
    pub rank: usize,
}

/// The response to one [`QueryRequest`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryResponse {
    pub results: Vec<SearchResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<Solution>>,
    pub diagnostics: PipelineDiagnostics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl EngineHandle {
    pub fn doc_count(&self) -> usize {
        self.corpus.len()
    }

    /// Vector dimensionality, 0 when the semantic stage is disabled.
    pub fn dim(&self) -> usize {
        self.store.as_ref().map_or(0, EmbeddingStore::dim)
    }

    pub fn corpus_digest(&self) -> &ArtifactDigest {
        &self.corpus_digest
    }

    pub fn weights(&self) -> &WeightConfig {
        &self.config.pipeline.weights
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn inputs(&self) -> PipelineInputs<'_> {
        PipelineInputs {
            corpus: &self.corpus,
            bm25: &self.indices.bm25,
            idf: &self.indices.idf,
            store: self.store.as_ref(),
            providers: &self.config.providers,
        }
    }

    /// Preprocesses exactly as documents were at ingest.
    pub fn preprocess_query(&self, query: &str) -> Vec<String> {
        preprocess(query, &self.stopwords)
    }

    /// Runs the full pipeline for one request. Deterministic: identical
    /// requests produce identical responses (timings are opt-in).
    pub fn handle_query(&self, request: &QueryRequest) -> Result<QueryResponse> {
        if request.top_k < 1 {
            return Err(Error::validation("top_k must be >= 1"));
        }
        let start = Instant::now();
        let query_tokens = self.preprocess_query(&request.query);
        if query_tokens.is_empty() {
            return Err(Error::validation("empty query"));
        }
        let preprocess_ms = start.elapsed().as_secs_f64() * 1e3;

        let retrieve_start = Instant::now();
        let outcome = run_pipeline(&query_tokens, &self.inputs(), &self.config.pipeline)?;
        let retrieve_ms = retrieve_start.elapsed().as_secs_f64() * 1e3;

        let results: Vec<SearchResult> = outcome
            .ranked
            .iter()
            .take(request.top_k)
            .enumerate()
            .map(|(i, c)| SearchResult {
                answer_id: c.answer_id,
                factors_score: c.factors_score,
                sem: c.norm_sem,
                api: c.norm_api,
                tfidf: c.norm_tfidf,
                method: c.norm_method,
                rank: i + 1,
            })
            .collect();

        let compose_start = Instant::now();
        let solutions = if request.compose {
            let k = request.solutions.unwrap_or(request.top_k);
            let composed = compose_solutions(
                &outcome.ranked,
                &self.corpus,
                &query_tokens,
                k,
                &self.config.composer,
            )?;
            Some(composed.solutions)
        } else {
            None
        };
        let compose_ms = compose_start.elapsed().as_secs_f64() * 1e3;

        let timings_ms = request.include_timings.then(|| {
            BTreeMap::from([
                ("preprocess_ms".to_string(), preprocess_ms),
                ("retrieve_ms".to_string(), retrieve_ms),
                ("compose_ms".to_string(), compose_ms),
                ("total_ms".to_string(), start.elapsed().as_secs_f64() * 1e3),
            ])
        });

        Ok(QueryResponse { results, solutions, diagnostics: outcome.diagnostics, timings_ms })
    }

    /// Computes the reusable per-query factor data for a gold set. Queries
    /// that preprocess to nothing or match nothing are kept with empty
    /// rankings so they count as misses.
    pub fn query_eval_data(&self, entries: &[GoldEntry]) -> Result<Vec<QueryEvalData>> {
        let inputs = self.inputs();
        entries
            .iter()
            .map(|entry| {
                let tokens = self.preprocess_query(&entry.query);
                let factors = compute_query_factors(&tokens, &inputs, &self.config.pipeline)?;
                Ok(QueryEvalData {
                    query_id: entry.query_id.clone(),
                    relevant: entry.relevant.clone(),
                    small_set: factors.small_set,
                    normalized: factors.normalized,
                })
            })
            .collect()
    }

    /// Evaluates one baseline over gold entries; `fused` uses the engine's
    /// configured weights.
    pub fn evaluate(&self, entries: &[GoldEntry], baseline: Baseline, k: usize) -> Result<EvalReport> {
        let data = self.query_eval_data(entries)?;
        run_baseline(baseline, &data, k, self.weights())
    }

    /// Grid-searches fusion weights on the given training entries.
    pub fn calibrate(&self, entries: &[GoldEntry], k: usize) -> Result<WeightConfig> {
        let data = self.query_eval_data(entries)?;
        calibrate_weights(&data, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::ThreadDoc;
    use crate::indices::Bm25Params;
    use std::collections::BTreeSet;

    fn doc(answer_id: u64, text: &str, code: &str) -> ThreadDoc {
        let cfg = StopwordConfig::default();
        ThreadDoc {
            answer_id,
            question_id: answer_id + 10_000,
            answer_score: 1,
            raw_title: String::new(),
            raw_question_body: String::new(),
            raw_answer_body: text.to_string(),
            code_blocks: if code.is_empty() { vec![] } else { vec![code.to_string()] },
            proc_title: Vec::new(),
            proc_body: preprocess(text, &cfg),
            proc_code_tokens: preprocess(code, &cfg),
        }
    }

    fn write_vectors(path: &Path) {
        let mut lines = vec!["6 3".to_string()];
        for (w, v) in [
            ("convert", [1.0, 0.1, 0.0]),
            ("file", [0.9, 0.3, 0.1]),
            ("path", [0.8, 0.4, 0.0]),
            ("url", [0.7, 0.6, 0.1]),
            ("stream", [0.0, 1.0, 0.3]),
            ("socket", [0.1, 0.2, 1.0]),
        ] {
            lines.push(format!("{w} {} {} {}", v[0], v[1], v[2]));
        }
        std::fs::write(path, lines.join("\n")).unwrap();
    }

    /// Builds corpus.bin, indices.bin, and vectors.txt in a temp dir.
    fn fixture_dir() -> (tempfile::TempDir, EnginePaths) {
        let dir = tempfile::tempdir().unwrap();
        let docs = vec![
            doc(1, "Use the toURI method. You can convert the file path to a url easily.", "f.toURI().toURL();"),
            doc(2, "Open a stream to read the file contents.", "new FileInputStream(f);"),
            doc(3, "Connect the socket first.", "new Socket(host, port);"),
        ];
        let corpus = Corpus::new(docs).unwrap();
        let paths = EnginePaths::from_home(dir.path());
        let digest = corpus.save(&paths.corpus).unwrap();
        let bundle =
            IndexBundle::build(corpus.docs(), digest, Bm25Params::default(), 1).unwrap();
        bundle.save(&paths.indices).unwrap();
        write_vectors(paths.vectors.as_ref().unwrap());
        (dir, paths)
    }

    #[test]
    fn test_load_and_query_roundtrip() {
        let (_dir, paths) = fixture_dir();
        let engine = load_engine(&paths, EngineConfig::default()).unwrap();
        assert_eq!(engine.doc_count(), 3);
        assert_eq!(engine.dim(), 3);
        let request = QueryRequest::new("convert file path to url");
        let response = engine.handle_query(&request).unwrap();
        assert_eq!(response.results[0].answer_id, 1);
        assert_eq!(response.results[0].rank, 1);
        assert!(response.timings_ms.is_none(), "timings are opt-in");
        for pair in response.results.windows(2) {
            assert!(pair[0].factors_score >= pair[1].factors_score);
        }
    }

    #[test]
    fn test_repeated_query_byte_identical() {
        let (_dir, paths) = fixture_dir();
        let engine = load_engine(&paths, EngineConfig::default()).unwrap();
        let request = QueryRequest { compose: true, ..QueryRequest::new("read file stream") };
        let a = serde_json::to_string(&engine.handle_query(&request).unwrap()).unwrap();
        let b = serde_json::to_string(&engine.handle_query(&request).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn test_timings_present_when_requested() {
        let (_dir, paths) = fixture_dir();
        let engine = load_engine(&paths, EngineConfig::default()).unwrap();
        let request =
            QueryRequest { include_timings: true, ..QueryRequest::new("read file stream") };
        let response = engine.handle_query(&request).unwrap();
        let timings = response.timings_ms.unwrap();
        assert!(timings.contains_key("retrieve_ms") && timings.contains_key("total_ms"));
    }

    #[test]
    fn test_validation_errors() {
        let (_dir, paths) = fixture_dir();
        let engine = load_engine(&paths, EngineConfig::default()).unwrap();
        let err = engine
            .handle_query(&QueryRequest { top_k: 0, ..QueryRequest::new("file") })
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        // "the" and "to" are stopwords, so nothing survives preprocessing.
        let err = engine.handle_query(&QueryRequest::new("the to")).unwrap_err();
        assert!(err.to_string().contains("empty query"), "{err}");
    }

    #[test]
    fn test_digest_mismatch_rejected() {
        let (_dir, paths) = fixture_dir();
        let other = Corpus::new(vec![doc(9, "unrelated corpus", "x();")]).unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        let other_path = dir2.path().join("corpus.bin");
        let other_digest = other.save(&other_path).unwrap();
        let bundle =
            IndexBundle::build(other.docs(), other_digest, Bm25Params::default(), 1).unwrap();
        bundle.save(&paths.indices).unwrap();
        let err = load_engine(&paths, EngineConfig::default()).unwrap_err();
        assert!(err.to_string().contains("artifact mismatch"), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn test_missing_vectors_errors_unless_disabled() {
        let (_dir, paths) = fixture_dir();
        std::fs::remove_file(paths.vectors.as_ref().unwrap()).unwrap();
        let err = load_engine(&paths, EngineConfig::default()).unwrap_err();
        assert!(err.to_string().contains("vectors"), "{err}");

        let config = EngineConfig { no_semantic: true, ..EngineConfig::default() };
        let engine = load_engine(&paths, config).unwrap();
        assert_eq!(engine.dim(), 0);
        assert_eq!(engine.weights().sem_weight, 0.0, "semantic weight forced to zero");
        let response = engine.handle_query(&QueryRequest::new("read file stream")).unwrap();
        assert!(!response.results.is_empty());
        assert!(response.results.iter().all(|r| r.sem == 0.0));
    }

    #[test]
    fn test_no_api_zeroes_weight() {
        let (_dir, paths) = fixture_dir();
        let config = EngineConfig { no_api: true, ..EngineConfig::default() };
        let engine = load_engine(&paths, config).unwrap();
        assert_eq!(engine.weights().api_weight, 0.0);
    }

    #[test]
    fn test_compose_included_on_request() {
        let (_dir, paths) = fixture_dir();
        let engine = load_engine(&paths, EngineConfig::default()).unwrap();
        let request = QueryRequest {
            compose: true,
            solutions: Some(1),
            ..QueryRequest::new("convert file path url")
        };
        let response = engine.handle_query(&request).unwrap();
        let solutions = response.solutions.unwrap();
        assert_eq!(solutions.len(), 1);
        assert_eq!(solutions[0].answer_id, 1);
        assert!(!solutions[0].code_blocks.is_empty());
        assert!(!solutions[0].explanation.is_empty());
    }

    #[test]
    fn test_evaluate_and_calibrate_glue() {
        let (_dir, paths) = fixture_dir();
        let engine = load_engine(&paths, EngineConfig::default()).unwrap();
        let entries = vec![
            GoldEntry {
                query_id: "q1".into(),
                query: "convert file path to url".into(),
                relevant: BTreeSet::from([1]),
            },
            GoldEntry {
                query_id: "q2".into(),
                query: "read file stream".into(),
                relevant: BTreeSet::from([2]),
            },
        ];
        let report = engine.evaluate(&entries, Baseline::Fused, 10).unwrap();
        assert_eq!(report.hit, 1.0);
        assert_eq!(report.per_query.len(), 2);
        let weights = engine.calibrate(&entries, 10).unwrap();
        weights.validate().unwrap();
        let report = engine.evaluate(&entries, Baseline::Bm25, 10).unwrap();
        assert!(report.hit > 0.0);
    }

    #[test]
    fn test_engine_paths_from_home() {
        let paths = EnginePaths::from_home(Path::new("/tmp/ck"));
        assert_eq!(paths.corpus, Path::new("/tmp/ck/corpus.bin"));
        assert_eq!(paths.indices, Path::new("/tmp/ck/indices.bin"));
        assert_eq!(paths.vectors.as_deref(), Some(Path::new("/tmp/ck/vectors.txt")));
    }
}

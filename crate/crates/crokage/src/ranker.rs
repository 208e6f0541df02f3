//! Four-stage ranking pipeline: lexical candidate selection, semantic
//! filtering, per-candidate factor scoring, and normalized weighted fusion.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::apirec::{
    api_score, combine_rankings, fallback_provider, ApiPositionMode, ApiRanking,
    CandidateClassUniverse, CombineMode,
};
use crate::codescan::{extract_api_classes, extract_methods};
use crate::corpus::{Corpus, ThreadDoc};
use crate::embedding::{BagOfWords, EmbeddingStore, SemScorer};
use crate::error::{Error, Result};
use crate::indices::{Bm25Index, IdfMap};

/// Relative weights of the four fused factors, each in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightConfig {
    pub sem_weight: f64,
    pub api_weight: f64,
    pub tfidf_weight: f64,
    pub method_weight: f64,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            sem_weight: 1.0,
            api_weight: 0.25,
            tfidf_weight: 0.5,
            method_weight: 0.75,
        }
    }
}

impl WeightConfig {
    pub fn new(sem: f64, api: f64, tfidf: f64, method: f64) -> Self {
        WeightConfig { sem_weight: sem, api_weight: api, tfidf_weight: tfidf, method_weight: method }
    }

    /// Weights as an array in factor order (sem, api, tfidf, method).
    pub fn as_array(&self) -> [f64; 4] {
        [self.sem_weight, self.api_weight, self.tfidf_weight, self.method_weight]
    }

    pub fn from_array(w: [f64; 4]) -> Self {
        WeightConfig::new(w[0], w[1], w[2], w[3])
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("sem_weight", self.sem_weight),
            ("api_weight", self.api_weight),
            ("tfidf_weight", self.tfidf_weight),
            ("method_weight", self.method_weight),
        ] {
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::validation(format!("{name} must be in [0, 1], got {w}")));
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for WeightConfig {
    type Err = Error;

    /// Parses `sem,api,tfidf,method`, e.g. `1.0,0.25,0.5,0.75`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::validation(format!(
                "weights must be 4 comma-separated values (sem,api,tfidf,method), got '{s}'"
            )));
        }
        let mut vals = [0.0f64; 4];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::validation(format!("bad weight value '{part}'")))?;
        }
        let cfg = WeightConfig::from_array(vals);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Sizes, limits, and modes for one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Lexical big-set size (first-stage candidate pool).
    pub bm25_limit1: usize,
    /// Lexical small-set size (prefix of the big set).
    pub bm25_limit2: usize,
    /// Candidates kept by the semantic filter.
    pub top_asym: usize,
    /// Classes kept from the combined API recommendation.
    pub num_api_classes: usize,
    /// Rank-smoothing constant in the API-class score.
    pub api_smoothing: u32,
    /// How provider rankings are merged.
    pub combine_mode: CombineMode,
    /// Position handling in the API-class score.
    pub api_position_mode: ApiPositionMode,
    /// Fusion weights.
    pub weights: WeightConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            bm25_limit1: 5000,
            bm25_limit2: 100,
            top_asym: 100,
            num_api_classes: 20,
            api_smoothing: 2,
            combine_mode: CombineMode::default(),
            api_position_mode: ApiPositionMode::default(),
            weights: WeightConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("bm25_limit1", self.bm25_limit1),
            ("bm25_limit2", self.bm25_limit2),
            ("top_asym", self.top_asym),
            ("num_api_classes", self.num_api_classes),
        ] {
            if v < 1 {
                return Err(Error::validation(format!("{name} must be >= 1")));
            }
        }
        if self.bm25_limit2 > self.bm25_limit1 {
            return Err(Error::validation(format!(
                "bm25_limit2 ({}) must not exceed bm25_limit1 ({})",
                self.bm25_limit2, self.bm25_limit1
            )));
        }
        if self.api_smoothing < 1 {
            return Err(Error::validation("api_smoothing must be >= 1"));
        }
        self.weights.validate()
    }
}

/// Raw (unnormalized) factor values for one candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawFactors {
    pub answer_id: u64,
    pub sem: f64,
    pub api: f64,
    pub tfidf: f64,
    pub method: f64,
}

/// One candidate with raw factors, min–max normalized factors, and the
/// fused score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    pub answer_id: u64,
    pub raw_sem: f64,
    pub raw_api: f64,
    pub raw_tfidf: f64,
    pub raw_method: f64,
    pub norm_sem: f64,
    pub norm_api: f64,
    pub norm_tfidf: f64,
    pub norm_method: f64,
    pub factors_score: f64,
}

/// Candidate with normalized factor quadruple, for fusion and calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedCandidate {
    pub answer_id: u64,
    /// Raw values in factor order (sem, api, tfidf, method).
    pub raw: [f64; 4],
    /// Min–max normalized values in the same order.
    pub norm: [f64; 4],
}

/// First stage: one lexical search; the big set is the top `bm25_limit1`
/// answers and the small set is its `bm25_limit2` prefix.
pub fn select_candidates(
    query_tokens: &[String],
    bm25: &Bm25Index,
    cfg: &PipelineConfig,
) -> Result<(Vec<u64>, Vec<u64>)> {
    if bm25.n_docs() == 0 {
        return Err(Error::validation("lexical index is empty"));
    }
    let big: Vec<u64> = bm25
        .search(query_tokens, cfg.bm25_limit1)
        .into_iter()
        .map(|(id, _)| id)
        .collect();
    let small = big[..big.len().min(cfg.bm25_limit2)].to_vec();
    Ok((small, big))
}

/// Second stage: keep the `top_asym` big-set members with the highest
/// semantic score (ties by ascending answer id). Also returns every scored
/// candidate's semantic value so later stages don't recompute it.
pub fn semantic_filter(
    big_set: &[u64],
    corpus: &Corpus,
    scorer: &SemScorer,
    top_asym: usize,
) -> Result<(Vec<u64>, BTreeMap<u64, f64>)> {
    let mut scored = Vec::with_capacity(big_set.len());
    let mut by_id = BTreeMap::new();
    for &id in big_set {
        let doc = corpus
            .get(id)
            .ok_or_else(|| Error::internal(format!("answer {id} is indexed but not in the corpus")))?;
        let bag = BagOfWords::from_tokens(doc.text_tokens());
        let s = scorer.score(&bag);
        scored.push((id, s));
        by_id.insert(id, s);
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(top_asym);
    Ok((scored.into_iter().map(|(id, _)| id).collect(), by_id))
}

/// Third-stage pool: set union of the lexical small set and the
/// semantically filtered set, deduplicated (ascending answer id).
pub fn merge_candidates(small_set: &[u64], sem_top: &[u64]) -> Vec<u64> {
    let pool: BTreeSet<u64> = small_set.iter().chain(sem_top).copied().collect();
    pool.into_iter().collect()
}

/// Cosine similarity of TF-IDF vectors, term weight = tf · idf. Either
/// vector being all zeros yields 0; identical term vectors yield exactly 1.
pub fn tfidf_score<'a, Q, D>(query_tokens: Q, doc_tokens: D, idf: &IdfMap) -> f64
where
    Q: IntoIterator<Item = &'a str>,
    D: IntoIterator<Item = &'a str>,
{
    fn tf<'a>(tokens: impl IntoIterator<Item = &'a str>) -> BTreeMap<&'a str, f64> {
        let mut counts = BTreeMap::new();
        for t in tokens {
            *counts.entry(t).or_insert(0.0) += 1.0;
        }
        counts
    }
    let qtf = tf(query_tokens);
    let dtf = tf(doc_tokens);
    if qtf.is_empty() || dtf.is_empty() {
        return 0.0;
    }
    if qtf == dtf {
        // Mathematically 1; short-circuit to avoid the last-ulp wobble of
        // sqrt-product round trips.
        return 1.0;
    }
    let mut dot = 0.0;
    let mut nq = 0.0;
    let mut nd = 0.0;
    for (term, &qc) in &qtf {
        let qw = qc * idf.lookup(term);
        nq += qw * qw;
        if let Some(&dc) = dtf.get(term) {
            dot += qw * (dc * idf.lookup(term));
        }
    }
    for (term, &dc) in &dtf {
        let dw = dc * idf.lookup(term);
        nd += dw * dw;
    }
    if nq == 0.0 || nd == 0.0 {
        return 0.0;
    }
    (dot / (nq.sqrt() * nd.sqrt())).clamp(0.0, 1.0)
}

/// Method-factor result: the pool's most frequent method (by number of
/// containing answers, ties to the lexicographically smallest name) and the
/// per-answer scores.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodScoreOutcome {
    pub top_method: Option<String>,
    pub scores: BTreeMap<u64, f64>,
}

/// Fourth factor: answers containing the pool's top method score
/// log2(freq)/10, everyone else 0.
pub fn method_scores(candidates: &[&ThreadDoc]) -> MethodScoreOutcome {
    let mut per_answer: Vec<(u64, BTreeSet<String>)> = Vec::with_capacity(candidates.len());
    for doc in candidates {
        let mut methods = BTreeSet::new();
        for block in &doc.code_blocks {
            methods.extend(extract_methods(block));
        }
        per_answer.push((doc.answer_id, methods));
    }
    let mut freq: BTreeMap<&str, u32> = BTreeMap::new();
    for (_, methods) in &per_answer {
        for m in methods {
            *freq.entry(m).or_insert(0) += 1;
        }
    }
    // Ascending key iteration + strict greater-than keeps the smallest name
    // among frequency ties.
    let mut top: Option<(&str, u32)> = None;
    for (&m, &f) in &freq {
        if top.is_none_or(|(_, tf)| f > tf) {
            top = Some((m, f));
        }
    }
    let mut scores = BTreeMap::new();
    match top {
        Some((name, f)) => {
            let value = (f as f64).log2() / 10.0;
            for (id, methods) in &per_answer {
                scores.insert(*id, if methods.contains(name) { value } else { 0.0 });
            }
            MethodScoreOutcome { top_method: Some(name.to_string()), scores }
        }
        None => {
            for (id, _) in &per_answer {
                scores.insert(*id, 0.0);
            }
            MethodScoreOutcome { top_method: None, scores }
        }
    }
}

/// Min–max normalizes each factor across the pool; a constant column maps
/// to all zeros.
pub fn normalize_factors(raw: &[RawFactors]) -> Vec<NormalizedCandidate> {
    let columns = |f: fn(&RawFactors) -> f64| -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in raw {
            let v = f(r);
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        (lo, hi)
    };
    let ranges = [
        columns(|r| r.sem),
        columns(|r| r.api),
        columns(|r| r.tfidf),
        columns(|r| r.method),
    ];
    raw.iter()
        .map(|r| {
            let vals = [r.sem, r.api, r.tfidf, r.method];
            let mut norm = [0.0f64; 4];
            for i in 0..4 {
                let (lo, hi) = ranges[i];
                norm[i] = if hi > lo { (vals[i] - lo) / (hi - lo) } else { 0.0 };
            }
            NormalizedCandidate { answer_id: r.answer_id, raw: vals, norm }
        })
        .collect()
}

/// Fuses normalized factors into final scores and sorts descending, ties by
/// ascending answer id.
pub fn fuse(normalized: &[NormalizedCandidate], weights: &WeightConfig) -> Vec<ScoredCandidate> {
    let w = weights.as_array();
    let mut out: Vec<ScoredCandidate> = normalized
        .iter()
        .map(|c| {
            let factors_score =
                w[0] * c.norm[0] + w[1] * c.norm[1] + w[2] * c.norm[2] + w[3] * c.norm[3];
            ScoredCandidate {
                answer_id: c.answer_id,
                raw_sem: c.raw[0],
                raw_api: c.raw[1],
                raw_tfidf: c.raw[2],
                raw_method: c.raw[3],
                norm_sem: c.norm[0],
                norm_api: c.norm[1],
                norm_tfidf: c.norm[2],
                norm_method: c.norm[3],
                factors_score,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.factors_score
            .total_cmp(&a.factors_score)
            .then(a.answer_id.cmp(&b.answer_id))
    });
    out
}

/// Normalization followed by fusion; requires at least one candidate.
pub fn normalize_and_fuse(raw: &[RawFactors], weights: &WeightConfig) -> Result<Vec<ScoredCandidate>> {
    if raw.is_empty() {
        return Err(Error::validation("normalize_and_fuse requires at least one candidate"));
    }
    weights.validate()?;
    Ok(fuse(&normalize_factors(raw), weights))
}

/// What the pipeline did, for humans and machines alike.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineDiagnostics {
    pub query_tokens: Vec<String>,
    pub big_set_size: usize,
    pub small_set_size: usize,
    pub semantic_kept: usize,
    pub pool_size: usize,
    pub recommended_classes: Vec<String>,
    pub top_method: Option<String>,
    pub notes: Vec<String>,
}

/// Ranked candidates plus diagnostics for one query.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub ranked: Vec<ScoredCandidate>,
    pub diagnostics: PipelineDiagnostics,
}

/// Everything a pipeline run reads; the engine owns one of these.
pub struct PipelineInputs<'a> {
    pub corpus: &'a Corpus,
    pub bm25: &'a Bm25Index,
    pub idf: &'a IdfMap,
    /// `None` disables the semantic stage (pool = small set, sem factor 0).
    pub store: Option<&'a EmbeddingStore>,
    /// External provider rankings; empty falls back to the corpus-driven
    /// provider.
    pub providers: &'a [ApiRanking],
}

/// Intermediate pipeline product: the candidate pool with raw and
/// normalized factors, before fusion. Calibration reuses this across weight
/// combinations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueryFactors {
    pub normalized: Vec<NormalizedCandidate>,
    pub small_set: Vec<u64>,
    pub diagnostics: PipelineDiagnostics,
}

/// Runs every stage up to (but not including) fusion.
pub fn compute_query_factors(
    query_tokens: &[String],
    inputs: &PipelineInputs,
    cfg: &PipelineConfig,
) -> Result<QueryFactors> {
    cfg.validate()?;
    let mut diagnostics = PipelineDiagnostics {
        query_tokens: query_tokens.to_vec(),
        ..PipelineDiagnostics::default()
    };
    if query_tokens.is_empty() {
        diagnostics.notes.push("query is empty after preprocessing".to_string());
        return Ok(QueryFactors { normalized: Vec::new(), small_set: Vec::new(), diagnostics });
    }

    let (small_set, big_set) = select_candidates(query_tokens, inputs.bm25, cfg)?;
    diagnostics.big_set_size = big_set.len();
    diagnostics.small_set_size = small_set.len();
    if big_set.is_empty() {
        diagnostics.notes.push("no indexed answer shares a term with the query".to_string());
        return Ok(QueryFactors { normalized: Vec::new(), small_set, diagnostics });
    }

    // Semantic stage.
    let scorer = inputs.store.map(|store| SemScorer::new(query_tokens.to_vec(), store, inputs.idf));
    let (pool_ids, sem_by_id) = match &scorer {
        Some(scorer) => {
            let (sem_top, sem_by_id) =
                semantic_filter(&big_set, inputs.corpus, scorer, cfg.top_asym)?;
            diagnostics.semantic_kept = sem_top.len();
            (merge_candidates(&small_set, &sem_top), sem_by_id)
        }
        None => {
            diagnostics.notes.push("semantic stage disabled; pool is the lexical small set".to_string());
            (merge_candidates(&small_set, &[]), BTreeMap::new())
        }
    };
    diagnostics.pool_size = pool_ids.len();

    let pool_docs: Vec<&ThreadDoc> = pool_ids
        .iter()
        .map(|&id| {
            inputs.corpus.get(id).ok_or_else(|| {
                Error::internal(format!("answer {id} is indexed but not in the corpus"))
            })
        })
        .collect::<Result<_>>()?;

    // API-class factor.
    let recommended = if inputs.providers.is_empty() {
        let small_docs: Vec<&ThreadDoc> = small_set
            .iter()
            .filter_map(|&id| inputs.corpus.get(id))
            .collect();
        fallback_provider(&small_docs, cfg.num_api_classes)
    } else {
        combine_rankings(inputs.providers, cfg.num_api_classes, cfg.combine_mode)?
    };
    diagnostics.recommended_classes = recommended.classes.clone();
    let universe = CandidateClassUniverse::from_candidates(pool_docs.iter().copied());

    // Method factor over the pool.
    let method = method_scores(&pool_docs);
    diagnostics.top_method = method.top_method.clone();

    let mut raw = Vec::with_capacity(pool_docs.len());
    for doc in &pool_docs {
        let sem = match (&scorer, sem_by_id.get(&doc.answer_id)) {
            (_, Some(&s)) => s,
            (Some(scorer), None) => {
                let bag = BagOfWords::from_tokens(doc.text_tokens());
                scorer.score(&bag)
            }
            (None, None) => 0.0,
        };
        let mut answer_classes: BTreeSet<String> = BTreeSet::new();
        for block in &doc.code_blocks {
            answer_classes.extend(extract_api_classes(block));
        }
        let api = api_score(
            &answer_classes,
            &recommended,
            &universe,
            cfg.api_smoothing,
            cfg.api_position_mode,
        )?;
        let tfidf = tfidf_score(
            query_tokens.iter().map(String::as_str),
            doc.text_tokens(),
            inputs.idf,
        );
        let m = method.scores.get(&doc.answer_id).copied().unwrap_or(0.0);
        raw.push(RawFactors { answer_id: doc.answer_id, sem, api, tfidf, method: m });
    }

    Ok(QueryFactors { normalized: normalize_factors(&raw), small_set, diagnostics })
}

/// Full pipeline: factors then fusion with the configured weights.
pub fn run_pipeline(
    query_tokens: &[String],
    inputs: &PipelineInputs,
    cfg: &PipelineConfig,
) -> Result<PipelineOutcome> {
    let factors = compute_query_factors(query_tokens, inputs, cfg)?;
    let ranked = if factors.normalized.is_empty() {
        Vec::new()
    } else {
        fuse(&factors.normalized, &cfg.weights)
    };
    Ok(PipelineOutcome { ranked, diagnostics: factors.diagnostics })
}

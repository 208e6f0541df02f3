//! Retrieval evaluation: Hit/MRR/MAP/MR at K, gold-set loading, train/test
//! splitting, baseline runs, and exhaustive weight calibration.

use std::collections::BTreeSet;
use std::io::BufRead;
use std::path::Path;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranker::{NormalizedCandidate, WeightConfig};

/// One evaluated query: its text and the answer ids accepted as relevant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldEntry {
    pub query_id: String,
    pub query: String,
    pub relevant: BTreeSet<u64>,
}

/// The whole labeled query set, ordered by query id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldSet {
    pub entries: Vec<GoldEntry>,
}

/// Likert threshold at which a rated answer counts as relevant.
pub const RELEVANCE_THRESHOLD: f64 = 4.0;

#[derive(Deserialize)]
struct GoldRow {
    query_id: String,
    query: String,
    #[serde(default)]
    relevant: Vec<u64>,
    #[serde(default)]
    ratings: std::collections::BTreeMap<String, f64>,
}

impl GoldSet {
    /// Loads a JSON-lines gold file. Each line:
    /// `{"query_id": …, "query": …, "relevant": [ids], "ratings": {id: likert}}`.
    /// The effective relevant set is `relevant` plus every id rated at or
    /// above [`RELEVANCE_THRESHOLD`]; it must be nonempty per entry.
    pub fn load<R: BufRead>(input: R) -> Result<Self> {
        let mut entries: Vec<GoldEntry> = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, line) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::artifact(format!("gold line {lineno}: {e}")))?;
            if line.trim().is_empty() {
                continue;
            }
            let row: GoldRow = serde_json::from_str(&line)
                .map_err(|e| Error::artifact(format!("gold line {lineno}: {e}")))?;
            if !seen.insert(row.query_id.clone()) {
                return Err(Error::validation(format!(
                    "gold line {lineno}: duplicate query id '{}'",
                    row.query_id
                )));
            }
            let mut relevant: BTreeSet<u64> = row.relevant.into_iter().collect();
            for (id, rating) in &row.ratings {
                if *rating >= RELEVANCE_THRESHOLD {
                    let id: u64 = id.parse().map_err(|_| {
                        Error::validation(format!(
                            "gold line {lineno}: rating key '{id}' is not an answer id"
                        ))
                    })?;
                    relevant.insert(id);
                }
            }
            if relevant.is_empty() {
                return Err(Error::validation(format!(
                    "gold line {lineno}: query '{}' has no relevant answers",
                    row.query_id
                )));
            }
            entries.push(GoldEntry { query_id: row.query_id, query: row.query, relevant });
        }
        if entries.is_empty() {
            return Err(Error::validation("gold set is empty"));
        }
        entries.sort_by(|a, b| a.query_id.cmp(&b.query_id));
        Ok(GoldSet { entries })
    }

    pub fn load_from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::load(std::io::BufReader::new(file))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Deterministic split: shuffle with the seed, first ⌈n/2⌉ queries train,
/// the rest test.
pub fn split_queries(gold: &GoldSet, seed: u64) -> Result<(Vec<GoldEntry>, Vec<GoldEntry>)> {
    split_at(gold, seed, |n| n.div_ceil(2))
}

/// Like [`split_queries`] with an arbitrary train share in (0, 1); the
/// train side takes ⌈n·frac⌉ queries (at least 1 on each side).
pub fn split_queries_frac(
    gold: &GoldSet,
    seed: u64,
    train_frac: f64,
) -> Result<(Vec<GoldEntry>, Vec<GoldEntry>)> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(Error::validation("train fraction must be strictly between 0 and 1"));
    }
    split_at(gold, seed, |n| ((n as f64 * train_frac).ceil() as usize).clamp(1, n - 1))
}

fn split_at(
    gold: &GoldSet,
    seed: u64,
    train_len: impl Fn(usize) -> usize,
) -> Result<(Vec<GoldEntry>, Vec<GoldEntry>)> {
    if gold.len() < 2 {
        return Err(Error::validation("splitting needs at least 2 queries"));
    }
    let mut entries = gold.entries.clone();
    let mut rng = StdRng::seed_from_u64(seed);
    entries.shuffle(&mut rng);
    let test = entries.split_off(train_len(entries.len()));
    Ok((entries, test))
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::validation("metric cutoff k must be >= 1"));
    }
    Ok(())
}

/// 1 if any of the top-k ranked ids is relevant, else 0.
pub fn hit_at_k(ranked: &[u64], relevant: &BTreeSet<u64>, k: usize) -> f64 {
    let k = k.min(ranked.len());
    if ranked[..k].iter().any(|id| relevant.contains(id)) {
        1.0
    } else {
        0.0
    }
}

/// Reciprocal rank of the first relevant id within the top k, else 0.
pub fn mrr_at_k(ranked: &[u64], relevant: &BTreeSet<u64>, k: usize) -> f64 {
    match first_relevant_rank(ranked, relevant, k) {
        Some(rank) => 1.0 / rank as f64,
        None => 0.0,
    }
}

/// 1-based rank of the first relevant id within the top k.
pub fn first_relevant_rank(ranked: &[u64], relevant: &BTreeSet<u64>, k: usize) -> Option<usize> {
    let k = k.min(ranked.len());
    ranked[..k].iter().position(|id| relevant.contains(id)).map(|p| p + 1)
}

/// Average precision at k: the mean of precision@i over relevant positions
/// i ≤ k, normalized by min(|relevant|, k).
pub fn map_at_k(ranked: &[u64], relevant: &BTreeSet<u64>, k: usize) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    let cut = k.min(ranked.len());
    let mut hits = 0u32;
    let mut sum = 0.0;
    for (i, id) in ranked[..cut].iter().enumerate() {
        if relevant.contains(id) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / relevant.len().min(k) as f64
}

/// Recall at k: share of the relevant ids found in the top k.
pub fn mr_at_k(ranked: &[u64], relevant: &BTreeSet<u64>, k: usize) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    let cut = k.min(ranked.len());
    let found = ranked[..cut].iter().filter(|id| relevant.contains(id)).count();
    found as f64 / relevant.len() as f64
}

/// Per-query evaluation record inside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerQuery {
    pub query_id: String,
    /// 1-based rank of the first relevant answer within the top k, if any.
    pub first_relevant_rank: Option<usize>,
    /// Average precision at k.
    pub precision: f64,
    /// Recall at k.
    pub recall: f64,
}

/// Aggregated metrics over a query set; every aggregate is the mean of the
/// corresponding per-query values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub k: usize,
    pub hit: f64,
    pub mrr: f64,
    pub map: f64,
    pub mr: f64,
    pub per_query: Vec<PerQuery>,
}

/// One query's ranking and truth, ready for metric computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedQuery {
    pub query_id: String,
    pub ranked: Vec<u64>,
    pub relevant: BTreeSet<u64>,
}

/// Computes all metrics over ranked queries. Per-query rows are ordered by
/// query id; aggregates are their means.
pub fn evaluate_rankings(queries: &[RankedQuery], k: usize) -> Result<EvalReport> {
    check_k(k)?;
    if queries.is_empty() {
        return Err(Error::validation("no queries to evaluate"));
    }
    let mut per_query: Vec<PerQuery> = queries
        .iter()
        .map(|q| PerQuery {
            query_id: q.query_id.clone(),
            first_relevant_rank: first_relevant_rank(&q.ranked, &q.relevant, k),
            precision: map_at_k(&q.ranked, &q.relevant, k),
            recall: mr_at_k(&q.ranked, &q.relevant, k),
        })
        .collect();
    per_query.sort_by(|a, b| a.query_id.cmp(&b.query_id));
    let n = per_query.len() as f64;
    let hit = per_query.iter().filter(|p| p.first_relevant_rank.is_some()).count() as f64 / n;
    let mrr = per_query
        .iter()
        .map(|p| p.first_relevant_rank.map_or(0.0, |r| 1.0 / r as f64))
        .sum::<f64>()
        / n;
    let map = per_query.iter().map(|p| p.precision).sum::<f64>() / n;
    let mr = per_query.iter().map(|p| p.recall).sum::<f64>() / n;
    Ok(EvalReport { k, hit, mrr, map, mr, per_query })
}

/// Per-query data the calibrator and baselines reuse: the lexical small-set
/// order and the normalized factor quadruples of the candidate pool.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryEvalData {
    pub query_id: String,
    pub relevant: BTreeSet<u64>,
    pub small_set: Vec<u64>,
    pub normalized: Vec<NormalizedCandidate>,
}

/// Ranks a normalized pool under the given weights without building full
/// scored candidates; order matches `ranker::fuse` exactly.
pub fn rank_ids(normalized: &[NormalizedCandidate], weights: &WeightConfig) -> Vec<u64> {
    let w = weights.as_array();
    let mut scored: Vec<(f64, u64)> = normalized
        .iter()
        .map(|c| {
            (
                w[0] * c.norm[0] + w[1] * c.norm[1] + w[2] * c.norm[2] + w[3] * c.norm[3],
                c.answer_id,
            )
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    scored.into_iter().map(|(_, id)| id).collect()
}

/// Grid values used by the exhaustive weight search.
pub const GRID_STEPS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Exhaustive grid search over the four weights (5⁴ = 625 combinations):
/// picks the lexicographic argmax of (Hit@k, MRR@k, MAP@k); metric ties go
/// to the lexicographically smallest weight vector.
pub fn calibrate_weights(train: &[QueryEvalData], k: usize) -> Result<WeightConfig> {
    check_k(k)?;
    if train.is_empty() {
        return Err(Error::validation("calibration needs at least one training query"));
    }
    let n = train.len() as f64;
    let mut best: Option<(f64, f64, f64, WeightConfig)> = None;
    for &sw in &GRID_STEPS {
        for &aw in &GRID_STEPS {
            for &tw in &GRID_STEPS {
                for &mw in &GRID_STEPS {
                    let weights = WeightConfig::new(sw, aw, tw, mw);
                    let mut hit = 0.0;
                    let mut mrr = 0.0;
                    let mut map = 0.0;
                    for q in train {
                        let ranked = rank_ids(&q.normalized, &weights);
                        hit += hit_at_k(&ranked, &q.relevant, k);
                        mrr += mrr_at_k(&ranked, &q.relevant, k);
                        map += map_at_k(&ranked, &q.relevant, k);
                    }
                    hit /= n;
                    mrr /= n;
                    map /= n;
                    let better = match &best {
                        None => true,
                        Some((bh, bm, bp, _)) => {
                            hit > *bh
                                || (hit == *bh && mrr > *bm)
                                || (hit == *bh && mrr == *bm && map > *bp)
                        }
                    };
                    if better {
                        best = Some((hit, mrr, map, weights));
                    }
                }
            }
        }
    }
    Ok(best.expect("grid is nonempty").3)
}

/// The six evaluated system variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    /// Lexical small-set order, no fusion.
    Bm25,
    /// Fusion with only the TF-IDF weight nonzero.
    Tfidf,
    /// Fusion with only the semantic weight nonzero.
    Semantic,
    /// Fusion with only the API-class weight nonzero.
    ApiClass,
    /// Fusion with only the method weight nonzero.
    ApiMethod,
    /// Fusion with the provided (calibrated or default) weights.
    Fused,
}

impl std::str::FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bm25" => Ok(Baseline::Bm25),
            "tfidf" => Ok(Baseline::Tfidf),
            "semantic" => Ok(Baseline::Semantic),
            "api_class" => Ok(Baseline::ApiClass),
            "api_method" => Ok(Baseline::ApiMethod),
            "fused" => Ok(Baseline::Fused),
            other => Err(Error::validation(format!(
                "unknown baseline '{other}' (expected bm25, tfidf, semantic, api_class, api_method, or fused)"
            ))),
        }
    }
}

impl Baseline {
    pub const ALL: [Baseline; 6] = [
        Baseline::Bm25,
        Baseline::Tfidf,
        Baseline::Semantic,
        Baseline::ApiClass,
        Baseline::ApiMethod,
        Baseline::Fused,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Baseline::Bm25 => "bm25",
            Baseline::Tfidf => "tfidf",
            Baseline::Semantic => "semantic",
            Baseline::ApiClass => "api_class",
            Baseline::ApiMethod => "api_method",
            Baseline::Fused => "fused",
        }
    }

    /// The weight mask realizing this baseline, or `None` when it isn't a
    /// fusion (bm25) or uses the caller's weights (fused).
    pub fn weight_mask(&self) -> Option<WeightConfig> {
        match self {
            Baseline::Bm25 | Baseline::Fused => None,
            Baseline::Semantic => Some(WeightConfig::new(1.0, 0.0, 0.0, 0.0)),
            Baseline::ApiClass => Some(WeightConfig::new(0.0, 1.0, 0.0, 0.0)),
            Baseline::Tfidf => Some(WeightConfig::new(0.0, 0.0, 1.0, 0.0)),
            Baseline::ApiMethod => Some(WeightConfig::new(0.0, 0.0, 0.0, 1.0)),
        }
    }
}

/// Evaluates one baseline over the query data.
pub fn run_baseline(
    baseline: Baseline,
    data: &[QueryEvalData],
    k: usize,
    fused_weights: &WeightConfig,
) -> Result<EvalReport> {
    let queries: Vec<RankedQuery> = data
        .iter()
        .map(|q| {
            let ranked = match baseline {
                Baseline::Bm25 => q.small_set.clone(),
                Baseline::Fused => rank_ids(&q.normalized, fused_weights),
                other => rank_ids(
                    &q.normalized,
                    &other.weight_mask().expect("single-factor baselines have masks"),
                ),
            };
            RankedQuery { query_id: q.query_id.clone(), ranked, relevant: q.relevant.clone() }
        })
        .collect();
    evaluate_rankings(&queries, k)
}

//! API-class recommendation: pluggable ranked-list providers, their
//! combination, a corpus-driven fallback provider, and the per-answer
//! API-class score.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::codescan::extract_api_classes;
use crate::corpus::ThreadDoc;
use crate::error::{Error, Result};

/// Ranked list of distinct API class names, best first, from one provider.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiRanking {
    /// Provider label (e.g. a tool name or `fallback`).
    pub provider: String,
    /// Distinct class names, best first.
    pub classes: Vec<String>,
}

impl ApiRanking {
    /// Builds a ranking, dropping duplicate class names (first wins).
    pub fn new<S: Into<String>>(provider: S, classes: Vec<String>) -> Self {
        let mut seen = HashSet::new();
        let classes = classes
            .into_iter()
            .filter(|c| seen.insert(c.clone()))
            .collect();
        ApiRanking { provider: provider.into(), classes }
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// All class names extracted from the current candidate answers' code.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateClassUniverse {
    all_apis: BTreeSet<String>,
}

impl CandidateClassUniverse {
    /// Collects the universe from candidate answers' code blocks.
    pub fn from_candidates<'a, I>(candidates: I) -> Self
    where
        I: IntoIterator<Item = &'a ThreadDoc>,
    {
        let mut all_apis = BTreeSet::new();
        for doc in candidates {
            for block in &doc.code_blocks {
                all_apis.extend(extract_api_classes(block));
            }
        }
        CandidateClassUniverse { all_apis }
    }

    /// Builds a universe directly from names (fixtures and tests).
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        CandidateClassUniverse {
            all_apis: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn contains(&self, class: &str) -> bool {
        self.all_apis.contains(class)
    }

    pub fn len(&self) -> usize {
        self.all_apis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all_apis.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.all_apis.iter().map(String::as_str)
    }
}

/// How provider rankings are merged into one list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CombineMode {
    /// Interleave providers one class at a time, in provider order.
    #[default]
    RoundRobin,
    /// Append providers one after another, in provider order.
    Concat,
}

impl std::str::FromStr for CombineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "round-robin" => Ok(CombineMode::RoundRobin),
            "concat" => Ok(CombineMode::Concat),
            other => Err(Error::validation(format!(
                "unknown combine mode '{other}' (expected 'round-robin' or 'concat')"
            ))),
        }
    }
}

/// Whether `api_score` positions are assigned before or after filtering the
/// recommended list to the candidate universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ApiPositionMode {
    /// Filter to the universe first, then assign zero-based positions.
    #[default]
    FilteredBefore,
    /// Assign positions in the full recommended list, then filter.
    FilteredAfter,
}

impl std::str::FromStr for ApiPositionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "before" => Ok(ApiPositionMode::FilteredBefore),
            "after" => Ok(ApiPositionMode::FilteredAfter),
            other => Err(Error::validation(format!(
                "unknown api position mode '{other}' (expected 'before' or 'after')"
            ))),
        }
    }
}

/// Loads one provider's ranking from a text file: one class name per line,
/// best first; blank lines and `#` comments are skipped.
pub fn load_provider_file(label: &str, path: &Path) -> Result<ApiRanking> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut classes = Vec::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let name = line.trim();
        if name.is_empty() || name.starts_with('#') {
            continue;
        }
        classes.push(name.to_string());
    }
    Ok(ApiRanking::new(label, classes))
}

/// Merges provider rankings into one deduplicated ranking of at most
/// `limit` classes. Round-robin takes one class from each provider in turn
/// (skipping duplicates and exhausted providers); concat appends whole
/// rankings in order.
pub fn combine_rankings(rankings: &[ApiRanking], limit: usize, mode: CombineMode) -> Result<ApiRanking> {
    if rankings.is_empty() {
        return Err(Error::validation("combine_rankings requires at least one ranking"));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |class: &str, out: &mut Vec<String>| {
        if out.len() < limit && seen.insert(class.to_string()) {
            out.push(class.to_string());
        }
    };
    match mode {
        CombineMode::RoundRobin => {
            let mut cursors = vec![0usize; rankings.len()];
            loop {
                let mut advanced = false;
                for (ranking, cursor) in rankings.iter().zip(cursors.iter_mut()) {
                    if let Some(class) = ranking.classes.get(*cursor) {
                        push(class, &mut out);
                        *cursor += 1;
                        advanced = true;
                    }
                    if out.len() == limit {
                        break;
                    }
                }
                if !advanced || out.len() == limit {
                    break;
                }
            }
        }
        CombineMode::Concat => {
            'outer: for ranking in rankings {
                for class in &ranking.classes {
                    push(class, &mut out);
                    if out.len() == limit {
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(ApiRanking { provider: "combined".to_string(), classes: out })
}

/// Self-contained recommendation provider: ranks classes by how many of the
/// top lexical-search answers mention them (distinct answers), breaking ties
/// by first occurrence across the answer list.
pub fn fallback_provider(bm25_top: &[&ThreadDoc], k_classes: usize) -> ApiRanking {
    let mut freq: HashMap<String, usize> = HashMap::new();
    let mut first_seen: HashMap<String, usize> = HashMap::new();
    let mut order = 0usize;
    for doc in bm25_top {
        let mut in_this_answer = HashSet::new();
        for block in &doc.code_blocks {
            for class in extract_api_classes(block) {
                if !in_this_answer.insert(class.clone()) {
                    continue;
                }
                *freq.entry(class.clone()).or_insert(0) += 1;
                first_seen.entry(class).or_insert_with(|| {
                    order += 1;
                    order
                });
            }
        }
    }
    let mut classes: Vec<String> = freq.keys().cloned().collect();
    classes.sort_by(|a, b| {
        freq[b]
            .cmp(&freq[a])
            .then_with(|| first_seen[a].cmp(&first_seen[b]))
    });
    classes.truncate(k_classes);
    ApiRanking { provider: "fallback".to_string(), classes }
}

/// Per-answer API-class score: over the recommended classes restricted to
/// the candidate universe, each class the answer also uses contributes
/// `1/(pos + n)` with zero-based `pos`. Position assignment follows `mode`.
pub fn api_score(
    answer_classes: &BTreeSet<String>,
    recommended: &ApiRanking,
    universe: &CandidateClassUniverse,
    n: u32,
    mode: ApiPositionMode,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::validation("api_score smoothing constant n must be >= 1"));
    }
    let n = n as f64;
    let mut score = 0.0;
    match mode {
        ApiPositionMode::FilteredBefore => {
            let mut pos = 0.0;
            for class in &recommended.classes {
                if !universe.contains(class) {
                    continue;
                }
                if answer_classes.contains(class) {
                    score += 1.0 / (pos + n);
                }
                pos += 1.0;
            }
        }
        ApiPositionMode::FilteredAfter => {
            for (pos, class) in recommended.classes.iter().enumerate() {
                if universe.contains(class) && answer_classes.contains(class) {
                    score += 1.0 / (pos as f64 + n);
                }
            }
        }
    }
    Ok(score)
}

//! Okapi BM25 over thread documents, built natively so scores follow the
//! classic formula exactly.

use std::collections::BTreeMap;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::ThreadDoc;
use crate::error::{Error, Result};

/// BM25 shape parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Bm25Params {
    /// Term-frequency saturation, `k` in the scoring formula.
    pub k: f64,
    /// Length normalization strength, `b` in the scoring formula.
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k: 1.2, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn validate(&self) -> Result<()> {
        if !self.k.is_finite() || self.k < 0.0 {
            return Err(Error::validation(format!("bm25 k must be finite and >= 0, got {}", self.k)));
        }
        if !self.b.is_finite() || !(0.0..=1.0).contains(&self.b) {
            return Err(Error::validation(format!("bm25 b must be in [0, 1], got {}", self.b)));
        }
        Ok(())
    }
}

/// Inverted index with document lengths, keyed by answer id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bm25Index {
    params: Bm25Params,
    /// term -> (doc id, term frequency), ascending by doc id.
    postings: BTreeMap<String, Vec<(u64, u32)>>,
    /// doc id -> token count of the indexed text.
    doc_len: BTreeMap<u64, u32>,
    avgdl: f64,
    n_docs: usize,
}

impl Bm25Index {
    /// Indexes the documents' lexical tokens (title + body + code tokens).
    pub fn build(docs: &[ThreadDoc], params: Bm25Params) -> Result<Self> {
        params.validate()?;
        if docs.is_empty() {
            return Err(Error::validation("cannot build a BM25 index over an empty corpus"));
        }
        let mut postings: BTreeMap<String, Vec<(u64, u32)>> = BTreeMap::new();
        let mut doc_len = BTreeMap::new();
        let mut total_len = 0u64;
        for doc in docs {
            let mut counts: HashMap<&str, u32> = HashMap::new();
            let mut len = 0u32;
            for tok in doc.index_tokens() {
                *counts.entry(tok).or_insert(0) += 1;
                len += 1;
            }
            doc_len.insert(doc.answer_id, len);
            total_len += u64::from(len);
            for (term, tf) in counts {
                postings.entry(term.to_string()).or_default().push((doc.answer_id, tf));
            }
        }
        for list in postings.values_mut() {
            list.sort_by_key(|&(id, _)| id);
        }
        Ok(Bm25Index {
            params,
            postings,
            doc_len,
            avgdl: total_len as f64 / docs.len() as f64,
            n_docs: docs.len(),
        })
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn avgdl(&self) -> f64 {
        self.avgdl
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn contains_doc(&self, doc_id: u64) -> bool {
        self.doc_len.contains_key(&doc_id)
    }

    /// Document frequency of a term (0 when unseen).
    pub fn doc_freq(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    /// Inverse document frequency, natural log:
    /// `ln((N - n + 0.5) / (n + 0.5))`. Unseen terms use n = 0; terms in more
    /// than half the corpus produce a negative value, kept as-is.
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.doc_freq(term) as f64;
        let big_n = self.n_docs as f64;
        ((big_n - n + 0.5) / (n + 0.5)).ln()
    }

    fn term_weight(&self, tf: u32, dl: u32) -> f64 {
        let Bm25Params { k, b } = self.params;
        let tf = f64::from(tf);
        let norm = 1.0 - b + b * f64::from(dl) / self.avgdl;
        tf * (k + 1.0) / (tf + k * norm)
    }

    /// BM25 score of one document for a token sequence. Repeated query
    /// tokens contribute once per occurrence; terms absent from the document
    /// contribute exactly 0. Unknown doc ids are an error.
    pub fn score(&self, query: &[String], doc_id: u64) -> Result<f64> {
        let &dl = self
            .doc_len
            .get(&doc_id)
            .ok_or_else(|| Error::validation(format!("unknown doc id {doc_id}")))?;
        let mut total = 0.0;
        for term in query {
            let Some(list) = self.postings.get(term) else { continue };
            let Ok(pos) = list.binary_search_by_key(&doc_id, |&(id, _)| id) else { continue };
            let tf = list[pos].1;
            total += self.idf(term) * self.term_weight(tf, dl);
        }
        Ok(total)
    }

    /// Top documents for the query: every document sharing at least one
    /// query term, scored, sorted by descending score with ascending doc id
    /// breaking ties, truncated to `limit`.
    pub fn search(&self, query: &[String], limit: usize) -> Vec<(u64, f64)> {
        let mut scores: HashMap<u64, f64> = HashMap::new();
        for term in query {
            let Some(list) = self.postings.get(term) else { continue };
            let idf = self.idf(term);
            for &(doc_id, tf) in list {
                let dl = self.doc_len[&doc_id];
                *scores.entry(doc_id).or_insert(0.0) += idf * self.term_weight(tf, dl);
            }
        }
        let mut ranked: Vec<(u64, f64)> = scores.into_iter().collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(limit);
        ranked
    }
}

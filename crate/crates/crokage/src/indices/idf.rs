//! Corpus-wide IDF map used by the semantic and TF-IDF factors.

use std::collections::BTreeMap;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::ThreadDoc;
use crate::error::{Error, Result};

/// `idf(w) = log10(N / df_w)` over the full vocabulary (title, body, and
/// code tokens). Lookups of unseen words fall back to df = 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdfMap {
    n_docs: usize,
    idf: BTreeMap<String, f64>,
}

/// Counts document frequencies and freezes the IDF table.
pub fn build_idf_map(docs: &[ThreadDoc]) -> Result<IdfMap> {
    if docs.is_empty() {
        return Err(Error::validation("cannot build an IDF map over an empty corpus"));
    }
    let n = docs.len() as f64;
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let distinct: HashSet<&str> = doc.index_tokens().collect();
        for term in distinct {
            *df.entry(term.to_string()).or_insert(0) += 1;
        }
    }
    let idf = df.into_iter().map(|(term, d)| (term, (n / d as f64).log10())).collect();
    Ok(IdfMap { n_docs: docs.len(), idf })
}

impl IdfMap {
    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn vocab_len(&self) -> usize {
        self.idf.len()
    }

    /// IDF of a word; unseen words behave as if they occurred in one
    /// document: `log10(N / 1)`.
    pub fn lookup(&self, word: &str) -> f64 {
        match self.idf.get(word) {
            Some(&v) => v,
            None => (self.n_docs as f64).log10(),
        }
    }

    #[cfg(test)]
    pub(crate) fn from_entries(n_docs: usize, entries: &[(&str, f64)]) -> Self {
        IdfMap {
            n_docs,
            idf: entries.iter().map(|&(w, v)| (w.to_string(), v)).collect(),
        }
    }
}

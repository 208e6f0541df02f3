//! Corpus-wide API-class index: which answers use which classes, with a
//! minimum-frequency cutoff to drop incidental mentions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::ThreadDoc;
use crate::error::{Error, Result};

pub use crate::codescan::extract_api_classes;

/// Default minimum number of answers a class must appear in to be indexed.
pub const DEFAULT_MIN_CLASS_FREQ: usize = 5;

/// Maps retained API classes to the answers using them, plus the per-answer
/// class lists (already filtered to retained classes).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiIndex {
    min_class_freq: usize,
    /// class -> answer ids (ascending) whose code references it.
    class_to_answers: BTreeMap<String, Vec<u64>>,
    /// answer id -> retained classes in first-occurrence order.
    answer_classes: BTreeMap<u64, Vec<String>>,
}

/// Extracts classes from every answer's code and keeps those referenced by
/// at least `min_class_freq` answers.
pub fn build_api_index(docs: &[ThreadDoc], min_class_freq: usize) -> Result<ApiIndex> {
    if min_class_freq == 0 {
        return Err(Error::validation("min_class_freq must be at least 1"));
    }
    let mut class_to_answers: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    let mut raw_answer_classes: Vec<(u64, Vec<String>)> = Vec::with_capacity(docs.len());
    for doc in docs {
        let classes = extract_api_classes(&doc.code_blocks.join("\n"));
        for class in &classes {
            class_to_answers.entry(class.clone()).or_default().push(doc.answer_id);
        }
        raw_answer_classes.push((doc.answer_id, classes));
    }
    class_to_answers.retain(|_, answers| {
        answers.sort_unstable();
        answers.dedup();
        answers.len() >= min_class_freq
    });
    let answer_classes = raw_answer_classes
        .into_iter()
        .map(|(id, classes)| {
            let kept: Vec<String> =
                classes.into_iter().filter(|c| class_to_answers.contains_key(c)).collect();
            (id, kept)
        })
        .collect();
    Ok(ApiIndex { min_class_freq, class_to_answers, answer_classes })
}

impl ApiIndex {
    pub fn min_class_freq(&self) -> usize {
        self.min_class_freq
    }

    /// Number of retained classes.
    pub fn len(&self) -> usize {
        self.class_to_answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_to_answers.is_empty()
    }

    /// Answers using a retained class; `None` when the class fell below the
    /// frequency cutoff (or never occurred).
    pub fn answers_for(&self, class: &str) -> Option<&[u64]> {
        self.class_to_answers.get(class).map(Vec::as_slice)
    }

    /// Retained classes referenced by an answer, first-occurrence order.
    /// Answers outside the corpus yield an empty slice.
    pub fn classes_of(&self, answer_id: u64) -> &[String] {
        self.answer_classes.get(&answer_id).map(Vec::as_slice).unwrap_or(&[])
    }
}

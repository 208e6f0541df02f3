//! Corpus layer: dump parsing, text/code separation, preprocessing, and the
//! question–answer thread documents everything downstream works on.

pub mod html;
pub mod parse;
pub mod preprocess;

use std::collections::HashMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifact::{self, ArtifactDigest};
use crate::error::{Error, Result};

pub use html::split_text_code;
pub use parse::{parse_dump, DumpFormat, IngestDiagnostics, PostType, RawPost};
pub use preprocess::{preprocess, tokenize, StopwordConfig};

const CORPUS_MAGIC: &[u8; 8] = b"CROKCORP";
const CORPUS_VERSION: u32 = 1;

/// One retrievable unit: a question paired with one of its code-bearing
/// answers, in both raw and preprocessed form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThreadDoc {
    pub answer_id: u64,
    pub question_id: u64,
    pub answer_score: i64,
    /// Question title, entity-decoded plain text.
    pub raw_title: String,
    /// Original bodies as HTML fragments, kept for solution composition.
    pub raw_question_body: String,
    pub raw_answer_body: String,
    /// Code blocks extracted from the answer body, verbatim, document order.
    pub code_blocks: Vec<String>,
    /// Preprocessed title tokens.
    pub proc_title: Vec<String>,
    /// Preprocessed prose tokens: question body followed by answer body.
    pub proc_body: Vec<String>,
    /// Preprocessed tokens of the answer's code blocks.
    pub proc_code_tokens: Vec<String>,
}

impl ThreadDoc {
    /// Tokens the lexical index sees: title + body prose + code tokens.
    pub fn index_tokens(&self) -> impl Iterator<Item = &str> {
        self.proc_title
            .iter()
            .chain(self.proc_body.iter())
            .chain(self.proc_code_tokens.iter())
            .map(String::as_str)
    }

    /// Tokens used for semantic and TF-IDF comparison: title + body prose,
    /// code tokens excluded.
    pub fn text_tokens(&self) -> impl Iterator<Item = &str> {
        self.proc_title.iter().chain(self.proc_body.iter()).map(String::as_str)
    }

    /// The answer's prose with code blocks removed, for sentence filtering.
    pub fn answer_prose(&self) -> String {
        html::split_text_code(&self.raw_answer_body).0
    }
}

/// Builds thread documents from parsed posts: one per answer that has at
/// least one code block and a resolvable parent question. Orphan answers and
/// code-less answers are skipped and counted in `diag`. Output is ordered by
/// ascending answer id.
pub fn build_thread_docs(
    posts: &[RawPost],
    cfg: &StopwordConfig,
    diag: &mut IngestDiagnostics,
) -> Vec<ThreadDoc> {
    let questions: HashMap<u64, &RawPost> = posts
        .iter()
        .filter(|p| p.post_type == PostType::Question)
        .map(|p| (p.id, p))
        .collect();

    let mut answers: Vec<&RawPost> =
        posts.iter().filter(|p| p.post_type == PostType::Answer).collect();
    answers.sort_by_key(|a| a.id);

    enum Built {
        Doc(Box<ThreadDoc>),
        Orphan,
        NoCode,
    }

    let built: Vec<Built> = answers
        .par_iter()
        .map(|answer| {
            let parent_id = answer.parent_id.expect("answers always carry parent_id");
            let Some(question) = questions.get(&parent_id) else {
                return Built::Orphan;
            };
            let (answer_prose, code_blocks) = html::split_text_code(&answer.body);
            if code_blocks.is_empty() {
                return Built::NoCode;
            }
            let (question_prose, _) = html::split_text_code(&question.body);
            let title = html::decode_entities(question.title.as_deref().unwrap_or(""));

            let mut proc_body = preprocess(&question_prose, cfg);
            proc_body.extend(preprocess(&answer_prose, cfg));
            let proc_code_tokens = preprocess(&code_blocks.join("\n"), cfg);

            Built::Doc(Box::new(ThreadDoc {
                answer_id: answer.id,
                question_id: question.id,
                answer_score: answer.score,
                raw_title: title.clone(),
                raw_question_body: question.body.clone(),
                raw_answer_body: answer.body.clone(),
                code_blocks,
                proc_title: preprocess(&title, cfg),
                proc_body,
                proc_code_tokens,
            }))
        })
        .collect();

    let mut docs = Vec::new();
    for item in built {
        match item {
            Built::Doc(doc) => docs.push(*doc),
            Built::Orphan => diag.orphan_answers += 1,
            Built::NoCode => diag.answers_without_code += 1,
        }
    }
    diag.thread_docs = docs.len();
    docs
}

/// The in-memory corpus: thread documents ordered by answer id with an id
/// lookup table.
#[derive(Debug, Clone)]
pub struct Corpus {
    docs: Vec<ThreadDoc>,
    by_answer_id: HashMap<u64, usize>,
}

impl Corpus {
    /// Wraps documents, sorting by answer id and rejecting duplicates.
    pub fn new(mut docs: Vec<ThreadDoc>) -> Result<Self> {
        docs.sort_by_key(|d| d.answer_id);
        let mut by_answer_id = HashMap::with_capacity(docs.len());
        for (idx, doc) in docs.iter().enumerate() {
            if by_answer_id.insert(doc.answer_id, idx).is_some() {
                return Err(Error::internal(format!(
                    "duplicate answer id {} in corpus",
                    doc.answer_id
                )));
            }
        }
        Ok(Corpus { docs, by_answer_id })
    }

    pub fn docs(&self) -> &[ThreadDoc] {
        &self.docs
    }

    pub fn get(&self, answer_id: u64) -> Option<&ThreadDoc> {
        self.by_answer_id.get(&answer_id).map(|&i| &self.docs[i])
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// Serializes to the versioned binary format; returns the payload digest
    /// that index artifacts record for compatibility checks.
    pub fn save(&self, path: &Path) -> Result<ArtifactDigest> {
        let payload = bincode::serialize(&self.docs)
            .map_err(|e| Error::internal(format!("corpus encode failed: {e}")))?;
        artifact::write_artifact(path, CORPUS_MAGIC, CORPUS_VERSION, &payload)
    }

    /// Loads a corpus artifact, returning it with its payload digest.
    pub fn load(path: &Path) -> Result<(Self, ArtifactDigest)> {
        let (payload, digest) = artifact::read_artifact(path, CORPUS_MAGIC, CORPUS_VERSION)?;
        let docs: Vec<ThreadDoc> = bincode::deserialize(&payload).map_err(|e| {
            Error::artifact(format!("{}: corpus payload undecodable: {e}", path.display()))
        })?;
        Ok((Corpus::new(docs)?, digest))
    }
}

//! Streaming parsers for Q&A dump files: the Posts.xml row format and its
//! JSON-lines mirror.

use std::io::BufRead;

use quick_xml::events::Event;
use quick_xml::Reader;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Post kind as encoded by `PostTypeId` (1 = question, 2 = answer).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PostType {
    Question,
    Answer,
}

/// One parsed dump row, before thread assembly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawPost {
    pub id: u64,
    pub post_type: PostType,
    /// Present on answers: the question this answer belongs to.
    pub parent_id: Option<u64>,
    pub score: i64,
    /// Present on questions.
    pub title: Option<String>,
    /// Body as an HTML fragment (entities already unescaped by the dump layer).
    pub body: String,
    pub tags: Vec<String>,
}

/// Input file format accepted by `parse_dump`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpFormat {
    Xml,
    Jsonl,
}

impl std::str::FromStr for DumpFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xml" => Ok(DumpFormat::Xml),
            "jsonl" => Ok(DumpFormat::Jsonl),
            other => Err(Error::validation(format!(
                "unknown dump format '{other}' (expected 'xml' or 'jsonl')"
            ))),
        }
    }
}

/// Skip counters accumulated across parsing and thread assembly; serialized
/// into `diagnostics.txt` by the ingest command.
#[derive(Debug, Default, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestDiagnostics {
    pub questions: usize,
    pub answers: usize,
    pub skipped_unrecognized_type: usize,
    pub skipped_malformed: usize,
    pub orphan_answers: usize,
    pub answers_without_code: usize,
    pub thread_docs: usize,
}

impl IngestDiagnostics {
    /// Plain-text `key: value` report, one counter per line.
    pub fn to_report(&self) -> String {
        format!(
            "questions: {}\nanswers: {}\nskipped_unrecognized_type: {}\nskipped_malformed: {}\norphan_answers: {}\nanswers_without_code: {}\nthread_docs: {}\n",
            self.questions,
            self.answers,
            self.skipped_unrecognized_type,
            self.skipped_malformed,
            self.orphan_answers,
            self.answers_without_code,
            self.thread_docs,
        )
    }
}

/// Raw field bundle collected from one row before validation.
#[derive(Debug, Default)]
struct RowFields {
    id: Option<u64>,
    post_type_id: Option<i64>,
    parent_id: Option<u64>,
    score: i64,
    title: Option<String>,
    body: Option<String>,
    tags: Vec<String>,
}

enum RowOutcome {
    Post(RawPost),
    UnrecognizedType,
    Malformed,
}

fn validate_row(fields: RowFields) -> RowOutcome {
    let Some(id) = fields.id.filter(|&id| id > 0) else {
        return RowOutcome::Malformed;
    };
    let Some(type_id) = fields.post_type_id else {
        return RowOutcome::Malformed;
    };
    let Some(body) = fields.body.filter(|b| !b.is_empty()) else {
        // Rows of foreign types are reported as unrecognized even when other
        // fields are missing; type is the first thing a reader checks.
        if type_id != 1 && type_id != 2 {
            return RowOutcome::UnrecognizedType;
        }
        return RowOutcome::Malformed;
    };
    match type_id {
        1 => {
            let Some(title) = fields.title.filter(|t| !t.is_empty()) else {
                return RowOutcome::Malformed;
            };
            RowOutcome::Post(RawPost {
                id,
                post_type: PostType::Question,
                parent_id: None,
                score: fields.score,
                title: Some(title),
                body,
                tags: fields.tags,
            })
        }
        2 => {
            let Some(parent_id) = fields.parent_id.filter(|&p| p > 0) else {
                return RowOutcome::Malformed;
            };
            RowOutcome::Post(RawPost {
                id,
                post_type: PostType::Answer,
                parent_id: Some(parent_id),
                score: fields.score,
                title: None,
                body,
                tags: fields.tags,
            })
        }
        _ => RowOutcome::UnrecognizedType,
    }
}

/// Splits a dump tags value: `<java><io>` angle form, `|java|io|` pipe form,
/// or plain whitespace-separated words.
fn parse_tags(value: &str) -> Vec<String> {
    let seps: &[char] = if value.contains('<') || value.contains('>') {
        &['<', '>']
    } else if value.contains('|') {
        &['|']
    } else {
        &[' ', '\t']
    };
    value
        .split(seps)
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Parses a dump into raw posts plus skip diagnostics.
///
/// Rows with unrecognized `PostTypeId` or missing/invalid required fields are
/// skipped and counted; duplicate post ids keep the first occurrence and
/// count the rest as malformed. A syntactically broken or truncated stream
/// is a hard error carrying the input offset.
pub fn parse_dump<R: BufRead>(input: R, format: DumpFormat) -> Result<(Vec<RawPost>, IngestDiagnostics)> {
    match format {
        DumpFormat::Xml => parse_xml(input),
        DumpFormat::Jsonl => parse_jsonl(input),
    }
}

fn record(post: RawPost, seen: &mut std::collections::HashSet<u64>, posts: &mut Vec<RawPost>, diag: &mut IngestDiagnostics) {
    if !seen.insert(post.id) {
        diag.skipped_malformed += 1;
        return;
    }
    match post.post_type {
        PostType::Question => diag.questions += 1,
        PostType::Answer => diag.answers += 1,
    }
    posts.push(post);
}

fn parse_xml<R: BufRead>(input: R) -> Result<(Vec<RawPost>, IngestDiagnostics)> {
    let mut reader = Reader::from_reader(input);
    let mut buf = Vec::new();
    let mut posts = Vec::new();
    let mut diag = IngestDiagnostics::default();
    let mut seen = std::collections::HashSet::new();

    loop {
        match reader.read_event_into(&mut buf) {
            Ok(Event::Empty(ref e)) | Ok(Event::Start(ref e)) => {
                if e.name().as_ref() != b"row" {
                    buf.clear();
                    continue;
                }
                let mut fields = RowFields::default();
                let mut attr_error = false;
                for attr in e.attributes() {
                    let Ok(attr) = attr else {
                        attr_error = true;
                        break;
                    };
                    let Ok(value) = attr.unescape_value() else {
                        attr_error = true;
                        break;
                    };
                    let value = value.into_owned();
                    match attr.key.as_ref() {
                        b"Id" => fields.id = value.parse().ok(),
                        b"PostTypeId" => fields.post_type_id = value.parse().ok(),
                        b"ParentId" => fields.parent_id = value.parse().ok(),
                        b"Score" => fields.score = value.parse().unwrap_or(0),
                        b"Title" => fields.title = Some(value),
                        b"Body" => fields.body = Some(value),
                        b"Tags" => fields.tags = parse_tags(&value),
                        _ => {}
                    }
                }
                if attr_error {
                    diag.skipped_malformed += 1;
                } else {
                    match validate_row(fields) {
                        RowOutcome::Post(p) => record(p, &mut seen, &mut posts, &mut diag),
                        RowOutcome::UnrecognizedType => diag.skipped_unrecognized_type += 1,
                        RowOutcome::Malformed => diag.skipped_malformed += 1,
                    }
                }
            }
            Ok(Event::Eof) => break,
            Ok(_) => {}
            Err(e) => {
                return Err(Error::artifact(format!(
                    "truncated or malformed XML at byte offset {}: {e}",
                    reader.buffer_position()
                )));
            }
        }
        buf.clear();
    }
    Ok((posts, diag))
}

/// JSON-lines mirror of the row format; field names are the XML attribute
/// names, lowercased.
#[derive(Deserialize)]
struct JsonRow {
    id: Option<u64>,
    posttypeid: Option<i64>,
    #[serde(default)]
    parentid: Option<u64>,
    #[serde(default)]
    score: i64,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    body: Option<String>,
    #[serde(default)]
    tags: Option<serde_json::Value>,
}

fn json_tags(value: Option<serde_json::Value>) -> Vec<String> {
    match value {
        Some(serde_json::Value::Array(items)) => items
            .into_iter()
            .filter_map(|v| v.as_str().map(str::to_string))
            .collect(),
        Some(serde_json::Value::String(s)) => parse_tags(&s),
        _ => Vec::new(),
    }
}

fn parse_jsonl<R: BufRead>(input: R) -> Result<(Vec<RawPost>, IngestDiagnostics)> {
    let mut posts = Vec::new();
    let mut diag = IngestDiagnostics::default();
    let mut seen = std::collections::HashSet::new();

    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| {
            Error::artifact(format!("read failure at line {}: {e}", lineno + 1))
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let Ok(row) = serde_json::from_str::<JsonRow>(&line) else {
            diag.skipped_malformed += 1;
            continue;
        };
        let fields = RowFields {
            id: row.id,
            post_type_id: row.posttypeid,
            parent_id: row.parentid,
            score: row.score,
            title: row.title,
            body: row.body,
            tags: json_tags(row.tags),
        };
        match validate_row(fields) {
            RowOutcome::Post(p) => record(p, &mut seen, &mut posts, &mut diag),
            RowOutcome::UnrecognizedType => diag.skipped_unrecognized_type += 1,
            RowOutcome::Malformed => diag.skipped_malformed += 1,
        }
    }
    Ok((posts, diag))
}

//! Solution composition: split answers into sentences, keep the ones whose
//! grammatical shape or content signals substance, and pair the survivors
//! with the answer's verbatim code blocks.

pub mod tagger;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::preprocess::{is_pure_number, preprocess, tokenize, StopwordConfig};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::ranker::ScoredCandidate;

pub use tagger::Tagger;

/// Words whose presence alone keeps a sentence.
const DEFAULT_IMPORTANT_WORDS: &str = include_str!("../../assets/important_words.txt");

/// Trailing abbreviations whose period must not end a sentence.
const ABBREVIATIONS: &[&str] = &["e.g.", "i.e.", "etc.", "vs.", "al.", "cf."];

/// Configuration for sentence filtering.
#[derive(Debug)]
pub struct ComposerConfig {
    /// Lowercase words that keep a sentence on sight.
    pub important_words: BTreeSet<String>,
    /// Stopword configuration for the shared-with-query condition.
    pub stopwords: StopwordConfig,
    pub tagger: Tagger,
}

impl Default for ComposerConfig {
    fn default() -> Self {
        ComposerConfig {
            important_words: parse_word_list(DEFAULT_IMPORTANT_WORDS),
            stopwords: StopwordConfig::default(),
            tagger: Tagger::default(),
        }
    }
}

impl ComposerConfig {
    /// Replaces the important-word list from a text file (one word per
    /// line, `#` comments allowed).
    pub fn with_important_words_text(mut self, text: &str) -> Result<Self> {
        let words = parse_word_list(text);
        if words.is_empty() {
            return Err(Error::validation("important-word list is empty"));
        }
        self.important_words = words;
        Ok(self)
    }
}

fn parse_word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

/// Why one sentence was kept or removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceJudgment {
    pub sentence: String,
    pub pos_tags: Vec<(String, String)>,
    pub matched_pattern1: bool,
    pub matched_pattern2: bool,
    pub matched_special: bool,
    pub kept: bool,
}

/// A recommended answer: verbatim code plus the explanation sentences that
/// survived filtering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub answer_id: u64,
    /// 1-based position in the composed output.
    pub rank: usize,
    pub code_blocks: Vec<String>,
    pub explanation: Vec<String>,
}

/// Splits prose into sentences at `.`/`!`/`?` runs followed by whitespace
/// or end of text, keeping the terminator. Periods of known abbreviations
/// do not split.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        if matches!(chars[i], '.' | '!' | '?') {
            // Consume the whole terminator run.
            let mut end = i + 1;
            while end < chars.len() && matches!(chars[end], '.' | '!' | '?') {
                end += 1;
            }
            let at_boundary = end >= chars.len() || chars[end].is_whitespace();
            if at_boundary && !ends_with_abbreviation(&chars[start..end]) {
                let sentence: String = chars[start..end].iter().collect();
                let trimmed = sentence.trim();
                if !trimmed.is_empty() {
                    sentences.push(trimmed.to_string());
                }
                start = end;
            }
            i = end;
        } else {
            i += 1;
        }
    }
    let tail: String = chars[start..].iter().collect();
    let trimmed = tail.trim();
    if !trimmed.is_empty() {
        sentences.push(trimmed.to_string());
    }
    sentences
}

fn ends_with_abbreviation(prefix: &[char]) -> bool {
    let text: String = prefix.iter().collect();
    let lower = text.to_lowercase();
    ABBREVIATIONS.iter().any(|abbr| {
        lower.ends_with(abbr) && {
            // The abbreviation must be a whole token: preceded by start of
            // text or whitespace, except "al." which follows "et ".
            let before = lower.len() - abbr.len();
            if *abbr == "al." {
                lower[..before].ends_with("et ")
            } else {
                before == 0 || lower[..before].ends_with(|c: char| c.is_whitespace() || c == '(')
            }
        }
    })
}

/// Tag-sequence approximations of the two grammatical keep-patterns:
/// pattern 1 wants a verb with a later noun (verb acting on an object);
/// pattern 2 wants a noun phrase not reduced to a personal pronoun, plus a
/// verb anywhere. A sentence without any verb matches neither.
pub fn matches_patterns(tags: &[(String, String)]) -> (bool, bool) {
    let is_vb = |t: &str| t.starts_with("VB");
    let is_nn = |t: &str| t.starts_with("NN");
    if !tags.iter().any(|(_, t)| is_vb(t)) {
        return (false, false);
    }
    let p1 = tags
        .iter()
        .enumerate()
        .any(|(i, (_, t))| is_vb(t) && tags[i + 1..].iter().any(|(_, t2)| is_nn(t2)));
    let p2 = tags
        .iter()
        .enumerate()
        .any(|(i, (_, t))| is_nn(t) && (i == 0 || !tags[i - 1].1.starts_with("PRP")));
    (p1, p2)
}

/// Content heuristics that keep a sentence regardless of its grammar: a
/// number, a camelCase token, an important word, or a preprocessed token
/// shared with the query.
pub fn special_conditions(
    raw_sentence: &str,
    query_tokens: &[String],
    cfg: &ComposerConfig,
) -> bool {
    let tokens = tokenize(raw_sentence);
    if tokens.iter().any(|t| is_pure_number(t)) {
        return true;
    }
    if tokens.iter().any(|t| has_camel_case(t)) {
        return true;
    }
    if tokens.iter().any(|t| cfg.important_words.contains(&t.to_lowercase())) {
        return true;
    }
    if !query_tokens.is_empty() {
        let processed = preprocess(raw_sentence, &cfg.stopwords);
        if processed.iter().any(|t| query_tokens.contains(t)) {
            return true;
        }
    }
    false
}

/// Does the token switch from lowercase to uppercase anywhere inside?
fn has_camel_case(token: &str) -> bool {
    let mut prev_lower = false;
    for c in token.chars() {
        if c.is_uppercase() && prev_lower {
            return true;
        }
        prev_lower = c.is_lowercase();
    }
    false
}

/// Judges one sentence against the patterns and special conditions.
pub fn judge_sentence(
    sentence: &str,
    query_tokens: &[String],
    cfg: &ComposerConfig,
) -> SentenceJudgment {
    let pos_tags = cfg.tagger.tag(sentence);
    let (p1, p2) = matches_patterns(&pos_tags);
    let special = special_conditions(sentence, query_tokens, cfg);
    SentenceJudgment {
        sentence: sentence.to_string(),
        pos_tags,
        matched_pattern1: p1,
        matched_pattern2: p2,
        matched_special: special,
        kept: p1 || p2 || special,
    }
}

/// Filters an answer's prose to its substantive sentences, preserving
/// original text and order.
pub fn filter_sentences(
    query_tokens: &[String],
    answer_prose: &str,
    cfg: &ComposerConfig,
) -> Vec<String> {
    split_sentences(answer_prose)
        .into_iter()
        .filter(|s| judge_sentence(s, query_tokens, cfg).kept)
        .collect()
}

/// Composition result: up to `k` solutions plus counts of what was skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComposeOutcome {
    pub solutions: Vec<Solution>,
    /// Ranked candidates skipped because no sentence survived filtering.
    pub skipped_no_explanation: usize,
    /// Ranked candidates skipped because they carry no code block.
    pub skipped_no_code: usize,
}

/// Walks the ranked candidates in order and emits a solution for each
/// answer that has both code and surviving explanation sentences, stopping
/// after `k` solutions.
pub fn compose_solutions(
    ranked: &[ScoredCandidate],
    corpus: &Corpus,
    query_tokens: &[String],
    k: usize,
    cfg: &ComposerConfig,
) -> Result<ComposeOutcome> {
    if k < 1 {
        return Err(Error::validation("solution count k must be >= 1"));
    }
    let mut outcome = ComposeOutcome::default();
    for candidate in ranked {
        if outcome.solutions.len() == k {
            break;
        }
        let doc = corpus.get(candidate.answer_id).ok_or_else(|| {
            Error::internal(format!(
                "ranked answer {} is not in the corpus",
                candidate.answer_id
            ))
        })?;
        if doc.code_blocks.is_empty() {
            outcome.skipped_no_code += 1;
            continue;
        }
        let explanation = filter_sentences(query_tokens, &doc.answer_prose(), cfg);
        if explanation.is_empty() {
            outcome.skipped_no_explanation += 1;
            continue;
        }
        outcome.solutions.push(Solution {
            answer_id: candidate.answer_id,
            rank: outcome.solutions.len() + 1,
            code_blocks: doc.code_blocks.clone(),
            explanation,
        });
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn test_split_sentences_basic() {
        let got = split_sentences("First one. Second one! Third? done");
        assert_eq!(got, vec!["First one.", "Second one!", "Third?", "done"]);
    }

    #[test]
    fn test_split_sentences_abbreviations() {
        let got = split_sentences("Use a loop, e.g. a for loop. Done.");
        assert_eq!(got, vec!["Use a loop, e.g. a for loop.", "Done."]);
        let got = split_sentences("Some tools, i.e. compilers, do this. More text.");
        assert_eq!(got.len(), 2);
        let got = split_sentences("See Smith et al. for details.");
        assert_eq!(got, vec!["See Smith et al. for details."]);
    }

    #[test]
    fn test_split_sentences_period_inside_token_kept() {
        let got = split_sentences("Call f.toURI() first. Then stop.");
        assert_eq!(got, vec!["Call f.toURI() first.", "Then stop."]);
        let got = split_sentences("Version 1.5 is fine.");
        assert_eq!(got, vec!["Version 1.5 is fine."]);
    }

    #[test]
    fn test_split_sentences_ellipsis_one_boundary() {
        let got = split_sentences("Wait... then go.");
        assert_eq!(got, vec!["Wait...", "then go."]);
    }

    #[test]
    fn test_patterns_basic() {
        let cfg = ComposerConfig::default();
        let (p1, p2) = matches_patterns(&cfg.tagger.tag("use the builder"));
        assert!(p1 && p2);
        let (p1, p2) = matches_patterns(&cfg.tagger.tag("it works"));
        assert!(!p1 && !p2, "no noun at all");
        let (p1, p2) = matches_patterns(&cfg.tagger.tag("the file exists"));
        assert!(!p1, "verb after the noun");
        assert!(p2, "noun not preceded by a pronoun, verb present");
    }

    #[test]
    fn test_patterns_require_a_verb() {
        let cfg = ComposerConfig::default();
        let (p1, p2) = matches_patterns(&cfg.tagger.tag("nice approach"));
        assert!(!p1 && !p2);
    }

    #[test]
    fn test_special_conditions() {
        let cfg = ComposerConfig::default();
        let q = toks(&["convert", "file"]);
        assert!(special_conditions("Set the port to 8080", &q, &cfg), "number");
        assert!(special_conditions("Call setValue first", &q, &cfg), "camelCase");
        assert!(special_conditions("just insert it there", &q, &cfg), "important word");
        assert!(special_conditions("the file is fine", &q, &cfg), "shared query token");
        assert!(!special_conditions("That helps", &q, &cfg), "nothing fires");
    }

    #[test]
    fn test_boilerplate_sentences_removed() {
        let cfg = ComposerConfig::default();
        let q = toks(&["convert", "file", "path", "url"]);
        for s in [
            "Try this:",
            "You could do it like this:",
            "It will work for sure",
            "It seems the easiest to me",
            "Yes, like doing this",
        ] {
            let j = judge_sentence(s, &q, &cfg);
            assert!(!j.kept, "boilerplate kept: {s} ({:?})", j.pos_tags);
        }
    }

    #[test]
    fn test_substantive_sentences_kept() {
        let cfg = ComposerConfig::default();
        let q = toks(&["run", "exe", "file"]);
        for s in [
            "Use the Runtime class to execute the file",
            "You can call toURI first",
            "Set the port to 8080",
        ] {
            assert!(judge_sentence(s, &q, &cfg).kept, "substance removed: {s}");
        }
    }

    #[test]
    fn test_shared_query_token_always_keeps() {
        let cfg = ComposerConfig::default();
        // Grammar-free fragment; only the shared token can keep it.
        let j = judge_sentence("file", &toks(&["file"]), &cfg);
        assert!(j.kept && j.matched_special);
    }

    #[test]
    fn test_filter_preserves_order_and_text() {
        let cfg = ComposerConfig::default();
        let prose = "Use the Stream API. It will work for sure. It returns a sorted list.";
        let kept = filter_sentences(&toks(&["sort"]), prose, &cfg);
        assert_eq!(kept, vec!["Use the Stream API.", "It returns a sorted list."]);
    }

    #[test]
    fn test_important_words_config_parse() {
        let cfg = ComposerConfig::default()
            .with_important_words_text("# comment\nfoo\nBAR\n\n")
            .unwrap();
        assert!(cfg.important_words.contains("foo"));
        assert!(cfg.important_words.contains("bar"));
        assert!(ComposerConfig::default().with_important_words_text("# only\n").is_err());
    }

    #[test]
    fn test_default_important_words_minimum() {
        let cfg = ComposerConfig::default();
        for w in ["insert", "replace", "update"] {
            assert!(cfg.important_words.contains(w), "missing {w}");
        }
    }

    fn doc(answer_id: u64, body_html: &str) -> crate::corpus::ThreadDoc {
        let scfg = StopwordConfig::default();
        let (prose, code) = crate::corpus::split_text_code(body_html);
        crate::corpus::ThreadDoc {
            answer_id,
            question_id: answer_id + 10_000,
            answer_score: 1,
            raw_title: String::new(),
            raw_question_body: String::new(),
            raw_answer_body: body_html.to_string(),
            code_blocks: code,
            proc_title: Vec::new(),
            proc_body: preprocess(&prose, &scfg),
            proc_code_tokens: Vec::new(),
        }
    }

    fn scored(answer_id: u64) -> ScoredCandidate {
        ScoredCandidate {
            answer_id,
            raw_sem: 0.0,
            raw_api: 0.0,
            raw_tfidf: 0.0,
            raw_method: 0.0,
            norm_sem: 0.0,
            norm_api: 0.0,
            norm_tfidf: 0.0,
            norm_method: 0.0,
            factors_score: 0.0,
        }
    }

    #[test]
    fn test_compose_skips_boilerplate_only_answers() {
        let docs = vec![
            doc(1, "Try this: <pre><code>int a;</code></pre>"),
            doc(2, "Use the Runtime class. <pre><code>Runtime.getRuntime();</code></pre>"),
        ];
        let corpus = Corpus::new(docs).unwrap();
        let cfg = ComposerConfig::default();
        let outcome =
            compose_solutions(&[scored(1), scored(2)], &corpus, &toks(&["run"]), 1, &cfg).unwrap();
        assert_eq!(outcome.solutions.len(), 1);
        assert_eq!(outcome.solutions[0].answer_id, 2, "first candidate had no kept sentences");
        assert_eq!(outcome.solutions[0].rank, 1);
        assert_eq!(outcome.skipped_no_explanation, 1);
    }

    #[test]
    fn test_compose_stops_at_k() {
        let docs = vec![
            doc(1, "Use the Stream class. <pre><code>a.stream();</code></pre>"),
            doc(2, "Use the Runtime class. <pre><code>Runtime.getRuntime();</code></pre>"),
            doc(3, "Use the File class. <pre><code>new File(s);</code></pre>"),
        ];
        let corpus = Corpus::new(docs).unwrap();
        let cfg = ComposerConfig::default();
        let ranked = vec![scored(1), scored(2), scored(3)];
        let outcome = compose_solutions(&ranked, &corpus, &[], 2, &cfg).unwrap();
        assert_eq!(outcome.solutions.len(), 2);
        assert_eq!(outcome.solutions[0].answer_id, 1);
        assert_eq!(outcome.solutions[1].answer_id, 2);
        assert_eq!(outcome.solutions[1].rank, 2);
    }

    #[test]
    fn test_compose_solution_invariants() {
        let docs = vec![doc(
            7,
            "Convert with toURL. <pre><code>URL u = f.toURI().toURL();</code></pre>",
        )];
        let corpus = Corpus::new(docs).unwrap();
        let cfg = ComposerConfig::default();
        let outcome =
            compose_solutions(&[scored(7)], &corpus, &toks(&["convert"]), 3, &cfg).unwrap();
        assert_eq!(outcome.solutions.len(), 1);
        let s = &outcome.solutions[0];
        assert!(!s.code_blocks.is_empty());
        assert!(!s.explanation.is_empty());
    }

    #[test]
    fn test_compose_rejects_zero_k() {
        let corpus = Corpus::new(vec![doc(1, "x <pre><code>a;</code></pre>")]).unwrap();
        assert!(compose_solutions(&[], &corpus, &[], 0, &ComposerConfig::default()).is_err());
    }

    #[test]
    fn test_compose_empty_when_nothing_composable() {
        let docs = vec![doc(1, "Try this: <pre><code>int a;</code></pre>")];
        let corpus = Corpus::new(docs).unwrap();
        let outcome =
            compose_solutions(&[scored(1)], &corpus, &[], 3, &ComposerConfig::default()).unwrap();
        assert!(outcome.solutions.is_empty());
        assert_eq!(outcome.skipped_no_explanation, 1);
    }
}

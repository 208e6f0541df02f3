//! Text normalization shared by indexing, querying, and sentence filtering.

use std::collections::HashSet;

/// Shipped stopword list (standard English plus domain noise terms).
const DEFAULT_STOPWORDS: &str = include_str!("../../assets/stopwords.txt");

/// Controls token filtering during preprocessing.
#[derive(Debug, Clone)]
pub struct StopwordConfig {
    stopwords: HashSet<String>,
    /// Tokens shorter than this many characters are dropped.
    pub min_token_len: usize,
}

impl Default for StopwordConfig {
    fn default() -> Self {
        StopwordConfig {
            stopwords: parse_stopword_list(DEFAULT_STOPWORDS),
            min_token_len: 2,
        }
    }
}

impl StopwordConfig {
    /// Builds a config from an explicit word list (replaces the shipped list).
    pub fn with_stopwords<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        StopwordConfig {
            stopwords: words.into_iter().map(|w| w.into().to_lowercase()).collect(),
            min_token_len: 2,
        }
    }

    /// Parses a stopword file: one word per line, `#` comments and blanks ignored.
    pub fn from_list_text(text: &str) -> Self {
        StopwordConfig {
            stopwords: parse_stopword_list(text),
            min_token_len: 2,
        }
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    pub fn len(&self) -> usize {
        self.stopwords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stopwords.is_empty()
    }
}

fn parse_stopword_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

/// Splits text into raw word tokens: maximal runs of alphanumeric characters.
/// Whitespace and punctuation act as separators; case is preserved.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            current.push(ch);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// True for tokens that are just a number: optional sign, digits, optional
/// decimal part. (After alphanumeric tokenization the sign/decimal forms only
/// appear when callers pass pre-split tokens.)
pub fn is_pure_number(token: &str) -> bool {
    let rest = token.strip_prefix(['+', '-']).unwrap_or(token);
    if rest.is_empty() {
        return false;
    }
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (rest, None),
    };
    if int_part.is_empty() || !int_part.chars().all(|c| c.is_ascii_digit()) {
        return false;
    }
    match frac_part {
        Some(f) => !f.is_empty() && f.chars().all(|c| c.is_ascii_digit()),
        None => true,
    }
}

/// Normalizes free text into query/index tokens: lowercase, split on
/// whitespace and punctuation, then drop stopwords, tokens shorter than
/// `cfg.min_token_len`, and pure numbers. Token order is preserved and the
/// result is idempotent under re-preprocessing. No stemming and no camelCase
/// splitting are applied, so `setValue` survives as the single token
/// `setvalue`.
pub fn preprocess(text: &str, cfg: &StopwordConfig) -> Vec<String> {
    tokenize(&text.to_lowercase())
        .into_iter()
        .filter(|t| {
            t.chars().count() >= cfg.min_token_len && !is_pure_number(t) && !cfg.is_stopword(t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_preprocess_strips_stopwords_punctuation_and_case() {
        let cfg = StopwordConfig::default();
        assert_eq!(preprocess("Convert a File to a URL!", &cfg), vec!["convert", "file", "url"]);
    }

    #[test]
    fn test_preprocess_drops_numbers_and_short_tokens() {
        let cfg = StopwordConfig::default();
        assert_eq!(preprocess("run .exe from 123 file", &cfg), vec!["run", "exe", "file"]);
        assert_eq!(preprocess("x y", &cfg), Vec::<String>::new());
    }

    #[test]
    fn test_preprocess_keeps_camelcase_joined() {
        let cfg = StopwordConfig::default();
        assert_eq!(preprocess("call setValue now", &cfg), vec!["call", "setvalue"]);
    }

    #[test]
    fn test_preprocess_empty_input() {
        let cfg = StopwordConfig::default();
        assert_eq!(preprocess("", &cfg), Vec::<String>::new());
    }

    #[test]
    fn test_shipped_list_contains_domain_terms() {
        let cfg = StopwordConfig::default();
        assert!(cfg.is_stopword("code"));
        assert!(cfg.is_stopword("java"));
        assert!(cfg.is_stopword("the"));
        assert!(cfg.is_stopword("from"));
    }

    #[test]
    fn test_is_pure_number_variants() {
        assert!(is_pure_number("123"));
        assert!(is_pure_number("-42"));
        assert!(is_pure_number("+7"));
        assert!(is_pure_number("3.14"));
        assert!(!is_pure_number("1.2.3"));
        assert!(!is_pure_number("v2"));
        assert!(!is_pure_number("2x"));
        assert!(!is_pure_number(""));
        assert!(!is_pure_number("-"));
        assert!(!is_pure_number("3."));
    }

    #[test]
    fn test_tokenize_splits_on_punctuation() {
        assert_eq!(tokenize("f.toURI().toURL()"), vec!["f", "toURI", "toURL"]);
        assert_eq!(tokenize("my_var + 3"), vec!["my", "var", "3"]);
    }

    #[test]
    fn test_preprocess_is_idempotent() {
        let cfg = StopwordConfig::default();
        let once = preprocess("The QUICK brown-fox, jumps over 12 lazy DOGS!", &cfg);
        let again = preprocess(&once.join(" "), &cfg);
        assert_eq!(once, again);
    }

    #[test]
    fn test_custom_stopword_list_replaces_default() {
        let cfg = StopwordConfig::with_stopwords(["foo"]);
        assert!(cfg.is_stopword("foo"));
        assert!(!cfg.is_stopword("the"));
        assert_eq!(preprocess("foo the bar", &cfg), vec!["the", "bar"]);
    }
}

//! Word-vector store and the asymmetric semantic relevance scores built on
//! it.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::indices::IdfMap;

/// Word vectors of a fixed dimension, loaded from the text format
/// (optional `count dim` header, then `word v1 .. vdim` per line), plus an
/// optional character-n-gram table for out-of-vocabulary lookups.
#[derive(Debug, Clone)]
pub struct EmbeddingStore {
    dim: usize,
    word_vec: HashMap<String, Vec<f64>>,
    subword_vec: Option<HashMap<String, Vec<f64>>>,
}

/// Non-fatal observations from a vector-file load.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct VectorLoadDiagnostics {
    /// Words that appeared more than once (last occurrence won).
    pub duplicate_words: usize,
}

/// Character n-gram lengths used for subword lookups.
const SUBWORD_NGRAM_RANGE: std::ops::RangeInclusive<usize> = 2..=5;

fn parse_vector_line(line: &str, lineno: usize, dim: usize) -> Result<(String, Vec<f64>)> {
    let mut parts = line.split_whitespace();
    let word = parts
        .next()
        .ok_or_else(|| Error::artifact(format!("vector file line {lineno}: empty line")))?
        .to_string();
    let values: Vec<f64> = parts
        .map(|p| {
            p.parse::<f64>().map_err(|_| {
                Error::artifact(format!("vector file line {lineno}: bad float '{p}'"))
            })
        })
        .collect::<Result<_>>()?;
    if values.len() != dim {
        return Err(Error::artifact(format!(
            "vector file line {lineno}: dimension mismatch, expected {dim} floats, found {}",
            values.len()
        )));
    }
    Ok((word, values))
}

fn load_table<R: BufRead>(input: R) -> Result<(HashMap<String, Vec<f64>>, usize, VectorLoadDiagnostics)> {
    let mut diagnostics = VectorLoadDiagnostics::default();
    let mut table = HashMap::new();
    let mut dim: Option<usize> = None;
    let mut declared_count: Option<usize> = None;
    let mut data_lines = 0usize;

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::artifact(format!("vector file line {lineno}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        if dim.is_none() && data_lines == 0 {
            // A first line of exactly two integers is the "count dim" header.
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() == 2 {
                if let (Ok(count), Ok(d)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                    if d == 0 {
                        return Err(Error::artifact(format!(
                            "vector file line {lineno}: header declares dimension 0"
                        )));
                    }
                    declared_count = Some(count);
                    dim = Some(d);
                    continue;
                }
            }
        }
        let dim = match dim {
            Some(d) => d,
            None => {
                // Headerless file: the first data line fixes the dimension.
                let d = line.split_whitespace().count().saturating_sub(1);
                if d == 0 {
                    return Err(Error::artifact(format!(
                        "vector file line {lineno}: no vector components on first line"
                    )));
                }
                dim = Some(d);
                d
            }
        };
        let (word, values) = parse_vector_line(&line, lineno, dim)?;
        data_lines += 1;
        if table.insert(word, values).is_some() {
            diagnostics.duplicate_words += 1;
        }
    }

    let dim = dim.ok_or_else(|| Error::artifact("vector file is empty"))?;
    if let Some(count) = declared_count {
        if data_lines != count {
            return Err(Error::artifact(format!(
                "vector file header declares {count} words but {data_lines} data lines found"
            )));
        }
    }
    Ok((table, dim, diagnostics))
}

impl EmbeddingStore {
    /// Loads word vectors from a reader.
    pub fn load<R: BufRead>(input: R) -> Result<(Self, VectorLoadDiagnostics)> {
        let (word_vec, dim, diagnostics) = load_table(input)?;
        Ok((EmbeddingStore { dim, word_vec, subword_vec: None }, diagnostics))
    }

    /// Loads word vectors from a file path.
    pub fn load_from_path(path: &Path) -> Result<(Self, VectorLoadDiagnostics)> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::load(std::io::BufReader::new(file))
    }

    /// Attaches a subword (character n-gram) table; its dimension must match.
    pub fn with_subwords<R: BufRead>(mut self, input: R) -> Result<(Self, VectorLoadDiagnostics)> {
        let (table, dim, diagnostics) = load_table(input)?;
        if dim != self.dim {
            return Err(Error::artifact(format!(
                "subword vectors have dimension {dim}, word vectors have {}",
                self.dim
            )));
        }
        self.subword_vec = Some(table);
        Ok((self, diagnostics))
    }

    /// Builds a store directly from entries (fixtures and tests).
    pub fn from_entries<I, S>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut word_vec = HashMap::new();
        for (word, vec) in entries {
            if vec.len() != dim {
                return Err(Error::validation(format!(
                    "vector for entry has {} components, expected {dim}",
                    vec.len()
                )));
            }
            word_vec.insert(word.into(), vec);
        }
        Ok(EmbeddingStore { dim, word_vec, subword_vec: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.word_vec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word_vec.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.word_vec.contains_key(word)
    }

    /// Vector for a word. In-vocabulary words return their stored vector;
    /// out-of-vocabulary words average their character n-gram vectors when a
    /// subword table is attached (and any n-gram is known), otherwise `None`.
    pub fn lookup(&self, word: &str) -> Option<Vec<f64>> {
        if let Some(v) = self.word_vec.get(word) {
            return Some(v.clone());
        }
        let subwords = self.subword_vec.as_ref()?;
        let mut sum = vec![0.0; self.dim];
        let mut found = 0usize;
        let chars: Vec<char> = word.chars().collect();
        for n in SUBWORD_NGRAM_RANGE {
            if chars.len() < n {
                break;
            }
            for window in chars.windows(n) {
                let gram: String = window.iter().collect();
                if let Some(v) = subwords.get(&gram) {
                    for (acc, x) in sum.iter_mut().zip(v) {
                        *acc += x;
                    }
                    found += 1;
                }
            }
        }
        if found == 0 {
            return None;
        }
        for acc in &mut sum {
            *acc /= found as f64;
        }
        Some(sum)
    }
}

/// Cosine similarity, clamped to its mathematical range [-1, 1]; either
/// vector being all zeros yields 0.
pub fn cosine(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len(), "cosine requires equal dimensions");
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut nv = 0.0;
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    (dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0)
}

/// A deduplicated, sorted bag of words; the fixed iteration order keeps
/// floating-point accumulations reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagOfWords {
    words: Vec<String>,
}

impl BagOfWords {
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut words: Vec<String> = tokens.into_iter().map(Into::into).collect();
        words.sort_unstable();
        words.dedup();
        BagOfWords { words }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.binary_search_by(|w| w.as_str().cmp(word)).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }
}

/// Similarity of one word against a whole bag: the maximum cosine between
/// the word's vector and any embeddable word of `q`. A word that is itself
/// in `q` scores exactly 1 (its own cosine). Returns `None` when `word` has
/// no vector; returns 0 when `q` has no embeddable words.
fn word_to_bag_sim(word: &str, word_vec: &[f64], q: &BagOfWords, store: &EmbeddingStore) -> f64 {
    if q.contains(word) {
        return 1.0;
    }
    let mut best = f64::NEG_INFINITY;
    for qw in q.words() {
        if let Some(qv) = store.lookup(qw) {
            let c = cosine(word_vec, &qv);
            if c > best {
                best = c;
            }
        }
    }
    if best == f64::NEG_INFINITY {
        0.0
    } else {
        best
    }
}

/// Asymmetric semantic relevance of bag `a` toward bag `q`:
/// the IDF-weighted mean of each word's best cosine against `q`. Words
/// without vectors are excluded from both the numerator and denominator;
/// if nothing remains (or all IDF mass is zero) the score is 0.
pub fn asym_relevance(a: &BagOfWords, q: &BagOfWords, store: &EmbeddingStore, idf: &IdfMap) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for word in a.words() {
        let Some(vec) = store.lookup(word) else { continue };
        let sim = word_to_bag_sim(word, &vec, q, store);
        let w = idf.lookup(word);
        num += sim * w;
        den += w;
    }
    if den == 0.0 {
        return 0.0;
    }
    num / den
}

/// Symmetric semantic score: the harmonic mean of the two asymmetric
/// relevances. Defined as 0 when the directions cancel (both zero, or exact
/// negatives).
pub fn sem_score(a: &BagOfWords, q: &BagOfWords, store: &EmbeddingStore, idf: &IdfMap) -> f64 {
    let aq = asym_relevance(a, q, store, idf);
    let qa = asym_relevance(q, a, store, idf);
    harmonic(aq, qa)
}

/// Harmonic-mean combiner used by the semantic factor.
pub fn harmonic(x: f64, y: f64) -> f64 {
    if x + y == 0.0 {
        return 0.0;
    }
    2.0 * x * y / (x + y)
}

/// Repeated-evaluation form of [`sem_score`] for a fixed query: each
/// candidate word's cosines against the query's embeddable words are
/// computed once and memoized, so scoring thousands of candidates costs one
/// cosine per distinct word. Produces bit-identical results to calling
/// [`sem_score`] directly.
pub struct SemScorer<'a> {
    store: &'a EmbeddingStore,
    idf: &'a IdfMap,
    query: BagOfWords,
    /// Embeddable query words in bag order, with their vectors and IDF.
    q_words: Vec<String>,
    q_vecs: Vec<Vec<f64>>,
    q_idf: Vec<f64>,
    q_den: f64,
    cache: std::cell::RefCell<HashMap<String, Option<std::rc::Rc<Vec<f64>>>>>,
}

impl<'a> SemScorer<'a> {
    pub fn new<I, S>(query_tokens: I, store: &'a EmbeddingStore, idf: &'a IdfMap) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let query = BagOfWords::from_tokens(query_tokens);
        let mut q_words = Vec::new();
        let mut q_vecs = Vec::new();
        let mut q_idf = Vec::new();
        let mut q_den = 0.0;
        for word in query.words() {
            if let Some(vec) = store.lookup(word) {
                let w = idf.lookup(word);
                q_words.push(word.clone());
                q_vecs.push(vec);
                q_idf.push(w);
                q_den += w;
            }
        }
        SemScorer {
            store,
            idf,
            query,
            q_words,
            q_vecs,
            q_idf,
            q_den,
            cache: std::cell::RefCell::new(HashMap::new()),
        }
    }

    pub fn query(&self) -> &BagOfWords {
        &self.query
    }

    /// Cosine row of `word` against the embeddable query words, or `None`
    /// when the word has no vector.
    fn row(&self, word: &str) -> Option<std::rc::Rc<Vec<f64>>> {
        if let Some(entry) = self.cache.borrow().get(word) {
            return entry.clone();
        }
        let entry = self.store.lookup(word).map(|vec| {
            std::rc::Rc::new(
                self.q_vecs.iter().map(|qv| cosine(&vec, qv)).collect::<Vec<f64>>(),
            )
        });
        self.cache.borrow_mut().insert(word.to_string(), entry.clone());
        entry
    }

    /// Semantic score of a candidate bag against the fixed query.
    pub fn score(&self, candidate: &BagOfWords) -> f64 {
        // Candidate→query direction, while tracking per-query-word maxima
        // for the reverse direction in the same pass.
        let mut c_num = 0.0;
        let mut c_den = 0.0;
        let mut rev_best = vec![f64::NEG_INFINITY; self.q_words.len()];
        for word in candidate.words() {
            let Some(row) = self.row(word) else { continue };
            let sim = if self.query.contains(word) {
                1.0
            } else {
                let mut best = f64::NEG_INFINITY;
                for &c in row.iter() {
                    if c > best {
                        best = c;
                    }
                }
                if best == f64::NEG_INFINITY {
                    0.0
                } else {
                    best
                }
            };
            let w = self.idf.lookup(word);
            c_num += sim * w;
            c_den += w;
            for (slot, &c) in rev_best.iter_mut().zip(row.iter()) {
                if c > *slot {
                    *slot = c;
                }
            }
        }
        let cq = if c_den == 0.0 { 0.0 } else { c_num / c_den };
        let mut q_num = 0.0;
        for (i, qw) in self.q_words.iter().enumerate() {
            let sim = if candidate.contains(qw) {
                1.0
            } else if rev_best[i] == f64::NEG_INFINITY {
                0.0
            } else {
                rev_best[i]
            };
            q_num += sim * self.q_idf[i];
        }
        let qc = if self.q_den == 0.0 { 0.0 } else { q_num / self.q_den };
        harmonic(cq, qc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn idf_flat(n: usize) -> IdfMap {
        IdfMap::from_entries(n, &[])
    }

    #[test]
    fn test_load_with_header() {
        let text = "2 3\nalpha 0.1 0.2 0.3\nbeta 1 0 -1\n";
        let (store, diag) = EmbeddingStore::load(Cursor::new(text)).unwrap();
        assert_eq!(store.dim(), 3);
        assert_eq!(store.len(), 2);
        assert_eq!(diag.duplicate_words, 0);
        assert_eq!(store.lookup("beta").unwrap(), vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn test_load_without_header() {
        let text = "alpha 0.5 0.5\nbeta -0.25 1.5\n";
        let (store, _) = EmbeddingStore::load(Cursor::new(text)).unwrap();
        assert_eq!(store.dim(), 2);
        assert_eq!(store.len(), 2);
    }

    #[test]
    fn test_dimension_mismatch_reports_line() {
        let text = "2 3\nalpha 0.1 0.2 0.3\nbeta 1 0\n";
        let err = EmbeddingStore::load(Cursor::new(text)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("dimension mismatch"), "{msg}");
    }

    #[test]
    fn test_duplicate_word_last_wins_with_diagnostic() {
        let text = "dup 1 0\ndup 0 1\n";
        let (store, diag) = EmbeddingStore::load(Cursor::new(text)).unwrap();
        assert_eq!(diag.duplicate_words, 1);
        assert_eq!(store.lookup("dup").unwrap(), vec![0.0, 1.0]);
        assert_eq!(store.len(), 1);
    }

    #[test]
    fn test_header_count_mismatch_rejected() {
        let text = "3 2\na 1 0\nb 0 1\n";
        let err = EmbeddingStore::load(Cursor::new(text)).unwrap_err();
        assert!(err.to_string().contains("declares 3"), "{err}");
    }

    #[test]
    fn test_empty_file_rejected() {
        assert!(EmbeddingStore::load(Cursor::new("")).is_err());
    }

    #[test]
    fn test_bad_float_reports_line() {
        let text = "a 1 0\nb x 1\n";
        let err = EmbeddingStore::load(Cursor::new(text)).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn test_cosine_basics() {
        assert!((cosine(&[1.0, 2.0], &[2.0, 4.0]) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 3.0]), 0.0);
        assert!((cosine(&[1.0, 0.0], &[-2.0, 0.0]) + 1.0).abs() < 1e-12, "negatives preserved");
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 1.0]), 0.0, "zero vector scores 0");
    }

    #[test]
    fn test_cosine_clamped_to_range() {
        let v = vec![0.1234567, 0.7654321, -0.5555555];
        let c = cosine(&v, &v);
        assert!((-1.0..=1.0).contains(&c));
    }

    #[test]
    fn test_subword_fallback_mean() {
        let store = EmbeddingStore::from_entries(2, vec![("known", vec![1.0, 0.0])]).unwrap();
        let sub = "ab 1 1\nbc 3 1\n";
        let (store, _) = store.with_subwords(Cursor::new(sub)).unwrap();
        // "abc" has 2-grams ab, bc and the 3-gram abc (unknown):
        // mean of (1,1) and (3,1) = (2,1)
        assert_eq!(store.lookup("abc").unwrap(), vec![2.0, 1.0]);
        assert_eq!(store.lookup("zzz"), None, "no known n-grams");
        assert_eq!(store.lookup("known").unwrap(), vec![1.0, 0.0], "stored vector wins");
    }

    #[test]
    fn test_no_subwords_oov_is_none() {
        let store = EmbeddingStore::from_entries(2, vec![("a", vec![1.0, 0.0])]).unwrap();
        assert_eq!(store.lookup("missing"), None);
    }

    #[test]
    fn test_asym_relevance_weighted_mean() {
        // cos(a, q) = 0.2 and cos(b, q) = 0.8 by construction; idf a = 1, b = 3:
        // (0.2 * 1 + 0.8 * 3) / (1 + 3) = 0.65
        let t = (1.0f64 - 0.04).sqrt();
        let u = (1.0f64 - 0.64).sqrt();
        let store = EmbeddingStore::from_entries(
            2,
            vec![
                ("q", vec![1.0, 0.0]),
                ("a", vec![0.2, t]),
                ("b", vec![0.8, u]),
            ],
        )
        .unwrap();
        let idf = IdfMap::from_entries(100, &[("a", 1.0), ("b", 3.0)]);
        let a = BagOfWords::from_tokens(["a", "b"]);
        let q = BagOfWords::from_tokens(["q"]);
        let got = asym_relevance(&a, &q, &store, &idf);
        assert!((got - 0.65).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn test_asym_excludes_unembeddable_words() {
        let store = EmbeddingStore::from_entries(
            2,
            vec![("q", vec![1.0, 0.0]), ("a", vec![1.0, 0.0])],
        )
        .unwrap();
        let idf = IdfMap::from_entries(100, &[("a", 2.0), ("ghost", 50.0)]);
        let with_ghost = BagOfWords::from_tokens(["a", "ghost"]);
        let without = BagOfWords::from_tokens(["a"]);
        let q = BagOfWords::from_tokens(["q"]);
        assert_eq!(
            asym_relevance(&with_ghost, &q, &store, &idf),
            asym_relevance(&without, &q, &store, &idf),
            "words without vectors must not affect either sum"
        );
    }

    #[test]
    fn test_asym_fully_unembeddable_is_zero() {
        let store = EmbeddingStore::from_entries(2, vec![("q", vec![1.0, 0.0])]).unwrap();
        let idf = idf_flat(10);
        let a = BagOfWords::from_tokens(["ghost", "phantom"]);
        let q = BagOfWords::from_tokens(["q"]);
        assert_eq!(asym_relevance(&a, &q, &store, &idf), 0.0);
    }

    #[test]
    fn test_sem_score_identity_is_exactly_one() {
        let store = EmbeddingStore::from_entries(
            3,
            vec![
                ("x", vec![0.3, 0.4, 0.5]),
                ("y", vec![-0.2, 0.9, 0.1]),
                ("z", vec![0.7, 0.7, 0.7]),
            ],
        )
        .unwrap();
        let idf = IdfMap::from_entries(50, &[("x", 1.3), ("y", 0.7), ("z", 2.2)]);
        let a = BagOfWords::from_tokens(["x", "y", "z"]);
        assert_eq!(sem_score(&a, &a, &store, &idf), 1.0);
    }

    #[test]
    fn test_sem_score_symmetric_bitwise() {
        let store = EmbeddingStore::from_entries(
            2,
            vec![
                ("a", vec![1.0, 0.1]),
                ("b", vec![0.3, 0.8]),
                ("c", vec![-0.5, 0.2]),
                ("d", vec![0.9, -0.4]),
            ],
        )
        .unwrap();
        let idf = IdfMap::from_entries(80, &[("a", 1.1), ("b", 0.4), ("c", 2.0), ("d", 0.9)]);
        let x = BagOfWords::from_tokens(["a", "c"]);
        let y = BagOfWords::from_tokens(["b", "d"]);
        let xy = sem_score(&x, &y, &store, &idf);
        let yx = sem_score(&y, &x, &store, &idf);
        assert_eq!(xy.to_bits(), yx.to_bits(), "harmonic fusion must be bit-exact symmetric");
    }

    #[test]
    fn test_sem_score_zero_when_both_directions_zero() {
        let store = EmbeddingStore::from_entries(2, vec![("a", vec![1.0, 0.0])]).unwrap();
        let idf = idf_flat(10);
        let a = BagOfWords::from_tokens(["ghost"]);
        let q = BagOfWords::from_tokens(["phantom"]);
        assert_eq!(sem_score(&a, &q, &store, &idf), 0.0);
    }

    #[test]
    fn test_harmonic_cancellation_guard() {
        assert_eq!(harmonic(0.5, -0.5), 0.0);
        assert_eq!(harmonic(0.0, 0.0), 0.0);
        assert!((harmonic(0.5, 1.0) - (2.0 * 0.5 / 1.5)).abs() < 1e-15);
    }

    #[test]
    fn test_sem_scorer_matches_sem_score_bitwise() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        let mut rng = StdRng::seed_from_u64(7);
        let vocab: Vec<String> = (0..40).map(|i| format!("w{i}")).collect();
        let entries: Vec<(String, Vec<f64>)> = vocab
            .iter()
            .map(|w| (w.clone(), (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect()))
            .collect();
        // Leave a few words out of the store to exercise the OOV paths.
        let store = EmbeddingStore::from_entries(8, entries[..35].to_vec()).unwrap();
        let idf_entries: Vec<(String, f64)> =
            vocab.iter().map(|w| (w.clone(), rng.gen_range(0.0..3.0))).collect();
        let idf = IdfMap::from_entries(
            1000,
            &idf_entries.iter().map(|(w, v)| (w.as_str(), *v)).collect::<Vec<_>>(),
        );

        for _ in 0..200 {
            let pick = |rng: &mut StdRng| -> Vec<String> {
                let len = rng.gen_range(1..10);
                (0..len).map(|_| vocab[rng.gen_range(0..vocab.len())].clone()).collect()
            };
            let q_tokens = pick(&mut rng);
            let a_tokens = pick(&mut rng);
            let scorer = SemScorer::new(q_tokens.clone(), &store, &idf);
            let q = BagOfWords::from_tokens(q_tokens);
            let a = BagOfWords::from_tokens(a_tokens);
            let plain = sem_score(&a, &q, &store, &idf);
            let cached = scorer.score(&a);
            assert_eq!(plain.to_bits(), cached.to_bits(), "plain {plain} cached {cached}");
        }
    }

    #[test]
    fn test_bag_of_words_sorted_dedup() {
        let bag = BagOfWords::from_tokens(["b", "a", "b", "c"]);
        assert_eq!(bag.words(), &["a", "b", "c"]);
        assert!(bag.contains("b"));
        assert!(!bag.contains("zz"));
        assert_eq!(bag.len(), 3);
    }
}

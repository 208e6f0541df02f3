//! Rule-lexicon part-of-speech tagger: closed-class word lists, a verb
//! lexicon, suffix rules, and two context repairs. Tags follow the Penn
//! Treebank names that the sentence patterns consume (`VB*`, `NN*`, `PRP*`).

use std::collections::{HashMap, HashSet};

use crate::corpus::preprocess::{is_pure_number, tokenize};

/// Closed-class words and irregular forms with fixed tags.
const LEXICON: &[(&str, &str)] = &[
    // personal pronouns
    ("i", "PRP"), ("you", "PRP"), ("he", "PRP"), ("she", "PRP"), ("it", "PRP"),
    ("we", "PRP"), ("they", "PRP"), ("me", "PRP"), ("him", "PRP"), ("her", "PRP"),
    ("us", "PRP"), ("them", "PRP"), ("myself", "PRP"), ("yourself", "PRP"), ("itself", "PRP"),
    // possessive pronouns
    ("my", "PRP$"), ("your", "PRP$"), ("his", "PRP$"), ("its", "PRP$"),
    ("our", "PRP$"), ("their", "PRP$"),
    // determiners
    ("the", "DT"), ("a", "DT"), ("an", "DT"), ("this", "DT"), ("that", "DT"),
    ("these", "DT"), ("those", "DT"), ("some", "DT"), ("any", "DT"), ("each", "DT"),
    ("every", "DT"), ("no", "DT"), ("another", "DT"), ("all", "DT"), ("both", "DT"),
    // modals
    ("can", "MD"), ("could", "MD"), ("will", "MD"), ("would", "MD"), ("shall", "MD"),
    ("should", "MD"), ("may", "MD"), ("might", "MD"), ("must", "MD"), ("cannot", "MD"),
    // prepositions / subordinating conjunctions
    ("in", "IN"), ("on", "IN"), ("at", "IN"), ("by", "IN"), ("for", "IN"),
    ("with", "IN"), ("without", "IN"), ("from", "IN"), ("of", "IN"), ("into", "IN"),
    ("about", "IN"), ("after", "IN"), ("before", "IN"), ("during", "IN"), ("under", "IN"),
    ("over", "IN"), ("between", "IN"), ("through", "IN"), ("if", "IN"), ("because", "IN"),
    ("while", "IN"), ("since", "IN"), ("until", "IN"), ("unless", "IN"), ("than", "IN"),
    ("as", "IN"), ("like", "IN"), ("via", "IN"), ("per", "IN"),
    // coordinating conjunctions
    ("and", "CC"), ("or", "CC"), ("but", "CC"), ("nor", "CC"), ("so", "CC"), ("yet", "CC"),
    // the infinitive marker
    ("to", "TO"),
    // interjections
    ("yes", "UH"), ("yeah", "UH"), ("ok", "UH"), ("okay", "UH"), ("oh", "UH"),
    ("hi", "UH"), ("hello", "UH"), ("hey", "UH"), ("thanks", "UH"), ("please", "UH"),
    ("cheers", "UH"),
    // wh-determiners and existential there
    ("which", "WDT"), ("what", "WDT"), ("who", "WDT"), ("when", "WRB"), ("where", "WRB"),
    ("why", "WRB"), ("how", "WRB"), ("there", "EX"),
    // frequent adverbs that no suffix rule catches
    ("not", "RB"), ("very", "RB"), ("too", "RB"), ("also", "RB"), ("just", "RB"),
    ("then", "RB"), ("now", "RB"), ("here", "RB"), ("again", "RB"), ("once", "RB"),
    ("first", "RB"), ("instead", "RB"), ("otherwise", "RB"), ("however", "RB"),
    ("always", "RB"), ("never", "RB"), ("well", "RB"), ("more", "RB"), ("most", "RB"),
    ("anyway", "RB"), ("maybe", "RB"), ("perhaps", "RB"),
    // frequent adjectives that no suffix rule catches
    ("sure", "JJ"), ("easy", "JJ"), ("easier", "JJ"), ("easiest", "JJ"), ("welcome", "JJ"),
    ("good", "JJ"), ("better", "JJ"), ("best", "JJ"), ("fine", "JJ"), ("nice", "JJ"),
    ("simple", "JJ"), ("simplest", "JJ"), ("possible", "JJ"), ("impossible", "JJ"),
    ("following", "JJ"), ("same", "JJ"), ("different", "JJ"), ("other", "JJ"),
    ("available", "JJ"), ("important", "JJ"), ("new", "JJ"), ("old", "JJ"),
    ("wrong", "JJ"), ("right", "JJ"), ("correct", "JJ"), ("safe", "JJ"), ("glad", "JJ"),
    ("happy", "JJ"), ("full", "JJ"), ("empty", "JJ"), ("null", "JJ"), ("true", "JJ"),
    ("false", "JJ"),
    // copula and auxiliary forms
    ("be", "VB"), ("is", "VBZ"), ("are", "VBP"), ("am", "VBP"), ("was", "VBD"),
    ("were", "VBD"), ("been", "VBN"), ("being", "VBG"),
    ("have", "VBP"), ("has", "VBZ"), ("had", "VBD"),
    ("do", "VBP"), ("does", "VBZ"), ("did", "VBD"), ("done", "VBN"),
];

/// Base-form verbs common in programming Q&A prose. Deliberately absent:
/// words whose noun reading dominates here (file, value, class, code, thank).
const VERBS: &[&str] = &[
    "accept", "add", "allow", "append", "apply", "assign", "assume", "avoid", "build", "call",
    "cast", "catch", "change", "check", "choose", "click", "close", "come", "compare", "compile",
    "compute", "configure", "connect", "consider", "contain", "convert", "copy", "create",
    "debug", "declare", "decode", "define", "delete", "depend", "disable", "display", "download",
    "edit", "enable", "encode", "ensure", "enter", "escape", "except", "execute", "exist",
    "expect", "explain", "extend", "extract", "fail", "fetch", "fill", "find", "fix", "follow",
    "forget", "format", "generate", "get", "give", "go", "handle", "happen", "help", "hold",
    "hope", "ignore", "implement", "import", "include", "initialize", "insert", "install",
    "invoke", "iterate", "keep", "know", "learn", "let", "listen", "load", "log", "look", "loop",
    "make", "manage", "mean", "merge", "modify", "move", "need", "note", "notice", "obtain",
    "occur", "open", "overwrite", "override", "parse", "pass", "perform", "place", "prefer",
    "prevent", "print", "produce", "provide", "put", "query", "quote", "read", "receive",
    "recommend", "refer", "refresh", "reject", "release", "remember", "remove", "rename",
    "render", "replace", "require", "reset", "resolve", "retrieve", "return", "reuse", "run",
    "save", "say", "see", "seem", "select", "send", "serialize", "set", "show", "skip", "solve",
    "sort", "specify", "split", "start", "stop", "store", "strip", "submit", "suggest",
    "suppose", "take", "tell", "test", "think", "throw", "translate", "trim", "try", "turn",
    "understand", "update", "upload", "use", "validate", "verify", "wait", "want", "wrap",
    "write", "work",
];

/// Rule-lexicon tagger; construction builds the lookup tables once.
#[derive(Debug)]
pub struct Tagger {
    lexicon: HashMap<&'static str, &'static str>,
    verbs: HashSet<&'static str>,
}

impl Default for Tagger {
    fn default() -> Self {
        Tagger {
            lexicon: LEXICON.iter().copied().collect(),
            verbs: VERBS.iter().copied().collect(),
        }
    }
}

/// How a token got its tag; drives the context repairs.
#[derive(Clone, Copy, PartialEq)]
enum Source {
    Lexicon,
    VerbList,
    Suffix,
    Number,
    DefaultNoun,
}

impl Tagger {
    /// Tags each alphanumeric token of `sentence`. Tokens keep their
    /// original spelling; lookups are case-insensitive.
    pub fn tag(&self, sentence: &str) -> Vec<(String, String)> {
        let tokens = tokenize(sentence);
        let mut tagged: Vec<(String, &'static str, Source)> = Vec::with_capacity(tokens.len());
        for token in &tokens {
            let lower = token.to_lowercase();
            let (tag, source) = self.tag_token(&lower);
            tagged.push((token.clone(), tag, source));
        }
        // Context repairs:
        // 1. determiner + verb-lexicon word is a nominal use ("the use").
        // 2. modal/infinitive marker + unknown-noun is a verb ("to foo").
        for i in 0..tagged.len() {
            if i == 0 {
                continue;
            }
            let prev_tag = tagged[i - 1].1;
            let (_, tag, source) = tagged[i];
            if prev_tag == "DT" && tag == "VB" && source == Source::VerbList {
                tagged[i].1 = "NN";
            } else if (prev_tag == "MD" || prev_tag == "TO")
                && tag == "NN"
                && source == Source::DefaultNoun
            {
                tagged[i].1 = "VB";
            }
        }
        tagged
            .into_iter()
            .map(|(token, tag, _)| (token, tag.to_string()))
            .collect()
    }

    fn tag_token(&self, lower: &str) -> (&'static str, Source) {
        if is_pure_number(lower) {
            return ("CD", Source::Number);
        }
        if let Some(tag) = self.lexicon.get(lower) {
            return (tag, Source::Lexicon);
        }
        if self.verbs.contains(lower) {
            return ("VB", Source::VerbList);
        }
        // Suffix rules, longest first.
        if lower.len() > 4 && lower.ends_with("ing") {
            return ("VBG", Source::Suffix);
        }
        if lower.len() > 3 && lower.ends_with("ed") {
            return ("VBD", Source::Suffix);
        }
        if lower.len() > 3 && lower.ends_with("ly") {
            return ("RB", Source::Suffix);
        }
        if lower.len() > 2 && lower.ends_with('s') && self.known_verb_stem(lower) {
            return ("VBZ", Source::Suffix);
        }
        ("NN", Source::DefaultNoun)
    }

    /// Is `word` (ending in `s`) the third-person form of a known verb?
    /// Tries `uses -> use`, `catches -> catch`, `tries -> try`.
    fn known_verb_stem(&self, word: &str) -> bool {
        if let Some(stem) = word.strip_suffix("ies") {
            let mut candidate = stem.to_string();
            candidate.push('y');
            if self.verbs.contains(candidate.as_str()) {
                return true;
            }
        }
        if let Some(stem) = word.strip_suffix("es") {
            if self.verbs.contains(stem) {
                return true;
            }
        }
        if let Some(stem) = word.strip_suffix('s') {
            if self.verbs.contains(stem) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(sentence: &str) -> Vec<(String, String)> {
        Tagger::default().tag(sentence)
    }

    fn tag_str(sentence: &str) -> String {
        tags(sentence)
            .iter()
            .map(|(w, t)| format!("{w}/{t}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn test_lexicon_basics() {
        assert_eq!(tag_str("use the builder"), "use/VB the/DT builder/NN");
        assert_eq!(tag_str("it"), "it/PRP");
        assert_eq!(tag_str("quickly"), "quickly/RB");
    }

    #[test]
    fn test_suffix_rules() {
        assert_eq!(tag_str("parsing"), "parsing/VBG");
        assert_eq!(tag_str("converted"), "converted/VBD");
        assert_eq!(tag_str("seems"), "seems/VBZ", "-s form of a known verb");
        assert_eq!(tag_str("tries"), "tries/VBZ", "-ies form of try");
        assert_eq!(tag_str("catches"), "catches/VBZ", "-es form of catch");
        assert_eq!(tag_str("classes"), "classes/NN", "not a verb stem");
    }

    #[test]
    fn test_numbers_are_cd() {
        assert_eq!(tag_str("8080"), "8080/CD");
        assert_eq!(tag_str("port 8080"), "port/NN 8080/CD");
    }

    #[test]
    fn test_unknown_defaults_to_noun() {
        assert_eq!(tag_str("builder"), "builder/NN");
        assert_eq!(tag_str("toURI"), "toURI/NN");
    }

    #[test]
    fn test_context_dt_verb_is_noun() {
        assert_eq!(tag_str("the use"), "the/DT use/NN");
        assert_eq!(tag_str("a call"), "a/DT call/NN");
    }

    #[test]
    fn test_context_to_unknown_is_verb() {
        assert_eq!(tag_str("to frobnicate"), "to/TO frobnicate/VB");
        assert_eq!(tag_str("must frobnicate"), "must/MD frobnicate/VB");
        assert_eq!(tag_str("to me"), "to/TO me/PRP", "lexicon entries are untouched");
    }

    #[test]
    fn test_copula_forms() {
        assert_eq!(tag_str("is"), "is/VBZ");
        assert_eq!(tag_str("are"), "are/VBP");
        assert_eq!(tag_str("was"), "was/VBD");
    }

    #[test]
    fn test_noun_reading_words_are_not_verbs() {
        for w in ["file", "value", "class", "code", "thank"] {
            let t = tags(w);
            assert_eq!(t[0].1, "NN", "{w} must default to NN, got {}", t[0].1);
        }
    }

    #[test]
    fn test_boilerplate_tag_sequences() {
        assert_eq!(tag_str("Try this"), "Try/VB this/DT");
        assert_eq!(
            tag_str("It will work for sure"),
            "It/PRP will/MD work/VB for/IN sure/JJ"
        );
        assert_eq!(
            tag_str("It seems the easiest to me"),
            "It/PRP seems/VBZ the/DT easiest/JJ to/TO me/PRP"
        );
        assert_eq!(tag_str("Yes like doing this"), "Yes/UH like/IN doing/VBG this/DT");
        assert_eq!(
            tag_str("You could do it like this"),
            "You/PRP could/MD do/VBP it/PRP like/IN this/DT"
        );
    }
}

//! Lightweight token scanning over code snippets: API class references and
//! method calls, recognized by their lexical positions.

/// Java-style keywords that must never be read as method names.
const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "record", "return", "short",
    "static", "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
    "transient", "try", "var", "void", "volatile", "while", "yield",
];

fn is_keyword(token: &str) -> bool {
    KEYWORDS.binary_search(&token).is_ok()
}

/// Blanks out string/char literals and comments so their contents are not
/// scanned as identifiers. The replacement keeps offsets stable by writing a
/// space per removed character (newlines are preserved).
fn strip_literals_and_comments(code: &str) -> String {
    #[derive(PartialEq)]
    enum St {
        Code,
        Str,      // "..."
        Chr,      // '...'
        Line,     // // ...
        Block,    // /* ... */
    }
    let mut out = String::with_capacity(code.len());
    let mut st = St::Code;
    let mut chars = code.chars().peekable();
    while let Some(c) = chars.next() {
        match st {
            St::Code => match c {
                '"' => {
                    st = St::Str;
                    out.push(' ');
                }
                '\'' => {
                    st = St::Chr;
                    out.push(' ');
                }
                '/' if chars.peek() == Some(&'/') => {
                    chars.next();
                    st = St::Line;
                    out.push_str("  ");
                }
                '/' if chars.peek() == Some(&'*') => {
                    chars.next();
                    st = St::Block;
                    out.push_str("  ");
                }
                _ => out.push(c),
            },
            St::Str => {
                if c == '\\' {
                    chars.next();
                    out.push_str("  ");
                } else {
                    if c == '"' {
                        st = St::Code;
                    }
                    out.push(if c == '\n' { '\n' } else { ' ' });
                }
            }
            St::Chr => {
                if c == '\\' {
                    chars.next();
                    out.push_str("  ");
                } else {
                    if c == '\'' {
                        st = St::Code;
                    }
                    out.push(if c == '\n' { '\n' } else { ' ' });
                }
            }
            St::Line => {
                if c == '\n' {
                    st = St::Code;
                    out.push('\n');
                } else {
                    out.push(' ');
                }
            }
            St::Block => {
                if c == '*' && chars.peek() == Some(&'/') {
                    chars.next();
                    st = St::Code;
                    out.push_str("  ");
                } else {
                    out.push(if c == '\n' { '\n' } else { ' ' });
                }
            }
        }
    }
    out
}

/// Splits cleaned code into identifiers and single-character symbols.
fn lex(code: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in code.chars() {
        if ch.is_alphanumeric() || ch == '_' {
            current.push(ch);
        } else {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            if !ch.is_whitespace() {
                tokens.push(ch.to_string());
            }
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn is_identifier(token: &str) -> bool {
    token.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
}

fn starts_uppercase(token: &str) -> bool {
    token.chars().next().is_some_and(char::is_uppercase)
}

fn starts_lowercase(token: &str) -> bool {
    token.chars().next().is_some_and(char::is_lowercase)
}

/// Extracts API class references: uppercase-initial identifiers in type,
/// constructor, or static-call positions (after `new`/`extends`/`implements`,
/// before `.`, before another identifier, or inside generics). Duplicates are
/// removed; first-occurrence order is kept.
pub fn extract_api_classes(code: &str) -> Vec<String> {
    let cleaned = strip_literals_and_comments(code);
    let tokens = lex(&cleaned);
    let mut seen = std::collections::HashSet::new();
    let mut classes = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        if !starts_uppercase(tok) || is_keyword(tok) {
            continue;
        }
        let prev = i.checked_sub(1).map(|p| tokens[p].as_str());
        let next = tokens.get(i + 1).map(String::as_str);
        let by_prev = matches!(prev, Some("new") | Some("extends") | Some("implements") | Some("<"));
        let by_next = matches!(next, Some(".") | Some("<") | Some(">"))
            || next.is_some_and(|t| is_identifier(t) && !is_keyword(t));
        if (by_prev || by_next) && seen.insert(tok.clone()) {
            classes.push(tok.clone());
        }
    }
    classes
}

/// Extracts called method names: lowercase-initial identifiers immediately
/// followed by `(`, in call position (after `.` or standalone), excluding
/// language keywords. Constructors never match (uppercase initial).
/// Duplicates are removed; first-occurrence order is kept.
pub fn extract_methods(code: &str) -> Vec<String> {
    let cleaned = strip_literals_and_comments(code);
    let tokens = lex(&cleaned);
    let mut seen = std::collections::HashSet::new();
    let mut methods = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        if !starts_lowercase(tok) || is_keyword(tok.as_str()) {
            continue;
        }
        if tokens.get(i + 1).map(String::as_str) != Some("(") {
            continue;
        }
        if seen.insert(tok.clone()) {
            methods.push(tok.clone());
        }
    }
    methods
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_classes_after_new() {
        assert_eq!(extract_api_classes("new StringBuilder().append(x)"), vec!["StringBuilder"]);
    }

    #[test]
    fn test_classes_declarations_and_static_calls() {
        let code = "File f = new File(s); URL u = f.toURI().toURL();";
        assert_eq!(extract_api_classes(code), vec!["File", "URL"]);
    }

    #[test]
    fn test_classes_primitives_ignored() {
        assert_eq!(extract_api_classes("int x = 5;"), Vec::<String>::new());
    }

    #[test]
    fn test_classes_generics_and_inheritance() {
        let code = "class Mine extends Base implements Runnable { Map<String, Integer> m; }";
        assert_eq!(extract_api_classes(code), vec!["Base", "Runnable", "Map", "String", "Integer"]);
    }

    #[test]
    fn test_classes_static_member_access() {
        assert_eq!(extract_api_classes("System.out.println(x); Math.PI;"), vec!["System", "Math"]);
    }

    #[test]
    fn test_classes_skip_string_literal_contents() {
        assert_eq!(
            extract_api_classes("String s = \"new File inside Text\"; // Comment Class\nFile f;"),
            vec!["String", "File"]
        );
    }

    #[test]
    fn test_methods_chained_calls() {
        assert_eq!(extract_methods("f.toURI().toURL()"), vec!["toURI", "toURL"]);
    }

    #[test]
    fn test_methods_keywords_excluded() {
        assert_eq!(extract_methods("if (x) return;"), Vec::<String>::new());
        assert_eq!(extract_methods("for (int i = 0; i < n; i++) { while (true) {} }"), Vec::<String>::new());
    }

    #[test]
    fn test_methods_constructors_excluded() {
        assert_eq!(extract_methods("new File(s)"), Vec::<String>::new());
    }

    #[test]
    fn test_methods_standalone_call() {
        assert_eq!(extract_methods("doWork(a, b); helper();"), vec!["doWork", "helper"]);
    }

    #[test]
    fn test_methods_dedup_keeps_first_occurrence() {
        assert_eq!(extract_methods("a.go(); b.go(); c.stop();"), vec!["go", "stop"]);
    }

    #[test]
    fn test_strip_block_comments_and_chars() {
        let code = "/* Skip This */ char c = 'X'; run();";
        assert_eq!(extract_methods(code), vec!["run"]);
        assert_eq!(extract_api_classes(code), Vec::<String>::new());
    }

    #[test]
    fn test_keywords_are_sorted_for_binary_search() {
        let mut sorted = KEYWORDS.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, KEYWORDS, "keyword table must stay sorted");
    }
}

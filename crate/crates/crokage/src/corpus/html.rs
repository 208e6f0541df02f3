//! Splits post bodies (HTML fragments) into plain prose and verbatim code
//! blocks, following the `<pre><code>` conventions of Q&A dumps.

/// Decodes the HTML entities that occur in post bodies. Named entities
/// outside the known set are left verbatim.
pub fn decode_entities(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp..];
        // Entities are short; cap the scan so stray '&' doesn't stall on ';'
        // found much later in the text.
        let semi = tail[..tail.len().min(32)].find(';');
        match semi {
            Some(semi) => {
                let name = &tail[1..semi];
                match decode_entity_name(name) {
                    Some(decoded) => {
                        out.push_str(&decoded);
                        rest = &tail[semi + 1..];
                    }
                    None => {
                        out.push('&');
                        rest = &tail[1..];
                    }
                }
            }
            None => {
                out.push('&');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn decode_entity_name(name: &str) -> Option<String> {
    let s = match name {
        "lt" => "<",
        "gt" => ">",
        "amp" => "&",
        "quot" => "\"",
        "apos" => "'",
        "nbsp" => " ",
        _ => {
            let code = if let Some(hex) = name.strip_prefix("#x").or_else(|| name.strip_prefix("#X")) {
                u32::from_str_radix(hex, 16).ok()?
            } else {
                name.strip_prefix('#')?.parse::<u32>().ok()?
            };
            return char::from_u32(code).map(String::from);
        }
    };
    Some(s.to_string())
}

#[derive(Debug, PartialEq)]
struct Tag<'a> {
    name: &'a str,
    closing: bool,
}

/// Parses a tag starting at `html[start..]` (which begins with '<').
/// Returns the tag and the index just past the closing '>'. Returns `None`
/// when the '<' does not open a real tag (stray less-than in text).
fn parse_tag(html: &str, start: usize) -> Option<(Tag<'_>, usize)> {
    let bytes = html.as_bytes();
    let mut i = start + 1;
    if i >= bytes.len() {
        return None;
    }
    // Comments: skip to the terminating "-->".
    if html[i..].starts_with("!--") {
        let end = html[i + 3..].find("-->").map(|p| i + 3 + p + 3).unwrap_or(html.len());
        return Some((Tag { name: "", closing: false }, end));
    }
    let closing = bytes[i] == b'/';
    if closing {
        i += 1;
    }
    let name_start = i;
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric()) {
        i += 1;
    }
    if i == name_start {
        return None; // "<" followed by something that is not a tag name
    }
    let name = &html[name_start..i];
    // Scan to '>' while respecting quoted attribute values.
    let mut quote: Option<u8> = None;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(q) => {
                if b == q {
                    quote = None;
                }
            }
            None => match b {
                b'"' | b'\'' => quote = Some(b),
                b'>' => return Some((Tag { name, closing }, i + 1)),
                _ => {}
            },
        }
        i += 1;
    }
    None // unterminated tag: treat the '<' as literal text
}

/// Separates a post body into `(prose, code_blocks)`.
///
/// Content inside `<pre><code>…</code></pre>` always becomes a code block;
/// a bare `<code>` span becomes one only when its content spans at least two
/// lines, otherwise its text stays in the prose. Nested `<code>` inside a
/// `<pre>` block is counted once. All other markup is stripped, entities are
/// decoded, and prose whitespace is collapsed. Unbalanced tags are tolerated.
pub fn split_text_code(body: &str) -> (String, Vec<String>) {
    #[derive(Clone, Copy, PartialEq)]
    enum Mode {
        Prose,
        Pre,      // inside <pre>, before any <code>
        PreCode,  // inside <pre><code>: collecting a code block
        BareCode, // inside <code> with no enclosing <pre>
    }

    let mut mode = Mode::Prose;
    let mut nested = 0usize; // extra <pre>/<code> depth inside PreCode/BareCode
    let mut prose = String::new();
    let mut buf = String::new();
    let mut blocks = Vec::new();

    fn flush_bare(buf: &mut String, prose: &mut String, blocks: &mut Vec<String>) {
        let content = std::mem::take(buf);
        if content.lines().count() >= 2 {
            blocks.push(content);
        } else {
            prose.push_str(&content);
            prose.push(' ');
        }
    }

    let mut i = 0;
    let bytes = body.as_bytes();
    while i < bytes.len() {
        if bytes[i] == b'<' {
            if let Some((tag, next)) = parse_tag(body, i) {
                let name = tag.name.to_ascii_lowercase();
                match mode {
                    Mode::Prose => {
                        if !tag.closing && name == "pre" {
                            mode = Mode::Pre;
                        } else if !tag.closing && name == "code" {
                            mode = Mode::BareCode;
                            nested = 0;
                        } else {
                            prose.push(' '); // stripped tag still separates words
                        }
                    }
                    Mode::Pre => {
                        if !tag.closing && name == "code" {
                            mode = Mode::PreCode;
                            nested = 0;
                        } else if tag.closing && name == "pre" {
                            mode = Mode::Prose;
                        }
                        // other markup directly inside <pre> is dropped
                    }
                    Mode::PreCode => {
                        if name == "code" || name == "pre" {
                            if tag.closing {
                                if nested > 0 {
                                    nested -= 1;
                                } else {
                                    if !buf.is_empty() {
                                        blocks.push(std::mem::take(&mut buf));
                                    }
                                    mode = if name == "pre" { Mode::Prose } else { Mode::Pre };
                                }
                            } else {
                                nested += 1; // nested <code>/<pre> counted once
                            }
                        }
                        // other tags inside a code block are dropped
                    }
                    Mode::BareCode => {
                        if name == "code" {
                            if tag.closing {
                                if nested > 0 {
                                    nested -= 1;
                                } else {
                                    flush_bare(&mut buf, &mut prose, &mut blocks);
                                    mode = Mode::Prose;
                                }
                            } else {
                                nested += 1;
                            }
                        }
                    }
                }
                i = next;
                continue;
            }
        }
        // Plain text: copy the run up to the next '<'. A stray '<' that did
        // not open a tag is literal text, so the scan starts past it.
        let search_from = if bytes[i] == b'<' { i + 1 } else { i };
        let run_end = body[search_from..]
            .find('<')
            .map(|p| search_from + p)
            .unwrap_or(body.len());
        let decoded = decode_entities(&body[i..run_end]);
        match mode {
            Mode::Prose => prose.push_str(&decoded),
            Mode::Pre => prose.push_str(&decoded), // <pre> without <code> stays prose
            Mode::PreCode | Mode::BareCode => buf.push_str(&decoded),
        }
        i = run_end;
    }

    // Unclosed spans at EOF: finalize with the same rules.
    match mode {
        Mode::PreCode => {
            if !buf.is_empty() {
                blocks.push(buf);
            }
        }
        Mode::BareCode => flush_bare(&mut buf, &mut prose, &mut blocks),
        _ => {}
    }

    let prose = collapse_whitespace(&prose);
    (prose, blocks)
}

/// Collapses whitespace runs to single spaces and trims the ends.
pub fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_space = true; // leading whitespace is dropped
    for ch in text.chars() {
        if ch.is_whitespace() {
            if !in_space {
                out.push(' ');
                in_space = true;
            }
        } else {
            out.push(ch);
            in_space = false;
        }
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_pre_code_block_extracted() {
        let (prose, blocks) = split_text_code("hi <pre><code>int a;</code></pre> bye");
        assert_eq!(prose, "hi bye");
        assert_eq!(blocks, vec!["int a;"]);
    }

    #[test]
    fn test_bare_code_multiline_becomes_block() {
        let (prose, blocks) = split_text_code("x <code>a\nb</code> y");
        assert_eq!(prose, "x y");
        assert_eq!(blocks, vec!["a\nb"]);
    }

    #[test]
    fn test_bare_code_single_line_stays_prose() {
        let (prose, blocks) = split_text_code("use <code>f.toURI()</code> here.");
        assert_eq!(prose, "use f.toURI() here.");
        assert!(blocks.is_empty());
    }

    #[test]
    fn test_nested_code_inside_pre_counted_once() {
        let (prose, blocks) = split_text_code("<pre><code>outer <code>inner</code> tail</code></pre>done");
        assert_eq!(blocks, vec!["outer inner tail"]);
        assert_eq!(prose, "done");
    }

    #[test]
    fn test_entities_decoded_in_prose_and_code() {
        let (prose, blocks) = split_text_code("a &amp; b <pre><code>if (x &lt; 2) y&gt;1;\n</code></pre>");
        assert_eq!(prose, "a & b");
        assert_eq!(blocks, vec!["if (x < 2) y>1;\n"]);
    }

    #[test]
    fn test_numeric_entities() {
        assert_eq!(decode_entities("x&#39;s &#x41;"), "x's A");
        assert_eq!(decode_entities("5 &lt; 6 &amp;&amp; 7"), "5 < 6 && 7");
        assert_eq!(decode_entities("no entity & here"), "no entity & here");
        assert_eq!(decode_entities("&unknown;"), "&unknown;");
    }

    #[test]
    fn test_unbalanced_tags_tolerated() {
        let (prose, blocks) = split_text_code("</pre>text<pre><code>x = 1");
        assert_eq!(prose, "text");
        assert_eq!(blocks, vec!["x = 1"]);
        let (prose2, blocks2) = split_text_code("open <code>one liner");
        assert_eq!(prose2, "open one liner");
        assert!(blocks2.is_empty());
    }

    #[test]
    fn test_attributes_and_comments_stripped() {
        let (prose, blocks) =
            split_text_code("<p class=\"x\">Hello <!-- note --> <a href=\"u>v\">link</a></p><pre class='lang-java'><code>new File(s);</code></pre>");
        assert_eq!(prose, "Hello link");
        assert_eq!(blocks, vec!["new File(s);"]);
    }

    #[test]
    fn test_stray_less_than_is_literal() {
        let (prose, blocks) = split_text_code("a < b and c > d");
        assert_eq!(prose, "a < b and c > d");
        assert!(blocks.is_empty());
    }

    #[test]
    fn test_pre_without_code_stays_prose() {
        let (prose, blocks) = split_text_code("<pre>plain block</pre>");
        assert_eq!(prose, "plain block");
        assert!(blocks.is_empty());
    }

    #[test]
    fn test_blocks_keep_document_order() {
        let html = "first <pre><code>A\n</code></pre> mid <code>B1\nB2</code> last <pre><code>C</code></pre>";
        let (prose, blocks) = split_text_code(html);
        assert_eq!(prose, "first mid last");
        assert_eq!(blocks, vec!["A\n", "B1\nB2", "C"]);
    }

    #[test]
    fn test_no_alnum_token_lost() {
        // Every alphanumeric token of the text content must survive in
        // prose + code (markup and attributes excluded).
        let html = "Use <b>the</b> <code>Runtime</code> class: <pre><code>Runtime.getRuntime().exec(cmd);\n</code></pre> done &amp; dusted";
        let (prose, blocks) = split_text_code(html);
        let combined = format!("{} {}", prose, blocks.join(" "));
        let all = crate::corpus::preprocess::tokenize(&combined);
        for tok in ["Use", "the", "Runtime", "class", "getRuntime", "exec", "cmd", "done", "dusted"] {
            assert!(all.iter().any(|t| t == tok), "lost token {tok}");
        }
    }
}

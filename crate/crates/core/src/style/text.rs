//! Lexical scanning of program text: code vs. literal/comment spans,
//! identifiers, and leading indentation.
//!
//! The scanner is language-agnostic and deliberately shallow. It knows `#`,
//! `//` and `/* */` comments, single, double, triple and backtick quotes.

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanKind {
    Code,
    Literal,
}

/// Byte ranges of `text` tagged as code or literal. Spans are contiguous and
/// cover the whole input.
pub fn spans(text: &str) -> Vec<(SpanKind, std::ops::Range<usize>)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut code_start = 0;
    let mut i = 0;
    while i < bytes.len() {
        let end = literal_end(text, i);
        match end {
            Some(end) => {
                if code_start < i {
                    out.push((SpanKind::Code, code_start..i));
                }
                out.push((SpanKind::Literal, i..end));
                i = end;
                code_start = end;
            }
            None => i += text[i..].chars().next().map_or(1, char::len_utf8),
        }
    }
    if code_start < bytes.len() {
        out.push((SpanKind::Code, code_start..bytes.len()));
    }
    out
}

fn line_end(text: &str, from: usize) -> usize {
    text[from..].find('\n').map_or(text.len(), |p| from + p)
}

/// Closing quote position (exclusive end) for a quoted run starting at
/// `open`, scanning no further than `limit`.
fn closing_quote(text: &str, open: usize, quote: u8, limit: usize) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut j = open + 1;
    while j < limit {
        match bytes[j] {
            b'\\' => j += 2,
            b if b == quote => return Some(j + 1),
            _ => j += 1,
        }
    }
    None
}

fn literal_end(text: &str, i: usize) -> Option<usize> {
    let rest = &text[i..];
    let bytes = text.as_bytes();
    if rest.starts_with('#') || rest.starts_with("//") {
        return Some(line_end(text, i));
    }
    if let Some(body) = rest.strip_prefix("/*") {
        return Some(body.find("*/").map_or(text.len(), |p| i + 2 + p + 2));
    }
    for triple in ["\"\"\"", "'''"] {
        if rest.starts_with(triple) {
            return Some(rest[3..].find(triple).map_or(text.len(), |p| i + 3 + p + 3));
        }
    }
    match bytes[i] {
        b'"' => Some(closing_quote(text, i, b'"', line_end(text, i)).unwrap_or_else(|| line_end(text, i))),
        b'`' => Some(closing_quote(text, i, b'`', text.len()).unwrap_or(text.len())),
        // An apostrophe without a partner on the same line is code.
        b'\'' => closing_quote(text, i, b'\'', line_end(text, i)),
        _ => None,
    }
}

static IDENT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z_][A-Za-z0-9_]*").unwrap());
static IDENT_KEBAB: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z][A-Za-z0-9_]*)*").unwrap());

/// Identifier matcher; with `hyphens`, `a-b` is one token.
pub fn identifier_regex(hyphens: bool) -> &'static Regex {
    if hyphens {
        &IDENT_KEBAB
    } else {
        &IDENT
    }
}

/// Identifiers occurring in code spans.
pub fn code_identifiers(text: &str, hyphens: bool) -> Vec<&str> {
    let re = identifier_regex(hyphens);
    spans(text)
        .into_iter()
        .filter(|(kind, _)| *kind == SpanKind::Code)
        .flat_map(|(_, range)| re.find_iter(&text[range]).map(|m| m.as_str()).collect::<Vec<_>>())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Indentation {
    Tabs,
    Spaces2,
    Spaces4,
}

impl Indentation {
    pub const ALL: [Indentation; 3] = [Indentation::Tabs, Indentation::Spaces2, Indentation::Spaces4];

    pub fn symbol(self) -> &'static str {
        match self {
            Indentation::Tabs => "Tabs",
            Indentation::Spaces2 => "Spaces2",
            Indentation::Spaces4 => "Spaces4",
        }
    }

    pub fn from_symbol(symbol: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.symbol() == symbol)
    }

    pub fn unit(self) -> &'static str {
        match self {
            Indentation::Tabs => "\t",
            Indentation::Spaces2 => "  ",
            Indentation::Spaces4 => "    ",
        }
    }
}

impl fmt::Display for Indentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One vote per indentation step: a line indented deeper than the previous
/// non-blank line votes for the unit of the increase (a tab, two spaces or
/// four spaces). Other increases carry no evidence.
pub fn indentation_votes(text: &str) -> Vec<Indentation> {
    let mut votes = Vec::new();
    let (mut prev_tabs, mut prev_spaces) = (0usize, 0usize);
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let tabs = line.bytes().take_while(|&b| b == b'\t').count();
        let spaces = if tabs == 0 {
            line.bytes().take_while(|&b| b == b' ').count()
        } else {
            0
        };
        if tabs > prev_tabs {
            votes.push(Indentation::Tabs);
        } else if spaces > prev_spaces {
            match spaces - prev_spaces {
                2 => votes.push(Indentation::Spaces2),
                4 => votes.push(Indentation::Spaces4),
                _ => {}
            }
        }
        prev_tabs = tabs;
        prev_spaces = spaces;
    }
    votes
}

/// Re-emits leading indentation of every line from `from` units to `to`
/// units. Whitespace below one unit is carried over unchanged.
pub fn reindent(text: &str, from: Indentation, to: Indentation) -> String {
    let mut out = String::with_capacity(text.len() + text.len() / 4);
    for line in text.split_inclusive('\n') {
        let (depth, consumed) = match from {
            Indentation::Tabs => {
                let n = line.bytes().take_while(|&b| b == b'\t').count();
                (n, n)
            }
            Indentation::Spaces2 | Indentation::Spaces4 => {
                let width = from.unit().len();
                let n = line.bytes().take_while(|&b| b == b' ').count();
                (n / width, n / width * width)
            }
        };
        for _ in 0..depth {
            out.push_str(to.unit());
        }
        out.push_str(&line[consumed..]);
    }
    out
}

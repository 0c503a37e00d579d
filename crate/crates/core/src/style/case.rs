//! Identifier naming formats: classification, word splitting and re-casing.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NameFormat {
    CamelCase,
    PascalCase,
    SnakeCase,
    ScreamingSnake,
    KebabCase,
}

impl NameFormat {
    pub const ALL: [NameFormat; 5] = [
        NameFormat::CamelCase,
        NameFormat::PascalCase,
        NameFormat::SnakeCase,
        NameFormat::ScreamingSnake,
        NameFormat::KebabCase,
    ];

    /// Symbol name used in the style value codebook.
    pub fn symbol(self) -> &'static str {
        match self {
            NameFormat::CamelCase => "CamelCase",
            NameFormat::PascalCase => "PascalCase",
            NameFormat::SnakeCase => "SnakeCase",
            NameFormat::ScreamingSnake => "ScreamingSnake",
            NameFormat::KebabCase => "KebabCase",
        }
    }

    pub fn from_symbol(symbol: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.symbol() == symbol)
    }
}

impl fmt::Display for NameFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Splits off leading and trailing `_`/`-` runs, which re-casing preserves.
fn trim_affixes(ident: &str) -> (&str, &str, &str) {
    let is_sep = |c: char| c == '_' || c == '-';
    let core_start = ident.len() - ident.trim_start_matches(is_sep).len();
    let core_end = ident.trim_end_matches(is_sep).len().max(core_start);
    (&ident[..core_start], &ident[core_start..core_end], &ident[core_end..])
}

/// Word segments of an identifier. Splits at `_`, `-` and lower→upper
/// transitions; an acronym run stays one segment (`HTTPServer` → `HTTP`,
/// `Server`). Digits stay with the preceding segment.
pub fn split_words(ident: &str) -> Vec<String> {
    let mut words = Vec::new();
    for part in ident.split(['_', '-']).filter(|p| !p.is_empty()) {
        let chars: Vec<char> = part.chars().collect();
        let mut current = String::new();
        for (i, &c) in chars.iter().enumerate() {
            if i > 0 && c.is_uppercase() {
                let prev = chars[i - 1];
                let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
                if prev.is_lowercase() || prev.is_ascii_digit() || (prev.is_uppercase() && next_lower) {
                    words.push(std::mem::take(&mut current));
                }
            }
            current.push(c);
        }
        if !current.is_empty() {
            words.push(current);
        }
    }
    words
}

/// Naming format of an identifier, or `None` when it carries no evidence
/// (single words, mixed conventions).
pub fn classify(ident: &str) -> Option<NameFormat> {
    let (_, core, _) = trim_affixes(ident);
    if core.is_empty() {
        return None;
    }
    let has_upper = core.chars().any(char::is_uppercase);
    let has_lower = core.chars().any(char::is_lowercase);
    let has_hyphen = core.contains('-');
    let has_underscore = core.contains('_');
    let segments_ok = |sep: char| core.split(sep).count() >= 2 && core.split(sep).all(|s| !s.is_empty());

    if has_hyphen {
        return (!has_underscore && !has_upper && segments_ok('-')).then_some(NameFormat::KebabCase);
    }
    if has_underscore {
        if !segments_ok('_') {
            return None;
        }
        return match (has_upper, has_lower) {
            (false, true) => Some(NameFormat::SnakeCase),
            (true, false) => Some(NameFormat::ScreamingSnake),
            _ => None,
        };
    }
    let first = core.chars().next()?;
    if first.is_lowercase() && has_upper {
        return Some(NameFormat::CamelCase);
    }
    if first.is_uppercase() && has_lower && split_words(core).len() >= 2 {
        return Some(NameFormat::PascalCase);
    }
    None
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars.flat_map(char::to_lowercase)).collect(),
        None => String::new(),
    }
}

/// Re-cases `ident` into `format`, keeping leading/trailing separators.
pub fn convert(ident: &str, format: NameFormat) -> String {
    let (prefix, core, suffix) = trim_affixes(ident);
    let words = split_words(core);
    let body = match format {
        NameFormat::SnakeCase => words.iter().map(|w| w.to_lowercase()).collect::<Vec<_>>().join("_"),
        NameFormat::ScreamingSnake => words.iter().map(|w| w.to_uppercase()).collect::<Vec<_>>().join("_"),
        NameFormat::KebabCase => words.iter().map(|w| w.to_lowercase()).collect::<Vec<_>>().join("-"),
        NameFormat::PascalCase => words.iter().map(|w| capitalize(w)).collect(),
        NameFormat::CamelCase => words
            .iter()
            .enumerate()
            .map(|(i, w)| if i == 0 { w.to_lowercase() } else { capitalize(w) })
            .collect(),
    };
    format!("{prefix}{body}{suffix}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn splits() {
        assert_eq!(split_words("user_name"), ["user", "name"]);
        assert_eq!(split_words("userName"), ["user", "Name"]);
        assert_eq!(split_words("HTTPServer"), ["HTTP", "Server"]);
        assert_eq!(split_words("parseHTTP"), ["parse", "HTTP"]);
        assert_eq!(split_words("kebab-case-name"), ["kebab", "case", "name"]);
        assert_eq!(split_words("item2Count"), ["item2", "Count"]);
    }

    #[test]
    fn classifies() {
        assert_eq!(classify("user_name"), Some(NameFormat::SnakeCase));
        assert_eq!(classify("_private_name"), Some(NameFormat::SnakeCase));
        assert_eq!(classify("MAX_SIZE"), Some(NameFormat::ScreamingSnake));
        assert_eq!(classify("userName"), Some(NameFormat::CamelCase));
        assert_eq!(classify("UserName"), Some(NameFormat::PascalCase));
        assert_eq!(classify("kebab-name"), Some(NameFormat::KebabCase));
        assert_eq!(classify("def"), None);
        assert_eq!(classify("Foo"), None);
        assert_eq!(classify("HTTP"), None);
        assert_eq!(classify("__init__"), None);
        assert_eq!(classify("My_Var"), None);
        assert_eq!(classify("a__b"), None);
    }

    #[test]
    fn converts() {
        assert_eq!(convert("user_name", NameFormat::CamelCase), "userName");
        assert_eq!(convert("_private_name", NameFormat::CamelCase), "_privateName");
        assert_eq!(convert("userName", NameFormat::SnakeCase), "user_name");
        assert_eq!(convert("userName", NameFormat::ScreamingSnake), "USER_NAME");
        assert_eq!(convert("user_name", NameFormat::PascalCase), "UserName");
        assert_eq!(convert("user_name", NameFormat::KebabCase), "user-name");
        assert_eq!(convert("max_retry_count_", NameFormat::CamelCase), "maxRetryCount_");
    }

    #[test]
    fn symbols_round_trip() {
        for f in NameFormat::ALL {
            assert_eq!(NameFormat::from_symbol(f.symbol()), Some(f));
        }
    }

    fn camel_ident() -> impl Strategy<Value = String> {
        ("[a-z]{1,6}", prop::collection::vec("[A-Z][a-z]{1,6}", 1..4)).prop_map(|(head, tail)| head + &tail.concat())
    }

    proptest! {
        #[test]
        fn camel_snake_camel_round_trips(ident in camel_ident()) {
            let snake = convert(&ident, NameFormat::SnakeCase);
            prop_assert_eq!(classify(&snake), Some(NameFormat::SnakeCase));
            prop_assert_eq!(convert(&snake, NameFormat::CamelCase), ident.clone());
            prop_assert_eq!(classify(&ident), Some(NameFormat::CamelCase));
        }
    }
}

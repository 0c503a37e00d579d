//! Stylistic preferences as role-filler bundles.
//!
//! A profile bundles `attribute ⊗ value` pairs such as
//! `(NameFormat ⊗ CamelCase) ⊕ (Indentation ⊗ Spaces4)`. Binding a model
//! profile with a user profile gives a mapping vector; binding a value with
//! the mapping and cleaning up yields the corresponding value on the other
//! side. The vector step only decides the target value. Applying it to text
//! is ordinary string work in [`restyle`].

pub mod case;
pub mod text;

use std::collections::BTreeMap;

use crate::codebook::{CleanupResult, Codebook, CodebookKind};
use crate::error::{HdvError, Result};
use crate::rolefiller::{ProfileFile, RoleFillerBundle};
use crate::vector::{Hypervector, Seed};

pub use case::NameFormat;
pub use text::Indentation;

pub const NAME_FORMAT: &str = "NameFormat";
pub const INDENTATION: &str = "Indentation";

/// Attribute and value codebooks for style profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleCodebooks {
    pub attributes: Codebook,
    pub values: Codebook,
}

impl StyleCodebooks {
    pub fn new(seed: Seed, dimension: usize) -> Result<Self> {
        Ok(Self {
            attributes: Codebook::new(CodebookKind::StyleAttribute, seed, dimension)?,
            values: Codebook::new(CodebookKind::StyleValue, seed, dimension)?,
        })
    }

    /// Codebooks pre-populated with the built-in attributes and values.
    pub fn standard(seed: Seed, dimension: usize) -> Result<Self> {
        let mut cbs = Self::new(seed, dimension)?;
        cbs.attributes.register(NAME_FORMAT)?;
        cbs.attributes.register(INDENTATION)?;
        for f in NameFormat::ALL {
            cbs.values.register(f.symbol())?;
        }
        for i in Indentation::ALL {
            cbs.values.register(i.symbol())?;
        }
        Ok(cbs)
    }

    pub fn seed(&self) -> Seed {
        self.attributes.seed()
    }

    pub fn dim(&self) -> usize {
        self.attributes.dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StyleProfile(RoleFillerBundle);

impl StyleProfile {
    pub fn bundle(&self) -> &RoleFillerBundle {
        &self.0
    }

    pub fn pairs(&self) -> &[(String, String)] {
        self.0.pairs()
    }

    pub fn value_of(&self, attribute: &str) -> Option<&str> {
        self.0.filler_of(attribute)
    }

    pub fn normalized(&self) -> Result<Hypervector> {
        self.0.normalized()
    }

    pub fn to_file(&self) -> ProfileFile {
        self.0.to_file()
    }

    pub fn from_file(file: &ProfileFile, cbs: &mut StyleCodebooks) -> Result<Self> {
        file.check_version()?;
        check_space(file.seed, file.dimension, cbs)?;
        build_profile(&file.pair_tuples(), cbs)
    }
}

fn check_space(seed: Seed, dimension: usize, cbs: &StyleCodebooks) -> Result<()> {
    if seed != cbs.seed() || dimension != cbs.dim() {
        return Err(HdvError::Incompatible {
            what: "profile",
            detail: format!(
                "profile has seed {seed} / D {dimension}, codebooks have seed {} / D {}",
                cbs.seed(),
                cbs.dim()
            ),
        });
    }
    Ok(())
}

/// Bundles `(attribute ⊗ value)` pairs, registering unknown names.
pub fn build_profile<A: AsRef<str>, V: AsRef<str>>(pairs: &[(A, V)], cbs: &mut StyleCodebooks) -> Result<StyleProfile> {
    RoleFillerBundle::build(pairs, &mut cbs.attributes, &mut cbs.values, "attribute").map(StyleProfile)
}

/// Bidirectional translation vector between two styles.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleMapping {
    pub map_vector: Hypervector,
    pub source: String,
    pub target: String,
}

impl StyleMapping {
    pub fn identity(dimension: usize) -> Result<Self> {
        Ok(Self {
            map_vector: Hypervector::identity(dimension)?,
            source: "identity".into(),
            target: "identity".into(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.map_vector.is_identity()
    }
}

/// `normalize(model_style) ⊗ normalize(user_style)`.
pub fn build_mapping(model_style: &StyleProfile, user_style: &StyleProfile) -> Result<StyleMapping> {
    Ok(StyleMapping {
        map_vector: model_style.0.mapping_to(&user_style.0)?,
        source: "model".into(),
        target: "user".into(),
    })
}

/// Cleans up `value ⊗ mapping` against the value codebook.
pub fn translate_value(value: &str, mapping: &StyleMapping, values: &Codebook, tau: f64) -> Result<CleanupResult> {
    let v = values.lookup(value)?;
    values.cleanup(&v.bind(&mapping.map_vector)?, tau)
}

/// Style evidence gathered from text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StyleEvidence {
    pub name_votes: BTreeMap<NameFormat, usize>,
    pub indent_votes: BTreeMap<Indentation, usize>,
}

fn majority<K: Copy + Ord>(votes: &BTreeMap<K, usize>) -> Option<K> {
    // Strictly greater keeps the earliest key on ties.
    let mut best: Option<(K, usize)> = None;
    for (&k, &n) in votes {
        if n > 0 && best.is_none_or(|(_, b)| n > b) {
            best = Some((k, n));
        }
    }
    best.map(|(k, _)| k)
}

impl StyleEvidence {
    pub fn gather(source: &str) -> Self {
        let mut evidence = StyleEvidence::default();
        for ident in text::code_identifiers(source, false) {
            if let Some(f) = case::classify(ident) {
                *evidence.name_votes.entry(f).or_default() += 1;
            }
        }
        for ident in text::code_identifiers(source, true) {
            if ident.contains('-') && case::classify(ident) == Some(NameFormat::KebabCase) {
                *evidence.name_votes.entry(NameFormat::KebabCase).or_default() += 1;
            }
        }
        for vote in text::indentation_votes(source) {
            *evidence.indent_votes.entry(vote).or_default() += 1;
        }
        evidence
    }

    pub fn name_format(&self) -> Option<NameFormat> {
        majority(&self.name_votes)
    }

    pub fn indentation(&self) -> Option<Indentation> {
        majority(&self.indent_votes)
    }

    pub fn pairs(&self) -> Vec<(&'static str, &'static str)> {
        let mut pairs = Vec::new();
        if let Some(f) = self.name_format() {
            pairs.push((NAME_FORMAT, f.symbol()));
        }
        if let Some(i) = self.indentation() {
            pairs.push((INDENTATION, i.symbol()));
        }
        pairs
    }
}

/// Infers a style profile from program text. Attributes without evidence
/// are omitted, so the profile may be empty.
pub fn infer_style(source: &str, cbs: &mut StyleCodebooks) -> Result<StyleProfile> {
    let pairs = StyleEvidence::gather(source).pairs();
    if pairs.is_empty() {
        return Ok(StyleProfile(RoleFillerBundle::empty(cbs.seed(), cbs.dim())?));
    }
    build_profile(&pairs, cbs)
}

/// What restyling decided for one detected attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeChange {
    pub attribute: String,
    pub from: String,
    /// Cleaned-up target value, when it is a valid value for the attribute.
    pub to: Option<String>,
    pub score: f64,
    pub confident: bool,
    pub applied: bool,
}

impl AttributeChange {
    pub fn resolved(&self) -> bool {
        self.confident && self.to.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestyleOutcome {
    pub text: String,
    pub changes: Vec<AttributeChange>,
}

impl RestyleOutcome {
    pub fn unresolved(&self) -> impl Iterator<Item = &AttributeChange> {
        self.changes.iter().filter(|c| !c.resolved())
    }
}

fn translate_attribute<T: Copy + PartialEq>(
    attribute: &str,
    from: T,
    symbol: fn(T) -> &'static str,
    parse: fn(&str) -> Option<T>,
    mapping: &StyleMapping,
    values: &Codebook,
    tau: f64,
) -> Result<(AttributeChange, Option<T>)> {
    let result = translate_value(symbol(from), mapping, values, tau)?;
    let target = parse(&result.name);
    let change = AttributeChange {
        attribute: attribute.to_string(),
        from: symbol(from).to_string(),
        to: target.map(|t| symbol(t).to_string()),
        score: result.score,
        confident: result.confident,
        applied: result.confident && target.is_some_and(|t| t != from),
    };
    let apply = change.applied.then_some(target).flatten();
    Ok((change, apply))
}

/// Re-cases every code identifier written in `from` into `to`.
pub fn recase_identifiers(source: &str, from: NameFormat, to: NameFormat) -> String {
    let re = text::identifier_regex(from == NameFormat::KebabCase);
    let mut out = String::with_capacity(source.len());
    for (kind, range) in text::spans(source) {
        let span = &source[range];
        if kind == text::SpanKind::Literal {
            out.push_str(span);
            continue;
        }
        let mut last = 0;
        for m in re.find_iter(span) {
            if case::classify(m.as_str()) == Some(from) {
                out.push_str(&span[last..m.start()]);
                out.push_str(&case::convert(m.as_str(), to));
                last = m.end();
            }
        }
        out.push_str(&span[last..]);
    }
    out
}

/// Translates each detected attribute of `source` through `mapping` and
/// applies confident translations. Unresolved attributes are reported in
/// the outcome and leave the text untouched.
pub fn restyle(source: &str, mapping: &StyleMapping, cbs: &StyleCodebooks, tau: f64) -> Result<RestyleOutcome> {
    let evidence = StyleEvidence::gather(source);
    let mut text = source.to_string();
    let mut changes = Vec::new();

    if let Some(from) = evidence.name_format() {
        let (change, target) = translate_attribute(
            NAME_FORMAT,
            from,
            NameFormat::symbol,
            NameFormat::from_symbol,
            mapping,
            &cbs.values,
            tau,
        )?;
        if let Some(to) = target {
            text = recase_identifiers(&text, from, to);
        }
        changes.push(change);
    }
    if let Some(from) = evidence.indentation() {
        let (change, target) = translate_attribute(
            INDENTATION,
            from,
            Indentation::symbol,
            Indentation::from_symbol,
            mapping,
            &cbs.values,
            tau,
        )?;
        if let Some(to) = target {
            text = text::reindent(&text, from, to);
        }
        changes.push(change);
    }
    Ok(RestyleOutcome { text, changes })
}

//! Item memory: named codebooks of atomic hypervectors and nearest-neighbor
//! cleanup.
//!
//! A codebook only records names. Vectors are a pure function of
//! `(name, seed, dimension)` and are cached in memory for scanning, never
//! persisted.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::accumulator::Accumulator;
use crate::error::{HdvError, Result};
use crate::vector::{dot, Hypervector, Seed, TIEBREAK_NAME};

/// What a codebook's symbols stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodebookKind {
    Action,
    StyleAttribute,
    StyleValue,
    ContextRole,
    ContextFiller,
}

impl CodebookKind {
    pub fn label(self) -> &'static str {
        match self {
            CodebookKind::Action => "action",
            CodebookKind::StyleAttribute => "style-attribute",
            CodebookKind::StyleValue => "style-value",
            CodebookKind::ContextRole => "context-role",
            CodebookKind::ContextFiller => "context-filler",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        [
            CodebookKind::Action,
            CodebookKind::StyleAttribute,
            CodebookKind::StyleValue,
            CodebookKind::ContextRole,
            CodebookKind::ContextFiller,
        ]
        .into_iter()
        .find(|k| k.label() == label)
    }
}

impl fmt::Display for CodebookKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Default confidence threshold: four standard deviations of the null
/// similarity distribution.
pub fn default_tau(dimension: usize) -> f64 {
    4.0 / (dimension as f64).sqrt()
}

/// Outcome of a cleanup scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanupResult {
    pub name: String,
    pub score: f64,
    pub runner_up_score: f64,
    pub confident: bool,
}

#[derive(Debug, Clone)]
pub struct Codebook {
    seed: Seed,
    dimension: usize,
    kind: CodebookKind,
    names: Vec<String>,
    vectors: Vec<Hypervector>,
}

impl PartialEq for Codebook {
    fn eq(&self, other: &Self) -> bool {
        self.seed == other.seed
            && self.dimension == other.dimension
            && self.kind == other.kind
            && self.names == other.names
    }
}

impl Codebook {
    pub fn new(kind: CodebookKind, seed: Seed, dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(HdvError::InvalidDimension(dimension));
        }
        Ok(Self {
            seed,
            dimension,
            kind,
            names: Vec::new(),
            vectors: Vec::new(),
        })
    }

    pub fn with_names<S: AsRef<str>>(
        kind: CodebookKind,
        seed: Seed,
        dimension: usize,
        names: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let mut cb = Self::new(kind, seed, dimension)?;
        for name in names {
            cb.register(name.as_ref())?;
        }
        Ok(cb)
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    /// Names in registration order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same seed, dimension and kind; names may differ because vectors are
    /// derived from those three alone.
    pub fn is_compatible(&self, other: &Codebook) -> bool {
        self.seed == other.seed && self.dimension == other.dimension && self.kind == other.kind
    }

    /// Adds `name`; a no-op when already present.
    pub fn register(&mut self, name: &str) -> Result<&Hypervector> {
        if name.is_empty() {
            return Err(HdvError::EmptyName);
        }
        if name == TIEBREAK_NAME {
            return Err(HdvError::ReservedName(name.to_string()));
        }
        let index = match self.position(name) {
            Some(i) => i,
            None => {
                let v = Hypervector::generate(name, self.seed, self.dimension)?;
                self.names.push(name.to_string());
                self.vectors.push(v);
                self.names.len() - 1
            }
        };
        Ok(&self.vectors[index])
    }

    pub fn get(&self, name: &str) -> Option<&Hypervector> {
        self.position(name).map(|i| &self.vectors[i])
    }

    /// Like [`Codebook::get`] but reports the missing name as an error.
    pub fn lookup(&self, name: &str) -> Result<&Hypervector> {
        self.get(name).ok_or_else(|| HdvError::Unregistered {
            name: name.to_string(),
            kind: self.kind.label().to_string(),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Hypervector)> {
        self.names.iter().map(String::as_str).zip(&self.vectors)
    }

    /// Exhaustive argmax of similarity against `query`; ties go to the
    /// lexicographically smallest name.
    pub fn cleanup(&self, query: &Hypervector, tau: f64) -> Result<CleanupResult> {
        if query.dim() != self.dimension {
            return Err(HdvError::DimensionMismatch {
                left: self.dimension,
                right: query.dim(),
            });
        }
        let d = self.dimension as f64;
        self.scan(tau, |v| dot(query.components(), v.components()) as f64 / d)
    }

    /// Cleanup against a raw accumulator, scoring by cosine similarity.
    pub fn cleanup_sums(&self, query: &Accumulator, tau: f64) -> Result<CleanupResult> {
        if query.dim() != self.dimension {
            return Err(HdvError::DimensionMismatch {
                left: self.dimension,
                right: query.dim(),
            });
        }
        let norm =
            query.sums().iter().map(|&s| f64::from(s).powi(2)).sum::<f64>().sqrt() * (self.dimension as f64).sqrt();
        self.scan(tau, |v| {
            if norm == 0.0 {
                return 0.0;
            }
            let dot: i64 = query
                .sums()
                .iter()
                .zip(v.components())
                .map(|(&s, &c)| i64::from(s * i32::from(c)))
                .sum();
            dot as f64 / norm
        })
    }

    /// Similarity of `query` to every registered name, in registration order.
    pub fn scores(&self, query: &Hypervector) -> Result<Vec<(String, f64)>> {
        self.names
            .iter()
            .zip(&self.vectors)
            .map(|(n, v)| Ok((n.clone(), query.similarity(v)?)))
            .collect()
    }

    fn scan(&self, tau: f64, score: impl Fn(&Hypervector) -> f64) -> Result<CleanupResult> {
        if self.is_empty() {
            return Err(HdvError::EmptyCodebook);
        }
        let mut best: Option<(&str, f64)> = None;
        let mut runner_up = -1.0f64;
        for (name, v) in self.iter() {
            let s = score(v);
            match best {
                None => best = Some((name, s)),
                Some((best_name, best_score)) => {
                    if s > best_score || (s == best_score && name < best_name) {
                        runner_up = best_score;
                        best = Some((name, s));
                    } else if s > runner_up {
                        runner_up = s;
                    }
                }
            }
        }
        let (name, score) = best.expect("non-empty codebook");
        Ok(CleanupResult {
            name: name.to_string(),
            score,
            runner_up_score: runner_up,
            confident: score >= tau,
        })
    }

    pub fn to_file(&self) -> CodebookFile {
        CodebookFile {
            version: 1,
            dimension: self.dimension,
            seed: self.seed,
            kind: self.kind,
            names: self.names.clone(),
        }
    }

    pub fn from_file(file: CodebookFile) -> Result<Self> {
        if file.version != 1 {
            return Err(HdvError::Version(file.version));
        }
        Self::with_names(file.kind, file.seed, file.dimension, &file.names)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_file())?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_file(serde_json::from_str(&text)?)
    }
}

/// On-disk codebook: names only, vectors are regenerated on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookFile {
    pub version: u32,
    pub dimension: usize,
    pub seed: Seed,
    pub kind: CodebookKind,
    pub names: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn actions(names: &[&str]) -> Codebook {
        Codebook::with_names(CodebookKind::Action, Seed::DEFAULT, 10_000, names).unwrap()
    }

    #[test]
    fn register_matches_generate() {
        let mut cb = Codebook::new(CodebookKind::Action, Seed(5), 256).unwrap();
        let v = cb.register("OpenFile").unwrap().clone();
        assert_eq!(v, Hypervector::generate("OpenFile", Seed(5), 256).unwrap());
        assert_eq!(cb.lookup("OpenFile").unwrap(), &v);
    }

    #[test]
    fn register_is_idempotent() {
        let mut cb = Codebook::new(CodebookKind::Action, Seed(5), 256).unwrap();
        cb.register("OpenFile").unwrap();
        cb.register("OpenFile").unwrap();
        assert_eq!(cb.len(), 1);
    }

    #[test]
    fn register_rejects_reserved_and_empty() {
        let mut cb = Codebook::new(CodebookKind::Action, Seed(5), 256).unwrap();
        assert!(matches!(cb.register(TIEBREAK_NAME), Err(HdvError::ReservedName(_))));
        assert!(matches!(cb.register(""), Err(HdvError::EmptyName)));
    }

    #[test]
    fn cleanup_exact_member() {
        let cb = actions(&["OpenFile", "RunTest", "Commit"]);
        let r = cb.cleanup(cb.get("Commit").unwrap(), 0.1).unwrap();
        assert_eq!(r.name, "Commit");
        assert_eq!(r.score, 1.0);
        assert!(r.confident);
        assert!(r.runner_up_score < 0.05);
    }

    #[test]
    fn cleanup_empty_codebook() {
        let cb = actions(&[]);
        let q = Hypervector::identity(10_000).unwrap();
        assert!(matches!(cb.cleanup(&q, 0.1), Err(HdvError::EmptyCodebook)));
    }

    #[test]
    fn cleanup_ties_break_lexicographically() {
        // At D = 4 scores take only five values, so ties are common.
        let mut cb = Codebook::new(CodebookKind::Action, Seed(1), 4).unwrap();
        for name in ["zeta", "alpha", "mid"] {
            cb.register(name).unwrap();
        }
        let scores = cb.scores(&Hypervector::identity(4).unwrap()).unwrap();
        let best = scores.iter().map(|(_, s)| *s).fold(f64::MIN, f64::max);
        let mut tied: Vec<&str> = scores
            .iter()
            .filter(|(_, s)| *s == best)
            .map(|(n, _)| n.as_str())
            .collect();
        tied.sort();
        let r = cb.cleanup(&Hypervector::identity(4).unwrap(), 0.0).unwrap();
        assert_eq!(r.name, tied[0]);
    }

    #[test]
    fn cleanup_is_order_invariant() {
        let a = actions(&["a", "b", "c", "d"]);
        let b = actions(&["d", "c", "b", "a"]);
        let q = Hypervector::generate("query", Seed(3), 10_000).unwrap();
        assert_eq!(a.cleanup(&q, 0.04).unwrap(), b.cleanup(&q, 0.04).unwrap());
    }

    #[test]
    fn single_entry_runner_up_is_floor() {
        let cb = actions(&["only"]);
        let r = cb.cleanup(cb.get("only").unwrap(), 0.5).unwrap();
        assert_eq!(r.runner_up_score, -1.0);
    }

    #[test]
    fn file_round_trip_regenerates_vectors() {
        let cb = actions(&["OpenFile", "RunTest"]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cb.json");
        cb.save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(raw["version"], 1);
        assert_eq!(raw["kind"], "action");
        assert_eq!(raw["seed"], Seed::DEFAULT.0.to_string());
        let back = Codebook::load(&path).unwrap();
        assert_eq!(back, cb);
        assert_eq!(back.get("RunTest"), cb.get("RunTest"));
    }

    #[test]
    fn kind_labels_round_trip() {
        for label in [
            "action",
            "style-attribute",
            "style-value",
            "context-role",
            "context-filler",
        ] {
            assert_eq!(CodebookKind::from_label(label).unwrap().label(), label);
        }
    }

    #[test]
    fn default_tau_value() {
        assert!((default_tau(10_000) - 0.04).abs() < 1e-15);
    }
}

//! Next-action prediction from action n-grams.
//!
//! A window `(a_1, …, a_n)` is encoded as
//! `P^{n-1}(a_1) ⊗ P^{n-2}(a_2) ⊗ … ⊗ P^0(a_n)`, every sliding window of a
//! session is bundled into the user-behavior accumulator, and the next action
//! after a prefix of `n - 1` actions is read back by binding the normalized
//! bundle with the prefix encoding rotated once more and cleaning up against
//! the action codebook.

use std::path::Path;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::accumulator::Accumulator;
use crate::codebook::{CleanupResult, Codebook, CodebookKind};
use crate::error::{HdvError, Result};
use crate::events::{sessions, ActionEvent};
use crate::vector::{Hypervector, Seed};

pub const DEFAULT_ORDER: usize = 3;

/// Whether prediction unbinds from the sign-normalized bundle or the raw sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QueryMode {
    #[default]
    Normalized,
    Raw,
}

/// Encodes an ordered window of registered actions.
pub fn encode_window<S: AsRef<str>>(actions: &[S], cb: &Codebook) -> Result<Hypervector> {
    let (last, rest) = actions.split_last().ok_or(HdvError::EmptyInput("window"))?;
    let mut out = cb.lookup(last.as_ref())?.clone();
    for (i, action) in rest.iter().enumerate() {
        let exponent = (actions.len() - 1 - i) as i64;
        out.bind_assign(&cb.lookup(action.as_ref())?.permute(exponent))?;
    }
    Ok(out)
}

/// Query vector for a prefix: its encoding rotated once, which leaves the
/// unknown final position at `P^0`.
pub fn prefix_query<S: AsRef<str>>(prefix: &[S], cb: &Codebook) -> Result<Hypervector> {
    Ok(encode_window(prefix, cb)?.permute(1))
}

/// Trained user-behavior bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceModel {
    n: usize,
    behavior: Accumulator,
    codebook: Codebook,
}

impl SequenceModel {
    /// Empty model over an action codebook; the codebook may still grow
    /// during training.
    pub fn new(n: usize, codebook: Codebook) -> Result<Self> {
        if n < 2 {
            return Err(HdvError::InvalidOrder(n));
        }
        if codebook.kind() != CodebookKind::Action {
            return Err(HdvError::Incompatible {
                what: "codebook kind",
                detail: format!("expected action, got {}", codebook.kind()),
            });
        }
        let behavior = Accumulator::new(codebook.dim())?;
        Ok(Self { n, behavior, codebook })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn behavior(&self) -> &Accumulator {
        &self.behavior
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn windows_trained(&self) -> u64 {
        self.behavior.count()
    }

    pub fn seed(&self) -> Seed {
        self.codebook.seed()
    }

    pub fn dim(&self) -> usize {
        self.codebook.dim()
    }

    /// Folds every length-`n` window of one session into the bundle,
    /// registering unseen actions. Returns the number of windows added;
    /// sessions shorter than `n` add none.
    pub fn train_session<S: AsRef<str>>(&mut self, actions: &[S]) -> Result<usize> {
        if actions.len() < self.n {
            return Ok(0);
        }
        for a in actions {
            self.codebook.register(a.as_ref())?;
        }
        let mut added = 0;
        for window in actions.windows(self.n) {
            let v = encode_window(window, &self.codebook)?;
            self.behavior.add(&v)?;
            added += 1;
        }
        Ok(added)
    }

    /// Adds a single pre-encoded window vector.
    pub fn add_encoded(&mut self, window: &Hypervector) -> Result<()> {
        self.behavior.add(window)
    }

    pub fn normalized(&self) -> Result<Hypervector> {
        if self.behavior.is_empty() {
            return Err(HdvError::Untrained);
        }
        self.behavior.normalize(self.seed())
    }

    fn check_prefix<S: AsRef<str>>(&self, prefix: &[S]) -> Result<()> {
        if self.behavior.is_empty() {
            return Err(HdvError::Untrained);
        }
        if prefix.len() != self.n - 1 {
            return Err(HdvError::PrefixLength {
                expected: self.n - 1,
                got: prefix.len(),
            });
        }
        Ok(())
    }

    /// Predicts the action following `prefix` (length `n - 1`).
    pub fn predict<S: AsRef<str>>(&self, prefix: &[S], tau: f64) -> Result<CleanupResult> {
        self.predict_with(prefix, tau, QueryMode::Normalized)
    }

    pub fn predict_with<S: AsRef<str>>(&self, prefix: &[S], tau: f64, mode: QueryMode) -> Result<CleanupResult> {
        self.check_prefix(prefix)?;
        let query = prefix_query(prefix, &self.codebook)?;
        match mode {
            QueryMode::Normalized => {
                let unbound = self.normalized()?.bind(&query)?;
                self.codebook.cleanup(&unbound, tau)
            }
            QueryMode::Raw => {
                let unbound = self.behavior.bind(&query)?;
                self.codebook.cleanup_sums(&unbound, tau)
            }
        }
    }

    /// Predicts from a precomputed normalized bundle, for evaluation loops
    /// that query many prefixes.
    pub fn predict_from<S: AsRef<str>>(
        &self,
        normalized: &Hypervector,
        prefix: &[S],
        tau: f64,
    ) -> Result<CleanupResult> {
        self.check_prefix(prefix)?;
        let query = prefix_query(prefix, &self.codebook)?;
        self.codebook.cleanup(&normalized.bind(&query)?, tau)
    }

    /// Sums two models trained with the same order and codebook identity.
    /// The resulting vocabulary is the union, `self`'s names first.
    pub fn merge(&self, other: &SequenceModel) -> Result<SequenceModel> {
        if self.n != other.n {
            return Err(HdvError::Incompatible {
                what: "window length",
                detail: format!("{} vs {}", self.n, other.n),
            });
        }
        if !self.codebook.is_compatible(&other.codebook) {
            return Err(HdvError::Incompatible {
                what: "codebook",
                detail: format!(
                    "seed {} / D {} vs seed {} / D {}",
                    self.seed(),
                    self.dim(),
                    other.seed(),
                    other.dim()
                ),
            });
        }
        let mut merged = self.clone();
        for name in other.codebook.names() {
            merged.codebook.register(name)?;
        }
        merged.behavior.merge(&other.behavior)?;
        Ok(merged)
    }

    pub fn to_file(&self) -> ModelFile {
        let bytes: Vec<u8> = self.behavior.sums().iter().flat_map(|s| s.to_le_bytes()).collect();
        ModelFile {
            version: 1,
            n: self.n,
            dimension: self.dim(),
            seed: self.seed(),
            windows_trained: self.windows_trained(),
            codebook: self.codebook.names().to_vec(),
            sums: BASE64.encode(bytes),
        }
    }

    pub fn from_file(file: ModelFile) -> Result<Self> {
        if file.version != 1 {
            return Err(HdvError::Version(file.version));
        }
        let bytes = BASE64
            .decode(file.sums.as_bytes())
            .map_err(|e| HdvError::Format(format!("sums: {e}")))?;
        if bytes.len() != file.dimension * 4 {
            return Err(HdvError::Format(format!(
                "sums hold {} bytes, expected {}",
                bytes.len(),
                file.dimension * 4
            )));
        }
        let sums = bytes
            .chunks_exact(4)
            .map(|c| i32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        let behavior = Accumulator::from_parts(sums, file.windows_trained)?;
        let codebook = Codebook::with_names(CodebookKind::Action, file.seed, file.dimension, &file.codebook)?;
        let mut model = Self::new(file.n, codebook)?;
        model.behavior = behavior;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string(&self.to_file())?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_file(serde_json::from_str(&text)?)
    }
}

/// Trains a fresh model from an event log. Sessions shorter than `n` are
/// skipped with a warning; it is an error when none qualifies.
pub fn train(events: &[ActionEvent], n: usize, codebook: Codebook) -> Result<SequenceModel> {
    let mut model = SequenceModel::new(n, codebook)?;
    let mut qualified = 0usize;
    for session in sessions(events) {
        if session.actions.len() < n {
            log::warn!(
                "session {:?} has {} events, fewer than n = {n}; skipped",
                session.id,
                session.actions.len()
            );
            continue;
        }
        model.train_session(&session.actions)?;
        qualified += 1;
    }
    if qualified == 0 {
        return Err(HdvError::NoQualifyingSession { n });
    }
    Ok(model)
}

/// Persisted sequence model. `sums` is base64 of little-endian `i32`s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub version: u32,
    pub n: usize,
    pub dimension: usize,
    pub seed: Seed,
    pub windows_trained: u64,
    pub codebook: Vec<String>,
    pub sums: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: usize = 10_000;

    fn cb(names: &[&str]) -> Codebook {
        Codebook::with_names(CodebookKind::Action, Seed::DEFAULT, D, names).unwrap()
    }

    fn session(id: &str, actions: &[&str]) -> Vec<ActionEvent> {
        actions
            .iter()
            .enumerate()
            .map(|(i, a)| ActionEvent::new(i as i64, id, *a))
            .collect()
    }

    #[test]
    fn encode_window_of_three_actions() {
        let cb = cb(&["OpenFile", "RunTest", "Commit"]);
        let v = |n: &str| cb.get(n).unwrap().clone();
        let expected = v("OpenFile")
            .permute(2)
            .bind(&v("RunTest").permute(1).bind(&v("Commit")).unwrap())
            .unwrap();
        assert_eq!(
            encode_window(&["OpenFile", "RunTest", "Commit"], &cb).unwrap(),
            expected
        );
        assert_eq!(encode_window(&["Commit"], &cb).unwrap(), v("Commit"));
    }

    #[test]
    fn encode_window_hand_computed_d16() {
        // Rotated vectors and their product written out by hand.
        let mut cb = Codebook::new(CodebookKind::Action, Seed(11), 16).unwrap();
        for n in ["x", "y", "z"] {
            cb.register(n).unwrap();
        }
        let x = cb.get("x").unwrap().components().to_vec();
        let y = cb.get("y").unwrap().components().to_vec();
        let z = cb.get("z").unwrap().components().to_vec();
        let mut expected = vec![0i8; 16];
        for i in 0..16 {
            // P^k(v)[i] = v[(i - k) mod D]
            expected[i] = x[(i + 16 - 2) % 16] * y[(i + 16 - 1) % 16] * z[i];
        }
        assert_eq!(
            encode_window(&["x", "y", "z"], &cb).unwrap().components(),
            expected.as_slice()
        );
    }

    #[test]
    fn encode_window_errors() {
        let cb = cb(&["a"]);
        assert!(matches!(encode_window::<&str>(&[], &cb), Err(HdvError::EmptyInput(_))));
        assert!(matches!(
            encode_window(&["a", "b"], &cb),
            Err(HdvError::Unregistered { .. })
        ));
    }

    #[test]
    fn single_window_training_is_exact() {
        let events = session("s", &["OpenFile", "RunTest", "Commit"]);
        let model = train(&events, 3, cb(&[])).unwrap();
        assert_eq!(model.windows_trained(), 1);
        let window = encode_window(&["OpenFile", "RunTest", "Commit"], model.codebook()).unwrap();
        assert_eq!(model.normalized().unwrap(), window);
        let r = model.predict(&["OpenFile", "RunTest"], 0.04).unwrap();
        assert_eq!(r.name, "Commit");
        assert_eq!(r.score, 1.0);
        assert!(r.confident);
        let raw = model
            .predict_with(&["OpenFile", "RunTest"], 0.04, QueryMode::Raw)
            .unwrap();
        assert_eq!(raw.name, "Commit");
        assert!((raw.score - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sliding_window_count() {
        let events = session("s", &["a", "b", "c", "d", "e"]);
        let model = train(&events, 3, cb(&[])).unwrap();
        assert_eq!(model.windows_trained(), 3);
        assert_eq!(model.behavior().count(), 3);
    }

    #[test]
    fn short_sessions_skipped_and_all_short_is_error() {
        let mut events = session("short", &["a", "b"]);
        assert!(matches!(
            train(&events, 3, cb(&[])),
            Err(HdvError::NoQualifyingSession { n: 3 })
        ));
        events.extend(session("long", &["a", "b", "c"]));
        assert_eq!(train(&events, 3, cb(&[])).unwrap().windows_trained(), 1);
    }

    #[test]
    fn windows_do_not_span_sessions() {
        let mut events = session("s1", &["a", "b"]);
        events.extend(session("s2", &["c", "d", "e"]));
        let model = train(&events, 3, cb(&[])).unwrap();
        assert_eq!(model.windows_trained(), 1);
        let only = encode_window(&["c", "d", "e"], model.codebook()).unwrap();
        assert_eq!(model.normalized().unwrap(), only);
    }

    #[test]
    fn predict_errors() {
        let model = SequenceModel::new(3, cb(&["a", "b"])).unwrap();
        assert!(matches!(model.predict(&["a", "b"], 0.04), Err(HdvError::Untrained)));
        let model = train(&session("s", &["a", "b", "c"]), 3, cb(&[])).unwrap();
        assert!(matches!(
            model.predict(&["a"], 0.04),
            Err(HdvError::PrefixLength { expected: 2, got: 1 })
        ));
        assert!(matches!(
            model.predict(&["a", "zz"], 0.04),
            Err(HdvError::Unregistered { .. })
        ));
        assert!(matches!(SequenceModel::new(1, cb(&[])), Err(HdvError::InvalidOrder(1))));
    }

    #[test]
    fn merge_equals_joint_training() {
        let s1 = session("s1", &["a", "b", "c", "a"]);
        let s2 = session("s2", &["c", "b", "a", "d", "b"]);
        let m1 = train(&s1, 3, cb(&[])).unwrap();
        let m2 = train(&s2, 3, cb(&[])).unwrap();
        let joint = train(&[s1, s2].concat(), 3, cb(&[])).unwrap();
        let merged = m1.merge(&m2).unwrap();
        assert_eq!(merged.behavior().sums(), joint.behavior().sums());
        assert_eq!(merged.windows_trained(), joint.windows_trained());
        assert_eq!(m2.merge(&m1).unwrap().behavior(), merged.behavior());
        let empty = SequenceModel::new(3, cb(&[])).unwrap();
        assert_eq!(m1.merge(&empty).unwrap(), m1);
    }

    #[test]
    fn merge_rejects_mismatches() {
        let m3 = train(&session("s", &["a", "b", "c"]), 3, cb(&[])).unwrap();
        let m2 = train(&session("s", &["a", "b", "c"]), 2, cb(&[])).unwrap();
        assert!(m3.merge(&m2).is_err());
        let other_seed = Codebook::new(CodebookKind::Action, Seed(1), D).unwrap();
        let m_seed = train(&session("s", &["a", "b", "c"]), 3, other_seed).unwrap();
        assert!(m3.merge(&m_seed).is_err());
    }

    #[test]
    fn model_file_round_trip() {
        let events = session("s", &["a", "b", "c", "d", "a", "b", "e"]);
        let model = train(&events, 3, cb(&[])).unwrap();
        let file = model.to_file();
        let json = serde_json::to_string(&file).unwrap();
        let back = SequenceModel::from_file(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, model);
        let a = model.predict(&["a", "b"], 0.04).unwrap();
        let b = back.predict(&["a", "b"], 0.04).unwrap();
        assert_eq!(a.score.to_bits(), b.score.to_bits());
    }

    #[test]
    fn model_file_rejects_corruption() {
        let model = train(&session("s", &["a", "b", "c"]), 3, cb(&[])).unwrap();
        let mut file = model.to_file();
        file.sums = BASE64.encode([0u8; 8]);
        assert!(SequenceModel::from_file(file.clone()).is_err());
        file.version = 2;
        assert!(matches!(SequenceModel::from_file(file), Err(HdvError::Version(2))));
    }
}

//! JSON shapes printed under `--json`. Every report deserializes back into
//! the same type.

use hdv_core::harness::{SweepConfig, SweepRow};
use hdv_core::rolefiller::ProfileFile;
use hdv_core::{CleanupResult, CodebookKind, Seed};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub model: String,
    pub n: usize,
    pub dimension: usize,
    pub seed: Seed,
    pub sessions: usize,
    pub sessions_used: usize,
    pub windows_trained: u64,
    pub actions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictReport {
    pub prefix: Vec<String>,
    /// `normalized` or `raw`.
    pub mode: String,
    pub tau: f64,
    #[serde(flatten)]
    pub result: CleanupResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub windows: usize,
    /// Windows dropped because they contain actions the model never saw.
    pub skipped: usize,
    pub tau: f64,
    pub accuracy: f64,
    pub mean_match_score: f64,
    pub mean_top_distractor_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeReport {
    pub out: String,
    pub models: usize,
    pub windows_trained: u64,
    pub actions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookReport {
    pub path: String,
    pub kind: CodebookKind,
    pub dimension: usize,
    pub seed: Seed,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateReport {
    pub out: String,
    pub events: usize,
    pub sessions: usize,
    pub alphabet: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub path: Option<String>,
    #[serde(flatten)]
    pub profile: ProfileFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingReport {
    pub out: String,
    pub identity: bool,
    #[serde(flatten)]
    pub mapping: MappingFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslateReport {
    pub value: String,
    pub tau: f64,
    #[serde(flatten)]
    pub result: CleanupResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeReport {
    pub attribute: String,
    pub from: String,
    pub to: Option<String>,
    pub score: f64,
    pub confident: bool,
    pub applied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestyleReport {
    pub output: Option<String>,
    pub tau: f64,
    pub changes: Vec<ChangeReport>,
    /// Restyled text, present when no output path was given.
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryReport {
    /// `role` or `filler`: the kind of name that was asked about.
    pub by: String,
    pub key: String,
    pub tau: f64,
    #[serde(flatten)]
    pub result: CleanupResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffReport {
    pub similarity: f64,
    pub shared: Vec<[String; 2]>,
    pub only_a: Vec<[String; 2]>,
    pub only_b: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodedRole {
    pub role: String,
    pub expected: String,
    #[serde(flatten)]
    pub result: CleanupResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionReport {
    pub tau: f64,
    pub similarity_to_target: f64,
    pub decoded: Vec<DecodedRole>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepJson {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

/// On-disk style mapping: both profiles, so the map vector can be rebuilt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingFile {
    pub version: u32,
    pub source: ProfileFile,
    pub target: ProfileFile,
}

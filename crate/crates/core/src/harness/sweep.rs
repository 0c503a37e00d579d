//! Capacity and noise sweeps over the trigram prediction task.
//!
//! Each trial stores `K` windows with pairwise-distinct prefixes drawn from a
//! synthetic alphabet, optionally flips a fraction `f` of every window
//! vector's components before bundling, then asks the model for the
//! successor of every stored prefix.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behavior::{encode_window, SequenceModel};
use crate::codebook::{default_tau, Codebook, CodebookKind};
use crate::error::{HdvError, Result};
use crate::harness::markov::alphabet;
use crate::vector::{Seed, SplitMix64};

/// One evaluated cell, averaged over its trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub dimension: usize,
    pub alphabet: usize,
    pub windows: usize,
    pub noise: f64,
    pub trials: usize,
    pub accuracy: f64,
    pub mean_match_score: f64,
    pub mean_top_distractor_score: f64,
}

pub const CSV_HEADER: &str =
    "dimension,alphabet,windows,noise,trials,accuracy,mean_match_score,mean_top_distractor_score";

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{:.6},{},{:.6},{:.6},{:.6}",
            self.dimension,
            self.alphabet,
            self.windows,
            self.noise,
            self.trials,
            self.accuracy,
            self.mean_match_score,
            self.mean_top_distractor_score
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub dimensions: Vec<usize>,
    pub windows: Vec<usize>,
    #[serde(default = "default_noise")]
    pub noise: Vec<f64>,
    #[serde(default = "default_alphabet")]
    pub alphabet: usize,
    #[serde(default = "default_order")]
    pub n: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_seed")]
    pub seed: Seed,
    /// Confidence threshold; `4/√D` per cell when absent.
    #[serde(default)]
    pub tau: Option<f64>,
}

fn default_noise() -> Vec<f64> {
    vec![0.0]
}
fn default_alphabet() -> usize {
    20
}
fn default_order() -> usize {
    3
}
fn default_trials() -> usize {
    30
}
fn default_seed() -> Seed {
    Seed::DEFAULT
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HdvError::InvalidConfig(msg));
        if self.dimensions.is_empty() || self.windows.is_empty() || self.noise.is_empty() {
            return bad("dimensions, windows and noise must be non-empty".into());
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if let Some(&d) = self.dimensions.iter().find(|&&d| d < 2) {
            return bad(format!("dimension {d} is below 2"));
        }
        if let Some(f) = self.noise.iter().find(|f| !(0.0..=1.0).contains(*f)) {
            return bad(format!("noise fraction {f} outside [0, 1]"));
        }
        if self.alphabet < 2 {
            return bad("alphabet must have at least 2 actions".into());
        }
        let prefixes = (self.alphabet as f64).powi(self.n as i32 - 1);
        if let Some(&k) = self.windows.iter().find(|&&k| k == 0 || k as f64 > prefixes) {
            return bad(format!(
                "windows {k} must be in 1..={prefixes} for alphabet {} and n {}",
                self.alphabet, self.n
            ));
        }
        Ok(())
    }
}

/// Per-window statistics from one evaluation pass.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    windows: usize,
    correct: usize,
    match_sum: f64,
    distractor_sum: f64,
}

impl Tally {
    fn absorb(&mut self, other: Tally) {
        self.windows += other.windows;
        self.correct += other.correct;
        self.match_sum += other.match_sum;
        self.distractor_sum += other.distractor_sum;
    }

    fn mean(&self, value: f64) -> f64 {
        if self.windows == 0 {
            0.0
        } else {
            value / self.windows as f64
        }
    }
}

fn tally<S: AsRef<str>>(model: &SequenceModel, windows: &[Vec<S>], tau: f64) -> Result<Tally> {
    let n = model.order();
    if let Some(w) = windows.iter().find(|w| w.len() != n) {
        return Err(HdvError::Incompatible {
            what: "window length",
            detail: format!("model n = {n}, window has {}", w.len()),
        });
    }
    let normalized = model.normalized()?;
    let codebook = model.codebook();
    let mut t = Tally::default();
    for window in windows {
        let (truth, prefix) = window.split_last().expect("n >= 2");
        let truth = truth.as_ref();
        let query = crate::behavior::prefix_query(prefix, codebook)?;
        let unbound = normalized.bind(&query)?;
        let prediction = model.predict_from(&normalized, prefix, tau)?;
        let mut match_score = None;
        let mut top_distractor = -1.0f64;
        for (name, v) in codebook.iter() {
            let s = unbound.similarity(v)?;
            if name == truth {
                match_score = Some(s);
            } else {
                top_distractor = top_distractor.max(s);
            }
        }
        let match_score = match_score.ok_or_else(|| HdvError::Unregistered {
            name: truth.to_string(),
            kind: CodebookKind::Action.label().to_string(),
        })?;
        t.windows += 1;
        t.correct += usize::from(prediction.name == truth);
        t.match_sum += match_score;
        t.distractor_sum += top_distractor;
    }
    Ok(t)
}

/// Scores `model` on held-out windows of its own length `n`.
///
/// Accuracy counts windows whose predicted action equals the true final
/// action. The match score is the similarity of the unbound query to the
/// true action; the distractor score is the best similarity among the rest.
pub fn evaluate<S: AsRef<str>>(model: &SequenceModel, windows: &[Vec<S>], tau: f64) -> Result<SweepRow> {
    if windows.is_empty() {
        return Err(HdvError::EmptyInput("evaluation windows"));
    }
    let t = tally(model, windows, tau)?;
    Ok(SweepRow {
        dimension: model.dim(),
        alphabet: model.codebook().len(),
        windows: windows.len(),
        noise: 0.0,
        trials: 1,
        accuracy: t.correct as f64 / t.windows as f64,
        mean_match_score: t.mean(t.match_sum),
        mean_top_distractor_score: t.mean(t.distractor_sum),
    })
}

/// Draws `count` windows of length `n` over `names` whose prefixes are
/// pairwise distinct; successors are uniform.
pub fn distinct_prefix_windows(rng: &mut impl Rng, names: &[String], n: usize, count: usize) -> Vec<Vec<String>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let window: Vec<usize> = (0..n).map(|_| rng.random_range(0..names.len())).collect();
        if seen.insert(window[..n - 1].to_vec()) {
            out.push(window.into_iter().map(|i| names[i].clone()).collect());
        }
    }
    out
}

fn trial_seed(base: Seed, cell: usize, trial: usize) -> u64 {
    let mut mix = SplitMix64::new(base.0 ^ ((cell as u64) << 32) ^ trial as u64);
    mix.next_u64()
}

struct Cell {
    dimension: usize,
    windows: usize,
    noise: f64,
}

fn run_trial(config: &SweepConfig, cell: &Cell, seed: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = alphabet("a", config.alphabet);
    let codebook = Codebook::with_names(CodebookKind::Action, Seed(seed), cell.dimension, &names)?;
    let windows = distinct_prefix_windows(&mut rng, &names, config.n, cell.windows);
    let flips = (cell.noise * cell.dimension as f64).round() as usize;
    let mut model = SequenceModel::new(config.n, codebook)?;
    for window in &windows {
        let mut v = encode_window(window, model.codebook())?;
        if flips > 0 {
            v.flip(rand::seq::index::sample(&mut rng, cell.dimension, flips));
        }
        model.add_encoded(&v)?;
    }
    let tau = config.tau.unwrap_or_else(|| default_tau(cell.dimension));
    tally(&model, &windows, tau)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// CSV with `#` header comments carrying the config and seed.
    pub fn to_csv(&self) -> String {
        let c = &self.config;
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let _ = writeln!(out, "# hdv sweep");
        let _ = writeln!(out, "# seed={}", c.seed);
        let _ = writeln!(out, "# dimensions={}", list(&c.dimensions));
        let _ = writeln!(out, "# windows={}", list(&c.windows));
        let _ = writeln!(
            out,
            "# noise={}",
            c.noise.iter().map(|f| format!("{f:.6}")).collect::<Vec<_>>().join(" ")
        );
        let _ = writeln!(out, "# alphabet={} n={} trials={}", c.alphabet, c.n, c.trials);
        match c.tau {
            Some(t) => {
                let _ = writeln!(out, "# tau={t:.6}");
            }
            None => {
                let _ = writeln!(out, "# tau=4/sqrt(D)");
            }
        }
        let _ = writeln!(out, "{CSV_HEADER}");
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.csv_line());
        }
        out
    }
}

/// Full-factorial sweep over dimensions × windows × noise. Trials run in
/// parallel; each is seeded from `(config.seed, cell, trial)` so results do
/// not depend on scheduling.
pub fn sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let mut cells = Vec::new();
    for &dimension in &config.dimensions {
        for &windows in &config.windows {
            for &noise in &config.noise {
                cells.push(Cell {
                    dimension,
                    windows,
                    noise,
                });
            }
        }
    }
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.trials).map(move |t| (c, t)))
        .collect();
    let tallies: Vec<Result<Tally>> = jobs
        .par_iter()
        .map(|&(c, t)| run_trial(config, &cells[c], trial_seed(config.seed, c, t)))
        .collect();
    let mut per_cell = vec![Tally::default(); cells.len()];
    for (&(c, _), result) in jobs.iter().zip(tallies) {
        per_cell[c].absorb(result?);
    }
    let rows = cells
        .iter()
        .zip(per_cell)
        .map(|(cell, t)| SweepRow {
            dimension: cell.dimension,
            alphabet: config.alphabet,
            windows: cell.windows,
            noise: cell.noise,
            trials: config.trials,
            accuracy: t.correct as f64 / t.windows as f64,
            mean_match_score: t.mean(t.match_sum),
            mean_top_distractor_score: t.mean(t.distractor_sum),
        })
        .collect();
    Ok(SweepReport {
        config: config.clone(),
        rows,
    })
}

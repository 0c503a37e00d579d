use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HdvError, Result};
use crate::events::ActionEvent;

const ROW_TOLERANCE: f64 = 1e-9;

/// First-order Markov source of synthetic action sessions.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovGenerator {
    alphabet: Vec<String>,
    matrix: Vec<Vec<f64>>,
    seed: u64,
}

impl MarkovGenerator {
    /// Validates that `matrix` is square over `alphabet` and row-stochastic.
    pub fn new(alphabet: Vec<String>, matrix: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(HdvError::InvalidMatrix("empty alphabet".into()));
        }
        if matrix.len() != alphabet.len() {
            return Err(HdvError::InvalidMatrix(format!(
                "{} rows for {} actions",
                matrix.len(),
                alphabet.len()
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(HdvError::InvalidMatrix(format!("row {i} has {} entries", row.len())));
            }
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
                return Err(HdvError::InvalidMatrix(format!(
                    "row {i} has a negative or non-finite entry"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > ROW_TOLERANCE {
                return Err(HdvError::InvalidMatrix(format!("row {i} sums to {total}")));
            }
        }
        Ok(Self { alphabet, matrix, seed })
    }

    pub fn uniform(alphabet: Vec<String>, seed: u64) -> Result<Self> {
        let k = alphabet.len();
        Self::new(alphabet, vec![vec![1.0 / k as f64; k]; k], seed)
    }

    pub fn identity(alphabet: Vec<String>, seed: u64) -> Result<Self> {
        let k = alphabet.len();
        let matrix = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(alphabet, matrix, seed)
    }

    /// Random sparse-ish transitions: each row puts its mass on a few
    /// successors, which gives the sequence model something to learn.
    pub fn random(alphabet: Vec<String>, fan_out: usize, seed: u64) -> Result<Self> {
        let k = alphabet.len();
        let fan_out = fan_out.clamp(1, k.max(1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d61_726b_6f76);
        let matrix = (0..k)
            .map(|_| {
                let mut row = vec![0.0; k];
                for j in rand::seq::index::sample(&mut rng, k, fan_out) {
                    row[j] = rng.random_range(0.1..1.0);
                }
                let total: f64 = row.iter().sum();
                row.iter_mut().for_each(|p| *p /= total);
                row
            })
            .collect();
        Self::new(alphabet, matrix, seed)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    fn step(&self, rng: &mut ChaCha8Rng, from: usize) -> usize {
        let u: f64 = rng.random();
        let mut cumulative = 0.0;
        let row = &self.matrix[from];
        for (j, p) in row.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                return j;
            }
        }
        // Rounding left u above the final cumulative sum.
        row.iter().rposition(|&p| p > 0.0).unwrap_or(from)
    }

    /// Deterministic event stream. The first action of each session is
    /// uniform over the alphabet; timestamps advance by one second per step.
    pub fn generate_sessions(&self, sessions: usize, length: usize) -> Result<Vec<ActionEvent>> {
        if sessions == 0 || length == 0 {
            return Err(HdvError::InvalidConfig(
                "session count and length must be at least 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let width = sessions.to_string().len();
        let mut events = Vec::with_capacity(sessions * length);
        for s in 0..sessions {
            let id = format!("session-{s:0width$}");
            let base = (s * length) as i64 * 1000;
            let mut state = rng.random_range(0..self.alphabet.len());
            for step in 0..length {
                if step > 0 {
                    state = self.step(&mut rng, state);
                }
                events.push(ActionEvent::new(
                    base + step as i64 * 1000,
                    id.clone(),
                    self.alphabet[state].clone(),
                ));
            }
        }
        Ok(events)
    }
}

/// `prefix000`, `prefix001`, … zero-padded to the alphabet size.
pub fn alphabet(prefix: &str, size: usize) -> Vec<String> {
    let width = size.saturating_sub(1).to_string().len();
    (0..size).map(|i| format!("{prefix}{i:0width$}")).collect()
}

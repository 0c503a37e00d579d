//! Lossless integer bundling state.

use crate::error::{HdvError, Result};
use crate::vector::{check_same, Hypervector, Seed, TIEBREAK_NAME};

/// Largest number of vectors one accumulator may hold; every sum stays
/// inside `i32`.
pub const MAX_COUNT: u64 = i32::MAX as u64;

/// Componentwise sum of bundled hypervectors.
///
/// Invariants: `|sums[i]| <= count` and `sums[i] ≡ count (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accumulator {
    sums: Vec<i32>,
    count: u64,
}

impl Accumulator {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(HdvError::InvalidDimension(dimension));
        }
        Ok(Self {
            sums: vec![0; dimension],
            count: 0,
        })
    }

    /// Rebuilds an accumulator from persisted parts, checking both invariants.
    pub fn from_parts(sums: Vec<i32>, count: u64) -> Result<Self> {
        if sums.len() < 2 {
            return Err(HdvError::InvalidDimension(sums.len()));
        }
        if count > MAX_COUNT {
            return Err(HdvError::Overflow { limit: MAX_COUNT });
        }
        for (i, &s) in sums.iter().enumerate() {
            let magnitude = u64::from(s.unsigned_abs());
            if magnitude > count || (magnitude ^ count) & 1 == 1 {
                return Err(HdvError::Format(format!(
                    "sum {s} at index {i} is inconsistent with count {count}"
                )));
            }
        }
        Ok(Self { sums, count })
    }

    pub fn dim(&self) -> usize {
        self.sums.len()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn sums(&self) -> &[i32] {
        &self.sums
    }

    pub fn add(&mut self, v: &Hypervector) -> Result<()> {
        check_same(self.dim(), v.dim())?;
        if self.count + 1 > MAX_COUNT {
            return Err(HdvError::Overflow { limit: MAX_COUNT });
        }
        for (s, &c) in self.sums.iter_mut().zip(v.components()) {
            *s += i32::from(c);
        }
        self.count += 1;
        Ok(())
    }

    /// Consuming form of [`Accumulator::add`].
    pub fn accumulate(mut self, v: &Hypervector) -> Result<Self> {
        self.add(v)?;
        Ok(self)
    }

    /// Adds another accumulator's sums into this one. Associative and commutative.
    pub fn merge(&mut self, other: &Accumulator) -> Result<()> {
        check_same(self.dim(), other.dim())?;
        if self.count + other.count > MAX_COUNT {
            return Err(HdvError::Overflow { limit: MAX_COUNT });
        }
        for (s, &o) in self.sums.iter_mut().zip(&other.sums) {
            *s += o;
        }
        self.count += other.count;
        Ok(())
    }

    /// Multiplies every sum by the matching component of `key`, which is the
    /// accumulator of the bound inputs.
    pub fn bind(&self, key: &Hypervector) -> Result<Accumulator> {
        check_same(self.dim(), key.dim())?;
        Ok(Self {
            sums: self
                .sums
                .iter()
                .zip(key.components())
                .map(|(&s, &k)| s * i32::from(k))
                .collect(),
            count: self.count,
        })
    }

    /// Sign of each sum; zero sums take the component of the reserved
    /// tie-break vector for `seed`.
    pub fn normalize(&self, seed: Seed) -> Result<Hypervector> {
        if self.is_empty() {
            return Err(HdvError::EmptyAccumulator);
        }
        let mut tiebreak = None;
        if self.sums.contains(&0) {
            tiebreak = Some(Hypervector::generate(TIEBREAK_NAME, seed, self.dim())?);
        }
        Ok(self.normalize_with(|i| tiebreak.as_ref().map_or(1, |t| t.components()[i])))
    }

    /// Normalizes with an explicit tie-break vector.
    pub fn normalize_with_tiebreak(&self, tiebreak: &Hypervector) -> Result<Hypervector> {
        if self.is_empty() {
            return Err(HdvError::EmptyAccumulator);
        }
        check_same(self.dim(), tiebreak.dim())?;
        Ok(self.normalize_with(|i| tiebreak.components()[i]))
    }

    fn normalize_with(&self, tie: impl Fn(usize) -> i8) -> Hypervector {
        let components = self
            .sums
            .iter()
            .enumerate()
            .map(|(i, &s)| match s.signum() {
                1 => 1,
                -1 => -1,
                _ => tie(i),
            })
            .collect();
        Hypervector::from_components_unchecked(components)
    }

    /// Cosine similarity between the raw sums and a bipolar vector.
    pub fn cosine(&self, v: &Hypervector) -> Result<f64> {
        check_same(self.dim(), v.dim())?;
        let norm = self.sums.iter().map(|&s| f64::from(s).powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let dot: i64 = self
            .sums
            .iter()
            .zip(v.components())
            .map(|(&s, &c)| i64::from(s) * i64::from(c))
            .sum();
        Ok(dot as f64 / (norm * (self.dim() as f64).sqrt()))
    }
}

/// Bundles `vectors` and normalizes the result.
pub fn bundle<'a>(vectors: impl IntoIterator<Item = &'a Hypervector>, seed: Seed) -> Result<Hypervector> {
    let mut iter = vectors.into_iter().peekable();
    let first = iter.peek().ok_or(HdvError::EmptyAccumulator)?;
    let mut acc = Accumulator::new(first.dim())?;
    for v in iter {
        acc.add(v)?;
    }
    acc.normalize(seed)
}

//! Bipolar hypervectors and the MAP operations over them.
//!
//! Every vector is a dense sequence of `-1`/`+1` components. Binding is
//! componentwise multiplication, permutation is a cyclic right rotation, and
//! similarity is the normalized dot product (which equals cosine similarity
//! for bipolar data).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HdvError, Result};

/// Default dimensionality.
pub const DEFAULT_DIMENSION: usize = 10_000;

/// Name of the reserved vector used to break ties during normalization.
pub const TIEBREAK_NAME: &str = "__tiebreak__";

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Global seed from which every atomic vector is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

impl Seed {
    pub const DEFAULT: Seed = Seed(0x5EED_5EED_5EED_5EED);

    /// Parses a decimal or `0x`-prefixed hexadecimal seed.
    pub fn parse(text: &str) -> Option<Seed> {
        let text = text.trim().replace('_', "");
        let value = match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16).ok()?,
            None => text.parse().ok()?,
        };
        Some(Seed(value))
    }
}

impl Default for Seed {
    fn default() -> Self {
        Seed::DEFAULT
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Seeds travel as decimal strings so 64-bit values survive JSON readers that
// only have doubles.
impl Serialize for Seed {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse::<u64>()
            .map(Seed)
            .map_err(|_| serde::de::Error::custom(format!("invalid seed {text:?}")))
    }
}

/// 64-bit FNV-1a over raw bytes.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |hash, &b| (hash ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(state: u64) -> Self {
        Self { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Dense bipolar hypervector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypervector {
    components: Vec<i8>,
}

impl fmt::Debug for Hypervector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        write!(f, "Hypervector(D={}, [", self.dim())?;
        for (i, c) in self.components.iter().take(SHOWN).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *c > 0 { "+" } else { "-" })?;
        }
        if self.dim() > SHOWN {
            f.write_str(",..")?;
        }
        f.write_str("])")
    }
}

fn check_dimension(dimension: usize) -> Result<()> {
    if dimension < 2 {
        return Err(HdvError::InvalidDimension(dimension));
    }
    Ok(())
}

pub(crate) fn check_same(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(HdvError::DimensionMismatch { left, right });
    }
    Ok(())
}

impl Hypervector {
    /// Deterministically derives the atomic vector for `name`.
    ///
    /// The name is hashed with FNV-1a-64 and XORed with the global seed; the
    /// result initializes a SplitMix64 stream whose words are consumed
    /// most-significant bit first, a set bit mapping to `+1`.
    pub fn generate(name: &str, seed: Seed, dimension: usize) -> Result<Self> {
        if name.is_empty() {
            return Err(HdvError::EmptyName);
        }
        check_dimension(dimension)?;
        let mut rng = SplitMix64::new(fnv1a64(name.as_bytes()) ^ seed.0);
        let mut components = Vec::with_capacity(dimension);
        while components.len() < dimension {
            let word = rng.next_u64();
            let take = (dimension - components.len()).min(64);
            components.extend((0..take).map(|bit| if (word >> (63 - bit)) & 1 == 1 { 1i8 } else { -1 }));
        }
        Ok(Self { components })
    }

    /// Builds a vector from explicit components, rejecting anything not ±1.
    pub fn from_components(components: Vec<i8>) -> Result<Self> {
        check_dimension(components.len())?;
        if let Some((index, &value)) = components.iter().enumerate().find(|(_, c)| c.abs() != 1) {
            return Err(HdvError::NotBipolar {
                index,
                value: value.into(),
            });
        }
        Ok(Self { components })
    }

    pub(crate) fn from_components_unchecked(components: Vec<i8>) -> Self {
        debug_assert!(components.iter().all(|c| c.abs() == 1));
        Self { components }
    }

    /// The all-`+1` vector, the identity element of binding.
    pub fn identity(dimension: usize) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(Self {
            components: vec![1; dimension],
        })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[i8] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(|&c| c == 1)
    }

    /// Componentwise product.
    pub fn bind(&self, other: &Hypervector) -> Result<Hypervector> {
        check_same(self.dim(), other.dim())?;
        Ok(Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Binds in place; `self` keeps its allocation.
    pub fn bind_assign(&mut self, other: &Hypervector) -> Result<()> {
        check_same(self.dim(), other.dim())?;
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            *a *= b;
        }
        Ok(())
    }

    /// Cyclic right rotation by `k` (negative `k` rotates left):
    /// `result[(i + k) mod D] = self[i]`.
    pub fn permute(&self, k: i64) -> Hypervector {
        let mut components = self.components.clone();
        let shift = k.rem_euclid(self.dim() as i64) as usize;
        components.rotate_right(shift);
        Self { components }
    }

    /// Normalized dot product in `[-1, 1]`.
    pub fn similarity(&self, other: &Hypervector) -> Result<f64> {
        check_same(self.dim(), other.dim())?;
        Ok(dot(&self.components, &other.components) as f64 / self.dim() as f64)
    }

    /// Flips the sign of every component.
    pub fn negate(&self) -> Hypervector {
        Self {
            components: self.components.iter().map(|c| -c).collect(),
        }
    }

    /// Flips the components at the given indices.
    pub fn flip(&mut self, indices: impl IntoIterator<Item = usize>) {
        for i in indices {
            self.components[i] = -self.components[i];
        }
    }
}

pub(crate) fn dot(a: &[i8], b: &[i8]) -> i64 {
    // Chunked so the inner sum fits in i32 lanes and vectorizes.
    a.chunks(4096)
        .zip(b.chunks(4096))
        .map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| i32::from(p) * i32::from(q)).sum::<i32>() as i64)
        .sum()
}

/// Free-function form of [`Hypervector::generate`].
pub fn generate(name: &str, seed: Seed, dimension: usize) -> Result<Hypervector> {
    Hypervector::generate(name, seed, dimension)
}

pub fn bind(a: &Hypervector, b: &Hypervector) -> Result<Hypervector> {
    a.bind(b)
}

pub fn permute(a: &Hypervector, k: i64) -> Hypervector {
    a.permute(k)
}

pub fn similarity(a: &Hypervector, b: &Hypervector) -> Result<f64> {
    a.similarity(b)
}

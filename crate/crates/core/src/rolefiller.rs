//! Role-filler bundles: `(role ⊗ filler) ⊕ (role ⊗ filler) ⊕ …`.
//!
//! Style profiles and project contexts share this construction.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::accumulator::Accumulator;
use crate::codebook::{CleanupResult, Codebook};
use crate::error::{HdvError, Result};
use crate::vector::{fnv1a64, Hypervector, Seed, TIEBREAK_NAME};

#[derive(Debug, Clone, PartialEq)]
pub struct RoleFillerBundle {
    pairs: Vec<(String, String)>,
    encoding: Accumulator,
    seed: Seed,
}

impl RoleFillerBundle {
    /// Bundle with no pairs. It has a dimension but cannot be normalized.
    pub fn empty(seed: Seed, dimension: usize) -> Result<Self> {
        Ok(Self {
            pairs: Vec::new(),
            encoding: Accumulator::new(dimension)?,
            seed,
        })
    }

    /// Binds each pair and bundles the results, registering names as needed.
    /// `role_label` names the role kind in duplicate errors.
    pub fn build<R: AsRef<str>, F: AsRef<str>>(
        pairs: &[(R, F)],
        roles: &mut Codebook,
        fillers: &mut Codebook,
        role_label: &'static str,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(HdvError::EmptyInput("role-filler pairs"));
        }
        if !same_space(roles, fillers) {
            return Err(HdvError::Incompatible {
                what: "codebooks",
                detail: "role and filler codebooks differ in seed or dimension".into(),
            });
        }
        let mut bundle = Self::empty(roles.seed(), roles.dim())?;
        for (role, filler) in pairs {
            bundle.insert(role.as_ref(), filler.as_ref(), roles, fillers, role_label)?;
        }
        Ok(bundle)
    }

    pub fn insert(
        &mut self,
        role: &str,
        filler: &str,
        roles: &mut Codebook,
        fillers: &mut Codebook,
        role_label: &'static str,
    ) -> Result<()> {
        if self.pairs.iter().any(|(r, _)| r == role) {
            return Err(HdvError::Duplicate {
                what: role_label,
                name: role.to_string(),
            });
        }
        let r = roles.register(role)?.clone();
        let f = fillers.register(filler)?;
        self.encoding.add(&r.bind(f)?)?;
        self.pairs.push((role.to_string(), filler.to_string()));
        Ok(())
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn encoding(&self) -> &Accumulator {
        &self.encoding
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.encoding.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn filler_of(&self, role: &str) -> Option<&str> {
        self.pairs.iter().find(|(r, _)| r == role).map(|(_, f)| f.as_str())
    }

    /// Sign-normalized bundle. Ties take the reserved tie-break vector rotated
    /// by a shift hashed from the sums, so distinct even-count bundles do not
    /// share tie components.
    pub fn normalized(&self) -> Result<Hypervector> {
        if self.encoding.is_empty() {
            return Err(HdvError::EmptyAccumulator);
        }
        let tiebreak = Hypervector::generate(TIEBREAK_NAME, self.seed, self.dim())?.permute(self.tiebreak_shift());
        self.encoding.normalize_with_tiebreak(&tiebreak)
    }

    fn tiebreak_shift(&self) -> i64 {
        let bytes: Vec<u8> = self.encoding.sums().iter().flat_map(|s| s.to_le_bytes()).collect();
        (fnv1a64(&bytes) % self.dim() as u64) as i64
    }

    pub fn check_compatible(&self, other: &RoleFillerBundle) -> Result<()> {
        if self.seed != other.seed || self.dim() != other.dim() {
            return Err(HdvError::Incompatible {
                what: "profiles",
                detail: format!(
                    "seed {} / D {} vs seed {} / D {}",
                    self.seed,
                    self.dim(),
                    other.seed,
                    other.dim()
                ),
            });
        }
        Ok(())
    }

    /// Unbinds `key` from the normalized bundle and cleans up in `target`.
    pub fn unbind(&self, key: &Hypervector, target: &Codebook, tau: f64) -> Result<CleanupResult> {
        target.cleanup(&key.bind(&self.normalized()?)?, tau)
    }

    pub fn similarity(&self, other: &RoleFillerBundle) -> Result<f64> {
        self.check_compatible(other)?;
        self.normalized()?.similarity(&other.normalized()?)
    }

    /// Binding of both normalized bundles; symmetric in its arguments.
    pub fn mapping_to(&self, other: &RoleFillerBundle) -> Result<Hypervector> {
        self.check_compatible(other)?;
        self.normalized()?.bind(&other.normalized()?)
    }

    pub fn to_file(&self) -> ProfileFile {
        ProfileFile {
            version: 1,
            dimension: self.dim(),
            seed: self.seed,
            pairs: self.pairs.iter().map(|(r, f)| [r.clone(), f.clone()]).collect(),
        }
    }
}

fn same_space(a: &Codebook, b: &Codebook) -> bool {
    a.seed() == b.seed() && a.dim() == b.dim()
}

/// On-disk profile or context: the pairs only; encodings are rebuilt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub version: u32,
    pub dimension: usize,
    pub seed: Seed,
    pub pairs: Vec<[String; 2]>,
}

impl ProfileFile {
    pub fn check_version(&self) -> Result<()> {
        if self.version != 1 {
            return Err(HdvError::Version(self.version));
        }
        Ok(())
    }

    pub fn pair_tuples(&self) -> Vec<(String, String)> {
        self.pairs.iter().map(|[r, f]| (r.clone(), f.clone())).collect()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file: ProfileFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        file.check_version()?;
        Ok(file)
    }
}

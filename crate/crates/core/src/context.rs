//! Project context as a role-filler bundle, e.g.
//! `(LANG ⊗ Python) ⊕ (API ⊗ TensorFlow) ⊕ (Pattern ⊗ Observer)`.
//!
//! Construction is shared with style profiles. A transition between two
//! contexts is the binding of their normalized bundles.

use crate::codebook::{CleanupResult, Codebook, CodebookKind};
use crate::error::{HdvError, Result};
use crate::rolefiller::{ProfileFile, RoleFillerBundle};
use crate::vector::{Hypervector, Seed};

#[derive(Debug, Clone, PartialEq)]
pub struct ContextCodebooks {
    pub roles: Codebook,
    pub fillers: Codebook,
}

impl ContextCodebooks {
    pub fn new(seed: Seed, dimension: usize) -> Result<Self> {
        Ok(Self {
            roles: Codebook::new(CodebookKind::ContextRole, seed, dimension)?,
            fillers: Codebook::new(CodebookKind::ContextFiller, seed, dimension)?,
        })
    }

    pub fn seed(&self) -> Seed {
        self.roles.seed()
    }

    pub fn dim(&self) -> usize {
        self.roles.dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextProfile(RoleFillerBundle);

impl ContextProfile {
    pub fn bundle(&self) -> &RoleFillerBundle {
        &self.0
    }

    pub fn pairs(&self) -> &[(String, String)] {
        self.0.pairs()
    }

    pub fn normalized(&self) -> Result<Hypervector> {
        self.0.normalized()
    }

    pub fn to_file(&self) -> ProfileFile {
        self.0.to_file()
    }

    pub fn from_file(file: &ProfileFile, cbs: &mut ContextCodebooks) -> Result<Self> {
        file.check_version()?;
        if file.seed != cbs.seed() || file.dimension != cbs.dim() {
            return Err(HdvError::Incompatible {
                what: "context",
                detail: format!(
                    "context has seed {} / D {}, codebooks have seed {} / D {}",
                    file.seed,
                    file.dimension,
                    cbs.seed(),
                    cbs.dim()
                ),
            });
        }
        encode_context(&file.pair_tuples(), cbs)
    }
}

pub fn encode_context<R: AsRef<str>, F: AsRef<str>>(
    pairs: &[(R, F)],
    cbs: &mut ContextCodebooks,
) -> Result<ContextProfile> {
    RoleFillerBundle::build(pairs, &mut cbs.roles, &mut cbs.fillers, "role").map(ContextProfile)
}

/// Which filler is bound to `role`: `cleanup(fillers, role ⊗ normalize(ctx))`.
pub fn query_role(ctx: &ContextProfile, role: &str, cbs: &ContextCodebooks, tau: f64) -> Result<CleanupResult> {
    ctx.0.unbind(cbs.roles.lookup(role)?, &cbs.fillers, tau)
}

/// The reverse query: which role holds `filler`.
pub fn query_filler(ctx: &ContextProfile, filler: &str, cbs: &ContextCodebooks, tau: f64) -> Result<CleanupResult> {
    ctx.0.unbind(cbs.fillers.lookup(filler)?, &cbs.roles, tau)
}

pub fn context_similarity(a: &ContextProfile, b: &ContextProfile) -> Result<f64> {
    a.0.similarity(&b.0)
}

/// `normalize(from) ⊗ normalize(to)`; symmetric in its arguments.
pub fn transition_map(from: &ContextProfile, to: &ContextProfile) -> Result<Hypervector> {
    from.0.mapping_to(&to.0)
}

/// Moves a context through a transition map.
pub fn apply_transition(map: &Hypervector, ctx: &ContextProfile) -> Result<Hypervector> {
    map.bind(&ctx.normalized()?)
}

//! Hyperdimensional computing over bipolar hypervectors using the
//! Multiply-Add-Permute operations, with three developer-modeling
//! applications built on top:
//!
//! - [`behavior`]: next-action prediction from action n-grams,
//! - [`style`]: stylistic-preference mapping and source restyling,
//! - [`context`]: project-context bundles, role queries and transitions.
//!
//! ```
//! use hdv_core::{Codebook, CodebookKind, Seed};
//! use hdv_core::behavior::SequenceModel;
//!
//! let cb = Codebook::new(CodebookKind::Action, Seed::DEFAULT, 10_000).unwrap();
//! let mut model = SequenceModel::new(3, cb).unwrap();
//! model.train_session(&["OpenFile", "RunTest", "Commit"]).unwrap();
//! let next = model.predict(&["OpenFile", "RunTest"], 0.04).unwrap();
//! assert_eq!(next.name, "Commit");
//! assert_eq!(next.score, 1.0);
//! ```

pub mod accumulator;
pub mod behavior;
pub mod codebook;
pub mod context;
pub mod error;
pub mod events;
pub mod harness;
pub mod rolefiller;
pub mod style;
pub mod vector;

pub use accumulator::{bundle, Accumulator};
pub use codebook::{default_tau, CleanupResult, Codebook, CodebookKind};
pub use error::{HdvError, Result};
pub use vector::{bind, generate, permute, similarity, Hypervector, Seed, DEFAULT_DIMENSION};

//! Exact calculus for torus mapping classes, plumbings, Seifert spaces,
//! surgery cobordisms and toric contact layers.

pub mod claims;
pub mod cobordism;
pub mod error;
pub mod json;
pub mod layers;
pub mod linalg;
pub mod mcg;
pub mod par;
pub mod parse;
pub mod plumbing;
pub mod seifert;

pub use error::{Error, Result};
pub use linalg::{AbelianGroup, Inertia, IntMatrix, SnfResult};
pub use mcg::{Sl2, Slope, TwistFactor, TwistWord};
pub use par::Parallelism;
pub use parse::parse_word;
pub use plumbing::{CatalogId, PlumbingGraph};
pub use seifert::{DeltaParams, SeifertData};

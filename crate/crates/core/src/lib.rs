//! Character-level edit tagging for grammatical error correction.
//!
//! The crate turns parallel erroneous/corrected sentences into per-token (or
//! per-subword) edit tags, compresses and prunes the resulting tag
//! vocabulary, applies predicted tags back onto text, combines several
//! systems by edit-level voting and scores output against gold edits.
//!
//! The pipeline, in order of use:
//!
//! * [`textcore`]: whitespace tokenization, greedy longest-match subword
//!   segmentation and the punctuation predicate.
//! * [`align`]: word-level alignment with merge/split refinement and
//!   character-level alignment inside each aligned unit.
//! * [`editlang`]: the tag language itself (extraction, compression,
//!   application, punctuation segregation, vocabularies, file formats).
//! * [`taggers`]: oracle and lookup taggers, iterative/cascaded inference and
//!   majority-vote ensembling.
//! * [`score`]: span-edit extraction, M²-style scoring and the approximate
//!   randomization significance test.
//! * [`synth`]: seeded synthetic parallel corpora for tests and benchmarks.

pub mod align;
pub mod editlang;
mod error;
pub mod score;
pub mod synth;
pub mod taggers;
pub mod textcore;

pub use error::{Error, Result};
pub use textcore::Sentence;

//! The edit-tag language.
//!
//! A tag is a sequence of character operations attached to one source unit
//! (a word or a subword). Applying every unit's tag in order rewrites the
//! erroneous sentence into its correction:
//!
//! | op      | effect                                                   |
//! |---------|----------------------------------------------------------|
//! | `K`     | keep one character                                       |
//! | `D`     | delete one character                                     |
//! | `K*`    | keep a run of characters (length fixed at application)   |
//! | `D*`    | delete a run of characters                               |
//! | `R_[c]` | replace one character with `c`                           |
//! | `I_[s]` | insert `s` before the next consumed character            |
//! | `A_[s]` | append `s` after the unit; spaces open new tokens        |
//! | `M`     | join with the preceding token (first op only)            |

mod apply;
mod compress;
mod coverage;
mod extract;
mod segregate;
mod tag;
mod tagfile;
mod vocab;

pub use apply::{apply_tags, apply_units};
pub use compress::{compress, compression_candidates, Candidate, CompressionSelector};
pub use coverage::{coverage_stats, CoverageReport};
pub use extract::{extract_edits, extract_with, project_onto_subwords, word_level_ops};
pub use segregate::{classify_unit, is_punct_only, segregate, OpClass, Segregated};
pub use tag::{CharOp, EditTag, KEEP_TAG};
pub use tagfile::TagFile;
pub use vocab::EditVocabulary;

use std::fmt;
use std::str::FromStr;

use crate::textcore::{Sentence, SubwordSegmentation, SubwordVocab};

/// Unit of tagging.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Granularity {
    Word,
    Subword,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Word => "word",
            Granularity::Subword => "subword",
        })
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Granularity, String> {
        match s {
            "word" => Ok(Granularity::Word),
            "subword" => Ok(Granularity::Subword),
            other => Err(format!("unknown granularity {other:?}")),
        }
    }
}

/// How sentences are cut into tagging units.
#[derive(Clone, Copy, Debug)]
pub enum Segmenter<'a> {
    Word,
    Subword(&'a SubwordVocab),
}

impl<'a> Segmenter<'a> {
    pub fn granularity(&self) -> Granularity {
        match self {
            Segmenter::Word => Granularity::Word,
            Segmenter::Subword(_) => Granularity::Subword,
        }
    }

    pub fn segment(&self, sentence: &Sentence) -> Option<SubwordSegmentation> {
        match self {
            Segmenter::Word => None,
            Segmenter::Subword(vocab) => Some(SubwordSegmentation::new(sentence, vocab)),
        }
    }

    /// Units of `sentence` tagged with `tag`.
    pub fn uniform(&self, sentence: &Sentence, tag: &EditTag) -> TaggedSentence {
        let seg = self.segment(sentence);
        TaggedSentence::from_units(sentence, seg.as_ref(), |_| tag.clone())
    }
}

/// One tagged unit: its surface characters, the index of the word it
/// belongs to and its tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedUnit {
    pub surface: String,
    pub word: usize,
    pub tag: EditTag,
}

impl TaggedUnit {
    pub fn char_len(&self) -> usize {
        self.surface.chars().count()
    }
}

/// A sentence's units in order, with their tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedSentence {
    pub granularity: Granularity,
    pub units: Vec<TaggedUnit>,
}

impl TaggedSentence {
    /// Builds the unit list for `sentence`, tagging unit `i` with `tag_for(i)`.
    pub fn from_units(
        sentence: &Sentence,
        seg: Option<&SubwordSegmentation>,
        mut tag_for: impl FnMut(usize) -> EditTag,
    ) -> TaggedSentence {
        let mut units = Vec::new();
        match seg {
            None => {
                for (w, token) in sentence.tokens().iter().enumerate() {
                    units.push(TaggedUnit {
                        surface: token.clone(),
                        word: w,
                        tag: tag_for(units.len()),
                    });
                }
            }
            Some(seg) => {
                for (w, (token, spans)) in sentence.tokens().iter().zip(&seg.tokens).enumerate() {
                    let chars: Vec<char> = token.chars().collect();
                    for span in spans {
                        units.push(TaggedUnit {
                            surface: chars[span.clone()].iter().collect(),
                            word: w,
                            tag: tag_for(units.len()),
                        });
                    }
                }
            }
        }
        TaggedSentence {
            granularity: if seg.is_some() {
                Granularity::Subword
            } else {
                Granularity::Word
            },
            units,
        }
    }

    /// The source sentence spelled by the unit surfaces.
    pub fn source(&self) -> Sentence {
        let mut tokens: Vec<String> = Vec::new();
        let mut last = None;
        for unit in &self.units {
            if last == Some(unit.word) {
                if let Some(t) = tokens.last_mut() {
                    t.push_str(&unit.surface);
                }
            } else {
                tokens.push(unit.surface.clone());
            }
            last = Some(unit.word);
        }
        Sentence::from_tokens(tokens)
    }

    pub fn tags(&self) -> impl Iterator<Item = &EditTag> {
        self.units.iter().map(|u| &u.tag)
    }

    /// Replaces every tag through `f`.
    pub fn map_tags(mut self, mut f: impl FnMut(&EditTag) -> EditTag) -> TaggedSentence {
        for unit in &mut self.units {
            unit.tag = f(&unit.tag);
        }
        self
    }

    /// Whether every tag is a keep.
    pub fn is_all_keep(&self) -> bool {
        self.units.iter().all(|u| u.tag.is_keep())
    }
}

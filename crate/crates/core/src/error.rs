use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed tag {tag:?}: {reason}")]
    TagSyntax { tag: String, reason: &'static str },

    #[error("tag {tag} needs at least {needed} source characters, unit has {available}")]
    ExpansionUnderflow {
        tag: String,
        needed: usize,
        available: usize,
    },

    #[error("tag {0} has more than one starred operation")]
    AmbiguousTag(String),

    #[error("tag {tag} consumes exactly {needed} characters, unit has {available}")]
    LengthMismatch {
        tag: String,
        needed: usize,
        available: usize,
    },

    #[error("unit {unit}: {source}")]
    AtUnit {
        unit: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("round {round}: {source}")]
    AtRound {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("segmentation of token {token} ({surface:?}) is inconsistent: {reason}")]
    Segmentation {
        token: usize,
        surface: String,
        reason: &'static str,
    },

    #[error("tagged units do not match the source sentence: {0}")]
    UnitMismatch(String),

    #[error("cannot attach inserted tokens to an empty source sentence")]
    EmptySource,

    #[error("segregation failed: {0}")]
    Segregation(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("sentence {sentence}: {message}")]
    InvalidGold { sentence: usize, message: String },

    #[error("ensembling needs at least 2 hypotheses, got {0}")]
    TooFewHypotheses(usize),

    #[error("sentence counts differ: {0}")]
    CountMismatch(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn at_unit(self, unit: usize) -> Error {
        Error::AtUnit {
            unit,
            source: Box::new(self),
        }
    }

    pub(crate) fn format(line: usize, message: impl Into<String>) -> Error {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}

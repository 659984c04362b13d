//! Tokens, subwords and punctuation.
//!
//! Corpora are pre-tokenized, so a [`Sentence`] is just the whitespace split
//! of a line. Subword segmentation is greedy longest-match-first with a `##`
//! continuation prefix; a token that cannot be covered stays whole as a
//! single unknown subword.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::Range;

use unicode_general_category::{get_general_category, GeneralCategory};

use crate::error::{Error, Result};

/// Prefix marking word-internal subwords in vocabulary files.
pub const CONTINUATION_PREFIX: &str = "##";

/// A whitespace-delimited sentence. Tokens are never empty and never contain
/// whitespace.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sentence {
    tokens: Vec<String>,
}

impl Sentence {
    /// Builds a sentence from arbitrary strings, re-splitting on whitespace
    /// so that the token invariants hold.
    pub fn from_tokens<I, S>(tokens: I) -> Sentence
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let tokens = tokens
            .into_iter()
            .flat_map(|t| t.as_ref().split_whitespace().map(str::to_owned).collect::<Vec<_>>())
            .collect();
        Sentence { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens in `range` joined with single spaces.
    pub fn join_span(&self, range: Range<usize>) -> String {
        self.tokens[range].join(" ")
    }

    pub fn word_count(&self) -> usize {
        self.tokens.len()
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, token) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(token)?;
        }
        Ok(())
    }
}

/// Splits one line on Unicode whitespace.
pub fn tokenize(text: &str) -> Sentence {
    Sentence {
        tokens: text.split_whitespace().map(str::to_owned).collect(),
    }
}

/// Subword inventory for greedy longest-match segmentation.
#[derive(Clone, Debug, Default)]
pub struct SubwordVocab {
    initial: HashSet<String>,
    continuation: HashSet<String>,
    max_chars: usize,
}

impl SubwordVocab {
    pub fn new() -> SubwordVocab {
        SubwordVocab::default()
    }

    /// Adds one vocabulary entry; entries starting with `##` are
    /// continuation pieces.
    pub fn insert(&mut self, entry: &str) {
        let (set, piece) = match entry.strip_prefix(CONTINUATION_PREFIX) {
            Some(rest) if !rest.is_empty() => (&mut self.continuation, rest),
            _ => (&mut self.initial, entry),
        };
        if piece.is_empty() {
            return;
        }
        self.max_chars = self.max_chars.max(piece.chars().count());
        set.insert(piece.to_owned());
    }

    /// Parses a vocabulary file: one subword per line, blank lines ignored.
    pub fn parse(text: &str) -> SubwordVocab {
        let mut vocab = SubwordVocab::new();
        for line in text.lines() {
            let entry = line.trim();
            if !entry.is_empty() {
                vocab.insert(entry);
            }
        }
        vocab
    }

    pub fn len(&self) -> usize {
        self.initial.len() + self.continuation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Vocabulary file contents, sorted for reproducibility.
    pub fn to_file_string(&self) -> String {
        let mut entries: Vec<String> = self
            .initial
            .iter()
            .cloned()
            .chain(self.continuation.iter().map(|p| format!("{CONTINUATION_PREFIX}{p}")))
            .collect();
        entries.sort();
        let mut out = String::new();
        for e in entries {
            out.push_str(&e);
            out.push('\n');
        }
        out
    }

    fn contains(&self, piece: &str, continuation: bool) -> bool {
        if continuation {
            self.continuation.contains(piece)
        } else {
            self.initial.contains(piece)
        }
    }
}

/// Character ranges of one token's subwords. Every subword but the first is
/// a continuation piece.
pub type TokenSegmentation = Vec<Range<usize>>;

/// Per-token subword segmentation of a whole sentence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubwordSegmentation {
    pub tokens: Vec<TokenSegmentation>,
}

impl SubwordSegmentation {
    pub fn new(sentence: &Sentence, vocab: &SubwordVocab) -> SubwordSegmentation {
        SubwordSegmentation {
            tokens: sentence.tokens().iter().map(|t| segment_subwords(t, vocab)).collect(),
        }
    }

    /// Checks that spans are contiguous, non-empty and cover each token.
    pub fn validate(&self, sentence: &Sentence) -> Result<()> {
        if self.tokens.len() != sentence.len() {
            return Err(Error::Segmentation {
                token: self.tokens.len().min(sentence.len()),
                surface: String::new(),
                reason: "token count differs from sentence",
            });
        }
        for (i, (spans, token)) in self.tokens.iter().zip(sentence.tokens()).enumerate() {
            let err = |reason| Error::Segmentation {
                token: i,
                surface: token.clone(),
                reason,
            };
            let len = token.chars().count();
            if spans.is_empty() {
                return Err(err("no subwords"));
            }
            let mut pos = 0;
            for span in spans {
                if span.start != pos {
                    return Err(err("spans are not contiguous"));
                }
                if span.end <= span.start {
                    return Err(err("empty subword span"));
                }
                pos = span.end;
            }
            if pos != len {
                return Err(err("spans do not cover the token"));
            }
        }
        Ok(())
    }
}

/// Greedy longest-match-first segmentation of one token.
///
/// Position 0 consults word-initial entries, later positions consult
/// `##`-prefixed entries. If some position has no match the whole token
/// becomes one unknown subword.
pub fn segment_subwords(token: &str, vocab: &SubwordVocab) -> TokenSegmentation {
    let offsets: Vec<usize> = token
        .char_indices()
        .map(|(b, _)| b)
        .chain(std::iter::once(token.len()))
        .collect();
    let len = offsets.len() - 1;
    // One span covering the whole token.
    #[allow(clippy::single_range_in_vec_init)]
    let whole = vec![0..len];
    if len == 0 || vocab.max_chars == 0 {
        return whole;
    }

    let mut spans = Vec::new();
    let mut pos = 0;
    while pos < len {
        let longest = (pos + vocab.max_chars).min(len);
        let matched = (pos + 1..=longest)
            .rev()
            .find(|&end| vocab.contains(&token[offsets[pos]..offsets[end]], pos > 0));
        match matched {
            Some(end) => {
                spans.push(pos..end);
                pos = end;
            }
            None => return whole,
        }
    }
    spans
}

/// Punctuation predicate used for edit segregation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum PunctClass {
    /// Unicode P* and S* (minus currency symbols) plus `،` `؛` `؟`.
    #[default]
    Default,
    Custom(BTreeSet<char>),
}

impl PunctClass {
    pub fn contains(&self, c: char) -> bool {
        match self {
            PunctClass::Default => is_punct(c),
            PunctClass::Custom(set) => set.contains(&c),
        }
    }

    /// Parses an override file with one `U+XXXX` code point per line.
    pub fn parse_override(text: &str) -> Result<PunctClass> {
        let mut set = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let hex = line
                .strip_prefix("U+")
                .or_else(|| line.strip_prefix("u+"))
                .ok_or_else(|| Error::format(i + 1, format!("expected U+XXXX, got {line:?}")))?;
            let c = u32::from_str_radix(hex, 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| Error::format(i + 1, format!("invalid code point {line:?}")))?;
            set.insert(c);
        }
        Ok(PunctClass::Custom(set))
    }

    /// Every member of the class as `U+XXXX` lines, in code point order.
    pub fn listing(&self) -> String {
        let mut out = String::new();
        let mut emit = |c: char| {
            out.push_str(&format!("U+{:04X}\n", c as u32));
        };
        match self {
            PunctClass::Default => (0..=char::MAX as u32)
                .filter_map(char::from_u32)
                .filter(|&c| is_punct(c))
                .for_each(&mut emit),
            PunctClass::Custom(set) => set.iter().copied().for_each(&mut emit),
        }
        out
    }
}

/// Default punctuation test.
pub fn is_punct(c: char) -> bool {
    use GeneralCategory::*;
    if matches!(c, '\u{060C}' | '\u{061B}' | '\u{061F}') {
        return true;
    }
    matches!(
        get_general_category(c),
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
            | MathSymbol
            | ModifierSymbol
            | OtherSymbol
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab(entries: &[&str]) -> SubwordVocab {
        let mut v = SubwordVocab::new();
        for e in entries {
            v.insert(e);
        }
        v
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("يجب الإهتمام").tokens(), ["يجب", "الإهتمام"]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t ").is_empty());
        assert_eq!(tokenize("a  b\tc").tokens(), ["a", "b", "c"]);
    }

    #[test]
    fn display_round_trips() {
        let s = tokenize(" x  y\u{00A0}z ");
        assert_eq!(tokenize(&s.to_string()), s);
    }

    #[test]
    fn segment_arabic_prefix() {
        let v = vocab(&["بال", "##صحه", "ب", "##ا"]);
        assert_eq!(segment_subwords("بالصحه", &v), vec![0..3, 3..6]);
    }

    #[test]
    fn segment_single_and_unknown() {
        assert_eq!(segment_subwords("a", &vocab(&["a"])), vec![0..1]);
        assert_eq!(segment_subwords("xyz", &SubwordVocab::new()), vec![0..3]);
        // a gap in the middle falls back to the whole token
        assert_eq!(segment_subwords("abq", &vocab(&["ab", "##c"])), vec![0..3]);
    }

    #[test]
    fn continuation_entries_are_separate() {
        // "b" only exists word-initially, so "ab" cannot use it
        let v = vocab(&["a", "b"]);
        assert_eq!(segment_subwords("ab", &v), vec![0..2]);
        let v = vocab(&["a", "##b"]);
        assert_eq!(segment_subwords("ab", &v), vec![0..1, 1..2]);
    }

    #[test]
    fn punct_defaults() {
        assert!(is_punct('.'));
        assert!(is_punct('،'));
        assert!(is_punct('؟'));
        assert!(is_punct('؛'));
        assert!(!is_punct('ب'));
        assert!(!is_punct(' '));
        assert!(!is_punct('$'));
        assert!(!is_punct('\u{064B}'));
    }

    #[test]
    fn punct_override_file() {
        let class = PunctClass::parse_override("U+002E\n\nU+060C\n").unwrap();
        assert!(class.contains('.'));
        assert!(class.contains('،'));
        assert!(!class.contains(','));
        assert_eq!(class.listing(), "U+002E\nU+060C\n");
        assert!(PunctClass::parse_override("002E").is_err());
    }

    #[test]
    fn segmentation_validation() {
        let s = tokenize("abc de");
        let good = SubwordSegmentation {
            tokens: vec![vec![0..1, 1..3], vec![0..2]],
        };
        assert!(good.validate(&s).is_ok());
        let gap = SubwordSegmentation {
            tokens: vec![vec![0..1, 2..3], vec![0..2]],
        };
        assert!(gap.validate(&s).is_err());
        let short = SubwordSegmentation {
            tokens: vec![vec![0..3]],
        };
        assert!(short.validate(&s).is_err());
    }
}

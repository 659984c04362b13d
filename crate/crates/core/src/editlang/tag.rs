use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One character-level edit operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharOp {
    /// `K`: keep one source character.
    Keep,
    /// `D`: delete one source character.
    Delete,
    /// `K*`: keep a run of source characters.
    KeepRun,
    /// `D*`: delete a run of source characters.
    DeleteRun,
    /// `R_[c]`: replace one source character with `c`.
    Replace(char),
    /// `I_[s]`: insert `s` before the next consumed character.
    Insert(String),
    /// `A_[s]`: append `s` after the unit. Spaces start new tokens.
    Append(String),
    /// `M`: join the unit to the preceding token.
    Merge,
}

impl CharOp {
    /// Number of source characters consumed, `None` for starred runs.
    pub fn consumes(&self) -> Option<usize> {
        match self {
            CharOp::Keep | CharOp::Delete | CharOp::Replace(_) => Some(1),
            CharOp::KeepRun | CharOp::DeleteRun => None,
            CharOp::Insert(_) | CharOp::Append(_) | CharOp::Merge => Some(0),
        }
    }

    pub fn is_starred(&self) -> bool {
        matches!(self, CharOp::KeepRun | CharOp::DeleteRun)
    }

    pub fn is_keep(&self) -> bool {
        matches!(self, CharOp::Keep | CharOp::KeepRun)
    }
}

/// An ordered sequence of [`CharOp`]s attached to one word or subword.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EditTag {
    ops: Vec<CharOp>,
}

/// Serialized form of the keep tag.
pub const KEEP_TAG: &str = "K*";

impl EditTag {
    pub fn new(ops: Vec<CharOp>) -> EditTag {
        EditTag { ops }
    }

    /// The length-agnostic keep tag `K*`.
    pub fn keep() -> EditTag {
        EditTag {
            ops: vec![CharOp::KeepRun],
        }
    }

    pub fn ops(&self) -> &[CharOp] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<CharOp> {
        self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// True if the tag only keeps characters.
    pub fn is_keep(&self) -> bool {
        self.ops.iter().all(CharOp::is_keep)
    }

    pub fn star_count(&self) -> usize {
        self.ops.iter().filter(|op| op.is_starred()).count()
    }

    /// Characters consumed by the non-starred operations.
    pub fn fixed_consumed(&self) -> usize {
        self.ops.iter().filter_map(CharOp::consumes).sum()
    }

    /// Expands the (single) starred run so the tag consumes exactly
    /// `source_len` characters. A starred run may expand to zero.
    pub fn expand(&self, source_len: usize) -> Result<EditTag> {
        let fixed = self.fixed_consumed();
        match self.star_count() {
            0 if fixed == source_len => Ok(self.clone()),
            0 if fixed > source_len => Err(Error::ExpansionUnderflow {
                tag: self.to_string(),
                needed: fixed,
                available: source_len,
            }),
            0 => Err(Error::LengthMismatch {
                tag: self.to_string(),
                needed: fixed,
                available: source_len,
            }),
            1 => {
                let run = source_len.checked_sub(fixed).ok_or_else(|| Error::ExpansionUnderflow {
                    tag: self.to_string(),
                    needed: fixed,
                    available: source_len,
                })?;
                let mut ops = Vec::with_capacity(self.ops.len() + run);
                for op in &self.ops {
                    match op {
                        CharOp::KeepRun => ops.extend(std::iter::repeat_n(CharOp::Keep, run)),
                        CharOp::DeleteRun => ops.extend(std::iter::repeat_n(CharOp::Delete, run)),
                        other => ops.push(other.clone()),
                    }
                }
                Ok(EditTag { ops })
            }
            _ => Err(Error::AmbiguousTag(self.to_string())),
        }
    }

    /// Joins every maximal run of inserts into one insert, and likewise for
    /// appends.
    pub fn merge_runs(&self) -> EditTag {
        let mut ops: Vec<CharOp> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            match (ops.last_mut(), op) {
                (Some(CharOp::Insert(acc)), CharOp::Insert(s)) => acc.push_str(s),
                (Some(CharOp::Append(acc)), CharOp::Append(s)) => acc.push_str(s),
                _ => ops.push(op.clone()),
            }
        }
        EditTag { ops }
    }

    /// Parses the serialized tag grammar.
    pub fn parse(text: &str) -> Result<EditTag> {
        let err = |reason| Error::TagSyntax {
            tag: text.to_owned(),
            reason,
        };
        if text.is_empty() {
            return Err(err("empty tag"));
        }
        let mut ops = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            let op = match c {
                'K' | 'D' => {
                    let starred = chars.peek() == Some(&'*');
                    if starred {
                        chars.next();
                    }
                    match (c, starred) {
                        ('K', false) => CharOp::Keep,
                        ('K', true) => CharOp::KeepRun,
                        ('D', false) => CharOp::Delete,
                        _ => CharOp::DeleteRun,
                    }
                }
                'M' => {
                    if !ops.is_empty() {
                        return Err(err("M must be the first operation"));
                    }
                    CharOp::Merge
                }
                'R' | 'I' | 'A' => {
                    if chars.next() != Some('_') || chars.next() != Some('[') {
                        return Err(err("expected _[ after operation"));
                    }
                    let mut payload = String::new();
                    loop {
                        match chars.next() {
                            Some('\\') => match chars.next() {
                                Some(e @ (']' | '\\')) => payload.push(e),
                                _ => return Err(err("invalid escape in payload")),
                            },
                            Some(']') => break,
                            Some(p) => payload.push(p),
                            None => return Err(err("unterminated payload")),
                        }
                    }
                    if payload.is_empty() {
                        return Err(err("empty payload"));
                    }
                    match c {
                        'R' => {
                            let mut it = payload.chars();
                            match (it.next(), it.next()) {
                                (Some(r), None) => CharOp::Replace(r),
                                _ => return Err(err("replacement must be one character")),
                            }
                        }
                        'I' => CharOp::Insert(payload),
                        _ => CharOp::Append(payload),
                    }
                }
                _ => return Err(err("unknown operation")),
            };
            ops.push(op);
        }
        Ok(EditTag { ops })
    }
}

fn write_payload(f: &mut fmt::Formatter<'_>, name: char, payload: &str) -> fmt::Result {
    write!(f, "{name}_[")?;
    for c in payload.chars() {
        if c == ']' || c == '\\' {
            f.write_str("\\")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("]")
}

impl fmt::Display for CharOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharOp::Keep => f.write_str("K"),
            CharOp::Delete => f.write_str("D"),
            CharOp::KeepRun => f.write_str("K*"),
            CharOp::DeleteRun => f.write_str("D*"),
            CharOp::Merge => f.write_str("M"),
            CharOp::Replace(c) => write_payload(f, 'R', c.encode_utf8(&mut [0; 4])),
            CharOp::Insert(s) => write_payload(f, 'I', s),
            CharOp::Append(s) => write_payload(f, 'A', s),
        }
    }
}

impl fmt::Display for EditTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

impl FromStr for EditTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<EditTag> {
        EditTag::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tag(s: &str) -> EditTag {
        EditTag::parse(s).unwrap()
    }

    #[test]
    fn parse_health_sentence_tags() {
        let t = tag("MI_[ا]KKKR_[ة]");
        assert_eq!(
            t.ops(),
            [
                CharOp::Merge,
                CharOp::Insert("ا".into()),
                CharOp::Keep,
                CharOp::Keep,
                CharOp::Keep,
                CharOp::Replace('ة')
            ]
        );
        assert_eq!(t.to_string(), "MI_[ا]KKKR_[ة]");
        assert_eq!(tag("K*A_[ .]").ops()[1], CharOp::Append(" .".into()));
    }

    #[test]
    fn escapes_round_trip() {
        let t = EditTag::new(vec![CharOp::Replace(']'), CharOp::Insert("a\\]b".into())]);
        let s = t.to_string();
        assert_eq!(s, "R_[\\]]I_[a\\\\\\]b]");
        assert_eq!(tag(&s), t);
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "X", "KM", "R_[ab]", "I_[]", "A_[x", "R[x]", "I_[\\x]"] {
            assert!(EditTag::parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn expand_examples() {
        assert_eq!(tag("K*R_[ة]").expand(4).unwrap(), tag("KKKR_[ة]"));
        assert!(tag("K*").expand(0).unwrap().is_empty());
        assert!(matches!(
            tag("KKK").expand(2),
            Err(Error::ExpansionUnderflow {
                needed: 3,
                available: 2,
                ..
            })
        ));
        assert!(matches!(tag("K*D*").expand(5), Err(Error::AmbiguousTag(_))));
        assert!(matches!(tag("KK").expand(3), Err(Error::LengthMismatch { .. })));
        assert_eq!(tag("MD*A_[x]").expand(2).unwrap(), tag("MDDA_[x]"));
    }

    #[test]
    fn merge_runs_joins_inserts_and_appends() {
        let t = tag("I_[a]I_[b]KA_[ x]A_[y]");
        assert_eq!(t.merge_runs(), tag("I_[ab]KA_[ xy]"));
    }
}

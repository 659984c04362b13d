use super::{CharOp, TaggedSentence, TaggedUnit};
use crate::error::{Error, Result};
use crate::textcore::{tokenize, Sentence};

/// Applies tags to `src`. The tagged units must spell out `src` exactly.
pub fn apply_tags(src: &Sentence, tagged: &TaggedSentence) -> Result<Sentence> {
    check_units(src, &tagged.units)?;
    apply_units(&tagged.units)
}

/// Applies tags using the unit surfaces as the source text.
///
/// Units of one word are concatenated, words are separated by a space
/// unless the word's first unit starts with `M`, and the result is
/// re-tokenized on whitespace.
pub fn apply_units(units: &[TaggedUnit]) -> Result<Sentence> {
    let mut out = String::new();
    for (i, unit) in units.iter().enumerate() {
        let chars: Vec<char> = unit.surface.chars().collect();
        let tag = unit.tag.expand(chars.len()).map_err(|e| e.at_unit(i))?;
        let first_of_word = i == 0 || units[i - 1].word != unit.word;
        let merges = tag.ops().first() == Some(&CharOp::Merge);
        if first_of_word && i > 0 && !merges {
            out.push(' ');
        }

        let mut source = chars.iter();
        let mut appended = String::new();
        for op in tag.ops() {
            match op {
                CharOp::Keep => out.extend(source.next()),
                CharOp::Delete => {
                    source.next();
                }
                CharOp::Replace(c) => {
                    source.next();
                    out.push(*c);
                }
                CharOp::Insert(s) => out.push_str(s),
                CharOp::Append(s) => appended.push_str(s),
                CharOp::Merge => {}
                CharOp::KeepRun | CharOp::DeleteRun => unreachable!("expanded tags have no runs"),
            }
        }
        out.push_str(&appended);
    }
    Ok(tokenize(&out))
}

fn check_units(src: &Sentence, units: &[TaggedUnit]) -> Result<()> {
    let mut word = 0;
    let mut spelled = String::new();
    let mut last: Option<usize> = None;
    let mismatch = |msg: String| Err(Error::UnitMismatch(msg));
    for unit in units {
        match last {
            Some(w) if w == unit.word => {}
            Some(w) if w + 1 == unit.word => {
                if spelled != src.tokens()[w] {
                    return mismatch(format!(
                        "word {w} spelled {spelled:?}, source has {:?}",
                        src.tokens()[w]
                    ));
                }
                spelled.clear();
                word = unit.word;
            }
            None if unit.word == 0 => {}
            _ => return mismatch(format!("unexpected word index {}", unit.word)),
        }
        if word >= src.len() {
            return mismatch(format!("word index {word} beyond sentence of {} tokens", src.len()));
        }
        spelled.push_str(&unit.surface);
        last = Some(unit.word);
    }
    match last {
        None if src.is_empty() => Ok(()),
        Some(w) if w + 1 == src.len() && spelled == src.tokens()[w] => Ok(()),
        _ => mismatch(format!("units cover {:?} words of {}", last.map(|w| w + 1), src.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::editlang::{EditTag, Granularity};

    fn tagged(units: &[(&str, usize, &str)]) -> TaggedSentence {
        TaggedSentence {
            granularity: Granularity::Word,
            units: units
                .iter()
                .map(|&(s, w, t)| TaggedUnit {
                    surface: s.into(),
                    word: w,
                    tag: EditTag::parse(t).unwrap(),
                })
                .collect(),
        }
    }

    #[test]
    fn merge_example() {
        let src = tokenize("ab cd");
        let t = tagged(&[("ab", 0, "K*"), ("cd", 1, "MK*")]);
        assert_eq!(apply_tags(&src, &t).unwrap().tokens(), ["abcd"]);
    }

    #[test]
    fn keep_is_identity() {
        let src = tokenize("x yz w");
        let t = tagged(&[("x", 0, "K*"), ("yz", 1, "K*"), ("w", 2, "K*")]);
        assert_eq!(apply_tags(&src, &t).unwrap(), src);
    }

    #[test]
    fn appends_open_tokens() {
        let src = tokenize("a b");
        let t = tagged(&[("a", 0, "K*A_[ x y]"), ("b", 1, "D*")]);
        assert_eq!(apply_tags(&src, &t).unwrap().tokens(), ["a", "x", "y"]);
    }

    #[test]
    fn subwords_concatenate() {
        let src = tokenize("abc d");
        let t = tagged(&[("a", 0, "K"), ("bc", 0, "KR_[x]"), ("d", 1, "K*A_[.]")]);
        assert_eq!(apply_tags(&src, &t).unwrap().tokens(), ["abx", "d."]);
    }

    #[test]
    fn errors_carry_unit_index() {
        let src = tokenize("ab c");
        let t = tagged(&[("ab", 0, "K*"), ("c", 1, "KKK")]);
        match apply_tags(&src, &t) {
            Err(Error::AtUnit { unit: 1, source }) => {
                assert!(matches!(*source, Error::ExpansionUnderflow { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn units_must_match_source() {
        let src = tokenize("ab c");
        assert!(apply_tags(&src, &tagged(&[("ab", 0, "K*")])).is_err());
        assert!(apply_tags(&src, &tagged(&[("ab", 0, "K*"), ("d", 1, "K*")])).is_err());
        assert!(apply_tags(&src, &tagged(&[("ab", 0, "K*"), ("c", 2, "K*")])).is_err());
        assert!(apply_tags(&Sentence::default(), &tagged(&[])).unwrap().is_empty());
    }
}

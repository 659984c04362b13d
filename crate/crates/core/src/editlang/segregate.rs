use super::{apply_tags, extract_with, CharOp, EditTag, Segmenter, TaggedSentence, TaggedUnit};
use crate::error::{Error, Result};
use crate::textcore::{PunctClass, Sentence};

/// Routing class of a primitive operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpClass {
    /// A keep; it lives in both layers.
    Neutral,
    Punct,
    NonPunct,
}

/// Punctuation iff some touched character is punctuation and every
/// non-whitespace touched character is.
fn class_of_chars(chars: impl IntoIterator<Item = char>, punct: &PunctClass) -> OpClass {
    let mut any = false;
    for c in chars {
        if c.is_whitespace() {
            continue;
        }
        if !punct.contains(c) {
            return OpClass::NonPunct;
        }
        any = true;
    }
    if any {
        OpClass::Punct
    } else {
        OpClass::NonPunct
    }
}

/// Classifies every op of `unit` after expanding its tag. Returns the
/// expanded ops with their classes.
pub fn classify_unit(unit: &TaggedUnit, punct: &PunctClass) -> Result<Vec<(CharOp, OpClass)>> {
    let chars: Vec<char> = unit.surface.chars().collect();
    let tag = unit.tag.expand(chars.len())?;
    let mut source = chars.into_iter();
    let mut out = Vec::with_capacity(tag.ops().len());
    for op in tag.into_ops() {
        let class = match &op {
            CharOp::Keep => {
                source.next();
                OpClass::Neutral
            }
            CharOp::Delete => class_of_chars(source.next(), punct),
            CharOp::Replace(c) => class_of_chars(source.next().into_iter().chain([*c]), punct),
            CharOp::Insert(s) | CharOp::Append(s) => class_of_chars(s.chars(), punct),
            CharOp::Merge => OpClass::NonPunct,
            CharOp::KeepRun | CharOp::DeleteRun => unreachable!("expanded"),
        };
        out.push((op, class));
    }
    Ok(out)
}

/// True if every non-keep op in `tagged` is a punctuation op.
pub fn is_punct_only(tagged: &TaggedSentence, punct: &PunctClass) -> Result<bool> {
    for unit in &tagged.units {
        if classify_unit(unit, punct)?
            .iter()
            .any(|(_, class)| *class == OpClass::NonPunct)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two layers of a segregated sentence pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Segregated {
    /// Non-punctuation edits over the source sentence.
    pub nopnx: TaggedSentence,
    /// Source with the non-punctuation edits applied.
    pub intermediate: Sentence,
    /// Punctuation edits over the intermediate sentence.
    pub pnx: TaggedSentence,
}

/// Splits extracted edits into a non-punctuation layer over `src` and a
/// punctuation layer over the intermediate sentence.
///
/// Punctuation deletions and replacements become keeps in the first layer
/// and punctuation inserts/appends are dropped; the second layer is
/// re-extracted from the intermediate sentence to `tgt`.
pub fn segregate(
    tagged: &TaggedSentence,
    src: &Sentence,
    tgt: &Sentence,
    segmenter: Segmenter<'_>,
    punct: &PunctClass,
) -> Result<Segregated> {
    let mut nopnx = tagged.clone();
    for (i, unit) in nopnx.units.iter_mut().enumerate() {
        let ops = classify_unit(unit, punct).map_err(|e| e.at_unit(i))?;
        let kept = ops
            .into_iter()
            .filter_map(|(op, class)| match (class, op) {
                (OpClass::Punct, CharOp::Delete | CharOp::Replace(_)) => Some(CharOp::Keep),
                (OpClass::Punct, _) => None,
                (_, op) => Some(op),
            })
            .collect();
        unit.tag = EditTag::new(kept);
    }

    let intermediate = apply_tags(src, &nopnx)?;
    if intermediate.is_empty() && !tgt.is_empty() {
        return Err(Error::Segregation(
            "non-punctuation layer deletes the whole sentence".into(),
        ));
    }
    let pnx = extract_with(&intermediate, tgt, segmenter)?;
    let rebuilt = apply_tags(&intermediate, &pnx)?;
    if rebuilt != *tgt {
        return Err(Error::Segregation(format!(
            "layers rebuild {rebuilt:?} instead of the target"
        )));
    }
    if !is_punct_only(&pnx, punct)? {
        return Err(Error::Segregation(format!(
            "punctuation layer for {intermediate} contains non-punctuation edits"
        )));
    }
    Ok(Segregated {
        nopnx,
        intermediate,
        pnx,
    })
}

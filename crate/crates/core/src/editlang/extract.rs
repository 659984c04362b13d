use std::ops::Range;

use super::{CharOp, EditTag, Segmenter, TaggedSentence};
use crate::align::{align_sentences, char_align, CharStep};
use crate::error::{Error, Result};
use crate::textcore::{Sentence, SubwordSegmentation};

/// Uncompressed word-level operations, one list per source token.
///
/// Pure insertions become appends on the preceding token (` ` + inserted
/// tokens), or a leading insert on the first token when nothing precedes
/// them. A separator space deleted inside a merged unit becomes `M` on the
/// following token; a replaced separator becomes `M` plus an insert.
pub fn word_level_ops(src: &Sentence, tgt: &Sentence) -> Result<Vec<Vec<CharOp>>> {
    if src.is_empty() {
        return if tgt.is_empty() {
            Ok(Vec::new())
        } else {
            Err(Error::EmptySource)
        };
    }

    let mut ops: Vec<Vec<CharOp>> = vec![Vec::new(); src.len()];
    let mut prefix = String::new();
    for pair in align_sentences(src, tgt).pairs {
        if pair.is_insertion() {
            let payload = tgt.join_span(pair.tgt.clone());
            if pair.src.start == 0 {
                prefix.push_str(&payload);
                prefix.push(' ');
            } else {
                ops[pair.src.start - 1].push(CharOp::Append(format!(" {payload}")));
            }
            continue;
        }
        if pair.is_deletion() {
            for t in pair.src.clone() {
                ops[t] = vec![CharOp::Delete; src.tokens()[t].chars().count()];
            }
            continue;
        }

        let s: Vec<char> = src.join_span(pair.src.clone()).chars().collect();
        let t: Vec<char> = tgt.join_span(pair.tgt.clone()).chars().collect();
        let mut tok = pair.src.start;
        for step in char_align(&s, &t) {
            match step {
                // source tokens never contain spaces, so a consumed space is
                // always the separator before the next token
                CharStep::Keep(' ') => tok += 1,
                CharStep::Delete(' ') => {
                    tok += 1;
                    ops[tok].push(CharOp::Merge);
                }
                CharStep::Replace(' ', c) => {
                    tok += 1;
                    ops[tok].push(CharOp::Merge);
                    ops[tok].push(CharOp::Insert(c.to_string()));
                }
                CharStep::Keep(_) => ops[tok].push(CharOp::Keep),
                CharStep::Delete(_) => ops[tok].push(CharOp::Delete),
                CharStep::Replace(_, c) => ops[tok].push(CharOp::Replace(c)),
                CharStep::Insert(c) => ops[tok].push(CharOp::Insert(c.to_string())),
            }
        }
    }
    if !prefix.is_empty() {
        ops[0].insert(0, CharOp::Insert(prefix));
    }
    Ok(ops)
}

/// Splits one word's operations at subword character boundaries.
///
/// Consuming ops go to the subword owning the character; inserts go to the
/// subword of the next consumed character; `M` goes to the first subword;
/// trailing inserts and appends go to the last one.
pub fn project_onto_subwords(ops: &[CharOp], spans: &[Range<usize>]) -> Vec<Vec<CharOp>> {
    let mut out: Vec<Vec<CharOp>> = vec![Vec::new(); spans.len()];
    let Some(last) = spans.len().checked_sub(1) else {
        return out;
    };
    let mut pending = Vec::new();
    let mut tail = Vec::new();
    let mut pos = 0;
    let mut owner = 0;
    for op in ops {
        match op {
            CharOp::Merge => out[0].push(op.clone()),
            CharOp::Insert(_) => pending.push(op.clone()),
            CharOp::Append(_) => tail.push(op.clone()),
            _ => {
                while owner < last && pos >= spans[owner].end {
                    owner += 1;
                }
                out[owner].append(&mut pending);
                out[owner].push(op.clone());
                pos += 1;
            }
        }
    }
    out[last].append(&mut pending);
    out[last].append(&mut tail);
    out
}

/// Extracts uncompressed edit tags for `src` → `tgt`, at word granularity
/// when `seg` is `None` and at subword granularity otherwise.
pub fn extract_edits(src: &Sentence, tgt: &Sentence, seg: Option<&SubwordSegmentation>) -> Result<TaggedSentence> {
    if let Some(seg) = seg {
        seg.validate(src)?;
    }
    let word_ops = word_level_ops(src, tgt)?;
    let unit_ops: Vec<Vec<CharOp>> = match seg {
        None => word_ops,
        Some(seg) => word_ops
            .iter()
            .zip(&seg.tokens)
            .flat_map(|(ops, spans)| project_onto_subwords(ops, spans))
            .collect(),
    };
    let mut unit_ops = unit_ops.into_iter();
    Ok(TaggedSentence::from_units(src, seg, |_| {
        EditTag::new(unit_ops.next().unwrap_or_default())
    }))
}

/// [`extract_edits`] with segmentation computed by `segmenter`.
pub fn extract_with(src: &Sentence, tgt: &Sentence, segmenter: Segmenter<'_>) -> Result<TaggedSentence> {
    extract_edits(src, tgt, segmenter.segment(src).as_ref())
}

//! Producing tags for unseen input, and the inference drivers built on top.

mod ensemble;
mod infer;
mod lookup;

pub use ensemble::{ensemble, EnsembleOutput};
pub use infer::{infer, InferenceConfig};
pub use lookup::{LookupModel, LookupTagger};

use crate::editlang::{compress, extract_with, CompressionSelector, EditVocabulary, Segmenter, TaggedSentence};
use crate::error::Result;
use crate::textcore::Sentence;

/// Anything that tags a sentence. Implementations re-segment their input,
/// so one tagger can be run repeatedly on its own output.
pub trait Tagger: Sync {
    fn tag(&self, src: &Sentence) -> Result<TaggedSentence>;
}

impl<F> Tagger for F
where
    F: Fn(&Sentence) -> Result<TaggedSentence> + Sync,
{
    fn tag(&self, src: &Sentence) -> Result<TaggedSentence> {
        self(src)
    }
}

/// The true edits for `src` → `tgt`, compressed when a selector is given,
/// with tags outside `vocab` replaced by the keep tag.
pub fn oracle_tag(
    src: &Sentence,
    tgt: &Sentence,
    vocab: &EditVocabulary,
    segmenter: Segmenter<'_>,
    selector: Option<&CompressionSelector>,
) -> Result<TaggedSentence> {
    let tagged = extract_with(src, tgt, segmenter)?;
    Ok(tagged.map_tags(|tag| {
        let tag = match selector {
            Some(selector) => compress(tag, selector),
            None => tag.clone(),
        };
        vocab.rewrite(&tag)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::editlang::{apply_tags, EditTag};
    use crate::textcore::tokenize;

    #[test]
    fn oracle_bounds() {
        let src = tokenize("يجب الإهتمام ب لصحه");
        let tgt = tokenize("يجب الاهتمام بالصحة .");
        let tagged = extract_with(&src, &tgt, Segmenter::Word).unwrap();
        let full = EditVocabulary::build(tagged.tags());
        let oracle = oracle_tag(&src, &tgt, &full, Segmenter::Word, None).unwrap();
        assert_eq!(apply_tags(&src, &oracle).unwrap(), tgt);

        let keep_only = EditVocabulary::build([&EditTag::keep()]);
        let oracle = oracle_tag(&src, &tgt, &keep_only, Segmenter::Word, None).unwrap();
        assert!(oracle.is_all_keep());
        assert_eq!(apply_tags(&src, &oracle).unwrap(), src);
    }

    #[test]
    fn oracle_with_compression() {
        let src = tokenize("الصحه النفسيه");
        let tgt = tokenize("الصحة النفسية");
        let tags = extract_with(&src, &tgt, Segmenter::Word).unwrap();
        let selector = CompressionSelector::build(tags.tags());
        let compressed: Vec<EditTag> = tags.tags().map(|t| compress(t, &selector)).collect();
        let vocab = EditVocabulary::build(&compressed);
        let oracle = oracle_tag(&src, &tgt, &vocab, Segmenter::Word, Some(&selector)).unwrap();
        assert_eq!(oracle.units[0].tag.to_string(), "K*R_[ة]");
        assert_eq!(apply_tags(&src, &oracle).unwrap(), tgt);
    }
}

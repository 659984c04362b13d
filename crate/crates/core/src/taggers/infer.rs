use std::num::NonZeroUsize;

use super::Tagger;
use crate::editlang::apply_tags;
use crate::error::{Error, Result};
use crate::textcore::Sentence;

#[derive(Clone, Copy)]
pub struct InferenceConfig<'a> {
    /// Upper bound on tag-and-apply rounds; inference stops early once a
    /// round leaves the sentence unchanged.
    pub iterations: NonZeroUsize,
    /// Punctuation tagger run once after the main rounds.
    pub pnx: Option<&'a dyn Tagger>,
}

impl<'a> InferenceConfig<'a> {
    pub fn new(iterations: NonZeroUsize) -> InferenceConfig<'a> {
        InferenceConfig { iterations, pnx: None }
    }

    pub fn with_pnx(mut self, pnx: &'a dyn Tagger) -> InferenceConfig<'a> {
        self.pnx = Some(pnx);
        self
    }
}

fn round(src: &Sentence, tagger: &dyn Tagger, index: usize) -> Result<Sentence> {
    let at = |e: Error| Error::AtRound {
        round: index,
        source: Box::new(e),
    };
    let tagged = tagger.tag(src).map_err(at)?;
    apply_tags(src, &tagged).map_err(at)
}

/// Repeatedly tags and corrects `src`, then runs the punctuation tagger once
/// if the config has one. Rounds are numbered from 1 in errors.
pub fn infer(src: &Sentence, tagger: &dyn Tagger, cfg: &InferenceConfig<'_>) -> Result<Sentence> {
    let mut current = src.clone();
    let mut rounds = 0;
    for _ in 0..cfg.iterations.get() {
        rounds += 1;
        let next = round(&current, tagger, rounds)?;
        if next == current {
            break;
        }
        current = next;
    }
    match cfg.pnx {
        Some(pnx) => round(&current, pnx, rounds + 1),
        None => Ok(current),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::atomic::{AtomicUsize, Ordering};

    use super::*;
    use crate::editlang::{extract_with, CharOp, EditTag, Segmenter, TaggedSentence};
    use crate::textcore::tokenize;

    fn n(k: usize) -> NonZeroUsize {
        NonZeroUsize::new(k).unwrap()
    }

    // Fixes the first wrong character of each word against a fixed target.
    fn one_fix_per_round(target: &'static str) -> impl Fn(&Sentence) -> Result<TaggedSentence> + Sync {
        move |src: &Sentence| {
            let tgt = tokenize(target);
            let full = extract_with(src, &tgt, Segmenter::Word)?;
            Ok(full.map_tags(|tag| {
                let mut fixed = false;
                EditTag::new(
                    tag.ops()
                        .iter()
                        .map(|op| match op {
                            CharOp::Replace(_) if !fixed => {
                                fixed = true;
                                op.clone()
                            }
                            CharOp::Replace(_) => CharOp::Keep,
                            other => other.clone(),
                        })
                        .collect(),
                )
            }))
        }
    }

    #[test]
    fn two_rounds_fix_two_errors() {
        let tagger = one_fix_per_round("النفسية");
        let src = tokenize("الننسيه");
        let once = infer(&src, &tagger, &InferenceConfig::new(n(1))).unwrap();
        assert_eq!(once, tokenize("النفسيه"));
        let twice = infer(&src, &tagger, &InferenceConfig::new(n(2))).unwrap();
        assert_eq!(twice, tokenize("النفسية"));
    }

    #[test]
    fn keep_tagger_is_a_fixpoint() {
        let calls = AtomicUsize::new(0);
        let keep = |s: &Sentence| {
            calls.fetch_add(1, Ordering::Relaxed);
            Ok(Segmenter::Word.uniform(s, &EditTag::keep()))
        };
        let src = tokenize("a b c");
        assert_eq!(infer(&src, &keep, &InferenceConfig::new(n(5))).unwrap(), src);
        assert_eq!(calls.load(Ordering::Relaxed), 1);
    }

    #[test]
    fn cascade_runs_punctuation_last() {
        let nopnx = one_fix_per_round("قال: الصحة");
        let pnx = |s: &Sentence| extract_with(s, &tokenize("قال: الصحة ."), Segmenter::Word);
        let cfg = InferenceConfig::new(n(2)).with_pnx(&pnx);
        let out = infer(&tokenize("قال: الصحه"), &nopnx, &cfg).unwrap();
        assert_eq!(out, tokenize("قال: الصحة ."));
    }

    #[test]
    fn errors_carry_round() {
        let bad = |s: &Sentence| Ok(Segmenter::Word.uniform(s, &EditTag::parse("KKKKKKKKKK").unwrap()));
        match infer(&tokenize("ab"), &bad, &InferenceConfig::new(n(2))) {
            Err(Error::AtRound { round: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}

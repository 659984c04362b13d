#![allow(dead_code)]

use edittag::editlang::{CharOp, EditTag};
use edittag::synth::SynthCorpus;
use edittag::textcore::{Sentence, SubwordVocab};
use proptest::prelude::*;

pub const ALPHABET: &[char] = &['a', 'b', 'c', 'ا', 'ب', 'ة', 'ه', 'ل', '.', '،', '!', '\u{064B}'];

pub fn token() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(ALPHABET), 1..5).prop_map(|cs| cs.into_iter().collect())
}

pub fn sentence(max: usize) -> impl Strategy<Value = Sentence> {
    prop::collection::vec(token(), 0..max).prop_map(Sentence::from_tokens)
}

/// Independent random pairs with a non-empty source, or synthetic pairs.
pub fn pair() -> impl Strategy<Value = (Sentence, Sentence)> {
    prop_oneof![
        (sentence(7), sentence(7)).prop_filter("empty source", |(s, _)| !s.is_empty()),
        any::<u64>().prop_map(|seed| {
            let p = SynthCorpus::with_seed(seed).pair();
            (p.source, p.target)
        }),
    ]
}

/// Covers every alphabet character, so segmentation never falls back.
pub fn small_vocab() -> SubwordVocab {
    let mut v = SubwordVocab::parse("ab\nال\nبا\n##ca\n##ة\n##ها\n##lا");
    for c in ALPHABET {
        v.insert(&c.to_string());
        v.insert(&format!("##{c}"));
    }
    v
}

pub fn payload() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![prop::sample::select(ALPHABET), Just(']'), Just('\\'), Just(' ')],
        1..4,
    )
    .prop_map(|cs| cs.into_iter().collect())
}

pub fn op() -> impl Strategy<Value = CharOp> {
    prop_oneof![
        Just(CharOp::Keep),
        Just(CharOp::Delete),
        prop_oneof![prop::sample::select(ALPHABET), Just(']'), Just('\\')].prop_map(CharOp::Replace),
        payload().prop_map(CharOp::Insert),
        payload().prop_map(CharOp::Append),
    ]
}

/// Syntactically valid tags, with an optional leading `M` and at most one
/// starred run.
pub fn tag() -> impl Strategy<Value = EditTag> {
    (
        any::<bool>(),
        prop::collection::vec(op(), 1..8),
        prop::option::of((0usize..8, prop::bool::ANY)),
    )
        .prop_map(|(merge, mut ops, star)| {
            if let Some((at, keep)) = star {
                let run = if keep { CharOp::KeepRun } else { CharOp::DeleteRun };
                ops.insert(at.min(ops.len()), run);
            }
            if merge {
                ops.insert(0, CharOp::Merge);
            }
            EditTag::new(ops)
        })
}

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::score::{apply_span_edits, span_edits, SpanEdit};
use crate::textcore::Sentence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleOutput {
    pub sentence: Sentence,
    /// Applied edits with their vote counts, in source order.
    pub edits: Vec<(SpanEdit, usize)>,
}

/// Majority-vote combination of `hypotheses` for `src`.
///
/// Edits are keyed by exact span and replacement. Those proposed by at least
/// `min_votes` systems (default `k − 1`) survive; among overlapping survivors
/// the one with more votes wins, then the one starting earlier.
pub fn ensemble(src: &Sentence, hypotheses: &[Sentence], min_votes: Option<usize>) -> Result<EnsembleOutput> {
    let k = hypotheses.len();
    if k < 2 {
        return Err(Error::TooFewHypotheses(k));
    }
    let min_votes = min_votes.unwrap_or(k - 1);

    let mut votes: HashMap<SpanEdit, usize> = HashMap::new();
    for hyp in hypotheses {
        let distinct: BTreeSet<SpanEdit> = span_edits(src, hyp).into_iter().collect();
        for edit in distinct {
            *votes.entry(edit).or_default() += 1;
        }
    }

    let mut survivors: Vec<(SpanEdit, usize)> = votes.into_iter().filter(|&(_, v)| v >= min_votes).collect();
    survivors.sort_by(|(a, va), (b, vb)| vb.cmp(va).then_with(|| a.cmp(b)));
    let mut accepted: Vec<(SpanEdit, usize)> = Vec::new();
    for (edit, v) in survivors {
        if accepted.iter().all(|(e, _)| !e.conflicts_with(&edit)) {
            accepted.push((edit, v));
        }
    }
    accepted.sort();
    let edits: Vec<SpanEdit> = accepted.iter().map(|(e, _)| e.clone()).collect();
    Ok(EnsembleOutput {
        sentence: apply_span_edits(src, &edits),
        edits: accepted,
    })
}

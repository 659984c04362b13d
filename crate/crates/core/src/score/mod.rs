//! M²-style scoring over span edits.
//!
//! Hypothesis and reference sentences are converted into [`SpanEdit`]s by
//! aligning them with the source. Hypothesis edits count as true positives
//! only on an exact (start, end, replacement) match with a gold edit, so the
//! scores here lower-bound those of the official lattice-searching scorer.

mod m2;
mod significance;

pub use m2::{parse_m2, M2Sentence};
pub use significance::{approximate_randomization, exact_randomization, significance};

use std::fmt;
use std::ops::AddAssign;

use crate::align::align_sentences;
use crate::error::{Error, Result};
use crate::textcore::{tokenize, Sentence};

/// Replace source tokens `start..end` with `replacement` (space-separated
/// tokens, empty for a deletion). `start == end` inserts before `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanEdit {
    pub start: usize,
    pub end: usize,
    pub replacement: String,
}

impl SpanEdit {
    pub fn new(start: usize, end: usize, replacement: impl Into<String>) -> SpanEdit {
        SpanEdit {
            start,
            end,
            replacement: replacement.into(),
        }
    }

    pub fn is_insertion(&self) -> bool {
        self.start == self.end
    }

    /// Whether two edits cannot both be applied.
    pub fn conflicts_with(&self, other: &SpanEdit) -> bool {
        match (self.is_insertion(), other.is_insertion()) {
            (true, true) => self.start == other.start,
            (true, false) => other.start < self.start && self.start < other.end,
            (false, true) => self.start < other.start && other.start < self.end,
            (false, false) => self.start < other.end && other.start < self.end,
        }
    }
}

impl fmt::Display for SpanEdit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {:?}", self.start, self.end, self.replacement)
    }
}

/// Edits turning `src` into `other`. Runs of adjacent non-identity alignment
/// pairs collapse into one edit.
pub fn span_edits(src: &Sentence, other: &Sentence) -> Vec<SpanEdit> {
    let alignment = align_sentences(src, other);
    let mut edits: Vec<SpanEdit> = Vec::new();
    let mut open: Option<(usize, usize, usize, usize)> = None;
    let close = |span: (usize, usize, usize, usize), edits: &mut Vec<SpanEdit>| {
        let (s, e, ts, te) = span;
        let replacement = other.join_span(ts..te);
        if replacement != src.join_span(s..e) {
            edits.push(SpanEdit::new(s, e, replacement));
        }
    };
    for pair in &alignment.pairs {
        if pair.is_identity() {
            if let Some(span) = open.take() {
                close(span, &mut edits);
            }
            continue;
        }
        open = Some(match open {
            Some((s, _, ts, _)) => (s, pair.src.end, ts, pair.tgt.end),
            None => (pair.src.start, pair.src.end, pair.tgt.start, pair.tgt.end),
        });
    }
    if let Some(span) = open {
        close(span, &mut edits);
    }
    edits
}

/// Applies non-conflicting edits to `src`.
pub fn apply_span_edits(src: &Sentence, edits: &[SpanEdit]) -> Sentence {
    let mut sorted: Vec<&SpanEdit> = edits.iter().collect();
    // insertions at a position go before a replacement starting there
    sorted.sort_by_key(|e| (e.start, !e.is_insertion(), e.end));
    let mut out: Vec<&str> = Vec::new();
    let mut next = sorted.into_iter().peekable();
    let mut i = 0;
    while i <= src.len() {
        let mut consumed = false;
        while let Some(edit) = next.next_if(|e| e.start == i) {
            out.extend(edit.replacement.split_whitespace());
            if !edit.is_insertion() {
                i = edit.end;
                consumed = true;
                break;
            }
        }
        if consumed {
            continue;
        }
        if i < src.len() {
            out.push(&src.tokens()[i]);
        }
        i += 1;
    }
    tokenize(&out.join(" "))
}

/// Edit match counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        self.tp += rhs.tp;
        self.fp += rhs.fp;
        self.fn_ += rhs.fn_;
    }
}

impl Counts {
    pub fn precision(&self) -> f64 {
        if self.tp + self.fp == 0 {
            1.0
        } else {
            self.tp as f64 / (self.tp + self.fp) as f64
        }
    }

    pub fn recall(&self) -> f64 {
        if self.tp + self.fn_ == 0 {
            1.0
        } else {
            self.tp as f64 / (self.tp + self.fn_) as f64
        }
    }

    pub fn report(&self) -> ScoreReport {
        let (p, r) = (self.precision(), self.recall());
        ScoreReport {
            counts: *self,
            precision: p,
            recall: r,
            f1: f_beta(p, r, 1.0),
            f05: f_beta(p, r, 0.5),
        }
    }
}

/// Fβ; zero when both precision and recall are zero.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / denom
    }
}

/// Precision is 1 when nothing was proposed; recall is 1 when there was
/// nothing to find.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoreReport {
    pub counts: Counts,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f05: f64,
}

impl ScoreReport {
    /// `tp fp fn P R F1 F0.5` on one line.
    pub fn machine_line(&self) -> String {
        format!(
            "{} {} {} {:.4} {:.4} {:.4} {:.4}",
            self.counts.tp, self.counts.fp, self.counts.fn_, self.precision, self.recall, self.f1, self.f05
        )
    }

    pub fn table(&self) -> String {
        format!(
            "TP        : {}\nFP        : {}\nFN        : {}\nPrecision : {:.4}\nRecall    : {:.4}\nF1        : {:.4}\nF0.5      : {:.4}\n",
            self.counts.tp, self.counts.fp, self.counts.fn_, self.precision, self.recall, self.f1, self.f05
        )
    }
}

fn validate_gold(src: &Sentence, gold: &[SpanEdit], sentence: usize) -> Result<()> {
    for edit in gold {
        if edit.start > edit.end || edit.end > src.len() {
            return Err(Error::InvalidGold {
                sentence,
                message: format!("span {}..{} outside a {}-token source", edit.start, edit.end, src.len()),
            });
        }
    }
    Ok(())
}

/// Exact-match counts for one sentence.
pub fn sentence_counts(src: &Sentence, gold: &[SpanEdit], hyp: &Sentence, sentence: usize) -> Result<Counts> {
    validate_gold(src, gold, sentence)?;
    let proposed = span_edits(src, hyp);
    let mut unmatched: Vec<&SpanEdit> = gold.iter().collect();
    let mut tp = 0;
    for edit in &proposed {
        if let Some(pos) = unmatched.iter().position(|g| *g == edit) {
            unmatched.swap_remove(pos);
            tp += 1;
        }
    }
    Ok(Counts {
        tp,
        fp: proposed.len() - tp,
        fn_: gold.len() - tp,
    })
}

/// Scores a single sentence.
pub fn m2_score(src: &Sentence, gold: &[SpanEdit], hyp: &Sentence) -> Result<ScoreReport> {
    Ok(sentence_counts(src, gold, hyp, 0)?.report())
}

/// Per-sentence counts for a corpus of `(source, gold, hypothesis)`.
pub fn corpus_counts<'a>(
    items: impl IntoIterator<Item = (&'a Sentence, &'a [SpanEdit], &'a Sentence)>,
) -> Result<Vec<Counts>> {
    items
        .into_iter()
        .enumerate()
        .map(|(i, (src, gold, hyp))| sentence_counts(src, gold, hyp, i))
        .collect()
}

/// Corpus-level report: counts are summed before computing P/R/F.
pub fn corpus_score<'a>(
    items: impl IntoIterator<Item = (&'a Sentence, &'a [SpanEdit], &'a Sentence)>,
) -> Result<ScoreReport> {
    let mut total = Counts::default();
    for counts in corpus_counts(items)? {
        total += counts;
    }
    Ok(total.report())
}

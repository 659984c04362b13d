//! Word- and character-level alignment.
//!
//! Sentences are first aligned token by token with a weighted Levenshtein
//! distance whose substitution weight is the normalized character distance
//! of the two tokens. A refinement pass then merges a stranded insertion or
//! deletion into an adjacent substitution when that lowers the total cost,
//! which is how many-to-one (merge) and one-to-many (split) units arise.
//! Finally each aligned unit is aligned again at the character level.

use std::ops::Range;

use crate::textcore::Sentence;

const EPS: f64 = 1e-9;

/// One aligned unit: `src` tokens of the erroneous sentence correspond to
/// `tgt` tokens of the corrected one.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignmentPair {
    pub src: Range<usize>,
    pub tgt: Range<usize>,
    pub cost: f64,
}

impl AlignmentPair {
    pub fn is_insertion(&self) -> bool {
        self.src.is_empty()
    }

    pub fn is_deletion(&self) -> bool {
        self.tgt.is_empty()
    }

    /// Both sides non-empty and textually identical.
    pub fn is_identity(&self) -> bool {
        !self.src.is_empty() && !self.tgt.is_empty() && self.cost == 0.0
    }

    fn is_pure(&self) -> bool {
        self.is_insertion() || self.is_deletion()
    }
}

/// Monotone alignment partitioning both sentences.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SentenceAlignment {
    pub pairs: Vec<AlignmentPair>,
}

impl SentenceAlignment {
    pub fn total_cost(&self) -> f64 {
        self.pairs.iter().map(|p| p.cost).sum()
    }

    /// Checks the partition invariant against sentence lengths.
    pub fn is_partition(&self, src_len: usize, tgt_len: usize) -> bool {
        let (mut i, mut k) = (0, 0);
        for p in &self.pairs {
            if p.src.start != i || p.tgt.start != k || (p.src.is_empty() && p.tgt.is_empty()) {
                return false;
            }
            i = p.src.end;
            k = p.tgt.end;
        }
        i == src_len && k == tgt_len
    }
}

/// Unit-cost Levenshtein distance over characters.
pub fn levenshtein(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Character distance divided by the longer string's length; 0 for two
/// empty strings.
pub fn normalized_distance(a: &[char], b: &[char]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 0.0;
    }
    if a == b {
        return 0.0;
    }
    levenshtein(a, b) as f64 / longest as f64
}

fn chars_of(sentence: &Sentence) -> Vec<Vec<char>> {
    sentence.tokens().iter().map(|t| t.chars().collect()).collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Move {
    Sub,
    Del,
    Ins,
}

/// Token-level alignment into 1–1, 1–0 and 0–1 pairs.
///
/// Ties in the traceback prefer substitution, then deletion, then insertion.
pub fn word_align(src: &Sentence, tgt: &Sentence) -> SentenceAlignment {
    let s = chars_of(src);
    let t = chars_of(tgt);
    let (n, m) = (s.len(), t.len());
    let width = m + 1;

    let mut sub = vec![0.0; n * m];
    for i in 0..n {
        for j in 0..m {
            sub[i * m + j] = normalized_distance(&s[i], &t[j]);
        }
    }

    let mut dp = vec![0.0f64; (n + 1) * width];
    for i in 1..=n {
        dp[i * width] = i as f64;
    }
    for (j, cell) in dp.iter_mut().take(m + 1).enumerate() {
        *cell = j as f64;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = dp[(i - 1) * width + j - 1] + sub[(i - 1) * m + j - 1];
            let del = dp[(i - 1) * width + j] + 1.0;
            let ins = dp[i * width + j - 1] + 1.0;
            dp[i * width + j] = diag.min(del).min(ins);
        }
    }

    let mut pairs = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dp[i * width + j];
        let mv = if i > 0 && j > 0 && (dp[(i - 1) * width + j - 1] + sub[(i - 1) * m + j - 1] - here).abs() < EPS {
            Move::Sub
        } else if i > 0 && (dp[(i - 1) * width + j] + 1.0 - here).abs() < EPS {
            Move::Del
        } else {
            Move::Ins
        };
        match mv {
            Move::Sub => {
                pairs.push(AlignmentPair {
                    src: i - 1..i,
                    tgt: j - 1..j,
                    cost: sub[(i - 1) * m + j - 1],
                });
                i -= 1;
                j -= 1;
            }
            Move::Del => {
                pairs.push(AlignmentPair {
                    src: i - 1..i,
                    tgt: j..j,
                    cost: 1.0,
                });
                i -= 1;
            }
            Move::Ins => {
                pairs.push(AlignmentPair {
                    src: i..i,
                    tgt: j - 1..j,
                    cost: 1.0,
                });
                j -= 1;
            }
        }
    }
    pairs.reverse();
    SentenceAlignment { pairs }
}

fn span_chars(sentence: &Sentence, span: &Range<usize>) -> Vec<char> {
    sentence.join_span(span.clone()).chars().collect()
}

/// True when some character of the stranded (inserted or deleted) side also
/// occurs on the opposite side of the neighbouring substitution.
fn shares_material(src: &Sentence, tgt: &Sentence, pure: &AlignmentPair, other: &AlignmentPair) -> bool {
    let (stranded, opposite) = if pure.is_deletion() {
        (span_chars(src, &pure.src), span_chars(tgt, &other.tgt))
    } else {
        (span_chars(tgt, &pure.tgt), span_chars(src, &other.src))
    };
    stranded.iter().any(|c| opposite.contains(c))
}

fn merge_candidate(src: &Sentence, tgt: &Sentence, a: &AlignmentPair, b: &AlignmentPair) -> Option<AlignmentPair> {
    let (pure, other) = match (a.is_pure(), b.is_pure()) {
        (true, false) => (a, b),
        (false, true) => (b, a),
        _ => return None,
    };
    if other.is_identity() || !shares_material(src, tgt, pure, other) {
        return None;
    }
    let src_span = a.src.start..b.src.end;
    let tgt_span = a.tgt.start..b.tgt.end;
    let cost = normalized_distance(&span_chars(src, &src_span), &span_chars(tgt, &tgt_span));
    (cost < a.cost + b.cost - EPS).then_some(AlignmentPair {
        src: src_span,
        tgt: tgt_span,
        cost,
    })
}

/// Greedy merge/split refinement.
///
/// Scans adjacent pairs left to right and applies the first merge that
/// strictly lowers the total cost, until a full scan changes nothing. Only
/// a pure insertion or deletion may be merged, only into a neighbouring
/// non-identity substitution, and only if the two share characters.
pub fn refine_alignment(src: &Sentence, tgt: &Sentence, alignment: SentenceAlignment) -> SentenceAlignment {
    let mut pairs = alignment.pairs;
    let cap = 10 * (src.len() + tgt.len());
    for _ in 0..cap {
        let found = (0..pairs.len().saturating_sub(1))
            .find_map(|i| merge_candidate(src, tgt, &pairs[i], &pairs[i + 1]).map(|p| (i, p)));
        match found {
            Some((i, merged)) => {
                pairs[i] = merged;
                pairs.remove(i + 1);
            }
            None => break,
        }
    }
    SentenceAlignment { pairs }
}

/// `word_align` followed by `refine_alignment`.
pub fn align_sentences(src: &Sentence, tgt: &Sentence) -> SentenceAlignment {
    refine_alignment(src, tgt, word_align(src, tgt))
}

/// One primitive character alignment step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharStep {
    Keep(char),
    Delete(char),
    Insert(char),
    Replace(char, char),
}

/// Minimal unit-cost character alignment. Ties prefer replace (or keep),
/// then delete, then insert, walking back from the end of both strings.
pub fn char_align(src: &[char], tgt: &[char]) -> Vec<CharStep> {
    let (n, m) = (src.len(), tgt.len());
    let width = m + 1;
    let mut dp = vec![0usize; (n + 1) * width];
    for i in 0..=n {
        dp[i * width] = i;
    }
    for (j, cell) in dp.iter_mut().enumerate().take(m + 1) {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = dp[(i - 1) * width + j - 1] + usize::from(src[i - 1] != tgt[j - 1]);
            let del = dp[(i - 1) * width + j] + 1;
            let ins = dp[i * width + j - 1] + 1;
            dp[i * width + j] = diag.min(del).min(ins);
        }
    }

    let mut steps = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = dp[i * width + j];
        if i > 0 && j > 0 {
            let same = src[i - 1] == tgt[j - 1];
            if dp[(i - 1) * width + j - 1] + usize::from(!same) == here {
                steps.push(if same {
                    CharStep::Keep(src[i - 1])
                } else {
                    CharStep::Replace(src[i - 1], tgt[j - 1])
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && dp[(i - 1) * width + j] + 1 == here {
            steps.push(CharStep::Delete(src[i - 1]));
            i -= 1;
        } else {
            steps.push(CharStep::Insert(tgt[j - 1]));
            j -= 1;
        }
    }
    steps.reverse();
    steps
}

/// Replays a character alignment, returning the (source, target) strings it
/// consumes and produces.
pub fn replay(steps: &[CharStep]) -> (String, String) {
    let mut src = String::new();
    let mut tgt = String::new();
    for step in steps {
        match *step {
            CharStep::Keep(c) => {
                src.push(c);
                tgt.push(c);
            }
            CharStep::Delete(c) => src.push(c),
            CharStep::Insert(c) => tgt.push(c),
            CharStep::Replace(a, b) => {
                src.push(a);
                tgt.push(b);
            }
        }
    }
    (src, tgt)
}

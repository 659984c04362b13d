use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{corpus_counts, Counts, SpanEdit};
use crate::error::{Error, Result};
use crate::textcore::Sentence;

// Guards the `>=` comparison against summation-order noise.
const EPS: f64 = 1e-12;

fn f05(counts: impl Iterator<Item = Counts>) -> f64 {
    let mut total = Counts::default();
    for c in counts {
        total += c;
    }
    total.report().f05
}

fn statistic(a: &[Counts], b: &[Counts], swapped: impl Fn(usize) -> bool) -> f64 {
    let fa = f05((0..a.len()).map(|i| if swapped(i) { b[i] } else { a[i] }));
    let fb = f05((0..a.len()).map(|i| if swapped(i) { a[i] } else { b[i] }));
    (fa - fb).abs()
}

fn check_lengths(a: &[Counts], b: &[Counts]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::CountMismatch(format!(
            "system A has {} sentences, system B has {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Two-sided paired approximate randomization over per-sentence counts.
///
/// Each trial swaps the systems' outputs per sentence with probability ½;
/// `p = (1 + #{trial statistic ≥ observed}) / (1 + trials)`.
pub fn approximate_randomization(a: &[Counts], b: &[Counts], trials: usize, seed: u64) -> Result<f64> {
    check_lengths(a, b)?;
    let observed = statistic(a, b, |_| false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut at_least = 0usize;
    let mut swaps = vec![false; a.len()];
    for _ in 0..trials {
        for s in &mut swaps {
            *s = rng.random_bool(0.5);
        }
        if statistic(a, b, |i| swaps[i]) >= observed - EPS {
            at_least += 1;
        }
    }
    Ok((1 + at_least) as f64 / (1 + trials) as f64)
}

/// Exact randomization p-value: the fraction of all `2^n` swap patterns whose
/// statistic reaches the observed one. Only feasible for small `n`.
pub fn exact_randomization(a: &[Counts], b: &[Counts]) -> Result<f64> {
    check_lengths(a, b)?;
    assert!(a.len() < 32, "exact randomization over {} sentences", a.len());
    let observed = statistic(a, b, |_| false);
    let patterns = 1u64 << a.len();
    let at_least = (0..patterns)
        .filter(|mask| statistic(a, b, |i| mask >> i & 1 == 1) >= observed - EPS)
        .count();
    Ok(at_least as f64 / patterns as f64)
}

/// Scores both systems against `gold` and runs
/// [`approximate_randomization`] on their per-sentence counts.
pub fn significance(
    sources: &[Sentence],
    gold: &[Vec<SpanEdit>],
    hyp_a: &[Sentence],
    hyp_b: &[Sentence],
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let n = sources.len();
    if gold.len() != n || hyp_a.len() != n || hyp_b.len() != n {
        return Err(Error::CountMismatch(format!(
            "{n} sources, {} gold, {} system A, {} system B",
            gold.len(),
            hyp_a.len(),
            hyp_b.len()
        )));
    }
    let counts = |hyp: &[Sentence]| {
        corpus_counts(
            sources
                .iter()
                .zip(gold)
                .zip(hyp)
                .map(|((s, g), h)| (s, g.as_slice(), h)),
        )
    };
    approximate_randomization(&counts(hyp_a)?, &counts(hyp_b)?, trials, seed)
}

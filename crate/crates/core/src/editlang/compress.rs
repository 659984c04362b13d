use std::collections::{BTreeMap, HashMap};

use super::{CharOp, EditTag};
use crate::error::{Error, Result};

/// One way of compressing a tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub tag: EditTag,
    /// Length of the starred run, 0 when nothing is starred.
    pub run_len: usize,
    /// Op index where the starred run starts.
    pub run_start: usize,
}

/// All compressions of `tag`: insert/append runs are always merged, and at
/// most one maximal `K` or `D` run of length ≥ 2 is starred. The unstarred
/// form is always the last candidate.
pub fn compression_candidates(tag: &EditTag) -> Vec<Candidate> {
    let base = tag.merge_runs();
    let ops = base.ops();
    let mut candidates = Vec::new();
    let mut i = 0;
    while i < ops.len() {
        let op = &ops[i];
        if !matches!(op, CharOp::Keep | CharOp::Delete) {
            i += 1;
            continue;
        }
        let end = i + ops[i..].iter().take_while(|o| *o == op).count();
        if end - i >= 2 {
            let star = if *op == CharOp::Keep {
                CharOp::KeepRun
            } else {
                CharOp::DeleteRun
            };
            let mut starred = Vec::with_capacity(ops.len() - (end - i) + 1);
            starred.extend_from_slice(&ops[..i]);
            starred.push(star);
            starred.extend_from_slice(&ops[end..]);
            candidates.push(Candidate {
                tag: EditTag::new(starred),
                run_len: end - i,
                run_start: i,
            });
        }
        i = end;
    }
    candidates.push(Candidate {
        tag: base,
        run_len: 0,
        run_start: 0,
    });
    candidates
}

/// Longest starred run first, then leftmost.
fn structural_order(a: &Candidate, b: &Candidate) -> std::cmp::Ordering {
    b.run_len.cmp(&a.run_len).then(a.run_start.cmp(&b.run_start))
}

fn default_choice(tag: &EditTag) -> EditTag {
    let mut candidates = compression_candidates(tag);
    candidates.sort_by(structural_order);
    candidates.swap_remove(0).tag
}

/// Per-tag compression choices learned from training data.
///
/// Every candidate serialization is counted over the corpus; each tag then
/// maps to its most frequent candidate, ties going to the longest starred
/// run and then the leftmost one. Tags never seen in training fall back to
/// the longest-run rule.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompressionSelector {
    choices: BTreeMap<String, String>,
}

impl CompressionSelector {
    pub fn build<'a>(tags: impl IntoIterator<Item = &'a EditTag>) -> CompressionSelector {
        let mut distinct: HashMap<EditTag, u64> = HashMap::new();
        for tag in tags {
            *distinct.entry(tag.merge_runs()).or_default() += 1;
        }

        let mut candidate_counts: HashMap<String, u64> = HashMap::new();
        let mut per_tag = Vec::with_capacity(distinct.len());
        for (tag, count) in distinct {
            let candidates: Vec<(Candidate, String)> = compression_candidates(&tag)
                .into_iter()
                .map(|c| {
                    let s = c.tag.to_string();
                    (c, s)
                })
                .collect();
            for (_, s) in &candidates {
                *candidate_counts.entry(s.clone()).or_default() += count;
            }
            per_tag.push((tag.to_string(), candidates));
        }

        let choices = per_tag
            .into_iter()
            .map(|(key, candidates)| {
                let best = candidates
                    .into_iter()
                    .min_by(|(a, sa), (b, sb)| {
                        candidate_counts[sb]
                            .cmp(&candidate_counts[sa])
                            .then_with(|| structural_order(a, b))
                    })
                    .map(|(_, s)| s)
                    .unwrap_or_default();
                (key, best)
            })
            .collect();
        CompressionSelector { choices }
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn choose(&self, tag: &EditTag) -> EditTag {
        let key = tag.merge_runs();
        match self.choices.get(&key.to_string()) {
            Some(chosen) => EditTag::parse(chosen).unwrap_or_else(|_| default_choice(&key)),
            None => default_choice(&key),
        }
    }

    /// `uncompressed<TAB>chosen` lines sorted by the uncompressed tag.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.choices {
            out.push_str(k);
            out.push('\t');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<CompressionSelector> {
        let mut choices = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('\t')
                .ok_or_else(|| Error::format(i + 1, "expected uncompressed<TAB>chosen"))?;
            let key = EditTag::parse(k).map_err(|e| Error::format(i + 1, e.to_string()))?;
            let chosen = EditTag::parse(v).map_err(|e| Error::format(i + 1, e.to_string()))?;
            if chosen.star_count() > 1 {
                return Err(Error::format(i + 1, "chosen tag has more than one starred run"));
            }
            choices.insert(key.to_string(), chosen.to_string());
        }
        Ok(CompressionSelector { choices })
    }
}

/// Compresses an uncompressed tag with `selector`.
pub fn compress(tag: &EditTag, selector: &CompressionSelector) -> EditTag {
    selector.choose(tag)
}

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use super::Tagger;
use crate::editlang::{EditTag, EditVocabulary, Granularity, Segmenter, TagFile, TaggedSentence, TaggedUnit};
use crate::error::{Error, Result};
use crate::textcore::{Sentence, CONTINUATION_PREFIX};

const TRIGRAM: &str = "trigram";
const UNIGRAM: &str = "unigram";

/// Frequency baseline: the most frequent training tag for a unit given its
/// neighbours, backing off to the unit alone and then to the keep tag.
///
/// Units that continue a word are keyed with a `##` prefix, so the same
/// characters at word start and inside a word are distinct contexts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LookupModel {
    granularity: Option<Granularity>,
    trigram: HashMap<String, (EditTag, u64)>,
    unigram: HashMap<String, (EditTag, u64)>,
}

fn unit_keys(units: &[TaggedUnit]) -> Vec<String> {
    units
        .iter()
        .enumerate()
        .map(|(i, u)| {
            if i > 0 && units[i - 1].word == u.word {
                format!("{CONTINUATION_PREFIX}{}", u.surface)
            } else {
                u.surface.clone()
            }
        })
        .collect()
}

fn trigram_key(keys: &[String], i: usize) -> String {
    let prev = if i > 0 { keys[i - 1].as_str() } else { "" };
    let next = keys.get(i + 1).map_or("", String::as_str);
    format!("{prev} {} {next}", keys[i])
}

// highest count wins; ties go to the lexicographically smaller tag
fn best(counts: HashMap<String, HashMap<String, u64>>) -> HashMap<String, (EditTag, u64)> {
    counts
        .into_iter()
        .filter_map(|(key, tags)| {
            let (tag, count) = tags
                .into_iter()
                .min_by(|(ta, ca), (tb, cb)| cb.cmp(ca).then_with(|| ta.cmp(tb)))?;
            let tag = EditTag::parse(&tag).ok()?;
            Some((key, (tag, count)))
        })
        .collect()
}

impl LookupModel {
    /// Counts tags per context over `file`. Tags outside `vocab`, when one is
    /// given, are counted as the keep tag.
    pub fn train(file: &TagFile, vocab: Option<&EditVocabulary>) -> LookupModel {
        let mut trigram: HashMap<String, HashMap<String, u64>> = HashMap::new();
        let mut unigram: HashMap<String, HashMap<String, u64>> = HashMap::new();
        for sentence in &file.sentences {
            let keys = unit_keys(&sentence.units);
            for (i, unit) in sentence.units.iter().enumerate() {
                let tag = match vocab {
                    Some(v) => v.rewrite(&unit.tag),
                    None => unit.tag.clone(),
                }
                .to_string();
                *trigram
                    .entry(trigram_key(&keys, i))
                    .or_default()
                    .entry(tag.clone())
                    .or_default() += 1;
                *unigram.entry(keys[i].clone()).or_default().entry(tag).or_default() += 1;
            }
        }
        LookupModel {
            granularity: Some(file.granularity),
            trigram: best(trigram),
            unigram: best(unigram),
        }
    }

    /// Granularity of the training tags; `None` for an empty model.
    pub fn granularity(&self) -> Option<Granularity> {
        self.granularity
    }

    /// Predicted tag for every unit of `units`, ignoring their current tags.
    pub fn predict(&self, units: &[TaggedUnit]) -> Vec<EditTag> {
        let keys = unit_keys(units);
        (0..units.len())
            .map(|i| {
                self.trigram
                    .get(&trigram_key(&keys, i))
                    .or_else(|| self.unigram.get(&keys[i]))
                    .map_or_else(EditTag::keep, |(tag, _)| tag.clone())
            })
            .collect()
    }

    /// `#granularity=…` followed by `kind<TAB>key<TAB>tag<TAB>count` lines
    /// sorted by kind and key.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        if let Some(g) = self.granularity {
            let _ = writeln!(out, "#granularity={g}");
        }
        for (kind, map) in [(TRIGRAM, &self.trigram), (UNIGRAM, &self.unigram)] {
            let sorted: BTreeMap<&String, &(EditTag, u64)> = map.iter().collect();
            for (key, (tag, count)) in sorted {
                let _ = writeln!(out, "{kind}\t{key}\t{tag}\t{count}");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<LookupModel> {
        let mut model = LookupModel::default();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(g) = line.strip_prefix("#granularity=") {
                model.granularity = Some(g.parse().map_err(|e: String| Error::format(lineno, e))?);
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [kind, key, tag, count] = fields[..] else {
                return Err(Error::format(lineno, "expected kind<TAB>key<TAB>tag<TAB>count"));
            };
            let map = match kind {
                TRIGRAM => &mut model.trigram,
                UNIGRAM => &mut model.unigram,
                _ => return Err(Error::format(lineno, format!("unknown context kind {kind:?}"))),
            };
            let tag = EditTag::parse(tag).map_err(|e| Error::format(lineno, e.to_string()))?;
            let count = count
                .parse()
                .map_err(|_| Error::format(lineno, format!("invalid count {count:?}")))?;
            map.insert(key.to_owned(), (tag, count));
        }
        Ok(model)
    }
}

/// A [`LookupModel`] paired with the segmentation it was trained on.
#[derive(Clone, Copy, Debug)]
pub struct LookupTagger<'a> {
    pub model: &'a LookupModel,
    pub segmenter: Segmenter<'a>,
}

impl Tagger for LookupTagger<'_> {
    fn tag(&self, src: &Sentence) -> Result<TaggedSentence> {
        let mut tagged = self.segmenter.uniform(src, &EditTag::keep());
        let predicted = self.model.predict(&tagged.units);
        for (unit, tag) in tagged.units.iter_mut().zip(predicted) {
            unit.tag = tag;
        }
        Ok(tagged)
    }
}

use std::collections::BTreeMap;

use super::{EditTag, KEEP_TAG};
use crate::error::{Error, Result};

/// Training frequency of every serialized tag. The keep tag `K*` is always
/// present and never pruned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditVocabulary {
    counts: BTreeMap<String, u64>,
}

impl Default for EditVocabulary {
    fn default() -> Self {
        let mut counts = BTreeMap::new();
        counts.insert(KEEP_TAG.to_owned(), 1);
        EditVocabulary { counts }
    }
}

impl EditVocabulary {
    pub fn build<'a>(tags: impl IntoIterator<Item = &'a EditTag>) -> EditVocabulary {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for tag in tags {
            *counts.entry(tag.to_string()).or_default() += 1;
        }
        counts.entry(KEEP_TAG.to_owned()).or_insert(1);
        EditVocabulary { counts }
    }

    /// Drops tags seen fewer than `threshold` times.
    pub fn prune(&self, threshold: u64) -> EditVocabulary {
        EditVocabulary {
            counts: self
                .counts
                .iter()
                .filter(|(tag, &count)| count >= threshold || tag.as_str() == KEEP_TAG)
                .map(|(t, &c)| (t.clone(), c))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn contains(&self, tag: &EditTag) -> bool {
        self.contains_str(&tag.to_string())
    }

    pub fn contains_str(&self, tag: &str) -> bool {
        self.counts.contains_key(tag)
    }

    pub fn count(&self, tag: &str) -> Option<u64> {
        self.counts.get(tag).copied()
    }

    /// `tag` if in the vocabulary, the keep tag otherwise.
    pub fn rewrite(&self, tag: &EditTag) -> EditTag {
        if self.contains(tag) {
            tag.clone()
        } else {
            EditTag::keep()
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(t, &c)| (t.as_str(), c))
    }

    /// `tag<TAB>count` lines, by count descending then tag.
    pub fn to_file_string(&self) -> String {
        let mut entries: Vec<(&String, &u64)> = self.counts.iter().collect();
        entries.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        let mut out = String::new();
        for (tag, count) in entries {
            out.push_str(&format!("{tag}\t{count}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<EditVocabulary> {
        let mut counts = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (tag, count) = line
                .rsplit_once('\t')
                .ok_or_else(|| Error::format(i + 1, "expected tag<TAB>count"))?;
            let tag = EditTag::parse(tag).map_err(|e| Error::format(i + 1, e.to_string()))?;
            let count: u64 = count
                .parse()
                .map_err(|_| Error::format(i + 1, format!("invalid count {count:?}")))?;
            if count == 0 {
                return Err(Error::format(i + 1, "count must be at least 1"));
            }
            counts.insert(tag.to_string(), count);
        }
        counts.entry(KEEP_TAG.to_owned()).or_insert(1);
        Ok(EditVocabulary { counts })
    }
}

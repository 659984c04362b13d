use super::{EditVocabulary, TaggedSentence};

/// Vocabulary coverage of a dev set.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    /// Unique tags in the training vocabulary.
    pub unique_edits: usize,
    pub dev_units: usize,
    pub oov_units: usize,
    /// Dev sentences with out-of-vocabulary tags replaced by the keep tag.
    pub oracle: Vec<TaggedSentence>,
}

impl CoverageReport {
    /// Percentage of dev unit tags missing from the vocabulary.
    pub fn oov_percent(&self) -> f64 {
        if self.dev_units == 0 {
            0.0
        } else {
            100.0 * self.oov_units as f64 / self.dev_units as f64
        }
    }
}

pub fn coverage_stats<'a>(
    train_vocab: &EditVocabulary,
    dev: impl IntoIterator<Item = &'a TaggedSentence>,
) -> CoverageReport {
    let mut dev_units = 0;
    let mut oov_units = 0;
    let oracle = dev
        .into_iter()
        .map(|sentence| {
            sentence.clone().map_tags(|tag| {
                dev_units += 1;
                if train_vocab.contains(tag) {
                    tag.clone()
                } else {
                    oov_units += 1;
                    super::EditTag::keep()
                }
            })
        })
        .collect();
    CoverageReport {
        unique_edits: train_vocab.len(),
        dev_units,
        oov_units,
        oracle,
    }
}

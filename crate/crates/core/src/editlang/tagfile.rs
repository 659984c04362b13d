use std::fmt::Write as _;

use super::{EditTag, Granularity, TaggedSentence, TaggedUnit};
use crate::error::{Error, Result};

/// Contents of a tag file.
///
/// ```text
/// #granularity=subword #compressed=1
/// surface<TAB>word_index<TAB>tag
/// ...
/// <blank line ends each sentence>
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagFile {
    pub granularity: Granularity,
    pub compressed: bool,
    pub sentences: Vec<TaggedSentence>,
}

impl TagFile {
    pub fn new(granularity: Granularity, compressed: bool) -> TagFile {
        TagFile {
            granularity,
            compressed,
            sentences: Vec::new(),
        }
    }

    pub fn header(&self) -> String {
        format!(
            "#granularity={} #compressed={}",
            self.granularity,
            u8::from(self.compressed)
        )
    }

    pub fn to_file_string(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for sentence in &self.sentences {
            write_sentence(&mut out, sentence);
        }
        out
    }

    pub fn parse(text: &str) -> Result<TagFile> {
        let mut lines = text.lines().enumerate();
        let (granularity, compressed) = match lines.next() {
            Some((_, header)) => parse_header(header)?,
            None => return Err(Error::format(1, "missing tag file header")),
        };
        let mut file = TagFile::new(granularity, compressed);
        let mut units: Vec<TaggedUnit> = Vec::new();
        for (i, line) in lines {
            let lineno = i + 1;
            if line.is_empty() {
                file.sentences.push(TaggedSentence {
                    granularity,
                    units: std::mem::take(&mut units),
                });
                continue;
            }
            let mut fields = line.splitn(3, '\t');
            let (Some(surface), Some(word), Some(tag)) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::format(lineno, "expected surface<TAB>word_index<TAB>tag"));
            };
            if surface.is_empty() || surface.chars().any(char::is_whitespace) {
                return Err(Error::format(lineno, format!("invalid surface {surface:?}")));
            }
            let word: usize = word
                .parse()
                .map_err(|_| Error::format(lineno, format!("invalid word index {word:?}")))?;
            let expected = match units.last() {
                None => word == 0,
                Some(prev) => word == prev.word || word == prev.word + 1,
            };
            if !expected || (granularity == Granularity::Word && units.last().is_some_and(|p| p.word == word)) {
                return Err(Error::format(lineno, format!("unexpected word index {word}")));
            }
            let tag = EditTag::parse(tag).map_err(|e| Error::format(lineno, e.to_string()))?;
            units.push(TaggedUnit {
                surface: surface.to_owned(),
                word,
                tag,
            });
        }
        if !units.is_empty() {
            file.sentences.push(TaggedSentence { granularity, units });
        }
        Ok(file)
    }
}

fn write_sentence(out: &mut String, sentence: &TaggedSentence) {
    for unit in &sentence.units {
        let _ = writeln!(out, "{}\t{}\t{}", unit.surface, unit.word, unit.tag);
    }
    out.push('\n');
}

fn parse_header(line: &str) -> Result<(Granularity, bool)> {
    let mut granularity = None;
    let mut compressed = None;
    for field in line.split_whitespace() {
        let Some((key, value)) = field.strip_prefix('#').and_then(|f| f.split_once('=')) else {
            return Err(Error::format(1, format!("malformed header field {field:?}")));
        };
        match key {
            "granularity" => granularity = Some(value.parse().map_err(|e: String| Error::format(1, e))?),
            "compressed" => {
                compressed = Some(match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Error::format(1, format!("invalid compressed flag {value:?}"))),
                })
            }
            _ => return Err(Error::format(1, format!("unknown header key {key:?}"))),
        }
    }
    match (granularity, compressed) {
        (Some(g), Some(c)) => Ok((g, c)),
        _ => Err(Error::format(1, "header needs #granularity and #compressed")),
    }
}

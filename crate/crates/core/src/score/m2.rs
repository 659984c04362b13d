use super::SpanEdit;
use crate::error::{Error, Result};
use crate::textcore::{tokenize, Sentence};

/// One `S` block of an M² file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M2Sentence {
    pub source: Sentence,
    pub gold: Vec<SpanEdit>,
}

/// Parses M² gold annotations, keeping edits of `annotator` only.
///
/// `noop` annotations and `-1 -1` spans contribute nothing; a correction of
/// `-NONE-` is a deletion.
pub fn parse_m2(text: &str, annotator: usize) -> Result<Vec<M2Sentence>> {
    let mut sentences: Vec<M2Sentence> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("S ").or_else(|| (line == "S").then_some("")) {
            sentences.push(M2Sentence {
                source: tokenize(rest),
                gold: Vec::new(),
            });
            continue;
        }
        let Some(rest) = line.strip_prefix("A ") else {
            return Err(Error::format(lineno, "expected an S or A line"));
        };
        let Some(current) = sentences.last_mut() else {
            return Err(Error::format(lineno, "annotation before any S line"));
        };
        let fields: Vec<&str> = rest.split("|||").collect();
        if fields.len() < 3 {
            return Err(Error::format(lineno, "annotation needs span|||type|||correction"));
        }
        let id = match fields.get(5) {
            Some(id) => id
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::format(lineno, format!("invalid annotator id {id:?}")))?,
            None => 0,
        };
        if id != annotator {
            continue;
        }
        let mut span = fields[0].split_whitespace();
        let (Some(start), Some(end), None) = (span.next(), span.next(), span.next()) else {
            return Err(Error::format(lineno, "span must be two integers"));
        };
        let parse = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| Error::format(lineno, format!("invalid span offset {s:?}")))
        };
        let (start, end) = (parse(start)?, parse(end)?);
        if fields[1].eq_ignore_ascii_case("noop") || (start == -1 && end == -1) {
            continue;
        }
        if start < 0 || end < 0 {
            return Err(Error::format(lineno, "negative span offset"));
        }
        if start > end {
            return Err(Error::format(lineno, format!("span start {start} after end {end}")));
        }
        let (start, end) = (start as usize, end as usize);
        if end > current.source.len() {
            return Err(Error::format(
                lineno,
                format!("span {start}..{end} beyond a {}-token sentence", current.source.len()),
            ));
        }
        let correction = match fields[2].trim() {
            "-NONE-" => String::new(),
            other => tokenize(other).to_string(),
        };
        current.gold.push(SpanEdit::new(start, end, correction));
    }
    Ok(sentences)
}

//! Seeded synthetic parallel corpora.
//!
//! Clean sentences are drawn from small Arabic and Latin word lists and then
//! corrupted with character noise, token merges and splits, token
//! insertions and deletions, punctuation noise and stray diacritics. The
//! corrupted side is the source, the clean side the target.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::textcore::{Sentence, SubwordVocab};

const ARABIC_WORDS: &[&str] = &[
    "يجب",
    "الاهتمام",
    "بالصحة",
    "وخصوصا",
    "الصحة",
    "النفسية",
    "في",
    "من",
    "إلى",
    "على",
    "هذا",
    "هذه",
    "التي",
    "الذي",
    "كان",
    "المدرسة",
    "الطلاب",
    "الجامعة",
    "مدينة",
    "الحياة",
    "العمل",
    "الناس",
    "كبيرة",
    "جديدة",
    "المجتمع",
    "الأسرة",
    "اللغة",
    "العربية",
    "مهمة",
    "الوقت",
    "كثيرا",
    "أيضا",
    "لأن",
    "عندما",
    "الدراسة",
    "والتعليم",
    "بسبب",
    "المشكلة",
    "حياتي",
    "أصدقائي",
];

const LATIN_WORDS: &[&str] = &[
    "the",
    "students",
    "should",
    "care",
    "about",
    "their",
    "health",
    "especially",
    "mental",
    "school",
    "city",
    "life",
    "work",
    "people",
    "language",
    "important",
    "because",
    "when",
    "study",
    "problem",
    "friends",
    "family",
    "new",
    "big",
    "time",
    "very",
    "also",
    "with",
    "from",
    "into",
    "this",
    "that",
    "which",
    "teacher",
    "writing",
    "learning",
    "country",
    "small",
    "often",
    "always",
];

const ARABIC_LETTERS: &[char] = &[
    'ا', 'أ', 'إ', 'ب', 'ت', 'ة', 'ث', 'ج', 'ح', 'د', 'ر', 'س', 'ع', 'ف', 'ق', 'ل', 'م', 'ن', 'ه', 'و', 'ي', 'ى',
];
const LATIN_LETTERS: &[char] = &[
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'l', 'm', 'n', 'o', 'r', 's', 't', 'u', 'y',
];
const ARABIC_PUNCT: &[&str] = &[".", "،", "؟", "!", ":", "؛"];
const LATIN_PUNCT: &[&str] = &[".", ",", "?", "!", ":", ";"];
// fathatan, dammatan, kasratan, shadda
const MARKS: &[char] = &['\u{064B}', '\u{064C}', '\u{064D}', '\u{0651}'];

/// Common spelling confusions, applied in both directions.
const ARABIC_CONFUSIONS: &[(char, char)] = &[('ة', 'ه'), ('أ', 'ا'), ('إ', 'ا'), ('ى', 'ي')];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Script {
    Arabic,
    Latin,
}

/// Noise rates per token (per sentence for `punct`).
#[derive(Clone, Debug)]
pub struct NoiseConfig {
    pub char_noise: f64,
    pub merge: f64,
    pub split: f64,
    pub insert_token: f64,
    pub delete_token: f64,
    pub punct: f64,
    pub mark: f64,
    /// Share of Arabic sentences; the rest are Latin.
    pub arabic_share: f64,
    pub min_tokens: usize,
    pub max_tokens: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            char_noise: 0.12,
            merge: 0.04,
            split: 0.04,
            insert_token: 0.03,
            delete_token: 0.03,
            punct: 0.5,
            mark: 0.02,
            arabic_share: 0.7,
            min_tokens: 3,
            max_tokens: 16,
        }
    }
}

/// One corrupted/clean sentence pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthPair {
    pub script: Script,
    pub source: Sentence,
    pub target: Sentence,
}

pub struct SynthCorpus {
    rng: ChaCha8Rng,
    config: NoiseConfig,
}

impl SynthCorpus {
    pub fn new(seed: u64, config: NoiseConfig) -> SynthCorpus {
        SynthCorpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
            config,
        }
    }

    pub fn with_seed(seed: u64) -> SynthCorpus {
        SynthCorpus::new(seed, NoiseConfig::default())
    }

    /// `n` pairs, each with a non-empty source.
    pub fn pairs(&mut self, n: usize) -> Vec<SynthPair> {
        (0..n).map(|_| self.pair()).collect()
    }

    /// Pairs until their sources hold at least `words` tokens.
    pub fn pairs_with_words(&mut self, words: usize) -> Vec<SynthPair> {
        let mut out = Vec::new();
        let mut total = 0;
        while total < words {
            let pair = self.pair();
            total += pair.source.len();
            out.push(pair);
        }
        out
    }

    pub fn pair(&mut self) -> SynthPair {
        let script = if self.rng.random_bool(self.config.arabic_share) {
            Script::Arabic
        } else {
            Script::Latin
        };
        let target = self.clean(script);
        loop {
            let source = self.corrupt(script, &target);
            if !source.is_empty() {
                return SynthPair {
                    script,
                    source: Sentence::from_tokens(source),
                    target: Sentence::from_tokens(target),
                };
            }
        }
    }

    fn clean(&mut self, script: Script) -> Vec<String> {
        let (words, punct) = lists(script);
        let n = self.rng.random_range(self.config.min_tokens..=self.config.max_tokens);
        let mut tokens: Vec<String> = (0..n).map(|_| pick(&mut self.rng, words).to_owned()).collect();
        if n > 5 && self.rng.random_bool(0.3) {
            let at = self.rng.random_range(2..n - 1);
            tokens.insert(at, pick(&mut self.rng, &punct[1..]).to_owned());
        }
        if self.rng.random_bool(0.8) {
            tokens.push(pick(&mut self.rng, punct).to_owned());
        }
        tokens
    }

    fn corrupt(&mut self, script: Script, clean: &[String]) -> Vec<String> {
        let c = self.config.clone();
        let (words, punct) = lists(script);
        let mut out: Vec<String> = Vec::new();
        let mut i = 0;
        while i < clean.len() {
            let token = &clean[i];
            let is_punct = punct.contains(&token.as_str());
            let rng = &mut self.rng;
            if is_punct && rng.random_bool(c.punct * 0.5) {
                // dropped, replaced or glued to the previous word
                match rng.random_range(0..3) {
                    0 => {}
                    1 => out.push(pick(rng, punct).to_owned()),
                    _ => match out.last_mut() {
                        Some(last) => last.push_str(token),
                        None => out.push(token.clone()),
                    },
                }
                i += 1;
                continue;
            }
            if rng.random_bool(c.delete_token) {
                i += 1;
                continue;
            }
            if rng.random_bool(c.insert_token) {
                out.push(pick(rng, words).to_owned());
            }
            if !is_punct && i + 1 < clean.len() && rng.random_bool(c.merge) {
                out.push(format!("{token}{}", clean[i + 1]));
                i += 2;
                continue;
            }
            let mut word = token.clone();
            if !is_punct && rng.random_bool(c.char_noise) {
                word = char_noise(rng, script, &word);
            }
            if !is_punct && rng.random_bool(c.mark) {
                let mark = *MARKS.choose(rng).unwrap();
                if rng.random_bool(0.5) {
                    word.push(mark);
                } else {
                    out.push(word);
                    word = mark.to_string();
                }
            }
            let chars: Vec<char> = word.chars().collect();
            if chars.len() >= 4 && rng.random_bool(c.split) {
                let at = rng.random_range(1..chars.len());
                out.push(chars[..at].iter().collect());
                out.push(chars[at..].iter().collect());
            } else {
                out.push(word);
            }
            i += 1;
        }
        if self.rng.random_bool(c.punct * 0.2) {
            out.push(pick(&mut self.rng, punct).to_owned());
        }
        out
    }
}

fn lists(script: Script) -> (&'static [&'static str], &'static [&'static str]) {
    match script {
        Script::Arabic => (ARABIC_WORDS, ARABIC_PUNCT),
        Script::Latin => (LATIN_WORDS, LATIN_PUNCT),
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items.choose(rng).copied().unwrap_or_default()
}

fn char_noise(rng: &mut ChaCha8Rng, script: Script, word: &str) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    let letters = match script {
        Script::Arabic => ARABIC_LETTERS,
        Script::Latin => LATIN_LETTERS,
    };
    let at = rng.random_range(0..chars.len());
    if script == Script::Arabic && rng.random_bool(0.5) {
        // prefer a realistic confusion when the word has one
        for (i, &ch) in chars.iter().enumerate().rev() {
            if let Some(&(a, b)) = ARABIC_CONFUSIONS.iter().find(|(a, b)| *a == ch || *b == ch) {
                chars[i] = if ch == a { b } else { a };
                return chars.into_iter().collect();
            }
        }
    }
    match rng.random_range(0..3) {
        0 => chars[at] = *letters.choose(rng).unwrap(),
        1 => chars.insert(at, *letters.choose(rng).unwrap()),
        _ if chars.len() > 1 => {
            chars.remove(at);
        }
        _ => chars[at] = *letters.choose(rng).unwrap(),
    }
    chars.into_iter().collect()
}

/// A subword vocabulary covering `sentences`: every word seen at least
/// `min_count` times whole, frequent Arabic clitics and suffixes, and every
/// single character both word-initially and as a continuation piece, so
/// greedy segmentation always succeeds.
pub fn subword_vocab<'a>(sentences: impl IntoIterator<Item = &'a Sentence>, min_count: usize) -> SubwordVocab {
    let mut counts: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
    let mut chars = std::collections::BTreeSet::new();
    for sentence in sentences {
        for token in sentence.tokens() {
            *counts.entry(token.as_str()).or_default() += 1;
            chars.extend(token.chars());
        }
    }
    let mut vocab = SubwordVocab::new();
    let mut frequent: Vec<&str> = counts
        .into_iter()
        .filter(|&(_, n)| n >= min_count)
        .map(|(w, _)| w)
        .collect();
    frequent.sort_unstable();
    for word in frequent {
        vocab.insert(word);
    }
    for piece in [
        "ال", "وال", "بال", "لل", "##ة", "##ه", "##ات", "##ين", "##ون", "##ها", "##ing", "##s", "##ed",
    ] {
        vocab.insert(piece);
    }
    for c in chars {
        vocab.insert(&c.to_string());
        vocab.insert(&format!("##{c}"));
    }
    vocab
}

use std::fmt::Write as _;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use edittag::editlang::{
    apply_tags, apply_units, compress, coverage_stats, extract_with, segregate, CompressionSelector, EditVocabulary,
    Granularity, Segmenter, TagFile, TaggedSentence,
};
use edittag::score::{parse_m2, sentence_counts, significance, span_edits, Counts, SpanEdit};
use edittag::synth::{subword_vocab, SynthCorpus};
use edittag::taggers::{ensemble, infer, InferenceConfig, LookupModel, LookupTagger, Tagger};
use edittag::textcore::{Sentence, SubwordVocab};

use crate::{
    check_counts, read, read_sentences, read_subword_vocab, sentences_to_string, write_output, CliError, CliResult,
    Command, Context, GoldArgs, SegArgs, SegregateMode,
};

pub fn dispatch(ctx: &Context, command: Command) -> CliResult<()> {
    match command {
        Command::Extract {
            src,
            tgt,
            upsample,
            seg,
            compress,
            selector_in,
            selector_out,
            segregate,
            prune,
            vocab_out,
            out,
        } => {
            let opts = ExtractOptions {
                compress: ctx.config.resolve(compress, "compress", false)?,
                segregate: ctx.config.resolve(segregate, "segregate", SegregateMode::All)?,
                prune: ctx.config.resolve(prune, "prune", 0)?,
                selector_in,
            };
            let subwords = load_subwords(ctx, &seg)?;
            let result = cmd_extract(ctx, &src, &tgt, &upsample, segmenter(&subwords), &opts)?;
            if let Some(path) = selector_out {
                write_output(Some(&path), &result.selector.to_file_string())?;
            }
            if let Some(path) = vocab_out {
                write_output(Some(&path), &result.vocab.to_file_string())?;
            }
            write_output(out.as_deref(), &result.tags.to_file_string())
        }
        Command::Vocab { tags, prune, out } => {
            let file = parse_tag_file(&tags)?;
            let prune = ctx.config.resolve(prune, "prune", 0)?;
            let vocab = EditVocabulary::build(file.sentences.iter().flat_map(TaggedSentence::tags)).prune(prune);
            write_output(out.as_deref(), &vocab.to_file_string())
        }
        Command::Stats {
            train,
            dev,
            thresholds,
            tsv,
        } => {
            let rows = cmd_stats(ctx, &parse_tag_file(&train)?, &parse_tag_file(&dev)?, &thresholds)?;
            write_output(None, &format_stats(&rows, tsv))
        }
        Command::TrainLookup {
            tags,
            vocab,
            prune,
            out,
        } => {
            let file = parse_tag_file(&tags)?;
            let vocab = match (vocab, ctx.config.resolve_opt(prune, "prune")?) {
                (Some(path), _) => Some(EditVocabulary::parse(&read(&path)?).map_err(|e| in_file(&path, e))?),
                (None, Some(t)) => {
                    Some(EditVocabulary::build(file.sentences.iter().flat_map(TaggedSentence::tags)).prune(t))
                }
                (None, None) => None,
            };
            let model = LookupModel::train(&file, vocab.as_ref());
            write_output(out.as_deref(), &model.to_file_string())
        }
        Command::Tag {
            model,
            input,
            subword_vocab,
            out,
        } => {
            let model = load_model(&model)?;
            let subwords = model_subwords(ctx, &model, subword_vocab)?;
            let tagger = LookupTagger {
                model: &model,
                segmenter: segmenter(&subwords),
            };
            let sentences = read_sentences(&input)?;
            let tagged = ctx.par_map(&sentences, |i, s| tagger.tag(s).map_err(|e| at_line(&input, i, e)))?;
            let compressed = tagged.iter().flat_map(TaggedSentence::tags).any(|t| t.star_count() > 0);
            let mut file = TagFile::new(segmenter(&subwords).granularity(), compressed);
            file.sentences = tagged;
            write_output(out.as_deref(), &file.to_file_string())
        }
        Command::Apply {
            input,
            tags,
            model,
            iterations,
            pnx_model,
            subword_vocab,
            out,
        } => {
            let sentences = read_sentences(&input)?;
            let corrected = match (tags, model) {
                (Some(tags), _) => apply_tag_file(ctx, &input, &sentences, &tags)?,
                (None, Some(model)) => {
                    let iterations = ctx.config.resolve(iterations, "iterations", 1usize)?;
                    let iterations = NonZeroUsize::new(iterations)
                        .ok_or_else(|| CliError::Validation("--iterations must be at least 1".into()))?;
                    apply_models(
                        ctx,
                        &input,
                        &sentences,
                        &model,
                        pnx_model.as_deref(),
                        subword_vocab,
                        iterations,
                    )?
                }
                (None, None) => return Err(CliError::Validation("apply needs --tags or --model".into())),
            };
            write_output(out.as_deref(), &sentences_to_string(&corrected))
        }
        Command::Ensemble {
            src,
            hyps,
            min_votes,
            out,
        } => {
            let min_votes = ctx.config.resolve_opt(min_votes, "min_votes")?;
            let combined = cmd_ensemble(ctx, &src, &hyps, min_votes)?;
            write_output(out.as_deref(), &sentences_to_string(&combined))
        }
        Command::Score { gold, hyp } => {
            let gold = load_gold(ctx, &gold)?;
            let hyps = read_sentences(&hyp)?;
            check_counts(&[(gold.path.as_path(), gold.sources.len()), (hyp.as_path(), hyps.len())])?;
            let counts = score_counts(ctx, &gold, &hyps)?;
            let mut total = Counts::default();
            for c in counts {
                total += c;
            }
            let report = total.report();
            write_output(None, &format!("{}{}\n", report.table(), report.machine_line()))
        }
        Command::Significance {
            gold,
            hyp_a,
            hyp_b,
            trials,
            seed,
        } => {
            let gold = load_gold(ctx, &gold)?;
            let (a, b) = (read_sentences(&hyp_a)?, read_sentences(&hyp_b)?);
            check_counts(&[
                (gold.path.as_path(), gold.sources.len()),
                (hyp_a.as_path(), a.len()),
                (hyp_b.as_path(), b.len()),
            ])?;
            let trials = ctx.config.resolve(trials, "trials", 10_000usize)?;
            if trials == 0 {
                return Err(CliError::Validation("--trials must be at least 1".into()));
            }
            let seed = ctx.config.resolve(seed, "seed", 42u64)?;
            let p = significance(&gold.sources, &gold.edits, &a, &b, trials, seed)?;
            write_output(None, &format!("p = {p}\n"))
        }
        Command::PunctSet => write_output(None, &ctx.punct.listing()),
        Command::Subwords { input, min_count, out } => {
            let mut sentences = Vec::new();
            for path in &input {
                sentences.extend(read_sentences(path)?);
            }
            write_output(out.as_deref(), &subword_vocab(&sentences, min_count).to_file_string())
        }
        Command::Synth {
            pairs,
            seed,
            src_out,
            tgt_out,
        } => {
            let seed = ctx.config.resolve(seed, "seed", 42u64)?;
            let corpus = SynthCorpus::with_seed(seed).pairs(pairs);
            let (src, tgt): (Vec<Sentence>, Vec<Sentence>) = corpus.into_iter().map(|p| (p.source, p.target)).unzip();
            write_output(Some(&src_out), &sentences_to_string(&src))?;
            write_output(Some(&tgt_out), &sentences_to_string(&tgt))
        }
    }
}

fn in_file(path: &Path, e: edittag::Error) -> CliError {
    CliError::from(e).context(path.display())
}

fn at_line(path: &Path, index: usize, e: edittag::Error) -> CliError {
    CliError::from(e).context(format!("{}:{}", path.display(), index + 1))
}

fn parse_tag_file(path: &Path) -> CliResult<TagFile> {
    TagFile::parse(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_model(path: &Path) -> CliResult<LookupModel> {
    LookupModel::parse(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_subwords(ctx: &Context, seg: &SegArgs) -> CliResult<Option<SubwordVocab>> {
    let granularity = ctx.config.resolve(seg.granularity, "granularity", Granularity::Word)?;
    let path: Option<PathBuf> = ctx.config.resolve_opt(seg.subword_vocab.clone(), "subword_vocab")?;
    match (granularity, path) {
        (Granularity::Word, _) => Ok(None),
        (Granularity::Subword, Some(path)) => Ok(Some(read_subword_vocab(&path)?)),
        (Granularity::Subword, None) => Err(CliError::Validation("subword granularity needs --subword-vocab".into())),
    }
}

fn model_subwords(ctx: &Context, model: &LookupModel, flag: Option<PathBuf>) -> CliResult<Option<SubwordVocab>> {
    load_subwords(
        ctx,
        &SegArgs {
            granularity: model.granularity(),
            subword_vocab: flag,
        },
    )
}

fn segmenter(subwords: &Option<SubwordVocab>) -> Segmenter<'_> {
    match subwords {
        Some(v) => Segmenter::Subword(v),
        None => Segmenter::Word,
    }
}

pub struct ExtractOptions {
    pub compress: bool,
    pub segregate: SegregateMode,
    pub prune: u64,
    pub selector_in: Option<PathBuf>,
}

pub struct ExtractResult {
    pub tags: TagFile,
    pub selector: CompressionSelector,
    pub vocab: EditVocabulary,
}

/// Extract → segregate → compress → prune over every corpus, repeating
/// corpus `i` `upsample[i]` times.
pub fn cmd_extract(
    ctx: &Context,
    srcs: &[PathBuf],
    tgts: &[PathBuf],
    upsample: &[usize],
    seg: Segmenter<'_>,
    opts: &ExtractOptions,
) -> CliResult<ExtractResult> {
    if srcs.len() != tgts.len() {
        return Err(CliError::Validation(format!(
            "{} --src files but {} --tgt files",
            srcs.len(),
            tgts.len()
        )));
    }
    if !upsample.is_empty() && upsample.len() != srcs.len() {
        return Err(CliError::Validation(format!(
            "{} --upsample factors for {} corpora",
            upsample.len(),
            srcs.len()
        )));
    }
    if upsample.contains(&0) {
        return Err(CliError::Validation("upsample factors must be at least 1".into()));
    }

    let mut sentences: Vec<TaggedSentence> = Vec::new();
    for (c, (src_path, tgt_path)) in srcs.iter().zip(tgts).enumerate() {
        let src = read_sentences(src_path)?;
        let tgt = read_sentences(tgt_path)?;
        check_counts(&[(src_path, src.len()), (tgt_path, tgt.len())])?;
        let pairs: Vec<(Sentence, Sentence)> = src.into_iter().zip(tgt).collect();
        let tagged = ctx.par_map(&pairs, |i, (s, t)| {
            let layer = || -> edittag::Result<TaggedSentence> {
                let tagged = extract_with(s, t, seg)?;
                Ok(match opts.segregate {
                    SegregateMode::All => tagged,
                    SegregateMode::NoPnx => segregate(&tagged, s, t, seg, &ctx.punct)?.nopnx,
                    SegregateMode::Pnx => segregate(&tagged, s, t, seg, &ctx.punct)?.pnx,
                })
            };
            layer().map_err(|e| at_line(src_path, i, e))
        })?;
        for _ in 0..upsample.get(c).copied().unwrap_or(1) {
            sentences.extend(tagged.iter().cloned());
        }
    }

    let selector = match &opts.selector_in {
        Some(path) => CompressionSelector::parse(&read(path)?).map_err(|e| in_file(path, e))?,
        None if opts.compress => CompressionSelector::build(sentences.iter().flat_map(TaggedSentence::tags)),
        None => CompressionSelector::default(),
    };
    if opts.compress {
        sentences = ctx.par_map(&sentences, |_, s| Ok(s.clone().map_tags(|t| compress(t, &selector))))?;
    }
    let vocab = EditVocabulary::build(sentences.iter().flat_map(TaggedSentence::tags)).prune(opts.prune);
    if opts.prune > 0 {
        sentences = ctx.par_map(&sentences, |_, s| Ok(s.clone().map_tags(|t| vocab.rewrite(t))))?;
    }
    let mut tags = TagFile::new(seg.granularity(), opts.compress);
    tags.sentences = sentences;
    Ok(ExtractResult { tags, selector, vocab })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatsRow {
    pub threshold: u64,
    pub edits: usize,
    pub oov_percent: f64,
    pub oracle_f05: f64,
}

/// One row per threshold: pruned training vocabulary size, dev OOV% and the
/// F0.5 of the dev oracle (dev tags with OOV tags replaced by K*).
pub fn cmd_stats(ctx: &Context, train: &TagFile, dev: &TagFile, thresholds: &[u64]) -> CliResult<Vec<StatsRow>> {
    if train.granularity != dev.granularity || train.compressed != dev.compressed {
        return Err(CliError::Validation(format!(
            "training tags are {} ({}), dev tags are {} ({})",
            train.header(),
            train.granularity,
            dev.header(),
            dev.granularity
        )));
    }
    let full = EditVocabulary::build(train.sentences.iter().flat_map(TaggedSentence::tags));
    let sources: Vec<Sentence> = dev.sentences.iter().map(TaggedSentence::source).collect();
    let gold: Vec<Vec<SpanEdit>> = ctx.par_map(&dev.sentences, |i, s| {
        let tgt = apply_units(&s.units).map_err(|e| CliError::from(e).context(format!("dev sentence {}", i + 1)))?;
        Ok(span_edits(&sources[i], &tgt))
    })?;
    thresholds
        .iter()
        .map(|&t| {
            let vocab = full.prune(t);
            let report = coverage_stats(&vocab, &dev.sentences);
            let hyps: Vec<Sentence> = ctx.par_map(&report.oracle, |_, s| Ok(apply_units(&s.units)?))?;
            let counts = ctx.par_map(&hyps, |i, h| Ok(sentence_counts(&sources[i], &gold[i], h, i)?))?;
            let mut total = Counts::default();
            for c in counts {
                total += c;
            }
            Ok(StatsRow {
                threshold: t,
                edits: report.unique_edits,
                oov_percent: report.oov_percent(),
                oracle_f05: total.report().f05,
            })
        })
        .collect()
}

pub fn format_stats(rows: &[StatsRow], tsv: bool) -> String {
    let mut out = String::new();
    if tsv {
        out.push_str("prune\tedits\toov_percent\toracle_f05\n");
        for r in rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{:.2}\t{:.4}",
                r.threshold, r.edits, r.oov_percent, r.oracle_f05
            );
        }
    } else {
        out.push_str("Prune   Edits    OOV%   Oracle F0.5\n");
        for r in rows {
            let prune = if r.threshold == 0 {
                "-".to_owned()
            } else {
                r.threshold.to_string()
            };
            let _ = writeln!(
                out,
                "{prune:<7} {:>6}  {:>5.2}%   {:>5.1}",
                r.edits,
                r.oov_percent,
                100.0 * r.oracle_f05
            );
        }
    }
    out
}

fn apply_tag_file(ctx: &Context, input: &Path, sentences: &[Sentence], tags: &Path) -> CliResult<Vec<Sentence>> {
    let file = parse_tag_file(tags)?;
    check_counts(&[(input, sentences.len()), (tags, file.sentences.len())])?;
    let pairs: Vec<(&Sentence, &TaggedSentence)> = sentences.iter().zip(&file.sentences).collect();
    ctx.par_map(&pairs, |i, (s, t)| apply_tags(s, t).map_err(|e| at_line(input, i, e)))
}

fn apply_models(
    ctx: &Context,
    input: &Path,
    sentences: &[Sentence],
    model: &Path,
    pnx_model: Option<&Path>,
    subword_vocab: Option<PathBuf>,
    iterations: NonZeroUsize,
) -> CliResult<Vec<Sentence>> {
    let model = load_model(model)?;
    let subwords = model_subwords(ctx, &model, subword_vocab.clone())?;
    let tagger = LookupTagger {
        model: &model,
        segmenter: segmenter(&subwords),
    };
    let pnx = pnx_model.map(load_model).transpose()?;
    let pnx_subwords = match &pnx {
        Some(m) => model_subwords(ctx, m, subword_vocab)?,
        None => None,
    };
    let pnx_tagger = pnx.as_ref().map(|m| LookupTagger {
        model: m,
        segmenter: segmenter(&pnx_subwords),
    });
    let mut cfg = InferenceConfig::new(iterations);
    if let Some(t) = &pnx_tagger {
        cfg = cfg.with_pnx(t);
    }
    ctx.par_map(sentences, |i, s| {
        infer(s, &tagger, &cfg).map_err(|e| at_line(input, i, e))
    })
}

pub fn cmd_ensemble(ctx: &Context, src: &Path, hyps: &[PathBuf], min_votes: Option<usize>) -> CliResult<Vec<Sentence>> {
    if hyps.len() < 2 {
        return Err(CliError::Validation(format!(
            "ensembling needs at least 2 --hyp files, got {}",
            hyps.len()
        )));
    }
    let sources = read_sentences(src)?;
    let systems: Vec<Vec<Sentence>> = hyps.iter().map(|p| read_sentences(p)).collect::<CliResult<_>>()?;
    let mut counts = vec![(src, sources.len())];
    counts.extend(hyps.iter().zip(&systems).map(|(p, s)| (p.as_path(), s.len())));
    check_counts(&counts)?;
    ctx.par_map(&sources, |i, s| {
        let candidates: Vec<Sentence> = systems.iter().map(|sys| sys[i].clone()).collect();
        Ok(ensemble(s, &candidates, min_votes)
            .map_err(|e| at_line(src, i, e))?
            .sentence)
    })
}

pub struct Gold {
    pub path: PathBuf,
    pub sources: Vec<Sentence>,
    pub edits: Vec<Vec<SpanEdit>>,
}

fn load_gold(ctx: &Context, args: &GoldArgs) -> CliResult<Gold> {
    match (&args.r#ref, &args.m2) {
        (Some(reference), None) => {
            let src_path = args
                .src
                .as_ref()
                .ok_or_else(|| CliError::Validation("--ref needs --src".into()))?;
            let sources = read_sentences(src_path)?;
            let refs = read_sentences(reference)?;
            check_counts(&[(src_path, sources.len()), (reference, refs.len())])?;
            let pairs: Vec<(&Sentence, &Sentence)> = sources.iter().zip(&refs).collect();
            let edits = ctx.par_map(&pairs, |_, (s, r)| Ok(span_edits(s, r)))?;
            Ok(Gold {
                path: src_path.clone(),
                sources,
                edits,
            })
        }
        (None, Some(m2)) => {
            let annotator = ctx.config.resolve(args.annotator, "annotator", 0usize)?;
            let parsed = parse_m2(&read(m2)?, annotator).map_err(|e| in_file(m2, e))?;
            if let Some(src_path) = &args.src {
                let sources = read_sentences(src_path)?;
                check_counts(&[(src_path, sources.len()), (m2, parsed.len())])?;
                if let Some(i) = sources.iter().zip(&parsed).position(|(s, p)| *s != p.source) {
                    return Err(CliError::Validation(format!(
                        "{}:{} differs from the M² source sentence",
                        src_path.display(),
                        i + 1
                    )));
                }
            }
            let (sources, edits) = parsed.into_iter().map(|s| (s.source, s.gold)).unzip();
            Ok(Gold {
                path: m2.clone(),
                sources,
                edits,
            })
        }
        _ => Err(CliError::Validation("give exactly one of --ref or --m2".into())),
    }
}

fn score_counts(ctx: &Context, gold: &Gold, hyps: &[Sentence]) -> CliResult<Vec<Counts>> {
    ctx.par_map(hyps, |i, h| {
        Ok(sentence_counts(&gold.sources[i], &gold.edits[i], h, i)?)
    })
}

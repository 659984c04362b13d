use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use edittag::editlang::{CompressionSelector, EditVocabulary, TagFile};
use edittag::taggers::LookupModel;
use tempfile::TempDir;

const HEALTH_SRC: &str = "يجب الإهتمام ب لصحه وخصوصا ً الصحه النفسيه";
const HEALTH_TGT: &str = "يجب الاهتمام بالصحة وخصوصًا الصحة النفسية .";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Workspace {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, lines: &[&str]) -> String {
        let text: String = lines.iter().map(|l| format!("{l}\n")).collect();
        fs::write(self.path(name), text).unwrap();
        self.arg(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.path(name)).unwrap()
    }

    fn synth(&self, pairs: usize, seed: u64) -> (String, String) {
        let (src, tgt) = (format!("src{seed}"), format!("tgt{seed}"));
        let (s, t) = (self.arg(&src), self.arg(&tgt));
        ok(&[
            "synth",
            "--pairs",
            &pairs.to_string(),
            "--seed",
            &seed.to_string(),
            "--src-out",
            &s,
            "--tgt-out",
            &t,
        ]);
        (s, t)
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edittag")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "edittag {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn sentences(path: &Path) -> usize {
    let text = fs::read_to_string(path).unwrap();
    TagFile::parse(&text).unwrap().sentences.len()
}

#[test]
fn upsampled_corpora_concatenate() {
    let ws = Workspace::new();
    let (a_src, a_tgt) = ws.synth(7, 1);
    let (b_src, b_tgt) = ws.synth(3, 2);
    let out = ws.arg("tags");
    ok(&[
        "extract",
        "--src",
        &a_src,
        "--tgt",
        &a_tgt,
        "--src",
        &b_src,
        "--tgt",
        &b_tgt,
        "--upsample",
        "1",
        "--upsample",
        "10",
        "--out",
        &out,
    ]);
    assert_eq!(sentences(&ws.path("tags")), 7 + 10 * 3);
}

#[test]
fn empty_corpus_gives_header_only() {
    let ws = Workspace::new();
    let (src, tgt) = (ws.write("src", &[]), ws.write("tgt", &[]));
    let text = ok(&["extract", "--src", &src, "--tgt", &tgt, "--compress"]);
    assert_eq!(text, "#granularity=word #compressed=1\n");
    assert!(TagFile::parse(&text).unwrap().sentences.is_empty());
}

#[test]
fn mismatched_line_counts_exit_2() {
    let ws = Workspace::new();
    let src = ws.write("src", &["a b"; 10]);
    let tgt = ws.write("tgt", &["a b"; 9]);
    let out = run(&["extract", "--src", &src, "--tgt", &tgt]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("10") && stderr.contains("9") && stderr.contains("tgt"),
        "{stderr}"
    );
}

#[test]
fn validation_failures_exit_1() {
    let ws = Workspace::new();
    let src = ws.write("src", &["a b"]);
    assert_eq!(
        code(&["extract", "--src", &src, "--tgt", &src, "--granularity", "subword"]),
        1
    );
    assert_eq!(code(&["extract", "--src", &src, "--tgt", &src, "--upsample", "0"]), 1);
    assert_eq!(code(&["ensemble", "--src", &src, "--hyp", &src]), 1);
    assert_eq!(
        code(&["score", "--src", &src, "--ref", &ws.arg("missing"), "--hyp", &src]),
        2
    );
}

#[test]
fn health_pair_scores_perfectly() {
    let ws = Workspace::new();
    let (src, tgt) = (ws.write("src", &[HEALTH_SRC]), ws.write("tgt", &[HEALTH_TGT]));
    let out = ok(&["score", "--src", &src, "--ref", &tgt, "--hyp", &tgt]);
    assert!(out.contains("F0.5      : 1.0000"), "{out}");
    assert!(out.trim_end().ends_with("1.0000 1.0000 1.0000 1.0000"), "{out}");

    let out = ok(&["score", "--src", &src, "--ref", &tgt, "--hyp", &src]);
    assert!(out.contains("Recall    : 0.0000"), "{out}");
}

#[test]
fn extracted_tags_apply_to_the_target() {
    let ws = Workspace::new();
    let (src, tgt) = (ws.write("src", &[HEALTH_SRC]), ws.write("tgt", &[HEALTH_TGT]));
    let tags = ws.arg("tags");
    ok(&["extract", "--src", &src, "--tgt", &tgt, "--compress", "--out", &tags]);
    let fixed = ok(&["apply", "--input", &src, "--tags", &tags]);
    assert_eq!(fixed, format!("{HEALTH_TGT}\n"));
}

#[test]
fn second_iteration_fixes_what_the_first_exposes() {
    // The model only knows how to fix "xz" -> "xy" and "xy" -> "zy"; two
    // rounds take "xz" all the way.
    let ws = Workspace::new();
    let src = ws.write("src", &["xz", "xy"]);
    let tgt = ws.write("tgt", &["xy", "zy"]);
    let (tags, model) = (ws.arg("tags"), ws.arg("model"));
    ok(&["extract", "--src", &src, "--tgt", &tgt, "--out", &tags]);
    ok(&["train-lookup", "--tags", &tags, "--out", &model]);
    let input = ws.write("input", &["xz"]);
    assert_eq!(ok(&["apply", "--input", &input, "--model", &model]), "xy\n");
    assert_eq!(
        ok(&["apply", "--input", &input, "--model", &model, "--iterations", "2"]),
        "zy\n"
    );
    assert_eq!(
        code(&["apply", "--input", &input, "--model", &model, "--iterations", "0"]),
        1
    );
}

#[test]
fn ensemble_of_identical_systems_is_identity() {
    let ws = Workspace::new();
    let (src, tgt) = ws.synth(50, 3);
    let hyps: Vec<String> = (0..3).map(|_| tgt.clone()).collect();
    let out = ok(&[
        "ensemble", "--src", &src, "--hyp", &hyps[0], "--hyp", &hyps[1], "--hyp", &hyps[2],
    ]);
    assert_eq!(out, fs::read_to_string(&tgt).unwrap());
}

#[test]
fn stats_with_dev_equal_to_train() {
    let ws = Workspace::new();
    let (src, tgt) = ws.synth(100, 4);
    let tags = ws.arg("tags");
    ok(&["extract", "--src", &src, "--tgt", &tgt, "--compress", "--out", &tags]);
    let out = ok(&["stats", "--train", &tags, "--dev", &tags, "--tsv"]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[0], "0");
    assert_eq!(row[2], "0.00");
    assert_eq!(row[3], "1.0000");
}

#[test]
fn stats_on_a_hand_tallied_corpus() {
    // Training tags per word: "x" K (×6), "y" KA_[ .] (×6), "ab" KR_[c] (×4),
    // plus the always-present K*. Dev has 15 units: 10 from "x y", three
    // "ab"→"ac" and two "ab"→"ad" (never seen). Gold: 10 edits.
    let ws = Workspace::new();
    let mut train_src = vec!["x y"; 6];
    let mut train_tgt = vec!["x y ."; 6];
    train_src.extend(["ab"; 4]);
    train_tgt.extend(["ac"; 4]);
    let mut dev_src = vec!["x y"; 5];
    let mut dev_tgt = vec!["x y ."; 5];
    dev_src.extend(["ab"; 5]);
    dev_tgt.extend(["ac", "ac", "ac", "ad", "ad"]);
    let (train, dev) = (ws.arg("train.tags"), ws.arg("dev.tags"));
    ok(&[
        "extract",
        "--src",
        &ws.write("ts", &train_src),
        "--tgt",
        &ws.write("tt", &train_tgt),
        "--out",
        &train,
    ]);
    ok(&[
        "extract",
        "--src",
        &ws.write("ds", &dev_src),
        "--tgt",
        &ws.write("dt", &dev_tgt),
        "--out",
        &dev,
    ]);

    let out = ok(&[
        "stats",
        "--train",
        &train,
        "--dev",
        &dev,
        "--thresholds",
        "0,5,7",
        "--tsv",
    ]);
    // T=0: 2/15 OOV, oracle recovers 8/10 gold edits: F0.5 = 1.25·0.8 / (0.25 + 0.8).
    // T=5: KR_[c] (4) pruned, 5/15 OOV, R = 0.5: F0.5 = 0.625 / 0.75.
    // T=7: every training tag (6, 6, 4) is pruned, leaving K*; 15/15 OOV, R = 0.
    assert_eq!(
        out,
        "prune\tedits\toov_percent\toracle_f05\n\
         0\t4\t13.33\t0.9524\n\
         5\t3\t33.33\t0.8333\n\
         7\t1\t100.00\t0.0000\n"
    );
}

#[test]
fn stats_reject_mixed_settings() {
    let ws = Workspace::new();
    let (src, tgt) = ws.synth(5, 5);
    let (plain, packed) = (ws.arg("plain"), ws.arg("packed"));
    ok(&["extract", "--src", &src, "--tgt", &tgt, "--out", &plain]);
    ok(&["extract", "--src", &src, "--tgt", &tgt, "--compress", "--out", &packed]);
    assert_eq!(code(&["stats", "--train", &plain, "--dev", &packed]), 1);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let ws = Workspace::new();
    let (src, tgt) = ws.synth(30, 6);
    let config = ws.write("run.conf", &["# shared settings", "compress = true", "prune = 1000"]);
    let from_config = ok(&["--config", &config, "extract", "--src", &src, "--tgt", &tgt]);
    assert!(from_config.starts_with("#granularity=word #compressed=1\n"));
    let file = TagFile::parse(&from_config).unwrap();
    assert!(file.sentences.iter().all(|s| s.is_all_keep()));

    let overridden = ok(&[
        "--config",
        &config,
        "extract",
        "--src",
        &src,
        "--tgt",
        &tgt,
        "--prune",
        "0",
        "--compress",
        "false",
    ]);
    let file = TagFile::parse(&overridden).unwrap();
    assert!(!file.compressed);
    assert!(!file.sentences.iter().all(|s| s.is_all_keep()));

    let bad = ws.write("bad.conf", &["colour = blue"]);
    assert_eq!(code(&["--config", &bad, "extract", "--src", &src, "--tgt", &tgt]), 2);
}

#[test]
fn worker_count_does_not_change_output() {
    let ws = Workspace::new();
    let (src, tgt) = ws.synth(400, 7);
    let subwords = ws.arg("subwords");
    ok(&["subwords", "--input", &src, "--input", &tgt, "--out", &subwords]);
    let mut outputs = Vec::new();
    for workers in ["1", "4"] {
        let (tags, model) = (ws.arg(&format!("tags{workers}")), ws.arg(&format!("model{workers}")));
        let mut texts = vec![ok(&[
            "--workers",
            workers,
            "extract",
            "--src",
            &src,
            "--tgt",
            &tgt,
            "--granularity",
            "subword",
            "--subword-vocab",
            &subwords,
            "--compress",
            "--segregate",
            "nopnx",
            "--prune",
            "2",
            "--out",
            &tags,
        ])];
        texts.push(ok(&[
            "--workers",
            workers,
            "train-lookup",
            "--tags",
            &tags,
            "--out",
            &model,
        ]));
        let hyp = ws.arg(&format!("hyp{workers}"));
        ok(&[
            "--workers",
            workers,
            "apply",
            "--input",
            &src,
            "--model",
            &model,
            "--subword-vocab",
            &subwords,
            "--iterations",
            "2",
            "--out",
            &hyp,
        ]);
        texts.push(ws.read(&format!("hyp{workers}")));
        texts.push(ok(&[
            "--workers",
            workers,
            "score",
            "--src",
            &src,
            "--ref",
            &tgt,
            "--hyp",
            &hyp,
        ]));
        texts.push(ok(&[
            "--workers",
            workers,
            "significance",
            "--src",
            &src,
            "--ref",
            &tgt,
            "--hyp-a",
            &hyp,
            "--hyp-b",
            &src,
            "--trials",
            "200",
        ]));
        texts.push(fs::read_to_string(&tags).unwrap() + &fs::read_to_string(&model).unwrap());
        outputs.push(texts);
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn emitted_files_round_trip() {
    let ws = Workspace::new();
    let (src, tgt) = ws.synth(200, 8);
    let subwords = ws.arg("subwords");
    let (tags, selector, vocab, model) = (ws.arg("tags"), ws.arg("selector"), ws.arg("vocab"), ws.arg("model"));
    ok(&["subwords", "--input", &tgt, "--out", &subwords]);
    ok(&[
        "extract",
        "--src",
        &src,
        "--tgt",
        &tgt,
        "--granularity",
        "subword",
        "--subword-vocab",
        &subwords,
        "--compress",
        "--selector-out",
        &selector,
        "--vocab-out",
        &vocab,
        "--out",
        &tags,
    ]);
    ok(&["train-lookup", "--tags", &tags, "--out", &model]);

    let text = ws.read("tags");
    assert_eq!(TagFile::parse(&text).unwrap().to_file_string(), text);
    let text = ws.read("selector");
    assert_eq!(CompressionSelector::parse(&text).unwrap().to_file_string(), text);
    let text = ws.read("vocab");
    assert_eq!(EditVocabulary::parse(&text).unwrap().to_file_string(), text);
    let text = ws.read("model");
    assert_eq!(LookupModel::parse(&text).unwrap().to_file_string(), text);
    let text = ws.read("subwords");
    assert_eq!(edittag::textcore::SubwordVocab::parse(&text).to_file_string(), text);

    // A saved selector reproduces the same tag file.
    let again = ok(&[
        "extract",
        "--src",
        &src,
        "--tgt",
        &tgt,
        "--granularity",
        "subword",
        "--subword-vocab",
        &subwords,
        "--compress",
        "--selector-in",
        &selector,
    ]);
    assert_eq!(again, ws.read("tags"));

    let predicted = ok(&["tag", "--model", &model, "--input", &src, "--subword-vocab", &subwords]);
    assert_eq!(TagFile::parse(&predicted).unwrap().sentences.len(), 200);
    let listing = ok(&["punct-set"]);
    assert_eq!(
        edittag::textcore::PunctClass::parse_override(&listing)
            .unwrap()
            .listing(),
        listing
    );
}

#[test]
fn punctuation_override_changes_segregation() {
    let ws = Workspace::new();
    let src = ws.write("src", &["a b"]);
    let tgt = ws.write("tgt", &["a b ."]);
    let listing = ok(&["punct-set"]);
    assert!(listing.lines().any(|l| l == "U+002E"), "{listing}");
    assert!(listing.lines().any(|l| l == "U+060C"), "{listing}");

    let pnx = ok(&["extract", "--src", &src, "--tgt", &tgt, "--segregate", "pnx"]);
    assert!(pnx.contains("A_[ .]"), "{pnx}");
    let only_comma = ws.write("punct", &["U+002C"]);
    let out = run(&[
        "--punct",
        &only_comma,
        "extract",
        "--src",
        &src,
        "--tgt",
        &tgt,
        "--segregate",
        "pnx",
    ]);
    assert!(out.status.success());
    let pnx = String::from_utf8(out.stdout).unwrap();
    assert!(!pnx.contains("A_[ .]"), "{pnx}");
}

#[test]
fn m2_gold_scores_like_a_reference() {
    let ws = Workspace::new();
    let m2 = ws.write(
        "gold.m2",
        &[
            "S a b c",
            "A 1 2|||R:OTHER|||x|||REQUIRED|||-NONE-|||0",
            "A 3 3|||M:PUNCT|||.|||REQUIRED|||-NONE-|||0",
            "",
        ],
    );
    let hyp = ws.write("hyp", &["a x c ."]);
    let out = ok(&["score", "--m2", &m2, "--hyp", &hyp]);
    assert!(out.trim_end().ends_with("2 0 0 1.0000 1.0000 1.0000 1.0000"), "{out}");
}

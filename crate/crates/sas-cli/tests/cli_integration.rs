//! End-to-end behaviors of the four subcommands: failure records, exit
//! codes, passthrough identity, provenance statistics, and the external
//! predictor wire contract.

use sas_core::augment::{classify_fraction, mask_fraction};
use sas_core::png::{save_gray_image, save_mask};
use sas_core::raster::{BinaryMask, GrayImage};
use sas_testkit as testkit;
use std::path::Path;
use std::process::Command;

fn sas_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sas"))
}

fn write_pair(dir: &Path, id: &str, image: &GrayImage, mask: &BinaryMask) -> (String, String) {
    let img_rel = format!("src/{id}_img.png");
    let mask_rel = format!("src/{id}_mask.png");
    save_gray_image(image, &dir.join(&img_rel)).unwrap();
    save_mask(mask, &dir.join(&mask_rel)).unwrap();
    (img_rel, mask_rel)
}

fn textured_image(w: usize, h: usize, tag: usize) -> GrayImage {
    let data: Vec<f64> = (0..w * h)
        .map(|i| 0.05 + 0.9 * (((i * 29 + tag * 13) % 89) as f64 / 88.0))
        .collect();
    GrayImage::new(w, h, data).unwrap()
}

fn write_corpus(dir: &Path, samples: &[(String, GrayImage, BinaryMask)]) {
    std::fs::create_dir_all(dir.join("images")).unwrap();
    std::fs::create_dir_all(dir.join("masks")).unwrap();
    let mut index = String::from(
        "id\timage\tmask\tsplit\torig_width\torig_height\tmask_fraction\tsize_class\n",
    );
    for (id, image, mask) in samples {
        save_gray_image(image, &dir.join(format!("images/{id}.png"))).unwrap();
        save_mask(mask, &dir.join(format!("masks/{id}.png"))).unwrap();
        let fraction = mask_fraction(mask);
        index.push_str(&format!(
            "{id}\timages/{id}.png\tmasks/{id}.png\ttrain\t{}\t{}\t{}\t{}\n",
            image.width(),
            image.height(),
            fraction,
            classify_fraction(fraction, 0.03)
        ));
    }
    std::fs::write(dir.join("index.tsv"), index).unwrap();
}

#[test]
fn preprocess_emits_pairs_index_and_failure_records() {
    let root = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(root.path().join("src")).unwrap();

    let mut manifest = String::from("id\timage_path\tmask_path\tsplit\n");
    for i in 0..2 {
        let mask = testkit::disk_mask(50, 40, 25, 20, 8.0);
        let (img, msk) = write_pair(root.path(), &format!("g{i}"), &textured_image(50, 40, i), &mask);
        manifest.push_str(&format!("g{i}\t{img}\t{msk}\ttrain\n"));
    }
    // All-zero image: crop_window must record a failure for this entry only.
    let blank = GrayImage::filled(30, 30, 0.0).unwrap();
    let (img, msk) = write_pair(root.path(), "blank", &blank, &BinaryMask::filled(30, 30, false));
    manifest.push_str(&format!("blank\t{img}\t{msk}\ttest\n"));
    let manifest_path = root.path().join("manifest.tsv");
    std::fs::write(&manifest_path, &manifest).unwrap();

    // Without cropping: all three succeed, six PNGs, three index rows.
    let out_ok = root.path().join("ok");
    let status = sas_bin()
        .args([
            "preprocess",
            "--manifest",
            manifest_path.to_str().unwrap(),
            "--input-side",
            "32",
            "--output",
            out_ok.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let pngs = |dir: &Path| {
        std::fs::read_dir(dir)
            .unwrap()
            .filter(|e| {
                e.as_ref().unwrap().path().extension().and_then(|x| x.to_str()) == Some("png")
            })
            .count()
    };
    assert_eq!(pngs(&out_ok.join("images")) + pngs(&out_ok.join("masks")), 6);
    let index = std::fs::read_to_string(out_ok.join("index.tsv")).unwrap();
    assert_eq!(index.lines().count(), 4, "header plus three rows");

    // With cropping: the blank entry fails, the others are unaffected.
    let out_crop = root.path().join("crop");
    let status = sas_bin()
        .args([
            "preprocess",
            "--manifest",
            manifest_path.to_str().unwrap(),
            "--input-side",
            "32",
            "--crop-window",
            "true",
            "--output",
            out_crop.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(!status.success(), "a failed entry must surface in the exit code");
    let index = std::fs::read_to_string(out_crop.join("index.tsv")).unwrap();
    assert_eq!(index.lines().count(), 3, "two surviving rows");
    let failures = std::fs::read_to_string(out_crop.join("failures.tsv")).unwrap();
    assert!(failures.contains("blank"));
    assert!(out_crop.join("images/g0.png").exists());
    assert!(!out_crop.join("images/blank.png").exists());
}

#[test]
fn augment_with_zero_probability_is_the_identity() {
    let root = tempfile::tempdir().unwrap();
    let corpus = root.path().join("corpus");
    let samples: Vec<(String, GrayImage, BinaryMask)> = (0..4)
        .map(|i| {
            let mask = testkit::disk_mask(32, 32, 16, 16, 9.0);
            (format!("s{i}"), textured_image(32, 32, i), mask)
        })
        .collect();
    write_corpus(&corpus, &samples);

    let out = root.path().join("aug");
    let status = sas_bin()
        .args([
            "augment",
            "--input",
            corpus.to_str().unwrap(),
            "--epochs",
            "1",
            "--canvas-side",
            "32",
            "--thumb-min",
            "8",
            "--thumb-max",
            "32",
            "--apply-prob",
            "0.0",
            "--seed",
            "3",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    for (id, _, _) in &samples {
        let a = std::fs::read(corpus.join(format!("images/{id}.png"))).unwrap();
        let b = std::fs::read(out.join(format!("epoch_000/images/{id}.png"))).unwrap();
        assert_eq!(a, b, "{id}: image bytes must be identical");
        let a = std::fs::read(corpus.join(format!("masks/{id}.png"))).unwrap();
        let b = std::fs::read(out.join(format!("epoch_000/masks/{id}.png"))).unwrap();
        assert_eq!(a, b, "{id}: mask bytes must be identical");
    }
    let provenance = std::fs::read_to_string(out.join("provenance.tsv")).unwrap();
    for line in provenance.lines().skip(1) {
        assert!(line.contains("\tfalse\t"), "no transform may fire: {line}");
    }
}

#[test]
fn augment_provenance_noise_kinds_are_uniform() {
    let root = tempfile::tempdir().unwrap();
    let corpus = root.path().join("corpus");
    let samples: Vec<(String, GrayImage, BinaryMask)> = (0..25)
        .map(|i| {
            let mask = testkit::disk_mask(32, 32, 16, 16, 8.0 + (i % 3) as f64);
            (format!("s{i:02}"), textured_image(32, 32, i), mask)
        })
        .collect();
    write_corpus(&corpus, &samples);

    let out = root.path().join("aug");
    let status = sas_bin()
        .args([
            "augment",
            "--input",
            corpus.to_str().unwrap(),
            "--epochs",
            "16",
            "--canvas-side",
            "32",
            "--thumb-min",
            "8",
            "--thumb-max",
            "32",
            "--apply-prob",
            "1.0",
            "--seed",
            "5",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());

    let provenance = std::fs::read_to_string(out.join("provenance.tsv")).unwrap();
    let mut counts = [0u64; 4];
    for line in provenance.lines().skip(1) {
        let fields: Vec<&str> = line.split('\t').collect();
        match fields[6] {
            "speckle" => counts[0] += 1,
            "gaussian" => counts[1] += 1,
            "salt_pepper" => counts[2] += 1,
            "poisson" => counts[3] += 1,
            other => panic!("unexpected kind {other}"),
        }
    }
    assert_eq!(counts.iter().sum::<u64>(), 400, "25 samples x 16 epochs");
    let check = testkit::chi_square_uniformity(&counts, 0.001).unwrap();
    assert!(
        check.pass,
        "noise kinds from the log are not uniform: {counts:?} chi2 {}",
        check.statistic
    );
}

#[test]
fn augment_rejects_mismatched_canvas_before_writing() {
    let root = tempfile::tempdir().unwrap();
    let corpus = root.path().join("corpus");
    let samples = vec![(
        "s0".to_string(),
        textured_image(32, 32, 0),
        testkit::disk_mask(32, 32, 16, 16, 8.0),
    )];
    write_corpus(&corpus, &samples);

    let out = root.path().join("aug");
    let status = sas_bin()
        .args([
            "augment",
            "--input",
            corpus.to_str().unwrap(),
            "--canvas-side",
            "64",
            "--thumb-min",
            "16",
            "--thumb-max",
            "64",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(!status.success());
    assert!(
        !out.join("epoch_000").exists(),
        "config violations must abort before any write"
    );
}

#[test]
fn clicks_with_budget_one_issues_a_single_positive_click() {
    let root = tempfile::tempdir().unwrap();
    let corpus = root.path().join("corpus");
    let samples = vec![(
        "only".to_string(),
        textured_image(32, 32, 1),
        testkit::disk_mask(32, 32, 16, 16, 6.0),
    )];
    write_corpus(&corpus, &samples);

    let out = root.path().join("clicks");
    let status = sas_bin()
        .args([
            "clicks",
            "--input",
            corpus.to_str().unwrap(),
            "--predictor",
            "mock",
            "--max-clicks",
            "1",
            "--seed",
            "2",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.join("sessions.jsonl")).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    let clicks = record["clicks"].as_array().unwrap();
    assert_eq!(clicks.len(), 1);
    assert_eq!(clicks[0]["label"], "positive");
    assert_eq!(record["dsc"].as_array().unwrap().len(), 1);
}

#[test]
fn external_predictor_echoing_the_reference_converges_immediately() {
    let root = tempfile::tempdir().unwrap();
    let corpus = root.path().join("corpus");
    let rs = testkit::disk_mask(24, 24, 12, 12, 5.0);
    write_corpus(
        &corpus,
        &[("echo".to_string(), textured_image(24, 24, 2), rs.clone())],
    );

    // The predictor answers every request with the reference mask itself.
    let rs_path = root.path().join("answer.png");
    save_mask(&rs, &rs_path).unwrap();
    let cmd = format!("read line; echo {}", rs_path.display());

    let out = root.path().join("clicks");
    let status = sas_bin()
        .args([
            "clicks",
            "--input",
            corpus.to_str().unwrap(),
            "--predictor",
            "external",
            "--predictor-cmd",
            &cmd,
            "--max-clicks",
            "5",
            "--seed",
            "4",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.join("sessions.jsonl")).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(record["converged"], true);
    assert_eq!(record["clicks"].as_array().unwrap().len(), 1);
    assert_eq!(record["dsc"][0], 1.0);
    assert!(record["error"].is_null());
}

#[test]
fn external_predictor_violations_mark_the_session_failed() {
    let root = tempfile::tempdir().unwrap();
    let corpus = root.path().join("corpus");
    write_corpus(
        &corpus,
        &[(
            "bad".to_string(),
            textured_image(24, 24, 3),
            testkit::disk_mask(24, 24, 12, 12, 5.0),
        )],
    );

    let out = root.path().join("clicks");
    let status = sas_bin()
        .args([
            "clicks",
            "--input",
            corpus.to_str().unwrap(),
            "--predictor",
            "external",
            "--predictor-cmd",
            "echo /definitely/not/a/mask.png",
            "--max-clicks",
            "3",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(!status.success(), "failed sessions must surface in the exit code");
    let text = std::fs::read_to_string(out.join("sessions.jsonl")).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!(record["error"].as_str().unwrap().contains("predictor"));
}

#[test]
fn eval_scores_perfect_predictions_and_lists_unmatched_ids() {
    let root = tempfile::tempdir().unwrap();
    let refs = root.path().join("refs");
    let preds = root.path().join("preds");
    std::fs::create_dir_all(&refs).unwrap();
    std::fs::create_dir_all(&preds).unwrap();

    let small = testkit::disk_mask(40, 40, 20, 20, 3.0);
    let large = testkit::disk_mask(40, 40, 20, 20, 12.0);
    save_mask(&small, &refs.join("a.png")).unwrap();
    save_mask(&small, &preds.join("a.png")).unwrap();
    save_mask(&large, &refs.join("b.png")).unwrap();
    save_mask(&large, &preds.join("b.png")).unwrap();
    save_mask(&large, &refs.join("ref_only.png")).unwrap();
    save_mask(&large, &preds.join("pred_only.png")).unwrap();

    let out = root.path().join("eval");
    let status = sas_bin()
        .args([
            "eval",
            "--pred",
            preds.to_str().unwrap(),
            "--ref",
            refs.to_str().unwrap(),
            "--bootstrap-n",
            "500",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(!status.success(), "unmatched ids must surface in the exit code");

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let samples = report["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 2);
    for s in samples {
        assert_eq!(s["dsc"], 1.0);
        assert_eq!(s["nsd"], 1.0);
    }
    // 3% of 40x40 is 48 pixels: the r=3 disk (29 px) is small, r=12 is large.
    let classes: Vec<(&str, &str)> = samples
        .iter()
        .map(|s| (s["sample_id"].as_str().unwrap(), s["size_class"].as_str().unwrap()))
        .collect();
    assert!(classes.contains(&("a", "small")));
    assert!(classes.contains(&("b", "large")));
    assert_eq!(report["unmatched_pred"], serde_json::json!(["pred_only"]));
    assert_eq!(report["unmatched_ref"], serde_json::json!(["ref_only"]));
    assert_eq!(report["aggregates"]["overall"]["dsc"]["mean"], 1.0);
}

#[test]
fn eval_with_disjoint_directories_reports_no_rows() {
    let root = tempfile::tempdir().unwrap();
    let refs = root.path().join("refs");
    let preds = root.path().join("preds");
    std::fs::create_dir_all(&refs).unwrap();
    std::fs::create_dir_all(&preds).unwrap();
    save_mask(&testkit::disk_mask(16, 16, 8, 8, 4.0), &refs.join("x.png")).unwrap();
    save_mask(&testkit::disk_mask(16, 16, 8, 8, 4.0), &preds.join("y.png")).unwrap();

    let out = root.path().join("eval");
    let status = sas_bin()
        .args([
            "eval",
            "--pred",
            preds.to_str().unwrap(),
            "--ref",
            refs.to_str().unwrap(),
            "--bootstrap-n",
            "100",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(!status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["samples"].as_array().unwrap().len(), 0);
    assert!(report["aggregates"]["overall"].is_null());
}

#[test]
fn augment_batch_respects_index_driven_streams() {
    // Same corpus, two different epochs: transforms must differ between
    // epochs but reproduce exactly per epoch.
    let root = tempfile::tempdir().unwrap();
    let corpus = root.path().join("corpus");
    let samples: Vec<(String, GrayImage, BinaryMask)> = (0..6)
        .map(|i| {
            (
                format!("s{i}"),
                textured_image(32, 32, i),
                testkit::disk_mask(32, 32, 16, 16, 9.0),
            )
        })
        .collect();
    write_corpus(&corpus, &samples);

    let run = |out: &Path| {
        let status = sas_bin()
            .args([
                "augment",
                "--input",
                corpus.to_str().unwrap(),
                "--epochs",
                "2",
                "--canvas-side",
                "32",
                "--thumb-min",
                "8",
                "--thumb-max",
                "32",
                "--apply-prob",
                "1.0",
                "--seed",
                "9",
                "--output",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let a = root.path().join("a");
    let b = root.path().join("b");
    run(&a);
    run(&b);
    assert_eq!(
        std::fs::read(a.join("provenance.tsv")).unwrap(),
        std::fs::read(b.join("provenance.tsv")).unwrap()
    );
    let e0 = std::fs::read(a.join("epoch_000/images/s0.png")).unwrap();
    let e1 = std::fs::read(a.join("epoch_001/images/s0.png")).unwrap();
    assert_ne!(e0, e1, "epochs must draw independent transforms");

    // Per-sample streams are index-keyed: distinct samples draw distinct
    // geometry with overwhelming probability.
    let provenance = std::fs::read_to_string(a.join("provenance.tsv")).unwrap();
    let seeds: Vec<&str> = provenance
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(8).unwrap())
        .collect();
    let unique: std::collections::BTreeSet<&str> = seeds.iter().copied().collect();
    assert_eq!(unique.len(), seeds.len(), "stream seeds must be distinct");
}

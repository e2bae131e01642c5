//! End-to-end checks of the `rhythmkit` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rhythmkit(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rhythmkit"));
    cmd.args(args).env_remove("RHYTHM_KIT_SEED");
    if let Some(s) = env_seed {
        cmd.env("RHYTHM_KIT_SEED", s);
    }
    cmd.output().expect("spawn rhythmkit")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr_lines(out: &Output) -> usize {
    String::from_utf8_lossy(&out.stderr).lines().count()
}

#[test]
fn unit_threshold_resample_reproduces_input_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus");
    assert!(rhythmkit(&["synth", "--seed", "4", "--count", "1", "--noise-sd", "0.2", "-o", path(&corpus)], None)
        .status
        .success());
    let input = corpus.join("utt_0000.csv");
    let out = tmp.path().join("res");
    let run = rhythmkit(&["resample", "--input", path(&input), "--tau", "1.0", "-o", path(&out)], None);
    assert!(run.status.success());
    assert_eq!(fs::read(out.join("codes.csv")).unwrap(), fs::read(&input).unwrap());
}

#[test]
fn verify_theorems_reports_all_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let run = rhythmkit(&["verify-theorems", "--seeds", "200", "-o", path(tmp.path())], None);
    assert_eq!(run.status.code(), Some(0));
    let summary = fs::read_to_string(tmp.path().join("summary.txt")).unwrap();
    assert!(summary.contains("theorem1_pass=200"));
    assert!(summary.contains("theorem2_pass=200"));
    let csv = fs::read_to_string(tmp.path().join("theorems.csv")).unwrap();
    assert_eq!(csv.lines().count(), 401);
}

#[test]
fn unknown_flag_is_usage_error_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("never");
    let run = rhythmkit(&["resample", "--bogus", "-o", path(&out)], None);
    assert_eq!(run.status.code(), Some(1));
    assert_eq!(stderr_lines(&run), 1);
    assert!(!out.exists());
}

#[test]
fn data_and_config_errors_have_distinct_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let missing = rhythmkit(&["rdd", "--input", "/nonexistent/lengths.csv", "-o", path(&out)], None);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(stderr_lines(&missing), 1);

    let zero = tmp.path().join("zero.csv");
    fs::write(&zero, "pair_id,L_f2s,L_s2f\n0,0,4\n").unwrap();
    let bad = rhythmkit(&["rdd", "--input", path(&zero), "-o", path(&out)], None);
    assert_eq!(bad.status.code(), Some(2));

    let cfg = rhythmkit(&["align-prob", "--tau", "2.5", "-o", path(&out)], None);
    assert_eq!(cfg.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    let from_file = tmp.path().join("file");
    fs::write(&cfg, format!("# sweep\noutput_dir={}\ntaus=0.5,1.0\nseed=3\n", path(&from_file))).unwrap();
    assert!(rhythmkit(&["sweep-tau", "--config", path(&cfg)], None).status.success());
    let sweep = fs::read_to_string(from_file.join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 3);

    let overridden = tmp.path().join("flag");
    let run = rhythmkit(&["sweep-tau", "--config", path(&cfg), "--taus", "1.0", "-o", path(&overridden)], None);
    assert!(run.status.success());
    assert_eq!(fs::read_to_string(overridden.join("sweep.csv")).unwrap().lines().count(), 2);

    fs::write(&cfg, "unknown_key=1\n").unwrap();
    let run = rhythmkit(&["sweep-tau", "--config", path(&cfg), "-o", path(&overridden)], None);
    assert_eq!(run.status.code(), Some(1));
}

#[test]
fn environment_seed_is_the_fallback() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs: Vec<_> = ["env", "flag", "other"].iter().map(|d| tmp.path().join(d)).collect();
    assert!(rhythmkit(&["synth", "--count", "1", "-o", path(&dirs[0])], Some("9")).status.success());
    assert!(rhythmkit(&["synth", "--count", "1", "--seed", "9", "-o", path(&dirs[1])], Some("1")).status.success());
    assert!(rhythmkit(&["synth", "--count", "1", "-o", path(&dirs[2])], Some("10")).status.success());
    let read = |d: &Path| fs::read(d.join("utt_0000.csv")).unwrap();
    assert_eq!(read(&dirs[0]), read(&dirs[1]));
    assert_ne!(read(&dirs[0]), read(&dirs[2]));

    let bad = rhythmkit(&["synth", "-o", path(&dirs[2])], Some("not-a-number"));
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn features_from_wav() {
    use rhythmkit::feats::{write_wav, AudioSignal};
    let tmp = tempfile::tempdir().unwrap();
    let wav = tmp.path().join("a.wav");
    let samples = (0..4000).map(|i| (i as f64 * 0.1).sin() * 0.5).collect();
    write_wav(&wav, &AudioSignal::new(samples, 8000).unwrap()).unwrap();
    let out = tmp.path().join("f");
    let run = rhythmkit(&["features", "--input", path(&wav), "--n-coeffs", "10", "-o", path(&out)], None);
    assert!(run.status.success());
    let csv = fs::read_to_string(out.join("features.csv")).unwrap();
    assert!(csv.starts_with("t,c0,c1,c2,c3,c4,c5,c6,c7,c8,c9\n"));

    let run = rhythmkit(&["features", "--input", path(&wav), "--kind", "cepstrum", "-o", path(&out)], None);
    assert_eq!(run.status.code(), Some(1));
}

#[test]
fn help_lists_every_subcommand() {
    let run = rhythmkit(&["--help"], None);
    assert!(run.status.success());
    let text = String::from_utf8_lossy(&run.stdout);
    for sub in [
        "synth",
        "features",
        "sea-train",
        "resample",
        "sweep-tau",
        "align-prob",
        "verify-theorems",
        "two-stage",
        "rdd",
    ] {
        assert!(text.contains(sub), "missing {sub}");
    }
}

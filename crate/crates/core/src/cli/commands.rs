//! Subcommand bodies. Each returns the output directory and its artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use super::args::*;
use super::settings::Settings;
use super::{CliError, Outputs};
use crate::csvio::{features_from_csv, features_to_csv};
use crate::error::Error;
use crate::evalkit::{
    self, alignment_probability, default_tau_grid, duration_csv, length_vs_tau_sweep, sweep_csv, DurationRecord,
    PairSource,
};
use crate::feats::{self, FeatureConfig};
use crate::frames::FrameSequence;
use crate::infotheory::{
    information_report, random_content_channel, random_ensemble, random_injective_channel, random_noisy_channel,
    random_resample_mapper, report_csv, report_table, similarity_mapper, verify_theorem1, verify_theorem2,
    EnsembleShape,
};
use crate::numfmt::fmt_g;
use crate::resampler::{resample, tau_trace_csv, RandomResampleConfig, ThresholdMode, ThresholdParams, UpsampleRule};
use crate::rng;
use crate::simrep::{embed, gram, train_sea, SeaConfig};
use crate::synthgen::{self, RhythmStyle, SynthConfig};
use crate::trainkit::{
    convert, held_out_pair, loss_csv, train_single_stage, train_two_stage, two_domain_corpus, ConversionSetup,
    Schedule, ToyConfig, FAST_DOMAIN, SLOW_DOMAIN,
};

type CmdResult = Result<(PathBuf, Outputs), CliError>;

pub(super) fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Synth(a) => synth(a),
        Command::Features(a) => features(a),
        Command::SeaTrain(a) => sea_train(a),
        Command::Resample(a) => resample_cmd(a),
        Command::SweepTau(a) => sweep_tau(a),
        Command::AlignProb(a) => align_prob(a),
        Command::VerifyTheorems(a) => verify_theorems(a),
        Command::TwoStage(a) => two_stage(a),
        Command::Rdd(a) => rdd(a),
    }
}

fn prepare(common: &Common, allowed: &[&str]) -> Result<(Settings, PathBuf, u64), CliError> {
    let s = Settings::load(common.config.as_deref(), allowed)?;
    let dir = s.output_dir(common.out.clone())?;
    let seed = s.seed(common.seed)?;
    Ok((s, dir, seed))
}

fn required(path: Option<PathBuf>, flag: &str) -> Result<PathBuf, CliError> {
    path.ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn read_features(path: &Path) -> Result<FrameSequence, Error> {
    let mut seq = features_from_csv(&read_text(path)?)?;
    seq.meta.source_id = path.display().to_string();
    Ok(seq)
}

const SHAPE_KEYS: &[&str] = &["alphabet_size", "length_min", "length_max", "base_reps", "dim"];
const STYLE_KEYS: &[&str] = &["rate", "vowel_stretch", "noise_sd"];

fn synth_config(s: &Settings, a: &SynthShape) -> Result<SynthConfig, CliError> {
    let d = SynthConfig::default();
    Ok(SynthConfig {
        alphabet_size: s.get(a.alphabet_size, "alphabet_size", d.alphabet_size)?,
        length_range: (
            s.get(a.length_min, "length_min", d.length_range.0)?,
            s.get(a.length_max, "length_max", d.length_range.1)?,
        ),
        base_reps: s.get(a.base_reps, "base_reps", d.base_reps)?,
        dim: s.get(a.dim, "dim", d.dim)?,
    })
}

fn synth(a: SynthArgs) -> CmdResult {
    let allowed = [&["count"], SHAPE_KEYS, STYLE_KEYS].concat();
    let (s, dir, seed) = prepare(&a.common, &allowed)?;
    let cfg = synth_config(&s, &a.shape)?;
    let d = RhythmStyle::default();
    let style = RhythmStyle {
        rate: s.get(a.style.rate, "rate", d.rate)?,
        vowel_stretch: s.get(a.style.vowel_stretch, "vowel_stretch", d.vowel_stretch)?,
        noise_sd: s.get(a.style.noise_sd, "noise_sd", d.noise_sd)?,
    };
    style.validate()?;
    let count = s.get(a.count, "count", 10)?;

    let mut out = Outputs::default();
    out.add("manifest.txt", synthgen::manifest(seed, &cfg, &style, count));
    let mut g = rng::seeded(seed);
    for i in 0..count {
        let utt = synthgen::generate(&mut g, &cfg, &style)?;
        out.add(format!("utt_{i:04}.csv"), features_to_csv(&utt.seq));
        out.add(format!("utt_{i:04}_reps.csv"), utt.reps_csv());
    }
    Ok((dir, out))
}

fn features(a: FeaturesArgs) -> CmdResult {
    let (s, dir, _) = prepare(&a.common, &["input", "kind", "n_mels", "n_coeffs", "frame_len_s", "hop_s"])?;
    let input = required(s.opt(a.input, "input")?, "input")?;
    let kind = s.get(a.kind, "kind", "mfcc".to_string())?;
    let d = FeatureConfig::default();
    let cfg = FeatureConfig {
        frame_len_s: s.get(a.frame_len_s, "frame_len_s", d.frame_len_s)?,
        hop_s: s.get(a.hop_s, "hop_s", d.hop_s)?,
        n_mels: s.get(a.n_mels, "n_mels", d.n_mels)?,
        n_coeffs: s.get(a.n_coeffs, "n_coeffs", d.n_coeffs)?,
    };
    let extract = match kind.as_str() {
        "mfcc" => feats::mfcc,
        "logmel" => feats::log_mel_spectrogram,
        other => return Err(CliError::Usage(format!("unknown feature kind `{other}`, expected mfcc or logmel"))),
    };
    let audio = feats::load_wav(&input)?;
    let seq = extract(&audio, &cfg)?;
    let mut out = Outputs::default();
    out.add("features.csv", features_to_csv(&seq));
    Ok((dir, out))
}

fn sea_train(a: SeaTrainArgs) -> CmdResult {
    let (s, dir, seed) = prepare(&a.common, &["input", "count", "hidden", "embed_dim", "lr", "epochs"])?;
    let inputs: Vec<PathBuf> = s.list(a.input, "input")?;
    let d = SeaConfig::default();
    let cfg = SeaConfig {
        hidden: s.get(a.hidden, "hidden", d.hidden)?,
        embed_dim: s.get(a.embed_dim, "embed_dim", d.embed_dim)?,
        lr: s.get(a.lr, "lr", d.lr)?,
        epochs: s.get(a.epochs, "epochs", d.epochs)?,
        seed,
    };
    let mut out = Outputs::default();
    let data = if inputs.is_empty() {
        let count = s.get(a.count, "count", 4)?;
        let style = RhythmStyle {
            noise_sd: 0.05,
            ..RhythmStyle::default()
        };
        let mut g = rng::stream(seed, 1);
        let mut data = Vec::with_capacity(count);
        for i in 0..count {
            let utt = synthgen::generate(&mut g, &SynthConfig::default(), &style)?;
            out.add(format!("train_{i:04}.csv"), features_to_csv(&utt.seq));
            data.push(utt.seq);
        }
        data
    } else {
        inputs.iter().map(|p| read_features(p)).collect::<Result<Vec<_>, _>>()?
    };
    let trained = train_sea(&data, &cfg)?;
    out.add("sea_model.txt", trained.model.to_text());
    out.add("sea_loss.csv", loss_csv(&trained.loss_trace));
    for (i, seq) in data.iter().enumerate() {
        out.add(format!("embed_{i:04}.csv"), features_to_csv(&embed(&trained.model, seq)?));
    }
    Ok((dir, out))
}

const THRESHOLD_KEYS: &[&str] = &["tau", "u_l", "u_r", "local_halfwidth", "window_b", "upsample_rule"];

fn threshold_params(s: &Settings, a: &ThresholdArgs) -> Result<ThresholdParams, CliError> {
    let d = ThresholdParams::default();
    let mut p = ThresholdParams {
        u_l: s.get(a.u_l, "u_l", d.u_l)?,
        u_r: s.get(a.u_r, "u_r", d.u_r)?,
        local_halfwidth: s.get(a.local_halfwidth, "local_halfwidth", d.local_halfwidth)?,
        window_b: s.get(a.window_b, "window_b", d.window_b)?,
        ..d
    };
    if let Some(tau) = s.opt(a.tau, "tau")? {
        p.mode = ThresholdMode::Fixed(tau);
    }
    if let Some(rule) = s.opt(a.upsample_rule.clone(), "upsample_rule")? {
        p.upsample_rule = UpsampleRule::parse(&rule)?;
    }
    p.validate()?;
    Ok(p)
}

fn resample_cmd(a: ResampleArgs) -> CmdResult {
    let allowed = [&["input", "gram_input"], THRESHOLD_KEYS].concat();
    let (s, dir, seed) = prepare(&a.common, &allowed)?;
    let input = required(s.opt(a.input, "input")?, "input")?;
    let gram_input: Option<PathBuf> = s.opt(a.gram_input, "gram_input")?;
    let params = threshold_params(&s, &a.threshold)?;

    let seq = read_features(&input)?;
    let g = match gram_input {
        Some(p) => gram(&read_features(&p)?)?,
        None => gram(&seq)?,
    };
    let res = resample(&seq, &g, &params, &mut rng::seeded(seed))?;
    let mut out = Outputs::default();
    out.add("codes.csv", features_to_csv(&res.codes));
    out.add("segmentation.csv", res.segmentation.to_csv());
    out.add("tau_trace.csv", tau_trace_csv(&res.tau_trace));
    Ok((dir, out))
}

fn sweep_tau(a: SweepTauArgs) -> CmdResult {
    let (s, dir, seed) = prepare(&a.common, &["input", "taus"])?;
    let input: Option<PathBuf> = s.opt(a.input, "input")?;
    let mut taus = s.list(a.taus, "taus")?;
    if taus.is_empty() {
        taus = default_tau_grid();
    }
    let mut out = Outputs::default();
    let seq = match input {
        Some(p) => read_features(&p)?,
        None => {
            let utt = synthgen::generate(&mut rng::seeded(seed), &SynthConfig::default(), &RhythmStyle::default())?;
            out.add("input.csv", features_to_csv(&utt.seq));
            utt.seq
        }
    };
    let rows = length_vs_tau_sweep(&seq, &gram(&seq)?, &taus)?;
    out.add("sweep.csv", sweep_csv(&rows));
    Ok((dir, out))
}

fn align_prob(a: AlignProbArgs) -> CmdResult {
    let (s, dir, seed) = prepare(&a.common, &["trials", "rr_trials", "tau", "tol"])?;
    let trials = s.get(a.trials, "trials", 1000)?;
    let rr_trials = s.get(a.rr_trials, "rr_trials", 10_000)?;
    let tau = s.get(a.tau, "tau", 0.5)?;
    let tol = s.get(a.tol, "tol", 1e-9)?;
    let params = ThresholdParams::fixed(tau);
    params.validate()?;

    let source = PairSource::disproportional(seed);
    let sim = alignment_probability(|i| source.pair(i), similarity_mapper(params), trials, tol, seed)?;
    let rr = alignment_probability(
        |i| source.pair(i),
        random_resample_mapper(RandomResampleConfig::default()),
        rr_trials,
        tol,
        seed,
    )?;
    let mut out = Outputs::default();
    out.add("alignment.csv", evalkit::alignment_csv(&[("similarity", sim), ("rr_baseline", rr)]));
    Ok((dir, out))
}

fn verify_theorems(a: VerifyTheoremsArgs) -> CmdResult {
    let (s, dir, seed) = prepare(&a.common, &["seeds"])?;
    let n = s.get(a.seeds, "seeds", 200)?;
    let shape = EnsembleShape::default();
    let mut reports = Vec::with_capacity(2 * n);
    let (mut pass1, mut pass2, mut dpi) = (0, 0, 0);
    for i in 0..n {
        let mut g = rng::stream(seed, i as u64);
        let ens = random_ensemble(&mut g, &shape)?;
        let c1 = random_injective_channel(&mut g, &ens, shape.alphabet)?;
        let c2 = random_content_channel(&mut g, &ens, shape.alphabet)?;
        let noisy = random_noisy_channel(&mut g, &ens, 3)?;
        let r1 = verify_theorem1(&ens, &c1)?;
        let r2 = verify_theorem2(&ens, &c2)?;
        let noisy_info = information_report(&ens, &noisy)?;
        pass1 += r1.pass as usize;
        pass2 += r2.pass as usize;
        dpi += [r1.info, r2.info, noisy_info]
            .iter()
            .all(|r| r.data_processing_holds() && r.bounds_hold()) as usize;
        reports.push((i, r1));
        reports.push((i, r2));
    }
    let summary = format!(
        "ensembles={n}\ntheorem1_pass={pass1}\ntheorem2_pass={pass2}\ndata_processing_pass={dpi}\n"
    );
    let mut out = Outputs::default();
    out.add("theorems.csv", report_csv(&reports));
    out.add("theorems.txt", format!("{}\n{summary}", report_table(&reports)));
    out.add("summary.txt", summary);
    if pass1 < n || pass2 < n || dpi < n {
        out.failure = Some(Error::Numerical(format!(
            "theorem checks failed: theorem 1 {pass1}/{n}, theorem 2 {pass2}/{n}, data processing {dpi}/{n}"
        )));
    }
    Ok((dir, out))
}

fn rdd_summary(label: &str, records: &[DurationRecord]) -> String {
    let positive = records.iter().filter(|r| r.rdd > 0.0).count();
    let mean = records.iter().map(|r| r.rdd).sum::<f64>() / records.len() as f64;
    format!(
        "{label}.runs={}\n{label}.positive={positive}\n{label}.mean_rdd={}\n",
        records.len(),
        fmt_g(mean, 12)
    )
}

fn two_stage(a: TwoStageArgs) -> CmdResult {
    let allowed = [
        "runs",
        "schedule",
        "per_domain",
        "slow_rate",
        "noise_sd",
        "sync_epochs",
        "async_epochs",
        "lr",
        "duration_weight",
    ];
    let (s, dir, seed) = prepare(&a.common, &allowed)?;
    let runs = s.get(a.runs, "runs", 10)?;
    if runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let schedules = match s.get(a.schedule, "schedule", "two-stage".to_string())?.as_str() {
        "two-stage" => vec![Schedule::TwoStage],
        "single-stage" => vec![Schedule::SingleStage],
        "both" => vec![Schedule::TwoStage, Schedule::SingleStage],
        other => {
            return Err(CliError::Usage(format!(
                "unknown schedule `{other}`, expected two-stage, single-stage or both"
            )))
        }
    };
    let mut setup = ConversionSetup::default();
    setup.per_domain = s.get(a.per_domain, "per_domain", setup.per_domain)?;
    setup.slow.rate = s.get(a.slow_rate, "slow_rate", setup.slow.rate)?;
    let noise = s.get(a.noise_sd, "noise_sd", setup.fast.noise_sd)?;
    setup.fast.noise_sd = noise;
    setup.slow.noise_sd = noise;
    let t = &mut setup.toy;
    t.sync_epochs = s.get(a.sync_epochs, "sync_epochs", t.sync_epochs)?;
    t.async_epochs = s.get(a.async_epochs, "async_epochs", t.async_epochs)?;
    t.lr = s.get(a.lr, "lr", t.lr)?;
    t.duration_weight = s.get(a.duration_weight, "duration_weight", t.duration_weight)?;
    t.validate()?;
    setup.slow.validate()?;

    let mut out = Outputs::default();
    let mut summary = String::new();
    for schedule in schedules {
        let label = schedule.name().replace('-', "_");
        let mut records = Vec::with_capacity(runs);
        for i in 0..runs {
            let run_seed = seed.wrapping_add(i as u64);
            let data = two_domain_corpus(&setup, run_seed)?;
            let cfg = ToyConfig {
                seed: run_seed,
                ..setup.toy
            };
            let (model, traces) = match schedule {
                Schedule::TwoStage => {
                    let (sync, asy) = train_two_stage(&data, &cfg)?;
                    (asy.model, vec![("sync_loss", sync.loss_trace), ("async_loss", asy.loss_trace)])
                }
                Schedule::SingleStage => {
                    let run = train_single_stage(&data, &cfg)?;
                    (run.model, vec![("loss", run.loss_trace)])
                }
            };
            let (fast, slow) = held_out_pair(&setup, run_seed)?;
            let f2s = convert(&model, &fast, SLOW_DOMAIN)?;
            let s2f = convert(&model, &slow, FAST_DOMAIN)?;
            records.push(DurationRecord::new(run_seed as usize, f2s.len(), s2f.len())?);
            if i == 0 {
                out.add(format!("{label}_model.txt"), model.to_text());
                for (name, trace) in traces {
                    out.add(format!("{label}_{name}.csv"), loss_csv(&trace));
                }
            }
        }
        out.add(format!("{label}_rdd.csv"), duration_csv(&records));
        summary.push_str(&rdd_summary(&label, &records));
    }
    out.add("summary.txt", summary);
    Ok((dir, out))
}

/// Parse a `pair_id,L_f2s,L_s2f[,...]` CSV into records.
fn parse_lengths(text: &str) -> Result<Vec<DurationRecord>, Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or(Error::EmptyInput("length csv"))?
        .split(',')
        .map(str::trim)
        .collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| Error::Format(format!("length csv lacks column `{name}`")))
    };
    let (ci, cf, cs) = (col("pair_id")?, col("L_f2s")?, col("L_s2f")?);
    let mut records = Vec::new();
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let field = |c: usize| -> Result<usize, Error> {
            let f = fields
                .get(c)
                .ok_or_else(|| Error::Format(format!("row {row}: expected {} fields", header.len())))?;
            f.parse()
                .map_err(|_| Error::Format(format!("row {row}: `{f}` is not a non-negative integer")))
        };
        records.push(DurationRecord::new(field(ci)?, field(cf)?, field(cs)?)?);
    }
    if records.is_empty() {
        return Err(Error::EmptyInput("length csv has no rows"));
    }
    Ok(records)
}

fn rdd(a: RddArgs) -> CmdResult {
    let (s, dir, _) = prepare(&a.common, &["input"])?;
    let input = required(s.opt(a.input, "input")?, "input")?;
    let records = parse_lengths(&read_text(&input)?)?;
    let mut out = Outputs::default();
    out.add("rdd.csv", duration_csv(&records));
    out.add("summary.txt", rdd_summary("rdd", &records));
    Ok((dir, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_parse_with_extra_columns() {
        let recs = parse_lengths("pair_id,L_f2s,L_s2f,rdd\n3,120,100,0.2\n4,90,120,x\n").unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].rdd, 0.2);
        assert_eq!(recs[1].rdd, -0.25);
    }

    #[test]
    fn lengths_reject_zero_and_missing_columns() {
        assert!(matches!(parse_lengths("pair_id,L_f2s,L_s2f\n0,0,5\n"), Err(Error::ZeroLength)));
        assert!(matches!(parse_lengths("pair_id,L_f2s\n0,1\n"), Err(Error::Format(_))));
        assert!(matches!(parse_lengths("pair_id,L_f2s,L_s2f\n"), Err(Error::EmptyInput(_))));
    }
}

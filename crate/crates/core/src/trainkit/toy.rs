use rand::Rng as _;

use super::adam::Adam;
use super::tinynet::{Activation, Gradients, TinyNet, Trace};
use crate::error::{Error, Result};
use crate::frames::{FrameMeta, FrameSequence};
use crate::modelio::{self, Block};
use crate::resampler::{realign, resample, ResampleResult, SegmentKind, ThresholdParams};
use crate::rng::{self, Rng};
use crate::simrep::{cosine, gram, GramMatrix};

/// Which frames the training-time gram is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GramSource {
    /// The input features.
    #[default]
    Features,
    /// The current encoder outputs.
    Codes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyConfig {
    pub code_dim: usize,
    pub hidden: usize,
    pub domain_embed_dim: usize,
    /// Frames of context on each side of the encoder input.
    pub context: usize,
    pub lr: f64,
    pub sync_epochs: usize,
    pub async_epochs: usize,
    pub duration_weight: f64,
    /// Cosine above which consecutive codes are decoded as one run.
    pub run_similarity: f64,
    pub threshold: ThresholdParams,
    pub gram_source: GramSource,
    pub seed: u64,
}

impl Default for ToyConfig {
    fn default() -> Self {
        Self {
            code_dim: 4,
            hidden: 16,
            domain_embed_dim: 2,
            context: 2,
            lr: 0.01,
            sync_epochs: 200,
            async_epochs: 200,
            duration_weight: 1.0,
            run_similarity: 0.9,
            threshold: ThresholdParams::default(),
            gram_source: GramSource::Features,
            seed: 0,
        }
    }
}

impl ToyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.code_dim == 0 || self.hidden == 0 || self.domain_embed_dim == 0 {
            return Err(Error::Config("toy model widths must be positive".into()));
        }
        if !(self.lr >= 0.0 && self.lr.is_finite()) {
            return Err(Error::Config(format!("learning rate must be >= 0, got {}", self.lr)));
        }
        if !(self.duration_weight >= 0.0 && self.duration_weight.is_finite()) {
            return Err(Error::Config(format!("duration weight must be >= 0, got {}", self.duration_weight)));
        }
        if !(-1.0..=1.0).contains(&self.run_similarity) {
            return Err(Error::Config(format!("run similarity must lie in [-1, 1], got {}", self.run_similarity)));
        }
        self.threshold.validate()
    }
}

/// Context-window encoder, framewise decoder, duration head, and one
/// embedding per domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyModel {
    pub encoder: TinyNet,
    pub decoder: TinyNet,
    pub duration: TinyNet,
    pub domain_table: Vec<Vec<f64>>,
    pub context: usize,
    pub run_similarity: f64,
}

#[derive(Debug, Clone)]
pub struct TrainRun {
    pub model: ToyModel,
    /// Mean per-frame loss of each epoch, measured before its update.
    pub loss_trace: Vec<f64>,
}

impl ToyModel {
    pub fn random(dim: usize, domains: usize, cfg: &ToyConfig, rng: &mut Rng) -> Result<Self> {
        cfg.validate()?;
        let acts = [Activation::Tanh, Activation::Identity];
        let window = dim * (2 * cfg.context + 1);
        let cond = cfg.code_dim + cfg.domain_embed_dim;
        let encoder = TinyNet::random(&[window, cfg.hidden, cfg.code_dim], &acts, rng)?;
        let decoder = TinyNet::random(&[cond, cfg.hidden, dim], &acts, rng)?;
        let duration = TinyNet::random(&[cond, cfg.hidden, 1], &acts, rng)?;
        let domain_table = (0..domains)
            .map(|_| (0..cfg.domain_embed_dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        Self::new(encoder, decoder, duration, domain_table, cfg.context, cfg.run_similarity)
    }

    pub fn new(
        encoder: TinyNet,
        decoder: TinyNet,
        duration: TinyNet,
        domain_table: Vec<Vec<f64>>,
        context: usize,
        run_similarity: f64,
    ) -> Result<Self> {
        let embed = domain_table.first().map_or(0, Vec::len);
        if domain_table.iter().any(|e| e.len() != embed) {
            return Err(Error::Config("domain embeddings differ in width".into()));
        }
        let cond = encoder.output_dim() + embed;
        for net in [&decoder, &duration] {
            if net.input_dim() != cond {
                return Err(Error::DimMismatch {
                    expected: cond,
                    got: net.input_dim(),
                });
            }
        }
        if duration.output_dim() != 1 {
            return Err(Error::DimMismatch {
                expected: 1,
                got: duration.output_dim(),
            });
        }
        let dim = decoder.output_dim();
        if encoder.input_dim() != dim * (2 * context + 1) {
            return Err(Error::DimMismatch {
                expected: dim * (2 * context + 1),
                got: encoder.input_dim(),
            });
        }
        Ok(Self {
            encoder,
            decoder,
            duration,
            domain_table,
            context,
            run_similarity,
        })
    }

    pub fn feature_dim(&self) -> usize {
        self.decoder.output_dim()
    }

    pub fn code_dim(&self) -> usize {
        self.encoder.output_dim()
    }

    pub fn domains(&self) -> usize {
        self.domain_table.len()
    }

    fn embedding(&self, domain: usize) -> Result<&[f64]> {
        self.domain_table
            .get(domain)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownDomain(domain))
    }

    /// Encoder codes, one per frame.
    pub fn encode(&self, seq: &FrameSequence) -> Result<FrameSequence> {
        self.check_dim(seq)?;
        let mut data = Vec::with_capacity(seq.len() * self.code_dim());
        for t in 0..seq.len() {
            data.extend(self.encoder.forward(&context_window(seq, t, self.context))?);
        }
        FrameSequence::from_flat(data, self.code_dim(), seq.frame_period())
    }

    fn check_dim(&self, seq: &FrameSequence) -> Result<()> {
        if seq.dim() != self.feature_dim() {
            return Err(Error::DimMismatch {
                expected: self.feature_dim(),
                got: seq.dim(),
            });
        }
        Ok(())
    }

    /// Decoded frame and raw duration for one run code.
    fn decode_run(&self, code: &[f64], domain: usize) -> Result<(Vec<f64>, f64)> {
        let input = [code, self.embedding(domain)?].concat();
        Ok((self.decoder.forward(&input)?, self.duration.forward(&input)?[0]))
    }

    /// Serialize as a `dims:` header and one block per matrix, plus the
    /// domain table.
    pub fn to_text(&self) -> String {
        let embed = self.domain_table.first().map_or(0, Vec::len);
        let mut blocks: Vec<Block> = modelio::net_to_blocks("encoder", &self.encoder);
        blocks.extend(modelio::net_to_blocks("decoder", &self.decoder));
        blocks.extend(modelio::net_to_blocks("duration", &self.duration));
        blocks.push(Block {
            name: "domain_table".into(),
            rows: self.domains(),
            cols: embed,
            tag: None,
            data: self.domain_table.concat(),
        });
        blocks.push(Block {
            name: "run_similarity".into(),
            rows: 1,
            cols: 1,
            tag: None,
            data: vec![self.run_similarity],
        });
        let header = format!(
            "dims: {} {} {} {}",
            self.feature_dim(),
            self.code_dim(),
            embed,
            self.context
        );
        modelio::write_blocks(&header, &blocks)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (header, blocks) = modelio::parse_blocks(text)?;
        let dims = modelio::parse_dims_header(&header)?;
        if dims.len() != 4 {
            return Err(Error::Format(format!("toy model header needs 4 dims, got {dims:?}")));
        }
        let table = modelio::find_block(&blocks, "domain_table")?;
        let domain_table = table.data.chunks(table.cols.max(1)).map(<[f64]>::to_vec).collect();
        let rho = modelio::find_block(&blocks, "run_similarity")?;
        let model = Self::new(
            modelio::net_from_blocks("encoder", &blocks)?,
            modelio::net_from_blocks("decoder", &blocks)?,
            modelio::net_from_blocks("duration", &blocks)?,
            domain_table,
            dims[3],
            *rho.data.first().ok_or_else(|| Error::Format("empty run_similarity block".into()))?,
        )?;
        if dims[..3] != [model.feature_dim(), model.code_dim(), table.cols] {
            return Err(Error::Format(format!("header dims {dims:?} disagree with blocks")));
        }
        Ok(model)
    }
}

/// Frames `t − c ..= t + c`, clamped at the edges, concatenated.
pub fn context_window(seq: &FrameSequence, t: usize, context: usize) -> Vec<f64> {
    let last = seq.len() - 1;
    let mut v = Vec::with_capacity(seq.dim() * (2 * context + 1));
    for k in 0..=2 * context {
        let idx = (t + k).saturating_sub(context).min(last);
        v.extend_from_slice(seq.row(idx));
    }
    v
}

/// Group consecutive codes whose cosine with the first code of the current
/// group is at least `rho`. Returns half-open code index ranges.
pub fn group_runs(codes: &FrameSequence, rho: f64) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    if codes.is_empty() {
        return runs;
    }
    let mut start = 0;
    for m in 1..codes.len() {
        if cosine(codes.row(start), codes.row(m)) < rho {
            runs.push((start, m));
            start = m;
        }
    }
    runs.push((start, codes.len()));
    runs
}

/// Encode, keep every frame as a code, and decode each run of similar codes
/// with the target domain, repeating it for its predicted duration.
pub fn convert(model: &ToyModel, seq: &FrameSequence, target_domain: usize) -> Result<FrameSequence> {
    model.embedding(target_domain)?;
    if seq.is_empty() {
        return Err(Error::EmptyInput("convert needs at least one frame"));
    }
    let codes = model.encode(seq)?;
    let mut out = FrameSequence::from_flat(Vec::new(), model.feature_dim(), seq.frame_period())?;
    for (a, b) in group_runs(&codes, model.run_similarity) {
        let code = mean_rows(&codes, a, b);
        let (frame, dur) = model.decode_run(&code, target_domain)?;
        let reps = if dur.is_finite() { dur.round().max(1.0) as usize } else { 1 };
        for _ in 0..reps {
            out.push_row(&frame);
        }
    }
    Ok(out.with_meta(FrameMeta {
        source_id: seq.meta.source_id.clone(),
        domain_id: Some(target_domain),
    }))
}

fn mean_rows(seq: &FrameSequence, a: usize, b: usize) -> Vec<f64> {
    let mut acc = seq.row(a).to_vec();
    for m in a + 1..b {
        acc.iter_mut().zip(seq.row(m)).for_each(|(x, v)| *x += v);
    }
    let n = (b - a) as f64;
    acc.iter_mut().for_each(|x| *x /= n);
    acc
}

struct Prepared<'a> {
    seq: &'a FrameSequence,
    domain: usize,
    windows: Vec<Vec<f64>>,
    feature_gram: Option<GramMatrix>,
}

fn prepare<'a>(data: &'a [FrameSequence], model: &ToyModel, cfg: &ToyConfig) -> Result<Vec<Prepared<'a>>> {
    if data.is_empty() {
        return Err(Error::EmptyInput("training needs at least one utterance"));
    }
    let mut seen = vec![false; model.domains()];
    let mut out = Vec::with_capacity(data.len());
    for seq in data {
        model.check_dim(seq)?;
        if seq.is_empty() {
            return Err(Error::EmptyInput("training utterances need frames"));
        }
        let domain = seq
            .meta
            .domain_id
            .ok_or_else(|| Error::Config("every training utterance needs a domain id".into()))?;
        model.embedding(domain)?;
        seen[domain] = true;
        out.push(Prepared {
            seq,
            domain,
            windows: (0..seq.len()).map(|t| context_window(seq, t, model.context)).collect(),
            feature_gram: match cfg.gram_source {
                GramSource::Features => Some(gram(seq)?),
                GramSource::Codes => None,
            },
        });
    }
    if seen.iter().filter(|s| **s).count() < 2 {
        return Err(Error::Config("training data must cover at least two domains".into()));
    }
    Ok(out)
}

fn domain_count(data: &[FrameSequence]) -> usize {
    data.iter().filter_map(|s| s.meta.domain_id).max().map_or(0, |d| d + 1)
}

/// Per-epoch gradient accumulators.
struct Grads {
    encoder: Gradients,
    decoder: Gradients,
    duration: Gradients,
    domain: Vec<Vec<f64>>,
}

impl Grads {
    fn zeros(model: &ToyModel) -> Self {
        Self {
            encoder: model.encoder.zero_grads(),
            decoder: model.decoder.zero_grads(),
            duration: model.duration.zero_grads(),
            domain: model.domain_table.iter().map(|e| vec![0.0; e.len()]).collect(),
        }
    }
}

/// Adam state for every trainable group.
struct Optimizer {
    encoder: Adam,
    decoder: Adam,
    duration: Adam,
    domain: Adam,
}

impl Optimizer {
    fn new(model: &ToyModel) -> Self {
        Self {
            encoder: Adam::new(model.encoder.params().len()),
            decoder: Adam::new(model.decoder.params().len()),
            duration: Adam::new(model.duration.params().len()),
            domain: Adam::new(model.domain_table.concat().len()),
        }
    }

    fn step_net(adam: &mut Adam, net: &mut TinyNet, grads: &Gradients, lr: f64) {
        let mut p = net.params();
        adam.update(&mut p, &grads.flat(), lr);
        net.set_params(&p);
    }

    fn step(&mut self, model: &mut ToyModel, grads: &Grads, lr: f64, train_encoder: bool, train_duration: bool) {
        if train_encoder {
            Self::step_net(&mut self.encoder, &mut model.encoder, &grads.encoder, lr);
        }
        Self::step_net(&mut self.decoder, &mut model.decoder, &grads.decoder, lr);
        if train_duration {
            Self::step_net(&mut self.duration, &mut model.duration, &grads.duration, lr);
        }
        let mut table = model.domain_table.concat();
        self.domain.update(&mut table, &grads.domain.concat(), lr);
        let width = model.domain_table.first().map_or(1, Vec::len).max(1);
        model.domain_table = table.chunks(width).map(<[f64]>::to_vec).collect();
    }
}

fn encode_prepared(model: &ToyModel, utt: &Prepared) -> Result<(Vec<Trace>, FrameSequence)> {
    let traces: Vec<Trace> = utt
        .windows
        .iter()
        .map(|w| model.encoder.forward_trace(w))
        .collect::<Result<_>>()?;
    let flat: Vec<f64> = traces.iter().flat_map(|t| t.output().iter().copied()).collect();
    let codes = FrameSequence::from_flat(flat, model.code_dim(), utt.seq.frame_period())?;
    Ok((traces, codes))
}

fn resample_codes(codes: &FrameSequence, utt: &Prepared, cfg: &ToyConfig, rng: &mut Rng) -> Result<ResampleResult> {
    match &utt.feature_gram {
        Some(g) => resample(codes, g, &cfg.threshold, rng),
        None => resample(codes, &gram(codes)?, &cfg.threshold, rng),
    }
}

fn check_loss(loss: f64) -> Result<f64> {
    if loss.is_finite() {
        Ok(loss)
    } else {
        Err(Error::Numerical(format!("training loss became {loss}")))
    }
}

fn add_into(acc: &mut [f64], v: &[f64], scale: f64) {
    acc.iter_mut().zip(v).for_each(|(a, x)| *a += scale * x);
}

/// One synchronous pass: resample, realign, decode every frame.
fn sync_epoch(model: &ToyModel, prepared: &[Prepared], cfg: &ToyConfig, epoch: usize) -> Result<(f64, Grads)> {
    let frames: usize = prepared.iter().map(|u| u.seq.len()).sum();
    let scale = 1.0 / frames as f64;
    let code_dim = model.code_dim();
    let mut grads = Grads::zeros(model);
    let mut total = 0.0;
    for (u, utt) in prepared.iter().enumerate() {
        let mut g = rng::stream(cfg.seed, (epoch * prepared.len() + u) as u64);
        let (traces, codes) = encode_prepared(model, utt)?;
        let res = resample_codes(&codes, utt, cfg, &mut g)?;
        let aligned = realign(&res);
        let emb = model.embedding(utt.domain)?;
        let mut grad_aligned = vec![vec![0.0; code_dim]; utt.seq.len()];
        for t in 0..utt.seq.len() {
            let input = [aligned.row(t), emb].concat();
            let tr = model.decoder.forward_trace(&input)?;
            let resid: Vec<f64> = tr.output().iter().zip(utt.seq.row(t)).map(|(y, x)| y - x).collect();
            total += resid.iter().map(|r| r * r).sum::<f64>();
            let gy: Vec<f64> = resid.iter().map(|r| 2.0 * r * scale).collect();
            let gin = model.decoder.backward_trace(&tr, &gy, &mut grads.decoder)?;
            grad_aligned[t].copy_from_slice(&gin[..code_dim]);
            add_into(&mut grads.domain[utt.domain], &gin[code_dim..], 1.0);
        }
        // Realign copies each pooled code over its segment, so every frame of
        // a segment receives the segment's summed gradient over its length.
        let mut grad_codes = vec![vec![0.0; code_dim]; utt.seq.len()];
        for (a, b, kind) in res.segmentation.segments() {
            if kind == SegmentKind::Inserted {
                continue;
            }
            let mut sum = grad_aligned[a].clone();
            for row in &grad_aligned[a + 1..b] {
                add_into(&mut sum, row, 1.0);
            }
            let n = (b - a) as f64;
            for row in &mut grad_codes[a..b] {
                row.iter_mut().zip(&sum).for_each(|(r, s)| *r = s / n);
            }
        }
        for (tr, gz) in traces.iter().zip(&grad_codes) {
            model.encoder.backward_trace(tr, gz, &mut grads.encoder)?;
        }
    }
    Ok((check_loss(total * scale)?, grads))
}

/// One asynchronous pass: resample without realignment, group codes into
/// runs, and fit each run's frames and length.
fn async_epoch(
    model: &ToyModel,
    prepared: &[Prepared],
    frozen_codes: Option<&[FrameSequence]>,
    cfg: &ToyConfig,
    epoch: usize,
) -> Result<(f64, Grads)> {
    let frames: usize = prepared.iter().map(|u| u.seq.len()).sum();
    let scale = 1.0 / frames as f64;
    let code_dim = model.code_dim();
    let mut grads = Grads::zeros(model);
    let mut total = 0.0;
    for (u, utt) in prepared.iter().enumerate() {
        let mut g = rng::stream(cfg.seed, (epoch * prepared.len() + u) as u64);
        let (traces, codes) = match frozen_codes {
            Some(c) => (Vec::new(), c[u].clone()),
            None => encode_prepared(model, utt)?,
        };
        let res = resample_codes(&codes, utt, cfg, &mut g)?;
        let emb = model.embedding(utt.domain)?;
        let mut grad_codes = vec![vec![0.0; code_dim]; utt.seq.len()];
        for (a, b) in group_runs(&res.codes, model.run_similarity) {
            let run_code = mean_rows(&res.codes, a, b);
            let input = [run_code.as_slice(), emb].concat();
            let tr_y = model.decoder.forward_trace(&input)?;
            let tr_d = model.duration.forward_trace(&input)?;
            let mut gy = vec![0.0; model.feature_dim()];
            let mut len = 0usize;
            for m in a..b {
                let (s, e, _) = res.segmentation.segment(m);
                for t in s..e {
                    let resid: Vec<f64> = tr_y.output().iter().zip(utt.seq.row(t)).map(|(y, x)| y - x).collect();
                    total += resid.iter().map(|r| r * r).sum::<f64>();
                    add_into(&mut gy, &resid, 2.0 * scale);
                }
                len += e - s;
            }
            let derr = tr_d.output()[0] - len as f64;
            total += cfg.duration_weight * derr * derr;
            let gd = [2.0 * cfg.duration_weight * derr * scale];
            let mut gin = model.decoder.backward_trace(&tr_y, &gy, &mut grads.decoder)?;
            add_into(&mut gin, &model.duration.backward_trace(&tr_d, &gd, &mut grads.duration)?, 1.0);
            add_into(&mut grads.domain[utt.domain], &gin[code_dim..], 1.0);
            if frozen_codes.is_some() {
                continue;
            }
            // Run code = mean of pooled codes; pooled code = mean of its
            // segment's frames, or the boundary frame for an inserted one.
            let per_code = 1.0 / (b - a) as f64;
            for m in a..b {
                let (s, e, kind) = res.segmentation.segment(m);
                match kind {
                    SegmentKind::Inserted => add_into(&mut grad_codes[s], &gin[..code_dim], per_code),
                    SegmentKind::Normal => {
                        let w = per_code / (e - s) as f64;
                        for row in &mut grad_codes[s..e] {
                            add_into(row, &gin[..code_dim], w);
                        }
                    }
                }
            }
        }
        for (tr, gz) in traces.iter().zip(&grad_codes) {
            model.encoder.backward_trace(tr, gz, &mut grads.encoder)?;
        }
    }
    Ok((check_loss(total * scale)?, grads))
}

fn fresh_model(data: &[FrameSequence], cfg: &ToyConfig) -> Result<ToyModel> {
    cfg.validate()?;
    let dim = data
        .first()
        .ok_or(Error::EmptyInput("training needs at least one utterance"))?
        .dim();
    ToyModel::random(dim, domain_count(data), cfg, &mut rng::seeded(cfg.seed))
}

/// Stage one: train encoder, decoder, and domain table end to end through
/// resampling and realignment.
pub fn train_sync(data: &[FrameSequence], cfg: &ToyConfig) -> Result<TrainRun> {
    let model = fresh_model(data, cfg)?;
    train_sync_from(model, data, cfg)
}

/// [`train_sync`] starting from a given model.
pub fn train_sync_from(mut model: ToyModel, data: &[FrameSequence], cfg: &ToyConfig) -> Result<TrainRun> {
    cfg.validate()?;
    let prepared = prepare(data, &model, cfg)?;
    let mut opt = Optimizer::new(&model);
    let mut trace = Vec::with_capacity(cfg.sync_epochs);
    for epoch in 0..cfg.sync_epochs {
        let (loss, grads) = sync_epoch(&model, &prepared, cfg, epoch)?;
        trace.push(loss);
        opt.step(&mut model, &grads, cfg.lr, true, false);
    }
    Ok(TrainRun { model, loss_trace: trace })
}

/// Stage two: freeze the encoder and fit the decoder, duration head, and
/// domain table on unaligned codes.
pub fn train_async(model: &ToyModel, data: &[FrameSequence], cfg: &ToyConfig) -> Result<TrainRun> {
    cfg.validate()?;
    let mut model = model.clone();
    let prepared = prepare(data, &model, cfg)?;
    let codes: Vec<FrameSequence> = data.iter().map(|s| model.encode(s)).collect::<Result<_>>()?;
    let mut opt = Optimizer::new(&model);
    let mut trace = Vec::with_capacity(cfg.async_epochs);
    for epoch in 0..cfg.async_epochs {
        let (loss, grads) = async_epoch(&model, &prepared, Some(&codes), cfg, cfg.sync_epochs + epoch)?;
        trace.push(loss);
        opt.step(&mut model, &grads, cfg.lr, false, true);
    }
    Ok(TrainRun { model, loss_trace: trace })
}

/// Both stages in sequence.
pub fn train_two_stage(data: &[FrameSequence], cfg: &ToyConfig) -> Result<(TrainRun, TrainRun)> {
    let sync = train_sync(data, cfg)?;
    let asynchronous = train_async(&sync.model, data, cfg)?;
    Ok((sync, asynchronous))
}

/// The ablation: the asynchronous objective from scratch with the encoder
/// trainable, for as many epochs as both stages together.
pub fn train_single_stage(data: &[FrameSequence], cfg: &ToyConfig) -> Result<TrainRun> {
    let mut model = fresh_model(data, cfg)?;
    let prepared = prepare(data, &model, cfg)?;
    let mut opt = Optimizer::new(&model);
    let epochs = cfg.sync_epochs + cfg.async_epochs;
    let mut trace = Vec::with_capacity(epochs);
    for epoch in 0..epochs {
        let (loss, grads) = async_epoch(&model, &prepared, None, cfg, epoch)?;
        trace.push(loss);
        opt.step(&mut model, &grads, cfg.lr, true, true);
    }
    Ok(TrainRun { model, loss_trace: trace })
}

/// CSV with header `step,loss`.
pub fn loss_csv(trace: &[f64]) -> String {
    let mut out = String::from("step,loss\n");
    for (i, l) in trace.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", crate::numfmt::fmt_g(*l, 12)));
    }
    out
}

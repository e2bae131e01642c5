use super::gram::ZERO_NORM;
use crate::error::{Error, Result};
use crate::frames::{dot, norm, FrameSequence};
use crate::modelio::{self, Block};
use crate::rng;
use crate::trainkit::{Activation, Gradients, TinyNet, Trace};

/// `B(t) = Σ_{t'≠t} cos(A(t'), A(t)) · A(t')`, with raw cosine weights and no
/// normalization of the sum.
pub fn self_express(a_seq: &FrameSequence) -> Result<FrameSequence> {
    match a_seq.len() {
        0 => return Err(Error::EmptyInput("self_express needs frames")),
        1 => return Err(Error::DegenerateInput("self_express needs at least two frames")),
        _ => {}
    }
    let rows: Vec<&[f64]> = a_seq.rows().collect();
    let weights = cosine_weights(&rows);
    let n = rows.len();
    let mut out = a_seq.clone();
    for t in 0..n {
        let b = out.row_mut(t);
        b.iter_mut().for_each(|v| *v = 0.0);
        for (u, row) in rows.iter().enumerate() {
            if u == t {
                continue;
            }
            let w = weights[t * n + u];
            b.iter_mut().zip(row.iter()).for_each(|(bv, av)| *bv += w * av);
        }
    }
    Ok(out)
}

fn cosine_weights(rows: &[&[f64]]) -> Vec<f64> {
    let n = rows.len();
    let norms: Vec<f64> = rows.iter().map(|r| norm(r)).collect();
    let mut w = vec![0.0; n * n];
    for t in 0..n {
        for u in 0..t {
            let c = if norms[t] < ZERO_NORM || norms[u] < ZERO_NORM {
                0.0
            } else {
                dot(rows[t], rows[u]) / (norms[t] * norms[u])
            };
            w[t * n + u] = c;
            w[u * n + t] = c;
        }
    }
    w
}

/// Self-expressive autoencoder: one encoder producing `A(t)` and two
/// decoders reconstructing the input from `A(t)` and from `B(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeaModel {
    pub encoder: TinyNet,
    pub decoder_a: TinyNet,
    pub decoder_b: TinyNet,
}

/// Hyperparameters for [`train_sea`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeaConfig {
    pub hidden: usize,
    pub embed_dim: usize,
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SeaConfig {
    fn default() -> Self {
        Self {
            hidden: 16,
            embed_dim: 8,
            lr: 0.05,
            epochs: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeaTraining {
    pub model: SeaModel,
    /// Loss before the first update followed by the loss after each epoch.
    pub loss_trace: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SeaGradients {
    pub encoder: Gradients,
    pub decoder_a: Gradients,
    pub decoder_b: Gradients,
}

impl SeaGradients {
    pub fn flat(&self) -> Vec<f64> {
        let mut v = self.encoder.flat();
        v.extend(self.decoder_a.flat());
        v.extend(self.decoder_b.flat());
        v
    }
}

impl SeaModel {
    pub fn new(encoder: TinyNet, decoder_a: TinyNet, decoder_b: TinyNet) -> Result<Self> {
        let a = encoder.output_dim();
        for dec in [&decoder_a, &decoder_b] {
            if dec.input_dim() != a {
                return Err(Error::DimMismatch {
                    expected: a,
                    got: dec.input_dim(),
                });
            }
            if dec.output_dim() != encoder.input_dim() {
                return Err(Error::DimMismatch {
                    expected: encoder.input_dim(),
                    got: dec.output_dim(),
                });
            }
        }
        Ok(Self {
            encoder,
            decoder_a,
            decoder_b,
        })
    }

    /// Two-layer tanh networks: `d → h → a` and `a → h → d`, linear outputs.
    pub fn random(dim: usize, hidden: usize, embed_dim: usize, rng: &mut rng::Rng) -> Result<Self> {
        let acts = [Activation::Tanh, Activation::Identity];
        Self::new(
            TinyNet::random(&[dim, hidden, embed_dim], &acts, rng)?,
            TinyNet::random(&[embed_dim, hidden, dim], &acts, rng)?,
            TinyNet::random(&[embed_dim, hidden, dim], &acts, rng)?,
        )
    }

    /// `(d, h, a)`: input, first hidden, and embedding widths.
    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.encoder.input_dim(),
            self.encoder.layers()[0].out_dim,
            self.encoder.output_dim(),
        )
    }

    fn params(&self) -> Vec<f64> {
        let mut p = self.encoder.params();
        p.extend(self.decoder_a.params());
        p.extend(self.decoder_b.params());
        p
    }

    /// Serialize as a `dims: d h a` header plus one block per matrix.
    pub fn to_text(&self) -> String {
        let (d, h, a) = self.dims();
        let mut blocks: Vec<Block> = modelio::net_to_blocks("encoder", &self.encoder);
        blocks.extend(modelio::net_to_blocks("decoder_a", &self.decoder_a));
        blocks.extend(modelio::net_to_blocks("decoder_b", &self.decoder_b));
        modelio::write_blocks(&format!("dims: {d} {h} {a}"), &blocks)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (header, blocks) = modelio::parse_blocks(text)?;
        let dims = modelio::parse_dims_header(&header)?;
        let model = Self::new(
            modelio::net_from_blocks("encoder", &blocks)?,
            modelio::net_from_blocks("decoder_a", &blocks)?,
            modelio::net_from_blocks("decoder_b", &blocks)?,
        )?;
        let (d, h, a) = model.dims();
        if dims != [d, h, a] {
            return Err(Error::Format(format!("header dims {dims:?} disagree with blocks ({d} {h} {a})")));
        }
        Ok(model)
    }
}

/// Apply the encoder framewise: `A(t) = encoder(x(t))`.
pub fn embed(model: &SeaModel, seq: &FrameSequence) -> Result<FrameSequence> {
    if seq.dim() != model.encoder.input_dim() {
        return Err(Error::DimMismatch {
            expected: model.encoder.input_dim(),
            got: seq.dim(),
        });
    }
    let mut data = Vec::with_capacity(seq.len() * model.encoder.output_dim());
    for row in seq.rows() {
        data.extend(model.encoder.forward(row)?);
    }
    let out = FrameSequence::from_flat(data, model.encoder.output_dim(), seq.frame_period())?;
    Ok(out.with_meta(seq.meta.clone()))
}

fn check_data(model: &SeaModel, data: &[FrameSequence]) -> Result<usize> {
    if data.is_empty() {
        return Err(Error::EmptyInput("SEA training needs at least one utterance"));
    }
    let mut frames = 0;
    for seq in data {
        if seq.dim() != model.encoder.input_dim() {
            return Err(Error::DimMismatch {
                expected: model.encoder.input_dim(),
                got: seq.dim(),
            });
        }
        if seq.len() < 2 {
            return Err(Error::DegenerateInput("SEA utterances need at least two frames"));
        }
        frames += seq.len();
    }
    Ok(frames)
}

/// Mean per-frame loss `‖dec_a(A) − x‖² + ‖dec_b(B) − x‖²` over all frames.
pub fn sea_loss(model: &SeaModel, data: &[FrameSequence]) -> Result<f64> {
    let frames = check_data(model, data)?;
    let mut total = 0.0;
    for seq in data {
        let a = embed(model, seq)?;
        let b = self_express(&a)?;
        for t in 0..seq.len() {
            let ya = model.decoder_a.forward(a.row(t))?;
            let yb = model.decoder_b.forward(b.row(t))?;
            total += sq_dist(&ya, seq.row(t)) + sq_dist(&yb, seq.row(t));
        }
    }
    Ok(total / frames as f64)
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Loss and exact gradients, differentiating through the cosine weights of
/// `B(t)`.
pub fn sea_gradients(model: &SeaModel, data: &[FrameSequence]) -> Result<(f64, SeaGradients)> {
    let frames = check_data(model, data)?;
    let scale = 1.0 / frames as f64;
    let mut grads = SeaGradients {
        encoder: model.encoder.zero_grads(),
        decoder_a: model.decoder_a.zero_grads(),
        decoder_b: model.decoder_b.zero_grads(),
    };
    let mut total = 0.0;
    let a_dim = model.encoder.output_dim();
    for seq in data {
        let n = seq.len();
        let enc_traces: Vec<Trace> = seq
            .rows()
            .map(|r| model.encoder.forward_trace(r))
            .collect::<Result<_>>()?;
        let a_rows: Vec<&[f64]> = enc_traces.iter().map(|t| t.output()).collect();
        let a_seq = FrameSequence::from_flat(a_rows.concat(), a_dim, seq.frame_period())?;
        let b_seq = self_express(&a_seq)?;

        let mut grad_a = vec![vec![0.0; a_dim]; n];
        let mut grad_b = vec![vec![0.0; a_dim]; n];
        for t in 0..n {
            let x = seq.row(t);
            let tr_a = model.decoder_a.forward_trace(a_rows[t])?;
            let ra: Vec<f64> = tr_a.output().iter().zip(x).map(|(y, x)| y - x).collect();
            total += ra.iter().map(|v| v * v).sum::<f64>();
            let ga: Vec<f64> = ra.iter().map(|r| 2.0 * r * scale).collect();
            let gin = model.decoder_a.backward_trace(&tr_a, &ga, &mut grads.decoder_a)?;
            grad_a[t].iter_mut().zip(&gin).for_each(|(g, v)| *g += v);

            let tr_b = model.decoder_b.forward_trace(b_seq.row(t))?;
            let rb: Vec<f64> = tr_b.output().iter().zip(x).map(|(y, x)| y - x).collect();
            total += rb.iter().map(|v| v * v).sum::<f64>();
            let gb: Vec<f64> = rb.iter().map(|r| 2.0 * r * scale).collect();
            grad_b[t] = model.decoder_b.backward_trace(&tr_b, &gb, &mut grads.decoder_b)?;
        }

        // Back through B(t) = Σ_{u≠t} w(t,u) A(u), w = cos(A(t), A(u)).
        let norms: Vec<f64> = a_rows.iter().map(|r| norm(r)).collect();
        let weights = cosine_weights(&a_rows);
        for t in 0..n {
            for u in 0..n {
                if u == t {
                    continue;
                }
                let w = weights[t * n + u];
                let (gb_t, a_t, a_u) = (&grad_b[t], a_rows[t], a_rows[u]);
                grad_a[u].iter_mut().zip(gb_t).for_each(|(g, v)| *g += w * v);
                if norms[t] < ZERO_NORM || norms[u] < ZERO_NORM {
                    continue;
                }
                let s = dot(gb_t, a_u);
                let nn = norms[t] * norms[u];
                let (nt2, nu2) = (norms[t] * norms[t], norms[u] * norms[u]);
                for k in 0..a_dim {
                    grad_a[t][k] += s * (a_u[k] / nn - w * a_t[k] / nt2);
                    grad_a[u][k] += s * (a_t[k] / nn - w * a_u[k] / nu2);
                }
            }
        }
        for (tr, g) in enc_traces.iter().zip(&grad_a) {
            model.encoder.backward_trace(tr, g, &mut grads.encoder)?;
        }
    }
    Ok((total * scale, grads))
}

/// Full-batch gradient descent on the joint reconstruction loss of both
/// decoders.
pub fn train_sea(data: &[FrameSequence], cfg: &SeaConfig) -> Result<SeaTraining> {
    if cfg.hidden == 0 || cfg.embed_dim == 0 || !(cfg.lr >= 0.0 && cfg.lr.is_finite()) {
        return Err(Error::Config(format!("invalid SEA config {cfg:?}")));
    }
    let dim = data
        .first()
        .ok_or(Error::EmptyInput("SEA training needs at least one utterance"))?
        .dim();
    let mut model = SeaModel::random(dim, cfg.hidden, cfg.embed_dim, &mut rng::seeded(cfg.seed))?;
    let mut trace = Vec::with_capacity(cfg.epochs + 1);
    for _ in 0..cfg.epochs {
        let (loss, grads) = sea_gradients(&model, data)?;
        if !loss.is_finite() {
            return Err(Error::Numerical(format!("SEA loss became {loss}")));
        }
        trace.push(loss);
        model.encoder.apply(&grads.encoder, cfg.lr);
        model.decoder_a.apply(&grads.decoder_a, cfg.lr);
        model.decoder_b.apply(&grads.decoder_b, cfg.lr);
    }
    let final_loss = sea_loss(&model, data)?;
    if !final_loss.is_finite() || !model.params().iter().all(|v| v.is_finite()) {
        return Err(Error::Numerical(format!("SEA loss became {final_loss}")));
    }
    trace.push(final_loss);
    Ok(SeaTraining {
        model,
        loss_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simrep::gram;
    use crate::synthgen::{self, RhythmStyle, SynthConfig};
    use crate::trainkit::{max_relative_error, Layer};
    use rand::Rng as _;

    fn seq(rows: &[[f64; 2]]) -> FrameSequence {
        FrameSequence::from_rows(rows, 2).unwrap()
    }

    #[test]
    fn identical_pair() {
        let b = self_express(&seq(&[[0.6, 0.8], [0.6, 0.8]])).unwrap();
        assert_eq!(b.row(0), &[0.6, 0.8]);
        assert_eq!(b.row(1), &[0.6, 0.8]);
    }

    #[test]
    fn orthogonal_pair_is_zero() {
        let b = self_express(&seq(&[[1.0, 0.0], [0.0, 1.0]])).unwrap();
        assert_eq!(b.as_flat(), &[0.0; 4]);
    }

    #[test]
    fn three_frame_hand_sum() {
        let b = self_express(&seq(&[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])).unwrap();
        // Frame 0: 1·[1,0] from frame 1 plus 0·[0,1] from frame 2.
        assert_eq!(b.row(0), &[1.0, 0.0]);
        assert_eq!(b.row(1), &[1.0, 0.0]);
        assert_eq!(b.row(2), &[0.0, 0.0]);
    }

    #[test]
    fn identical_frames_scale_by_count() {
        let v = [0.3, -1.2];
        let a = seq(&[v, v, v, v, v]);
        let b = self_express(&a).unwrap();
        for t in 0..5 {
            for k in 0..2 {
                assert!((b.row(t)[k] - 4.0 * v[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_lengths() {
        assert!(matches!(self_express(&FrameSequence::zeros(0, 2)), Err(Error::EmptyInput(_))));
        assert!(matches!(self_express(&seq(&[[1.0, 0.0]])), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn embed_zero_and_identity_encoders() {
        let x = seq(&[[1.0, 2.0], [-3.0, 0.5]]);
        let zero = TinyNet::new(vec![Layer::zeros(2, 2, Activation::Identity)]).unwrap();
        let m = SeaModel::new(zero, TinyNet::identity(2), TinyNet::identity(2)).unwrap();
        assert!(embed(&m, &x).unwrap().as_flat().iter().all(|&v| v == 0.0));
        let m = SeaModel::new(TinyNet::identity(2), TinyNet::identity(2), TinyNet::identity(2)).unwrap();
        assert_eq!(embed(&m, &x).unwrap().as_flat(), x.as_flat());
        let wrong = FrameSequence::zeros(3, 5);
        assert!(matches!(embed(&m, &wrong), Err(Error::DimMismatch { .. })));
    }

    fn fd_check(model: &SeaModel, data: &[FrameSequence]) -> f64 {
        let (_, grads) = sea_gradients(model, data).unwrap();
        let p0 = model.params();
        let eps = 1e-4;
        let mut probe = model.clone();
        let set = |m: &mut SeaModel, p: &[f64]| {
            let (ne, na) = (m.encoder.params().len(), m.decoder_a.params().len());
            m.encoder.set_params(&p[..ne]);
            m.decoder_a.set_params(&p[ne..ne + na]);
            m.decoder_b.set_params(&p[ne + na..]);
        };
        let numeric: Vec<f64> = (0..p0.len())
            .map(|i| {
                let mut p = p0.clone();
                p[i] += eps;
                set(&mut probe, &p);
                let up = sea_loss(&probe, data).unwrap();
                p[i] -= 2.0 * eps;
                set(&mut probe, &p);
                let down = sea_loss(&probe, data).unwrap();
                (up - down) / (2.0 * eps)
            })
            .collect();
        max_relative_error(&grads.flat(), &numeric, 1e-5)
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut g = rng::seeded(21);
        for _ in 0..3 {
            let model = SeaModel::random(4, 5, 3, &mut g).unwrap();
            let data: Vec<f64> = (0..12).map(|_| g.random_range(-1.0..1.0)).collect();
            let x = FrameSequence::from_flat(data, 4, 0.01).unwrap();
            let err = fd_check(&model, &[x]);
            assert!(err < 1e-3, "relative error {err}");
        }
    }

    #[test]
    fn constant_utterance_is_learned() {
        let x = FrameSequence::from_rows(&[[0.5, -0.25, 1.0]; 6], 3).unwrap();
        let cfg = SeaConfig { hidden: 6, embed_dim: 3, epochs: 200, ..Default::default() };
        let run = train_sea(&[x], &cfg).unwrap();
        let (first, last) = (run.loss_trace[0], *run.loss_trace.last().unwrap());
        assert!(last < 0.01 * first, "loss {first} -> {last}");
        assert!(run.loss_trace.iter().all(|l| l.is_finite()));
    }

    #[test]
    fn zero_learning_rate_keeps_weights() {
        let x = FrameSequence::from_rows(&[[0.1, 0.2], [0.3, -0.4], [0.0, 1.0]], 2).unwrap();
        let cfg = SeaConfig { lr: 0.0, epochs: 5, ..Default::default() };
        let run = train_sea(std::slice::from_ref(&x), &cfg).unwrap();
        let fresh = SeaModel::random(2, cfg.hidden, cfg.embed_dim, &mut rng::seeded(cfg.seed)).unwrap();
        assert_eq!(run.model, fresh);
        assert_eq!(run.loss_trace[0], *run.loss_trace.last().unwrap());
    }

    #[test]
    fn trained_embedding_separates_phones() {
        let cfg = SynthConfig { dim: 8, alphabet_size: 4, length_range: (4, 6), base_reps: 4 };
        let mut g = rng::seeded(5);
        let data: Vec<_> = (0..4)
            .map(|_| synthgen::generate(&mut g, &cfg, &RhythmStyle::default()).unwrap())
            .collect();
        let seqs: Vec<FrameSequence> = data.iter().map(|u| u.seq.clone()).collect();
        let run = train_sea(&seqs, &SeaConfig { epochs: 60, ..Default::default() }).unwrap();
        let (mut within, mut nw, mut between, mut nb) = (0.0, 0, 0.0, 0);
        for u in &data {
            let gm = gram(&embed(&run.model, &u.seq).unwrap()).unwrap();
            let labels = u.frame_labels();
            for i in 0..labels.len() {
                for j in 0..i {
                    if labels[i] == labels[j] {
                        within += gm.get(i, j);
                        nw += 1;
                    } else {
                        between += gm.get(i, j);
                        nb += 1;
                    }
                }
            }
        }
        assert!(within / nw as f64 > between / nb as f64);
    }

    #[test]
    fn model_text_roundtrip() {
        let m = SeaModel::random(5, 4, 3, &mut rng::seeded(8)).unwrap();
        let text = m.to_text();
        assert!(text.starts_with("dims: 5 4 3\n"));
        assert_eq!(SeaModel::from_text(&text).unwrap(), m);
    }
}

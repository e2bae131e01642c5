//! Train the self-expressive similarity model on noisy synthetic speech and
//! compare phone separation of raw and learned Gram matrices.

use rhythmkit::simrep::{embed, gram, train_sea, GramMatrix, SeaConfig};
use rhythmkit::synthgen::{generate, RhythmStyle, SynthConfig};
use rhythmkit::rng;

/// Mean similarity within phones minus mean similarity across phones.
fn separation(g: &GramMatrix, labels: &[usize]) -> f64 {
    let (mut same, mut ns, mut diff, mut nd) = (0.0, 0, 0.0, 0);
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if i == j {
                continue;
            }
            if labels[i] == labels[j] {
                same += g.get(i, j);
                ns += 1;
            } else {
                diff += g.get(i, j);
                nd += 1;
            }
        }
    }
    same / ns.max(1) as f64 - diff / nd.max(1) as f64
}

fn main() -> rhythmkit::Result<()> {
    let style = RhythmStyle { noise_sd: 0.8, ..RhythmStyle::default() };
    let mut g = rng::seeded(5);
    let utts = (0..4)
        .map(|_| generate(&mut g, &SynthConfig::default(), &style))
        .collect::<rhythmkit::Result<Vec<_>>>()?;
    let data: Vec<_> = utts.iter().map(|u| u.seq.clone()).collect();

    let trained = train_sea(&data, &SeaConfig { epochs: 300, ..SeaConfig::default() })?;
    let trace = &trained.loss_trace;
    println!("loss {:.4} -> {:.4} over {} epochs", trace[0], trace[trace.len() - 1], trace.len() - 1);

    for (i, utt) in utts.iter().enumerate() {
        let labels = utt.frame_labels();
        let raw = separation(&gram(&utt.seq)?, &labels);
        let learned = separation(&gram(&embed(&trained.model, &utt.seq)?)?, &labels);
        println!("utterance {i}: separation raw {raw:.3}, learned {learned:.3}");
    }
    Ok(())
}

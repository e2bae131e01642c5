//! Four-frame down- and up-sampling traces on a hand-built similarity matrix
//! where frames 1 and 2 are near-duplicates.

use rhythmkit::resampler::{pool, segment, ThresholdParams};
use rhythmkit::simrep::GramMatrix;
use rhythmkit::{rng, FrameSequence};

fn main() -> rhythmkit::Result<()> {
    let gram = GramMatrix::with_pairs(4, 0.1, &[(1, 2, 0.99)])?;
    // One-hot codes make every pooled code readable as a mixture of frames.
    let codes = FrameSequence::from_flat(
        vec![1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1.],
        4,
        0.01,
    )?;
    for tau in [0.5, 1.0, 1.05] {
        let (seg, _) = segment(&gram, &ThresholdParams::fixed(tau), &mut rng::seeded(0))?;
        let pooled = pool(&codes, &seg)?;
        println!("tau = {tau}: {} segments, boundaries {:?}", seg.len(), seg.boundaries());
        for (m, ((start, end, kind), code)) in seg.segments().zip(pooled.codes.rows()).enumerate() {
            println!("  z{m} [{start},{end}) {:<8} {code:?}", kind.name());
        }
    }
    Ok(())
}

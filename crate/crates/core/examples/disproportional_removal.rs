//! Where frames go: at a fixed threshold, vowel-stretched speech loses more
//! frames inside vowels than inside consonants.

use rhythmkit::evalkit::segment_labels;
use rhythmkit::resampler::{segment, ThresholdParams};
use rhythmkit::simrep::gram;
use rhythmkit::synthgen::{generate, is_vowel, RhythmStyle, SynthConfig};
use rhythmkit::rng;

fn main() -> rhythmkit::Result<()> {
    let style = RhythmStyle { vowel_stretch: 3.0, ..RhythmStyle::default() };
    let (mut vowel, mut nv, mut cons, mut nc) = (0usize, 0usize, 0usize, 0usize);
    for seed in 0..100 {
        let utt = generate(&mut rng::seeded(seed), &SynthConfig::default(), &style)?;
        let (seg, _) = segment(&gram(&utt.seq)?, &ThresholdParams::fixed(0.5), &mut rng::seeded(seed))?;
        let labels = segment_labels(&utt, &seg)?;
        for ((start, end, _), phone_pos) in seg.segments().zip(labels) {
            let removed = end - start - 1;
            if is_vowel(utt.phones[phone_pos]) {
                vowel += removed;
                nv += 1;
            } else {
                cons += removed;
                nc += 1;
            }
        }
    }
    println!("vowel segments:     {nv:>4}, mean frames removed {:.2}", vowel as f64 / nv as f64);
    println!("consonant segments: {nc:>4}, mean frames removed {:.2}", cons as f64 / nc as f64);
    Ok(())
}

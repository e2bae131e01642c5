//! Toy two-domain rhythm conversion: train with the two-stage and the
//! single-stage schedule and compare relative duration differences.
//!
//! Usage: cargo run --release --example two_stage_conversion [runs]

use rhythmkit::evalkit::duration_csv;
use rhythmkit::trainkit::{conversion_trial, ConversionSetup, Schedule};

fn main() -> rhythmkit::Result<()> {
    let runs: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    let setup = ConversionSetup::default();
    for schedule in [Schedule::TwoStage, Schedule::SingleStage] {
        let records = (0..runs)
            .map(|seed| conversion_trial(&setup, seed, schedule))
            .collect::<rhythmkit::Result<Vec<_>>>()?;
        let positive = records.iter().filter(|r| r.rdd > 0.0).count();
        let mean = records.iter().map(|r| r.rdd).sum::<f64>() / records.len() as f64;
        println!("{}: positive {positive}/{runs}, mean rdd {mean:.3}", schedule.name());
        print!("{}", duration_csv(&records));
    }
    Ok(())
}

//! Runs the full pipeline over the low-curvature synthetic corpus and prints
//! one line of statistics per image.
//!
//! ```text
//! cargo run --release --example synthetic_corpus -- [count]
//! ```

use std::time::Instant;

use fpbz::pipeline::{self, PipelineConfig};
use fpbz::raster::write_pgm;
use fpbz::synth::{synthetic_fingerprint, SynthParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(10);
    let cfg = PipelineConfig::default();

    println!("image  ridges  minutiae  bytes  ratio   fwd_cover  rev_cover  mean_dist  ms");
    for i in 0..count {
        let img = synthetic_fingerprint(&SynthParams::low_curvature(i));
        let original = write_pgm(&img).len();
        let start = Instant::now();
        let compression = pipeline::compress(&img, &cfg)?;
        let elapsed = start.elapsed();
        let eval = pipeline::evaluate(compression, original, cfg.tol)?;
        println!(
            "{i:>5}  {:>6}  {:>8}  {:>5}  {:>6.2}  {:>9.4}  {:>9.4}  {:>9.3}  {:>4}",
            eval.compression.ridge_count(),
            eval.compression.stages.minutiae.len(),
            eval.compression.encoded.len(),
            eval.ratio(),
            eval.overlap.forward_cover,
            eval.overlap.reverse_cover,
            eval.overlap.mean_dist,
            elapsed.as_millis(),
        );
    }
    Ok(())
}

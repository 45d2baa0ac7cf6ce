//! Compresses a synthetic print, reconstructs it from the encoded bytes and
//! writes the superimposed overlay together with the evaluation report.
//!
//! ```text
//! cargo run --release --example reconstruct_overlay -- [out_dir] [whorl|flow] [seed]
//! ```

use std::fs;
use std::path::PathBuf;

use fpbz::pipeline::{self, PipelineConfig};
use fpbz::raster::{binary_to_gray, write_pgm};
use fpbz::synth::{synthetic_fingerprint, SynthParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "fpbz-overlay".into()));
    let kind = args.next().unwrap_or_else(|| "flow".into());
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let params = match kind.as_str() {
        "whorl" => SynthParams::whorl(seed),
        "flow" => SynthParams::low_curvature(seed),
        other => return Err(format!("unknown pattern {other:?}").into()),
    };
    fs::create_dir_all(&out)?;

    let img = synthetic_fingerprint(&params);
    let original = write_pgm(&img);
    let cfg = PipelineConfig::default();
    let compression = pipeline::compress(&img, &cfg)?;
    let eval = pipeline::evaluate(compression, original.len(), cfg.tol)?;

    fs::write(out.join("original.pgm"), &original)?;
    fs::write(
        out.join("extracted.pgm"),
        write_pgm(&binary_to_gray(&eval.compression.extracted_image(), 0, 255)?),
    )?;
    fs::write(
        out.join("reconstructed.pgm"),
        write_pgm(&binary_to_gray(&eval.reconstructed, 0, 255)?),
    )?;
    fs::write(out.join("overlay.pgm"), write_pgm(&eval.overlay))?;
    let report = eval.report();
    fs::write(out.join("report.txt"), &report)?;

    for line in report.lines().take(10) {
        println!("{line}");
    }
    println!("(full report and images in {})", out.display());
    Ok(())
}

//! Compresses one synthetic print, writing the `.fbz` file and every
//! intermediate stage as PGM into an output directory.
//!
//! ```text
//! cargo run --example compress_fingerprint -- [out_dir] [seed]
//! ```

use std::fs;
use std::path::PathBuf;

use fpbz::pipeline::{self, PipelineConfig};
use fpbz::raster::{binary_to_gray, write_pgm};
use fpbz::synth::{synthetic_fingerprint, SynthParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "fpbz-out".into()));
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    fs::create_dir_all(&out)?;

    let img = synthetic_fingerprint(&SynthParams::low_curvature(seed));
    let original = write_pgm(&img);
    fs::write(out.join("original.pgm"), &original)?;

    let result = pipeline::compress(&img, &PipelineConfig::default())?;
    let s = &result.stages;
    if let Some(g) = &s.equalized {
        fs::write(out.join("1_equalized.pgm"), write_pgm(g))?;
    }
    if let Some(g) = &s.enhanced {
        fs::write(out.join("2_enhanced.pgm"), write_pgm(g))?;
    }
    if let Some(o) = &s.orientation {
        fs::write(out.join("3_orientation.pgm"), write_pgm(&o.to_gray()))?;
    }
    let stages = [
        ("4_binary", &s.binary),
        ("5_cleaned", &s.cleaned),
        ("6_skeleton", &s.skeleton),
        ("7_pruned", &s.pruned),
        ("8_disconnected", &s.disconnected),
    ];
    for (name, bin) in stages {
        fs::write(out.join(format!("{name}.pgm")), write_pgm(&binary_to_gray(bin, 0, 255)?))?;
    }
    fs::write(out.join("fingerprint.fbz"), &result.encoded)?;

    println!(
        "ridges={} in={} out={} ratio={:.2}",
        result.ridge_count(),
        original.len(),
        result.encoded.len(),
        original.len() as f64 / result.encoded.len() as f64
    );
    println!("wrote stages to {}", out.display());
    Ok(())
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fpbz::codec::{self, decode_header};
use fpbz::pipeline::{self, Compression, PipelineConfig};
use fpbz::preprocess::Threshold;
use fpbz::raster::{binary_to_gray, read_pgm, write_pgm, GrayImage};

#[derive(Parser)]
#[command(name = "fpbz", version, about = "Bezier-curve fingerprint codec")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a PGM fingerprint into an .fbz file
    Compress {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Write every intermediate stage as PGM into this directory
        #[arg(long)]
        dump_stages: Option<PathBuf>,
    },
    /// Reconstruct a ridge image (black on white PGM) from an .fbz file
    Decompress { input: PathBuf, output: PathBuf },
    /// Compress in memory, reconstruct, and report the overlay agreement
    Evaluate {
        input: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Overlay PGM path (default: <input>.overlay.pgm)
        #[arg(long)]
        overlay: Option<PathBuf>,
        /// Also write the report to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the header of an .fbz file
    Info { input: PathBuf },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    fft_block: Option<usize>,
    #[arg(long)]
    fft_k: Option<f64>,
    /// "auto" or 0..=255
    #[arg(long)]
    threshold: Option<Threshold>,
    #[arg(long)]
    orientation_block: Option<usize>,
    #[arg(long)]
    spur_iters: Option<usize>,
    #[arg(long)]
    prune_len: Option<usize>,
    #[arg(long)]
    min_ridge_px: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// "dark" (default) or "bright"
    #[arg(long)]
    ridge_polarity: Option<fpbz::pipeline::RidgePolarity>,
    /// Treat the input as a binary ridge image (pixels < 128 are ridges)
    #[arg(long)]
    skip_preprocess: bool,
}

impl ConfigArgs {
    /// Defaults, then the `FPBZ_CONFIG` file, then flags.
    fn resolve(&self) -> Result<PipelineConfig, String> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = std::env::var_os("FPBZ_CONFIG") {
            let text = fs::read_to_string(&path)
                .map_err(|e| format!("{}: {e}", Path::new(&path).display()))?;
            cfg.apply_config_text(&text).map_err(|e| e.to_string())?;
        }
        macro_rules! apply {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    cfg.$field = v;
                }
            )*};
        }
        apply!(
            fft_block,
            fft_k,
            threshold,
            orientation_block,
            spur_iters,
            prune_len,
            min_ridge_px,
            tol,
            ridge_polarity
        );
        cfg.validate()?;
        Ok(cfg)
    }

    fn run(&self, img: &GrayImage) -> Result<(PipelineConfig, Compression), String> {
        let cfg = self.resolve()?;
        let result = if self.skip_preprocess {
            pipeline::compress_binary(img, &cfg)
        } else {
            pipeline::compress(img, &cfg)
        }
        .map_err(|e| e.to_string())?;
        Ok((cfg, result))
    }
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), String> {
    fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_pgm(path: &Path) -> Result<(GrayImage, usize), String> {
    let bytes = read(path)?;
    let img = read_pgm(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((img, bytes.len()))
}

fn dump_stages(dir: &Path, result: &Compression) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let s = &result.stages;
    let mut grays = Vec::new();
    if let Some(g) = &s.equalized {
        grays.push(("equalized", g.clone()));
    }
    if let Some(g) = &s.enhanced {
        grays.push(("enhanced", g.clone()));
    }
    if let Some(o) = &s.orientation {
        grays.push(("orientation", o.to_gray()));
    }
    let bins = [
        ("binary", &s.binary),
        ("cleaned", &s.cleaned),
        ("skeleton", &s.skeleton),
        ("pruned", &s.pruned),
        ("disconnected", &s.disconnected),
    ];
    for (name, b) in bins {
        grays.push((name, binary_to_gray(b, 0, 255).map_err(|e| e.to_string())?));
    }
    for (name, g) in grays {
        write(&dir.join(format!("{name}.pgm")), &write_pgm(&g))?;
    }
    write(
        &dir.join("ridges.txt"),
        fpbz::ridge::dump_paths(&result.paths).as_bytes(),
    )
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Compress {
            input,
            output,
            config,
            dump_stages: stages_dir,
        } => {
            let (img, in_bytes) = load_pgm(&input)?;
            let (_, result) = config.run(&img)?;
            if let Some(dir) = stages_dir {
                dump_stages(&dir, &result)?;
            }
            write(&output, &result.encoded)?;
            let ratio = codec::compression_stats(in_bytes as u64, result.encoded.len() as u64)
                .map_err(|e| e.to_string())?;
            println!(
                "ridges={} in={} out={} ratio={:.4}",
                result.ridge_count(),
                in_bytes,
                result.encoded.len(),
                ratio
            );
        }
        Command::Decompress { input, output } => {
            let bytes = read(&input)?;
            let cf = codec::decode(&bytes).map_err(|e| format!("{}: {e}", input.display()))?;
            let img = pipeline::decompress(&cf).map_err(|e| e.to_string())?;
            write(&output, &write_pgm(&img))?;
        }
        Command::Evaluate {
            input,
            config,
            overlay,
            report,
        } => {
            let (img, in_bytes) = load_pgm(&input)?;
            let (cfg, result) = config.run(&img)?;
            let eval = pipeline::evaluate(result, in_bytes, cfg.tol).map_err(|e| e.to_string())?;
            let overlay = overlay.unwrap_or_else(|| input.with_extension("overlay.pgm"));
            write(&overlay, &write_pgm(&eval.overlay))?;
            let text = eval.report();
            if let Some(path) = report {
                write(&path, text.as_bytes())?;
            }
            print!("{text}");
        }
        Command::Info { input } => {
            let bytes = read(&input)?;
            let header = decode_header(&bytes).map_err(|e| format!("{}: {e}", input.display()))?;
            println!("magic=ok version={}", header.version);
            println!("width={} height={}", header.width, header.height);
            println!(
                "ridges={} size={} expected={}",
                header.ridge_count,
                bytes.len(),
                header.expected_len()
            );
            codec::decode(&bytes).map_err(|e| format!("{}: {e}", input.display()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("fpbz: {msg}");
            ExitCode::FAILURE
        }
    }
}

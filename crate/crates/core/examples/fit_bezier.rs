//! Fits a cubic Bézier to pixel samples of a circular arc and reports the
//! control points and the fit error, before and after fixed-point
//! quantization.
//!
//! ```text
//! cargo run --example fit_bezier -- [radius] [sweep_degrees]
//! ```

use fpbz::bezier::{fit_error, fit_ridge};
use fpbz::codec::CompressedFingerprint;
use fpbz::ridge::{order_ridge_pixels, Pixel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let radius: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(40.0);
    let sweep: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(120.0);

    // rasterize the arc densely, then keep each pixel once
    let (cx, cy) = (radius + 5.0, radius + 5.0);
    let mut pixels: Vec<Pixel> = Vec::new();
    let steps = (radius * sweep.to_radians() * 8.0).ceil() as usize;
    for i in 0..=steps {
        let a = sweep.to_radians() * i as f64 / steps as f64;
        let p = Pixel::new(
            (cx + radius * a.cos()).round() as usize,
            (cy - radius * a.sin()).round() as usize,
        );
        if !pixels.contains(&p) {
            pixels.push(p);
        }
    }
    let path = order_ridge_pixels(&pixels)?;
    let curve = fit_ridge(&path);
    let err = fit_error(&curve, &path);
    println!("{} pixels along a {sweep} degree arc of radius {radius}", path.len());
    for (name, p) in ["p0", "p1", "p2", "p3"].iter().zip(curve.points()) {
        println!("  {name} = ({:.4}, {:.4})", p.x, p.y);
    }
    println!("fit error: rms {:.4} px, max {:.4} px", err.rms, err.max);

    let size = (2.0 * radius + 10.0) as usize;
    let stored = CompressedFingerprint::new(size, size, vec![curve])?.quantized()?;
    let q = fit_error(&stored.ridges[0], &path);
    println!("after 24.8 quantization: rms {:.4} px, max {:.4} px", q.rms, q.max);
    Ok(())
}

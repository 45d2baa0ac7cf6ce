//! Encodes a two-ridge fingerprint, prints the file as annotated hex, and
//! shows how malformed streams are rejected.
//!
//! ```text
//! cargo run --example codec_layout
//! ```

use fpbz::bezier::{CubicBezier, Point2};
use fpbz::codec::{decode, decode_header, encode, CompressedFingerprint, HEADER_LEN, RIDGE_LEN};

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect::<Vec<_>>().join(" ")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ridges = vec![
        CubicBezier::new(
            Point2::new(10.0, 20.0),
            Point2::new(30.5, 18.25),
            Point2::new(50.0, 25.0),
            Point2::new(70.0, 22.0),
        ),
        CubicBezier::line(Point2::new(5.0, 5.0), Point2::new(5.0, 60.0)),
    ];
    let cf = CompressedFingerprint::new(256, 288, ridges)?.quantized()?;
    let bytes = encode(&cf)?;

    println!("{} bytes = {HEADER_LEN} + {RIDGE_LEN} x {}", bytes.len(), cf.ridges.len());
    println!("magic     {}", hex(&bytes[0..4]));
    println!("version   {}", hex(&bytes[4..5]));
    println!("reserved  {}", hex(&bytes[5..6]));
    println!("width     {}", hex(&bytes[6..8]));
    println!("height    {}", hex(&bytes[8..10]));
    println!("ridges    {}", hex(&bytes[10..14]));
    for (i, chunk) in bytes[HEADER_LEN..].chunks(RIDGE_LEN).enumerate() {
        println!("ridge {i}   {}", hex(chunk));
    }
    println!("header: {:?}", decode_header(&bytes)?);
    assert_eq!(decode(&bytes)?, cf);

    let mut bad = bytes.clone();
    bad[0] = b'G';
    println!("bad magic:     {}", decode(&bad).unwrap_err());
    println!("truncated:     {}", decode(&bytes[..bytes.len() - 3]).unwrap_err());
    let mut long = bytes.clone();
    long.extend_from_slice(&[0, 0]);
    println!("trailing data: {}", decode(&long).unwrap_err());
    Ok(())
}

//! Thins a hand-drawn thick ridge pattern with both the plain two-subfield
//! thinning and the pipeline's skeletonization, reports minutiae, then splits
//! the skeleton into ordered ridge paths.
//!
//! ```text
//! cargo run --example thin_and_minutiae
//! ```

use fpbz::raster::BinaryImage;
use fpbz::ridge::{disconnect_at_minutiae, dump_paths, extract_ridges};
use fpbz::skeleton::{find_minutiae, skeletonize, thin};

const SHAPE: [&str; 14] = [
    "..........................",
    ".####################.....",
    ".####################.....",
    ".####################.....",
    "............#######.......",
    "..............#######.....",
    "................########..",
    "................########..",
    "..........................",
    "..######..................",
    "..#################.......",
    "..#################.......",
    "..######..................",
    "..........................",
];

fn main() {
    let img = BinaryImage::from_ascii(&SHAPE);
    println!("input:\n{img:?}\nthin:\n{:?}", thin(&img));
    let skeleton = skeletonize(&img);
    println!("skeletonize:\n{skeleton:?}");

    let minutiae = find_minutiae(&skeleton);
    for m in &minutiae {
        println!("{:?} at ({}, {})", m.kind, m.x, m.y);
    }

    let ridges = extract_ridges(&disconnect_at_minutiae(&skeleton, &minutiae), 2);
    print!("ordered ridges:\n{}", dump_paths(&ridges));
}

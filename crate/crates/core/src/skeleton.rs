//! Two-subiteration checkerboard thinning and crossing-number minutiae.
//!
//! Neighbors of a pixel `p` are numbered `x1..x8` counter-clockwise starting
//! at the east neighbor, with `x9 ≡ x1`:
//!
//! ```text
//! x4 x3 x2
//! x5  p x1
//! x6 x7 x8
//! ```
//!
//! With rows growing downward, "north" is `y - 1`.

use thiserror::Error;

use crate::raster::BinaryImage;

/// `(dx, dy)` offsets of `x1..x8`.
pub const NEIGHBOR_OFFSETS: [(isize, isize); 8] = [
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// The eight neighbor bits of a pixel; bit `i - 1` holds `x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Neighborhood(u8);

impl Neighborhood {
    pub fn from_bits(bits: u8) -> Self {
        Self(bits)
    }

    pub fn from_array(values: [bool; 8]) -> Self {
        Self(
            values
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &v)| acc | (u8::from(v) << i)),
        )
    }

    /// Samples the neighbors of `(x, y)`; outside the image reads as 0.
    pub fn of(img: &BinaryImage, x: usize, y: usize) -> Self {
        let mut bits = 0u8;
        for (i, (dx, dy)) in NEIGHBOR_OFFSETS.iter().enumerate() {
            if img.get_or_zero(x as isize + dx, y as isize + dy) {
                bits |= 1 << i;
            }
        }
        Self(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// `x_i` for a 1-based, cyclic index (`x9 == x1`, `x0 == x8`).
    #[inline]
    pub fn x(self, i: usize) -> bool {
        let idx = (i + 7) % 8;
        self.0 >> idx & 1 == 1
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }
}

/// Hilditch crossing number `X_H(p) = Σ b_i`, where
/// `b_i = 1` iff `x_{2i-1} = 0` and (`x_{2i} = 1` or `x_{2i+1} = 1`).
pub fn hilditch_crossings(n: Neighborhood) -> u32 {
    (1..=4)
        .filter(|&i| !n.x(2 * i - 1) && (n.x(2 * i) || n.x(2 * i + 1)))
        .count() as u32
}

/// Condition G1: `X_H(p) == 1`.
pub fn condition_g1(n: Neighborhood) -> bool {
    hilditch_crossings(n) == 1
}

/// Condition G2: `2 ≤ min(n1, n2) ≤ 3`, with
/// `n1 = Σ x_{2k-1} ∨ x_{2k}` and `n2 = Σ x_{2k} ∨ x_{2k+1}`.
pub fn condition_g2(n: Neighborhood) -> bool {
    let n1 = (1..=4).filter(|&k| n.x(2 * k - 1) || n.x(2 * k)).count();
    let n2 = (1..=4).filter(|&k| n.x(2 * k) || n.x(2 * k + 1)).count();
    (2..=3).contains(&n1.min(n2))
}

/// Condition G3: `(x2 ∨ x3 ∨ ¬x8) ∧ x1 == 0`.
pub fn condition_g3(n: Neighborhood) -> bool {
    !((n.x(2) || n.x(3) || !n.x(8)) && n.x(1))
}

/// Condition G3′: `(x6 ∨ x7 ∨ ¬x4) ∧ x5 == 0`.
///
/// The negated term is taken as `¬x4`, the 180° rotation of `¬x8` in G3.
pub fn condition_g3_prime(n: Neighborhood) -> bool {
    !((n.x(6) || n.x(7) || !n.x(4)) && n.x(5))
}

/// Deletion lookup tables indexed by neighborhood bits, one per subiteration.
fn deletion_tables() -> &'static [[bool; 256]; 2] {
    static TABLES: std::sync::OnceLock<[[bool; 256]; 2]> = std::sync::OnceLock::new();
    TABLES.get_or_init(|| {
        let mut t = [[false; 256]; 2];
        for bits in 0..=255u8 {
            let n = Neighborhood(bits);
            let base = condition_g1(n) && condition_g2(n);
            t[0][bits as usize] = base && condition_g3(n);
            t[1][bits as usize] = base && condition_g3_prime(n);
        }
        t
    })
}

/// True if `p` would be deleted in subiteration 1 (`first = true`) or 2.
pub fn deletable(n: Neighborhood, first: bool) -> bool {
    deletion_tables()[usize::from(!first)][n.0 as usize]
}

/// Runs one subiteration in place on the pixels whose `(x + y) % 2` equals
/// `parity`; all decisions read the pre-pass snapshot. Returns the number of
/// deleted pixels.
fn subiteration(img: &mut BinaryImage, first: bool, parity: usize) -> usize {
    let doomed: Vec<(usize, usize)> = img
        .foreground()
        .filter(|&(x, y)| (x + y) % 2 == parity)
        .filter(|&(x, y)| deletable(Neighborhood::of(img, x, y), first))
        .collect();
    for &(x, y) in &doomed {
        img.set(x, y, false);
    }
    doomed.len()
}

/// Full passes with G3 on subfield `g3_parity` and G3′ on the other, until a
/// pass deletes nothing. Returns the total number of deleted pixels.
fn thin_phase(img: &mut BinaryImage, g3_parity: usize) -> usize {
    let mut total = 0;
    loop {
        let removed = subiteration(img, true, g3_parity) + subiteration(img, false, 1 - g3_parity);
        if removed == 0 {
            return total;
        }
        total += removed;
    }
}

/// Thins to a 1-pixel-wide skeleton, iterating full (two-subiteration)
/// passes until neither subiteration deletes anything.
///
/// Subiteration 1 deletes pixels with `(x + y)` even satisfying G1 ∧ G2 ∧ G3;
/// subiteration 2 deletes pixels with `(x + y)` odd satisfying G1 ∧ G2 ∧ G3′.
pub fn thin(img: &BinaryImage) -> BinaryImage {
    let mut cur = img.clone();
    thin_phase(&mut cur, 0);
    cur
}

/// [`thin`], then alternately the same passes with the subfields swapped (G3
/// on odd pixels, G3′ on even) and the original assignment, until neither
/// deletes anything. Steep strokes, which [`thin`] leaves as two-pixel
/// staircases, come out one pixel wide.
pub fn skeletonize(img: &BinaryImage) -> BinaryImage {
    let mut cur = thin(img);
    loop {
        if thin_phase(&mut cur, 1) == 0 {
            return cur;
        }
        if thin_phase(&mut cur, 0) == 0 {
            return cur;
        }
    }
}

/// Removes side branches of at most `max_len` pixels: walks from every
/// ending (CN = 1) along the skeleton and, if a pixel with CN ≥ 3 is reached
/// within `max_len` steps, deletes the walked pixels. Branch points stay, as
/// do ridges whose far end is another ending. Endings are visited in raster
/// order against the progressively pruned image, and a walk is only deleted
/// when everything it touches outside itself lies next to its branch point,
/// so the component count never changes.
pub fn prune_spurs(img: &BinaryImage, max_len: usize) -> BinaryImage {
    let mut out = img.clone();
    if max_len == 0 {
        return out;
    }
    let endings: Vec<(usize, usize)> = img
        .foreground()
        .filter(|&(x, y)| crossing_number_of(Neighborhood::of(img, x, y)) == 1)
        .collect();
    for (x, y) in endings {
        if !out.get(x, y) || crossing_number_of(Neighborhood::of(&out, x, y)) != 1 {
            continue;
        }
        if let Some(path) = spur_from(&out, x, y, max_len) {
            for (px, py) in path {
                out.set(px, py, false);
            }
        }
    }
    out
}

fn neighbors(img: &BinaryImage, x: usize, y: usize) -> impl Iterator<Item = (usize, usize, bool)> + '_ {
    NEIGHBOR_OFFSETS
        .iter()
        .map(move |&(dx, dy)| (x as isize + dx, y as isize + dy, dx != 0 && dy != 0))
        .filter(|&(nx, ny, _)| img.get_or_zero(nx, ny))
        .map(|(nx, ny, diagonal)| (nx as usize, ny as usize, diagonal))
}

/// The pixels of a removable spur starting at ending `(x, y)`, if any.
fn spur_from(img: &BinaryImage, x: usize, y: usize, max_len: usize) -> Option<Vec<(usize, usize)>> {
    let mut path = vec![(x, y)];
    let (mut cx, mut cy) = (x, y);
    let branch = loop {
        let (nx, ny, _) = neighbors(img, cx, cy)
            .filter(|&(nx, ny, _)| !path.contains(&(nx, ny)))
            .min_by_key(|&(_, _, diagonal)| diagonal)?;
        if crossing_number_of(Neighborhood::of(img, nx, ny)) >= 3 {
            break (nx, ny);
        }
        if path.len() == max_len {
            return None;
        }
        path.push((nx, ny));
        (cx, cy) = (nx, ny);
    };
    let near_branch = |(nx, ny): (usize, usize)| nx.abs_diff(branch.0) <= 1 && ny.abs_diff(branch.1) <= 1;
    let contained = path.iter().all(|&(px, py)| {
        neighbors(img, px, py)
            .map(|(nx, ny, _)| (nx, ny))
            .all(|n| path.contains(&n) || near_branch(n))
    });
    contained.then_some(path)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("pixel ({0}, {1}) is not foreground")]
    NotForeground(usize, usize),
    #[error("pixel ({0}, {1}) is outside the image")]
    OutOfBounds(usize, usize),
}

/// `½ Σ |x_i − x_{i+1}|` over the cyclic neighbor sequence.
pub fn crossing_number_of(n: Neighborhood) -> u32 {
    let transitions = (1..=8).filter(|&i| n.x(i) != n.x(i + 1)).count() as u32;
    transitions / 2
}

pub fn crossing_number(img: &BinaryImage, x: usize, y: usize) -> Result<u32, SkeletonError> {
    if x >= img.width() || y >= img.height() {
        return Err(SkeletonError::OutOfBounds(x, y));
    }
    if !img.get(x, y) {
        return Err(SkeletonError::NotForeground(x, y));
    }
    Ok(crossing_number_of(Neighborhood::of(img, x, y)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinutiaKind {
    Ending,
    Bifurcation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MinutiaPoint {
    pub x: usize,
    pub y: usize,
    pub kind: MinutiaKind,
}

/// Crossing-number minutiae on a thinned image, in row-major order.
/// CN = 1 is an ending and CN ≥ 3 a bifurcation; pixels on the outermost
/// image row/column are skipped.
pub fn find_minutiae(img: &BinaryImage) -> Vec<MinutiaPoint> {
    let (w, h) = (img.width(), img.height());
    img.foreground()
        .filter(|&(x, y)| x > 0 && y > 0 && x + 1 < w && y + 1 < h)
        .filter_map(|(x, y)| {
            let kind = match crossing_number_of(Neighborhood::of(img, x, y)) {
                1 => MinutiaKind::Ending,
                cn if cn >= 3 => MinutiaKind::Bifurcation,
                _ => return None,
            };
            Some(MinutiaPoint { x, y, kind })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nb(values: [u8; 8]) -> Neighborhood {
        Neighborhood::from_array(values.map(|v| v == 1))
    }

    #[test]
    fn neighborhood_numbering_is_counter_clockwise_from_east() {
        let img = BinaryImage::from_ascii(&["...", "..#", "..."]);
        assert!(Neighborhood::of(&img, 1, 1).x(1));
        let img = BinaryImage::from_ascii(&[".#.", "...", "..."]);
        assert!(Neighborhood::of(&img, 1, 1).x(3));
        let img = BinaryImage::from_ascii(&["...", "#..", "..."]);
        assert!(Neighborhood::of(&img, 1, 1).x(5));
        let img = BinaryImage::from_ascii(&["...", "...", ".#."]);
        assert!(Neighborhood::of(&img, 1, 1).x(7));
        let n = nb([1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(n.x(9) && !n.x(0));
    }

    #[test]
    fn g1_examples() {
        assert!(!condition_g1(nb([0; 8])));
        assert!(condition_g1(nb([0, 1, 0, 0, 0, 0, 0, 0])));
        assert!(!condition_g1(nb([1, 0, 1, 0, 1, 0, 1, 0])));
    }

    #[test]
    fn g2_examples() {
        assert!(!condition_g2(nb([0; 8])));
        assert!(!condition_g2(nb([1; 8])));
        assert!(condition_g2(nb([1, 1, 1, 1, 0, 0, 0, 0])));
    }

    #[test]
    fn g3_examples() {
        for bits in 0..=255u8 {
            let n = Neighborhood(bits);
            if !n.x(1) {
                assert!(condition_g3(n));
            }
            if !n.x(5) {
                assert!(condition_g3_prime(n));
            }
        }
        assert!(condition_g3(nb([1, 0, 0, 0, 0, 0, 0, 1])));
        assert!(!condition_g3(nb([1, 1, 0, 0, 0, 0, 0, 0])));
        // 180° rotation maps G3 onto G3'
        assert!(condition_g3_prime(nb([0, 0, 0, 1, 1, 0, 0, 0])));
        assert!(!condition_g3_prime(nb([0, 0, 0, 0, 1, 1, 0, 0])));
    }

    #[test]
    fn thin_trivial_images() {
        let empty = BinaryImage::new(5, 5);
        assert_eq!(thin(&empty), empty);
        let dot = BinaryImage::from_ascii(&["...", ".#.", "..."]);
        assert_eq!(thin(&dot), dot);
    }

    #[test]
    fn thin_bar_to_line() {
        let img = BinaryImage::from_ascii(&[
            "...........",
            ".#########.",
            ".#########.",
            ".#########.",
            "...........",
        ]);
        let out = thin(&img);
        assert!(out.is_subset_of(&img));
        assert!(out.count_ones() >= 5);
        for x in 0..10 {
            for y in 0..4 {
                let block = out.get(x, y) && out.get(x + 1, y) && out.get(x, y + 1) && out.get(x + 1, y + 1);
                assert!(!block, "{out:?}");
            }
        }
    }

    #[test]
    fn crossing_number_examples() {
        let dot = BinaryImage::from_ascii(&["...", ".#.", "..."]);
        assert_eq!(crossing_number(&dot, 1, 1), Ok(0));
        let end = BinaryImage::from_ascii(&["...", ".##", "..."]);
        assert_eq!(crossing_number(&end, 1, 1), Ok(1));
        let y = BinaryImage::from_ascii(&[".#.", ".#.", "#.#"]);
        assert_eq!(crossing_number(&y, 1, 1), Ok(3));
        assert_eq!(crossing_number(&y, 0, 0), Err(SkeletonError::NotForeground(0, 0)));
        assert_eq!(crossing_number(&y, 3, 0), Err(SkeletonError::OutOfBounds(3, 0)));
    }

    #[test]
    fn crossing_sum_is_always_even() {
        for bits in 0..=255u8 {
            let n = Neighborhood(bits);
            let t = (1..=8).filter(|&i| n.x(i) != n.x(i + 1)).count();
            assert_eq!(t % 2, 0);
        }
    }

    #[test]
    fn minutiae_of_line_and_y() {
        let line = BinaryImage::from_ascii(&[".......", ".#####.", "......."]);
        let m = find_minutiae(&thin(&line));
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|p| p.kind == MinutiaKind::Ending));
        assert!(find_minutiae(&BinaryImage::new(4, 4)).is_empty());

        let y = BinaryImage::from_ascii(&[
            ".........",
            "....#....",
            "....#....",
            "....#....",
            "....#....",
            "...#.#...",
            "..#...#..",
            ".#.....#.",
            ".........",
        ]);
        assert_eq!(thin(&y), y);
        let m = find_minutiae(&y);
        let endings = m.iter().filter(|p| p.kind == MinutiaKind::Ending).count();
        let forks: Vec<_> = m.iter().filter(|p| p.kind == MinutiaKind::Bifurcation).collect();
        assert_eq!(endings, 3);
        assert_eq!(forks.len(), 1);
        assert_eq!((forks[0].x, forks[0].y), (4, 4));
    }

    #[test]
    fn minutiae_skip_border() {
        let img = BinaryImage::from_ascii(&["###", "...", "..."]);
        assert!(find_minutiae(&img).is_empty());
    }

    fn bar(width: usize, height: usize) -> BinaryImage {
        let mut img = BinaryImage::new(width + 4, height + 2);
        for y in 1..=height {
            for x in 2..2 + width {
                img.set(x, y, true);
            }
        }
        img
    }

    #[test]
    fn thin_leaves_staircase_on_vertical_bar() {
        let t = thin(&bar(3, 12));
        let widest = (0..14)
            .map(|y| (0..7).filter(|&x| t.get(x, y)).count())
            .max()
            .unwrap();
        assert_eq!(widest, 2);
    }

    #[test]
    fn skeletonize_vertical_and_horizontal_bars() {
        for (w, h) in [(3, 12), (4, 15), (12, 3)] {
            let s = skeletonize(&bar(w, h));
            let (long, across) = if h > w { (h, w) } else { (w, h) };
            // away from the ends each cross-section holds exactly one pixel
            for t in 4..long - 3 {
                let hits = (0..across + 4)
                    .filter(|&c| {
                        let (x, y) = if h > w { (c, t + 1) } else { (t + 2, c) };
                        x < s.width() && y < s.height() && s.get(x, y)
                    })
                    .count();
                assert_eq!(hits, 1, "{w}x{h} at {t}\n{s:?}");
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn skeletonize_keeps_topology(bits in proptest::collection::vec(proptest::bool::ANY, 14 * 14)) {
            let img = BinaryImage::from_bits(14, 14, bits).unwrap();
            let s = skeletonize(&img);
            proptest::prop_assert!(s.is_subset_of(&img));
            proptest::prop_assert!(s.count_ones() <= thin(&img).count_ones());
            proptest::prop_assert_eq!(thin(&s), s.clone());
            proptest::prop_assert_eq!(skeletonize(&s), s.clone());
            proptest::prop_assert_eq!(
                crate::ridge::label_components(&img, 1).len(),
                crate::ridge::label_components(&s, 1).len()
            );
        }
    }

    #[test]
    fn prune_removes_short_side_branches_only() {
        let img = BinaryImage::from_ascii(&[
            "................",
            "......#.........",
            "......#.........",
            ".##############.",
            "..........#.....",
            "..........#.....",
            "..........#.....",
            "..........#.....",
            "................",
        ]);
        let pruned = prune_spurs(&img, 3);
        let expected = BinaryImage::from_ascii(&[
            "................",
            "................",
            "................",
            ".##############.",
            "..........#.....",
            "..........#.....",
            "..........#.....",
            "..........#.....",
            "................",
        ]);
        assert_eq!(pruned, expected);
        assert_eq!(prune_spurs(&img, 0), img);
        // a bare line has no branch point, so nothing goes
        let line = BinaryImage::from_ascii(&["....", ".##.", "...."]);
        assert_eq!(prune_spurs(&line, 5), line);
    }

    proptest::proptest! {
        #[test]
        fn prune_keeps_components(bits in proptest::collection::vec(proptest::bool::ANY, 14 * 14), len in 0usize..5) {
            let skel = skeletonize(&BinaryImage::from_bits(14, 14, bits).unwrap());
            let pruned = prune_spurs(&skel, len);
            proptest::prop_assert!(pruned.is_subset_of(&skel));
            proptest::prop_assert_eq!(
                crate::ridge::label_components(&skel, 1).len(),
                crate::ridge::label_components(&pruned, 1).len()
            );
        }
    }
}

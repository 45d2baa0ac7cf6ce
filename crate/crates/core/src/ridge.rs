//! Splitting a skeleton into individual ridges and ordering their pixels.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::raster::BinaryImage;
use crate::skeleton::{MinutiaKind, MinutiaPoint};

/// Integer pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixel {
    pub x: usize,
    pub y: usize,
}

impl Pixel {
    pub fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    /// Chebyshev distance 1.
    pub fn is_adjacent(self, other: Pixel) -> bool {
        self != other && self.x.abs_diff(other.x) <= 1 && self.y.abs_diff(other.y) <= 1
    }

    fn is_4_adjacent(self, other: Pixel) -> bool {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y) == 1
    }

    fn row_major_key(self) -> (usize, usize) {
        (self.y, self.x)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RidgeError {
    #[error("ridge needs at least 2 pixels, got {0}")]
    TooShort(usize),
    #[error("consecutive points {0:?} and {1:?} are not 8-adjacent")]
    NotAdjacent(Pixel, Pixel),
    #[error("point {0:?} repeats")]
    Repeated(Pixel),
    #[error("component is branched: {unvisited} pixels not reachable by a single walk")]
    Branched { unvisited: usize },
}

/// Ordered pixel sequence of one ridge: at least two points, consecutive
/// points 8-adjacent, no point repeated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RidgePath {
    points: Vec<Pixel>,
}

impl RidgePath {
    pub fn new(points: Vec<Pixel>) -> Result<Self, RidgeError> {
        if points.len() < 2 {
            return Err(RidgeError::TooShort(points.len()));
        }
        for pair in points.windows(2) {
            if !pair[0].is_adjacent(pair[1]) {
                return Err(RidgeError::NotAdjacent(pair[0], pair[1]));
            }
        }
        let mut seen = HashSet::with_capacity(points.len());
        for &p in &points {
            if !seen.insert(p) {
                return Err(RidgeError::Repeated(p));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Pixel] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Pixel {
        self.points[0]
    }

    pub fn last(&self) -> Pixel {
        self.points[self.points.len() - 1]
    }
}

/// Clears every bifurcation pixel; endings are left in place.
pub fn disconnect_at_minutiae(img: &BinaryImage, minutiae: &[MinutiaPoint]) -> BinaryImage {
    let mut out = img.clone();
    for m in minutiae.iter().filter(|m| m.kind == MinutiaKind::Bifurcation) {
        out.set(m.x, m.y, false);
    }
    out
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// 8-connected components in order of their first row-major pixel; each
/// component's pixels are row-major sorted. Components with fewer than
/// `min_pixels` pixels are dropped.
pub fn label_components(img: &BinaryImage, min_pixels: usize) -> Vec<Vec<Pixel>> {
    let (w, h) = (img.width(), img.height());
    let mut uf = UnionFind::new(w * h);
    for y in 0..h {
        for x in 0..w {
            if !img.get(x, y) {
                continue;
            }
            let i = y * w + x;
            // Already-scanned half of the 8-neighborhood: W, NW, N, NE.
            if x > 0 && img.get(x - 1, y) {
                uf.union(i, i - 1);
            }
            if y > 0 {
                if x > 0 && img.get(x - 1, y - 1) {
                    uf.union(i, i - w - 1);
                }
                if img.get(x, y - 1) {
                    uf.union(i, i - w);
                }
                if x + 1 < w && img.get(x + 1, y - 1) {
                    uf.union(i, i - w + 1);
                }
            }
        }
    }

    let mut slot_of_root = vec![usize::MAX; w * h];
    let mut components: Vec<Vec<Pixel>> = Vec::new();
    for (x, y) in img.foreground() {
        let root = uf.find(y * w + x);
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = components.len();
            components.push(Vec::new());
        }
        components[slot_of_root[root]].push(Pixel::new(x, y));
    }
    components.retain(|c| c.len() >= min_pixels);
    components
}

/// Greedy neighbor-to-neighbor walk over `pixels`.
///
/// Starts at the row-major-first endpoint (exactly one neighbor in the set),
/// or at the row-major-first pixel when there is none, which cuts a closed
/// loop there. At each step the next pixel is the unvisited neighbor that is
/// 4-adjacent (so staircase corners are not stranded), then turns least
/// relative to the previous step, then comes first in row-major order.
fn walk(pixels: &[Pixel]) -> Vec<Pixel> {
    let set: HashSet<Pixel> = pixels.iter().copied().collect();
    let neighbors = |p: Pixel| -> Vec<Pixel> {
        let mut out = Vec::with_capacity(8);
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (nx, ny) = (p.x as isize + dx, p.y as isize + dy);
                if nx < 0 || ny < 0 {
                    continue;
                }
                let q = Pixel::new(nx as usize, ny as usize);
                if set.contains(&q) {
                    out.push(q);
                }
            }
        }
        out
    };

    let mut sorted: Vec<Pixel> = pixels.to_vec();
    sorted.sort_by_key(|p| p.row_major_key());
    let start = sorted
        .iter()
        .copied()
        .find(|&p| neighbors(p).len() == 1)
        .unwrap_or(sorted[0]);

    let mut visited = HashSet::with_capacity(pixels.len());
    visited.insert(start);
    let mut path = vec![start];
    let mut heading: Option<(isize, isize)> = None;
    let mut cur = start;
    loop {
        let next = neighbors(cur)
            .into_iter()
            .filter(|q| !visited.contains(q))
            .min_by(|&a, &b| {
                let key = |q: Pixel| {
                    let step = (q.x as isize - cur.x as isize, q.y as isize - cur.y as isize);
                    let turn = heading.map_or(0.0, |h| turn_angle(h, step));
                    (!cur.is_4_adjacent(q), turn, q.row_major_key())
                };
                let (ka, kb) = (key(a), key(b));
                ka.0.cmp(&kb.0)
                    .then(ka.1.total_cmp(&kb.1))
                    .then(ka.2.cmp(&kb.2))
            });
        let Some(next) = next else { break };
        heading = Some((next.x as isize - cur.x as isize, next.y as isize - cur.y as isize));
        visited.insert(next);
        path.push(next);
        cur = next;
    }
    path
}

fn turn_angle(a: (isize, isize), b: (isize, isize)) -> f64 {
    let (ax, ay, bx, by) = (a.0 as f64, a.1 as f64, b.0 as f64, b.1 as f64);
    (ax * by - ay * bx).atan2(ax * bx + ay * by).abs()
}

/// Orders a simple open (or closed) 1-pixel-wide curve from one end to the
/// other. Fails when a single walk cannot visit every pixel.
pub fn order_ridge_pixels(component: &[Pixel]) -> Result<RidgePath, RidgeError> {
    if component.len() < 2 {
        return Err(RidgeError::TooShort(component.len()));
    }
    let path = walk(component);
    if path.len() != component.len() {
        return Err(RidgeError::Branched {
            unvisited: component.len() - path.len(),
        });
    }
    RidgePath::new(path)
}

/// Covers a possibly branched component with paths: walk once, then recurse
/// into the 8-connected pieces of whatever the walk missed. Paths shorter than
/// `min_pixels` (and always shorter than 2) are dropped.
pub fn trace_paths(component: &[Pixel], min_pixels: usize) -> Vec<RidgePath> {
    let mut out = Vec::new();
    let mut pending = vec![component.to_vec()];
    while let Some(piece) = pending.pop() {
        if piece.len() < min_pixels.max(2) {
            continue;
        }
        let path = walk(&piece);
        let visited: HashSet<Pixel> = path.iter().copied().collect();
        let rest: Vec<Pixel> = piece.into_iter().filter(|p| !visited.contains(p)).collect();
        if path.len() >= min_pixels.max(2) {
            out.push(RidgePath::new(path).expect("walk yields adjacent distinct pixels"));
        }
        if !rest.is_empty() {
            let mut sub = split_components(&rest);
            sub.reverse();
            pending.extend(sub);
        }
    }
    out
}

fn split_components(pixels: &[Pixel]) -> Vec<Vec<Pixel>> {
    let max_x = pixels.iter().map(|p| p.x).max().unwrap_or(0);
    let max_y = pixels.iter().map(|p| p.y).max().unwrap_or(0);
    let mut img = BinaryImage::new(max_x + 1, max_y + 1);
    for p in pixels {
        img.set(p.x, p.y, true);
    }
    label_components(&img, 1)
}

/// Labels, then traces every component of a disconnected skeleton.
pub fn extract_ridges(img: &BinaryImage, min_pixels: usize) -> Vec<RidgePath> {
    label_components(img, min_pixels)
        .iter()
        .flat_map(|c| trace_paths(c, min_pixels))
        .collect()
}

/// One line per ridge: `id: (x,y) (x,y) ...`.
pub fn dump_paths(paths: &[RidgePath]) -> String {
    let mut s = String::new();
    for (id, path) in paths.iter().enumerate() {
        let _ = write!(s, "{id}:");
        for p in path.points() {
            let _ = write!(s, " ({},{})", p.x, p.y);
        }
        s.push('\n');
    }
    s
}

/// Renders the paths' pixels into a `width × height` image.
pub fn paths_to_image(paths: &[RidgePath], width: usize, height: usize) -> BinaryImage {
    let mut img = BinaryImage::new(width, height);
    for p in paths.iter().flat_map(|r| r.points()) {
        if p.x < width && p.y < height {
            img.set(p.x, p.y, true);
        }
    }
    img
}

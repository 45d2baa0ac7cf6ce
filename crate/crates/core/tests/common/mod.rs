//! Independent reference implementations used as test oracles. Nothing here
//! calls into the code path it checks.

#![allow(dead_code)]

use std::collections::VecDeque;

use fpbz::bezier::{CubicBezier, Point2};
use fpbz::raster::BinaryImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_binary(rng: &mut ChaCha8Rng, w: usize, h: usize, density: f64) -> BinaryImage {
    let bits = (0..w * h).map(|_| rng.random_bool(density)).collect();
    BinaryImage::from_bits(w, h, bits).unwrap()
}

/// Neighbor values as `x[1..=8]` (index 0 unused, `x[9]` = `x[1]`), east
/// first, counter-clockwise, rows growing downward.
pub type Ring = [u8; 10];

pub fn ring_from_bits(bits: u8) -> Ring {
    let mut x = [0u8; 10];
    for i in 1..=8 {
        x[i] = (bits >> (i - 1)) & 1;
    }
    x[9] = x[1];
    x
}

pub fn ring_at(g: &[Vec<u8>], x: usize, y: usize) -> Ring {
    let at = |dx: i64, dy: i64| -> u8 {
        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
        if ny < 0 || nx < 0 || ny as usize >= g.len() || nx as usize >= g[0].len() {
            0
        } else {
            g[ny as usize][nx as usize]
        }
    };
    let east = at(1, 0);
    let north_east = at(1, -1);
    let north = at(0, -1);
    let north_west = at(-1, -1);
    let west = at(-1, 0);
    let south_west = at(-1, 1);
    let south = at(0, 1);
    let south_east = at(1, 1);
    [
        0, east, north_east, north, north_west, west, south_west, south, south_east, east,
    ]
}

pub fn g1(x: &Ring) -> bool {
    let b = |i: usize| -> u8 {
        if x[2 * i - 1] == 0 && (x[2 * i] == 1 || x[2 * i + 1] == 1) {
            1
        } else {
            0
        }
    };
    b(1) + b(2) + b(3) + b(4) == 1
}

pub fn g2(x: &Ring) -> bool {
    let n1: u8 = (x[1] | x[2]) + (x[3] | x[4]) + (x[5] | x[6]) + (x[7] | x[8]);
    let n2: u8 = (x[2] | x[3]) + (x[4] | x[5]) + (x[6] | x[7]) + (x[8] | x[9]);
    let m = n1.min(n2);
    m >= 2 && m <= 3
}

pub fn g3(x: &Ring) -> bool {
    ((x[2] | x[3] | (1 - x[8])) & x[1]) == 0
}

pub fn g3_prime(x: &Ring) -> bool {
    ((x[6] | x[7] | (1 - x[4])) & x[5]) == 0
}

/// Straight-line thinning: re-evaluates the conditions for every pixel on
/// every pass against a copy of the grid taken before the pass.
pub fn oracle_thin(img: &BinaryImage) -> BinaryImage {
    let (w, h) = (img.width(), img.height());
    let mut g: Vec<Vec<u8>> = (0..h)
        .map(|y| (0..w).map(|x| u8::from(img.get(x, y))).collect())
        .collect();
    loop {
        let mut changed = false;
        for pass in 0..2 {
            let snapshot = g.clone();
            for y in 0..h {
                for x in 0..w {
                    if snapshot[y][x] == 0 || (x + y) % 2 != pass {
                        continue;
                    }
                    let r = ring_at(&snapshot, x, y);
                    let third = if pass == 0 { g3(&r) } else { g3_prime(&r) };
                    if g1(&r) && g2(&r) && third {
                        g[y][x] = 0;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let bits = g.into_iter().flatten().map(|v| v == 1).collect();
    BinaryImage::from_bits(w, h, bits).unwrap()
}

/// Breadth-first flood fill; returns a label per pixel (`usize::MAX` for
/// background) and the component count.
pub fn flood_fill_labels(img: &BinaryImage) -> (Vec<usize>, usize) {
    let (w, h) = (img.width(), img.height());
    let mut label = vec![usize::MAX; w * h];
    let mut next = 0;
    for start in 0..w * h {
        if !img.bits()[start] || label[start] != usize::MAX {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        label[start] = next;
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if img.bits()[j] && label[j] == usize::MAX {
                        label[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
        next += 1;
    }
    (label, next)
}

pub fn component_count(img: &BinaryImage) -> usize {
    flood_fill_labels(img).1
}

pub fn has_full_2x2(img: &BinaryImage) -> bool {
    (0..img.height().saturating_sub(1)).any(|y| {
        (0..img.width().saturating_sub(1)).any(|x| {
            img.get(x, y) && img.get(x + 1, y) && img.get(x, y + 1) && img.get(x + 1, y + 1)
        })
    })
}

/// Three rounds of linear interpolation.
pub fn lerp_eval(c: &CubicBezier, u: f64) -> Point2 {
    let l = |a: Point2, b: Point2| Point2::new(a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u);
    let (a, b, d) = (l(c.p0, c.p1), l(c.p1, c.p2), l(c.p2, c.p3));
    let (e, f) = (l(a, b), l(b, d));
    l(e, f)
}

/// Convex hull by monotone chain, counter-clockwise, collinear points dropped.
pub fn convex_hull(mut pts: Vec<Point2>) -> Vec<Point2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Point2, a: Point2, b: Point2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = Point2::new(b.x - a.x, b.y - a.y);
    let len2 = ab.x * ab.x + ab.y * ab.y;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0)
    };
    (p.x - a.x - t * ab.x).hypot(p.y - a.y - t * ab.y)
}

/// How far `p` lies outside the hull (0 when inside).
pub fn outside_hull(hull: &[Point2], p: Point2) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (p.x - hull[0].x).hypot(p.y - hull[0].y),
        2 => segment_distance(p, hull[0], hull[1]),
        n => {
            let inside = (0..n).all(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) >= 0.0
            });
            if inside {
                0.0
            } else {
                (0..n)
                    .map(|i| segment_distance(p, hull[i], hull[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// `count` points on `c` evenly spaced in arc length, each exactly on the
/// curve (parameter found by bisection on a dense cumulative-length table).
pub fn arc_length_samples(c: &CubicBezier, count: usize) -> Vec<Point2> {
    const DENSE: usize = 20_000;
    let mut cum = vec![0.0; DENSE + 1];
    let mut prev = lerp_eval(c, 0.0);
    for i in 1..=DENSE {
        let p = lerp_eval(c, i as f64 / DENSE as f64);
        cum[i] = cum[i - 1] + (p.x - prev.x).hypot(p.y - prev.y);
        prev = p;
    }
    let total = cum[DENSE];
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let target = total * k as f64 / (count - 1) as f64;
        let j = cum.partition_point(|&v| v < target).clamp(1, DENSE);
        let frac = if cum[j] > cum[j - 1] {
            (target - cum[j - 1]) / (cum[j] - cum[j - 1])
        } else {
            0.0
        };
        let u = ((j - 1) as f64 + frac) / DENSE as f64;
        out.push(c.point_at(u.clamp(0.0, 1.0)));
    }
    out[0] = c.p0;
    out[count - 1] = c.p3;
    out
}

/// Integer line through both endpoints (DDA with round-half-up), the
/// reference raster of a straight segment.
pub fn line_pixels(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<(i64, i64)> {
    let n = (x1 - x0).abs().max((y1 - y0).abs());
    if n == 0 {
        return vec![(x0, y0)];
    }
    (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            (
                (x0 as f64 + t * (x1 - x0) as f64 + 0.5).floor() as i64,
                (y0 as f64 + t * (y1 - y0) as f64 + 0.5).floor() as i64,
            )
        })
        .collect()
}

/// Direct 2-D DFT of a square block, `(re, im)` per bin.
pub fn dft2(block: &[f64], n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n * n];
    for v in 0..n {
        for u in 0..n {
            let (mut re, mut im) = (0.0, 0.0);
            for y in 0..n {
                for x in 0..n {
                    let a = -2.0 * std::f64::consts::PI * ((u * x + v * y) as f64) / n as f64;
                    re += block[y * n + x] * a.cos();
                    im += block[y * n + x] * a.sin();
                }
            }
            out[v * n + u] = (re, im);
        }
    }
    out
}

//! Bridson's Poisson-disk sampler on an axis-aligned box.

use rand::Rng;

use crate::geometry::Point2;

/// Candidate draws per active sample before it is retired.
pub const BRIDSON_ATTEMPTS: usize = 30;

/// Blue-noise sample of the closed box `[lo, hi]` with pairwise distance at
/// least `r`.
///
/// `seeds` are inserted first and kept verbatim (they must already respect
/// the distance bound among themselves); the sampler then grows from them
/// and from one random starting point. Output order is generation order.
pub fn poisson_disk<R: Rng>(
    rng: &mut R,
    lo: Point2,
    hi: Point2,
    r: f64,
    seeds: &[Point2],
    attempts: usize,
) -> Vec<Point2> {
    let w = hi.x - lo.x;
    let hgt = hi.y - lo.y;
    if !(w >= 0.0 && hgt >= 0.0 && r > 0.0) {
        return Vec::new();
    }
    let cell = r / std::f64::consts::SQRT_2;
    let nx = ((w / cell).ceil() as usize).max(1);
    let ny = ((hgt / cell).ceil() as usize).max(1);
    let mut grid: Vec<u32> = vec![u32::MAX; nx * ny];
    let cell_of = |p: Point2| -> (usize, usize) {
        let i = (((p.x - lo.x) / cell) as usize).min(nx - 1);
        let j = (((p.y - lo.y) / cell) as usize).min(ny - 1);
        (i, j)
    };

    let mut pts: Vec<Point2> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let r2 = r * r;

    let fits = |p: Point2, pts: &[Point2], grid: &[u32]| -> bool {
        let (ci, cj) = cell_of(p);
        let i0 = ci.saturating_sub(2);
        let j0 = cj.saturating_sub(2);
        for j in j0..(cj + 3).min(ny) {
            for i in i0..(ci + 3).min(nx) {
                let k = grid[j * nx + i];
                if k != u32::MAX {
                    let q = pts[k as usize];
                    let d = p - q;
                    if d.dot(d) < r2 {
                        return false;
                    }
                }
            }
        }
        true
    };

    for &s in seeds {
        let (i, j) = cell_of(s);
        grid[j * nx + i] = pts.len() as u32;
        active.push(pts.len());
        pts.push(s);
    }
    let first = Point2::new(lo.x + rng.random::<f64>() * w, lo.y + rng.random::<f64>() * hgt);
    if fits(first, &pts, &grid) {
        let (i, j) = cell_of(first);
        grid[j * nx + i] = pts.len() as u32;
        active.push(pts.len());
        pts.push(first);
    }

    while !active.is_empty() {
        let slot = rng.random_range(0..active.len());
        let base = pts[active[slot]];
        let mut found = false;
        for _ in 0..attempts {
            // Uniform in the annulus r <= |d| <= 2r.
            let rad = (r2 * (1.0 + 3.0 * rng.random::<f64>())).sqrt();
            let ang = std::f64::consts::TAU * rng.random::<f64>();
            let p = Point2::new(base.x + rad * ang.cos(), base.y + rad * ang.sin());
            if p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y {
                continue;
            }
            if fits(p, &pts, &grid) {
                let (i, j) = cell_of(p);
                grid[j * nx + i] = pts.len() as u32;
                active.push(pts.len());
                pts.push(p);
                found = true;
                break;
            }
        }
        if !found {
            active.swap_remove(slot);
        }
    }
    pts
}

//! Bucket-grid index for nearest-neighbour queries and clipped Voronoi
//! cell areas over a point pattern.

use std::f64::consts::PI;

use crate::model::Point2;

pub struct GridIndex {
    points: Vec<Point2>,
    min_x: f64,
    min_y: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl GridIndex {
    /// Index `points` with roughly `per_cell` points per bucket.
    pub fn new(points: Vec<Point2>, per_cell: f64) -> Self {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &points {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        if points.is_empty() {
            (min_x, min_y, max_x, max_y) = (0.0, 0.0, 1.0, 1.0);
        }
        let w = (max_x - min_x).max(1e-9);
        let h = (max_y - min_y).max(1e-9);
        let n = points.len().max(1) as f64;
        let cell = (w * h * per_cell / n).sqrt().max(1e-9);
        let nx = ((w / cell).floor() as usize + 1).min(4096);
        let ny = ((h / cell).floor() as usize + 1).min(4096);
        let cell = (w / nx as f64).max(h / ny as f64).max(cell) * (1.0 + 1e-12);

        let mut counts = vec![0u32; nx * ny + 1];
        let keys: Vec<usize> = points
            .iter()
            .map(|p| {
                let cx = (((p.x - min_x) / cell) as usize).min(nx - 1);
                let cy = (((p.y - min_y) / cell) as usize).min(ny - 1);
                cy * nx + cx
            })
            .collect();
        for &k in &keys {
            counts[k + 1] += 1;
        }
        for i in 0..nx * ny {
            counts[i + 1] += counts[i];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut items = vec![0u32; points.len()];
        for (i, &k) in keys.iter().enumerate() {
            items[fill[k] as usize] = i as u32;
            fill[k] += 1;
        }
        Self {
            points,
            min_x,
            min_y,
            cell,
            nx,
            ny,
            starts,
            items,
        }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn cell_of(&self, p: Point2) -> (isize, isize) {
        let cx = ((p.x - self.min_x) / self.cell).floor() as isize;
        let cy = ((p.y - self.min_y) / self.cell).floor() as isize;
        (
            cx.clamp(0, self.nx as isize - 1),
            cy.clamp(0, self.ny as isize - 1),
        )
    }

    fn bucket(&self, cx: isize, cy: isize) -> &[u32] {
        let k = cy as usize * self.nx + cx as usize;
        &self.items[self.starts[k] as usize..self.starts[k + 1] as usize]
    }

    /// Visit every point in the buckets at Chebyshev distance `ring` from
    /// bucket `(cx, cy)`. Returns false once the ring lies fully outside the grid.
    fn for_ring(&self, cx: isize, cy: isize, ring: isize, mut visit: impl FnMut(usize)) -> bool {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        if cx - ring < 0 && cy - ring < 0 && cx + ring >= nx && cy + ring >= ny {
            return false;
        }
        let mut emit = |x: isize, y: isize| {
            if x >= 0 && y >= 0 && x < nx && y < ny {
                for &i in self.bucket(x, y) {
                    visit(i as usize);
                }
            }
        };
        if ring == 0 {
            emit(cx, cy);
            return true;
        }
        for x in cx - ring..=cx + ring {
            emit(x, cy - ring);
            emit(x, cy + ring);
        }
        for y in cy - ring + 1..cy + ring {
            emit(cx - ring, y);
            emit(cx + ring, y);
        }
        true
    }

    /// Nearest indexed point to `p`, optionally skipping one index. Exact
    /// distance ties resolve to the lowest index.
    pub fn nearest(&self, p: Point2, exclude: Option<usize>) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let (cx, cy) = self.cell_of(p);
        let mut best: Option<(f64, usize)> = None;
        let mut ring = 0isize;
        loop {
            let inside = self.for_ring(cx, cy, ring, |i| {
                if Some(i) == exclude {
                    return;
                }
                let d2 = p.dist_sq(self.points[i]);
                match best {
                    Some((bd, bi)) if d2 > bd || (d2 == bd && i > bi) => {}
                    _ => best = Some((d2, i)),
                }
            });
            if let Some((bd, _)) = best {
                let reach = ring as f64 * self.cell;
                if bd < reach * reach {
                    break;
                }
            }
            if !inside {
                break;
            }
            ring += 1;
        }
        best.map(|(d2, i)| (i, d2.sqrt()))
    }

    /// Area of the Voronoi cell of point `site` intersected with the disk
    /// of radius `clip_radius` centered at the origin.
    pub fn cell_area(&self, site: usize, clip_radius: f64, scratch: &mut ClipScratch) -> f64 {
        let s = self.points[site];
        let r = clip_radius;
        scratch.poly.clear();
        scratch.poly.extend_from_slice(&[
            Point2::new(-r, -r),
            Point2::new(r, -r),
            Point2::new(r, r),
            Point2::new(-r, r),
        ]);
        let (cx, cy) = self.cell_of(s);
        let mut ring = 0isize;
        loop {
            let mut neighbours = std::mem::take(&mut scratch.neighbours);
            neighbours.clear();
            let inside = self.for_ring(cx, cy, ring, |i| {
                if i != site {
                    neighbours.push(i);
                }
            });
            for &i in &neighbours {
                let q = self.points[i];
                let n = Point2::new(q.x - s.x, q.y - s.y);
                let mid = Point2::new(0.5 * (q.x + s.x), 0.5 * (q.y + s.y));
                scratch.clip(n, n.x * mid.x + n.y * mid.y);
                if scratch.poly.is_empty() {
                    scratch.neighbours = neighbours;
                    return 0.0;
                }
            }
            scratch.neighbours = neighbours;
            if !inside {
                break;
            }
            let max_r2 = scratch
                .poly
                .iter()
                .map(|v| v.dist_sq(s))
                .fold(0.0, f64::max);
            let reach = ring as f64 * self.cell;
            if reach * reach >= 4.0 * max_r2 {
                break;
            }
            ring += 1;
        }
        if scratch.poly.iter().any(|v| v.norm_sq() > r * r) {
            // Polygon with the same area as the disk.
            let m = DISK_SIDES as f64;
            let apothem = r * (PI / (m * (PI / m).tan())).sqrt();
            for k in 0..DISK_SIDES {
                let (sn, cs) = (2.0 * PI * k as f64 / m).sin_cos();
                scratch.clip(Point2::new(cs, sn), apothem);
                if scratch.poly.is_empty() {
                    return 0.0;
                }
            }
        }
        polygon_area(&scratch.poly)
    }
}

const DISK_SIDES: usize = 128;

/// Reusable buffers for half-plane clipping.
#[derive(Debug, Default)]
pub struct ClipScratch {
    poly: Vec<Point2>,
    out: Vec<Point2>,
    neighbours: Vec<usize>,
}

impl ClipScratch {
    /// Keep the part of the polygon with `n . x <= c`.
    fn clip(&mut self, n: Point2, c: f64) {
        let poly = &self.poly;
        if poly.iter().all(|v| n.x * v.x + n.y * v.y <= c) {
            return;
        }
        self.out.clear();
        let len = poly.len();
        for i in 0..len {
            let a = poly[i];
            let b = poly[(i + 1) % len];
            let fa = n.x * a.x + n.y * a.y - c;
            let fb = n.x * b.x + n.y * b.y - c;
            if fa <= 0.0 {
                self.out.push(a);
            }
            if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
                let t = fa / (fa - fb);
                self.out
                    .push(Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
            }
        }
        std::mem::swap(&mut self.poly, &mut self.out);
        if self.poly.len() < 3 {
            self.poly.clear();
        }
    }
}

fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    let mut twice = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    0.5 * twice.abs()
}

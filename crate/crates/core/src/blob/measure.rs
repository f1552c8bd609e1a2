//! Geometry of labeled components and the three shape metrics.
//!
//! Pixel `(x, y)` is treated as the lattice point at its center. Moments and
//! hulls are accumulated in integers so that translating a blob leaves every
//! shape metric bit-identical.

use std::f64::consts::{PI, SQRT_2};

use crate::blob::labeling::ComponentLabels;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub min_x: usize,
    pub min_y: usize,
    pub max_x: usize,
    pub max_y: usize,
}

/// Central second moments (variances and covariance of pixel centers).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondMoments {
    pub mxx: f64,
    pub myy: f64,
    pub mxy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlobMeasurements {
    /// Pixel count.
    pub area: usize,
    /// Length of the 8-connected outer contour through boundary pixel
    /// centers, axis steps counting 1 and diagonal steps √2.
    pub perimeter: f64,
    pub centroid: (f64, f64),
    /// Number of pixel centers inside or on the convex hull of the blob's
    /// pixel centers, i.e. the pixel area of the filled convex hull.
    pub hull_area: f64,
    /// Euclidean area of the convex polygon spanned by the pixel centers;
    /// zero exactly when the blob is collinear.
    pub center_hull_area: f64,
    pub second_moments: SecondMoments,
    pub bbox: BoundingBox,
}

pub fn circularity(m: &BlobMeasurements) -> Result<f64> {
    circularity_of(m.area as f64, m.perimeter)
}

/// `4π·area / perimeter²`.
pub fn circularity_of(area: f64, perimeter: f64) -> Result<f64> {
    if perimeter <= 0.0 {
        return Err(Error::DegenerateBlob("zero perimeter"));
    }
    Ok(4.0 * PI * area / (perimeter * perimeter))
}

pub fn convexity(m: &BlobMeasurements) -> Result<f64> {
    if m.center_hull_area <= 0.0 || m.hull_area <= 0.0 {
        return Err(Error::DegenerateBlob("collinear pixels have no hull area"));
    }
    Ok(m.area as f64 / m.hull_area)
}

/// `λmin / λmax` of the second-moment matrix.
pub fn inertia_ratio(m: &BlobMeasurements) -> Result<f64> {
    if m.area < 2 {
        return Err(Error::DegenerateBlob("inertia needs at least two pixels"));
    }
    let SecondMoments {
        mxx: a,
        myy: b,
        mxy: c,
    } = m.second_moments;
    let mean = (a + b) / 2.0;
    let spread = (((a - b) / 2.0).powi(2) + c * c).sqrt();
    let (lo, hi) = (mean - spread, mean + spread);
    if hi <= 0.0 {
        return Err(Error::DegenerateBlob("zero second moments"));
    }
    Ok((lo / hi).clamp(0.0, 1.0))
}

impl BlobMeasurements {
    pub fn circularity(&self) -> Result<f64> {
        circularity(self)
    }

    pub fn convexity(&self) -> Result<f64> {
        convexity(self)
    }

    pub fn inertia_ratio(&self) -> Result<f64> {
        inertia_ratio(self)
    }
}

#[derive(Debug, Clone)]
struct Accumulator {
    area: i64,
    sx: i64,
    sy: i64,
    sxx: i64,
    syy: i64,
    sxy: i64,
    first: (usize, usize),
    bbox: BoundingBox,
    // (row, leftmost x, rightmost x), rows ascending.
    rows: Vec<(usize, usize, usize)>,
}

impl Accumulator {
    fn new(x: usize, y: usize) -> Self {
        Self {
            area: 0,
            sx: 0,
            sy: 0,
            sxx: 0,
            syy: 0,
            sxy: 0,
            first: (x, y),
            bbox: BoundingBox {
                min_x: x,
                min_y: y,
                max_x: x,
                max_y: y,
            },
            rows: Vec::new(),
        }
    }

    fn push(&mut self, x: usize, y: usize) {
        let (xi, yi) = (x as i64, y as i64);
        self.area += 1;
        self.sx += xi;
        self.sy += yi;
        self.sxx += xi * xi;
        self.syy += yi * yi;
        self.sxy += xi * yi;
        self.bbox.min_x = self.bbox.min_x.min(x);
        self.bbox.max_x = self.bbox.max_x.max(x);
        self.bbox.max_y = self.bbox.max_y.max(y);
        match self.rows.last_mut() {
            Some(row) if row.0 == y => row.2 = x,
            _ => self.rows.push((y, x, x)),
        }
    }

    fn finish(self, labels: &ComponentLabels, id: u32) -> BlobMeasurements {
        let n = self.area as i128;
        // Sums are taken relative to the bounding-box corner, so the
        // results do not depend on where the blob sits in the frame.
        let (ox, oy) = (self.bbox.min_x as i128, self.bbox.min_y as i128);
        let sx = self.sx as i128 - n * ox;
        let sy = self.sy as i128 - n * oy;
        let sxx = self.sxx as i128 - 2 * ox * self.sx as i128 + n * ox * ox;
        let syy = self.syy as i128 - 2 * oy * self.sy as i128 + n * oy * oy;
        let sxy = self.sxy as i128 - ox * self.sy as i128 - oy * self.sx as i128 + n * ox * oy;
        let cxx = n * sxx - sx * sx;
        let cyy = n * syy - sy * sy;
        let cxy = n * sxy - sx * sy;
        let n2 = (n * n) as f64;

        let (twice_area, lattice_points) = hull_of_rows(&self.rows);
        BlobMeasurements {
            area: self.area as usize,
            perimeter: trace_perimeter(labels, id, self.first),
            centroid: (
                self.bbox.min_x as f64 + sx as f64 / n as f64,
                self.bbox.min_y as f64 + sy as f64 / n as f64,
            ),
            hull_area: lattice_points as f64,
            center_hull_area: twice_area as f64 / 2.0,
            second_moments: SecondMoments {
                mxx: cxx as f64 / n2,
                myy: cyy as f64 / n2,
                mxy: cxy as f64 / n2,
            },
            bbox: self.bbox,
        }
    }
}

/// Measures every component of `labels`; entry `i` describes id `i + 1`.
pub fn measure_all(labels: &ComponentLabels) -> Vec<BlobMeasurements> {
    let w = labels.width();
    let mut acc: Vec<Option<Accumulator>> = vec![None; labels.count() as usize];
    for (i, &id) in labels.labels().iter().enumerate() {
        if id == 0 {
            continue;
        }
        let (x, y) = (i % w, i / w);
        acc[id as usize - 1]
            .get_or_insert_with(|| Accumulator::new(x, y))
            .push(x, y);
    }
    acc.into_iter()
        .enumerate()
        .map(|(i, a)| {
            a.expect("every label in 1..=count has pixels")
                .finish(labels, i as u32 + 1)
        })
        .collect()
}

pub fn measure(labels: &ComponentLabels, id: u32) -> Result<BlobMeasurements> {
    if id == 0 || id > labels.count() {
        return Err(Error::NotFound {
            id,
            count: labels.count(),
        });
    }
    let w = labels.width();
    let mut acc: Option<Accumulator> = None;
    for (i, _) in labels.labels().iter().enumerate().filter(|(_, &l)| l == id) {
        let (x, y) = (i % w, i / w);
        acc.get_or_insert_with(|| Accumulator::new(x, y)).push(x, y);
    }
    let acc = acc.ok_or(Error::NotFound {
        id,
        count: labels.count(),
    })?;
    Ok(acc.finish(labels, id))
}

// Clockwise on screen (y grows downward), starting east.
const DIRS: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

fn direction_of(dx: i64, dy: i64) -> usize {
    DIRS.iter()
        .position(|&d| d == (dx, dy))
        .expect("offset is a unit neighbour")
}

/// Moore-neighbour tracing of the outer boundary, starting at the
/// component's first raster pixel.
fn trace_perimeter(labels: &ComponentLabels, id: u32, start: (usize, usize)) -> f64 {
    let (w, h) = (labels.width() as i64, labels.height() as i64);
    let inside = |x: i64, y: i64| {
        x >= 0 && y >= 0 && x < w && y < h && labels.labels()[(y * w + x) as usize] == id
    };
    // From `p`, with a known background neighbour in direction `back`,
    // sweep clockwise for the next boundary pixel.
    let step = |p: (i64, i64), back: usize| -> Option<((i64, i64), usize)> {
        for k in 1..8 {
            let d = (back + k) % 8;
            let q = (p.0 + DIRS[d].0, p.1 + DIRS[d].1);
            if inside(q.0, q.1) {
                let prev = (back + k - 1) % 8;
                let b = (p.0 + DIRS[prev].0, p.1 + DIRS[prev].1);
                return Some((q, direction_of(b.0 - q.0, b.1 - q.1)));
            }
        }
        None
    };
    let length = |from: (i64, i64), to: (i64, i64)| {
        if from.0 != to.0 && from.1 != to.1 {
            SQRT_2
        } else {
            1.0
        }
    };

    let s = (start.0 as i64, start.1 as i64);
    // Nothing precedes the first raster pixel, so its west neighbour is free.
    let Some((first, first_back)) = step(s, 4) else {
        return 0.0;
    };
    let mut perimeter = length(s, first);
    let (mut p, mut back) = (first, first_back);
    // Bounded by the number of pixel-neighbour pairs the contour can use.
    let limit = 8 * (w * h) as usize + 8;
    for _ in 0..limit {
        let (q, next_back) = step(p, back).expect("traced pixel has a neighbour");
        if p == s && q == first {
            break;
        }
        perimeter += length(p, q);
        p = q;
        back = next_back;
    }
    perimeter
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Convex hull of the row extremes. Returns twice the polygon area and the
/// number of lattice points in the closed hull (Pick: A + B/2 + 1).
fn hull_of_rows(rows: &[(usize, usize, usize)]) -> (i64, i64) {
    let mut pts: Vec<(i64, i64)> = rows
        .iter()
        .flat_map(|&(y, lo, hi)| [(lo as i64, y as i64), (hi as i64, y as i64)])
        .collect();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() == 1 {
        return (0, 1);
    }

    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(pts.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }

    let k = hull.len();
    let mut twice_area = 0i64;
    let mut boundary = 0i64;
    for i in 0..k {
        let (a, b) = (hull[i], hull[(i + 1) % k]);
        twice_area += a.0 * b.1 - b.0 * a.1;
        boundary += gcd(b.0 - a.0, b.1 - a.1);
    }
    let twice_area = twice_area.abs();
    if twice_area == 0 {
        // Collinear: the hull is a segment traversed there and back.
        return (0, boundary / 2 + 1);
    }
    (twice_area, (twice_area + boundary) / 2 + 1)
}

//! Planar regions bounded by segments and circular arcs.
//!
//! Every boundary loop keeps the region on its left, so outer loops run
//! counter-clockwise and holes clockwise. Areas come from Green's theorem,
//! and `D 1_E` is integrated with the inner normal: for an oriented piece
//! from `p` to `q` with the region on its left, `∫ ν_in ds = J (q - p)` with
//! `J (x, y) = (-y, x)`.

mod clip;
mod shapes;

pub use shapes::{disk_union_centers, make_shape, rational, ShapeSpec};

use crate::error::{Error, Result};
use crate::tolerances::{ARC_COINCIDENCE, LOOP_CLOSURE};
use clip::{wrap_angle, Path};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn coord(self, k: usize) -> f64 {
        if k == 1 {
            self.x
        } else {
            self.y
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A boundary edge. Arc angles are in `(-π, π]`; `start == end` is a full circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Edge {
    Segment {
        p: Point,
        q: Point,
    },
    Arc {
        center: Point,
        radius: f64,
        start: f64,
        end: f64,
        ccw: bool,
    },
}

impl Edge {
    pub fn segment(p: Point, q: Point) -> Self {
        Edge::Segment { p, q }
    }

    pub fn arc(center: Point, radius: f64, start: f64, end: f64, ccw: bool) -> Self {
        Edge::Arc {
            center,
            radius,
            start: wrap_angle(start),
            end: wrap_angle(end),
            ccw,
        }
    }

    pub fn circle(center: Point, radius: f64, ccw: bool) -> Self {
        Edge::arc(center, radius, 0.0, 0.0, ccw)
    }

    pub(crate) fn path(&self) -> Path {
        match *self {
            Edge::Segment { p, q } => Path::Line(p, q),
            Edge::Arc { center, radius, start, end, ccw } => {
                let sweep = if ccw { end - start } else { start - end };
                let mut sweep = sweep.rem_euclid(2.0 * PI);
                if sweep == 0.0 {
                    sweep = 2.0 * PI;
                }
                Path::arc(center, radius, start, if ccw { sweep } else { -sweep })
            }
        }
    }

    pub fn length(&self) -> f64 {
        self.path().length()
    }

    pub fn start_point(&self) -> Point {
        self.path().start()
    }

    pub fn end_point(&self) -> Point {
        self.path().end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Loop {
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcRegion2D {
    loops: Vec<Loop>,
    #[serde(skip)]
    paths: Vec<Path>,
    #[serde(skip)]
    bbox: (Point, Point),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallMode {
    Open,
    Closed,
    /// Open ball plus the boundary points with `y_k > x_k`.
    HalfPlus(usize),
    /// Open ball plus the boundary points with `y_k < x_k`.
    HalfMinus(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
    pub mode: BallMode,
}

impl Ball {
    pub fn new(center: Point, radius: f64, mode: BallMode) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Argument(format!("ball radius must be positive, got {radius}")));
        }
        if let BallMode::HalfPlus(k) | BallMode::HalfMinus(k) = mode {
            if k != 1 && k != 2 {
                return Err(Error::Argument(format!("coordinate index must be 1 or 2, got {k}")));
            }
        }
        Ok(Self { center, radius, mode })
    }

    pub fn open(center: Point, radius: f64) -> Result<Self> {
        Self::new(center, radius, BallMode::Open)
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryMeasureResult {
    pub vector: Point,
    pub interior_part: Point,
    pub sphere_part: Point,
}

/// Direction for ray casting, chosen to avoid axis and diagonal alignments.
const RAY: Point = Point::new(0.786_151_377_757_423_3, 0.618_033_988_749_894_8);

struct Clipped {
    /// Pieces of non-coincident edges inside the open disk, tagged by edge.
    inside: Vec<(usize, Path)>,
    /// Edges lying on the circle.
    coincident: Vec<(usize, Path)>,
    /// Counter-clockwise arcs of the circle bounding `E ∩ B`.
    circle: Vec<Path>,
}

impl ArcRegion2D {
    pub fn new(loops: Vec<Loop>) -> Result<Self> {
        if loops.is_empty() {
            return Err(Error::Construction("region needs at least one loop".into()));
        }
        let mut paths = Vec::new();
        for (li, l) in loops.iter().enumerate() {
            if l.edges.is_empty() {
                return Err(Error::Construction(format!("loop {li} is empty")));
            }
            for e in &l.edges {
                match *e {
                    Edge::Segment { p, q } => {
                        if !(p.x.is_finite() && p.y.is_finite() && q.x.is_finite() && q.y.is_finite()) {
                            return Err(Error::Construction("non-finite vertex".into()));
                        }
                        if (q - p).norm() <= LOOP_CLOSURE {
                            return Err(Error::Construction("degenerate segment".into()));
                        }
                    }
                    Edge::Arc { center, radius, start, end, .. } => {
                        if !(radius > 0.0) || !radius.is_finite() || !center.x.is_finite() || !center.y.is_finite() {
                            return Err(Error::Construction(format!("bad arc radius {radius}")));
                        }
                        if !start.is_finite() || !end.is_finite() {
                            return Err(Error::Construction("non-finite arc angle".into()));
                        }
                    }
                }
            }
            let n = l.edges.len();
            for i in 0..n {
                let (a, b) = (l.edges[i].end_point(), l.edges[(i + 1) % n].start_point());
                if (a - b).norm() > LOOP_CLOSURE * (1.0 + a.norm()) {
                    return Err(Error::Construction(format!(
                        "loop {li}: edge {i} ends at ({}, {}) but the next starts at ({}, {})",
                        a.x, a.y, b.x, b.y
                    )));
                }
            }
            for e in &l.edges {
                paths.push(e.path());
            }
        }
        check_simple(&paths)?;
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &paths {
            for x in p.extreme_points() {
                lo = Point::new(lo.x.min(x.x), lo.y.min(x.y));
                hi = Point::new(hi.x.max(x.x), hi.y.max(x.y));
            }
        }
        let region = Self { loops, paths, bbox: (lo, hi) };
        if !(region.area() > 0.0) {
            return Err(Error::Construction(
                "region has nonpositive area (outer loops must run counter-clockwise)".into(),
            ));
        }
        Ok(region)
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.loops.iter().flat_map(|l| l.edges.iter())
    }

    pub fn edge_count(&self) -> usize {
        self.paths.len()
    }

    pub fn area(&self) -> f64 {
        self.paths.iter().map(Path::green).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.paths.iter().map(Path::length).sum()
    }

    pub fn bbox(&self) -> (Point, Point) {
        self.bbox
    }

    pub fn bbox_diagonal(&self) -> f64 {
        (self.bbox.1 - self.bbox.0).norm()
    }

    /// Membership of a point not on the boundary.
    pub fn contains(&self, p: Point) -> bool {
        let (lo, hi) = self.bbox;
        if p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y {
            return false;
        }
        let n: usize = self.paths.iter().map(|e| e.ray_crossings(p, RAY)).sum();
        n % 2 == 1
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.paths.iter().map(|e| e.distance(p)).fold(f64::INFINITY, f64::min)
    }

    /// `1_E^∨(p)`: one on the closure of `E`, zero elsewhere.
    pub fn upper_indicator(&self, p: Point) -> f64 {
        if self.contains(p) || self.boundary_distance(p) <= 1e-12 {
            1.0
        } else {
            0.0
        }
    }

    fn clip(&self, c: Point, r: f64) -> Clipped {
        let mut inside = Vec::new();
        let mut coincident = Vec::new();
        let mut angles = Vec::new();
        let (lo, hi) = self.bbox;
        let far = c.x + r < lo.x || c.x - r > hi.x || c.y + r < lo.y || c.y - r > hi.y;
        if far {
            return Clipped { inside, coincident, circle: vec![] };
        }
        for (i, path) in self.paths.iter().enumerate() {
            if path.is_on_circle(c, r, ARC_COINCIDENCE) {
                coincident.push((i, *path));
                angles.push(wrap_angle((path.start() - c).angle()));
                angles.push(wrap_angle((path.end() - c).angle()));
                continue;
            }
            let mut params = path.circle_params(c, r);
            for &s in &params {
                angles.push(wrap_angle((path.at(s) - c).angle()));
            }
            params.push(0.0);
            params.push(1.0);
            params.sort_by(f64::total_cmp);
            params.dedup();
            for w in params.windows(2) {
                if w[1] - w[0] <= 1e-15 {
                    continue;
                }
                let piece = path.sub(w[0], w[1]);
                if (piece.at(0.5) - c).norm() < r {
                    inside.push((i, piece));
                }
            }
        }
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
        if angles.len() > 1 && angles[0] + 2.0 * PI - angles[angles.len() - 1] <= 1e-13 {
            angles.pop();
        }

        let mut circle = Vec::new();
        let keep = |phi: f64| -> bool {
            for (_, arc) in &coincident {
                if arc.covers_angle(phi) {
                    return matches!(arc, Path::Circ { dt, .. } if *dt > 0.0);
                }
            }
            self.contains(c + Point::new(phi.cos(), phi.sin()) * r)
        };
        if angles.is_empty() {
            if keep(0.3) {
                circle.push(Path::arc(c, r, 0.0, 2.0 * PI));
            }
        } else {
            for k in 0..angles.len() {
                let t0 = angles[k];
                let t1 = if k + 1 < angles.len() { angles[k + 1] } else { angles[0] + 2.0 * PI };
                let dt = t1 - t0;
                if dt <= 0.0 {
                    continue;
                }
                if keep(t0 + 0.5 * dt) {
                    circle.push(Path::arc(c, r, t0, dt));
                }
            }
        }
        Clipped { inside, coincident, circle }
    }

    /// `L²(E ∩ B(c, r))`.
    pub fn intersection_area(&self, c: Point, r: f64) -> f64 {
        let clipped = self.clip(c, r);
        let a: f64 = clipped.inside.iter().map(|(_, p)| p.green_about(c)).sum::<f64>()
            + clipped.circle.iter().map(|p| p.green_about(c)).sum::<f64>();
        a.clamp(0.0, PI * r * r)
    }

    /// `L²(E ∩ B) / L²(B)`.
    pub fn ball_mean(&self, ball: &Ball) -> f64 {
        (self.intersection_area(ball.center, ball.radius) / ball.area()).clamp(0.0, 1.0)
    }

    /// `D 1_E` of the ball in the given mode, per boundary edge.
    pub fn boundary_measure_by_edge(&self, ball: &Ball) -> Vec<Point> {
        let clipped = self.clip(ball.center, ball.radius);
        let mut out = vec![Point::default(); self.paths.len()];
        for (i, p) in &clipped.inside {
            out[*i] = out[*i] + p.normal_integral();
        }
        for (i, p) in &clipped.coincident {
            out[*i] = out[*i] + sphere_contribution(p, ball);
        }
        out
    }

    pub fn boundary_measure(&self, ball: &Ball) -> BoundaryMeasureResult {
        let clipped = self.clip(ball.center, ball.radius);
        let mut interior = Point::default();
        for (_, p) in &clipped.inside {
            interior = interior + p.normal_integral();
        }
        let mut sphere = Point::default();
        for (_, p) in &clipped.coincident {
            sphere = sphere + sphere_contribution(p, ball);
        }
        BoundaryMeasureResult {
            vector: interior + sphere,
            interior_part: interior,
            sphere_part: sphere,
        }
    }
}

/// The part of an arc on `∂B` that belongs to the ball in its mode.
fn sphere_contribution(arc: &Path, ball: &Ball) -> Point {
    let (k, plus) = match ball.mode {
        BallMode::Open => return Point::default(),
        BallMode::Closed => return arc.normal_integral(),
        BallMode::HalfPlus(k) => (k, true),
        BallMode::HalfMinus(k) => (k, false),
    };
    let cuts: [f64; 2] = if k == 1 { [-PI / 2.0, PI / 2.0] } else { [0.0, PI] };
    let mut params: Vec<f64> = cuts.iter().filter_map(|&phi| arc.param_of_angle(phi)).collect();
    params.push(0.0);
    params.push(1.0);
    params.sort_by(f64::total_cmp);
    params.dedup();
    let mut total = Point::default();
    for w in params.windows(2) {
        if w[1] - w[0] <= 1e-15 {
            continue;
        }
        let piece = arc.sub(w[0], w[1]);
        let mid = piece.at(0.5) - ball.center;
        let side = mid.coord(k);
        if (plus && side > 0.0) || (!plus && side < 0.0) {
            total = total + piece.normal_integral();
        }
    }
    total
}

fn near_endpoint(p: &Path, x: Point, tol: f64) -> bool {
    (p.start() - x).norm() <= tol || (p.end() - x).norm() <= tol
}

/// Rejects crossings and overlaps; touching at shared vertices is allowed.
fn check_simple(paths: &[Path]) -> Result<()> {
    let tol = 1e-9;
    for i in 0..paths.len() {
        for j in (i + 1)..paths.len() {
            let (a, b) = (&paths[i], &paths[j]);
            for x in a.intersections(b) {
                if !(near_endpoint(a, x, tol) && near_endpoint(b, x, tol)) {
                    return Err(Error::Construction(format!(
                        "boundary edges {i} and {j} cross at ({}, {})",
                        x.x, x.y
                    )));
                }
            }
            let overlap = match (*a, *b) {
                (Path::Circ { c, r, .. }, Path::Circ { c: c2, r: r2, .. }) => {
                    (c - c2).norm() <= ARC_COINCIDENCE
                        && (r - r2).abs() <= ARC_COINCIDENCE
                        && (a.covers_angle((b.at(0.5) - c).angle()) || b.covers_angle((a.at(0.5) - c).angle()))
                }
                (Path::Line(p, q), Path::Line(s, t)) => {
                    let d = q - p;
                    let collinear = d.cross(s - p).abs() <= tol * d.norm() && d.cross(t - p).abs() <= tol * d.norm();
                    let m = (s + t) * 0.5;
                    let mp = (p + q) * 0.5;
                    let on = |x: Point, u: Point, v: Point| {
                        let e = v - u;
                        let s = (x - u).dot(e) / e.dot(e);
                        s > 1e-12 && s < 1.0 - 1e-12
                    };
                    collinear && (on(m, p, q) || on(mp, s, t))
                }
                _ => false,
            };
            if overlap {
                return Err(Error::Construction(format!("boundary edges {i} and {j} overlap")));
            }
        }
    }
    Ok(())
}

pub fn area(region: &ArcRegion2D) -> f64 {
    region.area()
}

pub fn perimeter(region: &ArcRegion2D) -> f64 {
    region.perimeter()
}

pub fn ball_mean(region: &ArcRegion2D, ball: &Ball) -> f64 {
    region.ball_mean(ball)
}

pub fn boundary_measure(region: &ArcRegion2D, ball: &Ball) -> BoundaryMeasureResult {
    region.boundary_measure(ball)
}

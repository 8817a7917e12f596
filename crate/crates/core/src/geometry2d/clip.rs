//! Oriented boundary pieces (segments and circular arcs) and their
//! intersections with circles and rays.

use super::Point;
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;
const PARAM_SLACK: f64 = 1e-12;

/// A boundary piece. Arcs run from angle `t0` through `t0 + dt` (`dt > 0` is
/// counter-clockwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Path {
    Line(Point, Point),
    Circ { c: Point, r: f64, t0: f64, dt: f64 },
}

fn polar(c: Point, r: f64, t: f64) -> Point {
    Point::new(c.x + r * t.cos(), c.y + r * t.sin())
}

/// Wraps an angle to `(-π, π]`.
pub(crate) fn wrap_angle(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Roots of `a s^2 + b s + c` (real, possibly repeated), `a != 0`.
fn quadratic(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    if q == 0.0 {
        return Some((0.0, 0.0));
    }
    let (r1, r2) = (q / a, c / q);
    Some((r1.min(r2), r1.max(r2)))
}

/// Angles on circle `(c1, r1)` where it meets circle `(c2, r2)`.
pub(crate) fn circle_circle_angles(c1: Point, r1: f64, c2: Point, r2: f64) -> Vec<f64> {
    let v = c2 - c1;
    let d = v.norm();
    if d < 1e-15 || d > r1 + r2 || d < (r1 - r2).abs() {
        return vec![];
    }
    // Factored forms of r1 - a and r1 + a keep small crossing angles accurate.
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let below = ((r2 - d + r1) * (r2 + d - r1) / (2.0 * d)).max(0.0);
    let above = ((d + r1 - r2) * (d + r1 + r2) / (2.0 * d)).max(0.0);
    let gamma = (below * above).sqrt().atan2(a);
    let beta = v.y.atan2(v.x);
    if gamma == 0.0 {
        vec![wrap_angle(beta)]
    } else {
        vec![wrap_angle(beta - gamma), wrap_angle(beta + gamma)]
    }
}

impl Path {
    pub fn arc(c: Point, r: f64, t0: f64, dt: f64) -> Self {
        Path::Circ { c, r, t0, dt }
    }

    pub fn at(&self, s: f64) -> Point {
        match *self {
            Path::Line(p, q) => p + (q - p) * s,
            Path::Circ { c, r, t0, dt } => polar(c, r, t0 + s * dt),
        }
    }

    pub fn start(&self) -> Point {
        match *self {
            Path::Line(p, _) => p,
            Path::Circ { .. } => self.at(0.0),
        }
    }

    pub fn end(&self) -> Point {
        match *self {
            Path::Line(_, q) => q,
            Path::Circ { .. } => self.at(1.0),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Path::Line(p, q) => (q - p).norm(),
            Path::Circ { r, dt, .. } => r * dt.abs(),
        }
    }

    /// `½ ∫ x dy - y dx` along the path.
    pub fn green(&self) -> f64 {
        self.green_about(Point::default())
    }

    /// Green's integrand with coordinates taken relative to `o`. Summing over
    /// closed loops gives the same area for every `o`; choosing `o` near the
    /// pieces limits the effect of tiny gaps between computed endpoints.
    pub fn green_about(&self, o: Point) -> f64 {
        match *self {
            Path::Line(p, q) => 0.5 * (p - o).cross(q - o),
            Path::Circ { c, r, t0, dt } => {
                let c = c - o;
                let t1 = t0 + dt;
                0.5 * (r * r * dt + r * (c.x * (t1.sin() - t0.sin()) - c.y * (t1.cos() - t0.cos())))
            }
        }
    }

    /// `∫ ν ds` for the left normal `ν = (-T_y, T_x)`.
    pub fn normal_integral(&self) -> Point {
        let (p, q) = match *self {
            Path::Line(p, q) => (p, q),
            Path::Circ { .. } => (self.start(), self.end()),
        };
        let d = q - p;
        Point::new(-d.y, d.x)
    }

    pub fn sub(&self, s0: f64, s1: f64) -> Path {
        match *self {
            Path::Line(..) => Path::Line(self.at(s0), self.at(s1)),
            Path::Circ { c, r, t0, dt } => Path::Circ {
                c,
                r,
                t0: t0 + s0 * dt,
                dt: (s1 - s0) * dt,
            },
        }
    }

    /// Parameter of the point at angle `phi` on an arc, if it lies on it.
    pub fn param_of_angle(&self, phi: f64) -> Option<f64> {
        let Path::Circ { t0, dt, .. } = *self else {
            return None;
        };
        let mut delta = if dt > 0.0 {
            (phi - t0).rem_euclid(TAU)
        } else {
            (t0 - phi).rem_euclid(TAU)
        };
        if delta > TAU - 1e-12 && dt.abs() < TAU - 1e-12 {
            delta = 0.0;
        }
        let s = delta / dt.abs();
        (s <= 1.0 + PARAM_SLACK).then(|| s.min(1.0))
    }

    /// Whether angle `phi` lies strictly inside the angular range of an arc.
    pub fn covers_angle(&self, phi: f64) -> bool {
        match self.param_of_angle(phi) {
            Some(s) => s > 1e-12 && s < 1.0 - 1e-12,
            None => false,
        }
    }

    /// Parameters where the path meets the circle `(c, r)`.
    pub fn circle_params(&self, c: Point, r: f64) -> Vec<f64> {
        match *self {
            Path::Line(p, q) => {
                let d = q - p;
                let f = p - c;
                let a = d.dot(d);
                if a == 0.0 {
                    return vec![];
                }
                match quadratic(a, 2.0 * d.dot(f), f.dot(f) - r * r) {
                    None => vec![],
                    Some((s1, s2)) => [s1, s2]
                        .into_iter()
                        .filter(|s| (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(s))
                        .map(|s| s.clamp(0.0, 1.0))
                        .collect(),
                }
            }
            Path::Circ { c: c1, r: r1, .. } => circle_circle_angles(c1, r1, c, r)
                .into_iter()
                .filter_map(|phi| self.param_of_angle(phi))
                .collect(),
        }
    }

    /// Intersections with another path, as points.
    pub fn intersections(&self, other: &Path) -> Vec<Point> {
        match (*self, *other) {
            (Path::Line(p, q), Path::Line(a, b)) => {
                let (d, e) = (q - p, b - a);
                let den = d.cross(e);
                if den.abs() < 1e-300 {
                    // Parallel: report collinear overlap endpoints.
                    if (a - p).cross(d).abs() > 1e-12 * d.norm().max(1.0) {
                        return vec![];
                    }
                    let dd = d.dot(d);
                    return [a, b, p, q]
                        .into_iter()
                        .filter(|&x| {
                            let s = (x - p).dot(d) / dd;
                            let t = (x - a).dot(e) / e.dot(e);
                            (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&s)
                                && (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&t)
                        })
                        .collect();
                }
                let s = (a - p).cross(e) / den;
                let t = (a - p).cross(d) / den;
                if (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&s) && (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&t) {
                    vec![self.at(s.clamp(0.0, 1.0))]
                } else {
                    vec![]
                }
            }
            (Path::Line(..), Path::Circ { c, r, .. }) => self
                .circle_params(c, r)
                .into_iter()
                .map(|s| self.at(s))
                .filter(|&x| other.param_of_angle((x - c).angle()).is_some())
                .collect(),
            (Path::Circ { .. }, Path::Line(..)) => other.intersections(self),
            (Path::Circ { c, r, .. }, Path::Circ { c: c2, r: r2, .. }) => circle_circle_angles(c, r, c2, r2)
                .into_iter()
                .filter_map(|phi| self.param_of_angle(phi))
                .map(|s| self.at(s))
                .filter(|&x| other.param_of_angle((x - c2).angle()).is_some())
                .collect(),
        }
    }

    /// Number of crossings with the ray `p + t d`, `t > 0`, counting each
    /// path on the half-open parameter range `[0, 1)`.
    pub fn ray_crossings(&self, p: Point, d: Point) -> usize {
        match *self {
            Path::Line(a, b) => {
                let e = b - a;
                let den = d.cross(e);
                if den == 0.0 {
                    return 0;
                }
                let t = (a - p).cross(e) / den;
                let s = (a - p).cross(d) / den;
                usize::from(t > 0.0 && (0.0..1.0).contains(&s))
            }
            Path::Circ { c, r, dt, .. } => {
                let f = p - c;
                let a = d.dot(d);
                let Some((t1, t2)) = quadratic(a, 2.0 * d.dot(f), f.dot(f) - r * r) else {
                    return 0;
                };
                if t1 == t2 {
                    return 0;
                }
                [t1, t2]
                    .into_iter()
                    .filter(|&t| t > 0.0)
                    .filter(|&t| {
                        let x = p + d * t;
                        match self.param_of_angle((x - c).angle()) {
                            Some(s) => s < 1.0 || dt.abs() >= TAU,
                            None => false,
                        }
                    })
                    .count()
            }
        }
    }

    /// Euclidean distance from `x` to the path.
    pub fn distance(&self, x: Point) -> f64 {
        match *self {
            Path::Line(p, q) => {
                let d = q - p;
                let s = ((x - p).dot(d) / d.dot(d)).clamp(0.0, 1.0);
                (x - self.at(s)).norm()
            }
            Path::Circ { c, r, .. } => {
                let v = x - c;
                if v.norm() > 0.0 && self.param_of_angle(v.angle()).is_some() {
                    (v.norm() - r).abs()
                } else {
                    (x - self.start()).norm().min((x - self.end()).norm())
                }
            }
        }
    }

    pub fn is_on_circle(&self, c: Point, r: f64, tol: f64) -> bool {
        match *self {
            Path::Line(..) => false,
            Path::Circ { c: c2, r: r2, .. } => (c2 - c).norm() <= tol && (r2 - r).abs() <= tol,
        }
    }

    /// Points where the path is extremal in x or y, plus its endpoints.
    pub fn extreme_points(&self) -> Vec<Point> {
        let mut out = vec![self.start(), self.end()];
        if let Path::Circ { c, r, .. } = *self {
            for k in -2..=2 {
                let phi = k as f64 * PI / 2.0;
                if self.param_of_angle(phi).is_some() {
                    out.push(polar(c, r, phi));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn wraps_angles() {
        assert_eq!(wrap_angle(PI), PI);
        assert_abs_diff_eq!(wrap_angle(-PI), PI);
        assert_abs_diff_eq!(wrap_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn full_circle_green_is_area() {
        let c = Path::arc(Point::new(2.0, -1.0), 3.0, 0.4, TAU);
        assert_abs_diff_eq!(c.green(), 9.0 * PI, epsilon = 1e-12);
        let n = c.normal_integral();
        assert_abs_diff_eq!(n.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn line_meets_circle() {
        let l = Path::Line(Point::new(-2.0, 0.0), Point::new(2.0, 0.0));
        let mut s = l.circle_params(Point::new(0.0, 0.0), 1.0);
        s.sort_by(f64::total_cmp);
        assert_eq!(s, vec![0.25, 0.75]);
    }

    #[test]
    fn arc_params() {
        let a = Path::arc(Point::new(0.0, 0.0), 1.0, PI / 2.0, -PI);
        assert_abs_diff_eq!(a.param_of_angle(0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(a.param_of_angle(PI).is_none());
        assert!(a.covers_angle(-0.3));
    }

    #[test]
    fn ray_counts_circle_once_from_inside() {
        let c = Path::arc(Point::new(0.0, 0.0), 1.0, 0.0, TAU);
        let d = Point::new(0.6, 0.8);
        assert_eq!(c.ray_crossings(Point::new(0.1, 0.2), d), 1);
        assert_eq!(c.ray_crossings(Point::new(3.0, 0.2), d), 0);
        assert_eq!(c.ray_crossings(Point::new(-3.0, -4.0), d), 2);
    }
}

//! Shape constructors and the one-line shape text format.

use super::clip::circle_circle_angles;
use super::{ArcRegion2D, Edge, Loop, Point};
use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    Polygon(Vec<Point>),
    Disk { center: Point, radius: f64 },
    /// `B(0,1) \ B(0,1-δ)`.
    Annulus(f64),
    /// The annulus with `B(c, δ²)`, `c = (0, 1)`, flipped: removed inside the
    /// unit disk and added outside it.
    PerturbedAnnulus(f64),
    /// Union of `B(q_j, 2^-j)`, `j = 1..=n`, over an enumeration of `Q²`
    /// starting at index `seed`.
    DiskUnion { n: usize, seed: usize },
    /// Union of arbitrary disks given as `(center, radius)`.
    Disks(Vec<(Point, f64)>),
}

impl FromStr for ShapeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let Some((&kind, rest)) = tokens.split_first() else {
            return Err(Error::Argument("empty shape".into()));
        };
        let nums = || -> Result<Vec<f64>> {
            rest.iter()
                .map(|t| {
                    t.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::Argument(format!("not a number: `{t}`")))
                })
                .collect()
        };
        let arity = |n: usize| -> Result<Vec<f64>> {
            let v = nums()?;
            if v.len() != n {
                return Err(Error::Argument(format!("`{kind}` takes {n} numbers, got {}", v.len())));
            }
            Ok(v)
        };
        match kind {
            "polygon" => {
                let v = nums()?;
                if v.len() < 6 || v.len() % 2 != 0 {
                    return Err(Error::Argument("`polygon` needs at least three x y pairs".into()));
                }
                Ok(ShapeSpec::Polygon(v.chunks(2).map(|c| Point::new(c[0], c[1])).collect()))
            }
            "disk" => {
                let v = arity(3)?;
                Ok(ShapeSpec::Disk {
                    center: Point::new(v[0], v[1]),
                    radius: v[2],
                })
            }
            "disks" => {
                let v = nums()?;
                if v.is_empty() || v.len() % 3 != 0 {
                    return Err(Error::Argument("`disks` needs one or more cx cy r triples".into()));
                }
                Ok(ShapeSpec::Disks(v.chunks(3).map(|c| (Point::new(c[0], c[1]), c[2])).collect()))
            }
            "annulus" => Ok(ShapeSpec::Annulus(arity(1)?[0])),
            "perturbed_annulus" => Ok(ShapeSpec::PerturbedAnnulus(arity(1)?[0])),
            "disk_union" => {
                let parse = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Argument(format!("not a nonnegative integer: `{t}`")))
                };
                if rest.len() != 2 {
                    return Err(Error::Argument("`disk_union` takes n and seed".into()));
                }
                Ok(ShapeSpec::DiskUnion {
                    n: parse(rest[0])?,
                    seed: parse(rest[1])?,
                })
            }
            other => Err(Error::Argument(format!("unknown shape `{other}`"))),
        }
    }
}

pub fn make_shape(spec: &ShapeSpec) -> Result<ArcRegion2D> {
    match spec {
        ShapeSpec::Polygon(pts) => polygon(pts),
        &ShapeSpec::Disk { center, radius } => {
            if !(radius > 0.0) {
                return Err(Error::Construction(format!("disk radius must be positive, got {radius}")));
            }
            ArcRegion2D::new(vec![Loop { edges: vec![Edge::circle(center, radius, true)] }])
        }
        &ShapeSpec::Annulus(delta) => {
            check_delta(delta)?;
            ArcRegion2D::new(vec![
                Loop { edges: vec![Edge::circle(Point::default(), 1.0, true)] },
                Loop { edges: vec![Edge::circle(Point::default(), 1.0 - delta, false)] },
            ])
        }
        &ShapeSpec::PerturbedAnnulus(delta) => perturbed_annulus(delta),
        &ShapeSpec::DiskUnion { n, seed } => {
            if n == 0 || n > 64 {
                return Err(Error::Construction(format!("disk_union needs 1 <= n <= 64, got {n}")));
            }
            disk_union(&disk_union_centers(n, seed))
        }
        ShapeSpec::Disks(disks) => {
            if let Some(&(_, r)) = disks.iter().find(|d| !(d.1 > 0.0)) {
                return Err(Error::Construction(format!("disk radius must be positive, got {r}")));
            }
            disk_union(disks)
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Construction(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

fn polygon(pts: &[Point]) -> Result<ArcRegion2D> {
    if pts.len() < 3 {
        return Err(Error::Construction("polygon needs at least three vertices".into()));
    }
    let signed: f64 = (0..pts.len()).map(|i| pts[i].cross(pts[(i + 1) % pts.len()])).sum();
    let mut pts = pts.to_vec();
    if signed < 0.0 {
        pts.reverse();
    }
    let n = pts.len();
    let edges = (0..n).map(|i| Edge::segment(pts[i], pts[(i + 1) % n])).collect();
    ArcRegion2D::new(vec![Loop { edges }])
}

fn perturbed_annulus(delta: f64) -> Result<ArcRegion2D> {
    check_delta(delta)?;
    let o = Point::default();
    let c = Point::new(0.0, 1.0);
    let rho = delta * delta;
    // Angles of the two crossing points on each circle, left point first.
    let unit = circle_circle_angles(o, 1.0, c, rho);
    let small = circle_circle_angles(c, rho, o, 1.0);
    let (Some(&u_right), Some(&u_left)) = (unit.first(), unit.last()) else {
        return Err(Error::Construction("circles do not cross".into()));
    };
    let (s_left, s_right) = (small[0], small[1]);
    ArcRegion2D::new(vec![
        Loop {
            edges: vec![
                Edge::arc(o, 1.0, u_left, u_right, true),
                Edge::arc(c, rho, s_right, s_left, false),
            ],
        },
        Loop {
            edges: vec![
                Edge::arc(c, rho, s_right, s_left, true),
                Edge::arc(o, 1.0, u_left, u_right, false),
            ],
        },
        Loop { edges: vec![Edge::circle(o, 1.0 - delta, false)] },
    ])
}

/// The `i`-th rational in the order 0, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, 3, -3, 2/3, ...
pub fn rational(i: usize) -> f64 {
    if i == 0 {
        return 0.0;
    }
    if i <= 2 {
        return if i == 1 { 1.0 } else { -1.0 };
    }
    let mut k = 3;
    let mut h = 2usize;
    loop {
        for p in 1..h {
            if gcd(p, h) != 1 {
                continue;
            }
            let vals = [p as f64 / h as f64, -(p as f64) / h as f64, h as f64 / p as f64, -(h as f64) / p as f64];
            if i < k + 4 {
                return vals[i - k];
            }
            k += 4;
        }
        h += 1;
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inverse Cantor pairing.
fn unpair(k: usize) -> (usize, usize) {
    let mut w = (((8 * k + 1) as f64).sqrt() as usize - 1) / 2;
    while (w + 1) * (w + 2) / 2 <= k {
        w += 1;
    }
    while w * (w + 1) / 2 > k {
        w -= 1;
    }
    let j = k - w * (w + 1) / 2;
    (w - j, j)
}

/// Centers `q_j` and radii `2^-j` of the enlarged rationals, `j = 1..=n`.
pub fn disk_union_centers(n: usize, seed: usize) -> Vec<(Point, f64)> {
    (1..=n)
        .map(|j| {
            let (a, b) = unpair(seed + j - 1);
            (Point::new(rational(a), rational(b)), 0.5f64.powi(j as i32))
        })
        .collect()
}

fn disk_union(disks: &[(Point, f64)]) -> Result<ArcRegion2D> {
    let tol = 1e-12;
    let n = disks.len();
    let contained = |i: usize| {
        (0..n).any(|j| {
            if j == i {
                return false;
            }
            let d = (disks[i].0 - disks[j].0).norm();
            let same = d <= tol && (disks[i].1 - disks[j].1).abs() <= tol;
            if same {
                j < i
            } else {
                d + disks[i].1 <= disks[j].1 + tol
            }
        })
    };
    let kept: Vec<usize> = (0..n).filter(|&i| !contained(i)).collect();
    for (a, &i) in kept.iter().enumerate() {
        for &j in &kept[a + 1..] {
            let d = (disks[i].0 - disks[j].0).norm();
            let (ri, rj) = (disks[i].1, disks[j].1);
            if (d - (ri + rj)).abs() <= tol || (d - (ri - rj).abs()).abs() <= tol {
                return Err(Error::Construction(format!("disks {i} and {j} are tangent")));
            }
        }
    }
    let outside_others = |i: usize, p: Point| kept.iter().all(|&j| j == i || (p - disks[j].0).norm() > disks[j].1);
    let mut arcs: Vec<Edge> = Vec::new();
    for &i in &kept {
        let (c, r) = disks[i];
        let mut angles: Vec<f64> = kept
            .iter()
            .filter(|&&j| j != i)
            .flat_map(|&j| circle_circle_angles(c, r, disks[j].0, disks[j].1))
            .collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
        let at = |t: f64| c + Point::new(t.cos(), t.sin()) * r;
        if angles.is_empty() {
            if outside_others(i, at(0.3)) {
                arcs.push(Edge::circle(c, r, true));
            }
            continue;
        }
        for k in 0..angles.len() {
            let t0 = angles[k];
            let t1 = if k + 1 < angles.len() { angles[k + 1] } else { angles[0] + 2.0 * PI };
            if t1 - t0 > 1e-13 && outside_others(i, at(0.5 * (t0 + t1))) {
                arcs.push(Edge::arc(c, r, t0, t1, true));
            }
        }
    }
    // Chain arcs head to tail into loops.
    let mut used = vec![false; arcs.len()];
    let mut loops = Vec::new();
    for first in 0..arcs.len() {
        if used[first] {
            continue;
        }
        used[first] = true;
        let mut edges = vec![arcs[first]];
        let origin = arcs[first].start_point();
        let mut tail = arcs[first].end_point();
        while (tail - origin).norm() > 1e-9 {
            let next = (0..arcs.len())
                .filter(|&k| !used[k])
                .min_by(|&a, &b| {
                    let da = (arcs[a].start_point() - tail).norm();
                    let db = (arcs[b].start_point() - tail).norm();
                    da.total_cmp(&db)
                })
                .filter(|&k| (arcs[k].start_point() - tail).norm() <= 1e-9)
                .ok_or_else(|| Error::Construction("union boundary does not close".into()))?;
            used[next] = true;
            edges.push(arcs[next]);
            tail = arcs[next].end_point();
        }
        loops.push(Loop { edges });
    }
    ArcRegion2D::new(loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rational_order() {
        let first: Vec<f64> = (0..11).map(rational).collect();
        assert_eq!(first, vec![0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 1.0 / 3.0, -1.0 / 3.0, 3.0, -3.0]);
        assert_eq!(rational(11), 2.0 / 3.0);
        // 2/4 is skipped
        assert_eq!(rational(19), 0.75);
    }

    #[test]
    fn first_centers() {
        let c: Vec<(f64, f64)> = disk_union_centers(8, 0).iter().map(|(p, _)| (p.x, p.y)).collect();
        assert_eq!(
            c,
            vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (1.0, 1.0), (0.0, -1.0), (0.5, 0.0), (-1.0, 1.0)]
        );
    }

    #[test]
    fn disk_union_perimeter_bound() {
        for n in 1..=16 {
            let e = make_shape(&ShapeSpec::DiskUnion { n, seed: 0 }).unwrap();
            let bound: f64 = 2.0 * PI * (1..=n).map(|j| 0.5f64.powi(j as i32)).sum::<f64>();
            assert!(e.perimeter() <= bound + 1e-12, "n = {n}");
            let area: f64 = PI * (1..=n).map(|j| 0.25f64.powi(j as i32)).sum::<f64>();
            assert!(e.area() <= area + 1e-12);
        }
        // Disk 7 is centered on the boundary of disk 1, so arcs are actually removed.
        let e = make_shape(&ShapeSpec::DiskUnion { n: 8, seed: 0 }).unwrap();
        let bound: f64 = 2.0 * PI * (1..=8).map(|j| 0.5f64.powi(j as i32)).sum::<f64>();
        assert!(e.perimeter() < bound - 1e-4);
    }

    #[test]
    fn disk_union_matches_membership() {
        let disks = disk_union_centers(10, 0);
        let e = make_shape(&ShapeSpec::DiskUnion { n: 10, seed: 0 }).unwrap();
        for i in 0..2000 {
            let p = Point::new(-1.3 + 2.6 * ((i * 37) % 2000) as f64 / 2000.0, -1.3 + 2.6 * i as f64 / 2000.0);
            let inside = disks.iter().any(|(c, r)| (p - *c).norm() < *r);
            assert_eq!(e.contains(p), inside, "{p:?}");
        }
    }

    #[test]
    fn parses_shapes() {
        assert_eq!("annulus 0.01".parse::<ShapeSpec>().unwrap(), ShapeSpec::Annulus(0.01));
        assert_eq!(
            "disk_union 8 0".parse::<ShapeSpec>().unwrap(),
            ShapeSpec::DiskUnion { n: 8, seed: 0 }
        );
        assert!("polygon 0 0 1 0".parse::<ShapeSpec>().is_err());
        assert!("disk 0 0".parse::<ShapeSpec>().is_err());
        assert!("hexagon 1".parse::<ShapeSpec>().is_err());
        assert!(make_shape(&ShapeSpec::Annulus(1.5)).is_err());
        assert!(make_shape(&ShapeSpec::Disk { center: Point::default(), radius: -1.0 }).is_err());
        let two = "disks -2.5 0 1 2.5 0 1".parse::<ShapeSpec>().unwrap();
        let e = make_shape(&two).unwrap();
        assert!((e.area() - 2.0 * PI).abs() < 1e-12);
        assert!((e.perimeter() - 4.0 * PI).abs() < 1e-12);
        assert!("disks 0 0".parse::<ShapeSpec>().is_err());
    }

    #[test]
    fn clockwise_polygon_is_reoriented() {
        let e = make_shape(&"polygon 0 0 0 1 1 1 1 0".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(e.area(), 1.0);
    }
}

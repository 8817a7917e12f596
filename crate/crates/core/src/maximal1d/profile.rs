//! `|u|` on one component of the domain as a list of affine pieces, and the
//! exact supremum of interval means over admissible intervals.
//!
//! For fixed right endpoint `b`, `d/da mean(a, b) = (mean - g(a)) / (b - a)`,
//! and symmetrically in `b`. A maximiser therefore has each endpoint either at
//! a knot of `g = |u|`, at the query point, on the domain boundary, or at an
//! interior stationary point of an affine piece where `g(endpoint) = mean`.
//! Constant pieces never need interior endpoints: if `g = mean` there, the
//! mean is unchanged while sliding the endpoint to the end of the piece. Every
//! combination of these alternatives has a closed form (a quadratic in the free
//! endpoint, or in the common value when both endpoints are stationary), so the
//! candidate set below is finite and contains a maximiser.

use crate::bvfunc1d::{Interval, PiecewiseFunction1D, Segment};

/// `g(t) = v0 + s (t - t0)` on `(a, b)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AbsPiece {
    pub a: f64,
    pub b: f64,
    pub t0: f64,
    pub v0: f64,
    pub s: f64,
}

impl AbsPiece {
    fn g(&self, t: f64) -> f64 {
        self.v0 + self.s * (t - self.t0)
    }

    /// Integral over `[p, q]` inside the piece; exact for affine data.
    fn integral(&self, p: f64, q: f64) -> f64 {
        if p == q {
            return 0.0;
        }
        if self.s == 0.0 {
            return self.v0 * (q - p);
        }
        (q - p) * self.g(0.5 * (p + q))
    }

    fn is_bounded(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

/// Restriction on the interval length `b - a` (twice the radius in 1D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LengthRule {
    Any,
    /// `b - a < len`
    Shorter(f64),
    /// `b - a >= len`
    AtLeast(f64),
}

impl LengthRule {
    fn admits(&self, len: f64) -> bool {
        match *self {
            LengthRule::Any => true,
            LengthRule::Shorter(l) => len < l,
            LengthRule::AtLeast(l) => len >= l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Limit {
    Interval,
    Shrinking,
    Infinite,
    /// The boundary `b - a = len` of an open length constraint.
    LengthBoundary,
    Empty,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Sup {
    pub value: f64,
    pub interval: Option<(f64, f64, f64)>,
    pub limit: Limit,
}

struct Tracker {
    tie: f64,
    best: Option<(f64, f64, f64)>,
    max_value: f64,
}

impl Tracker {
    fn new(tie: f64) -> Self {
        Self {
            tie,
            best: None,
            max_value: f64::NEG_INFINITY,
        }
    }

    fn offer(&mut self, a: f64, b: f64, v: f64) {
        if !v.is_finite() {
            return;
        }
        self.max_value = self.max_value.max(v);
        match self.best {
            None => self.best = Some((a, b, v)),
            Some((ba, bb, bv)) => {
                if v > bv + self.tie {
                    self.best = Some((a, b, v));
                } else if v >= bv - self.tie {
                    let (len, blen) = (b - a, bb - ba);
                    if len < blen || (len == blen && a < ba) {
                        self.best = Some((a, b, v.max(bv)));
                    }
                }
            }
        }
    }
}

fn solve_quadratic(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    out.clear();
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return;
    }
    if a.abs() <= 1e-14 * scale {
        if b != 0.0 {
            out.push(-c / b);
        }
        return;
    }
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc > -1e-12 * (b * b + (4.0 * a * c).abs()) {
            disc = 0.0;
        } else {
            return;
        }
    }
    let sign = if b >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sign * disc.sqrt());
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Profile {
    pub lo: f64,
    pub hi: f64,
    pieces: Vec<AbsPiece>,
    /// `cum[k]` = integral over all bounded pieces before piece `k`.
    cum: Vec<f64>,
    knots: Vec<f64>,
}

impl Profile {
    /// `|u|` restricted to `component`, split at sign changes of affine pieces.
    pub fn new(u: &PiecewiseFunction1D, component: Interval) -> Self {
        let (lo, hi) = (component.a, component.b);
        let mut pieces = Vec::new();
        for p in u.pieces() {
            let (a, b) = (p.a.max(lo), p.b.min(hi));
            if !(a < b) {
                continue;
            }
            match p.segment {
                Segment::Constant(v) => pieces.push(AbsPiece {
                    a,
                    b,
                    t0: if a.is_finite() { a } else if b.is_finite() { b } else { 0.0 },
                    v0: v.abs(),
                    s: 0.0,
                }),
                Segment::Affine { slope, intercept } => {
                    let mut cuts = vec![a];
                    if slope != 0.0 {
                        let root = -intercept / slope;
                        if a < root && root < b {
                            cuts.push(root);
                        }
                    }
                    cuts.push(b);
                    for w in cuts.windows(2) {
                        let (p0, p1) = (w[0], w[1]);
                        let mid = slope * 0.5 * (p0 + p1) + intercept;
                        let sign = if mid < 0.0 { -1.0 } else { 1.0 };
                        pieces.push(AbsPiece {
                            a: p0,
                            b: p1,
                            t0: p0,
                            v0: (sign * (slope * p0 + intercept)).max(0.0),
                            s: sign * slope,
                        });
                    }
                }
            }
        }
        let mut cum = Vec::with_capacity(pieces.len() + 1);
        let mut acc = 0.0;
        for p in &pieces {
            cum.push(acc);
            if p.is_bounded() {
                acc += p.integral(p.a, p.b);
            }
        }
        cum.push(acc);
        let mut knots: Vec<f64> = Vec::new();
        for p in &pieces {
            for t in [p.a, p.b] {
                if t.is_finite() && knots.last().map_or(true, |&l| l < t) {
                    knots.push(t);
                }
            }
        }
        Self { lo, hi, pieces, cum, knots }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Whether `|u|` is a single constant on the whole component.
    pub fn is_constant(&self) -> bool {
        let first = self.pieces[0].v0;
        self.pieces.iter().all(|p| p.s == 0.0 && p.v0 == first)
    }

    fn index_of(&self, t: f64) -> usize {
        self.pieces
            .partition_point(|p| p.b < t)
            .min(self.pieces.len() - 1)
    }

    /// Integral of `|u|` over `[p, q]`, `p <= q`, both finite and inside the closure.
    pub fn integral(&self, p: f64, q: f64) -> f64 {
        let (i, j) = (self.index_of(p), self.index_of(q));
        if i == j {
            return self.pieces[i].integral(p, q);
        }
        let first = self.pieces[i].integral(p, self.pieces[i].b);
        let last = self.pieces[j].integral(self.pieces[j].a, q);
        first + (self.cum[j] - self.cum[i + 1]) + last
    }

    fn signed_integral(&self, p: f64, q: f64) -> f64 {
        if p <= q {
            self.integral(p, q)
        } else {
            -self.integral(q, p)
        }
    }

    pub fn mean(&self, a: f64, b: f64) -> f64 {
        self.integral(a, b) / (b - a)
    }

    pub fn left_limit(&self, t: f64) -> Option<f64> {
        if t <= self.lo {
            return None;
        }
        let i = self.pieces.partition_point(|p| p.b < t);
        self.pieces.get(i).map(|p| p.g(t))
    }

    pub fn right_limit(&self, t: f64) -> Option<f64> {
        if t >= self.hi {
            return None;
        }
        let i = self.pieces.partition_point(|p| p.b <= t);
        self.pieces.get(i).map(|p| p.g(t))
    }

    /// `|u|^∨(t)` for `t` in the closure of the component.
    pub fn upper(&self, t: f64) -> f64 {
        match (self.left_limit(t), self.right_limit(t)) {
            (Some(l), Some(r)) => l.max(r),
            (Some(v), None) | (None, Some(v)) => v,
            (None, None) => f64::NAN,
        }
    }

    pub fn left_tail(&self) -> Option<f64> {
        (!self.lo.is_finite()).then(|| self.pieces[0].v0)
    }

    pub fn right_tail(&self) -> Option<f64> {
        (!self.hi.is_finite()).then(|| self.pieces[self.pieces.len() - 1].v0)
    }

    /// Supremum of `mean(a, b)` over `lo <= a <= x <= b <= hi`, `a < b`, under `rule`,
    /// including the shrinking and infinite-length limits the rule admits.
    pub fn supremum(&self, x: f64, rule: LengthRule, tie: f64) -> Sup {
        let mut left: Vec<f64> = self.knots.iter().copied().filter(|&t| t <= x).collect();
        let mut right: Vec<f64> = self.knots.iter().copied().filter(|&t| t >= x).collect();
        left.push(x);
        right.push(x);
        // Inside an unbounded constant piece there may be no finite candidate at
        // all; any interval inside the piece is as good as the shrinking limit.
        if let Some(p) = self.pieces.get(self.index_of(x)) {
            if p.s == 0.0 && p.a < x && x < p.b && !p.is_bounded() {
                left.push((x - 1.0).max(p.a));
                right.push((x + 1.0).min(p.b));
            }
        }

        let left_affine: Vec<(AbsPiece, f64, f64)> = self
            .pieces
            .iter()
            .filter(|p| p.s != 0.0 && p.a < x)
            .map(|p| (*p, p.a, p.b.min(x)))
            .collect();
        let right_affine: Vec<(AbsPiece, f64, f64)> = self
            .pieces
            .iter()
            .filter(|p| p.s != 0.0 && p.b > x)
            .map(|p| (*p, p.a.max(x), p.b))
            .collect();

        let mut tracker = Tracker::new(tie);
        let offer = |tracker: &mut Tracker, a: f64, b: f64| {
            if a < b && rule.admits(b - a) {
                let v = self.mean(a, b);
                tracker.offer(a, b, v);
            }
        };

        for &a in &left {
            for &b in &right {
                offer(&mut tracker, a, b);
            }
        }

        let mut roots = Vec::with_capacity(2);
        // One endpoint fixed at `y`, the other stationary inside an affine piece:
        // (s/2) tau^2 + s D tau + (v0 D - ΔG) = 0 with tau = t - t0, D = t0 - y,
        // ΔG = ∫_y^{t0} g.
        let stationary = |piece: &AbsPiece, y: f64, roots: &mut Vec<f64>| {
            let d = piece.t0 - y;
            let dg = self.signed_integral(y, piece.t0);
            solve_quadratic(0.5 * piece.s, piece.s * d, piece.v0 * d - dg, roots);
            for r in roots.iter_mut() {
                *r += piece.t0;
            }
        };
        for &a in &left {
            for (q, qa, qb) in &right_affine {
                stationary(q, a, &mut roots);
                for &t in &roots {
                    if *qa <= t && t <= *qb {
                        offer(&mut tracker, a, t);
                    }
                }
            }
        }
        for &b in &right {
            for (p, pa, pb) in &left_affine {
                stationary(p, b, &mut roots);
                for &t in &roots {
                    if *pa <= t && t <= *pb {
                        offer(&mut tracker, t, b);
                    }
                }
            }
        }
        // Both endpoints stationary with common value λ = g(a) = g(b).
        for (p, pa, pb) in &left_affine {
            for (q, qa, qb) in &right_affine {
                if p.a == q.a {
                    continue;
                }
                let i = self.signed_integral(p.t0, q.t0);
                let qa2 = -0.5 / q.s + 0.5 / p.s;
                let qb2 = -(q.t0 - p.t0) + q.v0 / q.s - p.v0 / p.s;
                let qc2 = i - q.v0 * q.v0 / (2.0 * q.s) + p.v0 * p.v0 / (2.0 * p.s);
                solve_quadratic(qa2, qb2, qc2, &mut roots);
                for &lambda in &roots {
                    let a = p.t0 + (lambda - p.v0) / p.s;
                    let b = q.t0 + (lambda - q.v0) / q.s;
                    if *pa <= a && a <= *pb && *qa <= b && b <= *qb {
                        offer(&mut tracker, a, b);
                    }
                }
            }
        }

        // Intervals of length exactly `len`.
        let mut boundary = f64::NEG_INFINITY;
        if let LengthRule::Shorter(len) | LengthRule::AtLeast(len) = rule {
            let amin = self.lo.max(x - len);
            let amax = x.min(self.hi - len);
            if amin <= amax {
                let mut cands = vec![amin, amax];
                for &k in &self.knots {
                    for a in [k, k - len] {
                        if amin <= a && a <= amax {
                            cands.push(a);
                        }
                    }
                }
                for p in &self.pieces {
                    for q in &self.pieces {
                        if p.s == q.s {
                            continue;
                        }
                        let a = (q.v0 + q.s * (len - q.t0) - p.v0 + p.s * p.t0) / (p.s - q.s);
                        if amin <= a && a <= amax && p.a <= a && a <= p.b && q.a <= a + len && a + len <= q.b {
                            cands.push(a);
                        }
                    }
                }
                for a in cands {
                    let v = self.mean(a, a + len);
                    if matches!(rule, LengthRule::AtLeast(_)) {
                        tracker.offer(a, a + len, v);
                    } else if v.is_finite() {
                        boundary = boundary.max(v);
                    }
                }
            }
        }

        let shrinking = if matches!(rule, LengthRule::AtLeast(_)) {
            f64::NEG_INFINITY
        } else {
            self.upper(x)
        };
        let infinite = if matches!(rule, LengthRule::Shorter(_)) {
            f64::NEG_INFINITY
        } else {
            self.left_tail()
                .unwrap_or(f64::NEG_INFINITY)
                .max(self.right_tail().unwrap_or(f64::NEG_INFINITY))
        };

        let attained = tracker.max_value;
        let value = attained.max(shrinking).max(infinite).max(boundary);
        if !value.is_finite() {
            return Sup {
                value: 0.0,
                interval: None,
                limit: Limit::Empty,
            };
        }
        let limit = if attained >= value - tie {
            Limit::Interval
        } else if shrinking >= value - tie {
            Limit::Shrinking
        } else if infinite >= value - tie {
            Limit::Infinite
        } else {
            Limit::LengthBoundary
        };
        Sup {
            value,
            interval: if limit == Limit::Interval { tracker.best } else { None },
            limit,
        }
    }
}

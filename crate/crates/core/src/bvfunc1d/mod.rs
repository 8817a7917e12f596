//! One-dimensional functions of bounded variation of piecewise-constant and
//! piecewise-affine type.
//!
//! A [`PiecewiseFunction1D`] is a finite, ordered list of [`Piece`]s. Adjacent
//! pieces that share an endpoint belong to the same connected component of the
//! domain; a gap between pieces separates components. Outside its pieces a
//! function is undefined: embedding into the whole line is done by adding
//! explicit zero pieces.
//!
//! The derivative of such a function is a [`SignedMeasure1D`] made of jump
//! atoms plus a piecewise-constant density; there is no Cantor part.

mod text;

pub use text::{FunctionDoc, SegmentDoc};

use crate::error::{Error, Result};
use crate::tolerances;
use serde::{Deserialize, Serialize};

/// A finite union of disjoint open intervals, stored in increasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain1D {
    intervals: Vec<Interval>,
}

/// An open interval `(a, b)` whose endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::json")]
    pub a: f64,
    #[serde(with = "crate::json")]
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a < x && x < self.b
    }

    pub fn contains_closed(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_bounded(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

impl Domain1D {
    pub fn new(intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Construction("domain must be nonempty".into()));
        }
        let mut prev_b = f64::NEG_INFINITY;
        let mut out = Vec::with_capacity(intervals.len());
        for (i, &(a, b)) in intervals.iter().enumerate() {
            if a.is_nan() || b.is_nan() || !(a < b) {
                return Err(Error::Construction(format!(
                    "domain interval {i} = ({a}, {b}) must have positive length"
                )));
            }
            if i > 0 && a < prev_b {
                return Err(Error::Construction(format!(
                    "domain intervals must be disjoint and increasing (interval {i} starts at {a} before {prev_b})"
                )));
            }
            prev_b = b;
            out.push(Interval::new(a, b));
        }
        Ok(Self { intervals: out })
    }

    pub fn real_line() -> Self {
        Self {
            intervals: vec![Interval::new(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.component_of(x).is_some()
    }

    /// The component containing `x`, if any.
    pub fn component_of(&self, x: f64) -> Option<Interval> {
        self.intervals.iter().copied().find(|iv| iv.contains(x))
    }

    pub fn in_closure(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains_closed(x))
    }

    /// Whether every component of `self` lies inside one component of `other`.
    pub fn is_subset_of(&self, other: &Domain1D) -> bool {
        self.intervals.iter().all(|iv| {
            other
                .intervals
                .iter()
                .any(|ov| ov.a <= iv.a && iv.b <= ov.b)
        })
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(Interval::is_bounded)
    }
}

/// Description of a function on one piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Constant(f64),
    Affine { slope: f64, intercept: f64 },
}

impl Segment {
    pub fn value_at(&self, t: f64) -> f64 {
        match *self {
            Segment::Constant(v) => v,
            Segment::Affine { slope, intercept } => slope * t + intercept,
        }
    }

    pub fn slope(&self) -> f64 {
        match *self {
            Segment::Constant(_) => 0.0,
            Segment::Affine { slope, .. } => slope,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Segment::Constant(_)) || self.slope() == 0.0
    }

    fn scaled(&self, c: f64) -> Segment {
        match *self {
            Segment::Constant(v) => Segment::Constant(c * v),
            Segment::Affine { slope, intercept } => Segment::Affine {
                slope: c * slope,
                intercept: c * intercept,
            },
        }
    }
}

/// The function on the open interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub segment: Segment,
}

impl Piece {
    pub fn new(a: f64, b: f64, segment: Segment) -> Self {
        Self { a, b, segment }
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.a, self.b)
    }
}

/// Exact piecewise-constant / piecewise-affine function on a finite union of
/// open intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFunction1D {
    pieces: Vec<Piece>,
}

impl PiecewiseFunction1D {
    /// Validates and stores `pieces`.
    ///
    /// Pieces must be nonempty, ordered and non-overlapping; unbounded pieces
    /// must be constant.
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Construction("a function needs at least one piece".into()));
        }
        for (i, p) in pieces.iter().enumerate() {
            let finite_values = match p.segment {
                Segment::Constant(v) => v.is_finite(),
                Segment::Affine { slope, intercept } => slope.is_finite() && intercept.is_finite(),
            };
            if !finite_values {
                return Err(Error::Construction(format!("piece {i} has a non-finite value")));
            }
            if p.a.is_nan() || p.b.is_nan() || !(p.a < p.b) {
                return Err(Error::Construction(format!(
                    "piece {i} = ({}, {}) must have positive length",
                    p.a, p.b
                )));
            }
            if (!p.a.is_finite() || !p.b.is_finite()) && !matches!(p.segment, Segment::Constant(_)) {
                return Err(Error::Construction(format!(
                    "piece {i} is unbounded; unbounded pieces must be constant"
                )));
            }
            if i > 0 && p.a < pieces[i - 1].b {
                return Err(Error::Construction(format!(
                    "piece {i} starts at {} before the previous piece ends at {}",
                    p.a,
                    pieces[i - 1].b
                )));
            }
        }
        Ok(Self { pieces })
    }

    /// `c` on the whole real line.
    pub fn constant(c: f64) -> Self {
        Self {
            pieces: vec![Piece::new(f64::NEG_INFINITY, f64::INFINITY, Segment::Constant(c))],
        }
    }

    /// The indicator of `[a, b]` on the real line.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::step(&[a, b], &[1.0])
    }

    /// Piecewise-constant function on the real line taking `values[i]` on
    /// `(knots[i], knots[i+1])` and zero on both tails.
    pub fn step(knots: &[f64], values: &[f64]) -> Result<Self> {
        if knots.len() != values.len() + 1 || knots.len() < 2 {
            return Err(Error::Construction(
                "step functions need one more knot than values".into(),
            ));
        }
        let mut pieces = vec![Piece::new(f64::NEG_INFINITY, knots[0], Segment::Constant(0.0))];
        for (w, &v) in knots.windows(2).zip(values) {
            pieces.push(Piece::new(w[0], w[1], Segment::Constant(v)));
        }
        pieces.push(Piece::new(knots[knots.len() - 1], f64::INFINITY, Segment::Constant(0.0)));
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Every finite piece endpoint, strictly increasing.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::with_capacity(2 * self.pieces.len());
        for p in &self.pieces {
            for t in [p.a, p.b] {
                if t.is_finite() && out.last().map_or(true, |&l| l < t) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Union of the pieces, with shared endpoints of adjacent pieces included.
    pub fn domain(&self) -> Domain1D {
        let mut intervals: Vec<(f64, f64)> = Vec::new();
        for p in &self.pieces {
            match intervals.last_mut() {
                Some(last) if last.1 == p.a => last.1 = p.b,
                _ => intervals.push((p.a, p.b)),
            }
        }
        Domain1D::new(intervals).expect("pieces were validated")
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.pieces.iter().all(|p| p.segment.is_constant())
    }

    fn piece_index_containing(&self, x: f64) -> Option<usize> {
        let i = self.pieces.partition_point(|p| p.b <= x);
        (i < self.pieces.len() && self.pieces[i].a < x).then_some(i)
    }

    /// One-sided limits `(u(x-), u(x+))`; a side is `None` when no piece
    /// touches `x` from that side.
    pub fn one_sided_limits(&self, x: f64) -> (Option<f64>, Option<f64>) {
        if let Some(i) = self.piece_index_containing(x) {
            let v = self.pieces[i].segment.value_at(x);
            return (Some(v), Some(v));
        }
        let left = self
            .pieces
            .iter()
            .find(|p| p.b == x)
            .map(|p| p.segment.value_at(x));
        let right = self
            .pieces
            .iter()
            .find(|p| p.a == x)
            .map(|p| p.segment.value_at(x));
        (left, right)
    }

    /// The segment value at a point inside a piece; `None` at breakpoints
    /// and outside the domain.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        self.piece_index_containing(x)
            .map(|i| self.pieces[i].segment.value_at(x))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece::new(p.a, p.b, p.segment.scaled(c)))
                .collect(),
        }
    }

    /// Pointwise sum on the common domain.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut cuts: Vec<f64> = Vec::new();
        for p in self.pieces.iter().chain(&other.pieces) {
            cuts.push(p.a);
            cuts.push(p.b);
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let probe = match (a.is_finite(), b.is_finite()) {
                (true, true) => 0.5 * (a + b),
                (false, true) => b - 1.0,
                (true, false) => a + 1.0,
                (false, false) => 0.0,
            };
            let (Some(i), Some(j)) = (self.piece_index_containing(probe), other.piece_index_containing(probe))
            else {
                continue;
            };
            let (s, t) = (self.pieces[i].segment, other.pieces[j].segment);
            let segment = match (s, t) {
                (Segment::Constant(u), Segment::Constant(v)) => Segment::Constant(u + v),
                _ => Segment::Affine {
                    slope: s.slope() + t.slope(),
                    intercept: s.value_at(0.0) + t.value_at(0.0),
                },
            };
            pieces.push(Piece::new(a, b, segment));
        }
        if pieces.is_empty() {
            return Err(Error::Construction("functions have disjoint domains".into()));
        }
        Self::new(pieces)
    }
}

/// Lower and upper approximate limits at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointValues {
    pub lower: f64,
    pub upper: f64,
    pub precise: Option<f64>,
}

impl PointValues {
    fn from_limits(l: f64, r: f64) -> Self {
        let (lower, upper) = (l.min(r), l.max(r));
        Self {
            lower,
            upper,
            precise: (lower == upper).then_some(lower),
        }
    }
}

/// `u^∧(x)`, `u^∨(x)` and, where they agree, the precise value.
pub fn representatives(u: &PiecewiseFunction1D, x: f64) -> Result<PointValues> {
    match u.one_sided_limits(x) {
        (Some(l), Some(r)) => Ok(PointValues::from_limits(l, r)),
        (Some(v), None) | (None, Some(v)) => Ok(PointValues::from_limits(v, v)),
        (None, None) => Err(Error::Domain(format!(
            "x = {x} is outside the closure of the domain"
        ))),
    }
}

/// `|u|^∨(x)`: the larger absolute one-sided limit.
pub fn abs_upper(u: &PiecewiseFunction1D, x: f64) -> Result<f64> {
    match u.one_sided_limits(x) {
        (Some(l), Some(r)) => Ok(l.abs().max(r.abs())),
        (Some(v), None) | (None, Some(v)) => Ok(v.abs()),
        (None, None) => Err(Error::Domain(format!(
            "x = {x} is outside the closure of the domain"
        ))),
    }
}

/// A signed Radon measure on the line: point masses plus a density that is
/// constant on each piece of the generating function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedMeasure1D {
    /// `(location, weight)`, increasing in location.
    pub atoms: Vec<(f64, f64)>,
    /// `(a, b, density)` on the open interval `(a, b)`.
    pub density: Vec<DensityPiece>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityPiece {
    #[serde(with = "crate::json")]
    pub a: f64,
    #[serde(with = "crate::json")]
    pub b: f64,
    pub value: f64,
}

/// A closed, open or half-open interval with finite or infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub a: f64,
    pub b: f64,
    pub include_a: bool,
    pub include_b: bool,
}

impl Span {
    pub fn new(a: f64, b: f64, include_a: bool, include_b: bool) -> Result<Self> {
        if a.is_nan() || b.is_nan() || a > b {
            return Err(Error::Argument(format!("interval endpoints out of order: {a} > {b}")));
        }
        Ok(Self { a, b, include_a, include_b })
    }

    pub fn closed(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, true, true)
    }

    pub fn open(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, false, false)
    }

    pub fn everything() -> Self {
        Self {
            a: f64::NEG_INFINITY,
            b: f64::INFINITY,
            include_a: true,
            include_b: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let left = if self.include_a { self.a <= x } else { self.a < x };
        let right = if self.include_b { x <= self.b } else { x < self.b };
        left && right
    }

    fn overlap(&self, a: f64, b: f64) -> f64 {
        (self.b.min(b) - self.a.max(a)).max(0.0)
    }
}

impl SignedMeasure1D {
    fn mass_impl(&self, span: &Span, absolute: bool) -> f64 {
        let norm = |w: f64| if absolute { w.abs() } else { w };
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|(x, _)| span.contains(*x))
            .map(|&(_, w)| norm(w))
            .sum();
        let density: f64 = self
            .density
            .iter()
            .filter(|d| d.value != 0.0)
            .map(|d| norm(d.value) * span.overlap(d.a, d.b))
            .sum();
        atoms + density
    }

    /// Signed mass of `span`.
    pub fn mass(&self, span: &Span) -> f64 {
        self.mass_impl(span, false)
    }

    /// Total-variation mass of `span`.
    pub fn variation(&self, span: &Span) -> f64 {
        self.mass_impl(span, true)
    }

    pub fn total_variation(&self) -> f64 {
        self.variation(&Span::everything())
    }

    pub fn atom_at(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|(y, _)| *y == x)
            .map(|(_, w)| *w)
            .sum()
    }
}

/// `Du = D^a u + D^j u`: jumps (right minus left limit) at shared breakpoints
/// and the per-piece slope as density.
pub fn derivative_measure(u: &PiecewiseFunction1D) -> SignedMeasure1D {
    let pieces = u.pieces();
    let mut atoms = Vec::new();
    for w in pieces.windows(2) {
        if w[0].b == w[1].a {
            let x = w[0].b;
            let jump = w[1].segment.value_at(x) - w[0].segment.value_at(x);
            if jump != 0.0 {
                atoms.push((x, jump));
            }
        }
    }
    let density = pieces
        .iter()
        .map(|p| DensityPiece {
            a: p.a,
            b: p.b,
            value: p.segment.slope(),
        })
        .collect();
    SignedMeasure1D { atoms, density }
}

/// Signed measure of an interval with the given endpoint inclusion.
pub fn measure_of_interval(
    m: &SignedMeasure1D,
    a: f64,
    b: f64,
    include_a: bool,
    include_b: bool,
) -> Result<f64> {
    Ok(m.mass(&Span::new(a, b, include_a, include_b)?))
}

/// Total-variation measure of an interval with the given endpoint inclusion.
pub fn variation_of_interval(
    m: &SignedMeasure1D,
    a: f64,
    b: f64,
    include_a: bool,
    include_b: bool,
) -> Result<f64> {
    Ok(m.variation(&Span::new(a, b, include_a, include_b)?))
}

/// Both sides of the coarea formula on `span` for a piecewise-constant `u`.
///
/// The left side is `|Du|(A)`. The right side integrates the perimeter of the
/// super-level sets `{u > t}` in `A` over `t`; between consecutive levels the
/// perimeter is constant, so the integral is a finite sum of
/// `(level gap) x (number of boundary points of {u > t} in A)`.
pub fn coarea_check(u: &PiecewiseFunction1D, span: &Span) -> Result<(f64, f64)> {
    if !u.is_piecewise_constant() {
        return Err(Error::Unsupported(
            "the coarea check needs a piecewise-constant function".into(),
        ));
    }
    let lhs = derivative_measure(u).variation(span);

    let mut levels: Vec<f64> = u.pieces().iter().map(|p| p.segment.value_at(0.0)).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let interior_points: Vec<(f64, f64, f64)> = u
        .pieces()
        .windows(2)
        .filter(|w| w[0].b == w[1].a && span.contains(w[0].b))
        .map(|w| (w[0].b, w[0].segment.value_at(0.0), w[1].segment.value_at(0.0)))
        .collect();

    let mut rhs = 0.0;
    for w in levels.windows(2) {
        let t = 0.5 * (w[0] + w[1]);
        let perimeter = interior_points
            .iter()
            .filter(|&&(_, left, right)| (left > t) != (right > t))
            .count();
        rhs += (w[1] - w[0]) * perimeter as f64;
    }
    Ok((lhs, rhs))
}

/// Whether the two sides returned by [`coarea_check`] agree.
pub fn coarea_agrees(lhs: f64, rhs: f64) -> bool {
    (lhs - rhs).abs() <= tolerances::MEASURE * (1.0 + lhs.abs())
}

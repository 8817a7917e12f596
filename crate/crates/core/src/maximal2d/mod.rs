//! Non-centered maximal function in the plane.
//!
//! Supported fields are indicators of arc-bounded regions and nonnegative
//! affine functions on a box. The supremum over balls whose closure contains
//! `x` is found by a deterministic multi-start pattern search (see
//! [`SearchPlan`]), so repeated runs give bit-identical output.

mod field;
mod gradient;
mod search;

pub use field::{line_restriction, maximal_field, Axis, GridSpec, LineTrace, MaximalField};
pub use gradient::{gradient_check, sobolev_ratio, sobolev_ratio_with, GradientCheck, Sandwich, SobolevReport};
pub use search::SearchPlan;

use crate::error::{Error, Result};
use crate::geometry2d::{ArcRegion2D, Ball, Point};
use crate::tolerances::Tolerances;
use search::Problem;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain2D {
    Plane,
    /// Open rectangle `(lo.x, hi.x) × (lo.y, hi.y)`.
    Rect { lo: Point, hi: Point },
}

impl Domain2D {
    pub fn rect(lo: Point, hi: Point) -> Result<Self> {
        if !(lo.x < hi.x && lo.y < hi.y) || !(lo.x.is_finite() && lo.y.is_finite() && hi.x.is_finite() && hi.y.is_finite()) {
            return Err(Error::Argument(format!(
                "rectangle needs finite lo < hi, got ({}, {}) .. ({}, {})",
                lo.x, lo.y, hi.x, hi.y
            )));
        }
        Ok(Domain2D::Rect { lo, hi })
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Domain2D::Plane => p.x.is_finite() && p.y.is_finite(),
            Domain2D::Rect { lo, hi } => p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y,
        }
    }

    /// Distance to the complement; infinite for the plane.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        match self {
            Domain2D::Plane => f64::INFINITY,
            Domain2D::Rect { lo, hi } => (p.x - lo.x).min(hi.x - p.x).min(p.y - lo.y).min(hi.y - p.y),
        }
    }

    fn is_subset_of(&self, lo: Point, hi: Point) -> bool {
        match self {
            Domain2D::Plane => false,
            Domain2D::Rect { lo: a, hi: b } => a.x >= lo.x && a.y >= lo.y && b.x <= hi.x && b.y <= hi.y,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field2D {
    Indicator(ArcRegion2D),
    /// `|g · y + c|` on the closed box `[lo, hi]`, stored with the sign that
    /// makes it nonnegative.
    Affine { gradient: Point, offset: f64, lo: Point, hi: Point },
}

impl Field2D {
    pub fn indicator(region: ArcRegion2D) -> Self {
        Field2D::Indicator(region)
    }

    /// An affine field on a box. Fields that are nonpositive on the box are
    /// negated; fields changing sign are rejected, since their absolute value
    /// is not affine.
    pub fn affine(gradient: Point, offset: f64, lo: Point, hi: Point) -> Result<Self> {
        if !(lo.x < hi.x && lo.y < hi.y) {
            return Err(Error::Argument("affine box needs lo < hi".into()));
        }
        let corners = [lo, Point::new(hi.x, lo.y), hi, Point::new(lo.x, hi.y)];
        let vals: Vec<f64> = corners.iter().map(|p| gradient.dot(*p) + offset).collect();
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if min >= 0.0 {
            Ok(Field2D::Affine { gradient, offset, lo, hi })
        } else if max <= 0.0 {
            Ok(Field2D::Affine { gradient: -gradient, offset: -offset, lo, hi })
        } else {
            Err(Error::Construction(format!(
                "affine field changes sign on its box (range {min} .. {max})"
            )))
        }
    }

    /// Mean of the field over the open ball `B(z, r)`.
    pub fn mean(&self, z: Point, r: f64) -> f64 {
        match self {
            Field2D::Indicator(e) => {
                if e.boundary_distance(z) >= r {
                    return if e.contains(z) { 1.0 } else { 0.0 };
                }
                (e.intersection_area(z, r) / (PI * r * r)).clamp(0.0, 1.0)
            }
            Field2D::Affine { gradient, offset, .. } => gradient.dot(z) + offset,
        }
    }

    /// Upper representative at `x`.
    pub fn upper(&self, x: Point) -> f64 {
        match self {
            Field2D::Indicator(e) => e.upper_indicator(x),
            Field2D::Affine { gradient, offset, .. } => gradient.dot(x) + offset,
        }
    }

    fn check_domain(&self, domain: &Domain2D) -> Result<()> {
        match self {
            Field2D::Indicator(_) => Ok(()),
            Field2D::Affine { lo, hi, .. } => {
                if domain.is_subset_of(*lo, *hi) {
                    Ok(())
                } else {
                    Err(Error::Argument("affine fields need a rectangular domain inside their box".into()))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalBallResult {
    pub ball: Ball,
    pub value: f64,
    pub x_on_boundary: bool,
    pub closure_in_domain: bool,
    #[serde(rename = "empty_Bx")]
    pub empty_bx: bool,
    #[serde(skip)]
    pub(crate) params: [f64; 3],
}

impl OptimalBallResult {
    /// Bit set used in CSV output: 1 on boundary, 2 closure in domain, 4 empty.
    pub fn flags(&self) -> u8 {
        self.x_on_boundary as u8 | (self.closure_in_domain as u8) << 1 | (self.empty_bx as u8) << 2
    }
}

/// Optimal-ball solver holding a field, a domain and the search settings.
#[derive(Debug, Clone)]
pub struct MaximalOperator2D {
    field: Field2D,
    domain: Domain2D,
    plan: SearchPlan,
    tol: Tolerances,
}

impl MaximalOperator2D {
    pub fn new(field: Field2D, domain: Domain2D) -> Result<Self> {
        field.check_domain(&domain)?;
        Ok(Self { field, domain, plan: SearchPlan::FULL, tol: Tolerances::default() })
    }

    pub fn with_plan(mut self, plan: SearchPlan) -> Self {
        self.plan = plan;
        self
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn field(&self) -> &Field2D {
        &self.field
    }

    pub fn domain(&self) -> &Domain2D {
        &self.domain
    }

    pub fn optimal_ball(&self, x: Point) -> Result<OptimalBallResult> {
        self.optimal_ball_with(x, &self.plan, None)
    }

    /// `M_Ω u(x)` without the ball. Interior points of an indicator are
    /// answered directly.
    pub fn value(&self, x: Point) -> Result<f64> {
        if let Field2D::Indicator(e) = &self.field {
            if self.domain.contains(x) && e.contains(x) && e.boundary_distance(x) > 1e-12 {
                return Ok(1.0);
            }
        }
        Ok(self.optimal_ball(x)?.value)
    }

    pub(crate) fn optimal_ball_with(&self, x: Point, plan: &SearchPlan, hint: Option<[f64; 3]>) -> Result<OptimalBallResult> {
        if !self.domain.contains(x) {
            return Err(Error::Domain(format!("point ({}, {}) is outside the domain", x.x, x.y)));
        }
        let mut cap = match (&self.domain, &self.field) {
            (Domain2D::Rect { lo, hi }, _) => 0.5 * (hi.x - lo.x).min(hi.y - lo.y),
            (Domain2D::Plane, Field2D::Indicator(e)) => {
                let (lo, hi) = e.bbox();
                let mid = (lo + hi) * 0.5;
                4.0 * e.bbox_diagonal() + (x - mid).norm()
            }
            (Domain2D::Plane, Field2D::Affine { .. }) => unreachable!("rejected at construction"),
        };
        let mut best;
        let mut rounds = 0;
        loop {
            let problem = Problem { field: &self.field, domain: &self.domain, x, cap, tie: self.tol.tie };
            best = problem.search(plan, hint, self.tol.pattern);
            // Balls beyond the cap have mean at most area / (π cap²).
            let escape = match (&self.domain, &self.field) {
                (Domain2D::Plane, Field2D::Indicator(e)) => e.area() / (PI * cap * cap) >= 0.5 * best.value,
                _ => false,
            };
            rounds += 1;
            if !escape || rounds >= 20 {
                break;
            }
            cap *= 2.0;
        }
        let ball = Ball::open(best.z, best.r)?;
        let closure_in_domain = match self.domain {
            Domain2D::Plane => true,
            Domain2D::Rect { .. } => self.domain.boundary_distance(best.z) - best.r > 1e-7 * best.r,
        };
        let upper = self.field.upper(x);
        let empty_bx = best.value < upper - self.tol.empty_optimal_set;
        Ok(OptimalBallResult {
            ball,
            value: if empty_bx { upper } else { best.value },
            x_on_boundary: best.v[0].hypot(best.v[1]) >= 1.0 - 1e-6,
            closure_in_domain,
            empty_bx,
            params: best.v,
        })
    }
}

pub fn optimal_ball(field: &Field2D, domain: &Domain2D, x: Point) -> Result<OptimalBallResult> {
    MaximalOperator2D::new(field.clone(), *domain)?.optimal_ball(x)
}

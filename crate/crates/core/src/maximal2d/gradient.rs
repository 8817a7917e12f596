//! Derivative formula checks and the gradient-to-perimeter experiment.

use super::{Domain2D, Field2D, GridSpec, MaximalOperator2D, OptimalBallResult};
use crate::error::{Error, Result};
use crate::geometry2d::{ArcRegion2D, Ball, BallMode, Point};
use serde::Serialize;

/// Half-open bounds `D_k(B̄^{k,+}) / |B| <= fd_k <= D_k(B̄^{k,-}) / |B|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sandwich {
    pub lower: Point,
    pub upper: Point,
    pub holds: [bool; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientCheck {
    pub ball: OptimalBallResult,
    pub fd_grad: Point,
    /// `None` when the formula does not apply.
    pub formula_grad: Option<Point>,
    pub rel_err: Option<f64>,
    /// `D u` of the open and closed optimal ball, divided by its area.
    pub open: Point,
    pub closed: Point,
    pub sandwich: Sandwich,
}

const SANDWICH_SLACK: f64 = 1e-2;

impl MaximalOperator2D {
    pub fn gradient_check(&self, x: Point, h: f64) -> Result<GradientCheck> {
        if !(h > 0.0) {
            return Err(Error::Argument(format!("finite difference step must be positive, got {h}")));
        }
        let ball = self.optimal_ball(x)?;
        if h >= ball.ball.radius / 10.0 {
            return Err(Error::Argument(format!(
                "step {h} is not below a tenth of the optimal radius {}",
                ball.ball.radius
            )));
        }
        if self.domain.boundary_distance(x) < 2.0 * h {
            return Err(Error::Argument(format!("point is within {} of the domain boundary", 2.0 * h)));
        }
        let m = |p: Point| self.value(p);
        let fd_grad = Point::new(
            (m(x + Point::new(h, 0.0))? - m(x - Point::new(h, 0.0))?) / (2.0 * h),
            (m(x + Point::new(0.0, h))? - m(x - Point::new(0.0, h))?) / (2.0 * h),
        );
        let b = ball.ball;
        let per_area = |mode: BallMode| -> Point {
            match &self.field {
                Field2D::Indicator(e) => {
                    let ball = Ball { mode, ..b };
                    e.boundary_measure(&ball).vector * (1.0 / b.area())
                }
                Field2D::Affine { gradient, .. } => *gradient,
            }
        };
        let open = per_area(BallMode::Open);
        let closed = per_area(BallMode::Closed);
        let lower = Point::new(per_area(BallMode::HalfPlus(1)).x, per_area(BallMode::HalfPlus(2)).y);
        let upper = Point::new(per_area(BallMode::HalfMinus(1)).x, per_area(BallMode::HalfMinus(2)).y);
        let holds = [0, 1].map(|k| {
            lower.coord(k + 1) <= fd_grad.coord(k + 1) + SANDWICH_SLACK
                && fd_grad.coord(k + 1) <= upper.coord(k + 1) + SANDWICH_SLACK
        });
        let applicable =
            ball.closure_in_domain && ball.x_on_boundary && !ball.empty_bx && fd_grad.norm() > self.tol.gradient_gate;
        let formula_grad = applicable.then_some(open);
        let rel_err = formula_grad.map(|f| (f - fd_grad).norm() / fd_grad.norm());
        Ok(GradientCheck { ball, fd_grad, formula_grad, rel_err, open, closed, sandwich: Sandwich { lower, upper, holds } })
    }
}

pub fn gradient_check(field: &Field2D, domain: &Domain2D, x: Point, h: f64) -> Result<GradientCheck> {
    MaximalOperator2D::new(field.clone(), *domain)?.gradient_check(x, h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SobolevReport {
    pub l1_grad_norm: f64,
    pub perimeter: f64,
    pub ratio: f64,
    /// Upper bound on the part of `‖∇M‖₁` outside the grid window.
    #[serde(with = "crate::json")]
    pub tail_bound: f64,
    /// Largest value of `M` on the window boundary.
    pub boundary_max: f64,
    pub coverage_warning: bool,
    pub coarse_warning: bool,
    pub h: f64,
    pub points: usize,
}

pub fn sobolev_ratio(region: &ArcRegion2D, grid: &GridSpec) -> Result<SobolevReport> {
    let op = MaximalOperator2D::new(Field2D::indicator(region.clone()), Domain2D::Plane)?;
    sobolev_ratio_with(&op, grid)
}

/// `Σ |∇M| h²` over interior lattice points, with central differences.
pub fn sobolev_ratio_with(op: &MaximalOperator2D, grid: &GridSpec) -> Result<SobolevReport> {
    let region = match op.field() {
        Field2D::Indicator(e) => e,
        Field2D::Affine { .. } => return Err(Error::Unsupported("the ratio is defined for indicator fields".into())),
    };
    if grid.nx < 3 || grid.ny < 3 {
        return Err(Error::Argument("grid needs at least 3 points per axis".into()));
    }
    let v = op.values_on(grid)?;
    let (nx, ny, h) = (grid.nx, grid.ny, grid.h);
    let at = |i: usize, j: usize| v[j * nx + i];
    let mut l1 = 0.0;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let gx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * h);
            let gy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * h);
            l1 += gx.hypot(gy) * h * h;
        }
    }
    let mut boundary_max: f64 = 0.0;
    for i in 0..nx {
        boundary_max = boundary_max.max(at(i, 0)).max(at(i, ny - 1));
    }
    for j in 0..ny {
        boundary_max = boundary_max.max(at(0, j)).max(at(nx - 1, j));
    }
    // Beyond distance s from the centre of an enclosing disk of radius r0,
    // M <= 4A / (π (s - r0)²) and |∇M| <= 16A / (π (s - r0)³).
    let (lo, hi) = region.bbox();
    let c = (lo + hi) * 0.5;
    let r0 = 0.5 * region.bbox_diagonal();
    let far = grid.point(nx - 1, ny - 1);
    let rw = (c.x - grid.origin.x).min(c.y - grid.origin.y).min(far.x - c.x).min(far.y - c.y);
    let tail_bound = if rw > r0 {
        let g = rw - r0;
        32.0 * region.area() * (1.0 / g + r0 / (2.0 * g * g))
    } else {
        f64::INFINITY
    };
    let perimeter = region.perimeter();
    Ok(SobolevReport {
        l1_grad_norm: l1,
        perimeter,
        ratio: l1 / perimeter,
        tail_bound,
        boundary_max,
        coverage_warning: boundary_max > 0.02,
        coarse_warning: h > region.bbox_diagonal() / 20.0,
        h,
        points: grid.len(),
    })
}

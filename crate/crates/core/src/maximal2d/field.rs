//! Batch evaluation on rectangular lattices.

use super::{Domain2D, Field2D, MaximalOperator2D, OptimalBallResult, SearchPlan};
use crate::error::{Error, Result};
use crate::geometry2d::Point;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Lattice `origin + (i h, j h)` for `0 <= i < nx`, `0 <= j < ny`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub origin: Point,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(origin: Point, h: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Argument(format!("grid spacing must be positive, got {h}")));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::Argument("grid needs at least one point per axis".into()));
        }
        Ok(Self { origin, h, nx, ny })
    }

    /// Lattice covering `[lo, hi]` with spacing `h`; `hi` is reached when
    /// the extent is a multiple of `h`.
    pub fn covering(lo: Point, hi: Point, h: f64) -> Result<Self> {
        if !(hi.x >= lo.x && hi.y >= lo.y) {
            return Err(Error::Argument("grid window needs lo <= hi".into()));
        }
        let n = |len: f64| (len / h + 1e-9).floor() as usize + 1;
        Self::new(lo, h, n(hi.x - lo.x), n(hi.y - lo.y))
    }

    pub fn point(&self, i: usize, j: usize) -> Point {
        self.origin + Point::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalField {
    pub grid: GridSpec,
    /// Row-major: index `j * nx + i`.
    pub values: Vec<f64>,
    #[serde(skip)]
    pub balls: Vec<OptimalBallResult>,
}

impl MaximalField {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn ball(&self, i: usize, j: usize) -> &OptimalBallResult {
        &self.balls[j * self.grid.nx + i]
    }

    /// CSV with header `x,y,M,zc_x,zc_y,r,flags`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,M,zc_x,zc_y,r,flags\n");
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                let p = self.grid.point(i, j);
                let b = self.ball(i, j);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    p.x,
                    p.y,
                    self.value(i, j),
                    b.ball.center.x,
                    b.ball.center.y,
                    b.ball.radius,
                    b.flags()
                );
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// A row: `j` fixed, `x` varying.
    X,
    /// A column: `i` fixed, `y` varying.
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineTrace {
    pub values: Vec<f64>,
    pub max_jump: f64,
}

impl MaximalOperator2D {
    /// Full search at every lattice point. Rows are evaluated in parallel.
    pub fn field_on(&self, grid: &GridSpec) -> Result<MaximalField> {
        check_grid(&self.domain, grid)?;
        let rows: Vec<Vec<OptimalBallResult>> = (0..grid.ny)
            .into_par_iter()
            .map(|j| (0..grid.nx).map(|i| self.optimal_ball(grid.point(i, j))).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let balls: Vec<OptimalBallResult> = rows.into_iter().flatten().collect();
        let values = balls.iter().map(|b| b.value).collect();
        Ok(MaximalField { grid: *grid, values, balls })
    }

    /// Values only, using the cheaper plan warm-started from the previous
    /// point of each row.
    pub fn values_on(&self, grid: &GridSpec) -> Result<Vec<f64>> {
        check_grid(&self.domain, grid)?;
        let rows: Vec<Vec<f64>> = (0..grid.ny)
            .into_par_iter()
            .map(|j| {
                let mut hint = None;
                let mut row = Vec::with_capacity(grid.nx);
                for i in 0..grid.nx {
                    let x = grid.point(i, j);
                    if let Field2D::Indicator(e) = &self.field {
                        if e.contains(x) && e.boundary_distance(x) > 1e-12 {
                            row.push(1.0);
                            continue;
                        }
                    }
                    let res = self.optimal_ball_with(x, &SearchPlan::WARM, hint)?;
                    hint = Some(res.params);
                    row.push(res.value);
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(rows.into_iter().flatten().collect())
    }
}

fn check_grid(domain: &Domain2D, grid: &GridSpec) -> Result<()> {
    for (i, j) in [(0, 0), (grid.nx - 1, 0), (0, grid.ny - 1), (grid.nx - 1, grid.ny - 1)] {
        let p = grid.point(i, j);
        if !domain.contains(p) {
            return Err(Error::Domain(format!("grid point ({}, {}) is outside the domain", p.x, p.y)));
        }
    }
    Ok(())
}

pub fn maximal_field(field: &Field2D, domain: &Domain2D, grid: &GridSpec) -> Result<MaximalField> {
    MaximalOperator2D::new(field.clone(), *domain)?.field_on(grid)
}

pub fn line_restriction(mf: &MaximalField, axis: Axis, index: usize) -> Result<LineTrace> {
    let g = &mf.grid;
    let values: Vec<f64> = match axis {
        Axis::X if index < g.ny => (0..g.nx).map(|i| mf.value(i, index)).collect(),
        Axis::Y if index < g.nx => (0..g.ny).map(|j| mf.value(index, j)).collect(),
        _ => return Err(Error::Argument(format!("line index {index} is outside the grid"))),
    };
    let max_jump = values.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    Ok(LineTrace { values, max_jump })
}

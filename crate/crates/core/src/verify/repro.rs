use super::suites::{
    annulus_case_sup, discontinuity_witness, strip_grid, strip_operator, ANNULUS_CASES, ANNULUS_POINTS,
};
use super::{elapsed, Check, Context, Report};
use crate::corpus::corpus_function;
use crate::error::{Error, Result};
use crate::geometry2d::{disk_union_centers, make_shape, Ball, Point, ShapeSpec};
use crate::maximal1d::MaximalOperator1D;
use crate::maximal2d::{Domain2D, Field2D, GridSpec, MaximalOperator2D};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

pub const REPRO_IDS: &[&str] = &["triangle_1d", "strip_2d", "annulus", "enlarged_rationals"];

/// A file produced by a reproduction, for plotting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub file_name: String,
    #[serde(skip)]
    pub contents: String,
}

/// Runs one example reproduction, returning its report and CSV artifacts.
pub fn reproduce(id: &str, ctx: &Context) -> Result<(Report, Vec<Artifact>)> {
    let start = Instant::now();
    let (checks, artifacts) = match id {
        "triangle_1d" => triangle_1d(ctx)?,
        "strip_2d" => strip_2d(ctx)?,
        "annulus" => annulus(ctx)?,
        "enlarged_rationals" => enlarged_rationals(ctx)?,
        other => {
            return Err(Error::Argument(format!(
                "unknown example `{other}`; expected one of {}",
                REPRO_IDS.join(", ")
            )))
        }
    };
    let report = Report { suite: id.to_string(), checks, runtime_s: elapsed(ctx, start) };
    Ok((report, artifacts))
}

/// `M u` for `u(t) = t` on `[0, 1]` and zero elsewhere.
pub fn triangle_closed_form(x: f64) -> f64 {
    if x <= 0.0 {
        0.5 / (1.0 - x)
    } else if x <= 1.0 {
        0.5 * (1.0 + x)
    } else {
        let a = x - (x * x - 1.0).sqrt();
        (1.0 - a * a) / (2.0 * (x - a))
    }
}

fn triangle_1d(ctx: &Context) -> Result<(Vec<Check>, Vec<Artifact>)> {
    let u = corpus_function("triangle").expect("shipped corpus has the triangle");
    let op = MaximalOperator1D::new(&u, &u.domain())?.with_tolerances(ctx.tol);
    let mut csv = String::from("x,M,closed_form,a,b\n");
    let mut checks = Vec::new();
    let mut run = |label: &str, xs: Vec<f64>, checks: &mut Vec<Check>| -> Result<()> {
        let mut err: f64 = 0.0;
        for x in xs {
            let m = op.value(x)?;
            let exact = triangle_closed_form(x);
            err = err.max((m.value - exact).abs());
            let (a, b) = m.witness.map_or((f64::NAN, f64::NAN), |w| (w.a, w.b));
            let _ = writeln!(csv, "{x},{},{exact},{a},{b}", m.value);
        }
        checks.push(Check::at_most(label, 0.0, err, 1e-10));
        Ok(())
    };
    run("max error on [-3, 0)", (0..50).map(|i| -3.0 + 3.0 * i as f64 / 50.0).collect(), &mut checks)?;
    run("max error on [0, 1] (101 points)", (0..=100).map(|i| i as f64 / 100.0).collect(), &mut checks)?;
    run("max error on (1, 4]", (1..=50).map(|i| 1.0 + 3.0 * i as f64 / 50.0).collect(), &mut checks)?;
    let w = op.value(0.5)?.witness;
    checks.push(Check::flag("witness at 0.5 is (0.5, 1)", true, w.is_some_and(|w| w.a == 0.5 && w.b == 1.0)));
    Ok((checks, vec![Artifact { file_name: "triangle_1d.csv".into(), contents: csv }]))
}

fn strip_2d(ctx: &Context) -> Result<(Vec<Check>, Vec<Artifact>)> {
    let op = strip_operator(ctx)?;
    let grid = strip_grid();
    let mf = op.field_on(&grid)?;
    let mut err: f64 = 0.0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            err = err.max((mf.value(i, j) - 0.5 * (1.0 + grid.point(i, j).x)).abs());
        }
    }
    let res = op.optimal_ball(Point::new(0.3, 0.0))?;
    let checks = vec![
        Check::at_most("max |M - (1 + x1)/2| on 21x21 grid", 0.0, err, 1e-3),
        Check::close("ball center x at (0.3, 0)", 0.65, res.ball.center.x, 1e-4),
        Check::close("ball radius at (0.3, 0)", 0.35, res.ball.radius, 1e-4),
        Check::close("value at (0.3, 0)", 0.65, res.value, 1e-6),
    ];
    Ok((checks, vec![Artifact { file_name: "strip_2d.csv".into(), contents: mf.to_csv() }]))
}

fn annulus(ctx: &Context) -> Result<(Vec<Check>, Vec<Artifact>)> {
    let delta = 0.01;
    let e0 = make_shape(&ShapeSpec::Annulus(delta))?;
    let m_unit = e0.ball_mean(&Ball::open(Point::default(), 1.0)?);
    let mut checks = vec![Check::close("m(B(0,1)) for the annulus", 1.0 - 0.99 * 0.99, m_unit, 1e-12)];
    for (lo, hi) in ANNULUS_CASES {
        let sup = annulus_case_sup(&e0, delta, lo, hi)?;
        checks.push(Check::at_most(format!("sup of m over {lo} <= r <= {hi}"), m_unit, sup, 0.0));
    }
    let e = make_shape(&ShapeSpec::PerturbedAnnulus(delta))?;
    let op = MaximalOperator2D::new(Field2D::indicator(e), Domain2D::Plane)?.with_tolerances(ctx.tol);
    for (px, py) in ANNULUS_POINTS {
        let res = op.optimal_ball(Point::new(px, py))?;
        let off = res.ball.center.norm().max((res.ball.radius - 1.0).abs());
        checks.push(Check::at_most(format!("x = ({px}, {py}): distance to B(0,1)"), 0.0, off, 1e-3));
    }
    let grid = GridSpec::new(Point::new(-0.005, -0.005), 0.001, 11, 11)?;
    let mf = op.field_on(&grid)?;
    Ok((checks, vec![Artifact { file_name: "annulus.csv".into(), contents: mf.to_csv() }]))
}

fn enlarged_rationals(ctx: &Context) -> Result<(Vec<Check>, Vec<Artifact>)> {
    let n = 8;
    let disks = disk_union_centers(n, 0);
    let e = make_shape(&ShapeSpec::DiskUnion { n, seed: 0 })?;
    let bound = 2.0 * PI * (1.0 - 0.5f64.powi(n as i32));
    let mut checks = vec![Check::at_most("perimeter of the 8-disk union", bound, e.perimeter(), 0.0)];
    let op = MaximalOperator2D::new(Field2D::indicator(e.clone()), Domain2D::Plane)?.with_tolerances(ctx.tol);
    let w = discontinuity_witness(&e, &disks, &op)?;
    checks.push(Check::flag("discontinuity witness found", true, w.is_some()));
    if let Some(w) = &w {
        checks.push(Check::at_most(format!("M1_E at ({}, {})", w.x.x, w.x.y), 1.0 - 1e-3, w.mx, 0.0));
        checks.push(Check::at_least(format!("M1_E at ({}, {})", w.y.x, w.y.y), 1.0 - 1e-6, w.my, 0.0));
    }
    let mut csv = String::from("x,y,M\n");
    let grid = GridSpec::new(Point::new(-1.5, -1.5), 0.1, 31, 31)?;
    let values = op.values_on(&grid)?;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let p = grid.point(i, j);
            let _ = writeln!(csv, "{},{},{}", p.x, p.y, values[j * grid.nx + i]);
        }
    }
    Ok((checks, vec![Artifact { file_name: "enlarged_rationals.csv".into(), contents: csv }]))
}

use super::{Check, Context};
use crate::bvfunc1d::{abs_upper, coarea_check, derivative_measure, PiecewiseFunction1D, Span};
use crate::corpus::{corpus, random_steps};
use crate::error::Result;
use crate::geometry2d::{make_shape, ArcRegion2D, Ball, BallMode, Point, ShapeSpec};
use crate::maximal1d::{check_support, variation_of_maximal, MaximalOperator1D};
use crate::maximal2d::{line_restriction, sobolev_ratio_with, Axis, Domain2D, Field2D, GridSpec, MaximalOperator2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const APL_SLACK: f64 = 1e-9;
const SUPPORT_SLACK: f64 = 1e-8;
const REPRESENTATION_TOL: f64 = 1e-4;
const REPRESENTATION_SAMPLES: usize = 100_000;

fn operator(u: &PiecewiseFunction1D, ctx: &Context) -> Result<MaximalOperator1D> {
    Ok(MaximalOperator1D::new(u, &u.domain())?.with_tolerances(ctx.tol))
}

/// `|Du|(Ω)` for `Ω` the domain of `u`.
pub(super) fn variation_on_domain(u: &PiecewiseFunction1D) -> Result<f64> {
    let du = derivative_measure(u);
    let mut total = 0.0;
    for c in u.domain().intervals() {
        total += du.variation(&Span::open(c.a, c.b)?);
    }
    Ok(total)
}

/// Sampled total variation of `x -> Mu(x)` with tails closed by their limits.
pub(super) fn grid_variation(u: &PiecewiseFunction1D, op: &MaximalOperator1D, samples: usize) -> Result<f64> {
    let omega = op.domain().clone();
    let per = samples / omega.intervals().len().max(1);
    let knots = u.breakpoints();
    let mut total = 0.0;
    for (k, c) in omega.intervals().iter().enumerate() {
        let inner: Vec<f64> = knots.iter().copied().filter(|&t| c.contains(t)).collect();
        let tail = |x: f64| u.value_at(x).map(f64::abs).unwrap_or(0.0);
        let (lo, hi) = match (inner.first(), inner.last()) {
            (Some(&first), Some(&last)) => (
                if c.a.is_finite() { c.a } else { first - 1.0 },
                if c.b.is_finite() { c.b } else { last + 1.0 },
            ),
            _ if c.a.is_finite() && c.b.is_finite() => (c.a, c.b),
            _ => continue,
        };
        let m = |x: f64| op.value_in_closure(k, x);
        let mut prev = m(lo);
        if !c.a.is_finite() {
            total += (prev - tail(lo - 1.0)).abs();
        }
        for i in 1..=per {
            let x = lo + (hi - lo) * i as f64 / per as f64;
            let cur = m(x);
            total += (cur - prev).abs();
            prev = cur;
        }
        if !c.b.is_finite() {
            total += (prev - tail(hi + 1.0)).abs();
        }
    }
    Ok(total)
}

pub(super) fn apl_1d(ctx: &Context) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (i, u) in random_steps(1, 100, 30).iter().enumerate() {
        let op = operator(u, ctx)?;
        let var = variation_of_maximal(&op.contact_structure()).total;
        checks.push(Check::at_most(format!("random step {i}: |DMu| <= |Du|"), variation_on_domain(u)?, var, APL_SLACK));
    }
    Ok(checks)
}

pub(super) fn representation_1d(ctx: &Context) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, u) in corpus()? {
        let op = operator(&u, ctx)?;
        let var = variation_of_maximal(&op.contact_structure()).total;
        let grid = grid_variation(&u, &op, REPRESENTATION_SAMPLES)?;
        checks.push(Check::close(format!("{name}: contact sum vs sampled variation"), grid, var, REPRESENTATION_TOL));
        checks.push(Check::at_most(format!("{name}: |DMu| <= |Du|"), variation_on_domain(&u)?, var, APL_SLACK));
    }
    Ok(checks)
}

pub(super) fn support_1d(ctx: &Context) -> Result<Vec<Check>> {
    let mut inputs: Vec<(String, PiecewiseFunction1D)> =
        corpus()?.into_iter().map(|(n, u)| (n.to_string(), u)).collect();
    inputs.extend(random_steps(2, 50, 30).into_iter().enumerate().map(|(i, u)| (format!("random step {i}"), u)));
    let mut checks = Vec::new();
    for (name, u) in inputs {
        let op = operator(&u, ctx)?;
        let report = check_support(&u, op.domain(), &op.contact_structure())?;
        checks.push(Check::at_most(format!("{name}: |Du| off H and S"), 0.0, report.offending_mass, SUPPORT_SLACK));
    }
    Ok(checks)
}

pub(super) fn coarea_1d(ctx: &Context) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (i, u) in random_steps(3, 100, 50).iter().enumerate() {
        let span = if i % 2 == 0 {
            Span::everything()
        } else {
            let a: f64 = rng.gen_range(-10.0..5.0);
            Span::new(a, a + rng.gen_range(0.0..10.0), rng.gen(), rng.gen())?
        };
        let (lhs, rhs) = coarea_check(u, &span)?;
        checks.push(Check::close(
            format!("random step {i}: |Du|(A) vs level-set sum"),
            lhs,
            rhs,
            ctx.tol.measure * (1.0 + lhs.abs()),
        ));
    }
    Ok(checks)
}

pub(super) fn dominance(ctx: &Context) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, u) in corpus()? {
        let op = operator(&u, ctx)?;
        let knots = u.breakpoints();
        let (klo, khi) = (knots[0], knots[knots.len() - 1]);
        let mut excess = f64::NEG_INFINITY;
        let mut below_upper: f64 = 0.0;
        for q in 0..10 {
            let x = klo - 1.0 + (khi - klo + 2.0) * (q as f64 + 0.37) / 10.0;
            let Some(c) = op.domain().component_of(x) else { continue };
            let m = op.value(x)?.value;
            below_upper = below_upper.max(abs_upper(&u, x)? - m);
            let lo = c.a.max(x - 20.0);
            let hi = c.b.min(x + 20.0);
            for _ in 0..10_000 {
                let a = rng.gen_range(lo..=x);
                let b = rng.gen_range(x..=hi);
                if b > a {
                    excess = excess.max(op.interval_mean(a, b)? - m);
                }
            }
        }
        checks.push(Check::at_most(format!("{name}: random interval means <= Mu"), 0.0, excess, 1e-12));
        checks.push(Check::at_most(format!("{name}: |u|^v <= Mu"), 0.0, below_upper, 1e-12));
    }
    let shapes = ["perturbed_annulus 0.2", "disk_union 4 0", "polygon 0 0 2 0 0.6 1.4"];
    for spec in shapes {
        let e = make_shape(&spec.parse()?)?;
        let op = MaximalOperator2D::new(Field2D::indicator(e.clone()), Domain2D::Plane)?.with_tolerances(ctx.tol);
        let mut excess = f64::NEG_INFINITY;
        let mut below_upper: f64 = 0.0;
        for _ in 0..3 {
            let x = Point::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let m = op.optimal_ball(x)?.value;
            below_upper = below_upper.max(e.upper_indicator(x) - m);
            for _ in 0..1000 {
                let r: f64 = rng.gen_range(0.01..4.0);
                let phi: f64 = rng.gen_range(0.0..2.0 * PI);
                let rho: f64 = rng.gen_range(0.0..=1.0);
                let z = x + Point::new(phi.cos(), phi.sin()) * (rho * r);
                excess = excess.max(e.ball_mean(&Ball::open(z, r)?) - m);
            }
        }
        checks.push(Check::at_most(format!("{spec}: random ball means <= M1_E"), 0.0, excess, 1e-9));
        checks.push(Check::at_most(format!("{spec}: 1_E^v <= M1_E"), 0.0, below_upper, 1e-9));
    }
    Ok(checks)
}

pub(super) fn strip_operator(ctx: &Context) -> Result<MaximalOperator2D> {
    let lo = Point::new(0.0, -2.0);
    let hi = Point::new(1.0, 2.0);
    let field = Field2D::affine(Point::new(1.0, 0.0), 0.0, lo, hi)?;
    Ok(MaximalOperator2D::new(field, Domain2D::rect(lo, hi)?)?.with_tolerances(ctx.tol))
}

pub(super) fn strip_grid() -> GridSpec {
    GridSpec { origin: Point::new(0.05, -0.9), h: 0.045, nx: 21, ny: 21 }
}

pub(super) fn strip_2d(ctx: &Context) -> Result<Vec<Check>> {
    let op = strip_operator(ctx)?;
    let grid = strip_grid();
    let mf = op.field_on(&grid)?;
    let mut err: f64 = 0.0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            err = err.max((mf.value(i, j) - 0.5 * (1.0 + grid.point(i, j).x)).abs());
        }
    }
    let mut checks = vec![Check::at_most("max |M - (1 + x1)/2| on 21x21 grid", 0.0, err, 1e-3)];
    let mut jump: f64 = 0.0;
    for j in 0..grid.ny {
        jump = jump.max(line_restriction(&mf, Axis::X, j)?.max_jump);
    }
    checks.push(Check::at_most("max jump along rows", grid.h / 2.0, jump, 1e-6));
    Ok(checks)
}

pub(super) fn gradient_samples() -> Result<Vec<(String, ArcRegion2D, Vec<Point>)>> {
    let slab = make_shape(&"polygon -3 -3 3 -3 3 0 -3 0".parse()?)?;
    let mut slab_pts = Vec::new();
    for s in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        for t in [0.3, 0.6, 1.0] {
            slab_pts.push(Point::new(s, t));
        }
    }
    let tri = make_shape(&"polygon 0 0 2 0 0.6 1.4".parse()?)?;
    let c = Point::new(2.6 / 3.0, 1.4 / 3.0);
    let tri_pts = (0..16)
        .map(|k| {
            let phi = 2.0 * PI * (k as f64 + 0.5) / 16.0;
            c + Point::new(phi.cos(), phi.sin()) * 1.8
        })
        .collect();
    Ok(vec![("slab".into(), slab, slab_pts), ("triangle".into(), tri, tri_pts)])
}

pub(super) const GRADIENT_STEP: f64 = 1e-3;

pub(super) fn gradient_2d(ctx: &Context) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, e, pts) in gradient_samples()? {
        let op = MaximalOperator2D::new(Field2D::indicator(e), Domain2D::Plane)?.with_tolerances(ctx.tol);
        let (mut applicable, mut formula_ok, mut sandwich_ok, mut total) = (0usize, 0usize, 0usize, 0usize);
        for x in pts {
            let g = op.gradient_check(x, GRADIENT_STEP)?;
            total += 1;
            if g.sandwich.holds.iter().all(|&b| b) {
                sandwich_ok += 1;
            }
            if let Some(err) = g.rel_err {
                applicable += 1;
                if err <= 1e-2 {
                    formula_ok += 1;
                }
            }
        }
        checks.push(Check::at_least(format!("{name}: applicable points"), 1.0, applicable as f64, 0.0));
        checks.push(Check::at_least(
            format!("{name}: fraction with formula error <= 1e-2"),
            0.9,
            formula_ok as f64 / applicable.max(1) as f64,
            0.0,
        ));
        checks.push(Check::at_least(
            format!("{name}: fraction with sandwich holding"),
            0.95,
            sandwich_ok as f64 / total.max(1) as f64,
            0.0,
        ));
    }
    Ok(checks)
}

pub(super) const ANNULUS_POINTS: [(f64, f64); 5] = [(0.0, 0.0), (0.004, 0.0), (0.0, 0.004), (-0.003, 0.003), (0.002, -0.004)];
pub(super) const ANNULUS_CASES: [(f64, f64); 3] = [(0.49, 0.63), (0.63, 0.8), (0.8, 0.95)];

/// Largest mean of the annulus over balls `B(z, r)`, `r` in the range and
/// `|z| <= r + δ`, on a 1e-3 lattice. The annulus is radial, so `z = (s, 0)`.
pub(super) fn annulus_case_sup(e0: &ArcRegion2D, delta: f64, r_lo: f64, r_hi: f64) -> Result<f64> {
    let step = 1e-3;
    let nr = ((r_hi - r_lo) / step).round() as usize;
    let mut best: f64 = 0.0;
    for i in 0..=nr {
        let r = r_lo + (r_hi - r_lo) * i as f64 / nr as f64;
        let ns = ((r + delta) / step).ceil() as usize;
        for k in 0..=ns {
            let s = (r + delta) * k as f64 / ns as f64;
            best = best.max(e0.ball_mean(&Ball::open(Point::new(s, 0.0), r)?));
        }
    }
    Ok(best)
}

pub(super) fn counterexample_annulus(ctx: &Context) -> Result<Vec<Check>> {
    let delta = 0.01;
    let e = make_shape(&ShapeSpec::PerturbedAnnulus(delta))?;
    let op = MaximalOperator2D::new(Field2D::indicator(e.clone()), Domain2D::Plane)?.with_tolerances(ctx.tol);
    let mut checks = Vec::new();
    for (px, py) in ANNULUS_POINTS {
        let res = op.optimal_ball(Point::new(px, py))?;
        checks.push(Check::at_most(format!("x = ({px}, {py}): |center|"), 0.0, res.ball.center.norm(), 1e-3));
        checks.push(Check::close(format!("x = ({px}, {py}): radius"), 1.0, res.ball.radius, 1e-3));
    }
    let d2 = |mode| -> Result<f64> { Ok(e.boundary_measure(&Ball::new(Point::default(), 1.0, mode)?).vector.y / PI) };
    checks.push(Check::flag("D2 over B(0,1) is negative", true, d2(BallMode::Open)? < 0.0));
    checks.push(Check::flag("D2 over the closed ball is positive", true, d2(BallMode::Closed)? > 0.0));
    checks.push(Check::flag("D2 over the (2,+) half-open ball is negative", true, d2(BallMode::HalfPlus(2))? < 0.0));
    checks.push(Check::flag("D2 over the (2,-) half-open ball is positive", true, d2(BallMode::HalfMinus(2))? > 0.0));
    let e0 = make_shape(&ShapeSpec::Annulus(delta))?;
    let m_unit = e0.ball_mean(&Ball::open(Point::default(), 1.0)?);
    for (lo, hi) in ANNULUS_CASES {
        let sup = annulus_case_sup(&e0, delta, lo, hi)?;
        checks.push(Check::flag(format!("sup of m over {lo} <= r <= {hi} is below m(B(0,1))"), true, sup < m_unit));
    }
    Ok(checks)
}

pub(super) struct Witness {
    pub x: Point,
    pub mx: f64,
    pub y: Point,
    pub my: f64,
}

/// A point just outside one of the disks where `M1_E` is clearly below 1,
/// paired with a point inside the same disk within distance 1e-2.
pub(super) fn discontinuity_witness(e: &ArcRegion2D, disks: &[(Point, f64)], op: &MaximalOperator2D) -> Result<Option<Witness>> {
    let eta = 2e-3;
    for (c, rho) in disks.iter().rev() {
        for k in 0..8 {
            let phi = PI * k as f64 / 4.0 + 0.1;
            let dir = Point::new(phi.cos(), phi.sin());
            let x = *c + dir * (rho + eta);
            let y = *c + dir * (rho - eta.min(0.5 * rho));
            if e.upper_indicator(x) != 0.0 || !e.contains(y) {
                continue;
            }
            let mx = op.value(x)?;
            let my = op.value(y)?;
            if mx < 1.0 - 1e-3 && my >= 1.0 - 1e-6 {
                return Ok(Some(Witness { x, mx, y, my }));
            }
        }
    }
    Ok(None)
}

pub(super) fn enlarged_rationals(ctx: &Context) -> Result<Vec<Check>> {
    let n = 8;
    let disks = crate::geometry2d::disk_union_centers(n, 0);
    let e = make_shape(&ShapeSpec::DiskUnion { n, seed: 0 })?;
    let bound = 2.0 * PI * (1.0 - 0.5f64.powi(n as i32));
    let mut checks = vec![Check::at_most("perimeter of the 8-disk union", bound, e.perimeter(), 0.0)];
    let op = MaximalOperator2D::new(Field2D::indicator(e.clone()), Domain2D::Plane)?.with_tolerances(ctx.tol);
    match discontinuity_witness(&e, &disks, &op)? {
        Some(w) => {
            checks.push(Check::flag("discontinuity witness found", true, true));
            checks.push(Check::at_most("M1_E at the witness", 1.0 - 1e-3, w.mx, 0.0));
            checks.push(Check::at_least("M1_E at a point within 1e-2", 1.0 - 1e-6, w.my, 0.0));
            checks.push(Check::at_most("distance between the two points", 1e-2, (w.x - w.y).norm(), 0.0));
        }
        None => checks.push(Check::flag("discontinuity witness found", true, false)),
    }
    Ok(checks)
}

pub(super) const SOBOLEV_SHAPES: [(&str, &str); 3] = [
    ("disk", "disk 0 0 1"),
    ("square", "polygon 0 0 1 0 1 1 0 1"),
    ("two disks", "disks -2.5 0 1 2.5 0 1"),
];

pub(super) fn sobolev_grid(e: &ArcRegion2D, h: f64) -> Result<GridSpec> {
    let (lo, hi) = e.bbox();
    let pad = Point::new(5.0, 5.0);
    GridSpec::covering(lo - pad, hi + pad, h)
}

pub(super) fn sobolev_ratio(ctx: &Context) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, spec) in SOBOLEV_SHAPES {
        let e = make_shape(&spec.parse()?)?;
        let op = MaximalOperator2D::new(Field2D::indicator(e.clone()), Domain2D::Plane)?.with_tolerances(ctx.tol);
        let coarse = sobolev_ratio_with(&op, &sobolev_grid(&e, 0.1)?)?;
        let fine = sobolev_ratio_with(&op, &sobolev_grid(&e, 0.05)?)?;
        checks.push(Check::flag(format!("{name}: ratio finite at h = 0.1"), true, coarse.ratio.is_finite()));
        checks.push(Check::flag(format!("{name}: ratio finite at h = 0.05"), true, fine.ratio.is_finite()));
        checks.push(Check::at_most(
            format!("{name}: relative change of the ratio under h -> h/2"),
            0.1,
            (fine.ratio - coarse.ratio).abs() / fine.ratio,
            0.0,
        ));
    }
    Ok(checks)
}

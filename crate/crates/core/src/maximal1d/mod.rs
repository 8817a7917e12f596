//! The non-centered maximal function of a piecewise affine function on an
//! open subset of the line.
//!
//! `M u(x)` is the supremum of `mean(|u|, (a, b))` over intervals
//! `(a, b) ⊂ Ω` with `x ∈ [a, b]`, together with the shrinking limit
//! `|u|^∨(x)`. Values are exact up to rounding; see [`profile`] for the
//! candidate argument.

mod contact;
mod profile;

pub use contact::{check_support, contact_structure, variation_of_maximal, ContactInterval, ContactStructure, SupportReport, Variation};

use crate::bvfunc1d::{Domain1D, Interval, PiecewiseFunction1D};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;
use profile::{LengthRule, Limit, Profile};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateInterval {
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

/// How the supremum is reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Attainment {
    Interval,
    /// Only as the interval shrinks to `x`.
    ShrinkingLimit,
    /// Only as the interval grows to infinite length.
    InfiniteLimit,
    /// Only at the excluded boundary `2r = 2R` of the small-radius operator.
    RadiusLimit,
    /// No admissible interval (large radii on a short component).
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaximalValue {
    pub value: f64,
    pub witness: Option<CandidateInterval>,
    pub attainment: Attainment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusMode {
    /// `r < R`
    Small,
    /// `r >= R`
    Large,
}

/// Precomputed `|u|` profiles for each component of `Ω`.
#[derive(Debug, Clone)]
pub struct MaximalOperator1D {
    omega: Domain1D,
    profiles: Vec<Profile>,
    tol: Tolerances,
}

impl MaximalOperator1D {
    pub fn new(u: &PiecewiseFunction1D, omega: &Domain1D) -> Result<Self> {
        if !omega.is_subset_of(&u.domain()) {
            return Err(Error::Domain("Ω is not contained in the domain of u".into()));
        }
        let profiles = omega.intervals().iter().map(|&c| Profile::new(u, c)).collect();
        Ok(Self {
            omega: omega.clone(),
            profiles,
            tol: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn domain(&self) -> &Domain1D {
        &self.omega
    }

    pub(crate) fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub(crate) fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    fn component(&self, x: f64) -> Result<usize> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("x = {x} is not a finite point")));
        }
        self.omega
            .intervals()
            .iter()
            .position(|c| c.contains(x))
            .ok_or_else(|| Error::Domain(format!("x = {x} is not in Ω")))
    }

    fn package(sup: profile::Sup) -> MaximalValue {
        MaximalValue {
            value: sup.value,
            witness: sup.interval.map(|(a, b, value)| CandidateInterval { a, b, value }),
            attainment: match sup.limit {
                Limit::Interval => Attainment::Interval,
                Limit::Shrinking => Attainment::ShrinkingLimit,
                Limit::Infinite => Attainment::InfiniteLimit,
                Limit::LengthBoundary => Attainment::RadiusLimit,
                Limit::Empty => Attainment::Empty,
            },
        }
    }

    pub fn value(&self, x: f64) -> Result<MaximalValue> {
        let k = self.component(x)?;
        Ok(Self::package(self.profiles[k].supremum(x, LengthRule::Any, self.tol.tie)))
    }

    pub fn restricted(&self, x: f64, radius: f64, mode: RadiusMode) -> Result<MaximalValue> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Argument(format!("radius must be positive and finite, got {radius}")));
        }
        let k = self.component(x)?;
        let rule = match mode {
            RadiusMode::Small => LengthRule::Shorter(2.0 * radius),
            RadiusMode::Large => LengthRule::AtLeast(2.0 * radius),
        };
        Ok(Self::package(self.profiles[k].supremum(x, rule, self.tol.tie)))
    }

    /// Mean of `|u|` over `(a, b)`, which must lie in one component of `Ω`.
    pub fn interval_mean(&self, a: f64, b: f64) -> Result<f64> {
        if !(a < b) {
            return Err(Error::Argument(format!("interval needs a < b, got ({a}, {b})")));
        }
        let k = self
            .omega
            .intervals()
            .iter()
            .position(|c| c.a <= a && b <= c.b)
            .ok_or_else(|| Error::Domain(format!("({a}, {b}) is not inside one component of Ω")))?;
        Ok(self.profiles[k].mean(a, b))
    }

    /// `M u` at a point of the closure of component `k`, as the limit from inside.
    pub(crate) fn value_in_closure(&self, k: usize, x: f64) -> f64 {
        self.profiles[k].supremum(x, LengthRule::Any, self.tol.tie).value
    }

    pub(crate) fn upper_in_closure(&self, k: usize, x: f64) -> f64 {
        self.profiles[k].upper(x)
    }

    pub(crate) fn component_interval(&self, k: usize) -> Interval {
        self.omega.intervals()[k]
    }
}

pub fn maximal_value(u: &PiecewiseFunction1D, omega: &Domain1D, x: f64) -> Result<MaximalValue> {
    MaximalOperator1D::new(u, omega)?.value(x)
}

pub fn maximal_restricted(
    u: &PiecewiseFunction1D,
    omega: &Domain1D,
    x: f64,
    radius: f64,
    mode: RadiusMode,
) -> Result<f64> {
    Ok(MaximalOperator1D::new(u, omega)?.restricted(x, radius, mode)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvfunc1d::{Piece, Segment};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> PiecewiseFunction1D {
        PiecewiseFunction1D::new(vec![
            Piece::new(f64::NEG_INFINITY, 0.0, Segment::Constant(0.0)),
            Piece::new(0.0, 1.0, Segment::Affine { slope: 1.0, intercept: 0.0 }),
            Piece::new(1.0, f64::INFINITY, Segment::Constant(0.0)),
        ])
        .unwrap()
    }

    fn triangle_exact(x: f64) -> f64 {
        if x < 0.0 {
            0.5 / (1.0 - x)
        } else if x <= 1.0 {
            0.5 * (1.0 + x)
        } else {
            let a = x - (x * x - 1.0).sqrt();
            (1.0 - a * a) / (2.0 * (x - a))
        }
    }

    fn line() -> Domain1D {
        Domain1D::real_line()
    }

    /// Mean of `|u|` by midpoint quadrature fine enough to be exact on affine pieces.
    fn direct_mean(u: &PiecewiseFunction1D, a: f64, b: f64) -> f64 {
        let mut cuts = vec![a, b];
        for t in u.breakpoints() {
            if a < t && t < b {
                cuts.push(t);
            }
        }
        for p in u.pieces() {
            if let Segment::Affine { slope, intercept } = p.segment {
                let r = -intercept / slope;
                if a < r && r < b && slope != 0.0 {
                    cuts.push(r);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        let total: f64 = cuts
            .windows(2)
            .map(|w| (w[1] - w[0]) * u.value_at(0.5 * (w[0] + w[1])).unwrap().abs())
            .sum();
        total / (b - a)
    }

    #[test]
    fn triangle_examples() {
        let m = maximal_value(&triangle(), &line(), 0.5).unwrap();
        assert_abs_diff_eq!(m.value, 0.75, epsilon = 1e-15);
        let w = m.witness.unwrap();
        assert_eq!((w.a, w.b), (0.5, 1.0));

        let m = maximal_value(&triangle(), &line(), 1.25).unwrap();
        assert_abs_diff_eq!(m.value, 0.5, epsilon = 1e-14);
        let w = m.witness.unwrap();
        assert_abs_diff_eq!(w.a, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(w.b, 1.25, epsilon = 1e-12);
    }

    #[test]
    fn triangle_matches_closed_form() {
        let op = MaximalOperator1D::new(&triangle(), &line()).unwrap();
        for i in 0..400 {
            let x = -3.0 + i as f64 * 0.0173;
            assert_abs_diff_eq!(op.value(x).unwrap().value, triangle_exact(x), epsilon = 1e-13);
        }
    }

    #[test]
    fn triangle_random_intervals_never_beat_value() {
        let u = triangle();
        let op = MaximalOperator1D::new(&u, &line()).unwrap();
        let x = 1.25;
        let m = op.value(x).unwrap().value;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut best: f64 = 0.0;
        for _ in 0..1_000_000 {
            let a = x - rng.gen::<f64>() * 2.0;
            let b = x + rng.gen::<f64>() * 2.0;
            let lo = a.max(0.0).min(1.0);
            let hi = b.max(0.0).min(1.0);
            best = best.max((hi * hi - lo * lo) / (2.0 * (b - a)));
        }
        assert!(best <= m + 1e-15);
        assert!(m - best < 5e-3);
    }

    #[test]
    fn indicator_examples() {
        let u = PiecewiseFunction1D::indicator(0.0, 1.0).unwrap();
        let m = maximal_value(&u, &line(), 2.0).unwrap();
        assert_abs_diff_eq!(m.value, 0.5, epsilon = 1e-15);
        let w = m.witness.unwrap();
        assert_eq!((w.a, w.b), (0.0, 2.0));

        let large = maximal_restricted(&u, &line(), 0.5, 10.0, RadiusMode::Large).unwrap();
        assert_abs_diff_eq!(large, 0.05, epsilon = 1e-15);
    }

    #[test]
    fn constant_function() {
        let u = PiecewiseFunction1D::constant(-3.0);
        let m = maximal_value(&u, &line(), 0.3).unwrap();
        assert_eq!(m.value, 3.0);
        let w = m.witness.expect("some interval attains a constant");
        assert!(w.a <= 0.3 && 0.3 <= w.b && w.a < w.b);
    }

    #[test]
    fn shrinking_limit_has_no_witness() {
        // A strict local maximum of |u| at 0.
        let u = PiecewiseFunction1D::new(vec![
            Piece::new(f64::NEG_INFINITY, -1.0, Segment::Constant(0.0)),
            Piece::new(-1.0, 0.0, Segment::Affine { slope: 1.0, intercept: 1.0 }),
            Piece::new(0.0, 1.0, Segment::Affine { slope: -1.0, intercept: 1.0 }),
            Piece::new(1.0, f64::INFINITY, Segment::Constant(0.0)),
        ])
        .unwrap();
        let m = maximal_value(&u, &line(), 0.0).unwrap();
        assert_eq!(m.value, 1.0);
        assert!(m.witness.is_none());
        assert_eq!(m.attainment, Attainment::ShrinkingLimit);
    }

    #[test]
    fn infinite_limit_has_no_witness() {
        // |u| = 1 on the tails with a dip to 0 around the origin.
        let u = PiecewiseFunction1D::step(&[-1.0, 1.0], &[-1.0]).unwrap().add(&PiecewiseFunction1D::constant(1.0)).unwrap();
        let m = maximal_value(&u, &line(), 0.0).unwrap();
        assert_eq!(m.value, 1.0);
        assert!(m.witness.is_none());
        assert_eq!(m.attainment, Attainment::InfiniteLimit);
    }

    #[test]
    fn bounded_domain_uses_boundary() {
        let u = PiecewiseFunction1D::constant(1.0).add(&PiecewiseFunction1D::indicator(0.0, 1.0).unwrap()).unwrap();
        let omega = Domain1D::new(vec![(0.5, 3.0)]).unwrap();
        let m = maximal_value(&u, &omega, 2.0).unwrap();
        // best interval is (0.5, 2): mean (0.5 * 2 + 1) / 1.5
        assert_abs_diff_eq!(m.value, 2.0 / 1.5, epsilon = 1e-15);
        assert!(maximal_value(&u, &omega, 0.5).is_err());
        assert!(maximal_value(&u, &omega, 3.5).is_err());
    }

    #[test]
    fn domain_must_lie_in_domain_of_u() {
        let u = PiecewiseFunction1D::new(vec![Piece::new(0.0, 1.0, Segment::Constant(1.0))]).unwrap();
        assert!(MaximalOperator1D::new(&u, &line()).is_err());
        let omega = Domain1D::new(vec![(0.0, 1.0)]).unwrap();
        assert!(MaximalOperator1D::new(&u, &omega).is_ok());
    }

    #[test]
    fn large_radius_on_short_component_is_empty() {
        let u = PiecewiseFunction1D::constant(1.0);
        let omega = Domain1D::new(vec![(0.0, 1.0)]).unwrap();
        let op = MaximalOperator1D::new(&u, &omega).unwrap();
        let m = op.restricted(0.5, 1.0, RadiusMode::Large).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.attainment, Attainment::Empty);
        assert!(op.restricted(0.5, 0.0, RadiusMode::Small).is_err());
    }

    #[test]
    fn sign_changing_affine_uses_absolute_value() {
        // u = t on (-1, 1)
        let u = PiecewiseFunction1D::new(vec![Piece::new(-1.0, 1.0, Segment::Affine { slope: 1.0, intercept: 0.0 })]).unwrap();
        let omega = Domain1D::new(vec![(-1.0, 1.0)]).unwrap();
        let op = MaximalOperator1D::new(&u, &omega).unwrap();
        assert_abs_diff_eq!(op.value(0.0).unwrap().value, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(op.value(0.9).unwrap().value, 0.95, epsilon = 1e-15);
    }

    fn random_function(seed: u64) -> PiecewiseFunction1D {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..8);
        let mut t = -2.0;
        let mut pieces = vec![];
        let mut knots = vec![t];
        for _ in 0..n {
            t += rng.gen_range(0.1..1.0);
            knots.push(t);
        }
        pieces.push(Piece::new(f64::NEG_INFINITY, knots[0], Segment::Constant(rng.gen_range(-1.0..1.0))));
        for w in knots.windows(2) {
            let seg = if rng.gen_bool(0.5) {
                Segment::Constant(rng.gen_range(-2.0..2.0))
            } else {
                Segment::Affine {
                    slope: rng.gen_range(-3.0..3.0),
                    intercept: rng.gen_range(-2.0..2.0),
                }
            };
            pieces.push(Piece::new(w[0], w[1], seg));
        }
        pieces.push(Piece::new(*knots.last().unwrap(), f64::INFINITY, Segment::Constant(rng.gen_range(-1.0..1.0))));
        PiecewiseFunction1D::new(pieces).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dominates_random_intervals(seed in 0u64..10_000, x in -2.5f64..3.0) {
            let u = random_function(seed);
            let op = MaximalOperator1D::new(&u, &line()).unwrap();
            let m = op.value(x).unwrap();
            prop_assert!(m.value >= crate::bvfunc1d::abs_upper(&u, x).unwrap() - 1e-12);
            if let Some(w) = m.witness {
                prop_assert!(w.a <= x && x <= w.b);
                prop_assert!((direct_mean(&u, w.a, w.b) - m.value).abs() < 1e-9);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            for _ in 0..1000 {
                let a = x - rng.gen::<f64>().powi(2) * 5.0;
                let b = x + rng.gen::<f64>().powi(2) * 5.0;
                if b > a {
                    prop_assert!(direct_mean(&u, a, b) <= m.value + 1e-9);
                }
            }
        }

        #[test]
        fn homogeneous(seed in 0u64..10_000, x in -2.5f64..3.0, c in -4.0f64..4.0) {
            let u = random_function(seed);
            let m = maximal_value(&u, &line(), x).unwrap().value;
            let mc = maximal_value(&u.scale(c), &line(), x).unwrap().value;
            prop_assert!((mc - c.abs() * m).abs() <= 1e-12 * (1.0 + m));
        }

        #[test]
        fn subadditive(s1 in 0u64..10_000, s2 in 0u64..10_000, x in -2.5f64..3.0) {
            let (u, v) = (random_function(s1), random_function(s2));
            let w = u.add(&v).unwrap();
            let mu = maximal_value(&u, &line(), x).unwrap().value;
            let mv = maximal_value(&v, &line(), x).unwrap().value;
            let mw = maximal_value(&w, &line(), x).unwrap().value;
            prop_assert!(mw <= mu + mv + 1e-12);
        }

        #[test]
        fn max_of_restricted_modes(seed in 0u64..10_000, x in -2.5f64..3.0, r in 0.01f64..4.0) {
            let u = random_function(seed);
            let op = MaximalOperator1D::new(&u, &line()).unwrap();
            let full = op.value(x).unwrap().value;
            let small = op.restricted(x, r, RadiusMode::Small).unwrap().value;
            let large = op.restricted(x, r, RadiusMode::Large).unwrap().value;
            prop_assert!((full - small.max(large)).abs() <= 1e-12);
        }
    }

    #[test]
    fn small_mode_with_huge_radius_is_full_operator() {
        for seed in 0..50 {
            let u = random_function(seed);
            let op = MaximalOperator1D::new(&u, &line()).unwrap();
            for i in 0..20 {
                let x = -2.5 + 0.27 * i as f64;
                let full = op.value(x).unwrap();
                if full.attainment == Attainment::Interval {
                    let small = op.restricted(x, 1e3, RadiusMode::Small).unwrap().value;
                    assert_abs_diff_eq!(small, full.value, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn large_mode_is_lipschitz() {
        // |M_R u(x) - M_R u(y)| <= ‖u‖₁ / (4 R²) |x - y| when u has zero tails.
        for seed in 0..20 {
            let u = PiecewiseFunction1D::step(&[0.0, 0.5, 1.5, 2.0], &[1.0, -2.0, 0.5]).unwrap().scale(1.0 + seed as f64);
            let l1 = (0.5 + 2.0 * 1.0 + 0.25) * (1.0 + seed as f64);
            let op = MaximalOperator1D::new(&u, &line()).unwrap();
            for r in [0.1, 0.5, 2.0] {
                let bound = l1 / (4.0 * r * r);
                let mut prev = op.restricted(-3.0, r, RadiusMode::Large).unwrap().value;
                for i in 1..600 {
                    let x = -3.0 + 0.01 * i as f64;
                    let cur = op.restricted(x, r, RadiusMode::Large).unwrap().value;
                    assert!((cur - prev).abs() <= bound * 0.01 * (1.0 + 1e-9) + 1e-12);
                    prev = cur;
                }
            }
        }
    }
}

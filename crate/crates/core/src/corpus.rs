//! Shipped test functions and a seeded generator of random step functions.

use crate::bvfunc1d::PiecewiseFunction1D;
use crate::error::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SOURCES: &[(&str, &str)] = &[
    ("affine_mix", include_str!("../corpus/affine_mix.txt")),
    ("bounded_domain", include_str!("../corpus/bounded_domain.txt")),
    ("half_line", include_str!("../corpus/half_line.txt")),
    ("indicator", include_str!("../corpus/indicator.txt")),
    ("mixed_steps", include_str!("../corpus/mixed_steps.txt")),
    ("negative_tail", include_str!("../corpus/negative_tail.txt")),
    ("nonzero_tails", include_str!("../corpus/nonzero_tails.txt")),
    ("plateau_dip", include_str!("../corpus/plateau_dip.txt")),
    ("ramp_down", include_str!("../corpus/ramp_down.txt")),
    ("sawtooth", include_str!("../corpus/sawtooth.txt")),
    ("sign_change", include_str!("../corpus/sign_change.txt")),
    ("signed_steps", include_str!("../corpus/signed_steps.txt")),
    ("spike", include_str!("../corpus/spike.txt")),
    ("staircase", include_str!("../corpus/staircase.txt")),
    ("tent", include_str!("../corpus/tent.txt")),
    ("three_levels", include_str!("../corpus/three_levels.txt")),
    ("triangle", include_str!("../corpus/triangle.txt")),
    ("two_bumps", include_str!("../corpus/two_bumps.txt")),
    ("two_components", include_str!("../corpus/two_components.txt")),
    ("wide_dip", include_str!("../corpus/wide_dip.txt")),
];

/// The shipped corpus, parsed, in name order.
pub fn corpus() -> Result<Vec<(&'static str, PiecewiseFunction1D)>> {
    SOURCES.iter().map(|(name, text)| Ok((*name, PiecewiseFunction1D::parse(text)?))).collect()
}

pub fn corpus_function(name: &str) -> Option<PiecewiseFunction1D> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| PiecewiseFunction1D::parse(text).expect("shipped corpus parses"))
}

/// A step function on the line with zero tails, between 2 and
/// `max_breakpoints` knots in `[-10, 10]` and values in `[-3, 3]`.
pub fn random_step(rng: &mut ChaCha8Rng, max_breakpoints: usize) -> PiecewiseFunction1D {
    let n = rng.gen_range(2..=max_breakpoints.max(2));
    let mut knots: Vec<f64> = (0..n).map(|_| (rng.gen_range(-10.0f64..10.0) * 64.0).round() / 64.0).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    if knots.len() < 2 {
        knots = vec![0.0, 1.0];
    }
    let values: Vec<f64> = (1..knots.len()).map(|_| (rng.gen_range(-3.0f64..3.0) * 16.0).round() / 16.0).collect();
    PiecewiseFunction1D::step(&knots, &values).expect("sorted distinct knots")
}

/// `count` random step functions from a fixed seed.
pub fn random_steps(seed: u64, count: usize, max_breakpoints: usize) -> Vec<PiecewiseFunction1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_step(&mut rng, max_breakpoints)).collect()
}

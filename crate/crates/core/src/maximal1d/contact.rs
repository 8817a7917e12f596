//! The contact complement `H_u = {M u > |u|^∨}` and the variation of `M u`.
//!
//! On each component of `H_u`, `M u` has no strict local maximum, so it
//! decreases to a minimum at some `c_j` and then increases. The variation of
//! `M u` is therefore determined by its values at `a_j`, `c_j`, `b_j`.

use super::MaximalOperator1D;
use crate::bvfunc1d::{derivative_measure, representatives, Domain1D, PiecewiseFunction1D};
use crate::error::Result;
use serde::Serialize;

/// Grid points per component used to locate `H_u` before bisection.
pub const CONTACT_GRID: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactInterval {
    #[serde(with = "crate::json")]
    pub a: f64,
    #[serde(with = "crate::json")]
    pub b: f64,
    pub c: f64,
    #[serde(rename = "Ma")]
    pub ma: f64,
    #[serde(rename = "Mc")]
    pub mc: f64,
    #[serde(rename = "Mb")]
    pub mb: f64,
    /// `M u` is monotone on the interval and `c` is its midpoint.
    #[serde(skip)]
    pub monotone: bool,
}

impl ContactInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.a < x && x < self.b
    }

    pub fn variation(&self) -> f64 {
        (self.ma - self.mc).abs() + (self.mc - self.mb).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactStructure {
    pub intervals: Vec<ContactInterval>,
}

impl ContactStructure {
    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn minima(&self) -> Vec<f64> {
        self.intervals.iter().map(|i| i.c).collect()
    }

    /// Length of `(p, q) ∩ H_u`.
    pub fn overlap(&self, p: f64, q: f64) -> f64 {
        self.intervals
            .iter()
            .map(|i| {
                let (lo, hi) = (p.max(i.a), q.min(i.b));
                if hi > lo {
                    hi - lo
                } else {
                    0.0
                }
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variation {
    pub total: f64,
    pub breakdown: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportReport {
    pub pass: bool,
    pub offending_mass: f64,
    pub offending_atoms: Vec<f64>,
}

const SUPPORT_SLACK: f64 = 1e-8;

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

impl MaximalOperator1D {
    pub fn contact_structure(&self) -> ContactStructure {
        let tol = *self.tolerances();
        let mut intervals = Vec::new();
        for (k, profile) in self.profiles().iter().enumerate() {
            if profile.is_constant() {
                continue;
            }
            let comp = self.component_interval(k);
            let knots = profile.knots();
            let wlo = if comp.a.is_finite() { comp.a } else { knots[0] - 1.0 };
            let whi = if comp.b.is_finite() { comp.b } else { knots[knots.len() - 1] + 1.0 };
            let mut samples: Vec<f64> = (0..=CONTACT_GRID)
                .map(|i| wlo + (whi - wlo) * i as f64 / CONTACT_GRID as f64)
                .chain(knots.iter().copied().filter(|&t| wlo <= t && t <= whi))
                .collect();
            samples.sort_by(f64::total_cmp);
            samples.dedup();

            let m = |t: f64| self.value_in_closure(k, t);
            let in_h = |t: f64| m(t) - self.upper_in_closure(k, t) > tol.contact;
            let flags: Vec<bool> = samples.iter().map(|&t| in_h(t)).collect();
            let bisect = |mut outside: f64, mut inside: f64| {
                while (inside - outside).abs() > tol.bisection {
                    let mid = 0.5 * (inside + outside);
                    if mid == inside || mid == outside {
                        break;
                    }
                    if in_h(mid) {
                        inside = mid;
                    } else {
                        outside = mid;
                    }
                }
                outside
            };

            let mut i = 0;
            while i < samples.len() {
                if !flags[i] {
                    i += 1;
                    continue;
                }
                let mut j = i;
                while j + 1 < samples.len() && flags[j + 1] {
                    j += 1;
                }
                // Beyond the window the profile is constant, so the status of
                // the first (last) sample extends to the infinite tail.
                let a = if i == 0 {
                    if comp.a.is_finite() {
                        comp.a
                    } else {
                        f64::NEG_INFINITY
                    }
                } else {
                    bisect(samples[i - 1], samples[i])
                };
                let b = if j == samples.len() - 1 {
                    if comp.b.is_finite() {
                        comp.b
                    } else {
                        f64::INFINITY
                    }
                } else {
                    bisect(samples[j + 1], samples[j])
                };
                let (ca, cb) = (a.max(wlo), b.min(whi));
                let t = golden_min(m, ca, cb, tol.bisection);
                let edge = 1e-6 * (cb - ca);
                let monotone = t - ca <= edge || cb - t <= edge;
                let c = if monotone { 0.5 * (ca + cb) } else { t };
                let ma = if a.is_finite() { m(a) } else { profile.left_tail().unwrap_or(0.0) };
                let mb = if b.is_finite() { m(b) } else { profile.right_tail().unwrap_or(0.0) };
                intervals.push(ContactInterval {
                    a,
                    b,
                    c,
                    ma,
                    mc: m(c),
                    mb,
                    monotone,
                });
                i = j + 1;
            }
        }
        ContactStructure { intervals }
    }
}

pub fn contact_structure(u: &PiecewiseFunction1D, omega: &Domain1D) -> Result<ContactStructure> {
    Ok(MaximalOperator1D::new(u, omega)?.contact_structure())
}

pub fn variation_of_maximal(structure: &ContactStructure) -> Variation {
    let breakdown: Vec<f64> = structure.intervals.iter().map(ContactInterval::variation).collect();
    Variation {
        total: breakdown.iter().sum(),
        breakdown,
    }
}

/// `|Du|` gives no mass to `Ω \ (H_u ∪ S_u)`.
pub fn check_support(
    u: &PiecewiseFunction1D,
    omega: &Domain1D,
    structure: &ContactStructure,
) -> Result<SupportReport> {
    let du = derivative_measure(u);
    let mut offending_mass = 0.0;
    let mut offending_atoms = Vec::new();
    for &(t, w) in &du.atoms {
        if !omega.contains(t) {
            continue;
        }
        let pv = representatives(u, t)?;
        if pv.lower == pv.upper && !structure.contains(t) {
            offending_mass += w.abs();
            offending_atoms.push(t);
        }
    }
    for d in &du.density {
        if d.value == 0.0 {
            continue;
        }
        for comp in omega.intervals() {
            let (p, q) = (d.a.max(comp.a), d.b.min(comp.b));
            if q > p {
                let uncovered = ((q - p) - structure.overlap(p, q)).max(0.0);
                offending_mass += d.value.abs() * uncovered;
            }
        }
    }
    Ok(SupportReport {
        pass: offending_mass < SUPPORT_SLACK,
        offending_mass,
        offending_atoms,
    })
}

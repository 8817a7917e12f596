//! Deterministic multi-start pattern search over admissible balls.
//!
//! A ball containing `x` in its closure is parametrised by a relative offset
//! `w` in the closed unit disk and `ℓ = ln r`, with centre `z = x + r w`.
//! The radius is clamped to the largest value keeping the ball inside the
//! domain, so every parameter vector is feasible and the search never stalls
//! against a constraint. Seeds are placed in polar form `w = ρ (cos φ, sin φ)`.

use super::{Domain2D, Field2D};
use crate::geometry2d::Point;
use std::f64::consts::PI;

/// How many seeds to try and how many of the best to refine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchPlan {
    /// Log-spaced radii for the seeds with `x` on the sphere.
    pub radii: usize,
    /// Directions per radius.
    pub directions: usize,
    /// Additional seeds centred at `x`.
    pub centered: usize,
    /// Seeds refined by pattern search.
    pub top_k: usize,
}

impl SearchPlan {
    pub const FULL: SearchPlan = SearchPlan {
        radii: 32,
        directions: 16,
        centered: 32,
        top_k: 4,
    };

    /// Cheaper plan used with a warm start from a neighbouring grid point.
    pub const WARM: SearchPlan = SearchPlan {
        radii: 6,
        directions: 6,
        centered: 3,
        top_k: 1,
    };
}

impl Default for SearchPlan {
    fn default() -> Self {
        Self::FULL
    }
}

/// Smallest radius as a fraction of the cap, both for seeds and refinement.
const SEED_SPAN: f64 = 1e-3;
const REFINE_SPAN: f64 = 1e-9;
const MAX_EVALS: usize = 20_000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub v: [f64; 3],
    pub z: Point,
    pub r: f64,
    pub value: f64,
}

pub(crate) struct Problem<'a> {
    pub field: &'a Field2D,
    pub domain: &'a Domain2D,
    pub x: Point,
    pub cap: f64,
    pub tie: f64,
}

impl Problem<'_> {
    fn r_max(&self, e: [f64; 2]) -> f64 {
        match self.domain {
            Domain2D::Plane => self.cap,
            Domain2D::Rect { lo, hi } => {
                let (x, lo, hi) = ([self.x.x, self.x.y], [lo.x, lo.y], [hi.x, hi.y]);
                let mut r = self.cap;
                for k in 0..2 {
                    let up = 1.0 + e[k];
                    if up > 0.0 {
                        r = r.min((hi[k] - x[k]) / up);
                    }
                    let down = 1.0 - e[k];
                    if down > 0.0 {
                        r = r.min((x[k] - lo[k]) / down);
                    }
                }
                r
            }
        }
    }

    pub fn eval(&self, v: [f64; 3]) -> Candidate {
        let lmax = self.cap.ln();
        let n = v[0].hypot(v[1]);
        let s = if n > 1.0 { 1.0 / n } else { 1.0 };
        let v = [v[0] * s, v[1] * s, v[2].clamp(lmax + REFINE_SPAN.ln(), lmax)];
        let r = v[2].exp().min(self.r_max([v[0], v[1]]));
        let z = self.x + Point::new(v[0], v[1]) * r;
        let value = if r > 0.0 { self.field.mean(z, r) } else { f64::NEG_INFINITY };
        Candidate { v, z, r, value }
    }

    /// Higher value first; among values within the tie tolerance, larger radius.
    fn better(&self, a: &Candidate, b: &Candidate, best_seen: f64) -> bool {
        a.value > b.value + self.tie || (a.value >= best_seen - self.tie && a.r > b.r * (1.0 + 1e-12))
    }

    fn polish(&self, start: Candidate, mut step: [f64; 3], tol: f64) -> Candidate {
        let mut cur = start;
        let mut best_seen = cur.value;
        let mut evals = 0;
        let mut dirs: Vec<[f64; 3]> = Vec::with_capacity(26);
        for i in 0..3 {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            dirs.push(e);
            e[i] = -1.0;
            dirs.push(e);
            for j in (i + 1)..3 {
                for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let mut e = [0.0; 3];
                    e[i] = si;
                    e[j] = sj;
                    dirs.push(e);
                }
            }
        }
        for k in 0..8 {
            dirs.push([0, 1, 2].map(|b| if k >> b & 1 == 1 { -1.0 } else { 1.0 }));
        }
        // Poll starts from the last successful direction.
        let mut first = 0;
        while step.iter().any(|&s| s >= tol) && evals < MAX_EVALS {
            let mut moved = false;
            for k in 0..dirs.len() {
                let idx = (first + k) % dirs.len();
                let d = dirs[idx];
                let trial = [cur.v[0] + d[0] * step[0], cur.v[1] + d[1] * step[1], cur.v[2] + d[2] * step[2]];
                let cand = self.eval(trial);
                evals += 1;
                if cand.v != cur.v && self.better(&cand, &cur, best_seen) {
                    cur = cand;
                    best_seen = best_seen.max(cur.value);
                    moved = true;
                    first = idx;
                    break;
                }
            }
            if !moved {
                for s in &mut step {
                    *s *= 0.5;
                }
            }
        }
        cur
    }

    pub fn search(&self, plan: &SearchPlan, hint: Option<[f64; 3]>, tol: f64) -> Candidate {
        let lmax = self.cap.ln();
        let lmin = lmax + SEED_SPAN.ln();
        let radius = |i: usize, n: usize| {
            if n <= 1 {
                lmax
            } else {
                lmin + (lmax - lmin) * i as f64 / (n - 1) as f64
            }
        };
        let mut seeds = Vec::with_capacity(plan.radii * plan.directions + plan.centered);
        for i in 0..plan.radii {
            for j in 0..plan.directions {
                let phi = 2.0 * PI * j as f64 / plan.directions as f64;
                seeds.push(self.eval([phi.cos(), phi.sin(), radius(i, plan.radii)]));
            }
        }
        for i in 0..plan.centered {
            seeds.push(self.eval([0.0, 0.0, radius(i, plan.centered)]));
        }
        // Stable sort: value descending, then radius descending.
        seeds.sort_by(|a, b| b.value.total_cmp(&a.value).then(b.r.total_cmp(&a.r)));

        let step = [0.25; 3];
        let mut best: Option<Candidate> = None;
        let consider = |c: Candidate, best: &mut Option<Candidate>| match best {
            None => *best = Some(c),
            Some(b) => {
                let seen = b.value;
                if self.better(&c, b, seen) {
                    *best = Some(c);
                }
            }
        };
        if let Some(h) = hint {
            let fine = step.map(|s| s / 64.0);
            let c = self.polish(self.eval(h), fine, tol);
            consider(c, &mut best);
        }
        for s in seeds.iter().take(plan.top_k) {
            // A warm start is only second-guessed by seeds that beat it outright.
            if let (Some(_), Some(b)) = (hint, &best) {
                if s.value <= b.value + self.tie {
                    continue;
                }
            }
            let c = self.polish(*s, step, tol);
            consider(c, &mut best);
        }
        if let Some(s) = seeds.first() {
            consider(*s, &mut best);
        }
        best.expect("search has at least one seed")
    }
}

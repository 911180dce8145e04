//! Sampling-based checks of the four convexity notions.
//!
//! The defining inequality of the requested kind is evaluated on a Halton
//! sequence over `(x, y, lambda)`. A sample violates the inequality when
//! `lhs - rhs > 1e-12 |rhs|`; the worst sample (largest relative excess,
//! lowest index on ties) is returned as a witness.

use serde::Serialize;

use super::FunctionSpec;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::quadrature::Interval;

pub const DEFAULT_CONVEXITY_SAMPLES: usize = 100_000;

const RELATIVE_SLACK: f64 = 1e-12;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityKind {
    Convex,
    SConvexSecondSense,
    GeometricallyConvex,
    SGeometricallyConvex,
}

impl ConvexityKind {
    pub fn needs_s(self) -> bool {
        matches!(
            self,
            ConvexityKind::SConvexSecondSense | ConvexityKind::SGeometricallyConvex
        )
    }

    fn is_geometric(self) -> bool {
        matches!(
            self,
            ConvexityKind::GeometricallyConvex | ConvexityKind::SGeometricallyConvex
        )
    }
}

impl std::str::FromStr for ConvexityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "convex" => ConvexityKind::Convex,
            "s_convex_second_sense" => ConvexityKind::SConvexSecondSense,
            "geometrically_convex" => ConvexityKind::GeometricallyConvex,
            "s_geometrically_convex" => ConvexityKind::SGeometricallyConvex,
            other => return Err(Error::domain(format!("unknown convexity kind `{other}`"))),
        })
    }
}

/// A sample at which the defining inequality fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub kind: ConvexityKind,
    pub holds: bool,
    pub samples: usize,
    /// Largest `(lhs - rhs) / |rhs|` over all samples; negative when every
    /// sample is strictly inside.
    pub worst_relative_excess: f64,
    pub violation: Option<Violation>,
}

/// Both sides of the defining inequality of `kind` at `(x, y, lambda)`.
pub fn defining_sides(
    g: &dyn Fn(f64) -> f64,
    kind: ConvexityKind,
    s: f64,
    x: f64,
    y: f64,
    lambda: f64,
) -> (f64, f64) {
    let mu = 1.0 - lambda;
    match kind {
        ConvexityKind::Convex => (g(lambda * x + mu * y), lambda * g(x) + mu * g(y)),
        ConvexityKind::SConvexSecondSense => (
            g(lambda * x + mu * y),
            lambda.powf(s) * g(x) + mu.powf(s) * g(y),
        ),
        ConvexityKind::GeometricallyConvex => (
            g((lambda * x.ln() + mu * y.ln()).exp()),
            g(x).powf(lambda) * g(y).powf(mu),
        ),
        ConvexityKind::SGeometricallyConvex => (
            g((lambda * x.ln() + mu * y.ln()).exp()),
            g(x).powf(lambda.powf(s)) * g(y).powf(mu.powf(s)),
        ),
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while i > 0 {
        acc += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
    }
    acc
}

/// Checks `kind` for an arbitrary positive function on `[lo, hi]`.
pub fn check_convexity_fn<G>(
    g: G,
    lo: f64,
    hi: f64,
    kind: ConvexityKind,
    s: Option<f64>,
    samples: usize,
    exec: Execution,
) -> Result<ConvexityWitness>
where
    G: Fn(f64) -> f64 + Sync + Send,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain(format!(
            "empty sampling interval [{lo}, {hi}]"
        )));
    }
    if kind.is_geometric() && lo <= 0.0 {
        return Err(Error::domain(
            "geometric convexity needs a positive interval",
        ));
    }
    let s = match (kind.needs_s(), s) {
        (true, None) => return Err(Error::domain(format!("{kind:?} requires s"))),
        (true, Some(s)) if !(s > 0.0 && s <= 1.0) => {
            return Err(Error::domain(format!("s = {s} outside (0, 1]")))
        }
        (_, s) => s.unwrap_or(1.0),
    };
    if samples == 0 {
        return Err(Error::domain("at least one sample is required"));
    }

    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    let point = |u: f64| -> f64 {
        let v = if kind.is_geometric() {
            (ln_lo + u * (ln_hi - ln_lo)).exp()
        } else {
            lo + u * (hi - lo)
        };
        v.clamp(lo, hi)
    };

    let chunks = samples.div_ceil(CHUNK);
    let per_chunk = exec.map_range(chunks, |c| -> Result<Option<(f64, usize, Violation)>> {
        let mut best: Option<(f64, usize, Violation)> = None;
        let start = c * CHUNK;
        let end = (start + CHUNK).min(samples);
        for i in start..end {
            let n = i as u64 + 1;
            let x = point(radical_inverse(n, 2));
            let y = point(radical_inverse(n, 3));
            let lambda = radical_inverse(n, 5);
            let (lhs, rhs) = defining_sides(&g, kind, s, x, y, lambda);
            if !(lhs.is_finite() && rhs.is_finite()) {
                return Err(Error::NonFinite {
                    x,
                    value: if lhs.is_finite() { rhs } else { lhs },
                });
            }
            let rel = (lhs - rhs) / rhs.abs().max(f64::MIN_POSITIVE);
            if best.as_ref().is_none_or(|(r, _, _)| rel > *r) {
                let v = Violation {
                    x,
                    y,
                    lambda,
                    lhs,
                    rhs,
                    slack: lhs - rhs,
                };
                best = Some((rel, i, v));
            }
        }
        Ok(best)
    });

    let mut worst: Option<(f64, usize, Violation)> = None;
    for item in per_chunk {
        if let Some(cand) = item? {
            // chunks arrive in index order, so a strict comparison keeps the
            // lowest index on ties
            if worst.as_ref().is_none_or(|(r, _, _)| cand.0 > *r) {
                worst = Some(cand);
            }
        }
    }
    let (rel, _, v) = worst.expect("samples > 0");
    let holds = rel <= RELATIVE_SLACK;
    Ok(ConvexityWitness {
        kind,
        holds,
        samples,
        worst_relative_excess: rel,
        violation: if holds { None } else { Some(v) },
    })
}

/// Checks whether `spec` (the function itself) is of convexity `kind` on
/// `interval`.
pub fn check_convexity(
    spec: &FunctionSpec,
    interval: Interval,
    kind: ConvexityKind,
    s: Option<f64>,
    samples: usize,
    exec: Execution,
) -> Result<ConvexityWitness> {
    let (lo, hi) = spec.domain();
    if !(interval.a() >= lo && interval.b() <= hi) {
        return Err(Error::domain(format!(
            "interval ({}, {}) not inside the domain of {spec}",
            interval.a(),
            interval.b()
        )));
    }
    check_convexity_fn(
        |x| spec.f(x),
        interval.a(),
        interval.b(),
        kind,
        s,
        samples,
        exec,
    )
}

/// Checks s-geometric convexity of `|f'|^q` on `interval`, the hypothesis of
/// the bound theorems.
pub fn derivative_power_convexity(
    spec: &FunctionSpec,
    interval: Interval,
    s: f64,
    q: f64,
    samples: usize,
    exec: Execution,
) -> Result<ConvexityWitness> {
    check_convexity_fn(
        |x| (q * spec.ln_abs_df(x)).exp(),
        interval.a(),
        interval.b(),
        ConvexityKind::SGeometricallyConvex,
        Some(s),
        samples,
        exec,
    )
}

//! Supremum of |f| on a closed subinterval: a uniform scan followed by
//! golden-section refinement around the best scan cell.

use serde::{Deserialize, Serialize};

use super::FunctionSpec;
use crate::error::{Error, Result};
use crate::quadrature::Interval;

pub const SUP_SCAN_POINTS: usize = 1025;

/// `m1 = sup |f|` on `[a, sqrt(ab)]`, `m2 = sup |f|` on `[sqrt(ab), b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupPair {
    pub m1: f64,
    pub m2: f64,
}

/// Estimates `sup |g|` on `[lo, hi]`.
pub fn sup_abs_fn(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::domain(format!("bad supremum range [{lo}, {hi}]")));
    }
    let h = |x: f64| g(x).abs();
    if lo == hi {
        return Ok(h(lo));
    }
    let n = SUP_SCAN_POINTS - 1;
    let at = |i: usize| {
        if i == n {
            hi
        } else {
            lo + (hi - lo) * (i as f64 / n as f64)
        }
    };
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let v = h(at(i));
        if v.is_nan() {
            return Err(Error::NonFinite { x: at(i), value: v });
        }
        if v > best {
            best = v;
            best_i = i;
        }
    }

    // golden-section on the two cells adjacent to the best node
    let mut left = at(best_i.saturating_sub(1));
    let mut right = at((best_i + 1).min(n));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = right - inv_phi * (right - left);
    let mut d = left + inv_phi * (right - left);
    let (mut fc, mut fd) = (h(c), h(d));
    for _ in 0..200 {
        if (right - left) <= 1e-15 * right.abs().max(1.0) {
            break;
        }
        if fc > fd {
            right = d;
            d = c;
            fd = fc;
            c = right - inv_phi * (right - left);
            fc = h(c);
        } else {
            left = c;
            c = d;
            fc = fd;
            d = left + inv_phi * (right - left);
            fd = h(d);
        }
    }
    Ok(best.max(fc).max(fd))
}

/// `sup |f|` on `[lo, hi]`, which must lie inside the domain of `spec`.
pub fn sup_abs_on(spec: &FunctionSpec, lo: f64, hi: f64) -> Result<f64> {
    for x in [lo, hi] {
        if !spec.contains(x) {
            let (dlo, dhi) = spec.domain();
            return Err(Error::OutsideDomain {
                family: spec.to_string(),
                x,
                lo: dlo,
                hi: dhi,
            });
        }
    }
    sup_abs_fn(|x| spec.f(x), lo, hi)
}

pub fn sup_pair(spec: &FunctionSpec, interval: Interval) -> Result<SupPair> {
    let g = interval.geometric_midpoint();
    Ok(SupPair {
        m1: sup_abs_on(spec, interval.a(), g)?,
        m2: sup_abs_on(spec, g, interval.b())?,
    })
}

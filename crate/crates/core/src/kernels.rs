//! Scalar kernels of the bound theorems.
//!
//! With `x = ln u`:
//!
//! * `h1(u) = ∫_0^1 (1-t) u^t dt = (u - ln u - 1) / (ln u)^2`
//! * `h2(u) = ∫_0^1 t u^t dt     = (u ln u - u + 1) / (ln u)^2`
//! * `h3(u) = ∫_0^1 u^t dt       = (u - 1) / ln u`
//!
//! all continuously extended at `u = 1` (values 1/2, 1/2, 1), so
//! `h1 + h2 = h3` identically. Near `x = 0` the direct forms cancel
//! catastrophically and the Taylor series in `x` is used instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::FunctionSpec;
use crate::quadrature::Interval;

/// `|ln u|` below which the series branch is used.
pub const SERIES_SWITCH: f64 = 0.05;
const SERIES_TERMS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    H1,
    H2,
    H3,
}

/// Sum of `x^k c_k` where `c_k` is `1/(k+2)!`, `(k+1)/(k+2)!` or `1/(k+1)!`.
fn series(kernel: Kernel, x: f64) -> f64 {
    let mut sum = 0.0;
    // x^k / (k+2)!  (h3 uses x^k / (k+1)!)
    let mut power = match kernel {
        Kernel::H3 => 1.0,
        _ => 0.5,
    };
    let mut terms = [0.0; SERIES_TERMS];
    for (k, slot) in terms.iter_mut().enumerate() {
        *slot = match kernel {
            Kernel::H2 => power * (k + 1) as f64,
            _ => power,
        };
        let denom = match kernel {
            Kernel::H3 => k + 2,
            _ => k + 3,
        };
        power *= x / denom as f64;
    }
    // smallest terms first
    for t in terms.iter().rev() {
        sum += t;
    }
    sum
}

fn direct(kernel: Kernel, x: f64) -> f64 {
    let em1 = x.exp_m1();
    match kernel {
        Kernel::H1 => (em1 - x) / (x * x),
        Kernel::H2 => (x * x.exp() - em1) / (x * x),
        Kernel::H3 => em1 / x,
    }
}

/// `h(e^x)`: the kernel as a function of `x = ln u`.
pub fn kernel_of_log(kernel: Kernel, x: f64) -> f64 {
    if x.abs() < SERIES_SWITCH {
        series(kernel, x)
    } else {
        direct(kernel, x)
    }
}

/// `ln h(e^x)`, finite even where `h` itself overflows (`x` beyond ~700).
pub fn ln_kernel_of_log(kernel: Kernel, x: f64) -> f64 {
    if x < 600.0 {
        return kernel_of_log(kernel, x).ln();
    }
    // e^x dominates; -(x+1)e^{-x} and friends are below one ulp here
    let lx = x.ln();
    match kernel {
        Kernel::H1 => x + (-(x + 1.0) * (-x).exp()).ln_1p() - 2.0 * lx,
        Kernel::H2 => x + (x - 1.0).ln() - 2.0 * lx,
        Kernel::H3 => x - lx,
    }
}

pub fn kernel(kernel: Kernel, u: f64) -> Result<f64> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::domain(format!(
            "kernel argument must be positive, got {u}"
        )));
    }
    Ok(kernel_of_log(kernel, u.ln()))
}

pub fn h1(u: f64) -> Result<f64> {
    kernel(Kernel::H1, u)
}

pub fn h2(u: f64) -> Result<f64> {
    kernel(Kernel::H2, u)
}

pub fn h3(u: f64) -> Result<f64> {
    kernel(Kernel::H3, u)
}

/// The reciprocal pair `θ = (a|f'(a)|^s / (b|f'(b)|^s))^{q/2}`, `ϑ = 1/θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaPair {
    pub theta: f64,
    pub vartheta: f64,
    /// `ln θ`; kept because θ itself may over- or underflow.
    pub ln_theta: f64,
}

impl ThetaPair {
    pub fn from_log(ln_theta: f64) -> Self {
        ThetaPair {
            theta: ln_theta.exp(),
            vartheta: (-ln_theta).exp(),
            ln_theta,
        }
    }
}

pub fn theta_pair(spec: &FunctionSpec, interval: Interval, s: f64, q: f64) -> Result<ThetaPair> {
    let (a, b) = (interval.a(), interval.b());
    let (la, lb) = (spec.ln_abs_df(a), spec.ln_abs_df(b));
    if !(la.is_finite() && lb.is_finite()) {
        return Err(Error::domain(format!(
            "theta undefined: |f'(a)| = {}, |f'(b)| = {} for {spec}",
            spec.df(a).abs(),
            spec.df(b).abs()
        )));
    }
    let ln_theta = 0.5 * q * (-interval.log_width() + s * (la - lb));
    Ok(ThetaPair::from_log(ln_theta))
}

/// Position of `(|f'(a)|, |f'(b)|)` relative to 1. Values equal to 1 count
/// as `<= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "both_le_1")]
    BothLe1,
    #[serde(rename = "both_ge_1")]
    BothGe1,
    #[serde(rename = "a_le_1_le_b")]
    ALe1LeB,
    #[serde(rename = "b_le_1_le_a")]
    BLe1LeA,
}

impl CaseTag {
    pub const ALL: [CaseTag; 4] = [
        CaseTag::BothLe1,
        CaseTag::BothGe1,
        CaseTag::ALe1LeB,
        CaseTag::BLe1LeA,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::BothLe1 => "both_le_1",
            CaseTag::BothGe1 => "both_ge_1",
            CaseTag::ALe1LeB => "a_le_1_le_b",
            CaseTag::BLe1LeA => "b_le_1_le_a",
        }
    }
}

pub fn classify_case(df_a: f64, df_b: f64) -> CaseTag {
    match (df_a <= 1.0, df_b <= 1.0) {
        (true, true) => CaseTag::BothLe1,
        (false, false) => CaseTag::BothGe1,
        (true, false) => CaseTag::ALe1LeB,
        (false, true) => CaseTag::BLe1LeA,
    }
}

/// `μ^{t^s} <= μ^{ts}` and `η^{t^s} <= η^{ts+1-s}` for
/// `0 < μ <= 1 <= η`, `t, s ∈ (0, 1]`, up to a 1e-14 relative rounding
/// allowance.
pub fn exponent_bound_check(mu: f64, eta: f64, t: f64, s: f64) -> Result<bool> {
    let unit = |v: f64| v > 0.0 && v <= 1.0;
    if !(unit(mu) && eta >= 1.0 && eta.is_finite() && unit(t) && unit(s)) {
        return Err(Error::domain(format!(
            "exponent inequality needs 0 < mu <= 1 <= eta and t, s in (0, 1]; got mu={mu}, eta={eta}, t={t}, s={s}"
        )));
    }
    let ts = t.powf(s);
    let first = mu.powf(ts) <= mu.powf(t * s) * (1.0 + 1e-14);
    let second = eta.powf(ts) <= eta.powf(t * s + 1.0 - s) * (1.0 + 1e-14);
    Ok(first && second)
}

//! Test functions with closed-form derivatives.
//!
//! A [`FunctionSpec`] is one of a small registry of builtin families, each
//! positive with a trustworthy derivative on `(0, inf)`:
//!
//! | family        | f(x)            | f'(x)        | params |
//! |---------------|-----------------|--------------|--------|
//! | `constant`    | c               | 0            | c > 0  |
//! | `power`       | x^c             | c x^{c-1}    | c      |
//! | `power_shift` | x^s / s + 1     | x^{s-1}      | s > 0  |
//! | `exponential` | e^x             | e^x          |        |
//!
//! New families plug in through [`CustomFamily`]; [`FunctionSpec::custom`]
//! validates the declared derivative by central differences before
//! accepting one.
//!
//! The textual form used on the command line is
//! `family:param=value[,param=value]`, e.g. `power_shift:s=0.5`.

mod convexity;
mod sup;

pub use convexity::{
    check_convexity, check_convexity_fn, defining_sides, derivative_power_convexity, ConvexityKind,
    ConvexityWitness, Violation, DEFAULT_CONVEXITY_SAMPLES,
};
pub use sup::{sup_abs_fn, sup_abs_on, sup_pair, SupPair, SUP_SCAN_POINTS};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Extension point for function families outside the builtin registry.
///
/// Implementors must be positive on `domain()` with `derivative` the exact
/// derivative of `value`.
pub trait CustomFamily: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
    /// Open interval `(lo, hi)` of definition.
    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    Constant { c: f64 },
    Power { c: f64 },
    PowerShift { s: f64 },
    Exponential,
    Custom(Arc<dyn CustomFamily>),
}

/// Exponents `(s, q)` for s-geometric convexity of `|f'|^q`:
/// `0 < s <= 1`, `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityParams {
    pub s: f64,
    pub q: f64,
}

impl ConvexityParams {
    pub fn new(s: f64, q: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::domain(format!("s = {s} outside (0, 1]")));
        }
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::domain(format!(
                "q = {q} must be a finite value >= 1"
            )));
        }
        Ok(ConvexityParams { s, q })
    }
}

/// Which of `f` and `f'` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    F,
    Df,
}

#[derive(Debug, Clone)]
pub struct FunctionSpec {
    family: Family,
}

impl PartialEq for FunctionSpec {
    fn eq(&self, other: &Self) -> bool {
        match (&self.family, &other.family) {
            (Family::Constant { c: x }, Family::Constant { c: y }) => x == y,
            (Family::Power { c: x }, Family::Power { c: y }) => x == y,
            (Family::PowerShift { s: x }, Family::PowerShift { s: y }) => x == y,
            (Family::Exponential, Family::Exponential) => true,
            (Family::Custom(x), Family::Custom(y)) => Arc::ptr_eq(x, y),
            _ => false,
        }
    }
}

fn spec_err(spec: &str, reason: impl Into<String>) -> Error {
    Error::Spec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

impl FunctionSpec {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(spec_err(&format!("constant:c={c}"), "c must be positive"));
        }
        Ok(FunctionSpec {
            family: Family::Constant { c },
        })
    }

    pub fn power(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(spec_err(&format!("power:c={c}"), "c must be finite"));
        }
        Ok(FunctionSpec {
            family: Family::Power { c },
        })
    }

    pub fn power_shift(s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(spec_err(
                &format!("power_shift:s={s}"),
                "s must be positive",
            ));
        }
        Ok(FunctionSpec {
            family: Family::PowerShift { s },
        })
    }

    pub fn exponential() -> Self {
        FunctionSpec {
            family: Family::Exponential,
        }
    }

    /// Wraps a user family after checking its derivative by central
    /// differences at 32 log-spaced points of its domain.
    pub fn custom(family: Arc<dyn CustomFamily>) -> Result<Self> {
        let spec = FunctionSpec {
            family: Family::Custom(family),
        };
        let (lo, hi) = spec.domain();
        let lo = lo.max(1e-3);
        let hi = hi.min(1e3);
        if lo < hi {
            let n = 32;
            let points: Vec<f64> = (1..=n)
                .map(|i| lo * (hi / lo).powf(i as f64 / (n + 1) as f64))
                .collect();
            spec.validate_derivative(&points)?;
        }
        Ok(spec)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn name(&self) -> String {
        match &self.family {
            Family::Constant { .. } => "constant".into(),
            Family::Power { .. } => "power".into(),
            Family::PowerShift { .. } => "power_shift".into(),
            Family::Exponential => "exponential".into(),
            Family::Custom(c) => c.name(),
        }
    }

    /// Open interval on which `f` and `f'` are defined.
    pub fn domain(&self) -> (f64, f64) {
        match &self.family {
            Family::Custom(c) => c.domain(),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x.is_finite() && x > lo && x < hi
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            let (lo, hi) = self.domain();
            Err(Error::OutsideDomain {
                family: self.to_string(),
                x,
                lo,
                hi,
            })
        }
    }

    /// f(x), no domain check.
    #[inline]
    pub fn f(&self, x: f64) -> f64 {
        match &self.family {
            Family::Constant { c } => *c,
            Family::Power { c } => x.powf(*c),
            Family::PowerShift { s } => x.powf(*s) / s + 1.0,
            Family::Exponential => x.exp(),
            Family::Custom(fam) => fam.value(x),
        }
    }

    /// f'(x), no domain check.
    #[inline]
    pub fn df(&self, x: f64) -> f64 {
        match &self.family {
            Family::Constant { .. } => 0.0,
            Family::Power { c } => {
                if *c == 0.0 {
                    0.0
                } else {
                    c * x.powf(c - 1.0)
                }
            }
            Family::PowerShift { s } => x.powf(s - 1.0),
            Family::Exponential => x.exp(),
            Family::Custom(fam) => fam.derivative(x),
        }
    }

    /// `ln |f'(x)|` computed without forming `f'(x)` where the family allows,
    /// so extreme exponents do not overflow.
    pub fn ln_abs_df(&self, x: f64) -> f64 {
        match &self.family {
            Family::Constant { .. } => f64::NEG_INFINITY,
            Family::Power { c } if *c == 0.0 => f64::NEG_INFINITY,
            Family::Power { c } => c.abs().ln() + (c - 1.0) * x.ln(),
            Family::PowerShift { s } => (s - 1.0) * x.ln(),
            Family::Exponential => x,
            Family::Custom(fam) => fam.derivative(x).abs().ln(),
        }
    }

    pub fn evaluate(&self, x: f64, which: Which) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match which {
            Which::F => self.f(x),
            Which::Df => self.df(x),
        })
    }

    /// Finite-difference check of `f'` at the given points: a Richardson
    /// extrapolated central difference `D` with `h = 1e-5 x` must satisfy
    /// `|D - f'(x)| / (1 + |f'(x)|) <= 1e-6`.
    pub fn validate_derivative(&self, points: &[f64]) -> Result<()> {
        for &x in points {
            self.check_domain(x)?;
            let h = 1e-5 * x;
            if !(self.contains(x - h) && self.contains(x + h)) {
                continue;
            }
            let central = |h: f64| (self.f(x + h) - self.f(x - h)) / (2.0 * h);
            let fd = (4.0 * central(h / 2.0) - central(h)) / 3.0;
            let d = self.df(x);
            let err = (fd - d).abs() / (1.0 + d.abs());
            if err.is_nan() || err > 1e-6 {
                return Err(spec_err(
                    &self.to_string(),
                    format!("derivative mismatch at x = {x}: declared {d}, finite difference {fd}"),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Constant { c } => write!(f, "constant:c={c}"),
            Family::Power { c } => write!(f, "power:c={c}"),
            Family::PowerShift { s } => write!(f, "power_shift:s={s}"),
            Family::Exponential => write!(f, "exponential"),
            Family::Custom(c) => write!(f, "custom:{}", c.name()),
        }
    }
}

impl Serialize for FunctionSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (family, rest) = match text.split_once(':') {
            Some((f, r)) => (f.trim(), r.trim()),
            None => (text, ""),
        };
        let mut params: Vec<(&str, f64)> = Vec::new();
        if !rest.is_empty() {
            for item in rest.split(',') {
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| spec_err(text, format!("expected param=value, got `{item}`")))?;
                let v: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| spec_err(text, format!("`{}` is not a number", v.trim())))?;
                let k = k.trim();
                if params.iter().any(|(name, _)| *name == k) {
                    return Err(spec_err(text, format!("parameter `{k}` given twice")));
                }
                params.push((k, v));
            }
        }

        let take = |allowed: &[&str]| -> Result<Vec<f64>> {
            if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(k)) {
                return Err(spec_err(
                    text,
                    format!("unknown parameter `{k}` for {family}"),
                ));
            }
            allowed
                .iter()
                .map(|name| {
                    params
                        .iter()
                        .find(|(k, _)| k == name)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| spec_err(text, format!("missing parameter `{name}`")))
                })
                .collect()
        };

        let built = match family {
            "constant" => FunctionSpec::constant(take(&["c"])?[0]),
            "power" => FunctionSpec::power(take(&["c"])?[0]),
            "power_shift" => FunctionSpec::power_shift(take(&["s"])?[0]),
            "exponential" => take(&[]).map(|_| FunctionSpec::exponential()),
            other => return Err(spec_err(text, format!("unknown family `{other}`"))),
        };
        built.map_err(|e| match e {
            Error::Spec { reason, .. } => spec_err(text, reason),
            e => e,
        })
    }
}

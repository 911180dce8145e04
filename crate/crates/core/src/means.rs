//! Special means of two positive numbers.

use crate::error::{Error, Result};

/// Two positive arguments of a mean. Order is irrelevant; every mean here is
/// symmetric and the pair is normalised so that `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanPair {
    lo: f64,
    hi: f64,
}

impl MeanPair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::domain(format!(
                "mean arguments must be positive and finite, got ({a}, {b})"
            )));
        }
        Ok(MeanPair {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// `(a + b) / 2`
pub fn arithmetic_mean(p: MeanPair) -> f64 {
    p.lo + (p.hi - p.lo) / 2.0
}

/// `sqrt(a b)`
pub fn geometric_mean(p: MeanPair) -> f64 {
    // split the square roots so that products near the f64 limits stay finite
    p.lo.sqrt() * p.hi.sqrt()
}

/// `(b - a) / (ln b - ln a)`, continuously extended by `a` when `a = b`.
pub fn logarithmic_mean(p: MeanPair) -> f64 {
    if p.lo == p.hi {
        return p.lo;
    }
    let d = p.hi - p.lo;
    d / (d / p.lo).ln_1p()
}

/// The p-logarithmic mean `((b^{p+1} - a^{p+1}) / ((p+1)(b-a)))^{1/p}`.
///
/// Defined for `a != b` and `p` outside `{-1, 0}`. The numerator is written
/// as `a^{p+1} expm1((p+1) ln(b/a))`, and falls back to a log-domain
/// evaluation when the direct product over- or underflows.
pub fn p_logarithmic_mean(p: MeanPair, exponent: f64) -> Result<f64> {
    if !exponent.is_finite() || exponent == 0.0 || exponent == -1.0 {
        return Err(Error::domain(format!(
            "p-logarithmic mean undefined for p = {exponent}"
        )));
    }
    if p.lo == p.hi {
        return Err(Error::domain("p-logarithmic mean requires a != b"));
    }
    let k = exponent + 1.0;
    let width = p.hi - p.lo;
    let log_ratio = (width / p.lo).ln_1p();
    let y = k * log_ratio;

    // expm1(y)/k is positive for every k != 0
    let direct = p.lo.powf(k) * (y.exp_m1() / k) / width;
    if direct.is_normal() {
        let out = direct.powf(1.0 / exponent);
        if out.is_normal() {
            return Ok(out);
        }
    }

    let ln_expm1_over_k = if y > 0.0 {
        // ln(expm1(y)) = y + ln(1 - e^{-y})
        y + (-(-y).exp_m1()).ln() - k.ln()
    } else {
        (-y.exp_m1()).ln() - (-k).ln()
    };
    let ln_ratio = k * p.lo.ln() + ln_expm1_over_k - width.ln();
    Ok((ln_ratio / exponent).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(a: f64, b: f64) -> MeanPair {
        MeanPair::new(a, b).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(arithmetic_mean(pair(2.0, 4.0)), 3.0);
        assert_eq!(arithmetic_mean(pair(1.0, 1.0)), 1.0);
        assert_eq!(arithmetic_mean(pair(1.0, 3.0)), 2.0);
    }

    #[test]
    fn geometric_examples() {
        assert_eq!(geometric_mean(pair(4.0, 9.0)), 6.0);
        assert_eq!(geometric_mean(pair(1.0, 1.0)), 1.0);
        assert!((geometric_mean(pair(2.0, 8.0)) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn logarithmic_examples() {
        let e = std::f64::consts::E;
        assert!((logarithmic_mean(pair(1.0, e)) - (e - 1.0)).abs() < 1e-15);
        assert_eq!(logarithmic_mean(pair(3.0, 3.0)), 3.0);
        assert!((logarithmic_mean(pair(1.0, 4.0)) - 3.0 / 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn p_logarithmic_examples() {
        let p = pair(1.0, 2.0);
        assert!((p_logarithmic_mean(p, 1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((p_logarithmic_mean(p, 2.0).unwrap() - (7.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(p_logarithmic_mean(p, 0.0).is_err());
        assert!(p_logarithmic_mean(p, -1.0).is_err());
        assert!(p_logarithmic_mean(pair(2.0, 2.0), 1.0).is_err());
    }

    #[test]
    fn rejects_non_positive() {
        assert!(MeanPair::new(0.0, 1.0).is_err());
        assert!(MeanPair::new(-1.0, 1.0).is_err());
        assert!(MeanPair::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn p_logarithmic_survives_large_exponents() {
        // b^{p+1} overflows for p = 400, the mean itself does not
        let v = p_logarithmic_mean(pair(10.0, 20.0), 400.0).unwrap();
        assert!(v.is_finite() && v > 10.0 && v < 20.0);
        let w = p_logarithmic_mean(pair(10.0, 20.0), -400.0).unwrap();
        assert!(w.is_finite() && w > 10.0 && w < 20.0);
    }

    #[test]
    fn p_logarithmic_negative_fraction() {
        // p = -1/2: ((1/sqrt b - ... ) closed form: L_{-1/2} = (sqrt(a)+sqrt(b))^2 / 4 ... check against it
        let (a, b) = (0.25f64, 0.75f64);
        let expect = ((a.sqrt() + b.sqrt()) / 2.0).powi(2);
        let got = p_logarithmic_mean(pair(a, b), -0.5).unwrap();
        assert!((got - expect).abs() < 1e-15, "{got} vs {expect}");
    }

    proptest! {
        #[test]
        fn means_are_symmetric_and_bracketed(a in 1e-3f64..1e3, b in 1e-3f64..1e3) {
            let p = pair(a, b);
            let q = pair(b, a);
            prop_assert_eq!(arithmetic_mean(p), arithmetic_mean(q));
            prop_assert_eq!(geometric_mean(p), geometric_mean(q));
            prop_assert_eq!(logarithmic_mean(p), logarithmic_mean(q));
            let (lo, hi) = (a.min(b), a.max(b));
            for m in [arithmetic_mean(p), geometric_mean(p), logarithmic_mean(p)] {
                prop_assert!(m >= lo * (1.0 - 1e-15) && m <= hi * (1.0 + 1e-15));
            }
        }

        #[test]
        fn l1_equals_arithmetic(a in 1e-2f64..1e2, b in 1e-2f64..1e2) {
            prop_assume!(a != b);
            let p = pair(a, b);
            let l1 = p_logarithmic_mean(p, 1.0).unwrap();
            let am = arithmetic_mean(p);
            prop_assert!(((l1 - am) / am).abs() <= 1e-14, "{} vs {}", l1, am);
        }
    }
}

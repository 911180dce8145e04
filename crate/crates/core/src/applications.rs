//! The two special-means propositions for `f(x) = x^s/s + 1` on
//! `0 < a < b <= 1`.
//!
//! The theorem form (the bound evaluated by [`crate::bounds`]) decides pass
//! or fail. The means form is rebuilt from A, G, L and L_p and compared
//! against it, with these readings of the printed displays:
//!
//! * `G(a, b) = sqrt(ab)`;
//! * the two bracketed `M₁ …` and `M₂ …` terms are added;
//! * the factor `2/s^s` in the second display is `2/s²`, as in the first.

use serde::{Deserialize, Serialize};

use crate::bounds::{theorem_2_2, theorem_2_3, EvalOptions, Side, Variant};
use crate::error::{Error, Result};
use crate::functions::{ConvexityParams, FunctionSpec};
use crate::means::{
    arithmetic_mean, geometric_mean, logarithmic_mean, p_logarithmic_mean, MeanPair,
};
use crate::quadrature::Interval;

const AGREEMENT_REL: f64 = 1e-6;
const AGREEMENT_ABS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proposition {
    /// Means form of the h₁/h₂ bound.
    Prop31,
    /// Means form of the h₃ bound.
    Prop32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub proposition: Proposition,
    pub side: Side,
    pub means_form_lhs: f64,
    pub means_form_rhs: f64,
    pub theorem_form_lhs: f64,
    pub theorem_form_rhs: f64,
    pub agreement_lhs: f64,
    pub agreement_rhs: f64,
    pub forms_agree: bool,
    pub holds: bool,
    pub reconstructions: Vec<String>,
    pub disagreements: Vec<String>,
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub q: f64,
}

fn mean_pair(a: f64, b: f64) -> MeanPair {
    MeanPair::new(a, b).expect("validated positive")
}

fn check_domain(a: f64, b: f64, s: f64, q: f64, strict_q: bool) -> Result<()> {
    if !(a > 0.0 && a < b && b <= 1.0) {
        return Err(Error::domain(format!(
            "need 0 < a < b <= 1, got a = {a}, b = {b}"
        )));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!("need 0 < s < 1, got s = {s}")));
    }
    if strict_q && !(q > 1.0 && q.is_finite()) {
        return Err(Error::domain(format!("need q > 1, got q = {q}")));
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::domain(format!("need q >= 1, got q = {q}")));
    }
    Ok(())
}

/// Left-hand side in means form. Identical for both propositions.
pub fn means_form_lhs(a: f64, b: f64, s: f64, side: Side) -> Result<f64> {
    let fa = a.powf(s) / s + 1.0;
    let fb = b.powf(s) / s + 1.0;
    let ab = mean_pair(a, b);
    let g_as_bs = geometric_mean(mean_pair(a.powf(s), b.powf(s)));
    let common = 2.0 / (s * s) * arithmetic_mean(MeanPair::new(g_as_bs * g_as_bs, s * s)?)
        + 2.0 / s * p_logarithmic_mean(ab, s - 1.0)?.powf(s - 1.0) * logarithmic_mean(ab);
    let head = match side {
        Side::ProductVsFafb => geometric_mean(mean_pair(fa, fb)).powi(2),
        Side::ProductVsFsqrt => (geometric_mean(ab).powf(s) / s + 1.0).powi(2),
    };
    Ok((head - common).abs())
}

struct MeansPieces {
    g_ab: f64,
    l_ab: f64,
    r: f64,
    l_r: f64,
    g1: f64,
    g2: f64,
}

fn pieces(a: f64, b: f64, s: f64, q: f64) -> MeansPieces {
    let ab = mean_pair(a, b);
    let g_ab = geometric_mean(ab);
    let sq = (s - 1.0) * (s - 1.0);
    let r = (s * s - s + 1.0) * q / 2.0;
    let m1 = g_ab.powf(s) / s + 1.0;
    let m2 = b.powf(s) / s + 1.0;
    MeansPieces {
        g_ab,
        l_ab: logarithmic_mean(ab),
        r,
        l_r: logarithmic_mean(mean_pair(a.powf(r), b.powf(r))),
        g1: m1 * geometric_mean(mean_pair(a.powf(-sq), b.powf(s))),
        g2: m2 * geometric_mean(mean_pair(b.powf(-sq), a.powf(s))),
    }
}

/// Right-hand side of the first proposition in means form.
pub fn prop31_means_rhs(a: f64, b: f64, s: f64, q: f64, side: Side) -> f64 {
    let p = pieces(a, b, s, q);
    let sq = (s - 1.0) * (s - 1.0);
    let pre = p.g_ab.powf(-sq)
        * (1.0 / ((s * s - s + 1.0) * q)).powf(1.0 / q)
        * ((b - a) / (4.0 * p.l_ab)).powf(1.0 - 1.0 / q);
    let upper = (b.powf(p.r) - p.l_r).max(0.0).powf(1.0 / q);
    let lower = (p.l_r - a.powf(p.r)).max(0.0).powf(1.0 / q);
    match side {
        Side::ProductVsFafb => pre * (p.g1 * upper + p.g2 * lower),
        Side::ProductVsFsqrt => pre * (p.g1 * lower + p.g2 * upper),
    }
}

/// Right-hand side of the second proposition in means form (both sides).
pub fn prop32_means_rhs(a: f64, b: f64, s: f64, q: f64) -> f64 {
    let p = pieces(a, b, s, q);
    let sq = (s - 1.0) * (s - 1.0);
    (b - a) / (2.0 * p.l_ab)
        * ((q - 1.0) / (2.0 * q - 1.0)).powf(1.0 - 1.0 / q)
        * p.l_r.powf(1.0 / q)
        / p.g_ab.powf(sq)
        * (p.g1 + p.g2)
}

fn agree(means: f64, theorem: f64) -> bool {
    (means - theorem).abs() <= AGREEMENT_REL * theorem.abs() + AGREEMENT_ABS
}

fn build(
    proposition: Proposition,
    side: Side,
    (a, b, s, q): (f64, f64, f64, f64),
    means_rhs: f64,
    theorem_lhs: f64,
    theorem_rhs: f64,
    holds: bool,
) -> Result<PropositionReport> {
    let means_lhs = means_form_lhs(a, b, s, side)?;
    let mut reconstructions = vec![
        "G(a,b) = sqrt(ab)".to_string(),
        "bracketed M1 and M2 terms are summed".to_string(),
    ];
    if side == Side::ProductVsFsqrt {
        reconstructions.push("factor 2/s^s read as 2/s^2".to_string());
    }
    let mut disagreements = Vec::new();
    if !agree(means_lhs, theorem_lhs) {
        disagreements.push(format!(
            "lhs: means form {means_lhs:e} vs theorem form {theorem_lhs:e}"
        ));
    }
    if !agree(means_rhs, theorem_rhs) {
        disagreements.push(format!(
            "rhs: means form {means_rhs:e} vs theorem form {theorem_rhs:e}"
        ));
    }
    Ok(PropositionReport {
        proposition,
        side,
        means_form_lhs: means_lhs,
        means_form_rhs: means_rhs,
        theorem_form_lhs: theorem_lhs,
        theorem_form_rhs: theorem_rhs,
        agreement_lhs: (means_lhs - theorem_lhs).abs(),
        agreement_rhs: (means_rhs - theorem_rhs).abs(),
        forms_agree: disagreements.is_empty(),
        holds,
        reconstructions,
        disagreements,
        a,
        b,
        s,
        q,
    })
}

/// Both sides of the first proposition (`q >= 1`).
pub fn proposition_3_1(
    a: f64,
    b: f64,
    s: f64,
    q: f64,
    opts: &EvalOptions,
) -> Result<Vec<PropositionReport>> {
    check_domain(a, b, s, q, false)?;
    let spec = FunctionSpec::power_shift(s)?;
    let interval = Interval::new(a, b)?;
    let params = ConvexityParams::new(s, q)?;
    Side::BOTH
        .iter()
        .map(|&side| {
            let r = theorem_2_2(&spec, interval, params, side, opts)?;
            build(
                Proposition::Prop31,
                side,
                (a, b, s, q),
                prop31_means_rhs(a, b, s, q, side),
                r.lhs_gap,
                r.rhs_bound,
                r.holds,
            )
        })
        .collect()
}

/// Both sides of the second proposition (`q > 1`).
pub fn proposition_3_2(
    a: f64,
    b: f64,
    s: f64,
    q: f64,
    opts: &EvalOptions,
) -> Result<Vec<PropositionReport>> {
    check_domain(a, b, s, q, true)?;
    let spec = FunctionSpec::power_shift(s)?;
    let interval = Interval::new(a, b)?;
    let params = ConvexityParams::new(s, q)?;
    Side::BOTH
        .iter()
        .map(|&side| {
            let r = theorem_2_3(
                &spec,
                interval,
                params,
                side,
                Variant::DerivationConsistent,
                opts,
            )?;
            build(
                Proposition::Prop32,
                side,
                (a, b, s, q),
                prop32_means_rhs(a, b, s, q),
                r.lhs_gap,
                r.rhs_bound,
                r.holds,
            )
        })
        .collect()
}

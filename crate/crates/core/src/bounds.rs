//! Bound evaluations: the integral identities, the H₁/H₂/H₃ case
//! assemblies, both bound theorems with their corollaries, and the
//! arithmetic and geometric Hermite–Hadamard chains.
//!
//! Every theorem evaluation compares
//!
//! * `lhs_gap = |f(a) f(b) - P|` or `|f(√ab)² - P|`, where `P` is the
//!   product integral, against
//! * `rhs_bound = ln(b/a) (1/2)^{2-1/q} H_i` (q ≥ 1), or
//!   `rhs_bound = ln(b/a)/2 ((q-1)/(2q-1))^{1-1/q} H_3` (q > 1),
//!
//! and passes when `lhs_gap <= rhs_bound + 1e-8 (1 + rhs_bound)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functions::{
    derivative_power_convexity, sup_pair, ConvexityParams, FunctionSpec, SupPair,
    DEFAULT_CONVEXITY_SAMPLES,
};
use crate::kernels::{classify_case, ln_kernel_of_log, theta_pair, CaseTag, Kernel, ThetaPair};
use crate::quadrature::{integrate, product_integral, Interval, Tolerance};

/// Relative-plus-absolute slack used by every pass/fail decision.
pub fn slack_for(bound: f64) -> f64 {
    1e-8 * (1.0 + bound.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `|f(a) f(b) - P|`
    ProductVsFafb,
    /// `|f(√ab)² - P|`
    ProductVsFsqrt,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::ProductVsFafb, Side::ProductVsFsqrt];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// H₃ rows exactly as tabulated in the theorem statement.
    Printed,
    /// H₃ rows as implied by the per-case integral estimates.
    #[default]
    DerivationConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// q ≥ 1, kernels h₁ / h₂.
    Thm22,
    /// q > 1, kernel h₃.
    Thm23,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corollary {
    Thm22S1,
    Thm22Q1,
    Thm23S1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalOptions {
    pub tol: Tolerance,
    /// Run the s-geometric convexity sampler on `|f'|^q` and record the
    /// outcome in the report. Evaluation proceeds either way.
    pub check_hypothesis: bool,
    pub hypothesis_samples: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tol: Tolerance::default(),
            check_hypothesis: false,
            hypothesis_samples: DEFAULT_CONVEXITY_SAMPLES,
        }
    }
}

/// Right-hand sides of the second theorem under both H₃ variants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Variants {
    pub printed_rhs: f64,
    pub derived_rhs: f64,
    pub printed_holds: bool,
    pub derived_holds: bool,
}

impl H3Variants {
    pub fn differ(&self) -> bool {
        (self.printed_rhs - self.derived_rhs).abs() > 1e-12 * self.derived_rhs.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub side: Side,
    pub variant: Variant,
    pub case_tag: CaseTag,
    pub lhs_gap: f64,
    pub rhs_bound: f64,
    pub slack: f64,
    pub holds: bool,
    pub quadrature_error: f64,
    pub product_integral: f64,
    pub h_value: f64,
    pub theta: ThetaPair,
    pub sup: SupPair,
    pub h3_variants: Option<H3Variants>,
    /// Outcome of the hypothesis sampler; `None` when it was not run.
    pub hypothesis: Option<bool>,
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub q: f64,
}

impl BoundReport {
    /// `lhs_gap / rhs_bound`, the fraction of the bound that is used.
    pub fn slack_ratio(&self) -> f64 {
        if self.rhs_bound > 0.0 {
            self.lhs_gap / self.rhs_bound
        } else if self.lhs_gap == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub left: f64,
    pub middle: f64,
    pub right: f64,
    pub holds: bool,
    pub quadrature_error: f64,
}

impl ChainReport {
    fn new(left: f64, middle: f64, right: f64, quadrature_error: f64) -> Self {
        let holds = left <= middle + slack_for(middle) && middle <= right + slack_for(right);
        ChainReport {
            left,
            middle,
            right,
            holds,
            quadrature_error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaIdentity {
    /// `f(a) f(b) - P` as a weighted `t`-integral with weight `t - 1`.
    Eq21,
    /// `f(√ab)² - P` with weight `t`.
    Eq22,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub identity: LemmaIdentity,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub quadrature_error: f64,
    pub holds: bool,
}

/// Evaluates both sides of an integral identity independently and returns
/// their difference. Needs only differentiability, no convexity.
pub fn lemma_identity_check(
    spec: &FunctionSpec,
    interval: Interval,
    which: LemmaIdentity,
    tol: Tolerance,
) -> Result<LemmaReport> {
    let (a, b) = (interval.a(), interval.b());
    let pi = product_integral(spec, interval, tol)?.require_converged()?;
    let lhs = match which {
        LemmaIdentity::Eq21 => spec.f(a) * spec.f(b),
        LemmaIdentity::Eq22 => spec.f(interval.geometric_midpoint()).powi(2),
    } - pi.value;

    let lw = interval.log_width();
    // P(t) = a^{1-t}(ab)^{t/2} = a ρ, Q(t) = b^{1-t}(ab)^{t/2} = b / ρ with ρ = (b/a)^{t/2}
    let integrand = |t: f64| {
        let rho = (0.5 * t * lw).exp();
        let p = (a * rho).clamp(a, b);
        let q = (b / rho).clamp(a, b);
        let weight = match which {
            LemmaIdentity::Eq21 => t - 1.0,
            LemmaIdentity::Eq22 => t,
        };
        weight * 0.5 * lw * (p * spec.df(p) * spec.f(q) - q * spec.f(p) * spec.df(q))
    };
    let rhs = integrate(integrand, 0.0, 1.0, tol)?.require_converged()?;
    let residual = (lhs - rhs.value).abs();
    let scale = spec.f(a) * spec.f(b);
    Ok(LemmaReport {
        identity: which,
        lhs,
        rhs: rhs.value,
        residual,
        quadrature_error: pi.error_estimate + rhs.error_estimate,
        holds: residual <= 10.0 * tol.target(scale),
    })
}

/// `f(√ab)² ≤ P ≤ f(a) f(b)`.
pub fn hh_chain_geometric(
    spec: &FunctionSpec,
    interval: Interval,
    tol: Tolerance,
) -> Result<ChainReport> {
    let pi = product_integral(spec, interval, tol)?.require_converged()?;
    Ok(ChainReport::new(
        spec.f(interval.geometric_midpoint()).powi(2),
        pi.value,
        spec.f(interval.a()) * spec.f(interval.b()),
        pi.error_estimate,
    ))
}

/// `f((a+b)/2) ≤ (1/(b-a)) ∫ f ≤ (f(a) + f(b)) / 2`.
pub fn hh_chain_classical(
    spec: &FunctionSpec,
    interval: Interval,
    tol: Tolerance,
) -> Result<ChainReport> {
    let (a, b) = (interval.a(), interval.b());
    let r = integrate(|x| spec.f(x), a, b, tol)?.require_converged()?;
    let width = b - a;
    Ok(ChainReport::new(
        spec.f(a + width / 2.0),
        r.value / width,
        (spec.f(a) + spec.f(b)) / 2.0,
        r.error_estimate / width,
    ))
}

/// Everything an H-row needs, with `|f'|` and `M` kept as logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HInputs {
    pub a: f64,
    pub b: f64,
    pub ln_dfa: f64,
    pub ln_dfb: f64,
    pub sup: SupPair,
    pub theta: ThetaPair,
    pub s: f64,
    pub q: f64,
}

impl HInputs {
    pub fn new(spec: &FunctionSpec, interval: Interval, params: ConvexityParams) -> Result<Self> {
        let theta = theta_pair(spec, interval, params.s, params.q)?;
        Ok(HInputs {
            a: interval.a(),
            b: interval.b(),
            ln_dfa: spec.ln_abs_df(interval.a()),
            ln_dfb: spec.ln_abs_df(interval.b()),
            sup: sup_pair(spec, interval)?,
            theta,
            s: params.s,
            q: params.q,
        })
    }

    pub fn case(&self) -> CaseTag {
        classify_case(self.ln_dfa.exp(), self.ln_dfb.exp())
    }
}

/// Exponents of `(|f'(a)|, |f'(b)|)` in the `b M₁ h(θ)` term and the
/// `a M₂ h(ϑ)` term of the row for `case`.
fn row_exponents(case: CaseTag, s: f64, printed_h3: bool) -> ([f64; 2], [f64; 2]) {
    match case {
        CaseTag::BothLe1 => ([0.0, s], [s, 0.0]),
        CaseTag::BothGe1 => ([1.0 - s, 1.0], [1.0, 1.0 - s]),
        CaseTag::ALe1LeB => ([0.0, 1.0], [s, 1.0 - s]),
        // the tabulated H₃ row drops |f'(a)|^{1-s} from the first term
        CaseTag::BLe1LeA if printed_h3 => ([0.0, s], [1.0, 0.0]),
        CaseTag::BLe1LeA => ([1.0 - s, s], [1.0, 0.0]),
    }
}

/// Value of one row of the H table, regardless of which case actually
/// applies to the inputs.
pub fn h_row(kernel: Kernel, case: CaseTag, variant: Variant, inputs: &HInputs) -> f64 {
    let printed_h3 = kernel == Kernel::H3 && variant == Variant::Printed;
    let ([ea1, eb1], [ea2, eb2]) = row_exponents(case, inputs.s, printed_h3);
    let ln_h_theta = ln_kernel_of_log(kernel, inputs.theta.ln_theta);
    let ln_h_vartheta = ln_kernel_of_log(kernel, -inputs.theta.ln_theta);
    let term = |ln_end: f64, ea: f64, eb: f64, m: f64, ln_h: f64| {
        let mut ln = ln_end + m.abs().ln() + ln_h / inputs.q;
        // 0 · ln|f'| contributes nothing, even for a vanishing derivative
        if ea != 0.0 {
            ln += ea * inputs.ln_dfa;
        }
        if eb != 0.0 {
            ln += eb * inputs.ln_dfb;
        }
        ln.exp()
    };
    term(inputs.b.ln(), ea1, eb1, inputs.sup.m1, ln_h_theta)
        + term(inputs.a.ln(), ea2, eb2, inputs.sup.m2, ln_h_vartheta)
}

/// Result of assembling `H_i`: the value with the selected case and inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HAssembly {
    pub value: f64,
    pub case: CaseTag,
    pub inputs: HInputs,
}

pub fn assemble_h(
    kernel: Kernel,
    spec: &FunctionSpec,
    interval: Interval,
    params: ConvexityParams,
    variant: Variant,
) -> Result<HAssembly> {
    let inputs = HInputs::new(spec, interval, params)?;
    let case = inputs.case();
    Ok(HAssembly {
        value: h_row(kernel, case, variant, &inputs),
        case,
        inputs,
    })
}

/// Multiplier in front of `H`.
pub fn bound_prefactor(theorem: Theorem, interval: Interval, q: f64) -> f64 {
    let lw = interval.log_width();
    match theorem {
        Theorem::Thm22 => lw * 0.5f64.powf(2.0 - 1.0 / q),
        Theorem::Thm23 => 0.5 * lw * ((q - 1.0) / (2.0 * q - 1.0)).powf(1.0 - 1.0 / q),
    }
}

fn evaluate(
    theorem: Theorem,
    spec: &FunctionSpec,
    interval: Interval,
    params: ConvexityParams,
    side: Side,
    variant: Variant,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    if theorem == Theorem::Thm23 && params.q <= 1.0 {
        return Err(Error::domain(format!(
            "the h3 bound requires q > 1, got q = {}",
            params.q
        )));
    }
    let pi = product_integral(spec, interval, opts.tol)?.require_converged()?;
    let lhs_value = match side {
        Side::ProductVsFafb => spec.f(interval.a()) * spec.f(interval.b()),
        Side::ProductVsFsqrt => spec.f(interval.geometric_midpoint()).powi(2),
    };
    let lhs_gap = (lhs_value - pi.value).abs();

    let inputs = HInputs::new(spec, interval, params)?;
    let case = inputs.case();
    let kernel = match (theorem, side) {
        (Theorem::Thm22, Side::ProductVsFafb) => Kernel::H1,
        (Theorem::Thm22, Side::ProductVsFsqrt) => Kernel::H2,
        (Theorem::Thm23, _) => Kernel::H3,
    };
    let prefactor = bound_prefactor(theorem, interval, params.q);
    let h_value = h_row(kernel, case, variant, &inputs);
    let rhs_bound = prefactor * h_value;
    let slack = slack_for(rhs_bound);

    let h3_variants = (theorem == Theorem::Thm23).then(|| {
        let printed_rhs = prefactor * h_row(kernel, case, Variant::Printed, &inputs);
        let derived_rhs = prefactor * h_row(kernel, case, Variant::DerivationConsistent, &inputs);
        H3Variants {
            printed_rhs,
            derived_rhs,
            printed_holds: lhs_gap <= printed_rhs + slack_for(printed_rhs),
            derived_holds: lhs_gap <= derived_rhs + slack_for(derived_rhs),
        }
    });

    let hypothesis = if opts.check_hypothesis {
        Some(
            derivative_power_convexity(
                spec,
                interval,
                params.s,
                params.q,
                opts.hypothesis_samples,
                Execution::Sequential,
            )?
            .holds,
        )
    } else {
        None
    };

    Ok(BoundReport {
        theorem,
        side,
        variant,
        case_tag: case,
        lhs_gap,
        rhs_bound,
        slack,
        holds: lhs_gap <= rhs_bound + slack,
        quadrature_error: pi.error_estimate,
        product_integral: pi.value,
        h_value,
        theta: inputs.theta,
        sup: inputs.sup,
        h3_variants,
        hypothesis,
        function: spec.to_string(),
        a: interval.a(),
        b: interval.b(),
        s: params.s,
        q: params.q,
    })
}

/// Bound with kernel h₁ (`side = ProductVsFafb`) or h₂ (`ProductVsFsqrt`),
/// valid for `q >= 1`.
pub fn theorem_2_2(
    spec: &FunctionSpec,
    interval: Interval,
    params: ConvexityParams,
    side: Side,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    evaluate(
        Theorem::Thm22,
        spec,
        interval,
        params,
        side,
        Variant::DerivationConsistent,
        opts,
    )
}

/// Bound with kernel h₃, valid for `q > 1`; both sides share the bound.
pub fn theorem_2_3(
    spec: &FunctionSpec,
    interval: Interval,
    params: ConvexityParams,
    side: Side,
    variant: Variant,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    evaluate(Theorem::Thm23, spec, interval, params, side, variant, opts)
}

/// The `s = 1` and `q = 1` specialisations. The pinned parameter must
/// already be set in `params`; the report is the general theorem's.
pub fn corollary_eval(
    which: Corollary,
    spec: &FunctionSpec,
    interval: Interval,
    params: ConvexityParams,
    side: Side,
    opts: &EvalOptions,
) -> Result<BoundReport> {
    match which {
        Corollary::Thm22S1 | Corollary::Thm23S1 if params.s != 1.0 => {
            return Err(Error::domain(format!(
                "{which:?} requires s = 1, got {}",
                params.s
            )))
        }
        Corollary::Thm22Q1 if params.q != 1.0 => {
            return Err(Error::domain(format!(
                "{which:?} requires q = 1, got {}",
                params.q
            )))
        }
        _ => {}
    }
    match which {
        Corollary::Thm22S1 | Corollary::Thm22Q1 => theorem_2_2(spec, interval, params, side, opts),
        Corollary::Thm23S1 => theorem_2_3(
            spec,
            interval,
            params,
            side,
            Variant::DerivationConsistent,
            opts,
        ),
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every tolerance used is a named constant below.

use std::process::ExitCode;
use std::time::Instant;

use geohh::applications::{proposition_3_1, proposition_3_2};
use geohh::bounds::{
    hh_chain_geometric, lemma_identity_check, theorem_2_2, theorem_2_3, EvalOptions, LemmaIdentity,
    Side, Theorem, Variant,
};
use geohh::functions::{
    check_convexity, check_convexity_fn, ConvexityKind, CustomFamily, DEFAULT_CONVEXITY_SAMPLES,
};
use geohh::kernels::{exponent_bound_check, h1, h2, h3};
use geohh::means::{
    arithmetic_mean, geometric_mean, logarithmic_mean, p_logarithmic_mean, MeanPair,
};
use geohh::sweep::{run_sweep, Pairing, SweepConfig, SweepReport};
use geohh::{ConvexityParams, Execution, FunctionSpec, Interval, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const QUAD_REL_TOL: f64 = 1e-10;
const QUAD_ABS_TOL: f64 = 1e-12;
const LEMMA_RESIDUAL: f64 = 1e-8;
const KERNEL_REL: f64 = 1e-12;
const KERNEL_POINTS: usize = 10_000;
const KERNEL_WINDOW_POINTS: usize = 1_000;
const EXPONENT_AXIS: usize = 50;
const EXPONENT_STRIDE: usize = 2;
const SHARPNESS_TOL: f64 = 1e-10;
const MEANS_PAIRS: usize = 10_000;
const MEANS_SLACK: f64 = 1e-14;
const L1_REL: f64 = 1e-14;
const HYPOTHESIS_SAMPLES: usize = 2_000;
const SEED: u64 = 20_240_611;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> Tolerance {
    Tolerance::new(QUAD_REL_TOL, QUAD_ABS_TOL).expect("valid tolerance")
}

fn tenths(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|i| i as f64 / 10.0).collect()
}

fn c1_lemma() -> Outcome {
    let families = [
        FunctionSpec::power_shift(0.3).unwrap(),
        FunctionSpec::power_shift(0.5).unwrap(),
        FunctionSpec::power_shift(0.7).unwrap(),
        FunctionSpec::exponential(),
        FunctionSpec::power(2.0).unwrap(),
        FunctionSpec::constant(2.0).unwrap(),
    ];
    let intervals = [(0.25, 0.75), (0.5, 2.0), (1.0, 4.0)];
    let mut worst = 0.0f64;
    let mut count = 0;
    for f in &families {
        for &(a, b) in &intervals {
            let i = Interval::new(a, b).unwrap();
            if !(f.contains(a) && f.contains(b)) {
                continue;
            }
            for which in [LemmaIdentity::Eq21, LemmaIdentity::Eq22] {
                match lemma_identity_check(f, i, which, tol()) {
                    Ok(r) => worst = worst.max(r.residual),
                    Err(e) => return (false, format!("{f} on ({a}, {b}): {e}")),
                }
                count += 1;
            }
        }
    }
    (
        worst <= LEMMA_RESIDUAL,
        format!("{count} identities, max residual {worst:.3e} (limit {LEMMA_RESIDUAL:e})"),
    )
}

fn c2_kernels() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (lo, hi) = (1e-6f64.ln(), 1e6f64.ln());
    let mut us: Vec<f64> = (0..KERNEL_POINTS)
        .map(|_| rng.random_range(lo..=hi).exp())
        .collect();
    // dense coverage of the series window around u = 1
    us.extend((0..KERNEL_WINDOW_POINTS).map(|k| {
        let x = -0.1 + 0.2 * k as f64 / (KERNEL_WINDOW_POINTS - 1) as f64;
        x.exp()
    }));
    us.extend([1.0, 1e-6, 1e6]);
    let mut worst = 0.0f64;
    for &u in &us {
        let (a, b, c) = (h1(u).unwrap(), h2(u).unwrap(), h3(u).unwrap());
        worst = worst.max(((a + b - c) / c).abs());
    }
    (
        worst <= KERNEL_REL,
        format!(
            "{} points, max relative defect {worst:.3e} (limit {KERNEL_REL:e})",
            us.len()
        ),
    )
}

fn axis(lo: f64, hi: f64) -> Vec<f64> {
    (0..EXPONENT_AXIS)
        .step_by(EXPONENT_STRIDE)
        .map(|i| lo + (hi - lo) * i as f64 / (EXPONENT_AXIS - 1) as f64)
        .collect()
}

fn c3_exponent() -> Outcome {
    let mu = axis(0.01, 1.0);
    let eta = axis(1.0, 100.0);
    let t = axis(0.01, 1.0);
    let s = axis(0.01, 1.0);
    let n = mu.len() * eta.len() * t.len() * s.len();
    let bad = Execution::default()
        .map(&mu, |&m| {
            let mut bad = 0usize;
            for &e in &eta {
                for &tt in &t {
                    for &ss in &s {
                        if !exponent_bound_check(m, e, tt, ss).unwrap_or(false) {
                            bad += 1;
                        }
                    }
                }
            }
            bad
        })
        .into_iter()
        .sum::<usize>();
    (bad == 0, format!("{n} grid points, {bad} violations"))
}

fn grid_config(theorem: Theorem, q: Vec<f64>, variant: Variant) -> SweepConfig {
    SweepConfig {
        function: FunctionSpec::power_shift(0.5).unwrap(),
        tie_family_s: true,
        a: tenths(1, 8),
        b: tenths(2, 10),
        s: tenths(1, 9),
        q,
        pairing: Pairing::Upper,
        theorem,
        sides: Side::BOTH.to_vec(),
        variant,
        options: EvalOptions {
            tol: tol(),
            check_hypothesis: true,
            hypothesis_samples: HYPOTHESIS_SAMPLES,
        },
    }
}

fn describe(r: &SweepReport) -> String {
    format!(
        "{} evaluations, {} failures, {} hypothesis failures, worst lhs/rhs {:.4}",
        r.summary.total,
        r.summary.failed,
        r.summary.hypothesis_failures,
        r.summary.worst_slack_ratio
    )
}

fn c4_theorem22() -> Outcome {
    let c = grid_config(
        Theorem::Thm22,
        vec![1.0, 1.5, 2.0, 4.0],
        Variant::DerivationConsistent,
    );
    match run_sweep(&c, Execution::default()) {
        Ok(r) => (
            r.summary.failed == 0 && r.summary.hypothesis_failures == 0,
            describe(&r),
        ),
        Err(e) => (false, e.to_string()),
    }
}

fn c5_theorem23() -> Outcome {
    let q = vec![1.5, 2.0, 4.0];
    let derived = match run_sweep(
        &grid_config(Theorem::Thm23, q.clone(), Variant::DerivationConsistent),
        Execution::default(),
    ) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    // printed-variant comparison: recorded only, never fails the suite
    let mut printed_note = String::new();
    for (label, function, a, b) in [
        ("power_shift grid", None, tenths(1, 8), tenths(2, 10)),
        (
            "power:c=0.5 on a<1<b-derivative rows",
            Some(FunctionSpec::power(0.5).unwrap()),
            vec![0.05, 0.1, 0.2],
            vec![0.5, 0.8, 1.0],
        ),
    ] {
        let mut c = grid_config(Theorem::Thm23, q.clone(), Variant::Printed);
        c.options.check_hypothesis = false;
        c.a = a;
        c.b = b;
        if let Some(f) = function {
            c.function = f;
            c.tie_family_s = false;
        }
        match run_sweep(&c, Execution::default()) {
            Ok(r) => {
                let s = &r.summary;
                printed_note.push_str(&format!(
                    "\n    printed H3 report [{label}]: {} rows, {} differ from derived, {} printed-variant violations",
                    s.total,
                    s.h3_discrepancies.len(),
                    s.printed_variant_violations
                ));
                for d in s
                    .h3_discrepancies
                    .iter()
                    .filter(|d| !d.printed_holds)
                    .take(3)
                {
                    let row = &r.rows[d.row];
                    printed_note.push_str(&format!(
                        "\n      violation: a={} b={} s={} q={} case={} printed={:.6e} derived={:.6e} lhs={:.6e}",
                        row.a, row.b, row.s, row.q, d.case_tag.as_str(), d.printed_rhs, d.derived_rhs, row.lhs_gap
                    ));
                }
            }
            Err(e) => {
                printed_note.push_str(&format!("\n    printed H3 report [{label}] failed: {e}"))
            }
        }
    }
    (
        derived.summary.failed == 0 && derived.summary.hypothesis_failures == 0,
        format!("{}{printed_note}", describe(&derived)),
    )
}

fn c6_sharpness() -> Outcome {
    let opts = EvalOptions {
        tol: tol(),
        ..EvalOptions::default()
    };
    let intervals = [(0.25, 0.75), (0.5, 2.0), (1.0, 4.0)];
    let mut worst_chain = 0.0f64;
    let mut worst_gap = 0.0f64;
    let mut evals = 0;
    for c in [-1.0, 0.5, 1.0, 2.0] {
        let f = FunctionSpec::power(c).unwrap();
        for &(a, b) in &intervals {
            let i = Interval::new(a, b).unwrap();
            let ch = match hh_chain_geometric(&f, i, tol()) {
                Ok(ch) => ch,
                Err(e) => return (false, format!("{f}: {e}")),
            };
            let scale = ch.right.abs().max(1.0);
            worst_chain = worst_chain
                .max((ch.middle - ch.left).abs() / scale)
                .max((ch.right - ch.middle).abs() / scale);
            for s in [0.5, 1.0] {
                for q in [1.0, 2.0] {
                    let p = ConvexityParams::new(s, q).unwrap();
                    for side in Side::BOTH {
                        let mut reports = vec![theorem_2_2(&f, i, p, side, &opts)];
                        if q > 1.0 {
                            reports.push(theorem_2_3(
                                &f,
                                i,
                                p,
                                side,
                                Variant::DerivationConsistent,
                                &opts,
                            ));
                        }
                        for r in reports {
                            match r {
                                Ok(r) => worst_gap = worst_gap.max(r.lhs_gap),
                                Err(e) => return (false, format!("{f}: {e}")),
                            }
                            evals += 1;
                        }
                    }
                }
            }
        }
    }
    (
        worst_chain <= SHARPNESS_TOL && worst_gap <= SHARPNESS_TOL,
        format!(
            "chain spread {worst_chain:.3e}, max lhs_gap {worst_gap:.3e} over {evals} evaluations (limit {SHARPNESS_TOL:e})"
        ),
    )
}

fn c7_means() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let (lo, hi) = (1e-3f64.ln(), 1e3f64.ln());
    let mut chain_bad = 0;
    let mut l1_worst = 0.0f64;
    let mut n = 0;
    while n < MEANS_PAIRS {
        let a = rng.random_range(lo..=hi).exp();
        let b = rng.random_range(lo..=hi).exp();
        if a == b {
            continue;
        }
        n += 1;
        let p = MeanPair::new(a, b).unwrap();
        let (g, l, am) = (geometric_mean(p), logarithmic_mean(p), arithmetic_mean(p));
        if !(g < l * (1.0 + MEANS_SLACK) && l < am * (1.0 + MEANS_SLACK)) {
            chain_bad += 1;
        }
        let l1 = p_logarithmic_mean(p, 1.0).unwrap();
        l1_worst = l1_worst.max(((l1 - am) / am).abs());
    }
    (
        chain_bad == 0 && l1_worst <= L1_REL,
        format!("{n} pairs, {chain_bad} chain violations, max |L1/A - 1| {l1_worst:.3e}"),
    )
}

fn c8_propositions() -> Outcome {
    let opts = EvalOptions {
        tol: tol(),
        ..EvalOptions::default()
    };
    let mut total = 0;
    let mut failed = 0;
    let mut disagreements = Vec::new();
    for a in tenths(1, 8) {
        for b in tenths(2, 10).into_iter().filter(|&b| b > a) {
            for s in tenths(1, 9) {
                for q in [1.0, 1.5, 2.0, 4.0] {
                    let mut batch = match proposition_3_1(a, b, s, q, &opts) {
                        Ok(r) => r,
                        Err(e) => return (false, format!("prop 1 at ({a}, {b}, {s}, {q}): {e}")),
                    };
                    if q > 1.0 {
                        match proposition_3_2(a, b, s, q, &opts) {
                            Ok(r) => batch.extend(r),
                            Err(e) => {
                                return (false, format!("prop 2 at ({a}, {b}, {s}, {q}): {e}"))
                            }
                        }
                    }
                    for r in batch {
                        total += 1;
                        if !r.holds {
                            failed += 1;
                        }
                        for d in &r.disagreements {
                            disagreements.push(format!(
                                "{:?}/{:?} a={a} b={b} s={s} q={q}: {d}",
                                r.proposition, r.side
                            ));
                        }
                    }
                }
            }
        }
    }
    let mut detail = format!(
        "{total} reports, {failed} failures, {} form disagreements",
        disagreements.len()
    );
    for d in disagreements.iter().take(10) {
        detail.push_str(&format!("\n    {d}"));
    }
    (failed == 0 && disagreements.is_empty(), detail)
}

#[derive(Debug)]
struct Wobbly;

impl CustomFamily for Wobbly {
    fn name(&self) -> String {
        "2+sin(5x)".into()
    }
    fn value(&self, x: f64) -> f64 {
        2.0 + (5.0 * x).sin()
    }
    fn derivative(&self, x: f64) -> f64 {
        5.0 * (5.0 * x).cos()
    }
}

fn c9_convexity() -> Outcome {
    let n = DEFAULT_CONVEXITY_SAMPLES;
    let exec = Execution::default();
    let mut notes = Vec::new();
    let mut ok = true;

    let e = FunctionSpec::exponential();
    for (a, b) in [(1e-4, 1.0), (0.5, 10.0)] {
        let w = check_convexity(
            &e,
            Interval::new(a, b).unwrap(),
            ConvexityKind::GeometricallyConvex,
            None,
            n,
            exec,
        )
        .expect("valid check");
        ok &= w.holds;
    }
    notes.push(format!("exponential geometrically convex: {ok}"));

    let mut power_ok = true;
    for s in tenths(1, 9) {
        for q in [1.0, 2.0] {
            let f = FunctionSpec::power((s - 1.0) * q).unwrap();
            let w = check_convexity(
                &f,
                Interval::new(1e-4, 1.0).unwrap(),
                ConvexityKind::SGeometricallyConvex,
                Some(s),
                n,
                exec,
            )
            .expect("valid check");
            power_ok &= w.holds;
        }
    }
    notes.push(format!(
        "power((s-1)q) s-geometrically convex on (1e-4, 1]: {power_ok}"
    ));
    ok &= power_ok;

    let wobbly = FunctionSpec::custom(std::sync::Arc::new(Wobbly)).expect("consistent derivative");
    let i = Interval::new(0.5, 3.0).unwrap();
    let w1 = check_convexity(
        &wobbly,
        i,
        ConvexityKind::GeometricallyConvex,
        None,
        n,
        Execution::Sequential,
    )
    .expect("valid check");
    let w2 = check_convexity(
        &wobbly,
        i,
        ConvexityKind::GeometricallyConvex,
        None,
        n,
        exec,
    )
    .expect("valid check");
    let w3 = check_convexity_fn(
        |x| wobbly.f(x),
        0.5,
        3.0,
        ConvexityKind::GeometricallyConvex,
        None,
        n,
        exec,
    )
    .expect("valid check");
    let reproducible = w1 == w2 && w2 == w3;
    match &w1.violation {
        Some(v) if !w1.holds && reproducible => notes.push(format!(
            "{wobbly} witness x={:.6} y={:.6} lambda={:.6} lhs={:.6} rhs={:.6} (reproduced)",
            v.x, v.y, v.lambda, v.lhs, v.rhs
        )),
        _ => {
            ok = false;
            notes.push(format!("{wobbly}: no reproducible witness"));
        }
    }
    (ok, notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("integral identities", c1_lemma),
        ("kernel identity h1 + h2 = h3", c2_kernels),
        ("exponent inequality grid", c3_exponent),
        ("h1/h2 bound domination", c4_theorem22),
        ("h3 bound domination", c5_theorem23),
        ("sharpness for powers", c6_sharpness),
        ("means chain", c7_means),
        ("special-means propositions", c8_propositions),
        ("convexity checkers", c9_convexity),
    ];
    let start = Instant::now();
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = run();
        all &= ok;
        println!(
            "criterion {}: {} - {name}: {detail} [{:.2}s]",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} ({:.1}s)",
        if all { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

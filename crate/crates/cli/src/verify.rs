use geohh::applications::{proposition_3_1, proposition_3_2};
use geohh::bounds::{
    hh_chain_classical, hh_chain_geometric, lemma_identity_check, theorem_2_2, theorem_2_3,
    BoundReport, EvalOptions, LemmaIdentity,
};
use geohh::functions::{check_convexity, derivative_power_convexity, ConvexityKind};
use geohh::{ConvexityParams, Execution, FunctionSpec, Interval};
use serde::Serialize;
use serde_json::json;

use crate::args::{ChainArg, Check, Target, VerifyArgs};
use crate::failure::{print_stdout, Failure};
use crate::settings::tolerance;
use crate::{Outcome, SCHEMA_VERSION};

fn function(args: &VerifyArgs) -> Result<FunctionSpec, Failure> {
    let text = args.function.as_deref().ok_or_else(|| {
        Failure::usage(format!("--f is required for `verify {:?}`", args.check).to_lowercase())
    })?;
    Ok(text.parse()?)
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Lemma => "lemma",
        Check::Chain => "chain",
        Check::Thm22 => "thm22",
        Check::Thm23 => "thm23",
        Check::Prop31 => "prop31",
        Check::Prop32 => "prop32",
        Check::Convexity => "convexity",
    }
}

fn warn_hypothesis(reports: &[BoundReport]) {
    for r in reports.iter().filter(|r| r.hypothesis == Some(false)) {
        eprintln!(
            "geohh: warning: |f'|^q failed the s-geometric convexity sampler for {} on ({}, {}); the bound is not guaranteed",
            r.function, r.a, r.b
        );
    }
}

fn emit<T: Serialize>(check: Check, holds: bool, reports: &[T]) -> Result<Outcome, Failure> {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "check": check_name(check),
        "holds": holds,
        "reports": reports,
    });
    print_stdout(&serde_json::to_string_pretty(&doc)?)?;
    Ok(Outcome::from_bool(holds))
}

pub fn run(args: VerifyArgs) -> Result<Outcome, Failure> {
    let tol = tolerance(args.tol.rel_tol, args.tol.abs_tol, args.tol.max_panels)?;
    let interval = Interval::new(args.a, args.b)?;
    let opts = EvalOptions {
        tol,
        check_hypothesis: args.check_hypothesis,
        hypothesis_samples: args.samples,
    };
    let sides = args.side.sides();

    match args.check {
        Check::Lemma => {
            let f = function(&args)?;
            let reports = [LemmaIdentity::Eq21, LemmaIdentity::Eq22]
                .into_iter()
                .map(|w| lemma_identity_check(&f, interval, w, tol))
                .collect::<Result<Vec<_>, _>>()?;
            emit(args.check, reports.iter().all(|r| r.holds), &reports)
        }
        Check::Chain => {
            let f = function(&args)?;
            let r = match args.chain {
                ChainArg::Geometric => hh_chain_geometric(&f, interval, tol)?,
                ChainArg::Classical => hh_chain_classical(&f, interval, tol)?,
            };
            emit(args.check, r.holds, &[r])
        }
        Check::Thm22 | Check::Thm23 => {
            let f = function(&args)?;
            let params = ConvexityParams::new(args.s, args.q)?;
            let reports = sides
                .iter()
                .map(|&side| match args.check {
                    Check::Thm22 => theorem_2_2(&f, interval, params, side, &opts),
                    _ => theorem_2_3(&f, interval, params, side, args.variant.into(), &opts),
                })
                .collect::<Result<Vec<_>, _>>()?;
            warn_hypothesis(&reports);
            emit(args.check, reports.iter().all(|r| r.holds), &reports)
        }
        Check::Prop31 | Check::Prop32 => {
            if args.function.is_some() {
                eprintln!("geohh: note: --f is ignored; the propositions fix f(x) = x^s/s + 1");
            }
            let all = if args.check == Check::Prop31 {
                proposition_3_1(args.a, args.b, args.s, args.q, &opts)?
            } else {
                proposition_3_2(args.a, args.b, args.s, args.q, &opts)?
            };
            let reports: Vec<_> = all
                .into_iter()
                .filter(|r| sides.contains(&r.side))
                .collect();
            for r in &reports {
                for d in &r.disagreements {
                    eprintln!("geohh: warning: means form disagrees with theorem form: {d}");
                }
            }
            emit(args.check, reports.iter().all(|r| r.holds), &reports)
        }
        Check::Convexity => {
            let f = function(&args)?;
            let exec = Execution::default();
            let w = match args.target {
                Target::F => {
                    let kind: ConvexityKind = args.kind.parse()?;
                    let s = kind.needs_s().then_some(args.s);
                    check_convexity(&f, interval, kind, s, args.samples, exec)?
                }
                Target::Dfq => {
                    derivative_power_convexity(&f, interval, args.s, args.q, args.samples, exec)?
                }
            };
            emit(args.check, w.holds, &[w])
        }
    }
}

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use geohh::bounds::{BoundReport, EvalOptions, Side, Theorem, Variant};
use geohh::functions::DEFAULT_CONVEXITY_SAMPLES;
use geohh::sweep::{run_sweep, Pairing, SweepConfig, SweepReport};
use geohh::{Execution, FunctionSpec};
use serde_json::json;

use crate::args::{Format, SideArg, SweepArgs, TheoremArg, VariantArg};
use crate::failure::{print_stdout, Failure};
use crate::settings::{parse_bool, parse_f64, parse_grid, read_config, tolerance};
use crate::{Outcome, SCHEMA_VERSION};

/// Fixed CSV column order.
pub const CSV_COLUMNS: &[&str] = &[
    "theorem",
    "side",
    "variant",
    "function",
    "a",
    "b",
    "s",
    "q",
    "case_tag",
    "lhs_gap",
    "rhs_bound",
    "slack",
    "holds",
    "quadrature_error",
    "product_integral",
    "h_value",
    "theta",
    "vartheta",
    "ln_theta",
    "m1",
    "m2",
    "h3_printed_rhs",
    "h3_derived_rhs",
    "h3_printed_holds",
    "h3_derived_holds",
    "hypothesis",
];

struct Resolved {
    config: SweepConfig,
    exec: Execution,
    format: Format,
    out: Option<PathBuf>,
}

fn value_enum<T: ValueEnum>(key: &str, text: &str) -> Result<T, Failure> {
    T::from_str(text.trim(), true)
        .map_err(|_| Failure::usage(format!("{key}: invalid value {text:?}")))
}

fn resolve(args: SweepArgs) -> Result<Resolved, Failure> {
    let file: BTreeMap<String, String> = match &args.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    let from_file = |k: &str| file.get(k).map(String::as_str);
    let text =
        |flag: &Option<String>, k: &str| flag.as_deref().or(from_file(k)).map(str::to_string);
    let grid = |flag: &Option<String>, k: &str| -> Result<Vec<f64>, Failure> {
        let t = text(flag, k).ok_or_else(|| Failure::usage(format!("grid `{k}` is missing")))?;
        parse_grid(k, &t)
    };
    let flag_or_file = |flag: bool, k: &str| -> Result<bool, Failure> {
        Ok(flag
            || from_file(k)
                .map(|v| parse_bool(k, v))
                .transpose()?
                .unwrap_or(false))
    };
    let file_f64 = |k: &str| from_file(k).map(|v| parse_f64(k, v)).transpose();

    let function: FunctionSpec = text(&args.function, "f")
        .ok_or_else(|| Failure::usage("--f is required"))?
        .parse()?;
    let theorem: Theorem = match (args.theorem, from_file("theorem")) {
        (Some(t), _) => t.into(),
        (None, Some(t)) => value_enum::<TheoremArg>("theorem", t)?.into(),
        (None, None) => Theorem::Thm22,
    };
    let sides: Vec<Side> = match (args.side, from_file("side")) {
        (Some(s), _) => s.sides(),
        (None, Some(s)) => value_enum::<SideArg>("side", s)?.sides(),
        (None, None) => vec![Side::ProductVsFafb],
    };
    let variant: Variant = match (args.variant, from_file("variant")) {
        (Some(v), _) => v.into(),
        (None, Some(v)) => value_enum::<VariantArg>("variant", v)?.into(),
        (None, None) => Variant::DerivationConsistent,
    };
    let format = match (args.format, from_file("format")) {
        (Some(f), _) => f,
        (None, Some(f)) => value_enum::<Format>("format", f)?,
        (None, None) => Format::Json,
    };
    let samples = match (args.samples, from_file("samples")) {
        (Some(n), _) => n,
        (None, Some(n)) => n
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("samples: not a count: {n:?}")))?,
        (None, None) => DEFAULT_CONVEXITY_SAMPLES,
    };
    let tol = tolerance(
        args.tol
            .rel_tol
            .map(Ok)
            .or(file_f64("rel_tol").transpose())
            .transpose()?,
        args.tol
            .abs_tol
            .map(Ok)
            .or(file_f64("abs_tol").transpose())
            .transpose()?,
        match (args.tol.max_panels, from_file("max_panels")) {
            (Some(n), _) => Some(n),
            (None, Some(n)) => Some(
                n.trim()
                    .parse()
                    .map_err(|_| Failure::usage(format!("max_panels: not a count: {n:?}")))?,
            ),
            (None, None) => None,
        },
    )?;
    let sequential = flag_or_file(args.sequential, "sequential")?;
    let config = SweepConfig {
        function,
        tie_family_s: flag_or_file(args.tie_s, "tie_s")?,
        a: grid(&args.a, "a")?,
        b: grid(&args.b, "b")?,
        s: grid(&args.s, "s")?,
        q: grid(&args.q, "q")?,
        pairing: if flag_or_file(args.upper_only, "upper_only")? {
            Pairing::Upper
        } else {
            Pairing::Product
        },
        theorem,
        sides,
        variant,
        options: EvalOptions {
            tol,
            check_hypothesis: flag_or_file(args.check_hypothesis, "check_hypothesis")?,
            hypothesis_samples: samples,
        },
    };
    Ok(Resolved {
        config,
        exec: if sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
        format,
        out: args.out.or_else(|| from_file("out").map(PathBuf::from)),
    })
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_record(r: &BoundReport) -> Vec<String> {
    let opt_f = |v: Option<f64>| v.map(fmt_f).unwrap_or_default();
    let opt_b = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
    let h3 = r.h3_variants;
    let enum_str = |v: serde_json::Value| v.as_str().unwrap_or_default().to_string();
    vec![
        enum_str(json!(r.theorem)),
        enum_str(json!(r.side)),
        enum_str(json!(r.variant)),
        r.function.clone(),
        fmt_f(r.a),
        fmt_f(r.b),
        fmt_f(r.s),
        fmt_f(r.q),
        r.case_tag.as_str().to_string(),
        fmt_f(r.lhs_gap),
        fmt_f(r.rhs_bound),
        fmt_f(r.slack),
        r.holds.to_string(),
        fmt_f(r.quadrature_error),
        fmt_f(r.product_integral),
        fmt_f(r.h_value),
        fmt_f(r.theta.theta),
        fmt_f(r.theta.vartheta),
        fmt_f(r.theta.ln_theta),
        fmt_f(r.sup.m1),
        fmt_f(r.sup.m2),
        opt_f(h3.map(|h| h.printed_rhs)),
        opt_f(h3.map(|h| h.derived_rhs)),
        opt_b(h3.map(|h| h.printed_holds)),
        opt_b(h3.map(|h| h.derived_holds)),
        opt_b(r.hypothesis),
    ]
}

fn write_rows(w: impl Write, report: &SweepReport, format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "summary": report.summary,
                "rows": report.rows,
            });
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
            w.flush()?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(w);
            w.write_record(CSV_COLUMNS)?;
            for r in &report.rows {
                w.write_record(csv_record(r))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes through a sibling temporary file so a failed write leaves nothing
/// behind at `path`.
fn write_file(path: &Path, report: &SweepReport, format: Format) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = fs::File::create(&tmp)
        .map_err(Failure::from)
        .and_then(|f| write_rows(std::io::BufWriter::new(f), report, format))
        .and_then(|()| fs::rename(&tmp, path).map_err(Failure::from));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

pub fn run(args: SweepArgs) -> Result<Outcome, Failure> {
    let r = resolve(args)?;
    let report = run_sweep(&r.config, r.exec)?;
    let summary = serde_json::to_string_pretty(&json!({
        "schema_version": SCHEMA_VERSION,
        "summary": report.summary,
    }))?;
    match &r.out {
        Some(path) => {
            write_file(path, &report, r.format)?;
            print_stdout(&summary)?;
        }
        None => {
            write_rows(std::io::stdout().lock(), &report, r.format)?;
            eprintln!("{summary}");
        }
    }
    Ok(Outcome::from_bool(report.summary.failed == 0))
}

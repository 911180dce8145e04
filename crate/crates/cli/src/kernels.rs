use geohh::kernels::{kernel, Kernel};
use serde::Serialize;
use serde_json::json;

use crate::args::{Format, KernelArgs};
use crate::failure::{print_stdout, Failure};
use crate::settings::{parse_f64, parse_grid};
use crate::{Outcome, SCHEMA_VERSION};

#[derive(Debug, Serialize)]
struct Row {
    u: f64,
    h1: f64,
    h2: f64,
    h3: f64,
    identity: f64,
}

fn points(args: &KernelArgs) -> Result<Vec<f64>, Failure> {
    if let Some(list) = &args.u {
        return list.split(',').map(|p| parse_f64("u", p)).collect();
    }
    let (lo, hi) = (args.u_min, args.u_max);
    if !(lo > 0.0 && hi.is_finite() && lo <= hi) {
        return Err(Failure::usage(format!(
            "need 0 < u-min <= u-max, got [{lo}, {hi}]"
        )));
    }
    if args.points == 0 {
        return Err(Failure::usage("--points must be positive"));
    }
    let ln_grid = parse_grid("u", &format!("{}:{}:{}", lo.ln(), hi.ln(), args.points))?;
    let n = ln_grid.len();
    Ok(ln_grid
        .into_iter()
        .enumerate()
        .map(|(i, x)| match i {
            0 => lo,
            i if i == n - 1 => hi,
            _ => x.exp(),
        })
        .collect())
}

pub fn run(args: KernelArgs) -> Result<Outcome, Failure> {
    let rows = points(&args)?
        .into_iter()
        .map(|u| -> Result<Row, Failure> {
            let (h1, h2, h3) = (
                kernel(Kernel::H1, u)?,
                kernel(Kernel::H2, u)?,
                kernel(Kernel::H3, u)?,
            );
            Ok(Row {
                u,
                h1,
                h2,
                h3,
                identity: h1 + h2 - h3,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    match args.format {
        Format::Json => {
            let doc = json!({ "schema_version": SCHEMA_VERSION, "rows": rows });
            print_stdout(&serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["u", "h1", "h2", "h3", "h1+h2-h3"])?;
            for r in &rows {
                w.write_record([r.u, r.h1, r.h2, r.h3, r.identity].map(|v| format!("{v:.16e}")))?;
            }
            w.flush()?;
        }
    }
    Ok(Outcome::Holds)
}

//! Cartesian-product parameter sweeps over the bound theorems.

use serde::{Deserialize, Serialize};

use crate::bounds::{theorem_2_2, theorem_2_3, BoundReport, EvalOptions, Side, Theorem, Variant};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functions::{ConvexityParams, Family, FunctionSpec};
use crate::kernels::CaseTag;
use crate::quadrature::Interval;

/// How the `a` and `b` lists are combined into intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// Every `(a, b)`; any pair with `a >= b` is a configuration error.
    #[default]
    Product,
    /// Only the pairs with `a < b`.
    Upper,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub function: FunctionSpec,
    /// Replace the `s` of a `power_shift` family by the grid value of `s`.
    pub tie_family_s: bool,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub s: Vec<f64>,
    pub q: Vec<f64>,
    pub pairing: Pairing,
    pub theorem: Theorem,
    pub sides: Vec<Side>,
    pub variant: Variant,
    pub options: EvalOptions,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Job {
    a: f64,
    b: f64,
    s: f64,
    q: f64,
    side: Side,
}

impl SweepConfig {
    fn jobs(&self) -> Result<Vec<Job>> {
        for (name, grid) in [
            ("a", &self.a),
            ("b", &self.b),
            ("s", &self.s),
            ("q", &self.q),
        ] {
            if grid.is_empty() {
                return Err(Error::domain(format!("grid `{name}` is empty")));
            }
        }
        if self.sides.is_empty() {
            return Err(Error::domain("no side selected"));
        }
        if self.theorem == Theorem::Thm23 {
            if let Some(q) = self.q.iter().find(|&&q| q <= 1.0) {
                return Err(Error::domain(format!(
                    "the h3 bound requires q > 1, grid has {q}"
                )));
            }
        }
        if self.tie_family_s && !matches!(self.function.family(), Family::PowerShift { .. }) {
            return Err(Error::domain("tying s needs a power_shift family"));
        }
        for &s in &self.s {
            for &q in &self.q {
                ConvexityParams::new(s, q)?;
            }
        }
        let mut jobs = Vec::new();
        for &a in &self.a {
            for &b in &self.b {
                if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
                    match self.pairing {
                        Pairing::Product => return Err(Error::InvalidInterval { a, b }),
                        Pairing::Upper => continue,
                    }
                }
                Interval::new(a, b)?;
                for &s in &self.s {
                    for &q in &self.q {
                        for &side in &self.sides {
                            jobs.push(Job { a, b, s, q, side });
                        }
                    }
                }
            }
        }
        if jobs.is_empty() {
            return Err(Error::domain("the grid contains no interval with a < b"));
        }
        Ok(jobs)
    }
}

/// A row where the tabulated and derivation-consistent H₃ bounds differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub row: usize,
    pub case_tag: CaseTag,
    pub printed_rhs: f64,
    pub derived_rhs: f64,
    pub printed_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total: usize,
    pub holds: usize,
    pub failed: usize,
    pub failed_rows: Vec<usize>,
    pub worst_slack_ratio: f64,
    pub worst_row: usize,
    pub hypothesis_failures: usize,
    pub h3_discrepancies: Vec<Discrepancy>,
    pub printed_variant_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<BoundReport>,
    pub summary: SweepSummary,
}

pub fn summarize(rows: &[BoundReport]) -> SweepSummary {
    let mut worst_slack_ratio = f64::NEG_INFINITY;
    let mut worst_row = 0;
    let mut failed_rows = Vec::new();
    let mut h3_discrepancies = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if !r.holds {
            failed_rows.push(i);
        }
        let ratio = r.slack_ratio();
        if ratio > worst_slack_ratio {
            worst_slack_ratio = ratio;
            worst_row = i;
        }
        if let Some(v) = r.h3_variants.filter(|v| v.differ()) {
            h3_discrepancies.push(Discrepancy {
                row: i,
                case_tag: r.case_tag,
                printed_rhs: v.printed_rhs,
                derived_rhs: v.derived_rhs,
                printed_holds: v.printed_holds,
            });
        }
    }
    SweepSummary {
        total: rows.len(),
        holds: rows.len() - failed_rows.len(),
        failed: failed_rows.len(),
        failed_rows,
        worst_slack_ratio,
        worst_row,
        hypothesis_failures: rows.iter().filter(|r| r.hypothesis == Some(false)).count(),
        printed_variant_violations: h3_discrepancies.iter().filter(|d| !d.printed_holds).count(),
        h3_discrepancies,
    }
}

/// Evaluates the grid in `a, b, s, q, side` order. Any evaluation error
/// aborts the sweep.
pub fn run_sweep(config: &SweepConfig, exec: Execution) -> Result<SweepReport> {
    let jobs = config.jobs()?;
    let results = exec.map(&jobs, |job| -> Result<BoundReport> {
        let spec = if config.tie_family_s {
            FunctionSpec::power_shift(job.s)?
        } else {
            config.function.clone()
        };
        let interval = Interval::new(job.a, job.b)?;
        let params = ConvexityParams::new(job.s, job.q)?;
        match config.theorem {
            Theorem::Thm22 => theorem_2_2(&spec, interval, params, job.side, &config.options),
            Theorem::Thm23 => theorem_2_3(
                &spec,
                interval,
                params,
                job.side,
                config.variant,
                &config.options,
            ),
        }
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let summary = summarize(&rows);
    Ok(SweepReport { rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> SweepConfig {
        SweepConfig {
            function: FunctionSpec::power_shift(0.5).unwrap(),
            tie_family_s: true,
            a: vec![0.1, 0.2],
            b: vec![0.5, 0.9],
            s: vec![0.3, 0.7],
            q: vec![1.5, 2.0],
            pairing: Pairing::Product,
            theorem: Theorem::Thm22,
            sides: Side::BOTH.to_vec(),
            variant: Variant::DerivationConsistent,
            options: EvalOptions::default(),
        }
    }

    #[test]
    fn row_count_and_order() {
        let r = run_sweep(&config(), Execution::Sequential).unwrap();
        assert_eq!(r.rows.len(), 2 * 2 * 2 * 2 * 2);
        assert_eq!(r.summary.failed, 0);
        assert_eq!((r.rows[0].a, r.rows[0].b, r.rows[0].s), (0.1, 0.5, 0.3));
        assert_eq!(r.rows[0].side, Side::ProductVsFafb);
        assert_eq!(r.rows[1].side, Side::ProductVsFsqrt);
        assert_eq!(r.rows[31].a, 0.2);
        assert_eq!(r.rows[31].function, "power_shift:s=0.7");
    }

    #[test]
    fn parallel_matches_sequential() {
        let seq = run_sweep(&config(), Execution::Sequential).unwrap();
        let par = run_sweep(&config(), Execution::default()).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn config_errors() {
        let mut c = config();
        c.q.clear();
        assert!(run_sweep(&c, Execution::Sequential).is_err());

        let mut c = config();
        c.b = vec![0.15];
        assert!(matches!(
            run_sweep(&c, Execution::Sequential),
            Err(Error::InvalidInterval { .. })
        ));
        c.pairing = Pairing::Upper;
        assert_eq!(run_sweep(&c, Execution::Sequential).unwrap().rows.len(), 8);

        let mut c = config();
        c.theorem = Theorem::Thm23;
        c.q = vec![1.0, 2.0];
        assert!(run_sweep(&c, Execution::Sequential).is_err());

        let mut c = config();
        c.function = FunctionSpec::exponential();
        assert!(run_sweep(&c, Execution::Sequential).is_err());
    }

    #[test]
    fn printed_variant_discrepancies_are_listed() {
        // power(0.5): |f'(a)| > 1 >= |f'(b)| on (0.1, 1)
        let c = SweepConfig {
            function: FunctionSpec::power(0.5).unwrap(),
            tie_family_s: false,
            a: vec![0.05, 0.1],
            b: vec![0.8, 1.0],
            s: vec![0.5, 1.0],
            q: vec![2.0],
            pairing: Pairing::Product,
            theorem: Theorem::Thm23,
            sides: vec![Side::ProductVsFafb],
            variant: Variant::Printed,
            options: EvalOptions::default(),
        };
        let r = run_sweep(&c, Execution::Sequential).unwrap();
        // s = 1 rows coincide, s = 0.5 rows differ
        assert_eq!(r.summary.h3_discrepancies.len(), 4);
        assert!(r
            .summary
            .h3_discrepancies
            .iter()
            .all(|d| d.case_tag == CaseTag::BLe1LeA && d.printed_rhs < d.derived_rhs));
    }
}

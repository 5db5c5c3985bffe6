use std::path::Path;

use anyhow::Context;
use moment_forge::arith::{phi_flat, ShiftSet};
use moment_forge::empirical::{
    compare_p3, empirical_moment, empirical_moment_shifted, theorem1 as theorem1_report, zeta_sixth_integral,
};
use moment_forge::identities::{run_suite, Suite, SuiteReport};
use moment_forge::local::k_s;
use moment_forge::predictor::{a3, a3_l, cached_swap_sum, q_zero_shift_with, staggered_shifts, ZeroShiftValue};
use moment_forge::report::MomentReport;
use moment_forge::special::gamma_mp;
use moment_forge::PrecisionContext;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::RunConfig;
use crate::output::{num, opt_num, Output, Table};

/// 9!
const FACT9: f64 = 362_880.0;

#[derive(Debug, Clone, Serialize)]
struct Constant {
    name: &'static str,
    value: f64,
    err_bound: f64,
}

pub fn constants(config: &RunConfig) -> anyhow::Result<Output> {
    let ctx = config.ctx();
    let cut = config.euler_cutoff;
    let a = a3(cut);
    let al = a3_l(cut)?;
    let g = gamma_mp(&ctx.complex(0.25, 0.0), &ctx)?.to_c64().re;
    let k1 = k_s(Complex64::new(1.0, 0.0), cut)?;
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    let abs = |v: f64, rel: f64| v.abs() * rel;
    let rows = vec![
        Constant {
            name: "a3",
            value: a.value.re,
            err_bound: abs(a.value.re, a.tail_bound),
        },
        Constant {
            name: "a3_L",
            value: al.value.re,
            err_bound: abs(al.value.re, al.tail_bound),
        },
        Constant {
            name: "42_a3_over_9!",
            value: 42.0 * a.value.re / FACT9,
            err_bound: abs(42.0 * a.value.re / FACT9, a.tail_bound),
        },
        Constant {
            name: "gamma_1_4",
            value: g,
            err_bound: abs(g, f64::EPSILON),
        },
        Constant {
            name: "K1_zeta2",
            value: k1.value.re * zeta2,
            err_bound: abs(k1.value.re * zeta2, k1.tail_bound),
        },
    ];
    let mut table = Table::new(&["name", "value", "err_bound"]);
    for r in &rows {
        table.push(vec![r.name.to_string(), num(r.value), num(r.err_bound)]);
    }
    Ok(Output {
        command: "constants",
        json: json!({ "euler_cutoff": cut, "constants": rows }),
        table,
        pass: true,
    })
}

/// Shift file: `{"a": [[re, im], ...], "b": [[re, im], ...]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShiftFile {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

fn read_shifts(path: &Path) -> anyhow::Result<(ShiftSet, ShiftSet)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f: ShiftFile = serde_json::from_str(&text).with_context(|| format!("parsing shifts {}", path.display()))?;
    Ok((ShiftSet::new(f.a)?, ShiftSet::new(f.b)?))
}

#[derive(Serialize)]
struct ZeroPrediction {
    q: u64,
    k: usize,
    t: f64,
    #[serde(flatten)]
    v: ZeroShiftValue,
    err_bound: f64,
}

pub fn predict(config: &RunConfig, q: u64, shifts: &str, t: f64, k: usize) -> anyhow::Result<Output> {
    let ctx = config.ctx();
    let mut table = Table::new(&["q", "t", "value_re", "value_im", "err_bound"]);
    let json = if shifts == "zero" {
        let v = q_zero_shift_with(q, k, t, &config.settings(), &ctx)?;
        let err = (v.extrapolation_error + v.euler_tail) * v.value.abs();
        table.push(vec![q.to_string(), num(t), num(v.value), num(0.0), num(err)]);
        serde_json::to_value(ZeroPrediction {
            q,
            k,
            t,
            v,
            err_bound: err,
        })?
    } else {
        let (a, b) = read_shifts(Path::new(shifts))?;
        let ss = cached_swap_sum(&a, &b, config.euler_cutoff, &ctx)?;
        let v = ss.total(q, t)?.to_c64();
        let err = ss.euler_tail * v.norm();
        table.push(vec![q.to_string(), num(t), num(v.re), num(v.im), num(err)]);
        json!({
            "q": q,
            "t": t,
            "shifts_a": a,
            "shifts_b": b,
            "terms": ss.len(),
            "value": v,
            "err_bound": err,
        })
    };
    Ok(Output {
        command: "predict",
        json,
        table,
        pass: true,
    })
}

fn report_table(reports: &[MomentReport]) -> Table {
    let mut t = Table::new(&["family", "empirical", "predicted", "rel_dev", "err_bound", "seconds"]);
    for r in reports {
        t.push(vec![
            r.family.clone(),
            num(r.empirical),
            num(r.predicted),
            num(r.rel_dev),
            num(r.err_bound),
            opt_num(r.seconds),
        ]);
    }
    t
}

fn strip_timing(mut r: MomentReport, timings: bool) -> MomentReport {
    if !timings {
        r.seconds = None;
    }
    r
}

pub fn empirical(
    config: &RunConfig,
    qs: &[u64],
    shifts: Option<&Path>,
    t: f64,
    timings: bool,
) -> anyhow::Result<Output> {
    let ctx = config.ctx();
    let settings = config.settings();
    let pair = shifts.map(read_shifts).transpose()?;
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for &q in qs {
        if phi_flat(q) == 0 {
            skipped.push(q);
            continue;
        }
        let r = match &pair {
            None if t == 0.0 => empirical_moment(q, &settings, &ctx)?,
            None => {
                let z = ShiftSet::zeros(3);
                empirical_moment_shifted(q, &z, &z, t, &settings, &ctx)
                    .context("nonzero t needs distinct shifts; pass --shifts")?
            }
            Some((a, b)) => empirical_moment_shifted(q, a, b, t, &settings, &ctx)?,
        };
        reports.push(strip_timing(r, timings));
    }
    if reports.is_empty() && qs.len() == 1 {
        return Err(moment_forge::Error::EmptyFamily(qs[0]).into());
    }
    Ok(Output {
        command: "empirical",
        table: report_table(&reports),
        json: json!({ "reports": reports, "skipped_empty_family": skipped }),
        pass: true,
    })
}

pub fn theorem1(config: &RunConfig, big_q: u64, shifts: Option<&Path>, timings: bool) -> anyhow::Result<Output> {
    let ctx = config.ctx();
    let (a, b) = match shifts {
        Some(p) => read_shifts(p)?,
        None => staggered_shifts(3, config.delta),
    };
    let r = strip_timing(
        theorem1_report(big_q, &a, &b, &config.weights, &config.settings(), &ctx)?,
        timings,
    );
    Ok(Output {
        command: "theorem1",
        table: report_table(std::slice::from_ref(&r)),
        json: json!({ "report": r }),
        pass: true,
    })
}

pub fn zeta6(_config: &RunConfig, big_t: f64, compare: bool, timings: bool) -> anyhow::Result<Output> {
    if compare {
        let r = strip_timing(compare_p3(big_t)?, timings);
        return Ok(Output {
            command: "zeta6",
            table: report_table(std::slice::from_ref(&r)),
            json: json!({ "report": r }),
            pass: true,
        });
    }
    let v = zeta_sixth_integral(big_t)?;
    let mut table = Table::new(&["T", "value", "err_bound", "panels"]);
    table.push(vec![num(big_t), num(v.value), num(v.err_bound), v.panels.to_string()]);
    Ok(Output {
        command: "zeta6",
        table,
        json: json!({ "T": big_t, "integral": v }),
        pass: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteChoice {
    All,
    One(Suite),
}

pub fn parse_suite(s: &str) -> Result<SuiteChoice, String> {
    if s == "all" {
        return Ok(SuiteChoice::All);
    }
    s.parse::<Suite>().map(SuiteChoice::One).map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("expected one of: {}, all", names.join(", "))
    })
}

/// Identity suites run at binary64-equivalent precision; `--digits` does
/// not apply.
pub fn verify(config: &RunConfig, choice: &SuiteChoice, draws: Option<usize>) -> anyhow::Result<Output> {
    let suites: Vec<Suite> = match choice {
        SuiteChoice::All => Suite::ALL.to_vec(),
        SuiteChoice::One(s) => vec![*s],
    };
    let ctx = PrecisionContext::STANDARD;
    let reports: Vec<SuiteReport> = suites
        .iter()
        .map(|&s| run_suite(s, config.seed, draws, &ctx))
        .collect::<Result<_, _>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let mut table = Table::new(&[
        "suite",
        "check",
        "residual",
        "tolerance",
        "truncation",
        "expected",
        "holds",
        "pass",
    ]);
    for r in &reports {
        for c in &r.checks {
            table.push(vec![
                r.suite.to_string(),
                c.check.clone(),
                num(c.residual),
                num(c.tolerance),
                opt_num(c.truncation),
                serde_json::to_value(c.expected)?
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                c.holds.to_string(),
                c.pass.to_string(),
            ]);
        }
    }
    Ok(Output {
        command: "verify",
        table,
        json: json!({ "pass": pass, "suites": reports }),
        pass,
    })
}

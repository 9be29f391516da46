use std::io::Write;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use regrates::noisy::noisy_sweep;
use regrates::rate::{cutoff_rate, delta_rate, tikhonov_rate, RateReport};
use regrates::verify::run_suite;
use regrates::{hilbert_norm, interp_norm, sandwich_report, triple_norm, SpectralProblem};

use crate::output::{num, opt_num, sink, write_csv, write_json};
use crate::problem::{parse_list, FilterName, NuSpec, ProblemFile};
use crate::{Common, Format, VerifyArgs};

/// Reads the problem file and folds the command-line overrides into it.
fn load(c: &Common) -> Result<(ProblemFile, SpectralProblem)> {
    let mut f = ProblemFile::read(&c.problem)?;
    if let Some(nu) = &c.nu {
        f.method.nu = Some(NuSpec::parse(nu)?);
    }
    if let Some(g) = c.gamma {
        f.method.gamma = g;
    }
    if let Some(k) = c.k {
        f.method.k = k;
    }
    if let Some(s) = c.sigma {
        f.method.sigma = Some(s);
    }
    if let Some(t) = c.tau {
        f.method.tau = t;
    }
    if let Some(d) = &c.deltas {
        let deltas = parse_list("--deltas", d)?;
        match f.noise.as_mut() {
            Some(n) => n.deltas = deltas,
            None => {
                f.noise = Some(crate::problem::NoiseBlock {
                    deltas,
                    strategy: Default::default(),
                    seed: 0,
                })
            }
        }
    }
    f.validate().context("after applying command-line overrides")?;
    let p = f.problem()?;
    Ok((f, p))
}

fn nus(f: &ProblemFile, default: f64) -> Vec<f64> {
    f.method.nu.as_ref().map_or_else(|| vec![default], NuSpec::values)
}

#[derive(Debug, Serialize)]
struct NormRow {
    nu: f64,
    gamma: f64,
    norm: f64,
    hilbert_gamma: f64,
    triple: f64,
    interp: f64,
    chain: [f64; 5],
    doubled: Option<[f64; 3]>,
    sandwich_pass: bool,
}

const NORM_HEADER: [&str; 15] = [
    "nu",
    "gamma",
    "norm",
    "hilbert_gamma",
    "triple",
    "interp",
    "chain_scaled_interp",
    "chain_triple",
    "chain_n_interp",
    "chain_hilbert_nu",
    "chain_hilbert_gamma",
    "doubled_lower",
    "doubled_interp",
    "doubled_upper",
    "sandwich_pass",
];

pub fn norms(c: &Common) -> Result<()> {
    let (f, p) = load(c)?;
    let x = &p.element;
    let gamma = f.method.gamma;
    let norm = x.norm();
    let hg = hilbert_norm(x, gamma)?;
    let rows: Vec<NormRow> = nus(&f, 0.5 * gamma)
        .par_iter()
        .map(|&nu| -> Result<NormRow> {
            if nu >= gamma {
                bail!("nu = {nu}: the embedding chain needs nu < gamma = {gamma}");
            }
            let s = sandwich_report(x, nu, gamma)?;
            Ok(NormRow {
                nu,
                gamma,
                norm,
                hilbert_gamma: hg,
                triple: triple_norm(x, nu)?.value,
                interp: interp_norm(x, nu, gamma)?.value,
                chain: s.chain,
                doubled: s.doubled,
                sandwich_pass: s.pass,
            })
        })
        .collect::<Result<_>>()?;
    let mut w = sink(c.out.as_deref())?;
    match c.format {
        Format::Json => write_json(&mut w, &rows)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![
                        num(r.nu),
                        num(r.gamma),
                        num(r.norm),
                        num(r.hilbert_gamma),
                        num(r.triple),
                        num(r.interp),
                    ];
                    v.extend(r.chain.iter().map(|&a| num(a)));
                    v.extend((0..3).map(|i| opt_num(r.doubled.map(|d| d[i]))));
                    v.push(r.sandwich_pass.to_string());
                    v
                })
                .collect();
            write_csv(&mut w, &NORM_HEADER, &table)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn rates(c: &Common) -> Result<()> {
    let (f, p) = load(c)?;
    let x = &p.element;
    let m = &f.method;
    let sigma = m.sigma.unwrap_or(1.0 / p.operator_norm());
    let rows: Vec<RateReport> = nus(&f, 0.5)
        .par_iter()
        .map(|&nu| -> Result<RateReport> {
            let r = match m.filter {
                FilterName::Tikhonov => tikhonov_rate(x, nu, m.k),
                FilterName::Cutoff => cutoff_rate(x, nu),
                FilterName::Landweber => delta_rate(x, nu, m.r, sigma, None),
            };
            r.with_context(|| format!("nu = {nu}"))
        })
        .collect::<Result<_>>()?;
    let mut w = sink(c.out.as_deref())?;
    match c.format {
        Format::Json => write_json(&mut w, &rows)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.method.to_string(),
                        num(r.nu),
                        num(r.sup_value),
                        num(r.arg),
                        num(r.bounds.0),
                        num(r.bounds.1),
                        r.converged.to_string(),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            let header = [
                "method",
                "nu",
                "sup_value",
                "arg",
                "lower_bound",
                "upper_bound",
                "converged",
                "pass",
            ];
            write_csv(&mut w, &header, &table)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn noisy(c: &Common) -> Result<()> {
    let (f, p) = load(c)?;
    let Some(block) = &f.noise else {
        bail!("noise: the problem file has no noise block and --deltas was not given");
    };
    let rule = f.rule(&p)?;
    let sweep = noisy_sweep(&p, &block.deltas, rule, f.strategy(c.seed))?;
    let mut w = sink(c.out.as_deref())?;
    match c.format {
        Format::Json => write_json(&mut w, &sweep)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = sweep
                .rows
                .iter()
                .map(|r| vec![num(r.delta), num(r.parameter), num(r.error), num(r.residual)])
                .collect();
            write_csv(&mut w, &["delta", "parameter", "error", "residual"], &table)?;
            for (name, fit) in [("error", &sweep.error_fit), ("parameter", &sweep.parameter_fit)] {
                if let Some(fit) = fit {
                    writeln!(
                        w,
                        "# fit,{name},{},{},{}",
                        num(fit.slope),
                        num(fit.intercept),
                        num(fit.residual)
                    )?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn verify(v: &VerifyArgs) -> Result<bool> {
    let report = run_suite(v.suite, v.seed)?;
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
    eprintln!(
        "suite {:?}: {} checks, {} failed: {}",
        report.suite,
        report.checks.len(),
        failed.len(),
        if report.pass { "PASS" } else { "FAIL" }
    );
    for c in &failed {
        eprintln!(
            "  FAIL {}: lhs {} rhs {} tol {}",
            c.id,
            num(c.lhs),
            num(c.rhs),
            num(c.tolerance)
        );
    }
    let mut w = sink(v.out.as_deref())?;
    match v.format {
        Format::Json => write_json(&mut w, &report)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.id.clone(),
                        num(c.lhs),
                        num(c.rhs),
                        num(c.tolerance),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            write_csv(&mut w, &["id", "lhs", "rhs", "tolerance", "pass"], &table)?;
        }
    }
    w.flush()?;
    Ok(report.pass)
}

//! Verification batteries: published constants, the worked examples, and
//! the inequality suites on seeded random measures.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builtin::{random_element, ExampleId};
use crate::check::{all_pass, Check};
use crate::error::Result;
use crate::interp::{interp_norm, n_theta, sandwich_report, tail_bound_check, triple_norm};
use crate::noisy::{make_noise, NoiseStrategy};
use crate::rate::{beta_ratio_limit, c1_constant, c2_constant, delta_rate, delta_values, tikhonov_rate};
use crate::regularizers::{landweber_splitting_check, tikhonov_splitting_check};
use crate::special::log_gamma;
use crate::spectral::{SpectralElement, SpectralProblem};

/// Published value of `zeta(3)`.
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// Which battery to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Constants,
    Propositions,
    Examples,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "constants" => Ok(Suite::Constants),
            "propositions" => Ok(Suite::Propositions),
            "examples" => Ok(Suite::Examples),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite {other:?} (expected constants, propositions, examples or all)"
            )),
        }
    }
}

/// Outcome of one battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Runs a battery; `All` concatenates the three in a fixed order.
pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Constants => constants_suite()?,
        Suite::Examples => examples_suite()?,
        Suite::Propositions => propositions_suite(100, seed)?,
        Suite::All => {
            let mut all = constants_suite()?;
            all.extend(examples_suite()?);
            all.extend(propositions_suite(100, seed)?);
            all
        }
    };
    let pass = all_pass(&checks);
    Ok(SuiteReport { suite, checks, pass })
}

/// `c2`, `a*`, `I(a*)`, `c1` for `nu = 1, r = 0` and log-gamma anchors.
pub fn constants_suite() -> Result<Vec<Check>> {
    let c2 = c2_constant()?;
    let c1 = c1_constant(1.0, 0.0, 1.0, 10_000)?;
    Ok(vec![
        Check::close_abs("c2", c2.c2, 1.135, 2e-3),
        Check::close_abs("a_star", c2.a_star, 0.3164, 1e-3),
        Check::close_abs("i_bar_at_a_star", c2.i_bar, 1.288, 2e-3),
        Check::close_abs("i_bar_at_one", beta_ratio_limit(1.0)?, 1.0, 1e-14),
        Check::close_abs("c1(nu=1,r=0)", c1.value, 1.0 / 3.0, 1e-15),
        Check::holds("c1_attained_at_k_1_and_2", c1.ties == [1, 2]),
        c1.check,
        Check::close_abs("log_gamma(1)", log_gamma(1.0)?, 0.0, 1e-15),
        Check::close_abs(
            "log_gamma(1/2)",
            log_gamma(0.5)?,
            0.5 * std::f64::consts::PI.ln(),
            1e-13,
        ),
        Check::close_rel("log_gamma(10)", log_gamma(10.0)?, 362_880f64.ln(), 1e-12),
    ])
}

/// The worked examples at their published sizes.
pub fn examples_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let diag = ExampleId::DiagExample { n: 100_000 }.build()?;
    let t = triple_norm(&diag.element, 1.0)?.value;
    checks.push(Check::close_abs("zeta3_triple_norm_sq", t * t, ZETA3, 1e-8));

    let diag6 = ExampleId::DiagExample { n: 1_000_000 }.build()?;
    let v = delta_values(&diag6.element, 1.0, 0.0, 1.0, &[0, 1, 2, 10_000])?;
    let sq: Vec<f64> = v.iter().map(|a| a * a).collect();
    checks.push(Check::close_abs("landweber_k0", sq[0], 1.096f64.powi(2), 1e-3));
    checks.push(Check::close_abs("landweber_k1", sq[1], 0.5453f64.powi(2), 1e-3));
    checks.push(Check::close_abs("landweber_k2", sq[2], 0.5475f64.powi(2), 1e-3));
    checks.push(Check::close_abs("landweber_k10000", sq[3], 0.25, 1e-3));
    let c1 = c1_constant(1.0, 0.0, 1.0, 10_000)?;
    checks.push(Check::close_abs("landweber_c1", c1.value, 1.0 / 3.0, 1e-15));
    let rep = delta_rate(&diag6.element, 1.0, 0.0, 1.0, None)?;
    checks.push(Check::close_abs(
        "landweber_delta_sq",
        rep.sup_value.powi(2),
        ZETA3,
        1e-3,
    ));
    checks.push(Check::holds("landweber_delta_at_k0", rep.arg == 0.0));
    checks.extend(rep.checks);

    let dirac = ExampleId::Dirac { lambda0: 1.0 }.build()?;
    for &nu in &[0.0, 0.5, 1.0, 2.0] {
        let t = triple_norm(&dirac.element, nu)?.value;
        checks.push(Check::close_abs(format!("dirac_triple_norm(nu={nu})"), t, 1.0, 1e-15));
    }
    let tr = tikhonov_rate(&dirac.element, 0.5, 1)?;
    checks.push(Check::close_abs("dirac_tikhonov_half", tr.sup_value, 0.5, 1e-9));

    let pl = ExampleId::PowerLaw { nu: 0.5, atoms: 10_000 }.build()?;
    let v = interp_norm(&pl.element, 0.5, 1.0)?.value;
    checks.push(Check::close_rel(
        "powerlaw_interp_sq",
        v * v,
        std::f64::consts::FRAC_PI_2,
        1e-2,
    ));

    let s12 = bvp_rate_sup(1 << 12, 0.25)?;
    let s13 = bvp_rate_sup(1 << 13, 0.25)?;
    checks.push(Check::close_rel("bvp_quarter_stable", s13, s12, 1e-2));
    let g12 = bvp_rate_sup(1 << 12, 0.3)?;
    let g13 = bvp_rate_sup(1 << 13, 0.3)?;
    checks.push(Check::leq("bvp_point_three_grows", 1.05 * g12, g13, 0.0));
    Ok(checks)
}

/// `sup_alpha alpha^{-nu} ||x - x_alpha||` for the sign function with `n`
/// eigenfunctions.
pub fn bvp_rate_sup(n: usize, nu: f64) -> Result<f64> {
    let p = ExampleId::BvpSign { n }.build()?;
    Ok(tikhonov_rate(&p.element, nu, 1)?.sup_value)
}

/// The full inequality battery on `count` random measures.
pub fn propositions_suite(count: usize, seed: u64) -> Result<Vec<Check>> {
    let per: Vec<Vec<Check>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i);
            proposition_checks(&random_element(s, 50), s)
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// Every inequality of the battery for one element; `seed` drives the
/// auxiliary random draws.
pub fn proposition_checks(x: &SpectralElement, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    let mut checks = Vec::new();

    for &(nu, gamma) in &[(0.3, 1.0), (0.5, 1.0), (0.25, 0.75), (1.0, 2.5)] {
        checks.extend(sandwich_report(x, nu, gamma)?.checks);
    }

    for &nu in &[0.3, 1.0] {
        let t = triple_norm(x, nu)?.value;
        let mut best = f64::INFINITY;
        for &m in &[1.1, 1.5, 2.0, 3.0, 6.0] {
            best = best.min(interp_norm(x, nu, m * nu)?.value);
        }
        let at_two = interp_norm(x, nu, 2.0 * nu)?.value;
        let r = std::f64::consts::SQRT_2;
        checks.push(Check::leq(format!("infg_lower(nu={nu})"), t / r, best, 1e-8));
        checks.push(Check::leq(format!("infg_middle(nu={nu})"), best, at_two, 1e-12));
        checks.push(Check::leq(format!("infg_upper(nu={nu})"), at_two, r * t, 1e-8));
    }

    for &k in &[1u32, 2, 3, 5] {
        for j in 0..=4 {
            let nu = k as f64 * j as f64 / 4.0;
            checks.extend(tikhonov_rate(x, nu, k)?.checks);
        }
    }

    let sigma = 1.0 / x.lambda_max().unwrap();
    for &nu in &[0.5, 1.0] {
        for &r in &[0.0, 0.5, 1.0] {
            checks.extend(delta_rate(x, nu, r, sigma, None)?.checks);
        }
    }

    let mu = x.measure();
    for _ in 0..5 {
        let nu = rng.random_range(0.05..2.0);
        let gamma = nu + rng.random_range(0.05..2.0);
        let r = rng.random_range(0.0..1.5);
        let cut = 10f64.powf(rng.random_range(-5.0..0.3));
        let rep = tail_bound_check(&mu, nu, gamma, r, cut)?;
        checks.push(rep.upper_tail);
        checks.push(rep.lower_tail);
    }

    for _ in 0..5 {
        let a = 10f64.powf(rng.random_range(-6.0..6.0));
        let b = 10f64.powf(rng.random_range(-6.0..6.0));
        let theta = rng.random_range(0.0..=1.0);
        let n = n_theta(theta)?;
        checks.push(Check::leq(
            format!("young_product(theta={theta})"),
            n * n * a.powf(1.0 - theta) * b.powf(theta),
            a + b,
            1e-12,
        ));
    }

    for i in 0..5 {
        let lambda = if i == 0 {
            0.0
        } else {
            10f64.powf(rng.random_range(-4.0..1.0))
        };
        let t = 10f64.powf(rng.random_range(-4.0..2.0));
        let k = rng.random_range(0.5..5.0);
        let theta = rng.random_range(0.01..0.99);
        checks.push(commutation_check(lambda, t, k, theta)?);
    }

    for &(nu, gamma) in &[(0.3, 1.0), (0.5, 1.5)] {
        let bound_factor = n_theta(nu / gamma)? * interp_norm(x, nu, gamma)?.value;
        for _ in 0..5 {
            let mut w: Vec<f64> = (0..x.len()).map(|_| rng.sample(StandardNormal)).collect();
            let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
            w.iter_mut().for_each(|v| *v /= norm);
            let inner: f64 = x.coefficients().iter().zip(&w).map(|(a, b)| a * b).sum();
            let smooth: f64 = x
                .eigenvalues()
                .iter()
                .zip(&w)
                .map(|(l, v)| l.powf(2.0 * gamma) * v * v)
                .sum::<f64>()
                .sqrt();
            checks.push(Check::leq(
                format!("operator_interpolation(nu={nu},gamma={gamma})"),
                inner.abs(),
                bound_factor * smooth.powf(nu / gamma),
                1e-8,
            ));
        }
    }

    let p = SpectralProblem::new(x.clone(), "random")?;
    let y_norm = p.clean_data().iter().map(|v| v * v).sum::<f64>().sqrt();
    let d = make_noise(&p, 1e-2 * y_norm, NoiseStrategy::Random { seed })?;
    for j in 0..10 {
        let alpha = x.lambda_max().unwrap() * 10f64.powf(1.0 - 0.7 * j as f64);
        checks.push(tikhonov_splitting_check(&p, &d, alpha)?);
    }
    for k in (0..=200).step_by(10) {
        checks.push(landweber_splitting_check(&p, &d, sigma, k)?);
    }
    Ok(checks)
}

/// `N^{2(1-2k)} t^{2(1-theta)} / (t^2 + lambda^{2k}) <= (alpha^{1-theta}/(alpha+lambda))^{2k}`
/// at `alpha = t^{1/k} ((1-theta)/theta)^{1 - 1/(2k)}`, compared in logs.
pub fn commutation_check(lambda: f64, t: f64, k: f64, theta: f64) -> Result<Check> {
    let n = n_theta(theta)?;
    let alpha = t.powf(1.0 / k) * ((1.0 - theta) / theta).powf(1.0 - 1.0 / (2.0 * k));
    let lam_term = if lambda == 0.0 { 0.0 } else { lambda.powf(2.0 * k) };
    let lhs = 2.0 * (1.0 - 2.0 * k) * n.ln() + 2.0 * (1.0 - theta) * t.ln() - (t * t + lam_term).ln();
    let rhs = 2.0 * k * ((1.0 - theta) * alpha.ln() - (alpha + lambda).ln());
    Ok(Check::leq(
        format!("commutation(lambda={lambda},t={t},k={k},theta={theta})"),
        lhs,
        rhs + 1e-10 * (1.0 + rhs.abs()),
        0.0,
    ))
}

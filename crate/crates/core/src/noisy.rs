//! Noisy data: noise models, parameter choice rules, the discrepancy
//! principle for Landweber, quasioptimality ratios and rate fits in `delta`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::error::{check_nonneg, check_pos, Error, Result};
use crate::interp::triple_norm;
use crate::num::neumaier_sum;
use crate::rate::{delta_rate, tikhonov_objective, tikhonov_rate};
use crate::regularizers::{
    check_step, landweber_closed, landweber_residual_sq, regularization_error, tikhonov_noisy_error, FilterSpec,
    NoisyData,
};
use crate::spectral::{SpectralElement, SpectralProblem};
use crate::sup::{decades, maximize_log};

/// Default discrepancy threshold.
pub const DEFAULT_TAU: f64 = 1.5;
/// Random directions added to the worst-aligned pair when approximating the
/// supremum over all admissible noise.
pub const RANDOM_DRAWS: usize = 32;

/// `{1e-1, 1e-2, 1e-3, 1e-4, 1e-5}`.
pub fn default_deltas() -> Vec<f64> {
    (1..=5).map(|j| 10f64.powi(-j)).collect()
}

/// How the noise vector is chosen; its norm is always exactly `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseStrategy {
    /// All noise on the smallest eigenvalue, opposing the sign of the
    /// coefficient there.
    WorstAligned,
    /// Same atom, same sign as the coefficient.
    WorstAlignedFlipped,
    /// Uniform direction on the sphere.
    Random { seed: u64 },
}

/// Noisy data with `||y_delta - y_dagger|| = delta`.
pub fn make_noise(p: &SpectralProblem, delta: f64, strategy: NoiseStrategy) -> Result<NoisyData> {
    check_nonneg("delta", delta)?;
    let clean = p.clean_data();
    let n = clean.len();
    if n == 0 {
        return Err(Error::EmptySpectrum);
    }
    let mut noise = vec![0.0; n];
    match strategy {
        NoiseStrategy::WorstAligned | NoiseStrategy::WorstAlignedFlipped => {
            let c = p.element.coefficients()[0];
            let against = if c < 0.0 { delta } else { -delta };
            noise[0] = if strategy == NoiseStrategy::WorstAligned {
                against
            } else {
                -against
            };
        }
        NoiseStrategy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for v in noise.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let norm = neumaier_sum(noise.iter().map(|v| v * v)).sqrt();
            for v in noise.iter_mut() {
                *v *= delta / norm;
            }
        }
    }
    Ok(NoisyData { clean, noise, delta })
}

/// The a priori choice: the root of `sqrt(alpha) ||x - x_alpha|| = delta/2`,
/// bisected in `ln alpha` to `1e-12`.
pub fn apriori_alpha(x: &SpectralElement, delta: f64) -> Result<f64> {
    check_pos("delta", delta)?;
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    // ln(sqrt(alpha) error(alpha))
    let g = tikhonov_objective(x, -0.5, 1);
    let target = (delta / 2.0).ln();
    let mut hi = (1e8 * x.lambda_max().unwrap()).ln();
    if g(hi) < target {
        return Err(Error::NoRoot(
            "delta too large for the a priori rule below alpha = 1e8 lambda_max",
        ));
    }
    let mut lo = x.lambda_min().unwrap().ln() - decades(4.0);
    while g(lo) >= target {
        lo -= decades(8.0);
        if lo < -1e4 {
            return Err(Error::NoRoot("a priori rule: no bracket at small alpha"));
        }
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Minimizer of the noisy Tikhonov error over `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalAlpha {
    pub alpha: f64,
    pub error: f64,
    /// False when the minimum sits on the edge of the extended grid (e.g.
    /// exact data, where the error keeps falling as `alpha -> 0`).
    pub converged: bool,
}

pub fn optimal_alpha(p: &SpectralProblem, d: &NoisyData) -> Result<OptimalAlpha> {
    let (lmin, lmax) = (
        p.element.lambda_min().ok_or(Error::EmptySpectrum)?,
        p.element.lambda_max().ok_or(Error::EmptySpectrum)?,
    );
    let m = maximize_log(
        |s| -tikhonov_noisy_error(p, d, s.exp()).ln(),
        lmin.ln() - decades(4.0),
        lmax.ln() + decades(4.0),
    );
    Ok(OptimalAlpha {
        alpha: m.arg_ln.exp(),
        error: (-m.ln_value).exp(),
        converged: m.converged,
    })
}

/// `||y_delta - T x_alpha^delta||` for one-step Tikhonov.
pub fn tikhonov_residual(p: &SpectralProblem, d: &NoisyData, alpha: f64) -> f64 {
    neumaier_sum(p.element.eigenvalues().iter().zip(d.noisy_data()).map(|(&l, y)| {
        let v = alpha / (alpha + l) * y;
        v * v
    }))
    .sqrt()
}

/// Result of the discrepancy principle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyStop {
    pub k: u64,
    pub error: f64,
    pub residual: f64,
}

/// `ceil(100 delta^{-2/(2nu+1)})`: a hundred times the expected stopping
/// index for smoothness `nu`.
pub fn discrepancy_cap(delta: f64, nu: f64) -> u64 {
    (100.0 * delta.powf(-2.0 / (2.0 * nu + 1.0))).ceil() as u64
}

/// Smallest `k` with `||y_delta - T x_k^delta|| <= tau delta`.
///
/// The residual is nonincreasing in `k`, so the index is bracketed by
/// doubling and then bisected.
pub fn discrepancy_stop(
    p: &SpectralProblem,
    d: &NoisyData,
    tau: f64,
    sigma: f64,
    k_cap: u64,
) -> Result<DiscrepancyStop> {
    if !(tau > 1.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "the discrepancy threshold must exceed 1",
        });
    }
    check_step(sigma, p.operator_norm())?;
    let y = d.noisy_data();
    let data_sq: Vec<f64> = y.iter().map(|v| v * v).collect();
    let log_q: Vec<f64> = p
        .element
        .eigenvalues()
        .iter()
        .map(|&l| {
            let sl = sigma * l;
            if sl >= 1.0 {
                f64::NEG_INFINITY
            } else {
                (-sl).ln_1p()
            }
        })
        .collect();
    let bound_sq = (tau * d.delta).powi(2);
    let ok = |k: u64| landweber_residual_sq(&log_q, &data_sq, k) <= bound_sq;
    let k = if ok(0) {
        0
    } else {
        let mut lo = 0u64;
        let mut hi = 1u64;
        loop {
            if ok(hi) {
                break;
            }
            if hi >= k_cap {
                return Err(Error::CapExceeded { cap: k_cap });
            }
            lo = hi;
            hi = (hi * 2).min(k_cap);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    let step = landweber_closed(p, d, sigma, k)?;
    Ok(DiscrepancyStop {
        k,
        error: step.error,
        residual: step.residual,
    })
}

/// Whenever the exact-data residual is at most `delta (tau - 1)`, the noisy
/// residual meets the discrepancy criterion, for every `k <= k_max`.
pub fn trigger_sufficiency_check(
    p: &SpectralProblem,
    d: &NoisyData,
    tau: f64,
    sigma: f64,
    k_max: u64,
) -> Result<Check> {
    let exact = NoisyData::noise_free(p);
    let mut ok = true;
    for k in 0..=k_max {
        let clean = landweber_closed(p, &exact, sigma, k)?.residual;
        if clean <= d.delta * (tau - 1.0) {
            let noisy = landweber_closed(p, d, sigma, k)?.residual;
            ok &= noisy <= tau * d.delta * (1.0 + 1e-12);
        }
    }
    Ok(Check::holds(
        format!("discrepancy_trigger(delta={},tau={tau})", d.delta),
        ok,
    ))
}

/// `||x - x_k||^2 <= eps^{2 nu} |||x|||_nu^2 + eps^{-1} ||y - T x_k||^2`
/// (exact data) with `eps = nu / (sigma (k + nu))`.
pub fn stopped_error_chain(p: &SpectralProblem, sigma: f64, nu: f64, k: u64) -> Result<Check> {
    check_pos("nu", nu)?;
    let exact = NoisyData::noise_free(p);
    let step = landweber_closed(p, &exact, sigma, k)?;
    let eps = nu / (sigma * (k as f64 + nu));
    let t = triple_norm(&p.element, nu)?.value;
    Ok(Check::leq(
        format!("stopped_error_chain(nu={nu},k={k})"),
        step.error * step.error,
        eps.powf(2.0 * nu) * t * t + step.residual * step.residual / eps,
        1e-12,
    ))
}

/// Least-squares line through `(ln delta, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `ln` units.
    pub residual: f64,
}

pub fn rate_exponent_fit(pairs: &[(f64, f64)]) -> Result<Fit> {
    if pairs.len() < 3 {
        return Err(Error::Fit("a rate fit needs at least three points"));
    }
    if pairs
        .iter()
        .any(|&(d, e)| !(d > 0.0) || !(e > 0.0) || !d.is_finite() || !e.is_finite())
    {
        return Err(Error::Fit("rate fit inputs must be positive and finite"));
    }
    if pairs.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::Fit("delta values must be strictly decreasing"));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(Fit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    })
}

/// A parameter choice rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChoiceRule {
    TikhonovApriori,
    TikhonovOptimal,
    LandweberDiscrepancy { tau: f64, sigma: f64, nu: f64 },
}

/// One sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    /// `alpha` for Tikhonov rules, the stopping index for Landweber.
    pub parameter: f64,
    pub error: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisySweep {
    pub rule: ChoiceRule,
    pub strategy: NoiseStrategy,
    pub rows: Vec<SweepRow>,
    /// Fit of `error` against `delta` over rows with `delta > 0`.
    pub error_fit: Option<Fit>,
    /// Fit of the parameter against `delta`, when all parameters are positive.
    pub parameter_fit: Option<Fit>,
}

fn apply_rule(p: &SpectralProblem, d: &NoisyData, rule: ChoiceRule) -> Result<SweepRow> {
    let delta = d.delta;
    if delta == 0.0 {
        // exact data: every rule drives the parameter to its limit
        return Ok(SweepRow {
            delta,
            parameter: 0.0,
            error: 0.0,
            residual: 0.0,
        });
    }
    match rule {
        ChoiceRule::TikhonovApriori => {
            let alpha = apriori_alpha(&p.element, delta)?;
            Ok(SweepRow {
                delta,
                parameter: alpha,
                error: tikhonov_noisy_error(p, d, alpha),
                residual: tikhonov_residual(p, d, alpha),
            })
        }
        ChoiceRule::TikhonovOptimal => {
            let o = optimal_alpha(p, d)?;
            Ok(SweepRow {
                delta,
                parameter: o.alpha,
                error: o.error,
                residual: tikhonov_residual(p, d, o.alpha),
            })
        }
        ChoiceRule::LandweberDiscrepancy { tau, sigma, nu } => {
            let s = discrepancy_stop(p, d, tau, sigma, discrepancy_cap(delta, nu))?;
            Ok(SweepRow {
                delta,
                parameter: s.k as f64,
                error: s.error,
                residual: s.residual,
            })
        }
    }
}

/// Applies `rule` at every `delta` (in input order) with one noise
/// realization each; a random strategy uses `seed + index` per point.
pub fn noisy_sweep(
    p: &SpectralProblem,
    deltas: &[f64],
    rule: ChoiceRule,
    strategy: NoiseStrategy,
) -> Result<NoisySweep> {
    let rows = deltas
        .par_iter()
        .enumerate()
        .map(|(i, &delta)| {
            let s = match strategy {
                NoiseStrategy::Random { seed } => NoiseStrategy::Random {
                    seed: seed.wrapping_add(i as u64),
                },
                other => other,
            };
            let d = make_noise(p, delta, s)?;
            apply_rule(p, &d, rule)
        })
        .collect::<Result<Vec<_>>>()?;
    let positive: Vec<&SweepRow> = rows.iter().filter(|r| r.delta > 0.0).collect();
    let error_fit = rate_exponent_fit(&positive.iter().map(|r| (r.delta, r.error)).collect::<Vec<_>>()).ok();
    let parameter_fit = rate_exponent_fit(&positive.iter().map(|r| (r.delta, r.parameter)).collect::<Vec<_>>()).ok();
    Ok(NoisySweep {
        rule,
        strategy,
        rows,
        error_fit,
        parameter_fit,
    })
}

/// `LHS(delta) / RHS` for one parameter choice rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiOptReport {
    pub nu: f64,
    pub rule: ChoiceRule,
    /// `sup_alpha alpha^{-nu} error(alpha)` or `sup_k eps_k^{-nu} error_k`.
    pub rhs: f64,
    /// `(delta, LHS(delta))`.
    pub lhs: Vec<(f64, f64)>,
    pub max_ratio: f64,
    pub min_ratio: f64,
    /// `LHS <= 2 RHS` at every `delta`; only meaningful for the a priori rule.
    pub check: Check,
}

/// `LHS(delta) = delta^{-2 nu} max_noise ||x - x_chosen^delta||^{2nu+1}`, the
/// maximum taken over the worst-aligned noise of both signs and
/// [`RANDOM_DRAWS`] random directions seeded from `seed`.
pub fn quasiopt_ratio(
    p: &SpectralProblem,
    nu: f64,
    deltas: &[f64],
    rule: ChoiceRule,
    seed: u64,
) -> Result<QuasiOptReport> {
    check_nonneg("nu", nu)?;
    let rhs = match rule {
        ChoiceRule::TikhonovApriori | ChoiceRule::TikhonovOptimal => {
            if nu > 1.0 {
                return Err(Error::InvalidParameter {
                    name: "nu",
                    value: nu,
                    reason: "Tikhonov quasioptimality needs nu <= 1",
                });
            }
            tikhonov_rate(&p.element, nu, 1)?.sup_value
        }
        ChoiceRule::LandweberDiscrepancy { sigma, .. } => {
            if nu < 0.1 {
                return Err(Error::InvalidParameter {
                    name: "nu",
                    value: nu,
                    reason: "Landweber quasioptimality is only checked for nu >= 0.1",
                });
            }
            delta_rate(&p.element, nu, 0.0, sigma, None)?.sup_value
        }
    };
    let mut strategies = vec![NoiseStrategy::WorstAligned, NoiseStrategy::WorstAlignedFlipped];
    strategies.extend((0..RANDOM_DRAWS as u64).map(|i| NoiseStrategy::Random {
        seed: seed.wrapping_add(i),
    }));
    let lhs = deltas
        .par_iter()
        .map(|&delta| {
            let mut worst = 0.0f64;
            for &s in &strategies {
                let d = make_noise(p, delta, s)?;
                worst = worst.max(apply_rule(p, &d, rule)?.error);
            }
            Ok((delta, delta.powf(-2.0 * nu) * worst.powf(2.0 * nu + 1.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = lhs.iter().map(|&(_, l)| l / rhs).collect();
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let check = Check::leq(format!("quasiopt(nu={nu})"), max_ratio, 2.0, 1e-12);
    Ok(QuasiOptReport {
        nu,
        rule,
        rhs,
        lhs,
        max_ratio,
        min_ratio,
        check,
    })
}

/// Noise-free Tikhonov error, exposed for sweeps that compare against it.
pub fn tikhonov_clean_error(x: &SpectralElement, alpha: f64) -> Result<f64> {
    regularization_error(x, FilterSpec::Tikhonov { alpha, k: 1 }, 0.0)
}

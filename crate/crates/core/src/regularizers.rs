//! Spectral cut-off, (iterated) Tikhonov and Landweber as filters on the
//! spectrum of `T*T`, noise-free and noisy.
//!
//! Everything is expressed in the eigenbasis of `T*T`. Elements stand for
//! `x_dagger - x_0`, so every method starts from zero. The data for the
//! eigenvector `e_i` is `y_i = sqrt(lambda_i) x_i`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::error::{check_nonneg, check_pos, Error, Result};
use crate::num::neumaier_sum;
use crate::spectral::{SpectralElement, SpectralProblem};

/// Slack on `sigma lambda_max <= 1` before a step size is rejected.
const STEP_SLACK: f64 = 1e-12;

/// A method together with its regularization parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilterSpec {
    Cutoff { alpha: f64 },
    Tikhonov { alpha: f64, k: u32 },
    Landweber { sigma: f64, k: u64 },
}

/// The method without its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MethodKind {
    Cutoff,
    Tikhonov { k: u32 },
    Landweber { sigma: f64 },
}

impl std::fmt::Display for MethodKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodKind::Cutoff => write!(f, "cutoff"),
            MethodKind::Tikhonov { k } => write!(f, "tikhonov(k={k})"),
            MethodKind::Landweber { sigma } => write!(f, "landweber(sigma={sigma})"),
        }
    }
}

impl FilterSpec {
    pub fn kind(&self) -> MethodKind {
        match *self {
            FilterSpec::Cutoff { .. } => MethodKind::Cutoff,
            FilterSpec::Tikhonov { k, .. } => MethodKind::Tikhonov { k },
            FilterSpec::Landweber { sigma, .. } => MethodKind::Landweber { sigma },
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            FilterSpec::Cutoff { alpha } => check_pos("alpha", alpha),
            FilterSpec::Tikhonov { alpha, k } => {
                check_pos("alpha", alpha)?;
                if k == 0 {
                    return Err(Error::InvalidParameter {
                        name: "k",
                        value: 0.0,
                        reason: "iterated Tikhonov needs k >= 1",
                    });
                }
                Ok(())
            }
            FilterSpec::Landweber { sigma, .. } => check_pos("sigma", sigma),
        }
    }

    /// Error factor at `lambda`: `x_dagger - x_method = factor(lambda) x_dagger`
    /// on the eigenvector of `lambda`.
    pub fn error_factor(&self, lambda: f64) -> Result<f64> {
        self.validate()?;
        check_pos("lambda", lambda)?;
        match *self {
            FilterSpec::Cutoff { alpha } => Ok(if lambda < alpha { 1.0 } else { 0.0 }),
            FilterSpec::Tikhonov { alpha, k } => Ok(tikhonov_factor(alpha, k as f64, lambda)),
            FilterSpec::Landweber { sigma, k } => {
                check_step(sigma, lambda)?;
                Ok(landweber_factor(sigma, k as f64, lambda))
            }
        }
    }
}

/// `(alpha / (alpha + lambda))^k`.
pub(crate) fn tikhonov_factor(alpha: f64, k: f64, lambda: f64) -> f64 {
    (-k * (lambda / alpha).ln_1p()).exp()
}

/// `(1 - sigma lambda)^k`, with `0^0 = 1`; `k` may be fractional.
pub(crate) fn landweber_factor(sigma: f64, k: f64, lambda: f64) -> f64 {
    if k == 0.0 {
        return 1.0;
    }
    let sl = sigma * lambda;
    if sl >= 1.0 {
        return 0.0;
    }
    (k * (-sl).ln_1p()).exp()
}

pub(crate) fn check_step(sigma: f64, lambda_max: f64) -> Result<()> {
    check_pos("sigma", sigma)?;
    if sigma * lambda_max > 1.0 + STEP_SLACK {
        return Err(Error::StepSizeTooLarge { sigma, lambda_max });
    }
    Ok(())
}

/// `sigma = 1 / lambda_max`, the largest admissible Landweber step.
pub fn default_sigma(p: &SpectralProblem) -> f64 {
    1.0 / p.operator_norm()
}

/// `||(T*T)^r (x - x_method)||`.
pub fn regularization_error(x: &SpectralElement, f: FilterSpec, r: f64) -> Result<f64> {
    check_nonneg("r", r)?;
    f.validate()?;
    if let (FilterSpec::Landweber { sigma, .. }, Some(lmax)) = (f, x.lambda_max()) {
        check_step(sigma, lmax)?;
    }
    let sum = neumaier_sum(x.atoms().map(|(l, c)| {
        let factor = match f {
            FilterSpec::Cutoff { alpha } => {
                if l < alpha {
                    1.0
                } else {
                    0.0
                }
            }
            FilterSpec::Tikhonov { alpha, k } => tikhonov_factor(alpha, k as f64, l),
            FilterSpec::Landweber { sigma, k } => landweber_factor(sigma, k as f64, l),
        };
        let v = l.powf(r) * factor * c;
        v * v
    }));
    Ok(sum.sqrt())
}

/// Data `y_delta = clean + noise` in the shared basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyData {
    pub clean: Vec<f64>,
    pub noise: Vec<f64>,
    pub delta: f64,
}

impl NoisyData {
    /// Validates `||noise|| <= delta` (up to rounding).
    pub fn new(clean: Vec<f64>, noise: Vec<f64>, delta: f64) -> Result<Self> {
        check_nonneg("delta", delta)?;
        if noise.len() != clean.len() {
            return Err(Error::LengthMismatch {
                expected: clean.len(),
                got: noise.len(),
            });
        }
        let norm = neumaier_sum(noise.iter().map(|v| v * v)).sqrt();
        if norm > delta * (1.0 + 1e-12) {
            return Err(Error::NoiseTooLarge { norm, delta });
        }
        Ok(Self { clean, noise, delta })
    }

    /// Exact data for a problem.
    pub fn noise_free(p: &SpectralProblem) -> Self {
        let clean = p.clean_data();
        let noise = vec![0.0; clean.len()];
        Self {
            clean,
            noise,
            delta: 0.0,
        }
    }

    pub fn noisy_data(&self) -> Vec<f64> {
        self.clean.iter().zip(&self.noise).map(|(y, e)| y + e).collect()
    }

    pub fn noise_norm(&self) -> f64 {
        neumaier_sum(self.noise.iter().map(|v| v * v)).sqrt()
    }

    fn matches(&self, p: &SpectralProblem) -> Result<()> {
        if self.clean.len() != p.element.len() {
            return Err(Error::LengthMismatch {
                expected: p.element.len(),
                got: self.clean.len(),
            });
        }
        Ok(())
    }
}

/// `k`-fold Tikhonov from noisy data, by repeated application of
/// `v <- (lambda x_data + alpha v) / (lambda + alpha)` with
/// `x_data = y_delta / sqrt(lambda)`.
pub fn tikhonov_solve_noisy(p: &SpectralProblem, d: &NoisyData, alpha: f64, k: u32) -> Result<SpectralElement> {
    check_pos("alpha", alpha)?;
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            value: 0.0,
            reason: "iterated Tikhonov needs k >= 1",
        });
    }
    d.matches(p)?;
    let coeffs: Vec<f64> = p
        .element
        .eigenvalues()
        .iter()
        .zip(d.noisy_data())
        .map(|(&l, y)| {
            let data = y / l.sqrt();
            let mut v = 0.0;
            for _ in 0..k {
                v = (l * data + alpha * v) / (l + alpha);
            }
            v
        })
        .collect();
    p.element.with_coefficients(coeffs)
}

/// `||x_dagger - x_alpha^delta||` for one-step Tikhonov without forming the
/// iterate.
pub fn tikhonov_noisy_error(p: &SpectralProblem, d: &NoisyData, alpha: f64) -> f64 {
    let sum = neumaier_sum(p.element.atoms().zip(&d.noise).map(|((l, c), &eta)| {
        let v = (alpha * c - l.sqrt() * eta) / (alpha + l);
        v * v
    }));
    sum.sqrt()
}

/// One Landweber step record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandweberStep {
    pub k: u64,
    /// `||x_dagger - x_k^delta||`
    pub error: f64,
    /// `||y_delta - T x_k^delta||`
    pub residual: f64,
}

/// Runs the literal recurrence `x_{k+1} = x_k + sigma T*(y_delta - T x_k)`
/// from `x_0 = 0`, recording steps `0..=k_max`.
pub fn landweber_run(p: &SpectralProblem, d: &NoisyData, sigma: f64, k_max: u64) -> Result<Vec<LandweberStep>> {
    check_step(sigma, p.operator_norm())?;
    d.matches(p)?;
    let roots: Vec<f64> = p.element.eigenvalues().iter().map(|l| l.sqrt()).collect();
    let c = p.element.coefficients();
    let y = d.noisy_data();
    let mut x = vec![0.0; c.len()];
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let error = neumaier_sum(c.iter().zip(&x).map(|(a, b)| (a - b) * (a - b))).sqrt();
        let residual = neumaier_sum(
            y.iter()
                .zip(&roots)
                .zip(&x)
                .map(|((yi, s), xi)| (yi - s * xi) * (yi - s * xi)),
        )
        .sqrt();
        out.push(LandweberStep { k, error, residual });
        if k < k_max {
            for i in 0..x.len() {
                x[i] += sigma * roots[i] * (y[i] - roots[i] * x[i]);
            }
        }
    }
    Ok(out)
}

/// Closed form of the `k`-th Landweber step: with `q = (1 - sigma lambda)^k`,
/// `x_dagger - x_k = q x_dagger - (1 - q) eta / sqrt(lambda)` and
/// `y_delta - T x_k = q y_delta`.
pub fn landweber_closed(p: &SpectralProblem, d: &NoisyData, sigma: f64, k: u64) -> Result<LandweberStep> {
    check_step(sigma, p.operator_norm())?;
    d.matches(p)?;
    let (error, residual) = landweber_closed_unchecked(p, d, sigma, k as f64);
    Ok(LandweberStep { k, error, residual })
}

pub(crate) fn landweber_closed_unchecked(p: &SpectralProblem, d: &NoisyData, sigma: f64, k: f64) -> (f64, f64) {
    let (e2, r2) = p
        .element
        .atoms()
        .zip(d.clean.iter().zip(&d.noise))
        .map(|((l, c), (&y, &eta))| {
            let q = landweber_factor(sigma, k, l);
            let e = q * c - (1.0 - q) * eta / l.sqrt();
            let r = q * (y + eta);
            (e * e, r * r)
        })
        .fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
    (e2.sqrt(), r2.sqrt())
}

/// `||y_delta - T x_k^delta||^2` from precomputed `ln(1 - sigma lambda)` and
/// squared data; parallel over fixed chunks so the sum order never changes.
pub(crate) fn landweber_residual_sq(log_q: &[f64], data_sq: &[f64], k: u64) -> f64 {
    const CHUNK: usize = 1 << 14;
    let kf = k as f64;
    let term = |(&lq, &y2): (&f64, &f64)| {
        if k == 0 {
            y2
        } else if lq == f64::NEG_INFINITY {
            0.0
        } else {
            (2.0 * kf * lq).exp() * y2
        }
    };
    let partial: Vec<f64> = log_q
        .par_chunks(CHUNK)
        .zip(data_sq.par_chunks(CHUNK))
        .map(|(q, y)| neumaier_sum(q.iter().zip(y).map(term)))
        .collect();
    neumaier_sum(partial)
}

/// `||x_dagger - x_alpha^delta|| <= ||x_dagger - x_alpha|| + delta / (2 sqrt alpha)`.
pub fn tikhonov_splitting_check(p: &SpectralProblem, d: &NoisyData, alpha: f64) -> Result<Check> {
    let noisy = tikhonov_noisy_error(p, d, alpha);
    let clean = regularization_error(&p.element, FilterSpec::Tikhonov { alpha, k: 1 }, 0.0)?;
    Ok(Check::leq(
        format!("tikhonov_splitting(alpha={alpha},delta={})", d.delta),
        noisy,
        clean + d.delta / (2.0 * alpha.sqrt()),
        1e-12,
    ))
}

/// `||x_dagger - x_k^delta|| <= ||x_dagger - x_k|| + delta sqrt(sigma k)`;
/// for `sigma = 1` this is the familiar `delta sqrt(k)`.
pub fn landweber_splitting_check(p: &SpectralProblem, d: &NoisyData, sigma: f64, k: u64) -> Result<Check> {
    let noisy = landweber_closed(p, d, sigma, k)?.error;
    let clean = regularization_error(&p.element, FilterSpec::Landweber { sigma, k }, 0.0)?;
    Ok(Check::leq(
        format!("landweber_splitting(k={k},delta={})", d.delta),
        noisy,
        clean + d.delta * (sigma * k as f64).sqrt(),
        1e-12,
    ))
}

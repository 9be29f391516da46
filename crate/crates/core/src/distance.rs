//! The distance function `d(r) = inf { ||x - x1|| : ||x1||_gamma <= r }`
//! of the pair `(X, X_gamma)` and its relation to the K-functional.
//!
//! In the eigenbasis the constrained minimizer is the filtered element
//! `x1(beta) = sum eps_i(beta) c_i e_i` with
//! `eps_i(beta) = lambda_i^{2 gamma} / (lambda_i^{2 gamma} + beta)`, where the
//! multiplier `beta >= 0` is fixed by `||x1(beta)||_gamma = r` whenever
//! `0 < r < ||x||_gamma`.

use serde::{Deserialize, Serialize};

use crate::check::{all_pass, Check};
use crate::error::{check_nonneg, check_pos, Error, Result};
use crate::interp::{hilbert_norm_sq, interp_norm, k_functional, n_theta};
use crate::num::{logistic_neg, neumaier_sum};
use crate::spectral::SpectralElement;
use crate::sup::{decades, golden_min, maximize_log};

/// Relative accuracy of the constraint `||x1||_gamma = r` after bisection.
pub const CONSTRAINT_RTOL: f64 = 1e-12;
/// Tolerance for `A = K_t` in [`conjugate_equivalence_check`].
pub const CONJUGATE_RTOL: f64 = 1e-6;
/// Tolerance for `D = E = N^{-1} ||x||_{theta:1}` in [`d_e_identity`].
pub const IDENTITY_RTOL: f64 = 1e-4;

/// One sample `d(r)` with the multiplier that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistancePoint {
    pub r: f64,
    pub d: f64,
    /// `beta`; `inf` at `r = 0`, `0` once `r >= ||x||_gamma`.
    pub multiplier: f64,
}

/// Precomputed `gamma ln(lambda_i)` and coefficients.
struct Filtered {
    glam: Vec<f64>,
    coeffs: Vec<f64>,
}

impl Filtered {
    fn new(x: &SpectralElement, gamma: f64) -> Self {
        Self {
            glam: x.eigenvalues().iter().map(|l| gamma * l.ln()).collect(),
            coeffs: x.coefficients().to_vec(),
        }
    }

    /// `(||x - x1(beta)||, ||x1(beta)||_gamma)` for `beta = e^b`.
    fn at(&self, b: f64) -> (f64, f64) {
        let residual = neumaier_sum(self.glam.iter().zip(&self.coeffs).map(|(&g, &c)| {
            let v = logistic_neg(2.0 * g - b) * c;
            v * v
        }));
        (residual.sqrt(), self.smooth_norm_sq(b).sqrt())
    }

    fn smooth_norm_sq(&self, b: f64) -> f64 {
        neumaier_sum(self.glam.iter().zip(&self.coeffs).map(|(&g, &c)| {
            let v = (-g).exp() * logistic_neg(b - 2.0 * g) * c;
            v * v
        }))
    }

    /// Solves `||x1(e^b)||_gamma^2 = r2` for `b` by bisection.
    fn solve(&self, r2: f64) -> f64 {
        let gmin = self.glam.iter().copied().fold(f64::INFINITY, f64::min);
        let gmax = self.glam.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut lo = 2.0 * gmin - 40.0;
        let mut hi = 2.0 * gmax + 40.0;
        for _ in 0..64 {
            if self.smooth_norm_sq(lo) > r2 {
                break;
            }
            lo -= 40.0;
        }
        for _ in 0..64 {
            if self.smooth_norm_sq(hi) < r2 {
                break;
            }
            hi += 40.0;
        }
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            let v = self.smooth_norm_sq(mid);
            if (v - r2).abs() <= CONSTRAINT_RTOL * r2 || hi - lo < 1e-15 * (1.0 + mid.abs()) {
                return mid;
            }
            if v > r2 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `d(r)` and its multiplier.
pub fn distance(x: &SpectralElement, r: f64, gamma: f64) -> Result<DistancePoint> {
    check_nonneg("r", r)?;
    check_pos("gamma", gamma)?;
    if x.is_zero() {
        return Ok(DistancePoint {
            r,
            d: 0.0,
            multiplier: 0.0,
        });
    }
    if r == 0.0 {
        return Ok(DistancePoint {
            r,
            d: x.norm(),
            multiplier: f64::INFINITY,
        });
    }
    if r * r >= hilbert_norm_sq(x, gamma) {
        return Ok(DistancePoint {
            r,
            d: 0.0,
            multiplier: 0.0,
        });
    }
    let f = Filtered::new(x, gamma);
    let b = f.solve(r * r);
    Ok(DistancePoint {
        r,
        d: f.at(b).0,
        multiplier: b.exp(),
    })
}

/// Sampled distance function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub element: SpectralElement,
    pub gamma: f64,
    pub samples: Vec<DistancePoint>,
}

impl DistanceProfile {
    /// Samples `d` at the given radii (sorted ascending first).
    pub fn sample(x: &SpectralElement, gamma: f64, radii: &[f64]) -> Result<Self> {
        let mut radii = radii.to_vec();
        radii.sort_by(f64::total_cmp);
        let samples = radii
            .iter()
            .map(|&r| distance(x, r, gamma))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            element: x.clone(),
            gamma,
            samples,
        })
    }

    /// Largest increase of `d` between consecutive samples.
    pub fn max_increase(&self) -> f64 {
        self.samples.windows(2).map(|w| w[1].d - w[0].d).fold(0.0, f64::max)
    }

    /// Largest decrease of the secant slope between consecutive sample
    /// pairs; zero for a convex profile.
    pub fn max_convexity_violation(&self) -> f64 {
        let slopes: Vec<f64> = self
            .samples
            .windows(2)
            .filter(|w| w[1].r > w[0].r)
            .map(|w| (w[1].d - w[0].d) / (w[1].r - w[0].r))
            .collect();
        slopes.windows(2).map(|s| s[0] - s[1]).fold(0.0, f64::max)
    }
}

/// Both infimal-convolution forms of the K-functional at one `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugateReport {
    pub t: f64,
    /// `inf_r (d(r)^2 + t^2 r^2)^{1/2}`.
    pub a: f64,
    /// `inf_r (d(r) + t r) = -d*(-t)`.
    pub b: f64,
    pub k_t: f64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn inf_over_radius(x: &SpectralElement, gamma: f64, cost: impl Fn(f64, f64) -> f64) -> Result<f64> {
    let big_r = hilbert_norm_sq(x, gamma).sqrt();
    if big_r == 0.0 {
        return Ok(cost(0.0, 0.0));
    }
    let eval = |s: f64| {
        let r = s.exp();
        distance(x, r, gamma).map(|p| cost(p.d, r)).unwrap_or(f64::INFINITY)
    };
    let hi = big_r.ln();
    let lo = hi - decades(14.0);
    let (_, inner, _) = golden_min(eval, lo, hi, 1e-12);
    let at_zero = cost(x.norm(), 0.0);
    let at_edge = cost(0.0, big_r);
    Ok(inner.min(at_zero).min(at_edge))
}

/// Compares `K_t` with `inf_r (d^2 + t^2 r^2)^{1/2}` and `-d*(-t)`.
pub fn conjugate_equivalence_check(x: &SpectralElement, gamma: f64, t: f64) -> Result<ConjugateReport> {
    check_pos("gamma", gamma)?;
    check_pos("t", t)?;
    let a = inf_over_radius(x, gamma, |d, r| (d * d + t * t * r * r).sqrt())?;
    let b = inf_over_radius(x, gamma, |d, r| d + t * r)?;
    let k_t = k_functional(x, gamma, t)?;
    let sqrt2 = 2f64.sqrt();
    let checks = vec![
        Check::close_rel(format!("inf_sqrt_equals_k(t={t})"), a, k_t, CONJUGATE_RTOL),
        Check::leq(format!("k_le_conjugate(t={t})"), k_t, b, CONJUGATE_RTOL),
        Check::leq(format!("conjugate_le_sqrt2_k(t={t})"), b, sqrt2 * k_t, CONJUGATE_RTOL),
        Check::leq(format!("a_le_b(t={t})"), a, b, CONJUGATE_RTOL),
        Check::leq(format!("b_le_sqrt2_a(t={t})"), b, sqrt2 * a, CONJUGATE_RTOL),
    ];
    let pass = all_pass(&checks);
    Ok(ConjugateReport {
        t,
        a,
        b,
        k_t,
        checks,
        pass,
    })
}

/// The two decay characterizations of the distance function and their
/// common target `N_theta^{-1} ||x||_{theta gamma : gamma}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeIdentity {
    /// `sup_r d(r)^{1-theta} r^theta`, via bisection for each `r`.
    pub d: f64,
    /// `sup_r inf_{||x1||_gamma = r} ||x-x1||^{1-theta} ||x1||_gamma^theta`,
    /// swept along the multiplier family.
    pub e: f64,
    pub target: f64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Evaluates `D`, `E` and the interpolation-norm target.
pub fn d_e_identity(x: &SpectralElement, theta: f64, gamma: f64) -> Result<DeIdentity> {
    check_pos("gamma", gamma)?;
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "must lie strictly between 0 and 1",
        });
    }
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let big_r = hilbert_norm_sq(x, gamma).sqrt();
    let lmax = x.lambda_max().unwrap();
    let lmin = x.lambda_min().unwrap();
    let r_lo = (x.norm() * lmax.powf(-gamma) * 1e-4).min(big_r * 1e-4);

    let d_obj = |s: f64| {
        let r = s.exp();
        match distance(x, r, gamma) {
            Ok(p) if p.d > 0.0 => (1.0 - theta) * p.d.ln() + theta * s,
            _ => f64::NEG_INFINITY,
        }
    };
    let d_max = maximize_log(d_obj, r_lo.ln(), big_r.ln());

    let filtered = Filtered::new(x, gamma);
    let e_obj = |b: f64| {
        let (res, smooth) = filtered.at(b);
        (1.0 - theta) * res.ln() + theta * smooth.ln()
    };
    let e_max = maximize_log(
        e_obj,
        2.0 * gamma * lmin.ln() - decades(4.0),
        2.0 * gamma * lmax.ln() + decades(4.0),
    );

    let target = interp_norm(x, theta * gamma, gamma)?.value / n_theta(theta)?;
    let d = d_max.ln_value.exp();
    let e = e_max.ln_value.exp();
    let checks = vec![
        Check::close_rel(format!("d_identity(theta={theta})"), d, target, IDENTITY_RTOL),
        Check::close_rel(format!("e_identity(theta={theta})"), e, target, IDENTITY_RTOL),
    ];
    let pass = all_pass(&checks);
    Ok(DeIdentity {
        d,
        e,
        target,
        checks,
        pass,
    })
}

//! Rate functionals `sup_alpha alpha^{-nu} error(alpha)` and `Delta_nu^r`,
//! their two-sided bounds, saturation, and the constants `c1`, `c2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{all_pass, Check};
use crate::error::{check_nonneg, check_pos, Error, Result};
use crate::interp::{hilbert_norm_sq, interp_norm, n_theta, triple_norm};
use crate::num::{log_sum_exp, softplus};
use crate::regularizers::{check_step, regularization_error, FilterSpec, MethodKind};
use crate::special::log_gamma;
use crate::spectral::SpectralElement;
use crate::sup::{decades, golden_max, maximize_log};

/// Tolerance of the proposition sandwiches.
pub const RATE_RTOL: f64 = 1e-6;
/// Relative change over the last decade of `k` below which `Delta` is
/// considered stable.
pub const K_STABLE_RTOL: f64 = 1e-9;
/// Every `k` up to this value is evaluated; beyond it the grid is geometric.
pub const DENSE_K: u64 = 64;
const K_RATIO: f64 = 1.05;
const INITIAL_K_MAX: u64 = 1_000;
const K_LIMIT: u64 = 1 << 40;
const C1_TERMS: u64 = 100_000;
const CHUNK: usize = 1 << 14;

/// A computed rate functional with the bounds it is expected to obey.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub nu: f64,
    pub method: MethodKind,
    pub sup_value: f64,
    /// Maximizing `alpha` (Tikhonov, cut-off) or `k` (Landweber). For
    /// Tikhonov, `inf` marks the limit `alpha -> inf` and `0` the limit
    /// `alpha -> 0`.
    pub arg: f64,
    pub bounds: (f64, f64),
    pub checks: Vec<Check>,
    pub pass: bool,
    pub converged: bool,
}

impl RateReport {
    fn trivial(nu: f64, method: MethodKind) -> Self {
        Self {
            nu,
            method,
            sup_value: 0.0,
            arg: f64::NAN,
            bounds: (0.0, 0.0),
            checks: Vec::new(),
            pass: true,
            converged: true,
        }
    }
}

/// `s -> ln(alpha^{-nu} ||x - x_{alpha,k}||)` at `alpha = e^s`.
pub(crate) fn tikhonov_objective(x: &SpectralElement, nu: f64, k: u32) -> impl Fn(f64) -> f64 + Sync {
    let atoms: Vec<(f64, f64)> = x
        .atoms()
        .filter(|&(_, c)| c != 0.0)
        .map(|(l, c)| (l.ln(), 2.0 * c.abs().ln()))
        .collect();
    let k = k as f64;
    move |s: f64| {
        let lse = if atoms.len() > CHUNK {
            log_sum_exp(
                atoms
                    .par_chunks(CHUNK)
                    .map(|ch| log_sum_exp(ch.iter().map(|&(ll, lc)| lc - 2.0 * k * softplus(ll - s))))
                    .collect::<Vec<_>>(),
            )
        } else {
            log_sum_exp(atoms.iter().map(|&(ll, lc)| lc - 2.0 * k * softplus(ll - s)))
        };
        0.5 * lse - nu * s
    }
}

fn tikhonov_sup(x: &SpectralElement, nu: f64, k: u32) -> (f64, f64, bool) {
    let (lmin, lmax) = (x.lambda_min().unwrap(), x.lambda_max().unwrap());
    let m = maximize_log(
        tikhonov_objective(x, nu, k),
        lmin.ln() - decades(4.0),
        lmax.ln() + decades(4.0),
    );
    (m.ln_value.exp(), m.arg_ln.exp(), m.converged)
}

fn require_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            value: 0.0,
            reason: "iterated Tikhonov needs k >= 1",
        });
    }
    Ok(())
}

/// `sup_alpha alpha^{-nu} ||x - x_{alpha,k}||` against
/// `N_{nu/k}^{1-2k} ||x||_{nu:k} <= sup <= ||x||_{nu:k}`.
pub fn tikhonov_rate(x: &SpectralElement, nu: f64, k: u32) -> Result<RateReport> {
    require_k(k)?;
    check_nonneg("nu", nu)?;
    let kf = k as f64;
    if nu > kf {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            reason: "k-fold Tikhonov rates need nu <= k",
        });
    }
    let method = MethodKind::Tikhonov { k };
    if x.is_zero() {
        return Ok(RateReport::trivial(nu, method));
    }
    let upper = interp_norm(x, nu, kf)?.value;
    let lower = n_theta(nu / kf)?.powf(1.0 - 2.0 * kf) * upper;
    let mut checks = Vec::new();
    let (sup_value, arg, converged) = if nu == 0.0 {
        (x.norm(), f64::INFINITY, true)
    } else if nu == kf {
        // alpha^{-k} (alpha / (alpha + lambda))^k increases as alpha decreases
        let limit = hilbert_norm_sq(x, kf).sqrt();
        let alpha = x.lambda_min().unwrap() * 1e-10;
        let near = tikhonov_objective(x, nu, k)(alpha.ln()).exp();
        checks.push(Check::close_rel(
            format!("tikhonov_small_alpha_limit(k={k})"),
            near,
            limit,
            1e-8,
        ));
        (limit, 0.0, true)
    } else {
        tikhonov_sup(x, nu, k)
    };
    checks.push(Check::leq(
        format!("tikhonov_lower(nu={nu},k={k})"),
        lower,
        sup_value,
        RATE_RTOL,
    ));
    checks.push(Check::leq(
        format!("tikhonov_upper(nu={nu},k={k})"),
        sup_value,
        upper,
        RATE_RTOL,
    ));
    if nu == 0.0 || nu == kf {
        checks.push(Check::close_rel(
            format!("tikhonov_equality(nu={nu},k={k})"),
            sup_value,
            upper,
            1e-12,
        ));
    }
    let pass = all_pass(&checks);
    Ok(RateReport {
        nu,
        method,
        sup_value,
        arg,
        bounds: (lower, upper),
        checks,
        pass,
        converged,
    })
}

/// Spectral cut-off: `sup_alpha alpha^{-nu} ||E_[0,alpha) x|| = |||x|||_nu`,
/// with the pointwise bound `error(alpha) <= alpha^nu |||x|||_nu` checked just
/// above every atom (at most 2000 atoms, evenly strided).
pub fn cutoff_rate(x: &SpectralElement, nu: f64) -> Result<RateReport> {
    check_nonneg("nu", nu)?;
    let method = MethodKind::Cutoff;
    if x.is_zero() {
        return Ok(RateReport::trivial(nu, method));
    }
    let t = triple_norm(x, nu)?;
    let stride = (x.len() / 2000).max(1);
    let mut worst = 0.0f64;
    for &l in x.eigenvalues().iter().step_by(stride) {
        let alpha = l * (1.0 + 1e-12);
        let e = regularization_error(x, FilterSpec::Cutoff { alpha }, 0.0)?;
        worst = worst.max(e * alpha.powf(-nu));
    }
    let checks = vec![Check::leq(format!("cutoff_bound(nu={nu})"), worst, t.value, 1e-9)];
    let pass = all_pass(&checks);
    Ok(RateReport {
        nu,
        method,
        sup_value: t.value,
        arg: t.arg_sup,
        bounds: (t.value, t.value),
        checks,
        pass,
        converged: true,
    })
}

/// `sup_alpha alpha^{-nu} ||x - x_alpha|| <= (1 - nu)^{-1/2} |||x|||_nu` for
/// one-step Tikhonov.
pub fn tikhonov_more_precise_bound(x: &SpectralElement, nu: f64) -> Result<Check> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            reason: "must lie strictly between 0 and 1",
        });
    }
    let id = format!("tikhonov_precise_bound(nu={nu})");
    if x.is_zero() {
        return Ok(Check::holds(id, true));
    }
    let (sup, _, _) = tikhonov_sup(x, nu, 1);
    let bound = (1.0 - nu).powf(-0.5) * triple_norm(x, nu)?.value;
    Ok(Check::leq(id, sup, bound, 1e-8))
}

/// Values of `alpha^{-k} ||x - x_{alpha,k}||` along a decreasing
/// `alpha`-sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
    /// `||x||_k`, the limit as `alpha -> 0`.
    pub limit: f64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Confirms that `alpha^{-k} error` does not vanish as `alpha -> 0`: the
/// sequence is nondecreasing, positive, and settles at `||x||_k > 0`.
pub fn saturation_check(x: &SpectralElement, k: u32) -> Result<SaturationReport> {
    require_k(k)?;
    if x.is_zero() {
        return Ok(SaturationReport {
            alphas: Vec::new(),
            values: Vec::new(),
            limit: 0.0,
            checks: Vec::new(),
            pass: true,
        });
    }
    let kf = k as f64;
    let f = tikhonov_objective(x, kf, k);
    let lmin = x.lambda_min().unwrap();
    let alphas: Vec<f64> = (0..=14).map(|j| lmin * 10f64.powi(2 - j)).collect();
    let values: Vec<f64> = alphas.iter().map(|a| f(a.ln()).exp()).collect();
    let limit = hilbert_norm_sq(x, kf).sqrt();
    let monotone = values.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let last = *values.last().unwrap();
    let checks = vec![
        Check::holds(format!("saturation_monotone(k={k})"), monotone),
        Check::holds(format!("saturation_positive(k={k})"), last > 0.0),
        Check::close_rel(format!("saturation_limit(k={k})"), last, limit, 1e-9),
    ];
    let pass = all_pass(&checks);
    Ok(SaturationReport {
        alphas,
        values,
        limit,
        checks,
        pass,
    })
}

/// `ln(eps_k^{-(r+nu)} ||(T*T)^r (x - x_k)||)` for real `k >= 0`.
struct DeltaObjective {
    base: Vec<f64>,
    log_q: Vec<f64>,
    p: f64,
    ln_sigma: f64,
}

impl DeltaObjective {
    fn new(x: &SpectralElement, nu: f64, r: f64, sigma: f64) -> Self {
        let (base, log_q) = x
            .atoms()
            .filter(|&(_, c)| c != 0.0)
            .map(|(l, c)| {
                let sl = sigma * l;
                let lq = if sl >= 1.0 { f64::NEG_INFINITY } else { (-sl).ln_1p() };
                (2.0 * r * l.ln() + 2.0 * c.abs().ln(), lq)
            })
            .unzip();
        Self {
            base,
            log_q,
            p: r + nu,
            ln_sigma: sigma.ln(),
        }
    }

    fn ln_eps(&self, k: f64) -> f64 {
        -self.ln_sigma + self.p.ln() - (k + self.p).ln()
    }

    fn ln_value(&self, k: f64) -> f64 {
        let term = |(b, lq): (&f64, &f64)| if k == 0.0 { *b } else { b + 2.0 * k * lq };
        let lse = if self.base.len() > CHUNK {
            log_sum_exp(
                self.base
                    .par_chunks(CHUNK)
                    .zip(self.log_q.par_chunks(CHUNK))
                    .map(|(b, q)| log_sum_exp(b.iter().zip(q).map(term)))
                    .collect::<Vec<_>>(),
            )
        } else {
            log_sum_exp(self.base.iter().zip(&self.log_q).map(term))
        };
        0.5 * lse - self.p * self.ln_eps(k)
    }
}

fn check_delta_args(x: &SpectralElement, nu: f64, r: f64, sigma: f64) -> Result<()> {
    check_pos("nu", nu)?;
    check_nonneg("r", r)?;
    check_pos("sigma", sigma)?;
    if let Some(lmax) = x.lambda_max() {
        check_step(sigma, lmax)?;
    }
    Ok(())
}

/// `eps_k^{-(r+nu)} ||(T*T)^r (x - x_k)||` at the given Landweber steps,
/// with `eps_k = (r+nu) / (sigma (k + r + nu))`.
pub fn delta_values(x: &SpectralElement, nu: f64, r: f64, sigma: f64, ks: &[u64]) -> Result<Vec<f64>> {
    check_delta_args(x, nu, r, sigma)?;
    if x.is_zero() {
        return Ok(vec![0.0; ks.len()]);
    }
    let obj = DeltaObjective::new(x, nu, r, sigma);
    Ok(ks.iter().map(|&k| obj.ln_value(k as f64).exp()).collect())
}

/// Steps in `(lo, hi]`: every integer up to [`DENSE_K`], then a geometric
/// progression with ratio 1.05, always ending at `hi`.
fn k_grid(lo: Option<u64>, hi: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = lo.map_or(0, |v| v + 1);
    while k <= hi {
        out.push(k);
        k = if k < DENSE_K {
            k + 1
        } else {
            ((k as f64 * K_RATIO).ceil() as u64).max(k + 1)
        };
    }
    if out.last() != Some(&hi) && lo.is_none_or(|v| v < hi) {
        out.push(hi);
    }
    out
}

/// `Delta_nu^r(x) = sup_k eps_k^{-(r+nu)} ||(T*T)^r (x - x_k)||` with the
/// bounds `c1 sqrt(nu/(r+nu)) |||x|||_nu <= Delta <= c2 |||x|||_nu`.
///
/// With `k_max = None` the search range starts at `k <= 1000` and grows
/// tenfold until the last decade leaves the running maximum unchanged
/// within [`K_STABLE_RTOL`].
pub fn delta_rate(x: &SpectralElement, nu: f64, r: f64, sigma: f64, k_max: Option<u64>) -> Result<RateReport> {
    check_delta_args(x, nu, r, sigma)?;
    let method = MethodKind::Landweber { sigma };
    if x.is_zero() {
        return Ok(RateReport::trivial(nu, method));
    }
    let obj = DeltaObjective::new(x, nu, r, sigma);
    let eval = |ks: &[u64]| -> Vec<(u64, f64)> { ks.iter().map(|&k| (k, obj.ln_value(k as f64))).collect() };

    let mut grid: Vec<(u64, f64)>;
    let mut converged = true;
    let mut hi;
    match k_max {
        Some(km) => {
            hi = km;
            grid = eval(&k_grid(None, km));
        }
        None => {
            hi = INITIAL_K_MAX;
            grid = eval(&k_grid(None, hi));
            loop {
                let before = grid.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
                let next = hi.saturating_mul(10);
                let fresh = eval(&k_grid(Some(hi), next));
                let after = fresh.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
                grid.extend(fresh);
                hi = next;
                if after <= before + K_STABLE_RTOL.ln_1p() {
                    break;
                }
                if hi >= K_LIMIT {
                    converged = false;
                    break;
                }
            }
        }
    }

    let mut best = 0;
    for (i, p) in grid.iter().enumerate() {
        if p.1 > grid[best].1 {
            best = i;
        }
    }
    let (mut arg, mut ln_best) = grid[best];
    if best > 0 && best + 1 < grid.len() && grid[best + 1].0 - grid[best - 1].0 > 2 {
        let (kr, _, _) = golden_max(
            |k| obj.ln_value(k),
            grid[best - 1].0 as f64,
            grid[best + 1].0 as f64,
            1e-12,
        );
        for k in [kr.floor() as u64, kr.ceil() as u64] {
            let v = obj.ln_value(k as f64);
            if v > ln_best {
                arg = k;
                ln_best = v;
            }
        }
    }
    if converged && k_max.is_none() && arg == hi {
        converged = false;
    }

    let sup_value = ln_best.exp();
    let tn = triple_norm(x, nu)?.value;
    let p = r + nu;
    let c1 = c1_constant(nu, r, sigma, C1_TERMS)?.value;
    let c2 = c2_constant()?.c2;
    let bounds = (c1 * (nu / p).sqrt() * tn, c2 * tn);
    let checks = vec![
        Check::leq(format!("landweber_lower(nu={nu},r={r})"), bounds.0, sup_value, 1e-9),
        Check::leq(format!("landweber_upper(nu={nu},r={r})"), sup_value, bounds.1, 1e-9),
    ];
    let pass = all_pass(&checks);
    Ok(RateReport {
        nu,
        method,
        sup_value,
        arg: arg as f64,
        bounds,
        checks,
        pass,
        converged,
    })
}

/// The constant `c1 = inf_k (1 - sigma eps_k)^k (eps_{k+1} / eps_k)^{r+nu}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C1 {
    pub value: f64,
    /// Minimizing step; `None` when the infimum is the limit `e^{-(r+nu)}`.
    pub arg: Option<u64>,
    /// All steps attaining the minimum up to a relative `1e-12`.
    pub ties: Vec<u64>,
    /// `(sigma eps_1 / e)^{r+nu}`.
    pub lower_bound: f64,
    pub check: Check,
}

/// `c1` over `k in [0, k_max]` together with the limit of the sequence.
///
/// `sigma eps_k = (r+nu)/(k+r+nu)` does not involve `sigma`, so neither
/// does `c1`; `sigma` is validated only.
pub fn c1_constant(nu: f64, r: f64, sigma: f64, k_max: u64) -> Result<C1> {
    check_pos("nu", nu)?;
    check_nonneg("r", r)?;
    check_pos("sigma", sigma)?;
    let p = r + nu;
    let ln_term = |k: u64| {
        let kf = k as f64;
        let first = if k == 0 { 0.0 } else { -kf * (p / kf).ln_1p() };
        first - p * (1.0 / (kf + p)).ln_1p()
    };
    let terms: Vec<f64> = (0..=k_max).map(|k| ln_term(k).exp()).collect();
    let (mut arg, mut value) = (0u64, terms[0]);
    for (k, &t) in terms.iter().enumerate() {
        if t < value {
            value = t;
            arg = k as u64;
        }
    }
    let ties: Vec<u64> = terms
        .iter()
        .enumerate()
        .filter(|(_, &t)| (t - value).abs() <= 1e-12 * value)
        .map(|(k, _)| k as u64)
        .collect();
    let limit = (-p).exp();
    let (value, arg, ties) = if limit < value {
        (limit, None, Vec::new())
    } else {
        (value, Some(arg), ties)
    };
    let lower_bound = (p / (1.0 + p) / std::f64::consts::E).powf(p);
    let check = Check::leq(format!("c1_lower_bound(r+nu={p})"), lower_bound, value, 0.0);
    Ok(C1 {
        value,
        arg,
        ties,
        lower_bound,
        check,
    })
}

/// `I(s, a) = ((s+a)/a)^a Gamma(s+1) Gamma(a+1) / Gamma(s+a+1)`.
pub fn beta_ratio(s: f64, a: f64) -> Result<f64> {
    check_pos("s", s)?;
    check_pos("a", a)?;
    let ln = a * (s / a).ln_1p() + log_gamma(s + 1.0)? + log_gamma(a + 1.0)? - log_gamma(s + a + 1.0)?;
    Ok(ln.exp())
}

/// `sup_s I(s, a) = a^{-a} Gamma(a+1)`, the large-`s` limit.
pub fn beta_ratio_limit(a: f64) -> Result<f64> {
    check_pos("a", a)?;
    Ok((-a * a.ln() + log_gamma(a + 1.0)?).exp())
}

/// The constant `c2` with the maximizer of `a^{-a} Gamma(a+1)` on `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C2 {
    pub c2: f64,
    pub a_star: f64,
    pub i_bar: f64,
}

pub fn c2_constant() -> Result<C2> {
    let f = |a: f64| -a * a.ln() + log_gamma(a + 1.0).unwrap_or(f64::NEG_INFINITY);
    let (a_star, ln_i, _) = golden_max(f, 1e-9, 1.0, 1e-13);
    let i_bar = ln_i.exp();
    Ok(C2 {
        c2: i_bar.sqrt(),
        a_star,
        i_bar,
    })
}

/// `c2 eps_k^{r+nu}`: the bound on `||(T*T)^r (x - x_k)||` for
/// `|||x|||_nu = 1`.
pub fn landweber_fixed_k_bound(nu: f64, r: f64, sigma: f64, k: u64) -> Result<f64> {
    check_pos("nu", nu)?;
    check_nonneg("r", r)?;
    check_pos("sigma", sigma)?;
    let p = r + nu;
    let eps = p / (sigma * (k as f64 + p));
    Ok(c2_constant()?.c2 * eps.powf(p))
}

/// For `sigma = 1`, `r = 0` and `nu >= 10 k^2`:
/// `c2 eps_k^nu <= c2 e^{-k} (1 + k^2/nu)`.
pub fn large_nu_bound_check(nu: f64, k: u64) -> Result<Check> {
    let kf = k as f64;
    if nu < 10.0 * kf * kf {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            reason: "the large-nu estimate needs nu >= 10 k^2",
        });
    }
    let bound = landweber_fixed_k_bound(nu, 0.0, 1.0, k)?;
    let c2 = c2_constant()?.c2;
    Ok(Check::leq(
        format!("large_nu_fixed_k(nu={nu},k={k})"),
        bound,
        c2 * (-kf).exp() * (1.0 + kf * kf / nu),
        1e-12,
    ))
}

/// Tikhonov sandwiches for several `nu` in parallel.
pub fn tikhonov_rates(x: &SpectralElement, nus: &[f64], k: u32) -> Result<Vec<RateReport>> {
    nus.par_iter().map(|&nu| tikhonov_rate(x, nu, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::hilbert_norm;

    fn sample() -> SpectralElement {
        SpectralElement::from_atoms([(1e-3, 0.02), (0.01, -0.3), (0.2, 1.0), (0.9, 0.4)]).unwrap()
    }

    #[test]
    fn tikhonov_limits() {
        let x = sample();
        let r0 = tikhonov_rate(&x, 0.0, 1).unwrap();
        assert!(r0.pass);
        assert_eq!(r0.sup_value, x.norm());
        assert_eq!(r0.arg, f64::INFINITY);
        let r1 = tikhonov_rate(&x, 1.0, 1).unwrap();
        assert!(r1.pass, "{:?}", r1.checks);
        assert!((r1.sup_value - hilbert_norm(&x, 1.0).unwrap()).abs() < 1e-12);
        assert!(tikhonov_rate(&x, 1.5, 1).is_err());
        assert!(tikhonov_rate(&x, 0.5, 0).is_err());
    }

    #[test]
    fn tikhonov_dirac_half() {
        let x = SpectralElement::single(1.0, 1.0).unwrap();
        let r = tikhonov_rate(&x, 0.5, 1).unwrap();
        assert!((r.sup_value - 0.5).abs() < 1e-12);
        assert!((r.arg - 1.0).abs() < 1e-5);
        assert!((r.bounds.0 - 0.5).abs() < 1e-9);
        assert!(r.pass);
    }

    #[test]
    fn iterated_sandwich() {
        let x = sample();
        for k in [1u32, 2, 3, 5] {
            for j in 0..=4 {
                let nu = k as f64 * j as f64 / 4.0;
                let r = tikhonov_rate(&x, nu, k).unwrap();
                assert!(r.pass, "k={k} nu={nu}: {:?}", r.checks);
            }
        }
    }

    #[test]
    fn shifted_operator_consistency() {
        // Tikhonov on eigenvalues lambda^gamma sees the (nu:gamma) norm
        let x = sample();
        let gamma = 0.6;
        let shifted = SpectralElement::from_atoms(x.atoms().map(|(l, c)| (l.powf(gamma), c))).unwrap();
        for &theta in &[0.25, 0.5, 0.8] {
            let a = interp_norm(&shifted, theta, 1.0).unwrap().value;
            let b = interp_norm(&x, theta * gamma, gamma).unwrap().value;
            assert!((a - b).abs() < 1e-9 * b);
            let r = tikhonov_rate(&shifted, theta, 1).unwrap();
            assert!(r.pass);
            assert!(r.sup_value <= b * (1.0 + 1e-6));
            assert!(r.sup_value >= b / n_theta(theta).unwrap() * (1.0 - 1e-6));
        }
    }

    #[test]
    fn cutoff_equals_triple_norm() {
        let x = sample();
        for &nu in &[0.0, 0.25, 1.0, 2.0] {
            let r = cutoff_rate(&x, nu).unwrap();
            assert!(r.pass);
            assert_eq!(r.sup_value, triple_norm(&x, nu).unwrap().value);
        }
    }

    #[test]
    fn precise_bound() {
        let x = sample();
        for &nu in &[0.1, 0.5, 0.9] {
            assert!(tikhonov_more_precise_bound(&x, nu).unwrap().pass);
        }
        let d = SpectralElement::single(0.3, 2.0).unwrap();
        assert!(tikhonov_more_precise_bound(&d, 0.5).unwrap().pass);
        assert!(tikhonov_more_precise_bound(&x, 1.0).is_err());
    }

    #[test]
    fn saturation() {
        let d = SpectralElement::single(0.5, -2.0).unwrap();
        for k in 1..4 {
            let rep = saturation_check(&d, k).unwrap();
            assert!(rep.pass);
            assert!((rep.limit - 0.5f64.powi(-(k as i32)) * 2.0).abs() < 1e-12);
        }
        assert!(saturation_check(&sample(), 2).unwrap().pass);
        assert!(saturation_check(&SpectralElement::zero(), 1).unwrap().pass);
    }

    #[test]
    fn c1_examples() {
        let c1 = c1_constant(1.0, 0.0, 1.0, 10_000).unwrap();
        assert!((c1.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(c1.ties, vec![1, 2]);
        assert!((c1.lower_bound - 0.5 / std::f64::consts::E).abs() < 1e-15);
        assert!(c1.check.pass);
        // k = 0 term is (eps_1/eps_0)^p = (p/(1+p))^p
        let c = c1_constant(0.5, 0.0, 1.0, 0).unwrap();
        assert!((c.value - (1.0f64 / 3.0).powf(0.5)).abs() < 1e-15);
        // large r+nu: the limit e^{-p} is the infimum
        let c = c1_constant(3.0, 0.5, 1.0, 10_000).unwrap();
        assert_eq!(c.arg, None);
        assert!((c.value - (-3.5f64).exp()).abs() < 1e-15);
        assert!(c.check.pass);
    }

    #[test]
    fn c2_and_beta_ratio() {
        let c2 = c2_constant().unwrap();
        assert!((c2.c2 - 1.135019).abs() < 1e-6);
        assert!((c2.a_star - 0.316398).abs() < 1e-5);
        assert!((c2.i_bar - 1.288268).abs() < 1e-6);
        assert!((beta_ratio_limit(1.0).unwrap() - 1.0).abs() < 1e-14);
        for &a in &[0.1, c2.a_star, 0.7, 1.0] {
            let far = beta_ratio(1e5, a).unwrap();
            let lim = beta_ratio_limit(a).unwrap();
            assert!((far - lim).abs() < 1e-4 * lim);
            // I(s, a) increases towards its limit
            assert!(beta_ratio(10.0, a).unwrap() < beta_ratio(100.0, a).unwrap());
            assert!(beta_ratio(100.0, a).unwrap() <= lim * (1.0 + 1e-12));
        }
    }

    #[test]
    fn delta_dirac_closed_form() {
        // x = e at lambda = 1/2, sigma = 1, r = 0:
        // Delta = sup_k ((k+nu)/nu)^nu 2^{-k}
        let x = SpectralElement::single(0.5, 1.0).unwrap();
        let nu = 2.0;
        let r = delta_rate(&x, nu, 0.0, 1.0, None).unwrap();
        let oracle = (0..200)
            .map(|k| ((k as f64 + nu) / nu).powf(nu) * 0.5f64.powi(k))
            .fold(0.0, f64::max);
        assert!((r.sup_value - oracle).abs() < 1e-12 * oracle);
        assert!(r.pass, "{:?}", r.checks);
        assert!(r.converged);
    }

    #[test]
    fn delta_refines_between_geometric_points() {
        // maximizer of ((k+nu)/nu)^nu q^k is near k = -nu - nu/ln q
        let q: f64 = 1.0 - 1e-4;
        let x = SpectralElement::single(1e-4, 1.0).unwrap();
        let nu = 1.0;
        let r = delta_rate(&x, nu, 0.0, 1.0, None).unwrap();
        let k_star = (-nu / q.ln() - nu).round() as u64;
        let brute = (k_star - 50..k_star + 50)
            .map(|k| ((k as f64 + nu) / nu).powf(nu) * q.powi(k as i32))
            .fold(0.0, f64::max);
        assert!((r.sup_value - brute).abs() < 1e-12 * brute);
        assert!((r.arg - k_star as f64).abs() <= 1.0);
    }

    #[test]
    fn delta_values_at_zero_is_triple_like() {
        // at k = 0 the normalized value is eps_0^{-p} ||(T*T)^r x||
        let x = sample();
        let v = delta_values(&x, 1.0, 0.5, 1.0, &[0]).unwrap()[0];
        let direct = regularization_error(&x, FilterSpec::Landweber { sigma: 1.0, k: 0 }, 0.5).unwrap();
        assert!((v - direct).abs() < 1e-12 * direct);
        assert!(delta_values(&x, 1.0, 0.0, 2.0, &[0]).is_err());
    }

    #[test]
    fn large_nu() {
        for k in 1..5u64 {
            let nu = 10.0 * (k * k) as f64;
            assert!(large_nu_bound_check(nu, k).unwrap().pass);
            assert!(large_nu_bound_check(nu * 7.0, k).unwrap().pass);
        }
        assert!(large_nu_bound_check(1.0, 2).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = k_grid(None, 1000);
        assert_eq!(&g[..3], &[0, 1, 2]);
        assert_eq!(*g.last().unwrap(), 1000);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let g2 = k_grid(Some(1000), 10_000);
        assert_eq!(g2[0], 1001);
        assert_eq!(*g2.last().unwrap(), 10_000);
    }
}

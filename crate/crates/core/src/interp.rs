//! Hilbert-scale norms, the K-functional of the pair `(X, X_gamma)` and the
//! interpolation norms built from it.
//!
//! All quantities are evaluated on the spectral measure of the element:
//!
//! * `||x||_gamma^2 = sum lambda^{-2 gamma} c^2`
//! * `|||x|||_nu = sup_t t^{-nu} ||E_[0,t) x||`
//! * `K_t(x)^2 = sum t^2 / (t^2 + lambda^{2 gamma}) c^2`
//! * `||x||_{nu:gamma} = sup_t t^{-nu/gamma} K_t(x)`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{all_pass, Check};
use crate::error::{check_nonneg, check_pos, Error, Result};
use crate::num::{logistic_neg, neumaier_sum};
use crate::spectral::{DiscreteSpectralMeasure, SpectralElement};
use crate::sup::{decades, maximize_log, GridInfo};

/// Relative tolerance for the inequality chains that compare a grid
/// supremum against an exact quantity.
pub const SANDWICH_RTOL: f64 = 1e-8;

/// A computed supremum over a positive parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupResult {
    pub value: f64,
    /// Parameter at which the supremum was located; `inf` when it is a
    /// limit at infinity.
    pub arg_sup: f64,
    pub grid: GridInfo,
    pub converged: bool,
}

impl SupResult {
    pub(crate) fn exact(value: f64, arg_sup: f64) -> Self {
        Self {
            value,
            arg_sup,
            grid: GridInfo::default(),
            converged: true,
        }
    }
}

/// `N_theta = (theta^theta (1-theta)^(1-theta))^{-1/2}`, with `0^0 = 1`.
pub fn n_theta(theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "must lie in [0, 1]",
        });
    }
    let xlnx = |v: f64| if v == 0.0 { 0.0 } else { v * v.ln() };
    Ok((-0.5 * (xlnx(theta) + xlnx(1.0 - theta))).exp())
}

/// `||x||_gamma = ||(T*T)^{-gamma} x||`.
pub fn hilbert_norm(x: &SpectralElement, gamma: f64) -> Result<f64> {
    check_nonneg("gamma", gamma)?;
    Ok(hilbert_norm_sq(x, gamma).sqrt())
}

pub(crate) fn hilbert_norm_sq(x: &SpectralElement, gamma: f64) -> f64 {
    if gamma == 0.0 {
        return x.norm_sq();
    }
    neumaier_sum(x.atoms().map(|(l, c)| (-2.0 * gamma * l.ln()).exp() * c * c))
}

/// `|||x|||_nu`, exact from prefix sums of the spectral measure.
pub fn triple_norm(x: &SpectralElement, nu: f64) -> Result<SupResult> {
    check_nonneg("nu", nu)?;
    Ok(measure_triple_norm(&x.measure(), nu))
}

pub(crate) fn measure_triple_norm(mu: &DiscreteSpectralMeasure, nu: f64) -> SupResult {
    let (v, arg) = mu.triple_norm_sq(nu);
    SupResult::exact(v.sqrt(), arg)
}

/// `K_t^gamma(x)`.
pub fn k_functional(x: &SpectralElement, gamma: f64, t: f64) -> Result<f64> {
    check_pos("gamma", gamma)?;
    check_pos("t", t)?;
    let s = t.ln();
    Ok(neumaier_sum(x.atoms().map(|(l, c)| c * c * logistic_neg(2.0 * (gamma * l.ln() - s)))).sqrt())
}

/// `s -> ln( t^{-2 theta} K_t(x)^2 )` with `t = e^s`.
fn interp_objective(x: &SpectralElement, theta: f64, gamma: f64) -> impl Fn(f64) -> f64 + Sync {
    let scaled: Vec<(f64, f64)> = x
        .atoms()
        .filter(|&(_, c)| c != 0.0)
        .map(|(l, c)| (gamma * l.ln(), c * c))
        .collect();
    move |s: f64| {
        let sum = neumaier_sum(scaled.iter().map(|&(gl, w)| w * logistic_neg(2.0 * (gl - s))));
        sum.ln() - 2.0 * theta * s
    }
}

/// `||x||_{nu:gamma} = sup_t t^{-nu/gamma} K_t^gamma(x)`.
///
/// The limiting cases `nu = 0` and `nu = gamma` are returned exactly as
/// `||x||` and `||x||_gamma`. Otherwise the supremum is searched on a
/// logarithmic `t`-grid covering `[lambda_min^gamma 1e-4, lambda_max^gamma 1e4]`
/// and refined around every competitive grid-local maximum; the objective
/// need not be unimodal.
pub fn interp_norm(x: &SpectralElement, nu: f64, gamma: f64) -> Result<SupResult> {
    check_nonneg("nu", nu)?;
    check_pos("gamma", gamma)?;
    if nu > gamma {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            reason: "interpolation index must satisfy nu <= gamma",
        });
    }
    if x.is_zero() {
        return Ok(SupResult::exact(0.0, 1.0));
    }
    if nu == 0.0 {
        return Ok(SupResult::exact(x.norm(), f64::INFINITY));
    }
    if nu == gamma {
        return Ok(SupResult::exact(hilbert_norm_sq(x, gamma).sqrt(), 0.0));
    }
    let theta = nu / gamma;
    let (lmin, lmax) = (x.lambda_min().unwrap(), x.lambda_max().unwrap());
    let m = maximize_log(
        interp_objective(x, theta, gamma),
        gamma * lmin.ln() - decades(4.0),
        gamma * lmax.ln() + decades(4.0),
    );
    Ok(SupResult {
        value: (0.5 * m.ln_value).exp(),
        arg_sup: m.arg_ln.exp(),
        grid: m.grid,
        converged: m.converged,
    })
}

/// The five quantities of the embedding chain plus their checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// `sqrt(1 - nu/gamma) ||x||_{nu:gamma}`, `|||x|||_nu`,
    /// `N_{nu/gamma} ||x||_{nu:gamma}`, `||x||_nu`, `||T*T||^{gamma-nu} ||x||_gamma`.
    pub chain: [f64; 5],
    /// `(|||x|||_nu / sqrt 2, ||x||_{nu:2nu}, sqrt 2 |||x|||_nu)`; absent for `nu = 0`.
    pub doubled: Option<[f64; 3]>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Evaluates both sides of the embedding chain
/// `sqrt(1-nu/gamma)||x||_{nu:gamma} <= |||x|||_nu <= N ||x||_{nu:gamma} <= ||x||_nu <= ||T*T||^{gamma-nu} ||x||_gamma`
/// and the `gamma = 2 nu` equivalence `|||x|||/sqrt2 <= ||x||_{nu:2nu} <= sqrt2 |||x|||`.
pub fn sandwich_report(x: &SpectralElement, nu: f64, gamma: f64) -> Result<SandwichReport> {
    check_nonneg("nu", nu)?;
    check_pos("gamma", gamma)?;
    if nu >= gamma {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            reason: "the embedding chain needs nu < gamma",
        });
    }
    let theta = nu / gamma;
    let interp = interp_norm(x, nu, gamma)?.value;
    let triple = triple_norm(x, nu)?.value;
    let op = x.lambda_max().unwrap_or(0.0);
    let chain = [
        (1.0 - theta).sqrt() * interp,
        triple,
        n_theta(theta)? * interp,
        hilbert_norm_sq(x, nu).sqrt(),
        op.powf(gamma - nu) * hilbert_norm_sq(x, gamma).sqrt(),
    ];
    let labels = ["a", "b", "c", "d"];
    let mut checks: Vec<Check> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            Check::leq(
                format!("embedding_chain_{l}(nu={nu},gamma={gamma})"),
                chain[i],
                chain[i + 1],
                SANDWICH_RTOL,
            )
        })
        .collect();
    let doubled = if nu > 0.0 {
        let mid = interp_norm(x, nu, 2.0 * nu)?.value;
        let d = [triple / 2f64.sqrt(), mid, 2f64.sqrt() * triple];
        checks.push(Check::leq(format!("doubled_lower(nu={nu})"), d[0], d[1], SANDWICH_RTOL));
        checks.push(Check::leq(format!("doubled_upper(nu={nu})"), d[1], d[2], SANDWICH_RTOL));
        Some(d)
    } else {
        None
    };
    let pass = all_pass(&checks);
    Ok(SandwichReport {
        chain,
        doubled,
        checks,
        pass,
    })
}

/// Both measure-tail bounds evaluated by direct summation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// `mu([0,L)) + L^{2g} int_{[L,inf)} l^{-2g} dmu <= g/(g-nu) L^{2 nu} |||mu|||_nu^2`
    pub upper_tail: Check,
    /// `int_{[0,L)} l^{-2r} dmu <= (r+nu)/nu L^{2 nu} |||mu|||_{r+nu}^2`
    pub lower_tail: Check,
    pub pass: bool,
}

/// Checks the two tail estimates for a measure at cut point `lambda_cut`.
pub fn tail_bound_check(
    mu: &DiscreteSpectralMeasure,
    nu: f64,
    gamma: f64,
    r: f64,
    lambda_cut: f64,
) -> Result<TailReport> {
    check_pos("nu", nu)?;
    check_pos("gamma", gamma)?;
    check_nonneg("r", r)?;
    check_pos("lambda", lambda_cut)?;
    if gamma <= nu {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "the tail bound needs gamma > nu",
        });
    }
    let ln_cut = lambda_cut.ln();
    let below = mu.mass_below(lambda_cut, false);
    let above = neumaier_sum(
        mu.atoms()
            .filter(|&(l, _)| l >= lambda_cut)
            .map(|(l, w)| (2.0 * gamma * (ln_cut - l.ln())).exp() * w),
    );
    let cut_pow = (2.0 * nu * ln_cut).exp();
    let t_nu = mu.triple_norm_sq(nu).0;
    let upper_tail = Check::leq(
        format!("tail_upper(nu={nu},gamma={gamma},L={lambda_cut})"),
        below + above,
        gamma / (gamma - nu) * cut_pow * t_nu,
        1e-12,
    );
    let weighted = neumaier_sum(
        mu.atoms()
            .filter(|&(l, _)| l < lambda_cut)
            .map(|(l, w)| (-2.0 * r * l.ln()).exp() * w),
    );
    let t_rnu = mu.triple_norm_sq(r + nu).0;
    let lower_tail = Check::leq(
        format!("tail_lower(nu={nu},r={r},L={lambda_cut})"),
        weighted,
        (r + nu) / nu * cut_pow * t_rnu,
        1e-12,
    );
    let pass = upper_tail.pass && lower_tail.pass;
    Ok(TailReport {
        upper_tail,
        lower_tail,
        pass,
    })
}

/// Result of the multi-start ascent for the variational source inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalSup {
    /// Best value found; every iterate is a unit vector, so this is a
    /// certified lower bound of the supremum.
    pub value: f64,
    /// `N_{nu/gamma} ||x||_{nu:gamma}`.
    pub target: f64,
    /// `(target - value) / target`.
    pub gap: f64,
    /// Maximizing direction in the eigenbasis.
    pub omega: Vec<f64>,
}

/// Estimates `sup_{||w||=1} ||(T*T)^gamma w||^{-nu/gamma} |<x, w>|` by
/// projected gradient ascent on the unit sphere from `starts` random unit
/// vectors plus deterministic starts along `x`, `lambda^{-2 nu} x` and the
/// dominant single atom.
pub fn variational_sup(x: &SpectralElement, nu: f64, gamma: f64, starts: usize, seed: u64) -> Result<VariationalSup> {
    check_nonneg("nu", nu)?;
    check_pos("gamma", gamma)?;
    if nu > gamma {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            reason: "must satisfy nu <= gamma",
        });
    }
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let theta = nu / gamma;
    let lmax = x.lambda_max().unwrap();
    let c = x.coefficients().to_vec();
    // (lambda / lambda_max)^{2 gamma}; the lambda_max^{-nu} factor is restored at the end.
    let a: Vec<f64> = x
        .eigenvalues()
        .iter()
        .map(|l| (2.0 * gamma * (l / lmax).ln()).exp())
        .collect();
    let n = c.len();

    let mut inits: Vec<Vec<f64>> = vec![c.clone()];
    inits.push(
        x.atoms()
            .map(|(l, ci)| (-2.0 * nu * (l / lmax).ln()).exp() * ci)
            .collect(),
    );
    let dominant = (0..n)
        .max_by(|&i, &j| {
            let vi = c[i].abs() * a[i].powf(-0.5 * theta);
            let vj = c[j].abs() * a[j].powf(-0.5 * theta);
            vi.total_cmp(&vj)
        })
        .unwrap();
    let mut e = vec![0.0; n];
    e[dominant] = c[dominant].signum();
    inits.push(e);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..starts {
        inits.push((0..n).map(|_| StandardNormal.sample(&mut rng)).collect());
    }

    let objective = |w: &[f64]| -> f64 {
        let inner: f64 = w.iter().zip(&c).map(|(wi, ci)| wi * ci).sum();
        let energy: f64 = w.iter().zip(&a).map(|(wi, ai)| ai * wi * wi).sum();
        inner.abs().ln() - 0.5 * theta * energy.ln()
    };

    let results: Vec<(f64, Vec<f64>)> = inits
        .into_par_iter()
        .map(|w0| ascend(w0, &c, &a, theta, &objective))
        .collect();
    let (best_ln, omega) = results.into_iter().fold(
        (f64::NEG_INFINITY, Vec::new()),
        |acc, r| if r.0 > acc.0 { r } else { acc },
    );

    let value = best_ln.exp() * lmax.powf(-nu);
    let target = n_theta(theta)? * interp_norm(x, nu, gamma)?.value;
    Ok(VariationalSup {
        value,
        target,
        gap: (target - value) / target,
        omega,
    })
}

fn normalize(w: &mut [f64]) -> bool {
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    w.iter_mut().for_each(|v| *v /= norm);
    true
}

fn ascend(mut w: Vec<f64>, c: &[f64], a: &[f64], theta: f64, objective: &impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    const MAX_ITERS: usize = 4000;
    if !normalize(&mut w) {
        return (f64::NEG_INFINITY, w);
    }
    let mut val = objective(&w);
    if !val.is_finite() {
        return (f64::NEG_INFINITY, w);
    }
    let mut step = 1.0;
    let mut trial = vec![0.0; w.len()];
    for _ in 0..MAX_ITERS {
        let inner: f64 = w.iter().zip(c).map(|(wi, ci)| wi * ci).sum();
        let energy: f64 = w.iter().zip(a).map(|(wi, ai)| ai * wi * wi).sum();
        let mut g: Vec<f64> = (0..w.len())
            .map(|i| c[i] / inner - theta * a[i] * w[i] / energy)
            .collect();
        let radial: f64 = g.iter().zip(&w).map(|(gi, wi)| gi * wi).sum();
        g.iter_mut().zip(&w).for_each(|(gi, wi)| *gi -= radial * wi);
        let gnorm2: f64 = g.iter().map(|v| v * v).sum();
        if gnorm2.sqrt() < 1e-12 {
            break;
        }
        step *= 2.0;
        let mut improved = false;
        while step > 1e-18 {
            trial
                .iter_mut()
                .zip(w.iter().zip(&g))
                .for_each(|(t, (wi, gi))| *t = wi + step * gi);
            if normalize(&mut trial) {
                let v = objective(&trial);
                if v.is_finite() && v >= val + 1e-4 * step * gnorm2 {
                    std::mem::swap(&mut w, &mut trial);
                    val = v;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (val, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dirac(l: f64) -> SpectralElement {
        SpectralElement::single(l, 1.0).unwrap()
    }

    #[test]
    fn n_theta_endpoints_and_middle() {
        assert_eq!(n_theta(0.0).unwrap(), 1.0);
        assert_eq!(n_theta(1.0).unwrap(), 1.0);
        assert!((n_theta(0.5).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(n_theta(-0.1).is_err());
        assert!(n_theta(1.1).is_err());
        // continuity at the endpoints
        assert!((n_theta(1e-12).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn n_theta_matches_its_sup_representation() {
        // sup_{l in [0,1]} l^theta (1-l)^(1-theta) on a fine grid
        for &theta in &[0.1, 0.37, 0.5, 0.8] {
            let m = (1..200_000)
                .map(|i| {
                    let l = i as f64 / 200_000.0;
                    l.powf(theta) * (1.0 - l).powf(1.0 - theta)
                })
                .fold(0.0, f64::max);
            let n = n_theta(theta).unwrap();
            assert!((n.powi(-2) - m).abs() < 1e-9, "theta {theta}");
        }
    }

    #[test]
    fn hilbert_norm_cases() {
        let x = SpectralElement::from_atoms([(0.1, 1.0), (0.5, -2.0)]).unwrap();
        assert!((hilbert_norm(&x, 0.0).unwrap() - x.norm()).abs() < 1e-15);
        let single = SpectralElement::single(0.3, -2.0).unwrap();
        let v = hilbert_norm(&single, 0.7).unwrap();
        assert!((v - 0.3f64.powf(-0.7) * 2.0).abs() < 1e-13);
        assert!(hilbert_norm(&x, -1.0).is_err());
        // removing an atom cannot increase the norm
        let sub = x.project_below(0.2, false);
        assert!(hilbert_norm(&sub, 1.3).unwrap() <= hilbert_norm(&x, 1.3).unwrap());
    }

    #[test]
    fn diag_example_hilbert_norm_grows_with_truncation() {
        let mk =
            |n: usize| SpectralElement::from_atoms((1..=n).map(|k| (1.0 / k as f64, (k as f64).powf(-1.5)))).unwrap();
        for &n in &[10usize, 100, 1000] {
            let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
            let v = hilbert_norm(&mk(n), 1.0).unwrap();
            assert!((v * v - h).abs() < 1e-10 * h);
        }
        assert!(hilbert_norm(&mk(1000), 1.0).unwrap() > hilbert_norm(&mk(100), 1.0).unwrap() + 0.4);
    }

    #[test]
    fn triple_norm_dirac_and_nu_zero() {
        for &nu in &[0.0, 0.3, 1.0, 4.0] {
            assert!((triple_norm(&dirac(1.0), nu).unwrap().value - 1.0).abs() < 1e-15);
        }
        let x = SpectralElement::from_atoms([(0.1, 1.0), (0.5, -2.0), (0.9, 0.5)]).unwrap();
        assert!((triple_norm(&x, 0.0).unwrap().value - x.norm()).abs() < 1e-15);
    }

    #[test]
    fn triple_norm_agrees_with_dense_t_scan() {
        let x = SpectralElement::from_atoms([(0.01, 0.3), (0.2, 1.0), (0.5, -0.4), (0.9, 0.1)]).unwrap();
        let nu = 0.6;
        let exact = triple_norm(&x, nu).unwrap().value;
        let mut best = 0.0_f64;
        for i in 0..400_000 {
            let t = 10f64.powf(-3.0 + 4.0 * i as f64 / 400_000.0);
            let v = t.powf(-nu) * x.project_below(t, false).norm();
            best = best.max(v);
        }
        assert!(best <= exact * (1.0 + 1e-12));
        assert!(best >= exact * (1.0 - 1e-4));
    }

    #[test]
    fn k_functional_single_atom_formula() {
        let (l0, c, gamma, t) = (0.3_f64, -1.7_f64, 0.8_f64, 0.05_f64);
        let x = SpectralElement::single(l0, c).unwrap();
        let expected = c.abs() * t / (t * t + l0.powf(2.0 * gamma)).sqrt();
        assert!((k_functional(&x, gamma, t).unwrap() - expected).abs() < 1e-15);
        // t -> infinity recovers the norm
        assert!((k_functional(&x, gamma, 1e12).unwrap() - c.abs()).abs() < 1e-12);
        assert!(k_functional(&x, 0.0, 1.0).is_err());
        assert!(k_functional(&x, 1.0, 0.0).is_err());
    }

    #[test]
    fn k_functional_bounds_and_monotonicity() {
        let x = SpectralElement::from_atoms([(0.01, 0.3), (0.2, 1.0), (0.5, -0.4)]).unwrap();
        let gamma = 1.2;
        let mut prev = 0.0;
        for i in 0..200 {
            let t = 10f64.powf(-6.0 + 0.05 * i as f64);
            let k = k_functional(&x, gamma, t).unwrap();
            assert!(k >= prev);
            assert!(k <= x.norm() * (1.0 + 1e-15));
            assert!(k <= t * hilbert_norm(&x, gamma).unwrap() * (1.0 + 1e-15));
            prev = k;
        }
    }

    #[test]
    fn k_functional_diag_example_against_extended_sum() {
        // Oracle: the same sum accumulated in pairwise f64 from the largest
        // index down, independently written with powf.
        let n = 100;
        let x = SpectralElement::from_atoms((1..=n).map(|k| (1.0 / k as f64, (k as f64).powf(-1.5)))).unwrap();
        let t = 0.01_f64;
        let mut oracle = 0.0_f64;
        for k in (1..=n).rev() {
            let lam = 1.0 / k as f64;
            let w = (k as f64).powi(-3);
            oracle += t * t / (t * t + lam * lam) * w;
        }
        let v = k_functional(&x, 1.0, t).unwrap();
        assert!((v - oracle.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn interp_norm_limits_are_exact() {
        let x = SpectralElement::from_atoms([(0.1, 1.0), (0.5, -2.0)]).unwrap();
        assert_eq!(interp_norm(&x, 0.0, 1.3).unwrap().value, x.norm());
        assert_eq!(interp_norm(&x, 1.3, 1.3).unwrap().value, hilbert_norm(&x, 1.3).unwrap());
        assert!(interp_norm(&x, 1.5, 1.3).is_err());
    }

    #[test]
    fn interp_norm_dirac_closed_form() {
        for &(l0, nu, gamma) in &[(1.0, 0.5, 1.0), (0.2, 0.3, 2.0), (3.0, 0.9, 1.0)] {
            let v = interp_norm(&dirac(l0), nu, gamma).unwrap();
            let expected = n_theta(nu / gamma).unwrap().recip() * f64::powf(l0, -nu);
            assert!(v.converged);
            assert!((v.value - expected).abs() < 1e-10 * expected, "{l0} {nu} {gamma}");
        }
    }

    #[test]
    fn sandwich_on_dirac_is_tight() {
        let r = sandwich_report(&dirac(1.0), 0.5, 1.0).unwrap();
        assert!(r.pass, "{:?}", r.checks);
        assert!((r.chain[1] - 1.0).abs() < 1e-12);
        assert!((r.chain[2] - 1.0).abs() < 1e-9);
        assert!(sandwich_report(&dirac(1.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn tail_bounds_on_dirac_and_empty() {
        let mu = DiscreteSpectralMeasure::from_atoms([(0.4, 2.0)]).unwrap();
        let r = tail_bound_check(&mu, 0.5, 1.0, 0.0, 0.9).unwrap();
        assert!(r.pass);
        assert_eq!(r.upper_tail.lhs, 2.0);
        let empty = DiscreteSpectralMeasure::default();
        let r = tail_bound_check(&empty, 0.5, 1.0, 0.3, 0.9).unwrap();
        assert!(r.pass);
        assert_eq!(r.upper_tail.lhs, 0.0);
        assert_eq!(r.lower_tail.rhs, 0.0);
        assert!(tail_bound_check(&mu, 1.0, 0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn variational_limits() {
        let x = SpectralElement::from_atoms([(0.1, 1.0), (0.5, -2.0), (0.7, 0.3)]).unwrap();
        let v0 = variational_sup(&x, 0.0, 1.0, 8, 1).unwrap();
        assert!((v0.value - x.norm()).abs() < 1e-10);
        let v1 = variational_sup(&x, 1.0, 1.0, 8, 1).unwrap();
        assert!((v1.value - hilbert_norm(&x, 1.0).unwrap()).abs() < 1e-8 * v1.value);
        assert!(matches!(
            variational_sup(&SpectralElement::zero(), 0.5, 1.0, 4, 0),
            Err(Error::ZeroElement)
        ));
    }
}

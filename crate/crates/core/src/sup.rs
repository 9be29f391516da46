//! Suprema over a positive parameter on a logarithmic grid.
//!
//! Objectives are passed in log form: `f(s)` returns `ln F(e^s)`. The grid
//! is scanned (in parallel), every grid-local maximum close to the best grid
//! value is refined by golden-section search, and a maximum sitting on the
//! grid edge triggers an extension of that edge before refinement.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const LN10: f64 = std::f64::consts::LN_10;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Grid points per decade.
pub const POINTS_PER_DECADE: usize = 64;
/// Relative bracket width at which golden-section refinement stops.
pub const REFINE_RTOL: f64 = 1e-10;
/// Decades added to an edge each time the grid maximum lands on it.
pub const EXTENSION_DECADES: f64 = 4.0;
const MAX_EXTENSIONS: usize = 8;
const MAX_GOLDEN_ITERS: usize = 200;
// Grid-local maxima more than this far below the best grid value (in ln
// units) are not refined.
const REFINE_SLACK: f64 = 0.05;
const MAX_REFINED: usize = 64;

/// Where a supremum was searched.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub log10_lo: f64,
    pub log10_hi: f64,
    pub points: usize,
    pub refinements: usize,
}

/// A supremum in log form: `ln_value = ln F(e^{arg_ln})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMaximum {
    pub arg_ln: f64,
    pub ln_value: f64,
    pub grid: GridInfo,
    /// False when the best value still sits on an edge of the fully
    /// extended grid.
    pub converged: bool,
}

fn nan_to_neg_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
///
/// Returns `(argmax, max, iterations)`.
pub fn golden_max<F>(f: F, mut a: f64, mut b: f64, rtol: f64) -> (f64, f64, usize)
where
    F: Fn(f64) -> f64,
{
    let f = |x: f64| nan_to_neg_inf(f(x));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while iters < MAX_GOLDEN_ITERS && (b - a).abs() > rtol * (1.0 + a.abs().max(b.abs())) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    if fc >= fd {
        (c, fc, iters)
    } else {
        (d, fd, iters)
    }
}

/// Golden-section minimization; see [`golden_max`].
pub fn golden_min<F>(f: F, a: f64, b: f64, rtol: f64) -> (f64, f64, usize)
where
    F: Fn(f64) -> f64,
{
    let (x, v, it) = golden_max(|s| -f(s), a, b, rtol);
    (x, -v, it)
}

/// Maximizes `f` (a log-objective of `s = ln t`) over `[lo, hi]` and
/// beyond, following the grid policy described in the module docs.
pub fn maximize_log<F>(f: F, lo: f64, hi: f64) -> LogMaximum
where
    F: Fn(f64) -> f64 + Sync,
{
    let step = LN10 / POINTS_PER_DECADE as f64;
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let eval = |a: f64, n: usize| -> Vec<(f64, f64)> {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let s = a + step * i as f64;
                (s, nan_to_neg_inf(f(s)))
            })
            .collect()
    };
    let n = (((hi - lo) / step).ceil() as usize).max(2) + 1;
    hi = lo + step * (n - 1) as f64;
    let mut grid = eval(lo, n);

    let ext_points = (EXTENSION_DECADES * POINTS_PER_DECADE as f64) as usize;
    let mut extensions = 0;
    loop {
        let best = argmax(&grid);
        let at_lo = best == 0;
        let at_hi = best == grid.len() - 1;
        if !(at_lo || at_hi) || extensions >= MAX_EXTENSIONS || !grid[best].1.is_finite() {
            break;
        }
        extensions += 1;
        if at_lo {
            let new_lo = lo - step * ext_points as f64;
            let mut fresh = eval(new_lo, ext_points);
            fresh.extend(grid);
            grid = fresh;
            lo = new_lo;
        } else {
            let fresh = eval(hi + step, ext_points);
            grid.extend(fresh);
            hi += step * ext_points as f64;
        }
    }

    let best = argmax(&grid);
    let best_val = grid[best].1;
    let converged = best != 0 && best != grid.len() - 1 && best_val.is_finite();

    let mut candidates: Vec<usize> = (1..grid.len() - 1)
        .filter(|&i| grid[i].1 >= grid[i - 1].1 && grid[i].1 >= grid[i + 1].1 && grid[i].1 >= best_val - REFINE_SLACK)
        .collect();
    candidates.sort_by(|&a, &b| grid[b].1.total_cmp(&grid[a].1));
    candidates.truncate(MAX_REFINED);

    let refined: Vec<(f64, f64, usize)> = candidates
        .par_iter()
        .map(|&i| golden_max(&f, grid[i - 1].0, grid[i + 1].0, REFINE_RTOL))
        .collect();

    let mut arg_ln = grid[best].0;
    let mut ln_value = best_val;
    let mut refinements = 0;
    for (s, v, it) in refined {
        refinements += it;
        if v > ln_value {
            arg_ln = s;
            ln_value = v;
        }
    }
    LogMaximum {
        arg_ln,
        ln_value,
        grid: GridInfo {
            log10_lo: lo / LN10,
            log10_hi: hi / LN10,
            points: grid.len(),
            refinements,
        },
        converged,
    }
}

fn argmax(grid: &[(f64, f64)]) -> usize {
    let mut best = 0;
    for (i, p) in grid.iter().enumerate() {
        if p.1 > grid[best].1 {
            best = i;
        }
    }
    best
}

/// `ln(10^d)`, for building grid bounds from decades.
pub fn decades(d: f64) -> f64 {
    d * LN10
}

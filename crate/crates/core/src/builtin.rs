//! Built-in test problems.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{SpectralElement, SpectralProblem};

/// A named example and its size parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExampleId {
    /// `lambda_n = 1/n`, `c_n = n^{-3/2}`, `n = 1..=n`.
    DiagExample { n: usize },
    /// One atom of coefficient 1 at `lambda0`.
    Dirac { lambda0: f64 },
    /// `atoms` equal-mass atoms of `2 nu lambda^{2nu-1} d lambda` on `(0, 1]`.
    PowerLaw { nu: f64, atoms: usize },
    /// `sign(s)` on `(-1, 1)` for the inverse of `-d^2/ds^2` with Dirichlet
    /// conditions, `n` eigenfunctions.
    BvpSign { n: usize },
}

impl ExampleId {
    pub fn label(&self) -> String {
        match *self {
            ExampleId::DiagExample { n } => format!("diag_example(n={n})"),
            ExampleId::Dirac { lambda0 } => format!("dirac(lambda0={lambda0})"),
            ExampleId::PowerLaw { nu, atoms } => format!("powerlaw(nu={nu},atoms={atoms})"),
            ExampleId::BvpSign { n } => format!("bvp_sign(n={n})"),
        }
    }

    pub fn build(&self) -> Result<SpectralProblem> {
        let element = match *self {
            ExampleId::DiagExample { n } => {
                require_count("n", n, 1)?;
                SpectralElement::from_atoms((1..=n).map(|i| {
                    let f = i as f64;
                    (1.0 / f, f.powf(-1.5))
                }))?
            }
            ExampleId::Dirac { lambda0 } => SpectralElement::single(lambda0, 1.0)?,
            ExampleId::PowerLaw { nu, atoms } => powerlaw(nu, atoms)?,
            ExampleId::BvpSign { n } => {
                require_count("n", n, 1)?;
                SpectralElement::from_atoms((1..=n).map(|i| (bvp_eigenvalue(i), bvp_sign_coefficient(i))))?
            }
        };
        SpectralProblem::new(element, self.label())
    }
}

/// Shorthand for `id.build()`.
pub fn build(id: ExampleId) -> Result<SpectralProblem> {
    id.build()
}

fn require_count(name: &'static str, v: usize, min: usize) -> Result<()> {
    if v < min {
        return Err(Error::InvalidParameter {
            name,
            value: v as f64,
            reason: "too small for this example",
        });
    }
    Ok(())
}

/// Atom `j` (1-based) sits at the centroid of `[a, b]`, where `a` and `b`
/// cut the mass into `m` equal parts: `a = ((j-1)/m)^{1/(2nu)}`.
fn powerlaw(nu: f64, m: usize) -> Result<SpectralElement> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            reason: "power-law exponent must be positive",
        });
    }
    require_count("atoms", m, 2)?;
    let mf = m as f64;
    let e = 1.0 / (2.0 * nu);
    let weight = 1.0 / mf;
    SpectralElement::from_atoms((1..=m).map(|j| {
        let a = ((j - 1) as f64 / mf).powf(e);
        let b = (j as f64 / mf).powf(e);
        let p = 2.0 * nu + 1.0;
        let centroid = mf * 2.0 * nu / p * (b.powf(p) - a.powf(p));
        (centroid, weight.sqrt())
    }))
}

/// `(2 / (n pi))^2`.
pub fn bvp_eigenvalue(n: usize) -> f64 {
    let v = 2.0 / (n as f64 * PI);
    v * v
}

/// `int_{-1}^{1} sign(s) sin(n pi (s+1)/2) ds = (2 cos u - cos 2u - 1)/u`
/// with `u = n pi/2`; the cosines are read off `n mod 4` exactly, leaving
/// `-8/(n pi)` for `n = 2 mod 4` and zero otherwise.
pub fn bvp_sign_coefficient(n: usize) -> f64 {
    let (cos_u, cos_2u) = match n % 4 {
        0 => (1.0, 1.0),
        2 => (-1.0, 1.0),
        _ => (0.0, -1.0),
    };
    let u = n as f64 * PI / 2.0;
    (2.0 * cos_u - cos_2u - 1.0) / u
}

/// A seeded random element: `1..=max_atoms` atoms, eigenvalues log-uniform
/// in `[1e-4, 1]`, standard normal coefficients.
pub fn random_element(seed: u64, max_atoms: usize) -> SpectralElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_atoms.max(1));
    let atoms: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let l = 10f64.powf(rng.random_range(-4.0..=0.0));
            let c: f64 = rng.sample(StandardNormal);
            (l, c)
        })
        .collect();
    SpectralElement::from_atoms(atoms).expect("sampled atoms are valid")
}

//! Elements and measures expressed in the eigenbasis of `T*T`.
//!
//! Every norm in this crate is a weighted sum over the atoms of the
//! spectral measure `mu_x(A) = sum_{lambda_i in A} c_i^2`, so an element is
//! stored as its sorted eigenvalues and the signed coefficients of `x` in
//! the corresponding eigenvectors. Infinite sequences must be truncated by
//! the caller; nothing in here truncates implicitly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::neumaier_sum;

/// Atoms whose eigenvalues differ by less than this relative distance are
/// treated as one eigenspace.
pub const MERGE_RTOL: f64 = 1e-12;

/// An element of `X` in the eigenbasis of `T*T`.
///
/// Eigenvalues are strictly positive and strictly increasing. The empty
/// element is the zero vector.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectralElement {
    eigenvalues: Vec<f64>,
    coefficients: Vec<f64>,
}

fn validate_atom(lambda: f64, value: f64, what: &'static str) -> Result<()> {
    if !lambda.is_finite() {
        return Err(Error::NonFinite {
            what: "eigenvalue",
            value: lambda,
        });
    }
    if lambda <= 0.0 {
        return Err(Error::NonPositiveEigenvalue(lambda));
    }
    if !value.is_finite() {
        return Err(Error::NonFinite { what, value });
    }
    Ok(())
}

/// Sorts `(lambda, value)` pairs and groups eigenvalues that coincide up to
/// [`MERGE_RTOL`]; each group is handed to `merge`.
fn sort_and_group(mut pairs: Vec<(f64, f64)>, mut merge: impl FnMut(&[(f64, f64)]) -> f64) -> (Vec<f64>, Vec<f64>) {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut lambdas = Vec::with_capacity(pairs.len());
    let mut values = Vec::with_capacity(pairs.len());
    let mut start = 0;
    while start < pairs.len() {
        let head = pairs[start].0;
        let mut end = start + 1;
        while end < pairs.len() && (pairs[end].0 - head) < MERGE_RTOL * head {
            end += 1;
        }
        lambdas.push(head);
        values.push(merge(&pairs[start..end]));
        start = end;
    }
    (lambdas, values)
}

impl SpectralElement {
    /// Builds an element from `(eigenvalue, coefficient)` pairs.
    ///
    /// Pairs are sorted; coincident eigenvalues are merged into one atom
    /// whose coefficient is the root-sum-square of the group (the sign is
    /// taken from the first pair, only `c^2` enters any norm).
    pub fn from_atoms<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
        for &(l, c) in &pairs {
            validate_atom(l, c, "coefficient")?;
        }
        let (eigenvalues, coefficients) = sort_and_group(pairs, |group| {
            if group.len() == 1 {
                group[0].1
            } else {
                let mag = neumaier_sum(group.iter().map(|p| p.1 * p.1)).sqrt();
                if group[0].1 < 0.0 {
                    -mag
                } else {
                    mag
                }
            }
        });
        Ok(Self {
            eigenvalues,
            coefficients,
        })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// A single atom `c` at eigenvalue `lambda`.
    pub fn single(lambda: f64, coefficient: f64) -> Result<Self> {
        Self::from_atoms([(lambda, coefficient)])
    }

    /// Replaces the coefficients, keeping the spectrum.
    pub fn with_coefficients(&self, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: coefficients.len(),
            });
        }
        if let Some(&bad) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                what: "coefficient",
                value: bad,
            });
        }
        Ok(Self {
            eigenvalues: self.eigenvalues.clone(),
            coefficients,
        })
    }

    /// Coefficientwise difference of two elements over the same spectrum.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.eigenvalues != other.eigenvalues {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let coeffs = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a - b)
            .collect();
        self.with_coefficients(coeffs)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.eigenvalues.iter().copied().zip(self.coefficients.iter().copied())
    }

    /// True when every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0.0)
    }

    pub fn lambda_max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    pub fn lambda_min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    /// `||x||^2`, summed from the smallest eigenvalue upwards.
    pub fn norm_sq(&self) -> f64 {
        neumaier_sum(self.coefficients.iter().map(|c| c * c))
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Spectral projection `E_[0,t) x` (`closed = false`) or `E_[0,t] x`.
    pub fn project_below(&self, t: f64, closed: bool) -> Self {
        let end = if closed {
            self.eigenvalues.partition_point(|&l| l <= t)
        } else {
            self.eigenvalues.partition_point(|&l| l < t)
        };
        Self {
            eigenvalues: self.eigenvalues[..end].to_vec(),
            coefficients: self.coefficients[..end].to_vec(),
        }
    }

    /// `(T*T)^r x`, i.e. `c_i -> lambda_i^r c_i`.
    pub fn apply_power(&self, r: f64) -> Self {
        let coefficients = self
            .atoms()
            .map(|(l, c)| if r == 0.0 { c } else { (r * l.ln()).exp() * c })
            .collect();
        Self {
            eigenvalues: self.eigenvalues.clone(),
            coefficients,
        }
    }

    /// The induced measure `mu_x` with weights `c_i^2`.
    pub fn measure(&self) -> DiscreteSpectralMeasure {
        DiscreteSpectralMeasure {
            eigenvalues: self.eigenvalues.clone(),
            weights: self.coefficients.iter().map(|c| c * c).collect(),
        }
    }
}

/// `measure_from_atoms`: sorted, merged element from raw pairs.
pub fn measure_from_atoms(pairs: &[(f64, f64)]) -> Result<SpectralElement> {
    SpectralElement::from_atoms(pairs.iter().copied())
}

/// A finite nonnegative measure on `(0, inf)` with finitely many atoms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSpectralMeasure {
    eigenvalues: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteSpectralMeasure {
    /// Builds a measure from `(eigenvalue, weight)` pairs; coincident
    /// eigenvalues have their weights added.
    pub fn from_atoms<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
        for &(l, w) in &pairs {
            validate_atom(l, w, "weight")?;
            if w < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    value: w,
                    reason: "measure weights must be nonnegative",
                });
            }
        }
        let (eigenvalues, weights) = sort_and_group(pairs, |group| neumaier_sum(group.iter().map(|p| p.1)));
        Ok(Self { eigenvalues, weights })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.eigenvalues.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        neumaier_sum(self.weights.iter().copied())
    }

    /// `mu([0, t))` or `mu([0, t])`.
    pub fn mass_below(&self, t: f64, closed: bool) -> f64 {
        let end = if closed {
            self.eigenvalues.partition_point(|&l| l <= t)
        } else {
            self.eigenvalues.partition_point(|&l| l < t)
        };
        neumaier_sum(self.weights[..end].iter().copied())
    }

    /// Inclusive prefix sums `mu([0, lambda_i])`, compensated.
    pub fn prefix_masses(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        let mut sum = 0.0_f64;
        let mut comp = 0.0_f64;
        for &w in &self.weights {
            let t = sum + w;
            if sum.abs() >= w.abs() {
                comp += (sum - t) + w;
            } else {
                comp += (w - t) + sum;
            }
            sum = t;
            out.push(sum + comp);
        }
        out
    }

    /// `sup_{t>0} t^{-2 nu} mu([0, t))` together with the eigenvalue at
    /// which it is realized.
    ///
    /// `t -> mu([0,t))` is left-continuous and `t^{-2 nu}` strictly
    /// decreasing, so the supremum is the limit `t -> lambda_i^+`, that is
    /// `max_i lambda_i^{-2 nu} mu([0, lambda_i])`. Returns `(0, 1)` for the
    /// empty measure.
    pub fn triple_norm_sq(&self, nu: f64) -> (f64, f64) {
        let mut best = (0.0, 1.0);
        let mut best_ln = f64::NEG_INFINITY;
        for (&l, &m) in self.eigenvalues.iter().zip(self.prefix_masses().iter()) {
            if m <= 0.0 {
                continue;
            }
            let ln_v = m.ln() - 2.0 * nu * l.ln();
            if ln_v > best_ln {
                best_ln = ln_v;
                best = (ln_v.exp(), l);
            }
        }
        best
    }
}

/// The inverse problem in the shared eigenbasis: `element` is `x_dagger - x_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralProblem {
    pub element: SpectralElement,
    operator_norm_sq: f64,
    pub label: String,
}

impl SpectralProblem {
    pub fn new(element: SpectralElement, label: impl Into<String>) -> Result<Self> {
        let operator_norm_sq = element.lambda_max().ok_or(Error::EmptySpectrum)?;
        Ok(Self {
            element,
            operator_norm_sq,
            label: label.into(),
        })
    }

    /// `||T*T|| = lambda_max`.
    pub fn operator_norm(&self) -> f64 {
        self.operator_norm_sq
    }

    /// Noise-free data `y_i = sqrt(lambda_i) x_i` in the shared basis.
    pub fn clean_data(&self) -> Vec<f64> {
        self.element.atoms().map(|(l, c)| l.sqrt() * c).collect()
    }
}

/// `operator_norm`: the largest eigenvalue present.
pub fn operator_norm(problem: &SpectralProblem) -> f64 {
    problem.operator_norm()
}

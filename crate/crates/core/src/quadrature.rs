//! Gauss–Jacobi quadrature and the probability measures `τ_λ` and `ν_α`.
//!
//! `τ_λ = B(λ+1, 1/2)^{-1} (1−x²)^λ dx` on `[-1, 1]` and
//! `ν_α = (α+1)/π (1−|z|²)^α dx dy` on the closed disc. Both are integrated
//! with Golub–Welsch rules; the disc rule substitutes `t = 2r² − 1`, which
//! turns the radial part of `ν_α` into the Jacobi weight `(1−t)^α` and leaves
//! an equispaced trapezoid rule in the angle.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::ln_beta;

/// Node count for the first pass of an opaque integrand.
pub const OPAQUE_START_NODES: usize = 128;
/// Largest node count tried by the doubling loop.
pub const OPAQUE_MAX_NODES: usize = 2048;
/// Relative change between doublings accepted as converged.
pub const OPAQUE_REL_TOL: f64 = 1e-12;
/// Angular node count for opaque integrands on the disc.
pub const OPAQUE_ANGULAR_NODES: usize = 256;

const MAX_QL_SWEEPS: usize = 60;

/// Gauss rule for `∫_{-1}^{1} g(x) (1−x)^α (1+x)^β dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussJacobiRule {
    alpha: f64,
    beta: f64,
    nodes: Vec<f64>,
    /// Normalized weights; they sum to one.
    weights: Vec<f64>,
    /// `2^{α+β+1} B(α+1, β+1)`, the total mass of the weight function.
    mass: f64,
}

impl GaussJacobiRule {
    pub fn new(alpha: f64, beta: f64, n: usize) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::Domain(format!(
                "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("quadrature needs at least one node".into()));
        }
        let (mut diag, mut off) = jacobi_matrix(alpha, beta, n);
        let mut first = vec![0.0; n];
        first[0] = 1.0;
        tridiagonal_eigen_first_row(&mut diag, &mut off, &mut first)?;
        let mut pairs: Vec<(f64, f64)> = diag.into_iter().zip(first.into_iter().map(|v| v * v)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        let mass = ((alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_beta(alpha + 1.0, beta + 1.0)).exp();
        Ok(Self {
            alpha,
            beta,
            nodes,
            weights,
            mass,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights normalized to a probability measure.
    pub fn probability_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Classical weights, summing to `2^{α+β+1} B(α+1, β+1)`.
    pub fn weights(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w * self.mass).collect()
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Integral of `g` against the normalized weight.
    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut g: F) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| g(x) * w).sum()
    }

    pub fn try_integrate<F>(&self, mut g: F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += g(x)? * w;
        }
        Ok(acc)
    }
}

/// Diagonal and off-diagonal of the symmetric Jacobi matrix for the monic
/// Jacobi polynomials.
fn jacobi_matrix(alpha: f64, beta: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let ab = alpha + beta;
    let diag = (0..n)
        .map(|k| {
            let s = 2.0 * k as f64 + ab;
            if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (1..n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            let b2 = if k == 1 {
                // the factor (k+α+β) cancels against (2k+α+β−1)
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            b2.sqrt()
        })
        .collect();
    (diag, off)
}

/// Implicit QL iteration on a symmetric tridiagonal matrix that tracks only the
/// first component of each eigenvector. On return `diag` holds the eigenvalues
/// and `first[i]` the first component of the `i`-th normalized eigenvector.
fn tridiagonal_eigen_first_row(diag: &mut [f64], off: &mut Vec<f64>, first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    let mut e = std::mem::take(off);
    e.push(0.0);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps == MAX_QL_SWEEPS {
                return Err(Error::EigenNonConvergence(format!(
                    "implicit QL stalled on eigenvalue {l} of {n}"
                )));
            }
            sweeps += 1;
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let t = first[i + 1];
                first[i + 1] = s * first[i] + c * t;
                first[i] = c * first[i] - s * t;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

type RuleKey = (u64, u64, usize);

fn rule_cache() -> &'static RwLock<HashMap<RuleKey, Arc<GaussJacobiRule>>> {
    static CACHE: OnceLock<RwLock<HashMap<RuleKey, Arc<GaussJacobiRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Gauss–Jacobi rule with `n` nodes, shared through a process-wide cache.
pub fn gauss_jacobi_rule(alpha: f64, beta: f64, n: usize) -> Result<Arc<GaussJacobiRule>> {
    let key = (alpha.to_bits(), beta.to_bits(), n);
    if let Some(rule) = rule_cache().read().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(GaussJacobiRule::new(alpha, beta, n)?);
    rule_cache()
        .write()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}

/// `∫ g dτ_λ` with an `nodes`-point rule.
pub fn integrate_tau<F>(g: F, lambda: f64, nodes: usize) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    gauss_jacobi_rule(lambda, lambda, nodes)?.try_integrate(g)
}

/// `∫ g dτ_λ` for a non-polynomial integrand: start at
/// [`OPAQUE_START_NODES`] and double until successive values agree to
/// `rel_tol · max(|value|, scale)`.
pub fn integrate_tau_adaptive<F>(mut g: F, lambda: f64, scale: f64, rel_tol: f64) -> Result<Complex64>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut nodes = OPAQUE_START_NODES;
    let mut prev = integrate_tau(&mut g, lambda, nodes)?;
    loop {
        if nodes >= OPAQUE_MAX_NODES {
            return Err(Error::QuadratureNonConvergence {
                nodes,
                change: f64::NAN,
            });
        }
        nodes *= 2;
        let cur = integrate_tau(&mut g, lambda, nodes)?;
        let change = (cur - prev).norm();
        if change <= rel_tol * cur.norm().max(scale) {
            return Ok(cur);
        }
        if nodes >= OPAQUE_MAX_NODES {
            return Err(Error::QuadratureNonConvergence { nodes, change });
        }
        prev = cur;
    }
}

/// Product rule for `ν_α` on the closed disc.
#[derive(Debug, Clone)]
pub struct DiscRule {
    radial: Arc<GaussJacobiRule>,
    angles: Vec<Complex64>,
}

impl DiscRule {
    /// `radial_nodes` Gauss–Jacobi `(α, 0)` nodes in `t = 2r² − 1` and
    /// `angular` equispaced angles.
    pub fn new(alpha: f64, radial_nodes: usize, angular: usize) -> Result<Self> {
        if angular == 0 {
            return Err(Error::InvalidInput("disc rule needs at least one angle".into()));
        }
        let radial = gauss_jacobi_rule(alpha, 0.0, radial_nodes)?;
        let angles = (0..angular)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / angular as f64))
            .collect();
        Ok(Self { radial, angles })
    }

    pub fn radial(&self) -> &GaussJacobiRule {
        &self.radial
    }

    pub fn angular_count(&self) -> usize {
        self.angles.len()
    }

    /// Quadrature points `(z, weight)`; weights sum to one.
    pub fn points(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let aw = 1.0 / self.angles.len() as f64;
        self.radial
            .nodes()
            .iter()
            .zip(self.radial.probability_weights())
            .flat_map(move |(&t, &w)| {
                let r = ((1.0 + t) / 2.0).sqrt();
                self.angles.iter().map(move |&e| (e * r, w * aw))
            })
    }

    pub fn try_integrate<F>(&self, mut g: F) -> Result<Complex64>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (z, w) in self.points() {
            acc += g(z)? * w;
        }
        Ok(acc)
    }
}

/// `∫ g dν_α` with `radial_nodes × angular` points.
pub fn integrate_nu<F>(g: F, alpha: f64, radial_nodes: usize, angular: usize) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    DiscRule::new(alpha, radial_nodes, angular)?.try_integrate(g)
}

/// Doubling loop for non-polynomial integrands on the disc; both node counts double.
pub fn integrate_nu_adaptive<F>(mut g: F, alpha: f64, scale: f64, rel_tol: f64) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut radial = OPAQUE_START_NODES / 2;
    let mut angular = OPAQUE_ANGULAR_NODES;
    let mut prev = integrate_nu(&mut g, alpha, radial, angular)?;
    loop {
        radial *= 2;
        angular *= 2;
        if radial > OPAQUE_MAX_NODES / 4 {
            return Err(Error::QuadratureNonConvergence {
                nodes: radial / 2,
                change: f64::NAN,
            });
        }
        let cur = integrate_nu(&mut g, alpha, radial, angular)?;
        let change = (cur - prev).norm();
        if change <= rel_tol * cur.norm().max(scale) {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// One row of a delta-convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaProbeRow {
    pub parameter: f64,
    pub integral: Complex64,
    /// `|∫ g − g(0)|`.
    pub error: f64,
}

/// Measure family probed for concentration at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureFamily {
    /// `τ_λ` on `[-1, 1]`.
    Tau,
    /// `ν_α` on the closed disc.
    Nu,
}

/// Integrates `g` against `τ_λ` for each `λ` and reports the distance to `g(0)`.
pub fn delta_probe_tau<F>(mut g: F, lambdas: &[f64], nodes: usize) -> Result<Vec<DeltaProbeRow>>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let at_zero = g(0.0)?;
    lambdas
        .iter()
        .map(|&lambda| {
            let integral = integrate_tau(&mut g, lambda, nodes)?;
            Ok(DeltaProbeRow {
                parameter: lambda,
                integral,
                error: (integral - at_zero).norm(),
            })
        })
        .collect()
}

/// Integrates `g` against `ν_α` for each `α` and reports the distance to `g(0)`.
pub fn delta_probe_nu<F>(mut g: F, alphas: &[f64], radial_nodes: usize, angular: usize) -> Result<Vec<DeltaProbeRow>>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let at_zero = g(Complex64::new(0.0, 0.0))?;
    alphas
        .iter()
        .map(|&alpha| {
            let integral = integrate_nu(&mut g, alpha, radial_nodes, angular)?;
            Ok(DeltaProbeRow {
                parameter: alpha,
                integral,
                error: (integral - at_zero).norm(),
            })
        })
        .collect()
}

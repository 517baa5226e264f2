//! Schoenberg calculus on the real spheres `𝕊^d` with a group factor.
//!
//! A kernel `f: [-1,1] × L → ℂ` in `𝒫(𝕊^d, L)` expands as
//! `f(x,u) = Σ_n φ_{n,d}(u) c_n(d,x)` with coefficient functions
//!
//! ```text
//! φ_{n,d}(u) = N_n(d) ∫ f(x,u) c_n(d,x) dτ_{d/2−1}(x),
//! ```
//!
//! the `τ`-form of the surface integral (the ratio `σ_{d−1}/σ_d` is
//! `1/B(d/2, 1/2)`, the normalizer of `τ_{d/2−1}`). Members of `𝒫(𝕊^∞, L)` are
//! power series `Σ φ_n(u) xⁿ`, and `φ_{n,d} → φ_n` as `d → ∞`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::coefficients::{CoefficientTable, GroupFunction};
use crate::error::{Error, Result};
use crate::polynomial::{gegenbauer_monomial, to_f64};
use crate::quadrature::{integrate_tau, integrate_tau_adaptive, OPAQUE_REL_TOL};
use crate::specfun::{
    gegenbauer_normalized_all, gegenbauer_normalized_derivative, harmonic_dim_real, pochhammer, RealDim,
};

/// Extra Gauss nodes beyond the integrand degree for series models.
pub const SERIES_EXTRA_NODES: usize = 8;
/// Tail mass at which an opaque expansion is truncated.
pub const TAIL_TOL: f64 = 1e-10;
/// Step cascade for the Richardson-extrapolated central differences at 0.
pub const RICHARDSON_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

pub type RealEvaluator = Arc<dyn Fn(f64, usize) -> Complex64 + Send + Sync>;

/// A kernel given only through an evaluator `(x, u) ↦ f(x, u)`.
#[derive(Clone)]
pub struct OpaqueRealKernel {
    eval: RealEvaluator,
    group_order: usize,
    /// Highest derivative order at 0 the caller vouches for.
    smoothness: usize,
}

impl fmt::Debug for OpaqueRealKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OpaqueRealKernel")
            .field("group_order", &self.group_order)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum RealKernelModel {
    /// `Σ φ_{n,d}(u) c_n(d, x)` at a fixed level `d`.
    Gegenbauer {
        dim: RealDim,
        coeffs: CoefficientTable<usize>,
    },
    /// `Σ φ_n(u) xⁿ`.
    Monomial {
        coeffs: CoefficientTable<usize>,
    },
    Opaque(OpaqueRealKernel),
}

impl RealKernelModel {
    pub fn gegenbauer(dim: RealDim, coeffs: CoefficientTable<usize>) -> Self {
        Self::Gegenbauer { dim, coeffs }
    }

    pub fn monomial(coeffs: CoefficientTable<usize>) -> Self {
        Self::Monomial { coeffs }
    }

    pub fn opaque<F>(group_order: usize, smoothness: usize, eval: F) -> Self
    where
        F: Fn(f64, usize) -> Complex64 + Send + Sync + 'static,
    {
        Self::Opaque(OpaqueRealKernel {
            eval: Arc::new(eval),
            group_order,
            smoothness,
        })
    }

    pub fn group_order(&self) -> usize {
        match self {
            Self::Gegenbauer { coeffs, .. } | Self::Monomial { coeffs } => coeffs.group_order(),
            Self::Opaque(k) => k.group_order,
        }
    }

    /// Polynomial degree of a series model.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Self::Gegenbauer { coeffs, .. } | Self::Monomial { coeffs } => {
                Some(coeffs.indices().next_back().copied().unwrap_or(0))
            }
            Self::Opaque(_) => None,
        }
    }

    fn check_element(&self, u: usize) -> Result<()> {
        if u >= self.group_order() {
            return Err(Error::InvalidInput(format!(
                "group element {u} out of range for order {}",
                self.group_order()
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, x: f64, u: usize) -> Result<Complex64> {
        self.check_element(u)?;
        let value = match self {
            Self::Gegenbauer { dim, coeffs } => {
                let c = gegenbauer_normalized_all(*dim, self.degree().unwrap_or(0), x)?;
                coeffs.iter().map(|(&n, phi)| phi.at(u) * c[n]).sum()
            }
            Self::Monomial { coeffs } => coeffs.iter().map(|(&n, phi)| phi.at(u) * x.powi(n as i32)).sum(),
            Self::Opaque(k) => (k.eval)(x, u),
        };
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite(format!("f({x}, {u}) = {value}")));
        }
        Ok(value)
    }

    /// `∂f/∂x`, exact for series models.
    pub fn derivative(&self, x: f64, u: usize) -> Result<Complex64> {
        self.check_element(u)?;
        match self {
            Self::Gegenbauer { dim, coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (&n, phi) in coeffs.iter() {
                    acc += phi.at(u) * gegenbauer_normalized_derivative(*dim, n, x)?;
                }
                Ok(acc)
            }
            Self::Monomial { coeffs } => Ok(coeffs
                .iter()
                .filter(|(&n, _)| n > 0)
                .map(|(&n, phi)| phi.at(u) * (n as f64 * x.powi(n as i32 - 1)))
                .sum()),
            Self::Opaque(_) => Err(Error::InvalidInput("exact derivative needs a series model".into())),
        }
    }

    /// Power-series coefficients of a series model.
    pub fn to_monomial(&self) -> Result<CoefficientTable<usize>> {
        match self {
            Self::Gegenbauer { dim, coeffs } => Ok(gegenbauer_to_monomial(coeffs, *dim)),
            Self::Monomial { coeffs } => Ok(coeffs.clone()),
            Self::Opaque(_) => Err(Error::InvalidInput("basis change needs a series model".into())),
        }
    }

    /// Coefficients at level `d` of a series model, by exact-degree quadrature.
    pub fn to_gegenbauer(&self, d: RealDim) -> Result<CoefficientTable<usize>> {
        if let Self::Gegenbauer { dim, coeffs } = self {
            if *dim == d {
                return Ok(coeffs.clone());
            }
        }
        let degree = self
            .degree()
            .ok_or_else(|| Error::InvalidInput("basis change needs a series model".into()))?;
        extract_table_real(self, d, degree)
    }
}

fn dim_factor(d: RealDim, n: usize) -> f64 {
    harmonic_dim_real(d, n) as f64
}

/// `φ_{n,d}(u) = N_n(d) ∫ f(x,u) c_n(d,x) dτ_{d/2−1}(x)`.
///
/// Series models are integrated exactly with `deg f + n + 8` nodes; opaque
/// models use a doubling rule until the value is stable to `1e−12` relative to
/// `max(|φ|, |f(1, e_L)|)`.
pub fn extract_coefficient_real(f: &RealKernelModel, n: usize, d: RealDim, u: usize) -> Result<Complex64> {
    f.check_element(u)?;
    let lambda = d.weight_exponent();
    let integrand = |x: f64| -> Result<Complex64> {
        let c = gegenbauer_normalized_all(d, n, x)?;
        Ok(f.evaluate(x, u)? * c[n])
    };
    let integral = match f.degree() {
        Some(deg) => integrate_tau(integrand, lambda, deg + n + SERIES_EXTRA_NODES)?,
        None => {
            let scale = f.evaluate(1.0, 0)?.norm();
            integrate_tau_adaptive(integrand, lambda, scale, OPAQUE_REL_TOL)?
        }
    };
    Ok(integral * dim_factor(d, n))
}

/// The same coefficient through `n` integrations by parts:
/// `φ_{n,d}(u) = N_n(d)/(2ⁿ (d/2)_n) ∫ (1−x²)ⁿ ∂ⁿf(x,u)/∂xⁿ dτ_{d/2−1}(x)`.
///
/// Only series models qualify, since `∂ⁿf` is taken exactly.
pub fn extract_coefficient_real_by_parts(f: &RealKernelModel, n: usize, d: RealDim, u: usize) -> Result<Complex64> {
    f.check_element(u)?;
    let mono = f.to_monomial()?;
    let deg = f.degree().unwrap_or(0);
    let nth: Vec<(usize, Complex64)> = mono
        .iter()
        .filter(|(&k, _)| k >= n)
        .map(|(&k, phi)| {
            let falling: f64 = (0..n).map(|i| (k - i) as f64).product();
            (k - n, phi.at(u) * falling)
        })
        .collect();
    let integrand = |x: f64| -> Result<Complex64> {
        let dn: Complex64 = nth.iter().map(|&(p, c)| c * x.powi(p as i32)).sum();
        Ok(dn * (1.0 - x * x).powi(n as i32))
    };
    let integral = integrate_tau(integrand, d.weight_exponent(), deg + n + SERIES_EXTRA_NODES)?;
    let prefactor = dim_factor(d, n) / (2f64.powi(n as i32) * pochhammer(d.get() as f64 / 2.0, n));
    Ok(integral * prefactor)
}

/// All coefficient functions `φ_{0,d}, …, φ_{max_n,d}`.
pub fn extract_table_real(f: &RealKernelModel, d: RealDim, max_n: usize) -> Result<CoefficientTable<usize>> {
    let order = f.group_order();
    let mut table = CoefficientTable::new(order);
    for n in 0..=max_n {
        let values = (0..order)
            .map(|u| extract_coefficient_real(f, n, d, u))
            .collect::<Result<Vec<_>>>()?;
        table.insert(n, GroupFunction::new(values))?;
    }
    Ok(table)
}

/// Expands an opaque kernel at level `d`, stopping once the remaining mass
/// `f(1, e_L) − Σ_{n≤N} φ_{n,d}(e_L)` drops below [`TAIL_TOL`].
///
/// The stopping rule relies on `Σ_n φ_{n,d}(e_L) = f(1, e_L)`, valid for
/// positive definite kernels.
pub fn expand_real(f: &RealKernelModel, d: RealDim, max_n: usize) -> Result<(CoefficientTable<usize>, f64)> {
    let total = f.evaluate(1.0, 0)?.re;
    let order = f.group_order();
    let mut table = CoefficientTable::new(order);
    let mut tail = total;
    for n in 0..=max_n {
        let values = (0..order)
            .map(|u| extract_coefficient_real(f, n, d, u))
            .collect::<Result<Vec<_>>>()?;
        tail -= values[0].re;
        table.insert(n, GroupFunction::new(values))?;
        if tail.abs() < TAIL_TOL {
            return Ok((table, tail.abs()));
        }
    }
    Err(Error::QuadratureNonConvergence {
        nodes: max_n,
        change: tail.abs(),
    })
}

/// Value of a truncated series and the bound `Σ_{n>N} |φ_{n,d}(e_L)|` on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `Σ_{n ≤ N} φ_{n,d}(u) c_n(d,x)`; `truncation = None` sums every entry.
pub fn evaluate_series_real(
    coeffs: &CoefficientTable<usize>,
    d: RealDim,
    x: f64,
    u: usize,
    truncation: Option<usize>,
) -> Result<SeriesValue> {
    if u >= coeffs.group_order() {
        return Err(Error::InvalidInput(format!("group element {u} out of range")));
    }
    let top = coeffs.indices().next_back().copied().unwrap_or(0);
    let cut = truncation.unwrap_or(top).min(top);
    let c = gegenbauer_normalized_all(d, cut, x)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail_bound = 0.0;
    for (&n, phi) in coeffs.iter() {
        if n <= cut {
            value += phi.at(u) * c[n];
        } else {
            tail_bound += phi.at_identity().norm();
        }
    }
    Ok(SeriesValue { value, tail_bound })
}

/// Rewrites `Σ φ_{n,d} c_n(d,·)` as a power series, using the exact rational
/// monomial expansion of each `c_n(d,·)`.
pub fn gegenbauer_to_monomial(coeffs: &CoefficientTable<usize>, d: RealDim) -> CoefficientTable<usize> {
    let mut out = CoefficientTable::new(coeffs.group_order());
    for (&n, phi) in coeffs.iter() {
        for (p, c) in gegenbauer_monomial(d, n).iter().enumerate() {
            let c = to_f64(c);
            if c != 0.0 {
                out.add(p, &phi.scale(Complex64::new(c, 0.0)))
                    .expect("same group order");
            }
        }
    }
    out
}

/// Inverse of [`gegenbauer_to_monomial`].
pub fn monomial_to_gegenbauer(coeffs: &CoefficientTable<usize>, d: RealDim) -> Result<CoefficientTable<usize>> {
    RealKernelModel::monomial(coeffs.clone()).to_gegenbauer(d)
}

/// `φ_n(u) = (1/n!) ∂ⁿf(0,u)/∂xⁿ`.
///
/// Exact for series models. Opaque models use central differences over the
/// step cascade [`RICHARDSON_STEPS`] with two Richardson levels, and need
/// `n` within their declared smoothness.
pub fn monomial_coefficients_real(f: &RealKernelModel, n: usize, u: usize) -> Result<Complex64> {
    f.check_element(u)?;
    match f {
        RealKernelModel::Opaque(k) => {
            if n > k.smoothness {
                return Err(Error::SmoothnessCapExceeded {
                    requested: n,
                    cap: k.smoothness,
                });
            }
            let diffs = RICHARDSON_STEPS
                .iter()
                .map(|&h| central_difference(f, n, h, u))
                .collect::<Result<Vec<_>>>()?;
            let r1a = (diffs[1] * 4.0 - diffs[0]) / 3.0;
            let r1b = (diffs[2] * 4.0 - diffs[1]) / 3.0;
            let r2 = (r1b * 16.0 - r1a) / 15.0;
            let factorial: f64 = (1..=n).map(|k| k as f64).product();
            Ok(r2 / factorial)
        }
        _ => Ok(f.to_monomial()?.value(&n, u)),
    }
}

/// `h^{−n} Σ_k (−1)^k binom(n,k) f((n/2 − k)h)`.
fn central_difference(f: &RealKernelModel, n: usize, h: f64, u: usize) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    for k in 0..=n {
        if k > 0 {
            binom = binom * (n - k + 1) as f64 / k as f64;
        }
        let x = (n as f64 / 2.0 - k as f64) * h;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += f.evaluate(x, u)? * (sign * binom);
    }
    Ok(acc / h.powi(n as i32))
}

/// The two kernels `f₁, f₂ ∈ 𝒫(𝕊^d, L)` with `(1−x²) ∂f/∂x = f₁ − f₂` for
/// `f ∈ 𝒫(𝕊^{d+2}, L)`, both returned as Gegenbauer series at level `d`.
///
/// `f₁` is built from the level-`d` coefficients of `f`, `f₂` from its
/// level-`(d+2)` coefficients.
pub fn derivative_split(f: &RealKernelModel, d: RealDim) -> Result<(RealKernelModel, RealKernelModel)> {
    if matches!(f, RealKernelModel::Opaque(_)) {
        return Err(Error::InvalidInput("derivative split needs a series model".into()));
    }
    let at_d = f.to_gegenbauer(d)?;
    let at_d2 = f.to_gegenbauer(d.raised(2))?;
    let order = f.group_order();
    let dd = d.get() as f64;

    let mut f1 = CoefficientTable::new(order);
    for (&k, phi) in at_d.iter() {
        if k == 0 {
            continue;
        }
        let n = (k - 1) as f64;
        let weight = if d.get() == 1 {
            if k == 1 {
                0.5
            } else {
                1.0
            }
        } else {
            dd * (2.0 * n + dd - 1.0) * (n + 1.0) / ((2.0 * n + dd + 1.0) * (n + dd - 1.0))
        };
        f1.add(k - 1, &phi.scale(Complex64::new(weight, 0.0)))?;
    }

    let mut f2 = CoefficientTable::new(order);
    for (&k, phi) in at_d2.iter() {
        let n = k + 1;
        if n < 2 {
            continue;
        }
        let nf = n as f64;
        // at d = 1 this is the separate formula (n−1)/n
        let weight = dd * (nf - 1.0) / (nf + dd - 1.0);
        f2.add(n, &phi.scale(Complex64::new(weight, 0.0)))?;
    }

    Ok((RealKernelModel::gegenbauer(d, f1), RealKernelModel::gegenbauer(d, f2)))
}

/// Largest `|(1−x²)∂f/∂x − (f₁ − f₂)|` over `xs` and all group elements.
pub fn derivative_split_defect(
    f: &RealKernelModel,
    f1: &RealKernelModel,
    f2: &RealKernelModel,
    xs: &[f64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in xs {
        for u in 0..f.group_order() {
            let lhs = f.derivative(x, u)? * (1.0 - x * x);
            let rhs = f1.evaluate(x, u)? - f2.evaluate(x, u)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEntry {
    pub element: usize,
    /// Coefficient at the finite level.
    pub coefficient: Complex64,
    /// The limiting power-series coefficient.
    pub limit: Complex64,
    pub error: f64,
}

/// One dimension of a limit study. `max_error` is the maximum over the
/// studied group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub dim: u32,
    pub entries: Vec<LimitEntry>,
    pub max_error: f64,
}

/// Tracks `φ_{n,d}(u)` against `φ_n(u)` along `dims`.
pub fn limit_study_real(f: &RealKernelModel, n: usize, dims: &[RealDim], elements: &[usize]) -> Result<Vec<LimitRow>> {
    let limits = elements
        .iter()
        .map(|&u| monomial_coefficients_real(f, n, u))
        .collect::<Result<Vec<_>>>()?;
    dims.iter()
        .map(|&d| {
            let entries = elements
                .iter()
                .zip(&limits)
                .map(|(&u, &limit)| {
                    let coefficient = extract_coefficient_real(f, n, d, u)?;
                    Ok(LimitEntry {
                        element: u,
                        coefficient,
                        limit,
                        error: (coefficient - limit).norm(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let max_error = entries.iter().map(|e| e.error).fold(0.0, f64::max);
            Ok(LimitRow {
                dim: d.get(),
                entries,
                max_error,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rd(d: u32) -> RealDim {
        RealDim::new(d).unwrap()
    }

    fn x_squared() -> RealKernelModel {
        RealKernelModel::monomial(CoefficientTable::scalar([(2, 1.0)]))
    }

    #[test]
    fn extraction_of_x_squared() {
        for d in 1..=20 {
            let dim = rd(d);
            let df = d as f64;
            let f = x_squared();
            let c0 = extract_coefficient_real(&f, 0, dim, 0).unwrap();
            let c1 = extract_coefficient_real(&f, 1, dim, 0).unwrap();
            let c2 = extract_coefficient_real(&f, 2, dim, 0).unwrap();
            assert!((c0.re - 1.0 / (df + 1.0)).abs() < 1e-13);
            assert!(c1.norm() < 1e-14);
            assert!((c2.re - df / (df + 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn extraction_of_single_polynomial() {
        let g = GroupFunction::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.25, 0.5)]);
        for d in [1, 2, 5] {
            let dim = rd(d);
            let mut t = CoefficientTable::new(2);
            t.insert(3, g.clone()).unwrap();
            let f = RealKernelModel::gegenbauer(dim, t);
            for n in 0..6 {
                for u in 0..2 {
                    let v = extract_coefficient_real(&f, n, dim, u).unwrap();
                    let expect = if n == 3 { g.at(u) } else { Complex64::new(0.0, 0.0) };
                    assert!((v - expect).norm() < 1e-12, "d={d} n={n} u={u}");
                }
            }
        }
    }

    #[test]
    fn extraction_of_constant() {
        let f = RealKernelModel::monomial(CoefficientTable::scalar([(0, 1.0)]));
        for n in 0..4 {
            let v = extract_coefficient_real(&f, n, rd(3), 0).unwrap();
            assert!((v.re - if n == 0 { 1.0 } else { 0.0 }).abs() < 1e-14);
        }
    }

    #[test]
    fn by_parts_agrees_with_direct() {
        let mut t = CoefficientTable::new(1);
        for (n, v) in [(0, 0.3), (1, -0.2), (3, 0.7), (5, 0.1)] {
            t.insert(n, GroupFunction::from_real(&[v])).unwrap();
        }
        let f = RealKernelModel::monomial(t);
        for d in [1, 2, 3, 8] {
            for n in 0..6 {
                let a = extract_coefficient_real(&f, n, rd(d), 0).unwrap();
                let b = extract_coefficient_real_by_parts(&f, n, rd(d), 0).unwrap();
                assert!((a - b).norm() < 1e-12, "d={d} n={n}");
            }
        }
    }

    #[test]
    fn opaque_extraction_matches_series() {
        let f = RealKernelModel::opaque(1, 6, |x, _| Complex64::new(x.exp(), 0.0));
        // e^x at d = 3: φ_{0,3} = ∫ e^x dτ_{1/2}
        let v = extract_coefficient_real(&f, 0, rd(2), 0).unwrap();
        assert!((v.re - 1f64.sinh()).abs() < 1e-12);
        let m = monomial_coefficients_real(&f, 3, 0).unwrap();
        assert!((m.re - 1.0 / 6.0).abs() < 1e-8);
        assert!(matches!(
            monomial_coefficients_real(&f, 7, 0),
            Err(Error::SmoothnessCapExceeded { requested: 7, cap: 6 })
        ));
    }

    #[test]
    fn opaque_expansion_stops_on_tail() {
        let f = RealKernelModel::opaque(1, 8, |x, _| Complex64::new((x - 1.0).exp(), 0.0));
        let (table, tail) = expand_real(&f, rd(3), 40).unwrap();
        assert!(tail < TAIL_TOL);
        assert!((table.mass_at_identity() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn series_evaluation() {
        for d in [1, 2, 7] {
            let dim = rd(d);
            let df = d as f64;
            let one = CoefficientTable::scalar([(0, 1.0)]);
            let x = CoefficientTable::scalar([(1, 1.0)]);
            let sq = CoefficientTable::scalar([(0, 1.0 / (df + 1.0)), (2, df / (df + 1.0))]);
            for &t in &[-1.0, -0.3, 0.5, 1.0] {
                assert!((evaluate_series_real(&one, dim, t, 0, None).unwrap().value.re - 1.0).abs() < 1e-15);
                assert!((evaluate_series_real(&x, dim, t, 0, None).unwrap().value.re - t).abs() < 1e-15);
                assert!((evaluate_series_real(&sq, dim, t, 0, None).unwrap().value.re - t * t).abs() < 1e-14);
            }
            let truncated = evaluate_series_real(&sq, dim, 0.2, 0, Some(1)).unwrap();
            assert!((truncated.tail_bound - df / (df + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn basis_change_examples() {
        let phi = GroupFunction::from_real(&[2.0]);
        for d in 1..8 {
            let dim = rd(d);
            let df = d as f64;
            let t1 = CoefficientTable::from_entries(1, [(1, phi.clone())]).unwrap();
            assert!(gegenbauer_to_monomial(&t1, dim).max_abs_diff(&t1) < 1e-15);
            let t2 = CoefficientTable::from_entries(1, [(2, phi.clone())]).unwrap();
            let m = gegenbauer_to_monomial(&t2, dim);
            assert!((m.value(&0, 0).re + 2.0 / df).abs() < 1e-15);
            assert!((m.value(&2, 0).re - 2.0 * (df + 1.0) / df).abs() < 1e-14);
            let back = monomial_to_gegenbauer(&m, dim).unwrap();
            assert!(back.max_abs_diff(&t2) < 1e-13);
        }
    }

    #[test]
    fn monomial_coefficients_of_series() {
        let f = x_squared();
        assert_eq!(monomial_coefficients_real(&f, 2, 0).unwrap().re, 1.0);
        assert_eq!(monomial_coefficients_real(&f, 1, 0).unwrap().re, 0.0);
        let chi = GroupFunction::from_real(&[1.0, -1.0]);
        let fx = RealKernelModel::monomial(CoefficientTable::from_entries(2, [(1, chi.clone())]).unwrap());
        for u in 0..2 {
            assert_eq!(monomial_coefficients_real(&fx, 1, u).unwrap(), chi.at(u));
        }
        let d = rd(4);
        let g = RealKernelModel::gegenbauer(d, CoefficientTable::scalar([(2, 1.0)]));
        assert!((monomial_coefficients_real(&g, 0, 0).unwrap().re + 0.25).abs() < 1e-15);
        assert!((monomial_coefficients_real(&g, 2, 0).unwrap().re - 1.25).abs() < 1e-15);
    }

    #[test]
    fn derivative_split_of_x() {
        for d in 1..8 {
            let dim = rd(d);
            let df = d as f64;
            let f = RealKernelModel::monomial(CoefficientTable::scalar([(1, 1.0)]));
            let (f1, f2) = derivative_split(&f, dim).unwrap();
            if d >= 2 {
                assert!((f1.evaluate(0.3, 0).unwrap().re - df / (df + 1.0)).abs() < 1e-14);
                let c2 = (df + 1.0) * 0.09 - 1.0;
                assert!((f2.evaluate(0.3, 0).unwrap().re - c2 / (df + 1.0)).abs() < 1e-14);
            }
            let xs: Vec<f64> = (0..41).map(|i| -1.0 + 0.05 * i as f64).collect();
            assert!(derivative_split_defect(&f, &f1, &f2, &xs).unwrap() < 1e-13);
            assert!(f1.evaluate(1.0, 0).unwrap().re <= df * f.evaluate(1.0, 0).unwrap().re);
        }
    }

    #[test]
    fn derivative_split_of_constant_is_empty() {
        let f = RealKernelModel::monomial(CoefficientTable::scalar([(0, 3.0)]));
        let (f1, f2) = derivative_split(&f, rd(3)).unwrap();
        assert_eq!(f1.evaluate(0.4, 0).unwrap().norm(), 0.0);
        assert!(f2.evaluate(0.4, 0).unwrap().norm() < 1e-15);
        let opaque = RealKernelModel::opaque(1, 2, |_, _| Complex64::new(1.0, 0.0));
        assert!(derivative_split(&opaque, rd(2)).is_err());
    }

    #[test]
    fn limit_study_of_x_squared() {
        let dims: Vec<RealDim> = (1..=20).map(rd).collect();
        let rows = limit_study_real(&x_squared(), 2, &dims, &[0]).unwrap();
        let mut prev = f64::INFINITY;
        for row in &rows {
            let expect = 1.0 / (row.dim as f64 + 1.0);
            assert!((row.max_error - expect).abs() < 1e-13);
            assert!(row.max_error < prev);
            prev = row.max_error;
        }
        let odd = limit_study_real(&x_squared(), 1, &dims, &[0]).unwrap();
        assert!(odd.iter().all(|r| r.max_error < 1e-14));
    }

    #[test]
    fn element_out_of_range() {
        assert!(extract_coefficient_real(&x_squared(), 0, rd(2), 1).is_err());
    }
}

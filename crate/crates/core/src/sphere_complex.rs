//! Schoenberg calculus on the complex spheres `Ω_{2q}` with a group factor.
//!
//! A kernel `f: 𝔻̄ × L → ℂ` in `𝒫(Ω_{2q}, L)` expands in disc polynomials,
//! `f(z,u) = Σ_{m,n} φ^{q−2}_{m,n}(u) R^{q−2}_{m,n}(z)`, with
//!
//! ```text
//! φ^{q−2}_{m,n}(u) = N(q;m,n) ∫ f(z,u) conj(R^{q−2}_{m,n}(z)) dν_{q−2}(z).
//! ```
//!
//! Members of `𝒫(Ω_∞, L)` are double power series `Σ φ_{m,n}(u) z^m z̄^n`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::coefficients::{CoefficientTable, GroupFunction};
use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::polynomial::{disc_monomial, rational, to_f64};
use crate::quadrature::{integrate_nu, integrate_nu_adaptive, OPAQUE_ANGULAR_NODES, OPAQUE_REL_TOL};
use crate::specfun::{disc_polynomial, harmonic_dim_complex, ComplexDim, DOMAIN_TOL};
use crate::sphere_real::{LimitEntry, LimitRow, SeriesValue, SERIES_EXTRA_NODES};

/// Index pair `(m, n)` of `z^m z̄^n` resp. `R_{m,n}`.
pub type DiscIndex = (usize, usize);

pub type ComplexEvaluator = Arc<dyn Fn(Complex64, usize) -> Complex64 + Send + Sync>;

/// Largest squared radius used when fitting opaque kernels near the origin.
pub const FIT_RADIUS_SQ: f64 = 0.25;
/// Number of radii in that fit.
pub const FIT_POINTS: usize = 12;

#[derive(Clone)]
pub struct OpaqueComplexKernel {
    eval: ComplexEvaluator,
    group_order: usize,
    /// Highest total derivative order `m + n` at 0 the caller vouches for.
    smoothness: usize,
}

impl fmt::Debug for OpaqueComplexKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OpaqueComplexKernel")
            .field("group_order", &self.group_order)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum ComplexKernelModel {
    /// `Σ φ^{q−2}_{m,n}(u) R^{q−2}_{m,n}(z)`.
    Disc {
        q: ComplexDim,
        coeffs: CoefficientTable<DiscIndex>,
    },
    /// `Σ φ_{m,n}(u) z^m z̄^n`.
    Monomial {
        coeffs: CoefficientTable<DiscIndex>,
    },
    Opaque(OpaqueComplexKernel),
}

impl ComplexKernelModel {
    pub fn disc(q: ComplexDim, coeffs: CoefficientTable<DiscIndex>) -> Self {
        Self::Disc { q, coeffs }
    }

    pub fn monomial(coeffs: CoefficientTable<DiscIndex>) -> Self {
        Self::Monomial { coeffs }
    }

    pub fn opaque<F>(group_order: usize, smoothness: usize, eval: F) -> Self
    where
        F: Fn(Complex64, usize) -> Complex64 + Send + Sync + 'static,
    {
        Self::Opaque(OpaqueComplexKernel {
            eval: Arc::new(eval),
            group_order,
            smoothness,
        })
    }

    pub fn group_order(&self) -> usize {
        match self {
            Self::Disc { coeffs, .. } | Self::Monomial { coeffs } => coeffs.group_order(),
            Self::Opaque(k) => k.group_order,
        }
    }

    fn series(&self) -> Option<&CoefficientTable<DiscIndex>> {
        match self {
            Self::Disc { coeffs, .. } | Self::Monomial { coeffs } => Some(coeffs),
            Self::Opaque(_) => None,
        }
    }

    /// Largest `m + n` of a series model.
    pub fn degree(&self) -> Option<usize> {
        self.series()
            .map(|c| c.indices().map(|&(m, n)| m + n).max().unwrap_or(0))
    }

    /// Largest `|m − n|` of a series model.
    pub fn max_frequency(&self) -> Option<usize> {
        self.series()
            .map(|c| c.indices().map(|&(m, n)| m.abs_diff(n)).max().unwrap_or(0))
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

    pub fn evaluate(&self, z: Complex64, u: usize) -> Result<Complex64> {
        self.check_element(u)?;
        let value = match self {
            Self::Disc { q, coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (&(m, n), phi) in coeffs.iter() {
                    acc += phi.at(u) * disc_polynomial(q.alpha(), m, n, z)?;
                }
                acc
            }
            Self::Monomial { coeffs } => {
                if z.norm() > 1.0 + DOMAIN_TOL {
                    return Err(Error::Domain(format!("z = {z} lies outside the closed unit disc")));
                }
                coeffs
                    .iter()
                    .map(|(&(m, n), phi)| phi.at(u) * z.powu(m as u32) * z.conj().powu(n as u32))
                    .sum()
            }
            Self::Opaque(k) => (k.eval)(z, u),
        };
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite(format!("f({z}, {u}) = {value}")));
        }
        Ok(value)
    }

    /// Double power series coefficients of a series model.
    pub fn to_monomial(&self) -> Result<CoefficientTable<DiscIndex>> {
        match self {
            Self::Disc { q, coeffs } => Ok(disc_to_monomial(coeffs, *q)),
            Self::Monomial { coeffs } => Ok(coeffs.clone()),
            Self::Opaque(_) => Err(Error::InvalidInput("basis change needs a series model".into())),
        }
    }

    /// Disc coefficients at level `q` of a series model.
    pub fn to_disc(&self, q: ComplexDim) -> Result<CoefficientTable<DiscIndex>> {
        if let Self::Disc { q: own, coeffs } = self {
            if *own == q {
                return Ok(coeffs.clone());
            }
        }
        let degree = self
            .degree()
            .ok_or_else(|| Error::InvalidInput("basis change needs a series model".into()))?;
        let mut table = CoefficientTable::new(self.group_order());
        for total in 0..=degree {
            for m in 0..=total {
                let values = (0..self.group_order())
                    .map(|u| extract_coefficient_complex(self, m, total - m, q, u))
                    .collect::<Result<Vec<_>>>()?;
                table.insert((m, total - m), GroupFunction::new(values))?;
            }
        }
        Ok(table.pruned(1e-14))
    }
}

fn node_counts(f: &ComplexKernelModel, m: usize, n: usize) -> Option<(usize, usize)> {
    let deg = f.degree()?;
    let freq = f.max_frequency()?;
    let radial = deg + m + n + SERIES_EXTRA_NODES;
    let angular = 2 * (freq + m.abs_diff(n)) + 5;
    Some((radial, angular))
}

/// `φ^{q−2}_{m,n}(u) = N(q;m,n) ∫ f(z,u) conj(R^{q−2}_{m,n}(z)) dν_{q−2}(z)`.
///
/// Series models use a product rule that is exact for the integrand; opaque
/// models double both node counts until the value settles.
pub fn extract_coefficient_complex(
    f: &ComplexKernelModel,
    m: usize,
    n: usize,
    q: ComplexDim,
    u: usize,
) -> Result<Complex64> {
    f.check_element(u)?;
    let alpha = q.alpha();
    let integrand =
        |z: Complex64| -> Result<Complex64> { Ok(f.evaluate(z, u)? * disc_polynomial(alpha, m, n, z)?.conj()) };
    let integral = match node_counts(f, m, n) {
        Some((radial, angular)) => integrate_nu(integrand, alpha, radial, angular)?,
        None => {
            let scale = f.evaluate(Complex64::new(1.0, 0.0), 0)?.norm();
            integrate_nu_adaptive(integrand, alpha, scale, OPAQUE_REL_TOL)?
        }
    };
    Ok(integral * harmonic_dim_complex(q, m, n) as f64)
}

/// The same coefficient after `m + n` integrations by parts:
/// `N(q;m,n) (q−2)!/(m+n+q−2)! ∫ ∂^{m+n}f/∂z̄ⁿ∂z^m (1−|z|²)^{m+n} dν_{q−2}`.
pub fn extract_coefficient_complex_by_parts(
    f: &ComplexKernelModel,
    m: usize,
    n: usize,
    q: ComplexDim,
    u: usize,
) -> Result<Complex64> {
    f.check_element(u)?;
    let mono = f.to_monomial()?;
    let falling = |k: usize, j: usize| -> f64 { (0..j).map(|i| (k - i) as f64).product() };
    let terms: Vec<(usize, usize, Complex64)> = mono
        .iter()
        .filter(|(&(a, b), _)| a >= m && b >= n)
        .map(|(&(a, b), phi)| (a - m, b - n, phi.at(u) * (falling(a, m) * falling(b, n))))
        .collect();
    let (radial, angular) = node_counts(f, m, n).expect("series model");
    let integrand = |z: Complex64| -> Result<Complex64> {
        let d: Complex64 = terms
            .iter()
            .map(|&(a, b, c)| c * z.powu(a as u32) * z.conj().powu(b as u32))
            .sum();
        Ok(d * (1.0 - z.norm_sqr()).powi((m + n) as i32))
    };
    let integral = integrate_nu(integrand, q.alpha(), radial + m + n, angular)?;
    // (q−2)!/(m+n+q−2)! = 1/((q−1)(q)…(m+n+q−2))
    let qq = q.get() as usize;
    let rising: f64 = (qq - 1..=m + n + qq - 2).map(|k| k as f64).product();
    Ok(integral * (harmonic_dim_complex(q, m, n) as f64 / rising))
}

/// All coefficients with `m + n ≤ max_total`.
pub fn extract_table_complex(
    f: &ComplexKernelModel,
    q: ComplexDim,
    max_total: usize,
) -> Result<CoefficientTable<DiscIndex>> {
    let order = f.group_order();
    let mut table = CoefficientTable::new(order);
    for total in 0..=max_total {
        for m in 0..=total {
            let values = (0..order)
                .map(|u| extract_coefficient_complex(f, m, total - m, q, u))
                .collect::<Result<Vec<_>>>()?;
            table.insert((m, total - m), GroupFunction::new(values))?;
        }
    }
    Ok(table)
}

/// `Σ φ^{q−2}_{m,n}(u) R^{q−2}_{m,n}(z)` over entries with `m + n ≤ truncation`,
/// with the tail bound `Σ |φ^{q−2}_{m,n}(e_L)|` over the rest.
pub fn evaluate_series_complex(
    coeffs: &CoefficientTable<DiscIndex>,
    q: ComplexDim,
    z: Complex64,
    u: usize,
    truncation: Option<usize>,
) -> Result<SeriesValue> {
    if u >= coeffs.group_order() {
        return Err(Error::InvalidInput(format!("group element {u} out of range")));
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail_bound = 0.0;
    for (&(m, n), phi) in coeffs.iter() {
        if truncation.is_none_or(|cut| m + n <= cut) {
            value += phi.at(u) * disc_polynomial(q.alpha(), m, n, z)?;
        } else {
            tail_bound += phi.at_identity().norm();
        }
    }
    Ok(SeriesValue { value, tail_bound })
}

/// Rewrites a disc series at level `q` as a double power series in `z, z̄`.
pub fn disc_to_monomial(coeffs: &CoefficientTable<DiscIndex>, q: ComplexDim) -> CoefficientTable<DiscIndex> {
    let alpha = rational(q.get() as i64 - 2);
    let mut out = CoefficientTable::new(coeffs.group_order());
    for (&(m, n), phi) in coeffs.iter() {
        for (idx, c) in disc_monomial(&alpha, m, n) {
            out.add(idx, &phi.scale(Complex64::new(to_f64(&c), 0.0)))
                .expect("same group order");
        }
    }
    out
}

/// Inverse of [`disc_to_monomial`].
pub fn monomial_to_disc(coeffs: &CoefficientTable<DiscIndex>, q: ComplexDim) -> Result<CoefficientTable<DiscIndex>> {
    ComplexKernelModel::monomial(coeffs.clone()).to_disc(q)
}

/// `φ_{m,n}(u) = (1/(m! n!)) ∂^{m+n}f(0,u)/∂z^m∂z̄ⁿ`.
///
/// Exact for series models. For opaque models the `e^{i(m−n)θ}` Fourier
/// coefficient of `f` is sampled on [`FIT_POINTS`] circles of squared radius
/// at most [`FIT_RADIUS_SQ`], divided by `r^{|m−n|}` and fitted by a
/// polynomial in `r²`, whose `min(m,n)`-th coefficient is returned.
pub fn monomial_coefficients_complex(f: &ComplexKernelModel, m: usize, n: usize, u: usize) -> Result<Complex64> {
    f.check_element(u)?;
    let ComplexKernelModel::Opaque(k) = f else {
        return Ok(f.to_monomial()?.value(&(m, n), u));
    };
    if m + n > k.smoothness {
        return Err(Error::SmoothnessCapExceeded {
            requested: m + n,
            cap: k.smoothness,
        });
    }
    let freq = m as i64 - n as i64;
    let shift = m.abs_diff(n) as i32;
    let angles = OPAQUE_ANGULAR_NODES;
    let ts: Vec<f64> = (0..FIT_POINTS)
        .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * (i as f64 + 0.5) / FIT_POINTS as f64).cos()))
        .collect();
    let mut rhs = DVector::<Complex64>::zeros(FIT_POINTS);
    for (i, &t) in ts.iter().enumerate() {
        let r = (t * FIT_RADIUS_SQ).sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..angles {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / angles as f64;
            let z = Complex64::from_polar(r, theta);
            acc += f.evaluate(z, u)? * Complex64::from_polar(1.0, -(freq as f64) * theta);
        }
        rhs[i] = acc / (angles as f64 * r.powi(shift));
    }
    let vandermonde =
        DMatrix::<Complex64>::from_fn(FIT_POINTS, FIT_POINTS, |i, j| Complex64::new(ts[i].powi(j as i32), 0.0));
    let fit = vandermonde
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NonFinite("singular fit near the origin".into()))?;
    let j = m.min(n);
    Ok(fit[j] / FIT_RADIUS_SQ.powi(j as i32))
}

/// Coefficients at level `q + 1` from those at level `q`:
///
/// ```text
/// φ^{q−1}_{m,n} = (m+q−1)(n+q−1)/((q−1)(m+n+q−1)) φ^{q−2}_{m,n}
///               − (m+1)(n+1)/((q−1)(m+n+q+1)) φ^{q−2}_{m+1,n+1}.
/// ```
pub fn dimension_walk(coeffs: &CoefficientTable<DiscIndex>, q: ComplexDim) -> CoefficientTable<DiscIndex> {
    let qf = q.get() as f64;
    let mut support: BTreeSet<DiscIndex> = coeffs.indices().copied().collect();
    support.extend(
        coeffs
            .indices()
            .filter(|&&(m, n)| m > 0 && n > 0)
            .map(|&(m, n)| (m - 1, n - 1)),
    );
    let mut out = CoefficientTable::new(coeffs.group_order());
    for (m, n) in support {
        let (mf, nf) = (m as f64, n as f64);
        let a = (mf + qf - 1.0) * (nf + qf - 1.0) / ((qf - 1.0) * (mf + nf + qf - 1.0));
        let b = (mf + 1.0) * (nf + 1.0) / ((qf - 1.0) * (mf + nf + qf + 1.0));
        let values = (0..coeffs.group_order())
            .map(|u| coeffs.value(&(m, n), u) * a - coeffs.value(&(m + 1, n + 1), u) * b)
            .collect();
        out.insert((m, n), GroupFunction::new(values))
            .expect("same group order");
    }
    out
}

/// A failed instance of the coefficient inequality at `e_L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub index: DiscIndex,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks `φ^{q−2}_{m,n}(e_L) ≥ (m+1)(n+1)(m+n+q−1)/((m+q−1)(n+q−1)(m+n+q+1)) φ^{q−2}_{m+1,n+1}(e_L)`,
/// which holds for kernels in `𝒫(Ω_{2q+2}, L)`.
pub fn coefficient_inequality_check(coeffs: &CoefficientTable<DiscIndex>, q: ComplexDim, tol: f64) -> Vec<Violation> {
    let qf = q.get() as f64;
    let mut support: BTreeSet<DiscIndex> = coeffs.indices().copied().collect();
    support.extend(
        coeffs
            .indices()
            .filter(|&&(m, n)| m > 0 && n > 0)
            .map(|&(m, n)| (m - 1, n - 1)),
    );
    support
        .into_iter()
        .filter_map(|(m, n)| {
            let (mf, nf) = (m as f64, n as f64);
            let factor = (mf + 1.0) * (nf + 1.0) * (mf + nf + qf - 1.0)
                / ((mf + qf - 1.0) * (nf + qf - 1.0) * (mf + nf + qf + 1.0));
            let lhs = coeffs.value(&(m, n), 0).re;
            let rhs = factor * coeffs.value(&(m + 1, n + 1), 0).re;
            (lhs < rhs - tol).then_some(Violation {
                index: (m, n),
                lhs,
                rhs,
            })
        })
        .collect()
}

/// `F(z) = Σ_{j,k} f(z, u_j⁻¹u_k) c_j conj(c_k)`, a kernel over the trivial group.
///
/// Series models stay series models of the same kind.
pub fn group_average(
    f: &ComplexKernelModel,
    us: &[usize],
    cs: &[Complex64],
    group: &GroupSpec,
) -> Result<ComplexKernelModel> {
    if us.is_empty() || us.len() != cs.len() {
        return Err(Error::InvalidInput(
            "group average needs equally many elements and scalars, at least one".into(),
        ));
    }
    if f.group_order() != group.order() {
        return Err(Error::InvalidInput(format!(
            "kernel has group order {}, group has {}",
            f.group_order(),
            group.order()
        )));
    }
    if let Some(&bad) = us.iter().find(|&&u| u >= group.order()) {
        return Err(Error::InvalidInput(format!("group element {bad} out of range")));
    }
    let pairs: Vec<(usize, Complex64)> = us
        .iter()
        .zip(cs)
        .flat_map(|(&uj, &cj)| {
            us.iter()
                .zip(cs)
                .map(move |(&uk, &ck)| (group.left_quotient(uj, uk), cj * ck.conj()))
        })
        .collect();
    let collapse = |table: &CoefficientTable<DiscIndex>| -> CoefficientTable<DiscIndex> {
        let mut out = CoefficientTable::new(1);
        for (&idx, phi) in table.iter() {
            let v: Complex64 = pairs.iter().map(|&(w, c)| phi.at(w) * c).sum();
            out.insert(idx, GroupFunction::new(vec![v])).expect("order 1");
        }
        out
    };
    Ok(match f {
        ComplexKernelModel::Disc { q, coeffs } => ComplexKernelModel::disc(*q, collapse(coeffs)),
        ComplexKernelModel::Monomial { coeffs } => ComplexKernelModel::monomial(collapse(coeffs)),
        ComplexKernelModel::Opaque(k) => {
            let eval = Arc::clone(&k.eval);
            ComplexKernelModel::opaque(1, k.smoothness, move |z, _| {
                pairs.iter().map(|&(w, c)| eval(z, w) * c).sum()
            })
        }
    })
}

/// Result of the `c ∈ {1, −1, i}` recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recovery {
    pub value: Complex64,
    /// `a_{m,n}(u, c)` for `c = 1, −1, i`.
    pub a: [Complex64; 3],
}

/// Recovers `φ_{m,n}(u)` from the single-variable kernels `F_{u,c}` built on
/// `(e_L, u)` with scalars `(1, c)`:
/// `φ_{m,n}(u) = (1−i)/4 a(u,1) − (1+i)/4 a(u,−1) + i/2 a(u,i)`.
///
/// Each `a_{m,n}(u,c)` is a power-series coefficient of a kernel in
/// `𝒫(Ω_∞)` and must be nonnegative; a value below `−tol` is reported as a
/// positivity violation.
pub fn recover_group_coefficients(
    f: &ComplexKernelModel,
    group: &GroupSpec,
    u: usize,
    m: usize,
    n: usize,
    tol: f64,
) -> Result<Recovery> {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let mut a = [Complex64::new(0.0, 0.0); 3];
    for (slot, c) in a.iter_mut().zip([one, -one, i]) {
        let averaged = group_average(f, &[group.identity(), u], &[one, c], group)?;
        *slot = monomial_coefficients_complex(&averaged, m, n, 0)?;
        if slot.re < -tol {
            return Err(Error::PositivityViolation(format!(
                "a_{{{m},{n}}}({u}, {c}) = {} is negative",
                slot.re
            )));
        }
    }
    let value = (one - i) / 4.0 * a[0] - (one + i) / 4.0 * a[1] + i / 2.0 * a[2];
    Ok(Recovery { value, a })
}

/// Tracks `φ^{q−2}_{m,n}(u)` against `φ_{m,n}(u)` along `qs`.
pub fn limit_study_complex(
    f: &ComplexKernelModel,
    m: usize,
    n: usize,
    qs: &[ComplexDim],
    elements: &[usize],
) -> Result<Vec<LimitRow>> {
    let limits = elements
        .iter()
        .map(|&u| monomial_coefficients_complex(f, m, n, u))
        .collect::<Result<Vec<_>>>()?;
    qs.iter()
        .map(|&q| {
            let entries = elements
                .iter()
                .zip(&limits)
                .map(|(&u, &limit)| {
                    let coefficient = extract_coefficient_complex(f, m, n, q, u)?;
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
                dim: q.get(),
                entries,
                max_error,
            })
        })
        .collect()
}

/// `sup_{z ∈ grid} |R^α_{m,n}(z) − z^m z̄ⁿ|` for each `α`.
///
/// Reports one `(m, n)` at a time; nothing is claimed about uniformity in `(m, n)`.
pub fn disc_limit_diagnostic(m: usize, n: usize, alphas: &[f64], grid: &[Complex64]) -> Result<Vec<(f64, f64)>> {
    if let Some(z) = grid.iter().find(|z| z.norm() >= 1.0) {
        return Err(Error::Domain(format!("grid point {z} is not inside the open disc")));
    }
    alphas
        .iter()
        .map(|&alpha| {
            let mut sup = 0.0f64;
            for &z in grid {
                let mono = z.powu(m as u32) * z.conj().powu(n as u32);
                sup = sup.max((disc_polynomial(alpha, m, n, z)? - mono).norm());
            }
            Ok((alpha, sup))
        })
        .collect()
}

/// Largest `|conj f(z,u) − f(z̄, u⁻¹)|` over the samples.
pub fn conjugation_defect(f: &ComplexKernelModel, group: &GroupSpec, zs: &[Complex64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in zs {
        for u in 0..group.order() {
            worst = worst.max((f.evaluate(z, u)?.conj() - f.evaluate(z.conj(), group.inv(u))?).norm());
        }
    }
    Ok(worst)
}

//! Exact differentiation of weighted polynomials.
//!
//! A [`WeightedPolynomial`] stands for `q(x)(1−x²)^s` and a
//! [`WeightedBiPolynomial`] for `p(z,z̄)(1−zz̄)^s`. Both forms are closed under
//! differentiation, every derivative lowering the exponent by one, so the
//! number of factors `(1−x²)` surviving a chain of derivatives can be read
//! off the exponent. Coefficients are generic: [`BigRational`] gives exact
//! arithmetic, `f64` serves irrational exponents.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};
use crate::polynomial::{ratio, rational, to_f64};
use crate::specfun::{disc_polynomial, gegenbauer_normalized, ComplexDim, RealDim};

/// Default bound on the derivative order of the Rodrigues checks.
pub const DEFAULT_DEGREE_CAP: usize = 10;

pub trait Coefficient: Clone + Debug + PartialOrd + Num + FromPrimitive + ToPrimitive {}

impl<T> Coefficient for T where T: Clone + Debug + PartialOrd + Num + FromPrimitive + ToPrimitive {}

fn num<T: Coefficient>(k: usize) -> T {
    T::from_usize(k).expect("small integer is representable")
}

fn as_f64<T: Coefficient>(c: &T) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// `q(x)(1−x²)^s` with `q` stored densely in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPolynomial<T> {
    poly: Vec<T>,
    exponent: T,
}

impl<T: Coefficient> WeightedPolynomial<T> {
    pub fn new(poly: Vec<T>, exponent: T) -> Self {
        let mut w = Self { poly, exponent };
        w.trim();
        w
    }

    /// The bare weight `(1−x²)^s`.
    pub fn weight(exponent: T) -> Self {
        Self::new(vec![T::one()], exponent)
    }

    pub fn poly(&self) -> &[T] {
        &self.poly
    }

    pub fn exponent(&self) -> &T {
        &self.exponent
    }

    fn trim(&mut self) {
        while self.poly.last().is_some_and(|c| c.is_zero()) {
            self.poly.pop();
        }
    }

    /// `(q'(x)(1−x²) − 2sx·q(x))(1−x²)^{s−1}`.
    pub fn derivative(&self) -> Self {
        let len = self.poly.len() + 1;
        let mut out = vec![T::zero(); len];
        let two_s = self.exponent.clone() + self.exponent.clone();
        for (i, c) in self.poly.iter().enumerate() {
            if i > 0 {
                let d = c.clone() * num(i);
                out[i - 1] = out[i - 1].clone() + d.clone();
                out[i + 1] = out[i + 1].clone() - d;
            }
            out[i + 1] = out[i + 1].clone() - two_s.clone() * c.clone();
        }
        Self::new(out, self.exponent.clone() - T::one())
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |w, _| w.derivative())
    }

    pub fn scaled(&self, factor: &T) -> Self {
        Self::new(
            self.poly.iter().map(|c| c.clone() * factor.clone()).collect(),
            self.exponent.clone(),
        )
    }

    pub fn eval_poly(&self, x: f64) -> f64 {
        self.poly.iter().rev().fold(0.0, |acc, c| acc * x + as_f64(c))
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let s = as_f64(&self.exponent);
        let w = if s == 0.0 { 1.0 } else { (1.0 - x * x).powf(s) };
        self.eval_poly(x) * w
    }

    /// Whether the function vanishes at `x = ±1`.
    pub fn vanishes_on_boundary(&self) -> bool {
        self.poly.is_empty() || self.exponent > T::zero()
    }
}

/// `p(z, z̄)(1−zz̄)^s` with `p` keyed by `(a, b)` for `z^a z̄^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedBiPolynomial<T> {
    poly: BTreeMap<(usize, usize), T>,
    exponent: T,
}

impl<T: Coefficient> WeightedBiPolynomial<T> {
    pub fn new(poly: BTreeMap<(usize, usize), T>, exponent: T) -> Self {
        let poly = poly.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { poly, exponent }
    }

    pub fn weight(exponent: T) -> Self {
        Self::new(BTreeMap::from([((0, 0), T::one())]), exponent)
    }

    pub fn poly(&self) -> &BTreeMap<(usize, usize), T> {
        &self.poly
    }

    pub fn exponent(&self) -> &T {
        &self.exponent
    }

    fn accumulate(map: &mut BTreeMap<(usize, usize), T>, key: (usize, usize), value: T) {
        let slot = map.entry(key).or_insert_with(T::zero);
        *slot = slot.clone() + value;
    }

    /// `∂/∂z`: each term `c z^a z̄^b` contributes `a c z^{a−1} z̄^b − (a+s) c z^a z̄^{b+1}`.
    pub fn wirtinger_z(&self) -> Self {
        let mut out = BTreeMap::new();
        for (&(a, b), c) in &self.poly {
            if a > 0 {
                Self::accumulate(&mut out, (a - 1, b), c.clone() * num(a));
            }
            let f = num::<T>(a) + self.exponent.clone();
            Self::accumulate(&mut out, (a, b + 1), T::zero() - f * c.clone());
        }
        Self::new(out, self.exponent.clone() - T::one())
    }

    /// `∂/∂z̄`: each term `c z^a z̄^b` contributes `b c z^a z̄^{b−1} − (b+s) c z^{a+1} z̄^b`.
    pub fn wirtinger_zbar(&self) -> Self {
        let mut out = BTreeMap::new();
        for (&(a, b), c) in &self.poly {
            if b > 0 {
                Self::accumulate(&mut out, (a, b - 1), c.clone() * num(b));
            }
            let f = num::<T>(b) + self.exponent.clone();
            Self::accumulate(&mut out, (a + 1, b), T::zero() - f * c.clone());
        }
        Self::new(out, self.exponent.clone() - T::one())
    }

    /// `∂^{r+s}/∂z̄^r ∂z^s` applied to `self`.
    pub fn mixed_derivative(&self, zbar_order: usize, z_order: usize) -> Self {
        let after_z = (0..z_order).fold(self.clone(), |w, _| w.wirtinger_z());
        (0..zbar_order).fold(after_z, |w, _| w.wirtinger_zbar())
    }

    pub fn scaled(&self, factor: &T) -> Self {
        Self::new(
            self.poly
                .iter()
                .map(|(k, c)| (*k, c.clone() * factor.clone()))
                .collect(),
            self.exponent.clone(),
        )
    }

    pub fn eval_poly(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.poly
            .iter()
            .map(|(&(a, b), c)| z.powu(a as u32) * zb.powu(b as u32) * as_f64(c))
            .sum()
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let s = as_f64(&self.exponent);
        let w = if s == 0.0 { 1.0 } else { (1.0 - z.norm_sqr()).powf(s) };
        self.eval_poly(z) * w
    }

    pub fn vanishes_on_boundary(&self) -> bool {
        self.poly.is_empty() || self.exponent > T::zero()
    }
}

fn check_cap(requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(Error::DegreeCapExceeded { requested, cap });
    }
    Ok(())
}

/// Rational `(a)_k`.
fn pochhammer_rational(a: &BigRational, k: usize) -> BigRational {
    (0..k).fold(rational(1), |acc, j| acc * (a + rational(j as i64)))
}

fn factorial_rational(k: usize) -> BigRational {
    pochhammer_rational(&rational(1), k)
}

/// The polynomial produced by the right side of the Gegenbauer Rodrigues formula
/// `(−1)^n / (2^n (d/2)_n) · (1−x²)^{1−d/2} · dⁿ/dxⁿ (1−x²)^{n+d/2−1}`,
/// computed in exact arithmetic.
pub fn rodrigues_polynomial_real(d: RealDim, n: usize, cap: usize) -> Result<Vec<BigRational>> {
    check_cap(n, cap)?;
    let dd = d.get() as i64;
    let nn = n as i64;
    let start = WeightedPolynomial::weight(ratio(2 * nn + dd - 2, 2));
    let derived = start.nth_derivative(n);
    // the n-th derivative retains exactly (1−x²)^{d/2−1}
    assert_eq!(derived.exponent(), &ratio(dd - 2, 2));
    let sign = if n.is_multiple_of(2) { rational(1) } else { rational(-1) };
    let two_n = (0..n).fold(rational(1), |acc, _| acc * rational(2));
    let prefactor = sign / (two_n * pochhammer_rational(&ratio(dd, 2), n));
    Ok(derived.scaled(&prefactor).poly().to_vec())
}

/// Largest deviation between the Rodrigues formula and the recurrence for
/// `c_n(d, ·)` over `sample_xs`.
pub fn rodrigues_check_real(d: RealDim, n: usize, sample_xs: &[f64], cap: usize) -> Result<f64> {
    let poly = rodrigues_polynomial_real(d, n, cap)?;
    let mut worst = 0.0f64;
    for &x in sample_xs {
        let lhs = poly.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c));
        let rhs = gegenbauer_normalized(d, n, x)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// The polynomial `p(z, z̄)` with
/// `(1−|z|²)^{q−2} p = (−1)^{m+n}(q−2)!/(m+n+q−2)! · ∂^{m+n}/∂z̄^m ∂z^n (1−|z|²)^{m+n+q−2}`.
pub fn rodrigues_polynomial_complex(
    q: ComplexDim,
    m: usize,
    n: usize,
    cap: usize,
) -> Result<BTreeMap<(usize, usize), BigRational>> {
    check_cap(m + n, cap)?;
    let qq = q.get() as usize;
    let start = WeightedBiPolynomial::weight(rational((m + n + qq - 2) as i64));
    let derived = start.mixed_derivative(m, n);
    assert_eq!(derived.exponent(), &rational(qq as i64 - 2));
    let sign = if (m + n).is_multiple_of(2) {
        rational(1)
    } else {
        rational(-1)
    };
    let prefactor = sign * factorial_rational(qq - 2) / factorial_rational(m + n + qq - 2);
    Ok(derived.scaled(&prefactor).poly().clone())
}

/// Largest deviation between the disc Rodrigues formula and
/// [`disc_polynomial`] over `sample_zs`.
pub fn rodrigues_check_complex(q: ComplexDim, m: usize, n: usize, sample_zs: &[Complex64], cap: usize) -> Result<f64> {
    let poly = rodrigues_polynomial_complex(q, m, n, cap)?;
    let w = WeightedBiPolynomial::new(poly, rational(0));
    let mut worst = 0.0f64;
    for &z in sample_zs {
        let rhs = disc_polynomial(q.alpha(), m, n, z)?;
        worst = worst.max((w.eval_poly(z) - rhs).norm());
    }
    Ok(worst)
}

/// Exponents of the factors `d^{n−k−1}/dx^{n−k−1} (1−x²)^{n+d/2−1}`,
/// `k = 0, …, n−1`, that multiply the boundary terms of the `n`-fold
/// integration by parts. Each equals `k + d/2 > 0`.
pub fn boundary_exponents_real(d: RealDim, n: usize) -> Vec<BigRational> {
    let dd = d.get() as i64;
    let start = WeightedPolynomial::weight(ratio(2 * n as i64 + dd - 2, 2));
    (0..n)
        .map(|k| start.nth_derivative(n - k - 1).exponent().clone())
        .collect()
}

/// Exponents of `∂^{r+s}/∂z̄^r ∂z^s (1−|z|²)^{m+n+q−2}` for the boundary terms of
/// the complex integration by parts, all orders `r + s ≤ m + n − 1`.
pub fn boundary_exponents_complex(q: ComplexDim, m: usize, n: usize) -> Vec<BigRational> {
    let qq = q.get() as i64;
    let start = WeightedBiPolynomial::weight(rational(m as i64 + n as i64 + qq - 2));
    let mut out = Vec::new();
    for r in 0..=n {
        for s in 0..=m {
            if r + s < m + n {
                out.push(start.mixed_derivative(r, s).exponent().clone());
            }
        }
    }
    out
}

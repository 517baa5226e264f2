//! Exact rational monomial expansions of the normalized polynomial families.
//!
//! These back the basis changes between Gegenbauer/disc series and power
//! series. Evaluation never goes through them; see [`crate::specfun`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::specfun::RealDim;

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Monomial coefficients (ascending powers) of `c_n(d, x)`.
pub fn gegenbauer_monomial(d: RealDim, n: usize) -> Vec<BigRational> {
    let dd = d.get() as i64;
    let mut prev = vec![rational(1)];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![rational(0), rational(1)];
    for k in 1..n as i64 {
        // c_{k+1} = ((2k+d−1) x c_k − k c_{k−1}) / (k+d−1); d = 1 reduces to Chebyshev
        let a = ratio(2 * k + dd - 1, k + dd - 1);
        let b = ratio(k, k + dd - 1);
        let mut next = vec![rational(0); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += &a * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= &b * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients in `y = (1+x)/2` of `R_k^{(α,β)}(x)`, ascending powers of `y`.
///
/// Uses `R_k(x) = ₂F₁(−k, k+α+β+1; α+1; (1−x)/2)` and `(1−x)/2 = 1 − y`.
pub fn jacobi_normalized_in_y(alpha: &BigRational, beta: &BigRational, k: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); k + 1];
    let one = BigRational::one();
    let c = alpha + beta + rational(k as i64 + 1);
    let mut term = BigRational::one();
    for s in 0..=k {
        if s > 0 {
            let sm = rational(s as i64 - 1);
            term = term * (rational(-(k as i64)) + &sm) * (&c + &sm) / ((alpha + &one + &sm) * rational(s as i64));
        }
        // (1−y)^s = Σ_j binom(s, j)(−y)^j
        let mut binom = BigRational::one();
        for (j, slot) in out.iter_mut().enumerate().take(s + 1) {
            if j > 0 {
                binom = binom * rational((s - j + 1) as i64) / rational(j as i64);
            }
            let signed = if j % 2 == 0 { binom.clone() } else { -binom.clone() };
            *slot += &term * signed;
        }
    }
    out
}

/// Monomial coefficients of `R^α_{m,n}(z)`, keyed by `(a, b)` for `z^a z̄^b`.
pub fn disc_monomial(alpha: &BigRational, m: usize, n: usize) -> BTreeMap<(usize, usize), BigRational> {
    let k = m.min(n);
    let beta = rational(m.abs_diff(n) as i64);
    let (sa, sb) = if m >= n { (m - n, 0) } else { (0, n - m) };
    jacobi_normalized_in_y(alpha, &beta, k)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| ((sa + j, sb + j), c))
        .collect()
}

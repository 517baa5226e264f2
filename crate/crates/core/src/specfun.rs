//! Closed-form constants and the orthogonal polynomial families.
//!
//! All polynomial evaluations use forward three-term recurrences written
//! directly for the *normalized* polynomials (value 1 at `x = 1`), which keeps
//! every intermediate bounded by one on `[-1, 1]`.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Slack allowed on `|x| ≤ 1` and `|z| ≤ 1` to absorb rounding in scalar products.
pub const DOMAIN_TOL: f64 = 1e-12;

/// Dimension `d ≥ 1` of the real sphere `𝕊^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RealDim(u32);

impl RealDim {
    pub fn new(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("sphere dimension d must be at least 1".into()));
        }
        Ok(Self(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Gegenbauer parameter `λ = (d−1)/2`.
    pub fn lambda(self) -> f64 {
        (self.0 as f64 - 1.0) / 2.0
    }

    /// Exponent `d/2 − 1` of the weight `(1−x²)^{d/2−1}`; this is the `λ` of `τ_λ`.
    pub fn weight_exponent(self) -> f64 {
        self.0 as f64 / 2.0 - 1.0
    }

    pub fn raised(self, by: u32) -> Self {
        Self(self.0 + by)
    }
}

impl TryFrom<u32> for RealDim {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Self::new(d)
    }
}

/// Complex dimension `q ≥ 2` of the sphere `Ω_{2q} ⊂ ℂ^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComplexDim(u32);

impl ComplexDim {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::Domain("complex sphere dimension q must be at least 2".into()));
        }
        Ok(Self(q))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Disc polynomial parameter `α = q − 2`.
    pub fn alpha(self) -> f64 {
        self.0 as f64 - 2.0
    }

    pub fn next(self) -> Self {
        Self(self.0 + 1)
    }
}

impl TryFrom<u32> for ComplexDim {
    type Error = Error;
    fn try_from(q: u32) -> Result<Self> {
        Self::new(q)
    }
}

/// Rising factorial `(a)_k = a(a+1)⋯(a+k−1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Euler Beta function for positive arguments, through log-gamma.
pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// Total surface measure `σ_d = 2π^{(d+1)/2} / Γ((d+1)/2)` of `𝕊^d`.
pub fn surface_mass(d: RealDim) -> f64 {
    let h = (d.get() as f64 + 1.0) / 2.0;
    (std::f64::consts::LN_2 + h * std::f64::consts::PI.ln() - ln_gamma(h)).exp()
}

fn check_unit_interval(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + DOMAIN_TOL {
        return Err(Error::Domain(format!("x = {x} lies outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// Normalized Gegenbauer polynomial `c_n(d, x) = C_n^{(λ)}(x) / C_n^{(λ)}(1)`,
/// `λ = (d−1)/2`, with `c_n(1, x) = T_n(x)`.
pub fn gegenbauer_normalized(d: RealDim, n: usize, x: f64) -> Result<f64> {
    Ok(gegenbauer_normalized_all(d, n, x)?[n])
}

/// `c_0(d,x), …, c_max_n(d,x)` in one recurrence pass.
pub fn gegenbauer_normalized_all(d: RealDim, max_n: usize, x: f64) -> Result<Vec<f64>> {
    let x = check_unit_interval(x)?;
    let mut out = Vec::with_capacity(max_n + 1);
    out.push(1.0);
    if max_n == 0 {
        return Ok(out);
    }
    out.push(x);
    let dd = d.get() as f64;
    for k in 1..max_n {
        let next = if d.get() == 1 {
            // Chebyshev: T_{k+1} = 2x T_k − T_{k−1}
            2.0 * x * out[k] - out[k - 1]
        } else {
            let kf = k as f64;
            ((2.0 * kf + dd - 1.0) * x * out[k] - kf * out[k - 1]) / (kf + dd - 1.0)
        };
        out.push(next);
    }
    Ok(out)
}

/// Derivative `∂/∂x c_n(d, x) = n(n+d−1)/d · c_{n−1}(d+2, x)`.
pub fn gegenbauer_normalized_derivative(d: RealDim, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        check_unit_interval(x)?;
        return Ok(0.0);
    }
    let dd = d.get() as f64;
    let nf = n as f64;
    Ok(nf * (nf + dd - 1.0) / dd * gegenbauer_normalized(d.raised(2), n - 1, x)?)
}

fn check_jacobi_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Domain(format!(
            "Jacobi parameters must exceed -1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(())
}

/// Normalized Jacobi polynomial `R_k^{(α,β)}(x) = P_k^{(α,β)}(x) / P_k^{(α,β)}(1)`.
pub fn jacobi_normalized(alpha: f64, beta: f64, k: usize, x: f64) -> Result<f64> {
    check_jacobi_params(alpha, beta)?;
    let x = check_unit_interval(x)?;
    Ok(jacobi_normalized_unchecked(alpha, beta, k, x))
}

fn jacobi_normalized_unchecked(alpha: f64, beta: f64, k: usize, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = ((ab + 2.0) * x + alpha - beta) / (2.0 * (alpha + 1.0));
    for n in 2..=k {
        let n = n as f64;
        let s = 2.0 * n + ab;
        // classical recurrence for P_n divided through by P_n(1) = (α+1)_n / n!
        let a = (s - 1.0) * (s * (s - 2.0) * x + alpha * alpha - beta * beta);
        let b = 2.0 * (n - 1.0) * (n + beta - 1.0) * s;
        let c = 2.0 * (n + alpha) * (n + ab) * (s - 2.0);
        let next = (a * cur - b * prev) / c;
        prev = cur;
        cur = next;
    }
    cur
}

/// Disc polynomial
/// `R^α_{m,n}(r e^{iθ}) = r^{|m−n|} e^{i(m−n)θ} R^{(α,|m−n|)}_{min(m,n)}(2r²−1)`.
pub fn disc_polynomial(alpha: f64, m: usize, n: usize, z: Complex64) -> Result<Complex64> {
    check_jacobi_params(alpha, 0.0)?;
    let r2 = z.norm_sqr();
    if !r2.is_finite() || r2.sqrt() > 1.0 + DOMAIN_TOL {
        return Err(Error::Domain(format!("z = {z} lies outside the closed unit disc")));
    }
    let angular = if m >= n {
        z.powu((m - n) as u32)
    } else {
        z.conj().powu((n - m) as u32)
    };
    let diff = m.abs_diff(n) as f64;
    let t = (2.0 * r2 - 1.0).clamp(-1.0, 1.0);
    Ok(angular * jacobi_normalized_unchecked(alpha, diff, m.min(n), t))
}

fn binomial_big(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn to_u128(v: BigUint, what: &str) -> u128 {
    v.to_u128()
        .unwrap_or_else(|| panic!("{what} does not fit into 128 bits"))
}

/// Dimension `N_n(d)` of the space of spherical harmonics of degree `n` on `𝕊^d`.
///
/// Computed exactly as `binom(n+d, d) − binom(n+d−2, d)`, which equals
/// `(d)_{n−1}(d+2n−1)/n!` for `n ≥ 1` and `1` for `n = 0`.
pub fn harmonic_dim_real(d: RealDim, n: usize) -> u128 {
    let d = d.get() as u64;
    let n = n as u64;
    let upper = binomial_big(n + d, d);
    let lower = if n >= 2 {
        binomial_big(n + d - 2, d)
    } else {
        BigUint::zero()
    };
    to_u128(upper - lower, "N_n(d)")
}

/// Dimension `N(q; m, n) = (m+n+q−1)/(q−1) · binom(m+q−2, m) · binom(n+q−2, n)`.
pub fn harmonic_dim_complex(q: ComplexDim, m: usize, n: usize) -> u128 {
    let q = q.get() as u64;
    let (m, n) = (m as u64, n as u64);
    let num = BigUint::from(m + n + q - 1) * binomial_big(m + q - 2, m) * binomial_big(n + q - 2, n);
    let den = BigUint::from(q - 1);
    debug_assert!((&num % &den).is_zero());
    to_u128(num / den, "N(q;m,n)")
}

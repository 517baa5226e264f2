//! Finite groups standing in for the group factor `L`, and positive
//! definiteness of functions on them.
//!
//! Elements are the integers `0..order` with `0` the neutral element. For a
//! finite group the Gram matrix over *all* elements decides membership in
//! `𝒫(L)` exactly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coefficients::GroupFunction;
use crate::error::{Error, Result};
use crate::psd::{hermitian_psd_test, PsdReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    order: usize,
    /// Row-major multiplication table.
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl GroupSpec {
    /// The trivial group `{e}`.
    pub fn trivial() -> Self {
        Self::cyclic(1).expect("order 1")
    }

    /// `ℤ_k` under addition mod `k`.
    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("cyclic group order must be at least 1".into()));
        }
        let mul = (0..k * k).map(|i| (i / k + i % k) % k).collect();
        let inv = (0..k).map(|a| (k - a) % k).collect();
        Ok(Self { order: k, mul, inv })
    }

    /// Direct product; `(a, b)` is element `a·|B| + b`.
    pub fn product(a: &GroupSpec, b: &GroupSpec) -> Self {
        let n = a.order * b.order;
        let split = |x: usize| (x / b.order, x % b.order);
        let join = |x: usize, y: usize| x * b.order + y;
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (x1, x2) = split(x);
                let (y1, y2) = split(y);
                mul.push(join(a.mul(x1, y1), b.mul(x2, y2)));
            }
        }
        let inv = (0..n)
            .map(|x| {
                let (x1, x2) = split(x);
                join(a.inv(x1), b.inv(x2))
            })
            .collect();
        Self { order: n, mul, inv }
    }

    /// Validates a multiplication table. Violations name a witness triple.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let k = table.len();
        if k == 0 {
            return Err(Error::InvalidInput("group table is empty".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidInput(format!(
                    "row {a} of the group table has {} entries, expected {k}",
                    row.len()
                )));
            }
            if let Some((b, &c)) = row.iter().enumerate().find(|(_, &c)| c >= k) {
                return Err(Error::GroupAxiom {
                    axiom: "closure",
                    witness: (a, b, c),
                });
            }
        }
        let mul: Vec<usize> = table.iter().flatten().copied().collect();
        let at = |a: usize, b: usize| mul[a * k + b];
        for a in 0..k {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::GroupAxiom {
                    axiom: "identity is element 0",
                    witness: (0, a, if at(0, a) != a { at(0, a) } else { at(a, 0) }),
                });
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::GroupAxiom {
                            axiom: "associativity",
                            witness: (a, b, c),
                        });
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(k);
        for a in 0..k {
            match (0..k).find(|&b| at(a, b) == 0 && at(b, a) == 0) {
                Some(b) => inv.push(b),
                None => {
                    return Err(Error::GroupAxiom {
                        axiom: "inverse",
                        witness: (a, a, 0),
                    })
                }
            }
        }
        Ok(Self { order: k, mul, inv })
    }

    /// Parses the text format: first line the order `k`, then `k` lines of
    /// `k` whitespace-separated integers.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let k: usize = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("group file is empty".into()))?
            .parse()
            .map_err(|e| Error::InvalidInput(format!("group order: {e}")))?;
        let mut table = Vec::with_capacity(k);
        for (i, line) in lines.enumerate() {
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidInput(format!("group table row {i}: {e}")))?;
            table.push(row);
        }
        if table.len() != k {
            return Err(Error::InvalidInput(format!(
                "group file declares order {k} but has {} rows",
                table.len()
            )));
        }
        Self::from_table(&table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `u⁻¹v`.
    pub fn left_quotient(&self, u: usize, v: usize) -> usize {
        self.mul(self.inv(u), v)
    }

    /// Rows of the multiplication table.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }
}

/// `M[u, v] = φ(u⁻¹v)` over all elements.
pub fn group_gram_matrix(phi: &GroupFunction, group: &GroupSpec) -> Result<DMatrix<Complex64>> {
    if phi.order() != group.order() {
        return Err(Error::InvalidInput(format!(
            "function has {} values for a group of order {}",
            phi.order(),
            group.order()
        )));
    }
    let k = group.order();
    Ok(DMatrix::from_fn(k, k, |u, v| phi.at(group.left_quotient(u, v))))
}

/// Decides `φ ∈ 𝒫(L)` from the full Gram matrix.
pub fn pd_check_group(phi: &GroupFunction, group: &GroupSpec, tol: f64) -> Result<PsdReport> {
    hermitian_psd_test(&group_gram_matrix(phi, group)?, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BochnerReport {
    /// `φ̂(j) = Σ_u φ(u) e^{−2πi ju/k}`.
    pub spectrum: Vec<Complex64>,
    pub pd: bool,
}

/// Bochner test on `ℤ_k`: `φ` is positive definite iff its discrete Fourier
/// transform is real and nonnegative. The threshold is `tol · k|φ(0)|`,
/// the trace of the corresponding Gram matrix.
pub fn bochner_check_cyclic(phi: &GroupFunction, k: usize, tol: f64) -> Result<BochnerReport> {
    if phi.order() != k || k == 0 {
        return Err(Error::InvalidInput(format!(
            "function has {} values, expected {k}",
            phi.order()
        )));
    }
    let spectrum: Vec<Complex64> = (0..k)
        .map(|j| {
            (0..k)
                .map(|u| {
                    let angle = -2.0 * std::f64::consts::PI * ((j * u) % k) as f64 / k as f64;
                    phi.at(u) * Complex64::from_polar(1.0, angle)
                })
                .sum()
        })
        .collect();
    let threshold = tol * k as f64 * phi.at(0).norm();
    let pd = spectrum.iter().all(|s| s.re >= -threshold && s.im.abs() <= threshold);
    Ok(BochnerReport { spectrum, pd })
}

/// Consequences of `φ ∈ 𝒫(L)` visible on the 2×2 Gram matrices of `{e, u}`:
/// `φ(e) ≥ 0`, `|φ(u)| ≤ φ(e)` and `φ(u⁻¹) = conj φ(u)`. Returns the first
/// element where one fails.
pub fn pair_conditions(phi: &GroupFunction, group: &GroupSpec, tol: f64) -> Option<usize> {
    let e = phi.at_identity();
    let scale = tol * e.norm().max(1.0);
    if e.re < -scale || e.im.abs() > scale {
        return Some(0);
    }
    (0..group.order())
        .find(|&u| phi.at(u).norm() > e.re + scale || (phi.at(group.inv(u)) - phi.at(u).conj()).norm() > scale)
}

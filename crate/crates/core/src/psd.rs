//! Hermitian positive-semidefiniteness test with witness extraction.
//!
//! Quadratic forms follow the convention `Σ_{j,k} M[j,k] c_j conj(c_k)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance, relative to the trace.
pub const DEFAULT_TOL: f64 = 1e-10;

const EIGEN_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pd,
    NotPd {
        /// Coefficients `c` with `Σ M[j,k] c_j conj(c_k) < −tol·trace`.
        witness: Vec<Complex64>,
        /// The quadratic form re-evaluated directly at the witness.
        quadratic_form: f64,
    },
}

impl Verdict {
    pub fn is_pd(&self) -> bool {
        matches!(self, Verdict::Pd)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdReport {
    pub size: usize,
    pub min_eigenvalue: f64,
    pub trace: f64,
    /// Threshold `tol · Σ|M_ii|` below which a negative value counts.
    pub threshold: f64,
    pub verdict: Verdict,
}

/// `Σ_{j,k} M[j,k] c_j conj(c_k)`.
pub fn quadratic_form(m: &DMatrix<Complex64>, c: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..m.nrows() {
        for k in 0..m.ncols() {
            acc += m[(j, k)] * c[j] * c[k].conj();
        }
    }
    acc
}

/// Tests `m` for hermitian positive semidefiniteness: the smallest eigenvalue
/// must be at least `−tol · Σ|M_ii|`.
///
/// A hermitian defect above the same threshold is an error, not a verdict.
pub fn hermitian_psd_test(m: &DMatrix<Complex64>, tol: f64) -> Result<PsdReport> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidInput("Gram matrix must be square".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("Gram matrix is empty".into()));
    }
    if m.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite("Gram matrix has a non-finite entry".into()));
    }
    let trace: f64 = (0..n).map(|i| m[(i, i)].re).sum();
    let diag_scale: f64 = (0..n).map(|i| m[(i, i)].norm()).sum();
    let threshold = tol * diag_scale;
    let herm_scale = if diag_scale > 0.0 {
        threshold
    } else {
        tol * m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    };

    for j in 0..n {
        for k in j..n {
            let deviation = (m[(j, k)] - m[(k, j)].conj()).norm();
            if deviation > herm_scale {
                return Err(Error::NonHermitian {
                    row: j,
                    col: k,
                    deviation,
                });
            }
        }
    }

    let sym = (m + m.adjoint()).map(|v| v * 0.5);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::EigenNonConvergence(format!("hermitian eigen-solve of size {n}")))?;
    let (imin, &min_eigenvalue) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");

    if min_eigenvalue >= -threshold {
        return Ok(PsdReport {
            size: n,
            min_eigenvalue,
            trace,
            threshold,
            verdict: Verdict::Pd,
        });
    }

    // a negative diagonal entry is the smallest possible witness
    let diag_witness = (0..n)
        .filter(|&i| m[(i, i)].re < -threshold)
        .min_by(|&a, &b| m[(a, a)].re.total_cmp(&m[(b, b)].re));
    let witness: Vec<Complex64> = match diag_witness {
        Some(i) => (0..n)
            .map(|k| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0))
            .collect(),
        // c = conj(v) turns the form into v* M v = λ_min
        None => eig.eigenvectors.column(imin).iter().map(|v| v.conj()).collect(),
    };
    let quadratic_form = quadratic_form(m, &witness).re;
    if quadratic_form >= -threshold {
        // the eigen-solver's negative value did not survive re-evaluation
        return Ok(PsdReport {
            size: n,
            min_eigenvalue,
            trace,
            threshold,
            verdict: Verdict::Pd,
        });
    }
    Ok(PsdReport {
        size: n,
        min_eigenvalue,
        trace,
        threshold,
        verdict: Verdict::NotPd {
            witness,
            quadratic_form,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(n: usize, v: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_row_iterator(n, n, v.iter().map(|&x| Complex64::new(x, 0.0)))
    }

    #[test]
    fn identity_is_pd() {
        let r = hermitian_psd_test(&real(2, &[1.0, 0.0, 0.0, 1.0]), DEFAULT_TOL).unwrap();
        assert!(r.verdict.is_pd());
        assert!((r.min_eigenvalue - 1.0).abs() < 1e-14);
        assert_eq!(r.trace, 2.0);
    }

    #[test]
    fn indefinite_gets_eigen_witness() {
        let m = real(2, &[1.0, 2.0, 2.0, 1.0]);
        let r = hermitian_psd_test(&m, DEFAULT_TOL).unwrap();
        match r.verdict {
            Verdict::NotPd {
                witness,
                quadratic_form: qf,
            } => {
                assert!((qf + 1.0).abs() < 1e-12);
                assert!((quadratic_form(&m, &witness).re - qf).abs() < 1e-14);
            }
            Verdict::Pd => panic!("expected indefinite"),
        }
    }

    #[test]
    fn negative_diagonal_gives_unit_witness() {
        let m = real(2, &[-1.0, 0.0, 0.0, 3.0]);
        let r = hermitian_psd_test(&m, DEFAULT_TOL).unwrap();
        match r.verdict {
            Verdict::NotPd {
                witness,
                quadratic_form,
            } => {
                assert_eq!(witness.iter().filter(|c| c.norm() > 0.0).count(), 1);
                assert_eq!(quadratic_form, -1.0);
            }
            Verdict::Pd => panic!("expected indefinite"),
        }
    }

    #[test]
    fn complex_hermitian_witness_uses_conjugate() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        // [[1, 2i], [−2i, 1]] has eigenvalues −1 and 3
        let m = DMatrix::from_row_slice(2, 2, &[one, i * 2.0, -i * 2.0, one]);
        let r = hermitian_psd_test(&m, DEFAULT_TOL).unwrap();
        match r.verdict {
            Verdict::NotPd { quadratic_form, .. } => assert!((quadratic_form + 1.0).abs() < 1e-12),
            Verdict::Pd => panic!("expected indefinite"),
        }
    }

    #[test]
    fn non_hermitian_is_an_error() {
        let m = real(2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(
            hermitian_psd_test(&m, DEFAULT_TOL),
            Err(Error::NonHermitian { row: 0, col: 1, .. })
        ));
    }
}

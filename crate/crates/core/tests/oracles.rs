//! Library values checked against independently computed references:
//! explicit sums in exact rational arithmetic, combinatorial dimension counts
//! and brute-force composite quadrature.

use std::f64::consts::PI;

use num_rational::Ratio;
use schoenberg::groups::pd_check_group;
use schoenberg::quadrature::integrate_tau;
use schoenberg::specfun::{
    disc_polynomial, gegenbauer_normalized, harmonic_dim_complex, harmonic_dim_real, jacobi_normalized, pochhammer,
    surface_mass,
};
use schoenberg::sphere_complex::{extract_table_complex, group_average, recover_group_coefficients};
use schoenberg::sphere_real::{extract_coefficient_real, extract_table_real};
use schoenberg::{
    CoefficientTable, Complex64, ComplexDim, ComplexKernelModel, GroupFunction, GroupSpec, RealDim, RealKernelModel,
};

type Q = Ratio<i128>;

fn rd(d: u32) -> RealDim {
    RealDim::new(d).unwrap()
}

fn cd(q: u32) -> ComplexDim {
    ComplexDim::new(q).unwrap()
}

fn q_to_f64(r: Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn q_pochhammer(a: Q, k: usize) -> Q {
    (0..k).fold(Q::from_integer(1), |acc, j| acc * (a + Q::from_integer(j as i128)))
}

fn q_factorial(k: usize) -> Q {
    Q::from_integer((1..=k as i128).product())
}

/// `C_n^λ(x) = Σ_k (−1)^k (λ)_{n−k} / (k! (n−2k)!) (2x)^{n−2k}`, exact.
fn gegenbauer_explicit(lambda: Q, n: usize, x: Q) -> Q {
    let two_x = x * Q::from_integer(2);
    let mut acc = Q::from_integer(0);
    for k in 0..=n / 2 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let mut term = q_pochhammer(lambda, n - k) / (q_factorial(k) * q_factorial(n - 2 * k));
        for _ in 0..n - 2 * k {
            term *= two_x;
        }
        acc += term * Q::from_integer(sign);
    }
    acc
}

fn binom_real(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a - j as f64) / (j + 1) as f64)
}

/// `P_k^{(α,β)}(x) = Σ_s binom(k+α, k−s) binom(k+β, s) ((x−1)/2)^s ((x+1)/2)^{k−s}`.
fn jacobi_explicit(alpha: f64, beta: f64, k: usize, x: f64) -> f64 {
    (0..=k)
        .map(|s| {
            binom_real(k as f64 + alpha, k - s)
                * binom_real(k as f64 + beta, s)
                * ((x - 1.0) / 2.0).powi(s as i32)
                * ((x + 1.0) / 2.0).powi((k - s) as i32)
        })
        .sum()
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for i in 1..intervals {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// `∫ g dτ` for sphere dimension `d`, through `x = cos θ`.
fn tau_brute<F: Fn(f64) -> f64>(g: F, d: u32) -> f64 {
    let w = |t: f64| t.sin().powi(d as i32 - 1);
    simpson(|t| g(t.cos()) * w(t), 0.0, PI, 4000) / simpson(w, 0.0, PI, 4000)
}

/// `∫ g dν_α` by Simpson in `r` and the trapezoid rule in the angle.
fn nu_brute<F: Fn(Complex64) -> Complex64>(g: F, alpha: f64) -> Complex64 {
    let angles = 64;
    let radial = |r: f64, part: fn(Complex64) -> f64| {
        let s: f64 = (0..angles)
            .map(|k| part(g(Complex64::from_polar(r, 2.0 * PI * k as f64 / angles as f64))))
            .sum();
        s / angles as f64 * 2.0 * PI * r * (1.0 - r * r).powf(alpha)
    };
    let re = simpson(|r| radial(r, |c| c.re), 0.0, 1.0, 2000);
    let im = simpson(|r| radial(r, |c| c.im), 0.0, 1.0, 2000);
    Complex64::new(re, im) * (alpha + 1.0) / PI
}

#[test]
fn pochhammer_examples() {
    assert_eq!(pochhammer(3.0, 0), 1.0);
    assert_eq!(pochhammer(3.0, 2), 12.0);
    assert_eq!(pochhammer(2.0, 2) / 2.0, 3.0);
    for k in 0..10 {
        let exact = q_to_f64(q_pochhammer(Q::new(7, 3), k));
        assert!((pochhammer(7.0 / 3.0, k) - exact).abs() <= 1e-13 * exact.abs());
    }
}

#[test]
fn gegenbauer_matches_explicit_sum() {
    for d in 2..=9u32 {
        let lambda = Q::new(d as i128 - 1, 2);
        for n in 0..=8 {
            let at_one = gegenbauer_explicit(lambda, n, Q::from_integer(1));
            for p in -16..=16 {
                let x = Q::new(p, 16);
                let exact = q_to_f64(gegenbauer_explicit(lambda, n, x) / at_one);
                let got = gegenbauer_normalized(rd(d), n, q_to_f64(x)).unwrap();
                assert!(
                    (got - exact).abs() <= 1e-12 * exact.abs().max(1e-3),
                    "d={d} n={n} x={p}/16: {got} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn gegenbauer_d1_is_chebyshev() {
    for n in 0..=20 {
        for p in -20..=20 {
            let x = p as f64 / 20.0;
            let exact = (n as f64 * x.acos()).cos();
            assert!((gegenbauer_normalized(rd(1), n, x).unwrap() - exact).abs() < 1e-12);
        }
    }
    assert!((gegenbauer_normalized(rd(1), 2, 0.5).unwrap() + 0.5).abs() < 1e-15);
}

#[test]
fn gegenbauer_degree_two_closed_form() {
    for d in 1..=12u32 {
        for p in -10..=10 {
            let x = p as f64 / 10.0;
            let exact = ((d as f64 + 1.0) * x * x - 1.0) / d as f64;
            assert!((gegenbauer_normalized(rd(d), 2, x).unwrap() - exact).abs() < 1e-14);
        }
    }
}

#[test]
fn jacobi_matches_explicit_sum() {
    for &(alpha, beta) in &[(0.0, 0.0), (0.5, -0.5), (2.0, 1.0), (3.0, 0.0), (-0.5, 4.0), (7.0, 2.0)] {
        for k in 0..=10 {
            let norm = jacobi_explicit(alpha, beta, k, 1.0);
            for p in -10..=10 {
                let x = p as f64 / 10.0;
                let exact = jacobi_explicit(alpha, beta, k, x) / norm;
                let got = jacobi_normalized(alpha, beta, k, x).unwrap();
                assert!(
                    (got - exact).abs() < 1e-11,
                    "({alpha},{beta}) k={k} x={x}: {got} vs {exact}"
                );
            }
        }
    }
    for q in 2..=6u32 {
        let q = q as f64;
        let x = 0.3;
        let exact = (q * x + q - 2.0) / (2.0 * (q - 1.0));
        assert!((jacobi_normalized(q - 2.0, 0.0, 1, x).unwrap() - exact).abs() < 1e-14);
    }
}

#[test]
fn disc_polynomials_match_definition() {
    let zs = [
        Complex64::new(0.3, -0.4),
        Complex64::new(-0.7, 0.1),
        Complex64::new(0.0, 0.95),
        Complex64::from_polar(1.0, 2.2),
    ];
    for alpha in [0.0, 1.0, 2.5] {
        for m in 0..5usize {
            for n in 0..5usize {
                let k = m.min(n);
                let gap = m.abs_diff(n);
                for &z in &zs {
                    let r = z.norm();
                    let radial = jacobi_explicit(alpha, gap as f64, k, 2.0 * r * r - 1.0)
                        / jacobi_explicit(alpha, gap as f64, k, 1.0);
                    let phase = Complex64::from_polar(1.0, (m as f64 - n as f64) * z.arg());
                    let exact = phase * r.powi(gap as i32) * radial;
                    assert!((disc_polynomial(alpha, m, n, z).unwrap() - exact).norm() < 1e-12);
                }
            }
        }
    }
    let z = Complex64::new(0.2, 0.6);
    for q in 2..=6u32 {
        let qf = q as f64;
        assert!((disc_polynomial(qf - 2.0, 1, 0, z).unwrap() - z).norm() < 1e-15);
        let exact = (qf * z.norm_sqr() - 1.0) / (qf - 1.0);
        assert!((disc_polynomial(qf - 2.0, 1, 1, z).unwrap() - exact).norm() < 1e-14);
    }
}

#[test]
fn surface_mass_values() {
    assert!((surface_mass(rd(1)) - 2.0 * PI).abs() < 1e-13);
    assert!((surface_mass(rd(2)) - 4.0 * PI).abs() < 1e-13);
    for d in 1..=20u32 {
        let up = surface_mass(rd(d + 2));
        assert!((up - 2.0 * PI * surface_mass(rd(d)) / (d as f64 + 1.0)).abs() < 1e-12 * up);
    }
    for d in 2..=12u32 {
        let ratio = surface_mass(rd(d - 1)) / surface_mass(rd(d));
        let inv_beta = 1.0 / simpson(|t| t.sin().powi(d as i32 - 1), 0.0, PI, 4000);
        assert!((ratio - inv_beta).abs() < 1e-10);
    }
}

#[test]
fn harmonic_dimensions_match_polynomial_counts() {
    for d in 1..=12u128 {
        for n in 0..=20u128 {
            let homogeneous = binom(n + d, d);
            let lower = if n >= 2 { binom(n - 2 + d, d) } else { 0 };
            assert_eq!(
                harmonic_dim_real(rd(d as u32), n as usize),
                homogeneous - lower,
                "d={d} n={n}"
            );
        }
    }
    assert_eq!(harmonic_dim_real(rd(2), 2), 5);
    for q in 2..=9u128 {
        for m in 0..=10u128 {
            for n in 0..=10u128 {
                let full = binom(m + q - 1, m) * binom(n + q - 1, n);
                let lower = if m > 0 && n > 0 {
                    binom(m + q - 2, m - 1) * binom(n + q - 2, n - 1)
                } else {
                    0
                };
                assert_eq!(
                    harmonic_dim_complex(cd(q as u32), m as usize, n as usize),
                    full - lower,
                    "q={q} m={m} n={n}"
                );
            }
        }
        assert_eq!(harmonic_dim_complex(cd(q as u32), 1, 1), (q + 1) * (q - 1));
    }
}

#[test]
fn tau_moments_match_closed_form() {
    for twice in 0..=12 {
        let lambda = twice as f64 / 2.0 - 0.5;
        for k in 0..=10usize {
            let exact: f64 = (1..=k)
                .map(|j| (2 * j - 1) as f64 / (2.0 * lambda + 2.0 * j as f64 + 1.0))
                .product();
            let got = integrate_tau(|x| Ok(Complex64::new(x.powi(2 * k as i32), 0.0)), lambda, 12).unwrap();
            assert!((got.re - exact).abs() < 1e-13, "λ={lambda} k={k}");
            let odd = integrate_tau(|x| Ok(Complex64::new(x.powi(2 * k as i32 + 1), 0.0)), lambda, 12).unwrap();
            assert!(odd.norm() < 1e-14);
        }
    }
}

#[test]
fn real_extraction_matches_brute_force() {
    let f = RealKernelModel::opaque(1, 24, |x, _| Complex64::new((0.7 * x).exp() + 0.2 * x.powi(5), 0.0));
    for d in 2..=6u32 {
        for n in 0..=5 {
            let norm = harmonic_dim_real(rd(d), n) as f64;
            let brute = norm
                * tau_brute(
                    |x| ((0.7 * x).exp() + 0.2 * x.powi(5)) * gegenbauer_normalized(rd(d), n, x).unwrap(),
                    d,
                );
            let got = extract_coefficient_real(&f, n, rd(d), 0).unwrap();
            assert!(
                (got.re - brute).abs() < 1e-9 * brute.abs().max(1.0),
                "d={d} n={n}: {} vs {brute}",
                got.re
            );
        }
    }
}

#[test]
fn real_extraction_of_x_squared() {
    let f = RealKernelModel::monomial(CoefficientTable::scalar([(2usize, 1.0)]));
    for d in 1..=10u32 {
        let t = extract_table_real(&f, rd(d), 4).unwrap();
        let df = d as f64;
        assert!((t.value(&0, 0).re - 1.0 / (df + 1.0)).abs() < 1e-14);
        assert!((t.value(&2, 0).re - df / (df + 1.0)).abs() < 1e-14);
        for n in [1, 3, 4] {
            assert!(t.value(&n, 0).norm() < 1e-14);
        }
    }
}

#[test]
fn disc_polynomials_orthogonal_under_nu() {
    for q in 2..=4u32 {
        let alpha = q as f64 - 2.0;
        let idx = [(0usize, 0usize), (1, 0), (0, 1), (1, 1), (2, 1), (2, 0), (2, 2)];
        for &(m, n) in &idx {
            for &(m2, n2) in &idx {
                let g = |z: Complex64| {
                    disc_polynomial(alpha, m, n, z).unwrap() * disc_polynomial(alpha, m2, n2, z).unwrap().conj()
                };
                let got = nu_brute(g, alpha);
                let exact = if (m, n) == (m2, n2) {
                    1.0 / harmonic_dim_complex(cd(q), m, n) as f64
                } else {
                    0.0
                };
                assert!((got - exact).norm() < 1e-9, "q={q} ({m},{n})x({m2},{n2}): {got}");
            }
        }
    }
}

#[test]
fn complex_extraction_matches_brute_force() {
    let eval = |z: Complex64| (z * 0.5).exp() * (z.conj() * 0.3 + 1.0) + z.norm_sqr();
    let f = ComplexKernelModel::opaque(1, 20, move |z, _| eval(z));
    for q in 2..=4u32 {
        let alpha = q as f64 - 2.0;
        let t = extract_table_complex(&f, cd(q), 4).unwrap();
        for m in 0..=2usize {
            for n in 0..=2usize {
                let brute = nu_brute(|z| eval(z) * disc_polynomial(alpha, m, n, z).unwrap().conj(), alpha)
                    * harmonic_dim_complex(cd(q), m, n) as f64;
                let got = t.value(&(m, n), 0);
                assert!((got - brute).norm() < 1e-8, "q={q} ({m},{n}): {got} vs {brute}");
            }
        }
    }
}

#[test]
fn complex_extraction_examples() {
    for q in 2..=7u32 {
        let qf = q as f64;
        let f = ComplexKernelModel::monomial(CoefficientTable::scalar([((1usize, 1usize), 1.0)]));
        let t = extract_table_complex(&f, cd(q), 3).unwrap();
        assert!((t.value(&(0, 0), 0).re - 1.0 / qf).abs() < 1e-14);
        assert!((t.value(&(1, 1), 0).re - (qf - 1.0) / qf).abs() < 1e-14);
        assert!(t.value(&(1, 0), 0).norm() < 1e-14);

        let z = ComplexKernelModel::monomial(CoefficientTable::scalar([((1usize, 0usize), 1.0)]));
        let t = extract_table_complex(&z, cd(q), 3).unwrap();
        for (&idx, phi) in t.iter() {
            let expected = if idx == (1, 0) { 1.0 } else { 0.0 };
            assert!((phi.at(0) - expected).norm() < 1e-14, "{idx:?}");
        }
    }
}

/// `φ` on `Z_k` is positive definite iff its discrete Fourier transform is nonnegative.
#[test]
fn cyclic_pd_matches_fourier_transform() {
    let samples: Vec<(usize, Vec<f64>)> = vec![
        (2, vec![1.0, 0.5]),
        (2, vec![1.0, -1.0]),
        (2, vec![1.0, 1.2]),
        (3, vec![1.0, (2.0 * PI / 3.0).cos(), (4.0 * PI / 3.0).cos()]),
        (4, vec![1.0, 0.3, -0.2, 0.3]),
        (4, vec![1.0, 0.6, 0.6, 0.6]),
        (5, vec![2.0, 0.5, 0.1, 0.1, 0.5]),
        (6, vec![1.0, 0.9, 0.4, -0.8, 0.4, 0.9]),
    ];
    for (k, vals) in samples {
        let spectrum_min = (0..k)
            .map(|j| {
                (0..k)
                    .map(|u| vals[u] * (2.0 * PI * (j * u) as f64 / k as f64).cos())
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        let g = GroupSpec::cyclic(k).unwrap();
        let report = pd_check_group(&GroupFunction::from_real(&vals), &g, 1e-12).unwrap();
        assert_eq!(report.verdict.is_pd(), spectrum_min >= -1e-12, "Z_{k} {vals:?}");
        assert!((report.min_eigenvalue - spectrum_min).abs() < 1e-12);
    }
}

#[test]
fn z2_spectrum() {
    let g = GroupSpec::cyclic(2).unwrap();
    for p in -15..=15 {
        let a = p as f64 / 10.0;
        let report = pd_check_group(&GroupFunction::from_real(&[1.0, a]), &g, 1e-12).unwrap();
        assert!((report.min_eigenvalue - (1.0 - a.abs())).abs() < 1e-14);
        assert_eq!(report.verdict.is_pd(), a.abs() <= 1.0);
    }
}

#[test]
fn averaging_and_recovery_examples() {
    let g = GroupSpec::cyclic(2).unwrap();
    let phi = GroupFunction::from_real(&[1.0, 0.5]);
    let table = CoefficientTable::from_entries(2, [((1usize, 1usize), phi)]).unwrap();
    let f = ComplexKernelModel::monomial(table);
    let one = Complex64::new(1.0, 0.0);
    let avg = group_average(&f, &[0, 1], &[one, one], &g).unwrap();
    let z = Complex64::new(0.4, -0.3);
    assert!((avg.evaluate(z, 0).unwrap() - 3.0 * z.norm_sqr()).norm() < 1e-14);

    let rec = recover_group_coefficients(&f, &g, 1, 1, 1, 1e-12).unwrap();
    for (got, exact) in rec.a.iter().zip([3.0, 1.0, 2.0]) {
        assert!((got - exact).norm() < 1e-12);
    }
    assert!((rec.value - 0.5).norm() < 1e-12);
}

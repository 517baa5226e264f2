//! Sampled Gram-matrix positivity on `𝕊^d × L` and `Ω_{2q} × L`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::psd::{hermitian_psd_test, PsdReport};
use crate::specfun::{ComplexDim, RealDim};
use crate::sphere_complex::ComplexKernelModel;
use crate::sphere_real::RealKernelModel;

/// Default cap on the side length of the product-set Gram matrix.
pub const GRAM_CAP: usize = 400;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// `𝕊^d ⊂ ℝ^{d+1}`.
    Real(RealDim),
    /// `Ω_{2q} ⊂ ℂ^q`.
    Complex(ComplexDim),
}

impl Space {
    /// Number of coordinates of a point.
    pub fn ambient_dim(self) -> usize {
        match self {
            Space::Real(d) => d.get() as usize + 1,
            Space::Complex(q) => q.get() as usize,
        }
    }
}

/// Unit vectors in `ℝ^{d+1}` or `ℂ^q`; real points have zero imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePointSet {
    pub space: Space,
    pub points: Vec<Vec<Complex64>>,
    pub seed: u64,
}

impl SpherePointSet {
    /// Wraps given points after checking their length and norm.
    pub fn new(space: Space, points: Vec<Vec<Complex64>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != space.ambient_dim() {
                return Err(Error::InvalidInput(format!(
                    "point {i} has {} coordinates, expected {}",
                    p.len(),
                    space.ambient_dim()
                )));
            }
            if matches!(space, Space::Real(_)) && p.iter().any(|c| c.im != 0.0) {
                return Err(Error::InvalidInput(format!("point {i} of a real sphere is not real")));
            }
            let norm = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::InvalidInput(format!("point {i} has norm {norm}")));
            }
        }
        Ok(Self { space, points, seed: 0 })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `ξ·η = Σ ξ_l conj(η_l)`, clamped into `[−1, 1]` resp. the closed disc.
    pub fn scalar_product(&self, i: usize, j: usize) -> Complex64 {
        if i == j {
            return Complex64::new(1.0, 0.0);
        }
        let s: Complex64 = self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| a * b.conj())
            .sum();
        match self.space {
            Space::Real(_) => Complex64::new(s.re.clamp(-1.0, 1.0), 0.0),
            Space::Complex(_) if s.norm() > 1.0 => s / s.norm(),
            Space::Complex(_) => s,
        }
    }

    /// Embeds points of `𝕊^{d−1}` into the equator `x_{d+1} = 0` of `𝕊^d`.
    pub fn embed_equator(&self) -> Result<Self> {
        let Space::Real(d) = self.space else {
            return Err(Error::InvalidInput(
                "equator embedding is defined for real spheres".into(),
            ));
        };
        Ok(Self {
            space: Space::Real(d.raised(1)),
            points: self
                .points
                .iter()
                .map(|p| {
                    let mut q = p.clone();
                    q.push(Complex64::new(0.0, 0.0));
                    q
                })
                .collect(),
            seed: self.seed,
        })
    }
}

/// `count` i.i.d. uniform points: normalized standard Gaussian vectors, with
/// independent real and imaginary parts in the complex case.
pub fn sample_sphere(space: Space, count: usize, seed: u64) -> Result<SpherePointSet> {
    if count == 0 {
        return Err(Error::InvalidInput("point count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = space.ambient_dim();
    let complex = matches!(space, Space::Complex(_));
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = if complex { StandardNormal.sample(&mut rng) } else { 0.0 };
                Complex64::new(re, im)
            })
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            points.push(v.into_iter().map(|c| c / norm).collect());
        }
    }
    Ok(SpherePointSet { space, points, seed })
}

#[derive(Debug, Clone, Copy)]
pub enum Kernel<'a> {
    Real(&'a RealKernelModel),
    Complex(&'a ComplexKernelModel),
}

impl Kernel<'_> {
    fn group_order(&self) -> usize {
        match self {
            Kernel::Real(f) => f.group_order(),
            Kernel::Complex(f) => f.group_order(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    /// `(point index, group element)` of each row.
    pub labels: Vec<(usize, usize)>,
    pub psd: PsdReport,
}

impl GramReport {
    pub fn is_pd(&self) -> bool {
        self.psd.verdict.is_pd()
    }
}

/// Gram matrix with the `(point, element)` label of each row.
pub type LabelledGram = (DMatrix<Complex64>, Vec<(usize, usize)>);

/// The matrix `M[(i,a),(j,b)] = f(ξ_i·ξ_j, u_a⁻¹u_b)` and its row labels.
pub fn gram_matrix(
    kernel: Kernel<'_>,
    pts: &SpherePointSet,
    group: &GroupSpec,
    subset: &[usize],
) -> Result<LabelledGram> {
    if kernel.group_order() != group.order() {
        return Err(Error::InvalidInput(format!(
            "kernel has group order {}, group has {}",
            kernel.group_order(),
            group.order()
        )));
    }
    if let Some(&bad) = subset.iter().find(|&&u| u >= group.order()) {
        return Err(Error::InvalidInput(format!("group element {bad} out of range")));
    }
    match (kernel, pts.space) {
        (Kernel::Real(_), Space::Real(_)) | (Kernel::Complex(_), Space::Complex(_)) => {}
        _ => {
            return Err(Error::InvalidInput(
                "kernel and point set live on different spheres".into(),
            ))
        }
    }
    let labels: Vec<(usize, usize)> = (0..pts.len())
        .flat_map(|i| subset.iter().map(move |&a| (i, a)))
        .collect();
    let size = labels.len();
    let mut m = DMatrix::<Complex64>::zeros(size, size);
    for (r, &(i, a)) in labels.iter().enumerate() {
        for (c, &(j, b)) in labels.iter().enumerate() {
            let w = group.left_quotient(a, b);
            let s = pts.scalar_product(i, j);
            m[(r, c)] = match kernel {
                Kernel::Real(f) => f.evaluate(s.re, w)?,
                Kernel::Complex(f) => f.evaluate(s, w)?,
            };
        }
    }
    Ok((m, labels))
}

/// Hermitian PSD test of the product-set Gram matrix, capped at [`GRAM_CAP`] rows.
pub fn gram_check(
    kernel: Kernel<'_>,
    pts: &SpherePointSet,
    group: &GroupSpec,
    subset: &[usize],
    tol: f64,
) -> Result<GramReport> {
    gram_check_capped(kernel, pts, group, subset, tol, GRAM_CAP)
}

pub fn gram_check_capped(
    kernel: Kernel<'_>,
    pts: &SpherePointSet,
    group: &GroupSpec,
    subset: &[usize],
    tol: f64,
    cap: usize,
) -> Result<GramReport> {
    let size = pts.len() * subset.len();
    if size > cap {
        return Err(Error::InvalidInput(format!(
            "Gram matrix of size {size} exceeds the cap {cap}"
        )));
    }
    let (m, labels) = gram_matrix(kernel, pts, group, subset)?;
    Ok(GramReport {
        labels,
        psd: hermitian_psd_test(&m, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{CoefficientTable, GroupFunction};
    use crate::psd::{quadratic_form, Verdict};

    fn rd(d: u32) -> RealDim {
        RealDim::new(d).unwrap()
    }

    #[test]
    fn samples_are_unit_and_deterministic() {
        let a = sample_sphere(Space::Real(rd(1)), 3, 7).unwrap();
        let b = sample_sphere(Space::Real(rd(1)), 3, 7).unwrap();
        assert_eq!(a, b);
        for p in &a.points {
            assert!((p.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-14);
        }
        let c = sample_sphere(Space::Complex(ComplexDim::new(2).unwrap()), 5, 1).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!(c.scalar_product(i, j).norm() <= 1.0);
            }
        }
        assert_ne!(a, sample_sphere(Space::Real(rd(1)), 3, 8).unwrap());
    }

    #[test]
    fn identity_kernel_is_pd() {
        let f = RealKernelModel::monomial(CoefficientTable::scalar([(1, 1.0)]));
        let pts = sample_sphere(Space::Real(rd(2)), 12, 3).unwrap();
        let r = gram_check(Kernel::Real(&f), &pts, &GroupSpec::trivial(), &[0], 1e-10).unwrap();
        assert!(r.is_pd());
    }

    #[test]
    fn negated_identity_has_witness() {
        let f = RealKernelModel::monomial(CoefficientTable::scalar([(1, -1.0)]));
        let pts = sample_sphere(Space::Real(rd(2)), 6, 3).unwrap();
        let (m, _) = gram_matrix(Kernel::Real(&f), &pts, &GroupSpec::trivial(), &[0]).unwrap();
        let r = gram_check(Kernel::Real(&f), &pts, &GroupSpec::trivial(), &[0], 1e-10).unwrap();
        match r.psd.verdict {
            Verdict::NotPd {
                witness,
                quadratic_form: qf,
            } => {
                assert_eq!(witness.iter().filter(|c| c.norm() > 0.0).count(), 1);
                assert!(quadratic_form(&m, &witness).re < 0.0);
                assert_eq!(qf, -1.0);
            }
            Verdict::Pd => panic!("expected a witness"),
        }
    }

    #[test]
    fn schur_product_with_character_is_pd() {
        let g = GroupSpec::cyclic(4).unwrap();
        let chi = GroupFunction::character(4, 1);
        let t = CoefficientTable::from_entries(4, [((2, 1), chi)]).unwrap();
        let f = ComplexKernelModel::monomial(t);
        let pts = sample_sphere(Space::Complex(ComplexDim::new(3).unwrap()), 8, 11).unwrap();
        let r = gram_check(Kernel::Complex(&f), &pts, &g, &[0, 1, 2, 3], 1e-10).unwrap();
        assert!(r.is_pd());
        assert_eq!(r.labels.len(), 32);
    }

    #[test]
    fn equator_reproduces_lower_sphere() {
        let f = RealKernelModel::monomial(CoefficientTable::scalar([(0, 0.2), (2, 0.5), (3, 0.3)]));
        let pts = sample_sphere(Space::Real(rd(2)), 10, 5).unwrap();
        let up = pts.embed_equator().unwrap();
        let g = GroupSpec::trivial();
        let a = gram_check(Kernel::Real(&f), &pts, &g, &[0], 1e-10).unwrap();
        let b = gram_check(Kernel::Real(&f), &up, &g, &[0], 1e-10).unwrap();
        assert_eq!(a.is_pd(), b.is_pd());
        assert!((a.psd.min_eigenvalue - b.psd.min_eigenvalue).abs() < 1e-12);
    }

    #[test]
    fn cap_and_mismatch() {
        let f = RealKernelModel::monomial(CoefficientTable::scalar([(1, 1.0)]));
        let pts = sample_sphere(Space::Real(rd(2)), 30, 5).unwrap();
        assert!(gram_check_capped(Kernel::Real(&f), &pts, &GroupSpec::trivial(), &[0], 1e-10, 20).is_err());
        let cpts = sample_sphere(Space::Complex(ComplexDim::new(2).unwrap()), 3, 5).unwrap();
        assert!(gram_check(Kernel::Real(&f), &cpts, &GroupSpec::trivial(), &[0], 1e-10).is_err());
    }
}

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schoenberg::sphere_complex::DiscIndex;
use schoenberg::{CoefficientTable, Complex64, GroupFunction, GroupSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn klein() -> GroupSpec {
    let z2 = GroupSpec::cyclic(2).unwrap();
    GroupSpec::product(&z2, &z2)
}

/// Z₁ … Z₈ or the Klein four-group, chosen at random.
pub fn random_group(rng: &mut ChaCha8Rng, max_order: usize) -> GroupSpec {
    if max_order >= 4 && rng.random_bool(0.2) {
        klein()
    } else {
        GroupSpec::cyclic(rng.random_range(1..=max_order)).unwrap()
    }
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// `φ(u) = Σ_v conj(g(v)) g(vu)` for random `g`, scaled to `φ(e) = scale`.
pub fn random_pd_function(rng: &mut ChaCha8Rng, group: &GroupSpec, scale: f64) -> GroupFunction {
    let g: Vec<Complex64> = (0..group.order()).map(|_| random_complex(rng)).collect();
    let phi = GroupFunction::autocorrelation(group, &g).unwrap();
    let e = phi.at_identity().re;
    phi.scale(Complex64::new(scale / e, 0.0))
}

/// Finitely supported table over `0..=max_n` with pd coefficient functions.
pub fn random_real_table(
    rng: &mut ChaCha8Rng,
    group: &GroupSpec,
    max_n: usize,
    count: usize,
) -> CoefficientTable<usize> {
    let mut t = CoefficientTable::new(group.order());
    for _ in 0..count {
        let n = rng.random_range(0..=max_n);
        let scale = rng.random_range(0.05..1.0);
        t.add(n, &random_pd_function(rng, group, scale)).unwrap();
    }
    t
}

/// Finitely supported table with `m + n ≤ max_total` and pd coefficient functions.
pub fn random_disc_table(
    rng: &mut ChaCha8Rng,
    group: &GroupSpec,
    max_total: usize,
    count: usize,
) -> CoefficientTable<DiscIndex> {
    let mut t = CoefficientTable::new(group.order());
    for _ in 0..count {
        let total = rng.random_range(0..=max_total);
        let m = rng.random_range(0..=total);
        let scale = rng.random_range(0.05..1.0);
        t.add((m, total - m), &random_pd_function(rng, group, scale)).unwrap();
    }
    t
}

//! Group functions and sparse tables of coefficient functions.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::GroupSpec;

/// A function `φ: L → ℂ` on a finite group, stored densely by element id.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn constant(order: usize, value: Complex64) -> Self {
        Self::new(vec![value; order])
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(order, Complex64::new(0.0, 0.0))
    }

    /// The character `u ↦ e^{2πi j u / k}` of `ℤ_k`.
    pub fn character(k: usize, j: usize) -> Self {
        Self::new(
            (0..k)
                .map(|u| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j * u % k) as f64 / k as f64))
                .collect(),
        )
    }

    /// `φ(u) = Σ_v conj(g(v)) g(vu)`, which is positive definite for any `g`.
    pub fn autocorrelation(group: &GroupSpec, g: &[Complex64]) -> Result<Self> {
        if g.len() != group.order() {
            return Err(Error::InvalidInput(format!(
                "generator has {} values for a group of order {}",
                g.len(),
                group.order()
            )));
        }
        Ok(Self::new(
            (0..group.order())
                .map(|u| (0..group.order()).map(|v| g[v].conj() * g[group.mul(v, u)]).sum())
                .collect(),
        ))
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, u: usize) -> Complex64 {
        self.values[u]
    }

    /// Value at the neutral element.
    pub fn at_identity(&self) -> Complex64 {
        self.values[0]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    /// Largest `|φ(u⁻¹) − conj(φ(u))|`.
    pub fn hermitian_defect(&self, group: &GroupSpec) -> f64 {
        (0..self.order())
            .map(|u| (self.values[group.inv(u)] - self.values[u].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &GroupFunction {
    type Output = GroupFunction;
    fn add(self, rhs: &GroupFunction) -> GroupFunction {
        GroupFunction::new(self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect())
    }
}

/// Pointwise product.
impl Mul for &GroupFunction {
    type Output = GroupFunction;
    fn mul(self, rhs: &GroupFunction) -> GroupFunction {
        GroupFunction::new(self.values.iter().zip(&rhs.values).map(|(a, b)| a * b).collect())
    }
}

/// Sparse map from an expansion index to its coefficient function.
///
/// `I` is `usize` for real-sphere expansions and `(usize, usize)` for
/// complex-sphere ones.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<I: Ord> {
    group_order: usize,
    entries: BTreeMap<I, GroupFunction>,
}

impl<I: Ord + Copy> CoefficientTable<I> {
    pub fn new(group_order: usize) -> Self {
        Self {
            group_order,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(group_order: usize, entries: impl IntoIterator<Item = (I, GroupFunction)>) -> Result<Self> {
        let mut table = Self::new(group_order);
        for (i, phi) in entries {
            table.insert(i, phi)?;
        }
        Ok(table)
    }

    /// Table over the trivial group from scalar coefficients.
    pub fn scalar(entries: impl IntoIterator<Item = (I, f64)>) -> Self {
        let mut table = Self::new(1);
        for (i, v) in entries {
            table.add(i, &GroupFunction::from_real(&[v])).expect("order 1");
        }
        table
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    fn check_order(&self, phi: &GroupFunction) -> Result<()> {
        if phi.order() != self.group_order {
            return Err(Error::InvalidInput(format!(
                "group function has {} values, table expects {}",
                phi.order(),
                self.group_order
            )));
        }
        Ok(())
    }

    pub fn insert(&mut self, index: I, phi: GroupFunction) -> Result<()> {
        self.check_order(&phi)?;
        self.entries.insert(index, phi);
        Ok(())
    }

    /// Adds `phi` to the entry at `index`.
    pub fn add(&mut self, index: I, phi: &GroupFunction) -> Result<()> {
        self.check_order(phi)?;
        match self.entries.get_mut(&index) {
            Some(existing) => *existing = &*existing + phi,
            None => {
                self.entries.insert(index, phi.clone());
            }
        }
        Ok(())
    }

    pub fn get(&self, index: &I) -> Option<&GroupFunction> {
        self.entries.get(index)
    }

    /// Coefficient at `(index, u)`, zero when the index is not stored.
    pub fn value(&self, index: &I, u: usize) -> Complex64 {
        self.entries
            .get(index)
            .map_or(Complex64::new(0.0, 0.0), |phi| phi.at(u))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&I, &GroupFunction)> {
        self.entries.iter()
    }

    pub fn indices(&self) -> impl DoubleEndedIterator<Item = &I> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ Re φ_i(e_L)`, the ℓ¹ mass of a positive definite table.
    pub fn mass_at_identity(&self) -> f64 {
        self.entries.values().map(|phi| phi.at_identity().re).sum()
    }

    /// Largest hermitian defect over all stored functions.
    pub fn hermitian_defect(&self, group: &GroupSpec) -> f64 {
        self.entries
            .values()
            .map(|phi| phi.hermitian_defect(group))
            .fold(0.0, f64::max)
    }

    pub fn map_values(&self, f: impl Fn(&I, &GroupFunction) -> GroupFunction) -> Self {
        Self {
            group_order: self.group_order,
            entries: self.entries.iter().map(|(i, phi)| (*i, f(i, phi))).collect(),
        }
    }

    /// Largest `|self − other|` over the union of indices and all elements.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in self.entries.keys().chain(other.entries.keys()) {
            for u in 0..self.group_order {
                worst = worst.max((self.value(i, u) - other.value(i, u)).norm());
            }
        }
        worst
    }

    /// Drops entries whose values are all below `tol` in modulus.
    pub fn pruned(&self, tol: f64) -> Self {
        Self {
            group_order: self.group_order,
            entries: self
                .entries
                .iter()
                .filter(|(_, phi)| phi.values().iter().any(|v| v.norm() > tol))
                .map(|(i, phi)| (*i, phi.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_and_lookup() {
        let mut t = CoefficientTable::<usize>::new(2);
        t.insert(0, GroupFunction::from_real(&[0.5, 0.1])).unwrap();
        t.add(2, &GroupFunction::from_real(&[0.25, -0.2])).unwrap();
        t.add(2, &GroupFunction::from_real(&[0.25, 0.0])).unwrap();
        assert_eq!(t.mass_at_identity(), 1.0);
        assert_eq!(t.value(&2, 1), Complex64::new(-0.2, 0.0));
        assert_eq!(t.value(&7, 0), Complex64::new(0.0, 0.0));
        assert!(t.insert(1, GroupFunction::from_real(&[1.0])).is_err());
    }

    #[test]
    fn characters_of_cyclic_group() {
        let chi = GroupFunction::character(4, 1);
        assert!((chi.at(1) - Complex64::i()).norm() < 1e-15);
        let g = GroupSpec::cyclic(4).unwrap();
        assert!(chi.hermitian_defect(&g) < 1e-15);
    }

    #[test]
    fn autocorrelation_is_hermitian() {
        let g = GroupSpec::cyclic(3).unwrap();
        let gen = [
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.3, 0.2),
            Complex64::new(0.0, 1.0),
        ];
        let phi = GroupFunction::autocorrelation(&g, &gen).unwrap();
        assert!(phi.hermitian_defect(&g) < 1e-15);
        assert!(phi.at_identity().re > 0.0);
    }
}

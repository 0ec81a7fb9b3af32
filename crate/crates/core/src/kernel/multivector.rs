use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{Float, Zero};

use super::blade::Blade;
use super::KernelError;
use crate::scalar::Real;

/// Complex-coefficient multivector over an `n`-dimensional Euclidean space.
///
/// Terms are kept sparse: any coefficient whose magnitude falls below
/// [`Real::prune_tolerance`] times the largest coefficient is dropped after
/// every operation.
#[derive(Clone, PartialEq)]
pub struct Multivector<T: Real> {
    dim: u32,
    terms: BTreeMap<Blade, Complex<T>>,
}

impl<T: Real> Multivector<T> {
    pub fn zero(dim: u32) -> Self {
        Multivector { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: u32, value: Complex<T>) -> Self {
        Self::from_raw(dim, [(Blade::scalar(), value)])
    }

    /// Builds from blade/coefficient pairs, summing repeated blades.
    pub fn from_terms<I>(dim: u32, terms: I) -> Result<Self, KernelError>
    where
        I: IntoIterator<Item = (Blade, Complex<T>)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        for (b, _) in &terms {
            if b.max_index() > dim {
                return Err(KernelError::IndexOutOfRange { index: b.max_index(), dim });
            }
        }
        Ok(Self::from_raw(dim, terms))
    }

    /// Grade-1 multivector `Σ c_k σ_k`.
    pub fn vector<I>(dim: u32, components: I) -> Result<Self, KernelError>
    where
        I: IntoIterator<Item = (u32, Complex<T>)>,
    {
        let mut terms = Vec::new();
        for (k, c) in components {
            if k == 0 || k > dim {
                return Err(KernelError::IndexOutOfRange { index: k, dim });
            }
            terms.push((Blade::vector(k), c));
        }
        Ok(Self::from_raw(dim, terms))
    }

    fn from_raw<I>(dim: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Blade, Complex<T>)>,
    {
        let mut map: BTreeMap<Blade, Complex<T>> = BTreeMap::new();
        for (b, c) in terms {
            *map.entry(b).or_insert_with(Complex::zero) += c;
        }
        let mut mv = Multivector { dim, terms: map };
        mv.prune();
        mv
    }

    fn prune(&mut self) {
        let max = self.terms.values().map(|c| c.norm()).fold(T::zero(), T::max);
        let floor = max * T::prune_tolerance();
        self.terms.retain(|_, c| {
            let m = c.norm();
            m > T::zero() && m >= floor
        });
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: &Blade) -> Complex<T> {
        self.terms.get(blade).copied().unwrap_or_else(Complex::zero)
    }

    /// Coefficient of the blade spanned by `indices` in the given order,
    /// e.g. `[4, 1]` reads the `σ14` coefficient with its sign flipped.
    pub fn oriented_coefficient(&self, indices: &[u32]) -> Complex<T> {
        let (sign, blade) = Blade::from_indices(indices);
        let c = self.coefficient(&blade);
        if sign.is_negative() {
            -c
        } else {
            c
        }
    }

    /// `⟨Z⟩₀`
    pub fn scalar_part(&self) -> Complex<T> {
        self.coefficient(&Blade::scalar())
    }

    /// Projection onto grade `k`.
    pub fn grade(&self, k: usize) -> Self {
        Multivector {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == k)
                .map(|(b, c)| (b.clone(), *c))
                .collect(),
        }
    }

    /// Grade of every stored term if they all share one, `None` otherwise
    /// (including the zero multivector).
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(Blade::grade);
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    /// Same terms in a larger space.
    pub fn with_dim(&self, dim: u32) -> Result<Self, KernelError> {
        let used = self.terms.keys().map(Blade::max_index).max().unwrap_or(0);
        if used > dim {
            return Err(KernelError::IndexOutOfRange { index: used, dim });
        }
        Ok(Multivector { dim, terms: self.terms.clone() })
    }

    fn check_dim(&self, other: &Self) -> Result<(), KernelError> {
        if self.dim != other.dim {
            return Err(KernelError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, KernelError> {
        self.check_dim(other)?;
        Ok(Self::from_raw(
            self.dim,
            self.terms.iter().chain(other.terms.iter()).map(|(b, c)| (b.clone(), *c)),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, KernelError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|_, c| -c)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        self.map_coefficients(|_, c| c * factor)
    }

    fn map_coefficients<F>(&self, f: F) -> Self
    where
        F: Fn(&Blade, Complex<T>) -> Complex<T>,
    {
        Self::from_raw(self.dim, self.terms.iter().map(|(b, c)| (b.clone(), f(b, *c))))
    }

    /// Classic geometric product, the bilinear extension of
    /// [`Blade::mul`].
    pub fn geometric_product(&self, other: &Self) -> Result<Self, KernelError> {
        self.check_dim(other)?;
        let mut acc = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (sign, blade) = a.mul(b);
                let c = *ca * *cb;
                acc.push((blade, if sign.is_negative() { -c } else { c }));
            }
        }
        Ok(Self::from_raw(self.dim, acc))
    }

    /// Reverse: grade-k terms scaled by `(-1)^{k(k-1)/2}`.
    pub fn reverse(&self) -> Self {
        self.map_coefficients(|b, c| if b.reverse_sign().is_negative() { -c } else { c })
    }

    /// Complex conjugate of every coefficient; blades unchanged.
    pub fn conjugate(&self) -> Self {
        self.map_coefficients(|_, c| c.conj())
    }

    /// `Σ |coefficient|²`
    pub fn coefficient_energy(&self) -> T {
        self.terms.values().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b)
    }

    /// `‖Z‖² = ⟨Z (Z†)*⟩₀`, evaluated through the algebra.
    pub fn norm_squared(&self) -> Result<T, KernelError> {
        let g = self.geometric_product(&self.reverse().conjugate())?.scalar_part();
        let scale = self.coefficient_energy();
        let tol = T::identity_tolerance() * scale;
        if g.im.abs() > tol || g.re < -tol {
            return Err(KernelError::NonRealNorm {
                re: g.re.to_f64().unwrap_or(f64::NAN),
                im: g.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(g.re.max(T::zero()))
    }

    pub fn norm(&self) -> Result<T, KernelError> {
        self.norm_squared().map(Float::sqrt)
    }

    /// True when both have the same dimension and every coefficient agrees to
    /// `tol` times the larger multivector's largest coefficient.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let scale = self
            .terms
            .values()
            .chain(other.terms.values())
            .map(|c| c.norm())
            .fold(T::zero(), T::max);
        let bound = tol * scale;
        let blades = self.terms.keys().chain(other.terms.keys());
        blades.into_iter().all(|b| (self.coefficient(b) - other.coefficient(b)).norm() <= bound)
    }
}

impl<T: Real> fmt::Debug for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(n={}; ", self.dim)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl<T: Real> fmt::Display for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({} {} j{}){}", c.re, if c.im < T::zero() { "-" } else { "+" }, c.im.abs(), b)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn b(ix: &[u32]) -> Blade {
        Blade::from_indices(ix).1
    }

    #[test]
    fn additive_identity_and_zero_scaling() {
        let z = Multivector::vector(3, [(1, c(1.0, 2.0)), (3, c(-4.0, 0.5))]).unwrap();
        assert_eq!(z.add(&Multivector::zero(3)).unwrap(), z);
        assert!(z.scale(C::zero()).is_empty());
    }

    #[test]
    fn coefficients_combine_and_cancel() {
        let a = Multivector::vector(2, [(1, c(1.0, 1.0))]).unwrap();
        let b2 = Multivector::vector(2, [(1, c(1.0, -1.0))]).unwrap();
        let s = a.add(&b2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&b(&[1])), c(2.0, 0.0));
        assert!(a.sub(&a).unwrap().is_empty());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Multivector::<f64>::zero(2);
        let b3 = Multivector::<f64>::zero(3);
        assert!(matches!(a.add(&b3), Err(KernelError::DimensionMismatch { left: 2, right: 3 })));
        assert!(a.geometric_product(&b3).is_err());
    }

    #[test]
    fn index_out_of_range() {
        assert!(Multivector::<f64>::vector(2, [(3, c(1.0, 0.0))]).is_err());
        assert!(Multivector::<f64>::vector(2, [(0, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn prune_relative_to_largest() {
        let z = Multivector::vector(2, [(1, c(1.0, 0.0)), (2, c(1e-14, 0.0))]).unwrap();
        assert_eq!(z.len(), 1);
        let tiny = Multivector::vector(2, [(2, c(1e-14, 0.0))]).unwrap();
        assert_eq!(tiny.len(), 1);
    }

    #[test]
    fn geometric_products_of_vectors() {
        let s1 = Multivector::vector(2, [(1, c(1.0, 0.0))]).unwrap();
        let p = s1.geometric_product(&s1).unwrap();
        assert_eq!(p.scalar_part(), c(1.0, 0.0));
        assert_eq!(p.len(), 1);

        let a = Multivector::vector(2, [(1, c(2.0, 1.0))]).unwrap();
        let bb = Multivector::vector(2, [(2, c(0.0, 3.0))]).unwrap();
        let p = a.geometric_product(&bb).unwrap();
        assert_eq!(p.coefficient(&b(&[1, 2])), c(2.0, 1.0) * c(0.0, 3.0));
        assert_eq!(p.len(), 1);

        // (σ1+σ2)(σ1−σ2) = 1 − σ12 + σ21 − 1 = −2σ12
        let u = Multivector::vector(2, [(1, c(1.0, 0.0)), (2, c(1.0, 0.0))]).unwrap();
        let v = Multivector::vector(2, [(1, c(1.0, 0.0)), (2, c(-1.0, 0.0))]).unwrap();
        let p = u.geometric_product(&v).unwrap();
        assert_eq!(p.scalar_part(), C::zero());
        assert_eq!(p.coefficient(&b(&[1, 2])), c(-2.0, 0.0));
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn vector_product_splits_into_inner_and_outer() {
        let u = Multivector::vector(3, [(1, c(1.0, 2.0)), (2, c(-0.5, 0.0)), (3, c(0.0, 1.0))]).unwrap();
        let v = Multivector::vector(3, [(1, c(3.0, 0.0)), (3, c(1.0, -1.0))]).unwrap();
        let uv = u.geometric_product(&v).unwrap();
        let vu = v.geometric_product(&u).unwrap();
        let inner = uv.add(&vu).unwrap().scale(c(0.5, 0.0));
        let outer = uv.sub(&vu).unwrap().scale(c(0.5, 0.0));
        assert_eq!(inner.homogeneous_grade(), Some(0));
        assert_eq!(outer.homogeneous_grade(), Some(2));
        let dot = c(1.0, 2.0) * c(3.0, 0.0) + c(0.0, 1.0) * c(1.0, -1.0);
        assert!((inner.scalar_part() - dot).norm() < 1e-12);
        assert!(uv.approx_eq(&inner.add(&outer).unwrap(), 1e-12));
    }

    #[test]
    fn reverse_signs_by_grade() {
        let s0 = Multivector::scalar(3, c(2.0, 0.0));
        assert_eq!(s0.reverse(), s0);
        let biv = Multivector::from_terms(3, [(b(&[2, 3]), c(3.0, 4.0))]).unwrap();
        assert_eq!(biv.reverse().coefficient(&b(&[2, 3])), c(-3.0, -4.0));
        let tri = Multivector::from_terms(3, [(b(&[1, 2, 3]), c(1.0, 0.0))]).unwrap();
        assert_eq!(tri.reverse().coefficient(&b(&[1, 2, 3])), c(-1.0, 0.0));
    }

    #[test]
    fn conjugate_flips_imaginary_parts() {
        let z = Multivector::vector(1, [(1, c(1.0, 1.0))]).unwrap();
        assert_eq!(z.conjugate().coefficient(&b(&[1])), c(1.0, -1.0));
        let r = Multivector::vector(2, [(1, c(1.0, 0.0)), (2, c(-2.0, 0.0))]).unwrap();
        assert_eq!(r.conjugate(), r);
    }

    #[test]
    fn norms() {
        let z = Multivector::vector(1, [(1, c(3.0, 4.0))]).unwrap();
        assert!((z.norm().unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(Multivector::<f64>::zero(4).norm().unwrap(), 0.0);
        let mixed = Multivector::from_terms(
            4,
            [
                (Blade::scalar(), c(1.0, -1.0)),
                (b(&[2]), c(0.0, 2.0)),
                (b(&[1, 4]), c(-3.0, 1.0)),
                (b(&[1, 2, 3]), c(0.5, 0.5)),
            ],
        )
        .unwrap();
        let expect = 2.0 + 4.0 + 10.0 + 0.5;
        assert!((mixed.norm_squared().unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn oriented_coefficient_reads_row_major_keys() {
        let z = Multivector::from_terms(4, [(b(&[1, 4]), c(2.0, 1.0))]).unwrap();
        assert_eq!(z.oriented_coefficient(&[4, 1]), c(-2.0, -1.0));
        assert_eq!(z.oriented_coefficient(&[1, 4]), c(2.0, 1.0));
    }

    #[test]
    fn with_dim_rejects_shrinking_below_used_index() {
        let z = Multivector::vector(4, [(4, c(1.0, 0.0))]).unwrap();
        assert!(z.with_dim(3).is_err());
        assert_eq!(z.with_dim(6).unwrap().dim(), 6);
    }

    #[test]
    fn grade_projection() {
        let z = Multivector::from_terms(
            3,
            [(Blade::scalar(), c(1.0, 0.0)), (b(&[2]), c(2.0, 0.0)), (b(&[1, 3]), c(3.0, 0.0))],
        )
        .unwrap();
        assert_eq!(z.grade(1).len(), 1);
        assert_eq!(z.grade(2).coefficient(&b(&[1, 3])), c(3.0, 0.0));
        assert_eq!(z.homogeneous_grade(), None);
    }
}

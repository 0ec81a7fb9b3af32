use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_traits::One;

use super::{KernelError, Multivector};
use crate::scalar::{normalize_angle, Real};

/// Per-order phase angles (radians) of the associated voltage harmonic,
/// consumed by the rotation in [`generalized_product`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhasorTags<T: Real>(BTreeMap<u32, T>);

impl<T: Real> PhasorTags<T> {
    pub fn new() -> Self {
        PhasorTags(BTreeMap::new())
    }

    /// Inserts a tag; the angle is wrapped into (-pi, pi].
    pub fn insert(&mut self, order: u32, alpha: T) {
        self.0.insert(order, normalize_angle(alpha));
    }

    pub fn get(&self, order: u32) -> Option<T> {
        self.0.get(&order).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, T)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }
}

impl<T: Real> FromIterator<(u32, T)> for PhasorTags<T> {
    fn from_iter<I: IntoIterator<Item = (u32, T)>>(iter: I) -> Self {
        let mut tags = PhasorTags::new();
        for (k, a) in iter {
            tags.insert(k, a);
        }
        tags
    }
}

/// Pure grade-1 multivector with a phase tag for every stored order.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedVector<T: Real> {
    vector: Multivector<T>,
    tags: PhasorTags<T>,
}

impl<T: Real> TaggedVector<T> {
    pub fn new(vector: Multivector<T>, tags: PhasorTags<T>) -> Result<Self, KernelError> {
        if !vector.is_zero() && vector.homogeneous_grade() != Some(1) {
            return Err(KernelError::NotGradeOne { found: vector.homogeneous_grade() });
        }
        for (b, _) in vector.terms() {
            let order = b.indices()[0];
            if tags.get(order).is_none() {
                return Err(KernelError::MissingPhasorTag { order });
            }
        }
        Ok(TaggedVector { vector, tags })
    }

    pub fn vector(&self) -> &Multivector<T> {
        &self.vector
    }

    pub fn tags(&self) -> &PhasorTags<T> {
        &self.tags
    }

    fn components(&self) -> impl Iterator<Item = (u32, Complex<T>, T)> + '_ {
        self.vector.terms().map(move |(b, c)| {
            let k = b.indices()[0];
            // presence checked in `new`
            (k, *c, self.tags.get(k).unwrap_or_else(T::zero))
        })
    }
}

/// Rotation applied to the product of the order-`p` term of the left operand
/// with the order-`q` term of the right operand: `e^{-2j(α_p − α_q)}` when
/// `p > q` and both orders are common, identity otherwise.
pub fn rotation<T: Real>(p: u32, q: u32, alpha_p: T, alpha_q: T, common: &BTreeSet<u32>) -> Complex<T> {
    if p > q && common.contains(&p) && common.contains(&q) {
        Complex::from_polar(T::one(), -(alpha_p - alpha_q) * T::lit(2.0))
    } else {
        Complex::one()
    }
}

/// Generalized complex geometric product of two tagged vectors.
///
/// Each term pair contributes `ℜ(p,q)·z_p·z'_q·σ_pσ_q`. With equal tags over
/// `common` every rotation is the identity and this is the classic product.
pub fn generalized_product<T: Real>(
    lhs: &TaggedVector<T>,
    rhs: &TaggedVector<T>,
    common: &BTreeSet<u32>,
) -> Result<Multivector<T>, KernelError> {
    let dim = lhs.vector.dim();
    if dim != rhs.vector.dim() {
        return Err(KernelError::DimensionMismatch { left: dim, right: rhs.vector.dim() });
    }
    let mut terms = Vec::with_capacity(lhs.vector.len() * rhs.vector.len());
    for (p, zp, alpha_p) in lhs.components() {
        for (q, zq, alpha_q) in rhs.components() {
            let r = rotation(p, q, alpha_p, alpha_q, common);
            let (sign, blade) = super::Blade::from_indices(&[p, q]);
            let c = r * zp * zq;
            terms.push((blade, if sign.is_negative() { -c } else { c }));
        }
    }
    let out = Multivector::from_terms(dim, terms)?;
    debug_assert!(out.terms().all(|(b, _)| b.grade() == 0 || b.grade() == 2));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Blade;

    fn deg(x: f64) -> f64 {
        x.to_radians()
    }

    fn polar(m: f64, a_deg: f64) -> Complex<f64> {
        Complex::from_polar(m, deg(a_deg))
    }

    fn tagged(dim: u32, comps: &[(u32, Complex<f64>, f64)]) -> TaggedVector<f64> {
        let v = Multivector::vector(dim, comps.iter().map(|&(k, c, _)| (k, c))).unwrap();
        let tags = comps.iter().map(|&(k, _, a)| (k, a)).collect();
        TaggedVector::new(v, tags).unwrap()
    }

    #[test]
    fn like_order_product_is_scalar() {
        let common: BTreeSet<u32> = [1, 2].into();
        let u = tagged(2, &[(1, polar(200.0, 0.0), 0.0)]);
        let i = tagged(2, &[(1, polar(20.0, -30.0), 0.0)]);
        let s = generalized_product(&u, &i, &common).unwrap();
        let v = s.scalar_part();
        assert!((v.re - 3464.1016).abs() < 1e-3);
        assert!((v.im + 2000.0).abs() < 1e-9);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn lower_triangle_cross_term_is_rotated() {
        let common: BTreeSet<u32> = [1, 2].into();
        let u = tagged(2, &[(2, polar(200.0, -30.0), deg(-30.0))]);
        let i = tagged(2, &[(1, polar(20.0, -30.0), 0.0)]);
        let s = generalized_product(&u, &i, &common).unwrap();
        let c = s.coefficient(&Blade::from_indices(&[1, 2]).1);
        assert!((c.re + 4000.0).abs() < 1e-9, "{c}");
        assert!(c.im.abs() < 1e-9, "{c}");
        assert!((s.oriented_coefficient(&[2, 1]).re - 4000.0).abs() < 1e-9);
    }

    #[test]
    fn no_rotation_outside_common_set() {
        let common: BTreeSet<u32> = [1].into();
        let u = tagged(4, &[(4, polar(100.0, 30.0), deg(30.0))]);
        let i = tagged(4, &[(1, polar(20.0, -30.0), 0.0)]);
        let s = generalized_product(&u, &i, &common).unwrap();
        assert!((s.oriented_coefficient(&[4, 1]) - Complex::new(2000.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn equal_tags_reduce_to_classic_product() {
        let common: BTreeSet<u32> = [1, 2, 3].into();
        let a = 0.7;
        let u = tagged(3, &[(1, polar(2.0, 10.0), a), (2, polar(1.0, -40.0), a), (3, polar(0.5, 5.0), a)]);
        let i = tagged(3, &[(1, polar(3.0, 15.0), a), (2, polar(0.2, 80.0), a), (3, polar(1.5, 0.0), a)]);
        let g = generalized_product(&u, &i, &common).unwrap();
        let classic = u.vector().geometric_product(i.vector()).unwrap();
        assert!(g.approx_eq(&classic, 1e-14));
    }

    #[test]
    fn rejects_bad_operands() {
        let biv = Multivector::from_terms(2, [(Blade::from_indices(&[1, 2]).1, Complex::new(1.0, 0.0))]).unwrap();
        assert!(matches!(
            TaggedVector::new(biv, PhasorTags::new()),
            Err(KernelError::NotGradeOne { found: Some(2) })
        ));
        let v = Multivector::vector(2, [(2, Complex::new(1.0, 0.0))]).unwrap();
        let tags: PhasorTags<f64> = [(1, 0.0)].into_iter().collect();
        assert!(matches!(TaggedVector::new(v, tags), Err(KernelError::MissingPhasorTag { order: 2 })));
    }

    #[test]
    fn dimension_mismatch() {
        let u = tagged(2, &[(1, polar(1.0, 0.0), 0.0)]);
        let i = tagged(3, &[(1, polar(1.0, 0.0), 0.0)]);
        assert!(generalized_product(&u, &i, &BTreeSet::new()).is_err());
    }
}

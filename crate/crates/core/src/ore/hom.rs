//! Extension of monoid homomorphisms `S → 𝒢` to group homomorphisms `G → 𝒢`.

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::One;

use super::{Fraction, OreMonoid};
use crate::error::{Error, Result};

/// A computable group, the codomain of [`extend_hom`].
pub trait TargetGroup {
    type Elem: Clone + PartialEq + Debug;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// `ℚ₊*` under multiplication.
#[derive(Clone, Copy, Debug, Default)]
pub struct PositiveRationals;

impl TargetGroup for PositiveRationals {
    type Elem = Rational64;
    fn identity(&self) -> Rational64 {
        Rational64::one()
    }
    fn mul(&self, a: &Rational64, b: &Rational64) -> Rational64 {
        a * b
    }
    fn inv(&self, a: &Rational64) -> Rational64 {
        a.recip()
    }
}

/// `ℤ` under addition.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl TargetGroup for Integers {
    type Elem = i64;
    fn identity(&self) -> i64 {
        0
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn inv(&self, a: &i64) -> i64 {
        -a
    }
}

/// `ℤ²` under addition.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntegersSquared;

impl TargetGroup for IntegersSquared {
    type Elem = [i64; 2];
    fn identity(&self) -> [i64; 2] {
        [0, 0]
    }
    fn mul(&self, a: &[i64; 2], b: &[i64; 2]) -> [i64; 2] {
        [a[0] + b[0], a[1] + b[1]]
    }
    fn inv(&self, a: &[i64; 2]) -> [i64; 2] {
        [-a[0], -a[1]]
    }
}

/// The extension `x⁻¹y ↦ φ(x)⁻¹φ(y)` of a multiplicative `φ: S → 𝒢`.
pub struct ExtendedHom<'a, M, T, F> {
    monoid: &'a M,
    target: &'a T,
    phi: F,
}

impl<M, T, F> ExtendedHom<'_, M, T, F>
where
    M: OreMonoid,
    T: TargetGroup,
    F: Fn(&M::Elem) -> T::Elem,
{
    pub fn eval(&self, g: &Fraction<M::Elem>) -> T::Elem {
        self.target.mul(&self.target.inv(&(self.phi)(&g.x)), &(self.phi)(&g.y))
    }

    pub fn on_monoid(&self, s: &M::Elem) -> T::Elem {
        self.eval(&self.monoid.embed(s))
    }
}

/// Checks `φ(e) = 1` and `φ(st) = φ(s)φ(t)` on all pairs drawn from `samples`,
/// then returns the extension to `G`.
pub fn extend_hom<'a, M, T, F>(monoid: &'a M, target: &'a T, phi: F, samples: &[M::Elem]) -> Result<ExtendedHom<'a, M, T, F>>
where
    M: OreMonoid,
    T: TargetGroup,
    F: Fn(&M::Elem) -> T::Elem,
{
    let e = monoid.identity();
    if phi(&e) != target.identity() {
        return Err(Error::NotMultiplicative(format!("{e:?}"), format!("{e:?}")));
    }
    for s in samples {
        for t in samples {
            let lhs = phi(&monoid.mul(s, t));
            let rhs = target.mul(&phi(s), &phi(t));
            if lhs != rhs {
                return Err(Error::NotMultiplicative(format!("{s:?}"), format!("{t:?}")));
            }
        }
    }
    Ok(ExtendedHom { monoid, target, phi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::{NatAdd2, NatMul};

    #[test]
    fn inclusion_into_positive_rationals() {
        let m = NatMul::default();
        let samples: Vec<u64> = (1..=12).collect();
        let ext = extend_hom(&m, &PositiveRationals, |&s| Rational64::from_integer(s as i64), &samples).unwrap();
        assert_eq!(ext.eval(&Fraction::new(2, 3)), Rational64::new(3, 2));
        assert_eq!(ext.on_monoid(&7), Rational64::from_integer(7));
    }

    #[test]
    fn constant_hom_extends_to_constant() {
        let m = NatMul::default();
        let samples: Vec<u64> = (1..=6).collect();
        let ext = extend_hom(&m, &PositiveRationals, |_| Rational64::one(), &samples).unwrap();
        assert_eq!(ext.eval(&Fraction::new(5, 9)), Rational64::one());
    }

    #[test]
    fn difference_hom_on_n2() {
        let m = NatAdd2::default();
        let samples = vec![[0, 0], [1, 0], [0, 2], [3, 1]];
        let ext = extend_hom(&m, &Integers, |s: &[u64; 2]| s[0] as i64 - s[1] as i64, &samples).unwrap();
        // φ(x)⁻¹φ(y) = (0 - 2) - (1 - 0)
        assert_eq!(ext.eval(&Fraction::new([1, 0], [0, 2])), -3);
    }

    #[test]
    fn non_multiplicative_map_is_reported() {
        let m = NatMul::default();
        let samples: Vec<u64> = (1..=6).collect();
        let err = extend_hom(&m, &PositiveRationals, |&s| Rational64::from_integer(s as i64 + 1), &samples);
        assert!(matches!(err, Err(Error::NotMultiplicative(..))));
        let err = extend_hom(&m, &Integers, |&s| if s == 6 { 1 } else { 0 }, &samples);
        match err {
            Err(Error::NotMultiplicative(a, b)) => assert_eq!((a.as_str(), b.as_str()), ("2", "3")),
            _ => panic!("expected witness"),
        }
    }
}

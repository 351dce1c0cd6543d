//! Ore monoids and their groups of left fractions `G = S⁻¹S`.
//!
//! An instance supplies multiplication, one-sided division and a solver for
//! Ore pairs `u·s = v·t`. Fractions `(x, y)` stand for `x⁻¹y`; all group
//! operations are expressed through the instance.

mod hom;
mod instances;

use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub use hom::{extend_hom, ExtendedHom, Integers, IntegersSquared, PositiveRationals, TargetGroup};
pub use instances::{IntMat2Pos, Mat2, NatAdd, NatAdd2, NatMul};

/// A computable cancellative right-reversible monoid.
///
/// Instances must satisfy `u·s = v·t` for `(u, v) = ore_pair(s, t)`, and
/// `left_divide(s, s·y) = Some(y)`, `right_divide(u·s, s) = Some(u)`.
pub trait OreMonoid: Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn name(&self) -> &str;

    fn identity(&self) -> Self::Elem;

    fn mul(&self, s: &Self::Elem, t: &Self::Elem) -> Self::Elem;

    /// `y` with `s·y = x`.
    fn left_divide(&self, s: &Self::Elem, x: &Self::Elem) -> Option<Self::Elem>;

    /// `u` with `u·s = x`.
    fn right_divide(&self, x: &Self::Elem, s: &Self::Elem) -> Option<Self::Elem>;

    /// `(u, v)` with `u·s = v·t`.
    fn ore_pair(&self, s: &Self::Elem, t: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// Canonical representative of the fraction `x⁻¹y`, if the instance has one.
    fn reduce(&self, _x: &Self::Elem, _y: &Self::Elem) -> Option<(Self::Elem, Self::Elem)> {
        None
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn elem_to_json(&self, e: &Self::Elem) -> Value;

    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;

    fn is_identity(&self, s: &Self::Elem) -> bool {
        *s == self.identity()
    }

    /// `s ≼_r t` iff `t ∈ S·s`.
    fn right_order_leq(&self, s: &Self::Elem, t: &Self::Elem) -> bool {
        self.right_divide(t, s).is_some()
    }

    /// `s ↦ e⁻¹s`.
    fn embed(&self, s: &Self::Elem) -> Fraction<Self::Elem> {
        Fraction::new(self.identity(), s.clone())
    }

    fn frac_identity(&self) -> Fraction<Self::Elem> {
        Fraction::new(self.identity(), self.identity())
    }

    /// `s⁻¹ = s⁻¹e`.
    fn embed_inv(&self, s: &Self::Elem) -> Fraction<Self::Elem> {
        Fraction::new(s.clone(), self.identity())
    }

    /// Equality in `G`: with `u·x = v·x'`, test `u·y = v·y'`.
    fn frac_eq(&self, g: &Fraction<Self::Elem>, h: &Fraction<Self::Elem>) -> bool {
        let (u, v) = self.ore_pair(&g.x, &h.x);
        self.frac_eq_with(g, h, &u, &v)
    }

    /// Equality test through a caller-supplied Ore pair for `(g.x, h.x)`.
    fn frac_eq_with(&self, g: &Fraction<Self::Elem>, h: &Fraction<Self::Elem>, u: &Self::Elem, v: &Self::Elem) -> bool {
        debug_assert_eq!(self.mul(u, &g.x), self.mul(v, &h.x));
        self.mul(u, &g.y) == self.mul(v, &h.y)
    }

    /// `x⁻¹y · r⁻¹w = (t·x)⁻¹(z·w)` where `t·y = z·r`.
    fn frac_mul(&self, g: &Fraction<Self::Elem>, h: &Fraction<Self::Elem>) -> Fraction<Self::Elem> {
        let (t, z) = self.ore_pair(&g.y, &h.x);
        Fraction::new(self.mul(&t, &g.x), self.mul(&z, &h.y))
    }

    fn frac_inv(&self, g: &Fraction<Self::Elem>) -> Fraction<Self::Elem> {
        Fraction::new(g.y.clone(), g.x.clone())
    }

    /// Replaces `(x, y)` with `(u·x, u·y)`, another representative of the same element.
    fn frac_lift(&self, g: &Fraction<Self::Elem>, u: &Self::Elem) -> Fraction<Self::Elem> {
        Fraction::new(self.mul(u, &g.x), self.mul(u, &g.y))
    }

    /// The instance's reduced representative, or the input unchanged.
    fn frac_reduce(&self, g: &Fraction<Self::Elem>) -> Fraction<Self::Elem> {
        match self.reduce(&g.x, &g.y) {
            Some((x, y)) => Fraction::new(x, y),
            None => g.clone(),
        }
    }

    /// `Some(s)` when `g = e⁻¹s` lies in the embedded copy of `S`.
    fn frac_in_monoid(&self, g: &Fraction<Self::Elem>) -> Option<Self::Elem> {
        self.left_divide(&g.x, &g.y)
    }

    fn sample_fraction<R: Rng + ?Sized>(&self, rng: &mut R) -> Fraction<Self::Elem> {
        Fraction::new(self.sample(rng), self.sample(rng))
    }

    fn frac_to_json(&self, g: &Fraction<Self::Elem>) -> Value {
        serde_json::json!({ "x": self.elem_to_json(&g.x), "y": self.elem_to_json(&g.y) })
    }

    fn frac_from_json(&self, v: &Value) -> Result<Fraction<Self::Elem>> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| crate::Error::Parse(format!("fraction is missing {k:?}")))
        };
        Ok(Fraction::new(self.elem_from_json(get("x")?)?, self.elem_from_json(get("y")?)?))
    }
}

/// A representative pair `(x, y)` of the group element `x⁻¹y`.
///
/// The derived `Eq`/`Ord` compare representatives. Equality in the group is
/// [`OreMonoid::frac_eq`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fraction<E> {
    pub x: E,
    pub y: E,
}

impl<E> Fraction<E> {
    pub fn new(x: E, y: E) -> Self {
        Fraction { x, y }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nat_mul_ore_pair_is_lcm() {
        let m = NatMul::default();
        assert_eq!(m.ore_pair(&4, &6), (3, 2));
        assert_eq!(m.ore_pair(&5, &5), (1, 1));
    }

    #[test]
    fn ore_pair_of_equal_elements_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = NatAdd2::default();
        let s = m.sample(&mut rng);
        assert_eq!(m.ore_pair(&s, &s), ([0, 0], [0, 0]));
        let a = IntMat2Pos::default();
        let s = a.sample(&mut rng);
        let (u, v) = a.ore_pair(&s, &s);
        assert_eq!(a.mul(&u, &s), a.mul(&v, &s));
    }

    #[test]
    fn matrix_ore_pair_closed_form() {
        let m = IntMat2Pos::default();
        let s = Mat2([[1, 1], [0, 1]]);
        let t = Mat2([[1, 0], [1, 1]]);
        let (u, v) = m.ore_pair(&s, &t);
        assert_eq!(u, Mat2([[1, -1], [1, 0]]));
        assert_eq!(v, Mat2::identity());
        assert_eq!(m.mul(&u, &s), Mat2([[1, 0], [1, 1]]));
        assert_eq!(m.mul(&u, &s), m.mul(&v, &t));
    }

    #[test]
    fn right_order() {
        let m = NatMul::default();
        assert!(m.right_order_leq(&2, &6));
        assert!(!m.right_order_leq(&4, &6));
        assert!(m.right_order_leq(&7, &7));
    }

    #[test]
    fn fraction_product_matches_rationals() {
        let m = NatMul::default();
        // 2 · (1/3) = 2/3
        let g = Fraction::new(1, 2);
        let h = Fraction::new(3, 1);
        let gh = m.frac_mul(&g, &h);
        assert!(m.frac_eq(&gh, &Fraction::new(3, 2)));
        assert_eq!(m.frac_inv(&g), Fraction::new(2, 1));
        assert!(m.frac_eq(&m.frac_mul(&g, &m.frac_inv(&g)), &m.frac_identity()));
        assert!(m.frac_eq(&m.frac_mul(&m.embed(&4), &m.embed(&5)), &m.embed(&20)));
    }

    #[test]
    fn inverse_of_identity_and_double_inverse() {
        let m = NatMul::default();
        let e = m.frac_identity();
        assert_eq!(m.frac_inv(&e), e);
        let g = Fraction::new(6, 10);
        assert_eq!(m.frac_inv(&m.frac_inv(&g)), g);
    }

    #[test]
    fn reduce_is_canonical() {
        let m = NatMul::default();
        assert_eq!(m.reduce(&12, &18), Some((2, 3)));
        let a = NatAdd2::default();
        assert_eq!(a.reduce(&[3, 1], &[2, 5]), Some(([1, 0], [0, 4])));
        assert_eq!(IntMat2Pos::default().reduce(&Mat2::identity(), &Mat2::identity()), None);
    }

    #[test]
    fn json_forms() {
        let m = NatMul::default();
        let g = Fraction::new(2, 3);
        let js = m.frac_to_json(&g);
        assert_eq!(js, serde_json::json!({"x": "2", "y": "3"}));
        assert_eq!(m.frac_from_json(&js).unwrap(), g);
        let a = IntMat2Pos::default();
        let s = Mat2([[1, -1], [1, 0]]);
        assert_eq!(a.elem_to_json(&s), serde_json::json!([[1, -1], [1, 0]]));
        assert_eq!(a.elem_from_json(&a.elem_to_json(&s)).unwrap(), s);
        assert!(a.elem_from_json(&serde_json::json!([[1, 0], [0, -1]])).is_err());
        assert!(m.elem_from_json(&serde_json::json!("0")).is_err());
        let n2 = NatAdd2::default();
        assert_eq!(n2.elem_to_json(&[1, 2]), serde_json::json!([1, 2]));
    }

    fn check_group_laws<M: OreMonoid>(m: &M, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..40 {
            let g = m.sample_fraction(&mut rng);
            let h = m.sample_fraction(&mut rng);
            let k = m.sample_fraction(&mut rng);
            let lhs = m.frac_mul(&m.frac_mul(&g, &h), &k);
            let rhs = m.frac_mul(&g, &m.frac_mul(&h, &k));
            assert!(m.frac_eq(&lhs, &rhs), "associativity {g:?} {h:?} {k:?}");
            assert!(m.frac_eq(&m.frac_mul(&g, &m.frac_identity()), &g));
            assert!(m.frac_eq(&m.frac_mul(&m.frac_inv(&g), &g), &m.frac_identity()));
            // every fraction is embed(x)⁻¹·embed(y)
            let split = m.frac_mul(&m.frac_inv(&m.embed(&g.x)), &m.embed(&g.y));
            assert!(m.frac_eq(&split, &g));
            // equality does not depend on the Ore pair used
            let lifted = m.frac_lift(&g, &m.sample(&mut rng));
            let (u, v) = m.ore_pair(&g.x, &lifted.x);
            let w = m.sample(&mut rng);
            assert!(m.frac_eq_with(&g, &lifted, &m.mul(&w, &u), &m.mul(&w, &v)));
            let red = m.frac_reduce(&g);
            assert!(m.frac_eq(&red, &g));
            assert_eq!(m.frac_reduce(&red), red);
        }
    }

    #[test]
    fn group_laws_all_instances() {
        check_group_laws(&NatMul::default(), 11);
        check_group_laws(&NatAdd::default(), 12);
        check_group_laws(&NatAdd2::default(), 13);
        check_group_laws(&IntMat2Pos::default(), 14);
    }

    proptest! {
        #[test]
        fn nat_mul_fraction_equality_is_rational_equality(a in 1u64..50, b in 1u64..50, c in 1u64..50, d in 1u64..50) {
            let m = NatMul::default();
            let eq = m.frac_eq(&Fraction::new(a, b), &Fraction::new(c, d));
            prop_assert_eq!(eq, b * c == a * d);
        }

        #[test]
        fn nat_add2_cancellative_and_divisible(s0 in 0u64..20, s1 in 0u64..20, y0 in 0u64..20, y1 in 0u64..20) {
            let m = NatAdd2::default();
            let s = [s0, s1];
            let y = [y0, y1];
            prop_assert_eq!(m.left_divide(&s, &m.mul(&s, &y)), Some(y));
            prop_assert_eq!(m.right_divide(&m.mul(&y, &s), &s), Some(y));
            let (u, v) = m.ore_pair(&s, &y);
            prop_assert_eq!(m.mul(&u, &s), m.mul(&v, &y));
        }
    }
}

//! The minimal automorphic dilation of an action by injective endomorphisms,
//! built as a direct limit over the right order of `S`.
//!
//! A limit element `(s, a)` stands for `β_s⁻¹(i(a))`, the image of `a` under
//! the canonical embedding of the `s`-th copy of `A`. The connecting maps give
//! `(s, a) ≡ (t·s, α_t(a))`; everything is computed after lifting to a common
//! level through an Ore pair.

use std::fmt::Debug;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ore::{Fraction, OreMonoid};
use crate::scalar::Scalar;

/// A *-algebra with an action of `S` by injective endomorphisms `α_s`.
pub trait EndoAlgebra<M: OreMonoid>: Send + Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn name(&self) -> &str;
    fn one(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &Scalar, a: &Self::Elem) -> Self::Elem;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// `α_s(a)`.
    fn endo(&self, s: &M::Elem, a: &Self::Elem) -> Self::Elem;

    /// The unique `b` with `α_s(b) = a`, if `a` lies in the range of `α_s`.
    fn endo_preimage(&self, s: &M::Elem, a: &Self::Elem) -> Option<Self::Elem>;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn elem_to_json(&self, a: &Self::Elem) -> Value;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.eq(a, &self.zero())
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(&Scalar::from_int(-1), b))
    }
}

/// An automorphic `G`-system `(B, G, β)` with an embedding `j: A → B`.
///
/// Both the generic direct limit and concrete models (the finite adeles)
/// implement this, so the crossed product and the uniqueness check work on
/// either.
pub trait DilatedSystem<M: OreMonoid>: Send + Sync {
    type Base: EndoAlgebra<M>;
    type Elem: Clone + Debug + Send + Sync;

    fn monoid(&self) -> &M;
    fn base(&self) -> &Self::Base;

    /// `j(a)`.
    fn embed(&self, a: &<Self::Base as EndoAlgebra<M>>::Elem) -> Self::Elem;

    /// `β_g(b)`.
    fn beta(&self, g: &Fraction<M::Elem>, b: &Self::Elem) -> Self::Elem;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &Scalar, a: &Self::Elem) -> Self::Elem;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// `a` with `b = β_s⁻¹(j(a))`, if `b` lies in that subalgebra.
    fn localize(&self, b: &Self::Elem, s: &M::Elem) -> Option<<Self::Base as EndoAlgebra<M>>::Elem>;

    /// A level at which `b` localizes.
    fn level_hint(&self, b: &Self::Elem) -> M::Elem;

    fn sample_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn elem_to_json(&self, b: &Self::Elem) -> Value;

    fn is_zero(&self, b: &Self::Elem) -> bool {
        self.eq(b, &self.zero())
    }
}

/// `β_s⁻¹(i(a))`, written `(level, elem)`.
#[derive(Clone, Debug)]
pub struct LimElement<E, X> {
    pub level: E,
    pub elem: X,
}

impl<E, X> LimElement<E, X> {
    pub fn new(level: E, elem: X) -> Self {
        LimElement { level, elem }
    }
}

/// The direct limit `B = lim (A_x, α_{yx⁻¹})` with its `G`-action.
#[derive(Clone, Debug)]
pub struct LimitAlgebra<M, A> {
    monoid: M,
    alg: A,
}

pub type LimOf<M, A> = LimElement<<M as OreMonoid>::Elem, <A as EndoAlgebra<M>>::Elem>;

impl<M: OreMonoid, A: EndoAlgebra<M>> LimitAlgebra<M, A> {
    pub fn new(monoid: M, alg: A) -> Self {
        LimitAlgebra { monoid, alg }
    }

    pub fn algebra(&self) -> &A {
        &self.alg
    }

    /// `i(a) = (e, a)`.
    pub fn i_embed(&self, a: &A::Elem) -> LimOf<M, A> {
        LimElement::new(self.monoid.identity(), a.clone())
    }

    /// `(s, a) ↦ (t·s, α_t(a))`, the same element at a higher level.
    pub fn lift(&self, b: &LimOf<M, A>, t: &M::Elem) -> LimOf<M, A> {
        LimElement::new(self.monoid.mul(t, &b.level), self.alg.endo(t, &b.elem))
    }

    pub fn lift_to(&self, b: &LimOf<M, A>, level: &M::Elem) -> Option<LimOf<M, A>> {
        let t = self.monoid.right_divide(level, &b.level)?;
        Some(self.lift(b, &t))
    }

    pub fn common_level(&self, b1: &LimOf<M, A>, b2: &LimOf<M, A>) -> (LimOf<M, A>, LimOf<M, A>) {
        if b1.level == b2.level {
            return (b1.clone(), b2.clone());
        }
        let (u, v) = self.monoid.ore_pair(&b1.level, &b2.level);
        (self.lift(b1, &u), self.lift(b2, &v))
    }

    /// With `(u, v) = ore_pair(s₁, s₂)`: `α_u(a₁) = α_v(a₂)`.
    pub fn lim_eq(&self, b1: &LimOf<M, A>, b2: &LimOf<M, A>) -> bool {
        let (x, y) = self.common_level(b1, b2);
        self.alg.eq(&x.elem, &y.elem)
    }

    /// [`Self::lim_eq`] through a caller-supplied Ore pair.
    pub fn lim_eq_with(&self, b1: &LimOf<M, A>, b2: &LimOf<M, A>, u: &M::Elem, v: &M::Elem) -> bool {
        debug_assert_eq!(self.monoid.mul(u, &b1.level), self.monoid.mul(v, &b2.level));
        self.alg.eq(&self.alg.endo(u, &b1.elem), &self.alg.endo(v, &b2.elem))
    }

    fn combine(&self, b1: &LimOf<M, A>, b2: &LimOf<M, A>, op: impl Fn(&A::Elem, &A::Elem) -> A::Elem) -> LimOf<M, A> {
        let (x, y) = self.common_level(b1, b2);
        LimElement::new(x.level, op(&x.elem, &y.elem))
    }

    pub fn lim_add(&self, b1: &LimOf<M, A>, b2: &LimOf<M, A>) -> LimOf<M, A> {
        self.combine(b1, b2, |a, b| self.alg.add(a, b))
    }

    pub fn lim_mul(&self, b1: &LimOf<M, A>, b2: &LimOf<M, A>) -> LimOf<M, A> {
        self.combine(b1, b2, |a, b| self.alg.mul(a, b))
    }

    pub fn lim_star(&self, b: &LimOf<M, A>) -> LimOf<M, A> {
        LimElement::new(b.level.clone(), self.alg.star(&b.elem))
    }

    pub fn lim_scale(&self, c: &Scalar, b: &LimOf<M, A>) -> LimOf<M, A> {
        LimElement::new(b.level.clone(), self.alg.scale(c, &b.elem))
    }

    pub fn lim_zero(&self) -> LimOf<M, A> {
        self.i_embed(&self.alg.zero())
    }

    /// `β_x` for `x ∈ S`: lift `(s, a)` to `u·s = v·x` and return `(v, α_u(a))`.
    pub fn beta_embed(&self, x: &M::Elem, b: &LimOf<M, A>) -> LimOf<M, A> {
        let (u, v) = self.monoid.ore_pair(&b.level, x);
        LimElement::new(v, self.alg.endo(&u, &b.elem))
    }

    /// `β_x⁻¹(s, a) = (s·x, a)`.
    pub fn beta_embed_inv(&self, x: &M::Elem, b: &LimOf<M, A>) -> LimOf<M, A> {
        LimElement::new(self.monoid.mul(&b.level, x), b.elem.clone())
    }

    /// `β_g = β_x⁻¹ ∘ β_y` for `g = x⁻¹y`.
    pub fn beta_apply(&self, g: &Fraction<M::Elem>, b: &LimOf<M, A>) -> LimOf<M, A> {
        self.beta_embed_inv(&g.x, &self.beta_embed(&g.y, b))
    }

    /// `a` with `(s, a) ≡ b`, if one exists.
    pub fn lim_localize(&self, b: &LimOf<M, A>, s: &M::Elem) -> Option<A::Elem> {
        if let Some(w) = self.monoid.right_divide(s, &b.level) {
            return Some(self.alg.endo(&w, &b.elem));
        }
        let (u, v) = self.monoid.ore_pair(&b.level, s);
        self.alg.endo_preimage(&v, &self.alg.endo(&u, &b.elem))
    }

    pub fn sample_lim<R: Rng + ?Sized>(&self, rng: &mut R) -> LimOf<M, A> {
        LimElement::new(self.monoid.sample(rng), self.alg.sample(rng))
    }

    /// `{"level": elem, "elem": payload}`.
    pub fn lim_to_json(&self, b: &LimOf<M, A>) -> Value {
        json!({ "level": self.monoid.elem_to_json(&b.level), "elem": self.alg.elem_to_json(&b.elem) })
    }
}

impl<M: OreMonoid, A: EndoAlgebra<M>> DilatedSystem<M> for LimitAlgebra<M, A> {
    type Base = A;
    type Elem = LimOf<M, A>;

    fn monoid(&self) -> &M {
        &self.monoid
    }
    fn base(&self) -> &A {
        &self.alg
    }
    fn embed(&self, a: &A::Elem) -> Self::Elem {
        self.i_embed(a)
    }
    fn beta(&self, g: &Fraction<M::Elem>, b: &Self::Elem) -> Self::Elem {
        self.beta_apply(g, b)
    }
    fn zero(&self) -> Self::Elem {
        self.lim_zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.lim_add(a, b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.lim_mul(a, b)
    }
    fn star(&self, a: &Self::Elem) -> Self::Elem {
        self.lim_star(a)
    }
    fn scale(&self, c: &Scalar, a: &Self::Elem) -> Self::Elem {
        self.lim_scale(c, a)
    }
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.lim_eq(a, b)
    }
    fn localize(&self, b: &Self::Elem, s: &M::Elem) -> Option<A::Elem> {
        self.lim_localize(b, s)
    }
    fn level_hint(&self, b: &Self::Elem) -> M::Elem {
        b.level.clone()
    }
    fn sample_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.sample_lim(rng)
    }
    fn elem_to_json(&self, b: &Self::Elem) -> Value {
        self.lim_to_json(b)
    }
}

/// Replaces `β_g` of an inner system by `β_{g⁻¹}`; a negative control for
/// [`dilation_iso_check`].
pub struct InvertedBeta<D>(pub D);

impl<M: OreMonoid, D: DilatedSystem<M>> DilatedSystem<M> for InvertedBeta<D> {
    type Base = D::Base;
    type Elem = D::Elem;

    fn monoid(&self) -> &M {
        self.0.monoid()
    }
    fn base(&self) -> &D::Base {
        self.0.base()
    }
    fn embed(&self, a: &<D::Base as EndoAlgebra<M>>::Elem) -> D::Elem {
        self.0.embed(a)
    }
    fn beta(&self, g: &Fraction<M::Elem>, b: &D::Elem) -> D::Elem {
        self.0.beta(&self.0.monoid().frac_inv(g), b)
    }
    fn zero(&self) -> D::Elem {
        self.0.zero()
    }
    fn add(&self, a: &D::Elem, b: &D::Elem) -> D::Elem {
        self.0.add(a, b)
    }
    fn mul(&self, a: &D::Elem, b: &D::Elem) -> D::Elem {
        self.0.mul(a, b)
    }
    fn star(&self, a: &D::Elem) -> D::Elem {
        self.0.star(a)
    }
    fn scale(&self, c: &Scalar, a: &D::Elem) -> D::Elem {
        self.0.scale(c, a)
    }
    fn eq(&self, a: &D::Elem, b: &D::Elem) -> bool {
        self.0.eq(a, b)
    }
    fn localize(&self, b: &D::Elem, s: &M::Elem) -> Option<<D::Base as EndoAlgebra<M>>::Elem> {
        self.0.localize(b, s)
    }
    fn level_hint(&self, b: &D::Elem) -> M::Elem {
        self.0.level_hint(b)
    }
    fn sample_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> D::Elem {
        self.0.sample_elem(rng)
    }
    fn elem_to_json(&self, b: &D::Elem) -> Value {
        self.0.elem_to_json(b)
    }
}

/// A failed clause of [`dilation_iso_check`] or [`endo_action_check`].
#[derive(Clone, Debug)]
pub struct CheckFailure {
    pub clause: &'static str,
    pub witness: Value,
}

impl CheckFailure {
    pub fn new(clause: &'static str, witness: Value) -> Self {
        CheckFailure { clause, witness }
    }
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.clause, self.witness)
    }
}

/// Checks, on samples, that `α` is an action by injective endomorphisms:
/// `α_s α_t = α_{st}`, `α_s` is a *-homomorphism, and `α_s(a) = α_s(b) ⇒ a = b`.
pub fn endo_action_check<M, A, R>(m: &M, alg: &A, rng: &mut R, samples: usize) -> std::result::Result<(), CheckFailure>
where
    M: OreMonoid,
    A: EndoAlgebra<M>,
    R: Rng + ?Sized,
{
    let elems: Vec<A::Elem> = (0..samples.max(2)).map(|_| alg.sample(rng)).collect();
    for (k, a) in elems.iter().enumerate() {
        let b = &elems[(k + 1) % elems.len()];
        let (s, t) = (m.sample(rng), m.sample(rng));
        let w = || json!({ "s": m.elem_to_json(&s), "t": m.elem_to_json(&t), "a": alg.elem_to_json(a) });
        if !alg.eq(&alg.endo(&s, &alg.endo(&t, a)), &alg.endo(&m.mul(&s, &t), a)) {
            return Err(CheckFailure::new("action law α_s α_t = α_st", w()));
        }
        if !alg.eq(&alg.endo(&s, &alg.mul(a, b)), &alg.mul(&alg.endo(&s, a), &alg.endo(&s, b)))
            || !alg.eq(&alg.endo(&s, &alg.star(a)), &alg.star(&alg.endo(&s, a)))
            || !alg.eq(&alg.endo(&s, &alg.add(a, b)), &alg.add(&alg.endo(&s, a), &alg.endo(&s, b)))
        {
            return Err(CheckFailure::new("α_s is a *-homomorphism", w()));
        }
        if !alg.eq(a, b) && alg.eq(&alg.endo(&s, a), &alg.endo(&s, b)) {
            return Err(CheckFailure::new(
                "α_s injective",
                json!({ "s": m.elem_to_json(&s), "a": alg.elem_to_json(a), "b": alg.elem_to_json(b) }),
            ));
        }
        if !alg.eq(&alg.endo(&m.identity(), a), a) {
            return Err(CheckFailure::new("α_e = id", w()));
        }
    }
    Ok(())
}

/// Sample sizes for [`dilation_iso_check`].
#[derive(Clone, Copy, Debug)]
pub struct IsoSamples {
    pub elements: usize,
    pub group_elements: usize,
    pub model_elements: usize,
}

impl Default for IsoSamples {
    fn default() -> Self {
        IsoSamples { elements: 20, group_elements: 6, model_elements: 20 }
    }
}

/// Builds `θ(β_s⁻¹(i(a))) = β′_{s⁻¹}(j(a))` from the generic limit into
/// `model` and checks on samples that it is well defined, additive,
/// multiplicative, *-preserving, injective, onto at the sampled levels, and
/// that it intertwines `β` with `β′`.
pub fn dilation_iso_check<M, A, D, R>(
    lim: &LimitAlgebra<M, A>,
    model: &D,
    rng: &mut R,
    sizes: IsoSamples,
) -> std::result::Result<usize, CheckFailure>
where
    M: OreMonoid,
    A: EndoAlgebra<M>,
    D: DilatedSystem<M, Base = A>,
    R: Rng + ?Sized,
{
    let m = &lim.monoid;
    let alg = &lim.alg;
    let theta = |b: &LimOf<M, A>| model.beta(&m.embed_inv(&b.level), &model.embed(&b.elem));
    let lj = |b: &LimOf<M, A>| lim.lim_to_json(b);
    let mut cases = 0usize;

    let elems: Vec<LimOf<M, A>> = (0..sizes.elements).map(|_| lim.sample_lim(rng)).collect();
    let groups: Vec<Fraction<M::Elem>> = (0..sizes.group_elements).map(|_| m.sample_fraction(rng)).collect();

    for (k, b) in elems.iter().enumerate() {
        let c = &elems[(k + 1) % elems.len()];
        let tb = theta(b);
        let tc = theta(c);

        let t = m.sample(rng);
        cases += 1;
        if !model.eq(&theta(&lim.lift(b, &t)), &tb) {
            return Err(CheckFailure::new("θ well defined", json!({ "b": lj(b), "t": m.elem_to_json(&t) })));
        }

        cases += 1;
        if !model.eq(&theta(&lim.lim_mul(b, c)), &model.mul(&tb, &tc)) {
            return Err(CheckFailure::new("θ multiplicative", json!({ "b": lj(b), "c": lj(c) })));
        }
        cases += 1;
        if !model.eq(&theta(&lim.lim_add(b, c)), &model.add(&tb, &tc)) {
            return Err(CheckFailure::new("θ additive", json!({ "b": lj(b), "c": lj(c) })));
        }
        cases += 1;
        if !model.eq(&theta(&lim.lim_star(b)), &model.star(&tb)) {
            return Err(CheckFailure::new("θ *-preserving", json!({ "b": lj(b) })));
        }

        cases += 1;
        if lim.lim_eq(b, c) != model.eq(&tb, &tc) {
            return Err(CheckFailure::new("θ injective", json!({ "b": lj(b), "c": lj(c) })));
        }
        let diff = lim.lim_add(b, &lim.i_embed(&alg.sample(rng)));
        if lim.lim_eq(b, &diff) != model.eq(&tb, &theta(&diff)) {
            return Err(CheckFailure::new("θ injective", json!({ "b": lj(b), "c": lj(&diff) })));
        }

        for g in &groups {
            cases += 1;
            if !model.eq(&theta(&lim.beta_apply(g, b)), &model.beta(g, &tb)) {
                return Err(CheckFailure::new(
                    "θ intertwines β",
                    json!({ "b": lj(b), "g": m.frac_to_json(g) }),
                ));
            }
        }
    }

    for _ in 0..sizes.model_elements {
        let y = model.sample_elem(rng);
        let s = model.level_hint(&y);
        cases += 1;
        let a = model.localize(&y, &s).ok_or_else(|| {
            CheckFailure::new("θ onto sampled level", json!({ "y": model.elem_to_json(&y), "level": m.elem_to_json(&s) }))
        })?;
        if !model.eq(&theta(&LimElement::new(s.clone(), a)), &y) {
            return Err(CheckFailure::new(
                "θ onto sampled level",
                json!({ "y": model.elem_to_json(&y), "level": m.elem_to_json(&s) }),
            ));
        }
    }
    Ok(cases)
}

/// Parses a level for CLI use.
pub fn parse_level<M: OreMonoid>(m: &M, v: &Value) -> Result<M::Elem> {
    m.elem_from_json(v).map_err(|e| Error::Parse(format!("level: {e}")))
}

/// The algebra `ℂ` with every `α_s` the identity; its dilation is `ℂ` with the
/// trivial `G`-action, and the twisted crossed product is the twisted group
/// algebra of `G`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScalarAlgebra;

impl<M: OreMonoid> EndoAlgebra<M> for ScalarAlgebra {
    type Elem = Scalar;

    fn name(&self) -> &str {
        "scalars"
    }
    fn one(&self) -> Scalar {
        Scalar::one()
    }
    fn zero(&self) -> Scalar {
        Scalar::zero()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn star(&self, a: &Scalar) -> Scalar {
        a.conj()
    }
    fn scale(&self, c: &Scalar, a: &Scalar) -> Scalar {
        c * a
    }
    fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        a == b
    }
    fn endo(&self, _: &M::Elem, a: &Scalar) -> Scalar {
        a.clone()
    }
    fn endo_preimage(&self, _: &M::Elem, a: &Scalar) -> Option<Scalar> {
        Some(a.clone())
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        crate::dilation::sample_scalar(rng)
    }
    fn elem_to_json(&self, a: &Scalar) -> Value {
        json!(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::NatAdd2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_limit_is_trivial() {
        let lim = LimitAlgebra::new(NatAdd2::default(), ScalarAlgebra);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let b = lim.sample_lim(&mut rng);
            let g = lim.monoid().sample_fraction(&mut rng);
            assert!(lim.lim_eq(&lim.beta_apply(&g, &b), &b));
            assert!(lim.lim_eq(&b, &lim.i_embed(&b.elem)));
        }
        assert!(dilation_iso_check(&lim, &lim, &mut rng, IsoSamples::default()).is_ok());
        assert!(endo_action_check(&NatAdd2::default(), &ScalarAlgebra, &mut rng, 10).is_ok());
    }
}

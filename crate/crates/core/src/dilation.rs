//! The minimal unitary dilation of an isometric λ-representation.
//!
//! A vector of the dilation space is a pair `(t, h)` standing for `U_t* h`
//! with `h` in the original space `H`. Pairs are identified along the lifting
//! relation `U_t* h = conj λ(s,t) · U_{st}* (V_s h)`, so two vectors are
//! compared, added or paired after lifting both to a common level.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_rational::Rational64;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::multiplier::{ExtendedMultiplier, MultiplierRef};
use crate::ore::{Fraction, OreMonoid};
use crate::scalar::{format_rational, parse_rational, Phase, Scalar};

/// A finitely supported vector over an ordered basis.
#[derive(Clone, Debug)]
pub struct HVec<B: Ord> {
    coeffs: BTreeMap<B, Scalar>,
}

impl<B: Ord> Default for HVec<B> {
    fn default() -> Self {
        HVec { coeffs: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> HVec<B> {
    pub fn zero() -> Self {
        HVec::default()
    }

    pub fn basis(b: B) -> Self {
        let mut v = HVec::zero();
        v.coeffs.insert(b, Scalar::one());
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (B, Scalar)>) -> Self {
        let mut v = HVec::zero();
        for (b, c) in terms {
            v.add_term(b, c);
        }
        v
    }

    pub fn add_term(&mut self, b: B, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(b.clone()).or_default();
        let sum = &*slot + &c;
        if sum.is_zero() {
            self.coeffs.remove(&b);
        } else {
            *slot = sum;
        }
    }

    pub fn get(&self, b: &B) -> Scalar {
        self.coeffs.get(b).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&B, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &HVec<B>) -> HVec<B> {
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> HVec<B> {
        if c.is_zero() {
            return HVec::zero();
        }
        HVec { coeffs: self.coeffs.iter().map(|(b, x)| (b.clone(), x * c)).collect() }
    }

    pub fn sub(&self, other: &HVec<B>) -> HVec<B> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &HVec<B>) -> Scalar {
        self.coeffs
            .iter()
            .filter_map(|(b, x)| other.coeffs.get(b).map(|y| &x.conj() * y))
            .sum()
    }

    pub fn map_basis<C: Ord + Clone>(&self, f: impl Fn(&B) -> C) -> HVec<C> {
        HVec::from_terms(self.coeffs.iter().map(|(b, c)| (f(b), c.clone())))
    }
}

impl<B: Ord + Clone> PartialEq for HVec<B> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

/// An isometric λ-representation `V` of `S`: `V_s V_t = λ(s,t) V_{st}`.
pub trait IsometricRep<M: OreMonoid>: Send + Sync {
    type Basis: Ord + Clone + Debug + Send + Sync;

    fn apply(&self, s: &M::Elem, h: &HVec<Self::Basis>) -> HVec<Self::Basis>;

    fn apply_adjoint(&self, s: &M::Elem, h: &HVec<Self::Basis>) -> HVec<Self::Basis>;

    fn sample_vec<R: Rng + ?Sized>(&self, rng: &mut R) -> HVec<Self::Basis>;

    fn basis_to_json(&self, b: &Self::Basis) -> Value;
}

/// The λ-regular representation on `ℓ²(S)`: `V_s δ_x = λ(s,x) δ_{sx}`.
pub struct RegularRep<M: OreMonoid> {
    monoid: M,
    lambda: MultiplierRef<M>,
}

/// Builds the λ-regular representation.
pub fn regular_rep<M: OreMonoid>(monoid: M, lambda: MultiplierRef<M>) -> RegularRep<M> {
    RegularRep { monoid, lambda }
}

impl<M: OreMonoid> IsometricRep<M> for RegularRep<M> {
    type Basis = M::Elem;

    fn apply(&self, s: &M::Elem, h: &HVec<M::Elem>) -> HVec<M::Elem> {
        HVec::from_terms(h.terms().map(|(x, c)| (self.monoid.mul(s, x), c.mul_phase(self.lambda.eval(s, x)))))
    }

    /// `V_s* δ_x = conj λ(s,y) δ_y` when `x = s·y`, and 0 otherwise.
    fn apply_adjoint(&self, s: &M::Elem, h: &HVec<M::Elem>) -> HVec<M::Elem> {
        HVec::from_terms(h.terms().filter_map(|(x, c)| {
            let y = self.monoid.left_divide(s, x)?;
            let p = self.lambda.eval(s, &y).conj();
            Some((y, c.mul_phase(p)))
        }))
    }

    fn sample_vec<R: Rng + ?Sized>(&self, rng: &mut R) -> HVec<M::Elem> {
        let n = rng.gen_range(1..=3);
        HVec::from_terms((0..n).map(|_| (self.monoid.sample(rng), sample_scalar(rng))))
    }

    fn basis_to_json(&self, b: &M::Elem) -> Value {
        self.monoid.elem_to_json(b)
    }
}

/// A small nonzero Gaussian integer.
pub fn sample_scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let re = rng.gen_range(-3i64..=3);
        let im = rng.gen_range(-2i64..=2);
        if re != 0 || im != 0 {
            return Scalar::gaussian(Rational64::from_integer(re), Rational64::from_integer(im));
        }
    }
}

/// The vector `U_level* vec` of the dilation space.
#[derive(Clone, Debug)]
pub struct DilVec<E, B: Ord> {
    pub level: E,
    pub vec: HVec<B>,
}

impl<E, B: Ord> DilVec<E, B> {
    pub fn new(level: E, vec: HVec<B>) -> Self {
        DilVec { level, vec }
    }
}

/// The minimal unitary μ-dilation of an isometric λ-representation `V`.
pub struct Dilation<M: OreMonoid, V> {
    mu: ExtendedMultiplier<M>,
    rep: V,
}

pub type DVec<M, V> = DilVec<<M as OreMonoid>::Elem, <V as IsometricRep<M>>::Basis>;

impl<M: OreMonoid, V: IsometricRep<M>> Dilation<M, V> {
    pub fn new(mu: ExtendedMultiplier<M>, rep: V) -> Self {
        Dilation { mu, rep }
    }

    pub fn mu(&self) -> &ExtendedMultiplier<M> {
        &self.mu
    }

    pub fn rep(&self) -> &V {
        &self.rep
    }

    fn monoid(&self) -> &M {
        self.mu.monoid()
    }

    fn lambda(&self, s: &M::Elem, t: &M::Elem) -> Phase {
        self.mu.lambda_eval(s, t)
    }

    /// `h ↦ (e, h)`; `U_e = 1` because the multiplier is normalized.
    pub fn embed(&self, h: HVec<V::Basis>) -> DVec<M, V> {
        DilVec::new(self.monoid().identity(), h)
    }

    pub fn zero(&self) -> DVec<M, V> {
        self.embed(HVec::zero())
    }

    /// `(t, h) ≡ conj λ(s,t) · (s·t, V_s h)`.
    pub fn lift(&self, xi: &DVec<M, V>, s: &M::Elem) -> DVec<M, V> {
        let phase = self.lambda(s, &xi.level).conj();
        let h = self.rep.apply(s, &xi.vec);
        DilVec::new(self.monoid().mul(s, &xi.level), h.scale(&phase.to_scalar()))
    }

    /// Lifts to a prescribed level, if it lies above the current one in `≼_r`.
    pub fn lift_to(&self, xi: &DVec<M, V>, level: &M::Elem) -> Option<DVec<M, V>> {
        let s = self.monoid().right_divide(level, &xi.level)?;
        Some(self.lift(xi, &s))
    }

    /// Both vectors at the common level `u·t₁ = v·t₂` with `(u, v) = ore_pair(t₁, t₂)`.
    pub fn common_level(&self, xi: &DVec<M, V>, eta: &DVec<M, V>) -> (DVec<M, V>, DVec<M, V>) {
        if xi.level == eta.level {
            return (xi.clone(), eta.clone());
        }
        let (u, v) = self.monoid().ore_pair(&xi.level, &eta.level);
        (self.lift(xi, &u), self.lift(eta, &v))
    }

    pub fn inner(&self, xi: &DVec<M, V>, eta: &DVec<M, V>) -> Scalar {
        let (a, b) = self.common_level(xi, eta);
        a.vec.inner(&b.vec)
    }

    pub fn add(&self, xi: &DVec<M, V>, eta: &DVec<M, V>) -> DVec<M, V> {
        let (a, b) = self.common_level(xi, eta);
        DilVec::new(a.level, a.vec.add(&b.vec))
    }

    pub fn scale(&self, c: &Scalar, xi: &DVec<M, V>) -> DVec<M, V> {
        DilVec::new(xi.level.clone(), xi.vec.scale(c))
    }

    pub fn scale_phase(&self, p: Phase, xi: &DVec<M, V>) -> DVec<M, V> {
        self.scale(&p.to_scalar(), xi)
    }

    pub fn eq(&self, xi: &DVec<M, V>, eta: &DVec<M, V>) -> bool {
        let (a, b) = self.common_level(xi, eta);
        a.vec == b.vec
    }

    /// `U_x (U_s* h) = λ(t,x) conj λ(z,s) · U_t* (V_z h)` where `t·x = z·s`.
    pub fn apply_us(&self, x: &M::Elem, xi: &DVec<M, V>) -> DVec<M, V> {
        let (t, z) = self.monoid().ore_pair(x, &xi.level);
        self.apply_us_with(x, xi, &t, &z)
    }

    /// [`Self::apply_us`] through a caller-supplied pair with `t·x = z·s`.
    pub fn apply_us_with(&self, x: &M::Elem, xi: &DVec<M, V>, t: &M::Elem, z: &M::Elem) -> DVec<M, V> {
        debug_assert_eq!(self.monoid().mul(t, x), self.monoid().mul(z, &xi.level));
        let phase = self.lambda(t, x) - self.lambda(z, &xi.level);
        let h = self.rep.apply(z, &xi.vec).scale(&phase.to_scalar());
        DilVec::new(t.clone(), h)
    }

    /// `U_x* (U_s* h) = conj λ(s,x) · U_{sx}* h`.
    pub fn apply_us_star(&self, x: &M::Elem, xi: &DVec<M, V>) -> DVec<M, V> {
        let phase = self.lambda(&xi.level, x).conj();
        DilVec::new(self.monoid().mul(&xi.level, x), xi.vec.scale(&phase.to_scalar()))
    }

    /// `U_g = U_x* U_y` for the section representative `(x, y)` of `g`.
    pub fn apply_group(&self, g: &Fraction<M::Elem>, xi: &DVec<M, V>) -> DVec<M, V> {
        let r = self.mu.rep(g);
        let moved = self.apply_us(&r.y, xi);
        self.apply_us_star(&r.x, &moved)
    }

    pub fn sample_vec<R: Rng + ?Sized>(&self, rng: &mut R) -> DVec<M, V> {
        DilVec::new(self.monoid().sample(rng), self.rep.sample_vec(rng))
    }

    /// `{"level": elem, "vec": [[basis, "re", "im"], ...]}`.
    pub fn to_json(&self, xi: &DVec<M, V>) -> Value {
        let entries: Vec<Value> = xi
            .vec
            .terms()
            .map(|(b, c)| {
                let basis = self.rep.basis_to_json(b);
                match c.as_gaussian() {
                    Some((re, im)) => json!([basis, format_rational(&re), format_rational(&im)]),
                    None => json!([basis, c]),
                }
            })
            .collect();
        json!({ "level": self.monoid().elem_to_json(&xi.level), "vec": entries })
    }
}

impl<M: OreMonoid, V: IsometricRep<M, Basis = M::Elem>> Dilation<M, V> {
    /// Inverse of [`Self::to_json`] for representations whose basis is `S` itself.
    pub fn from_json(&self, v: &Value) -> Result<DVec<M, V>> {
        let bad = |what: &str| Error::Parse(format!("DilVec: {what}"));
        let level = self.monoid().elem_from_json(v.get("level").ok_or_else(|| bad("missing level"))?)?;
        let mut h = HVec::zero();
        for entry in v.get("vec").and_then(Value::as_array).ok_or_else(|| bad("missing vec"))? {
            let parts = entry.as_array().ok_or_else(|| bad("entry is not an array"))?;
            let b = self.monoid().elem_from_json(parts.first().ok_or_else(|| bad("empty entry"))?)?;
            let c = match parts.len() {
                3 => {
                    let re = parse_rational(parts[1].as_str().ok_or_else(|| bad("re"))?)?;
                    let im = parse_rational(parts[2].as_str().ok_or_else(|| bad("im"))?)?;
                    Scalar::gaussian(re, im)
                }
                2 => serde_json::from_value(parts[1].clone())?,
                _ => return Err(bad("entry length")),
            };
            h.add_term(b, c);
        }
        Ok(DilVec::new(level, h))
    }
}

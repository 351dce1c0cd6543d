//! The twisted crossed product `B ⋊_{β,μ} G` on its dense span, and the
//! semigroup crossed product realized as the corner `p(B ⋊ G)p`, `p = i(1)`.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Value};

use crate::limit::{CheckFailure, DilatedSystem, EndoAlgebra};
use crate::multiplier::ExtendedMultiplier;
use crate::ore::{Fraction, OreMonoid};
use crate::scalar::Phase;

type BaseElem<M, D> = <<D as DilatedSystem<M>>::Base as EndoAlgebra<M>>::Elem;

/// `Σ b_g U_g`, keyed by section representatives of `g`.
#[derive(Clone, Debug)]
pub struct CPElement<E, B> {
    terms: BTreeMap<Fraction<E>, B>,
}

impl<E: Ord, B> CPElement<E, B> {
    pub fn zero() -> Self {
        CPElement { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Fraction<E>, &B)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

pub type CpOf<M, D> = CPElement<<M as OreMonoid>::Elem, <D as DilatedSystem<M>>::Elem>;

/// `(X, Y)` returned by [`CrossedProduct::fullness_witness`].
pub type Factorization<M, D> = (CpOf<M, D>, CpOf<M, D>);

/// How [`CrossedProduct::sg_mul_direct`] accumulates the phase of a product
/// of semigroup monomials `v_x* a v_y · v_r* b v_s` with `t·y = z·r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseConvention {
    /// `λ(t,y) − λ(z,r) − λ(t,x) + λ(z,s)`, from `v_t v_y = λ(t,y) v_{ty}`.
    Derived,
    /// `λ(y,t) − λ(z,r) − λ(t,x) + λ(z,s)`, the arguments of the first
    /// factor swapped.
    Printed,
}

/// `phase · v_x* i(a) v_y`.
#[derive(Clone, Debug)]
pub struct SgMonomial<E, A> {
    pub x: E,
    pub a: A,
    pub y: E,
    pub phase: Phase,
}

/// The twisted crossed product of an automorphic system `D` by `G` with the
/// extended multiplier `μ`.
pub struct CrossedProduct<M: OreMonoid, D> {
    sys: D,
    mu: ExtendedMultiplier<M>,
}

impl<M: OreMonoid, D: DilatedSystem<M>> CrossedProduct<M, D> {
    pub fn new(sys: D, mu: ExtendedMultiplier<M>) -> Self {
        CrossedProduct { sys, mu }
    }

    pub fn system(&self) -> &D {
        &self.sys
    }

    pub fn mu(&self) -> &ExtendedMultiplier<M> {
        &self.mu
    }

    fn m(&self) -> &M {
        self.sys.monoid()
    }

    fn alg(&self) -> &D::Base {
        self.sys.base()
    }

    fn phased(&self, p: Phase, b: &D::Elem) -> D::Elem {
        if p.is_zero() {
            b.clone()
        } else {
            self.sys.scale(&p.to_scalar(), b)
        }
    }

    fn insert(&self, terms: &mut BTreeMap<Fraction<M::Elem>, D::Elem>, g: &Fraction<M::Elem>, b: D::Elem) {
        let key = self.mu.rep(g);
        let sum = match terms.remove(&key) {
            Some(old) => self.sys.add(&old, &b),
            None => b,
        };
        if !self.sys.is_zero(&sum) {
            terms.insert(key, sum);
        }
    }

    /// `b·U_g`.
    pub fn monomial(&self, b: D::Elem, g: &Fraction<M::Elem>) -> CpOf<M, D> {
        let mut terms = BTreeMap::new();
        self.insert(&mut terms, g, b);
        CPElement { terms }
    }

    pub fn cp_add(&self, x: &CpOf<M, D>, y: &CpOf<M, D>) -> CpOf<M, D> {
        let mut terms = x.terms.clone();
        for (g, b) in &y.terms {
            self.insert(&mut terms, g, b.clone());
        }
        CPElement { terms }
    }

    pub fn cp_scale_phase(&self, p: Phase, x: &CpOf<M, D>) -> CpOf<M, D> {
        CPElement { terms: x.terms.iter().map(|(g, b)| (g.clone(), self.phased(p, b))).collect() }
    }

    /// Bilinear extension of `(bU_g)(cU_h) = b·β_g(c)·μ(g,h)·U_{gh}`.
    pub fn cp_mul(&self, x: &CpOf<M, D>, y: &CpOf<M, D>) -> CpOf<M, D> {
        let m = self.m();
        let mut terms = BTreeMap::new();
        for (g, b) in &x.terms {
            for (h, c) in &y.terms {
                let coef = self.sys.mul(b, &self.sys.beta(g, c));
                let coef = self.phased(self.mu.eval(g, h), &coef);
                self.insert(&mut terms, &m.frac_mul(g, h), coef);
            }
        }
        CPElement { terms }
    }

    /// `(bU_g)* = conj μ(g⁻¹,g) · β_{g⁻¹}(b*) · U_{g⁻¹}`.
    pub fn cp_star(&self, x: &CpOf<M, D>) -> CpOf<M, D> {
        let m = self.m();
        let mut terms = BTreeMap::new();
        for (g, b) in &x.terms {
            let gi = m.frac_inv(g);
            let coef = self.sys.beta(&gi, &self.sys.star(b));
            let coef = self.phased(-self.mu.eval(&gi, g), &coef);
            self.insert(&mut terms, &gi, coef);
        }
        CPElement { terms }
    }

    /// Keywise equality; a missing key stands for a zero coefficient.
    pub fn cp_eq(&self, x: &CpOf<M, D>, y: &CpOf<M, D>) -> bool {
        let zero = self.sys.zero();
        let keys: std::collections::BTreeSet<_> = x.terms.keys().chain(y.terms.keys()).collect();
        keys.into_iter()
            .all(|k| self.sys.eq(x.terms.get(k).unwrap_or(&zero), y.terms.get(k).unwrap_or(&zero)))
    }

    /// `p = i(1)U_e`.
    pub fn corner_p(&self) -> CpOf<M, D> {
        self.monomial(self.sys.embed(&self.alg().one()), &self.m().frac_identity())
    }

    /// `pXp`.
    pub fn corner_project(&self, x: &CpOf<M, D>) -> CpOf<M, D> {
        let p = self.corner_p();
        self.cp_mul(&p, &self.cp_mul(x, &p))
    }

    /// `i(a)U_e`.
    pub fn embed_base(&self, a: &BaseElem<M, D>) -> CpOf<M, D> {
        self.monomial(self.sys.embed(a), &self.m().frac_identity())
    }

    /// `v_s = U_s i(1) = β_s(i(1)) U_s`.
    pub fn v_iso(&self, s: &M::Elem) -> CpOf<M, D> {
        let g = self.m().embed(s);
        self.monomial(self.sys.beta(&g, &self.sys.embed(&self.alg().one())), &g)
    }

    /// `v_x* i(a) v_y = conj μ(x, x⁻¹y) · β_{x⁻¹}(i(α_x(1)·a·α_y(1))) · U_{x⁻¹y}`.
    pub fn sg_monomial(&self, x: &M::Elem, a: &BaseElem<M, D>, y: &M::Elem) -> CpOf<M, D> {
        let m = self.m();
        let alg = self.alg();
        let one = alg.one();
        let inner = alg.mul(&alg.mul(&alg.endo(x, &one), a), &alg.endo(y, &one));
        let coef = self.sys.beta(&m.embed_inv(x), &self.sys.embed(&inner));
        let k = Fraction::new(x.clone(), y.clone());
        let coef = self.phased(-self.mu.eval(&m.embed(x), &k), &coef);
        self.monomial(coef, &k)
    }

    pub fn sg_to_cp(&self, mono: &SgMonomial<M::Elem, BaseElem<M, D>>) -> CpOf<M, D> {
        self.cp_scale_phase(mono.phase, &self.sg_monomial(&mono.x, &mono.a, &mono.y))
    }

    /// The product of two semigroup monomials computed on the semigroup side:
    /// with `(t, z) = ore_pair(y, r)` the result is
    /// `v_{tx}* α_t(a·α_y(1))·α_z(α_r(1)·b) v_{zs}`.
    pub fn sg_mul_direct(
        &self,
        m1: &SgMonomial<M::Elem, BaseElem<M, D>>,
        m2: &SgMonomial<M::Elem, BaseElem<M, D>>,
        convention: PhaseConvention,
    ) -> SgMonomial<M::Elem, BaseElem<M, D>> {
        let m = self.m();
        let alg = self.alg();
        let lam = |s: &M::Elem, t: &M::Elem| self.mu.lambda_eval(s, t);
        let one = alg.one();
        let (x, y, r, s) = (&m1.x, &m1.y, &m2.x, &m2.y);
        let (t, z) = m.ore_pair(y, r);
        let left = alg.endo(&t, &alg.mul(&m1.a, &alg.endo(y, &one)));
        let right = alg.endo(&z, &alg.mul(&alg.endo(r, &one), &m2.a));
        let first = match convention {
            PhaseConvention::Derived => lam(&t, y),
            PhaseConvention::Printed => lam(y, &t),
        };
        let phase = m1.phase + m2.phase + first - lam(&z, r) - lam(&t, x) + lam(&z, s);
        SgMonomial { x: m.mul(&t, x), a: alg.mul(&left, &right), y: m.mul(&z, s), phase }
    }

    /// `X, Y` with `X·p·Y = b·U_g`, where `b = β_s⁻¹(i(c))` at the level
    /// reported by the system: `X = conj μ(s⁻¹,s)·b·U_{s⁻¹}` and
    /// `Y = (μ(s⁻¹,s) − μ(s⁻¹,sg))·i(1)·U_{sg}`.
    pub fn fullness_witness(
        &self,
        b: &D::Elem,
        g: &Fraction<M::Elem>,
    ) -> std::result::Result<Factorization<M, D>, CheckFailure> {
        let m = self.m();
        let s = self.sys.level_hint(b);
        if self.sys.localize(b, &s).is_none() {
            return Err(CheckFailure::new(
                "fullness: localization",
                json!({ "b": self.sys.elem_to_json(b), "level": m.elem_to_json(&s) }),
            ));
        }
        let si = m.embed_inv(&s);
        let se = m.embed(&s);
        let sg = m.frac_mul(&se, g);
        let x = self.monomial(self.phased(-self.mu.eval(&si, &se), b), &si);
        let phase = self.mu.eval(&si, &se) - self.mu.eval(&si, &sg);
        let y = self.monomial(self.phased(phase, &self.sys.embed(&self.alg().one())), &sg);
        Ok((x, y))
    }

    pub fn sample_cp<R: Rng + ?Sized>(&self, rng: &mut R, terms: usize) -> CpOf<M, D> {
        let mut x = CPElement::zero();
        for _ in 0..terms {
            let g = self.m().sample_fraction(rng);
            x = self.cp_add(&x, &self.monomial(self.sys.sample_elem(rng), &g));
        }
        x
    }

    /// A list of `{"g": fraction, "coef": element}`.
    pub fn cp_to_json(&self, x: &CpOf<M, D>) -> Value {
        Value::Array(
            x.terms
                .iter()
                .map(|(g, b)| json!({ "g": self.m().frac_to_json(g), "coef": self.sys.elem_to_json(b) }))
                .collect(),
        )
    }

    pub fn sg_to_json(&self, mono: &SgMonomial<M::Elem, BaseElem<M, D>>) -> Value {
        let m = self.m();
        json!({
            "x": m.elem_to_json(&mono.x),
            "a": self.alg().elem_to_json(&mono.a),
            "y": m.elem_to_json(&mono.y),
            "phase": mono.phase,
        })
    }

    pub fn sample_sg<R: Rng + ?Sized>(&self, rng: &mut R) -> SgMonomial<M::Elem, BaseElem<M, D>> {
        let m = self.m();
        SgMonomial { x: m.sample(rng), a: self.alg().sample(rng), y: m.sample(rng), phase: Phase::zero() }
    }
}

/// Counts of checks run by [`corner_check`].
#[derive(Clone, Copy, Debug)]
pub struct CornerSamples {
    pub isometries: usize,
    pub covariance: usize,
    pub fullness: usize,
}

/// `p = p* = p²`, `v_s*v_s = p`, `v_sv_t = λ(s,t)v_{st}`,
/// `v_t i(a) v_t* = i(α_t(a))`, and exact fullness factorizations.
pub fn corner_check<M, D, R>(
    cp: &CrossedProduct<M, D>,
    rng: &mut R,
    sizes: CornerSamples,
) -> std::result::Result<usize, CheckFailure>
where
    M: OreMonoid,
    D: DilatedSystem<M>,
    R: Rng + ?Sized,
{
    let m = cp.m();
    let alg = cp.alg();
    let p = cp.corner_p();
    let mut cases = 1;
    if !cp.cp_eq(&cp.cp_mul(&p, &p), &p) || !cp.cp_eq(&cp.cp_star(&p), &p) {
        return Err(CheckFailure::new("p is a projection", cp.cp_to_json(&p)));
    }
    for _ in 0..sizes.isometries {
        let (s, t) = (m.sample(rng), m.sample(rng));
        let (vs, vt) = (cp.v_iso(&s), cp.v_iso(&t));
        cases += 2;
        if !cp.cp_eq(&cp.cp_mul(&cp.cp_star(&vs), &vs), &p) {
            return Err(CheckFailure::new("v_s* v_s = p", json!({ "s": m.elem_to_json(&s) })));
        }
        let rhs = cp.cp_scale_phase(cp.mu.lambda_eval(&s, &t), &cp.v_iso(&m.mul(&s, &t)));
        if !cp.cp_eq(&cp.cp_mul(&vs, &vt), &rhs) {
            return Err(CheckFailure::new(
                "v_s v_t = λ(s,t) v_st",
                json!({ "s": m.elem_to_json(&s), "t": m.elem_to_json(&t) }),
            ));
        }
    }
    for _ in 0..sizes.covariance {
        let t = m.sample(rng);
        let a = alg.sample(rng);
        let vt = cp.v_iso(&t);
        cases += 1;
        let lhs = cp.cp_mul(&cp.cp_mul(&vt, &cp.embed_base(&a)), &cp.cp_star(&vt));
        if !cp.cp_eq(&lhs, &cp.embed_base(&alg.endo(&t, &a))) {
            return Err(CheckFailure::new(
                "v_t i(a) v_t* = i(α_t(a))",
                json!({ "t": m.elem_to_json(&t), "a": alg.elem_to_json(&a) }),
            ));
        }
    }
    for _ in 0..sizes.fullness {
        let b = cp.sys.sample_elem(rng);
        let g = m.sample_fraction(rng);
        cases += 1;
        let (x, y) = cp.fullness_witness(&b, &g)?;
        if !cp.cp_eq(&cp.cp_mul(&cp.cp_mul(&x, &p), &y), &cp.monomial(b.clone(), &g)) {
            return Err(CheckFailure::new(
                "fullness X p Y = b U_g",
                json!({ "b": cp.sys.elem_to_json(&b), "g": m.frac_to_json(&g) }),
            ));
        }
    }
    Ok(cases)
}

/// Checks `sg_mul_direct(m1, m2) = cp_mul(sg_monomial(m1), sg_monomial(m2))`
/// on `pairs` random monomial pairs, and that each closed form agrees with
/// `v_x* · i(a) · v_y` expanded by `cp_mul`.
pub fn monomial_oracle_check<M, D, R>(
    cp: &CrossedProduct<M, D>,
    convention: PhaseConvention,
    rng: &mut R,
    pairs: usize,
) -> std::result::Result<usize, CheckFailure>
where
    M: OreMonoid,
    D: DilatedSystem<M>,
    R: Rng + ?Sized,
{
    let mut cases = 0;
    for _ in 0..pairs {
        let m1 = cp.sample_sg(rng);
        let m2 = cp.sample_sg(rng);
        for mono in [&m1, &m2] {
            cases += 1;
            let expanded = cp.cp_mul(&cp.cp_mul(&cp.cp_star(&cp.v_iso(&mono.x)), &cp.embed_base(&mono.a)), &cp.v_iso(&mono.y));
            if !cp.cp_eq(&expanded, &cp.sg_to_cp(mono)) {
                return Err(CheckFailure::new("sg_monomial = v_x* i(a) v_y", cp.sg_to_json(mono)));
            }
        }
        cases += 1;
        let direct = cp.sg_to_cp(&cp.sg_mul_direct(&m1, &m2, convention));
        let oracle = cp.cp_mul(&cp.sg_to_cp(&m1), &cp.sg_to_cp(&m2));
        if !cp.cp_eq(&direct, &oracle) {
            return Err(CheckFailure::new(
                "sg_mul_direct = cp_mul of monomials",
                json!({ "m1": cp.sg_to_json(&m1), "m2": cp.sg_to_json(&m2) }),
            ));
        }
    }
    Ok(cases)
}

/// Associativity of `cp_mul` and `(XY)* = Y*X*`, `X** = X` on random elements.
pub fn algebra_check<M, D, R>(
    cp: &CrossedProduct<M, D>,
    rng: &mut R,
    samples: usize,
) -> std::result::Result<usize, CheckFailure>
where
    M: OreMonoid,
    D: DilatedSystem<M>,
    R: Rng + ?Sized,
{
    for _ in 0..samples {
        let x = cp.sample_cp(rng, 2);
        let y = cp.sample_cp(rng, 2);
        let z = cp.sample_cp(rng, 1);
        let w = || json!({ "x": cp.cp_to_json(&x), "y": cp.cp_to_json(&y) });
        if !cp.cp_eq(&cp.cp_mul(&cp.cp_mul(&x, &y), &z), &cp.cp_mul(&x, &cp.cp_mul(&y, &z))) {
            return Err(CheckFailure::new("cp_mul associative", w()));
        }
        if !cp.cp_eq(&cp.cp_star(&cp.cp_mul(&x, &y)), &cp.cp_mul(&cp.cp_star(&y), &cp.cp_star(&x))) {
            return Err(CheckFailure::new("(XY)* = Y*X*", w()));
        }
        if !cp.cp_eq(&cp.cp_star(&cp.cp_star(&x)), &x) {
            return Err(CheckFailure::new("X** = X", w()));
        }
    }
    Ok(samples * 3)
}

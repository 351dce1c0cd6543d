//! Circle-valued multipliers on an Ore monoid and their extension to `G = S⁻¹S`.
//!
//! A fraction `(x, y)` is read as the formal word `U_x* U_y`. Products of
//! two such words reduce, through one Ore pair and the relations
//! `U_s U_t = λ(s,t) U_{st}`, to a phase times a single word; that phase,
//! corrected by the phase relating the reduced word to the section's
//! representative of the product, is `μ(g, h)`.

use std::fmt::Debug;
use std::sync::{Arc, RwLock};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ore::{Fraction, NatAdd2, OreMonoid};
use crate::scalar::Phase;

/// A normalized 2-cocycle `λ: S×S → ℚ/ℤ`.
pub trait Multiplier<M: OreMonoid>: Send + Sync {
    fn eval(&self, s: &M::Elem, t: &M::Elem) -> Phase;

    fn describe(&self) -> Value;
}

pub type MultiplierRef<M> = Arc<dyn Multiplier<M>>;

/// `λ ≡ 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Trivial;

impl<M: OreMonoid> Multiplier<M> for Trivial {
    fn eval(&self, _: &M::Elem, _: &M::Elem) -> Phase {
        Phase::zero()
    }

    fn describe(&self) -> Value {
        json!({ "name": "trivial" })
    }
}

/// The bicharacter `λ((a,b),(c,d)) = θ·b·c` on `ℕ²`.
#[derive(Clone, Copy, Debug)]
pub struct Bicharacter {
    pub theta: Phase,
}

impl Bicharacter {
    pub fn new(theta: Phase) -> Self {
        Bicharacter { theta }
    }
}

impl Multiplier<NatAdd2> for Bicharacter {
    fn eval(&self, s: &[u64; 2], t: &[u64; 2]) -> Phase {
        self.theta.times((s[1] * t[0]) as i64)
    }

    fn describe(&self) -> Value {
        json!({ "name": "bicharacter", "theta": self.theta })
    }
}

/// Any closure, for instance-specific multipliers and tests.
pub struct FnMultiplier<F> {
    name: String,
    f: F,
}

impl<F> FnMultiplier<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnMultiplier { name: name.into(), f }
    }
}

impl<M, F> Multiplier<M> for FnMultiplier<F>
where
    M: OreMonoid,
    F: Fn(&M::Elem, &M::Elem) -> Phase + Send + Sync,
{
    fn eval(&self, s: &M::Elem, t: &M::Elem) -> Phase {
        (self.f)(s, t)
    }

    fn describe(&self) -> Value {
        json!({ "name": self.name })
    }
}

/// `base` with the single value at `(s, t)` shifted by `delta`. Used as a
/// negative control: the result is not a cocycle unless `delta = 0`.
pub struct Perturbed<M: OreMonoid> {
    pub base: MultiplierRef<M>,
    pub at: (M::Elem, M::Elem),
    pub delta: Phase,
}

impl<M: OreMonoid> Multiplier<M> for Perturbed<M> {
    fn eval(&self, s: &M::Elem, t: &M::Elem) -> Phase {
        let v = self.base.eval(s, t);
        if *s == self.at.0 && *t == self.at.1 {
            v + self.delta
        } else {
            v
        }
    }

    fn describe(&self) -> Value {
        json!({
            "name": "perturbed",
            "base": self.base.describe(),
            "at": [format!("{:?}", self.at.0), format!("{:?}", self.at.1)],
            "delta": self.delta,
        })
    }
}

/// Builds a named multiplier on `ℕ²` from its JSON description.
pub fn nat2_multiplier_from_json(v: &Value) -> Result<MultiplierRef<NatAdd2>> {
    let name = v.get("name").and_then(Value::as_str).unwrap_or("");
    match name {
        "trivial" => Ok(Arc::new(Trivial)),
        "bicharacter" => {
            let theta: Phase = serde_json::from_value(v.get("theta").cloned().unwrap_or(json!("0")))?;
            Ok(Arc::new(Bicharacter::new(theta)))
        }
        other => Err(Error::Unknown { kind: "multiplier", name: other.to_string() }),
    }
}

/// A triple on which `λ(r,s) λ(rs,t) = λ(r,st) λ(s,t)` fails.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleViolation<E> {
    pub triple: (E, E, E),
    pub lhs: Phase,
    pub rhs: Phase,
}

/// Checks the cocycle identity exactly on every supplied triple.
pub fn cocycle_check<M: OreMonoid>(
    m: &M,
    lambda: &dyn Multiplier<M>,
    triples: &[(M::Elem, M::Elem, M::Elem)],
) -> std::result::Result<(), CocycleViolation<M::Elem>> {
    for (r, s, t) in triples {
        let lhs = lambda.eval(r, s) + lambda.eval(&m.mul(r, s), t);
        let rhs = lambda.eval(r, &m.mul(s, t)) + lambda.eval(s, t);
        if lhs != rhs {
            return Err(CocycleViolation { triple: (r.clone(), s.clone(), t.clone()), lhs, rhs });
        }
    }
    Ok(())
}

/// Checks `λ(e,s) = λ(s,e) = 0` on the samples.
pub fn normalized_check<M: OreMonoid>(m: &M, lambda: &dyn Multiplier<M>, samples: &[M::Elem]) -> Result<()> {
    let e = m.identity();
    for s in samples.iter().chain(std::iter::once(&e)) {
        if !lambda.eval(&e, s).is_zero() || !lambda.eval(s, &e).is_zero() {
            return Err(Error::NotNormalized(format!("{s:?}")));
        }
    }
    Ok(())
}

/// The phase `p` with `word(rep2) = p · word(rep1)`, where `word(x, y) = U_x* U_y`.
///
/// Both representatives are lifted to a common one with `(u, v) = ore_pair(x, x')`;
/// lifting `(x, y)` to `(ux, uy)` multiplies the word by `λ(u,x) − λ(u,y)`.
pub fn transition_phase<M: OreMonoid>(
    m: &M,
    lambda: &dyn Multiplier<M>,
    rep1: &Fraction<M::Elem>,
    rep2: &Fraction<M::Elem>,
) -> Result<Phase> {
    if rep1 == rep2 {
        return Ok(Phase::zero());
    }
    let (u, v) = m.ore_pair(&rep1.x, &rep2.x);
    transition_phase_with(m, lambda, rep1, rep2, &u, &v)
}

/// [`transition_phase`] through a caller-supplied Ore pair `u·x = v·x'`.
pub fn transition_phase_with<M: OreMonoid>(
    m: &M,
    lambda: &dyn Multiplier<M>,
    rep1: &Fraction<M::Elem>,
    rep2: &Fraction<M::Elem>,
    u: &M::Elem,
    v: &M::Elem,
) -> Result<Phase> {
    if m.mul(u, &rep1.x) != m.mul(v, &rep2.x) || m.mul(u, &rep1.y) != m.mul(v, &rep2.y) {
        return Err(Error::NotEquivalent(format!("{rep1:?}"), format!("{rep2:?}")));
    }
    let lift1 = lambda.eval(u, &rep1.x) - lambda.eval(u, &rep1.y);
    let lift2 = lambda.eval(v, &rep2.x) - lambda.eval(v, &rep2.y);
    Ok(lift1 - lift2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionMode {
    /// The instance's `reduce`, falling back to the memo table when absent.
    Reduce,
    /// First representative seen for each class.
    Memo,
}

/// A choice of representative pair for each element of `G`.
///
/// Embedded elements of `S` always map to `(e, s)`. Memo entries are written
/// once per class and never change afterwards.
#[derive(Debug)]
pub struct Section<E> {
    mode: SectionMode,
    table: RwLock<Vec<Fraction<E>>>,
}

impl<E: Clone + Debug + Eq> Section<E> {
    pub fn new(mode: SectionMode) -> Self {
        Section { mode, table: RwLock::new(Vec::new()) }
    }

    pub fn reduce() -> Self {
        Section::new(SectionMode::Reduce)
    }

    pub fn memo() -> Self {
        Section::new(SectionMode::Memo)
    }

    pub fn mode(&self) -> SectionMode {
        self.mode
    }

    pub fn memo_len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn rep<M: OreMonoid<Elem = E>>(&self, m: &M, g: &Fraction<E>) -> Fraction<E> {
        if let Some(s) = m.frac_in_monoid(g) {
            return m.embed(&s);
        }
        if self.mode == SectionMode::Reduce {
            if let Some((x, y)) = m.reduce(&g.x, &g.y) {
                return Fraction::new(x, y);
            }
        }
        if let Some(found) = self.table.read().unwrap().iter().find(|r| m.frac_eq(r, g)) {
            return found.clone();
        }
        let mut table = self.table.write().unwrap();
        if let Some(found) = table.iter().find(|r| m.frac_eq(r, g)) {
            return found.clone();
        }
        table.push(g.clone());
        g.clone()
    }
}

/// The extension `μ` of a multiplier `λ` on `S` to `G`.
pub struct ExtendedMultiplier<M: OreMonoid> {
    monoid: M,
    lambda: MultiplierRef<M>,
    section: Arc<Section<M::Elem>>,
}

impl<M: OreMonoid + Clone> Clone for ExtendedMultiplier<M> {
    fn clone(&self) -> Self {
        ExtendedMultiplier { monoid: self.monoid.clone(), lambda: self.lambda.clone(), section: self.section.clone() }
    }
}

/// Validates `λ` on the samples (normalization and the cocycle identity on
/// all sample triples) and returns its extension using `section`.
pub fn extend_multiplier<M: OreMonoid>(
    monoid: M,
    lambda: MultiplierRef<M>,
    section: Arc<Section<M::Elem>>,
    samples: &[M::Elem],
) -> Result<ExtendedMultiplier<M>> {
    normalized_check(&monoid, lambda.as_ref(), samples)?;
    let mut triples = Vec::with_capacity(samples.len().pow(3));
    for r in samples {
        for s in samples {
            for t in samples {
                triples.push((r.clone(), s.clone(), t.clone()));
            }
        }
    }
    cocycle_check(&monoid, lambda.as_ref(), &triples)
        .map_err(|v| Error::CocycleViolation(format!("{:?}", v.triple)))?;
    Ok(ExtendedMultiplier::new_unchecked(monoid, lambda, section))
}

impl<M: OreMonoid> ExtendedMultiplier<M> {
    pub fn new_unchecked(monoid: M, lambda: MultiplierRef<M>, section: Arc<Section<M::Elem>>) -> Self {
        ExtendedMultiplier { monoid, lambda, section }
    }

    pub fn monoid(&self) -> &M {
        &self.monoid
    }

    pub fn lambda(&self) -> &dyn Multiplier<M> {
        self.lambda.as_ref()
    }

    pub fn lambda_ref(&self) -> MultiplierRef<M> {
        self.lambda.clone()
    }

    pub fn section(&self) -> &Arc<Section<M::Elem>> {
        &self.section
    }

    pub fn rep(&self, g: &Fraction<M::Elem>) -> Fraction<M::Elem> {
        self.section.rep(&self.monoid, g)
    }

    pub fn lambda_eval(&self, s: &M::Elem, t: &M::Elem) -> Phase {
        self.lambda.eval(s, t)
    }

    /// `U_x* U_y · U_r* U_w = phase · U_{tx}* U_{zw}` with `t·y = z·r`.
    pub fn reduce_word_product(&self, g: &Fraction<M::Elem>, h: &Fraction<M::Elem>) -> (Phase, Fraction<M::Elem>) {
        let m = &self.monoid;
        let l = self.lambda.as_ref();
        let (t, z) = m.ore_pair(&g.y, &h.x);
        let phase = l.eval(&t, &g.y) - l.eval(&z, &h.x) - l.eval(&t, &g.x) + l.eval(&z, &h.y);
        (phase, Fraction::new(m.mul(&t, &g.x), m.mul(&z, &h.y)))
    }

    /// `μ(g, h)`, defined by `U_g U_h = μ(g,h) U_{gh}` with `U_g = word(rep(g))`.
    pub fn eval(&self, g: &Fraction<M::Elem>, h: &Fraction<M::Elem>) -> Phase {
        let (rg, rh) = (self.rep(g), self.rep(h));
        let (phase, reduced) = self.reduce_word_product(&rg, &rh);
        let target = self.rep(&reduced);
        let tp = transition_phase(&self.monoid, self.lambda.as_ref(), &reduced, &target)
            .expect("reduced word and its section representative denote the same element");
        phase - tp
    }

    /// The phase `p` with `word(g) = p · U_[g]`, i.e. the transition from the
    /// section representative to the given pair.
    pub fn phase_to_rep(&self, g: &Fraction<M::Elem>) -> Phase {
        let r = self.rep(g);
        transition_phase(&self.monoid, self.lambda.as_ref(), &r, g).expect("section returns an equivalent pair")
    }
}

/// A solved coboundary `c` with `d(g,h) = c(g) + c(h) − c(gh)` on a sample.
#[derive(Clone, Debug)]
pub struct Coboundary<E> {
    pub values: Vec<(Fraction<E>, Phase)>,
}

/// Failure of [`solve_coboundary`]: the pair on which the solved `c` does not fit.
#[derive(Clone, Debug)]
pub struct CoboundaryFailure<E> {
    pub g: Fraction<E>,
    pub h: Fraction<E>,
    pub difference: Phase,
    pub predicted: Phase,
}

/// Solves `d = δc` on `sample` for a 2-cocycle `d` on `G` that vanishes on
/// the embedded `S×S`, then verifies the identity on every sampled pair.
///
/// With `c = 0` on `S`: `c(x⁻¹) = d(x, x⁻¹) + d(e,e)` and
/// `c(x⁻¹y) = c(x⁻¹) − d(x⁻¹, y)`, evaluated on section representatives.
pub fn solve_coboundary<M, D>(
    m: &M,
    section: &Section<M::Elem>,
    d: D,
    sample: &[Fraction<M::Elem>],
) -> std::result::Result<Coboundary<M::Elem>, CoboundaryFailure<M::Elem>>
where
    M: OreMonoid,
    D: Fn(&Fraction<M::Elem>, &Fraction<M::Elem>) -> Phase,
{
    let e = m.frac_identity();
    let c_e = d(&e, &e);
    let c = |g: &Fraction<M::Elem>| -> Phase {
        let r = section.rep(m, g);
        let inv_x = m.embed_inv(&r.x);
        let c_inv = d(&m.embed(&r.x), &inv_x) + c_e;
        c_inv - d(&inv_x, &m.embed(&r.y))
    };
    for g in sample {
        for h in sample {
            let gh = m.frac_mul(g, h);
            let predicted = c(g) + c(h) - c(&gh);
            let difference = d(g, h);
            if predicted != difference {
                return Err(CoboundaryFailure { g: g.clone(), h: h.clone(), difference, predicted });
            }
        }
    }
    Ok(Coboundary { values: sample.iter().map(|g| (g.clone(), c(g))).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::{IntMat2Pos, NatAdd, NatMul};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quarter() -> Bicharacter {
        Bicharacter::new(Phase::new(1, 4))
    }

    fn nat2_samples() -> Vec<[u64; 2]> {
        let mut v = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                v.push([a, b]);
            }
        }
        v
    }

    #[test]
    fn trivial_and_bicharacter_are_cocycles() {
        let m = NatAdd2::default();
        let s = nat2_samples();
        let triples: Vec<_> = s.iter().flat_map(|r| s.iter().map(move |t| (*r, *t, [1, 2]))).collect();
        assert!(cocycle_check(&m, &Trivial, &triples).is_ok());
        assert!(cocycle_check(&m, &quarter(), &triples).is_ok());
    }

    #[test]
    fn perturbed_multiplier_fails_with_witness() {
        let m = NatAdd2::default();
        let p = Perturbed::<NatAdd2> { base: Arc::new(quarter()), at: ([1, 0], [0, 1]), delta: Phase::new(1, 8) };
        let triples = vec![([0, 0], [1, 0], [1, 1]), ([1, 0], [0, 1], [1, 0])];
        let err = cocycle_check(&m, &p, &triples).unwrap_err();
        assert_eq!(err.triple, ([1, 0], [0, 1], [1, 0]));
        assert_ne!(err.lhs, err.rhs);
    }

    #[test]
    fn transition_phase_examples() {
        let m = NatAdd2::default();
        let l = quarter();
        let rep = Fraction::new([1, 0], [2, 0]);
        assert_eq!(transition_phase(&m, &l, &rep, &rep).unwrap(), Phase::zero());
        let lifted = m.frac_lift(&rep, &[0, 1]);
        assert_eq!(transition_phase(&m, &l, &rep, &lifted).unwrap(), Phase::new(-1, 4));
        assert_eq!(transition_phase(&m, &Trivial, &rep, &lifted).unwrap(), Phase::zero());
        assert!(matches!(
            transition_phase(&m, &l, &rep, &Fraction::new([0, 0], [0, 1])),
            Err(Error::NotEquivalent(..))
        ));
    }

    #[test]
    fn transition_phase_composes_along_paths() {
        let m = NatAdd2::default();
        let l = quarter();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = m.sample_fraction(&mut rng);
            let b = m.frac_lift(&a, &m.sample(&mut rng));
            let c = m.frac_lift(&m.frac_reduce(&a), &m.sample(&mut rng));
            let ab = transition_phase(&m, &l, &a, &b).unwrap();
            let bc = transition_phase(&m, &l, &b, &c).unwrap();
            let ac = transition_phase(&m, &l, &a, &c).unwrap();
            assert_eq!(ab + bc, ac);
            // independent of the Ore pair used
            let (u, v) = m.ore_pair(&a.x, &c.x);
            let w = m.sample(&mut rng);
            let alt = transition_phase_with(&m, &l, &a, &c, &m.mul(&w, &u), &m.mul(&w, &v)).unwrap();
            assert_eq!(alt, ac);
        }
    }

    fn extended(section: Section<[u64; 2]>) -> ExtendedMultiplier<NatAdd2> {
        extend_multiplier(NatAdd2::default(), Arc::new(quarter()), Arc::new(section), &nat2_samples()[..9]).unwrap()
    }

    #[test]
    fn trivial_extension_is_trivial() {
        let mu = extend_multiplier(NatMul::default(), Arc::new(Trivial), Arc::new(Section::reduce()), &[1, 2, 3, 6]).unwrap();
        assert!(mu.eval(&Fraction::new(2, 3), &Fraction::new(5, 4)).is_zero());
    }

    #[test]
    fn extension_restricts_to_lambda() {
        for mu in [extended(Section::reduce()), extended(Section::memo())] {
            for s in nat2_samples() {
                for t in nat2_samples() {
                    assert_eq!(mu.eval(&mu.monoid().embed(&s), &mu.monoid().embed(&t)), quarter().eval(&s, &t));
                }
            }
        }
    }

    #[test]
    fn extension_spot_values_on_z2() {
        // g = (0,-1), h = (-1,0): the reduced words are U_{(0,1)}* and U_{(1,0)}*.
        // U_g U_h = (U_{(1,0)} U_{(0,1)})* = conj λ((1,0),(0,1)) U_{(1,1)}* = U_{gh}.
        let mu = extended(Section::reduce());
        let g = Fraction::new([0, 1], [0, 0]);
        let h = Fraction::new([1, 0], [0, 0]);
        assert_eq!(mu.eval(&g, &h), Phase::zero());
        assert_eq!(mu.eval(&h, &g), Phase::new(3, 4));
        // the commutator phase is a cohomology invariant and matches bc/4
        assert_eq!(mu.eval(&g, &h) - mu.eval(&h, &g), Phase::new(1, 4));
    }

    #[test]
    fn extension_is_a_cocycle_on_matrices() {
        let m = IntMat2Pos::default();
        let lambda: MultiplierRef<IntMat2Pos> = Arc::new(Trivial);
        let mu = extend_multiplier(m.clone(), lambda, Arc::new(Section::memo()), &[]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let (g, h) = (m.sample_fraction(&mut rng), m.sample_fraction(&mut rng));
            assert!(mu.eval(&g, &h).is_zero());
        }
        assert!(mu.section().memo_len() > 0);
    }

    #[test]
    fn extension_is_a_cocycle_on_nat_add() {
        let m = NatAdd::default();
        // λ(a,b) = a·b/6 is a coboundary-type symmetric cocycle on ℕ
        let lambda: MultiplierRef<NatAdd> =
            Arc::new(FnMultiplier::new("ab/6", |a: &u64, b: &u64| Phase::new((a * b) as i64, 6)));
        let mu = extend_multiplier(m.clone(), lambda, Arc::new(Section::reduce()), &[0, 1, 2, 3, 5]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (g, h, k) = (m.sample_fraction(&mut rng), m.sample_fraction(&mut rng), m.sample_fraction(&mut rng));
            let lhs = mu.eval(&g, &h) + mu.eval(&m.frac_mul(&g, &h), &k);
            let rhs = mu.eval(&g, &m.frac_mul(&h, &k)) + mu.eval(&h, &k);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn unnormalized_or_broken_multipliers_are_rejected() {
        let m = NatAdd2::default();
        let shifted: MultiplierRef<NatAdd2> = Arc::new(FnMultiplier::new("const", |_: &[u64; 2], _: &[u64; 2]| Phase::new(1, 3)));
        assert!(matches!(
            extend_multiplier(m.clone(), shifted, Arc::new(Section::reduce()), &[[1, 0]]),
            Err(Error::NotNormalized(_))
        ));
        let broken: MultiplierRef<NatAdd2> =
            Arc::new(Perturbed::<NatAdd2> { base: Arc::new(quarter()), at: ([1, 0], [0, 1]), delta: Phase::new(1, 8) });
        assert!(matches!(
            extend_multiplier(m, broken, Arc::new(Section::reduce()), &nat2_samples()[..6]),
            Err(Error::CocycleViolation(_))
        ));
    }

    #[test]
    fn z2_bicharacter_and_extension_are_cohomologous() {
        let m = NatAdd2::default();
        let mu = extended(Section::reduce());
        let nu = |g: &Fraction<[u64; 2]>, h: &Fraction<[u64; 2]>| {
            let b = g.y[1] as i64 - g.x[1] as i64;
            let c = h.y[0] as i64 - h.x[0] as i64;
            Phase::new(b * c, 4)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sample: Vec<_> = (0..30).map(|_| m.sample_fraction(&mut rng)).collect();
        let cob = solve_coboundary(&m, mu.section(), |g, h| mu.eval(g, h) - nu(g, h), &sample);
        assert!(cob.is_ok(), "{cob:?}");
        // a non-cohomologous pair is detected: the bicharacter with 1/2 has a different commutator
        let bad = |g: &Fraction<[u64; 2]>, h: &Fraction<[u64; 2]>| mu.eval(g, h) - nu(g, h).times(2);
        assert!(solve_coboundary(&m, mu.section(), bad, &sample).is_err());
    }

    #[test]
    fn memo_section_is_write_once() {
        let m = NatAdd2::default();
        let s = Section::memo();
        let g = Fraction::new([2, 1], [0, 3]);
        let lifted = m.frac_lift(&g, &[1, 1]);
        assert_eq!(s.rep(&m, &lifted), lifted);
        assert_eq!(s.rep(&m, &g), lifted);
        assert_eq!(s.rep(&m, &Fraction::new([1, 1], [3, 2])), m.embed(&[2, 1]));
        assert_eq!(s.memo_len(), 1);
    }

    #[test]
    fn json_description_round_trip() {
        let l = nat2_multiplier_from_json(&json!({"name": "bicharacter", "theta": "1/4"})).unwrap();
        assert_eq!(l.describe(), json!({"name": "bicharacter", "theta": "1/4"}));
        assert!(nat2_multiplier_from_json(&json!({"name": "nope"})).is_err());
    }
}

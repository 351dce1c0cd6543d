//! Locally constant functions on the profinite integers `𝒵` and on the finite
//! adeles `A_f`, the division endomorphisms `α_n` of `C(𝒵)`, the `ℚ₊*`-action
//! `β` on `C_0(A_f)`, and the verification that `(C_0(A_f), ℚ₊*, β)` is the
//! minimal automorphic dilation of `(C(𝒵), ℕ×, α)`.
//!
//! `𝒵` is handled through its finite quotients `ℤ/N`: a function constant on
//! cosets of `N𝒵` is a vector of `N` values.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::crossed::{corner_check, CornerSamples, CrossedProduct};
use crate::dilation::sample_scalar;
use crate::error::{Error, Result};
use crate::limit::{dilation_iso_check, CheckFailure, DilatedSystem, EndoAlgebra, IsoSamples, LimElement, LimitAlgebra};
use crate::multiplier::{ExtendedMultiplier, Section, Trivial};
use crate::ore::{Fraction, NatAdd2, NatMul, OreMonoid};
use crate::scalar::Scalar;

/// A function on `𝒵` constant on cosets of `N𝒵`; `values[k]` is its value on `k + N𝒵`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZhatFn {
    #[serde(rename = "N")]
    pub level: u64,
    pub values: Vec<Scalar>,
}

impl ZhatFn {
    pub fn new(level: u64, values: Vec<Scalar>) -> Result<ZhatFn> {
        if level == 0 || values.len() as u64 != level {
            return Err(Error::Parse(format!("ZhatFn at level {level} needs {level} values, got {}", values.len())));
        }
        Ok(ZhatFn { level, values })
    }

    pub fn constant(c: Scalar) -> ZhatFn {
        ZhatFn { level: 1, values: vec![c] }
    }

    /// The indicator of `k + N𝒵`.
    pub fn indicator(level: u64, k: u64) -> ZhatFn {
        let mut values = vec![Scalar::zero(); level as usize];
        values[(k % level) as usize] = Scalar::one();
        ZhatFn { level, values }
    }

    pub fn value(&self, k: u64) -> &Scalar {
        &self.values[(k % self.level) as usize]
    }

    /// The same function at level `target`, a multiple of `N`.
    pub fn refine(&self, target: u64) -> ZhatFn {
        debug_assert_eq!(target % self.level, 0);
        ZhatFn { level: target, values: (0..target).map(|k| self.value(k).clone()).collect() }
    }

    /// The same function at its minimal level.
    pub fn simplify(&self) -> ZhatFn {
        let mut divisors: Vec<u64> = (1..=self.level).filter(|d| self.level.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        for d in divisors {
            if (0..self.level).all(|k| self.values[k as usize] == self.values[(k % d) as usize]) {
                return ZhatFn { level: d, values: self.values[..d as usize].to_vec() };
            }
        }
        self.clone()
    }

    fn zip(&self, other: &ZhatFn, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> ZhatFn {
        let l = self.level.lcm(&other.level);
        ZhatFn { level: l, values: (0..l).map(|k| op(self.value(k), other.value(k))).collect() }
    }

    pub fn fn_eq(&self, other: &ZhatFn) -> bool {
        let l = self.level.lcm(&other.level);
        (0..l).all(|k| self.value(k) == other.value(k))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }
}

/// `α_n(f)(x) = f(x/n)` if `n | x`, else `0`, at level `nN`.
pub fn alpha_n(n: u64, f: &ZhatFn) -> ZhatFn {
    let level = n * f.level;
    let values = (0..level)
        .map(|x| if x % n == 0 { f.value(x / n).clone() } else { Scalar::zero() })
        .collect();
    ZhatFn { level, values }
}

/// Which action of `ℕ×` on `C(𝒵)` a [`BostConnes`] algebra uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BcAction {
    /// `α_n` as in [`alpha_n`].
    #[default]
    Division,
    /// Supported on `1 + n𝒵` instead of `n𝒵` for `n > 1`; not compatible
    /// with the adele embedding.
    OffByOne,
    /// `α_n(f) = f(0)·1` for `n > 1`; not injective.
    Collapse,
}

/// `(C(𝒵), ℕ×, α)` on locally constant functions.
#[derive(Clone, Debug)]
pub struct BostConnes {
    /// Sampled functions have level at most `level_max`.
    pub level_max: u64,
    pub action: BcAction,
}

impl Default for BostConnes {
    fn default() -> Self {
        BostConnes { level_max: 12, action: BcAction::Division }
    }
}

impl BostConnes {
    pub fn with_action(level_max: u64, action: BcAction) -> Self {
        BostConnes { level_max, action }
    }

    fn apply(&self, n: u64, f: &ZhatFn) -> ZhatFn {
        if n == 1 {
            return f.clone();
        }
        match self.action {
            BcAction::Division => alpha_n(n, f),
            BcAction::OffByOne => {
                let level = n * f.level;
                let values = (0..level)
                    .map(|x| if x % n == 1 { f.value((x - 1) / n).clone() } else { Scalar::zero() })
                    .collect();
                ZhatFn { level, values }
            }
            BcAction::Collapse => ZhatFn::constant(f.value(0).clone()),
        }
    }

    fn preimage(&self, n: u64, g: &ZhatFn) -> Option<ZhatFn> {
        if n == 1 {
            return Some(g.clone());
        }
        let candidate = match self.action {
            BcAction::Collapse => ZhatFn::constant(g.value(0).clone()),
            BcAction::Division | BcAction::OffByOne => {
                let l = g.level.lcm(&n);
                let shift = if self.action == BcAction::OffByOne { 1 } else { 0 };
                ZhatFn { level: l / n, values: (0..l / n).map(|k| g.value(n * k + shift).clone()).collect() }
            }
        };
        self.apply(n, &candidate).fn_eq(g).then(|| candidate.simplify())
    }

    pub fn sample_fn<R: Rng + ?Sized>(&self, rng: &mut R) -> ZhatFn {
        let level = rng.gen_range(1..=self.level_max.max(1));
        let values = (0..level)
            .map(|_| if rng.gen_bool(0.3) { Scalar::zero() } else { sample_scalar(rng) })
            .collect();
        ZhatFn { level, values }
    }
}

macro_rules! zhat_algebra_ops {
    () => {
        fn one(&self) -> ZhatFn {
            ZhatFn::constant(Scalar::one())
        }
        fn zero(&self) -> ZhatFn {
            ZhatFn::constant(Scalar::zero())
        }
        fn add(&self, a: &ZhatFn, b: &ZhatFn) -> ZhatFn {
            a.zip(b, |x, y| x + y)
        }
        fn mul(&self, a: &ZhatFn, b: &ZhatFn) -> ZhatFn {
            a.zip(b, |x, y| x * y)
        }
        fn star(&self, a: &ZhatFn) -> ZhatFn {
            ZhatFn { level: a.level, values: a.values.iter().map(Scalar::conj).collect() }
        }
        fn scale(&self, c: &Scalar, a: &ZhatFn) -> ZhatFn {
            ZhatFn { level: a.level, values: a.values.iter().map(|v| c * v).collect() }
        }
        fn eq(&self, a: &ZhatFn, b: &ZhatFn) -> bool {
            a.fn_eq(b)
        }
        fn is_zero(&self, a: &ZhatFn) -> bool {
            a.is_zero()
        }
        fn elem_to_json(&self, a: &ZhatFn) -> Value {
            json!(a)
        }
    };
}

impl EndoAlgebra<NatMul> for BostConnes {
    type Elem = ZhatFn;

    fn name(&self) -> &str {
        "bost-connes"
    }

    zhat_algebra_ops!();

    fn endo(&self, n: &u64, a: &ZhatFn) -> ZhatFn {
        self.apply(*n, a)
    }

    fn endo_preimage(&self, n: &u64, a: &ZhatFn) -> Option<ZhatFn> {
        self.preimage(*n, a)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ZhatFn {
        self.sample_fn(rng)
    }
}

/// `C(𝒵)` with `ℕ²` acting through `(a, b) ↦ α_{2^a 3^b}`.
#[derive(Clone, Debug, Default)]
pub struct BostConnesPow23 {
    pub inner: BostConnes,
}

fn pow23(s: &[u64; 2]) -> u64 {
    2u64.pow(s[0] as u32) * 3u64.pow(s[1] as u32)
}

impl EndoAlgebra<NatAdd2> for BostConnesPow23 {
    type Elem = ZhatFn;

    fn name(&self) -> &str {
        "bost-connes-2-3"
    }

    zhat_algebra_ops!();

    fn endo(&self, s: &[u64; 2], a: &ZhatFn) -> ZhatFn {
        self.inner.apply(pow23(s), a)
    }

    fn endo_preimage(&self, s: &[u64; 2], a: &ZhatFn) -> Option<ZhatFn> {
        self.inner.preimage(pow23(s), a)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ZhatFn {
        self.inner.sample_fn(rng)
    }
}

/// A function on `A_f` supported in `(1/n)𝒵` and constant on cosets of `N𝒵`;
/// `values[k]` is its value on `k/n + N𝒵`, `0 ≤ k < nN`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdeleFn {
    pub n: u64,
    #[serde(rename = "N")]
    pub level: u64,
    pub values: Vec<Scalar>,
}

impl AdeleFn {
    pub fn new(n: u64, level: u64, values: Vec<Scalar>) -> Result<AdeleFn> {
        if n == 0 || level == 0 || values.len() as u64 != n * level {
            return Err(Error::Parse(format!("AdeleFn with n={n}, N={level} needs {} values", n * level)));
        }
        Ok(AdeleFn { n, level, values })
    }

    pub fn zero() -> AdeleFn {
        AdeleFn { n: 1, level: 1, values: vec![Scalar::zero()] }
    }

    /// `1_𝒵`.
    pub fn unit_zhat() -> AdeleFn {
        AdeleFn { n: 1, level: 1, values: vec![Scalar::one()] }
    }

    /// The indicator of `k/n + N𝒵`.
    pub fn indicator(n: u64, level: u64, k: u64) -> AdeleFn {
        let mut values = vec![Scalar::zero(); (n * level) as usize];
        values[(k % (n * level)) as usize] = Scalar::one();
        AdeleFn { n, level, values }
    }

    /// The same function at scale `n·m` and constancy level `N·l`.
    pub fn refine(&self, m: u64, l: u64) -> AdeleFn {
        let (n2, level2) = (self.n * m, self.level * l);
        let size = self.n * self.level;
        let values = (0..n2 * level2)
            .map(|k| if k % m == 0 { self.values[((k / m) % size) as usize].clone() } else { Scalar::zero() })
            .collect();
        AdeleFn { n: n2, level: level2, values }
    }

    fn refine_to(&self, n: u64, level: u64) -> AdeleFn {
        self.refine(n / self.n, level / self.level)
    }

    fn common(&self, other: &AdeleFn) -> (AdeleFn, AdeleFn) {
        let n = self.n.lcm(&other.n);
        let level = self.level.lcm(&other.level);
        (self.refine_to(n, level), other.refine_to(n, level))
    }

    fn zip(&self, other: &AdeleFn, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> AdeleFn {
        let (a, b) = self.common(other);
        let values = a.values.iter().zip(&b.values).map(|(x, y)| op(x, y)).collect();
        AdeleFn { n: a.n, level: a.level, values }
    }

    pub fn fn_eq(&self, other: &AdeleFn) -> bool {
        let (a, b) = self.common(other);
        a.values == b.values
    }

    pub fn add(&self, other: &AdeleFn) -> AdeleFn {
        self.zip(other, |x, y| x + y)
    }

    pub fn mul(&self, other: &AdeleFn) -> AdeleFn {
        self.zip(other, |x, y| x * y)
    }

    pub fn star(&self) -> AdeleFn {
        AdeleFn { n: self.n, level: self.level, values: self.values.iter().map(Scalar::conj).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> AdeleFn {
        AdeleFn { n: self.n, level: self.level, values: self.values.iter().map(|v| c * v).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// Whether the support lies in `(1/s)𝒵`.
    pub fn supported_in(&self, s: u64) -> bool {
        let n = self.n.lcm(&s);
        let f = self.refine_to(n, self.level);
        let step = n / s;
        f.values.iter().enumerate().all(|(k, v)| (k as u64).is_multiple_of(step) || v.is_zero())
    }
}

/// `β_r(F)(a) = F(r⁻¹a)` for `r > 0`.
pub fn beta_q(r: Rational64, f: &AdeleFn) -> AdeleFn {
    assert!(*r.numer() > 0 && *r.denom() > 0, "β_r needs r > 0");
    let (p, q) = (*r.numer() as u64, *r.denom() as u64);
    let (n, level) = (q * f.n, p * f.level);
    let size = f.n * f.level;
    let values = (0..n * level)
        .map(|k| if k % p == 0 { f.values[((k / p) % size) as usize].clone() } else { Scalar::zero() })
        .collect();
    AdeleFn { n, level, values }
}

/// `f ↦ f` on `𝒵`, `0` off `𝒵`.
pub fn i_embed_adele(f: &ZhatFn) -> AdeleFn {
    AdeleFn { n: 1, level: f.level, values: f.values.clone() }
}

fn group_to_rational(g: &Fraction<u64>) -> Rational64 {
    Rational64::new(g.y as i64, g.x as i64)
}

/// `θ(β_n⁻¹(i(f))) = β_{1/n}(i(f))`.
pub fn theta_iso(b: &LimElement<u64, ZhatFn>) -> AdeleFn {
    beta_q(Rational64::new(1, b.level as i64), &i_embed_adele(&b.elem))
}

/// `f` with `β_{1/s}(i(f)) = F`, when `F` is supported in `(1/s)𝒵`.
pub fn localize_adele(f: &AdeleFn, s: u64) -> Option<ZhatFn> {
    if !f.supported_in(s) {
        return None;
    }
    let n = f.n.lcm(&s);
    let g = f.refine_to(n, f.level);
    let step = n / s;
    let values = (0..s * f.level).map(|j| g.values[(j * step) as usize].clone()).collect();
    Some(ZhatFn { level: s * f.level, values }.simplify())
}

/// `θ⁻¹(F)`, the limit element at the support scale of `F`.
pub fn theta_inv(f: &AdeleFn) -> Result<LimElement<u64, ZhatFn>> {
    localize_adele(f, f.n)
        .map(|a| LimElement::new(f.n, a))
        .ok_or_else(|| Error::Localization(format!("no support scale for {f:?}")))
}

/// `(C_0(A_f), ℚ₊*, β)` with `j = i_embed_adele`.
#[derive(Clone, Debug)]
pub struct AdeleModel {
    monoid: NatMul,
    base: BostConnes,
}

impl AdeleModel {
    pub fn new(monoid: NatMul, base: BostConnes) -> Self {
        AdeleModel { monoid, base }
    }
}

impl DilatedSystem<NatMul> for AdeleModel {
    type Base = BostConnes;
    type Elem = AdeleFn;

    fn monoid(&self) -> &NatMul {
        &self.monoid
    }
    fn base(&self) -> &BostConnes {
        &self.base
    }
    fn embed(&self, a: &ZhatFn) -> AdeleFn {
        i_embed_adele(a)
    }
    fn beta(&self, g: &Fraction<u64>, b: &AdeleFn) -> AdeleFn {
        beta_q(group_to_rational(g), b)
    }
    fn zero(&self) -> AdeleFn {
        AdeleFn::zero()
    }
    fn add(&self, a: &AdeleFn, b: &AdeleFn) -> AdeleFn {
        a.add(b)
    }
    fn mul(&self, a: &AdeleFn, b: &AdeleFn) -> AdeleFn {
        a.mul(b)
    }
    fn star(&self, a: &AdeleFn) -> AdeleFn {
        a.star()
    }
    fn scale(&self, c: &Scalar, a: &AdeleFn) -> AdeleFn {
        a.scale(c)
    }
    fn eq(&self, a: &AdeleFn, b: &AdeleFn) -> bool {
        a.fn_eq(b)
    }
    fn is_zero(&self, b: &AdeleFn) -> bool {
        b.is_zero()
    }
    fn localize(&self, b: &AdeleFn, s: &u64) -> Option<ZhatFn> {
        localize_adele(b, *s)
    }
    fn level_hint(&self, b: &AdeleFn) -> u64 {
        b.n
    }
    fn sample_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> AdeleFn {
        let n = self.monoid.sample(rng);
        let level = rng.gen_range(1..=self.base.level_max.max(1));
        let values = (0..n * level)
            .map(|_| if rng.gen_bool(0.5) { Scalar::zero() } else { sample_scalar(rng) })
            .collect();
        AdeleFn { n, level, values }
    }
    fn elem_to_json(&self, b: &AdeleFn) -> Value {
        json!(b)
    }
}

/// A failed clause of [`verify_bc_dilation`] in the cell `(n, N)`.
#[derive(Clone, Debug, Serialize)]
pub struct BcFailure {
    pub clause: String,
    pub n: u64,
    #[serde(rename = "N")]
    pub level: u64,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct BcReport {
    pub cells: usize,
    pub cases: usize,
    pub failures: Vec<BcFailure>,
}

impl BcReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Clause labels of [`verify_bc_dilation`].
pub const BC_CLAUSES: [&str; 4] = [
    "(a) β_n∘i = i∘α_n",
    "(b) constructive minimality",
    "(c) θ isomorphism",
    "(d) corner identities",
];

/// Checks, for every `n ≤ n_max` and level `N ≤ level_max`:
/// (a) `β_n(i(f)) = i(α_n(f))` on the indicators of `k + N𝒵`;
/// (b) every indicator of `k/n + N𝒵` is `β_{1/n}(i(f))` for a computed `f`;
/// (c) [`dilation_iso_check`] between the direct limit and [`AdeleModel`] on
/// samples drawn at scales `≤ n` and levels `≤ N`;
/// (d) the corner identities of `C_0(A_f) ⋊ ℚ₊*` with `p = 1_𝒵`.
///
/// Cells run in parallel; the report lists failures in cell order.
pub fn verify_bc_dilation(n_max: u64, level_max: u64, action: BcAction) -> BcReport {
    let cells: Vec<(u64, u64)> = (1..=n_max).flat_map(|n| (1..=level_max).map(move |l| (n, l))).collect();
    let results: Vec<(usize, Vec<BcFailure>)> = cells.par_iter().map(|&(n, l)| bc_cell(n, l, action)).collect();
    let mut report = BcReport { cells: cells.len(), cases: 0, failures: Vec::new() };
    for (cases, failures) in results {
        report.cases += cases;
        report.failures.extend(failures);
    }
    report
}

fn bc_cell(n: u64, level: u64, action: BcAction) -> (usize, Vec<BcFailure>) {
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut fail = |clause: &str, witness: Value| {
        failures.push(BcFailure { clause: clause.to_string(), n, level, witness });
    };
    let alg = BostConnes::with_action(level, action);
    let monoid = NatMul { sample_max: n };
    let model = AdeleModel::new(monoid.clone(), BostConnes::with_action(level, BcAction::Division));
    let lim = LimitAlgebra::new(monoid.clone(), alg.clone());

    for k in 0..level {
        cases += 1;
        let f = ZhatFn::indicator(level, k);
        let lhs = beta_q(Rational64::from_integer(n as i64), &i_embed_adele(&f));
        let rhs = i_embed_adele(&alg.endo(&n, &f));
        if !lhs.fn_eq(&rhs) {
            fail(BC_CLAUSES[0], json!({ "f": f, "beta_n_i_f": lhs, "i_alpha_n_f": rhs }));
            break;
        }
    }

    for k in 0..n * level {
        cases += 1;
        let target = AdeleFn::indicator(n, level, k);
        let ok = match localize_adele(&target, n) {
            Some(f) => theta_iso(&LimElement::new(n, f)).fn_eq(&target),
            None => false,
        };
        if !ok {
            fail(BC_CLAUSES[1], json!({ "F": target }));
            break;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(n * 1009 + level);
    let sizes = IsoSamples { elements: 3, group_elements: 2, model_elements: 3 };
    match dilation_iso_check(&lim, &model, &mut rng, sizes) {
        Ok(c) => cases += c,
        Err(e) => fail(BC_CLAUSES[2], failure_json(&e)),
    }
    // θ on the basis of level-n limit elements: θ(n, e_k) agrees with the
    // direct formula and θ⁻¹ recovers the class.
    for k in 0..level {
        cases += 1;
        let b = LimElement::new(n, ZhatFn::indicator(level, k));
        let img = model.beta(&monoid.embed_inv(&n), &model.embed(&b.elem));
        let back = theta_inv(&img).ok();
        if !img.fn_eq(&theta_iso(&b)) || !back.is_some_and(|c| lim.lim_eq(&c, &b)) {
            fail(BC_CLAUSES[2], json!({ "level": n, "elem": b.elem }));
            break;
        }
    }

    let mu = ExtendedMultiplier::new_unchecked(monoid, Arc::new(Trivial), Arc::new(Section::reduce()));
    let cp = CrossedProduct::new(model, mu);
    let sizes = CornerSamples { isometries: 2, covariance: 2, fullness: 2 };
    match corner_check(&cp, &mut rng, sizes) {
        Ok(c) => cases += c,
        Err(e) => fail(BC_CLAUSES[3], failure_json(&e)),
    }
    let unit = AdeleFn::unit_zhat();
    let f = alg.sample_fn(&mut rng);
    let corner = cp.corner_project(&cp.embed_base(&f));
    cases += 1;
    if !cp.cp_eq(&corner, &cp.embed_base(&f)) || !i_embed_adele(&f).mul(&unit).fn_eq(&i_embed_adele(&f)) {
        fail(BC_CLAUSES[3], json!({ "i(C(Z)) = 1_Z C_0(A_f) 1_Z": f }));
    }
    (cases, failures)
}

fn failure_json(e: &CheckFailure) -> Value {
    json!({ "check": e.clause, "witness": e.witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit::endo_action_check;

    fn z(level: u64, vals: &[i64]) -> ZhatFn {
        ZhatFn::new(level, vals.iter().map(|&v| Scalar::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn alpha_formula() {
        let one = ZhatFn::constant(Scalar::one());
        assert!(alpha_n(2, &one).fn_eq(&z(2, &[1, 0])));
        let f = z(2, &[3, 5]);
        assert!(alpha_n(1, &f).fn_eq(&f));
        assert!(alpha_n(2, &alpha_n(3, &f)).fn_eq(&alpha_n(6, &f)));
        assert_eq!(alpha_n(2, &alpha_n(3, &f)).level, 12);
    }

    #[test]
    fn preimage_inverts_alpha() {
        let bc = BostConnes::default();
        let f = z(4, &[1, 2, 0, 7]);
        let g = alpha_n(3, &f);
        assert!(bc.endo_preimage(&3, &g).unwrap().fn_eq(&f));
        assert!(bc.endo_preimage(&2, &z(2, &[1, 1])).is_none());
        assert!(bc.endo_preimage(&2, &z(2, &[4, 0])).unwrap().fn_eq(&ZhatFn::constant(Scalar::from_int(4))));
    }

    #[test]
    fn action_contract_and_negative_control() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = NatMul { sample_max: 12 };
        assert!(endo_action_check(&m, &BostConnes::default(), &mut rng, 40).is_ok());
        let err = endo_action_check(&m, &BostConnes::with_action(12, BcAction::Collapse), &mut rng, 40).unwrap_err();
        assert_eq!(err.clause, "α_s injective");
    }

    #[test]
    fn beta_values() {
        let two_z = i_embed_adele(&z(2, &[1, 0]));
        assert!(beta_q(Rational64::new(1, 2), &two_z).fn_eq(&AdeleFn::unit_zhat()));
        let half_z = beta_q(Rational64::new(1, 2), &AdeleFn::unit_zhat());
        assert_eq!((half_z.n, half_z.level), (2, 1));
        assert!(half_z.values.iter().all(|v| *v == Scalar::one()));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let model = AdeleModel::new(NatMul { sample_max: 6 }, BostConnes::with_action(6, BcAction::Division));
        for _ in 0..30 {
            let f = model.sample_elem(&mut rng);
            let r = Rational64::new(rng.gen_range(1..8), rng.gen_range(1..8));
            let r2 = Rational64::new(rng.gen_range(1..8), rng.gen_range(1..8));
            assert!(beta_q(r.recip(), &beta_q(r, &f)).fn_eq(&f));
            assert!(beta_q(r, &beta_q(r2, &f)).fn_eq(&beta_q(r * r2, &f)));
            assert!(beta_q(Rational64::from_integer(1), &f).fn_eq(&f));
        }
    }

    #[test]
    fn embedding_lands_in_corner() {
        let f = z(3, &[2, 0, 1]);
        let g = z(2, &[1, 5]);
        let (fi, gi) = (i_embed_adele(&f), i_embed_adele(&g));
        assert!(fi.mul(&AdeleFn::unit_zhat()).fn_eq(&fi));
        let prod = ZhatFn { level: 6, values: (0..6).map(|k| f.value(k) * g.value(k)).collect() };
        assert!(fi.mul(&gi).fn_eq(&i_embed_adele(&prod)));
        // off 𝒵 on the (2,2) grid the embedding vanishes
        let r = fi.refine(2, 2);
        assert!(r.values.iter().enumerate().all(|(k, v)| k % 2 == 0 || v.is_zero()));
    }

    #[test]
    fn theta_values() {
        let one = ZhatFn::constant(Scalar::one());
        assert!(theta_iso(&LimElement::new(1, one.clone())).fn_eq(&AdeleFn::unit_zhat()));
        let half = theta_iso(&LimElement::new(2, one.clone()));
        assert!(half.fn_eq(&AdeleFn { n: 2, level: 1, values: vec![Scalar::one(), Scalar::one()] }));
        let f = z(3, &[1, 4, 9]);
        assert!(theta_iso(&LimElement::new(1, f.clone())).fn_eq(&theta_iso(&LimElement::new(2, alpha_n(2, &f)))));
        let back = theta_inv(&half).unwrap();
        let lim = LimitAlgebra::new(NatMul::default(), BostConnes::default());
        assert!(lim.lim_eq(&back, &LimElement::new(2, one)));
    }

    #[test]
    fn limit_examples() {
        let lim = LimitAlgebra::new(NatMul::default(), BostConnes::default());
        let f = z(2, &[1, 3]);
        let g = z(3, &[2, 0, 5]);
        assert!(lim.lim_eq(&LimElement::new(1, f.clone()), &LimElement::new(2, alpha_n(2, &f))));
        assert!(!lim.lim_eq(&LimElement::new(1, f.clone()), &LimElement::new(1, g.clone())));
        let prod = lim.lim_mul(&LimElement::new(2, f.clone()), &LimElement::new(3, g.clone()));
        assert_eq!(prod.level, 6);
        assert!(prod.elem.fn_eq(&BostConnes::default().mul(&alpha_n(3, &f), &alpha_n(2, &g))));
        let b2 = lim.beta_embed(&2, &LimElement::new(2, f.clone()));
        assert!(lim.lim_eq(&b2, &LimElement::new(1, f.clone())));
        let bi = lim.beta_apply(&Fraction::new(1, 2), &lim.i_embed(&f));
        assert!(lim.lim_eq(&bi, &lim.i_embed(&alpha_n(2, &f))));
        assert!(lim.lim_localize(&LimElement::new(2, f.clone()), &2).unwrap().fn_eq(&f));
        assert!(lim.lim_localize(&LimElement::new(2, f.clone()), &4).unwrap().fn_eq(&alpha_n(2, &f)));
        assert!(lim.lim_localize(&LimElement::new(2, f.clone()), &3).is_none());
    }

    #[test]
    fn json_forms() {
        let f = z(2, &[1, 0]);
        assert_eq!(json!(f), json!({ "N": 2, "values": ["1", "0"] }));
        let back: ZhatFn = serde_json::from_value(json!(f)).unwrap();
        assert!(back.fn_eq(&f));
        let a = AdeleFn::indicator(2, 1, 1);
        assert_eq!(json!(a), json!({ "n": 2, "N": 1, "values": ["0", "1"] }));
    }

    #[test]
    fn small_verification_and_off_by_one_control() {
        assert!(verify_bc_dilation(1, 1, BcAction::Division).passed());
        assert!(verify_bc_dilation(4, 4, BcAction::Division).passed());
        let bad = verify_bc_dilation(3, 3, BcAction::OffByOne);
        assert!(bad.failures.iter().any(|f| f.clause == BC_CLAUSES[0]));
    }
}

//! Seeded verification suites shared by the command-line tool and the
//! acceptance tests, and the report they produce.

use std::sync::Arc;
use std::time::Instant;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adele::{verify_bc_dilation, AdeleModel, BcAction, BostConnes, BostConnesPow23};
use crate::crossed::{algebra_check, corner_check, monomial_oracle_check, CornerSamples, CrossedProduct, PhaseConvention};
use crate::dilation::{regular_rep, DVec, DilVec, Dilation, HVec, IsometricRep};
use crate::error::{Error, Result};
use crate::limit::{
    dilation_iso_check, endo_action_check, CheckFailure, DilatedSystem, EndoAlgebra, InvertedBeta, IsoSamples,
    LimitAlgebra,
};
use crate::multiplier::{
    cocycle_check, extend_multiplier, solve_coboundary, Bicharacter, ExtendedMultiplier, MultiplierRef, Perturbed,
    Section, Trivial,
};
use crate::ore::{
    extend_hom, Fraction, IntMat2Pos, Integers, IntegersSquared, NatAdd, NatAdd2, NatMul, OreMonoid,
    PositiveRationals, TargetGroup,
};
use crate::scalar::Phase;

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 7] = ["ore", "fractions", "cocycle", "dilate", "limit", "crossprod", "bc"];

/// Seeds and size bounds for a suite run.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random samples per check.
    pub samples: usize,
    /// Bound on sampled elements of `ℕ×` in the Bost–Connes suites.
    pub n_max: u64,
    /// Bound on the levels `N` of sampled functions on `𝒵`.
    pub level_max: u64,
    /// Restricts or perturbs the instance a suite runs on; see [`run_suite`].
    pub instance: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, samples: 200, n_max: 12, level_max: 12, instance: None }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CaseFailure {
    pub case: String,
    pub witness: Value,
}

/// The outcome of a suite; `wall_time_ms` is the only field that varies
/// between runs with the same configuration.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// A short human-readable rendering.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{}: {} cases, {} failures, {} ms\n",
            self.suite,
            self.cases,
            self.failures.len(),
            self.wall_time_ms
        );
        for f in &self.failures {
            out.push_str(&format!("  FAIL {}: {}\n", f.case, f.witness));
        }
        out
    }

    /// Concatenates reports into one, failures sorted by case id.
    pub fn merge(suite: &str, reports: Vec<VerificationReport>, wall_time_ms: u64) -> VerificationReport {
        let mut failures: Vec<CaseFailure> = reports.iter().flat_map(|r| r.failures.clone()).collect();
        failures.sort_by(|a, b| a.case.cmp(&b.case));
        VerificationReport { suite: suite.to_string(), cases: reports.iter().map(|r| r.cases).sum(), failures, wall_time_ms }
    }
}

struct Runner {
    suite: String,
    seed: u64,
    stream: u64,
    cases: usize,
    failures: Vec<CaseFailure>,
    start: Instant,
}

impl Runner {
    fn new(suite: &str, seed: u64) -> Runner {
        Runner { suite: suite.to_string(), seed, stream: 0, cases: 0, failures: Vec::new(), start: Instant::now() }
    }

    /// Runs one named check with its own RNG stream; `f` returns the number
    /// of verified items or a witness.
    fn case(&mut self, id: &str, f: impl FnOnce(&mut ChaCha8Rng) -> std::result::Result<usize, Value>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        self.stream += 1;
        match f(&mut rng) {
            Ok(n) => self.cases += n,
            Err(witness) => {
                self.cases += 1;
                self.failures.push(CaseFailure { case: format!("{}/{}", self.suite, id), witness });
            }
        }
    }

    fn finish(mut self) -> VerificationReport {
        self.failures.sort_by(|a, b| a.case.cmp(&b.case));
        VerificationReport {
            suite: self.suite,
            cases: self.cases,
            failures: self.failures,
            wall_time_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}

fn check(e: CheckFailure) -> Value {
    json!({ "check": e.clause, "witness": e.witness })
}

fn unknown_instance(name: &str) -> Error {
    Error::Unknown { kind: "instance", name: name.to_string() }
}

/// Runs a suite by name.
///
/// Instances: `ore` and `fractions` take `natmul`, `natadd`, `natadd2`,
/// `intmat2pos` (default: all four); `cocycle` takes `bicharacter` or the
/// negative control `perturbed`; `dilate` takes `shift` or `twisted`
/// (default: both); `limit` takes `bost-connes`, `collapse` (a non-injective
/// action) or `wrong-beta`; `crossprod` takes `bost-connes` or
/// `printed-phase`; `bc` takes `bost-connes` or `off-by-one`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<VerificationReport> {
    match name {
        "ore" => ore_suite(cfg),
        "fractions" => fractions_suite(cfg),
        "cocycle" => cocycle_suite(cfg),
        "dilate" => dilate_suite(cfg),
        "limit" => limit_suite(cfg),
        "crossprod" => crossprod_suite(cfg),
        "bc" => bc_suite(cfg),
        "all" => run_all(cfg),
        _ => Err(Error::Unknown { kind: "suite", name: name.to_string() }),
    }
}

/// Every suite on its default instance, run concurrently.
pub fn run_all(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let cfg = SuiteConfig { instance: None, ..cfg.clone() };
    let reports = SUITES.par_iter().map(|s| run_suite(s, &cfg)).collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::merge("all", reports, start.elapsed().as_millis() as u64))
}

fn selected<'a>(cfg: &SuiteConfig, all: &[&'a str]) -> Result<Vec<&'a str>> {
    match &cfg.instance {
        None => Ok(all.to_vec()),
        Some(i) => all.iter().find(|n| *n == i).map(|n| vec![*n]).ok_or_else(|| unknown_instance(i)),
    }
}

const ORE_INSTANCES: [&str; 4] = ["natmul", "natadd", "natadd2", "intmat2pos"];

pub fn ore_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = Runner::new("ore", cfg.seed);
    for inst in selected(cfg, &ORE_INSTANCES)? {
        match inst {
            "natmul" => ore_cases(&mut r, &NatMul::default(), cfg.samples),
            "natadd" => ore_cases(&mut r, &NatAdd::default(), cfg.samples),
            "natadd2" => ore_cases(&mut r, &NatAdd2::default(), cfg.samples),
            _ => ore_cases(&mut r, &IntMat2Pos::default(), cfg.samples),
        }
    }
    Ok(r.finish())
}

fn ore_cases<M: OreMonoid>(r: &mut Runner, m: &M, n: usize) {
    let name = m.name().to_string();
    let pair = |s: &M::Elem, t: &M::Elem| json!([m.elem_to_json(s), m.elem_to_json(t)]);
    r.case(&format!("{name}/ore_pair"), |rng| {
        for _ in 0..n {
            let (s, t) = (m.sample(rng), m.sample(rng));
            let (u, v) = m.ore_pair(&s, &t);
            if m.mul(&u, &s) != m.mul(&v, &t) {
                return Err(pair(&s, &t));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/divide"), |rng| {
        for _ in 0..n {
            let (s, t) = (m.sample(rng), m.sample(rng));
            let x = m.mul(&s, &t);
            if m.left_divide(&s, &x).as_ref() != Some(&t) || m.right_divide(&x, &t).as_ref() != Some(&s) {
                return Err(pair(&s, &t));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/identity"), |rng| {
        let e = m.identity();
        for _ in 0..n {
            let s = m.sample(rng);
            if m.mul(&e, &s) != s || m.mul(&s, &e) != s {
                return Err(m.elem_to_json(&s));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/reduce"), |rng| {
        for _ in 0..n {
            let g = m.sample_fraction(rng);
            let red = m.frac_reduce(&g);
            if !m.frac_eq(&g, &red) || m.frac_reduce(&red) != red {
                return Err(m.frac_to_json(&g));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/json"), |rng| {
        for _ in 0..n {
            let s = m.sample(rng);
            if m.elem_from_json(&m.elem_to_json(&s)).ok().as_ref() != Some(&s) {
                return Err(m.elem_to_json(&s));
            }
        }
        Ok(n)
    });
}

pub fn fractions_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = Runner::new("fractions", cfg.seed);
    for inst in selected(cfg, &ORE_INSTANCES)? {
        match inst {
            "natmul" => fraction_cases(&mut r, &NatMul::default(), &PositiveRationals, |&s| Rational64::from_integer(s as i64), cfg.samples),
            "natadd" => fraction_cases(&mut r, &NatAdd::default(), &Integers, |&s| s as i64, cfg.samples),
            "natadd2" => fraction_cases(&mut r, &NatAdd2::default(), &IntegersSquared, |s| [s[0] as i64, s[1] as i64], cfg.samples),
            _ => fraction_cases(
                &mut r,
                &IntMat2Pos::default(),
                &PositiveRationals,
                |s| Rational64::from_integer(s.det() as i64),
                cfg.samples,
            ),
        }
    }
    Ok(r.finish())
}

fn fraction_cases<M, T, F>(r: &mut Runner, m: &M, target: &T, phi: F, n: usize)
where
    M: OreMonoid,
    T: TargetGroup,
    F: Fn(&M::Elem) -> T::Elem,
{
    let name = m.name().to_string();
    let fj = |g: &Fraction<M::Elem>| m.frac_to_json(g);
    r.case(&format!("{name}/group_laws"), |rng| {
        let e = m.frac_identity();
        for _ in 0..n {
            let (g, h, k) = (m.sample_fraction(rng), m.sample_fraction(rng), m.sample_fraction(rng));
            let assoc = m.frac_eq(&m.frac_mul(&m.frac_mul(&g, &h), &k), &m.frac_mul(&g, &m.frac_mul(&h, &k)));
            let unit = m.frac_eq(&m.frac_mul(&e, &g), &g) && m.frac_eq(&m.frac_mul(&g, &e), &g);
            let inv = m.frac_eq(&m.frac_mul(&g, &m.frac_inv(&g)), &e) && m.frac_eq(&m.frac_mul(&m.frac_inv(&g), &g), &e);
            if !(assoc && unit && inv) {
                return Err(json!([fj(&g), fj(&h), fj(&k)]));
            }
        }
        Ok(3 * n)
    });
    r.case(&format!("{name}/well_defined"), |rng| {
        for _ in 0..n {
            let (g, h, u) = (m.sample_fraction(rng), m.sample_fraction(rng), m.sample(rng));
            let lifted = m.frac_lift(&g, &u);
            if !m.frac_eq(&lifted, &g) || !m.frac_eq(&m.frac_mul(&lifted, &h), &m.frac_mul(&g, &h)) {
                return Err(json!({ "g": fj(&g), "h": fj(&h), "u": m.elem_to_json(&u) }));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/embedding"), |rng| {
        for _ in 0..n {
            let (s, t) = (m.sample(rng), m.sample(rng));
            let hom = m.frac_eq(&m.frac_mul(&m.embed(&s), &m.embed(&t)), &m.embed(&m.mul(&s, &t)));
            let inj = m.frac_eq(&m.embed(&s), &m.embed(&t)) == (s == t);
            let back = m.frac_in_monoid(&m.embed(&s)).as_ref() == Some(&s);
            if !(hom && inj && back) {
                return Err(json!([m.elem_to_json(&s), m.elem_to_json(&t)]));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/extend_hom"), |rng| {
        let grid: Vec<M::Elem> = (0..12).map(|_| m.sample(rng)).collect();
        let ext = extend_hom(m, target, &phi, &grid).map_err(|e| json!(e.to_string()))?;
        for _ in 0..n {
            let (s, g, h) = (m.sample(rng), m.sample_fraction(rng), m.sample_fraction(rng));
            let on_s = ext.on_monoid(&s) == phi(&s);
            let mult = ext.eval(&m.frac_mul(&g, &h)) == target.mul(&ext.eval(&g), &ext.eval(&h));
            let rep = ext.eval(&m.frac_lift(&g, &s)) == ext.eval(&g);
            if !(on_s && mult && rep) {
                return Err(json!({ "s": m.elem_to_json(&s), "g": fj(&g), "h": fj(&h) }));
            }
        }
        Ok(n)
    });
}

fn nat2_grid(k: u64) -> Vec<[u64; 2]> {
    (0..k).flat_map(|a| (0..k).map(move |b| [a, b])).collect()
}

/// The `ℤ²` bicharacter `ν(g, h) = θ·b·c` for `g = (a, b)`, `h = (c, d)`.
pub fn z2_bicharacter(theta: Phase, g: &Fraction<[u64; 2]>, h: &Fraction<[u64; 2]>) -> Phase {
    let b = g.y[1] as i64 - g.x[1] as i64;
    let c = h.y[0] as i64 - h.x[0] as i64;
    theta.times(b * c)
}

pub fn cocycle_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let theta = Phase::new(1, 4);
    let base: MultiplierRef<NatAdd2> = Arc::new(Bicharacter::new(theta));
    let lambda: MultiplierRef<NatAdd2> = match cfg.instance.as_deref() {
        None | Some("bicharacter") => base,
        Some("perturbed") => Arc::new(Perturbed { base, at: ([1, 0], [0, 1]), delta: Phase::new(1, 8) }),
        Some(other) => return Err(unknown_instance(other)),
    };
    let m = NatAdd2::default();
    let n = cfg.samples;
    let mut r = Runner::new("cocycle", cfg.seed);
    let grid = nat2_grid(3);

    r.case("lambda_cocycle", |rng| {
        let mut triples = Vec::new();
        for a in &grid {
            for b in &grid {
                for c in &grid {
                    triples.push((*a, *b, *c));
                }
            }
        }
        triples.extend((0..n).map(|_| (m.sample(rng), m.sample(rng), m.sample(rng))));
        cocycle_check(&m, lambda.as_ref(), &triples)
            .map(|_| triples.len())
            .map_err(|v| json!({ "triple": [v.triple.0, v.triple.1, v.triple.2], "lhs": v.lhs, "rhs": v.rhs }))
    });

    let mu = match extend_multiplier(m.clone(), lambda.clone(), Arc::new(Section::reduce()), &grid) {
        Ok(mu) => mu,
        Err(e) => {
            r.case("extend", |_| Err(json!(e.to_string())));
            return Ok(r.finish());
        }
    };
    let fj = |g: &Fraction<[u64; 2]>| m.frac_to_json(g);

    r.case("restriction", |rng| {
        for _ in 0..n {
            let (s, t) = (m.sample(rng), m.sample(rng));
            if mu.eval(&m.embed(&s), &m.embed(&t)) != lambda.eval(&s, &t) {
                return Err(json!([s, t]));
            }
        }
        Ok(n)
    });
    r.case("group_cocycle", |rng| {
        for _ in 0..n {
            let (g, h, k) = (m.sample_fraction(rng), m.sample_fraction(rng), m.sample_fraction(rng));
            let lhs = mu.eval(&g, &h) + mu.eval(&m.frac_mul(&g, &h), &k);
            let rhs = mu.eval(&g, &m.frac_mul(&h, &k)) + mu.eval(&h, &k);
            if lhs != rhs {
                return Err(json!([fj(&g), fj(&h), fj(&k)]));
            }
        }
        Ok(n)
    });
    r.case("sections_cohomologous", |rng| {
        let memo = Arc::new(Section::memo());
        let sample: Vec<_> = (0..50).map(|_| m.sample_fraction(rng)).collect();
        for g in &sample {
            memo.rep(&m, &m.frac_lift(g, &m.sample(rng)));
        }
        let mu2 = ExtendedMultiplier::new_unchecked(m.clone(), lambda.clone(), memo);
        solve_coboundary(&m, mu.section(), |g, h| mu.eval(g, h) - mu2.eval(g, h), &sample)
            .map(|_| sample.len() * sample.len())
            .map_err(|f| json!({ "g": fj(&f.g), "h": fj(&f.h), "difference": f.difference, "predicted": f.predicted }))
    });
    r.case("z2_oracle_cohomologous", |rng| {
        let sample: Vec<_> = (0..50).map(|_| m.sample_fraction(rng)).collect();
        solve_coboundary(&m, mu.section(), |g, h| mu.eval(g, h) - z2_bicharacter(theta, g, h), &sample)
            .map(|_| sample.len() * sample.len())
            .map_err(|f| json!({ "g": fj(&f.g), "h": fj(&f.h), "difference": f.difference, "predicted": f.predicted }))
    });
    Ok(r.finish())
}

pub fn dilate_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut r = Runner::new("dilate", cfg.seed);
    for inst in selected(cfg, &["shift", "twisted"])? {
        if inst == "shift" {
            let m = NatAdd::default();
            let lambda: MultiplierRef<NatAdd> = Arc::new(Trivial);
            let mu = ExtendedMultiplier::new_unchecked(m.clone(), lambda.clone(), Arc::new(Section::reduce()));
            let dil = Dilation::new(mu, regular_rep(m, lambda));
            dilation_cases(&mut r, "shift", &dil, cfg.samples);
            bilateral_shift_cases(&mut r, &dil, cfg.samples);
        } else {
            let m = NatAdd2::default();
            let lambda: MultiplierRef<NatAdd2> = Arc::new(Bicharacter::new(Phase::new(1, 4)));
            let mu = ExtendedMultiplier::new_unchecked(m.clone(), lambda.clone(), Arc::new(Section::reduce()));
            let dil = Dilation::new(mu, regular_rep(m, lambda));
            dilation_cases(&mut r, "twisted", &dil, cfg.samples);
        }
    }
    Ok(r.finish())
}

fn dilation_cases<M, V>(r: &mut Runner, name: &str, dil: &Dilation<M, V>, n: usize)
where
    M: OreMonoid,
    V: IsometricRep<M>,
{
    let mu = dil.mu();
    let m = mu.monoid();
    let rep = dil.rep();
    let vj = |xi: &DVec<M, V>| dil.to_json(xi);
    let hj = |h: &HVec<V::Basis>| dil.to_json(&DilVec::new(m.identity(), h.clone()));
    r.case(&format!("{name}/embedding_isometry"), |rng| {
        for _ in 0..n {
            let (h, k) = (rep.sample_vec(rng), rep.sample_vec(rng));
            if dil.inner(&dil.embed(h.clone()), &dil.embed(k.clone())) != h.inner(&k) {
                return Err(json!([hj(&h), hj(&k)]));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/extends_V"), |rng| {
        for _ in 0..n {
            let (s, h) = (m.sample(rng), rep.sample_vec(rng));
            if !dil.eq(&dil.apply_us(&s, &dil.embed(h.clone())), &dil.embed(rep.apply(&s, &h))) {
                return Err(json!({ "s": m.elem_to_json(&s), "h": hj(&h) }));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/projective"), |rng| {
        for _ in 0..n {
            let (g, h, xi) = (m.sample_fraction(rng), m.sample_fraction(rng), dil.sample_vec(rng));
            let lhs = dil.apply_group(&g, &dil.apply_group(&h, &xi));
            let rhs = dil.scale_phase(mu.eval(&g, &h), &dil.apply_group(&m.frac_mul(&g, &h), &xi));
            if !dil.eq(&lhs, &rhs) {
                return Err(json!({ "g": m.frac_to_json(&g), "h": m.frac_to_json(&h), "xi": vj(&xi) }));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/unitary"), |rng| {
        for _ in 0..n {
            let (g, xi, eta) = (m.sample_fraction(rng), dil.sample_vec(rng), dil.sample_vec(rng));
            let gi = m.frac_inv(&g);
            let preserves = dil.inner(&dil.apply_group(&g, &xi), &dil.apply_group(&g, &eta)) == dil.inner(&xi, &eta);
            let back = dil.apply_group(&gi, &dil.apply_group(&g, &xi));
            if !preserves || !dil.eq(&back, &dil.scale_phase(mu.eval(&gi, &g), &xi)) {
                return Err(json!({ "g": m.frac_to_json(&g), "xi": vj(&xi), "eta": vj(&eta) }));
            }
        }
        Ok(n)
    });
    r.case(&format!("{name}/minimality"), |rng| {
        for _ in 0..n {
            let (t, h) = (m.sample(rng), rep.sample_vec(rng));
            let xi = DilVec::new(t.clone(), h.clone());
            if !dil.eq(&dil.apply_us(&t, &xi), &dil.embed(h)) {
                return Err(vj(&xi));
            }
        }
        Ok(n)
    });
}

/// `W(t, h) = Σ h(x) δ_{x−t}` identifies the dilation of the unilateral
/// shift with `ℓ²(ℤ)`, where `U_g` becomes the bilateral shift by `y − x`.
fn bilateral_shift_cases<V>(r: &mut Runner, dil: &Dilation<NatAdd, V>, n: usize)
where
    V: IsometricRep<NatAdd, Basis = u64>,
{
    let m = dil.mu().monoid();
    let w = |xi: &DVec<NatAdd, V>| xi.vec.map_basis(|x| *x as i64 - xi.level as i64);
    r.case("shift/bilateral_oracle", |rng| {
        for _ in 0..n {
            let (g, xi, eta) = (m.sample_fraction(rng), dil.sample_vec(rng), dil.sample_vec(rng));
            let shift = g.y as i64 - g.x as i64;
            let lhs = w(&dil.apply_group(&g, &xi));
            let rhs = w(&xi).map_basis(|k| k + shift);
            let isometric = w(&xi).inner(&w(&eta)) == dil.inner(&xi, &eta);
            if lhs != rhs || !isometric {
                return Err(json!({ "g": m.frac_to_json(&g), "xi": dil.to_json(&xi) }));
            }
            // every δ_k of ℓ²(ℤ) is hit: δ_k = W(t, δ_{k+t}) for t ≥ −k
            let k = rng.gen_range(-20i64..=20);
            let t = (-k).max(0) as u64;
            let preimage = DilVec::new(t, HVec::basis((k + t as i64) as u64));
            if w(&preimage) != HVec::basis(k) {
                return Err(json!({ "k": k }));
            }
        }
        Ok(2 * n)
    });
}


fn bc_monoid(cfg: &SuiteConfig) -> NatMul {
    NatMul { sample_max: cfg.n_max.max(1) }
}

pub fn limit_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let (action, wrong_beta) = match cfg.instance.as_deref() {
        None | Some("bost-connes") => (BcAction::Division, false),
        Some("collapse") => (BcAction::Collapse, false),
        Some("wrong-beta") => (BcAction::Division, true),
        Some(other) => return Err(unknown_instance(other)),
    };
    let m = bc_monoid(cfg);
    let alg = BostConnes::with_action(cfg.level_max.max(1), action);
    let lim = LimitAlgebra::new(m.clone(), alg.clone());
    let n = cfg.samples;
    let mut r = Runner::new("limit", cfg.seed);
    let lj = |b: &_| lim.lim_to_json(b);
    let fj = |g: &Fraction<u64>| m.frac_to_json(g);

    r.case("endo_action", |rng| endo_action_check(&m, &alg, rng, n).map(|_| n).map_err(check));
    r.case("beta_group_action", |rng| {
        for _ in 0..n {
            let (g, h, b) = (m.sample_fraction(rng), m.sample_fraction(rng), lim.sample_lim(rng));
            let comp = lim.lim_eq(&lim.beta_apply(&g, &lim.beta_apply(&h, &b)), &lim.beta_apply(&m.frac_mul(&g, &h), &b));
            let inv = lim.lim_eq(&lim.beta_apply(&g, &lim.beta_apply(&m.frac_inv(&g), &b)), &b);
            let rep = lim.lim_eq(&lim.beta_apply(&m.frac_lift(&g, &m.sample(rng)), &b), &lim.beta_apply(&g, &b));
            let c = lim.sample_lim(rng);
            let hom = lim.lim_eq(&lim.beta_apply(&g, &lim.lim_mul(&b, &c)), &lim.lim_mul(&lim.beta_apply(&g, &b), &lim.beta_apply(&g, &c)))
                && lim.lim_eq(&lim.beta_apply(&g, &lim.lim_star(&b)), &lim.lim_star(&lim.beta_apply(&g, &b)));
            if !(comp && inv && rep && hom) {
                return Err(json!({ "g": fj(&g), "h": fj(&h), "b": lj(&b) }));
            }
        }
        Ok(4 * n)
    });
    r.case("beta_intertwines_alpha", |rng| {
        for _ in 0..n {
            let (s, a) = (m.sample(rng), alg.sample(rng));
            if !lim.lim_eq(&lim.beta_apply(&m.embed(&s), &lim.i_embed(&a)), &lim.i_embed(&alg.endo(&s, &a))) {
                return Err(json!({ "s": m.elem_to_json(&s), "a": alg.elem_to_json(&a) }));
            }
        }
        Ok(n)
    });
    r.case("lim_eq_consistency", |rng| {
        for _ in 0..n {
            let (b, c, t) = (lim.sample_lim(rng), lim.sample_lim(rng), m.sample(rng));
            let lifted = lim.lift(&b, &t);
            let refl = lim.lim_eq(&b, &lifted) && lim.lim_eq(&lifted, &b);
            let sym = lim.lim_eq(&b, &c) == lim.lim_eq(&c, &b);
            let (u, v) = m.ore_pair(&b.level, &c.level);
            let w = m.sample(rng);
            let pair_free = lim.lim_eq_with(&b, &c, &m.mul(&w, &u), &m.mul(&w, &v)) == lim.lim_eq(&b, &c);
            let ops = lim.lim_eq(&lim.lim_mul(&lifted, &c), &lim.lim_mul(&b, &c))
                && lim.lim_eq(&lim.lim_add(&lifted, &c), &lim.lim_add(&b, &c));
            if !(refl && sym && pair_free && ops) {
                return Err(json!({ "b": lj(&b), "c": lj(&c), "t": m.elem_to_json(&t) }));
            }
        }
        Ok(4 * n)
    });
    r.case("minimality", |rng| {
        for _ in 0..n {
            let b = lim.sample_lim(rng);
            let at_level = lim.lim_eq(&lim.beta_embed(&b.level, &b), &lim.i_embed(&b.elem));
            let t = m.sample(rng);
            let higher = m.mul(&t, &b.level);
            let loc = lim.lim_localize(&b, &higher).is_some_and(|a| alg.eq(&a, &alg.endo(&t, &b.elem)));
            if !at_level || !loc {
                return Err(lj(&b));
            }
        }
        Ok(2 * n)
    });
    let sizes = IsoSamples { elements: n / 4, group_elements: 4, model_elements: n / 4 };
    let model = AdeleModel::new(m.clone(), BostConnes::with_action(cfg.level_max.max(1), BcAction::Division));
    if wrong_beta {
        r.case("iso_adele_model", |rng| dilation_iso_check(&lim, &InvertedBeta(model), rng, sizes).map_err(check));
    } else {
        r.case("iso_adele_model", |rng| dilation_iso_check(&lim, &model, rng, sizes).map_err(check));
    }
    Ok(r.finish())
}

pub fn crossprod_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let convention = match cfg.instance.as_deref() {
        None | Some("bost-connes") => PhaseConvention::Derived,
        Some("printed-phase") => PhaseConvention::Printed,
        Some(other) => return Err(unknown_instance(other)),
    };
    let n = cfg.samples;
    let mut r = Runner::new("crossprod", cfg.seed);
    let sizes = CornerSamples { isometries: n, covariance: n, fullness: n };

    let m = bc_monoid(cfg);
    let alg = BostConnes::with_action(cfg.level_max.max(1), BcAction::Division);
    let mu = ExtendedMultiplier::new_unchecked(m.clone(), Arc::new(Trivial), Arc::new(Section::reduce()));
    let cp = CrossedProduct::new(LimitAlgebra::new(m, alg), mu);
    r.case("bc/corner", |rng| corner_check(&cp, rng, sizes).map_err(check));
    r.case("bc/algebra", |rng| algebra_check(&cp, rng, n / 10 + 1).map_err(check));
    r.case("bc/monomial_oracle", |rng| monomial_oracle_check(&cp, convention, rng, n).map_err(check));

    let twisted = twisted_pow23_product(cfg);
    r.case("twisted/corner", |rng| corner_check(&twisted, rng, sizes).map_err(check));
    r.case("twisted/algebra", |rng| algebra_check(&twisted, rng, n / 10 + 1).map_err(check));
    r.case("twisted/monomial_oracle", |rng| monomial_oracle_check(&twisted, convention, rng, n).map_err(check));
    r.case("twisted/phase_convention", |rng| phase_convention_case(&twisted, rng, n));
    Ok(r.finish())
}

/// `C(𝒵)` with `ℕ²` acting by `α_{2^a 3^b}` and the bicharacter `θ = 1/4`.
pub fn twisted_pow23_product(cfg: &SuiteConfig) -> CrossedProduct<NatAdd2, LimitAlgebra<NatAdd2, BostConnesPow23>> {
    let m = NatAdd2 { sample_max: 2 };
    let mu = ExtendedMultiplier::new_unchecked(m.clone(), Arc::new(Bicharacter::new(Phase::new(1, 4))), Arc::new(Section::reduce()));
    let base = BostConnesPow23 { inner: BostConnes::with_action(cfg.level_max.clamp(1, 6), BcAction::Division) };
    CrossedProduct::new(LimitAlgebra::new(m, base), mu)
}

/// Passes when the derived phase convention matches the `cp_mul` oracle on
/// every pair while the swapped convention is refuted by some pair.
pub fn phase_convention_case<D, R>(
    cp: &CrossedProduct<NatAdd2, D>,
    rng: &mut R,
    pairs: usize,
) -> std::result::Result<usize, Value>
where
    D: DilatedSystem<NatAdd2>,
    R: Rng + ?Sized,
{
    let derived = monomial_oracle_check(cp, PhaseConvention::Derived, rng, pairs).map_err(check)?;
    match monomial_oracle_check(cp, PhaseConvention::Printed, rng, pairs) {
        Err(_) => Ok(derived + 1),
        Ok(_) => Err(json!("the swapped phase convention was not refuted")),
    }
}

pub fn bc_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let action = match cfg.instance.as_deref() {
        None | Some("bost-connes") => BcAction::Division,
        Some("off-by-one") => BcAction::OffByOne,
        Some(other) => return Err(unknown_instance(other)),
    };
    let start = Instant::now();
    let report = verify_bc_dilation(cfg.n_max.max(1), cfg.level_max.max(1), action);
    let mut failures: Vec<CaseFailure> = report
        .failures
        .into_iter()
        .map(|f| CaseFailure {
            case: format!("bc/{} n={:03} N={:03}", f.clause, f.n, f.level),
            witness: f.witness,
        })
        .collect();
    failures.sort_by(|a, b| a.case.cmp(&b.case));
    Ok(VerificationReport {
        suite: "bc".to_string(),
        cases: report.cases,
        failures,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { samples: 20, n_max: 6, level_max: 6, ..SuiteConfig::default() }
    }

    #[test]
    fn default_suites_pass() {
        for s in SUITES {
            let rep = run_suite(s, &small()).unwrap();
            assert!(rep.passed(), "{}", rep.render());
            assert!(rep.cases > 0);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("limit", &small()).unwrap();
        let b = run_suite("limit", &small()).unwrap();
        assert_eq!(a.cases, b.cases);
        assert_eq!(a.failures, b.failures);
    }

    #[test]
    fn unknown_names_are_errors() {
        assert!(run_suite("nope", &small()).is_err());
        let cfg = SuiteConfig { instance: Some("nope".into()), ..small() };
        assert!(run_suite("limit", &cfg).is_err());
    }
}

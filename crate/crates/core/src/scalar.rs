//! Exact scalars.
//!
//! [`Phase`] is a rational rotation `q mod 1` standing for `e^{2πiq}`.
//! [`Scalar`] is an element of a cyclotomic field `ℚ(ζ_m)`, stored in the
//! power basis `1, ζ, …, ζ^{φ(m)-1}` after reduction modulo the cyclotomic
//! polynomial `Φ_m`. Gaussian rationals are the case `m = 4`, and every phase
//! is a scalar, so sums of phase-weighted vectors stay exact.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::Error;

/// A point of the circle, `e^{2πi q}` with `q ∈ ℚ/ℤ`, written additively.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(Rational64);

impl Phase {
    pub fn zero() -> Self {
        Phase(Rational64::zero())
    }

    pub fn new(num: i64, den: i64) -> Self {
        Phase::from_rational(Rational64::new(num, den))
    }

    pub fn from_rational(q: Rational64) -> Self {
        let f = q - q.floor();
        Phase(f)
    }

    pub fn value(&self) -> Rational64 {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Complex conjugate, i.e. the additive inverse mod 1.
    pub fn conj(self) -> Self {
        Phase::from_rational(-self.0)
    }

    pub fn times(self, k: i64) -> Self {
        Phase::from_rational(self.0 * Rational64::from_integer(k))
    }

    pub fn to_scalar(self) -> Scalar {
        let m = *self.0.denom() as u32;
        let k = *self.0.numer() as usize;
        let mut poly = vec![Rational64::zero(); m as usize];
        poly[k] = Rational64::one();
        Scalar::from_poly(m, &poly)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::from_rational(self.0 + rhs.0)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::from_rational(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self.conj()
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({self})")
    }
}

impl FromStr for Phase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_rational(s).map(Phase::from_rational)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Parses `"k/m"` or `"k"`.
pub fn parse_rational(s: &str) -> Result<Rational64, Error> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad()),
    }
}

pub fn format_rational(q: &Rational64) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

type Coeffs = SmallVec<[Rational64; 4]>;

/// An element of `ℚ(ζ_order)`, reduced modulo `Φ_order`.
#[derive(Clone)]
pub struct Scalar {
    order: u32,
    coeffs: Coeffs,
}

fn cyclotomic_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Integer coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Φ_d with d | m, d < m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = exact_div_monic(&num, &div);
        }
    }
    let p = Arc::new(num);
    cyclotomic_cache().write().unwrap().insert(m, p.clone());
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Euler's totient.
pub fn totient(m: u32) -> u32 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u32
}

impl Scalar {
    /// Builds `Σ poly[k] ζ_m^k` for an arbitrary-length coefficient list.
    pub fn from_poly(order: u32, poly: &[Rational64]) -> Scalar {
        assert!(order >= 1);
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        let mut work: Vec<Rational64> = poly.to_vec();
        if work.len() < deg {
            work.resize(deg, Rational64::zero());
        }
        for i in (deg..work.len()).rev() {
            let c = work[i];
            if c.is_zero() {
                continue;
            }
            // subtract c·x^{i-deg}·Φ
            for (j, &pj) in phi.iter().enumerate() {
                if pj != 0 {
                    work[i - deg + j] -= c * Rational64::from_integer(pj);
                }
            }
        }
        work.truncate(deg);
        Scalar { order, coeffs: work.into_iter().collect() }.descend()
    }

    pub fn from_rational(q: Rational64) -> Scalar {
        let mut coeffs = Coeffs::new();
        coeffs.push(q);
        Scalar { order: 1, coeffs }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rational(Rational64::from_integer(n))
    }

    pub fn zero() -> Scalar {
        Scalar::from_int(0)
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    /// `re + i·im`.
    pub fn gaussian(re: Rational64, im: Rational64) -> Scalar {
        Scalar::from_poly(4, &[re, im])
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Rational value, when the scalar is stored at order 1 or 2.
    pub fn as_rational(&self) -> Option<Rational64> {
        (self.order <= 2).then(|| self.coeffs[0])
    }

    /// Real and imaginary parts, when the scalar is stored at an order dividing 4.
    pub fn as_gaussian(&self) -> Option<(Rational64, Rational64)> {
        if 4 % self.order != 0 {
            return None;
        }
        let g = self.lift(4);
        Some((g.coeffs[0], g.coeffs[1]))
    }

    // Collapse to order 1 when only the constant term survives.
    fn descend(mut self) -> Scalar {
        if self.order > 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            self.coeffs.truncate(1);
            self.order = 1;
        }
        self
    }

    /// Re-expresses the scalar in `ℚ(ζ_target)`; `order` must divide `target`.
    pub fn lift(&self, target: u32) -> Scalar {
        if target == self.order {
            return self.clone();
        }
        debug_assert_eq!(target % self.order, 0);
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational64::zero(); target as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(k * step) % target as usize] += *c;
        }
        let phi = cyclotomic_poly(target);
        let deg = phi.len() - 1;
        let mut s = Scalar::from_poly(target, &poly);
        if s.order != target {
            // from_poly may have descended; keep the requested order
            let mut coeffs: Coeffs = SmallVec::from_elem(Rational64::zero(), deg);
            coeffs[0] = s.coeffs[0];
            s = Scalar { order: target, coeffs };
        }
        s
    }

    fn common(&self, other: &Scalar) -> (Scalar, Scalar) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let l = self.order.lcm(&other.order);
        (self.lift(l), other.lift(l))
    }

    pub fn conj(&self) -> Scalar {
        if self.order <= 2 {
            return self.clone();
        }
        let m = self.order as usize;
        let mut poly = vec![Rational64::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(m - k) % m] += *c;
        }
        Scalar::from_poly(self.order, &poly)
    }

    pub fn scale(&self, q: Rational64) -> Scalar {
        Scalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
        .descend()
    }

    pub fn mul_phase(&self, p: Phase) -> Scalar {
        if p.is_zero() {
            return self.clone();
        }
        self * &p.to_scalar()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let (a, b) = self.common(rhs);
        Scalar {
            order: a.order,
            coeffs: a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| x + y).collect(),
        }
        .descend()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.order == 1 {
            return rhs.scale(self.coeffs[0]);
        }
        if rhs.order == 1 {
            return self.scale(rhs.coeffs[0]);
        }
        let (a, b) = self.common(rhs);
        let n = a.coeffs.len();
        let mut poly = vec![Rational64::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                poly[i + j] += x * y;
            }
        }
        Scalar::from_poly(a.order, &poly)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| &a + &b)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<Rational64> for Scalar {
    fn from(q: Rational64) -> Scalar {
        Scalar::from_rational(q)
    }
}

impl From<Phase> for Scalar {
    fn from(p: Phase) -> Scalar {
        p.to_scalar()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        if let Some((re, im)) = self.as_gaussian() {
            return write!(f, "{}{}{}i", format_rational(&re), if im.is_negative() { "" } else { "+" }, format_rational(&im));
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{}·ζ{}^{}", format_rational(c), self.order, k))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// JSON form: `"p/q"` for rationals, `{"order": m, "coeffs": ["..", ..]}` otherwise.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(q) = self.as_rational() {
            return s.serialize_str(&format_rational(&q));
        }
        #[derive(Serialize)]
        struct Cyc {
            order: u32,
            coeffs: Vec<String>,
        }
        Cyc { order: self.order, coeffs: self.coeffs.iter().map(format_rational).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Rat(String),
            Cyc { order: u32, coeffs: Vec<String> },
        }
        match Repr::deserialize(d)? {
            Repr::Rat(s) => parse_rational(&s).map(Scalar::from_rational).map_err(de::Error::custom),
            Repr::Cyc { order, coeffs } => {
                if order == 0 {
                    return Err(de::Error::custom("order must be positive"));
                }
                let poly = coeffs
                    .iter()
                    .map(|c| parse_rational(c))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(de::Error::custom)?;
                Ok(Scalar::from_poly(order, &poly))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for m in 1..40 {
            assert_eq!(cyclotomic_poly(m).len() as u32 - 1, totient(m));
        }
    }

    #[test]
    fn phase_arithmetic_is_mod_one() {
        assert_eq!(Phase::new(3, 4) + Phase::new(1, 2), Phase::new(1, 4));
        assert_eq!(Phase::new(1, 4).conj(), Phase::new(3, 4));
        assert_eq!(Phase::new(-1, 4), Phase::new(3, 4));
        assert!(Phase::new(5, 5).is_zero());
        assert_eq!("2/8".parse::<Phase>().unwrap(), Phase::new(1, 4));
        assert!("1/0".parse::<Phase>().is_err());
    }

    #[test]
    fn quarter_phase_is_i() {
        let i = Phase::new(1, 4).to_scalar();
        assert_eq!(i.as_gaussian(), Some((q(0, 1), q(1, 1))));
        assert_eq!(&i * &i, Scalar::from_int(-1));
        assert_eq!(Phase::new(1, 2).to_scalar(), Scalar::from_int(-1));
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let s: Scalar = (0..3).map(|k| Phase::new(k, 3).to_scalar()).sum();
        assert!(s.is_zero());
        let s: Scalar = (0..12).map(|k| Phase::new(k, 12).to_scalar()).sum();
        assert!(s.is_zero());
        // primitive 6th roots sum to μ(6) = 1
        let s: Scalar = [1, 5].iter().map(|&k| Phase::new(k, 6).to_scalar()).sum();
        assert_eq!(s, Scalar::one());
    }

    #[test]
    fn mixed_orders_compare_exactly() {
        let a = Phase::new(1, 4).to_scalar();
        let b = Phase::new(3, 12).to_scalar();
        assert_eq!(a, b);
        let c = &Phase::new(1, 3).to_scalar() * &Phase::new(1, 4).to_scalar();
        assert_eq!(c, Phase::new(7, 12).to_scalar());
    }

    #[test]
    fn serde_forms() {
        let x = Scalar::from_rational(q(-3, 7));
        assert_eq!(serde_json::to_string(&x).unwrap(), "\"-3/7\"");
        let z = Phase::new(1, 3).to_scalar();
        let js = serde_json::to_string(&z).unwrap();
        let back: Scalar = serde_json::from_str(&js).unwrap();
        assert_eq!(back, z);
        let p: Phase = serde_json::from_str("\"5/4\"").unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"1/4\"");
    }

    fn phase_strategy() -> impl Strategy<Value = Phase> {
        (0i64..24, prop::sample::select(vec![1i64, 2, 3, 4, 6, 8, 12])).prop_map(|(k, m)| Phase::new(k, m))
    }

    proptest! {
        #[test]
        fn phase_to_scalar_is_a_homomorphism(a in phase_strategy(), b in phase_strategy()) {
            prop_assert_eq!(&a.to_scalar() * &b.to_scalar(), (a + b).to_scalar());
            prop_assert_eq!(a.to_scalar().conj(), a.conj().to_scalar());
            prop_assert_eq!(&a.to_scalar() * &a.conj().to_scalar(), Scalar::one());
        }

        #[test]
        fn field_laws(a in phase_strategy(), b in phase_strategy(), c in phase_strategy(), n in -5i64..5) {
            let x = &a.to_scalar() + &Scalar::from_int(n);
            let y = b.to_scalar();
            let z = &c.to_scalar() - &Scalar::one();
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        }
    }
}

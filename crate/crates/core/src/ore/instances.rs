use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde_json::{json, Value};

use super::OreMonoid;
use crate::error::{Error, Result};

/// Positive integers under multiplication; `G = ℚ₊*`.
#[derive(Clone, Debug)]
pub struct NatMul {
    /// Samples are drawn from `1..=sample_max`.
    pub sample_max: u64,
}

impl Default for NatMul {
    fn default() -> Self {
        NatMul { sample_max: 36 }
    }
}

impl OreMonoid for NatMul {
    type Elem = u64;

    fn name(&self) -> &str {
        "natmul"
    }

    fn identity(&self) -> u64 {
        1
    }

    fn mul(&self, s: &u64, t: &u64) -> u64 {
        s.checked_mul(*t).expect("natmul overflow")
    }

    fn left_divide(&self, s: &u64, x: &u64) -> Option<u64> {
        u64::is_multiple_of(*x, *s).then(|| x / s)
    }

    fn right_divide(&self, x: &u64, s: &u64) -> Option<u64> {
        self.left_divide(s, x)
    }

    fn ore_pair(&self, s: &u64, t: &u64) -> (u64, u64) {
        let l = s.lcm(t);
        (l / s, l / t)
    }

    fn reduce(&self, x: &u64, y: &u64) -> Option<(u64, u64)> {
        let g = x.gcd(y);
        Some((x / g, y / g))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..=self.sample_max)
    }

    fn elem_to_json(&self, e: &u64) -> Value {
        Value::String(e.to_string())
    }

    fn elem_from_json(&self, v: &Value) -> Result<u64> {
        let n = match v {
            Value::String(s) => s.parse::<u64>().ok(),
            Value::Number(n) => n.as_u64(),
            _ => None,
        };
        n.filter(|&n| n > 0)
            .ok_or_else(|| Error::Parse(format!("expected a positive integer string, got {v}")))
    }
}

/// Natural numbers under addition; `G = ℤ`.
#[derive(Clone, Debug)]
pub struct NatAdd {
    pub sample_max: u64,
}

impl Default for NatAdd {
    fn default() -> Self {
        NatAdd { sample_max: 12 }
    }
}

impl OreMonoid for NatAdd {
    type Elem = u64;

    fn name(&self) -> &str {
        "natadd"
    }

    fn identity(&self) -> u64 {
        0
    }

    fn mul(&self, s: &u64, t: &u64) -> u64 {
        s + t
    }

    fn left_divide(&self, s: &u64, x: &u64) -> Option<u64> {
        x.checked_sub(*s)
    }

    fn right_divide(&self, x: &u64, s: &u64) -> Option<u64> {
        x.checked_sub(*s)
    }

    fn ore_pair(&self, s: &u64, t: &u64) -> (u64, u64) {
        let m = *s.max(t);
        (m - s, m - t)
    }

    fn reduce(&self, x: &u64, y: &u64) -> Option<(u64, u64)> {
        let m = *x.min(y);
        Some((x - m, y - m))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..=self.sample_max)
    }

    fn elem_to_json(&self, e: &u64) -> Value {
        json!(e)
    }

    fn elem_from_json(&self, v: &Value) -> Result<u64> {
        v.as_u64().ok_or_else(|| Error::Parse(format!("expected a natural number, got {v}")))
    }
}

/// `ℕ²` under componentwise addition; `G = ℤ²`.
#[derive(Clone, Debug)]
pub struct NatAdd2 {
    pub sample_max: u64,
}

impl Default for NatAdd2 {
    fn default() -> Self {
        NatAdd2 { sample_max: 6 }
    }
}

impl OreMonoid for NatAdd2 {
    type Elem = [u64; 2];

    fn name(&self) -> &str {
        "natadd2"
    }

    fn identity(&self) -> [u64; 2] {
        [0, 0]
    }

    fn mul(&self, s: &[u64; 2], t: &[u64; 2]) -> [u64; 2] {
        [s[0] + t[0], s[1] + t[1]]
    }

    fn left_divide(&self, s: &[u64; 2], x: &[u64; 2]) -> Option<[u64; 2]> {
        Some([x[0].checked_sub(s[0])?, x[1].checked_sub(s[1])?])
    }

    fn right_divide(&self, x: &[u64; 2], s: &[u64; 2]) -> Option<[u64; 2]> {
        self.left_divide(s, x)
    }

    fn ore_pair(&self, s: &[u64; 2], t: &[u64; 2]) -> ([u64; 2], [u64; 2]) {
        let m = [s[0].max(t[0]), s[1].max(t[1])];
        ([m[0] - s[0], m[1] - s[1]], [m[0] - t[0], m[1] - t[1]])
    }

    fn reduce(&self, x: &[u64; 2], y: &[u64; 2]) -> Option<([u64; 2], [u64; 2])> {
        let m = [x[0].min(y[0]), x[1].min(y[1])];
        Some(([x[0] - m[0], x[1] - m[1]], [y[0] - m[0], y[1] - m[1]]))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [u64; 2] {
        [rng.gen_range(0..=self.sample_max), rng.gen_range(0..=self.sample_max)]
    }

    fn elem_to_json(&self, e: &[u64; 2]) -> Value {
        json!(e)
    }

    fn elem_from_json(&self, v: &Value) -> Result<[u64; 2]> {
        let bad = || Error::Parse(format!("expected [a, b] with naturals, got {v}"));
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        Ok([arr[0].as_u64().ok_or_else(bad)?, arr[1].as_u64().ok_or_else(bad)?])
    }
}

/// A 2×2 integer matrix, row-major.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2(pub [[i128; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Mat2 {
        Mat2([[1, 0], [0, 1]])
    }

    pub fn det(&self) -> i128 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Adjugate: `adj(m)·m = det(m)·I`.
    pub fn adj(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &other.0);
        let mut c = [[0i128; 2]; 2];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0]
                    .checked_mul(b[0][j])
                    .and_then(|p| a[i][1].checked_mul(b[1][j]).and_then(|q| p.checked_add(q)))
                    .expect("matrix entry overflow");
            }
        }
        Mat2(c)
    }

    fn scalar(k: i128) -> Mat2 {
        Mat2([[k, 0], [0, k]])
    }

    fn div_exact(&self, d: i128) -> Option<Mat2> {
        let m = &self.0;
        if m.iter().flatten().all(|v| v % d == 0) {
            Some(Mat2([[m[0][0] / d, m[0][1] / d], [m[1][0] / d, m[1][1] / d]]))
        } else {
            None
        }
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Integer 2×2 matrices of positive determinant under multiplication.
#[derive(Clone, Debug)]
pub struct IntMat2Pos {
    /// Sampled entries lie in `-entry_max..=entry_max`.
    pub entry_max: i128,
}

impl Default for IntMat2Pos {
    fn default() -> Self {
        IntMat2Pos { entry_max: 3 }
    }
}

impl OreMonoid for IntMat2Pos {
    type Elem = Mat2;

    fn name(&self) -> &str {
        "intmat2pos"
    }

    fn identity(&self) -> Mat2 {
        Mat2::identity()
    }

    fn mul(&self, s: &Mat2, t: &Mat2) -> Mat2 {
        s.mul(t)
    }

    fn left_divide(&self, s: &Mat2, x: &Mat2) -> Option<Mat2> {
        s.adj().mul(x).div_exact(s.det())
    }

    fn right_divide(&self, x: &Mat2, s: &Mat2) -> Option<Mat2> {
        x.mul(&s.adj()).div_exact(s.det())
    }

    /// `u = t·adj(s)`, `v = det(s)·I`.
    fn ore_pair(&self, s: &Mat2, t: &Mat2) -> (Mat2, Mat2) {
        (t.mul(&s.adj()), Mat2::scalar(s.det()))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat2 {
        let k = self.entry_max;
        loop {
            let m = Mat2([
                [rng.gen_range(-k..=k), rng.gen_range(-k..=k)],
                [rng.gen_range(-k..=k), rng.gen_range(-k..=k)],
            ]);
            if m.det() > 0 {
                return m;
            }
        }
    }

    fn elem_to_json(&self, e: &Mat2) -> Value {
        let cell = |v: i128| match i64::try_from(v) {
            Ok(v) => json!(v),
            Err(_) => json!(v.to_string()),
        };
        json!([[cell(e.0[0][0]), cell(e.0[0][1])], [cell(e.0[1][0]), cell(e.0[1][1])]])
    }

    fn elem_from_json(&self, v: &Value) -> Result<Mat2> {
        let bad = || Error::Parse(format!("expected a 2x2 integer matrix with positive determinant, got {v}"));
        let cell = |c: &Value| -> Option<i128> {
            match c {
                Value::Number(n) => n.as_i64().map(i128::from),
                Value::String(s) => s.parse().ok(),
                _ => None,
            }
        };
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let mut m = [[0i128; 2]; 2];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            for (j, c) in row.iter().enumerate() {
                m[i][j] = cell(c).ok_or_else(bad)?;
            }
        }
        let m = Mat2(m);
        if m.det() <= 0 {
            return Err(bad());
        }
        Ok(m)
    }
}

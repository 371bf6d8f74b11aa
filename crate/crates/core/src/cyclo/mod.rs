//! Exact arithmetic in cyclotomic fields.
//!
//! An element of `Q(zeta_n)` is stored as a dense coefficient vector over the exponents
//! `0..n`. The canonical form uses the integral basis
//! `{ zeta_n^k : for every prime power q^e || n, the top q-adic digit of the q-component of k is not q-1 }`,
//! obtained by eliminating the forbidden exponents with `1 + zeta_q + ... + zeta_q^(q-1) = 0`,
//! followed by descent to the smallest conductor. With this basis an element lies in a
//! subfield `Q(zeta_(n/q))` exactly when its support consists of multiples of `q`, so
//! descent is a support test and canonical forms are unique.

mod ff;
mod galois;
mod reduction;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

pub use ff::{FfElem, FiniteField};
pub use galois::{galois_apply, is_p_rational, sigma_two_special, stabilizer_multipliers, GaloisAut};
pub use reduction::{build_reduction, ReductionMap};

use crate::arith::factorize;
use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Rational = Ratio<i128>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Cyclotomic::from_int(1)
    }

    pub fn from_int(v: i128) -> Self {
        Cyclotomic::from_rational(Rational::from_integer(v))
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// `zeta_n^k`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n > 0, "conductor must be positive");
        let mut coeffs = vec![Rational::zero(); n as usize];
        coeffs[k.rem_euclid(n as i64) as usize] = Rational::one();
        Cyclotomic::from_dense(n, coeffs)
    }

    /// Builds the element `sum_k coeffs[k] zeta_n^k` from an arbitrary (non-canonical) vector.
    pub fn from_dense(n: u64, mut coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len() as u64, n, "coefficient vector length must equal n");
        reduce_to_basis(n, &mut coeffs);
        let (conductor, coeffs) = descend(n, coeffs);
        Cyclotomic { conductor, coeffs }
    }

    /// Smallest `n` with the value in `Q(zeta_n)` (never `2 mod 4`).
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Canonical coefficients, indexed by exponent of `zeta_conductor`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero `(exponent, coefficient)` pairs of the canonical form.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64, c))
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0])
    }

    pub fn to_integer(&self) -> Option<i128> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// True iff the value is an algebraic integer (the canonical basis is integral).
    pub fn is_algebraic_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Dense (non-canonical) coefficients in `Q(zeta_m)`; `m` must be a multiple of the conductor.
    pub fn lift(&self, m: u64) -> Vec<Rational> {
        assert!(
            m.is_multiple_of(self.conductor),
            "{m} is not a multiple of {}",
            self.conductor
        );
        let step = m / self.conductor;
        let mut out = vec![Rational::zero(); m as usize];
        for (k, c) in self.terms() {
            out[(k * step) as usize] = *c;
        }
        out
    }

    pub fn scale(&self, q: Rational) -> Cyclotomic {
        if q.is_zero() {
            return Cyclotomic::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn scale_int(&self, v: i128) -> Cyclotomic {
        self.scale(Rational::from_integer(v))
    }

    pub fn div_rational(&self, q: Rational) -> Result<Cyclotomic> {
        if q.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        Ok(self.scale(q.recip()))
    }

    /// Multiplicative inverse via the norm: `x^-1 = prod_{sigma != 1} sigma(x) / N(x)`.
    pub fn inverse(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::Arithmetic("inversion of zero".into()));
        }
        if let Some(q) = self.to_rational() {
            return Ok(Cyclotomic::from_rational(q.recip()));
        }
        let n = self.conductor;
        let mut others = Cyclotomic::one();
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = &others * &self.galois_unchecked(k);
            }
        }
        let norm = (self * &others)
            .to_rational()
            .expect("the norm of a cyclotomic is rational");
        Ok(others.scale(norm.recip()))
    }

    /// `zeta ↦ zeta^k` on the conductor's field; caller guarantees `gcd(k, conductor) = 1`.
    pub(crate) fn galois_unchecked(&self, k: u64) -> Cyclotomic {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let mut out = vec![Rational::zero(); n as usize];
        for (j, c) in self.terms() {
            out[((j * (k % n)) % n) as usize] = *c;
        }
        Cyclotomic::from_dense(n, out)
    }

    pub fn complex_conjugate(&self) -> Cyclotomic {
        let n = self.conductor;
        self.galois_unchecked(n.saturating_sub(1).max(1))
    }

    pub fn pow(&self, mut e: u32) -> Cyclotomic {
        let mut acc = Cyclotomic::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Ordering key used for deterministic sorting: conductor, then coefficients.
    pub fn canonical_cmp(&self, other: &Cyclotomic) -> Ordering {
        self.conductor
            .cmp(&other.conductor)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

/// Eliminates every exponent whose top q-adic digit (of its q-component) is `q-1`.
fn reduce_to_basis(n: u64, coeffs: &mut [Rational]) {
    for (q, e) in factorize(n) {
        let qe = q.pow(e);
        let cofactor = n / qe;
        let inv = crate::arith::mod_inv((cofactor % qe) as i64, qe as i64).unwrap_or(0) as u64;
        let top = qe / q;
        let step = n / q;
        for k in 0..n {
            let c = coeffs[k as usize];
            if c.is_zero() {
                continue;
            }
            let component = (k % qe) * inv % qe;
            if component / top != q - 1 {
                continue;
            }
            coeffs[k as usize] = Rational::zero();
            for t in 1..q {
                let target = (k + n - (t * step) % n) % n;
                coeffs[target as usize] -= c;
            }
        }
    }
}

fn descend(mut n: u64, mut coeffs: Vec<Rational>) -> (u64, Vec<Rational>) {
    'outer: loop {
        for (q, _) in factorize(n) {
            let fits = coeffs
                .iter()
                .enumerate()
                .all(|(k, c)| c.is_zero() || (k as u64).is_multiple_of(q));
            if fits {
                let m = n / q;
                coeffs = (0..m).map(|k| coeffs[(k * q) as usize]).collect();
                n = m;
                continue 'outer;
            }
        }
        if n == 1 && coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        return (n, coeffs);
    }
}

fn combine(x: &Cyclotomic, y: &Cyclotomic, sign: i128) -> Cyclotomic {
    let l = x.conductor.lcm(&y.conductor);
    let mut a = x.lift(l);
    let sy = l / y.conductor;
    let s = Rational::from_integer(sign);
    for (k, c) in y.terms() {
        a[(k * sy) as usize] += c * s;
    }
    if x.conductor == y.conductor {
        // same canonical basis: the sum only needs descent
        let (conductor, coeffs) = descend(l, a);
        return Cyclotomic { conductor, coeffs };
    }
    Cyclotomic::from_dense(l, a)
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        combine(self, rhs, 1)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        combine(self, rhs, -1)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_rational() {
            return rhs.scale(self.coeffs[0]);
        }
        if rhs.is_rational() {
            return self.scale(rhs.coeffs[0]);
        }
        let l = self.conductor.lcm(&rhs.conductor);
        let sx = l / self.conductor;
        let sy = l / rhs.conductor;
        let mut out = vec![Rational::zero(); l as usize];
        let ys: Vec<(u64, Rational)> = rhs.terms().map(|(k, c)| (k * sy, *c)).collect();
        for (i, a) in self.terms() {
            let i = i * sx;
            for (j, b) in &ys {
                out[((i + j) % l) as usize] += a * b;
            }
        }
        Cyclotomic::from_dense(l, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "E({})", self.conductor)?;
                if k != 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Input(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: i128 = n.parse().map_err(|_| bad())?;
    let d: i128 = d.parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// JSON form `{ "n": conductor, "coeffs": { "k": "num/den", ... } }` with only nonzero terms.
impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a Cyclotomic);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let terms: Vec<_> = self.0.terms().collect();
                let mut map = serializer.serialize_map(Some(terms.len()))?;
                for (k, c) in terms {
                    map.serialize_entry(&k.to_string(), &format_rational(c))?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("n", &self.conductor)?;
        map.serialize_entry("coeffs", &Terms(self))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u64,
            coeffs: std::collections::BTreeMap<String, String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.n == 0 || raw.n > 1 << 20 {
            return Err(de::Error::custom(format!("invalid conductor {}", raw.n)));
        }
        let mut dense = vec![Rational::zero(); raw.n as usize];
        for (k, v) in raw.coeffs {
            let k: u64 = k
                .parse()
                .map_err(|_| de::Error::custom(format!("bad exponent {k:?}")))?;
            if k >= raw.n {
                return Err(de::Error::custom(format!("exponent {k} out of range")));
            }
            dense[k as usize] += parse_rational(&v).map_err(de::Error::custom)?;
        }
        Ok(Cyclotomic::from_dense(raw.n, dense))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn minimal_polynomial_relations() {
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_int(-1));
        assert_eq!(&z(5, 1) * &z(5, 4), Cyclotomic::one());
        let s = &z(8, 1) + &z(8, -1);
        assert_eq!(&s * &s, Cyclotomic::from_int(2));
        assert_eq!(z(4, 2), Cyclotomic::from_int(-1));
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(z(12, 4), z(3, 1));
    }

    #[test]
    fn sqrt5_from_gauss_sum() {
        // 1 + 2(z5 + z5^4) squares to 5
        let r = &Cyclotomic::one() + &(&z(5, 1) + &z(5, 4)).scale_int(2);
        assert_eq!(&r * &r, Cyclotomic::from_int(5));
        assert_eq!(r.conductor(), 5);
    }

    #[test]
    fn inverse_and_zero() {
        let x = &Cyclotomic::from_int(2) + &z(7, 3);
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, Cyclotomic::one());
        assert!(Cyclotomic::zero().inverse().is_err());
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn json_round_trip_and_canonicalisation_on_import() {
        let x = &z(15, 2).scale(Rational::new(3, 2)) - &z(9, 1);
        let s = serde_json::to_string(&x).unwrap();
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(x, back);
        // non-canonical input: zeta_3^2 written explicitly
        let y: Cyclotomic = serde_json::from_str(r#"{"n": 6, "coeffs": {"4": "1/1"}}"#).unwrap();
        assert_eq!(y, z(3, 2));
    }

    #[test]
    fn display() {
        assert_eq!(Cyclotomic::from_rational(Rational::new(-1, 2)).to_string(), "-1/2");
        assert_eq!(z(3, 1).to_string(), "E(3)");
    }
}

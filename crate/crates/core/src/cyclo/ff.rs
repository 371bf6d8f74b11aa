//! Finite fields `F_(p^f)` as `F_p[x] / (g)` for a fixed irreducible `g`.

use serde::Serialize;

use crate::arith::{mod_inv, mod_pow, prime_divisors};

/// Coefficients in `F_p`, lowest degree first, always of length `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FfElem(pub Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    degree: usize,
    /// Monic modulus, lowest degree first, length `degree + 1`.
    modulus: Vec<u64>,
}

// Polynomials over F_p, lowest degree first, no trailing zeros (zero = empty).
fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm] as i64, p as i64).expect("nonzero leading coefficient") as u64;
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// `x^(p^k) mod m`.
fn frobenius_power_of_x(m: &[u64], p: u64, k: usize) -> Vec<u64> {
    let mut cur = poly_rem(&[0, 1], m, p);
    for _ in 0..k {
        // raise to the p-th power
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
            }
            base = poly_rem(&poly_mul(&base, &base, p), m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin's test.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    if poly_sub(&frobenius_power_of_x(m, p, d), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_divisors(d as u64) {
        let h = poly_sub(&frobenius_power_of_x(m, p, d / r as usize), &x, p);
        if poly_gcd(m, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

impl FiniteField {
    /// `F_(p^degree)` modulo the least monic irreducible of that degree, where candidates
    /// `x^f + c_(f-1) x^(f-1) + ... + c_0` are ordered by the integer `sum c_i p^i`.
    pub fn new(p: u64, degree: usize) -> Self {
        assert!(degree >= 1);
        let count = (p as u128).pow(degree as u32);
        let mut idx = 0u128;
        loop {
            assert!(idx < count, "an irreducible polynomial always exists");
            let mut coeffs = Vec::with_capacity(degree + 1);
            let mut t = idx;
            for _ in 0..degree {
                coeffs.push((t % p as u128) as u64);
                t /= p as u128;
            }
            coeffs.push(1);
            if is_irreducible(&coeffs, p) {
                return FiniteField {
                    p,
                    degree,
                    modulus: coeffs,
                };
            }
            idx += 1;
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.degree as u32)
    }

    pub fn zero(&self) -> FfElem {
        FfElem(vec![0; self.degree])
    }

    pub fn one(&self) -> FfElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i128) -> FfElem {
        let mut e = self.zero();
        e.0[0] = v.rem_euclid(self.p as i128) as u64;
        e
    }

    /// The element whose coefficients are the base-p digits of `idx`.
    pub fn element_from_index(&self, mut idx: u128) -> FfElem {
        let mut e = self.zero();
        for c in e.0.iter_mut() {
            *c = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        e
    }

    fn pad(&self, v: Vec<u64>) -> FfElem {
        let mut v = v;
        v.resize(self.degree, 0);
        FfElem(v)
    }

    pub fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        FfElem(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn neg(&self, a: &FfElem) -> FfElem {
        FfElem(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let prod = poly_mul(&trim(a.0.clone()), &trim(b.0.clone()), self.p);
        self.pad(poly_rem(&prod, &self.modulus, self.p))
    }

    pub fn scale(&self, a: &FfElem, c: u64) -> FfElem {
        FfElem(a.0.iter().map(|x| x * (c % self.p) % self.p).collect())
    }

    pub fn pow(&self, a: &FfElem, mut e: u128) -> FfElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &FfElem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn inverse(&self, a: &FfElem) -> Option<FfElem> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.size() - 2))
    }

    /// The first element, in index order, of exact multiplicative order `m` (`m | q - 1`).
    pub fn primitive_root_of_unity(&self, m: u64) -> FfElem {
        let q1 = self.size() - 1;
        assert!(q1.is_multiple_of(m as u128), "{m} does not divide |F^x| = {q1}");
        let primes = prime_divisors(m);
        let one = self.one();
        for idx in 1..=q1 {
            let a = self.element_from_index(idx);
            let b = self.pow(&a, q1 / m as u128);
            if primes.iter().all(|&r| self.pow(&b, (m / r) as u128) != one) {
                return b;
            }
        }
        unreachable!("the multiplicative group is cyclic")
    }

    /// Reduction of an integer modulo p.
    pub fn int_mod_p(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    pub fn pow_mod_p(&self, base: u64, e: u64) -> u64 {
        mod_pow(base, e, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_of_81() {
        let f = FiniteField::new(3, 4);
        assert_eq!(f.size(), 81);
        // every nonzero element satisfies a^80 = 1
        for idx in 1..81 {
            let a = f.element_from_index(idx);
            assert_eq!(f.pow(&a, 80), f.one());
            assert_eq!(f.mul(&a, &f.inverse(&a).unwrap()), f.one());
        }
        let z = f.primitive_root_of_unity(5);
        assert_ne!(z, f.one());
        assert_eq!(f.pow(&z, 5), f.one());
    }

    #[test]
    fn irreducibility_test_agrees_with_root_search_for_small_degrees() {
        // degree 2 and 3 polynomials are irreducible iff they have no roots
        for p in [2u64, 3, 5] {
            for d in [2usize, 3] {
                let count = p.pow(d as u32);
                for idx in 0..count {
                    let mut m = Vec::new();
                    let mut t = idx;
                    for _ in 0..d {
                        m.push(t % p);
                        t /= p;
                    }
                    m.push(1);
                    let has_root = (0..p).any(|x| m.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0);
                    assert_eq!(is_irreducible(&m, p), !has_root, "p={p} m={m:?}");
                }
            }
        }
    }

    #[test]
    fn prime_field() {
        let f = FiniteField::new(7, 1);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.mul(&f.from_int(3), &f.from_int(5)), f.from_int(1));
    }
}

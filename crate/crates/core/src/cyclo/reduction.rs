use std::sync::Arc;

use super::ff::{FfElem, FiniteField};
use super::Cyclotomic;
use crate::arith::{mod_inv, multiplicative_order, p_part, require_prime};
use crate::error::{Error, Result};

/// A ring homomorphism from the p-local integers of `Q(zeta_n)` onto `F_(p^f)`:
/// `zeta_(p^a) ↦ 1` and `zeta_m ↦ beta`, a fixed primitive m-th root of unity,
/// where `n = p^a m` with `p ∤ m` and `f` is the order of `p` modulo `m`.
///
/// Its kernel is a maximal ideal over `p`. Different choices of `beta` differ by a
/// Galois twist; block partitions do not depend on the choice.
#[derive(Clone, Debug)]
pub struct ReductionMap {
    p: u64,
    n: u64,
    m: u64,
    field: Arc<FiniteField>,
    zeta_image: FfElem,
    /// `beta^i` for `i` in `0..m`.
    powers: Vec<FfElem>,
    /// `zeta_n ↦ beta^t` with `t = (p^a)^-1 mod m`.
    t: u64,
}

pub fn build_reduction(p: u64, n: u64) -> Result<ReductionMap> {
    require_prime(p)?;
    if n == 0 {
        return Err(Error::Input("exponent must be positive".into()));
    }
    let pa = p_part(n, p);
    let m = n / pa;
    let f = multiplicative_order(p % m.max(1), m.max(1)) as usize;
    if (f as f64) * (p as f64).log2() > 120.0 {
        return Err(Error::Capacity(format!("residue field F_({p}^{f}) is too large")));
    }
    let field = Arc::new(FiniteField::new(p, f.max(1)));
    let zeta_image = field.primitive_root_of_unity(m);
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = field.one();
    for _ in 0..m {
        powers.push(cur.clone());
        cur = field.mul(&cur, &zeta_image);
    }
    let t = if m == 1 {
        0
    } else {
        mod_inv((pa % m) as i64, m as i64).expect("p^a is a unit mod m") as u64
    };
    Ok(ReductionMap {
        p,
        n,
        m,
        field,
        zeta_image,
        powers,
        t,
    })
}

impl ReductionMap {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u64 {
        self.n
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn zeta_image(&self) -> &FfElem {
        &self.zeta_image
    }

    /// Image of `zeta_n^k`.
    pub fn root_image(&self, k: u64) -> &FfElem {
        &self.powers[((k % self.n) as u128 * self.t as u128 % self.m as u128) as usize]
    }

    /// Reduces a p-local integer of `Q(zeta_n)`; denominators divisible by `p` are rejected.
    pub fn reduce(&self, x: &Cyclotomic) -> Result<FfElem> {
        let c = x.conductor();
        if !self.n.is_multiple_of(c) {
            return Err(Error::Domain(format!("value {x} does not lie in Q(zeta_{})", self.n)));
        }
        let step = self.n / c;
        let p = self.p as i128;
        let mut acc = self.field.zero();
        for (k, q) in x.terms() {
            let den = q.denom().rem_euclid(p);
            if den == 0 {
                return Err(Error::NotIntegralAtP(self.p));
            }
            let den_inv = mod_inv(den as i64, p as i64).expect("unit mod p") as u128;
            let num = q.numer().rem_euclid(p) as u128;
            let coeff = (num * den_inv % p as u128) as u64;
            let term = self.field.scale(self.root_image(k * step), coeff);
            acc = self.field.add(&acc, &term);
        }
        Ok(acc)
    }
}

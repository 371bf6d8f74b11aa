use num_integer::Integer;

use super::Cyclotomic;
use crate::arith::{crt, p_part};
use crate::error::{Error, Result};

/// The automorphism `zeta_n ↦ zeta_n^k` of `Q(zeta_n)`, `gcd(k, n) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaloisAut {
    conductor: u64,
    multiplier: u64,
}

impl GaloisAut {
    pub fn new(conductor: u64, multiplier: i64) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::Domain("conductor must be positive".into()));
        }
        let k = multiplier.rem_euclid(conductor as i64) as u64;
        let k = if conductor == 1 { 1 } else { k };
        if k.gcd(&conductor) != 1 {
            return Err(Error::Domain(format!(
                "multiplier {multiplier} is not a unit modulo {conductor}"
            )));
        }
        Ok(GaloisAut {
            conductor,
            multiplier: k,
        })
    }

    pub fn identity(conductor: u64) -> Self {
        GaloisAut::new(conductor, 1).expect("1 is a unit")
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    /// Apply `other` first, then `self`; multipliers multiply.
    pub fn compose(&self, other: &GaloisAut) -> Result<GaloisAut> {
        if self.conductor != other.conductor {
            return Err(Error::Domain("automorphisms of different fields".into()));
        }
        GaloisAut::new(
            self.conductor,
            ((self.multiplier as u128 * other.multiplier as u128) % self.conductor as u128) as i64,
        )
    }

    pub fn apply(&self, x: &Cyclotomic) -> Result<Cyclotomic> {
        galois_apply(self, x)
    }
}

/// Applies `sigma` to `x`, lifting both to a common field. The multiplier must be a unit
/// modulo the lcm of the two conductors.
pub fn galois_apply(sigma: &GaloisAut, x: &Cyclotomic) -> Result<Cyclotomic> {
    let l = sigma.conductor.lcm(&x.conductor());
    if sigma.multiplier.gcd(&l) != 1 && l > 1 {
        return Err(Error::Domain(format!(
            "multiplier {} is not a unit modulo {l}",
            sigma.multiplier
        )));
    }
    Ok(x.galois_unchecked(sigma.multiplier))
}

fn check_multiple(values: &[Cyclotomic], n: u64) -> Result<()> {
    match values.iter().find(|v| !n.is_multiple_of(v.conductor())) {
        Some(v) => Err(Error::Domain(format!(
            "{n} is not a multiple of the conductor {} of {v}",
            v.conductor()
        ))),
        None => Ok(()),
    }
}

/// True iff every value is fixed by all `k = 1 mod m` (units mod `n`), `m` the p'-part of `n`;
/// equivalently all values lie in `Q(zeta_m)`.
pub fn is_p_rational(values: &[Cyclotomic], p: u64, n: u64) -> Result<bool> {
    check_multiple(values, n)?;
    let m = n / p_part(n, p);
    let mut k = 1 + m;
    while k < n + m {
        if k.gcd(&n) == 1 {
            let kk = k % n;
            if values.iter().any(|v| v.galois_unchecked(kk) != *v) {
                return Ok(false);
            }
        }
        k += m;
    }
    Ok(true)
}

/// Units `k` modulo `n` fixing every value, in increasing order.
pub fn stabilizer_multipliers(values: &[Cyclotomic], n: u64) -> Result<Vec<u64>> {
    check_multiple(values, n)?;
    Ok((1..=n.max(1))
        .filter(|&k| k.gcd(&n) == 1 && (n == 1 || k < n))
        .filter(|&k| values.iter().all(|v| v.galois_unchecked(k) == *v))
        .collect())
}

/// The automorphism fixing 2-power roots of unity and squaring odd-order roots:
/// `k = 1 mod 2^a`, `k = 2 mod m` for `n = 2^a m`.
pub fn sigma_two_special(n: u64) -> GaloisAut {
    let two = p_part(n, 2);
    let m = n / two;
    let k = if n == 1 { 1 } else { crt(1, two, 2 % m, m) };
    GaloisAut::new(n, k as i64).expect("CRT solution is a unit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Rational;

    fn z(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    fn sqrt5() -> Cyclotomic {
        &Cyclotomic::one() + &(&z(5, 1) + &z(5, 4)).scale_int(2)
    }

    #[test]
    fn galois_examples() {
        let s2 = GaloisAut::new(3, 2).unwrap();
        assert_eq!(galois_apply(&s2, &z(3, 1)).unwrap(), z(3, 2));
        let q = Cyclotomic::from_rational(Rational::new(7, 3));
        for k in [1, 2, 4, 7] {
            assert_eq!(galois_apply(&GaloisAut::new(15, k).unwrap(), &q).unwrap(), q);
        }
        // 2 is a non-residue mod 5
        let s = GaloisAut::new(5, 2).unwrap();
        assert_eq!(galois_apply(&s, &sqrt5()).unwrap(), -sqrt5());
        assert!(GaloisAut::new(6, 3).is_err());
        assert!(galois_apply(&GaloisAut::new(5, 3).unwrap(), &z(3, 1)).is_err());
    }

    #[test]
    fn p_rationality() {
        assert!(is_p_rational(&[Cyclotomic::from_int(-3)], 2, 4).unwrap());
        assert!(!is_p_rational(&[z(3, 1)], 3, 3).unwrap());
        assert!(is_p_rational(&[sqrt5()], 3, 15).unwrap());
        assert!(is_p_rational(&[z(3, 1)], 2, 12).unwrap());
        assert!(!is_p_rational(&[z(4, 1)], 2, 12).unwrap());
        assert!(is_p_rational(&[z(3, 1)], 3, 5).is_err());
    }

    #[test]
    fn special_sigma() {
        assert_eq!(sigma_two_special(8).multiplier(), 1);
        assert_eq!(sigma_two_special(3).multiplier(), 2);
        assert_eq!(sigma_two_special(12).multiplier(), 5);
        assert_eq!(sigma_two_special(1).multiplier(), 1);
        let s = sigma_two_special(24);
        assert_eq!(s.apply(&z(8, 1)).unwrap(), z(8, 1));
        assert_eq!(s.apply(&z(3, 1)).unwrap(), z(3, 2));
    }

    #[test]
    fn stabilizers() {
        assert_eq!(stabilizer_multipliers(&[sqrt5()], 5).unwrap(), vec![1, 4]);
        assert_eq!(stabilizer_multipliers(&[Cyclotomic::one()], 1).unwrap(), vec![1]);
    }
}

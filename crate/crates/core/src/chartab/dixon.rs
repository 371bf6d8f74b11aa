//! Dixon–Schneider: simultaneous eigenvectors of the class matrices over `F_l`,
//! lifted to exact cyclotomic values through the eigenvalues of each `rho(g)`.

use super::modp::Fp;
use crate::arith::is_prime;
use crate::cyclo::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::group::{ConjugacyClasses, ElementSet};

/// Least prime `l = 1 mod exponent` with `l > 2 * ceil(sqrt(order))`.
pub fn working_prime(order: u64, exponent: u64) -> u64 {
    let root = (order as f64).sqrt().ceil() as u64;
    let root = (root.saturating_sub(2)..=root + 2)
        .find(|r| r * r >= order)
        .unwrap_or(root);
    let bound = 2 * root;
    let mut l = exponent + 1;
    while l <= bound || !is_prime(l) {
        l += exponent;
    }
    l
}

/// `a[j][k][l] = #{x in K_j : x^-1 z_l in K_k}` reduced mod `l`, indexed `[j][k][l]`.
fn class_matrices(elements: &ElementSet, classes: &ConjugacyClasses, f: Fp) -> Vec<Vec<Vec<u64>>> {
    let r = classes.len();
    let mut m = vec![vec![vec![0u64; r]; r]; r];
    let reps = classes.representatives();
    for (idx, x) in elements.iter().enumerate() {
        let j = classes.class_of_index(idx);
        let xi = x.inverse();
        for (l, z) in reps.iter().enumerate() {
            let y = xi.mul(z);
            let k = classes.class_of_index(elements.index_of(&y).expect("closed under products"));
            m[j][k][l] += 1;
        }
    }
    for row in m.iter_mut().flatten().flatten() {
        *row %= f.l;
    }
    m
}

/// Splits `F_l^r` into the common eigenlines of the class matrices. Each subspace is kept
/// as a basis of row vectors in reduced echelon form.
fn split_eigenspaces(mats: &[Vec<Vec<u64>>], f: Fp) -> Result<Vec<Vec<u64>>> {
    let r = mats.len();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect()];
    for mj in mats.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let mut basis = basis;
            let pivots = f.rref(&mut basis);
            let d = basis.len();
            // images M_j v_b, read off at the pivot coordinates
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|v| {
                    (0..r)
                        .map(|k| (0..r).fold(0, |acc, l| f.add(acc, f.mul(mj[k][l], v[l]))))
                        .collect()
                })
                .collect();
            let x: Vec<Vec<u64>> = (0..d).map(|a| (0..d).map(|b| images[b][pivots[a]]).collect()).collect();
            let roots = f.roots(&f.charpoly(&x));
            let mut total = 0;
            for (lambda, _) in roots {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|a| {
                        (0..d)
                            .map(|b| if a == b { f.sub(x[a][b], lambda) } else { x[a][b] })
                            .collect()
                    })
                    .collect();
                let coords = f.nullspace(&shifted);
                total += coords.len();
                let sub: Vec<Vec<u64>> = coords
                    .iter()
                    .map(|c| {
                        (0..r)
                            .map(|k| (0..d).fold(0, |acc, b| f.add(acc, f.mul(c[b], basis[b][k]))))
                            .collect()
                    })
                    .collect();
                next.push(sub);
            }
            if total != d {
                return Err(Error::Arithmetic(format!(
                    "class matrix is not diagonalisable modulo {}",
                    f.l
                )));
            }
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Arithmetic(format!(
            "eigenspaces modulo {} did not separate the characters",
            f.l
        )));
    }
    Ok(spaces.into_iter().map(|mut s| s.pop().unwrap()).collect())
}

/// Exact values of all irreducible characters, in no particular order.
///
/// `power_maps[k][t]` is the class of `z_k^t` for `t` in `0..order(z_k)`.
pub fn irreducible_values(
    elements: &ElementSet,
    classes: &ConjugacyClasses,
    power_maps: &[Vec<u32>],
    exponent: u64,
) -> Result<Vec<Vec<Cyclotomic>>> {
    let order = elements.len() as u64;
    let r = classes.len();
    let f = Fp {
        l: working_prime(order, exponent),
    };
    let mats = class_matrices(elements, classes, f);
    let lines = split_eigenspaces(&mats, f)?;
    let zeta_n = f.pow(f.primitive_root(), (f.l - 1) / exponent);
    let inverse_class: Vec<usize> = (0..r).map(|k| *power_maps[k].last().unwrap() as usize).collect();
    let mut out = Vec::with_capacity(r);
    for v in lines {
        if v[0] == 0 {
            return Err(Error::Arithmetic("eigenvector vanishes at the identity class".into()));
        }
        let s = f.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&x| f.mul(x, s)).collect();
        // chi(1)^2 = |G| / sum_k omega_k omega_(k^-1) / |K_k|
        let sum = (0..r).fold(0, |acc, k| {
            let t = f.mul(omega[k], omega[inverse_class[k]]);
            f.add(acc, f.mul(t, f.inv(classes.size(k) as u64 % f.l)))
        });
        if sum == 0 {
            return Err(Error::Arithmetic("degenerate central character".into()));
        }
        let target = f.mul(order % f.l, f.inv(sum));
        let degree = (1..=order)
            .take_while(|d| d * d <= order)
            .find(|d| d * d % f.l == target && order.is_multiple_of(*d))
            .ok_or_else(|| Error::Arithmetic("no admissible degree".into()))?;
        let chi_mod: Vec<u64> = (0..r)
            .map(|k| {
                let size_inv = f.inv(classes.size(k) as u64 % f.l);
                f.mul(f.mul(omega[k], degree % f.l), size_inv)
            })
            .collect();
        let mut values = Vec::with_capacity(r);
        for k in 0..r {
            let o = classes.element_order(k);
            let w = f.pow(zeta_n, exponent / o);
            let w_inv = f.inv(w);
            let o_inv = f.inv(o % f.l);
            let mut coeffs = vec![Rational::from_integer(0); o as usize];
            let mut total = 0u64;
            for (i, c) in coeffs.iter_mut().enumerate() {
                let mut acc = 0u64;
                let step = f.pow(w_inv, i as u64);
                let mut cur = 1u64;
                for t in 0..o as usize {
                    acc = f.add(acc, f.mul(chi_mod[power_maps[k][t] as usize], cur));
                    cur = f.mul(cur, step);
                }
                let m = f.mul(acc, o_inv);
                if m > degree {
                    return Err(Error::Arithmetic(format!(
                        "eigenvalue multiplicity {m} exceeds the degree {degree}"
                    )));
                }
                total += m;
                *c = Rational::from_integer(m as i128);
            }
            if total != degree {
                return Err(Error::Arithmetic(
                    "eigenvalue multiplicities do not sum to the degree".into(),
                ));
            }
            values.push(Cyclotomic::from_dense(o, coeffs));
        }
        out.push(values);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn working_primes() {
        // S3: exponent 6, bound 2*ceil(sqrt 6) = 6
        assert_eq!(working_prime(6, 6), 7);
        // A6: exponent 60, bound 2*19 = 38
        assert_eq!(working_prime(360, 60), 61);
        // C2^6: exponent 2, bound 16
        assert_eq!(working_prime(64, 2), 17);
        assert_eq!(working_prime(1, 1), 3);
    }
}

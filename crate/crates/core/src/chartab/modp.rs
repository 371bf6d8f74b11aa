//! Dense linear algebra over a prime field `F_l` with `l < 2^31`.

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp {
    pub l: u64,
}

impl Fp {
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.l
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.l - b) % self.l
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.l
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.l;
        a %= self.l;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// `a` must be nonzero.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.l));
        self.pow(a, self.l - 2)
    }

    /// Least primitive root modulo `l`.
    pub fn primitive_root(self) -> u64 {
        let primes = crate::arith::prime_divisors(self.l - 1);
        (2..self.l.max(3))
            .find(|&g| primes.iter().all(|&q| self.pow(g, (self.l - 1) / q) != 1))
            .unwrap_or(1)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(self, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, i);
            let inv = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c] == 0 {
                    continue;
                }
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = self.sub(*x, self.mul(f, y));
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    /// Basis of `{x : A x = 0}` for a square matrix `A`.
    pub fn nullspace(self, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = a.len();
        let mut rows = a.to_vec();
        let pivots = self.rref(&mut rows);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; n];
                v[f] = 1;
                for (row, &pc) in rows.iter().zip(&pivots) {
                    v[pc] = self.sub(0, row[f]);
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial `det(xI - A)`, lowest degree first, via Hessenberg reduction.
    pub fn charpoly(self, a: &[Vec<u64>]) -> Vec<u64> {
        let n = a.len();
        let mut h = a.to_vec();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
                continue;
            };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            let inv = self.inv(h[m][m - 1]);
            for i in m + 1..n {
                let u = self.mul(h[i][m - 1], inv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    let t = self.mul(u, h[m][c]);
                    h[i][c] = self.sub(h[i][c], t);
                }
                for row in h.iter_mut() {
                    let t = self.mul(u, row[i]);
                    row[m] = self.add(row[m], t);
                }
            }
        }
        // p_k = (x - h_(k-1,k-1)) p_(k-1) - sum_i (prod of subdiagonal) h_(k-i-1,k-1) p_(k-i-1)
        let mut p: Vec<Vec<u64>> = vec![vec![1]];
        for k in 1..=n {
            let mut pk = vec![0u64; k + 1];
            for (j, &c) in p[k - 1].iter().enumerate() {
                pk[j + 1] = self.add(pk[j + 1], c);
                pk[j] = self.sub(pk[j], self.mul(h[k - 1][k - 1], c));
            }
            let mut t = 1u64;
            for i in 1..k {
                t = self.mul(t, h[k - i][k - i - 1]);
                if t == 0 {
                    break;
                }
                let f = self.mul(t, h[k - i - 1][k - 1]);
                for (j, &c) in p[k - i - 1].iter().enumerate() {
                    pk[j] = self.sub(pk[j], self.mul(f, c));
                }
            }
            p.push(pk);
        }
        p.pop().unwrap()
    }

    pub fn eval(self, poly: &[u64], x: u64) -> u64 {
        poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Distinct roots in `F_l`, ascending, with multiplicities.
    pub fn roots(self, poly: &[u64]) -> Vec<(u64, usize)> {
        let mut out = Vec::new();
        for x in 0..self.l {
            let mut q = poly.to_vec();
            let mut mult = 0;
            while q.len() > 1 && self.eval(&q, x) == 0 {
                q = self.divide_linear(&q, x);
                mult += 1;
            }
            if mult > 0 {
                out.push((x, mult));
            }
        }
        out
    }

    /// Quotient of `poly` by `(t - x)`, assuming `x` is a root.
    fn divide_linear(self, poly: &[u64], x: u64) -> Vec<u64> {
        let n = poly.len() - 1;
        let mut q = vec![0u64; n];
        let mut carry = 0;
        for i in (0..n).rev() {
            carry = self.add(poly[i + 1], self.mul(carry, x));
            q[i] = carry;
        }
        q
    }
}

//! Reference implementations used as oracles by the integration tests.
//! They share no code with the library beyond `std`.

#![allow(dead_code)]

/// Schoolbook arithmetic in `Z[lambda]/(p^a, Phi_p(1 + lambda))`.
pub struct NaiveRing {
    pub p: u64,
    pub m: u64,
    // C(p, j) mod m for j = 0..=p
    binom: Vec<u64>,
}

pub type Poly = Vec<u64>;

impl NaiveRing {
    pub fn new(p: u64, a: u32) -> Self {
        let m = p.pow(a);
        let mut row = vec![1u64];
        for _ in 0..p {
            let mut next = vec![1u64; row.len() + 1];
            for j in 1..row.len() {
                next[j] = (row[j - 1] + row[j]) % m;
            }
            row = next;
        }
        NaiveRing { p, m, binom: row }
    }

    pub fn n(&self) -> usize {
        (self.p - 1) as usize
    }

    pub fn from_signed(&self, c: &[i64]) -> Poly {
        let mut out = vec![0; self.n()];
        for (o, &x) in out.iter_mut().zip(c) {
            *o = x.rem_euclid(self.m as i64) as u64;
        }
        out
    }

    pub fn int(&self, c: i64) -> Poly {
        self.from_signed(&[c])
    }

    pub fn lambda_pow(&self, k: usize) -> Poly {
        let mut x = self.int(1);
        for _ in 0..k {
            x = self.mul(&x, &self.from_signed(&[0, 1]));
        }
        x
    }

    fn reduce(&self, mut c: Vec<u128>) -> Poly {
        let m = self.m as u128;
        let n = self.n();
        // lambda^n = -sum_{j=1}^{p-1} C(p,j) lambda^(j-1)
        for d in (n..c.len()).rev() {
            let top = c[d] % m;
            c[d] = 0;
            if top == 0 {
                continue;
            }
            for j in 1..self.p as usize {
                let idx = d - n + j - 1;
                c[idx] = (c[idx] + (m - top) * self.binom[j] as u128) % m;
            }
        }
        c.truncate(n);
        c.resize(n, 0);
        c.into_iter().map(|x| (x % m) as u64).collect()
    }

    pub fn mul(&self, x: &Poly, y: &Poly) -> Poly {
        let m = self.m as u128;
        let mut c = vec![0u128; x.len() + y.len()];
        for (i, &a) in x.iter().enumerate() {
            for (j, &b) in y.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u128 * b as u128) % m;
            }
        }
        self.reduce(c)
    }

    pub fn add(&self, x: &Poly, y: &Poly) -> Poly {
        x.iter().zip(y).map(|(&a, &b)| (a + b) % self.m).collect()
    }

    pub fn sub(&self, x: &Poly, y: &Poly) -> Poly {
        x.iter().zip(y).map(|(&a, &b)| (a + self.m - b) % self.m).collect()
    }

    pub fn scale(&self, x: &Poly, c: u64) -> Poly {
        x.iter().map(|&a| (a as u128 * c as u128 % self.m as u128) as u64).collect()
    }

    pub fn pow(&self, x: &Poly, mut e: u64) -> Poly {
        let mut acc = self.int(1);
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `zeta^k = (1 + lambda)^k`.
    pub fn zeta_pow(&self, k: u64) -> Poly {
        self.pow(&self.from_signed(&[1, 1]), k % self.p)
    }

    /// `sum c_k zeta^k`.
    pub fn from_zeta(&self, c: &[i64]) -> Poly {
        let mut acc = self.int(0);
        for (k, &ck) in c.iter().enumerate() {
            let t = self.scale(&self.zeta_pow(k as u64), ck.rem_euclid(self.m as i64) as u64);
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// `zeta -> zeta^s`, by Horner in `sigma(lambda) = (1 + lambda)^s - 1`.
    pub fn galois(&self, x: &Poly, s: u64) -> Poly {
        let sl = self.sub(&self.zeta_pow(s), &self.int(1));
        let mut acc = self.int(0);
        for &b in x.iter().rev() {
            acc = self.add(&self.mul(&acc, &sl), &self.int(b as i64));
        }
        acc
    }

    /// `Some(v)` or `None` for the zero representative.
    pub fn valuation(&self, x: &Poly) -> Option<u64> {
        x.iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(k, &b)| {
                let mut e = 0;
                let mut b = b;
                while b % self.p == 0 {
                    b /= self.p;
                    e += 1;
                }
                k as u64 + (self.p - 1) * e
            })
            .min()
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    for _ in 0..e {
        r = r * b % m;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat, p prime
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn smallest_primitive_root(p: u64) -> u64 {
    (2..p)
        .find(|&g| (1..p - 1).all(|k| pow_mod(g, k, p) != 1))
        .unwrap()
}

/// `B_0, ..., B_n mod p` (with `B_1 = +1/2`) by the Akiyama-Tanigawa
/// algorithm; `n + 1 < p` keeps every division invertible.
pub fn akiyama_tanigawa_mod_p(p: u64, n: usize) -> Vec<u64> {
    let mut a = vec![0u64; n + 1];
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        a[k] = inv_mod(k as u64 + 1, p);
        for j in (1..=k).rev() {
            a[j - 1] = (j as u64 % p) * ((a[j - 1] + p - a[j]) % p) % p;
        }
        out.push(a[0]);
    }
    out
}

/// Irregular indices `2k <= p - 3` with `p | B_2k`.
pub fn oracle_irregular(p: u64) -> Vec<u64> {
    if p < 5 {
        return vec![];
    }
    let b = akiyama_tanigawa_mod_p(p, (p - 3) as usize);
    (2..=p - 3).step_by(2).filter(|&k| b[k as usize] == 0).collect()
}

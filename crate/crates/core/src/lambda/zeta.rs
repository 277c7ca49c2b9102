use std::sync::Arc;

use crate::arith::{add_mod, neg_mod, reduce_signed, sub_mod};
use crate::error::{invalid, Result};

use super::{CycloElem, LambdaRing};

/// Element of `(Z/p^a)[x]/(x^p - 1)`, mapped onto `Z[zeta]/p^a` by `x -> zeta`.
///
/// The map is a ring morphism, so products and Galois actions can be done
/// here (cyclic convolution, index permutation) and projected to the
/// `lambda` basis at the end.
#[derive(Debug, Clone)]
pub struct ZetaPoly {
    ring: Arc<LambdaRing>,
    coeffs: Vec<u64>,
}

impl ZetaPoly {
    pub fn from_signed(ring: &Arc<LambdaRing>, coeffs: &[i64]) -> Result<Self> {
        let p = ring.p() as usize;
        if coeffs.len() > p {
            return invalid(format!("at most {p} zeta coefficients"));
        }
        let mut out = vec![0; p];
        for (o, &c) in out.iter_mut().zip(coeffs) {
            *o = reduce_signed(c as i128, ring.modulus());
        }
        Ok(ZetaPoly { ring: ring.clone(), coeffs: out })
    }

    pub fn one(ring: &Arc<LambdaRing>) -> Self {
        Self::monomial(ring, 0)
    }

    /// `x^k`, `k` read modulo `p`.
    pub fn monomial(ring: &Arc<LambdaRing>, k: i64) -> Self {
        let p = ring.p() as i64;
        let mut coeffs = vec![0; p as usize];
        coeffs[k.rem_euclid(p) as usize] = 1;
        ZetaPoly { ring: ring.clone(), coeffs }
    }

    pub fn ring(&self) -> &Arc<LambdaRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.ring.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| sub_mod(a, b, m))
            .collect();
        ZetaPoly { ring: self.ring.clone(), coeffs }
    }

    /// Cyclic convolution modulo `x^p - 1`.
    pub fn mul(&self, other: &Self) -> Self {
        let m = self.ring.modulus();
        let n = self.coeffs.len();
        let mut acc = vec![0u128; n];
        let (a, b) = (&self.coeffs, &other.coeffs);
        if m < 1 << 32 {
            // products fit in u64; sums of n < 2^64 of them fit in u128
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let (lo, hi) = acc.split_at_mut(i);
                for (slot, &bj) in hi.iter_mut().zip(b) {
                    *slot += (ai * bj) as u128;
                }
                for (slot, &bj) in lo.iter_mut().zip(&b[n - i..]) {
                    *slot += (ai * bj) as u128;
                }
            }
        } else {
            let m128 = m as u128;
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.iter().enumerate() {
                    let k = if i + j >= n { i + j - n } else { i + j };
                    acc[k] = (acc[k] + ai as u128 * bj as u128 % m128) % m128;
                }
            }
        }
        let coeffs = acc.into_iter().map(|x| (x % m as u128) as u64).collect();
        ZetaPoly { ring: self.ring.clone(), coeffs }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// The automorphism `x -> x^s`, `s` prime to `p`.
    pub fn galois(&self, s: u64) -> Self {
        let p = self.coeffs.len();
        let s = (s % p as u64) as usize;
        debug_assert!(s != 0);
        let mut coeffs = vec![0; p];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * s % p] = c;
        }
        ZetaPoly { ring: self.ring.clone(), coeffs }
    }

    /// Project to `Z[zeta]/p^a` in the `lambda` basis.
    ///
    /// Horner in `1 + lambda`: each step is a shift-and-add, and only the
    /// final `lambda^(p-1)` term needs the reduction rule.
    pub fn to_lambda(&self) -> CycloElem {
        let m = self.ring.modulus();
        let p = self.coeffs.len();
        let mut r: Vec<u64> = Vec::with_capacity(p);
        for &c in self.coeffs.iter().rev() {
            // r <- r (1 + lambda) + c
            r.push(0);
            for i in (1..r.len()).rev() {
                r[i] = add_mod(r[i], r[i - 1], m);
            }
            r[0] = add_mod(r[0], c, m);
        }
        self.ring.fold_top(&mut r);
        CycloElem::from_raw(self.ring.clone(), r)
    }

    /// Lift from the `lambda` basis: `sum b_k (x - 1)^k`, degree `<= p - 2`.
    pub fn from_lambda(x: &CycloElem) -> Self {
        let ring = x.ring().clone();
        let m = ring.modulus();
        let p = ring.p() as usize;
        let mut r: Vec<u64> = Vec::with_capacity(p);
        for &b in x.coeffs().iter().rev() {
            // r <- r (x - 1) + b
            r.push(0);
            for i in (1..r.len()).rev() {
                r[i] = sub_mod(r[i - 1], r[i], m);
            }
            r[0] = add_mod(neg_mod(r[0], m), b, m);
        }
        r.resize(p, 0);
        ZetaPoly { ring, coeffs: r }
    }

    /// Coefficients of `zeta^0 .. zeta^(p-2)` after eliminating `zeta^(p-1)`
    /// with `1 + zeta + ... + zeta^(p-1) = 0`.
    pub fn reduced_zeta_coeffs(&self) -> Vec<u64> {
        let m = self.ring.modulus();
        let top = *self.coeffs.last().unwrap();
        self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|&c| sub_mod(c, top, m))
            .collect()
    }
}

use std::sync::Arc;

use crate::arith::{add_mod, check_odd_prime, checked_prime_power, inv_mod, mul_mod, neg_mod};
use crate::error::{invalid, Result};

use super::{CycloElem, ZetaPoly};

/// Parameters of `Z[lambda]/p^a` together with the reduction rule
/// `lambda^(p-1) = -sum_{j=1}^{p-1} C(p, j) lambda^(j-1)` coming from
/// `Phi_p(1 + lambda) = 0`.
#[derive(Debug, PartialEq, Eq)]
pub struct LambdaRing {
    p: u64,
    a: u32,
    modulus: u64,
    // lambda^(p-1) = sum_k tail[k] lambda^k
    tail: Vec<u64>,
}

impl LambdaRing {
    pub fn new(p: u64, a: u32) -> Result<Arc<Self>> {
        check_odd_prime(p)?;
        if a == 0 {
            return invalid("precision must be at least 1");
        }
        let Some(modulus) = checked_prime_power(p, a) else {
            return invalid(format!("p^a = {p}^{a} does not fit the word-size representation"));
        };
        let n = (p - 1) as usize;
        // C(p, j) = p C(p-1, j-1) / j and C(p-1, k) = prod_{i<=k} (p - i) / i,
        // every divisor being a unit modulo p^a
        let mut tail = Vec::with_capacity(n);
        let mut lower = 1u64; // C(p-1, j-1)
        for j in 1..=p - 1 {
            let inv_j = inv_mod(j, modulus).expect("j < p is a unit");
            let binom = mul_mod(mul_mod(p % modulus, lower, modulus), inv_j, modulus);
            tail.push(neg_mod(binom, modulus));
            lower = mul_mod(mul_mod(lower, p - j, modulus), inv_j, modulus);
        }
        Ok(Arc::new(LambdaRing { p, a, modulus, tail }))
    }

    /// A ring whose reduction constant is deliberately wrong, for exercising
    /// the verification harness.
    #[doc(hidden)]
    pub fn with_corrupted_reduction(p: u64, a: u32) -> Result<Arc<Self>> {
        let ring = Self::new(p, a)?;
        let mut tail = ring.tail.clone();
        tail[1] = add_mod(tail[1], 1, ring.modulus);
        Ok(Arc::new(LambdaRing { tail, ..*ring }))
    }

    /// Same ring at a lower coefficient precision.
    pub fn reduced(&self, a: u32) -> Result<Arc<Self>> {
        if a == 0 || a > self.a {
            return invalid(format!("cannot move from precision {} to {a}", self.a));
        }
        let modulus = checked_prime_power(self.p, a).expect("smaller than an existing modulus");
        Ok(Arc::new(LambdaRing {
            p: self.p,
            a,
            modulus,
            tail: self.tail.iter().map(|&t| t % modulus).collect(),
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Coefficient precision exponent `a`.
    pub fn precision(&self) -> u32 {
        self.a
    }

    /// `p^a`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p - 1`, the number of basis coefficients.
    pub fn degree(&self) -> usize {
        (self.p - 1) as usize
    }

    /// Elements are known modulo `pi^cap`, `cap = a (p - 1)`.
    pub fn cap(&self) -> u64 {
        self.a as u64 * (self.p - 1)
    }

    #[cfg(test)]
    fn tail(&self) -> &[u64] {
        &self.tail
    }

    pub fn zero(self: &Arc<Self>) -> CycloElem {
        CycloElem::from_raw(self.clone(), vec![0; self.degree()])
    }

    pub fn one(self: &Arc<Self>) -> CycloElem {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, c: i64) -> CycloElem {
        let mut coeffs = vec![0; self.degree()];
        coeffs[0] = crate::arith::reduce_signed(c as i128, self.modulus);
        CycloElem::from_raw(self.clone(), coeffs)
    }

    pub fn lambda(self: &Arc<Self>) -> CycloElem {
        self.lambda_pow(1)
    }

    /// `lambda^k`, reduced when `k >= p - 1`.
    pub fn lambda_pow(self: &Arc<Self>, k: usize) -> CycloElem {
        if k < self.degree() {
            let mut coeffs = vec![0; self.degree()];
            coeffs[k] = 1;
            CycloElem::from_raw(self.clone(), coeffs)
        } else {
            self.lambda().pow(k as u64)
        }
    }

    /// `zeta^k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycloElem {
        ZetaPoly::monomial(self, k).to_lambda()
    }

    /// Element from coefficients in the `lambda` basis (signed, any length up
    /// to `p - 1`).
    pub fn from_lambda_coeffs(self: &Arc<Self>, coeffs: &[i64]) -> Result<CycloElem> {
        if coeffs.len() > self.degree() {
            return invalid(format!("at most {} lambda coefficients", self.degree()));
        }
        let mut out = vec![0; self.degree()];
        for (o, &c) in out.iter_mut().zip(coeffs) {
            *o = crate::arith::reduce_signed(c as i128, self.modulus);
        }
        Ok(CycloElem::from_raw(self.clone(), out))
    }

    /// `sum c_k zeta^k` re-expressed in the `lambda` basis. Accepts up to `p`
    /// coefficients (`zeta^(p-1)` is allowed).
    pub fn encode_zeta_poly(self: &Arc<Self>, coeffs: &[i64]) -> Result<CycloElem> {
        Ok(ZetaPoly::from_signed(self, coeffs)?.to_lambda())
    }

    /// Fold a `lambda`-polynomial of degree at most `p - 1` into the basis.
    pub(crate) fn fold_top(&self, poly: &mut Vec<u64>) {
        let n = self.degree();
        debug_assert!(poly.len() <= n + 1);
        if poly.len() == n + 1 {
            let top = poly.pop().unwrap();
            if top != 0 {
                for (c, &t) in poly.iter_mut().zip(&self.tail) {
                    *c = add_mod(*c, mul_mod(top, t, self.modulus), self.modulus);
                }
            }
        }
        poly.resize(n, 0);
    }

    /// `p / lambda` in the basis: `-lambda^(p-2) - sum_{j=2}^{p-1} C(p,j) lambda^(j-2)`.
    pub(crate) fn p_over_lambda(&self) -> Vec<u64> {
        let n = self.degree();
        let mut q: Vec<u64> = self.tail[1..].to_vec();
        q.push(neg_mod(1, self.modulus));
        debug_assert_eq!(q.len(), n);
        q
    }
}

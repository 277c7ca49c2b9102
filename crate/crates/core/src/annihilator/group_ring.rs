use crate::arith::{add_mod, mul_mod, neg_mod, pow_mod};
use crate::error::{invalid, Result};

use super::{FpPoly, PowerTable};

/// Element of `F_p[G]`, `G = <sigma>` cyclic of order `p - 1`.
///
/// Position `j` holds the coefficient of `sigma^j`; exponents are read
/// modulo `p - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElem {
    p: u64,
    u: u64,
    coeffs: Vec<u64>,
}

impl GroupRingElem {
    pub fn new(table: &PowerTable, coeffs: Vec<u64>) -> Result<Self> {
        let p = table.p();
        if coeffs.len() != (p - 1) as usize {
            return invalid(format!(
                "group ring element needs {} coefficients, got {}",
                p - 1,
                coeffs.len()
            ));
        }
        Ok(GroupRingElem {
            p,
            u: table.u(),
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    pub fn zero(table: &PowerTable) -> Self {
        GroupRingElem {
            p: table.p(),
            u: table.u(),
            coeffs: vec![0; (table.p() - 1) as usize],
        }
    }

    /// `sigma^j`.
    pub fn sigma_pow(table: &PowerTable, j: i64) -> Self {
        let mut e = Self::zero(table);
        let n = e.coeffs.len() as i64;
        e.coeffs[j.rem_euclid(n) as usize] = 1;
        e
    }

    /// `sigma - s`.
    pub fn sigma_minus(table: &PowerTable, s: u64) -> Self {
        let mut e = Self::sigma_pow(table, 1);
        e.coeffs[0] = add_mod(e.coeffs[0], neg_mod(s % e.p, e.p), e.p);
        e
    }

    /// `sum_j sigma^j`.
    pub fn norm(table: &PowerTable) -> Self {
        GroupRingElem {
            p: table.p(),
            u: table.u(),
            coeffs: vec![1; (table.p() - 1) as usize],
        }
    }

    /// `P(sigma^d)` for a polynomial `P` over the same prime field.
    pub fn from_poly(table: &PowerTable, poly: &FpPoly, d: usize) -> Result<Self> {
        if poly.modulus() != table.p() {
            return invalid("polynomial modulus differs from the group ring's");
        }
        let mut e = Self::zero(table);
        let n = e.coeffs.len();
        for (k, &c) in poly.coeffs().iter().enumerate() {
            let idx = (k * d) % n;
            e.coeffs[idx] = add_mod(e.coeffs[idx], c, e.p);
        }
        Ok(e)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.u
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `sigma^j`, `j` read modulo `p - 1`.
    pub fn coeff(&self, j: i64) -> u64 {
        self.coeffs[j.rem_euclid(self.coeffs.len() as i64) as usize]
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.u != other.u {
            return invalid("group ring elements over different (p, u)");
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add_mod(a, b, self.p))
            .collect();
        Ok(GroupRingElem { coeffs, ..self.clone() })
    }

    /// Convolution with exponents taken modulo `p - 1`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.coeffs.len();
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = (i + j) % n;
                out[k] = add_mod(out[k], mul_mod(a, b, self.p), self.p);
            }
        }
        Ok(GroupRingElem { coeffs: out, ..self.clone() })
    }

    /// Image under the ring morphism `sigma -> s` into `F_p`.
    pub fn eval_scalar(&self, s: u64) -> Result<u64> {
        let s = s % self.p;
        if s == 0 {
            return invalid("sigma cannot map to 0: it is invertible");
        }
        let mut acc = 0;
        let mut power = 1;
        for &c in &self.coeffs {
            acc = add_mod(acc, mul_mod(c, power, self.p), self.p);
            power = mul_mod(power, s, self.p);
        }
        debug_assert_eq!(power, pow_mod(s, self.p - 1, self.p));
        Ok(acc)
    }
}

/// `p * theta = sum_{m=0}^{p-2} u_m sigma^{-m}`.
pub fn stickelberger_element(table: &PowerTable) -> GroupRingElem {
    let mut e = GroupRingElem::zero(table);
    let n = e.coeffs.len() as i64;
    for (m, &um) in table.powers().iter().enumerate() {
        e.coeffs[(-(m as i64)).rem_euclid(n) as usize] = um;
    }
    e
}

//! Bernoulli numbers modulo `p`, irregular indices and the minus-part
//! eigenvalues they determine.
//!
//! Everything runs in `F_p`: by von Staudt–Clausen the denominator of
//! `B_{2k}` is the product of the primes `q` with `(q - 1) | 2k`, so `p`
//! stays out of every denominator as long as `2k <= p - 3`. The recurrence
//! also divides by `n + 1 <= p - 2`, which is invertible. No rational
//! arithmetic is needed.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::annihilator::{EigenSet, PowerTable};
use crate::arith::{add_mod, check_odd_prime, inv_mod, mul_mod, neg_mod};
use crate::error::{invalid, Result};

/// Largest prime accepted by default; the recurrence is quadratic in `p`.
pub const DEFAULT_PRIME_CAP: u64 = 1 << 14;

/// `2k -> B_{2k} mod p` for `2 <= 2k <= p - 3`.
///
/// Uses `sum_{j=0}^{n} C(n+1, j) B_j = 0` with `B_1 = -1/2`; odd-index
/// terms past `B_1` vanish and are skipped.
pub fn bernoulli_even_mod_p(p: u64) -> Result<BTreeMap<u64, u64>> {
    check_odd_prime(p)?;
    let mut out = BTreeMap::new();
    if p < 5 {
        return Ok(out);
    }
    let top = (p - 3) as usize;
    // b[j] = B_j mod p for j <= n; odd j > 1 stay zero
    let mut b = vec![0u64; top + 1];
    b[0] = 1;
    b[1] = neg_mod(inv_mod(2, p).unwrap(), p);
    // row holds C(n+1, j) for j = 0..=n+1
    let mut row = vec![1u64, 2, 1];
    for n in 2..=top {
        // advance row from C(n, .) to C(n+1, .)
        row.push(1);
        for j in (1..=n).rev() {
            row[j] = add_mod(row[j], row[j - 1], p);
        }
        if n % 2 == 1 {
            continue;
        }
        let mut acc = 0;
        for j in 0..n {
            if b[j] != 0 {
                acc = add_mod(acc, mul_mod(row[j], b[j], p), p);
            }
        }
        let inv = inv_mod((n as u64 + 1) % p, p).expect("n + 1 < p");
        b[n] = neg_mod(mul_mod(acc, inv, p), p);
        out.insert(n as u64, b[n]);
    }
    Ok(out)
}

pub fn irregular_indices(p: u64) -> Result<Vec<u64>> {
    Ok(bernoulli_even_mod_p(p)?
        .into_iter()
        .filter_map(|(k, r)| (r == 0).then_some(k))
        .collect())
}

pub fn irregularity_index(p: u64) -> Result<usize> {
    Ok(irregular_indices(p)?.len())
}

/// One `mu = u^{2m+1}` per irregular index `2k`, where `2m = p - 1 - 2k`.
pub fn minus_eigenvalues_from_bernoulli(table: &PowerTable) -> Result<EigenSet> {
    let p = table.p();
    let exps = irregular_indices(p)?
        .into_iter()
        .map(|k| (p - 1 - k + 1) as u32);
    Ok(EigenSet::from_logs(p, table.u(), exps))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrregularityReport {
    pub p: u64,
    pub u: u64,
    pub bernoulli_residues: BTreeMap<u64, u64>,
    pub irregular_indices: Vec<u64>,
    pub i_p: usize,
    pub minus_eigenvalues: Vec<u64>,
    /// Discrete logs `2m + 1` of the minus eigenvalues, same order.
    pub minus_exponents: Vec<u32>,
}

impl IrregularityReport {
    pub fn compute(p: u64) -> Result<Self> {
        if p >= DEFAULT_PRIME_CAP {
            return invalid(format!("p = {p} exceeds the cap {DEFAULT_PRIME_CAP}"));
        }
        let table = PowerTable::for_prime(p)?;
        let residues = bernoulli_even_mod_p(p)?;
        let irregular: Vec<u64> = residues
            .iter()
            .filter_map(|(&k, &r)| (r == 0).then_some(k))
            .collect();
        // keep the eigenvalues aligned with the irregular indices
        let minus_exponents: Vec<u32> = irregular.iter().map(|&k| (p - k) as u32).collect();
        let minus_eigenvalues = minus_exponents
            .iter()
            .map(|&e| table.get(e as i64))
            .collect();
        Ok(IrregularityReport {
            p,
            u: table.u(),
            i_p: irregular.len(),
            bernoulli_residues: residues,
            irregular_indices: irregular,
            minus_eigenvalues,
            minus_exponents,
        })
    }

    /// `p, i_p, indices...` as one CSV row.
    pub fn csv_row(&self) -> String {
        let mut fields = vec![self.p.to_string(), self.i_p.to_string()];
        fields.extend(self.irregular_indices.iter().map(|k| k.to_string()));
        fields.join(",")
    }

    pub fn is_consistent(&self) -> bool {
        self.i_p == self.irregular_indices.len()
            && self.i_p == self.minus_eigenvalues.len()
            && self
                .irregular_indices
                .iter()
                .all(|&k| k % 2 == 0 && k >= 2 && k + 3 <= self.p)
            && self
                .minus_exponents
                .iter()
                .zip(&self.irregular_indices)
                .all(|(&e, &k)| e % 2 == 1 && e as u64 + k == self.p)
    }
}

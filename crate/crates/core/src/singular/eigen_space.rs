use std::sync::Arc;

use serde::Serialize;

use crate::annihilator::PowerTable;
use crate::arith::mul_mod;
use crate::error::{invalid, Error, Result};
use crate::lambda::{CycloElem, LambdaRing, Valuation};

use super::linalg;

/// `v_pi(sigma(x) - mu x)`, `sigma: zeta -> zeta^u`.
pub fn linear_eigen_defect(x: &CycloElem, u: u64, mu: u64) -> Result<Valuation> {
    Ok(x.galois(u)?.sub(&x.scale(mu as i64))?.valuation())
}

/// `v_pi(sigma(x) - x^mu)`.
pub fn eigen_defect(x: &CycloElem, u: u64, mu: u64) -> Result<Valuation> {
    let z = x.to_zeta();
    Ok(z.galois(u).sub(&z.pow(mu)).to_lambda().valuation())
}

/// Solutions of `sigma(V) = mu V mod pi^K` with `v_pi(V) >= 1`.
#[derive(Debug, Clone)]
pub struct EigenSpace {
    pub p: u64,
    pub u: u64,
    pub mu: u64,
    pub k: u64,
    pub generators: Vec<CycloElem>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenSpaceSummary {
    pub p: u64,
    pub u: u64,
    pub mu: u64,
    pub k: u64,
    pub generators: usize,
    /// Generators that are not already `0 mod pi^K`.
    pub nontrivial: usize,
    pub min_valuation: Option<u64>,
}

impl EigenSpace {
    pub fn summary(&self) -> EigenSpaceSummary {
        let vals: Vec<u64> = self
            .generators
            .iter()
            .filter_map(|g| g.valuation().exact())
            .filter(|&v| v < self.k)
            .collect();
        EigenSpaceSummary {
            p: self.p,
            u: self.u,
            mu: self.mu,
            k: self.k,
            generators: self.generators.len(),
            nontrivial: vals.len(),
            min_valuation: vals.iter().copied().min(),
        }
    }

    /// `sum c_i g_i`.
    pub fn combine(&self, coeffs: &[i64]) -> Result<CycloElem> {
        let Some(first) = self.generators.first() else {
            return invalid("empty solution space");
        };
        let mut acc = first.ring().zero();
        for (g, &c) in self.generators.iter().zip(coeffs) {
            acc = acc.add(&g.scale(c))?;
        }
        Ok(acc)
    }
}

/// Number of `p`-digits a coefficient of `lambda^k` must vanish to for the
/// element to be `0 mod pi^K`.
fn digits_needed(k: usize, big_k: u64, p: u64) -> u32 {
    let (q, r) = (big_k / (p - 1), big_k % (p - 1));
    (q + u64::from((k as u64) < r)) as u32
}

pub fn eigen_space(ring: &Arc<LambdaRing>, table: &PowerTable, mu: u64, k: u64) -> Result<EigenSpace> {
    let p = ring.p();
    if table.p() != p {
        return invalid("power table and ring are for different primes");
    }
    if mu == 0 || mu >= p {
        return Err(Error::OutOfRange(format!("eigenvalue {mu}")));
    }
    if k > ring.cap() {
        return Err(Error::InsufficientPrecision { wanted: k, cap: ring.cap() });
    }
    let u = table.u();
    let n = ring.degree();
    let a = ring.precision();
    let m = ring.modulus();

    // columns: (sigma - mu)(lambda^j)
    let cols: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            let e = ring.lambda_pow(j);
            Ok(e.galois(u)?.sub(&e.scale(mu as i64))?.coeffs().to_vec())
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..n {
        let need = digits_needed(i, k, p);
        if need == 0 {
            continue;
        }
        let scale = p.pow(a - need);
        rows.push((0..n).map(|j| mul_mod(cols[j][i], scale, m)).collect::<Vec<u64>>());
    }
    let mut unit_row = vec![0; n];
    unit_row[0] = p.pow(a - 1);
    rows.push(unit_row);

    let generators: Vec<CycloElem> = linalg::kernel(rows, n, p, a)
        .into_iter()
        .map(|v| {
            let signed: Vec<i64> = v.iter().map(|&c| c as i64).collect();
            ring.from_lambda_coeffs(&signed)
        })
        .collect::<Result<_>>()?;

    for g in &generators {
        if !g.valuation().is_at_least(1) || !linear_eigen_defect(g, u, mu)?.is_at_least(k) {
            return Err(Error::Invariant(format!(
                "solver output fails substitution check at p = {p}, mu = {mu}, K = {k}"
            )));
        }
    }
    Ok(EigenSpace { p, u, mu, k, generators })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_depths() {
        // p = 5, K = 4: every coefficient needs one digit
        assert!((0..4).all(|i| digits_needed(i, 4, 5) == 1));
        // K = 6 = 4 + 2: lambda^0, lambda^1 need two digits
        assert_eq!((0..4).map(|i| digits_needed(i, 6, 5)).collect::<Vec<_>>(), vec![2, 2, 1, 1]);
        assert_eq!(digits_needed(3, 3, 5), 0);
    }

    #[test]
    fn monomial_solves_low_precision() {
        for p in [5u64, 7, 11, 13] {
            let table = PowerTable::for_prime(p).unwrap();
            let ring = LambdaRing::new(p, 2).unwrap();
            for m in 1..p - 1 {
                let mu = table.get(m as i64);
                let x = ring.lambda_pow(m as usize);
                assert!(linear_eigen_defect(&x, table.u(), mu).unwrap().is_at_least(m + 1));
            }
        }
    }

    #[test]
    fn small_example_rechecked() {
        let table = PowerTable::for_prime(5).unwrap();
        assert_eq!(table.u(), 2);
        let ring = LambdaRing::new(5, 2).unwrap();
        let space = eigen_space(&ring, &table, 4, 4).unwrap();
        assert!(!space.generators.is_empty());
        // the pure eigenvector with mu = u^2 starts at lambda^2
        assert_eq!(space.summary().min_valuation, Some(2));
        for g in &space.generators {
            let lhs = g.galois(2).unwrap();
            let rhs = g.scale(4);
            assert!(lhs.congruent_mod_pi(&rhs, 4).unwrap());
        }
    }

    #[test]
    fn precision_is_checked() {
        let table = PowerTable::for_prime(7).unwrap();
        let ring = LambdaRing::new(7, 2).unwrap();
        assert!(eigen_space(&ring, &table, 3, 13).is_err());
        assert!(eigen_space(&ring, &table, 7, 4).is_err());
        assert!(eigen_space(&ring, &table, 3, 12).is_ok());
    }
}

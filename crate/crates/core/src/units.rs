//! Real cyclotomic units, their sigma-eigencomponents modulo `p`-th powers,
//! and the primary/non-primary survey over all even eigen-indices.

use std::sync::Arc;

use serde::Serialize;

use crate::annihilator::{structure_bounds_check, PowerTable, StructureBounds};
use crate::arith::{check_odd_prime, inv_mod, pow_mod};
use crate::bernoulli::irregular_indices;
use crate::error::{invalid, Error, Result};
use crate::lambda::{CycloElem, LambdaRing, Valuation, ZetaPoly};
use crate::singular::normalize_leading;

pub const SURVEY_PRECISION: u32 = 4;
pub const MAX_PRECISION: u32 = 8;

/// `delta_a = (1 - zeta^a)(1 - zeta^-a) / ((1 - zeta)(1 - zeta^-1))`
/// `= (1 + zeta + ... + zeta^(a-1)) (1 + zeta^-1 + ... + zeta^-(a-1))`.
pub fn cyclotomic_unit_zeta(ring: &Arc<LambdaRing>, a_idx: u64) -> Result<ZetaPoly> {
    let p = ring.p();
    let a_idx = a_idx % p;
    if a_idx == 0 {
        return invalid("cyclotomic unit index must be prime to p");
    }
    let mut fwd = vec![0i64; p as usize];
    for i in 0..a_idx as usize {
        fwd[i] = 1;
    }
    let fwd = ZetaPoly::from_signed(ring, &fwd)?;
    Ok(fwd.mul(&fwd.galois(p - 1)))
}

pub fn cyclotomic_unit(ring: &Arc<LambdaRing>, a_idx: u64) -> Result<CycloElem> {
    Ok(cyclotomic_unit_zeta(ring, a_idx)?.to_lambda())
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitEigencomponent {
    pub p: u64,
    pub u: u64,
    pub n: u64,
    pub mu: u64,
    /// Index `b` of the base unit `delta_b`.
    pub base: u64,
    pub precision: u32,
    pub weights: Vec<u64>,
    #[serde(skip)]
    pub raw: CycloElem,
    #[serde(skip)]
    pub element: CycloElem,
    /// `v_pi(sigma(eps') - eps'^mu)`, at least `p + 1` by construction.
    pub congruence: Valuation,
    pub valuation: Valuation,
    pub a_level: Option<u64>,
    pub primary: bool,
    pub locally_trivial: bool,
}

/// `w_j = u^(-2nj) mod p`.
pub fn eigen_weights(table: &PowerTable, n: u64) -> Vec<u64> {
    let p = table.p();
    (0..p - 1).map(|j| table.get(-2 * (n as i64) * j as i64)).collect()
}

// prod_j x_j^(w_j) with w_j in [1, p): bucket by weight, then one running
// product per weight, about 3p multiplications in all.
fn multi_pow(ring: &Arc<LambdaRing>, bases: &[ZetaPoly], weights: &[u64]) -> ZetaPoly {
    let p = ring.p() as usize;
    let mut buckets: Vec<Option<ZetaPoly>> = vec![None; p];
    for (x, &w) in bases.iter().zip(weights) {
        let slot = &mut buckets[w as usize];
        *slot = Some(match slot.take() {
            Some(acc) => acc.mul(x),
            None => x.clone(),
        });
    }
    let mut running = ZetaPoly::one(ring);
    let mut result = ZetaPoly::one(ring);
    let mut any = false;
    for bucket in buckets.into_iter().skip(1).rev() {
        if let Some(b) = bucket {
            running = running.mul(&b);
            any = true;
        }
        if any {
            result = result.mul(&running);
        }
    }
    result
}

/// Teichmuller lifts of the weights: `t^(-2nj) mod p^a` with
/// `t = u^(p^(a-1))`, so that `t^(p-1) = 1 mod p^a`.
pub fn teichmuller_weights(table: &PowerTable, n: u64, modulus: u64) -> Vec<u64> {
    let p = table.p();
    let mut t = table.u();
    let mut q = p;
    while q < modulus {
        t = pow_mod(t, p, modulus);
        q *= p;
    }
    let t_inv = inv_mod(t, modulus).expect("unit");
    let ratio = pow_mod(t_inv, 2 * n, modulus);
    let mut w = 1 % modulus;
    (0..p - 1)
        .map(|_| {
            let cur = w;
            w = crate::arith::mul_mod(w, ratio, modulus);
            cur
        })
        .collect()
}

// prod_j x_j^(e_j) for exponents below p^a: split the exponents into base-p
// digits, one bucketed product per digit, combined Horner-style in p.
fn multi_pow_digits(ring: &Arc<LambdaRing>, bases: &[ZetaPoly], exps: &[u64]) -> ZetaPoly {
    let p = ring.p();
    let mut digits: Vec<Vec<u64>> = Vec::new();
    let mut rest = exps.to_vec();
    while rest.iter().any(|&e| e != 0) {
        digits.push(rest.iter().map(|e| e % p).collect());
        rest.iter_mut().for_each(|e| *e /= p);
    }
    let mut acc = ZetaPoly::one(ring);
    for d in digits.iter().rev() {
        acc = acc.pow(p).mul(&multi_pow(ring, bases, d));
    }
    acc
}

/// The `mu = u^(2n)` eigencomponent of the real cyclotomic unit `delta_b`.
///
/// `raw` is `eps = prod_j sigma^j(delta_b)^(w_j)` with `w_j = u^(-2nj) mod p`;
/// since `mu w_(j+1) = w_j mod p`, `sigma(eps) / eps^mu` is a `p`-th power.
/// `element` is `prod_j sigma^j(delta_b^(p-1))^(t_j)` with the Teichmuller
/// weights `t_j`, an exact `sigma`-eigenvector at the working precision. It
/// agrees with `eps^(p-1)` modulo `pi^(p+1)` (their ratio is a `p`-th power of
/// a unit `= 1 mod pi`), and its exactness makes `v_pi(element - 1) = 2n
/// mod (p-1)` hold at every level, not just below `p + 1`.
pub fn eigencomponent_with_base(
    table: &PowerTable,
    n: u64,
    base: u64,
    precision: u32,
) -> Result<UnitEigencomponent> {
    let p = table.p();
    if p < 5 || n == 0 || n > (p - 3) / 2 {
        return Err(Error::OutOfRange(format!("half-index {n} for p = {p}")));
    }
    if precision < 2 {
        return invalid("eigencomponents need precision a >= 2");
    }
    let ring = LambdaRing::new(p, precision)?;
    let delta = cyclotomic_unit_zeta(&ring, base)?;
    let weights = eigen_weights(table, n);
    let orbit: Vec<ZetaPoly> = (0..p - 1).map(|j| delta.galois(table.get(j as i64))).collect();
    let raw = multi_pow(&ring, &orbit, &weights);

    let normalized: Vec<ZetaPoly> = {
        let d1 = delta.pow(p - 1);
        (0..p - 1).map(|j| d1.galois(table.get(j as i64))).collect()
    };
    let norm = multi_pow_digits(&ring, &normalized, &teichmuller_weights(table, n, ring.modulus()));

    let mu = table.get(2 * n as i64);
    let congruence = norm.galois(table.u()).sub(&norm.pow(mu)).to_lambda().valuation();
    if !congruence.is_at_least(p + 1) {
        return Err(Error::Invariant(format!(
            "eigencomponent p = {p}, 2n = {}: sigma(eps') = eps'^mu fails ({congruence})",
            2 * n
        )));
    }
    let element = norm.to_lambda();
    let valuation = element.add_int(-1).valuation();
    Ok(UnitEigencomponent {
        p,
        u: table.u(),
        n,
        mu,
        base,
        precision,
        weights,
        raw: raw.to_lambda(),
        element,
        congruence,
        valuation,
        a_level: None,
        primary: false,
        locally_trivial: false,
    })
}

pub fn eigencomponent(table: &PowerTable, n: u64, precision: u32) -> Result<UnitEigencomponent> {
    eigencomponent_with_base(table, n, table.u(), precision)
}

/// Fills in `a_level`, `primary` and `locally_trivial`.
///
/// A finite valuation must be `2n mod (p - 1)`; anything else is reported as
/// [`Error::Violation`].
pub fn classify_eigencomponent(c: &mut UnitEigencomponent) -> Result<()> {
    let p = c.p;
    match c.valuation {
        Valuation::Exact(v) => {
            if v % (p - 1) != 2 * c.n % (p - 1) {
                return Err(Error::Violation(format!(
                    "p = {p}, 2n = {}: v = {v} is not 2n mod p-1",
                    2 * c.n
                )));
            }
            c.a_level = Some((v - 2 * c.n) / (p - 1));
            c.primary = v >= p + 1;
            c.locally_trivial = false;
        }
        Valuation::AtLeast(cap) => {
            c.a_level = None;
            c.primary = cap >= p + 1;
            c.locally_trivial = true;
        }
    }
    Ok(())
}

/// Build and classify, retrying once at higher precision on a sentinel.
pub fn surveyed_component(table: &PowerTable, n: u64, precision: u32) -> Result<UnitEigencomponent> {
    let mut c = eigencomponent(table, n, precision)?;
    if matches!(c.valuation, Valuation::AtLeast(_)) && precision < MAX_PRECISION {
        let higher = (precision + 2).min(MAX_PRECISION);
        if crate::arith::checked_prime_power(table.p(), higher).is_some() {
            c = eigencomponent(table, n, higher)?;
        }
    }
    classify_eigencomponent(&mut c)?;
    Ok(c)
}

/// Same-eigenvalue quotient of two non-primary components: after
/// leading-coefficient normalization, `eps1 eps2^-1` should be primary
/// (threshold `p + 1`).
pub fn unit_quotient_valuation(c1: &UnitEigencomponent, c2: &UnitEigencomponent) -> Result<Valuation> {
    if c1.p != c2.p || c1.mu != c2.mu {
        return invalid("quotient needs components with the same eigenvalue");
    }
    for c in [c1, c2] {
        if c.valuation.is_at_least(c.p + 1) {
            return invalid(format!("component 2n = {} is already primary", 2 * c.n));
        }
    }
    let a = normalize_leading(&c1.element)?;
    let b = normalize_leading(&c2.element)?;
    Ok(a.mul(&b.invert()?)?.add_int(-1).valuation())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurveyConfig {
    pub precision: u32,
    /// Assumed `r_p^+` (zero wherever Vandiver's conjecture is verified).
    pub r_plus: u64,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig { precision: SURVEY_PRECISION, r_plus: 0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub p: u64,
    pub u: u64,
    pub precision: u32,
    pub components: Vec<UnitEigencomponent>,
    /// Even indices `2n` of primary components.
    pub primary_index_set: Vec<u64>,
    pub rho1_local: u64,
    pub irregular_indices: Vec<u64>,
    pub i_p: u64,
    pub r_plus: u64,
    pub bounds: StructureBounds,
    /// Primary set equals the irregular indices.
    pub matches_bernoulli: bool,
    pub anomalies: Vec<String>,
}

impl SurveyReport {
    pub fn passed(&self) -> bool {
        self.anomalies.is_empty() && self.bounds.all_pass()
    }

    /// CSV rows `p,2n,v,a_level,primary` (sentinels written as `>=cap`).
    pub fn csv_rows(&self) -> Vec<String> {
        self.components
            .iter()
            .map(|c| {
                let v = match c.valuation {
                    Valuation::Exact(v) => v.to_string(),
                    Valuation::AtLeast(cap) => format!(">={cap}"),
                };
                let a = c.a_level.map_or(String::new(), |a| a.to_string());
                format!("{},{},{},{},{}", c.p, 2 * c.n, v, a, c.primary)
            })
            .collect()
    }
}

pub fn unit_survey(p: u64, config: &SurveyConfig) -> Result<SurveyReport> {
    check_odd_prime(p)?;
    if p < 5 {
        return Err(Error::OutOfRange(format!("unit survey needs p >= 5, got {p}")));
    }
    let table = PowerTable::for_prime(p)?;
    let mut components = Vec::new();
    let mut anomalies = Vec::new();
    for n in 1..=(p - 3) / 2 {
        match surveyed_component(&table, n, config.precision) {
            Ok(c) => components.push(c),
            Err(e @ (Error::Violation(_) | Error::Invariant(_))) => anomalies.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    let primary_index_set: Vec<u64> =
        components.iter().filter(|c| c.primary).map(|c| 2 * c.n).collect();
    let rho1_local = components.iter().filter(|c| c.primary && !c.locally_trivial).count() as u64;
    let irregular = irregular_indices(p)?;
    let i_p = irregular.len() as u64;
    let bounds = structure_bounds_check(i_p, config.r_plus, i_p, i_p, rho1_local);

    // the survey never sees two components with one eigenvalue, but the law
    // is cheap to exercise on the pairs it does have
    for pair in components.windows(2) {
        if pair[0].mu == pair[1].mu {
            let v = unit_quotient_valuation(&pair[0], &pair[1])?;
            if !v.is_at_least(p + 1) {
                anomalies.push(format!("same-mu quotient not primary at p = {p}: {v}"));
            }
        }
    }

    Ok(SurveyReport {
        p,
        u: table.u(),
        precision: config.precision,
        matches_bernoulli: primary_index_set == irregular,
        components,
        primary_index_set,
        rho1_local,
        irregular_indices: irregular,
        i_p,
        r_plus: config.r_plus,
        bounds,
        anomalies,
    })
}

/// `u^(-2n)`, the ratio of consecutive weights.
pub fn weight_ratio(table: &PowerTable, n: u64) -> u64 {
    let p = table.p();
    inv_mod(pow_mod(table.u(), 2 * n, p), p).expect("unit")
}

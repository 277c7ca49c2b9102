use serde::Serialize;

use crate::arith::{add_mod, gcd, mul_mod, neg_mod};
use crate::error::{invalid, Error, Result};

use super::{poly_from_roots, EigenSet, FpPoly};

fn check_divisor(p: u64, d: u64) -> Result<()> {
    if d == 0 || (p - 1) % d != 0 {
        return invalid(format!("{d} does not divide p - 1 = {}", p - 1));
    }
    Ok(())
}

/// `{mu^d : mu in M}` with collisions collapsed; its size is `r_d`.
pub fn induced_eigenvalues(set: &EigenSet, d: u64) -> Result<EigenSet> {
    check_divisor(set.p, d)?;
    let n = set.p - 1;
    Ok(EigenSet::from_logs(
        set.p,
        set.u,
        set.members().iter().map(|e| ((e.m as u64 * d) % n) as u32),
    ))
}

/// `prod (U^d - nu)` over the induced eigenvalues, expanded in `U`.
///
/// The result has degree `d * r_d` and is checked to be a multiple of
/// `prod_{mu in M} (U - mu)`.
pub fn induced_min_poly(set: &EigenSet, d: u64) -> Result<FpPoly> {
    let induced = induced_eigenvalues(set, d)?;
    let in_v = poly_from_roots(set.p, &induced.residues())?;
    let poly = in_v.compose_power(d as usize);
    let base = poly_from_roots(set.p, &set.residues())?;
    if !base.divides(&poly)? {
        return Err(Error::Invariant(format!(
            "P_r1 = {base} does not divide P_rd(U^{d}) = {poly}"
        )));
    }
    Ok(poly)
}

/// Elementary symmetric functions `S_0 = 1, S_1, ..., S_{r_d}` of the
/// induced eigenvalues.
pub fn symmetric_coefficients(set: &EigenSet, d: u64) -> Result<Vec<u64>> {
    let p = set.p;
    let induced = induced_eigenvalues(set, d)?;
    let mut s = vec![1u64];
    for nu in induced.residues() {
        // multiply the generating polynomial prod (1 + nu t)
        s.push(0);
        for k in (1..s.len()).rev() {
            s[k] = add_mod(s[k], mul_mod(s[k - 1], nu, p), p);
        }
    }
    Ok(s)
}

/// `sum_k (-1)^k S_k U^{d (r - k)}`.
pub fn reassemble_symmetric(p: u64, s: &[u64], d: u64) -> FpPoly {
    let r = s.len() - 1;
    let d = d as usize;
    let mut coeffs = vec![0u64; r * d + 1];
    for (k, &sk) in s.iter().enumerate() {
        coeffs[(r - k) * d] = if k % 2 == 0 { sk } else { neg_mod(sk, p) };
    }
    FpPoly::new(p, coeffs)
}

/// Ranks of the induced annihilators for a coprime splitting `d * g = p - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub p: u64,
    pub r_1: usize,
    pub d: u64,
    pub r_d: usize,
    pub g: u64,
    pub r_g: usize,
    /// `r_d <= r_1 <= d r_d` and the same for `g`.
    pub tower_d: bool,
    pub tower_g: bool,
    /// `r_d r_g >= r_1`.
    pub product: bool,
    /// `r_d = 1 => r_g = r_1` and symmetrically.
    pub unit_rank: bool,
}

impl RankProfile {
    pub fn all_pass(&self) -> bool {
        self.tower_d && self.tower_g && self.product && self.unit_rank
    }
}

fn tower_holds(r_1: usize, d: u64, r_d: usize) -> bool {
    r_d <= r_1 && r_1 <= d as usize * r_d
}

pub fn rank_inequality_report(set: &EigenSet, d: u64, g: u64) -> Result<RankProfile> {
    let p = set.p;
    check_divisor(p, d)?;
    check_divisor(p, g)?;
    if d * g != p - 1 || gcd(d, g) != 1 {
        return invalid(format!(
            "({d}, {g}) is not a coprime splitting of p - 1 = {}",
            p - 1
        ));
    }
    if set.is_empty() {
        return invalid("rank inequalities need a nonempty eigenvalue set");
    }
    let r_1 = set.len();
    let r_d = induced_eigenvalues(set, d)?.len();
    let r_g = induced_eigenvalues(set, g)?.len();
    Ok(RankProfile {
        p,
        r_1,
        d,
        r_d,
        g,
        r_g,
        tower_d: tower_holds(r_1, d, r_d),
        tower_g: tower_holds(r_1, g, r_g),
        product: r_d * r_g >= r_1,
        unit_rank: (r_d != 1 || r_g == r_1) && (r_g != 1 || r_d == r_1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub relation: String,
    pub lhs: i64,
    pub rhs: i64,
    pub passed: bool,
}

impl BoundCheck {
    fn le(name: &str, lhs: i64, rhs: i64) -> Self {
        BoundCheck { relation: format!("{name}: {lhs} <= {rhs}"), lhs, rhs, passed: lhs <= rhs }
    }

    fn eq(name: &str, lhs: i64, rhs: i64) -> Self {
        BoundCheck { relation: format!("{name}: {lhs} == {rhs}"), lhs, rhs, passed: lhs == rhs }
    }
}

/// The two rank chains `r- - r+ <= i_p = r1- <= r-` and `r- - r+ <= rho1 <= r-`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureBounds {
    pub checks: Vec<BoundCheck>,
}

impl StructureBounds {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn structure_bounds_check(
    r_p_minus: u64,
    r_p_plus: u64,
    r_1_minus: u64,
    i_p: u64,
    rho_1: u64,
) -> StructureBounds {
    let (rm, rp, r1m, ip, rho) = (
        r_p_minus as i64,
        r_p_plus as i64,
        r_1_minus as i64,
        i_p as i64,
        rho_1 as i64,
    );
    StructureBounds {
        checks: vec![
            BoundCheck::le("r_p^- - r_p^+ <= i_p", rm - rp, ip),
            BoundCheck::eq("i_p == r_1^-", ip, r1m),
            BoundCheck::le("i_p <= r_p^-", ip, rm),
            BoundCheck::le("r_p^- - r_p^+ <= rho_1", rm - rp, rho),
            BoundCheck::le("rho_1 <= r_p^-", rho, rm),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annihilator::PowerTable;
    use crate::arith::pow_mod;

    fn set(p: u64, residues: &[u64]) -> EigenSet {
        EigenSet::new(&PowerTable::for_prime(p).unwrap(), residues).unwrap()
    }

    #[test]
    fn induced_sets() {
        assert_eq!(induced_eigenvalues(&set(13, &[2, 6]), 2).unwrap().residues(), vec![4, 10]);
        assert_eq!(induced_eigenvalues(&set(13, &[2, 11]), 2).unwrap().residues(), vec![4]);
        for p in [5u64, 7, 13] {
            let m: Vec<u64> = (1..p).collect();
            assert_eq!(induced_eigenvalues(&set(p, &m), p - 1).unwrap().residues(), vec![1]);
        }
        assert!(induced_eigenvalues(&set(13, &[2]), 5).is_err());
    }

    #[test]
    fn induced_polynomials() {
        let m = set(13, &[2, 11]);
        let poly = induced_min_poly(&m, 2).unwrap();
        assert_eq!(poly, FpPoly::from_signed(13, &[-4, 0, 1]));
        assert_eq!(poly_from_roots(13, &[2, 11]).unwrap(), FpPoly::new(13, [9, 0, 1]));

        let m = set(13, &[2, 6]);
        let poly = induced_min_poly(&m, 2).unwrap();
        let expect = FpPoly::from_signed(13, &[-4, 0, 1])
            .mul(&FpPoly::from_signed(13, &[-10, 0, 1]))
            .unwrap();
        assert_eq!(poly, expect);
        // long division oracle, written out by hand: (U^2-4)(U^2-10) = (U-2)(U-6)(U+2)(U+6)
        let cofactor = FpPoly::from_signed(13, &[2, 1]).mul(&FpPoly::from_signed(13, &[6, 1])).unwrap();
        assert_eq!(poly_from_roots(13, &[2, 6]).unwrap().mul(&cofactor).unwrap(), poly);

        assert_eq!(
            induced_min_poly(&set(5, &[2]), 4).unwrap(),
            FpPoly::from_signed(5, &[-1, 0, 0, 0, 1])
        );
    }

    #[test]
    fn symmetric_functions() {
        assert_eq!(symmetric_coefficients(&set(5, &[2, 3]), 1).unwrap(), vec![1, 0, 1]);
        assert_eq!(symmetric_coefficients(&set(13, &[2, 6]), 2).unwrap(), vec![1, 1, 1]);
        for mu in 2..13 {
            for d in [1, 2, 3, 4, 6, 12] {
                let s = symmetric_coefficients(&set(13, &[mu]), d).unwrap();
                assert_eq!(s, vec![1, pow_mod(mu, d, 13)]);
            }
        }
        let m = set(13, &[2, 5, 6]);
        for d in [1, 2, 3, 4, 6, 12] {
            let s = symmetric_coefficients(&m, d).unwrap();
            assert_eq!(reassemble_symmetric(13, &s, d), induced_min_poly(&m, d).unwrap());
        }
    }

    #[test]
    fn rank_profile_example() {
        let r = rank_inequality_report(&set(13, &[2, 6]), 3, 4).unwrap();
        assert_eq!((r.r_1, r.r_d, r.r_g), (2, 1, 2));
        assert!(r.all_pass());

        let r = rank_inequality_report(&set(13, &[1]), 3, 4).unwrap();
        assert_eq!((r.r_1, r.r_d, r.r_g), (1, 1, 1));
        assert!(r.all_pass());

        assert!(rank_inequality_report(&set(13, &[2]), 2, 6).is_err());
        assert!(rank_inequality_report(&set(13, &[2]), 5, 4).is_err());
        assert!(rank_inequality_report(&set(13, &[]), 3, 4).is_err());
    }

    #[test]
    fn structure_bound_examples() {
        assert!(structure_bounds_check(1, 0, 1, 1, 1).all_pass());
        assert!(structure_bounds_check(2, 1, 2, 2, 1).all_pass());
        let bad = structure_bounds_check(1, 0, 2, 2, 0);
        assert!(!bad.all_pass());
        assert!(!bad.checks[2].passed);
        assert_eq!(bad.checks[2].relation, "i_p <= r_p^-: 2 <= 1");
    }
}

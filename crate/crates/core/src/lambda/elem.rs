use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{add_mod, inv_mod, mul_mod, neg_mod, reduce_signed, sub_mod, v_p};
use crate::error::{invalid, Error, Result};

use super::{LambdaRing, Valuation, ZetaPoly};

/// Element of `Z[zeta]/pi^(a(p-1))` as `sum_{k<p-1} b_k lambda^k`, `b_k mod p^a`.
#[derive(Clone)]
pub struct CycloElem {
    ring: Arc<LambdaRing>,
    coeffs: Vec<u64>,
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring.p() == other.ring.p()
            && self.ring.precision() == other.ring.precision()
            && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElem {}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CycloElem[p={}, a={}]{:?}",
            self.ring.p(),
            self.ring.precision(),
            self.coeffs
        )
    }
}

impl CycloElem {
    pub(crate) fn from_raw(ring: Arc<LambdaRing>, coeffs: Vec<u64>) -> Self {
        debug_assert_eq!(coeffs.len(), ring.degree());
        CycloElem { ring, coeffs }
    }

    pub fn ring(&self) -> &Arc<LambdaRing> {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    /// The element is known modulo `pi^cap`.
    pub fn cap(&self) -> u64 {
        self.ring.cap()
    }

    /// `b_0, ..., b_{p-2}` in `[0, p^a)`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Reduce to a lower coefficient precision.
    pub fn with_precision(&self, a: u32) -> Result<Self> {
        if a == self.precision() {
            return Ok(self.clone());
        }
        let ring = self.ring.reduced(a)?;
        let m = ring.modulus();
        Ok(CycloElem {
            coeffs: self.coeffs.iter().map(|&c| c % m).collect(),
            ring,
        })
    }

    // Bring both operands to a common ring (the lower precision).
    fn align(&self, other: &Self) -> Result<(Self, Self)> {
        if self.p() != other.p() {
            return invalid(format!(
                "elements of different fields: p = {} and p = {}",
                self.p(),
                other.p()
            ));
        }
        if Arc::ptr_eq(&self.ring, &other.ring) {
            return Ok((self.clone(), other.clone()));
        }
        let a = self.precision().min(other.precision());
        let x = self.with_precision(a)?;
        let mut y = other.with_precision(a)?;
        y.ring = x.ring.clone();
        Ok((x, y))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64, u64) -> u64) -> Result<Self> {
        let (x, y) = self.align(other)?;
        let m = x.ring.modulus();
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| f(a, b, m))
            .collect();
        Ok(CycloElem { ring: x.ring, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, add_mod)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, sub_mod)
    }

    pub fn neg(&self) -> Self {
        let m = self.ring.modulus();
        CycloElem {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|&c| neg_mod(c, m)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let m = self.ring.modulus();
        let c = reduce_signed(c as i128, m);
        CycloElem {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|&b| mul_mod(b, c, m)).collect(),
        }
    }

    pub fn add_int(&self, c: i64) -> Self {
        let m = self.ring.modulus();
        let mut out = self.clone();
        out.coeffs[0] = add_mod(out.coeffs[0], reduce_signed(c as i128, m), m);
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (x, y) = self.align(other)?;
        Ok(x.to_zeta().mul(&y.to_zeta()).to_lambda())
    }

    pub fn pow(&self, e: u64) -> Self {
        self.to_zeta().pow(e).to_lambda()
    }

    pub fn to_zeta(&self) -> ZetaPoly {
        ZetaPoly::from_lambda(self)
    }

    /// Coefficients in the basis `zeta^0, ..., zeta^(p-2)`.
    pub fn decode_zeta(&self) -> Vec<u64> {
        self.to_zeta().reduced_zeta_coeffs()
    }

    /// `zeta -> zeta^s` for `s` prime to `p`.
    pub fn galois(&self, s: u64) -> Result<Self> {
        if s % self.p() == 0 {
            return invalid("zeta -> zeta^0 is not an automorphism");
        }
        Ok(self.to_zeta().galois(s).to_lambda())
    }

    /// `sigma^j` with `sigma(zeta) = zeta^u`.
    pub fn sigma_pow(&self, j: i64, u: u64) -> Result<Self> {
        let p = self.p();
        let e = j.rem_euclid(p as i64 - 1) as u64;
        self.galois(crate::arith::pow_mod(u, e, p))
    }

    /// Complex conjugation `zeta -> zeta^(-1)`, i.e. `sigma^((p-1)/2)`.
    pub fn conjugate(&self) -> Self {
        self.to_zeta().galois(self.p() - 1).to_lambda()
    }

    /// `min_k (k + (p-1) v_p(b_k))`; the candidate values are pairwise
    /// distinct modulo `p - 1`, so the ultrametric minimum is attained.
    pub fn valuation(&self) -> Valuation {
        let p = self.p();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(k, &b)| k as u64 + (p - 1) * v_p(b, p) as u64)
            .min()
            .map_or(Valuation::AtLeast(self.cap()), Valuation::Exact)
    }

    /// `(nu, c)` with `x = c lambda^nu mod pi^(nu+1)`, `c` in `[1, p)`.
    ///
    /// Uses `p = -lambda^(p-1) mod pi^p`.
    pub fn leading_term(&self) -> Option<(u64, u64)> {
        let p = self.p();
        let nu = self.valuation().exact()?;
        let k = (nu % (p - 1)) as usize;
        let e = nu / (p - 1);
        let mut w = self.coeffs[k];
        for _ in 0..e {
            w /= p;
        }
        let w = w % p;
        Some((nu, if e % 2 == 0 { w } else { neg_mod(w, p) }))
    }

    /// Inverse of a unit, by Newton iteration `y <- y (2 - x y)` from the
    /// residue-field inverse; each round doubles the `pi`-adic precision.
    pub fn invert(&self) -> Result<Self> {
        let p = self.p();
        if self.coeffs[0] % p == 0 {
            return Err(Error::NotInvertible);
        }
        let one = self.ring.one();
        let y0 = inv_mod(self.coeffs[0] % p, p).expect("unit residue");
        let mut y = self.ring.from_int(y0 as i64);
        for _ in 0..64 {
            let xy = self.mul(&y)?;
            if xy.is_one() {
                return Ok(y);
            }
            y = y.mul(&one.scale(2).sub(&xy)?)?;
        }
        Err(Error::Invariant("Newton inversion did not converge".into()))
    }

    /// `v_pi(self - other) >= k`; refuses to answer past the known precision.
    pub fn congruent_mod_pi(&self, other: &Self, k: u64) -> Result<bool> {
        let diff = self.sub(other)?;
        if k > diff.cap() {
            return Err(Error::InsufficientPrecision { wanted: k, cap: diff.cap() });
        }
        Ok(diff.valuation().is_at_least(k))
    }

    /// `x^(p-1)`, which is `= 1 mod pi` for every unit.
    pub fn normalize(&self) -> Result<Self> {
        if self.coeffs[0] % self.p() == 0 {
            return Err(Error::NotInvertible);
        }
        Ok(self.pow(self.p() - 1))
    }

    /// Exact quotient by `lambda^k`.
    ///
    /// Each division by `lambda` can lose one `pi`-level of information, so
    /// the result is returned at precision `a - ceil(k / (p-1))`.
    pub fn divide_by_lambda(&self, k: u64) -> Result<Self> {
        let v = self.valuation();
        if !v.is_at_least(k) {
            return Err(Error::InexactDivision {
                valuation: v.exact().unwrap_or(0),
                wanted: k,
            });
        }
        let n = self.ring.degree() as u64;
        let lost = k.div_ceil(n) as u32;
        if lost >= self.precision() {
            return Err(Error::InsufficientPrecision { wanted: k, cap: self.cap() });
        }
        let p = self.p();
        let m = self.ring.modulus();
        let q = self.ring.p_over_lambda();
        let mut b = self.coeffs.clone();
        for _ in 0..k {
            // b = p c + lambda rest  =>  b / lambda = c (p / lambda) + rest
            debug_assert_eq!(b[0] % p, 0);
            let c = b[0] / p;
            b.remove(0);
            b.push(0);
            for (bi, &qi) in b.iter_mut().zip(&q) {
                *bi = add_mod(*bi, mul_mod(c, qi, m), m);
            }
        }
        CycloElem::from_raw(self.ring.clone(), b).with_precision(self.precision() - lost)
    }

    /// Text form: a `p a` header line, then the `p - 1` coefficients.
    pub fn to_text(&self) -> String {
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{} {}\n{}\n", self.p(), self.precision(), coeffs.join(" "))
    }

    /// Parses [`CycloElem::to_text`] output; blank lines and `#` lines are
    /// skipped, coefficients may be negative.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .flat_map(str::split_whitespace);
        let mut next_num = |what: &str| -> Result<i128> {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?;
            tok.parse::<i128>()
                .map_err(|e| Error::Parse(format!("bad {what} {tok:?}: {e}")))
        };
        let p = next_num("prime")?;
        let a = next_num("precision")?;
        if p <= 2 || a <= 0 || a > 64 {
            return Err(Error::Parse(format!("bad header {p} {a}")));
        }
        let ring = LambdaRing::new(p as u64, a as u32)?;
        let mut coeffs = Vec::with_capacity(ring.degree());
        for k in 0..ring.degree() {
            coeffs.push(reduce_signed(next_num(&format!("coefficient {k}"))?, ring.modulus()));
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing data after coefficients".into()));
        }
        Ok(CycloElem::from_raw(ring, coeffs))
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrobeniusWitness {
    pub valuation: Valuation,
    pub holds: bool,
}

/// Measures `v_pi(alpha^p - beta^p)` for a unit `alpha = beta mod pi`; the
/// expected law is `>= p + 1`.
pub fn frobenius_power_check(alpha: &CycloElem, beta: &CycloElem) -> Result<FrobeniusWitness> {
    let p = alpha.p();
    if alpha.coeffs()[0] % p == 0 {
        return invalid("alpha must be a unit");
    }
    let (alpha, beta) = alpha.align(beta)?;
    if alpha.cap() < p + 1 {
        return invalid("need precision a >= 2 to see pi^(p+1)");
    }
    if !alpha.congruent_mod_pi(&beta, 1)? {
        return invalid("alpha and beta differ modulo pi");
    }
    let diff = alpha.pow(p).sub(&beta.pow(p))?;
    let valuation = diff.valuation();
    Ok(FrobeniusWitness { valuation, holds: valuation.is_at_least(p + 1) })
}

use std::fmt;

use crate::arith::{add_mod, inv_mod, mul_mod, neg_mod, sub_mod};
use crate::error::{invalid, Error, Result};

/// Dense polynomial over `F_p`, lowest degree first.
///
/// The zero polynomial has an empty coefficient vector; every other
/// polynomial has a nonzero leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let mut poly = FpPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    /// From signed coefficients, handy for writing `X^2 - 4` as `[-4, 0, 1]`.
    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        Self::new(
            p,
            coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64),
        )
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, [1])
    }

    /// `X - root`.
    pub fn linear(p: u64, root: u64) -> Self {
        Self::new(p, [neg_mod(root % p, p), 1])
    }

    /// `c X^k`.
    pub fn monomial(p: u64, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(p, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn same_modulus(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return invalid(format!("modulus mismatch: {} vs {}", self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            self.p,
            (0..n).map(|k| add_mod(self.coeff(k), other.coeff(k), self.p)),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            self.p,
            (0..n).map(|k| sub_mod(self.coeff(k), other.coeff(k), self.p)),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.p));
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, self.p), self.p);
            }
        }
        Ok(Self::new(self.p, out))
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)))
    }

    /// Euclidean division: `self = divisor * q + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_modulus(divisor)?;
        let Some(dd) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let p = self.p;
        let lead_inv = inv_mod(divisor.leading(), p).expect("nonzero residue mod a prime");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(p), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = mul_mod(rem[k], lead_inv, p);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = sub_mod(rem[idx], mul_mod(c, b, p), p);
            }
        }
        rem.truncate(dd);
        Ok((Self::new(p, quot), Self::new(p, rem)))
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.divrem(self)?.1.is_zero())
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    /// `self(X^d)`.
    pub fn compose_power(&self, d: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; (self.coeffs.len() - 1) * d + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * d] = c;
        }
        Self::new(self.p, coeffs)
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[p={}]({})", self.p, self)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("X")?,
                (1, c) => write!(f, "{c}X")?,
                (k, 1) => write!(f, "X^{k}")?,
                (k, c) => write!(f, "{c}X^{k}")?,
            }
        }
        Ok(())
    }
}

/// Monic polynomial `prod (X - r)` over the given distinct roots.
pub fn poly_from_roots(p: u64, roots: &[u64]) -> Result<FpPoly> {
    let mut seen = std::collections::HashSet::new();
    let mut acc = FpPoly::one(p);
    for &r in roots {
        if r == 0 || r >= p {
            return invalid(format!("root {r} is not in [1, {p})"));
        }
        if !seen.insert(r) {
            return invalid(format!("duplicate root {r}"));
        }
        acc = acc.mul(&FpPoly::linear(p, r))?;
    }
    Ok(acc)
}

//! Residue arithmetic on machine words.
//!
//! Moduli stay below 2^63 so that any product fits in a `u128`.

use crate::error::{invalid, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Odd primes in `[lo, hi]`, ascending.
pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&n| is_prime(n)).collect()
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return invalid(format!("{p} is not an odd prime"));
    }
    Ok(())
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, when `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_signed(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// p-adic valuation of a nonzero `x`.
pub fn v_p(mut x: u64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// `p^a`, or `None` when it would not leave headroom for `u128` products.
pub fn checked_prime_power(p: u64, a: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..a {
        acc = acc.checked_mul(p)?;
    }
    (acc < 1 << 62).then_some(acc)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Multiplicative order of `a` modulo the prime `p`.
pub fn order_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    divisors(p - 1)
        .into_iter()
        .find(|&d| pow_mod(a, d, p) == 1)
        .expect("p - 1 is always a multiple of the order")
}

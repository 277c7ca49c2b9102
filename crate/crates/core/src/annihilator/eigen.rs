use serde::Serialize;

use crate::arith::{check_odd_prime, order_mod, pow_mod};
use crate::error::{invalid, Error, ExclusionRule, Result};

/// Smallest positive primitive root modulo the odd prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    Ok((2..p)
        .find(|&g| order_mod(g, p) == p - 1)
        .expect("the multiplicative group of a prime field is cyclic"))
}

/// Powers `u_i = u^i mod p` for `i = 0..p-2` together with their discrete logs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerTable {
    p: u64,
    u: u64,
    powers: Vec<u64>,
    logs: Vec<u32>,
}

impl PowerTable {
    pub fn new(p: u64, u: u64) -> Result<Self> {
        check_odd_prime(p)?;
        let u = u % p;
        if u == 0 || order_mod(u, p) != p - 1 {
            return invalid(format!("{u} is not a primitive root mod {p}"));
        }
        let n = (p - 1) as usize;
        let mut powers = Vec::with_capacity(n);
        let mut logs = vec![0u32; p as usize];
        let mut x = 1;
        for i in 0..n {
            powers.push(x);
            logs[x as usize] = i as u32;
            x = x * u % p;
        }
        Ok(PowerTable { p, u, powers, logs })
    }

    /// Table for the smallest primitive root.
    pub fn for_prime(p: u64) -> Result<Self> {
        Self::new(p, primitive_root(p)?)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    /// `(u_0, ..., u_{p-2})`.
    pub fn powers(&self) -> &[u64] {
        &self.powers
    }

    /// `u_i` for any integer `i`; negative indices give inverses.
    pub fn get(&self, i: i64) -> u64 {
        self.powers[i.rem_euclid(self.p as i64 - 1) as usize]
    }

    /// Discrete log base `u` of a nonzero residue, in `[0, p-2]`.
    pub fn log(&self, x: u64) -> Option<u32> {
        let x = x % self.p;
        (x != 0).then(|| self.logs[x as usize])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Eigen {
    pub mu: u64,
    /// Discrete log: `mu = u^m mod p`.
    pub m: u32,
}

/// A set of distinct eigenvalues `mu` in `F_p^*` with their discrete logs.
///
/// Members are kept sorted by `mu`. Synthetic models that need repeated
/// eigenvalues can record multiplicities; the set itself stays deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenSet {
    pub p: u64,
    pub u: u64,
    members: Vec<Eigen>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicities: Option<Vec<u32>>,
}

impl EigenSet {
    /// Rejects out-of-range residues and duplicates.
    pub fn new(table: &PowerTable, residues: &[u64]) -> Result<Self> {
        let mut members = Vec::with_capacity(residues.len());
        for &mu in residues {
            let m = table.log(mu).filter(|_| mu < table.p()).ok_or(Error::Rejected {
                mu,
                rule: ExclusionRule::OutOfRange,
            })?;
            members.push(Eigen { mu, m });
        }
        members.sort();
        if let Some(w) = members.windows(2).find(|w| w[0].mu == w[1].mu) {
            return Err(Error::Rejected {
                mu: w[0].mu,
                rule: ExclusionRule::Duplicate,
            });
        }
        Ok(EigenSet {
            p: table.p(),
            u: table.u(),
            members,
            multiplicities: None,
        })
    }

    /// Collapses repeated residues, remembering how often each occurred.
    pub fn from_multiset(table: &PowerTable, residues: &[u64]) -> Result<Self> {
        let mut sorted = residues.to_vec();
        sorted.sort_unstable();
        let mut distinct = Vec::new();
        let mut counts = Vec::new();
        for mu in sorted {
            if distinct.last() == Some(&mu) {
                *counts.last_mut().unwrap() += 1;
            } else {
                distinct.push(mu);
                counts.push(1);
            }
        }
        let mut set = Self::new(table, &distinct)?;
        set.multiplicities = Some(counts);
        Ok(set)
    }

    /// Members given by their discrete logs; duplicates collapse.
    pub(crate) fn from_logs(p: u64, u: u64, logs: impl IntoIterator<Item = u32>) -> Self {
        let mut members: Vec<Eigen> = logs
            .into_iter()
            .map(|m| {
                let m = m % (p - 1) as u32;
                Eigen { mu: pow_mod(u, m as u64, p), m }
            })
            .collect();
        members.sort();
        members.dedup();
        EigenSet { p, u, members, multiplicities: None }
    }

    pub fn empty(table: &PowerTable) -> Self {
        EigenSet {
            p: table.p(),
            u: table.u(),
            members: vec![],
            multiplicities: None,
        }
    }

    pub fn members(&self) -> &[Eigen] {
        &self.members
    }

    pub fn residues(&self) -> Vec<u64> {
        self.members.iter().map(|e| e.mu).collect()
    }

    pub fn multiplicities(&self) -> Option<&[u32]> {
        self.multiplicities.as_deref()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mu: u64) -> bool {
        self.members.binary_search_by_key(&mu, |e| e.mu).is_ok()
    }

    /// Recomputes every `u^m` and checks the sort/dedup invariants.
    pub fn is_consistent(&self) -> bool {
        self.members.iter().all(|e| pow_mod(self.u, e.m as u64, self.p) == e.mu)
            && self.members.windows(2).all(|w| w[0].mu < w[1].mu)
            && self.members.len() < self.p as usize
    }
}

/// Which exclusions [`validate_eigenvalue_set`] enforces.
///
/// `mu != u` comes from the Stickelberger element and holds unconditionally
/// for the full class group. `mu != 1` and `mu != -1` rest on `p` not
/// dividing the class numbers of the intermediate fields, which is only
/// known for `d <= 2`. The even-character rule is Vandiver's conjecture
/// restated on eigenvalues and is off by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationOptions {
    pub mu_equals_u: bool,
    pub mu_equals_one: bool,
    pub mu_equals_minus_one: bool,
    pub even_character: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            mu_equals_u: true,
            mu_equals_one: true,
            mu_equals_minus_one: true,
            even_character: false,
        }
    }
}

impl ValidationOptions {
    pub fn all() -> Self {
        ValidationOptions {
            even_character: true,
            ..Self::default()
        }
    }
}

pub fn validate_eigenvalue_set(
    table: &PowerTable,
    residues: &[u64],
    opts: ValidationOptions,
) -> Result<EigenSet> {
    let p = table.p();
    for &mu in residues {
        let rule = if mu == 0 || mu >= p {
            Some(ExclusionRule::OutOfRange)
        } else if opts.mu_equals_one && mu == 1 {
            Some(ExclusionRule::MuEqualsOne)
        } else if opts.mu_equals_u && mu == table.u() {
            Some(ExclusionRule::MuEqualsU)
        } else if opts.mu_equals_minus_one && mu == p - 1 {
            Some(ExclusionRule::MuEqualsMinusOne)
        } else if opts.even_character && pow_mod(mu, (p - 1) / 2, p) == 1 {
            Some(ExclusionRule::EvenCharacter)
        } else {
            None
        };
        if let Some(rule) = rule {
            return Err(Error::Rejected { mu, rule });
        }
    }
    EigenSet::new(table, residues)
}

/// Splits by the parity of the discrete log: odd goes to the minus part.
pub fn minus_plus_split(set: &EigenSet) -> (EigenSet, EigenSet) {
    let (minus, plus): (Vec<Eigen>, Vec<Eigen>) =
        set.members.iter().partition(|e| e.m % 2 == 1);
    let make = |members| EigenSet {
        p: set.p,
        u: set.u,
        members,
        multiplicities: None,
    };
    (make(minus), make(plus))
}

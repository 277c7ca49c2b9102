use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::annihilator::PowerTable;
use crate::arith::{inv_mod, mul_mod, neg_mod, sub_mod};
use crate::error::{invalid, Error, Result};
use crate::lambda::{CycloElem, LambdaRing, Valuation, ZetaPoly};

use super::eigen_defect;

/// Coefficient precision used for synthesized candidates.
pub const DEFAULT_PRECISION: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Formula,
    Recurrence,
    EigenSolver,
}

impl Provenance {
    pub fn id(self) -> &'static str {
        match self {
            Provenance::Formula => "formula",
            Provenance::Recurrence => "recurrence",
            Provenance::EigenSolver => "eigen-solver",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(Provenance::Formula),
            "recurrence" => Ok(Provenance::Recurrence),
            "eigen-solver" => Ok(Provenance::EigenSolver),
            _ => Err(Error::Parse(format!("unknown provenance {s:?}"))),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A unit `C = 1 mod pi` with `sigma(C) = C^mu mod pi^K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularCandidate {
    pub p: u64,
    pub u: u64,
    pub mu: u64,
    /// Exponent with `mu = u^m`.
    pub m: u64,
    pub element: CycloElem,
    pub gamma_p3: Option<u64>,
    pub provenance: Provenance,
    /// The `K` of the eigen-congruence, re-checked on construction.
    pub verified_precision: u64,
}

impl SingularCandidate {
    pub fn new(
        table: &PowerTable,
        mu: u64,
        element: CycloElem,
        provenance: Provenance,
        verified_precision: u64,
        gamma_p3: Option<u64>,
    ) -> Result<Self> {
        let p = table.p();
        if element.p() != p {
            return invalid("element and power table are for different primes");
        }
        let m = table
            .log(mu)
            .ok_or_else(|| Error::OutOfRange(format!("eigenvalue {mu} modulo {p}")))?
            as u64;
        if !element.congruent_mod_pi(&element.ring().one(), 1)? {
            return invalid("candidate is not 1 mod pi");
        }
        if verified_precision > element.cap() {
            return Err(Error::InsufficientPrecision {
                wanted: verified_precision,
                cap: element.cap(),
            });
        }
        if !eigen_defect(&element, table.u(), mu)?.is_at_least(verified_precision) {
            return invalid(format!(
                "sigma(C) = C^{mu} fails modulo pi^{verified_precision}"
            ));
        }
        Ok(SingularCandidate {
            p,
            u: table.u(),
            mu,
            m,
            element,
            gamma_p3,
            provenance,
            verified_precision,
        })
    }

    /// `v_pi(C - 1)`.
    pub fn nu(&self) -> Valuation {
        self.element.add_int(-1).valuation()
    }

    /// Metadata lines followed by the element's text form.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# mu {}\n# m {}\n# provenance {}\n# verified {}\n",
            self.mu, self.m, self.provenance, self.verified_precision
        );
        if let Some(g) = self.gamma_p3 {
            out.push_str(&format!("# gamma {g}\n"));
        }
        out.push_str(&self.element.to_text());
        out
    }

    /// Reads [`SingularCandidate::to_text`] output; the eigen-congruence is
    /// re-verified rather than trusted.
    pub fn parse_text(text: &str) -> Result<Self> {
        let (mut mu, mut provenance, mut verified, mut gamma) = (None, None, None, None);
        for line in text.lines().map(str::trim) {
            let Some(meta) = line.strip_prefix('#') else { continue };
            let mut parts = meta.split_whitespace();
            let (Some(key), Some(value)) = (parts.next(), parts.next()) else { continue };
            let num = || {
                value
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad {key} {value:?}: {e}")))
            };
            match key {
                "mu" => mu = Some(num()?),
                "verified" => verified = Some(num()?),
                "gamma" => gamma = Some(num()?),
                "provenance" => provenance = Some(Provenance::parse(value)?),
                _ => {}
            }
        }
        let element = CycloElem::parse_text(text)?;
        let missing = |k: &str| Error::Parse(format!("missing `# {k}` line"));
        let table = PowerTable::for_prime(element.p())?;
        Self::new(
            &table,
            mu.ok_or_else(|| missing("mu"))?,
            element,
            provenance.ok_or_else(|| missing("provenance"))?,
            verified.ok_or_else(|| missing("verified"))?,
            gamma,
        )
    }
}

fn check_exponent(p: u64, k: u64) -> Result<()> {
    if 2 * k <= p - 1 || k > p - 2 {
        return Err(Error::OutOfRange(format!(
            "exponent {k} for p = {p} (need (p-1)/2 < k <= p-2)"
        )));
    }
    Ok(())
}

fn check_gamma(p: u64, gamma: u64) -> Result<()> {
    if gamma >= p {
        return invalid(format!("gamma must lie in [0, {p})"));
    }
    Ok(())
}

/// `C = 1 + gamma mu^-1/(mu - 1) sum_{j=0}^{p-2} mu^-j zeta^(u^j)` with
/// `mu = u^k`, for any exponent `(p-1)/2 < k <= p-2`.
///
/// The sum `S` satisfies `sigma(S) = mu S` exactly modulo `p`, and
/// `v_pi(S) = k`, so the quadratic terms of `(1 + cS)^mu` vanish modulo
/// `pi^(p-1)`. Odd `k` gives minus-part singular candidates; even `k` gives
/// the analogous unit congruence.
pub fn synthesize_with_exponent(
    ring: &Arc<LambdaRing>,
    table: &PowerTable,
    k: u64,
    gamma: u64,
) -> Result<SingularCandidate> {
    let p = table.p();
    check_exponent(p, k)?;
    check_gamma(p, gamma)?;
    let mu = table.get(k as i64);
    let mu_inv = inv_mod(mu, p).expect("mu is a unit");
    let scale = mul_mod(
        mul_mod(gamma, mu_inv, p),
        inv_mod(sub_mod(mu, 1, p), p).expect("mu != 1"),
        p,
    );
    let mut coeffs = vec![0i64; p as usize];
    coeffs[0] = 1;
    let mut c = scale;
    for j in 0..p - 1 {
        coeffs[table.get(j as i64) as usize] = c as i64;
        c = mul_mod(c, mu_inv, p);
    }
    let element = ZetaPoly::from_signed(ring, &coeffs)?.to_lambda();
    finish_synthesis(table, mu, k, gamma, element, Provenance::Formula)
}

fn finish_synthesis(
    table: &PowerTable,
    mu: u64,
    k: u64,
    gamma: u64,
    element: CycloElem,
    provenance: Provenance,
) -> Result<SingularCandidate> {
    let p = table.p();
    let cand = SingularCandidate::new(table, mu, element, provenance, p - 1, Some(gamma))
        .map_err(|e| Error::Invariant(format!("synthesized candidate rejected: {e}")))?;
    let nu = cand.nu();
    let expected = if gamma == 0 { nu.is_at_least(cand.element.cap()) } else { nu == Valuation::Exact(k) };
    if !expected {
        return Err(Error::Invariant(format!(
            "synthesized candidate at p = {p}, exponent {k} has {nu}"
        )));
    }
    Ok(cand)
}

/// The closed form for the minus-part eigenvalue `mu = u^(2m+1)`, built at
/// [`DEFAULT_PRECISION`].
pub fn synthesize_closed_form(table: &PowerTable, m: u64, gamma: u64) -> Result<SingularCandidate> {
    let ring = LambdaRing::new(table.p(), DEFAULT_PRECISION)?;
    synthesize_with_exponent(&ring, table, 2 * m + 1, gamma)
}

/// Coefficients of `C - 1 = gamma + sum_{j<=p-3} gamma_j zeta^(u^j)` obtained by
/// comparing coefficients in `sigma(C - 1) = mu (C - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaRecord {
    pub p: u64,
    pub u: u64,
    pub mu: u64,
    pub exponent: u64,
    pub gamma_p3: u64,
    pub gamma: u64,
    /// `gamma_0, ..., gamma_{p-4}`.
    pub gammas: Vec<u64>,
    /// The last comparison `gamma_{p-4} - gamma_{p-3} = mu gamma_{p-3}`,
    /// which the recurrence does not use.
    pub closes: bool,
}

impl GammaRecord {
    /// `1 + gamma + sum_{j<=p-3} gamma_j zeta^(u^j)` in the given ring.
    pub fn assemble(&self, ring: &Arc<LambdaRing>, table: &PowerTable) -> Result<CycloElem> {
        let mut coeffs = vec![0i64; self.p as usize];
        coeffs[0] = ((1 + self.gamma) % self.p) as i64;
        for (j, &g) in self.gammas.iter().chain(std::iter::once(&self.gamma_p3)).enumerate() {
            coeffs[table.get(j as i64) as usize] = g as i64;
        }
        Ok(ZetaPoly::from_signed(ring, &coeffs)?.to_lambda())
    }
}

pub fn gamma_recurrence_with_exponent(table: &PowerTable, k: u64, gamma_p3: u64) -> Result<GammaRecord> {
    let p = table.p();
    check_exponent(p, k)?;
    check_gamma(p, gamma_p3)?;
    let mu = table.get(k as i64);
    let mu_inv = inv_mod(mu, p).expect("mu is a unit");
    let g = gamma_p3;
    // constant term: gamma - g = mu gamma
    let gamma = mul_mod(neg_mod(g, p), inv_mod(sub_mod(mu, 1, p), p).expect("mu != 1"), p);
    // zeta^(u^0): -g = mu gamma_0;  zeta^(u^j): gamma_{j-1} - g = mu gamma_j
    let mut gammas = Vec::with_capacity(p as usize - 3);
    let mut prev = 0;
    for _ in 0..p - 3 {
        prev = mul_mod(sub_mod(prev, g, p), mu_inv, p);
        gammas.push(prev);
    }
    let closes = sub_mod(prev, g, p) == mul_mod(mu, g, p);
    Ok(GammaRecord { p, u: table.u(), mu, exponent: k, gamma_p3, gamma, gammas, closes })
}

pub fn gamma_recurrence(table: &PowerTable, m: u64, gamma_p3: u64) -> Result<GammaRecord> {
    gamma_recurrence_with_exponent(table, 2 * m + 1, gamma_p3)
}

/// The recurrence assembled into a candidate (same checks as the formula).
pub fn recurrence_candidate(
    ring: &Arc<LambdaRing>,
    table: &PowerTable,
    k: u64,
    gamma_p3: u64,
) -> Result<SingularCandidate> {
    let rec = gamma_recurrence_with_exponent(table, k, gamma_p3)?;
    if !rec.closes {
        return Err(Error::Invariant(format!("recurrence does not close at p = {}", rec.p)));
    }
    let element = rec.assemble(ring, table)?;
    finish_synthesis(table, rec.mu, k, gamma_p3, element, Provenance::Recurrence)
}

/// `lambda`-coefficients reduced modulo `p`.
pub fn residues(x: &CycloElem) -> Vec<u64> {
    let p = x.p();
    x.coeffs().iter().map(|c| c % p).collect()
}

/// Coefficient-for-coefficient agreement modulo `p`.
pub fn forms_agree(a: &SingularCandidate, b: &SingularCandidate) -> bool {
    a.p == b.p && residues(&a.element) == residues(&b.element)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Primary,
    NotPrimary,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Primary => "primary",
            Classification::NotPrimary => "not-primary",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValuationAnalysis {
    pub nu: Valuation,
    pub classification: Classification,
    /// Whether `u^nu = mu` was checked (needs the congruence to `pi^(nu+1)`).
    pub law_checked: bool,
}

/// Measures `nu = v_pi(C - 1)` and classifies with threshold `p`.
///
/// Writing `C = 1 + c lambda^nu mod pi^(nu+1)`, `sigma(C) = 1 + c u^nu lambda^nu`
/// and `C^mu = 1 + mu c lambda^nu` there, so a non-primary candidate must have
/// `u^nu = mu mod p`; a breach is returned as [`Error::Violation`].
pub fn analyze_valuation(c: &SingularCandidate) -> Result<ValuationAnalysis> {
    let p = c.p;
    if !eigen_defect(&c.element, c.u, c.mu)?.is_at_least(c.verified_precision) {
        return invalid(format!("candidate fails sigma(C) = C^mu mod pi^{}", c.verified_precision));
    }
    let nu = c.nu();
    match nu {
        Valuation::Exact(v) if v < p => {
            let law_checked = v < c.verified_precision;
            if law_checked && crate::arith::pow_mod(c.u, v, p) != c.mu {
                return Err(Error::Violation(format!(
                    "p = {p}: v_pi(C - 1) = {v} but u^{v} != mu = {}",
                    c.mu
                )));
            }
            Ok(ValuationAnalysis { nu, classification: Classification::NotPrimary, law_checked })
        }
        Valuation::AtLeast(cap) if cap < p => {
            Err(Error::InsufficientPrecision { wanted: p, cap })
        }
        _ => Ok(ValuationAnalysis { nu, classification: Classification::Primary, law_checked: false }),
    }
}

/// The two primary thresholds in use: `pi^p` for singular numbers and
/// `pi^(p+1)` for units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimaryThreshold {
    SingularNumber,
    Unit,
}

impl PrimaryThreshold {
    pub fn value(self, p: u64) -> u64 {
        match self {
            PrimaryThreshold::SingularNumber => p,
            PrimaryThreshold::Unit => p + 1,
        }
    }
}

/// For `x = 1 mod pi`: is `x` congruent to a rational `p`-th power modulo
/// `pi^t`?
///
/// A rational `c` with `c^p = x = 1 mod pi` has `c = 1 mod p`, hence
/// `c^p = 1 mod p^2`, which is `0 mod pi^(p+1)` away from 1. So the question
/// is just `v_pi(x - 1) >= t`.
pub fn is_primary(x: &CycloElem, threshold: PrimaryThreshold) -> Result<bool> {
    let p = x.p();
    let v = x.add_int(-1).valuation();
    if !v.is_at_least(1) {
        return invalid("is_primary expects x = 1 mod pi");
    }
    let t = threshold.value(p);
    match v {
        Valuation::AtLeast(cap) if cap < t => Err(Error::InsufficientPrecision { wanted: t, cap }),
        _ => Ok(v.is_at_least(t)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub nu: Valuation,
    pub factor_nus: Vec<Valuation>,
    pub primary: bool,
    pub factors_primary: Vec<bool>,
    /// Minimum `nu_i` over the non-primary factors.
    pub expected_nu: Option<u64>,
    /// Product valuation equals `expected_nu`, and primary iff all factors are.
    pub consistent: bool,
}

/// `prod C_i^(alpha_i)` for candidates with pairwise distinct eigenvalues.
pub fn product_classification(cands: &[(&SingularCandidate, u64)]) -> Result<ProductReport> {
    let Some((first, _)) = cands.first() else {
        return invalid("empty product");
    };
    let p = first.p;
    let mut seen = Vec::new();
    for (c, alpha) in cands {
        if c.p != p {
            return invalid("candidates for different primes");
        }
        if *alpha == 0 || *alpha >= p {
            return invalid(format!("exponent {alpha} outside [1, {p})"));
        }
        if seen.contains(&c.mu) {
            return invalid(format!("eigenvalue {} repeated", c.mu));
        }
        seen.push(c.mu);
    }

    let mut acc = first.element.to_zeta().pow(0);
    for (c, alpha) in cands {
        acc = acc.mul(&c.element.to_zeta().pow(*alpha));
    }
    let product = acc.to_lambda();
    let threshold = PrimaryThreshold::SingularNumber;
    let primary = is_primary(&product, threshold)?;
    let nu = product.add_int(-1).valuation();

    let mut factor_nus = Vec::new();
    let mut factors_primary = Vec::new();
    for (c, _) in cands {
        factor_nus.push(c.nu());
        factors_primary.push(is_primary(&c.element, threshold)?);
    }
    let expected_nu = factor_nus
        .iter()
        .zip(&factors_primary)
        .filter(|(_, &prim)| !prim)
        .filter_map(|(v, _)| v.exact())
        .min();
    let consistent = primary == factors_primary.iter().all(|&b| b)
        && expected_nu.map_or(true, |e| nu == Valuation::Exact(e));
    Ok(ProductReport { nu, factor_nus, primary, factors_primary, expected_nu, consistent })
}

/// `C^n` with `n c_0 = 1 mod p`, where `c_0` is the leading `lambda`-coefficient
/// of `C - 1`; the result has leading coefficient 1.
pub fn normalize_leading(c: &CycloElem) -> Result<CycloElem> {
    let p = c.p();
    match c.add_int(-1).leading_term() {
        None => Ok(c.clone()),
        Some((0, _)) => invalid("expected an element = 1 mod pi"),
        Some((_, c0)) => Ok(c.pow(inv_mod(c0, p).expect("nonzero residue"))),
    }
}

/// `v_pi(C1 C2^-1 - 1)` after leading-coefficient normalization, for two
/// non-primary candidates sharing `mu`.
pub fn quotient_primary_check(c1: &SingularCandidate, c2: &SingularCandidate) -> Result<Valuation> {
    if c1.p != c2.p || c1.u != c2.u {
        return invalid("candidates for different (p, u)");
    }
    if c1.mu != c2.mu {
        return invalid(format!("eigenvalues differ: {} vs {}", c1.mu, c2.mu));
    }
    let need = c1.p + 1;
    for c in [c1, c2] {
        if c.verified_precision < need {
            return invalid(format!(
                "eigen-congruence known only modulo pi^{}, need pi^{need}",
                c.verified_precision
            ));
        }
        if !eigen_defect(&c.element, c.u, c.mu)?.is_at_least(need) {
            return invalid("eigen-congruence re-check failed");
        }
        if is_primary(&c.element, PrimaryThreshold::SingularNumber)? {
            return invalid("quotient law concerns non-primary candidates");
        }
    }
    let a = normalize_leading(&c1.element)?;
    let b = normalize_leading(&c2.element)?;
    Ok(a.mul(&b.invert()?)?.add_int(-1).valuation())
}

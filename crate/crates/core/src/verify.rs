//! Invariant suites run over a range of primes, with the first
//! counterexample of each suite kept for reporting.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::annihilator::{rank_inequality_report, stickelberger_element, EigenSet, PowerTable};
use crate::arith::{gcd, inv_mod, mul_mod, odd_primes_in, pow_mod, sub_mod};
use crate::bernoulli::{bernoulli_even_mod_p, irregular_indices, minus_eigenvalues_from_bernoulli};
use crate::error::Result;
use crate::lambda::{frobenius_power_check, CycloElem, LambdaRing};
use crate::singular::{
    analyze_valuation, eigen_space, forms_agree, product_classification, quotient_primary_check,
    recurrence_candidate, synthesize_with_exponent, Provenance, SingularCandidate,
};
use crate::units::{unit_survey, SurveyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Annihilator,
    Bernoulli,
    LambdaAdic,
    Singular,
    Units,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Annihilator, Suite::Bernoulli, Suite::LambdaAdic, Suite::Singular, Suite::Units];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Annihilator => "annihilator",
            Suite::Bernoulli => "bernoulli",
            Suite::LambdaAdic => "lambda-adic",
            Suite::Singular => "singular",
            Suite::Units => "units",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|x| x.id() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub suite: Suite,
    pub p: u64,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub checks: u64,
    pub failures: u64,
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub lo: u64,
    pub hi: u64,
    pub seed: u64,
    pub primes: Vec<u64>,
    pub suites: Vec<SuiteResult>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }

    pub fn total_checks(&self) -> u64 {
        self.suites.iter().map(|s| s.checks).sum()
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.suites.iter().find_map(|s| s.first_counterexample.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub suites: Vec<Suite>,
    pub seed: u64,
    /// Random samples per prime for the sampled properties.
    pub samples: usize,
    /// Run the lambda-adic suite against a ring with a wrong reduction
    /// constant; used to show the harness catches arithmetic faults.
    pub corrupt_reduction: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { suites: Suite::ALL.to_vec(), seed: 0, samples: 50, corrupt_reduction: false }
    }
}

struct Tally {
    suite: Suite,
    checks: u64,
    failures: u64,
    first: Option<Counterexample>,
}

impl Tally {
    fn new(suite: Suite) -> Self {
        Tally { suite, checks: 0, failures: 0, first: None }
    }

    fn check(&mut self, p: u64, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(Counterexample {
                    suite: self.suite,
                    p,
                    check: name.to_string(),
                    detail: detail(),
                });
            }
        }
    }

    // an error from the library counts as a failed check, never a crash
    fn check_result<T>(
        &mut self,
        p: u64,
        name: &str,
        r: Result<T>,
        ok: impl FnOnce(&T) -> bool,
        detail: impl FnOnce(&T) -> String,
    ) {
        match r {
            Ok(v) => {
                let passed = ok(&v);
                self.check(p, name, passed, || detail(&v));
            }
            Err(e) => self.check(p, name, false, || e.to_string()),
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            suite: self.suite,
            checks: self.checks,
            failures: self.failures,
            first_counterexample: self.first,
        }
    }
}

fn rng_for(seed: u64, suite: Suite, p: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ suite as u64)
}

pub fn random_elem(ring: &Arc<LambdaRing>, rng: &mut impl Rng) -> CycloElem {
    let m = ring.modulus() as i64;
    let coeffs: Vec<i64> = (0..ring.degree()).map(|_| rng.gen_range(0..m)).collect();
    ring.from_lambda_coeffs(&coeffs).expect("length p - 1")
}

pub fn run(lo: u64, hi: u64, opts: &VerifyOptions) -> VerifySummary {
    let primes = odd_primes_in(lo, hi);
    let mut suites = Vec::new();
    for &suite in &Suite::ALL {
        if !opts.suites.contains(&suite) {
            continue;
        }
        let mut t = Tally::new(suite);
        for &p in &primes {
            let mut rng = rng_for(opts.seed, suite, p);
            match suite {
                Suite::Annihilator => annihilator_suite(&mut t, p, &mut rng, opts.samples),
                Suite::Bernoulli => bernoulli_suite(&mut t, p),
                Suite::LambdaAdic => lambda_suite(&mut t, p, &mut rng, opts),
                Suite::Singular => singular_suite(&mut t, p, &mut rng),
                Suite::Units => units_suite(&mut t, p),
            }
        }
        suites.push(t.finish());
    }
    VerifySummary { lo, hi, seed: opts.seed, primes, suites }
}

fn annihilator_suite(t: &mut Tally, p: u64, rng: &mut ChaCha8Rng, samples: usize) {
    let table = match PowerTable::for_prime(p) {
        Ok(x) => x,
        Err(e) => return t.check(p, "power table", false, || e.to_string()),
    };
    let theta = stickelberger_element(&table);
    t.check_result(
        p,
        "stickelberger collapse",
        theta.eval_scalar(table.u()),
        |&v| v == p - 1,
        |v| format!("p theta at sigma = u gives {v}"),
    );
    let splits: Vec<(u64, u64)> = (1..=p - 1)
        .filter(|d| (p - 1) % d == 0 && gcd(*d, (p - 1) / d) == 1)
        .map(|d| (d, (p - 1) / d))
        .collect();
    for _ in 0..samples.min(20) {
        let size = rng.gen_range(1..=3.min(p as usize - 1));
        let mut residues: Vec<u64> = (0..size).map(|_| rng.gen_range(1..p)).collect();
        residues.sort_unstable();
        residues.dedup();
        let set = EigenSet::new(&table, &residues).expect("distinct residues in range");
        for &(d, g) in &splits {
            t.check_result(
                p,
                "rank inequalities",
                rank_inequality_report(&set, d, g),
                |r| r.all_pass(),
                |r| format!("{r:?}"),
            );
        }
    }
}

/// `(u^2k - 1) B_2k = 2k u^(2k-1) sum_a a^(2k-1) floor(u a / p) mod p`, independent of
/// the recurrence used by the library.
pub fn voronoi_bernoulli(p: u64, u: u64, k2: u64) -> u64 {
    let mut s = 0;
    for a in 1..p {
        let f = u * a / p;
        s = (s + mul_mod(pow_mod(a, k2 - 1, p), f % p, p)) % p;
    }
    let lhs = sub_mod(pow_mod(u, k2, p), 1, p);
    let rhs = mul_mod(mul_mod(k2 % p, pow_mod(u, k2 - 1, p), p), s, p);
    mul_mod(rhs, inv_mod(lhs, p).expect("u^2k != 1"), p)
}

fn bernoulli_suite(t: &mut Tally, p: u64) {
    let Ok(table) = PowerTable::for_prime(p) else { return };
    match bernoulli_even_mod_p(p) {
        Ok(map) => {
            for (&k2, &b) in &map {
                let oracle = voronoi_bernoulli(p, table.u(), k2);
                t.check(p, "B_2k against Voronoi congruence", b == oracle, || {
                    format!("2k = {k2}: recurrence {b}, oracle {oracle}")
                });
            }
        }
        Err(e) => t.check(p, "bernoulli residues", false, || e.to_string()),
    }
    let ip = irregular_indices(p).map(|v| v.len());
    let minus = minus_eigenvalues_from_bernoulli(&table).map(|s| s.len());
    t.check(p, "minus eigenvalue count = i_p", ip.is_ok() && ip == minus, || {
        format!("i_p {ip:?}, minus eigenvalues {minus:?}")
    });
}

fn lambda_suite(t: &mut Tally, p: u64, rng: &mut ChaCha8Rng, opts: &VerifyOptions) {
    let built = if opts.corrupt_reduction {
        LambdaRing::with_corrupted_reduction(p, 2)
    } else {
        LambdaRing::new(p, 2)
    };
    let ring = match built {
        Ok(r) => r,
        Err(e) => return t.check(p, "ring", false, || e.to_string()),
    };
    let Ok(table) = PowerTable::for_prime(p) else { return };
    let u = table.u();

    // lambda^(p-1) = -sum C(p, j) lambda^(j-1), binomials from Pascal's rule
    let mut row = vec![1u128; 1];
    for _ in 0..p {
        let mut next = vec![1u128; row.len() + 1];
        for j in 1..row.len() {
            next[j] = (row[j - 1] + row[j]) % ring.modulus() as u128;
        }
        row = next;
    }
    let expected: Vec<i64> = (1..p as usize).map(|j| -(row[j] as i64)).collect();
    let lhs = ring.lambda().pow(p - 1);
    t.check_result(
        p,
        "lambda^(p-1) reduction identity",
        ring.from_lambda_coeffs(&expected),
        |rhs| *rhs == lhs,
        |rhs| format!("computed {:?}, expected {:?}", lhs.coeffs(), rhs.coeffs()),
    );
    t.check(p, "zeta^p = 1", ring.zeta_pow(1).pow(p).is_one(), || "zeta^p != 1".into());

    for nu in 1..p - 1 {
        let x = ring.lambda_pow(nu as usize);
        t.check_result(
            p,
            "sigma(lambda^nu) = u^nu lambda^nu mod pi^(nu+1)",
            x.galois(u).and_then(|s| s.congruent_mod_pi(&x.scale(pow_mod(u, nu, p) as i64), nu + 1)),
            |&ok| ok,
            |_| format!("nu = {nu}"),
        );
    }

    for _ in 0..opts.samples {
        let x = random_elem(&ring, rng);
        let y = random_elem(&ring, rng);
        t.check(p, "basis round trip", x.to_zeta().to_lambda() == x, || format!("{x:?}"));
        let (vx, vy) = (x.valuation(), y.valuation());
        if let (Some(a), Some(b)) = (vx.exact(), vy.exact()) {
            if a + b < ring.cap() {
                let v = x.mul(&y).map(|z| z.valuation());
                t.check(p, "v(xy) = v(x) + v(y)", v == Ok(crate::lambda::Valuation::Exact(a + b)), || {
                    format!("{x:?} * {y:?}: {v:?}")
                });
            }
        }
        let j = rng.gen_range(0..p as i64 - 1);
        let morph = (|| -> Result<bool> {
            let lhs = x.mul(&y)?.sigma_pow(j, u)?;
            let rhs = x.sigma_pow(j, u)?.mul(&y.sigma_pow(j, u)?)?;
            let sum_l = x.add(&y)?.sigma_pow(j, u)?;
            let sum_r = x.sigma_pow(j, u)?.add(&y.sigma_pow(j, u)?)?;
            Ok(lhs == rhs && sum_l == sum_r)
        })();
        t.check_result(p, "sigma^j is a ring morphism", morph, |&ok| ok, |_| format!("j = {j}"));

        // alpha a unit, beta = alpha + lambda * random
        let alpha = x.add_int(if x.coeffs()[0] % p == 0 { 1 } else { 0 });
        let beta = alpha.add(&y.mul(&ring.lambda()).expect("same ring")).expect("same ring");
        t.check_result(
            p,
            "alpha^p = beta^p mod pi^(p+1)",
            frobenius_power_check(&alpha, &beta),
            |w| w.holds,
            |w| format!("measured {}", w.valuation),
        );
    }
}

fn singular_suite(t: &mut Tally, p: u64, rng: &mut ChaCha8Rng) {
    if p < 5 {
        return;
    }
    let (Ok(table), Ok(ring)) = (PowerTable::for_prime(p), LambdaRing::new(p, 2)) else { return };
    let mut sweep: Vec<SingularCandidate> = Vec::new();
    for k in ((p - 1) / 2 + 1..=p - 2).filter(|k| k % 2 == 1) {
        for gamma in [1u64, 2] {
            let f = synthesize_with_exponent(&ring, &table, k, gamma);
            let r = recurrence_candidate(&ring, &table, k, gamma);
            match (f, r) {
                (Ok(f), Ok(r)) => {
                    t.check(p, "closed form = recurrence", forms_agree(&f, &r), || format!("k = {k}"));
                    t.check_result(
                        p,
                        "valuation law",
                        analyze_valuation(&f),
                        |a| a.nu == crate::lambda::Valuation::Exact(k),
                        |a| format!("k = {k}: {}", a.nu),
                    );
                    if gamma == 1 {
                        sweep.push(f);
                    }
                }
                (Err(e), _) | (_, Err(e)) => t.check(p, "synthesis", false, || e.to_string()),
            }
        }
    }
    for i in 0..sweep.len() {
        for j in i + 1..sweep.len() {
            t.check_result(
                p,
                "product valuation = min",
                product_classification(&[(&sweep[i], 1), (&sweep[j], 2)]),
                |r| r.consistent,
                |r| format!("{r:?}"),
            );
        }
    }

    // same-mu quotients of eigen-solver candidates
    for k in ((p + 1) / 2..=p - 2).filter(|k| k % 2 == 1) {
        let mu = table.get(k as i64);
        let space = match eigen_space(&ring, &table, mu, p + 1) {
            Ok(s) => s,
            Err(e) => return t.check(p, "eigen solver", false, || e.to_string()),
        };
        // redraw the (probability 1/p) samples that are already primary
        let mut mk = || -> Result<SingularCandidate> {
            let mut last = None;
            for _ in 0..16 {
                let coeffs: Vec<i64> = space
                    .generators
                    .iter()
                    .map(|_| rng.gen_range(0..ring.modulus() as i64))
                    .collect();
                let v = space.combine(&coeffs)?;
                let c = SingularCandidate::new(&table, mu, v.add_int(1), Provenance::EigenSolver, p + 1, None)?;
                if c.nu().exact().is_some_and(|nu| nu < p) {
                    return Ok(c);
                }
                last = Some(c);
            }
            last.ok_or_else(|| crate::Error::Invariant("no candidate drawn".into()))
        };
        let pair = mk().and_then(|a| Ok((a, mk()?)));
        t.check_result(
            p,
            "same-mu quotient is primary",
            pair.and_then(|(a, b)| quotient_primary_check(&a, &b)),
            |v| v.is_at_least(p),
            |v| format!("k = {k}: {v}"),
        );
    }
}

fn units_suite(t: &mut Tally, p: u64) {
    if p < 5 {
        return;
    }
    t.check_result(
        p,
        "unit survey",
        unit_survey(p, &SurveyConfig::default()),
        |r| r.passed() && r.matches_bernoulli,
        |r| format!("primary {:?}, irregular {:?}, anomalies {:?}", r.primary_index_set, r.irregular_indices, r.anomalies),
    );
}

//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built with `harness = false` so the lines always print.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{oracle_irregular, smallest_primitive_root, NaiveRing};
use cyclocong::annihilator::{
    induced_min_poly, rank_inequality_report, stickelberger_element, EigenSet, PowerTable,
};
use cyclocong::arith::odd_primes_in;
use cyclocong::bernoulli::{minus_eigenvalues_from_bernoulli, IrregularityReport};
use cyclocong::lambda::frobenius_power_check;
use cyclocong::singular::{
    eigen_space, forms_agree, gamma_recurrence, product_classification, quotient_primary_check,
    recurrence_candidate, synthesize_closed_form, Provenance, SingularCandidate,
};
use cyclocong::units::{unit_survey, SurveyConfig};
use cyclocong::{CycloElem, LambdaRing, Valuation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), note: String::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn criterion(id: u32, title: &str, limit: Option<Duration>, body: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    body(&mut out);
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        out.expect(elapsed < limit, || format!("runtime {elapsed:.2?} exceeds {limit:?}"));
    }
    let ok = out.failures.is_empty();
    println!(
        "criterion {id}: {} - {title} ({elapsed:.2?}){}{}",
        if ok { "PASS" } else { "FAIL" },
        if out.note.is_empty() { String::new() } else { format!(" [{}]", out.note) },
        if ok {
            String::new()
        } else {
            format!(" first failure: {} ({} total)", out.failures[0], out.failures.len())
        }
    );
    ok
}

fn c1_irregular_tables(out: &mut Outcome) {
    let classical: &[(u64, &[u64])] = &[
        (37, &[32]),
        (59, &[44]),
        (67, &[58]),
        (101, &[68]),
        (103, &[24]),
        (131, &[22]),
        (149, &[130]),
        (157, &[62, 110]),
    ];
    let mut irregular_primes = 0;
    for p in odd_primes_in(3, 299) {
        let report = match IrregularityReport::compute(p) {
            Ok(r) => r,
            Err(e) => return out.expect(false, || format!("p = {p}: {e}")),
        };
        let oracle = oracle_irregular(p);
        out.expect(report.irregular_indices == oracle, || {
            format!("p = {p}: library {:?}, oracle {oracle:?}", report.irregular_indices)
        });
        if let Some((_, idx)) = classical.iter().find(|(q, _)| *q == p) {
            out.expect(report.irregular_indices == *idx, || format!("p = {p}: classical pair {idx:?}"));
        }
        irregular_primes += usize::from(!oracle.is_empty());
    }
    for (p, _) in classical {
        out.expect(!oracle_irregular(*p).is_empty(), || format!("oracle misses p = {p}"));
    }
    out.note = format!("{irregular_primes} irregular primes below 300");
}

fn c2_ribet_bridge(out: &mut Outcome) {
    for p in odd_primes_in(3, 299) {
        let table = PowerTable::for_prime(p).unwrap();
        let minus = minus_eigenvalues_from_bernoulli(&table).unwrap();
        let i_p = oracle_irregular(p).len();
        out.expect(minus.len() == i_p, || format!("p = {p}: {} eigenvalues, i_p = {i_p}", minus.len()));
        for e in minus.members() {
            out.expect(e.m % 2 == 1, || format!("p = {p}: even exponent {}", e.m));
        }
    }
}

fn brute_rank(p: u64, set: &[u64], d: u64) -> usize {
    let mut powers: Vec<u64> = set.iter().map(|&mu| common::pow_mod(mu, d, p)).collect();
    powers.sort_unstable();
    powers.dedup();
    powers.len()
}

fn c3_annihilator_laws(out: &mut Outcome) {
    let mut cases = 0u64;
    for p in [5u64, 7, 13] {
        let table = PowerTable::for_prime(p).unwrap();
        let n = p - 1;
        let splits: Vec<(u64, u64)> =
            (1..=n).filter(|d| n % d == 0 && common_gcd(*d, n / d) == 1).map(|d| (d, n / d)).collect();
        let residues: Vec<u64> = (1..p).collect();
        let mut sets: Vec<Vec<u64>> = Vec::new();
        for i in 0..residues.len() {
            sets.push(vec![residues[i]]);
            for j in i + 1..residues.len() {
                sets.push(vec![residues[i], residues[j]]);
                for k in j + 1..residues.len() {
                    sets.push(vec![residues[i], residues[j], residues[k]]);
                }
            }
        }
        for s in &sets {
            let set = EigenSet::new(&table, s).unwrap();
            let r1 = s.len();
            for &(d, g) in &splits {
                let (rd, rg) = (brute_rank(p, s, d), brute_rank(p, s, g));
                cases += 1;
                out.expect(rd <= r1 && r1 <= d as usize * rd, || format!("p={p} M={s:?} d={d}: tower"));
                out.expect(rd * rg >= r1, || format!("p={p} M={s:?} ({d},{g}): product"));
                out.expect(rd != 1 || rg == r1, || format!("p={p} M={s:?} ({d},{g}): r_d = 1"));
                match rank_inequality_report(&set, d, g) {
                    Ok(prof) => {
                        out.expect(prof.r_d == rd && prof.r_g == rg && prof.r_1 == r1, || {
                            format!("p={p} M={s:?} ({d},{g}): library ranks {prof:?}")
                        });
                        out.expect(prof.all_pass(), || format!("p={p} M={s:?}: {prof:?}"));
                    }
                    Err(e) => out.expect(false, || format!("p={p} M={s:?}: {e}")),
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..1000 {
        let p = [13u64, 29, 61][i % 3];
        let table = PowerTable::for_prime(p).unwrap();
        let divs: Vec<u64> = (1..p).filter(|d| (p - 1) % d == 0).collect();
        let d = divs[rng.gen_range(0..divs.len())];
        let size = rng.gen_range(1..=6);
        let mut s: Vec<u64> = (0..size).map(|_| rng.gen_range(1..p)).collect();
        s.sort_unstable();
        s.dedup();
        let set = EigenSet::new(&table, &s).unwrap();
        match induced_min_poly(&set, d) {
            Ok(q) => {
                // P_r1 has the distinct roots M, so divisibility is vanishing on M
                let vanishes = s.iter().all(|&mu| q.eval(mu) == 0);
                let degree_ok = q.degree() == Some(d as usize * brute_rank(p, &s, d));
                out.expect(vanishes && degree_ok, || format!("p={p} M={s:?} d={d}: {q}"));
            }
            Err(e) => out.expect(false, || format!("p={p} M={s:?} d={d}: {e}")),
        }
    }
    out.note = format!("{cases} exhaustive cases + 1000 divisibility samples");
}

fn common_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        common_gcd(b, a % b)
    }
}

fn c4_stickelberger(out: &mut Outcome) {
    for p in odd_primes_in(3, 299) {
        let table = PowerTable::for_prime(p).unwrap();
        let u = table.u();
        out.expect(u == smallest_primitive_root(p), || format!("p = {p}: u = {u}"));
        let theta = stickelberger_element(&table);
        out.expect(theta.eval_scalar(u) == Ok(p - 1), || format!("p = {p}: {:?}", theta.eval_scalar(u)));
        // recompute from the coefficients: sum_j c_j u^j
        let direct = theta
            .coeffs()
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &c)| (acc + c * common::pow_mod(u, j as u64, p)) % p);
        out.expect(direct == p - 1, || format!("p = {p}: direct sum {direct}"));
    }
}

fn random_elem(ring: &std::sync::Arc<LambdaRing>, rng: &mut ChaCha8Rng) -> CycloElem {
    let m = ring.modulus() as i64;
    let c: Vec<i64> = (0..ring.degree()).map(|_| rng.gen_range(0..m)).collect();
    ring.from_lambda_coeffs(&c).unwrap()
}

fn c5_frobenius(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut samples = 0;
    for p in [5u64, 7, 11, 13] {
        let ring = LambdaRing::new(p, 2).unwrap();
        let naive = NaiveRing::new(p, 2);
        for _ in 0..500 {
            let mut alpha = random_elem(&ring, &mut rng);
            if alpha.coeffs()[0] % p == 0 {
                alpha = alpha.add_int(1);
            }
            let t = random_elem(&ring, &mut rng);
            let beta = alpha.add(&t.mul(&ring.lambda()).unwrap()).unwrap();
            samples += 1;
            let w = frobenius_power_check(&alpha, &beta);
            out.expect(w.as_ref().is_ok_and(|w| w.holds), || format!("p = {p}: {w:?}"));
            let (a, b) = (alpha.coeffs().to_vec(), beta.coeffs().to_vec());
            let diff = naive.sub(&naive.pow(&a, p), &naive.pow(&b, p));
            let v = naive.valuation(&diff);
            out.expect(v.map_or(true, |v| v >= p + 1), || format!("p = {p}: oracle valuation {v:?}"));
        }
    }
    out.note = format!("{samples} samples");
}

fn c6_eigen_monomial(out: &mut Outcome) {
    for p in odd_primes_in(3, 99) {
        let table = PowerTable::for_prime(p).unwrap();
        let u = table.u();
        let ring = LambdaRing::new(p, 2).unwrap();
        let naive = NaiveRing::new(p, 2);
        let sigma_lambda = naive.sub(&naive.zeta_pow(u), &naive.int(1));
        let mut oracle_pow = naive.int(1);
        for nu in 1..p - 1 {
            oracle_pow = naive.mul(&oracle_pow, &sigma_lambda);
            let x = ring.lambda_pow(nu as usize);
            let lhs = x.galois(u).unwrap();
            out.expect(lhs.coeffs() == &oracle_pow[..], || format!("p = {p}, nu = {nu}: sigma differs from oracle"));
            let rhs = x.scale(common::pow_mod(u, nu, p) as i64);
            out.expect(lhs.congruent_mod_pi(&rhs, nu + 1) == Ok(true), || format!("p = {p}, nu = {nu}"));
            let d = naive.sub(&oracle_pow, &naive.scale(&naive.lambda_pow(nu as usize), common::pow_mod(u, nu, p)));
            out.expect(naive.valuation(&d).map_or(true, |v| v >= nu + 1), || format!("oracle p = {p}, nu = {nu}"));
        }
    }
}

/// Closed form rebuilt independently: `1 + g mu^-1/(mu-1) sum mu^-j zeta^(u^j)`.
fn oracle_closed_form(naive: &NaiveRing, p: u64, u: u64, k: u64, g: u64) -> (u64, Vec<u64>) {
    let mu = common::pow_mod(u, k, p);
    let mu_inv = common::inv_mod(mu, p);
    let scale = g * mu_inv % p * common::inv_mod((mu + p - 1) % p, p) % p;
    let mut z = vec![0i64; p as usize];
    z[0] = 1;
    let mut c = scale;
    for j in 0..p - 1 {
        z[common::pow_mod(u, j, p) as usize] = c as i64;
        c = c * mu_inv % p;
    }
    (mu, naive.from_zeta(&z))
}

fn synthesis_primes() -> Vec<u64> {
    odd_primes_in(11, 31)
}

fn c7_singular_synthesis(out: &mut Outcome) {
    let mut count = 0;
    for p in synthesis_primes() {
        let table = PowerTable::for_prime(p).unwrap();
        let u = table.u();
        let ring = LambdaRing::new(p, 2).unwrap();
        let naive = NaiveRing::new(p, 2);
        for m in 0..p {
            let k = 2 * m + 1;
            if 2 * k <= p - 1 || k > p - 2 {
                continue;
            }
            for g in [1u64, 2] {
                count += 1;
                let (f, r) = match (synthesize_closed_form(&table, m, g), recurrence_candidate(&ring, &table, k, g)) {
                    (Ok(f), Ok(r)) => (f, r),
                    (a, b) => {
                        out.expect(false, || format!("p={p} m={m} g={g}: {:?} / {:?}", a.err(), b.err()));
                        continue;
                    }
                };
                out.expect(forms_agree(&f, &r), || format!("p={p} m={m} g={g}: closed form != recurrence"));
                let rec = gamma_recurrence(&table, m, g).unwrap();
                out.expect(rec.closes, || format!("p={p} m={m} g={g}: recurrence does not close"));
                let (mu, c) = oracle_closed_form(&naive, p, u, k, g);
                out.expect(f.mu == mu, || format!("p={p} m={m}: mu {} vs {mu}", f.mu));
                let lib_res: Vec<u64> = f.element.coeffs().iter().map(|x| x % p).collect();
                let orc_res: Vec<u64> = c.iter().map(|x| x % p).collect();
                out.expect(lib_res == orc_res, || format!("p={p} m={m} g={g}: residues differ from oracle"));
                // sigma(C) = C^mu mod pi^(p-1), checked with the oracle arithmetic
                let defect = naive.sub(&naive.galois(&c, u), &naive.pow(&c, mu));
                out.expect(naive.valuation(&defect).map_or(true, |v| v >= p - 1), || {
                    format!("p={p} m={m} g={g}: eigen-congruence {:?}", naive.valuation(&defect))
                });
                let v = naive.valuation(&naive.sub(&c, &naive.int(1)));
                out.expect(v == Some(k), || format!("p={p} m={m} g={g}: oracle v = {v:?}"));
                out.expect(f.nu() == Valuation::Exact(k), || format!("p={p} m={m} g={g}: library {}", f.nu()));
            }
        }
    }
    out.note = format!("{count} (p, m, gamma) cases");
}

fn c8_product_quotient(out: &mut Outcome) {
    let mut products = 0;
    let mut quotients = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in synthesis_primes() {
        let table = PowerTable::for_prime(p).unwrap();
        let u = table.u();
        let naive = NaiveRing::new(p, 2);
        let mut sweep: Vec<SingularCandidate> = Vec::new();
        for m in 0..p {
            let k = 2 * m + 1;
            if 2 * k > p - 1 && k <= p - 2 {
                for g in [1u64, 2] {
                    sweep.push(synthesize_closed_form(&table, m, g).unwrap());
                }
            }
        }
        let n = sweep.len();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                groups.push(vec![i, j]);
                for l in j + 1..n {
                    groups.push(vec![i, j, l]);
                }
            }
        }
        for grp in groups {
            let nus: Vec<u64> = grp.iter().map(|&i| sweep[i].nu().exact().unwrap()).collect();
            let mut sorted = nus.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != nus.len() {
                continue;
            }
            products += 1;
            let alphas: Vec<u64> = grp.iter().map(|_| rng.gen_range(1..p)).collect();
            let factors: Vec<(&SingularCandidate, u64)> =
                grp.iter().zip(&alphas).map(|(&i, &a)| (&sweep[i], a)).collect();
            let min = *sorted.first().unwrap();
            match product_classification(&factors) {
                Ok(r) => out.expect(r.nu == Valuation::Exact(min) && r.consistent && !r.primary, || {
                    format!("p={p} {nus:?}: product {r:?}")
                }),
                Err(e) => out.expect(false, || format!("p={p} {nus:?}: {e}")),
            }
            let mut prod = naive.int(1);
            for (&i, &a) in grp.iter().zip(&alphas) {
                prod = naive.mul(&prod, &naive.pow(&sweep[i].element.coeffs().to_vec(), a));
            }
            let v = naive.valuation(&naive.sub(&prod, &naive.int(1)));
            out.expect(v == Some(min), || format!("p={p} {nus:?}: oracle product valuation {v:?}"));
        }

        // same-mu eigen-solver pairs at pi^(p+1)
        let ring = LambdaRing::new(p, 2).unwrap();
        for k in (1..=p - 2).filter(|k| k % 2 == 1 && 2 * k >= p + 1) {
            let mu = table.get(k as i64);
            let space = eigen_space(&ring, &table, mu, p + 1).unwrap();
            for g in &space.generators {
                let x = g.coeffs().to_vec();
                let d = naive.sub(&naive.galois(&x, u), &naive.scale(&x, mu));
                out.expect(naive.valuation(&d).map_or(true, |v| v >= p + 1), || {
                    format!("p={p} k={k}: generator fails substitution")
                });
            }
            let mut draw = || loop {
                let c: Vec<i64> =
                    space.generators.iter().map(|_| rng.gen_range(0..ring.modulus() as i64)).collect();
                let v = space.combine(&c).unwrap();
                if v.valuation() == Valuation::Exact(k) {
                    return SingularCandidate::new(&table, mu, v.add_int(1), Provenance::EigenSolver, p + 1, None)
                        .unwrap();
                }
            };
            for _ in 0..3 {
                let (c1, c2) = (draw(), draw());
                quotients += 1;
                let q = quotient_primary_check(&c1, &c2);
                out.expect(q.as_ref().is_ok_and(|v| v.is_at_least(p)), || format!("p={p} k={k}: quotient {q:?}"));
            }
        }
    }
    out.note = format!("{products} products, {quotients} quotients");
}

fn c9_unit_survey(out: &mut Outcome) {
    let mut surveyed = 0;
    for p in odd_primes_in(5, 163) {
        let config = SurveyConfig { precision: 4, r_plus: 0 };
        let r = match unit_survey(p, &config) {
            Ok(r) => r,
            Err(e) => return out.expect(false, || format!("p = {p}: {e}")),
        };
        surveyed += 1;
        let i_p = oracle_irregular(p).len() as u64;
        out.expect(r.rho1_local <= i_p && i_p <= r.rho1_local + config.r_plus, || {
            format!("p = {p}: rho1_local = {}, i_p = {i_p}", r.rho1_local)
        });
        out.expect(r.bounds.all_pass() && r.anomalies.is_empty(), || {
            format!("p = {p}: bounds {:?}, anomalies {:?}", r.bounds, r.anomalies)
        });
        for c in &r.components {
            if let Valuation::Exact(v) = c.valuation {
                out.expect(v % (p - 1) == (2 * c.n) % (p - 1), || format!("p = {p}, 2n = {}: v = {v}", 2 * c.n));
            }
            out.expect(c.congruence.is_at_least(p + 1), || format!("p = {p}, 2n = {}: congruence", 2 * c.n));
            if i_p == 0 {
                out.expect(c.valuation == Valuation::Exact(2 * c.n), || {
                    format!("regular p = {p}, 2n = {}: {}", 2 * c.n, c.valuation)
                });
            }
        }
        if p == 37 {
            out.expect(r.primary_index_set == vec![32], || format!("p = 37: primary {:?}", r.primary_index_set));
            let v = r.components.iter().find(|c| c.primary).map(|c| c.valuation);
            out.note = format!("p = 37 primary index 32 at {}", v.map_or("-".into(), |v| v.to_string()));
        }
    }
    out.note = format!("{surveyed} primes; {}", out.note);
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "irregular-prime tables for p < 300", Some(secs(5)), c1_irregular_tables),
        criterion(2, "minus eigenvalue count equals i_p", None, c2_ribet_bridge),
        criterion(3, "annihilator rank laws", Some(secs(10)), c3_annihilator_laws),
        criterion(4, "Stickelberger scalar collapse", None, c4_stickelberger),
        criterion(5, "Frobenius congruence on random pairs", None, c5_frobenius),
        criterion(6, "eigen-monomial law for p < 100", None, c6_eigen_monomial),
        criterion(7, "singular synthesis: formula, recurrence, valuation", Some(secs(5)), c7_singular_synthesis),
        criterion(8, "product and quotient laws", None, c8_product_quotient),
        criterion(9, "unit survey bounds for p <= 163 at a = 4", Some(secs(60)), c9_unit_survey),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

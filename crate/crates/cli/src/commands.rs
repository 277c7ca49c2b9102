use serde::Serialize;
use serde_json::{json, Value};

use cyclocong::annihilator::{
    induced_min_poly, primitive_root, rank_inequality_report, validate_eigenvalue_set, PowerTable,
    RankProfile, ValidationOptions,
};
use cyclocong::arith::{gcd, is_prime, odd_primes_in};
use cyclocong::bernoulli::{IrregularityReport, DEFAULT_PRIME_CAP};
use cyclocong::singular::{
    analyze_valuation, forms_agree, gamma_recurrence, is_primary, recurrence_candidate,
    synthesize_closed_form, PrimaryThreshold, DEFAULT_PRECISION,
};
use cyclocong::units::{unit_survey, SurveyConfig, SurveyReport, SURVEY_PRECISION};
use cyclocong::verify::{self, Suite, VerifyOptions};
use cyclocong::{Error, LambdaRing};

use crate::args::{Cli, Command, Common, Range, Split};
use crate::{Failure, Report, Status};

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Rejected { .. } => Status::Rejected,
            Error::Violation(_) | Error::Invariant(_) => Status::MathFailure,
            _ => Status::Usage,
        };
        Failure { status, message: e.to_string() }
    }
}

type CmdResult = Result<Report, Failure>;

pub fn run(cli: &Cli) -> CmdResult {
    let c = &cli.common;
    match &cli.command {
        Command::Irregular { primes } => irregular(c, primes.bounds()),
        Command::Annihilator { prime, eigenvalues, splits, generator, allow, exclude_even } => {
            annihilator(c, *prime, eigenvalues, splits, *generator, allow, *exclude_even)
        }
        Command::Singular { prime, m, gamma } => singular(c, *prime, *m, *gamma),
        Command::Units { primes, r_plus } => units(c, primes.bounds(), *r_plus),
        Command::Verify { range, suites, samples, inject_fault } => {
            verify_cmd(c, *range, suites, *samples, *inject_fault)
        }
    }
}

fn precision(c: &Common, default: u32) -> Result<u32, Failure> {
    let a = c.precision.unwrap_or(default);
    if !(2..=8).contains(&a) {
        return Err(Failure::usage(format!("precision {a} outside [2, 8]")));
    }
    Ok(a)
}

fn require_prime(p: u64) -> Result<(), Failure> {
    if p < 3 || !is_prime(p) {
        return Err(Failure::usage(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn envelope(command: &str, c: &Common, records: Vec<Value>) -> Value {
    json!({ "schema": 1, "command": command, "seed": c.seed, "records": records })
}

/// `p, u, a, seed` followed by the record's own fields.
fn record(p: u64, u: u64, a: u32, seed: u64, body: impl Serialize) -> Value {
    let mut out = json!({ "p": p, "u": u, "a": a, "seed": seed });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, serde_json::to_value(body).expect("serializable")) {
        for (k, v) in b {
            o.entry(k).or_insert(v);
        }
    }
    out
}

fn list(xs: &[u64], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Per-prime work spread over the available cores; results keep prime order.
fn sweep<T: Send>(primes: &[u64], f: impl Fn(u64) -> T + Sync) -> Vec<T> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(primes.len().max(1));
    if workers <= 1 {
        return primes.iter().map(|&p| f(p)).collect();
    }
    let chunk = primes.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = primes
            .chunks(chunk)
            .map(|ps| s.spawn(|| ps.iter().map(|&p| f(p)).collect::<Vec<T>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn irregular(c: &Common, range: Range) -> CmdResult {
    if range.hi >= DEFAULT_PRIME_CAP {
        return Err(Failure::usage(format!(
            "range {}:{} exceeds the prime cap {DEFAULT_PRIME_CAP}",
            range.lo, range.hi
        )));
    }
    let a = precision(c, DEFAULT_PRECISION)?;
    let primes = odd_primes_in(range.lo, range.hi);
    let reports = sweep(&primes, IrregularityReport::compute)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv = String::from("p,u,i_p,irregular_indices,minus_eigenvalues\n");
    let mut text = String::new();
    let mut records = Vec::new();
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.p,
            r.u,
            r.i_p,
            list(&r.irregular_indices, ";"),
            list(&r.minus_eigenvalues, ";")
        ));
        text.push_str(&format!(
            "p={} u={} i_p={} irregular=[{}] minus=[{}]\n",
            r.p,
            r.u,
            r.i_p,
            list(&r.irregular_indices, ","),
            list(&r.minus_eigenvalues, ",")
        ));
        records.push(record(
            r.p,
            r.u,
            a,
            c.seed,
            json!({
                "i_p": r.i_p,
                "irregular_indices": r.irregular_indices,
                "minus_eigenvalues": r.minus_eigenvalues,
                "minus_exponents": r.minus_exponents,
            }),
        ));
    }
    Ok(Report { json: envelope("irregular", c, records), csv, text, status: Status::Ok })
}

fn rule_options(allow: &[String], exclude_even: bool) -> Result<ValidationOptions, Failure> {
    let mut opts = if exclude_even { ValidationOptions::all() } else { ValidationOptions::default() };
    for rule in allow {
        match rule.as_str() {
            "mu-equals-u" => opts.mu_equals_u = false,
            "mu-equals-one" => opts.mu_equals_one = false,
            "mu-equals-minus-one" => opts.mu_equals_minus_one = false,
            "even-character" => opts.even_character = false,
            other => return Err(Failure::usage(format!("unknown rule {other:?}"))),
        }
    }
    Ok(opts)
}

#[derive(Serialize)]
struct SplitReport {
    d: u64,
    g: u64,
    r_d: usize,
    r_g: usize,
    tower_d: bool,
    tower_g: bool,
    product: bool,
    unit_rank: bool,
    induced_poly_d: String,
    induced_poly_g: String,
    passed: bool,
}

fn annihilator(
    c: &Common,
    p: u64,
    eigenvalues: &[u64],
    splits: &[Split],
    generator: Option<u64>,
    allow: &[String],
    exclude_even: bool,
) -> CmdResult {
    require_prime(p)?;
    let a = precision(c, DEFAULT_PRECISION)?;
    let u = match generator {
        Some(u) => u,
        None => primitive_root(p)?,
    };
    let table = PowerTable::new(p, u)?;
    let set = validate_eigenvalue_set(&table, eigenvalues, rule_options(allow, exclude_even)?)?;

    let splits: Vec<(u64, u64)> = if splits.is_empty() {
        (2..p - 1)
            .filter(|d| (p - 1) % d == 0 && gcd(*d, (p - 1) / d) == 1)
            .map(|d| (d, (p - 1) / d))
            .collect()
    } else {
        splits.iter().map(|s| (s.d, s.g)).collect()
    };

    let mut rows = Vec::new();
    for &(d, g) in &splits {
        let prof: RankProfile = rank_inequality_report(&set, d, g)?;
        rows.push(SplitReport {
            d,
            g,
            r_d: prof.r_d,
            r_g: prof.r_g,
            tower_d: prof.tower_d,
            tower_g: prof.tower_g,
            product: prof.product,
            unit_rank: prof.unit_rank,
            induced_poly_d: induced_min_poly(&set, d)?.to_string(),
            induced_poly_g: induced_min_poly(&set, g)?.to_string(),
            passed: prof.all_pass(),
        });
    }
    let r_1 = set.len();
    let all_pass = rows.iter().all(|r| r.passed);

    let mut csv = String::from("p,u,r_1,d,g,r_d,r_g,passed\n");
    let mut text = format!("p={p} u={u} M=[{}] r_1={r_1}\n", list(&set.residues(), ","));
    for r in &rows {
        csv.push_str(&format!("{p},{u},{r_1},{},{},{},{},{}\n", r.d, r.g, r.r_d, r.r_g, r.passed));
        text.push_str(&format!(
            "  d={} g={}: r_d={} r_g={} tower={} product={} unit_rank={} {}\n    P_d = {}\n    P_g = {}\n",
            r.d,
            r.g,
            r.r_d,
            r.r_g,
            r.tower_d && r.tower_g,
            r.product,
            r.unit_rank,
            if r.passed { "PASS" } else { "FAIL" },
            r.induced_poly_d,
            r.induced_poly_g,
        ));
    }
    let rec = record(
        p,
        u,
        a,
        c.seed,
        json!({ "eigenvalues": set.residues(), "r_1": r_1, "splits": rows, "passed": all_pass }),
    );
    Ok(Report {
        json: envelope("annihilator", c, vec![rec]),
        csv,
        text,
        status: if all_pass { Status::Ok } else { Status::MathFailure },
    })
}

fn singular(c: &Common, p: u64, m: u64, gamma: u64) -> CmdResult {
    require_prime(p)?;
    let a = precision(c, DEFAULT_PRECISION)?;
    let table = PowerTable::for_prime(p)?;
    let cand = synthesize_closed_form(&table, m, gamma)?;
    let cand = if a == cand.element.precision() {
        cand
    } else {
        let ring = LambdaRing::new(p, a)?;
        cyclocong::singular::synthesize_with_exponent(&ring, &table, 2 * m + 1, gamma)?
    };
    let ring = cand.element.ring().clone();
    let rec_cand = recurrence_candidate(&ring, &table, 2 * m + 1, gamma)?;
    let record_gamma = gamma_recurrence(&table, m, gamma)?;
    let agree = forms_agree(&cand, &rec_cand) && record_gamma.closes;
    let analysis = analyze_valuation(&cand)?;
    let primary_p = is_primary(&cand.element, PrimaryThreshold::SingularNumber)?;
    let primary_p1 = is_primary(&cand.element, PrimaryThreshold::Unit)?;

    let nu = analysis.nu.to_string();
    let mut text = cand.to_text();
    text.push_str(&format!(
        "nu: {nu}\nclassification: {}\nprimary at pi^{}: {primary_p}\nprimary at pi^{}: {primary_p1}\nagreement: {}\n",
        analysis.classification,
        p,
        p + 1,
        if agree { "OK" } else { "MISMATCH" }
    ));
    let csv = format!(
        "p,u,a,m,mu,gamma,nu,classification,agreement\n{p},{},{a},{m},{},{gamma},{nu},{},{}\n",
        cand.u,
        cand.mu,
        analysis.classification,
        agree
    );
    let rec = record(
        p,
        cand.u,
        a,
        c.seed,
        json!({
            "m": m,
            "exponent": cand.m,
            "mu": cand.mu,
            "gamma_p3": gamma,
            "provenance": cand.provenance,
            "verified_precision": cand.verified_precision,
            "element": cand.element.coeffs(),
            "nu": analysis.nu,
            "classification": analysis.classification,
            "primary_threshold_p": primary_p,
            "primary_threshold_p_plus_1": primary_p1,
            "recurrence": record_gamma,
            "agreement": agree,
        }),
    );
    Ok(Report {
        json: envelope("singular", c, vec![rec]),
        csv,
        text,
        status: if agree { Status::Ok } else { Status::MathFailure },
    })
}

fn units(c: &Common, range: Range, r_plus: u64) -> CmdResult {
    let a = precision(c, SURVEY_PRECISION)?;
    if range.lo == range.hi {
        require_prime(range.lo)?;
    }
    let primes: Vec<u64> = odd_primes_in(range.lo.max(5), range.hi);
    let config = SurveyConfig { precision: a, r_plus };
    let reports: Vec<SurveyReport> = sweep(&primes, |p| unit_survey(p, &config))
        .into_iter()
        .collect::<Result<_, _>>()?;

    let mut csv = String::from("p,2n,v,a_level,primary\n");
    let mut text = String::new();
    let mut records = Vec::new();
    let mut ok = true;
    for r in &reports {
        ok &= r.passed();
        for row in r.csv_rows() {
            csv.push_str(&row);
            csv.push('\n');
        }
        text.push_str(&format!(
            "p={} u={} a={} primary=[{}] rho1_local={} irregular=[{}] bounds={}\n",
            r.p,
            r.u,
            r.precision,
            list(&r.primary_index_set, ","),
            r.rho1_local,
            list(&r.irregular_indices, ","),
            if r.bounds.all_pass() { "pass" } else { "FAIL" }
        ));
        for comp in &r.components {
            text.push_str(&format!(
                "  2n={:<4} {:<12} a_level={:<3} {}\n",
                2 * comp.n,
                comp.valuation.to_string(),
                comp.a_level.map_or("-".to_string(), |x| x.to_string()),
                if comp.primary { "primary" } else { "not-primary" }
            ));
        }
        for anomaly in &r.anomalies {
            text.push_str(&format!("  anomaly: {anomaly}\n"));
        }
        records.push(record(r.p, r.u, r.precision, c.seed, r));
    }
    Ok(Report {
        json: envelope("units", c, records),
        csv,
        text,
        status: if ok { Status::Ok } else { Status::MathFailure },
    })
}

fn verify_cmd(c: &Common, range: Range, suites: &[String], samples: usize, inject_fault: bool) -> CmdResult {
    let suites = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites
            .iter()
            .map(|s| Suite::parse(s).ok_or_else(|| Failure::usage(format!("unknown suite {s:?}"))))
            .collect::<Result<_, _>>()?
    };
    let opts = VerifyOptions { suites, seed: c.seed, samples, corrupt_reduction: inject_fault };
    let summary = verify::run(range.lo, range.hi, &opts);

    let mut csv = String::from("suite,checks,failures\n");
    let mut text = format!(
        "range {}:{} seed {} primes {}\n",
        range.lo,
        range.hi,
        c.seed,
        summary.primes.len()
    );
    for s in &summary.suites {
        csv.push_str(&format!("{},{},{}\n", s.suite, s.checks, s.failures));
        text.push_str(&format!(
            "{:<12} {:>7} checks {:>5} failures {}\n",
            s.suite.id(),
            s.checks,
            s.failures,
            if s.failures == 0 { "PASS" } else { "FAIL" }
        ));
    }
    if let Some(ce) = summary.first_counterexample() {
        let line = format!(
            "counterexample: suite={} p={} check={:?} detail={:?}",
            ce.suite, ce.p, ce.check, ce.detail
        );
        eprintln!("{line}");
        text.push_str(&line);
        text.push('\n');
    }
    let json = json!({
        "schema": 1,
        "command": "verify",
        "seed": c.seed,
        "passed": summary.passed(),
        "total_checks": summary.total_checks(),
        "summary": summary,
        "first_counterexample": summary.first_counterexample(),
    });
    Ok(Report {
        json,
        csv,
        text,
        status: if summary.passed() { Status::Ok } else { Status::MathFailure },
    })
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values are recomputed here from factorials, Pascal's
//! rule and trial division rather than taken from the library.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use equideg_cli::json::{self, Document};
use equideg_cli::{verify_document, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use equideg_core::certificates::{
    build_map_certificate, build_zero_certificate, justify_entries, mod_lemma_degree,
    verify_map_certificate, verify_zero_certificate, BuildOutcome, MapCertificate,
    CHECK_D1_CONGRUENCE, CHECK_PRIME_POWER_CONGRUENCE, CHECK_SUM_IDENTITY,
};
use equideg_core::degrees::{gcd_binomials, increment_chain, join_degree};
use equideg_core::numtheory::{classify, lucas_residue, padic_valuation_binomial, NClassification};
use equideg_core::oracle::{exhaustive_degree_search, DegreeSearch};
use equideg_core::orbits::{exceptional_orbits, orbit_divisibility_table, orbit_size, PartitionType};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pascal(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = vec![BigInt::one()];
        row.extend((1..n).map(|k| &prev[k - 1] + &prev[k]));
        row.push(BigInt::one());
        rows.push(row);
    }
    rows
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `(p, a)` with `m = p^a`, `a >= 1`.
fn prime_power(m: u64) -> Option<(u64, u32)> {
    let p = (2..=m).find(|&d| m % d == 0)?;
    let (mut rest, mut a) = (m, 0);
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    (rest == 1).then_some((p, a))
}

fn criterion_1() -> Outcome {
    let rows = pascal(200);
    let mut cases = 0u64;
    for p in [2u64, 3, 5, 7, 11] {
        let pb = BigInt::from(p);
        for n in 0..=200u64 {
            for k in 0..=n {
                let c = &rows[n as usize][k as usize];
                let residue = c.mod_floor(&pb).to_u64().unwrap();
                let got = lucas_residue(n, k, p);
                ensure(got == residue, || format!("p={p} n={n} k={k}: residue {got}, expected {residue}"))?;
                let v = padic_valuation_binomial(n, k, p);
                let pv = pb.pow(v);
                ensure(c.is_multiple_of(&pv) && !c.is_multiple_of(&(&pv * &pb)), || {
                    format!("p={p} n={n} k={k}: {p}^{v} does not exactly divide {c}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (n,k,p) cases exact"))
}

fn criterion_2() -> Outcome {
    let rows = pascal(300);
    for n in 2..=300u64 {
        let row = &rows[n as usize];
        let g = row[1..n as usize].iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let expected = prime_power(n).map_or(1, |(p, _)| p);
        ensure(g == BigInt::from(expected), || format!("n={n}: gcd {g}, expected {expected}"))?;
        let lib = gcd_binomials(n).map_err(|e| e.to_string())?;
        ensure(lib == expected, || format!("n={n}: gcd_binomials {lib}, expected {expected}"))?;
        let predicted = match classify(n).map_err(|e| e.to_string())? {
            NClassification::PrimePower { p, .. } => p,
            _ => 1,
        };
        ensure(predicted == expected, || format!("n={n}: classification predicts {predicted}"))?;
    }
    Ok("2 <= n <= 300 exact".into())
}

fn criterion_3() -> Outcome {
    for n in [4u64, 8, 9, 16, 25, 27] {
        let (p, _) = prime_power(n).unwrap();
        let ex = exceptional_orbits(n, p).map_err(|e| e.to_string())?;
        ensure(ex.is_empty(), || format!("n={n}: unexpected exceptional orbits {ex:?}"))?;
        let table = orbit_divisibility_table(n, p).map_err(|e| e.to_string())?;
        for row in &table {
            let direct = factorial(n) / row.partition.blocks().iter().map(|&a| factorial(a)).product::<BigInt>();
            ensure(direct == row.orbit_size, || format!("n={n} {}: size mismatch", row.partition))?;
            ensure((&direct % p).is_zero(), || format!("n={n} {}: size {direct} coprime to {p}", row.partition))?;
        }
    }
    for n in [6u64, 10, 14, 18, 22, 26] {
        let half = n / 2;
        let (p, _) = prime_power(half).unwrap();
        let ex = exceptional_orbits(n, p).map_err(|e| e.to_string())?;
        let expected = PartitionType::new(vec![half, half]).unwrap();
        ensure(ex == vec![expected.clone()], || format!("n={n}: exceptional orbits {ex:?}"))?;
        let size = orbit_size(n, &expected).map_err(|e| e.to_string())?;
        let direct = factorial(n) / (factorial(half) * factorial(half));
        ensure(size == direct, || format!("n={n}: size {size}, expected {direct}"))?;
        ensure(direct.mod_floor(&BigInt::from(p)) == BigInt::from(2), || {
            format!("n={n}: size {direct} is not 2 mod {p}")
        })?;
    }
    Ok("12 values of n exact".into())
}

/// Recomputes N and gcd of nonzero c for the zero certificate from
/// factorials, with representations found by brute force.
fn factorial_zero_oracle(n: u64) -> (BigInt, BigInt) {
    let choose = |k: u64| factorial(n) / (factorial(k) * factorial(n - k));
    let mut small = Vec::new();
    let mut large = Vec::new();
    for p in (2..n).filter(|&p| is_prime(p)) {
        for t in 1..64u32 {
            let pt = match p.checked_pow(t) {
                Some(v) if v < n => v,
                _ => break,
            };
            for s in 0..t {
                if p.pow(s) + pt == n {
                    small.push(p.pow(s));
                    large.push(pt);
                }
            }
        }
    }
    let mut big_n = BigInt::one();
    let mut g = BigInt::zero();
    for k in 1..n {
        let c = if large.contains(&k) {
            BigInt::zero()
        } else if let Some(i) = small.iter().position(|&s| s == k) {
            big_n -= choose(k);
            let p = prime_power(large[i]).unwrap().0;
            choose(k) * p
        } else if let Some((q, _)) = prime_power(k) {
            big_n -= choose(k);
            choose(k) * q
        } else {
            choose(k)
        };
        g = g.gcd(&c);
    }
    (big_n, g)
}

fn criterion_4() -> Outcome {
    let (oracle_n, oracle_g) = factorial_zero_oracle(12);
    ensure(oracle_n == BigInt::from(-2376) && oracle_g == BigInt::from(66), || {
        format!("factorial oracle gives N={oracle_n}, gcd={oracle_g}")
    })?;
    let mut count = 0;
    let mut slowest = Duration::ZERO;
    for n in 2..=60u64 {
        let class = classify(n).map_err(|e| e.to_string())?;
        if !class.is_admissible() {
            continue;
        }
        let start = Instant::now();
        let cert = build_zero_certificate(n).map_err(|e| format!("n={n}: {e}"))?;
        let verdict = verify_zero_certificate(&cert).map_err(|e| format!("n={n}: {e}"))?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        ensure(elapsed < Duration::from_secs(1), || format!("n={n}: took {elapsed:?}"))?;
        for name in [CHECK_SUM_IDENTITY, CHECK_PRIME_POWER_CONGRUENCE, CHECK_D1_CONGRUENCE] {
            let check = verdict.check(name).ok_or_else(|| format!("n={n}: no {name} check"))?;
            ensure(check.passed, || format!("n={n}: {check}"))?;
        }
        ensure(verdict.passed(), || format!("n={n}:\n{verdict}"))?;
        let (on, og) = factorial_zero_oracle(n);
        let nonzero_gcd = cert.c.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        ensure(cert.big_n == on && nonzero_gcd == og, || {
            format!("n={n}: N={} gcd={nonzero_gcd}, oracle N={on} gcd={og}", cert.big_n)
        })?;
        count += 1;
    }
    let cert = build_zero_certificate(12).map_err(|e| e.to_string())?;
    let g = cert.c.iter().filter(|c| !c.is_zero()).fold(BigInt::zero(), |g, c| g.gcd(c));
    ensure(cert.big_n == BigInt::from(-2376) && g == BigInt::from(66), || {
        format!("n=12: N={} gcd={g}", cert.big_n)
    })?;
    Ok(format!("{count} admissible n <= 60; n=12 N=-2376 gcd=66; slowest {slowest:?}"))
}

fn attained_and_verified(n: u64, d: i64, bound: u64) -> Result<Option<MapCertificate>, String> {
    match build_map_certificate(n, &BigInt::from(d), bound).map_err(|e| format!("n={n} d={d}: {e}"))? {
        BuildOutcome::Attained(cert) => {
            let v = verify_map_certificate(&cert).map_err(|e| format!("n={n} d={d}: {e}"))?;
            ensure(v.passed() && cert.degree == BigInt::from(d), || format!("n={n} d={d}:\n{v}"))?;
            Ok(Some(cert))
        }
        BuildOutcome::Impossible(_) => Ok(None),
        other => Err(format!("n={n} d={d}: {other:?}")),
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for n in [15u64, 21, 33] {
        for d in -10..=10 {
            attained_and_verified(n, d, 40)?.ok_or_else(|| format!("n={n} d={d}: Impossible"))?;
        }
    }
    for d in -10..=10i64 {
        let attained = attained_and_verified(9, d, 40)?.is_some();
        ensure(attained == (d.rem_euclid(3) == 1), || format!("n=9 d={d}: attained={attained}"))?;
    }
    attained_and_verified(12, 0, 40)?.ok_or("n=12 d=0: Impossible")?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(2), || format!("took {elapsed:?}"))?;
    Ok("85 (n,d) outcomes as required".into())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    for (n, d) in [(6u64, 0i64), (10, 2)] {
        match build_map_certificate(n, &BigInt::from(d), 40).map_err(|e| e.to_string())? {
            BuildOutcome::Impossible(_) => {}
            other => return Err(format!("n={n} d={d}: {other:?}")),
        }
    }
    attained_and_verified(6, -1, 10)?.ok_or("n=6 d=-1: Impossible")?;
    match exhaustive_degree_search(6, -1, 10).map_err(|e| e.to_string())? {
        DegreeSearch::Found(entries) => {
            ensure(entries.iter().all(|(_, d)| d.abs() <= BigInt::from(10)), || format!("{entries:?}"))?;
            let degree = mod_lemma_degree(6, &entries).map_err(|e| e.to_string())?;
            ensure(degree == BigInt::from(-1), || format!("oracle vector has degree {degree}"))?;
            let cert = justify_entries(6, &entries).map_err(|e| e.to_string())?;
            let v = verify_map_certificate(&cert).map_err(|e| e.to_string())?;
            ensure(v.passed(), || format!("oracle witness rejected:\n{v}"))?;
        }
        other => return Err(format!("oracle: {other:?}")),
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok("n=6 d=0 and n=10 d=2 impossible; n=6 d=-1 attained and rediscovered".into())
}

/// Direct expansion of the join formula.
fn join_formula(ds: &[i64], eps: &[bool]) -> i64 {
    let e = |i: usize| i64::from(eps[i]);
    let l = ds.len();
    let mut v = 1 + e(0) * (ds[0] - 1);
    for i in 1..l {
        v += e(i) * (ds[i] - ds[i - 1]);
    }
    v - e(l) * ds[l - 1]
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);
    for trial in 0..1000 {
        let len = rng.gen_range(1..=8);
        let ds: Vec<i64> = (0..len).map(|_| rng.gen_range(-50..=50)).collect();
        let eps: Vec<bool> = (0..=len).map(|_| rng.gen()).collect();
        let big: Vec<BigInt> = ds.iter().map(|&d| BigInt::from(d)).collect();
        let all_on = join_degree(&big, &vec![true; len + 1]).map_err(|e| e.to_string())?;
        let all_off = join_degree(&big, &vec![false; len + 1]).map_err(|e| e.to_string())?;
        ensure(all_on.is_zero() && all_off.is_one(), || {
            format!("trial {trial} ds={ds:?}: all on {all_on}, all off {all_off}")
        })?;
        let got = join_degree(&big, &eps).map_err(|e| e.to_string())?;
        let expected = join_formula(&ds, &eps);
        ensure(got == BigInt::from(expected), || format!("ds={ds:?} eps={eps:?}: {got} vs {expected}"))?;
    }
    for t in -50..=50i64 {
        let chain = increment_chain(t);
        ensure(chain.ds.iter().all(|d| d.abs().is_one()), || format!("t={t}: degrees not ±1"))?;
        let value = chain.evaluate();
        ensure(value == BigInt::from(t), || format!("t={t}: chain evaluates to {value}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok("1000 random chains and t in [-50,50] exact".into())
}

fn random_document(rng: &mut StdRng) -> Result<Document, String> {
    const ODD: [u64; 6] = [15, 21, 33, 35, 39, 45];
    const ADMISSIBLE: [u64; 8] = [12, 15, 20, 24, 28, 30, 36, 60];
    Ok(match rng.gen_range(0..4) {
        0 => {
            let n = ADMISSIBLE[rng.gen_range(0..ADMISSIBLE.len())];
            Document::Zero(build_zero_certificate(n).map_err(|e| e.to_string())?)
        }
        1 => {
            let n = ODD[rng.gen_range(0..ODD.len())];
            let d = rng.gen_range(-1000..=1000);
            Document::Map(attained_and_verified(n, d, 40)?.ok_or("odd n impossible")?)
        }
        2 => {
            let d = 1 + 3 * rng.gen_range(-50..=50);
            Document::Map(attained_and_verified(9, d, 40)?.ok_or("n=9 impossible")?)
        }
        _ => {
            let n = [12u64, 20, 24, 30][rng.gen_range(0..4)];
            Document::Map(attained_and_verified(n, 0, 40)?.ok_or("d=0 impossible")?)
        }
    })
}

fn map_doc(n: u64, d: i64) -> Value {
    let cert = attained_and_verified(n, d, 10).unwrap().unwrap();
    serde_json::from_str(&json::map_to_json(&cert)).unwrap()
}

fn zero_doc(n: u64) -> Value {
    serde_json::from_str(&json::zero_to_json(&build_zero_certificate(n).unwrap())).unwrap()
}

fn entry_index(doc: &Value, k: u64) -> usize {
    doc["entries"].as_array().unwrap().iter().position(|e| e["k"] == k).unwrap()
}

/// Twenty broken documents with the exit code and reason each must produce.
fn mutations() -> Vec<(&'static str, Value, i32, &'static str)> {
    let mut out = Vec::new();
    let m12 = map_doc(12, 0);
    let m6 = map_doc(6, -1);
    let z12 = zero_doc(12);

    let mut v = m12.clone();
    let i = entry_index(&v, 3);
    v["entries"][i]["just"] = json!({"kind": "antipodal"});
    out.push(("antipodal at odd/odd k", v, EXIT_FAILED, "k=3 and n-k=9 are both odd"));

    let mut v = m6.clone();
    let i = entry_index(&v, 3);
    v["entries"][i]["just"] = json!({"kind": "antipodal"});
    out.push(("antipodal at k=3 of 6", v, EXIT_FAILED, "k=3 and n-k=3 are both odd"));

    let mut v = m12.clone();
    let i = entry_index(&v, 10);
    v["entries"][i]["d"] = json!("-35");
    out.push(("perturbed d_10", v, EXIT_FAILED, "= -66, declared 0"));

    let mut v = m12.clone();
    v["degree"] = json!("1");
    out.push(("declared degree 1", v, EXIT_FAILED, "= 0, declared 1"));

    let mut v = m12.clone();
    let dup = v["entries"][0].clone();
    v["entries"].as_array_mut().unwrap().push(dup);
    out.push(("duplicated k", v, EXIT_FAILED, "k repeated: 1"));

    let mut v = m12.clone();
    let i = entry_index(&v, 3);
    v["entries"][i]["just"]["m"] = json!(4);
    out.push(("factor m not k or n-k", v, EXIT_FAILED, "factor m=4 is neither k=3 nor n-k=9"));

    let mut v = m12.clone();
    let i = entry_index(&v, 3);
    v["entries"][i]["d"] = json!("4");
    out.push(("local degree differs from sub", v, EXIT_FAILED, "sub-certificate degree 1 differs from local degree 4"));

    let mut v = m12.clone();
    let i = entry_index(&v, 3);
    v["entries"][i]["just"]["sub"]["degree"] = json!("2");
    v["entries"][i]["d"] = json!("2");
    out.push(("sub degree off its coset", v, EXIT_FAILED, "k=3/m=3: necessary constraint"));

    let mut v = m12.clone();
    let i = entry_index(&v, 3);
    v["entries"][i]["just"]["sub"]["n"] = json!(9);
    out.push(("sub for wrong n", v, EXIT_FAILED, "sub-certificate is for n=9, expected m=3"));

    let mut v = m12.clone();
    v["entries"][0]["k"] = json!(12);
    out.push(("k = n", v, EXIT_USAGE, "entry k=12 outside [1, 11]"));

    let mut v = m12.clone();
    v["entries"][0]["d"] = json!("0");
    v["degree"] = json!("12");
    out.push(("stored zero entry", v, EXIT_FAILED, "zero local degree stored at k = 1"));

    let two = json!({"type": "map_certificate", "n": 5, "degree": "11", "entries": [
        {"k": 3, "d": "-1", "just": {"kind": "factor", "m": 2,
            "sub": {"type": "map_certificate", "n": 2, "degree": "-1", "entries": []}}}]});
    out.push(("two-point factor", two, EXIT_FAILED, "two-point factor only justifies local degree 1, got -1"));

    let mut v = m12.clone();
    v["entries"][0]["note"] = json!("x");
    out.push(("unknown field", v, EXIT_USAGE, "unknown field `note`"));

    let mut v = z12.clone();
    v["d"][2] = json!("2");
    out.push(("zero d_3 = 2", v, EXIT_FAILED, "FAIL prime-power congruence: violated at k = 3"));

    let mut v = z12.clone();
    v["d"][9] = json!("-35");
    out.push(("zero d_10 + 1", v, EXIT_FAILED, "= -66"));

    let mut v = z12.clone();
    v["d"].as_array_mut().unwrap().pop();
    out.push(("truncated d", v, EXIT_USAGE, "vector d has length 10, expected n-1 = 11"));

    let mut v = z12.clone();
    v["c"].as_array_mut().unwrap().truncate(3);
    out.push(("truncated c", v, EXIT_USAGE, "vector c has length 3"));

    let mut v = z12.clone();
    v["d"][0] = json!("2");
    out.push(("zero d_1 = 2", v, EXIT_FAILED, "d_1 ≡ 1 (mod 11); d_1 = 2"));

    let mut v = z12.clone();
    v["N"] = json!("-2377");
    out.push(("perturbed N", v, EXIT_FAILED, "coefficients c and N"));

    let mut v = z12.clone();
    v["reps"].as_array_mut().unwrap().pop();
    out.push(("dropped representation", v, EXIT_FAILED, "FAIL representations"));

    out
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(8);
    for i in 0..100 {
        let doc = random_document(&mut rng)?;
        let text = json::document_to_json(&doc);
        let back = json::parse_document(&text).map_err(|e| format!("#{i}: {e}"))?;
        ensure(back == doc, || format!("#{i}: round trip changed the certificate"))?;
        let outcome = verify_document(&text);
        ensure(outcome.code == EXIT_OK, || format!("#{i}: {}", outcome.text))?;
    }
    let cases = mutations();
    ensure(cases.len() == 20, || format!("{} mutations", cases.len()))?;
    for (name, doc, code, reason) in &cases {
        let outcome = verify_document(&doc.to_string());
        ensure(outcome.code == *code && outcome.text.contains(reason), || {
            format!("{name}: exit {} (want {code}), reason {reason:?} not in\n{}", outcome.code, outcome.text)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(2), || format!("took {elapsed:?}"))?;
    Ok("100 round trips verified; 20 mutations rejected with their reasons".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Lucas/Kummer conformance", criterion_1),
        ("GCD law", criterion_2),
        ("exceptional-orbit law", criterion_3),
        ("zero certificates", criterion_4),
        ("map certificate completeness", criterion_5),
        ("soundness at the frontier", criterion_6),
        ("join-formula identities", criterion_7),
        ("round trips and hardening", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.3}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.3}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Brute-force cross-checks.
//!
//! Expected values here come from [`reference`], which derives everything
//! from Pascal's rule, repeated division and plain trial division. It shares
//! only the big-integer type with the formula-based modules it checks.
//! The exhaustive searches run a dynamic program over exact reachable sums
//! and never consult the certificate builders.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Result of one oracle check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub range: String,
    pub counterexamples: Vec<String>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{tag} {} [{}] {} counterexample(s) in {:.3}s",
            self.name,
            self.range,
            self.counterexamples.len(),
            self.elapsed.as_secs_f64()
        )?;
        for c in &self.counterexamples {
            write!(f, "\n    {c}")?;
        }
        Ok(())
    }
}

/// Independent first-principles arithmetic.
pub mod reference {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    /// Rows `0..=n_max` of Pascal's triangle.
    pub fn pascal_rows(n_max: u64) -> Vec<Vec<BigInt>> {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n in 1..=n_max as usize {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigInt::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigInt::one());
            rows.push(row);
        }
        rows
    }

    /// Base prime of `m = p^a`, `a >= 1`.
    pub fn prime_power_base(m: u64) -> Option<u64> {
        if m < 2 {
            return None;
        }
        let p = (2..=m).find(|d| m % d == 0)?;
        let mut rest = m;
        while rest % p == 0 {
            rest /= p;
        }
        (rest == 1).then_some(p)
    }

    /// Exponent of `p` in a nonzero integer, by repeated division.
    pub fn valuation(value: &BigInt, p: u64) -> u32 {
        let p = BigInt::from(p);
        let mut v = value.clone();
        let mut e = 0;
        while !v.is_zero() && v.is_multiple_of(&p) {
            v /= &p;
            e += 1;
        }
        e
    }

    /// Residues allowed by orbit divisibility, `None` when unconstrained.
    pub fn allowed_residues(n: u64) -> Option<(u64, Vec<u64>)> {
        if let Some(p) = prime_power_base(n) {
            return Some((p, vec![1 % p]));
        }
        if n % 2 == 0 {
            if let Some(p) = prime_power_base(n / 2).filter(|&p| p != 2) {
                return Some((p, vec![1, p - 1]));
            }
        }
        None
    }

    /// Neither a prime power nor twice one.
    pub fn neither_prime_power_nor_twice(n: u64) -> bool {
        n >= 2 && allowed_residues(n).is_none()
    }

    /// Whether `v` is a local degree the join constructions supply at `k`.
    pub fn local_degree_allowed(n: u64, k: u64, v: i64) -> bool {
        if k % 2 == 0 || (n - k) % 2 == 0 || v == 0 || v == 1 {
            return true;
        }
        [k, n - k].into_iter().filter(|&m| m >= 2).any(|m| match prime_power_base(m) {
            Some(p) => v.rem_euclid(p as i64) == 1,
            None => true,
        })
    }
}

/// Compares direct gcds of `C(n,1..n-1)` with `p` for `n = p^k` and 1
/// otherwise, as predicted by the classification and returned by
/// [`crate::degrees::gcd_binomials`].
pub fn brute_gcd_check(n_max: u64) -> CheckReport {
    let start = Instant::now();
    let mut counterexamples = Vec::new();
    let rows = reference::pascal_rows(n_max);
    for n in 2..=n_max {
        let row = &rows[n as usize];
        let direct = row[1..n as usize].iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let predicted = match crate::numtheory::classify(n) {
            Ok(crate::numtheory::NClassification::PrimePower { p, .. }) => p,
            Ok(_) => 1,
            Err(e) => {
                counterexamples.push(format!("n={n}: classify failed: {e}"));
                continue;
            }
        };
        if direct != BigInt::from(predicted) {
            counterexamples.push(format!("n={n}: direct gcd {direct}, classification predicts {predicted}"));
        }
        match crate::degrees::gcd_binomials(n) {
            Ok(g) if BigInt::from(g) == direct => {}
            Ok(g) => counterexamples.push(format!("n={n}: gcd_binomials {g}, direct {direct}")),
            Err(e) => counterexamples.push(format!("n={n}: gcd_binomials failed: {e}")),
        }
    }
    CheckReport {
        name: "gcd of binomials".into(),
        range: format!("2 <= n <= {n_max}"),
        counterexamples,
        elapsed: start.elapsed(),
    }
}

/// Checks `lucas_residue` and `padic_valuation_binomial` against Pascal-row
/// binomials reduced and divided directly.
pub fn brute_lucas_check(n_max: u64, primes: &[u64]) -> CheckReport {
    let start = Instant::now();
    let mut counterexamples = Vec::new();
    let rows = reference::pascal_rows(n_max);
    for &p in primes {
        let pb = BigInt::from(p);
        for n in 0..=n_max {
            for k in 0..=n {
                let c = &rows[n as usize][k as usize];
                let residue = c.mod_floor(&pb).to_u64().expect("residue below p");
                let lucas = crate::numtheory::lucas_residue(n, k, p);
                if lucas != residue {
                    counterexamples.push(format!(
                        "p={p} n={n} k={k}: lucas residue {lucas}, C(n,k) mod p = {residue}"
                    ));
                }
                let val = reference::valuation(c, p);
                let kummer = crate::numtheory::padic_valuation_binomial(n, k, p);
                if kummer != val {
                    counterexamples.push(format!(
                        "p={p} n={n} k={k}: carries {kummer}, exact valuation {val}"
                    ));
                }
            }
        }
    }
    CheckReport {
        name: "Lucas residues and Kummer valuations".into(),
        range: format!("0 <= k <= n <= {n_max}, p in {primes:?}"),
        counterexamples,
        elapsed: start.elapsed(),
    }
}

/// Largest `n` the exhaustive searches accept.
pub const EXHAUSTIVE_N_MAX: u64 = 16;

/// Sets of reachable sums over a fixed window `[-span, span]`.
struct SumTable {
    span: i64,
    layers: Vec<Vec<u64>>,
}

impl SumTable {
    fn words(span: i64) -> usize {
        ((2 * span + 1) as usize).div_ceil(64)
    }

    fn get(layer: &[u64], span: i64, value: i64) -> bool {
        if value.abs() > span {
            return false;
        }
        let i = (value + span) as usize;
        layer[i / 64] >> (i % 64) & 1 == 1
    }

    /// `dst |= src shifted by shift`, both over the same window.
    fn or_shifted(dst: &mut [u64], src: &[u64], shift: i64) {
        let words = dst.len() as i64;
        let (word_shift, bit_shift) = (shift.div_euclid(64), shift.rem_euclid(64) as u32);
        for (j, out) in dst.iter_mut().enumerate() {
            // bit i of dst takes bit i - shift of src
            let hi = j as i64 - word_shift;
            let lo = hi - 1;
            let mut acc = 0u64;
            if (0..words).contains(&hi) {
                acc |= src[hi as usize] << bit_shift;
            }
            if bit_shift != 0 && (0..words).contains(&lo) {
                acc |= src[lo as usize] >> (64 - bit_shift);
            }
            *out |= acc;
        }
    }

    /// Layer `i` holds the sums `sum_{j < i} v_j coeffs[j]` with `v_j` drawn
    /// from `candidates[j]`.
    fn build(coeffs: &[i64], candidates: &[Vec<i64>], span: i64) -> Self {
        let words = Self::words(span);
        let mut first = vec![0u64; words];
        first[(span as usize) / 64] |= 1 << (span as usize % 64);
        let mut layers = vec![first];
        for (c, cands) in coeffs.iter().zip(candidates) {
            let prev = layers.last().expect("nonempty");
            let mut next = vec![0u64; words];
            for v in cands {
                Self::or_shifted(&mut next, prev, v * c);
            }
            // clear padding bits beyond the window
            let used = (2 * span + 1) as usize;
            if used % 64 != 0 {
                *next.last_mut().expect("nonempty") &= (1u64 << (used % 64)) - 1;
            }
            layers.push(next);
        }
        SumTable { span, layers }
    }

    /// Recovers one choice per coordinate reaching `target`, preferring the
    /// smallest `|v|` at each step from the last coordinate down.
    fn trace(&self, coeffs: &[i64], candidates: &[Vec<i64>], target: i64) -> Option<Vec<i64>> {
        if !Self::get(self.layers.last()?, self.span, target) {
            return None;
        }
        let mut out = vec![0; coeffs.len()];
        let mut rest = target;
        for i in (0..coeffs.len()).rev() {
            let mut cands = candidates[i].clone();
            cands.sort_by_key(|v| (v.abs(), *v < 0));
            let v = cands
                .into_iter()
                .find(|v| Self::get(&self.layers[i], self.span, rest - v * coeffs[i]))?;
            out[i] = v;
            rest -= v * coeffs[i];
        }
        (rest == 0).then_some(out)
    }
}

fn exhaustive_solve(n: u64, candidates: Vec<Vec<i64>>, target: i64) -> Option<Vec<i64>> {
    let coeffs: Vec<i64> = reference::pascal_rows(n)[n as usize][1..n as usize]
        .iter()
        .map(|c| c.to_i64().expect("small n"))
        .collect();
    let span: i64 = coeffs
        .iter()
        .zip(&candidates)
        .map(|(c, cands)| c * cands.iter().map(|v| v.abs()).max().unwrap_or(0))
        .sum();
    if target.abs() > span {
        return None;
    }
    let table = SumTable::build(&coeffs, &candidates, span);
    table.trace(&coeffs, &candidates, target)
}

fn check_search_n(n: u64) -> Result<()> {
    if !(3..=EXHAUSTIVE_N_MAX).contains(&n) {
        return Err(Error::domain(format!(
            "exhaustive search supports 3 <= n <= {EXHAUSTIVE_N_MAX}, got {n}"
        )));
    }
    Ok(())
}

/// Searches `|d_k| <= bound` for a vector with `1 - sum d_k C(n,k) = 0`,
/// `d_{q^a} in {0} ∪ (1 + qZ)`, and `d_1 ≡ 1 (mod p)` when `n = p^t + 1`.
pub fn exhaustive_zero_search(n: u64, bound: u64) -> Result<Option<Vec<BigInt>>> {
    check_search_n(n)?;
    if !reference::neither_prime_power_nor_twice(n) {
        return Err(Error::domain(format!(
            "n={n} is a prime power or twice a prime power"
        )));
    }
    let b = bound.min(1 << 20) as i64;
    let d1_prime = reference::prime_power_base(n - 1);
    let candidates: Vec<Vec<i64>> = (1..n)
        .map(|k| {
            let q = if k == 1 { None } else { reference::prime_power_base(k) };
            (-b..=b)
                .filter(|&v| match (k, q) {
                    (1, _) => d1_prime.is_none_or(|p| v.rem_euclid(p as i64) == 1),
                    (_, Some(q)) => v == 0 || v.rem_euclid(q as i64) == 1,
                    _ => true,
                })
                .collect()
        })
        .collect();
    Ok(exhaustive_solve(n, candidates, 1).map(|v| v.into_iter().map(BigInt::from).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeSearch {
    /// Nonzero local degrees `(k, d_k)`, ascending in `k`.
    Found(Vec<(u64, BigInt)>),
    NotFound,
    /// The target degree violates orbit divisibility.
    NotAttempted(String),
}

/// Searches local degrees `d_k` with `|d_k| <= bound`, each allowed by the
/// join constructions, such that `1 - sum d_k C(n,k) = d`.
pub fn exhaustive_degree_search(n: u64, d: i64, bound: u64) -> Result<DegreeSearch> {
    check_search_n(n)?;
    if let Some((p, residues)) = reference::allowed_residues(n) {
        if !residues.contains(&(d.rem_euclid(p as i64) as u64)) {
            return Ok(DegreeSearch::NotAttempted(format!(
                "degree {d} is not in {residues:?} modulo {p}"
            )));
        }
    }
    if d == 1 {
        return Ok(DegreeSearch::Found(Vec::new()));
    }
    let b = bound.min(1 << 20) as i64;
    let candidates: Vec<Vec<i64>> = (1..n)
        .map(|k| (-b..=b).filter(|&v| reference::local_degree_allowed(n, k, v)).collect())
        .collect();
    Ok(match exhaustive_solve(n, candidates, 1 - d) {
        Some(v) => DegreeSearch::Found(
            (1..n)
                .zip(v)
                .filter(|&(_, x)| x != 0)
                .map(|(k, x)| (k, BigInt::from(x)))
                .collect(),
        ),
        None => DegreeSearch::NotFound,
    })
}

/// Every oracle check the self-test runs, in a fixed order.
pub fn selftest(n_max: u64) -> Vec<CheckReport> {
    use crate::certificates::{
        build_map_certificate, build_zero_certificate, justify_entries, verify_map_certificate,
        verify_zero_certificate, zero_conditions, BuildOutcome,
    };

    let mut reports = vec![
        brute_gcd_check(n_max.max(2)),
        brute_lucas_check(n_max.min(200), &[2, 3, 5, 7, 11]),
    ];

    let start = Instant::now();
    let mut bad = Vec::new();
    let zero_max = n_max.min(60);
    for n in (2..=zero_max).filter(|&n| reference::neither_prime_power_nor_twice(n)) {
        match build_zero_certificate(n).and_then(|c| verify_zero_certificate(&c)) {
            Ok(v) if v.passed() => {}
            Ok(v) => bad.push(format!("n={n}: {}", v.failures().map(|c| c.to_string()).collect::<Vec<_>>().join("; "))),
            Err(e) => bad.push(format!("n={n}: {e}")),
        }
    }
    reports.push(CheckReport {
        name: "zero certificates".into(),
        range: format!("admissible n <= {zero_max}"),
        counterexamples: bad,
        elapsed: start.elapsed(),
    });

    let start = Instant::now();
    let mut bad = Vec::new();
    for n in [12u64, 15] {
        match exhaustive_zero_search(n, 40) {
            Ok(Some(d)) => match zero_conditions(n, &d) {
                Ok(v) if v.passed() => {}
                Ok(v) => bad.push(format!("n={n}: search vector rejected:\n{v}")),
                Err(e) => bad.push(format!("n={n}: {e}")),
            },
            Ok(None) => bad.push(format!("n={n}: no vector within bound 40")),
            Err(e) => bad.push(format!("n={n}: {e}")),
        }
    }
    reports.push(CheckReport {
        name: "exhaustive zero search".into(),
        range: "n in {12, 15}, |d_k| <= 40".into(),
        counterexamples: bad,
        elapsed: start.elapsed(),
    });

    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 3..=10u64 {
        for d in -4..=4i64 {
            let oracle = match exhaustive_degree_search(n, d, 10) {
                Ok(r) => r,
                Err(e) => {
                    bad.push(format!("n={n} d={d}: {e}"));
                    continue;
                }
            };
            let built = build_map_certificate(n, &BigInt::from(d), 10);
            match (&oracle, built) {
                (DegreeSearch::Found(entries), Ok(outcome)) => {
                    match justify_entries(n, entries).and_then(|c| verify_map_certificate(&c)) {
                        Ok(v) if v.passed() => {}
                        Ok(v) => bad.push(format!("n={n} d={d}: oracle witness rejected\n{v}")),
                        Err(e) => bad.push(format!("n={n} d={d}: {e}")),
                    }
                    if let BuildOutcome::Impossible(_) = outcome {
                        bad.push(format!("n={n} d={d}: builder says impossible, oracle found a witness"));
                    }
                    if let BuildOutcome::Unknown { exhausted: true, .. } = outcome {
                        bad.push(format!("n={n} d={d}: builder exhausted bound 10, oracle found a witness"));
                    }
                }
                (DegreeSearch::NotAttempted(_), Ok(BuildOutcome::Impossible(_))) => {}
                (DegreeSearch::NotAttempted(why), Ok(other)) => {
                    bad.push(format!("n={n} d={d}: oracle rules out ({why}), builder gave {other:?}"))
                }
                (DegreeSearch::NotFound, Ok(BuildOutcome::Attained(c))) if c.entries.iter().all(|e| e.d.abs() <= BigInt::from(10)) => {
                    bad.push(format!("n={n} d={d}: builder found a witness within the bound the oracle missed"))
                }
                (_, Err(e)) => bad.push(format!("n={n} d={d}: builder failed: {e}")),
                _ => {}
            }
        }
    }
    reports.push(CheckReport {
        name: "exhaustive degree search vs builder".into(),
        range: "3 <= n <= 10, |d| <= 4, |d_k| <= 10".into(),
        counterexamples: bad,
        elapsed: start.elapsed(),
    });

    reports
}

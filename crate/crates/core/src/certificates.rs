//! Proof objects and their verifiers.
//!
//! A [`ZeroCertificate`] writes `0 = 1 - sum d_k C(n,k)` with the congruence
//! side conditions needed to realise every `d_k` locally. A [`MapCertificate`]
//! records one local degree per face dimension `k`, each with a justification
//! for why a `S_k x S_{n-k}`-equivariant map of that local degree exists; the
//! certified degree is `1 - sum d_k C(n,k)`.
//!
//! Verifiers treat certificates as untrusted and recompute everything from
//! the integers they contain.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::degrees::{admissible_local_degrees, known_attainable, necessary_constraint, DegreeConstraint};
use crate::error::{Error, Result};
use crate::numtheory::{
    binomial, classify, factorize, gcd_all, is_prime, prime_power_representations,
    solve_linear_diophantine, PrimePowerRep, FACTORIZE_LIMIT,
};

/// Nodes the bounded search may visit before giving up.
pub const SEARCH_NODE_BUDGET: u64 = 4_000_000;

/// Default bound on `|d_k|` for the bounded search.
pub const DEFAULT_SEARCH_BOUND: u64 = 40;

/// One named pass/fail line of a verifier report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Zero certificates

pub const CHECK_SUM_IDENTITY: &str = "sum identity";
pub const CHECK_PRIME_POWER_CONGRUENCE: &str = "prime-power congruence";
pub const CHECK_D1_CONGRUENCE: &str = "d_1 congruence";
pub const CHECK_REPRESENTATIONS: &str = "representations";
pub const CHECK_TEMPLATE: &str = "d template";
pub const CHECK_COEFFICIENTS: &str = "coefficients c and N";
pub const CHECK_BC_IDENTITY: &str = "b·c identity";
pub const CHECK_N_DIVISIBLE: &str = "N divisible by representation primes";
pub const CHECK_GCD_DIVIDES_N: &str = "gcd(c) divides N";

/// Integer data witnessing `1 - sum_{k=1}^{n-1} d_k C(n,k) = 0`.
///
/// Vectors are indexed `k = 1..n-1`, so `d[0]` is `d_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCertificate {
    pub n: u64,
    pub reps: Vec<PrimePowerRep>,
    pub d: Vec<BigInt>,
    pub b: Vec<BigInt>,
    pub c: Vec<BigInt>,
    pub big_n: BigInt,
}

/// Role of an index `k` in the zero-certificate template.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    /// `k = p^t` for a representation: `d_k = 0`.
    LargePower,
    /// `k = p^s` for a representation: `d_k = 1 + p b_k`.
    SmallPower(u64),
    /// Any other `k = q^a`, `a > 0`: `d_k = 1 + q b_k`.
    OtherPrimePower(u64),
    /// `d_k = b_k`.
    Plain,
}

fn prime_power_base(k: u64) -> Option<u64> {
    if k < 2 {
        return None;
    }
    factorize(k).ok()?.as_prime_power().map(|(q, _)| q)
}

fn slot_of(k: u64, reps: &[PrimePowerRep]) -> Slot {
    if reps.iter().any(|r| r.large_power() == k) {
        Slot::LargePower
    } else if let Some(r) = reps.iter().find(|r| r.small_power() == k) {
        Slot::SmallPower(r.p)
    } else if let Some(q) = prime_power_base(k) {
        Slot::OtherPrimePower(q)
    } else {
        Slot::Plain
    }
}

/// `c_k` of the template for index `k`.
fn template_coefficient(slot: Slot, binom: &BigInt) -> BigInt {
    match slot {
        Slot::LargePower => BigInt::zero(),
        Slot::SmallPower(p) | Slot::OtherPrimePower(p) => binom * p,
        Slot::Plain => binom.clone(),
    }
}

fn template_degree(slot: Slot, b: &BigInt) -> BigInt {
    match slot {
        Slot::LargePower => BigInt::zero(),
        Slot::SmallPower(p) | Slot::OtherPrimePower(p) => BigInt::one() + b * p,
        Slot::Plain => b.clone(),
    }
}

/// `c` and `N` of the canonical construction for the given representations.
fn template_coefficients(n: u64, reps: &[PrimePowerRep]) -> (Vec<BigInt>, BigInt) {
    let mut big_n = BigInt::one();
    let mut c = Vec::with_capacity(n.saturating_sub(1) as usize);
    for k in 1..n {
        let binom = binomial(n, k as i64);
        let slot = slot_of(k, reps);
        if matches!(slot, Slot::SmallPower(_) | Slot::OtherPrimePower(_)) {
            big_n -= &binom;
        }
        c.push(template_coefficient(slot, &binom));
    }
    (c, big_n)
}

pub fn build_zero_certificate(n: u64) -> Result<ZeroCertificate> {
    let class = classify(n)?;
    if !class.is_admissible() {
        return Err(Error::domain(format!(
            "zero certificate needs n neither a prime power nor twice a prime power; n={n} is {class}"
        )));
    }
    let reps = prime_power_representations(n)?;
    let (c, big_n) = template_coefficients(n, &reps);
    let b = solve_linear_diophantine(&c, &big_n).ok_or_else(|| {
        // the gcd of the c_k always divides N under the hypothesis
        Error::domain(format!("no integer solution of b·c = N for n={n}"))
    })?;
    let d = (1..n)
        .zip(&b)
        .map(|(k, bk)| template_degree(slot_of(k, &reps), bk))
        .collect();
    Ok(ZeroCertificate {
        n,
        reps,
        d,
        b,
        c,
        big_n,
    })
}

/// Base prime of `m` when `m = p^t`, `t >= 1`, by trial division.
fn prime_power_root(m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > m {
        p = m;
    }
    let mut rest = m;
    while rest % p == 0 {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

fn congruent_one(d: &BigInt, q: u64) -> bool {
    d.mod_floor(&BigInt::from(q)) == BigInt::one() % BigInt::from(q)
}

fn all_representations(n: u64) -> Vec<PrimePowerRep> {
    let mut out = Vec::new();
    for p in (2..n).filter(|&p| is_prime(p)) {
        let mut t = 1;
        while let Some(pt) = p.checked_pow(t).filter(|&v| v < n) {
            for s in 0..t {
                if p.pow(s) + pt == n {
                    out.push(PrimePowerRep { p, s, t });
                }
            }
            t += 1;
        }
    }
    out
}

fn list_ks(ks: &[u64]) -> String {
    let shown: Vec<String> = ks.iter().take(8).map(|k| k.to_string()).collect();
    let more = if ks.len() > 8 { ", ..." } else { "" };
    format!("{}{}", shown.join(", "), more)
}

/// The three defining conditions of a zero representation for a raw vector
/// `d_1..d_{n-1}`: the sum identity, `d_{q^a} = 0` or `d_{q^a} ≡ 1 (mod q)`,
/// and `d_1 ≡ 1 (mod p)` when `n = p^t + 1`.
pub fn zero_conditions(n: u64, d: &[BigInt]) -> Result<Verdict> {
    if n < 2 || d.len() as u64 != n - 1 {
        return Err(Error::format(format!(
            "expected {} entries d_1..d_{{n-1}} for n={n}, got {}",
            n.saturating_sub(1),
            d.len()
        )));
    }
    let mut verdict = Verdict::default();
    let binoms: Vec<BigInt> = (1..n).map(|k| binomial(n, k as i64)).collect();

    let total: BigInt = d.iter().zip(&binoms).map(|(d, c)| d * c).sum();
    let residual = BigInt::one() - total;
    verdict.push(
        CHECK_SUM_IDENTITY,
        residual.is_zero(),
        format!("1 - Σ d_k C({n},k) = {residual}"),
    );

    let mut bad = Vec::new();
    for k in 2..n {
        if let Some(q) = prime_power_root(k) {
            let dk = &d[(k - 1) as usize];
            if !dk.is_zero() && !congruent_one(dk, q) {
                bad.push(k);
            }
        }
    }
    let detail = if bad.is_empty() {
        "every d_{q^a} is 0 or 1 mod q".to_string()
    } else {
        format!("violated at k = {}", list_ks(&bad))
    };
    verdict.push(CHECK_PRIME_POWER_CONGRUENCE, bad.is_empty(), detail);

    match prime_power_root(n - 1) {
        Some(p) => {
            let ok = congruent_one(&d[0], p);
            verdict.push(
                CHECK_D1_CONGRUENCE,
                ok,
                format!("n = {p}^t + 1 requires d_1 ≡ 1 (mod {p}); d_1 = {}", d[0]),
            );
        }
        None => verdict.push(CHECK_D1_CONGRUENCE, true, "n - 1 is not a prime power"),
    }
    Ok(verdict)
}

/// Re-checks a zero certificate from scratch.
///
/// The three defining conditions are the sum identity, the prime-power
/// congruences and the `d_1` congruence; the remaining checks confirm that
/// `b`, `c` and `N` are the data of the canonical construction.
pub fn verify_zero_certificate(cert: &ZeroCertificate) -> Result<Verdict> {
    let n = cert.n;
    if n < 2 {
        return Err(Error::format(format!("zero certificate needs n >= 2, got {n}")));
    }
    if n > FACTORIZE_LIMIT {
        return Err(Error::format(format!("n={n} exceeds the supported range")));
    }
    let len = (n - 1) as usize;
    for (name, v) in [("d", &cert.d), ("b", &cert.b), ("c", &cert.c)] {
        if v.len() != len {
            return Err(Error::format(format!(
                "vector {name} has length {}, expected n-1 = {len}",
                v.len()
            )));
        }
    }
    let mut verdict = zero_conditions(n, &cert.d)?;

    let expected_reps = all_representations(n);
    let reps_ok = cert.reps == expected_reps;
    verdict.push(
        CHECK_REPRESENTATIONS,
        reps_ok,
        if reps_ok {
            format!("{} representation(s) of n as p^s + p^t", expected_reps.len())
        } else {
            format!("expected {expected_reps:?}, got {:?}", cert.reps)
        },
    );

    let mismatched: Vec<u64> = (1..n)
        .filter(|&k| {
            let i = (k - 1) as usize;
            template_degree(slot_of(k, &cert.reps), &cert.b[i]) != cert.d[i]
        })
        .collect();
    verdict.push(
        CHECK_TEMPLATE,
        mismatched.is_empty(),
        if mismatched.is_empty() {
            "d_k follows from b_k".to_string()
        } else {
            format!("d_k disagrees with b_k at k = {}", list_ks(&mismatched))
        },
    );

    let (c, big_n) = template_coefficients(n, &cert.reps);
    let c_bad: Vec<u64> = (1..n).filter(|&k| c[(k - 1) as usize] != cert.c[(k - 1) as usize]).collect();
    let coeff_ok = c_bad.is_empty() && big_n == cert.big_n;
    verdict.push(
        CHECK_COEFFICIENTS,
        coeff_ok,
        if coeff_ok {
            format!("N = {big_n}")
        } else if !c_bad.is_empty() {
            format!("c_k differs from the construction at k = {}", list_ks(&c_bad))
        } else {
            format!("N should be {big_n}, got {}", cert.big_n)
        },
    );

    let bc: BigInt = cert.b.iter().zip(&cert.c).map(|(b, c)| b * c).sum();
    verdict.push(
        CHECK_BC_IDENTITY,
        bc == cert.big_n,
        format!("Σ b_k c_k = {bc}, N = {}", cert.big_n),
    );

    let prime_product: BigInt = cert.reps.iter().map(|r| BigInt::from(r.p)).product();
    let divisible = prime_product.is_zero() || (&cert.big_n % &prime_product).is_zero();
    verdict.push(
        CHECK_N_DIVISIBLE,
        divisible,
        format!("N = {} and Π p_i = {prime_product}", cert.big_n),
    );

    let nonzero: Vec<BigInt> = cert.c.iter().filter(|v| !v.is_zero()).cloned().collect();
    let g = gcd_all(&nonzero);
    let divides = if g.is_zero() {
        cert.big_n.is_zero()
    } else {
        (&cert.big_n % &g).is_zero()
    };
    verdict.push(CHECK_GCD_DIVIDES_N, divides, format!("gcd = {g}, N = {}", cert.big_n));

    Ok(verdict)
}

// ---------------------------------------------------------------------------
// Map certificates

pub const CHECK_DEGREE_IDENTITY: &str = "degree identity";
pub const CHECK_DISTINCT_K: &str = "distinct k";
pub const CHECK_NONZERO_ENTRIES: &str = "nonzero entries";
pub const CHECK_NECESSARY_CONSTRAINT: &str = "necessary constraint";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Join of the antipodal map on the even-dimensional factor with the
    /// identity; gives local degree -1 and so any local degree.
    AntipodalJoin,
    /// A certificate for an `S_m`-equivariant self-map of `Σ_m` of degree
    /// `d_k`, `m` one of `k` and `n - k`, joined with the identity.
    FactorRecursion { m: u64, sub: Box<MapCertificate> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalEntry {
    pub k: u64,
    pub d: BigInt,
    pub just: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapCertificate {
    pub n: u64,
    pub degree: BigInt,
    pub entries: Vec<LocalEntry>,
}

impl MapCertificate {
    /// The identity map of `Σ_n`.
    pub fn identity(n: u64) -> Self {
        MapCertificate {
            n,
            degree: BigInt::one(),
            entries: Vec::new(),
        }
    }

    /// Deepest chain of nested sub-certificates (0 when none).
    pub fn depth(&self) -> usize {
        self.entries
            .iter()
            .map(|e| match &e.just {
                Justification::AntipodalJoin => 0,
                Justification::FactorRecursion { sub, .. } => 1 + sub.depth(),
            })
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildOutcome {
    Attained(MapCertificate),
    /// The target violates the necessary constraint.
    Impossible(DegreeConstraint),
    /// The bounded search found nothing; `exhausted` is false when the node
    /// budget ran out before the bounded space was covered.
    Unknown { search_bound: u64, exhausted: bool },
}

/// `1 - sum d_k C(n,k)` over distinct `k` in `[1, n-1]`.
pub fn mod_lemma_degree(n: u64, entries: &[(u64, BigInt)]) -> Result<BigInt> {
    let mut seen = BTreeSet::new();
    let mut degree = BigInt::one();
    for (k, d) in entries {
        if *k == 0 || *k >= n {
            return Err(Error::domain(format!("orbit index k={k} outside [1, {}]", n.saturating_sub(1))));
        }
        if !seen.insert(*k) {
            return Err(Error::domain(format!("orbit index k={k} used twice")));
        }
        degree -= d * binomial(n, *k as i64);
    }
    Ok(degree)
}

/// Attaches a justification to every nonzero local degree.
///
/// Even factors get the antipodal join; otherwise a sub-certificate of degree
/// `d_k` is built on the factor `Σ_k` (or `Σ_{n-k}`) whose known-attainable set
/// contains `d_k`.
pub fn justify_entries(n: u64, entries: &[(u64, BigInt)]) -> Result<MapCertificate> {
    let degree = mod_lemma_degree(n, entries)?;
    let mut out = Vec::new();
    for (k, d) in entries {
        if d.is_zero() {
            continue;
        }
        let (k, d) = (*k, d.clone());
        let just = if k % 2 == 0 || (n - k) % 2 == 0 {
            Justification::AntipodalJoin
        } else {
            factor_justification(n, k, &d)?
        };
        out.push(LocalEntry { k, d, just });
    }
    out.sort_by_key(|e| e.k);
    Ok(MapCertificate {
        n,
        degree,
        entries: out,
    })
}

fn factor_justification(n: u64, k: u64, d: &BigInt) -> Result<Justification> {
    let mut factors = vec![k, n - k];
    factors.dedup();
    for m in factors.into_iter().filter(|&m| m >= 2) {
        let sub = if d.is_one() {
            MapCertificate::identity(m)
        } else if m == 2 || !known_attainable(m)?.contains(d) {
            continue;
        } else {
            match build_map_certificate(m, d, DEFAULT_SEARCH_BOUND)? {
                BuildOutcome::Attained(cert) => cert,
                _ => continue,
            }
        };
        return Ok(Justification::FactorRecursion {
            m,
            sub: Box::new(sub),
        });
    }
    Err(Error::domain(format!(
        "no justification for local degree {d} at k={k} (n={n})"
    )))
}

/// Turns a zero certificate into a certificate for a degree-0 map.
pub fn map_certificate_from_zero(zero: &ZeroCertificate) -> Result<MapCertificate> {
    let entries: Vec<(u64, BigInt)> = (1..zero.n)
        .zip(&zero.d)
        .filter(|(_, d)| !d.is_zero())
        .map(|(k, d)| (k, d.clone()))
        .collect();
    justify_entries(zero.n, &entries)
}

pub fn build_map_certificate(n: u64, d: &BigInt, search_bound: u64) -> Result<BuildOutcome> {
    if n < 3 {
        return Err(Error::domain(format!("map certificates need n >= 3, got {n}")));
    }
    let class = classify(n)?;
    let constraint = necessary_constraint(n)?;
    if !constraint.admits(d) {
        return Ok(BuildOutcome::Impossible(constraint));
    }
    if d.is_one() {
        return Ok(BuildOutcome::Attained(MapCertificate::identity(n)));
    }
    if n % 2 == 1 {
        // every k has an even factor, so the local degrees are free
        let coeffs: Vec<BigInt> = (1..n).map(|k| binomial(n, k as i64)).collect();
        let target = BigInt::one() - d;
        if let Some(sol) = solve_linear_diophantine(&coeffs, &target) {
            let entries: Vec<(u64, BigInt)> = (1..n).zip(sol).collect();
            return justify_entries(n, &entries).map(BuildOutcome::Attained);
        }
    }
    if class == crate::numtheory::NClassification::EvenAdmissible && d.is_zero() {
        let zero = build_zero_certificate(n)?;
        return map_certificate_from_zero(&zero).map(BuildOutcome::Attained);
    }
    bounded_search(n, d, search_bound)
}

struct GroupOption {
    sum: i128,
    support: u32,
    split: Vec<(u64, i128)>,
}

struct Group {
    coeff: i128,
    options: Vec<GroupOption>,
    by_sum: HashMap<i128, usize>,
    max_abs: i128,
}

fn build_group(ks: &[u64], coeff: i128, candidates: &[Vec<i128>]) -> Group {
    let mut best: BTreeMap<i128, (u32, Vec<(u64, i128)>)> = BTreeMap::new();
    let mut consider = |split: Vec<(u64, i128)>| {
        let sum: i128 = split.iter().map(|&(_, v)| v).sum();
        let support = split.iter().filter(|&&(_, v)| v != 0).count() as u32;
        let better = match best.get(&sum) {
            None => true,
            Some((s, _)) => support < *s,
        };
        if better {
            best.insert(sum, (support, split));
        }
    };
    match (ks, candidates) {
        ([k], [c]) => c.iter().for_each(|&v| consider(vec![(*k, v)])),
        ([k1, k2], [c1, c2]) => {
            for &v1 in c1 {
                for &v2 in c2 {
                    consider(vec![(*k1, v1), (*k2, v2)]);
                }
            }
        }
        _ => unreachable!("groups hold one or two indices"),
    }
    let mut options: Vec<GroupOption> = best
        .into_iter()
        .map(|(sum, (support, split))| GroupOption { sum, support, split })
        .collect();
    options.sort_by_key(|o| (o.support, o.sum.abs(), o.sum < 0));
    let by_sum = options.iter().enumerate().map(|(i, o)| (o.sum, i)).collect();
    let max_abs = options.iter().map(|o| o.sum.abs()).max().unwrap_or(0);
    Group {
        coeff,
        options,
        by_sum,
        max_abs,
    }
}

struct Search<'a> {
    groups: &'a [Group],
    gcd_rest: Vec<i128>,
    reach_rest: Vec<i128>,
    nodes: u64,
    chosen: Vec<usize>,
}

impl Search<'_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn run(&mut self, level: usize, residual: i128, support_left: u32) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > SEARCH_NODE_BUDGET {
            return None;
        }
        if level == self.groups.len() {
            return Some(residual == 0);
        }
        let g = self.gcd_rest[level];
        if g == 0 {
            return Some(residual == 0);
        }
        if residual % g != 0 || residual.abs() > self.reach_rest[level] {
            return Some(false);
        }
        if residual != 0 && support_left == 0 {
            return Some(false);
        }
        let group = &self.groups[level];
        if level + 1 == self.groups.len() {
            if residual % group.coeff != 0 {
                return Some(false);
            }
            return Some(match group.by_sum.get(&(residual / group.coeff)) {
                Some(&i) if group.options[i].support <= support_left => {
                    self.chosen.push(i);
                    true
                }
                _ => false,
            });
        }
        let mut complete = true;
        for (i, opt) in group.options.iter().enumerate() {
            if opt.support > support_left {
                continue;
            }
            self.chosen.push(i);
            match self.run(level + 1, residual - opt.sum * group.coeff, support_left - opt.support) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => complete = false,
            }
            self.chosen.pop();
            if !complete {
                return None;
            }
        }
        Some(false)
    }
}

/// Bounded search over local degrees `d_k` in their admissible sets with
/// `|d_k| <= bound`, smallest support first.
///
/// Indices `k` and `n-k` share `C(n,k)` and the same admissible set, so they
/// are searched as one group over the sums `d_k + d_{n-k}`. Constrained (odd)
/// groups are fixed first; the unconstrained even groups then absorb the
/// residual. Pruning works modulo the gcd of the remaining coefficients and by
/// magnitude.
fn bounded_search(n: u64, d: &BigInt, bound: u64) -> Result<BuildOutcome> {
    let unknown = |exhausted| BuildOutcome::Unknown {
        search_bound: bound,
        exhausted,
    };
    let to_i128 = |v: &BigInt| v.to_i128();
    let Some(target) = to_i128(&(BigInt::one() - d)) else {
        return Ok(unknown(false));
    };
    let bound_i = bound.min(1 << 40) as i128;
    let coeff_of = |k: u64| to_i128(&binomial(n, k as i64));
    // magnitude headroom: sums reach at most 2 * bound * 2^n
    if n > 100 || coeff_of(n / 2).is_none() {
        return Ok(unknown(false));
    }

    let mut groups = Vec::new();
    for k in 1..=n / 2 {
        let ks: Vec<u64> = if 2 * k == n { vec![k] } else { vec![k, n - k] };
        let coeff = coeff_of(k).expect("checked above");
        let candidates = ks
            .iter()
            .map(|&kk| {
                Ok(admissible_local_degrees(n, kk)?
                    .members_within(bound_i as u64)
                    .iter()
                    .filter_map(|v| v.to_i128())
                    .collect())
            })
            .collect::<Result<Vec<Vec<i128>>>>()?;
        let constrained = !admissible_local_degrees(n, k)?.is_all();
        groups.push((constrained, build_group(&ks, coeff, &candidates)));
    }
    groups.sort_by(|(ca, ga), (cb, gb)| cb.cmp(ca).then(gb.coeff.cmp(&ga.coeff)));
    let groups: Vec<Group> = groups.into_iter().map(|(_, g)| g).collect();

    let mut gcd_rest = vec![0i128; groups.len() + 1];
    let mut reach_rest = vec![0i128; groups.len() + 1];
    for i in (0..groups.len()).rev() {
        let coeff = if groups[i].options.iter().any(|o| o.sum != 0) {
            groups[i].coeff
        } else {
            0
        };
        gcd_rest[i] = gcd_rest[i + 1].gcd(&coeff);
        reach_rest[i] = reach_rest[i + 1] + groups[i].max_abs * groups[i].coeff;
    }

    let max_support = (n - 1) as u32;
    let mut search = Search {
        groups: &groups,
        gcd_rest,
        reach_rest,
        nodes: 0,
        chosen: Vec::new(),
    };
    for support in 0..=max_support {
        search.chosen.clear();
        match search.run(0, target, support) {
            Some(true) => {
                let mut entries: Vec<(u64, BigInt)> = Vec::new();
                for (group, &i) in groups.iter().zip(&search.chosen) {
                    for &(k, v) in &group.options[i].split {
                        if v != 0 {
                            entries.push((k, BigInt::from(v)));
                        }
                    }
                }
                entries.sort_by_key(|e| e.0);
                return justify_entries(n, &entries).map(BuildOutcome::Attained);
            }
            Some(false) => {}
            None => return Ok(unknown(false)),
        }
    }
    Ok(unknown(true))
}

/// Re-checks a map certificate, recursing into sub-certificates.
///
/// Structural problems (n < 2, k outside `[1, n-1]`, nesting deeper than
/// `log2(n)`) are format errors; everything else is reported check by check.
pub fn verify_map_certificate(cert: &MapCertificate) -> Result<Verdict> {
    if cert.n < 2 {
        return Err(Error::format(format!("map certificate needs n >= 2, got {}", cert.n)));
    }
    let max_depth = (u64::BITS - 1 - cert.n.leading_zeros()) as usize;
    let mut verdict = Verdict::default();
    verify_map_inner(cert, "", 0, max_depth, &mut verdict)?;
    Ok(verdict)
}

fn verify_map_inner(
    cert: &MapCertificate,
    prefix: &str,
    depth: usize,
    max_depth: usize,
    verdict: &mut Verdict,
) -> Result<()> {
    let n = cert.n;
    if depth > max_depth {
        return Err(Error::format(format!(
            "sub-certificates nested deeper than {max_depth} levels"
        )));
    }
    if !(2..=FACTORIZE_LIMIT).contains(&n) {
        return Err(Error::format(format!("{prefix}unsupported n={n}")));
    }
    if let Some(e) = cert.entries.iter().find(|e| e.k == 0 || e.k >= n) {
        return Err(Error::format(format!(
            "{prefix}entry k={} outside [1, {}]",
            e.k,
            n - 1
        )));
    }
    let name = |s: &str| format!("{prefix}{s}");

    let mut sum = BigInt::zero();
    for e in &cert.entries {
        sum += &e.d * binomial(n, e.k as i64);
    }
    let computed = BigInt::one() - sum;
    verdict.push(
        name(CHECK_DEGREE_IDENTITY),
        computed == cert.degree,
        format!("1 - Σ d_k C({n},k) = {computed}, declared {}", cert.degree),
    );

    let mut seen = BTreeSet::new();
    let dups: Vec<u64> = cert.entries.iter().filter(|e| !seen.insert(e.k)).map(|e| e.k).collect();
    verdict.push(
        name(CHECK_DISTINCT_K),
        dups.is_empty(),
        if dups.is_empty() {
            format!("{} entries", cert.entries.len())
        } else {
            format!("k repeated: {}", list_ks(&dups))
        },
    );

    let zeros: Vec<u64> = cert.entries.iter().filter(|e| e.d.is_zero()).map(|e| e.k).collect();
    verdict.push(
        name(CHECK_NONZERO_ENTRIES),
        zeros.is_empty(),
        if zeros.is_empty() {
            "all local degrees nonzero".to_string()
        } else {
            format!("zero local degree stored at k = {}", list_ks(&zeros))
        },
    );

    let constraint = necessary_constraint(n)?;
    verdict.push(
        name(CHECK_NECESSARY_CONSTRAINT),
        constraint.admits(&cert.degree),
        format!("degree {} against {constraint}", cert.degree),
    );

    for e in &cert.entries {
        let (k, d) = (e.k, &e.d);
        let label = name(&format!("entry k={k}"));
        match &e.just {
            Justification::AntipodalJoin => {
                let ok = k % 2 == 0 || (n - k) % 2 == 0;
                let detail = if ok {
                    format!("antipodal join on an even factor, local degree {d}")
                } else {
                    format!("antipodal join needs an even factor, but k={k} and n-k={} are both odd", n - k)
                };
                verdict.push(label, ok, detail);
            }
            Justification::FactorRecursion { m, sub } => {
                let m = *m;
                let problem = if m != k && m != n - k {
                    Some(format!("factor m={m} is neither k={k} nor n-k={}", n - k))
                } else if m < 2 {
                    Some(format!("factor m={m} has an empty or trivial boundary"))
                } else if sub.n != m {
                    Some(format!("sub-certificate is for n={}, expected m={m}", sub.n))
                } else if &sub.degree != d {
                    Some(format!("sub-certificate degree {} differs from local degree {d}", sub.degree))
                } else if m == 2 && !d.is_one() {
                    Some(format!("two-point factor only justifies local degree 1, got {d}"))
                } else {
                    None
                };
                match problem {
                    Some(p) => verdict.push(label, false, p),
                    None => {
                        let before = verdict.checks.len();
                        let sub_prefix = format!("{prefix}k={k}/m={m}: ");
                        verify_map_inner(sub, &sub_prefix, depth + 1, max_depth, verdict)?;
                        let sub_ok = verdict.checks[before..].iter().all(|c| c.passed);
                        verdict.push(
                            label,
                            sub_ok,
                            if sub_ok {
                                format!("factor Σ_{m} map of degree {d}")
                            } else {
                                format!("sub-certificate for Σ_{m} fails verification")
                            },
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

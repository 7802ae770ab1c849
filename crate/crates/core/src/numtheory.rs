//! Exact combinatorial arithmetic.
//!
//! Binomials and multinomials are arbitrary precision (`C(n, k)` leaves the
//! 64-bit range at `n = 67`). Factorization is plain trial division and is
//! capped at [`FACTORIZE_LIMIT`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest integer accepted by [`factorize`] and [`classify`].
pub const FACTORIZE_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// `Some((p, k))` when the factored integer is `p^k`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn factorize(n: u64) -> Result<PrimeFactorization> {
    if n < 2 {
        return Err(Error::domain(format!("cannot factorize {n}: need n >= 2")));
    }
    if n > FACTORIZE_LIMIT {
        return Err(Error::domain(format!(
            "cannot factorize {n}: exceeds the trial-division limit {FACTORIZE_LIMIT}"
        )));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(PrimeFactorization { factors })
}

/// Exact `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Exact `n! / (parts[0]! * ... * parts[l-1]!)`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigInt> {
    if parts.is_empty() {
        return Err(Error::domain("multinomial needs at least one part"));
    }
    if parts.contains(&0) {
        return Err(Error::domain("multinomial parts must be positive"));
    }
    let total = parts.iter().try_fold(0u64, |acc, &p| acc.checked_add(p));
    if total != Some(n) {
        return Err(Error::domain(format!(
            "multinomial parts {parts:?} do not sum to {n}"
        )));
    }
    // Product of binomials C(n, a1) * C(n - a1, a2) * ...
    let mut remaining = n;
    let mut acc = BigInt::one();
    for &part in parts {
        acc *= binomial(remaining, part as i64);
        remaining -= part;
    }
    Ok(acc)
}

/// Base-`p` digits of `n`, least significant first; empty for `n = 0`.
pub fn base_digits(mut n: u64, p: u64) -> Vec<u64> {
    assert!(p >= 2, "base must be at least 2");
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % p);
        n /= p;
    }
    digits
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// `C(a, b) mod p` for single digits `a, b < p`, `p` prime.
fn small_binomial_mod(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let m = p as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..b as u128 {
        num = num * ((a as u128 - i) % m) % m;
        den = den * ((i + 1) % m) % m;
    }
    // den is a product of integers in [1, p), hence invertible mod p.
    (num * pow_mod(den, m - 2, m) % m) as u64
}

/// `C(n, k) mod p` as the product of digitwise binomials in base `p`.
pub fn lucas_residue(n: u64, k: u64, p: u64) -> u64 {
    assert!(p >= 2, "modulus must be a prime");
    if k > n {
        return 0;
    }
    let nd = base_digits(n, p);
    let kd = base_digits(k, p);
    let mut acc = 1 % p;
    for (i, &ni) in nd.iter().enumerate() {
        let ki = kd.get(i).copied().unwrap_or(0);
        acc = ((acc as u128 * small_binomial_mod(ni, ki, p) as u128) % p as u128) as u64;
        if acc == 0 {
            break;
        }
    }
    acc
}

/// Exponent of `p` in `C(n, k)`, counted as the carries of `k + (n - k)` in base `p`.
pub fn padic_valuation_binomial(n: u64, k: u64, p: u64) -> u32 {
    assert!(k <= n, "padic_valuation_binomial needs k <= n");
    assert!(p >= 2, "modulus must be a prime");
    let a = base_digits(k, p);
    let b = base_digits(n - k, p);
    let mut carries = 0;
    let mut carry = 0;
    for i in 0..a.len().max(b.len()) {
        let s = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0) + carry;
        carry = u64::from(s >= p);
        carries += carry as u32;
    }
    carries
}

/// The case split of `n >= 2` driving the degree classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NClassification {
    /// `n = p^k`.
    PrimePower { p: u64, k: u32 },
    /// `n = 2 p^k` with `p` odd.
    TwicePrimePower { p: u64, k: u32 },
    /// `n` odd and not a prime power.
    OddNonPrimePower,
    /// `n` even, neither a prime power nor twice one.
    EvenAdmissible,
}

impl NClassification {
    /// `n` is neither a prime power nor twice one.
    pub fn is_admissible(&self) -> bool {
        matches!(self, Self::OddNonPrimePower | Self::EvenAdmissible)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::PrimePower { .. } => "PrimePower",
            Self::TwicePrimePower { .. } => "TwicePrimePower",
            Self::OddNonPrimePower => "OddNonPrimePower",
            Self::EvenAdmissible => "EvenAdmissible",
        }
    }
}

impl fmt::Display for NClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PrimePower { p, k } => write!(f, "PrimePower p={p} k={k}"),
            Self::TwicePrimePower { p, k } => write!(f, "TwicePrimePower p={p} k={k}"),
            other => f.write_str(other.name()),
        }
    }
}

pub fn classify(n: u64) -> Result<NClassification> {
    if n < 2 {
        return Err(Error::domain(format!("cannot classify {n}: need n >= 2")));
    }
    if let Some((p, k)) = factorize(n)?.as_prime_power() {
        return Ok(NClassification::PrimePower { p, k });
    }
    if n % 2 == 1 {
        return Ok(NClassification::OddNonPrimePower);
    }
    // n even and not a power of two, so n / 2 >= 3
    match factorize(n / 2)?.as_prime_power() {
        Some((p, k)) if p != 2 => Ok(NClassification::TwicePrimePower { p, k }),
        _ => Ok(NClassification::EvenAdmissible),
    }
}

/// One way of writing `n = p^s + p^t` with `0 <= s < t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePowerRep {
    pub p: u64,
    pub s: u32,
    pub t: u32,
}

impl PrimePowerRep {
    pub fn small_power(&self) -> u64 {
        self.p.pow(self.s)
    }

    pub fn large_power(&self) -> u64 {
        self.p.pow(self.t)
    }

    pub fn value(&self) -> u64 {
        self.small_power() + self.large_power()
    }
}

/// Exponent `e` with `p^e = m`, if any.
fn log_exact(mut m: u64, p: u64) -> Option<u32> {
    if m == 0 {
        return None;
    }
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some(e)
}

/// All representations `n = p^s + p^t`, `0 <= s < t`, sorted by `p`.
///
/// A representation with `s >= 1` forces `p | n`; one with `s = 0` forces
/// `n - 1 = p^t`. Only those primes are examined.
pub fn prime_power_representations(n: u64) -> Result<Vec<PrimePowerRep>> {
    if n < 2 {
        return Err(Error::domain(format!(
            "prime power representations need n >= 2, got {n}"
        )));
    }
    let mut candidates: Vec<u64> = factorize(n)?.factors().iter().map(|&(p, _)| p).collect();
    if n > 2 {
        if let Some((p, _)) = factorize(n - 1)?.as_prime_power() {
            candidates.push(p);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    let mut reps = Vec::new();
    for p in candidates {
        let mut t = 1;
        let mut large = p;
        while large < n {
            if let Some(s) = log_exact(n - large, p) {
                if s < t {
                    reps.push(PrimePowerRep { p, s, t });
                }
            }
            t += 1;
            large = match large.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    Ok(reps)
}

/// Returns `(g, u, v)` with `u a + v b = g`.
///
/// Plain iterative Euclid; when `b` divides `a` exactly (including `a = b`)
/// it yields `u = 0, v = 1`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Canonical solution `b` of `sum b_i c_i = target`, or `None` when the gcd of
/// the coefficients does not divide `target`.
///
/// Coefficients are folded left to right: after step `i` the vector `x`
/// satisfies `sum_{j<=i} x_j c_j = g_i = gcd(c_1..c_i)`. The final `x` is
/// scaled by `target / g`. The result depends only on the input order.
pub fn solve_linear_diophantine(c: &[BigInt], target: &BigInt) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    let mut x: Vec<BigInt> = Vec::with_capacity(c.len());
    for ci in c {
        let (next_g, u, v) = ext_gcd(&g, ci);
        for xj in x.iter_mut() {
            *xj *= &u;
        }
        x.push(v);
        g = next_g;
    }
    if g.is_zero() {
        return target.is_zero().then(|| vec![BigInt::zero(); c.len()]);
    }
    let (scale, rem) = target.div_rem(&g);
    if !rem.is_zero() {
        return None;
    }
    for xj in x.iter_mut() {
        *xj *= &scale;
    }
    Some(x)
}

/// Non-negative gcd of a list; zero for an empty or all-zero list.
pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

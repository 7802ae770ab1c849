//! Which degrees are ruled out, which are known to occur, and the degree
//! bookkeeping for maps that are the identity near a face center.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numtheory::{classify, NClassification};

/// Residues a degree is allowed to take; `modulus == 0` means unconstrained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeConstraint {
    pub modulus: u64,
    pub residues: BTreeSet<u64>,
}

impl DegreeConstraint {
    pub fn unconstrained() -> Self {
        DegreeConstraint {
            modulus: 0,
            residues: BTreeSet::new(),
        }
    }

    pub fn new(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if modulus == 0 {
            if !residues.is_empty() {
                return Err(Error::domain("modulus 0 takes no residues"));
            }
        } else if residues.is_empty() || residues.iter().any(|&r| r >= modulus) {
            return Err(Error::domain(format!(
                "residues {residues:?} invalid for modulus {modulus}"
            )));
        }
        Ok(DegreeConstraint { modulus, residues })
    }

    pub fn is_unconstrained(&self) -> bool {
        self.modulus == 0
    }

    pub fn admits(&self, d: &BigInt) -> bool {
        if self.is_unconstrained() {
            return true;
        }
        let r = d
            .mod_floor(&BigInt::from(self.modulus))
            .to_u64()
            .expect("residue fits the modulus");
        self.residues.contains(&r)
    }
}

impl fmt::Display for DegreeConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unconstrained() {
            return f.write_str("unconstrained");
        }
        let m = self.modulus;
        let pm = [1, m - 1].into_iter().collect::<BTreeSet<_>>();
        if m > 2 && self.residues == pm {
            write!(f, "d ≡ ±1 (mod {m})")
        } else {
            let list: Vec<String> = self.residues.iter().map(u64::to_string).collect();
            if list.len() == 1 {
                write!(f, "d ≡ {} (mod {m})", list[0])
            } else {
                write!(f, "d ≡ {{{}}} (mod {m})", list.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeSetPart {
    All,
    Coset { modulus: u64, residue: u64 },
    Finite(BTreeSet<BigInt>),
}

impl DegreeSetPart {
    pub fn contains(&self, d: &BigInt) -> bool {
        match self {
            DegreeSetPart::All => true,
            DegreeSetPart::Coset { modulus, residue } => {
                d.mod_floor(&BigInt::from(*modulus)) == BigInt::from(*residue)
            }
            DegreeSetPart::Finite(set) => set.contains(d),
        }
    }
}

impl fmt::Display for DegreeSetPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeSetPart::All => f.write_str("all integers"),
            DegreeSetPart::Coset { modulus, residue } => write!(f, "{residue} (mod {modulus})"),
            DegreeSetPart::Finite(set) => {
                let items: Vec<String> = set.iter().map(BigInt::to_string).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    /// The set is exactly the set of attainable degrees.
    Exact,
    /// Every member is attainable; non-members may be attainable too.
    LowerBound,
}

/// A union of degree-set parts with a completeness flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownDegreeSet {
    parts: Vec<DegreeSetPart>,
    completeness: Completeness,
}

impl KnownDegreeSet {
    pub fn all() -> Self {
        KnownDegreeSet {
            parts: vec![DegreeSetPart::All],
            completeness: Completeness::Exact,
        }
    }

    pub fn coset(modulus: u64, residue: u64, completeness: Completeness) -> Self {
        KnownDegreeSet {
            parts: vec![DegreeSetPart::Coset { modulus, residue }],
            completeness,
        }
    }

    pub fn finite<I: IntoIterator<Item = i64>>(values: I, completeness: Completeness) -> Self {
        KnownDegreeSet {
            parts: vec![DegreeSetPart::Finite(values.into_iter().map(BigInt::from).collect())],
            completeness,
        }
    }

    /// Union of the given parts, normalized: `All` absorbs everything, cosets
    /// are deduplicated, and finite members already covered by a coset are
    /// dropped. `All` is always exact.
    pub fn union(parts: impl IntoIterator<Item = DegreeSetPart>, completeness: Completeness) -> Self {
        let mut cosets: Vec<(u64, u64)> = Vec::new();
        let mut finite: BTreeSet<BigInt> = BTreeSet::new();
        for part in parts {
            match part {
                DegreeSetPart::All => return Self::all(),
                DegreeSetPart::Coset { modulus, residue } => {
                    if modulus == 1 {
                        return Self::all();
                    }
                    if !cosets.contains(&(modulus, residue)) {
                        cosets.push((modulus, residue));
                    }
                }
                DegreeSetPart::Finite(set) => finite.extend(set),
            }
        }
        cosets.sort_unstable();
        finite.retain(|d| {
            !cosets
                .iter()
                .any(|&(m, r)| d.mod_floor(&BigInt::from(m)) == BigInt::from(r))
        });
        let mut out = Vec::new();
        if !finite.is_empty() {
            out.push(DegreeSetPart::Finite(finite));
        }
        out.extend(
            cosets
                .into_iter()
                .map(|(modulus, residue)| DegreeSetPart::Coset { modulus, residue }),
        );
        KnownDegreeSet {
            parts: out,
            completeness,
        }
    }

    pub fn parts(&self) -> &[DegreeSetPart] {
        &self.parts
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    pub fn is_all(&self) -> bool {
        self.parts.iter().any(|p| matches!(p, DegreeSetPart::All))
    }

    pub fn contains(&self, d: &BigInt) -> bool {
        self.parts.iter().any(|p| p.contains(d))
    }

    /// Members of the set with `|d| <= bound`, ascending.
    pub fn members_within(&self, bound: u64) -> Vec<BigInt> {
        let b = bound as i64;
        (-b..=b)
            .map(BigInt::from)
            .filter(|d| self.contains(d))
            .collect()
    }
}

impl fmt::Display for KnownDegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        let tag = match self.completeness {
            Completeness::Exact => "exact",
            Completeness::LowerBound => "lower bound",
        };
        if parts.is_empty() {
            write!(f, "{{}} ({tag})")
        } else {
            write!(f, "{} ({tag})", parts.join(" ∪ "))
        }
    }
}

/// `gcd(C(n,1), ..., C(n,n-1))`.
pub fn gcd_binomials(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain(format!("gcd_binomials needs n >= 2, got {n}")));
    }
    // walk the row with C(n,k+1) = C(n,k) (n-k) / (k+1); gcd only shrinks
    let mut c = BigInt::one();
    let mut g = BigInt::zero();
    for k in 0..n - 1 {
        c = c * (n - k) / (k + 1);
        g = g.gcd(&c);
        if g.is_one() {
            break;
        }
    }
    Ok(g.to_u64().expect("gcd divides n"))
}

/// Residues forced on every equivariant degree by orbit-size divisibility.
pub fn necessary_constraint(n: u64) -> Result<DegreeConstraint> {
    Ok(match classify(n)? {
        NClassification::PrimePower { p, .. } => DegreeConstraint::new(p, [1 % p])?,
        NClassification::TwicePrimePower { p, .. } => DegreeConstraint::new(p, [1, p - 1])?,
        _ => DegreeConstraint::unconstrained(),
    })
}

/// Degrees known to be attained by some equivariant self-map of `Σ_n`.
pub fn known_attainable(n: u64) -> Result<KnownDegreeSet> {
    if n == 2 {
        // two-point sphere: identity and swap
        return Ok(KnownDegreeSet::finite([-1, 1], Completeness::Exact));
    }
    Ok(match classify(n)? {
        NClassification::OddNonPrimePower => KnownDegreeSet::all(),
        NClassification::PrimePower { p, .. } if p != 2 => {
            KnownDegreeSet::coset(p, 1, Completeness::Exact)
        }
        NClassification::PrimePower { .. } | NClassification::TwicePrimePower { .. } => {
            KnownDegreeSet::finite([1], Completeness::LowerBound)
        }
        NClassification::EvenAdmissible => KnownDegreeSet::finite([0, 1], Completeness::LowerBound),
    })
}

/// `1 + e_1 (d_1 - 1) + sum_{i=2..l} e_i (d_i - d_{i-1}) - e_{l+1} d_l`.
pub fn join_degree(ds: &[BigInt], eps: &[bool]) -> Result<BigInt> {
    if ds.is_empty() {
        return Err(Error::domain("join_degree needs at least one map degree"));
    }
    if eps.len() != ds.len() + 1 {
        return Err(Error::domain(format!(
            "join_degree needs {} switches for {} degrees, got {}",
            ds.len() + 1,
            ds.len(),
            eps.len()
        )));
    }
    let mut total = BigInt::one();
    let mut prev = BigInt::one();
    for (d, &e) in ds.iter().zip(eps) {
        if e {
            total += d - &prev;
        }
        prev = d.clone();
    }
    if eps[ds.len()] {
        total -= &prev;
    }
    Ok(total)
}

/// A `±1` chain for [`join_degree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinChain {
    pub ds: Vec<BigInt>,
    pub eps: Vec<bool>,
}

impl JoinChain {
    pub fn evaluate(&self) -> BigInt {
        join_degree(&self.ds, &self.eps).expect("chains are well formed")
    }
}

/// A chain of degrees `±1` whose join degree is `target`.
///
/// Starts from the one-element chain closest to the target (values -1, 0, 1
/// and 2 are reachable directly), then appends one map at a time, flipping
/// the last switch so each step moves the degree by exactly one.
pub fn increment_chain(target: i64) -> JoinChain {
    let (d1, e1, e2, start) = match target {
        t if t >= 2 => (-1, false, true, 2),
        1 => (1, false, false, 1),
        0 => (-1, true, true, 0),
        _ => (-1, true, false, -1),
    };
    let mut ds = vec![BigInt::from(d1)];
    let mut eps = vec![e1, e2];
    let mut value = start;
    while value != target {
        let step = if target > value { 1 } else { -1 };
        let last = *eps.last().expect("chain has switches");
        // change = (e_last - e_new) * d_new with e_new = !e_last
        let diff = if last { 1 } else { -1 };
        ds.push(BigInt::from(step * diff));
        eps.push(!last);
        value += step;
    }
    JoinChain { ds, eps }
}

/// Degrees a map fixed near a `(k-1)`-face center may carry, per the case
/// analysis on the join `Σ_k * Σ_{n-k}`.
pub fn admissible_local_degrees(n: u64, k: u64) -> Result<KnownDegreeSet> {
    if n < 2 || k == 0 || k >= n {
        return Err(Error::domain(format!(
            "local degree needs 1 <= k <= n-1, got n={n} k={k}"
        )));
    }
    if k % 2 == 0 || (n - k) % 2 == 0 {
        return Ok(KnownDegreeSet::all());
    }
    let mut parts = vec![DegreeSetPart::Finite([BigInt::zero(), BigInt::one()].into())];
    for m in [k, n - k] {
        // Σ_1 is empty and contributes nothing
        if m >= 2 {
            parts.extend(known_attainable(m)?.parts().iter().cloned());
        }
    }
    Ok(KnownDegreeSet::union(parts, Completeness::LowerBound))
}

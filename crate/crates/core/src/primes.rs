//! Prime moduli `p` for which `Z/p` has no acyclic matching from some set to
//! itself.
//!
//! Two families are covered. If `p ≡ 7 (mod 8)` the nonzero squares form a
//! set of odd size containing `2`, so `2a ∈ A` for every `a ∈ A`. If the
//! multiplicative order of `2` is odd the powers of `2` form such a set. In
//! both cases no matching `A → A` fixes a point, while in an abelian group
//! every acyclic matching from a set of odd size to itself must fix one.
//!
//! The sets are multiplicative objects but the matchings live in the
//! additive group `Z/p`; doubling below always means `a + a`.

use std::io::Write;
use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::matching::{AcyclicSearch, Matching, SubsetPair};

/// Largest set size for which verdicts enumerate every matching.
pub const EXHAUSTIVE_SIZE: usize = 12;

/// Default cap on the matchings enumerated for one exhaustive verdict.
pub const DEFAULT_ENUMERATION_CAP: usize = 20_000_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

fn require_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::Precondition("p must be odd".into()));
    }
    Ok(())
}

fn residue(p: u64, x: u64) -> Result<Element> {
    usize::try_from(x % p).map_err(|_| Error::Precondition(format!("{p} does not fit an element index")))
}

/// Nonzero squares modulo `p`, ascending.
pub fn quadratic_residues(p: u64) -> Result<Vec<Element>> {
    require_odd_prime(p)?;
    let mut out = (1..=(p - 1) / 2)
        .map(|n| residue(p, ((n as u128 * n as u128) % p as u128) as u64))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Least `m ≥ 1` with `a^m ≡ 1 (mod p)`.
pub fn multiplicative_order(a: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let a = a % p;
    if a == 0 {
        return Err(Error::Precondition(format!("{a} is not invertible modulo {p}")));
    }
    let mut x = a;
    let mut m = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % p as u128) as u64;
        m += 1;
    }
    Ok(m)
}

/// The powers of `2` modulo `p`, ascending.
pub fn two_power_subset(p: u64) -> Result<Vec<Element>> {
    require_odd_prime(p)?;
    let mut out = Vec::new();
    let mut x = 1u64;
    loop {
        out.push(residue(p, x)?);
        x = x * 2 % p;
        if x == 1 {
            break;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// `a + a ∈ A` for every `a ∈ A`, in `Z/p`.
pub fn doubling_closed(p: u64, a: &[Element]) -> bool {
    a.iter().all(|&x| a.binary_search(&((2 * x) % p as usize)).is_ok())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `p ≡ 7 (mod 8)`, `A` the nonzero squares.
    QuadraticResidues,
    /// `ord_p(2)` odd, `A` the powers of two.
    PowersOfTwo,
}

impl Family {
    pub fn contains(self, p: u64) -> bool {
        if !is_prime(p) || p == 2 {
            return false;
        }
        match self {
            Family::QuadraticResidues => p % 8 == 7,
            Family::PowersOfTwo => multiplicative_order(2, p).is_ok_and(|m| m % 2 == 1),
        }
    }
}

/// Facts that together rule out an acyclic matching `A → A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub size: usize,
    pub size_odd: bool,
    pub zero_excluded: bool,
    /// For the squares family: `2` is itself a nonzero square.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_is_square: Option<bool>,
    /// For the powers-of-two family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_of_two: Option<u64>,
    pub doubling_closed: bool,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.size_odd
            && self.zero_excluded
            && self.doubling_closed
            && self.two_is_square != Some(false)
            && self.order_of_two.is_none_or(|m| m % 2 == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exhaustive {
    pub matchings: usize,
    pub multiplicity_classes: usize,
    pub acyclic: usize,
    /// Whether the enumeration cap was reached.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub p: u64,
    pub family: Family,
    pub subset: Vec<Element>,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<Exhaustive>,
}

impl PrimeVerdict {
    /// Certificate holds and any completed enumeration found no acyclic matching.
    pub fn no_acyclic_matching(&self) -> bool {
        self.certificate.holds() && self.exhaustive.as_ref().is_none_or(|e| e.truncated || e.acyclic == 0)
    }

    pub fn verified_absent(&self) -> bool {
        self.certificate.holds() && self.exhaustive.as_ref().is_some_and(|e| !e.truncated && e.acyclic == 0)
    }
}

fn exhaustive_check(p: u64, a: &[Element], cap: usize) -> Result<Exhaustive> {
    let g = Group::cyclic(p as usize)?;
    let pair = SubsetPair::new(g, a.to_vec(), a.to_vec())?;
    let census = pair.multiplicity_census(cap)?;
    Ok(Exhaustive {
        matchings: census.matchings,
        multiplicity_classes: census.classes,
        acyclic: census.acyclic.len(),
        truncated: census.truncated,
    })
}

/// Options for the enumeration side of a verdict.
#[derive(Clone, Copy, Debug)]
pub struct ExhaustiveOptions {
    /// Enumerate only when `p` is at most this.
    pub max_p: u64,
    pub cap: usize,
}

impl Default for ExhaustiveOptions {
    fn default() -> Self {
        ExhaustiveOptions { max_p: 31, cap: DEFAULT_ENUMERATION_CAP }
    }
}

fn verdict(p: u64, family: Family, subset: Vec<Element>, opts: ExhaustiveOptions) -> Result<PrimeVerdict> {
    let residues = if family == Family::QuadraticResidues { Some(quadratic_residues(p)?) } else { None };
    let certificate = Certificate {
        size: subset.len(),
        size_odd: subset.len() % 2 == 1,
        zero_excluded: subset.binary_search(&0).is_err(),
        two_is_square: residues.map(|r| r.binary_search(&residue(p, 2).unwrap_or(0)).is_ok()),
        order_of_two: (family == Family::PowersOfTwo).then(|| multiplicative_order(2, p)).transpose()?,
        doubling_closed: doubling_closed(p, &subset),
    };
    let exhaustive = if p <= opts.max_p && subset.len() <= EXHAUSTIVE_SIZE {
        Some(exhaustive_check(p, &subset, opts.cap)?)
    } else {
        None
    };
    Ok(PrimeVerdict { p, family, subset, certificate, exhaustive })
}

/// Verdict for the nonzero squares modulo `p ≡ 7 (mod 8)`.
pub fn check_quadratic_residue_family(p: u64, opts: ExhaustiveOptions) -> Result<PrimeVerdict> {
    require_odd_prime(p)?;
    if p % 8 != 7 {
        return Err(Error::Precondition(format!("{p} is not 7 modulo 8")));
    }
    verdict(p, Family::QuadraticResidues, quadratic_residues(p)?, opts)
}

/// Verdict for the powers of two modulo `p` when `ord_p(2)` is odd.
pub fn check_two_power_family(p: u64, opts: ExhaustiveOptions) -> Result<PrimeVerdict> {
    require_odd_prime(p)?;
    let m = multiplicative_order(2, p)?;
    if m % 2 == 0 {
        return Err(Error::Precondition(format!("the order of 2 modulo {p} is {m}, which is even")));
    }
    verdict(p, Family::PowersOfTwo, two_power_subset(p)?, opts)
}

pub fn check_family(family: Family, p: u64, opts: ExhaustiveOptions) -> Result<PrimeVerdict> {
    match family {
        Family::QuadraticResidues => check_quadratic_residue_family(p, opts),
        Family::PowersOfTwo => check_two_power_family(p, opts),
    }
}

/// Verdicts for every prime `p ≤ upto` in the family.
pub fn family_table(family: Family, upto: u64, opts: ExhaustiveOptions) -> Result<Vec<PrimeVerdict>> {
    let primes: Vec<u64> = (3..=upto).filter(|&p| family.contains(p)).collect();
    primes.into_par_iter().map(|p| check_family(family, p, opts)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Audit {
    pub matchings: usize,
    pub acyclic: Vec<Matching>,
    /// Acyclic matchings without a fixed point.
    pub violations: Vec<Matching>,
}

impl Audit {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerates all matchings `A → A` and checks that every acyclic one fixes
/// some element.
pub fn fixed_point_audit(g: &Group, a: &[Element]) -> Result<Audit> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    if a.len().is_multiple_of(2) {
        return Err(Error::Precondition("|A| must be odd".into()));
    }
    if a.len() > EXHAUSTIVE_SIZE {
        return Err(Error::TooLarge { size: a.len(), limit: EXHAUSTIVE_SIZE });
    }
    if a.contains(&g.identity()) {
        return Err(Error::Precondition("A must not contain the identity".into()));
    }
    let pair = SubsetPair::new(g.clone(), a.to_vec(), a.to_vec())?;
    let census = pair.multiplicity_census(usize::MAX)?;
    let violations =
        census.acyclic.iter().filter(|m| m.sigma().iter().enumerate().all(|(i, &j)| i != j)).cloned().collect();
    Ok(Audit { matchings: census.matchings, acyclic: census.acyclic, violations })
}

/// Outcome of the acyclic-matching search for one scanned pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairVerdict {
    Acyclic,
    /// Matchings exist but none is acyclic.
    NoAcyclic,
    NoMatching,
    /// The budget ran out while searching.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScannedPair {
    pub index: usize,
    #[serde(rename = "A")]
    pub a: Vec<Element>,
    #[serde(rename = "B")]
    pub b: Vec<Element>,
    pub verdict: PairVerdict,
    pub examined: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub p: u64,
    pub size_cap: usize,
    pub budget: u64,
    pub seed: u64,
    pub exhaustive: bool,
    /// Number of pairs in an exhaustive scan.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_pairs: Option<usize>,
    pub pairs_scanned: usize,
    pub budget_used: u64,
    pub acyclic_found: usize,
    pub no_matching: usize,
    /// First pair without an acyclic matching.
    pub witness: Option<ScannedPair>,
    /// Pair during which the budget ran out.
    pub inconclusive: Option<ScannedPair>,
    /// Exhaustive scans that covered every pair, and sampled scans that used up the budget, without a witness.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub p: u64,
    pub size_cap: usize,
    /// Total work units; each pair costs the number of matchings examined, at least one.
    pub budget: u64,
    pub seed: u64,
    /// Primes up to this are scanned exhaustively.
    pub exhaustive_upto: u64,
}

impl ScanConfig {
    pub fn new(p: u64, size_cap: usize, budget: u64, seed: u64) -> Self {
        ScanConfig { p, size_cap, budget, seed, exhaustive_upto: 7 }
    }
}

const CHUNK: usize = 64;

fn subsets(n: usize, k: usize, offset: usize) -> Vec<Vec<Element>> {
    fn go(start: usize, n: usize, k: usize, offset: usize, cur: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x + offset);
            go(x + 1, n, k, offset, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, offset, &mut Vec::new(), &mut out);
    out
}

fn all_pairs(p: usize, size_cap: usize) -> Vec<(Vec<Element>, Vec<Element>)> {
    let mut out = Vec::new();
    for k in 1..=size_cap {
        let bs = subsets(p - 1, k, 1);
        for a in subsets(p, k, 0) {
            for b in &bs {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn random_pair(rng: &mut ChaCha8Rng, p: usize, size_cap: usize) -> (Vec<Element>, Vec<Element>) {
    let k = rng.gen_range(1..=size_cap);
    let mut a = index::sample(rng, p, k).into_vec();
    let mut b: Vec<Element> = index::sample(rng, p - 1, k).into_iter().map(|x| x + 1).collect();
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

fn search(g: &Group, a: &[Element], b: &[Element], cap: usize) -> Result<(PairVerdict, usize)> {
    let pair = SubsetPair::new(g.clone(), a.to_vec(), b.to_vec())?;
    Ok(match pair.find_acyclic_matching(cap)? {
        AcyclicSearch::Found { examined, .. } => (PairVerdict::Acyclic, examined),
        AcyclicSearch::VerifiedAbsent { examined: 0 } => (PairVerdict::NoMatching, 0),
        AcyclicSearch::VerifiedAbsent { examined } => (PairVerdict::NoAcyclic, examined),
        AcyclicSearch::Inconclusive { examined } => (PairVerdict::Inconclusive, examined),
    })
}

/// Searches `Z/p` for a pair `(A, B)` with matchings but no acyclic one.
///
/// Small primes are scanned over every pair, larger ones by seeded sampling
/// until the budget is spent. Each pair is appended to `log` as one JSON
/// line. Results do not depend on the number of worker threads.
pub fn acyclic_property_scan(config: &ScanConfig, mut log: Option<&mut dyn Write>) -> Result<ScanReport> {
    let ScanConfig { p, size_cap, budget, seed, exhaustive_upto } = *config;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if size_cap == 0 || size_cap as u64 > p - 1 {
        return Err(Error::Precondition(format!("size cap must lie in 1..={}", p - 1)));
    }
    if size_cap > crate::matching::ENUMERATION_LIMIT {
        return Err(Error::TooLarge { size: size_cap, limit: crate::matching::ENUMERATION_LIMIT });
    }
    if budget == 0 {
        return Err(Error::Precondition("budget must be positive".into()));
    }
    let g = Group::cyclic(p as usize)?;
    let exhaustive = p <= exhaustive_upto;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = if exhaustive { all_pairs(p as usize, size_cap) } else { Vec::new() };
    let total_pairs = exhaustive.then_some(all.len());
    let mut pool = all.into_iter();

    let mut report = ScanReport {
        p,
        size_cap,
        budget,
        seed,
        exhaustive,
        total_pairs,
        pairs_scanned: 0,
        budget_used: 0,
        acyclic_found: 0,
        no_matching: 0,
        witness: None,
        inconclusive: None,
        complete: false,
    };
    loop {
        let remaining = budget - report.budget_used;
        if remaining == 0 {
            report.complete = !exhaustive || Some(report.pairs_scanned) == total_pairs;
            break;
        }
        let chunk: Vec<(Vec<Element>, Vec<Element>)> = if exhaustive {
            pool.by_ref().take(CHUNK).collect()
        } else {
            (0..CHUNK).map(|_| random_pair(&mut rng, p as usize, size_cap)).collect()
        };
        if chunk.is_empty() {
            report.complete = true;
            break;
        }
        let cap = usize::try_from(remaining).unwrap_or(usize::MAX);
        let results: Vec<(Result<(PairVerdict, usize)>, u128)> = chunk
            .par_iter()
            .map(|(a, b)| {
                let start = Instant::now();
                let r = search(&g, a, b, cap);
                (r, start.elapsed().as_micros())
            })
            .collect();
        let mut stop = false;
        for ((a, b), (result, micros)) in chunk.into_iter().zip(results) {
            let remaining = budget - report.budget_used;
            if remaining == 0 {
                break;
            }
            let (mut verdict, mut examined) = result?;
            // a smaller cap truncates the same deterministic search
            if examined as u64 > remaining {
                verdict = PairVerdict::Inconclusive;
                examined = remaining as usize;
            }
            let charge = (examined as u64).max(1);
            report.budget_used += charge.min(remaining);
            let scanned = ScannedPair { index: report.pairs_scanned, a, b, verdict, examined };
            report.pairs_scanned += 1;
            if let Some(w) = log.as_deref_mut() {
                let line = json!({
                    "seed": seed,
                    "p": p,
                    "index": scanned.index,
                    "pair": {"A": scanned.a, "B": scanned.b},
                    "verdict": scanned.verdict,
                    "examined": scanned.examined,
                    "elapsed_us": micros as u64,
                });
                writeln!(w, "{line}").map_err(|e| Error::Precondition(format!("log write failed: {e}")))?;
            }
            match verdict {
                PairVerdict::Acyclic => report.acyclic_found += 1,
                PairVerdict::NoMatching => report.no_matching += 1,
                PairVerdict::NoAcyclic => {
                    report.witness = Some(scanned);
                    stop = true;
                }
                PairVerdict::Inconclusive => {
                    report.inconclusive = Some(scanned);
                    stop = true;
                }
            }
            if stop {
                break;
            }
        }
        if stop {
            break;
        }
    }
    Ok(report)
}

impl ScanReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("scan report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_and_orders() {
        assert_eq!(quadratic_residues(7).unwrap(), vec![1, 2, 4]);
        assert_eq!(quadratic_residues(5).unwrap(), vec![1, 4]);
        assert_eq!(quadratic_residues(3).unwrap(), vec![1]);
        assert_eq!(quadratic_residues(9).unwrap_err(), Error::NotPrime(9));
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(1, 13).unwrap(), 1);
        assert_eq!(multiplicative_order(2, 23).unwrap(), 11);
        assert!(multiplicative_order(7, 7).is_err());
        assert_eq!(two_power_subset(7).unwrap(), vec![1, 2, 4]);
        assert_eq!(two_power_subset(5).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(two_power_subset(3).unwrap(), vec![1, 2]);
    }

    #[test]
    fn square_family_verdicts() {
        let v = check_quadratic_residue_family(7, ExhaustiveOptions::default()).unwrap();
        assert!(v.certificate.holds());
        let e = v.exhaustive.unwrap();
        assert_eq!((e.matchings, e.acyclic, e.truncated), (2, 0, false));
        let v = check_quadratic_residue_family(23, ExhaustiveOptions { max_p: 0, cap: 1 }).unwrap();
        assert_eq!(v.certificate.size, 11);
        assert_eq!(v.certificate.two_is_square, Some(true));
        assert!(v.certificate.holds());
        assert!(check_quadratic_residue_family(5, ExhaustiveOptions::default()).is_err());
    }

    #[test]
    fn two_power_family_verdicts() {
        let v = check_two_power_family(31, ExhaustiveOptions::default()).unwrap();
        assert_eq!(v.subset, vec![1, 2, 4, 8, 16]);
        assert_eq!(v.certificate.order_of_two, Some(5));
        assert!(v.verified_absent());
        assert!(check_two_power_family(7, ExhaustiveOptions::default()).unwrap().verified_absent());
        assert!(check_two_power_family(5, ExhaustiveOptions::default()).is_err());
    }

    #[test]
    fn audit_examples() {
        let z7 = Group::cyclic(7).unwrap();
        let a = fixed_point_audit(&z7, &[1, 2, 4]).unwrap();
        assert!(a.holds() && a.acyclic.is_empty());
        let z9 = Group::cyclic(9).unwrap();
        assert!(fixed_point_audit(&z9, &[1, 3, 5]).unwrap().holds());
        let a = fixed_point_audit(&z9, &[4]).unwrap();
        assert_eq!(a.acyclic.len(), 1);
        assert!(fixed_point_audit(&z9, &[1, 2]).is_err());
        assert!(fixed_point_audit(&z9, &[0, 1, 2]).is_err());
    }

    #[test]
    fn scan_examples() {
        let r = acyclic_property_scan(&ScanConfig::new(3, 2, 1_000, 1), None).unwrap();
        // 3·2 singleton pairs and 3·1 pairs of size two
        assert_eq!(r.pairs_scanned, 9);
        assert!(r.complete && r.witness.is_none());

        let r = acyclic_property_scan(&ScanConfig::new(5, 1, 1_000, 1), None).unwrap();
        assert_eq!(r.acyclic_found, r.pairs_scanned);

        let mut log = Vec::new();
        let r = acyclic_property_scan(&ScanConfig::new(7, 3, 100_000, 1), Some(&mut log)).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.verdict, PairVerdict::NoAcyclic);
        let lines = String::from_utf8(log).unwrap();
        assert_eq!(lines.lines().count(), r.pairs_scanned);
    }

    #[test]
    fn scan_budget_marks_inconclusive() {
        let r = acyclic_property_scan(&ScanConfig::new(7, 3, 3, 1), None).unwrap();
        assert_eq!(r.budget_used, 3);
        assert!(!r.complete);
        let r = acyclic_property_scan(&ScanConfig::new(11, 4, 50, 9), None).unwrap();
        assert!(r.budget_used <= 50);
        assert_eq!(r, acyclic_property_scan(&ScanConfig::new(11, 4, 50, 9), None).unwrap());
    }
}

//! Galois group identification from Frobenius cycle types.
//!
//! Exact answers come from the quadratic and quartic oracles and from the
//! Jordan-type certificate for S_n; everything else is a statistical
//! comparison against a predicted group's cycle-type distribution.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmat::{Rational, RationalPolynomial};
use crate::modpoly::{
    frobenius_cycle_type_with_multiplicity, is_prime, CycleType, FrobeniusStatus,
};
use crate::permkit::{
    enumerate, factorial, to_f64_distribution, total_variation, EnumeratedGroup, Permutation,
};
use crate::picatalog::PredictedGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("input polynomial is not squarefree (or not a power of a squarefree polynomial)")]
    NotSquarefreeInput,
    #[error("degree mismatch: samples have degree {samples}, target acts on {target} points")]
    DegreeMismatch { samples: usize, target: usize },
    #[error("expected a polynomial of degree {expected}, got {actual:?}")]
    WrongDegree {
        expected: usize,
        actual: Option<usize>,
    },
}

/// Frobenius cycle-type counts over the good primes that were tried.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleSummary {
    pub degree: usize,
    pub good_count: usize,
    pub bad_count: usize,
    pub counts: BTreeMap<CycleType, usize>,
}

impl SampleSummary {
    pub fn new(degree: usize) -> Self {
        SampleSummary {
            degree,
            ..Default::default()
        }
    }

    pub fn record(&mut self, t: CycleType) {
        self.good_count += 1;
        *self.counts.entry(t).or_insert(0) += 1;
    }

    /// Exact empirical frequencies over good samples.
    pub fn empirical(&self) -> BTreeMap<CycleType, Rational> {
        let total = BigInt::from(self.good_count);
        self.counts
            .iter()
            .map(|(t, &c)| (t.clone(), Rational::new(BigInt::from(c), total.clone())))
            .collect()
    }

    pub fn empirical_f64(&self) -> BTreeMap<CycleType, f64> {
        to_f64_distribution(&self.empirical())
    }

    pub fn observed(&self, t: &CycleType) -> bool {
        self.counts.contains_key(t)
    }
}

/// Frobenius samples of `f` at ascending primes of `[lo, hi]`, stopping after
/// `budget` good ones.
pub fn collect_samples(
    f: &RationalPolynomial,
    lo: u64,
    hi: u64,
    budget: usize,
) -> Result<SampleSummary, GaloisError> {
    collect_samples_with_multiplicity(f, 1, &crate::modpoly::primes_in(lo, hi), budget)
}

/// As [`collect_samples`] for `f = g^m` with `g` squarefree: cycle types are
/// those of `g`, each part repeated `m` times, over the given primes.
pub fn collect_samples_with_multiplicity(
    f: &RationalPolynomial,
    m: u32,
    primes: &[u64],
    budget: usize,
) -> Result<SampleSummary, GaloisError> {
    let degree = f.degree().ok_or(GaloisError::NotSquarefreeInput)?;
    if f.squarefree_root(m).is_none() {
        return Err(GaloisError::NotSquarefreeInput);
    }
    let f = f.monic();
    let mut summary = SampleSummary::new(degree);
    for &p in primes {
        if summary.good_count >= budget {
            break;
        }
        let s = frobenius_cycle_type_with_multiplicity(&f, m, p);
        match (s.status, s.cycle_type) {
            (FrobeniusStatus::Good, Some(t)) => summary.record(t),
            _ => summary.bad_count += 1,
        }
    }
    Ok(summary)
}

/// True iff the rational number is the square of a rational.
pub fn is_rational_square(x: &Rational) -> bool {
    if x.is_negative() {
        return false;
    }
    let is_sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    is_sq(x.numer()) && is_sq(x.denom())
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative_int(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Integer roots of a monic squarefree integer polynomial (ascending
/// coefficients), by Hensel lifting the roots modulo a prime of good
/// reduction past the Cauchy bound.
fn integer_roots_monic(g: &[BigInt]) -> Vec<BigInt> {
    let n = g.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let bound = g[..n].iter().map(|c| c.abs()).max().unwrap_or_default() + BigInt::one();
    let dg = derivative_int(g);
    let mut p = 3u64;
    let reduced = loop {
        if is_prime(p) {
            let pb = BigInt::from(p);
            let red: Vec<u64> = g
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect();
            let poly = crate::exactmat::PrimeFieldPolynomial::new(p, red.clone());
            if poly.is_squarefree() {
                break red;
            }
        }
        p += 2;
    };
    let pb = BigInt::from(p);
    let eval_mod = |x: u64| red_eval(&reduced, x, p);
    let mut out = Vec::new();
    for r0 in 0..p {
        if eval_mod(r0) != 0 {
            continue;
        }
        let mut r = BigInt::from(r0);
        let mut modulus = pb.clone();
        while modulus <= &bound * 2 {
            modulus = &modulus * &modulus;
            let fr = eval_int(g, &r).mod_floor(&modulus);
            let dfr = eval_int(&dg, &r).mod_floor(&modulus);
            let inv = mod_inverse(&dfr, &modulus).expect("simple root modulo p");
            r = (&r - fr * inv).mod_floor(&modulus);
        }
        let cand = if &r * 2 > modulus { &r - &modulus } else { r };
        if eval_int(g, &cand).is_zero() {
            out.push(cand);
        }
    }
    out
}

fn red_eval(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| {
        ((acc as u128 * x as u128 + c as u128) % p as u128) as u64
    })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Distinct rational roots of a nonzero polynomial, ascending.
pub fn rational_roots(f: &RationalPolynomial) -> Vec<Rational> {
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let mut rad = f.radical();
    let mut roots = Vec::new();
    if rad.coeff(0).is_zero() {
        roots.push(Rational::zero());
        rad = rad.div_rem(&RationalPolynomial::from_ints(&[0, 1])).0;
    }
    let ints = rad.primitive_integer();
    let n = ints.len() - 1;
    if n > 0 {
        // x = y / c_n turns c_n^{n-1}·F(y/c_n) into a monic integer polynomial in y
        let lead = ints[n].clone();
        let mut g: Vec<BigInt> = Vec::with_capacity(n + 1);
        for (i, c) in ints.iter().enumerate().take(n) {
            g.push(c * num_traits::pow(lead.clone(), n - 1 - i));
        }
        g.push(BigInt::one());
        for y in integer_roots_monic(&g) {
            roots.push(Rational::new(y, lead.clone()));
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Named Galois groups reachable by the exact oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GaloisName {
    Trivial,
    C2,
    C3,
    S3,
    C4,
    V4,
    D4,
    A4,
    S4,
}

impl GaloisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            GaloisName::Trivial => "1",
            GaloisName::C2 => "C2",
            GaloisName::C3 => "C3",
            GaloisName::S3 => "S3",
            GaloisName::C4 => "C4",
            GaloisName::V4 => "V4",
            GaloisName::D4 => "D4",
            GaloisName::A4 => "A4",
            GaloisName::S4 => "S4",
        }
    }

    /// Quartic classification label: groups of order below that of any
    /// transitive quartic group, and intransitive ones other than V4, are
    /// reported as "smaller".
    pub fn quartic_label(&self) -> &'static str {
        match self {
            GaloisName::C4 | GaloisName::V4 | GaloisName::D4 | GaloisName::A4 | GaloisName::S4 => {
                self.as_str()
            }
            _ => "smaller",
        }
    }
}

/// Exact Galois group together with its action on the roots.
#[derive(Clone, Debug)]
pub struct ExactGalois {
    pub name: GaloisName,
    pub group: EnumeratedGroup,
}

fn perm_group(n: usize, gens: &[&[&[usize]]]) -> EnumeratedGroup {
    let gens: Vec<Permutation> = gens
        .iter()
        .map(|cycles| Permutation::from_cycles(n, cycles).expect("valid cycles"))
        .collect();
    enumerate(n, &gens, factorial(n)).expect("subgroup of S_n")
}

fn exact(name: GaloisName, n: usize, gens: &[&[&[usize]]]) -> ExactGalois {
    ExactGalois {
        name,
        group: perm_group(n, gens),
    }
}

fn discriminant_quadratic(f: &RationalPolynomial) -> Rational {
    let (a, b, c) = (f.coeff(2), f.coeff(1), f.coeff(0));
    &b * &b - Rational::from_integer(4.into()) * a * c
}

/// Discriminant of the monic cubic x³ + p x² + q x + s.
fn discriminant_monic_cubic(p: &Rational, q: &Rational, s: &Rational) -> Rational {
    let r = |n: i64| Rational::from_integer(n.into());
    r(18) * p * q * s - r(4) * p * p * p * s + p * p * q * q - r(4) * q * q * q - r(27) * s * s
}

/// Galois group of a squarefree quadratic: trivial iff the discriminant is a
/// rational square.
pub fn quadratic_galois(f: &RationalPolynomial) -> Result<ExactGalois, GaloisError> {
    if f.degree() != Some(2) {
        return Err(GaloisError::WrongDegree {
            expected: 2,
            actual: f.degree(),
        });
    }
    if !f.is_squarefree() {
        return Err(GaloisError::NotSquarefreeInput);
    }
    Ok(if is_rational_square(&discriminant_quadratic(f)) {
        exact(GaloisName::Trivial, 2, &[])
    } else {
        exact(GaloisName::C2, 2, &[&[&[0, 1]]])
    })
}

fn cubic_galois_irreducible(f: &RationalPolynomial) -> ExactGalois {
    let f = f.monic();
    let d = discriminant_monic_cubic(&f.coeff(2), &f.coeff(1), &f.coeff(0));
    if is_rational_square(&d) {
        exact(GaloisName::C3, 3, &[&[&[0, 1, 2]]])
    } else {
        exact(GaloisName::S3, 3, &[&[&[0, 1, 2]], &[&[0, 1]]])
    }
}

/// Monic quadratic y² + s y + t split into rational roots, if possible.
fn split_quadratic(s: &Rational, t: &Rational) -> Option<(Rational, Rational)> {
    let two = Rational::from_integer(2.into());
    let disc = s * s - Rational::from_integer(4.into()) * t;
    if !is_rational_square(&disc) {
        return None;
    }
    let root = Rational::new(disc.numer().sqrt(), disc.denom().sqrt());
    Some(((-s + &root) / &two, (-s - root) / two))
}

/// y² + s y + t splits over Q(√D).
fn splits_over_quadratic_field(s: &Rational, t: &Rational, d: &Rational) -> bool {
    let disc = s * s - Rational::from_integer(4.into()) * t;
    disc.is_zero() || is_rational_square(&disc) || is_rational_square(&(disc * d))
}

/// Exact Galois group of a squarefree quartic, with its action on the four
/// roots: rational-root and quadratic-factor case analysis for reducible
/// inputs, resolvent cubic and discriminant for irreducible ones.
pub fn quartic_galois_exact(f: &RationalPolynomial) -> Result<ExactGalois, GaloisError> {
    if f.degree() != Some(4) {
        return Err(GaloisError::WrongDegree {
            expected: 4,
            actual: f.degree(),
        });
    }
    if !f.is_squarefree() {
        return Err(GaloisError::NotSquarefreeInput);
    }
    let f = f.monic();

    let roots = rational_roots(&f);
    if !roots.is_empty() {
        let mut rest = f.clone();
        for r in &roots {
            rest = rest.div_rem(&RationalPolynomial::linear(r.clone())).0;
        }
        // remaining irreducible factor acts on the last points; rational roots are fixed
        return Ok(match rest.degree() {
            Some(0) | Some(1) => exact(GaloisName::Trivial, 4, &[]),
            Some(2) => exact(GaloisName::C2, 4, &[&[&[2, 3]]]),
            Some(3) => {
                let c = cubic_galois_irreducible(&rest);
                let gens: Vec<Permutation> =
                    c.group.generators().iter().map(|g| g.embed(4, 1)).collect();
                ExactGalois {
                    name: c.name,
                    group: enumerate(4, &gens, 24).expect("within S_4"),
                }
            }
            _ => unreachable!("a quartic with a rational root leaves degree at most 3"),
        });
    }

    let (a, b, c, d) = (f.coeff(3), f.coeff(2), f.coeff(1), f.coeff(0));
    let four = Rational::from_integer(4.into());
    // resolvent cubic with roots α1α2 + α3α4 and conjugates
    let p = -b.clone();
    let q = &a * &c - &four * &d;
    let s = -(&a * &a * &d - &four * &b * &d + &c * &c);
    let resolvent = RationalPolynomial::new(vec![s.clone(), q.clone(), p.clone(), Rational::one()]);
    let disc = discriminant_monic_cubic(&p, &q, &s);
    let r_roots = rational_roots(&resolvent);

    // product of two rational quadratics?
    for r in &r_roots {
        let Some((v, v2)) = split_quadratic(&-r.clone(), &d) else {
            continue;
        };
        let Some((u, u2)) = split_quadratic(&a, &(&b - r)) else {
            continue;
        };
        let pairing = if &u * &v2 + &u2 * &v == c {
            Some(((u.clone(), v.clone()), (u2.clone(), v2.clone())))
        } else if &u * &v + &u2 * &v2 == c {
            Some(((u, v2), (u2, v)))
        } else {
            None
        };
        if let Some(((u1, v1), (u2, v2))) = pairing {
            let disc1 = &u1 * &u1 - &four * &v1;
            let disc2 = &u2 * &u2 - &four * &v2;
            return Ok(if is_rational_square(&(disc1 * disc2)) {
                exact(GaloisName::C2, 4, &[&[&[0, 1], &[2, 3]]])
            } else {
                exact(GaloisName::V4, 4, &[&[&[0, 1]], &[&[2, 3]]])
            });
        }
    }

    Ok(match r_roots.len() {
        0 if is_rational_square(&disc) => {
            exact(GaloisName::A4, 4, &[&[&[0, 1, 2]], &[&[0, 1], &[2, 3]]])
        }
        0 => exact(GaloisName::S4, 4, &[&[&[0, 1, 2, 3]], &[&[0, 1]]]),
        1 => {
            let r = &r_roots[0];
            let c4 = splits_over_quadratic_field(&-r.clone(), &d, &disc)
                && splits_over_quadratic_field(&a, &(&b - r), &disc);
            if c4 {
                exact(GaloisName::C4, 4, &[&[&[0, 1, 2, 3]]])
            } else {
                exact(GaloisName::D4, 4, &[&[&[0, 1, 2, 3]], &[&[0, 2]]])
            }
        }
        _ => exact(
            GaloisName::V4,
            4,
            &[&[&[0, 1], &[2, 3]], &[&[0, 2], &[1, 3]]],
        ),
    })
}

/// The exact oracle applicable to a squarefree polynomial, if any.
pub fn exact_galois(g: &RationalPolynomial) -> Option<ExactGalois> {
    match g.degree() {
        Some(2) => quadratic_galois(g).ok(),
        Some(4) => quartic_galois_exact(g).ok(),
        _ => None,
    }
}

/// Jordan-type certificate that a transitive group is S_n: samples of type
/// (n), (2,1^{n−2}), and one containing a q-cycle for a prime q > n/2.
pub fn certify_sn(summary: &SampleSummary, n: usize) -> bool {
    if n < 2 || summary.degree != n {
        return false;
    }
    let n32 = n as u32;
    let full = CycleType::new(vec![n32]);
    let mut transposition = vec![2u32];
    transposition.extend(std::iter::repeat_n(1, n - 2));
    let transposition = CycleType::new(transposition);
    let long_prime = summary
        .counts
        .keys()
        .any(|t| t.parts().iter().any(|&q| 2 * q > n32 && is_prime(q as u64)));
    summary.observed(&full) && summary.observed(&transposition) && long_prime
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub tv_max: f64,
    pub coverage_min: f64,
    /// Rejection by distance requires complete coverage and tv above this.
    pub tv_reject: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            tv_max: 0.1,
            coverage_min: 1.0,
            tv_reject: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    CertifiedSn,
    CertifiedExact(String),
    Consistent,
    Rejected,
    Inconclusive,
}

impl VerdictKind {
    /// Positive verdicts: the observed group is taken to match the target.
    pub fn is_match(&self) -> bool {
        matches!(
            self,
            VerdictKind::CertifiedSn | VerdictKind::CertifiedExact(_) | VerdictKind::Consistent
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub target: String,
    pub tv_distance: f64,
    pub coverage: f64,
}

/// Fraction of the target's cycle types observed at least once.
pub fn coverage(summary: &SampleSummary, target: &EnumeratedGroup) -> f64 {
    let types = target.type_counts();
    if types.is_empty() {
        return 1.0;
    }
    types.keys().filter(|t| summary.observed(t)).count() as f64 / types.len() as f64
}

/// Statistical verdict for `summary` against `target`.
pub fn match_verdict(
    summary: &SampleSummary,
    target: &PredictedGroup,
    thresholds: &Thresholds,
) -> Result<Verdict, GaloisError> {
    match_verdict_with_exact(summary, target, thresholds, None)
}

/// As [`match_verdict`], also using an exact Galois group of the squarefree
/// core (acting on `degree / multiplicity` roots) when one is known.
pub fn match_verdict_with_exact(
    summary: &SampleSummary,
    target: &PredictedGroup,
    thresholds: &Thresholds,
    exact: Option<&ExactGalois>,
) -> Result<Verdict, GaloisError> {
    let g = &target.group;
    if summary.degree != g.degree() {
        return Err(GaloisError::DegreeMismatch {
            samples: summary.degree,
            target: g.degree(),
        });
    }
    let target_dist = to_f64_distribution(&g.type_distribution());
    let tv_distance = total_variation(&summary.empirical_f64(), &target_dist);
    let cov = coverage(summary, g);
    let verdict = |kind| Verdict {
        kind,
        target: target.name.clone(),
        tv_distance,
        coverage: cov,
    };

    if summary.counts.keys().any(|t| !g.has_type(t)) {
        return Ok(verdict(VerdictKind::Rejected));
    }
    let n = g.degree();
    if n >= 2 && g.order() == factorial(n) && certify_sn(summary, n) {
        return Ok(verdict(VerdictKind::CertifiedSn));
    }
    if let Some(e) = exact {
        if e.group.degree() > 0
            && n.is_multiple_of(e.group.degree())
            && e.group.order() == g.order()
        {
            let m = (n / e.group.degree()) as u32;
            let mut inflated: BTreeMap<CycleType, usize> = BTreeMap::new();
            for (t, &c) in e.group.type_counts() {
                *inflated.entry(t.inflate(m)).or_insert(0) += c;
            }
            if &inflated == g.type_counts() {
                return Ok(verdict(VerdictKind::CertifiedExact(
                    e.name.as_str().to_string(),
                )));
            }
        }
    }
    if cov >= 1.0 && tv_distance > thresholds.tv_reject {
        return Ok(verdict(VerdictKind::Rejected));
    }
    if cov >= thresholds.coverage_min && tv_distance <= thresholds.tv_max {
        Ok(verdict(VerdictKind::Consistent))
    } else {
        Ok(verdict(VerdictKind::Inconclusive))
    }
}

/// Samples, exact oracle and verdict for one characteristic polynomial
/// `f = g^m`.
#[derive(Clone, Debug)]
pub struct Identification {
    pub summary: SampleSummary,
    pub exact: Option<ExactGalois>,
    pub verdict: Verdict,
}

pub fn identify(
    f: &RationalPolynomial,
    multiplicity: u32,
    target: &PredictedGroup,
    primes: &[u64],
    budget: usize,
    thresholds: &Thresholds,
) -> Result<Identification, GaloisError> {
    let summary = collect_samples_with_multiplicity(f, multiplicity, primes, budget)?;
    let core = f
        .squarefree_root(multiplicity)
        .ok_or(GaloisError::NotSquarefreeInput)?;
    let exact = exact_galois(&core);
    let verdict = match_verdict_with_exact(&summary, target, thresholds, exact.as_ref())?;
    Ok(Identification {
        summary,
        exact,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::RationalMatrix;
    use crate::modpoly::primes_in;
    use crate::permkit::symmetric_group;
    use crate::picatalog::{pi_sl_n, pi_sl_n_tau, pi_sl_n_tau_paired, pi_sl_power_cyclic};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_ints(c)
    }

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    fn named(name: &str, g: EnumeratedGroup) -> PredictedGroup {
        PredictedGroup {
            name: name.into(),
            group: g,
        }
    }

    #[test]
    fn sample_examples() {
        let s = collect_samples(&poly(&[1, 0, 1]), 1000, 100_000, 500).unwrap();
        assert_eq!(s.good_count, 500);
        // direct count: x²+1 splits exactly at p ≡ 1 mod 4
        let primes = primes_in(1000, 100_000);
        let split = primes[..500].iter().filter(|&&p| p % 4 == 1).count();
        assert_eq!(s.counts[&ct("(1,1)")], split);
        assert!((s.empirical_f64()[&ct("(2)")] - 0.5).abs() < 0.06);

        let s = collect_samples(&poly(&[2, -3, 1]), 1000, 5000, 50).unwrap();
        assert_eq!(s.counts.len(), 1);
        assert_eq!(s.counts[&ct("(1,1)")], 50);

        assert_eq!(
            collect_samples(&poly(&[1, -2, 1]), 1000, 5000, 50),
            Err(GaloisError::NotSquarefreeInput)
        );
    }

    #[test]
    fn multiplicity_samples() {
        let g = poly(&[1, 0, 1]);
        let s =
            collect_samples_with_multiplicity(&g.pow(2), 2, &primes_in(1000, 5000), 40).unwrap();
        assert_eq!(s.degree, 4);
        assert!(s
            .counts
            .keys()
            .all(|t| *t == ct("(1,1,1,1)") || *t == ct("(2,2)")));
    }

    #[test]
    fn quadratic_examples() {
        let m = RationalMatrix::from_int_rows(&[[0, 2], [3, 0]]).unwrap();
        assert_eq!(
            quadratic_galois(&m.char_poly()).unwrap().name,
            GaloisName::C2
        );
        assert_eq!(
            quadratic_galois(&poly(&[-4, 0, 1])).unwrap().name,
            GaloisName::Trivial
        );
        assert_eq!(
            quadratic_galois(&poly(&[6, -5, 1])).unwrap().name,
            GaloisName::Trivial
        );
    }

    #[test]
    fn rational_root_examples() {
        let f = poly(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        let r: Vec<Rational> = (1..=3).map(|i| Rational::from_integer(i.into())).collect();
        assert_eq!(rational_roots(&f), r);
        // 6x² - x - 1 = (3x+1)(2x-1)
        assert_eq!(
            rational_roots(&poly(&[-1, -1, 6])),
            vec![
                Rational::new((-1).into(), 3.into()),
                Rational::new(1.into(), 2.into())
            ]
        );
        assert!(rational_roots(&poly(&[-2, 0, 1])).is_empty());
        assert_eq!(rational_roots(&poly(&[0, 0, 1, 1])).len(), 2);
        let big: BigInt = num_traits::pow(BigInt::from(10), 30) + BigInt::from(7);
        let f =
            RationalPolynomial::linear(Rational::from_integer(big.clone())).mul(&poly(&[1, 0, 1]));
        assert_eq!(rational_roots(&f), vec![Rational::from_integer(big)]);
    }

    #[test]
    fn quartic_examples() {
        let name = |c: &[i64]| quartic_galois_exact(&poly(c)).unwrap().name;
        assert_eq!(name(&[1, 1, 1, 1, 1]), GaloisName::C4);
        assert_eq!(name(&[1, 0, 0, 0, 1]), GaloisName::V4);
        assert_eq!(name(&[-2, 0, 0, 0, 1]), GaloisName::D4);
        assert_eq!(name(&[12, 8, 0, 0, 1]), GaloisName::A4);
        assert_eq!(name(&[1, 1, 0, 0, 1]), GaloisName::S4);
        assert_eq!(name(&[6, 0, -5, 0, 1]), GaloisName::V4); // (x²-2)(x²-3)
        assert_eq!(name(&[2, 0, -3, 0, 1]), GaloisName::C2); // (x²-1)(x²-2)
                                                             // (x²-2)(x²-8): same quadratic field twice
        assert_eq!(name(&[16, 0, -10, 0, 1]), GaloisName::C2);
        assert_eq!(name(&[-2, 1, 0, 0, 1]).quartic_label(), "smaller"); // (x-1)(x³+x²+x+2)
        assert_eq!(name(&[24, -50, 35, -10, 1]), GaloisName::Trivial);
        assert!(quartic_galois_exact(&poly(&[1, -2, 1]).pow(2)).is_err());
    }

    #[test]
    fn quartic_oracle_agrees_with_frobenius_statistics() {
        let primes = primes_in(1000, 100_000);
        for c in [
            [1i64, 1, 1, 1, 1],
            [1, 0, 0, 0, 1],
            [-2, 0, 0, 0, 1],
            [12, 8, 0, 0, 1],
            [1, 1, 0, 0, 1],
        ] {
            let f = poly(&c);
            let e = quartic_galois_exact(&f).unwrap();
            let s = collect_samples_with_multiplicity(&f, 1, &primes, 500).unwrap();
            let target = to_f64_distribution(&e.group.type_distribution());
            let tv = total_variation(&s.empirical_f64(), &target);
            assert!(tv < 0.1, "{:?}: tv {tv}", e.name);
        }
    }

    fn summary_of(n: usize, types: &[&str]) -> SampleSummary {
        let mut s = SampleSummary::new(n);
        for t in types {
            s.record(ct(t));
        }
        s
    }

    #[test]
    fn certify_examples() {
        assert!(certify_sn(&summary_of(3, &["(3)", "(2,1)", "(1,1,1)"]), 3));
        assert!(!certify_sn(&summary_of(3, &["(3)", "(1,1,1)"]), 3));
        assert!(certify_sn(&summary_of(2, &["(2)"]), 2));
    }

    /// Exhaustive check over all 2-generated subgroups of S_n: the certificate
    /// holds on the full type set of a subgroup iff the subgroup is S_n.
    #[test]
    fn certificate_is_sound_on_small_symmetric_groups() {
        for n in 3..=5 {
            let sn = symmetric_group(n, 200).unwrap();
            let els = sn.elements();
            for (i, a) in els.iter().enumerate() {
                for b in &els[i..] {
                    let h = enumerate(n, &[a.clone(), b.clone()], 200).unwrap();
                    let mut s = SampleSummary::new(n);
                    for t in h.type_counts().keys() {
                        s.record(t.clone());
                    }
                    assert_eq!(certify_sn(&s, n), h.order() == sn.order());
                }
            }
        }
    }

    #[test]
    fn verdict_examples() {
        let primes = primes_in(1000, 100_000);
        let s2 = pi_sl_n(2).unwrap();
        let s = collect_samples_with_multiplicity(&poly(&[1, 0, 1]), 1, &primes, 300).unwrap();
        let v = match_verdict(&s, &s2, &Thresholds::default()).unwrap();
        assert!(v.kind.is_match());
        assert!(v.tv_distance < 0.1);

        let bad = summary_of(3, &["(3)"]);
        assert!(matches!(
            match_verdict(&bad, &s2, &Thresholds::default()),
            Err(GaloisError::DegreeMismatch { .. })
        ));

        // V4 quartic against the order-8 group: (4) never appears
        let v4 =
            collect_samples_with_multiplicity(&poly(&[1, 0, 0, 0, 1]), 1, &primes, 300).unwrap();
        let d4 = pi_sl_n_tau(2).unwrap();
        let v = match_verdict(&v4, &d4, &Thresholds::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert!(v.coverage < 1.0);

        let s4 = named("S4", symmetric_group(4, 24).unwrap());
        let v = match_verdict(&summary_of(4, &["(3,1)"]), &s4, &Thresholds::default()).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        let v = match_verdict(
            &summary_of(4, &["(4)", "(3,1)", "(2,2)"]),
            &pi_sl_n_tau(2).unwrap(),
            &Thresholds::default(),
        )
        .unwrap();
        assert_eq!(v.kind, VerdictKind::Rejected);
    }

    #[test]
    fn exact_certificate() {
        let f = poly(&[1, 0, 0, 0, 1]);
        let id = identify(
            &f,
            1,
            &pi_sl_n_tau_paired(2).unwrap(),
            &primes_in(1000, 20_000),
            100,
            &Thresholds::default(),
        )
        .unwrap();
        assert_eq!(id.verdict.kind, VerdictKind::CertifiedExact("V4".into()));
    }

    /// Multinomial draws from the target itself are almost never rejected.
    #[test]
    fn rejection_is_calibrated() {
        let targets = [
            pi_sl_n(2).unwrap(),
            pi_sl_n(4).unwrap(),
            pi_sl_n_tau(2).unwrap(),
            pi_sl_n_tau(4).unwrap(),
            pi_sl_n_tau_paired(4).unwrap(),
            pi_sl_power_cyclic(2, 3).unwrap(),
        ];
        let th = Thresholds::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in &targets {
            let els = t.group.elements();
            let mut rejected = 0;
            for _ in 0..1000 {
                let mut s = SampleSummary::new(t.degree());
                for _ in 0..500 {
                    s.record(els[rng.gen_range(0..els.len())].cycle_type());
                }
                if match_verdict(&s, t, &th).unwrap().kind == VerdictKind::Rejected {
                    rejected += 1;
                }
            }
            assert!(rejected < 10, "{}: {rejected} rejections", t.name);
        }
    }
}

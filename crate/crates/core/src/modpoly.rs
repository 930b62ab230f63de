//! Frobenius cycle types from factorization patterns modulo primes.
//!
//! For a squarefree reduction `g = f mod p`, the degrees of the irreducible
//! factors of `g` are the cycle lengths of Frobenius acting on the roots of
//! `f`. Distinct-degree factorization recovers that multiset without
//! splitting equal-degree factors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exactmat::{PrimeFieldPolynomial, RationalPolynomial};

/// A partition of N, stored in weakly decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CycleType(Vec<u32>);

impl CycleType {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType(parts)
    }

    /// The type (1, 1, ..., 1) of the identity on `n` points.
    pub fn identity(n: usize) -> Self {
        CycleType(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    pub fn contains_part(&self, len: u32) -> bool {
        self.0.contains(&len)
    }

    /// Each part repeated `m` times: the cycle type of a permutation acting
    /// diagonally on `m` copies of the points.
    pub fn inflate(&self, m: u32) -> Self {
        CycleType::new(
            self.0
                .iter()
                .flat_map(|&x| std::iter::repeat_n(x, m as usize))
                .collect(),
        )
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CycleType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| format!("bad cycle type {s:?}: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parts.contains(&0) {
            return Err(format!("bad cycle type {s:?}: zero part"));
        }
        Ok(CycleType::new(parts))
    }
}

impl From<CycleType> for String {
    fn from(c: CycleType) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for CycleType {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrobeniusStatus {
    Good,
    BadPrime,
    NotSquarefree,
}

/// One Frobenius observation: the cycle type is present iff the status is good.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusSample {
    pub p: u64,
    pub status: FrobeniusStatus,
    pub cycle_type: Option<CycleType>,
}

/// Marker for a reduction with a repeated factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotSquarefree;

/// True iff gcd(f, f′) is constant over the rationals.
pub fn squarefree_over_q(f: &RationalPolynomial) -> bool {
    f.is_squarefree()
}

/// Degrees of the irreducible factors of a squarefree polynomial over F_p.
pub fn distinct_degree_pattern(g: &PrimeFieldPolynomial) -> Result<CycleType, NotSquarefree> {
    let p = g.modulus();
    let mut rest = g.monic();
    let Some(deg) = rest.degree() else {
        return Err(NotSquarefree);
    };
    if deg == 0 {
        return Ok(CycleType::new(vec![]));
    }
    if !rest.is_squarefree() {
        return Err(NotSquarefree);
    }
    let x = PrimeFieldPolynomial::x(p);
    let mut parts = Vec::new();
    // h = x^(p^d) mod rest
    let mut h = x.clone();
    let mut d = 0u32;
    while let Some(rd) = rest.degree() {
        if rd == 0 {
            break;
        }
        d += 1;
        if 2 * (d as usize) > rd {
            // what remains is irreducible
            parts.push(rd as u32);
            break;
        }
        h = h.pow_mod(p, &rest);
        let factor = rest.gcd(&h.sub(&x));
        let fd = factor.degree().unwrap_or(0);
        if fd > 0 {
            for _ in 0..fd / d as usize {
                parts.push(d);
            }
            rest = rest.div_rem(&factor).0;
            h = h.rem(&rest);
        }
    }
    Ok(CycleType::new(parts))
}

/// θ_Frob at `p`, observed through the factorization pattern of `f mod p`.
pub fn frobenius_cycle_type(f: &RationalPolynomial, p: u64) -> FrobeniusSample {
    frobenius_cycle_type_with_multiplicity(f, 1, p)
}

/// As [`frobenius_cycle_type`], for `f = g^m` with `g` squarefree: the pattern
/// is computed on `g` and each part repeated `m` times. A reduction that is
/// not the `m`-th power of a squarefree polynomial counts as not squarefree.
pub fn frobenius_cycle_type_with_multiplicity(
    f: &RationalPolynomial,
    m: u32,
    p: u64,
) -> FrobeniusSample {
    let reduced = match f.reduce_mod_p(p) {
        Ok(r) => r,
        Err(_) => {
            return FrobeniusSample {
                p,
                status: FrobeniusStatus::BadPrime,
                cycle_type: None,
            };
        }
    };
    let core = if m == 1 {
        Some(reduced)
    } else {
        reduced.squarefree_root(m)
    };
    match core.map(|g| distinct_degree_pattern(&g)) {
        Some(Ok(t)) => FrobeniusSample {
            p,
            status: FrobeniusStatus::Good,
            cycle_type: Some(t.inflate(m)),
        },
        _ => FrobeniusSample {
            p,
            status: FrobeniusStatus::NotSquarefree,
            cycle_type: None,
        },
    }
}

/// All primes in `[lo, hi]`, ascending, by a plain sieve of Eratosthenes.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let hi_us = hi as usize;
    let mut composite = vec![false; hi_us + 1];
    let mut out = Vec::new();
    for i in 2..=hi_us {
        if composite[i] {
            continue;
        }
        if i as u64 >= lo {
            out.push(i as u64);
        }
        let mut j = i * i;
        while j <= hi_us {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{frac, rat};

    fn fp(p: u64, c: &[u64]) -> PrimeFieldPolynomial {
        PrimeFieldPolynomial::new(p, c.to_vec())
    }

    fn ct(v: &[u32]) -> CycleType {
        CycleType::new(v.to_vec())
    }

    /// Degrees of irreducible factors by brute force: strip roots, then
    /// search monic irreducible factors of increasing degree exhaustively.
    fn brute_force_pattern(g: &PrimeFieldPolynomial) -> CycleType {
        let p = g.modulus();
        let mut rest = g.monic();
        let mut parts = vec![];
        let mut d = 1;
        while rest.degree().unwrap() > 0 {
            let rd = rest.degree().unwrap();
            if d > rd {
                break;
            }
            let mut found = false;
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut c = vec![];
                let mut x = code;
                for _ in 0..d {
                    c.push(x % p);
                    x /= p;
                }
                c.push(1);
                let cand = fp(p, &c);
                if rest.rem(&cand).is_zero() {
                    parts.push(d as u32);
                    rest = rest.div_rem(&cand).0;
                    found = true;
                    break;
                }
            }
            if !found {
                d += 1;
            }
        }
        ct(&parts)
    }

    #[test]
    fn dedekind_patterns_small() {
        // T^2 + 1: roots ±2 mod 5, none mod 3
        assert_eq!(distinct_degree_pattern(&fp(5, &[1, 0, 1])), Ok(ct(&[1, 1])));
        assert_eq!(distinct_degree_pattern(&fp(3, &[1, 0, 1])), Ok(ct(&[2])));
        // T^2 - 1 = (T - 1)^2 mod 2
        assert_eq!(
            distinct_degree_pattern(&fp(2, &[1, 0, 1])),
            Err(NotSquarefree)
        );
    }

    #[test]
    fn frobenius_examples() {
        let f = RationalPolynomial::from_ints(&[6, -5, 1]);
        let s = frobenius_cycle_type(&f, 7);
        assert_eq!(s.status, FrobeniusStatus::Good);
        assert_eq!(s.cycle_type, Some(ct(&[1, 1])));

        // T^3 - 2 mod 7: cubes mod 7 are {0, 1, 6}, so 2 is not a cube and the
        // cubic has no root; being degree 3 it is irreducible.
        let cube = RationalPolynomial::from_ints(&[-2, 0, 0, 1]);
        let roots = (0..7u64).filter(|x| (x * x * x + 5) % 7 == 0).count();
        assert_eq!(roots, 0);
        assert_eq!(frobenius_cycle_type(&cube, 7).cycle_type, Some(ct(&[3])));
        assert_eq!(
            brute_force_pattern(&cube.reduce_mod_p(7).unwrap()),
            ct(&[3])
        );

        let with_den = RationalPolynomial::new(vec![frac(1, 7), rat(0), rat(1)]);
        assert_eq!(
            frobenius_cycle_type(&with_den, 7).status,
            FrobeniusStatus::BadPrime
        );
    }

    #[test]
    fn ddf_agrees_with_brute_force() {
        // all monic squarefree polynomials of degree <= 4 over F_3, plus a sweep over F_5
        for (p, maxdeg) in [(3u64, 4usize), (5, 3)] {
            for deg in 1..=maxdeg {
                let count = p.pow(deg as u32);
                for code in 0..count {
                    let mut c = vec![];
                    let mut x = code;
                    for _ in 0..deg {
                        c.push(x % p);
                        x /= p;
                    }
                    c.push(1);
                    let g = fp(p, &c);
                    match distinct_degree_pattern(&g) {
                        Ok(t) => {
                            assert!(g.is_squarefree());
                            assert_eq!(t, brute_force_pattern(&g), "{c:?} mod {p}");
                            assert_eq!(t.degree(), deg);
                        }
                        Err(NotSquarefree) => assert!(!g.is_squarefree()),
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicity_inflates_parts() {
        let g = RationalPolynomial::from_ints(&[1, -3, 1]);
        let f = g.pow(2);
        for p in primes_in(1000, 1100) {
            let single = frobenius_cycle_type(&g, p);
            let doubled = frobenius_cycle_type_with_multiplicity(&f, 2, p);
            assert_eq!(single.status, doubled.status);
            assert_eq!(single.cycle_type.map(|t| t.inflate(2)), doubled.cycle_type);
        }
        // identity-like input is never a square of a squarefree polynomial
        let id4 = RationalPolynomial::from_ints(&[-1, 1]).pow(4);
        assert_eq!(
            frobenius_cycle_type_with_multiplicity(&id4, 2, 1009).status,
            FrobeniusStatus::NotSquarefree
        );
    }

    #[test]
    fn x_squared_plus_one_equidistributes() {
        // (1,1) iff p ≡ 1 mod 4 by quadratic reciprocity
        let f = RationalPolynomial::from_ints(&[1, 0, 1]);
        let primes: Vec<u64> = primes_in(3, 100_000).into_iter().take(500).collect();
        let mut split = 0;
        for &p in &primes {
            let s = frobenius_cycle_type(&f, p);
            let expected = if p % 4 == 1 { ct(&[1, 1]) } else { ct(&[2]) };
            assert_eq!(s.cycle_type, Some(expected));
            if p % 4 == 1 {
                split += 1;
            }
        }
        let freq = split as f64 / 500.0;
        assert!((freq - 0.5).abs() <= 0.05, "{freq}");
    }

    #[test]
    fn cycle_type_text_roundtrip() {
        let t = ct(&[1, 2, 1]);
        assert_eq!(t.to_string(), "(2,1,1)");
        assert_eq!("(2,1,1)".parse::<CycleType>().unwrap(), t);
        assert!("(2,0)".parse::<CycleType>().is_err());
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_in(1, 20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_in(1000, 100_000).len(), 9592 - 168);
        assert!(is_prime(97) && !is_prime(91));
    }
}

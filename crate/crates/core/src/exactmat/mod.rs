//! Exact linear algebra over the rationals.
//!
//! Group elements are stored as dense square matrices of [`Rational`]
//! entries. Every arithmetic operation goes through `BigRational`, which keeps
//! entries in lowest terms, so products of long walks stay canonical.

mod modp;
mod poly;

pub use modp::{PrimeFieldMatrix, PrimeFieldPolynomial};
pub use poly::RationalPolynomial;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix data is not square: {rows} rows, row of length {len}")]
    NotSquare { rows: usize, len: usize },
}

/// A prime at which a rational object has no reduction: some denominator is
/// divisible by `p`, or the leading coefficient vanishes mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("bad prime {0}")]
pub struct BadPrime(pub u64);

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Residue of `x` modulo `p`, or `None` when the denominator is divisible by `p`.
pub fn rational_mod_p(x: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = modp::bigint_mod(x.denom(), &pb);
    if den == 0 {
        return None;
    }
    let num = modp::bigint_mod(x.numer(), &pb);
    Some(modp::mul_mod(num, modp::inv_mod(den, p), p))
}

/// Dense n×n matrix with exact rational entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        RationalMatrix { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        RationalMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::NotSquare {
                    rows: n,
                    len: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(RationalMatrix { n, entries })
    }

    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.clone();
        }
        m
    }

    /// Block-diagonal matrix with the given square blocks.
    pub fn block_diagonal(blocks: &[RationalMatrix]) -> Self {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.entries[(off + i) * n + off + j] = b.get(i, j).clone();
                }
            }
            off += b.n;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Exact product `self · other`.
    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix, MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch(self.n, other.n));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &RationalMatrix) -> RationalMatrix {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for l in 0..n {
                    let a = self.get(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc += a * b;
                }
                out.push(acc);
            }
        }
        RationalMatrix { n, entries: out }
    }

    /// Gauss–Jordan inverse over the rationals.
    pub fn inverse(&self) -> Result<RationalMatrix, MatrixError> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(MatrixError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let pv = a[col * n + col].recip();
            for j in 0..n {
                a[col * n + j] = &a[col * n + j] * &pv;
                inv[col * n + j] = &inv[col * n + j] * &pv;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let t = &factor * &a[col * n + j];
                    a[r * n + j] -= t;
                    let t = &factor * &inv[col * n + j];
                    inv[r * n + j] -= t;
                }
            }
        }
        Ok(RationalMatrix { n, entries: inv })
    }

    /// Determinant by fraction-free Bareiss elimination on the cleared-denominator matrix.
    pub fn determinant(&self) -> Rational {
        let n = self.n;
        if n == 0 {
            return Rational::one();
        }
        // Scale each row to integers; det scales by the product of row scalings.
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut scale = BigInt::one();
        for i in 0..n {
            let l = (0..n).fold(BigInt::one(), |acc, j| {
                num_integer::Integer::lcm(&acc, self.get(i, j).denom())
            });
            rows.push(
                (0..n)
                    .map(|j| {
                        let e = self.get(i, j);
                        e.numer() * (&l / e.denom())
                    })
                    .collect(),
            );
            scale *= l;
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if rows[k][k].is_zero() {
                match (k + 1..n).find(|&r| !rows[r][k].is_zero()) {
                    Some(r) => {
                        rows.swap(k, r);
                        sign = -sign;
                    }
                    None => return Rational::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &rows[i][j] * &rows[k][k] - &rows[i][k] * &rows[k][j];
                    rows[i][j] = v / &prev;
                }
            }
            prev = rows[k][k].clone();
        }
        Rational::new(sign * &rows[n - 1][n - 1], scale)
    }

    /// Characteristic polynomial det(T·I − A) by the Faddeev–LeVerrier
    /// recurrence over exact rationals.
    pub fn char_poly(&self) -> RationalPolynomial {
        let n = self.n;
        // coeffs[k] is the coefficient of T^k.
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = Self::zero(n);
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1}·I
            let mut next = self.mul_unchecked(&m);
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self.mul_unchecked(&m);
            coeffs[n - k] = -am.trace() / rat(k as i64);
        }
        RationalPolynomial::new(coeffs)
    }

    /// Entrywise reduction modulo `p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<PrimeFieldMatrix, BadPrime> {
        let entries = self
            .entries
            .iter()
            .map(|e| rational_mod_p(e, p).ok_or(BadPrime(p)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PrimeFieldMatrix::new(p, self.n, entries))
    }

    /// Largest absolute numerator or denominator, in bits. Used to report growth.
    pub fn height_bits(&self) -> u64 {
        self.entries
            .iter()
            .map(|e| e.numer().abs().bits().max(e.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn mul_examples() {
        let a = m(&[&[3, -1], &[4, 7]]);
        assert_eq!(RationalMatrix::identity(2).mul(&a).unwrap(), a);
        let d = RationalMatrix::diagonal(&[rat(2), rat(3)]);
        let di = RationalMatrix::diagonal(&[frac(1, 2), frac(1, 3)]);
        assert!(d.mul(&di).unwrap().is_identity());
        let s = m(&[&[0, 1], &[1, 0]]);
        assert!(s.mul(&s).unwrap().is_identity());
        assert_eq!(
            a.mul(&RationalMatrix::identity(3)),
            Err(MatrixError::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn inverse_examples() {
        assert!(RationalMatrix::identity(4).inverse().unwrap().is_identity());
        let d = RationalMatrix::diagonal(&[rat(2), rat(3)]);
        assert_eq!(
            d.inverse().unwrap(),
            RationalMatrix::diagonal(&[frac(1, 2), frac(1, 3)])
        );
        assert_eq!(
            m(&[&[1, 1], &[0, 1]]).inverse().unwrap(),
            m(&[&[1, -1], &[0, 1]])
        );
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(MatrixError::Singular));
    }

    #[test]
    fn char_poly_examples() {
        let ints = |v: &[i64]| RationalPolynomial::from_ints(v);
        assert_eq!(RationalMatrix::identity(2).char_poly(), ints(&[1, -2, 1]));
        assert_eq!(
            RationalMatrix::diagonal(&[rat(2), rat(3)]).char_poly(),
            ints(&[6, -5, 1])
        );
        // companion matrix of T^3 - 2
        let c = m(&[&[0, 0, 2], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(c.char_poly(), ints(&[-2, 0, 0, 1]));
    }

    #[test]
    fn determinant_matches_constant_term() {
        let a = m(&[&[2, -1, 0], &[4, 3, 1], &[-2, 5, 7]]);
        let det = a.determinant();
        assert_eq!(det, rat(2 * (21 - 5) + (28 + 2)));
        let cp = a.char_poly();
        assert_eq!(det, -cp.coeff(0));
        let singular = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert!(singular.determinant().is_zero());
        let half = RationalMatrix::diagonal(&[frac(1, 2), frac(2, 3)]);
        assert_eq!(half.determinant(), frac(1, 3));
    }

    #[test]
    fn reduce_matrix_mod_p() {
        let a = RationalMatrix::diagonal(&[frac(1, 2), rat(-1)]);
        let r = a.reduce_mod_p(7).unwrap();
        assert_eq!(r.entries(), &[4, 0, 0, 6]);
        assert_eq!(a.reduce_mod_p(2), Err(BadPrime(2)));
    }
}

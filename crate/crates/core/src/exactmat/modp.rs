use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub(crate) fn bigint_mod(x: &BigInt, p: &BigInt) -> u64 {
    x.mod_floor(p).to_u64().expect("residue fits in u64")
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Polynomial over the prime field F_p, coefficients ascending and reduced,
/// with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldPolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl PrimeFieldPolynomial {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PrimeFieldPolynomial { p, coeffs }
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = inv_mod(lc, self.p);
                Self::new(
                    self.p,
                    self.coeffs
                        .iter()
                        .map(|&c| mul_mod(c, inv, self.p))
                        .collect(),
                )
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| mul_mod(c, k as u64 % p, p))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p;
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            p,
            (0..len)
                .map(|k| {
                    let a = self.coeffs.get(k).copied().unwrap_or(0);
                    let b = other.coeffs.get(k).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return Self::new(p, vec![]);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::new(p, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.p), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc_inv = inv_mod(divisor.coeffs[dd], p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::new(p, vec![]), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = mul_mod(rem[k], lc_inv, p);
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = (rem[idx] + p - mul_mod(c, d, p)) % p;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(p, quot), Self::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// f / gcd(f, f′), monic. Correct as the radical whenever deg f < p.
    pub fn radical(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.is_zero() {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Squarefree `g` with `self = g^m` (up to a unit), if one exists.
    pub fn squarefree_root(&self, m: u32) -> Option<Self> {
        if self.is_zero() || m == 0 {
            return None;
        }
        let r = self.radical();
        if r.is_squarefree() && r.pow(m) == self.monic() {
            Some(r)
        } else {
            None
        }
    }
}

/// Dense n×n matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeFieldMatrix {
    p: u64,
    n: usize,
    entries: Vec<u64>,
}

impl PrimeFieldMatrix {
    pub fn new(p: u64, n: usize, entries: Vec<u64>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        PrimeFieldMatrix {
            p,
            n,
            entries: entries.into_iter().map(|e| e % p).collect(),
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1 % p;
        }
        PrimeFieldMatrix { p, n, entries: e }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        assert_eq!(self.p, other.p);
        let (n, p) = (self.n, self.p);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.entries[i * n + l];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + a * other.entries[l * n + j]) % p;
                }
            }
        }
        PrimeFieldMatrix { p, n, entries: out }
    }

    pub fn determinant(&self) -> u64 {
        let (n, p) = (self.n, self.p);
        let mut a = self.entries.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = (p - det) % p;
            }
            let pv = a[col * n + col];
            det = mul_mod(det, pv, p);
            let inv = inv_mod(pv, p);
            for r in col + 1..n {
                let f = mul_mod(a[r * n + col], inv, p);
                if f == 0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = (a[r * n + j] + p - mul_mod(f, a[col * n + j], p)) % p;
                }
            }
        }
        det
    }

    /// Characteristic polynomial via reduction to upper Hessenberg form and
    /// the standard Hessenberg determinant recurrence.
    pub fn char_poly(&self) -> PrimeFieldPolynomial {
        let (n, p) = (self.n, self.p);
        let mut h = self.entries.clone();
        let at = |i: usize, j: usize| i * n + j;
        // Similarity transforms to Hessenberg form.
        for col in 0..n.saturating_sub(2) {
            let Some(piv) = (col + 1..n).find(|&r| h[at(r, col)] != 0) else {
                continue;
            };
            if piv != col + 1 {
                let r = col + 1;
                for j in 0..n {
                    h.swap(at(piv, j), at(r, j));
                }
                for i in 0..n {
                    h.swap(at(i, piv), at(i, r));
                }
            }
            let inv = inv_mod(h[at(col + 1, col)], p);
            for r in col + 2..n {
                let f = mul_mod(h[at(r, col)], inv, p);
                if f == 0 {
                    continue;
                }
                // row_r -= f * row_{col+1}
                for j in 0..n {
                    h[at(r, j)] = (h[at(r, j)] + p - mul_mod(f, h[at(col + 1, j)], p)) % p;
                }
                // col_{col+1} += f * col_r
                for i in 0..n {
                    h[at(i, col + 1)] = (h[at(i, col + 1)] + mul_mod(f, h[at(i, r)], p)) % p;
                }
            }
        }
        // polys[m] = char poly of the leading m×m block.
        let mut polys: Vec<PrimeFieldPolynomial> = vec![PrimeFieldPolynomial::one(p)];
        for m in 0..n {
            let lin = PrimeFieldPolynomial::new(p, vec![(p - h[at(m, m)]) % p, 1]);
            let mut next = lin.mul(&polys[m]);
            let mut prod = 1u64;
            for i in (0..m).rev() {
                prod = mul_mod(prod, h[at(i + 1, i)], p);
                let c = mul_mod(prod, h[at(i, m)], p);
                if c == 0 {
                    continue;
                }
                let term = polys[i].mul(&PrimeFieldPolynomial::new(p, vec![c]));
                next = next.sub(&term);
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_helpers() {
        assert_eq!(inv_mod(3, 7), 5);
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(bigint_mod(&BigInt::from(-3), &BigInt::from(7)), 4);
    }

    #[test]
    fn hessenberg_char_poly_small() {
        // [[1,2],[3,4]] -> T^2 - 5T - 2
        let m = PrimeFieldMatrix::new(11, 2, vec![1, 2, 3, 4]);
        assert_eq!(m.char_poly().coeffs(), &[9, 6, 1]);
        let id = PrimeFieldMatrix::identity(5, 3);
        // (T-1)^3 = T^3 - 3T^2 + 3T - 1
        assert_eq!(id.char_poly().coeffs(), &[4, 3, 2, 1]);
    }

    #[test]
    fn poly_gcd_and_pow_mod() {
        let p = 7;
        let f = PrimeFieldPolynomial::new(p, vec![6, 0, 1]); // T^2 - 1
        let g = PrimeFieldPolynomial::new(p, vec![6, 1]); // T - 1
        assert_eq!(f.gcd(&g), g);
        let x = PrimeFieldPolynomial::x(p);
        // x^7 = x mod (x^2 - 1) since x^2 = 1 -> x^7 = x
        assert_eq!(x.pow_mod(7, &f), x);
        assert!(!PrimeFieldPolynomial::new(2, vec![1, 0, 1]).is_squarefree());
    }
}

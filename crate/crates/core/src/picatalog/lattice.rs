//! Integer lattices: Smith normal form and the coset Weyl group computation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::permkit::{factorial, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("automorphism has no finite order up to {0}")]
    NonFiniteOrder(usize),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("rank mismatch: expected {expected}, got {actual}")]
    RankMismatch { expected: usize, actual: usize },
}

pub type IntMatrix = Vec<Vec<BigInt>>;

fn int_identity(r: usize) -> IntMatrix {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

/// Result of Smith normal form `P · M · Q = D`. Only the row transform and
/// its inverse are kept; column operations do not move the column space.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal of D, nonnegative, each dividing the next; zeros last.
    pub diagonal: Vec<BigInt>,
    pub row_transform: IntMatrix,
    pub row_transform_inv: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form of an integer matrix by elementary row and column
/// operations over arbitrary-precision integers.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.clone();
    let mut p = int_identity(rows);
    let mut pinv = int_identity(rows);

    // Row ops keep p·m·q = a and pinv = p⁻¹ in sync.
    let swap_rows =
        |a: &mut IntMatrix, p: &mut IntMatrix, pinv: &mut IntMatrix, i: usize, j: usize| {
            a.swap(i, j);
            p.swap(i, j);
            for row in pinv.iter_mut() {
                row.swap(i, j);
            }
        };
    // row_i += c·row_j
    let add_row = |a: &mut IntMatrix,
                   p: &mut IntMatrix,
                   pinv: &mut IntMatrix,
                   i: usize,
                   j: usize,
                   c: &BigInt| {
        for k in 0..a[0].len() {
            let t = &a[j][k] * c;
            a[i][k] += t;
        }
        for k in 0..p[0].len() {
            let t = &p[j][k] * c;
            p[i][k] += t;
        }
        for row in pinv.iter_mut() {
            let t = &row[i] * c;
            row[j] -= t;
        }
    };
    let negate_row = |a: &mut IntMatrix, p: &mut IntMatrix, pinv: &mut IntMatrix, i: usize| {
        for x in a[i].iter_mut() {
            *x = -x.clone();
        }
        for x in p[i].iter_mut() {
            *x = -x.clone();
        }
        for row in pinv.iter_mut() {
            row[i] = -row[i].clone();
        }
    };
    // col_i += c·col_j
    let add_col = |a: &mut IntMatrix, i: usize, j: usize, c: &BigInt| {
        for row in a.iter_mut() {
            let t = &row[j] * c;
            row[i] += t;
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            if bi != t {
                swap_rows(&mut a, &mut p, &mut pinv, bi, t);
            }
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(bj, t);
                }
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(&mut a, &mut p, &mut pinv, i, t, &-q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, j, t, &-q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => add_row(&mut a, &mut p, &mut pinv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            negate_row(&mut a, &mut p, &mut pinv, t);
        }
    }
    let diagonal = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    SmithForm {
        diagonal,
        row_transform: p,
        row_transform_inv: pinv,
    }
}

/// Automorphism of a rank-r lattice, as an r×r integer matrix acting on
/// column coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeAutomorphism {
    rank: usize,
    matrix: IntMatrix,
}

impl LatticeAutomorphism {
    pub fn new(matrix: IntMatrix) -> Result<Self, LatticeError> {
        let rank = matrix.len();
        if matrix.iter().any(|r| r.len() != rank) {
            return Err(LatticeError::NotUnimodular);
        }
        let d = smith_normal_form(&matrix);
        if d.diagonal.iter().any(|x| !x.is_one()) {
            return Err(LatticeError::NotUnimodular);
        }
        Ok(LatticeAutomorphism { rank, matrix })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(rank: usize) -> Self {
        LatticeAutomorphism {
            rank,
            matrix: int_identity(rank),
        }
    }

    /// Action of a permutation of {0..n−1} on the character lattice of the
    /// diagonal torus of SL_n, with basis the images of e_0..e_{n−2} in
    /// Z^n / Z·(1,…,1).
    pub fn weyl(w: &Permutation) -> Self {
        let n = w.degree();
        let r = n - 1;
        let mut m = vec![vec![BigInt::zero(); r]; r];
        for i in 0..r {
            let img = w.apply(i);
            if img < r {
                m[img][i] = BigInt::one();
            } else {
                for row in m.iter_mut() {
                    row[i] = -BigInt::one();
                }
            }
        }
        LatticeAutomorphism { rank: r, matrix: m }
    }

    /// The outer automorphism A ↦ (Aᵗ)⁻¹ of SL_n composed with the longest
    /// Weyl element, χ ↦ −w₀χ, which preserves the standard pinning.
    pub fn sl_n_outer(n: usize) -> Self {
        let w0 = Permutation::new((0..n).rev().collect()).expect("reversal is a bijection");
        let m = Self::weyl(&w0)
            .matrix
            .into_iter()
            .map(|row| row.into_iter().map(|x| -x).collect())
            .collect();
        LatticeAutomorphism {
            rank: n - 1,
            matrix: m,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn compose(&self, other: &Self) -> Self {
        LatticeAutomorphism {
            rank: self.rank,
            matrix: int_mul(&self.matrix, &other.matrix),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == int_identity(self.rank)
    }

    /// Order as a group element, searching powers up to `limit`.
    pub fn order(&self, limit: usize) -> Result<usize, LatticeError> {
        let mut acc = self.clone();
        for k in 1..=limit {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = acc.compose(self);
        }
        Err(LatticeError::NonFiniteOrder(limit))
    }
}

/// Orders of the pieces of 1 → (T/C°)^τ → W(G·τ, C) → W^τ → 1 for SL_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetWeylReport {
    pub n: usize,
    /// |W^τ|: Weyl elements of S_n commuting with τ on the lattice.
    pub fixed_weyl_order: usize,
    /// Invariant factors of the finite group (T/C°)^τ.
    pub torsion_invariants: Vec<BigInt>,
    pub torsion_order: BigInt,
    pub total_order: BigInt,
}

/// Coset Weyl group structure for SL_n twisted by `tau`, the action of the
/// coset representative on the character lattice (rank n−1).
///
/// The torsion part is computed from the lattice alone: with σ = tau, let L
/// be the saturation of (σ − 1)X. Then L is the character lattice of T/C°,
/// and (T/C°)^σ has character group L/(σ − 1)L, whose order is the product
/// of the Smith invariants of (σ − 1) restricted to L.
pub fn coset_weyl_structure(
    n: usize,
    tau: &LatticeAutomorphism,
) -> Result<CosetWeylReport, LatticeError> {
    if tau.rank() + 1 != n {
        return Err(LatticeError::RankMismatch {
            expected: n - 1,
            actual: tau.rank(),
        });
    }
    tau.order(10_000)?;
    let r = tau.rank();

    let mut fixed = 0usize;
    let sn = crate::permkit::symmetric_group(n, factorial(n)).expect("S_n within bound");
    for w in sn.elements() {
        let wl = LatticeAutomorphism::weyl(w);
        if wl.compose(tau) == tau.compose(&wl) {
            fixed += 1;
        }
    }

    let mut sigma_minus_one = tau.matrix.clone();
    for (i, row) in sigma_minus_one.iter_mut().enumerate().take(r) {
        row[i] -= BigInt::one();
    }
    let snf = smith_normal_form(&sigma_minus_one);
    let rank_l = snf.rank();
    // basis of L: first rank_l columns of P⁻¹
    let basis: IntMatrix = (0..r)
        .map(|i| {
            (0..rank_l)
                .map(|j| snf.row_transform_inv[i][j].clone())
                .collect()
        })
        .collect();
    // coordinates of σ·basis in the P⁻¹ basis: P·σ·B
    let coords = int_mul(&snf.row_transform, &int_mul(&tau.matrix, &basis));
    debug_assert!(coords[rank_l..]
        .iter()
        .all(|row| row.iter().all(|x| x.is_zero())));
    let mut restricted_minus_one: IntMatrix = coords[..rank_l].to_vec();
    for (i, row) in restricted_minus_one.iter_mut().enumerate() {
        row[i] -= BigInt::one();
    }
    let inner = smith_normal_form(&restricted_minus_one);
    if inner.diagonal.iter().any(|d| d.is_zero()) {
        // σ has a fixed vector inside its own image: impossible for finite order
        return Err(LatticeError::NonFiniteOrder(0));
    }
    let torsion_invariants: Vec<BigInt> =
        inner.diagonal.into_iter().filter(|d| !d.is_one()).collect();
    let torsion_order = torsion_invariants
        .iter()
        .fold(BigInt::one(), |acc, d| acc * d);
    let total_order = &torsion_order * BigInt::from(fixed);
    Ok(CosetWeylReport {
        n,
        fixed_weyl_order: fixed,
        torsion_invariants,
        torsion_order,
        total_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.diagonal, big(&[2, 6, 12]));
        let s = smith_normal_form(&im(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal, big(&[1, 6]));
        let s = smith_normal_form(&im(&[&[0, 0], &[0, 0]]));
        assert_eq!(s.rank(), 0);
        let s = smith_normal_form(&im(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(s.diagonal, big(&[1, 0]));
    }

    #[test]
    fn transforms_are_inverse() {
        let m = im(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let s = smith_normal_form(&m);
        assert_eq!(
            int_mul(&s.row_transform, &s.row_transform_inv),
            int_identity(3)
        );
    }

    #[test]
    fn outer_automorphism_is_an_involution_commuting_with_w0() {
        for n in 2..=5 {
            let tau = LatticeAutomorphism::sl_n_outer(n);
            assert_eq!(tau.order(10).unwrap(), if n == 2 { 1 } else { 2 });
        }
    }

    #[test]
    fn coset_weyl_examples() {
        let r2 = coset_weyl_structure(2, &LatticeAutomorphism::sl_n_outer(2)).unwrap();
        assert_eq!(r2.fixed_weyl_order, 2);
        assert_eq!(r2.torsion_order, BigInt::one());

        // rank difference n-1-k with k = floor(n/2) gives (Z/2)^1 at n = 3
        let r3 = coset_weyl_structure(3, &LatticeAutomorphism::sl_n_outer(3)).unwrap();
        assert_eq!(r3.torsion_invariants, big(&[2]));
        assert_eq!(r3.fixed_weyl_order, 2);

        for n in 2..=5usize {
            let id = coset_weyl_structure(n, &LatticeAutomorphism::identity(n - 1)).unwrap();
            assert_eq!(id.torsion_order, BigInt::one());
            assert_eq!(id.total_order, BigInt::from(factorial(n)));
        }
    }

    #[test]
    fn outer_twist_torsion_matches_rank_difference() {
        for n in 2..=6usize {
            let k = n / 2;
            let rep = coset_weyl_structure(n, &LatticeAutomorphism::sl_n_outer(n)).unwrap();
            assert_eq!(
                rep.torsion_order,
                BigInt::from(1u64 << (n - 1 - k)),
                "n={n}"
            );
            // centralizer of w0 in S_n is the hyperoctahedral group of rank k
            assert_eq!(rep.fixed_weyl_order, (1 << k) * factorial(k), "n={n}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            LatticeAutomorphism::from_i64(&[vec![2, 0], vec![0, 1]]).unwrap_err(),
            LatticeError::NotUnimodular
        );
        let shear = LatticeAutomorphism::from_i64(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(matches!(
            coset_weyl_structure(3, &shear),
            Err(LatticeError::NonFiniteOrder(_))
        ));
        assert!(matches!(
            coset_weyl_structure(4, &shear),
            Err(LatticeError::RankMismatch { .. })
        ));
    }
}

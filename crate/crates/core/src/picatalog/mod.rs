//! Predicted Galois groups of walk elements, realized as permutation groups
//! on the eigenvalues of each scenario's representation.
//!
//! Point labels are fixed per constructor and documented there. A Frobenius
//! cycle type is only comparable with a group's cycle types when both act on
//! the same number of points, so every group here has degree equal to the
//! dimension of the representation that produces the characteristic polynomial.

pub mod lattice;

pub use lattice::{
    coset_weyl_structure, smith_normal_form, CosetWeylReport, IntMatrix, LatticeAutomorphism,
    LatticeError, SmithForm,
};

use crate::permkit::{
    direct_product, enumerate, symmetric_group, wreath, EnumeratedGroup, PermError, Permutation,
    DEFAULT_BOUND,
};

#[derive(Clone, Debug)]
pub struct PredictedGroup {
    pub name: String,
    pub group: EnumeratedGroup,
}

impl PredictedGroup {
    /// Number of points, equal to the characteristic-polynomial degree.
    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

fn perm_from_fn(n: usize, f: impl Fn(usize) -> usize) -> Permutation {
    Permutation::new((0..n).map(f).collect()).expect("constructed map is a bijection")
}

/// S_n on the n eigenvalues of a generic element of SL_n.
pub fn pi_sl_n(n: usize) -> Result<PredictedGroup, PermError> {
    if n < 2 {
        return Err(PermError::InvalidParameter("n must be at least 2".into()));
    }
    Ok(PredictedGroup {
        name: format!("sl({n})"),
        group: symmetric_group(n, DEFAULT_BOUND)?,
    })
}

/// Identity coset of SL_n ⋊ ⟨τ⟩ in GL_{2n}: ρ(A) = diag(A, A^{-T}) has
/// eigenvalues λ_i (point i) and λ_i⁻¹ (point n+i), and S_n moves both
/// halves together.
pub fn pi_sl_n_tau_identity(n: usize) -> Result<PredictedGroup, PermError> {
    if n < 2 {
        return Err(PermError::InvalidParameter("n must be at least 2".into()));
    }
    let m = 2 * n;
    let lift = |p: &Permutation| {
        perm_from_fn(m, |x| {
            if x < n {
                p.apply(x)
            } else {
                n + p.apply(x - n)
            }
        })
    };
    let base = symmetric_group(n, DEFAULT_BOUND)?;
    let gens: Vec<Permutation> = base.generators().iter().map(lift).collect();
    Ok(PredictedGroup {
        name: format!("sl_tau({n})/e"),
        group: enumerate(m, &gens, DEFAULT_BOUND)?,
    })
}

// Points of the τ-coset action for n = 2r: pair j owns points 4j..4j+4,
// laid out as (a_j,+), (a_j,−), (b_j,+), (b_j,−). For ρ(A·τ) the eigenvalues
// are ±√μ_j (block a_j) and ±1/√μ_j (block b_j), where μ_j, 1/μ_j are the
// eigenvalues of A·A^{-T}.
fn tau_point(j: usize, b: bool, minus: bool) -> usize {
    4 * j + 2 * usize::from(b) + usize::from(minus)
}

fn tau_pair_generators(r: usize) -> Vec<Permutation> {
    let m = 4 * r;
    let mut gens = Vec::new();
    for j in 0..r {
        // a_j ↔ b_j, keeping signs
        gens.push(perm_from_fn(m, |x| if x / 4 == j { x ^ 2 } else { x }));
    }
    if r >= 2 {
        gens.push(perm_from_fn(m, |x| match x / 4 {
            0 => x + 4,
            1 => x - 4,
            _ => x,
        }));
        gens.push(perm_from_fn(m, |x| (x + 4) % m));
    }
    gens
}

fn check_even(n: usize) -> Result<usize, PermError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(PermError::InvalidParameter(format!(
            "the outer coset action is defined for even n only, got {n}"
        )));
    }
    Ok(n / 2)
}

/// (Z/2) wr_Ω W_r on 4r points: every Ω-block {+,−} flips independently and
/// W_r = (Z/2) wr S_r permutes the r pairs, swapping a_j ↔ b_j.
/// Order 2^{2r}·2^r·r!.
pub fn pi_sl_n_tau(n: usize) -> Result<PredictedGroup, PermError> {
    let r = check_even(n)?;
    let m = 4 * r;
    let mut gens = tau_pair_generators(r);
    for j in 0..r {
        for b in [false, true] {
            let p = tau_point(j, b, false);
            gens.push(perm_from_fn(m, |x| {
                if x == p {
                    p + 1
                } else if x == p + 1 {
                    p
                } else {
                    x
                }
            }));
        }
    }
    Ok(PredictedGroup {
        name: format!("sl_tau({n})/tau"),
        group: enumerate(m, &gens, DEFAULT_BOUND)?,
    })
}

/// Sign of g on the products ∏_j (√μ_j − 1/√μ_j). If g sends (a_j,+) to
/// (a_i,s) then δ_j ↦ s·δ_i; if to (b_i,s) then δ_j ↦ −s·δ_i.
fn pair_difference_sign(g: &Permutation, r: usize) -> i32 {
    let mut sign = 1;
    for j in 0..r {
        let img = g.apply(tau_point(j, false, false));
        let to_b = (img / 2) % 2 == 1;
        let minus = img % 2 == 1;
        if to_b != minus {
            sign = -sign;
        }
    }
    sign
}

/// The τ-coset group once the square roots are tied pairwise: √μ_j and
/// 1/√μ_j have product 1, so only the simultaneous sign flip of a_j and b_j
/// survives, giving (Z/2)^r ⋊ W_r of order 4^r·r!. Further,
/// ∏_j (√μ_j − 1/√μ_j)² = (−1)^r·det(Aᵗ − A) is a rational square times
/// (−1)^r, so for even r the group drops to the kernel of the sign
/// [`pair_difference_sign`] (order 4^r·r!/2).
pub fn pi_sl_n_tau_paired(n: usize) -> Result<PredictedGroup, PermError> {
    let r = check_even(n)?;
    let m = 4 * r;
    let mut gens = tau_pair_generators(r);
    for j in 0..r {
        gens.push(perm_from_fn(m, |x| if x / 4 == j { x ^ 1 } else { x }));
    }
    let full = enumerate(m, &gens, DEFAULT_BOUND)?;
    let group = if r % 2 == 0 {
        full.subgroup_where(|g| pair_difference_sign(g, r) == 1)?
    } else {
        full
    };
    Ok(PredictedGroup {
        name: format!("sl_tau({n})/tau-paired"),
        group,
    })
}

/// Identity coset of SL_n^d ⋊ ⟨shift⟩: the d factors are independent,
/// giving S_n^d on d blocks of n points.
pub fn pi_sl_power_identity(n: usize, d: usize) -> Result<PredictedGroup, PermError> {
    if n < 2 || d < 1 {
        return Err(PermError::InvalidParameter("need n ≥ 2 and d ≥ 1".into()));
    }
    let sn = symmetric_group(n, DEFAULT_BOUND)?;
    let factors = vec![sn; d];
    Ok(PredictedGroup {
        name: format!("sl_power({n},{d})/e"),
        group: direct_product(&factors, DEFAULT_BOUND)?,
    })
}

/// Non-identity cosets of SL_n^d ⋊ ⟨shift⟩. Point j·d + k stands for
/// ζ_d^k·α_j, where α_j is a fixed d-th root of the j-th eigenvalue of the
/// d-fold product and ∏ α_j = 1. The rotation kernel (Z/d)^{n−1} turns block
/// j forward and block j+1 back, S_n moves blocks rigidly, and each unit u
/// of Z/d sends k ↦ u·k in every block.
pub fn pi_sl_power_cyclic(n: usize, d: usize) -> Result<PredictedGroup, PermError> {
    if n < 2 || d < 2 {
        return Err(PermError::InvalidParameter("need n ≥ 2 and d ≥ 2".into()));
    }
    let m = n * d;
    let mut gens = Vec::new();
    for j in 0..n - 1 {
        gens.push(perm_from_fn(m, |x| {
            let (b, k) = (x / d, x % d);
            if b == j {
                b * d + (k + 1) % d
            } else if b == j + 1 {
                b * d + (k + d - 1) % d
            } else {
                x
            }
        }));
    }
    gens.push(perm_from_fn(m, |x| match x / d {
        0 => x + d,
        1 => x - d,
        _ => x,
    }));
    gens.push(perm_from_fn(m, |x| (x + d) % m));
    for u in 2..d {
        if num_integer::gcd(u, d) == 1 {
            gens.push(perm_from_fn(m, |x| (x / d) * d + (u * (x % d)) % d));
        }
    }
    Ok(PredictedGroup {
        name: format!("sl_power({n},{d})/shift"),
        group: enumerate(m, &gens, DEFAULT_BOUND)?,
    })
}

/// S_n wr gal on n·d points: block b (points b·n .. b·n+n) holds the
/// eigenvalues of the b-th Galois conjugate.
pub fn pi_restriction_of_scalars(
    n: usize,
    gal: &EnumeratedGroup,
) -> Result<PredictedGroup, PermError> {
    if n < 2 {
        return Err(PermError::InvalidParameter("n must be at least 2".into()));
    }
    if !gal.is_transitive() {
        return Err(PermError::InvalidParameter(
            "Galois action must be transitive".into(),
        ));
    }
    let sn = symmetric_group(n, DEFAULT_BOUND)?;
    Ok(PredictedGroup {
        name: format!("res({n},{})", gal.degree()),
        group: wreath(&sn, gal, DEFAULT_BOUND)?,
    })
}

//! Brute force over small prime fields: enumerate the reduction of a
//! generated group mod p, split it by coset, and count regular semisimple
//! elements by the factorization pattern of their characteristic polynomial.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmat::PrimeFieldMatrix;
use crate::modpoly::{distinct_degree_pattern, is_prime, CycleType};
use crate::permkit::EnumeratedGroup;
use crate::walker::{CosetLabel, GeneratorSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinFieldError {
    #[error("group mod {p} exceeds the enumeration bound {bound}")]
    GroupTooLarge { p: u64, bound: usize },
    #[error("bad prime {0}: must be an odd prime at which every generator reduces to an invertible matrix")]
    BadPrime(u64),
    #[error("reduction mod {0} identifies elements of different cosets")]
    CosetCollision(u64),
}

/// The group generated by the reductions of `gens` mod `p`, one element list
/// per coset label, each list sorted.
pub fn enumerate_mod_p(
    gens: &GeneratorSet,
    p: u64,
    bound: usize,
) -> Result<Vec<Vec<PrimeFieldMatrix>>, FinFieldError> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(FinFieldError::BadPrime(p));
    }
    let mut reduced = Vec::with_capacity(gens.len());
    for (g, l) in gens.generators() {
        let r = g.reduce_mod_p(p).map_err(|_| FinFieldError::BadPrime(p))?;
        if r.determinant() == 0 {
            return Err(FinFieldError::BadPrime(p));
        }
        reduced.push((r, *l));
    }
    let cg = gens.component_group();
    let id = PrimeFieldMatrix::identity(p, gens.dim());
    let mut seen: HashMap<PrimeFieldMatrix, CosetLabel> = HashMap::new();
    seen.insert(id.clone(), 0);
    let mut queue = VecDeque::from([(id, 0)]);
    while let Some((x, lx)) = queue.pop_front() {
        for (g, lg) in &reduced {
            let y = x.mul(g);
            let ly = cg.mul(lx, *lg);
            match seen.get(&y) {
                Some(&l) if l != ly => return Err(FinFieldError::CosetCollision(p)),
                Some(_) => {}
                None => {
                    if seen.len() >= bound {
                        return Err(FinFieldError::GroupTooLarge { p, bound });
                    }
                    seen.insert(y.clone(), ly);
                    queue.push_back((y, ly));
                }
            }
        }
    }
    let mut cosets = vec![Vec::new(); cg.order()];
    for (m, l) in seen {
        cosets[l].push(m);
    }
    for c in &mut cosets {
        c.sort_by(|a, b| a.entries().cmp(b.entries()));
    }
    Ok(cosets)
}

/// Counts of regular semisimple elements of one coset by θ value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetCensus {
    pub p: u64,
    pub coset: CosetLabel,
    pub total: usize,
    pub rs_count: usize,
    pub type_counts: BTreeMap<CycleType, usize>,
}

impl CosetCensus {
    pub fn rs_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.rs_count as f64 / self.total as f64
        }
    }
}

/// θ of a matrix over F_p: the factorization pattern of its characteristic
/// polynomial, which must be the `multiplicity`-th power of a squarefree
/// polynomial, with every part repeated `multiplicity` times.
pub fn theta(m: &PrimeFieldMatrix, multiplicity: u32) -> Option<CycleType> {
    let cp = m.char_poly();
    let core = if multiplicity == 1 {
        Some(cp)
    } else {
        cp.squarefree_root(multiplicity)
    }?;
    distinct_degree_pattern(&core)
        .ok()
        .map(|t| t.inflate(multiplicity))
}

pub fn census(
    elements: &[PrimeFieldMatrix],
    coset: CosetLabel,
    p: u64,
    multiplicity: u32,
) -> CosetCensus {
    let mut type_counts = BTreeMap::new();
    let mut rs_count = 0;
    for m in elements {
        if let Some(t) = theta(m, multiplicity) {
            rs_count += 1;
            *type_counts.entry(t).or_insert(0) += 1;
        }
    }
    CosetCensus {
        p,
        coset,
        total: elements.len(),
        rs_count,
        type_counts,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityStatus {
    Ok,
    /// A type of the target group never occurs among rs elements.
    ZeroDensity,
    /// An observed type the target group does not contain.
    OutsideTarget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub p: u64,
    pub coset: CosetLabel,
    pub cycle_type: CycleType,
    pub count: usize,
    pub rs_count: usize,
    pub total: usize,
    pub density_rs: f64,
    pub density_coset: f64,
    /// Frequency of this type in the target group, |U|/|W|.
    pub weyl_fraction: f64,
    pub flagged: bool,
    pub status: DensityStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub rows: Vec<DensityRow>,
    /// Smallest coset-relative density over target types and primes.
    pub min_density: f64,
    /// Smallest C with rs_fraction(p) ≥ 1 − C/p at every listed prime.
    pub fitted_c: f64,
}

impl DensityReport {
    pub fn violations(&self) -> impl Iterator<Item = &DensityRow> {
        self.rows.iter().filter(|r| r.flagged)
    }
}

/// Per-type densities of each census against the target's cycle types.
pub fn density_report(censuses: &[CosetCensus], target: &EnumeratedGroup) -> DensityReport {
    let dist = crate::permkit::to_f64_distribution(&target.type_distribution());
    let mut rows = Vec::new();
    let mut min_density = f64::INFINITY;
    let mut fitted_c: f64 = 0.0;
    for c in censuses {
        fitted_c = fitted_c.max(c.p as f64 * (1.0 - c.rs_fraction()));
        let mut types: Vec<&CycleType> = dist.keys().chain(c.type_counts.keys()).collect();
        types.sort();
        types.dedup();
        for t in types {
            let count = c.type_counts.get(t).copied().unwrap_or(0);
            let weyl_fraction = dist.get(t).copied().unwrap_or(0.0);
            let density_coset = if c.total == 0 {
                0.0
            } else {
                count as f64 / c.total as f64
            };
            let density_rs = if c.rs_count == 0 {
                0.0
            } else {
                count as f64 / c.rs_count as f64
            };
            let status = if weyl_fraction == 0.0 {
                DensityStatus::OutsideTarget
            } else if count == 0 {
                DensityStatus::ZeroDensity
            } else {
                DensityStatus::Ok
            };
            if weyl_fraction > 0.0 {
                min_density = min_density.min(density_coset);
            }
            rows.push(DensityRow {
                p: c.p,
                coset: c.coset,
                cycle_type: t.clone(),
                count,
                rs_count: c.rs_count,
                total: c.total,
                density_rs,
                density_coset,
                weyl_fraction,
                flagged: status != DensityStatus::Ok,
                status,
            });
        }
    }
    if !min_density.is_finite() {
        min_density = 0.0;
    }
    DensityReport {
        rows,
        min_density,
        fitted_c,
    }
}
